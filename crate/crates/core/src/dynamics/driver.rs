//! Driving paths: a deterministic drift plus a finite, time-ordered list of
//! increments.

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::levy::{CompoundPoissonPath, LevyLaw};
use crate::paths::{Breakpoint, CadlagPath, Interpolation};

use super::GridSpec;

/// An increment of the driver at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverEvent {
    pub t: f64,
    pub size: f64,
}

/// `l_t = drift·t + Σ_{t_k ≤ t} size_k` on `[0, T]`.
///
/// Grid-sampled drivers carry the increment of each step at the step's right
/// end (the driver is constant inside a step); compound Poisson jumps sit at
/// their exact arrival times.
#[derive(Debug, Clone, PartialEq)]
pub struct DriverPath {
    horizon: f64,
    drift: f64,
    events: Vec<DriverEvent>,
}

impl DriverPath {
    /// Event times must be nondecreasing and lie in `(0, horizon]`.
    pub fn new(horizon: f64, drift: f64, events: Vec<DriverEvent>) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(invalid("horizon", format!("{horizon} must be positive and finite")));
        }
        if !drift.is_finite() {
            return Err(invalid("drift", "must be finite"));
        }
        let mut last = 0.0;
        for e in &events {
            if !(e.t > 0.0 && e.t <= horizon && e.t >= last && e.size.is_finite()) {
                return Err(Error::InvalidPath(format!("driver event {e:?} out of order or range")));
            }
            last = e.t;
        }
        Ok(Self { horizon, drift, events })
    }

    /// `l ≡ 0`.
    pub fn zero(horizon: f64) -> Result<Self> {
        Self::new(horizon, 0.0, Vec::new())
    }

    pub fn single_jump(horizon: f64, t: f64, size: f64) -> Result<Self> {
        Self::new(horizon, 0.0, vec![DriverEvent { t, size }])
    }

    /// Increment `k` placed at the end of step `k` of `grid`.
    pub fn from_grid_increments(horizon: f64, grid: &GridSpec, increments: &[f64]) -> Result<Self> {
        if increments.len() != grid.n_steps() {
            return Err(invalid(
                "increments",
                format!("{} increments for {} steps", increments.len(), grid.n_steps()),
            ));
        }
        let events = increments
            .iter()
            .enumerate()
            .map(|(k, &size)| DriverEvent {
                t: grid.time(k + 1, horizon),
                size,
            })
            .collect();
        Self::new(horizon, 0.0, events)
    }

    /// η as a driver; an arrival at `t = 0` is rejected.
    pub fn from_compound_poisson(cp: &CompoundPoissonPath) -> Result<Self> {
        let events = cp
            .arrival_times()
            .iter()
            .zip(cp.jump_sizes())
            .map(|(&t, &size)| DriverEvent { t, size })
            .collect();
        Self::new(cp.horizon(), cp.drift(), events)
    }

    /// Samples a driver for `law` on `grid`.
    pub fn sample<R: Rng + ?Sized>(law: &LevyLaw, horizon: f64, grid: &GridSpec, rng: &mut R) -> Result<Self> {
        let mut stream = DriverStream::new(law, horizon, grid, rng)?;
        let drift = stream.drift();
        let events = stream.by_ref().collect();
        Self::new(horizon, drift, events)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn events(&self) -> &[DriverEvent] {
        &self.events
    }

    /// `l_t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.events.partition_point(|e| e.t <= t);
        self.drift * t + self.events[..n].iter().map(|e| e.size).sum::<f64>()
    }

    /// Time-changed and rescaled driver `s ↦ ε·l_{s/ε^α}` on `[0, ε^α T]`.
    ///
    /// For a strictly α-stable `l` this has the law of `l` itself; it turns
    /// the driver of the small-noise equation into the driver of the
    /// large-friction equation with `γ = ε^{−α}`.
    pub fn time_changed(&self, eps: f64, alpha: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(invalid("eps", format!("{eps} must be positive")));
        }
        let c = eps.powf(alpha);
        let events = self
            .events
            .iter()
            .map(|e| DriverEvent {
                t: (e.t * c).min(self.horizon * c),
                size: eps * e.size,
            })
            .collect();
        Self::new(self.horizon * c, eps * self.drift / c, events)
    }

    /// The driver as a càdlàg path; simultaneous events are merged.
    pub fn to_cadlag(&self) -> CadlagPath {
        let mut points = vec![Breakpoint::continuous(0.0, 0.0)];
        let mut level = 0.0;
        for e in &self.events {
            let last = points.len() - 1;
            if points[last].t == e.t {
                level += e.size;
                points[last].right = self.drift * e.t + level;
            } else {
                let left = self.drift * e.t + level;
                level += e.size;
                points.push(Breakpoint {
                    t: e.t,
                    left,
                    right: self.drift * e.t + level,
                });
            }
        }
        let interp = if self.drift == 0.0 {
            Interpolation::Step
        } else {
            Interpolation::Linear
        };
        if interp == Interpolation::Linear && points[points.len() - 1].t < self.horizon {
            points.push(Breakpoint::continuous(self.horizon, self.drift * self.horizon + level));
        }
        CadlagPath::new(points, interp, self.horizon).expect("a valid driver gives a valid path")
    }
}

/// Lazily sampled driver events, in time order.
///
/// A compound Poisson part is drawn up front; continuous increments are drawn
/// step by step, so consuming a prefix of the stream costs only that prefix.
/// Collecting the whole stream gives exactly [`DriverPath::sample`].
pub struct DriverStream<'a, R: Rng + ?Sized> {
    law: &'a LevyLaw,
    horizon: f64,
    grid: GridSpec,
    step: usize,
    drift: f64,
    jumps: Vec<DriverEvent>,
    next_jump: usize,
    rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> DriverStream<'a, R> {
    pub fn new(law: &'a LevyLaw, horizon: f64, grid: &GridSpec, rng: &'a mut R) -> Result<Self> {
        let (drift, jumps) = match law {
            LevyLaw::Decomposed(d) => {
                let cp = d.sample_compound_poisson_path(horizon, rng)?;
                let jumps = cp
                    .arrival_times()
                    .iter()
                    .zip(cp.jump_sizes())
                    .map(|(&t, &size)| DriverEvent { t, size })
                    .collect();
                (cp.drift(), jumps)
            }
            _ => (0.0, Vec::new()),
        };
        Ok(Self {
            law,
            horizon,
            grid: *grid,
            step: 0,
            drift,
            jumps,
            next_jump: 0,
            rng,
        })
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}

impl<R: Rng + ?Sized> Iterator for DriverStream<'_, R> {
    type Item = DriverEvent;

    fn next(&mut self) -> Option<DriverEvent> {
        let grid_t = (self.step < self.grid.n_steps()).then(|| self.grid.time(self.step + 1, self.horizon));
        if let Some(jump) = self.jumps.get(self.next_jump) {
            if grid_t.is_none_or(|t| jump.t <= t) {
                self.next_jump += 1;
                return Some(*jump);
            }
        }
        let t = grid_t?;
        let size = self.law.sample_increment(self.grid.step(self.horizon), self.rng);
        self.step += 1;
        Some(DriverEvent { t, size })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{JumpAtom, JumpMeasure, LevyTriplet, StableParams};
    use crate::rng::path_rng;

    #[test]
    fn rejects_bad_events() {
        assert!(DriverPath::single_jump(1.0, 0.0, 1.0).is_err());
        assert!(DriverPath::single_jump(1.0, 1.5, 1.0).is_err());
        let e = |t| DriverEvent { t, size: 1.0 };
        assert!(DriverPath::new(1.0, 0.0, vec![e(0.5), e(0.4)]).is_err());
        assert!(DriverPath::new(1.0, 0.0, vec![e(0.5), e(0.5)]).is_ok());
    }

    #[test]
    fn value_and_path_agree() {
        let e = |t, size| DriverEvent { t, size };
        let d = DriverPath::new(2.0, 0.5, vec![e(0.5, 1.0), e(0.5, 2.0), e(1.5, -1.0)]).unwrap();
        let p = d.to_cadlag();
        assert_eq!(p.jumps().count(), 2);
        for t in [0.0, 0.25, 0.5, 0.7, 1.5, 1.9, 2.0] {
            assert!((p.value_at(t).unwrap() - d.value_at(t)).abs() < 1e-15, "t={t}");
        }
        assert!((p.left_limit(0.5).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn time_change_rescales() {
        let d = DriverPath::new(100.0, 0.2, vec![DriverEvent { t: 50.0, size: 3.0 }]).unwrap();
        let c = d.time_changed(0.1, 2.0).unwrap();
        assert!((c.horizon() - 1.0).abs() < 1e-15);
        assert!((c.events()[0].t - 0.5).abs() < 1e-15);
        assert!((c.events()[0].size - 0.3).abs() < 1e-15);
        // ε·l_{s/ε^α} at s = 0.75
        assert!((c.value_at(0.75) - 0.1 * d.value_at(75.0)).abs() < 1e-12);
    }

    #[test]
    fn stream_equals_collected_sample() {
        let law = LevyLaw::Decomposed(
            LevyTriplet::new(0.3, 0.1, JumpMeasure::Atoms(vec![JumpAtom { size: 1.0, rate: 5.0 }]))
                .unwrap()
                .decompose(0.5)
                .unwrap(),
        );
        let grid = GridSpec::new(50).unwrap();
        let full = DriverPath::sample(&law, 2.0, &grid, &mut path_rng(3, 4)).unwrap();
        let mut rng = path_rng(3, 4);
        let stream = DriverStream::new(&law, 2.0, &grid, &mut rng).unwrap();
        assert_eq!(stream.drift(), full.drift());
        let prefix: Vec<_> = stream.take(20).collect();
        assert_eq!(&prefix[..], &full.events()[..20]);
        assert!(full.events().len() > 50);
        assert!(full.events().windows(2).all(|w| w[0].t <= w[1].t));
    }

    #[test]
    fn stable_driver_lives_on_the_grid() {
        let law = LevyLaw::Stable(StableParams::symmetric(1.5, 1.0).unwrap());
        let grid = GridSpec::new(8).unwrap();
        let d = DriverPath::sample(&law, 1.0, &grid, &mut path_rng(0, 0)).unwrap();
        let times: Vec<f64> = d.events().iter().map(|e| e.t).collect();
        assert_eq!(times, (1..=8).map(|k| k as f64 / 8.0).collect::<Vec<_>>());
        assert_eq!(d.drift(), 0.0);
    }
}
