//! Càdlàg paths on `[0, T]`: a breakpoint representation with exact left
//! limits, the completed graph, Skorokhod M1 and uniform distances, and the
//! path functionals used in the limit experiments.

mod functionals;
mod graph;
mod io;

pub use functionals::{first_passage, m1_oscillation_sup, m1_oscillation_sweep, oscillation_m, running_supremum, uniform_distance};
pub use graph::{completed_graph, discrete_m1, m1_distance, m1_whole_line_distance, CompletedGraphPolyline, GraphVertex};

use crate::error::{Error, Result};

/// How a path moves between consecutive breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpolation {
    /// Constant at the right value of the earlier breakpoint.
    Step,
    /// Straight line from the right value of the earlier breakpoint to the
    /// left limit at the later one.
    Linear,
}

impl Interpolation {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Step => "step",
            Self::Linear => "linear",
        }
    }
}

impl std::str::FromStr for Interpolation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "step" => Ok(Self::Step),
            "linear" => Ok(Self::Linear),
            other => Err(Error::InvalidPath(format!("unknown interpolation {other:?}"))),
        }
    }
}

/// Left limit and value of a path at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

impl Breakpoint {
    pub fn continuous(t: f64, value: f64) -> Self {
        Self {
            t,
            left: value,
            right: value,
        }
    }

    pub fn is_jump(&self) -> bool {
        self.left != self.right
    }
}

/// A càdlàg path on `[0, T]`, constant after its last breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct CadlagPath {
    points: Vec<Breakpoint>,
    interpolation: Interpolation,
    horizon: f64,
}

impl CadlagPath {
    /// The first breakpoint must sit at `t = 0` with equal left and right
    /// values; times are strictly increasing and at most `horizon`. Step paths
    /// need `left` at each breakpoint to equal the previous `right`.
    pub fn new(points: Vec<Breakpoint>, interpolation: Interpolation, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidPath(format!("horizon {horizon} must be positive and finite")));
        }
        let first = points.first().ok_or_else(|| Error::InvalidPath("no breakpoints".into()))?;
        if first.t != 0.0 || first.left != first.right {
            return Err(Error::InvalidPath(
                "the first breakpoint must be a continuity point at t = 0".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.t.is_finite() && p.left.is_finite() && p.right.is_finite()) {
                return Err(Error::InvalidPath(format!("non-finite breakpoint {i}: {p:?}")));
            }
            if p.t > horizon {
                return Err(Error::InvalidPath(format!("breakpoint at {} beyond horizon {horizon}", p.t)));
            }
            if i > 0 {
                let prev = &points[i - 1];
                if !(prev.t < p.t) {
                    return Err(Error::InvalidPath(format!("times not increasing at breakpoint {i}")));
                }
                if interpolation == Interpolation::Step && p.left != prev.right {
                    return Err(Error::InvalidPath(format!(
                        "step path: left limit {} at t = {} differs from the previous value {}",
                        p.left, p.t, prev.right
                    )));
                }
            }
        }
        Ok(Self {
            points,
            interpolation,
            horizon,
        })
    }

    pub fn constant(value: f64, horizon: f64) -> Result<Self> {
        Self::new(vec![Breakpoint::continuous(0.0, value)], Interpolation::Step, horizon)
    }

    /// Step path taking `values[i]` on `[times[i], times[i + 1])`; `times[0]`
    /// must be 0.
    pub fn from_step_values(times: &[f64], values: &[f64], horizon: f64) -> Result<Self> {
        check_lengths(times, values)?;
        let mut points = Vec::with_capacity(times.len());
        for (i, (&t, &v)) in times.iter().zip(values).enumerate() {
            let left = if i == 0 { v } else { values[i - 1] };
            points.push(Breakpoint { t, left, right: v });
        }
        Self::new(points, Interpolation::Step, horizon)
    }

    /// Continuous piecewise linear path through `(times[i], values[i])`.
    pub fn from_linear_nodes(times: &[f64], values: &[f64], horizon: f64) -> Result<Self> {
        check_lengths(times, values)?;
        let points = times.iter().zip(values).map(|(&t, &v)| Breakpoint::continuous(t, v)).collect();
        Self::new(points, Interpolation::Linear, horizon)
    }

    /// Piecewise linear path from values on a grid, with increments larger
    /// than `multiple` times the median absolute increment of the surrounding
    /// `window` steps turned into jumps (the path is held flat over the step
    /// and jumps at its right end).
    pub fn from_grid_values(times: &[f64], values: &[f64], horizon: f64, multiple: f64, window: usize) -> Result<Self> {
        check_lengths(times, values)?;
        let incs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let half = window.max(1);
        let mut points = vec![Breakpoint::continuous(times[0], values[0])];
        for (k, &inc) in incs.iter().enumerate() {
            let lo = k.saturating_sub(half);
            let hi = (k + half + 1).min(incs.len());
            let mut local: Vec<f64> = incs[lo..hi].to_vec();
            local.sort_by(f64::total_cmp);
            let scale = local[local.len() / 2];
            let next = values[k + 1];
            if inc > 0.0 && inc > multiple * scale {
                points.push(Breakpoint {
                    t: times[k + 1],
                    left: values[k],
                    right: next,
                });
            } else {
                points.push(Breakpoint::continuous(times[k + 1], next));
            }
        }
        Self::new(points, Interpolation::Linear, horizon)
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.points
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn initial_value(&self) -> f64 {
        self.points[0].right
    }

    /// Value at the horizon.
    pub fn terminal_value(&self) -> f64 {
        self.points[self.points.len() - 1].right
    }

    /// Breakpoints where the path jumps.
    pub fn jumps(&self) -> impl Iterator<Item = &Breakpoint> {
        self.points.iter().filter(|p| p.is_jump())
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if (0.0..=self.horizon).contains(&t) {
            Ok(())
        } else {
            Err(Error::TimeOutOfRange { t, horizon: self.horizon })
        }
    }

    /// Index of the last breakpoint at or before `t`.
    fn segment(&self, t: f64) -> usize {
        self.points.partition_point(|p| p.t <= t) - 1
    }

    fn interpolate(&self, i: usize, t: f64) -> f64 {
        let p = &self.points[i];
        match (self.interpolation, self.points.get(i + 1)) {
            (Interpolation::Linear, Some(q)) => {
                let w = (t - p.t) / (q.t - p.t);
                p.right + w * (q.left - p.right)
            }
            _ => p.right,
        }
    }

    /// `x_t`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.interpolate(self.segment(t), t))
    }

    /// `x_{t−}`, with `x_{0−} = x_0`.
    pub fn left_limit(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let i = self.segment(t);
        if self.points[i].t == t {
            Ok(self.points[i].left)
        } else {
            Ok(self.interpolate(i, t))
        }
    }

    /// The path on `[0, t]`.
    pub fn restrict(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::TimeOutOfRange { t, horizon: self.horizon });
        }
        self.check_time(t)?;
        let i = self.segment(t);
        let mut points = self.points[..=i].to_vec();
        if points[i].t < t {
            let v = self.interpolate(i, t);
            points.push(Breakpoint::continuous(t, v));
        }
        Self::new(points, self.interpolation, t)
    }

    /// `s ↦ x_{t0 + s}` on `[0, t1 − t0]`; the jump at `t0`, if any, is
    /// absorbed into the initial value.
    pub fn window(&self, t0: f64, t1: f64) -> Result<Self> {
        self.check_time(t0)?;
        self.check_time(t1)?;
        if !(t0 < t1) {
            return Err(Error::InvalidPath(format!("empty window [{t0}, {t1}]")));
        }
        let start = self.value_at(t0)?;
        let mut points = vec![Breakpoint::continuous(0.0, start)];
        let i0 = self.segment(t0);
        for p in &self.points[i0 + 1..] {
            if p.t > t1 {
                break;
            }
            points.push(Breakpoint { t: p.t - t0, ..*p });
        }
        let last_t = points[points.len() - 1].t + t0;
        if last_t < t1 && self.interpolation == Interpolation::Linear {
            let v = self.interpolate(self.segment(t1), t1);
            points.push(Breakpoint::continuous(t1 - t0, v));
        }
        Self::new(points, self.interpolation, t1 - t0)
    }

    /// The same path with its terminal value held up to `horizon`.
    pub fn extend_to(&self, horizon: f64) -> Result<Self> {
        if horizon < self.horizon {
            return Err(Error::HorizonMismatch {
                left: self.horizon,
                right: horizon,
            });
        }
        let mut points = self.points.clone();
        let last = points[points.len() - 1];
        if self.interpolation == Interpolation::Linear && last.t < self.horizon {
            points.push(Breakpoint::continuous(self.horizon, last.right));
        }
        Self::new(points, self.interpolation, horizon)
    }

    /// `t ↦ f(x_t)` for an affine, increasing or decreasing `f`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| Breakpoint {
                t: p.t,
                left: f(p.left),
                right: f(p.right),
            })
            .collect();
        Self::new(points, self.interpolation, self.horizon)
    }
}

fn check_lengths(times: &[f64], values: &[f64]) -> Result<()> {
    if times.is_empty() || times.len() != values.len() {
        return Err(Error::InvalidPath(format!("{} times and {} values", times.len(), values.len())));
    }
    Ok(())
}
