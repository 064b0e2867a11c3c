//! Velocity and displacement of the Lévy-driven Langevin equation
//!
//! ```text
//! small noise:     dv = −A v dt + ε dl,     dx = v dt
//! large friction:  dV = −γA V dt + dL,      dX = γ V dt
//! ```
//!
//! Both are integrated exactly for a driver that is linear between its
//! events (an exponential integrator), so compound Poisson drivers are
//! reproduced to rounding error and grid-sampled drivers only carry the error
//! of holding the driver constant inside a step.

mod driver;
mod exact;

use std::ops::ControlFlow;

pub use driver::{DriverEvent, DriverPath, DriverStream};
pub use exact::{brute_force_extremum_time, extremum_time_exact, integrated_ou_cp_exact, local_extremum_time};

use crate::error::{invalid, Result};
use crate::paths::{Breakpoint, CadlagPath, Interpolation};

/// A uniform grid of `n_steps` steps on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    n_steps: usize,
}

impl GridSpec {
    pub fn new(n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(invalid("grid_steps", "the grid needs at least one step"));
        }
        Ok(Self { n_steps })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn step(&self, horizon: f64) -> f64 {
        horizon / self.n_steps as f64
    }

    /// Node `k`; the last node is exactly `horizon`.
    pub fn time(&self, k: usize, horizon: f64) -> f64 {
        if k >= self.n_steps {
            horizon
        } else {
            horizon * k as f64 / self.n_steps as f64
        }
    }
}

/// Which of the two equivalent forms is integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseForm {
    SmallNoise { eps: f64 },
    LargeFriction { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangevinSpec {
    friction: f64,
    form: NoiseForm,
    v0: f64,
    x0: f64,
    horizon: f64,
}

impl LangevinSpec {
    pub fn new(friction: f64, form: NoiseForm, v0: f64, x0: f64, horizon: f64) -> Result<Self> {
        if !(friction > 0.0 && friction.is_finite()) {
            return Err(invalid("friction_A", format!("{friction} must be positive and finite")));
        }
        match form {
            NoiseForm::SmallNoise { eps } if !(eps >= 0.0 && eps.is_finite()) => {
                return Err(invalid("eps", format!("{eps} must be finite and non-negative")));
            }
            NoiseForm::LargeFriction { gamma } if !(gamma >= 0.0 && gamma.is_finite()) => {
                return Err(invalid("gamma", format!("{gamma} must be finite and non-negative")));
            }
            _ => {}
        }
        if !(v0.is_finite() && x0.is_finite()) {
            return Err(invalid("v0/x0", "initial conditions must be finite"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(invalid("horizon_T", format!("{horizon} must be positive and finite")));
        }
        Ok(Self {
            friction,
            form,
            v0,
            x0,
            horizon,
        })
    }

    pub fn small_noise(friction: f64, eps: f64, v0: f64, x0: f64, horizon: f64) -> Result<Self> {
        Self::new(friction, NoiseForm::SmallNoise { eps }, v0, x0, horizon)
    }

    pub fn large_friction(friction: f64, gamma: f64, v0: f64, x0: f64, horizon: f64) -> Result<Self> {
        Self::new(friction, NoiseForm::LargeFriction { gamma }, v0, x0, horizon)
    }

    pub fn friction(&self) -> f64 {
        self.friction
    }

    pub fn form(&self) -> NoiseForm {
        self.form
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    fn coefficients(&self) -> Coefficients {
        match self.form {
            NoiseForm::SmallNoise { eps } => Coefficients {
                decay: self.friction,
                noise: eps,
                gain: 1.0,
            },
            NoiseForm::LargeFriction { gamma } => Coefficients {
                decay: gamma * self.friction,
                noise: 1.0,
                gain: gamma,
            },
        }
    }
}

/// `γ = ε^{−α}`.
pub fn time_change_map(eps: f64, alpha: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("eps", format!("{eps} must be positive and finite")));
    }
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(invalid("alpha", format!("{alpha} is not in (0, 2]")));
    }
    Ok(eps.powf(-alpha))
}

/// `dv = −decay·v dt + noise·dl`, `dx = gain·v dt`.
#[derive(Debug, Clone, Copy)]
struct Coefficients {
    decay: f64,
    noise: f64,
    gain: f64,
}

/// State at a node of the integration: the velocity jumps at driver events,
/// the displacement is continuous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    pub t: f64,
    pub v_left: f64,
    pub v: f64,
    pub x: f64,
    /// Driver value `l_t`.
    pub l: f64,
}

impl Coefficients {
    /// Advances `(v, x)` over `h` with the driver moving at rate `drift`.
    fn flow(&self, v: &mut f64, x: &mut f64, drift: f64, h: f64) {
        if h <= 0.0 {
            return;
        }
        let kh = self.decay * h;
        // φ₁ = ∫₀ʰ e^{−κs} ds and φ₂ = ∫₀ʰ φ₁(s) ds
        let (decay, phi1, phi2) = if kh < 1e-2 {
            let phi1 = h * (1.0 - kh / 2.0 * (1.0 - kh / 3.0 * (1.0 - kh / 4.0 * (1.0 - kh / 5.0))));
            let phi2 = h * h * (0.5 - kh / 6.0 * (1.0 - kh / 4.0 * (1.0 - kh / 5.0 * (1.0 - kh / 6.0))));
            ((-kh).exp(), phi1, phi2)
        } else {
            let phi1 = -(-kh).exp_m1() / self.decay;
            ((-kh).exp(), phi1, (h - phi1) / self.decay)
        };
        let push = self.noise * drift;
        *x += self.gain * (*v * phi1 + push * phi2);
        *v = *v * decay + push * phi1;
    }
}

/// Integrates along the merged node set of the grid and the driver events,
/// calling `visit` at every node (and at `t = 0`) until it breaks.
fn walk<I, F>(spec: &LangevinSpec, drift: f64, events: I, grid: &GridSpec, mut visit: F)
where
    I: IntoIterator<Item = DriverEvent>,
    F: FnMut(&NodeState) -> ControlFlow<()>,
{
    let c = spec.coefficients();
    let horizon = spec.horizon;
    let mut events = events.into_iter().peekable();
    let mut state = NodeState {
        t: 0.0,
        v_left: spec.v0,
        v: spec.v0,
        x: spec.x0,
        l: 0.0,
    };
    if visit(&state).is_break() {
        return;
    }
    let mut k = 1;
    let mut jumps = 0.0;
    loop {
        let grid_t = (k <= grid.n_steps()).then(|| grid.time(k, horizon));
        let event_t = events.peek().map(|e| e.t).filter(|&t| t <= horizon);
        let t = match (grid_t, event_t) {
            (Some(g), Some(e)) => g.min(e),
            (Some(g), None) => g,
            (None, Some(e)) => e,
            (None, None) => return,
        };
        let (mut v, mut x) = (state.v, state.x);
        c.flow(&mut v, &mut x, drift, t - state.t);
        let v_left = v;
        while let Some(e) = events.next_if(|e| e.t == t) {
            v += c.noise * e.size;
            jumps += e.size;
        }
        if grid_t == Some(t) {
            k += 1;
        }
        state = NodeState {
            t,
            v_left,
            v,
            x,
            l: drift * t + jumps,
        };
        if visit(&state).is_break() {
            return;
        }
    }
}

/// Velocity, displacement and driver of one integrated path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub velocity: CadlagPath,
    pub position: CadlagPath,
    pub driver: CadlagPath,
}

fn trajectory(spec: &LangevinSpec, driver: &DriverPath, grid: &GridSpec) -> Result<Trajectory> {
    check_horizon(spec, driver)?;
    let mut v = Vec::new();
    let mut x = Vec::new();
    let mut l = Vec::new();
    walk(spec, driver.drift(), driver.events().iter().copied(), grid, |s| {
        v.push(Breakpoint {
            t: s.t,
            left: s.v_left,
            right: s.v,
        });
        x.push(Breakpoint::continuous(s.t, s.x));
        let l_left = l.last().map_or(0.0, |p: &Breakpoint| p.right + driver.drift() * (s.t - p.t));
        l.push(Breakpoint {
            t: s.t,
            left: if s.t == 0.0 { 0.0 } else { l_left },
            right: s.l,
        });
        ControlFlow::Continue(())
    });
    Ok(Trajectory {
        velocity: CadlagPath::new(v, Interpolation::Linear, spec.horizon)?,
        position: CadlagPath::new(x, Interpolation::Linear, spec.horizon)?,
        driver: CadlagPath::new(l, Interpolation::Linear, spec.horizon)?,
    })
}

fn check_horizon(spec: &LangevinSpec, driver: &DriverPath) -> Result<()> {
    if (driver.horizon() - spec.horizon).abs() > 1e-12 * spec.horizon {
        return Err(crate::Error::HorizonMismatch {
            left: spec.horizon,
            right: driver.horizon(),
        });
    }
    Ok(())
}

/// `(v^ε, x^ε)` on the grid plus the driver's event times.
pub fn simulate_vx(spec: &LangevinSpec, driver: &DriverPath, grid: &GridSpec) -> Result<Trajectory> {
    if !matches!(spec.form, NoiseForm::SmallNoise { .. }) {
        return Err(invalid("noise_form", "simulate_vx integrates the small-noise form"));
    }
    trajectory(spec, driver, grid)
}

/// `(V^γ, X^γ)` on the grid plus the driver's event times.
pub fn simulate_large_friction(spec: &LangevinSpec, driver: &DriverPath, grid: &GridSpec) -> Result<Trajectory> {
    if !matches!(spec.form, NoiseForm::LargeFriction { .. }) {
        return Err(invalid("noise_form", "simulate_large_friction integrates the large-friction form"));
    }
    trajectory(spec, driver, grid)
}

/// Either form.
pub fn simulate(spec: &LangevinSpec, driver: &DriverPath, grid: &GridSpec) -> Result<Trajectory> {
    trajectory(spec, driver, grid)
}

/// Node states at the requested times (sorted, within the horizon), with the
/// requested times added to the integration nodes.
pub fn states_at(spec: &LangevinSpec, driver: &DriverPath, grid: &GridSpec, times: &[f64]) -> Result<Vec<NodeState>> {
    check_horizon(spec, driver)?;
    if times.windows(2).any(|w| !(w[0] < w[1])) || times.iter().any(|&t| !(t > 0.0 && t <= spec.horizon)) {
        return Err(invalid("times", "must be increasing within (0, horizon]"));
    }
    let mut events: Vec<DriverEvent> = driver.events().to_vec();
    events.extend(times.iter().map(|&t| DriverEvent { t, size: 0.0 }));
    events.sort_by(|a, b| a.t.total_cmp(&b.t));
    let mut out = Vec::with_capacity(times.len());
    let mut next = 0;
    walk(spec, driver.drift(), events, grid, |s| {
        if next < times.len() && s.t == times[next] {
            out.push(*s);
            next += 1;
        }
        if next == times.len() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(out)
}

/// `inf{t : x_t > level}` for the displacement interpolated linearly between
/// integration nodes, stopping at the first passage. Driver events are
/// consumed lazily, so a [`DriverStream`] is sampled only up to the passage.
pub fn first_passage_streaming<I>(spec: &LangevinSpec, drift: f64, events: I, grid: &GridSpec, level: f64) -> Option<f64>
where
    I: IntoIterator<Item = DriverEvent>,
{
    let mut hit = None;
    let mut prev: Option<(f64, f64)> = None;
    walk(spec, drift, events, grid, |s| {
        if s.x > level {
            hit = Some(match prev {
                None => 0.0,
                Some((t0, x0)) => (t0 + (level - x0) / (s.x - x0) * (s.t - t0)).clamp(t0, s.t),
            });
            return ControlFlow::Break(());
        }
        prev = Some((s.t, s.x));
        ControlFlow::Continue(())
    });
    hit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{LevyLaw, StableParams};
    use crate::paths::{first_passage, uniform_distance};
    use crate::quadrature::{integrate, QuadConfig};
    use crate::rng::path_rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn grid_nodes() {
        let g = GridSpec::new(3).unwrap();
        assert_eq!(g.time(3, 0.3), 0.3);
        assert_eq!(g.time(0, 0.3), 0.0);
        assert!(GridSpec::new(0).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(LangevinSpec::small_noise(0.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(LangevinSpec::small_noise(1.0, -1.0, 0.0, 0.0, 1.0).is_err());
        assert!(LangevinSpec::large_friction(1.0, -1.0, 0.0, 0.0, 1.0).is_err());
        assert!(LangevinSpec::large_friction(1.0, 1.0, f64::NAN, 0.0, 1.0).is_err());
        assert!(LangevinSpec::large_friction(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn time_change_examples() {
        assert_eq!(time_change_map(1.0, 1.3).unwrap(), 1.0);
        assert!(close(time_change_map(0.1, 2.0).unwrap(), 100.0, 1e-9));
        assert!(close(time_change_map(0.5, 1.5).unwrap(), 2f64.powf(1.5), 1e-12));
        assert!(time_change_map(0.0, 1.5).is_err());
    }

    #[test]
    fn deterministic_decay() {
        let spec = LangevinSpec::small_noise(2.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        let tr = simulate_vx(&spec, &DriverPath::zero(1.0).unwrap(), &GridSpec::new(7).unwrap()).unwrap();
        assert!(close(tr.velocity.terminal_value(), (-2.0f64).exp(), 1e-15));
        assert!(close(tr.position.terminal_value(), (1.0 - (-2.0f64).exp()) / 2.0, 1e-15));

        let spec = LangevinSpec::small_noise(2.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let tr = simulate_vx(&spec, &DriverPath::zero(1.0).unwrap(), &GridSpec::new(7).unwrap()).unwrap();
        assert!(tr.velocity.breakpoints().iter().all(|b| b.left == 0.0 && b.right == 0.0));
        assert!(tr.position.breakpoints().iter().all(|b| b.right == 0.0));
    }

    #[test]
    fn form_is_checked() {
        let lf = LangevinSpec::large_friction(1.0, 10.0, 0.0, 0.0, 1.0).unwrap();
        let sn = LangevinSpec::small_noise(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let d = DriverPath::zero(1.0).unwrap();
        let g = GridSpec::new(2).unwrap();
        assert!(simulate_vx(&lf, &d, &g).is_err());
        assert!(simulate_large_friction(&sn, &d, &g).is_err());
        assert!(simulate_vx(&sn, &DriverPath::zero(2.0).unwrap(), &g).is_err());
    }

    fn one_jump_closed_form(t: f64) -> f64 {
        if t < 0.5 {
            0.0
        } else {
            1.0 - (-(t - 0.5)).exp()
        }
    }

    #[test]
    fn one_jump_driver_is_exact_at_nodes() {
        let spec = LangevinSpec::small_noise(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let driver = DriverPath::single_jump(1.0, 0.5, 1.0).unwrap();
        let tr = simulate_vx(&spec, &driver, &GridSpec::new(10).unwrap()).unwrap();
        for b in tr.position.breakpoints() {
            assert!(close(b.right, one_jump_closed_form(b.t), 1e-15), "t={}", b.t);
        }
        // jumps of v coincide with the driver's
        let jumps: Vec<_> = tr.velocity.jumps().map(|b| (b.t, b.right - b.left)).collect();
        assert_eq!(jumps, vec![(0.5, 1.0)]);
    }

    #[test]
    fn grid_convergence_second_order() {
        let spec = LangevinSpec::small_noise(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        // jump off the grid: placed at a node, so the error comes from the
        // linear interpolation between nodes
        let driver = DriverPath::single_jump(1.0, 0.5, 1.0).unwrap();
        let err = |n: usize| {
            let tr = simulate_vx(&spec, &driver, &GridSpec::new(n).unwrap()).unwrap();
            (0..=997)
                .map(|k| {
                    let t = k as f64 / 997.0;
                    (tr.position.value_at(t).unwrap() - one_jump_closed_form(t)).abs()
                })
                .fold(0.0, f64::max)
        };
        let mut last = err(5);
        for n in [10, 20, 40, 80] {
            let e = err(n);
            assert!(e <= last / 2.0, "n={n}: {e} vs {last}");
            last = e;
        }
    }

    #[test]
    fn large_friction_deterministic() {
        let spec = LangevinSpec::large_friction(1.0, 100.0, 1.0, 0.3, 0.1).unwrap();
        let tr = simulate_large_friction(&spec, &DriverPath::zero(0.1).unwrap(), &GridSpec::new(10).unwrap()).unwrap();
        let ax = spec.friction() * tr.position.terminal_value();
        assert!(close(ax, 0.3 + 0.999_954_600_070_237_5, 1e-12), "{ax}");

        let frozen = LangevinSpec::large_friction(1.0, 0.0, 1.0, 0.3, 1.0).unwrap();
        let tr = simulate_large_friction(
            &frozen,
            &DriverPath::single_jump(1.0, 0.4, 2.0).unwrap(),
            &GridSpec::new(4).unwrap(),
        )
        .unwrap();
        assert!(tr.position.breakpoints().iter().all(|b| b.right == 0.3));
        assert_eq!(tr.velocity.terminal_value(), 3.0);
    }

    #[test]
    fn initial_position_is_an_additive_shift() {
        let law = LevyLaw::Stable(StableParams::symmetric(1.5, 1.0).unwrap());
        let grid = GridSpec::new(200).unwrap();
        let driver = DriverPath::sample(&law, 1.0, &grid, &mut path_rng(9, 0)).unwrap();
        let at = |x0| {
            let spec = LangevinSpec::large_friction(2.0, 30.0, 0.0, x0, 1.0).unwrap();
            simulate_large_friction(&spec, &driver, &grid).unwrap().position
        };
        let shifted = at(1.5).map_values(|x| x - 1.5).unwrap();
        assert!(uniform_distance(&shifted, &at(0.0)).unwrap() < 1e-12);
    }

    #[test]
    fn solution_formula_for_large_friction() {
        // AX_t = Ax₀ + v₀(1 − e^{−γAt}) + Σ J_k (1 − e^{−γA(t − τ_k)})
        let (a, gamma, v0, x0) = (1.7, 12.0, -0.4, 0.25);
        let e = |t, size| DriverEvent { t, size };
        let driver = DriverPath::new(1.0, 0.0, vec![e(0.2, 1.0), e(0.35, -0.5), e(0.8, 2.0)]).unwrap();
        let spec = LangevinSpec::large_friction(a, gamma, v0, x0, 1.0).unwrap();
        let tr = simulate_large_friction(&spec, &driver, &GridSpec::new(13).unwrap()).unwrap();
        for b in tr.position.breakpoints() {
            let t = b.t;
            let k = gamma * a;
            let mut ax = a * x0 + v0 * (1.0 - (-k * t).exp());
            for ev in driver.events().iter().filter(|ev| ev.t <= t) {
                ax += ev.size * (1.0 - (-k * (t - ev.t)).exp());
            }
            assert!(close(a * b.right, ax, 1e-13), "t={t}");
        }
    }

    #[test]
    fn drift_between_events_is_exact() {
        // l_t = d·t: v_t = (εd/A)(1 − e^{−At}), x_t = (εd/A)(t − (1 − e^{−At})/A)
        let (a, eps, d) = (3.0, 0.5, 2.0);
        for n in [1, 3] {
            let spec = LangevinSpec::small_noise(a, eps, 0.0, 0.0, 1.0).unwrap();
            let driver = DriverPath::new(1.0, d, Vec::new()).unwrap();
            let tr = simulate_vx(&spec, &driver, &GridSpec::new(n).unwrap()).unwrap();
            let v = eps * d / a * (1.0 - (-a).exp());
            let x = eps * d / a * (1.0 - (1.0 - (-a).exp()) / a);
            assert!(close(tr.velocity.terminal_value(), v, 1e-14));
            assert!(close(tr.position.terminal_value(), x, 1e-14));
        }
        // tiny decay: series branch against the κ → 0 limit
        let spec = LangevinSpec::large_friction(1.0, 1e-9, 0.0, 0.0, 1.0).unwrap();
        let tr = simulate_large_friction(&spec, &DriverPath::new(1.0, 1.0, Vec::new()).unwrap(), &GridSpec::new(1).unwrap()).unwrap();
        assert!(close(tr.velocity.terminal_value(), 1.0, 1e-8));
        assert!(close(tr.position.terminal_value(), 0.5e-9, 1e-17));
    }

    #[test]
    fn integration_by_parts_representation() {
        // v_t = v₀e^{−At} + εl_t − εA∫₀ᵗ e^{−A(t−s)} l_s ds
        let law = LevyLaw::Stable(StableParams::new(1.3, 0.4, 1.0).unwrap());
        let grid = GridSpec::new(64).unwrap();
        let driver = DriverPath::sample(&law, 1.0, &grid, &mut path_rng(2, 0)).unwrap();
        let (a, eps, v0) = (1.5, 0.7, 0.3);
        let spec = LangevinSpec::small_noise(a, eps, v0, 0.0, 1.0).unwrap();
        let tr = simulate_vx(&spec, &driver, &grid).unwrap();
        let cfg = QuadConfig::default();
        for t in [19.0 / 64.0, 35.0 / 64.0, 1.0] {
            // l is piecewise constant: integrate panel by panel
            let mut breaks = vec![0.0];
            breaks.extend(driver.events().iter().map(|e| e.t).filter(|&s| s < t));
            breaks.push(t);
            let mut conv = 0.0;
            for w in breaks.windows(2) {
                let level = driver.value_at(w[0]);
                conv += integrate(|s| (-a * (t - s)).exp() * level, w[0], w[1], &cfg).unwrap().value;
            }
            let v = v0 * (-a * t).exp() + eps * driver.value_at(t) - eps * a * conv;
            assert!(close(tr.velocity.value_at(t).unwrap(), v, 1e-10), "t={t}");
        }
    }

    #[test]
    fn coupling_through_the_time_change() {
        // x^ε on [0, T/ε^α] driven by l and X^γ on [0, T] driven by ε·l_{·/ε^α}
        let (eps, alpha, a, horizon) = (0.2, 1.5, 1.3, 1.0);
        let gamma = time_change_map(eps, alpha).unwrap();
        let long = horizon / eps.powf(alpha);
        let e = |t, size| DriverEvent { t, size };
        let l = DriverPath::new(long, 0.1, vec![e(0.7, 1.0), e(3.1, -2.0), e(7.5, 0.4)]).unwrap();
        let small = simulate_vx(
            &LangevinSpec::small_noise(a, eps, 0.0, 0.0, long).unwrap(),
            &l,
            &GridSpec::new(40).unwrap(),
        )
        .unwrap();
        let big = simulate_large_friction(
            &LangevinSpec::large_friction(a, gamma, 0.0, 0.0, horizon).unwrap(),
            &l.time_changed(eps, alpha).unwrap(),
            &GridSpec::new(40).unwrap(),
        )
        .unwrap();
        for b in big.position.breakpoints() {
            let x_small = small.position.value_at((b.t / eps.powf(alpha)).min(long)).unwrap();
            assert!(close(b.right, x_small, 1e-12), "t={}: {} vs {x_small}", b.t, b.right);
        }
    }

    #[test]
    fn streaming_passage_matches_path() {
        let law = LevyLaw::Stable(StableParams::symmetric(1.5, 1.0).unwrap());
        let grid = GridSpec::new(500).unwrap();
        let spec = LangevinSpec::large_friction(1.0, 50.0, 0.0, 0.0, 5.0).unwrap();
        let mut found = 0;
        for i in 0..30 {
            let driver = DriverPath::sample(&law, 5.0, &grid, &mut path_rng(4, i)).unwrap();
            let tr = simulate_large_friction(&spec, &driver, &grid).unwrap();
            let mut rng = path_rng(4, i);
            let stream = DriverStream::new(&law, 5.0, &grid, &mut rng).unwrap();
            let streamed = first_passage_streaming(&spec, stream.drift(), stream, &grid, 1.0);
            assert_eq!(streamed, first_passage(&tr.position, 1.0));
            found += streamed.is_some() as usize;
        }
        assert!(found > 5);
    }

    #[test]
    fn states_at_requested_times() {
        let spec = LangevinSpec::small_noise(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let driver = DriverPath::single_jump(1.0, 0.5, 1.0).unwrap();
        let s = states_at(&spec, &driver, &GridSpec::new(3).unwrap(), &[0.5, 0.77]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].l, 1.0);
        assert!(close(s[1].x, one_jump_closed_form(0.77), 1e-15));
        assert!(states_at(&spec, &driver, &GridSpec::new(3).unwrap(), &[0.5, 0.4]).is_err());
    }
}
