//! Joint characteristic function of `AX^γ_{t_k} − L_{t_k}`, k = 1..m.
//!
//! With `x₀ = v₀ = 0`, `AX^γ_t − L_t = −∫₀ᵗ e^{−γA(t−s)} dL_s`, so
//! `E exp(i Σ u_k (AX^γ_{t_k} − L_{t_k})) = exp(Σ_j ∫_{t_{j−1}}^{t_j} Ψ(u_j(s)) ds)`
//! with `u_j(s) = −Σ_{k ≥ j} u_k e^{−γA(t_k − s)}`.

use num_complex::Complex64;

use crate::dynamics::{states_at, DriverPath, GridSpec, LangevinSpec};
use crate::error::{invalid, Result};
use crate::levy::LevyLaw;
use crate::parallel::try_map_indexed;
use crate::quadrature::{integrate_panels, QuadConfig};
use crate::rng::path_rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CfCheckSpec {
    times: Vec<f64>,
    weights: Vec<f64>,
    gamma: f64,
    friction: f64,
    law: LevyLaw,
}

impl CfCheckSpec {
    pub fn new(times: Vec<f64>, weights: Vec<f64>, gamma: f64, friction: f64, law: LevyLaw) -> Result<Self> {
        if times.is_empty() || times.len() != weights.len() {
            return Err(invalid("cf_times", "need m ≥ 1 times and as many weights"));
        }
        if !(times[0] > 0.0) || times.windows(2).any(|w| !(w[0] < w[1])) || times.iter().any(|t| !t.is_finite()) {
            return Err(invalid("cf_times", "times must be increasing, positive and finite"));
        }
        if weights.iter().any(|u| !u.is_finite()) {
            return Err(invalid("cf_weights", "weights must be finite"));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("{gamma} must be positive and finite")));
        }
        if !(friction > 0.0 && friction.is_finite()) {
            return Err(invalid("friction_A", format!("{friction} must be positive and finite")));
        }
        Ok(Self {
            times,
            weights,
            gamma,
            friction,
            law,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn friction(&self) -> f64 {
        self.friction
    }

    pub fn law(&self) -> &LevyLaw {
        &self.law
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.times.clone(), self.weights.clone(), gamma, self.friction, self.law.clone())
    }

    fn is_trivial(&self) -> bool {
        self.weights.iter().all(|&u| u == 0.0)
    }
}

/// The characteristic function by quadrature of the exponent. Each interval
/// `[t_{j−1}, t_j]` is split into `quad_nodes` uniform panels plus panels
/// that resolve the boundary layer of width `1/(γA)` below `t_j`.
pub fn cf_convergence_analytic(spec: &CfCheckSpec, quad_nodes: usize) -> Result<Complex64> {
    if spec.is_trivial() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let rate = spec.gamma * spec.friction;
    let cfg = QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        max_subdivisions: 4000,
    };
    let mut exponent = Complex64::new(0.0, 0.0);
    let mut lo = 0.0;
    for (j, &hi) in spec.times.iter().enumerate() {
        let arg = |s: f64| -> f64 {
            spec.times[j..]
                .iter()
                .zip(&spec.weights[j..])
                .map(|(&tk, &uk)| -uk * (-rate * (tk - s)).exp())
                .sum()
        };
        let mut breaks: Vec<f64> = (0..=quad_nodes.max(1))
            .map(|k| lo + (hi - lo) * k as f64 / quad_nodes.max(1) as f64)
            .collect();
        let mut w = 0.5 / rate;
        while w < hi - lo {
            breaks.push(hi - w);
            w *= 2.0;
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let re = integrate_panels(|s| spec.law.char_exponent(arg(s)).re, &breaks, &cfg)?;
        let im = integrate_panels(|s| spec.law.char_exponent(arg(s)).im, &breaks, &cfg)?;
        exponent += Complex64::new(re.value, im.value);
        lo = hi;
    }
    Ok(exponent.exp())
}

/// Monte Carlo estimate from coupled `(X^γ, L)` paths on `grid` (over
/// `[0, t_m]`), path `i` drawn from stream `i` of `seed`.
pub fn cf_convergence_montecarlo(spec: &CfCheckSpec, n_paths: usize, grid: &GridSpec, seed: u64, workers: usize) -> Result<Complex64> {
    if spec.is_trivial() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if n_paths == 0 {
        return Err(invalid("n_paths", "must be positive"));
    }
    let horizon = spec.times[spec.times.len() - 1];
    let dynamics = LangevinSpec::large_friction(spec.friction, spec.gamma, 0.0, 0.0, horizon)?;
    let terms = try_map_indexed(workers, n_paths, |i| {
        let mut rng = path_rng(seed, i as u64);
        let driver = DriverPath::sample(&spec.law, horizon, grid, &mut rng)?;
        let states = states_at(&dynamics, &driver, grid, &spec.times)?;
        let phase: f64 = states
            .iter()
            .zip(&spec.weights)
            .map(|(s, &u)| u * (spec.friction * s.x - s.l))
            .sum();
        Ok(Complex64::new(phase.cos(), phase.sin()))
    })?;
    let sum: Complex64 = terms.iter().sum();
    Ok(sum / n_paths as f64)
}
