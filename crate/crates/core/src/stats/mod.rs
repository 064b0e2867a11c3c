//! First-passage samples and their comparison with reference laws: the
//! Brownian first-passage CDF, Kolmogorov–Smirnov statistics with censoring,
//! stable CDFs by characteristic-function inversion, and the
//! finite-dimensional characteristic-function check of `AX^γ − L`.

mod cf;
mod fpt;

pub use cf::{cf_convergence_analytic, cf_convergence_montecarlo, CfCheckSpec};
pub use fpt::{brownian_limit_cdf, fpt_scaling_experiment, FptExperiment, FptMeta, FptSampleSet};

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::levy::StableParams;
use crate::quadrature::{integrate, integrate_panels, QuadConfig};

/// `P(τ ≤ t)` from the density `(a/(A√(2π))) s^{−3/2} e^{−a²/(2A²s)}`, the
/// first passage of a standard Brownian motion over `a/A`.
///
/// With `s = a²/(2A²y²)` the integral becomes `(2/√π)∫_{y₀}^∞ e^{−y²} dy`,
/// `y₀ = a/(A√(2t))`, which is smooth and integrated adaptively.
pub fn brownian_fpt_cdf(a: f64, friction: f64, t: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("{a} must be positive and finite")));
    }
    if !(friction > 0.0 && friction.is_finite()) {
        return Err(invalid("A", format!("{friction} must be positive and finite")));
    }
    if !(t >= 0.0) {
        return Err(invalid("t", format!("{t} must be non-negative")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let y0 = a / (friction * (2.0 * t).sqrt());
    // e^{−y²} < 1e−300 past y₀ + 27
    let upper = y0 + 27.0;
    let cfg = QuadConfig {
        abs_tol: 1e-15,
        rel_tol: 1e-10,
        max_subdivisions: 500,
    };
    let r = integrate(|y| (-y * y).exp(), y0, upper, &cfg)?;
    Ok((2.0 / PI.sqrt() * r.value).clamp(0.0, 1.0))
}

/// Outcome of a one-sample KS comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub censored: usize,
}

impl KsResult {
    pub fn censored_fraction(&self) -> f64 {
        self.censored as f64 / self.n as f64
    }
}

/// `sup_{t ≤ T} |F_n(t) − F(t)|` for samples censored at `horizon` (`None`
/// entries), where `F_n` counts passages up to `t` over all `n` samples.
/// Without censoring and with `horizon = ∞` this is the usual statistic.
pub fn ks_statistic(samples: &[Option<f64>], horizon: f64, cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let mut seen: Vec<f64> = samples.iter().flatten().copied().collect();
    let n = samples.len();
    if seen.is_empty() {
        return Err(Error::AllCensored(n));
    }
    if seen.iter().any(|&x| !(x <= horizon)) {
        return Err(invalid("samples", format!("sample beyond the horizon {horizon}")));
    }
    seen.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in seen.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / nf).abs()).max(((i + 1) as f64 / nf - f).abs());
    }
    if horizon.is_finite() {
        d = d.max((seen.len() as f64 / nf - cdf(horizon)).abs());
    }
    Ok(KsResult {
        statistic: d,
        n,
        censored: n - seen.len(),
    })
}

/// `sup_{t ≤ T} |F₁(t) − F₂(t)|` for two samples censored at a common horizon.
pub fn ks_two_sample(a: &[Option<f64>], b: &[Option<f64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("samples", "both samples must be non-empty"));
    }
    let sorted = |s: &[Option<f64>]| {
        let mut v: Vec<f64> = s.iter().flatten().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (x, y) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < x.len() || j < y.len() {
        let t = match (x.get(i), y.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// `1.63/√n`, the asymptotic 99% quantile of `√n·D_n`.
pub fn ks_critical_99(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Distribution function of a strictly stable law at time 1, by Gil-Pelaez
/// inversion `F(x) = 1/2 − π^{−1} ∫₀^∞ Im(e^{−iux} e^{Ψ(u)}) / u du`.
#[derive(Debug, Clone)]
pub struct StableCdf {
    params: StableParams,
    cutoff: f64,
    table_lo: f64,
    table_step: f64,
    table: Vec<f64>,
}

impl StableCdf {
    /// Tabulates on `[−half_width, half_width]` with `nodes` points; values
    /// outside are computed directly.
    pub fn new(params: StableParams, half_width: f64, nodes: usize) -> Result<Self> {
        if !(half_width > 0.0) || nodes < 2 {
            return Err(invalid("table", "need a positive width and at least two nodes"));
        }
        // |e^{Ψ(u)}| = e^{−c u^α} < e^{−40} beyond the cutoff
        let cutoff = (40.0 / params.scale()).powf(1.0 / params.alpha());
        let mut cdf = Self {
            params,
            cutoff,
            table_lo: -half_width,
            table_step: 2.0 * half_width / (nodes - 1) as f64,
            table: Vec::new(),
        };
        cdf.table = (0..nodes)
            .map(|k| cdf.invert(-half_width + k as f64 * cdf.table_step))
            .collect::<Result<_>>()?;
        Ok(cdf)
    }

    /// Direct inversion at `x`.
    pub fn invert(&self, x: f64) -> Result<f64> {
        let p = self.params;
        let integrand = |u: f64| {
            let z = p.char_exponent(u);
            let phase = z.im - u * x;
            z.re.exp() * phase.sin() / u
        };
        // panels shorter than a period of e^{−iux} and of the skew phase
        let period = 2.0 * PI / (x.abs() + 1.0);
        let n = ((self.cutoff / period).ceil() as usize).clamp(8, 20_000);
        let breaks: Vec<f64> = (0..=n).map(|k| self.cutoff * k as f64 / n as f64).collect();
        let cfg = QuadConfig {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_subdivisions: 400,
        };
        let r = integrate_panels(integrand, &breaks, &cfg)?;
        Ok((0.5 - r.value / PI).clamp(0.0, 1.0))
    }

    /// Tabulated value with linear interpolation, or direct inversion outside
    /// the table.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let pos = (x - self.table_lo) / self.table_step;
        if pos < 0.0 || pos >= (self.table.len() - 1) as f64 {
            return self.invert(x);
        }
        let k = pos.floor() as usize;
        let w = pos - k as f64;
        Ok(self.table[k] + w * (self.table[k + 1] - self.table[k]))
    }
}
