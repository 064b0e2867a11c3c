//! Strictly α-stable laws: characteristic exponent, the (c₋, c₊) tail
//! parametrization and an exact increment sampler.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, Open01};

use crate::error::{invalid, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Stable law in the (α, β, c) form with exponent
/// `Ψ(u) = −c|u|^α (1 − iβ sgn(u) tan(πα/2))`, or for α = 1
/// `Ψ(u) = −c|u| (1 + iβ (2/π) sgn(u) ln|u|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
    beta: f64,
    scale: f64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64, scale: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(invalid("alpha", format!("{alpha} is not in (0, 2)")));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(invalid("beta", format!("{beta} is not in [-1, 1]")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("scale", format!("{scale} must be positive and finite")));
        }
        Ok(Self { alpha, beta, scale })
    }

    pub fn symmetric(alpha: f64, scale: f64) -> Result<Self> {
        Self::new(alpha, 0.0, scale)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Characteristic exponent, `E e^{iu l_t} = e^{tΨ(u)}`.
    ///
    /// `Ψ(0) = 0` and `Ψ(−u) = conj Ψ(u)`; the α = 1 branch uses `ln|u|`.
    pub fn char_exponent(&self, u: f64) -> Complex64 {
        if u == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let au = u.abs();
        let sgn = u.signum();
        if self.alpha == 1.0 {
            let m = -self.scale * au;
            Complex64::new(m, m * self.beta * FRAC_2_PI * sgn * au.ln())
        } else {
            let m = -self.scale * au.powf(self.alpha);
            Complex64::new(m, -m * self.beta * sgn * (FRAC_PI_2 * self.alpha).tan())
        }
    }

    /// Lévy measure tails `(c₋, c₊)` that produce this law.
    pub fn tails(&self) -> StableTails {
        let total = self.scale / tail_scale_factor(self.alpha);
        StableTails {
            alpha: self.alpha,
            c_minus: 0.5 * total * (1.0 - self.beta),
            c_plus: 0.5 * total * (1.0 + self.beta),
        }
    }

    /// Lévy–Khinchine drift (truncation `1{|y| ≤ 1}`) matching this law.
    pub fn drift(&self) -> f64 {
        self.tails().drift()
    }

    /// One sample of the increment `l_{t+dt} − l_t`.
    ///
    /// Chambers–Mallows–Stuck. For α ≠ 1 the increment is `(c·dt)^{1/α}` times a
    /// standard variate; for α = 1 the scale `c·dt` enters with the logarithmic
    /// shift, so the increment is exact in law for every `dt ≥ 0`.
    pub fn sample_increment<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        debug_assert!(dt >= 0.0, "negative time step {dt}");
        if dt == 0.0 {
            return 0.0;
        }
        let v = PI * (rng.sample::<f64, _>(Open01) - 0.5);
        let w: f64 = rng.sample(Exp1);
        if self.alpha == 1.0 {
            let sigma = self.scale * dt;
            let half_pi_bv = FRAC_PI_2 + self.beta * v;
            let x = FRAC_2_PI * (half_pi_bv * v.tan() - self.beta * (FRAC_PI_2 * w * v.cos() / half_pi_bv).ln());
            sigma * x + FRAC_2_PI * self.beta * sigma * sigma.ln()
        } else {
            let a = self.alpha;
            let zeta = self.beta * (FRAC_PI_2 * a).tan();
            let shift = zeta.atan() / a;
            let amp = (1.0 + zeta * zeta).powf(0.5 / a);
            let x = amp * (a * (v + shift)).sin() / v.cos().powf(1.0 / a) * ((v - a * (v + shift)).cos() / w).powf((1.0 - a) / a);
            (self.scale * dt).powf(1.0 / a) * x
        }
    }
}

/// Power-law Lévy measure `ν(dy) = c₋|y|^{−1−α} dy` on y < 0 and
/// `c₊ y^{−1−α} dy` on y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableTails {
    alpha: f64,
    c_minus: f64,
    c_plus: f64,
}

impl StableTails {
    pub fn new(alpha: f64, c_minus: f64, c_plus: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(invalid("alpha", format!("{alpha} is not in (0, 2)")));
        }
        if !(c_minus >= 0.0 && c_plus >= 0.0 && c_minus.is_finite() && c_plus.is_finite()) {
            return Err(invalid("c_minus/c_plus", "tail constants must be finite and non-negative"));
        }
        if c_minus + c_plus <= 0.0 {
            return Err(invalid("c_minus/c_plus", "at least one tail constant must be positive"));
        }
        Ok(Self { alpha, c_minus, c_plus })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c_minus(&self) -> f64 {
        self.c_minus
    }

    pub fn c_plus(&self) -> f64 {
        self.c_plus
    }

    /// Drift that makes the Lévy–Khinchine exponent (truncation `1{|y| ≤ 1}`)
    /// coincide with [`StableParams::char_exponent`].
    pub fn drift(&self) -> f64 {
        let skew = self.c_plus - self.c_minus;
        if self.alpha == 1.0 {
            -(1.0 - EULER_GAMMA) * skew
        } else {
            skew / (1.0 - self.alpha)
        }
    }

    pub fn params(&self) -> StableParams {
        let total = self.c_minus + self.c_plus;
        StableParams {
            alpha: self.alpha,
            beta: (self.c_plus - self.c_minus) / total,
            scale: total * tail_scale_factor(self.alpha),
        }
    }

    /// Lévy density at `y ≠ 0`.
    pub fn density(&self, y: f64) -> f64 {
        if y > 0.0 {
            self.c_plus * y.powf(-1.0 - self.alpha)
        } else if y < 0.0 {
            self.c_minus * (-y).powf(-1.0 - self.alpha)
        } else {
            0.0
        }
    }
}

/// `c / (c₋ + c₊)` as a function of α.
fn tail_scale_factor(alpha: f64) -> f64 {
    if alpha == 1.0 {
        FRAC_PI_2
    } else {
        libm::tgamma(2.0 - alpha) / (alpha * (1.0 - alpha)) * (FRAC_PI_2 * alpha).cos()
    }
}

/// `(β, c, μ)` for the power-law measure with constants `c₋, c₊`.
pub fn params_from_levy_measure(c_minus: f64, c_plus: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    let tails = StableTails::new(alpha, c_minus, c_plus)?;
    let p = tails.params();
    Ok((p.beta, p.scale, tails.drift()))
}
