//! Lévy triplets and their split at a jump threshold `a` into a small-jump
//! martingale ξ and a compound Poisson process with drift η.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, Open01, StandardNormal};

use super::stable::{StableParams, StableTails};
use crate::error::{invalid, Error, Result};

/// A jump of fixed size arriving at a fixed rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpAtom {
    pub size: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum JumpMeasure {
    StableTails(StableTails),
    /// Finite measure `Σ rate_k δ_{size_k}`.
    Atoms(Vec<JumpAtom>),
}

/// Lévy triplet `(σ, μ, ν)` with exponent
/// `−σ²u²/2 + iμu + ∫(e^{iuy} − 1 − iuy 1{|y| ≤ 1}) ν(dy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyTriplet {
    sigma: f64,
    drift: f64,
    jumps: JumpMeasure,
}

impl LevyTriplet {
    pub fn new(sigma: f64, drift: f64, jumps: JumpMeasure) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(invalid("sigma", format!("{sigma} must be finite and non-negative")));
        }
        if !drift.is_finite() {
            return Err(invalid("drift", "must be finite"));
        }
        if let JumpMeasure::Atoms(atoms) = &jumps {
            for atom in atoms {
                if !(atom.size != 0.0 && atom.size.is_finite()) || !(atom.rate >= 0.0 && atom.rate.is_finite()) {
                    return Err(invalid("jumps", format!("bad atom {atom:?}")));
                }
            }
        }
        Ok(Self { sigma, drift, jumps })
    }

    /// Triplet of the strictly stable law `p`.
    pub fn stable(p: &StableParams) -> Self {
        let tails = p.tails();
        Self {
            sigma: 0.0,
            drift: tails.drift(),
            jumps: JumpMeasure::StableTails(tails),
        }
    }

    /// Deterministic drift `l_t = μ t`.
    pub fn pure_drift(drift: f64) -> Result<Self> {
        Self::new(0.0, drift, JumpMeasure::Atoms(Vec::new()))
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn jumps(&self) -> &JumpMeasure {
        &self.jumps
    }

    pub fn char_exponent(&self, u: f64) -> Complex64 {
        let gauss = Complex64::new(-0.5 * self.sigma * self.sigma * u * u, 0.0);
        match &self.jumps {
            JumpMeasure::StableTails(tails) => {
                // the stable exponent already carries the drift `tails.drift()`
                gauss + tails.params().char_exponent(u) + Complex64::new(0.0, (self.drift - tails.drift()) * u)
            }
            JumpMeasure::Atoms(atoms) => {
                let mut psi = gauss + Complex64::new(0.0, self.drift * u);
                for atom in atoms {
                    let y = atom.size;
                    let comp = if y.abs() <= 1.0 { u * y } else { 0.0 };
                    psi += atom.rate * Complex64::new((u * y).cos() - 1.0, (u * y).sin() - comp);
                }
                psi
            }
        }
    }

    /// Splits the jump part at `threshold`.
    ///
    /// `a` must lie in (0, 1] and carry no atom of ν at ±a.
    pub fn decompose(&self, threshold: f64) -> Result<LevyDecomposition> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(invalid("threshold", format!("{threshold} is not in (0, 1]")));
        }
        let a = threshold;
        let (intensity, mid_mean, small_var) = match &self.jumps {
            JumpMeasure::StableTails(t) => {
                let alpha = t.alpha();
                let total = t.c_minus() + t.c_plus();
                let skew = t.c_plus() - t.c_minus();
                // ∫_a^1 y^{−α} dy
                let mid = if alpha == 1.0 {
                    -a.ln()
                } else {
                    (1.0 - a.powf(1.0 - alpha)) / (1.0 - alpha)
                };
                (
                    total * a.powf(-alpha) / alpha,
                    skew * mid,
                    total * a.powf(2.0 - alpha) / (2.0 - alpha),
                )
            }
            JumpMeasure::Atoms(atoms) => {
                let mut intensity = 0.0;
                let mut mid = 0.0;
                let mut var = 0.0;
                for atom in atoms {
                    let y = atom.size.abs();
                    if y == a {
                        return Err(invalid("threshold", format!("the jump measure has an atom at ±{a}")));
                    }
                    if y > a {
                        intensity += atom.rate;
                        if y <= 1.0 {
                            mid += atom.rate * atom.size;
                        }
                    } else {
                        var += atom.rate * atom.size * atom.size;
                    }
                }
                (intensity, mid, var)
            }
        };
        Ok(LevyDecomposition {
            triplet: self.clone(),
            threshold: a,
            truncated_drift: self.drift - mid_mean,
            jump_intensity: intensity,
            small_jump_variance: small_var,
        })
    }
}

/// `L = σB + ξ + η`: ξ collects the jumps below the threshold, η is a compound
/// Poisson process (jumps `|y| ≥ a`) with drift `μ_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyDecomposition {
    triplet: LevyTriplet,
    threshold: f64,
    truncated_drift: f64,
    jump_intensity: f64,
    small_jump_variance: f64,
}

impl LevyDecomposition {
    pub fn triplet(&self) -> &LevyTriplet {
        &self.triplet
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// `μ_a = μ − ∫_{a ≤ |y| ≤ 1} y ν(dy)`.
    pub fn truncated_drift(&self) -> f64 {
        self.truncated_drift
    }

    /// `β_a = ν(|y| ≥ a)`.
    pub fn jump_intensity(&self) -> f64 {
        self.jump_intensity
    }

    /// `∫_{|y| < a} y² ν(dy)`, the variance rate of ξ.
    pub fn small_jump_variance(&self) -> f64 {
        self.small_jump_variance
    }

    /// A jump size drawn from ν restricted to `|y| ≥ a`, normalized.
    pub fn sample_jump_size<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.threshold;
        match &self.triplet.jumps {
            JumpMeasure::StableTails(t) => {
                let up = rng.random::<f64>() * (t.c_minus() + t.c_plus()) < t.c_plus();
                let u: f64 = rng.sample(Open01);
                let size = a * u.powf(-1.0 / t.alpha());
                if up {
                    size
                } else {
                    -size
                }
            }
            JumpMeasure::Atoms(atoms) => {
                let mut pick = rng.random::<f64>() * self.jump_intensity;
                let mut last = 0.0;
                for atom in atoms.iter().filter(|at| at.size.abs() > a && at.rate > 0.0) {
                    last = atom.size;
                    if pick < atom.rate {
                        return atom.size;
                    }
                    pick -= atom.rate;
                }
                last
            }
        }
    }

    /// Jump times and sizes of η on `[0, horizon]`.
    pub fn sample_compound_poisson_path<R: Rng + ?Sized>(&self, horizon: f64, rng: &mut R) -> Result<CompoundPoissonPath> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(invalid("horizon", format!("{horizon} must be positive and finite")));
        }
        let mut times = Vec::new();
        let mut sizes = Vec::new();
        if self.jump_intensity > 0.0 {
            let mut t = 0.0;
            loop {
                let gap: f64 = rng.sample(Exp1);
                t += gap / self.jump_intensity;
                if t > horizon {
                    break;
                }
                times.push(t);
                sizes.push(self.sample_jump_size(rng));
            }
        }
        CompoundPoissonPath::new(times, sizes, self.truncated_drift, horizon)
    }

    /// Increment of `σB + ξ` over `dt`, with ξ replaced by a Gaussian of the
    /// same variance.
    pub fn sample_continuous_increment<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        let var = self.triplet.sigma * self.triplet.sigma + self.small_jump_variance;
        if var == 0.0 || dt == 0.0 {
            return 0.0;
        }
        let z: f64 = rng.sample(StandardNormal);
        (var * dt).sqrt() * z
    }
}

/// A realization of η on `[0, T]`: `η_t = Σ_{τ_k ≤ t} J_k + μ_a t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundPoissonPath {
    arrival_times: Vec<f64>,
    jump_sizes: Vec<f64>,
    drift: f64,
    horizon: f64,
}

impl CompoundPoissonPath {
    /// Arrival times must be strictly increasing within `[0, horizon]`.
    pub fn new(arrival_times: Vec<f64>, jump_sizes: Vec<f64>, drift: f64, horizon: f64) -> Result<Self> {
        if arrival_times.len() != jump_sizes.len() {
            return Err(Error::InvalidPath(format!(
                "{} arrival times but {} jump sizes",
                arrival_times.len(),
                jump_sizes.len()
            )));
        }
        if !(horizon > 0.0 && horizon.is_finite()) || !drift.is_finite() {
            return Err(invalid("horizon", "horizon must be positive, drift finite"));
        }
        if arrival_times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPath("arrival times must be strictly increasing".into()));
        }
        if let (Some(&first), Some(&last)) = (arrival_times.first(), arrival_times.last()) {
            if first < 0.0 || last > horizon {
                return Err(Error::InvalidPath(format!("arrival times must lie in [0, {horizon}]")));
            }
        }
        if jump_sizes.iter().any(|j| !j.is_finite()) {
            return Err(Error::InvalidPath("jump sizes must be finite".into()));
        }
        Ok(Self {
            arrival_times,
            jump_sizes,
            drift,
            horizon,
        })
    }

    pub fn arrival_times(&self) -> &[f64] {
        &self.arrival_times
    }

    pub fn jump_sizes(&self) -> &[f64] {
        &self.jump_sizes
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.arrival_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrival_times.is_empty()
    }

    /// Number of arrivals in `[0, t]`.
    pub fn count_until(&self, t: f64) -> usize {
        self.arrival_times.partition_point(|&tau| tau <= t)
    }

    /// `η_t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.count_until(t);
        self.jump_sizes[..n].iter().sum::<f64>() + self.drift * t
    }
}
