//! Driving Lévy laws: stable exponents and parameter conversions, exact
//! increment samplers, and the threshold decomposition into small-jump and
//! compound Poisson parts.

mod decomposition;
mod stable;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub use decomposition::{CompoundPoissonPath, JumpAtom, JumpMeasure, LevyDecomposition, LevyTriplet};
pub use stable::{params_from_levy_measure, StableParams, StableTails, EULER_GAMMA};

use crate::error::{invalid, Result};

/// Law of the driving process `L`.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyLaw {
    Stable(StableParams),
    /// `σ·B` with `B` a standard Brownian motion.
    Brownian {
        sigma: f64,
    },
    /// General triplet, simulated through its threshold decomposition.
    Decomposed(LevyDecomposition),
}

impl LevyLaw {
    pub fn brownian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid("sigma", format!("{sigma} must be positive and finite")));
        }
        Ok(Self::Brownian { sigma })
    }

    pub fn char_exponent(&self, u: f64) -> Complex64 {
        match self {
            Self::Stable(p) => p.char_exponent(u),
            Self::Brownian { sigma } => Complex64::new(-0.5 * sigma * sigma * u * u, 0.0),
            Self::Decomposed(d) => d.triplet().char_exponent(u),
        }
    }

    /// Self-similarity index α (2 for Brownian motion), if the law has one.
    pub fn stability_index(&self) -> Option<f64> {
        match self {
            Self::Stable(p) => Some(p.alpha()),
            Self::Brownian { .. } => Some(2.0),
            Self::Decomposed(_) => None,
        }
    }

    /// Whether increments are exact in law on any grid (no compound Poisson
    /// part to place between nodes).
    pub fn has_exact_increments(&self) -> bool {
        !matches!(self, Self::Decomposed(_))
    }

    /// Increment over `dt` for laws with exact increments; for
    /// [`LevyLaw::Decomposed`] only the continuous (σB + ξ-surrogate) part.
    pub fn sample_increment<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        match self {
            Self::Stable(p) => p.sample_increment(dt, rng),
            Self::Brownian { sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                sigma * dt.sqrt() * z
            }
            Self::Decomposed(d) => d.sample_continuous_increment(dt, rng),
        }
    }
}
