//! First passage of the large-friction displacement over a level and its
//! scaling limit.
//!
//! By the time change `t ↦ t/ε^α`, `ε^α τ_a(x^ε)` has the law of `τ_a(X^γ)`
//! with `γ = ε^{−α}`, so the scaled samples are first passages of `X^γ` on
//! `[0, T]`. As `γ → ∞`, `AX^γ → L`, so `τ_a(X^γ)` tends to the passage of `L`
//! over `aA`.

use crate::dynamics::{first_passage_streaming, time_change_map, DriverStream, GridSpec, LangevinSpec};
use crate::error::{invalid, Error, Result};
use crate::levy::LevyLaw;
use crate::parallel::try_map_indexed;
use crate::rng::{block_stream, path_rng};

use super::brownian_fpt_cdf;

/// Provenance of a set of first-passage samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FptMeta {
    pub eps: Option<f64>,
    pub gamma: f64,
    pub alpha: Option<f64>,
    pub friction: f64,
    pub level: f64,
    pub horizon: f64,
    pub grid_step: f64,
    pub seed: u64,
}

/// First-passage times with `None` for paths that stay below the level up to
/// the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct FptSampleSet {
    samples: Vec<Option<f64>>,
    meta: FptMeta,
}

impl FptSampleSet {
    pub fn new(samples: Vec<Option<f64>>, meta: FptMeta) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("samples", "empty sample set"));
        }
        if samples.iter().flatten().any(|&t| !(0.0..=meta.horizon).contains(&t)) {
            return Err(invalid("samples", format!("passage times must lie in [0, {}]", meta.horizon)));
        }
        Ok(Self { samples, meta })
    }

    pub fn samples(&self) -> &[Option<f64>] {
        &self.samples
    }

    pub fn meta(&self) -> &FptMeta {
        &self.meta
    }

    pub fn n_paths(&self) -> usize {
        self.samples.len()
    }

    pub fn censored(&self) -> usize {
        self.samples.iter().filter(|s| s.is_none()).count()
    }

    pub fn censored_fraction(&self) -> f64 {
        self.censored() as f64 / self.samples.len() as f64
    }

    /// More than half of the paths never passed the level.
    pub fn excessive_censoring(&self) -> bool {
        self.censored_fraction() > 0.5
    }
}

/// Configuration of [`fpt_scaling_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct FptExperiment {
    pub law: LevyLaw,
    pub friction: f64,
    pub level: f64,
    pub eps_list: Vec<f64>,
    pub n_paths: usize,
    pub horizon: f64,
    pub grid: GridSpec,
    pub seed: u64,
}

/// For each ε, `n_paths` samples of `ε^α τ_a(x^ε)` simulated as `τ_a(X^γ)`
/// with `γ = ε^{−α}` on `[0, T]`. Path `i` of the `j`-th ε uses stream
/// `block_stream(j, i)`, so the ε levels are independent.
pub fn fpt_scaling_experiment(exp: &FptExperiment, workers: usize) -> Result<Vec<FptSampleSet>> {
    if !(exp.level > 0.0 && exp.level.is_finite()) {
        return Err(invalid("level_a", format!("{} must be positive", exp.level)));
    }
    if exp.n_paths == 0 {
        return Err(invalid("n_paths", "must be positive"));
    }
    let alpha = exp
        .law
        .stability_index()
        .ok_or_else(|| invalid("law", "the scaling experiment needs a self-similar driver"))?;
    if let LevyLaw::Stable(p) = &exp.law {
        if p.beta() == -1.0 && p.alpha() < 1.0 {
            return Err(invalid("beta", "a subordinator with negative jumps never passes a positive level"));
        }
    }
    exp.eps_list
        .iter()
        .enumerate()
        .map(|(j, &eps)| {
            let gamma = time_change_map(eps, alpha)?;
            let spec = LangevinSpec::large_friction(exp.friction, gamma, 0.0, 0.0, exp.horizon)?;
            let samples = try_map_indexed(workers, exp.n_paths, |i| {
                let mut rng = path_rng(exp.seed, block_stream(j, i));
                let stream = DriverStream::new(&exp.law, exp.horizon, &exp.grid, &mut rng)?;
                let drift = stream.drift();
                Ok::<_, Error>(first_passage_streaming(&spec, drift, stream, &exp.grid, exp.level))
            })?;
            FptSampleSet::new(
                samples,
                FptMeta {
                    eps: Some(eps),
                    gamma,
                    alpha: Some(alpha),
                    friction: exp.friction,
                    level: exp.level,
                    horizon: exp.horizon,
                    grid_step: exp.grid.step(exp.horizon),
                    seed: exp.seed,
                },
            )
        })
        .collect()
}

/// Limit law of `τ_a(X^γ)` for a Brownian driver `σB`: the passage of `B`
/// over `aA/σ`.
pub fn brownian_limit_cdf(level: f64, friction: f64, sigma: f64, t: f64) -> Result<f64> {
    brownian_fpt_cdf(level * friction / sigma, 1.0, t)
}
