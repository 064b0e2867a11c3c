//! Flat `key=value` experiment configuration.
//!
//! Blank lines and `#` comments are ignored. Output CSVs echo the complete
//! configuration as `# config: key=value` lines; when such lines are present
//! in an input only they are read, so any output file can be fed back as a
//! configuration to reproduce it.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::dynamics::{DriverPath, GridSpec, LangevinSpec, NoiseForm};
use crate::error::{invalid, Error, Result};
use crate::levy::{CompoundPoissonPath, LevyDecomposition, LevyLaw, LevyTriplet, StableParams};

pub const CONFIG_PREFIX: &str = "config:";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    Stable,
    Brownian,
    /// `l_t = drift_mu·t`.
    Drift,
    /// A single jump of `jump_size` at `jump_time` plus `drift_mu·t`.
    UnitJump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriverMode {
    /// Exact stable increments per grid step.
    Grid,
    /// Jumps above `jump_threshold_a` at their exact times, the rest as a
    /// Gaussian of matched variance per step.
    Decomposed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Eps,
    Gamma,
}

macro_rules! keyword_enum {
    ($ty:ty, $($variant:path => $name:literal),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $name),+ })
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(format!("unknown value {other:?}")),
                }
            }
        }
    };
}

keyword_enum!(LawKind, LawKind::Stable => "stable", LawKind::Brownian => "brownian", LawKind::Drift => "drift", LawKind::UnitJump => "unit_jump");
keyword_enum!(DriverMode, DriverMode::Grid => "grid", DriverMode::Decomposed => "decomposed");
keyword_enum!(FormKind, FormKind::Eps => "eps", FormKind::Gamma => "gamma");

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub law: LawKind,
    pub alpha: f64,
    pub beta: f64,
    pub scale_c: f64,
    pub sigma: f64,
    pub drift_mu: f64,
    pub jump_time: f64,
    pub jump_size: f64,
    pub driver_mode: DriverMode,
    pub jump_threshold_a: f64,
    pub friction_a: f64,
    pub noise_form: FormKind,
    pub eps: f64,
    pub gamma: f64,
    pub v0: f64,
    pub x0: f64,
    pub horizon_t: f64,
    pub grid_steps: usize,
    pub m1_mesh: usize,
    pub quad_nodes: usize,
    pub t_max: f64,
    /// Adds the whole-line M1 distance to `m1-sweep`.
    pub m1_whole_line: bool,
    pub m1_start_time: f64,
    pub n_paths: usize,
    pub eps_list: Vec<f64>,
    pub gamma_list: Vec<f64>,
    pub level_a: f64,
    pub delta_list: Vec<f64>,
    pub exceedance_delta: f64,
    pub cf_times: Vec<f64>,
    pub cf_weights: Vec<f64>,
    pub extremum_grid_step: f64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            law: LawKind::Stable,
            alpha: 1.5,
            beta: 0.0,
            scale_c: 1.0,
            sigma: 1.0,
            drift_mu: 0.0,
            jump_time: 0.5,
            jump_size: 1.0,
            driver_mode: DriverMode::Grid,
            jump_threshold_a: 0.1,
            friction_a: 1.0,
            noise_form: FormKind::Gamma,
            eps: 0.1,
            gamma: 100.0,
            v0: 0.0,
            x0: 0.0,
            horizon_t: 1.0,
            grid_steps: 1000,
            m1_mesh: 200,
            quad_nodes: 64,
            t_max: 5.0,
            m1_whole_line: false,
            m1_start_time: 0.0,
            n_paths: 100,
            eps_list: vec![0.1, 0.05],
            gamma_list: vec![10.0, 100.0],
            level_a: 1.0,
            delta_list: vec![0.1, 0.05, 0.01],
            exceedance_delta: 0.25,
            cf_times: vec![1.0],
            cf_weights: vec![1.0],
            extremum_grid_step: 1e-4,
            seed: 0,
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| Error::Parse {
        line,
        reason: format!("{key}: {e}"),
    })
}

fn parse_list(key: &str, value: &str, line: usize) -> Result<Vec<f64>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse_value(key, v.trim(), line)).collect()
}

impl ExperimentConfig {
    /// `key=value` pairs in a fixed order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("law", self.law.to_string()),
            ("alpha", self.alpha.to_string()),
            ("beta", self.beta.to_string()),
            ("scale_c", self.scale_c.to_string()),
            ("sigma", self.sigma.to_string()),
            ("drift_mu", self.drift_mu.to_string()),
            ("jump_time", self.jump_time.to_string()),
            ("jump_size", self.jump_size.to_string()),
            ("driver_mode", self.driver_mode.to_string()),
            ("jump_threshold_a", self.jump_threshold_a.to_string()),
            ("friction_A", self.friction_a.to_string()),
            ("noise_form", self.noise_form.to_string()),
            ("eps", self.eps.to_string()),
            ("gamma", self.gamma.to_string()),
            ("v0", self.v0.to_string()),
            ("x0", self.x0.to_string()),
            ("horizon_T", self.horizon_t.to_string()),
            ("grid_steps", self.grid_steps.to_string()),
            ("m1_mesh", self.m1_mesh.to_string()),
            ("quad_nodes", self.quad_nodes.to_string()),
            ("T_max", self.t_max.to_string()),
            ("m1_whole_line", self.m1_whole_line.to_string()),
            ("m1_start_time", self.m1_start_time.to_string()),
            ("n_paths", self.n_paths.to_string()),
            ("eps_list", join(&self.eps_list)),
            ("gamma_list", join(&self.gamma_list)),
            ("level_a", self.level_a.to_string()),
            ("delta_list", join(&self.delta_list)),
            ("exceedance_Delta", self.exceedance_delta.to_string()),
            ("cf_times", join(&self.cf_times)),
            ("cf_weights", join(&self.cf_weights)),
            ("extremum_grid_step", self.extremum_grid_step.to_string()),
            ("seed", self.seed.to_string()),
        ]
    }

    /// Plain configuration file text.
    pub fn to_text(&self) -> String {
        self.to_pairs().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Comment lines (without the leading `#`) embedding the configuration.
    pub fn header_lines(&self) -> Vec<String> {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{CONFIG_PREFIX} {k}={v}"))
            .collect()
    }

    /// Parses configuration text, starting from the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let embedded = text.lines().any(|l| {
            l.trim_start()
                .strip_prefix('#')
                .is_some_and(|c| c.trim_start().starts_with(CONFIG_PREFIX))
        });
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let body = if embedded {
                match line.strip_prefix('#').and_then(|c| c.trim_start().strip_prefix(CONFIG_PREFIX)) {
                    Some(body) => body.trim(),
                    None => continue,
                }
            } else {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                line
            };
            let (key, value) = body.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                reason: format!("expected key=value, found {body:?}"),
            })?;
            cfg.set(key.trim(), value.trim(), idx + 1)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "law" => self.law = parse_value(key, value, line)?,
            "alpha" => self.alpha = parse_value(key, value, line)?,
            "beta" => self.beta = parse_value(key, value, line)?,
            "scale_c" => self.scale_c = parse_value(key, value, line)?,
            "sigma" => self.sigma = parse_value(key, value, line)?,
            "drift_mu" => self.drift_mu = parse_value(key, value, line)?,
            "jump_time" => self.jump_time = parse_value(key, value, line)?,
            "jump_size" => self.jump_size = parse_value(key, value, line)?,
            "driver_mode" => self.driver_mode = parse_value(key, value, line)?,
            "jump_threshold_a" => self.jump_threshold_a = parse_value(key, value, line)?,
            "friction_A" => self.friction_a = parse_value(key, value, line)?,
            "noise_form" => self.noise_form = parse_value(key, value, line)?,
            "eps" => self.eps = parse_value(key, value, line)?,
            "gamma" => self.gamma = parse_value(key, value, line)?,
            "v0" => self.v0 = parse_value(key, value, line)?,
            "x0" => self.x0 = parse_value(key, value, line)?,
            "horizon_T" => self.horizon_t = parse_value(key, value, line)?,
            "grid_steps" => self.grid_steps = parse_value(key, value, line)?,
            "m1_mesh" => self.m1_mesh = parse_value(key, value, line)?,
            "quad_nodes" => self.quad_nodes = parse_value(key, value, line)?,
            "T_max" => self.t_max = parse_value(key, value, line)?,
            "m1_whole_line" => self.m1_whole_line = parse_value(key, value, line)?,
            "m1_start_time" => self.m1_start_time = parse_value(key, value, line)?,
            "n_paths" => self.n_paths = parse_value(key, value, line)?,
            "eps_list" => self.eps_list = parse_list(key, value, line)?,
            "gamma_list" => self.gamma_list = parse_list(key, value, line)?,
            "level_a" => self.level_a = parse_value(key, value, line)?,
            "delta_list" => self.delta_list = parse_list(key, value, line)?,
            "exceedance_Delta" => self.exceedance_delta = parse_value(key, value, line)?,
            "cf_times" => self.cf_times = parse_list(key, value, line)?,
            "cf_weights" => self.cf_weights = parse_list(key, value, line)?,
            "extremum_grid_step" => self.extremum_grid_step = parse_value(key, value, line)?,
            "seed" => self.seed = parse_value(key, value, line)?,
            other => {
                return Err(Error::Parse {
                    line,
                    reason: format!("unknown key {other:?}"),
                })
            }
        }
        Ok(())
    }

    /// Range checks shared by every command.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("{v} must be positive and finite")))
            }
        };
        let finite = |name: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("{v} must be finite")))
            }
        };
        let all_positive = |name: &'static str, v: &[f64]| v.iter().try_for_each(|&x| positive(name, x));
        if self.law == LawKind::Stable {
            StableParams::new(self.alpha, self.beta, self.scale_c)?;
        }
        positive("sigma", self.sigma)?;
        finite("drift_mu", self.drift_mu)?;
        finite("jump_size", self.jump_size)?;
        if !(self.jump_threshold_a > 0.0 && self.jump_threshold_a <= 1.0) {
            return Err(invalid("jump_threshold_a", format!("{} is not in (0, 1]", self.jump_threshold_a)));
        }
        positive("friction_A", self.friction_a)?;
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(invalid("eps", format!("{} must be finite and non-negative", self.eps)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("{} must be finite and non-negative", self.gamma)));
        }
        finite("v0", self.v0)?;
        finite("x0", self.x0)?;
        positive("horizon_T", self.horizon_t)?;
        if !(self.jump_time > 0.0 && self.jump_time <= self.horizon_t) {
            return Err(invalid("jump_time", format!("{} is not in (0, horizon_T]", self.jump_time)));
        }
        for (name, v) in [
            ("grid_steps", self.grid_steps),
            ("m1_mesh", self.m1_mesh),
            ("quad_nodes", self.quad_nodes),
            ("n_paths", self.n_paths),
        ] {
            if v == 0 {
                return Err(invalid(name, "must be positive"));
            }
        }
        positive("T_max", self.t_max)?;
        if !(self.m1_start_time >= 0.0 && self.m1_start_time < self.horizon_t) {
            return Err(invalid("m1_start_time", format!("{} is not in [0, horizon_T)", self.m1_start_time)));
        }
        all_positive("eps_list", &self.eps_list)?;
        all_positive("gamma_list", &self.gamma_list)?;
        positive("level_a", self.level_a)?;
        all_positive("delta_list", &self.delta_list)?;
        if self.delta_list.iter().any(|&d| d > self.horizon_t) {
            return Err(invalid("delta_list", "window lengths cannot exceed horizon_T"));
        }
        if !(self.exceedance_delta >= 0.0 && self.exceedance_delta.is_finite()) {
            return Err(invalid("exceedance_Delta", "must be finite and non-negative"));
        }
        if self.cf_times.is_empty() || self.cf_times.len() != self.cf_weights.len() {
            return Err(invalid("cf_times", "need as many cf_weights as cf_times, at least one"));
        }
        if !(self.cf_times[0] > 0.0) || self.cf_times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("cf_times", "must be positive and increasing"));
        }
        self.cf_weights.iter().try_for_each(|&u| finite("cf_weights", u))?;
        positive("extremum_grid_step", self.extremum_grid_step)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid_steps)
    }

    pub fn stable_params(&self) -> Result<StableParams> {
        StableParams::new(self.alpha, self.beta, self.scale_c)
    }

    /// Law of the driver for the random laws; `None` for `unit_jump`.
    pub fn levy_law(&self) -> Result<Option<LevyLaw>> {
        Ok(Some(match self.law {
            LawKind::Stable => match self.driver_mode {
                DriverMode::Grid => LevyLaw::Stable(self.stable_params()?),
                DriverMode::Decomposed => LevyLaw::Decomposed(self.decomposition()?),
            },
            LawKind::Brownian => LevyLaw::brownian(self.sigma)?,
            LawKind::Drift => LevyLaw::Decomposed(LevyTriplet::pure_drift(self.drift_mu)?.decompose(1.0)?),
            LawKind::UnitJump => return Ok(None),
        }))
    }

    /// Threshold split of the stable law at `jump_threshold_a`.
    pub fn decomposition(&self) -> Result<LevyDecomposition> {
        LevyTriplet::stable(&self.stable_params()?).decompose(self.jump_threshold_a)
    }

    /// A driver on `[0, horizon]`.
    pub fn driver<R: Rng + ?Sized>(&self, horizon: f64, grid: &GridSpec, rng: &mut R) -> Result<DriverPath> {
        match self.levy_law()? {
            Some(law) => DriverPath::sample(&law, horizon, grid, rng),
            None => {
                let cp = self.unit_jump_path(horizon)?;
                DriverPath::from_compound_poisson(&cp)
            }
        }
    }

    /// The deterministic one-jump path of `unit_jump`.
    pub fn unit_jump_path(&self, horizon: f64) -> Result<CompoundPoissonPath> {
        CompoundPoissonPath::new(vec![self.jump_time], vec![self.jump_size], self.drift_mu, horizon)
    }

    /// Dynamics from `noise_form`, `eps` or `gamma`.
    pub fn langevin(&self, horizon: f64) -> Result<LangevinSpec> {
        let form = match self.noise_form {
            FormKind::Eps => NoiseForm::SmallNoise { eps: self.eps },
            FormKind::Gamma => NoiseForm::LargeFriction { gamma: self.gamma },
        };
        LangevinSpec::new(self.friction_a, form, self.v0, self.x0, horizon)
    }

    pub fn large_friction(&self, gamma: f64) -> Result<LangevinSpec> {
        LangevinSpec::large_friction(self.friction_a, gamma, self.v0, self.x0, self.horizon_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = ExperimentConfig::parse("# a comment\n\nalpha = 1.2\n  seed=9\n").unwrap();
        assert_eq!(cfg.alpha, 1.2);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn embedded_lines_take_precedence() {
        let cfg = ExperimentConfig {
            alpha: 0.7,
            gamma_list: vec![1.0, 2.5],
            ..ExperimentConfig::default()
        };
        let mut text: String = cfg.header_lines().iter().map(|l| format!("# {l}\n")).collect();
        text.push_str("# horizon=1 interpolation=linear\nt,left,right,kind\n0,0,0,node\n");
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::parse("colour=blue").is_err());
        assert!(ExperimentConfig::parse("alpha").is_err());
        assert!(ExperimentConfig::parse("alpha=abc").is_err());
        assert!(ExperimentConfig::parse("law=levy").is_err());
        let err = ExperimentConfig::parse("seed=1\nn_paths=-3").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn validation() {
        let bad = |text: &str| ExperimentConfig::parse(text).unwrap().validate().is_err();
        assert!(bad("alpha=2.5"));
        assert!(bad("beta=1.5"));
        assert!(bad("grid_steps=0"));
        assert!(bad("jump_threshold_a=0"));
        assert!(bad("gamma_list=10,-1"));
        assert!(bad("cf_times=1,0.5\ncf_weights=1,1"));
        assert!(bad("cf_times=1\ncf_weights=1,1"));
        assert!(bad("m1_start_time=1"));
        assert!(bad("delta_list=2"));
        assert!(!bad("law=brownian\nalpha=7"));
    }

    fn float() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6f64..1e6, 1e-9f64..1e-3, Just(0.0)]
    }

    proptest! {
        #[test]
        fn serialization_is_lossless(
            alpha in float(), gamma in float(), list in prop::collection::vec(float(), 0..5),
            steps in 1usize..1_000_000, seed in any::<u64>(), law in 0usize..4,
        ) {
            let cfg = ExperimentConfig {
                alpha,
                gamma,
                eps_list: list.clone(),
                delta_list: list,
                grid_steps: steps,
                seed,
                law: [LawKind::Stable, LawKind::Brownian, LawKind::Drift, LawKind::UnitJump][law],
                ..ExperimentConfig::default()
            };
            prop_assert_eq!(&ExperimentConfig::parse(&cfg.to_text()).unwrap(), &cfg);
            let embedded: String = cfg.header_lines().iter().map(|l| format!("# {l}\n")).collect();
            prop_assert_eq!(&ExperimentConfig::parse(&embedded).unwrap(), &cfg);
        }
    }
}
