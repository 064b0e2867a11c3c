//! Experiment commands. Each command turns an [`ExperimentConfig`] into a set
//! of named CSV files whose `#` header lines carry the full configuration.
//!
//! Path `i` always draws from stream `i` of the configured seed and results
//! are gathered in path order, so output bytes do not depend on the number of
//! workers.

mod config;

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

pub use config::{DriverMode, ExperimentConfig, FormKind, LawKind, CONFIG_PREFIX};

use crate::dynamics::{brute_force_extremum_time, local_extremum_time, simulate, simulate_large_friction, DriverPath};
use crate::error::{invalid, Error, Result};
use crate::levy::{CompoundPoissonPath, LevyLaw};
use crate::parallel::try_map_indexed;
use crate::paths::{m1_distance, m1_oscillation_sweep, m1_whole_line_distance, CadlagPath};
use crate::rng::path_rng;
use crate::stats::{
    brownian_limit_cdf, cf_convergence_analytic, cf_convergence_montecarlo, fpt_scaling_experiment, ks_critical_99, ks_statistic,
    ks_two_sample, CfCheckSpec, FptExperiment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SamplePaths,
    M1Sweep,
    TightnessProbe,
    Fpt,
    CfCheck,
    DecomposeDemo,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::SamplePaths,
        Command::M1Sweep,
        Command::TightnessProbe,
        Command::Fpt,
        Command::CfCheck,
        Command::DecomposeDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SamplePaths => "sample-paths",
            Command::M1Sweep => "m1-sweep",
            Command::TightnessProbe => "tightness-probe",
            Command::Fpt => "fpt",
            Command::CfCheck => "cf-check",
            Command::DecomposeDemo => "decompose-demo",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| invalid("command", format!("unknown command {s:?}")))
    }
}

/// A generated file, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Validates `cfg` and runs `command` on `workers` threads (0 = all cores).
pub fn run(command: Command, cfg: &ExperimentConfig, workers: usize) -> Result<Vec<OutputFile>> {
    cfg.validate()?;
    match command {
        Command::SamplePaths => sample_paths(cfg, workers),
        Command::M1Sweep => m1_sweep(cfg, workers),
        Command::TightnessProbe => tightness_probe(cfg, workers),
        Command::Fpt => fpt(cfg, workers),
        Command::CfCheck => cf_check(cfg, workers),
        Command::DecomposeDemo => decompose_demo(cfg, workers),
    }
}

/// Writes `files` into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        context: "creating output directory",
        path: dir.to_path_buf(),
        source,
    })?;
    for f in files {
        let path = dir.join(&f.name);
        std::fs::write(&path, &f.contents).map_err(|source| Error::Io {
            context: "writing output",
            path,
            source,
        })?;
    }
    Ok(())
}

/// Linear interpolation between order statistics (`sorted` ascending).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn header(command: Command, cfg: &ExperimentConfig, extra: &[String]) -> Vec<String> {
    let mut lines = vec![format!("command: {command}")];
    lines.extend(cfg.header_lines());
    lines.extend(extra.iter().cloned());
    lines
}

fn table(command: Command, cfg: &ExperimentConfig, extra: &[String], columns: &str, rows: &[String]) -> String {
    let mut out = String::new();
    for line in header(command, cfg, extra) {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{columns}");
    for row in rows {
        let _ = writeln!(out, "{row}");
    }
    out
}

fn path_file(name: String, path: &CadlagPath, comments: &[String]) -> Result<OutputFile> {
    let mut buf = Vec::new();
    path.write_csv(&mut buf, comments).map_err(|source| Error::Io {
        context: "formatting path",
        path: name.clone().into(),
        source,
    })?;
    Ok(OutputFile {
        name,
        contents: String::from_utf8(buf).expect("path CSV is UTF-8"),
    })
}

/// `path_NNNN_{velocity,position,driver}.csv` per path.
fn sample_paths(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<OutputFile>> {
    let grid = cfg.grid()?;
    let spec = cfg.langevin(cfg.horizon_t)?;
    let per_path = try_map_indexed(workers, cfg.n_paths, |i| {
        let mut rng = path_rng(cfg.seed, i as u64);
        let driver = cfg.driver(cfg.horizon_t, &grid, &mut rng)?;
        let traj = simulate(&spec, &driver, &grid)?;
        [("velocity", &traj.velocity), ("position", &traj.position), ("driver", &traj.driver)]
            .into_iter()
            .map(|(component, path)| {
                let extra = [format!("path_index={i}"), format!("component={component}")];
                path_file(
                    format!("path_{i:04}_{component}.csv"),
                    path,
                    &header(Command::SamplePaths, cfg, &extra),
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(per_path.into_iter().flatten().collect())
}

/// `d_{M1}(AX^γ, Ax₀ + v₀ + L)` on `[m1_start_time, T]` per path and γ, with
/// every γ driven by the same `L`.
fn m1_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<OutputFile>> {
    if cfg.v0 != 0.0 && cfg.m1_start_time == 0.0 {
        return Err(invalid(
            "m1_start_time",
            "with v0 ≠ 0 the limit jumps at t = 0+; start the window after 0",
        ));
    }
    let grid = cfg.grid()?;
    let (t0, t1) = (cfg.m1_start_time, cfg.horizon_t);
    let clip = |p: &CadlagPath| if t0 > 0.0 { p.window(t0, t1) } else { Ok(p.clone()) };
    let a = cfg.friction_a;
    let per_path = try_map_indexed(workers, cfg.n_paths, |i| {
        let mut rng = path_rng(cfg.seed, i as u64);
        let driver = cfg.driver(cfg.horizon_t, &grid, &mut rng)?;
        let shift = a * cfg.x0 + cfg.v0;
        let limit = clip(&driver.to_cadlag().map_values(|l| l + shift)?)?;
        cfg.gamma_list
            .iter()
            .map(|&gamma| {
                let traj = simulate_large_friction(&cfg.large_friction(gamma)?, &driver, &grid)?;
                let ax = clip(&traj.position.map_values(|x| a * x)?)?;
                let d = m1_distance(&ax, &limit, t1 - t0, cfg.m1_mesh)?;
                let whole = if cfg.m1_whole_line {
                    Some(m1_whole_line_distance(&ax, &limit, cfg.t_max, cfg.quad_nodes, cfg.m1_mesh)?)
                } else {
                    None
                };
                Ok((d, whole))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut path_rows = Vec::new();
    for (i, row) in per_path.iter().enumerate() {
        for (&gamma, &(d, whole)) in cfg.gamma_list.iter().zip(row) {
            path_rows.push(format!("{i},{gamma},{d},{}", cell(whole)));
        }
    }
    let summary_rows: Vec<String> = cfg
        .gamma_list
        .iter()
        .enumerate()
        .map(|(j, &gamma)| {
            let d = sorted(per_path.iter().map(|r| r[j].0).collect());
            let whole = cfg
                .m1_whole_line
                .then(|| quantile(&sorted(per_path.iter().filter_map(|r| r[j].1).collect()), 0.5));
            let mean = d.iter().sum::<f64>() / d.len() as f64;
            format!(
                "{gamma},{},{},{},{},{mean},{},{},{}",
                d.len(),
                quantile(&d, 0.5),
                quantile(&d, 0.25),
                quantile(&d, 0.75),
                d[0],
                d[d.len() - 1],
                cell(whole)
            )
        })
        .collect();
    Ok(vec![
        OutputFile {
            name: "m1_sweep.csv".into(),
            contents: table(
                Command::M1Sweep,
                cfg,
                &[],
                "gamma,n_paths,median,q25,q75,mean,min,max,median_whole_line",
                &summary_rows,
            ),
        },
        OutputFile {
            name: "m1_sweep_paths.csv".into(),
            contents: table(
                Command::M1Sweep,
                cfg,
                &[],
                "path_index,gamma,distance,whole_line_distance",
                &path_rows,
            ),
        },
    ])
}

/// Quantiles of `sup M(X_{t1}, X_t, X_{t2})` over windows of length `δ` and
/// the fraction of paths above `exceedance_Delta`, per (γ, δ).
fn tightness_probe(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<OutputFile>> {
    let grid = cfg.grid()?;
    let per_path = try_map_indexed(workers, cfg.n_paths, |i| {
        let mut rng = path_rng(cfg.seed, i as u64);
        let driver = cfg.driver(cfg.horizon_t, &grid, &mut rng)?;
        cfg.gamma_list
            .iter()
            .map(|&gamma| {
                let traj = simulate_large_friction(&cfg.large_friction(gamma)?, &driver, &grid)?;
                m1_oscillation_sweep(&traj.position, &cfg.delta_list, cfg.horizon_t)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut rows = Vec::new();
    for (j, &gamma) in cfg.gamma_list.iter().enumerate() {
        for (k, &delta) in cfg.delta_list.iter().enumerate() {
            let osc = sorted(per_path.iter().map(|r| r[j][k]).collect());
            let above = osc.iter().filter(|&&o| o > cfg.exceedance_delta).count();
            rows.push(format!(
                "{gamma},{delta},{},{},{},{},{},{}",
                osc.len(),
                quantile(&osc, 0.5),
                quantile(&osc, 0.9),
                quantile(&osc, 0.99),
                osc[osc.len() - 1],
                above as f64 / osc.len() as f64
            ));
        }
    }
    Ok(vec![OutputFile {
        name: "tightness.csv".into(),
        contents: table(
            Command::TightnessProbe,
            cfg,
            &[],
            "gamma,delta,n_paths,q50,q90,q99,max,exceedance_fraction",
            &rows,
        ),
    }])
}

fn random_law(cfg: &ExperimentConfig) -> Result<LevyLaw> {
    cfg.levy_law()?.ok_or_else(|| invalid("law", "this command needs a random driver"))
}

/// Scaled first-passage samples per ε, with KS distances to the Brownian
/// limit (Brownian drivers) and between consecutive ε.
fn fpt(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<OutputFile>> {
    let law = random_law(cfg)?;
    let exp = FptExperiment {
        law: law.clone(),
        friction: cfg.friction_a,
        level: cfg.level_a,
        eps_list: cfg.eps_list.clone(),
        n_paths: cfg.n_paths,
        horizon: cfg.horizon_t,
        grid: cfg.grid()?,
        seed: cfg.seed,
    };
    let sets = fpt_scaling_experiment(&exp, workers)?;
    let mut summary = Vec::new();
    let mut samples = Vec::new();
    for (j, set) in sets.iter().enumerate() {
        let meta = set.meta();
        let reference = match law {
            LevyLaw::Brownian { sigma } => {
                let cdf = |t: f64| brownian_limit_cdf(cfg.level_a, cfg.friction_a, sigma, t).unwrap_or(f64::NAN);
                match ks_statistic(set.samples(), cfg.horizon_t, cdf) {
                    Ok(ks) => Some(ks.statistic),
                    Err(Error::AllCensored(_)) => None,
                    Err(e) => return Err(e),
                }
            }
            _ => None,
        };
        let previous = match j {
            0 => None,
            _ => match ks_two_sample(sets[j - 1].samples(), set.samples()) {
                Ok(d) => Some(d),
                Err(Error::AllCensored(_)) => None,
                Err(e) => return Err(e),
            },
        };
        summary.push(format!(
            "{},{},{},{},{},{},{},{},{}",
            cell(meta.eps),
            meta.gamma,
            set.n_paths(),
            set.censored(),
            set.censored_fraction(),
            set.excessive_censoring(),
            cell(reference),
            cell(previous),
            ks_critical_99(set.n_paths())
        ));
        for (i, s) in set.samples().iter().enumerate() {
            samples.push(format!("{},{i},{}", cell(meta.eps), cell(*s)));
        }
    }
    Ok(vec![
        OutputFile {
            name: "fpt_summary.csv".into(),
            contents: table(
                Command::Fpt,
                cfg,
                &[],
                "eps,gamma,n_paths,censored,censored_fraction,excessive_censoring,ks_limit,ks_previous_eps,ks_critical_99",
                &summary,
            ),
        },
        OutputFile {
            name: "fpt_samples.csv".into(),
            contents: table(Command::Fpt, cfg, &[], "eps,path_index,scaled_passage_time", &samples),
        },
    ])
}

/// Analytic and Monte Carlo joint characteristic function of
/// `AX^γ_{t_k} − L_{t_k}` per γ.
fn cf_check(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<OutputFile>> {
    let law = random_law(cfg)?;
    let grid = cfg.grid()?;
    let tolerance = 3.0 / (cfg.n_paths as f64).sqrt();
    let rows = cfg
        .gamma_list
        .iter()
        .map(|&gamma| {
            let spec = CfCheckSpec::new(cfg.cf_times.clone(), cfg.cf_weights.clone(), gamma, cfg.friction_a, law.clone())?;
            let exact = cf_convergence_analytic(&spec, cfg.quad_nodes)?;
            let mc = cf_convergence_montecarlo(&spec, cfg.n_paths, &grid, cfg.seed, workers)?;
            let gap = (exact - mc).norm();
            Ok(format!(
                "{gamma},{},{},{},{},{},{gap},{tolerance},{}",
                exact.re,
                exact.im,
                (exact - 1.0).norm(),
                mc.re,
                mc.im,
                gap <= tolerance
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![OutputFile {
        name: "cf_check.csv".into(),
        contents: table(
            Command::CfCheck,
            cfg,
            &[],
            "gamma,re_analytic,im_analytic,analytic_distance_to_one,re_montecarlo,im_montecarlo,abs_difference,tolerance,agree",
            &rows,
        ),
    }])
}

/// The compound-Poisson part η used by the demo, per law.
fn demo_path(cfg: &ExperimentConfig, i: usize) -> Result<CompoundPoissonPath> {
    match cfg.law {
        LawKind::Stable => {
            let mut rng = path_rng(cfg.seed, i as u64);
            cfg.decomposition()?.sample_compound_poisson_path(cfg.horizon_t, &mut rng)
        }
        LawKind::UnitJump => cfg.unit_jump_path(cfg.horizon_t),
        LawKind::Drift => CompoundPoissonPath::new(Vec::new(), Vec::new(), cfg.drift_mu, cfg.horizon_t),
        LawKind::Brownian => CompoundPoissonPath::new(Vec::new(), Vec::new(), 0.0, cfg.horizon_t),
    }
}

/// Jumps of η and, where one is predicted, the local extremum of `X^{γ,η}`
/// after each jump next to a brute-force search on the exact solution.
fn decompose_demo(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<OutputFile>> {
    let gamma = cfg.gamma;
    if !(gamma > 0.0) {
        return Err(invalid("gamma", "the demo needs γ > 0"));
    }
    let per_path = try_map_indexed(workers, cfg.n_paths, |i| {
        let cp = demo_path(cfg, i)?;
        let mut jumps = Vec::new();
        let mut extrema = Vec::new();
        for (k, (&tau, &size)) in cp.arrival_times().iter().zip(cp.jump_sizes()).enumerate() {
            jumps.push(format!("{i},{k},{tau},{size}"));
            if let Some(t_star) = local_extremum_time(&cp, gamma, k) {
                let brute = brute_force_extremum_time(&cp, gamma, k, cfg.extremum_grid_step)?;
                let diff = brute.map(|b| (t_star - b).abs());
                extrema.push(format!("{i},{k},{tau},{size},{t_star},{},{}", cell(brute), cell(diff)));
            }
        }
        Ok::<_, Error>((cp.drift(), jumps, extrema))
    })?;
    let mu_a = per_path.first().map_or(0.0, |p| p.0);
    let mut extra = vec![format!("truncated_drift={mu_a}")];
    if cfg.law == LawKind::Stable {
        let dec = cfg.decomposition()?;
        extra.push(format!("jump_intensity={}", dec.jump_intensity()));
        extra.push(format!("small_jump_variance={}", dec.small_jump_variance()));
    }
    let (jumps, extrema): (Vec<_>, Vec<_>) = per_path.into_iter().map(|(_, j, e)| (j, e)).unzip();
    Ok(vec![
        OutputFile {
            name: "decompose_jumps.csv".into(),
            contents: table(
                Command::DecomposeDemo,
                cfg,
                &extra,
                "path_index,k,jump_time,jump_size",
                &jumps.concat(),
            ),
        },
        OutputFile {
            name: "decompose_extrema.csv".into(),
            contents: table(
                Command::DecomposeDemo,
                cfg,
                &extra,
                "path_index,k,jump_time,jump_size,predicted_time,brute_force_time,abs_difference",
                &extrema.concat(),
            ),
        },
    ])
}

/// Driver used by `sample-paths`, `m1-sweep` and `tightness-probe` for path `i`.
pub fn driver_for_path(cfg: &ExperimentConfig, i: usize) -> Result<DriverPath> {
    let mut rng = path_rng(cfg.seed, i as u64);
    cfg.driver(cfg.horizon_t, &cfg.grid()?, &mut rng)
}
