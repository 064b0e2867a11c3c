//! Closed forms for the large-friction displacement driven by a compound
//! Poisson process with drift (friction normalized to A = 1, x₀ = v₀ = 0):
//!
//! ```text
//! X_t = Σ_{τ_k ≤ t} J_k (1 − e^{−γ(t − τ_k)}) + μ_a (t − (1 − e^{−γt})/γ)
//! ```

use crate::error::{Error, Result};
use crate::levy::CompoundPoissonPath;

pub fn integrated_ou_cp_exact(cp: &CompoundPoissonPath, gamma: f64, t: f64) -> Result<f64> {
    if !(0.0..=cp.horizon()).contains(&t) {
        return Err(Error::TimeOutOfRange { t, horizon: cp.horizon() });
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let n = cp.count_until(t);
    let jumps: f64 = cp.arrival_times()[..n]
        .iter()
        .zip(cp.jump_sizes())
        .map(|(&tau, &j)| j * -(-gamma * (t - tau)).exp_m1())
        .sum();
    Ok(jumps + cp.drift() * (t + (-gamma * t).exp_m1() / gamma))
}

/// End of the inter-arrival interval that starts at jump `k`.
fn next_boundary(cp: &CompoundPoissonPath, k: usize) -> f64 {
    cp.arrival_times().get(k + 1).copied().unwrap_or(cp.horizon())
}

/// Zero of `dX/dt` in `(τ_k, next arrival)`, if there is one.
///
/// On that interval `dX/dt = γ e^{−γ(t−τ_k)} D_k + μ_a (1 − e^{−γt})` with
/// `D_k = Σ_{j ≤ k} J_j e^{−γ(τ_k − τ_j)}`, which has at most one zero:
/// `t = τ_k + γ^{−1} ln(e^{−γτ_k} − γ D_k / μ_a)`.
pub fn extremum_time_exact(cp: &CompoundPoissonPath, gamma: f64, k: usize) -> Option<f64> {
    let mu = cp.drift();
    if k >= cp.len() || mu == 0.0 || !(gamma > 0.0) {
        return None;
    }
    let taus = cp.arrival_times();
    let sizes = cp.jump_sizes();
    let tau_k = taus[k];
    let d_k: f64 = (0..=k).map(|j| sizes[j] * (-gamma * (tau_k - taus[j])).exp()).sum();
    let arg = (-gamma * tau_k).exp() - gamma * d_k / mu;
    if !(arg > 0.0) {
        return None;
    }
    let t = tau_k + arg.ln() / gamma;
    (t > tau_k && t < next_boundary(cp, k)).then_some(t)
}

/// Predicted local extremum after jump `k` (0-based): it exists when the jump
/// and the drift pull in opposite directions, `J_k / μ_a < 0`, and the
/// derivative vanishes before the next arrival.
pub fn local_extremum_time(cp: &CompoundPoissonPath, gamma: f64, k: usize) -> Option<f64> {
    let jump = *cp.jump_sizes().get(k)?;
    if !(jump / cp.drift() < 0.0) {
        return None;
    }
    extremum_time_exact(cp, gamma, k)
}

/// Interior local extremum of the exact formula on a grid of spacing `step`
/// over `(τ_k, next arrival)`: the first grid point where the discrete slope
/// changes sign.
pub fn brute_force_extremum_time(cp: &CompoundPoissonPath, gamma: f64, k: usize, step: f64) -> Result<Option<f64>> {
    if k >= cp.len() {
        return Ok(None);
    }
    let lo = cp.arrival_times()[k];
    let hi = next_boundary(cp, k);
    let n = ((hi - lo) / step).floor() as usize;
    let at = |i: usize| (lo + i as f64 * step).min(hi);
    // values just left of the next arrival; the jump itself is excluded
    let eval = |i: usize| {
        let t = at(i);
        if t >= hi && hi < cp.horizon() {
            integrated_ou_cp_exact(cp, gamma, t).map(|x| x - cp.jump_sizes()[k + 1])
        } else {
            integrated_ou_cp_exact(cp, gamma, t)
        }
    };
    if n < 2 {
        return Ok(None);
    }
    let mut prev = eval(0)?;
    let mut cur = eval(1)?;
    for i in 2..=n {
        let next = eval(i)?;
        let (s0, s1) = (cur - prev, next - cur);
        if (s0 > 0.0 && s1 <= 0.0) || (s0 < 0.0 && s1 >= 0.0) {
            return Ok(Some(at(i - 1)));
        }
        prev = cur;
        cur = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate_large_friction, DriverPath, GridSpec, LangevinSpec};

    fn cp(times: &[f64], sizes: &[f64], drift: f64, horizon: f64) -> CompoundPoissonPath {
        CompoundPoissonPath::new(times.to_vec(), sizes.to_vec(), drift, horizon).unwrap()
    }

    #[test]
    fn no_jumps() {
        let still = cp(&[], &[], 0.0, 2.0);
        for t in [0.0, 0.3, 2.0] {
            assert_eq!(integrated_ou_cp_exact(&still, 10.0, t).unwrap(), 0.0);
        }
        let drifting = cp(&[], &[], 1.0, 2.0);
        let x = integrated_ou_cp_exact(&drifting, 10.0, 1.0).unwrap();
        assert!((x - (1.0 - (1.0 - (-10.0f64).exp()) / 10.0)).abs() < 1e-15);
        assert!((x - 0.900_004_54).abs() < 1e-8);
        assert!(integrated_ou_cp_exact(&drifting, 10.0, 2.5).is_err());
        assert_eq!(integrated_ou_cp_exact(&drifting, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn jump_at_origin_converges_pointwise() {
        let p = cp(&[0.0], &[1.0], 0.0, 1.0);
        for gamma in [1.0, 10.0, 1e3] {
            let x = integrated_ou_cp_exact(&p, gamma, 0.3).unwrap();
            assert!((x - (1.0 - (-gamma * 0.3).exp())).abs() < 1e-15);
        }
        assert!((integrated_ou_cp_exact(&p, 1e3, 0.3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_the_integrator() {
        let p = cp(&[0.1, 0.45, 0.8], &[1.0, -2.0, 0.5], -0.7, 1.0);
        let gamma = 25.0;
        let spec = LangevinSpec::large_friction(1.0, gamma, 0.0, 0.0, 1.0).unwrap();
        let tr = simulate_large_friction(&spec, &DriverPath::from_compound_poisson(&p).unwrap(), &GridSpec::new(17).unwrap()).unwrap();
        for b in tr.position.breakpoints() {
            assert!((b.right - integrated_ou_cp_exact(&p, gamma, b.t).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn single_jump_extremum() {
        let p = cp(&[0.5], &[1.0], -1.0, 1.0);
        let t = local_extremum_time(&p, 100.0, 0).unwrap();
        let expected = 0.5 + ((-50.0f64).exp() + 100.0).ln() / 100.0;
        assert!((t - expected).abs() < 1e-14);
        assert!((t - 0.5461).abs() < 1e-4, "{t}");
        let brute = brute_force_extremum_time(&p, 100.0, 0, 1e-5).unwrap().unwrap();
        assert!((brute - t).abs() < 2e-5, "{brute} vs {t}");
    }

    #[test]
    fn no_extremum_when_jump_and_drift_agree() {
        let p = cp(&[0.5], &[1.0], 1.0, 1.0);
        assert_eq!(local_extremum_time(&p, 100.0, 0), None);
        assert_eq!(brute_force_extremum_time(&p, 100.0, 0, 1e-4).unwrap(), None);
        let flat = cp(&[0.5], &[1.0], 0.0, 1.0);
        assert_eq!(local_extremum_time(&flat, 100.0, 0), None);
        assert_eq!(local_extremum_time(&flat, 100.0, 3), None);
    }

    #[test]
    fn derivative_vanishes_at_the_extremum() {
        let p = cp(&[0.2, 0.3, 0.7], &[-1.0, 2.0, -0.5], -0.8, 1.0);
        let gamma = 40.0;
        for k in 0..3 {
            if let Some(t) = extremum_time_exact(&p, gamma, k) {
                let h = 1e-6;
                let d = (integrated_ou_cp_exact(&p, gamma, t + h).unwrap() - integrated_ou_cp_exact(&p, gamma, t - h).unwrap()) / (2.0 * h);
                assert!(d.abs() < 1e-6, "k={k}: {d}");
            }
        }
        assert!(local_extremum_time(&p, gamma, 1).is_some());
        assert!(local_extremum_time(&p, gamma, 0).is_none());
    }
}
