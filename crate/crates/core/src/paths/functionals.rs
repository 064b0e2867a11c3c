//! Uniform distance, the M1 oscillation function, running supremum and first
//! passage.

use super::{Breakpoint, CadlagPath, Interpolation};
use crate::error::{invalid, Error, Result};

/// `sup_{t ≤ T} |p1_t − p2_t|` for paths with a common horizon.
pub fn uniform_distance(p1: &CadlagPath, p2: &CadlagPath) -> Result<f64> {
    if p1.horizon() != p2.horizon() {
        return Err(Error::HorizonMismatch {
            left: p1.horizon(),
            right: p2.horizon(),
        });
    }
    let mut times: Vec<f64> = p1.breakpoints().iter().chain(p2.breakpoints()).map(|b| b.t).collect();
    times.push(p1.horizon());
    let mut sup = 0.0f64;
    for t in times {
        sup = sup
            .max((p1.left_limit(t)? - p2.left_limit(t)?).abs())
            .max((p1.value_at(t)? - p2.value_at(t)?).abs());
    }
    Ok(sup)
}

/// Distance from `x` to the segment between `x1` and `x2`.
pub fn oscillation_m(x1: f64, x: f64, x2: f64) -> f64 {
    (x - x1.max(x2)).max(x1.min(x2) - x).max(0.0)
}

/// Evaluation nodes of `p` on `[0, horizon]`: breakpoints and a grid of
/// spacing `step`; a jump contributes its left limit and its value as two
/// consecutive nodes.
fn nodes(p: &CadlagPath, horizon: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    let n_grid = (horizon / step).ceil() as usize;
    let mut times: Vec<f64> = (0..=n_grid).map(|k| (k as f64 * step).min(horizon)).collect();
    times.extend(p.breakpoints().iter().map(|b| b.t).filter(|&t| t <= horizon));
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut out = Vec::with_capacity(times.len() + 8);
    for t in times {
        let left = p.left_limit(t)?;
        let value = p.value_at(t)?;
        if left != value {
            out.push((t, left));
        }
        out.push((t, value));
    }
    Ok(out)
}

/// `sup M(x_{t1}, x_t, x_{t2})` over `t1 < t < t2 ≤ T` with `t2 − t1 ≤ δ`,
/// evaluated on the breakpoints refined to spacing `δ/16`.
pub fn m1_oscillation_sup(p: &CadlagPath, delta: f64, horizon: f64) -> Result<f64> {
    check_window(p, delta, horizon)?;
    let nodes = nodes(p, horizon, delta / 16.0)?;
    Ok(oscillation_on_nodes(&nodes, delta))
}

/// [`m1_oscillation_sup`] for several window lengths on one node set (spacing
/// `min δ / 16`), so the results are monotone in `δ`.
pub fn m1_oscillation_sweep(p: &CadlagPath, deltas: &[f64], horizon: f64) -> Result<Vec<f64>> {
    for &d in deltas {
        check_window(p, d, horizon)?;
    }
    let Some(finest) = deltas.iter().copied().reduce(f64::min) else {
        return Ok(Vec::new());
    };
    let nodes = nodes(p, horizon, finest / 16.0)?;
    Ok(deltas.iter().map(|&d| oscillation_on_nodes(&nodes, d)).collect())
}

fn check_window(p: &CadlagPath, delta: f64, horizon: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= horizon) {
        return Err(invalid("delta", format!("{delta} is not in (0, {horizon}]")));
    }
    if horizon > p.horizon() {
        return Err(Error::TimeOutOfRange {
            t: horizon,
            horizon: p.horizon(),
        });
    }
    Ok(())
}

fn oscillation_on_nodes(nodes: &[(f64, f64)], delta: f64) -> f64 {
    let n = nodes.len();
    let mut sup = 0.0f64;
    let mut right_min = Vec::new();
    let mut right_max = Vec::new();
    for j in 1..n.saturating_sub(1) {
        let (tj, xj) = nodes[j];
        // running extrema of the candidates for x_{t2}, in time order
        right_min.clear();
        right_max.clear();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(tk, xk) in &nodes[j + 1..] {
            if tk - tj > delta {
                break;
            }
            lo = lo.min(xk);
            hi = hi.max(xk);
            right_min.push(lo);
            right_max.push(hi);
        }
        // candidates for x_{t1}, walking back in time; the admissible t2
        // range shrinks as t1 decreases
        let mut reach = right_min.len();
        for &(ti, xi) in nodes[..j].iter().rev() {
            while reach > 0 && nodes[j + reach].0 - ti > delta {
                reach -= 1;
            }
            if reach == 0 {
                break;
            }
            let (lo, hi) = (right_min[reach - 1], right_max[reach - 1]);
            sup = sup.max(xj - xi.max(lo)).max(xi.min(hi) - xj);
        }
    }
    sup
}

/// `S_t = sup_{s ≤ t} x_s`. Crossings of the running maximum inside linear
/// segments become breakpoints.
pub fn running_supremum(p: &CadlagPath) -> CadlagPath {
    let pts = p.breakpoints();
    let mut s = pts[0].right;
    let mut out = vec![Breakpoint::continuous(0.0, s)];
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if p.interpolation() == Interpolation::Linear && b.left > s && a.right < s {
            let tc = a.t + (s - a.right) / (b.left - a.right) * (b.t - a.t);
            if tc > a.t && tc < b.t {
                out.push(Breakpoint::continuous(tc, s));
            }
        }
        let left = s.max(b.left);
        s = left.max(b.right);
        out.push(Breakpoint { t: b.t, left, right: s });
    }
    CadlagPath::new(out, p.interpolation(), p.horizon()).expect("running supremum of a valid path is valid")
}

/// `inf{t ≥ 0 : x_t > a}`, or `None` if the level is never exceeded.
pub fn first_passage(p: &CadlagPath, a: f64) -> Option<f64> {
    let pts = p.breakpoints();
    if pts[0].right > a {
        return Some(0.0);
    }
    for w in pts.windows(2) {
        let (u, v) = (w[0], w[1]);
        if p.interpolation() == Interpolation::Linear && v.left > a {
            // u.right ≤ a here, so the segment crosses the level
            let tc = u.t + (a - u.right) / (v.left - u.right) * (v.t - u.t);
            return Some(tc.clamp(u.t, v.t));
        }
        if v.right > a {
            return Some(v.t);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tent() -> CadlagPath {
        CadlagPath::from_linear_nodes(&[0.0, 0.5, 1.0], &[0.0, 1.0, 0.0], 1.0).unwrap()
    }

    /// Exhaustive search over ordered node triples.
    fn brute_oscillation(p: &CadlagPath, delta: f64) -> f64 {
        let nodes = nodes(p, p.horizon(), delta / 16.0).unwrap();
        let mut sup = 0.0f64;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                for k in j + 1..nodes.len() {
                    if nodes[k].0 - nodes[i].0 <= delta {
                        sup = sup.max(oscillation_m(nodes[i].1, nodes[j].1, nodes[k].1));
                    }
                }
            }
        }
        sup
    }

    #[test]
    fn oscillation_function() {
        assert_eq!(oscillation_m(0.0, 1.0, 2.0), 0.0);
        assert_eq!(oscillation_m(0.0, 2.0, 1.0), 1.0);
        assert_eq!(oscillation_m(1.0, 0.0, 2.0), 1.0);
    }

    #[test]
    fn oscillation_sup_examples() {
        let ramp = CadlagPath::from_linear_nodes(&[0.0, 1.0], &[0.0, 3.0], 1.0).unwrap();
        for delta in [0.01, 0.3, 1.0] {
            assert_eq!(m1_oscillation_sup(&ramp, delta, 1.0).unwrap(), 0.0);
        }
        assert!((m1_oscillation_sup(&tent(), 1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let small = m1_oscillation_sup(&tent(), 0.2, 1.0).unwrap();
        assert!(small > 0.0 && small <= 0.4 + 1e-12, "{small}");
        assert!((small - brute_oscillation(&tent(), 0.2)).abs() < 1e-12);
        assert!(m1_oscillation_sup(&tent(), 0.0, 1.0).is_err());
        assert!(m1_oscillation_sup(&tent(), 2.0, 1.0).is_err());
    }

    #[test]
    fn oscillation_sees_overshoot_at_a_jump() {
        // jump up by 1 then immediately back down over 0.01
        let p = CadlagPath::new(
            vec![
                Breakpoint::continuous(0.0, 0.0),
                Breakpoint {
                    t: 0.5,
                    left: 0.0,
                    right: 1.0,
                },
                Breakpoint::continuous(0.51, 0.0),
            ],
            Interpolation::Linear,
            1.0,
        )
        .unwrap();
        assert!((m1_oscillation_sup(&p, 0.05, 1.0).unwrap() - 1.0).abs() < 1e-12);
        // a single jump is monotone and has no oscillation
        let s = CadlagPath::from_step_values(&[0.0, 0.5], &[0.0, 1.0], 1.0).unwrap();
        assert_eq!(m1_oscillation_sup(&s, 0.05, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn running_supremum_examples() {
        let ramp = CadlagPath::from_linear_nodes(&[0.0, 1.0], &[0.0, 1.0], 1.0).unwrap();
        assert_eq!(running_supremum(&ramp), ramp);
        let s = running_supremum(&tent());
        assert_eq!(s.value_at(0.25).unwrap(), 0.5);
        assert_eq!(s.value_at(0.75).unwrap(), 1.0);
        let steps = CadlagPath::from_step_values(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.5], 3.0).unwrap();
        let s = running_supremum(&steps);
        assert_eq!(s.value_at(0.5).unwrap(), 0.0);
        assert_eq!(s.value_at(1.0).unwrap(), 1.0);
        assert_eq!(s.value_at(2.5).unwrap(), 1.0);
    }

    #[test]
    fn first_passage_examples() {
        assert_eq!(first_passage(&CadlagPath::constant(0.0, 1.0).unwrap(), 1.0), None);
        let step = CadlagPath::from_step_values(&[0.0, 1.0], &[0.0, 1.0], 2.0).unwrap();
        assert_eq!(first_passage(&step, 0.5), Some(1.0));
        let ramp = CadlagPath::from_linear_nodes(&[0.0, 1.0], &[0.0, 2.0], 1.0).unwrap();
        assert_eq!(first_passage(&ramp, 1.0), Some(0.5));
        // touching the level is not passing it
        assert_eq!(first_passage(&tent(), 1.0), None);
        assert_eq!(first_passage(&tent(), -0.5), Some(0.0));
    }

    #[test]
    fn uniform_distance_uses_left_limits() {
        let a = CadlagPath::from_step_values(&[0.0, 1.0], &[0.0, 1.0], 2.0).unwrap();
        let b = CadlagPath::from_linear_nodes(&[0.0, 1.0, 2.0], &[0.0, 1.0, 1.0], 2.0).unwrap();
        assert_eq!(uniform_distance(&a, &b).unwrap(), 1.0);
        let c = CadlagPath::constant(0.0, 3.0).unwrap();
        assert!(uniform_distance(&a, &c).is_err());
    }

    fn random_path() -> impl Strategy<Value = CadlagPath> {
        (
            prop::collection::vec((0.01f64..0.3, -1.0f64..1.0, -0.5f64..0.5, 0u8..3), 1..12),
            any::<bool>(),
        )
            .prop_map(|(steps, linear)| {
                let mut pts = vec![Breakpoint::continuous(0.0, 0.0)];
                let (mut t, mut prev) = (0.0, 0.0);
                for (dt, left, jump, kind) in steps {
                    t += dt;
                    let l = if linear { left } else { prev };
                    let r = if kind == 0 { l + jump } else { l };
                    pts.push(Breakpoint { t, left: l, right: r });
                    prev = r;
                }
                let interp = if linear { Interpolation::Linear } else { Interpolation::Step };
                CadlagPath::new(pts, interp, t + 0.1).unwrap()
            })
    }

    proptest! {
        #[test]
        fn supremum_dominates_and_increases(p in random_path()) {
            let s = running_supremum(&p);
            let n = 400;
            let mut last = f64::NEG_INFINITY;
            for k in 0..=n {
                let t = (p.horizon() * k as f64 / n as f64).min(p.horizon());
                let (sv, pv) = (s.value_at(t).unwrap(), p.value_at(t).unwrap());
                prop_assert!(sv >= pv - 1e-12);
                prop_assert!(sv >= last);
                last = sv;
            }
        }

        #[test]
        fn passage_through_supremum(p in random_path(), a in -0.8f64..0.8) {
            let direct = first_passage(&p, a);
            let via_sup = first_passage(&running_supremum(&p), a);
            match (direct, via_sup) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12, "{} vs {}", x, y),
                (None, None) => {}
                other => prop_assert!(false, "{:?}", other),
            }
        }

        #[test]
        fn sliding_oscillation_matches_exhaustive(p in random_path(), frac in 0.05f64..1.0) {
            let delta = frac * p.horizon();
            let fast = m1_oscillation_sup(&p, delta, p.horizon()).unwrap();
            prop_assert!((fast - brute_oscillation(&p, delta)).abs() <= 1e-12);
        }

        #[test]
        fn oscillation_monotone_in_delta(p in random_path(), frac in 0.05f64..0.5) {
            // nested node sets: δ/16 grids of δ and δ/2 share nodes
            let d = frac * p.horizon();
            let big = m1_oscillation_sup(&p, d, p.horizon()).unwrap();
            let small = m1_oscillation_sup(&p, d / 2.0, p.horizon()).unwrap();
            prop_assert!(small <= big + 1e-12);
        }

        #[test]
        fn sweep_is_monotone_and_finest_matches(p in random_path(), fracs in prop::collection::vec(0.02f64..1.0, 1..5)) {
            let deltas: Vec<f64> = fracs.iter().map(|f| f * p.horizon()).collect();
            let sweep = m1_oscillation_sweep(&p, &deltas, p.horizon()).unwrap();
            for i in 0..deltas.len() {
                for j in 0..deltas.len() {
                    if deltas[i] <= deltas[j] {
                        prop_assert!(sweep[i] <= sweep[j]);
                    }
                }
            }
            let finest = deltas.iter().copied().fold(f64::INFINITY, f64::min);
            let k = deltas.iter().position(|&d| d == finest).unwrap();
            prop_assert_eq!(sweep[k], m1_oscillation_sup(&p, finest, p.horizon()).unwrap());
        }
    }
}
