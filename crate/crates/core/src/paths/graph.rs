//! Completed graphs and the Skorokhod M1 distance.
//!
//! `d_{M1,T}` is the Fréchet distance between the completed graphs under the
//! ground metric `max(|Δz|, |Δt|)`. Both graphs are refined jointly on the
//! union of their knot times and the discrete Fréchet distance of the refined
//! vertex sequences is computed in a time band that is widened until it
//! provably contains an optimal coupling.

use super::CadlagPath;
use crate::error::{invalid, Error, Result};

/// A vertex `(z, t)` of a completed graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphVertex {
    pub z: f64,
    pub t: f64,
}

impl GraphVertex {
    pub fn new(z: f64, t: f64) -> Self {
        Self { z, t }
    }

    fn dist(&self, other: &Self) -> f64 {
        (self.z - other.z).abs().max((self.t - other.t).abs())
    }
}

/// Ordered polyline traversing the completed graph Γ_x.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedGraphPolyline {
    pub vertices: Vec<GraphVertex>,
}

pub fn completed_graph(p: &CadlagPath) -> CompletedGraphPolyline {
    let pts = p.breakpoints();
    let mut vertices = vec![GraphVertex::new(pts[0].right, 0.0)];
    let mut push = |v: GraphVertex| {
        if vertices.last() != Some(&v) {
            vertices.push(v);
        }
    };
    for b in &pts[1..] {
        push(GraphVertex::new(b.left, b.t));
        push(GraphVertex::new(b.right, b.t));
    }
    push(GraphVertex::new(pts[pts.len() - 1].right, p.horizon()));
    CompletedGraphPolyline { vertices }
}

/// Discrete Fréchet distance between two vertex sequences: the minimum over
/// monotone couplings of the largest paired distance.
pub fn discrete_m1(a: &[GraphVertex], b: &[GraphVertex]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let mut prev = vec![f64::INFINITY; b.len()];
    let mut cur = vec![0.0; b.len()];
    for (i, va) in a.iter().enumerate() {
        for (j, vb) in b.iter().enumerate() {
            let reach = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = reach.max(va.dist(vb));
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len() - 1]
}

/// Left limit and value of a path at each knot.
fn knot_values(p: &CadlagPath, knots: &[f64]) -> Vec<(f64, f64)> {
    knots
        .iter()
        .map(|&t| {
            // knots never exceed the horizon, so evaluation cannot fail
            (p.left_limit(t).unwrap_or(f64::NAN), p.value_at(t).unwrap_or(f64::NAN))
        })
        .collect()
}

/// Refines both graphs on the common knot set so that every segment has
/// length at most `1 / mesh` and vertex `i` of one sequence sits at the same
/// time as vertex `i` of the other.
fn joint_refinement(p1: &CadlagPath, p2: &CadlagPath, mesh: usize) -> (Vec<GraphVertex>, Vec<GraphVertex>) {
    let horizon = p1.horizon();
    let mut knots: Vec<f64> = p1
        .breakpoints()
        .iter()
        .chain(p2.breakpoints())
        .map(|b| b.t)
        .chain([horizon])
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let k1 = knot_values(p1, &knots);
    let k2 = knot_values(p2, &knots);
    let m = mesh as f64;
    let pieces = |len: f64| (len * m).ceil() as usize;
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for (k, &t) in knots.iter().enumerate() {
        let (a1, b1) = k1[k];
        let (a2, b2) = k2[k];
        if k > 0 {
            let (t0, z1, z2) = (knots[k - 1], k1[k - 1].1, k2[k - 1].1);
            let n = pieces((t - t0).max((a1 - z1).abs()).max((a2 - z2).abs())).max(1);
            for j in 1..=n {
                let w = j as f64 / n as f64;
                let tj = if j == n { t } else { t0 + w * (t - t0) };
                r1.push(GraphVertex::new(z1 + w * (a1 - z1), tj));
                r2.push(GraphVertex::new(z2 + w * (a2 - z2), tj));
            }
        } else {
            r1.push(GraphVertex::new(a1, t));
            r2.push(GraphVertex::new(a2, t));
        }
        let n = pieces((b1 - a1).abs().max((b2 - a2).abs()));
        for j in 1..=n {
            let w = j as f64 / n as f64;
            r1.push(GraphVertex::new(a1 + w * (b1 - a1), t));
            r2.push(GraphVertex::new(a2 + w * (b2 - a2), t));
        }
    }
    (r1, r2)
}

/// Discrete Fréchet distance restricted to pairs with `|Δt| ≤ band`.
///
/// Rows are full-length buffers. Band edges only move right, so cells right
/// of the previous row's band were never written and still hold infinity;
/// cells left of it are stale and are masked explicitly.
fn banded_discrete_m1(a: &[GraphVertex], b: &[GraphVertex], band: f64) -> f64 {
    let n = b.len();
    if a.is_empty() || n == 0 {
        return f64::INFINITY;
    }
    let mut prev = vec![f64::INFINITY; n];
    let mut cur = vec![f64::INFINITY; n];
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut prev_lo = 0usize;
    let mut prev_hi = None;
    for (i, va) in a.iter().enumerate() {
        while lo < n && va.t - b[lo].t > band {
            lo += 1;
        }
        if lo == n {
            return f64::INFINITY;
        }
        hi = hi.max(lo);
        while hi + 1 < n && b[hi + 1].t - va.t <= band {
            hi += 1;
        }
        let bs = &b[lo..=hi];
        let row = &mut cur[lo..=hi];
        // moves from the previous row first (no dependence between cells),
        // then the chain along the row
        if i == 0 {
            row.fill(f64::INFINITY);
            if lo == 0 {
                row[0] = 0.0;
            }
        } else {
            let up = &prev[lo..=hi];
            row[0] = if lo > prev_lo { up[0].min(prev[lo - 1]) } else { up[0] };
            for k in 1..row.len() {
                row[k] = up[k].min(up[k - 1]);
            }
        }
        for (r, vb) in row.iter_mut().zip(bs) {
            *r = r.max((va.z - vb.z).abs().max((va.t - vb.t).abs()));
        }
        let mut left = f64::INFINITY;
        for (r, vb) in row.iter_mut().zip(bs) {
            let d = (va.z - vb.z).abs().max((va.t - vb.t).abs());
            left = r.min(left.max(d));
            *r = left;
        }
        std::mem::swap(&mut prev, &mut cur);
        prev_lo = lo;
        prev_hi = Some(hi);
    }
    match prev_hi {
        Some(h) if h == n - 1 => prev[n - 1],
        _ => f64::INFINITY,
    }
}

/// `d_{M1,T}(p1, p2)` with graphs refined to pitch `1 / mesh`.
pub fn m1_distance(p1: &CadlagPath, p2: &CadlagPath, horizon: f64, mesh: usize) -> Result<f64> {
    if p1.horizon() != p2.horizon() {
        return Err(Error::HorizonMismatch {
            left: p1.horizon(),
            right: p2.horizon(),
        });
    }
    if mesh == 0 {
        return Err(invalid("mesh", "must be positive"));
    }
    let (p1, p2) = if horizon == p1.horizon() {
        (p1.clone(), p2.clone())
    } else {
        (p1.restrict(horizon)?, p2.restrict(horizon)?)
    };
    Ok(refined_m1(&p1, &p2, mesh))
}

/// Discrete distance of the joint refinements. The time band starts from the
/// distance at a quarter of the mesh, which exceeds the fine distance by at
/// most the fine pitch, and doubles until the banded result certifies itself.
fn refined_m1(p1: &CadlagPath, p2: &CadlagPath, mesh: usize) -> f64 {
    let (r1, r2) = joint_refinement(p1, p2, mesh);
    // pairing equal indices is an admissible coupling; its cost bounds the
    // optimum and hence the time band any optimal coupling can use
    let diagonal = r1.iter().zip(&r2).map(|(a, b)| a.dist(b)).fold(0.0, f64::max);
    let pitch = 1.0 / mesh as f64;
    let guess = if mesh >= 64 && r1.len() > 4096 {
        refined_m1(p1, p2, mesh / 4) + 2.0 * pitch
    } else {
        4.0 * pitch
    };
    let mut band = diagonal.min(guess);
    loop {
        let d = banded_discrete_m1(&r1, &r2, band);
        if d <= band || band >= diagonal {
            return d.min(diagonal);
        }
        band = (2.0 * band).min(diagonal);
    }
}

/// `∫₀^{T_max} e^{−T} (1 ∧ d_{M1,T}) dT` by the midpoint rule on `quad_nodes`
/// panels; the neglected tail is at most `e^{−T_max}`. Paths are held
/// constant past their horizons.
pub fn m1_whole_line_distance(p1: &CadlagPath, p2: &CadlagPath, t_max: f64, quad_nodes: usize, mesh: usize) -> Result<f64> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(invalid("t_max", format!("{t_max} must be positive and finite")));
    }
    if quad_nodes == 0 {
        return Err(invalid("quad_nodes", "must be positive"));
    }
    let reach = t_max.max(p1.horizon()).max(p2.horizon());
    let e1 = p1.extend_to(reach)?;
    let e2 = p2.extend_to(reach)?;
    let h = t_max / quad_nodes as f64;
    let mut total = 0.0;
    for k in 0..quad_nodes {
        let t = (k as f64 + 0.5) * h;
        let d = m1_distance(&e1, &e2, t, mesh)?;
        total += (-t).exp() * d.min(1.0) * h;
    }
    Ok(total)
}
