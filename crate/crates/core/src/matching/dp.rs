//! Dynamic-programming search for the warp minimizing `||q1 - gamma * q2||`.
//!
//! Warps are restricted to lattice paths on a uniform `(n+1) x (n+1)` grid.
//! Each step from node `(i, j)` to `(i', j')` uses constant slope, and its
//! cost is the exact L2 mismatch of the two piecewise-constant functions
//! over the step.

use num_complex::Complex64;

use crate::curve::segment_at;
use crate::error::{ElasticError, Result};
use crate::reparam::Reparameterization;
use crate::transform::TransformedCurve;

pub const DEFAULT_GRID: usize = 128;
pub const DEFAULT_WINDOW: usize = 4;

/// Optimal lattice path and its squared L2 cost.
#[derive(Debug, Clone, PartialEq)]
pub struct DpSolution {
    pub gamma: Reparameterization,
    pub path: Vec<(usize, usize)>,
    pub cost: f64,
}

/// Piecewise-constant function with its breakpoints, for the cost walk.
struct Pieces<'a> {
    values: &'a [Complex64],
    params: &'a [f64],
    /// Piece index holding each grid node.
    node_piece: Vec<usize>,
}

impl<'a> Pieces<'a> {
    fn new(q: &'a TransformedCurve, nodes: &[f64]) -> Self {
        Self {
            values: q.samples(),
            params: q.params(),
            node_piece: nodes.iter().map(|&t| segment_at(q.params(), t)).collect(),
        }
    }
}

/// Exact `int_{t0}^{t1} |q1(t) - sqrt(sigma) q2(s0 + sigma (t - t0))|^2 dt`.
fn step_cost(q1: &Pieces, q2: &Pieces, nodes: &[f64], i0: usize, i1: usize, j0: usize, j1: usize) -> f64 {
    let (t0, t1) = (nodes[i0], nodes[i1]);
    let (s0, s1) = (nodes[j0], nodes[j1]);
    let sigma = (s1 - s0) / (t1 - t0);
    let root = sigma.sqrt();
    let mut a = q1.node_piece[i0];
    let mut b = q2.node_piece[j0];
    let mut t = t0;
    let mut total = 0.0;
    let (last_a, last_b) = (q1.values.len() - 1, q2.values.len() - 1);
    while t < t1 {
        // The final piece of either function runs to the end of the step.
        let end_a = if a == last_a { t1 } else { q1.params[a + 1].min(t1) };
        let end_b = if b == last_b {
            t1
        } else {
            (t0 + (q2.params[b + 1] - s0) / sigma).min(t1)
        };
        let end = end_a.min(end_b);
        if end > t {
            total += (q1.values[a] - q2.values[b] * root).norm_sqr() * (end - t);
            t = end;
        }
        if t >= t1 {
            break;
        }
        if end_a <= end + 1e-15 && a < last_a {
            a += 1;
        }
        if end_b <= end + 1e-15 && b < last_b {
            b += 1;
        }
    }
    total
}

/// Grid nodes `i / n`, with the last pinned to exactly 1.
pub fn grid_nodes(n: usize) -> Vec<f64> {
    crate::curve::uniform_params(n)
}

/// Minimizes the summed step cost over lattice paths from `(0, 0)` to
/// `(n, n)` whose steps `(di, dj)` satisfy `1 <= di, dj <= window`.
pub fn dp_solve(q1: &TransformedCurve, q2: &TransformedCurve, grid_n: usize, window: usize) -> Result<DpSolution> {
    if grid_n < 1 || window < 1 {
        return Err(ElasticError::InvalidArgument(format!(
            "grid_n = {grid_n}, window = {window}; both must be positive"
        )));
    }
    let n = grid_n;
    let nodes = grid_nodes(n);
    let p1 = Pieces::new(q1, &nodes);
    let p2 = Pieces::new(q2, &nodes);
    let width = n + 1;
    let mut cost = vec![f64::INFINITY; width * width];
    let mut back = vec![usize::MAX; width * width];
    cost[0] = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            let mut best = f64::INFINITY;
            let mut arg = usize::MAX;
            for di in 1..=window.min(i) {
                for dj in 1..=window.min(j) {
                    let (pi, pj) = (i - di, j - dj);
                    let base = cost[pi * width + pj];
                    if !base.is_finite() {
                        continue;
                    }
                    let c = base + step_cost(&p1, &p2, &nodes, pi, i, pj, j);
                    if c < best {
                        best = c;
                        arg = pi * width + pj;
                    }
                }
            }
            cost[i * width + j] = best;
            back[i * width + j] = arg;
        }
    }
    let mut path = vec![(n, n)];
    let mut at = n * width + n;
    while at != 0 {
        at = back[at];
        path.push((at / width, at % width));
    }
    path.reverse();
    let gamma = Reparameterization::from_grid_path(&path, n)?;
    Ok(DpSolution {
        gamma,
        path,
        cost: cost[n * width + n],
    })
}

/// Warp minimizing `||q1 - gamma * q2||` on a `grid_n` lattice with the default window.
pub fn dp_reparameterize(q1: &TransformedCurve, q2: &TransformedCurve, grid_n: usize) -> Result<Reparameterization> {
    Ok(dp_solve(q1, q2, grid_n, DEFAULT_WINDOW)?.gamma)
}
