//! Alignment over rotations, reparameterizations and (for closed curves)
//! starting points.

mod dp;
mod rotation;

use std::f64::consts::PI;

pub use dp::{dp_reparameterize, dp_solve, grid_nodes, DpSolution, DEFAULT_GRID, DEFAULT_WINDOW};
pub use rotation::{optimal_rotation, RotationAlignment, DEGENERATE_INNER};

use crate::curve::{ElasticParams, PlaneCurve};
use crate::error::{ElasticError, Result};
use crate::reparam::Reparameterization;
use crate::transform::{forward, reparam_action, TransformedCurve};

/// Settings shared by the open and closed matchers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchOptions {
    pub grid_n: usize,
    pub window: usize,
    /// Rescale both curves to unit length before transforming.
    pub fixed_length: bool,
    pub max_rounds: usize,
    /// Stop alternating once the distance improves by less than this.
    pub improvement_tol: f64,
    /// Seeds tried for closed curves are `0, stride, 2 stride, ...`.
    pub seed_stride: usize,
    /// Arclength resampling of closed curves before seed search.
    pub closed_samples: Option<usize>,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self {
            grid_n: DEFAULT_GRID,
            window: DEFAULT_WINDOW,
            fixed_length: false,
            max_rounds: 10,
            improvement_tol: 1e-8,
            seed_stride: 1,
            closed_samples: None,
        }
    }
}

/// Outcome of a matching run.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub gamma: Reparameterization,
    /// Rotation applied to the warped second transform.
    pub rotation: f64,
    /// Cyclic vertex offset of the second curve (0 for open curves).
    pub seed: usize,
    /// `||q1 - e^{i rotation} gamma * q2||`.
    pub distance: f64,
    /// First curve after resampling and normalization.
    pub c1_base: PlaneCurve,
    pub q1: TransformedCurve,
    /// Second transform after seed shift, warp and rotation.
    pub q2_aligned: TransformedCurve,
    /// The second curve after normalization and seed shift, before warping.
    pub c2_base: PlaneCurve,
    pub rounds: usize,
}

impl MatchResult {
    /// Geodesic distance on the sphere of radius `2b` between the aligned
    /// transforms; meaningful for unit-length curves.
    pub fn sphere_distance(&self) -> f64 {
        let radius = self.q1.elastic().sphere_radius();
        let cos = self.q1.inner(&self.q2_aligned).re / (radius * radius);
        radius * cos.clamp(-1.0, 1.0).acos()
    }
}

struct Alignment {
    gamma: Reparameterization,
    rotation: f64,
    distance: f64,
    aligned: TransformedCurve,
    rounds: usize,
}

/// Block coordinate descent over rotation and warp, starting from the identity.
fn align_transforms(q1: &TransformedCurve, q2: &TransformedCurve, opts: &MatchOptions) -> Result<Alignment> {
    let start = optimal_rotation(q1, q2);
    let mut best = Alignment {
        gamma: Reparameterization::identity(),
        rotation: start.angle,
        distance: start.distance,
        aligned: start.aligned,
        rounds: 0,
    };
    let mut rotation = best.rotation;
    for round in 1..=opts.max_rounds {
        let sol = dp_solve(q1, &q2.rotate(rotation), opts.grid_n, opts.window)?;
        let warped = reparam_action(&sol.gamma, q2);
        let rot = optimal_rotation(q1, &warped);
        rotation = rot.angle;
        let improvement = best.distance - rot.distance;
        if improvement > 0.0 {
            best = Alignment {
                gamma: sol.gamma,
                rotation: rot.angle,
                distance: rot.distance,
                aligned: rot.aligned,
                rounds: round,
            };
        }
        if improvement < opts.improvement_tol {
            break;
        }
    }
    Ok(best)
}

/// Aligns two transforms directly (no curve preprocessing).
pub fn match_transforms(
    q1: &TransformedCurve,
    q2: &TransformedCurve,
    opts: &MatchOptions,
) -> Result<(Reparameterization, f64, f64, TransformedCurve)> {
    let a = align_transforms(q1, q2, opts)?;
    Ok((a.gamma, a.rotation, a.distance, a.aligned))
}

fn prepare(c: &PlaneCurve, opts: &MatchOptions) -> PlaneCurve {
    c.normalize(true, opts.fixed_length)
}

/// Elastic matching of open curves.
pub fn match_open(c1: &PlaneCurve, c2: &PlaneCurve, p: ElasticParams, opts: &MatchOptions) -> Result<MatchResult> {
    let c1n = prepare(c1, opts);
    let c2n = prepare(c2, opts);
    let q1 = forward(&c1n, p);
    let q2 = forward(&c2n, p);
    let a = align_transforms(&q1, &q2, opts)?;
    Ok(MatchResult {
        gamma: a.gamma,
        rotation: a.rotation,
        seed: 0,
        distance: a.distance,
        c1_base: c1n,
        q1,
        q2_aligned: a.aligned,
        c2_base: c2n,
        rounds: a.rounds,
    })
}

/// Brings two closed curves to a common vertex count.
pub fn resample_closed_pair(
    c1: &PlaneCurve,
    c2: &PlaneCurve,
    samples: Option<usize>,
) -> Result<(PlaneCurve, PlaneCurve)> {
    match samples {
        Some(n) => Ok((c1.resample_arclength(n)?, c2.resample_arclength(n)?)),
        None if c1.segment_count() == c2.segment_count() => Ok((c1.clone(), c2.clone())),
        None => {
            let n = c1.segment_count().max(c2.segment_count()) + 1;
            Ok((c1.resample_arclength(n)?, c2.resample_arclength(n)?))
        }
    }
}

/// Elastic matching of closed curves, searching over starting vertices of `c2`.
///
/// The transform is recomputed for every seed so that phase unwrapping starts
/// at the new first edge.
pub fn match_closed(c1: &PlaneCurve, c2: &PlaneCurve, p: ElasticParams, opts: &MatchOptions) -> Result<MatchResult> {
    if !c1.is_closed() || !c2.is_closed() {
        return Err(ElasticError::InvalidArgument("match_closed needs closed curves".into()));
    }
    let (c1r, c2r) = resample_closed_pair(c1, c2, opts.closed_samples)?;
    let c1n = prepare(&c1r, opts);
    let c2n = prepare(&c2r, opts);
    let q1 = forward(&c1n, p);
    let k = c2n.segment_count();
    let stride = opts.seed_stride.max(1);
    let mut best: Option<MatchResult> = None;
    for seed in (0..k).step_by(stride) {
        let shifted = c2n.cyclic_shift(seed)?;
        let q2 = forward(&shifted, p);
        let a = align_transforms(&q1, &q2, opts)?;
        if best.as_ref().is_none_or(|b| a.distance < b.distance) {
            best = Some(MatchResult {
                gamma: a.gamma,
                rotation: a.rotation,
                seed,
                distance: a.distance,
                c1_base: c1n.clone(),
                q1: q1.clone(),
                q2_aligned: a.aligned,
                c2_base: shifted,
                rounds: a.rounds,
            });
        }
    }
    best.ok_or_else(|| ElasticError::InvalidArgument("no seeds searched".into()))
}

/// Dispatches on whether the inputs are closed.
pub fn match_curves(c1: &PlaneCurve, c2: &PlaneCurve, p: ElasticParams, opts: &MatchOptions) -> Result<MatchResult> {
    if c1.is_closed() && c2.is_closed() {
        match_closed(c1, c2, p, opts)
    } else {
        match_open(c1, c2, p, opts)
    }
}

/// Whether two PL curves can share a transform, and whether they lie in the
/// bounded-angle regime where the transform is injective.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectivityReport {
    pub same_radii: bool,
    /// Every angle relation holds with an integer multiple of `(4b/a) pi`.
    pub integer_relations: bool,
    /// The integers found, when `integer_relations` holds.
    pub multiples: Vec<i64>,
    /// Same radii and integral relations: the transforms coincide.
    pub transforms_coincide: bool,
    /// Both curves have every exterior angle below `(2b/a) pi`.
    pub bounded_angles: bool,
    /// The curves are distinct yet share a transform.
    pub non_injective: bool,
    /// Largest pointwise difference of the two transforms.
    pub transform_gap: f64,
}

/// Checks the conditions under which two PL curves have equal transforms.
pub fn injectivity_check(c1: &PlaneCurve, c2: &PlaneCurve, p: ElasticParams) -> Result<InjectivityReport> {
    let (k1, k2) = (c1.segment_count(), c2.segment_count());
    if k1 != k2 {
        return Err(ElasticError::SegmentMismatch { left: k1, right: k2 });
    }
    let (p1, p2) = (c1.polar_decompose(), c2.polar_decompose());
    let tol = 1e-9;
    let same_radii = c1.params().iter().zip(c2.params()).all(|(a, b)| (a - b).abs() <= tol)
        && p1.r.iter().zip(&p2.r).all(|(a, b)| (a - b).abs() <= tol * a.max(*b));
    // Signed turns, with the first angle standing in for the first turn.
    let signed = |theta: &[f64]| -> Vec<f64> {
        let mut out = vec![theta[0]];
        out.extend(theta.windows(2).map(|w| w[1] - w[0]));
        out
    };
    let (s1, s2) = (signed(&p1.theta), signed(&p2.theta));
    let period = 4.0 * p.b() / p.a() * PI;
    let mut multiples = Vec::with_capacity(k1);
    let mut integer_relations = true;
    for (x, y) in s1.iter().zip(&s2) {
        let m = (x - y) / period;
        if (m - m.round()).abs() * period > tol {
            integer_relations = false;
            break;
        }
        multiples.push(m.round() as i64);
    }
    if !integer_relations {
        multiples.clear();
    }
    let bound = PI / p.rho();
    let bounded = |c: &PlaneCurve| c.exterior_angles().iter().all(|&d| d < bound);
    let bounded_angles = bounded(c1) && bounded(c2);
    let transforms_coincide = same_radii && integer_relations;
    let identical = c1
        .normalize(true, false)
        .vertices()
        .iter()
        .zip(c2.normalize(true, false).vertices())
        .all(|(a, b)| (a - b).norm() <= tol * c1.arclength());
    let q1 = forward(c1, p);
    let q2 = forward(c2, p);
    let transform_gap = q1
        .samples()
        .iter()
        .zip(q2.samples())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(InjectivityReport {
        same_radii,
        integer_relations,
        multiples,
        transforms_coincide,
        bounded_angles,
        non_injective: transforms_coincide && !identical,
        transform_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn open_wave(phase: f64) -> PlaneCurve {
        let pts: Vec<(f64, f64)> = (0..=24)
            .map(|i| {
                let x = i as f64 / 24.0;
                (x, 0.25 * (6.0 * x + phase).sin())
            })
            .collect();
        PlaneCurve::from_points(&pts).unwrap()
    }

    fn small_opts() -> MatchOptions {
        MatchOptions {
            grid_n: 24,
            ..MatchOptions::default()
        }
    }

    #[test]
    fn self_match_is_zero() {
        let c = open_wave(0.0);
        let r = match_open(&c, &c, ElasticParams::srvf(), &small_opts()).unwrap();
        assert!(r.distance < 1e-12);
        assert!(r.gamma.is_identity(1e-12));
    }

    #[test]
    fn rotated_copy_matches() {
        let c = open_wave(0.3);
        let p = ElasticParams::new(1.0, 0.3).unwrap();
        let r = match_open(
            &c,
            &c.rotate(0.9).translate(Complex64::new(3.0, -1.0)),
            p,
            &small_opts(),
        )
        .unwrap();
        assert!(r.distance <= 1e-8, "{}", r.distance);
        assert!(r.gamma.is_identity(1e-9));
    }

    #[test]
    fn closed_seed_recovery() {
        let verts: Vec<Complex64> = (0..32)
            .map(|j| {
                let s = std::f64::consts::TAU * j as f64 / 32.0;
                Complex64::from_polar(1.0 + 0.3 * (3.0 * s).cos() + 0.1 * s.sin(), s)
            })
            .collect();
        let c1 = PlaneCurve::closed_from_loop(verts).unwrap();
        let c2 = c1.cyclic_shift(7).unwrap();
        let opts = MatchOptions {
            grid_n: 32,
            ..MatchOptions::default()
        };
        let r = match_closed(&c1, &c2, ElasticParams::from_ratio(0.5).unwrap(), &opts).unwrap();
        assert_eq!((r.seed + 7) % 32, 0);
        assert!(r.distance <= 1e-8);
    }

    #[test]
    fn injectivity_counterexample() {
        let theta = PI / 2.0;
        let c1 = PlaneCurve::from_points(&[(0., 0.), (0.5, 0.), (1.0, 0.)]).unwrap();
        let corner = Complex64::from_polar(0.5, theta) + 0.5;
        let c2 =
            PlaneCurve::from_vertices(vec![Complex64::new(0., 0.), Complex64::new(0.5, 0.), corner], false).unwrap();
        let p = ElasticParams::from_ratio(2.0 * PI / theta).unwrap();
        let report = injectivity_check(&c1, &c2, p).unwrap();
        assert!(report.transforms_coincide);
        assert!(report.non_injective);
        assert!(!report.bounded_angles);
        assert!(report.transform_gap < 1e-12);
        assert_eq!(report.multiples, vec![0, -1]);

        let p = ElasticParams::from_ratio(0.8).unwrap();
        let report = injectivity_check(&c1, &c2, p).unwrap();
        assert!(report.bounded_angles && !report.transforms_coincide);

        let short = PlaneCurve::from_points(&[(0., 0.), (1., 0.)]).unwrap();
        assert!(matches!(
            injectivity_check(&c1, &short, p),
            Err(ElasticError::SegmentMismatch { .. })
        ));
    }
}
