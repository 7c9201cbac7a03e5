//! Geodesics in transform space and their images as curves.
//!
//! Open curves use straight lines in L2, unit-length curves use great
//! circles on the sphere of radius `2b`, and closed curves project each
//! interior path point back onto the closure constraint. Curves along a path
//! are recovered by inverting each point with an argument lift that varies
//! continuously in the path parameter.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::closed::{closure_defect, project_to_closed, ProjectionOptions};
use crate::curve::{segment_at, ElasticParams, PlaneCurve, CLOSURE_TOLERANCE};
use crate::error::{ElasticError, Result};
use crate::matching::{match_curves, MatchOptions, MatchResult};
use crate::transform::{common_refinement, inverse_with_phase, merge_partitions, TransformedCurve};

/// Default number of path points.
pub const DEFAULT_STEPS: usize = 7;

/// Modulus (relative to `2b`) under which a flat path counts as singular.
pub const SINGULAR_FRACTION: f64 = 1e-6;

/// Distance to `pi` under which two sphere points count as antipodal.
pub const ANTIPODAL_MARGIN: f64 = 1e-6;

/// Allowed deviation of an input norm from `2b` for sphere paths.
pub const SPHERE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceTag {
    Flat,
    Sphere,
    Closed,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeodesicDiagnostics {
    /// Smallest `|q_u(t)|` over all path points.
    pub min_modulus: f64,
    /// The path passes within `SINGULAR_FRACTION * 2b` of zero.
    pub singular: bool,
    /// Closure residual of each path point (closed paths only).
    pub projection_residuals: Vec<f64>,
    /// Largest correction applied when renormalizing sphere samples.
    pub sphere_drift: f64,
}

/// Discretized path `q_u` at `u = 0, 1/(m-1), ..., 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub points: Vec<TransformedCurve>,
    pub times: Vec<f64>,
    pub distance: f64,
    pub space: SpaceTag,
    pub diagnostics: GeodesicDiagnostics,
}

impl GeodesicPath {
    /// `sum ||p_{k+1} - p_k||`.
    pub fn path_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }

    /// `sum ||p_{k+1} - p_k||^2`.
    pub fn energy(&self) -> f64 {
        path_energy(&self.points)
    }
}

fn path_energy(points: &[TransformedCurve]) -> f64 {
    points.windows(2).map(|w| w[0].distance(&w[1]).powi(2)).sum()
}

fn times(m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(ElasticError::InvalidArgument(format!(
            "a path needs at least 2 points, got {m}"
        )));
    }
    Ok((0..m).map(|k| k as f64 / (m - 1) as f64).collect())
}

fn min_modulus(points: &[TransformedCurve]) -> f64 {
    points
        .iter()
        .map(TransformedCurve::min_modulus)
        .fold(f64::INFINITY, f64::min)
}

/// Straight line `(1 - u) q0 + u q1` in L2.
pub fn flat_geodesic(q0: &TransformedCurve, q1: &TransformedCurve, m: usize) -> Result<GeodesicPath> {
    let times = times(m)?;
    let (a, b) = common_refinement(q0, q1);
    let points: Vec<_> = times.iter().map(|&u| a.combine(1.0 - u, &b, u)).collect();
    let floor = min_modulus(&points);
    let threshold = SINGULAR_FRACTION * q0.elastic().sphere_radius();
    let singular = floor < threshold;
    if singular {
        log::warn!("flat geodesic passes near zero (min |q_u| = {floor:e})");
    }
    Ok(GeodesicPath {
        distance: a.distance(&b),
        points,
        times,
        space: SpaceTag::Flat,
        diagnostics: GeodesicDiagnostics {
            min_modulus: floor,
            singular,
            ..Default::default()
        },
    })
}

fn check_on_sphere(q: &TransformedCurve) -> Result<()> {
    let radius = q.elastic().sphere_radius();
    let norm = q.norm();
    if (norm - radius).abs() > SPHERE_TOLERANCE {
        return Err(ElasticError::OffSphere { radius, norm });
    }
    Ok(())
}

/// Great circle between two points on the sphere of radius `2b`.
pub fn sphere_geodesic(q0: &TransformedCurve, q1: &TransformedCurve, m: usize) -> Result<GeodesicPath> {
    let times = times(m)?;
    check_on_sphere(q0)?;
    check_on_sphere(q1)?;
    let radius = q0.elastic().sphere_radius();
    let (a, b) = common_refinement(q0, q1);
    let cos = (a.inner(&b).re / (radius * radius)).clamp(-1.0, 1.0);
    let angle = cos.acos();
    if angle >= PI - ANTIPODAL_MARGIN {
        return Err(ElasticError::Antipodal { angle });
    }
    let mut drift: f64 = 0.0;
    let points: Vec<_> = times
        .iter()
        .map(|&u| {
            if u == 0.0 {
                return a.clone();
            }
            if u == 1.0 {
                return b.clone();
            }
            let p = if angle < 1e-12 {
                a.combine(1.0 - u, &b, u)
            } else {
                let s = angle.sin();
                a.combine(((1.0 - u) * angle).sin() / s, &b, (u * angle).sin() / s)
            };
            let norm = p.norm();
            let off = (norm - radius).abs();
            drift = drift.max(off);
            if off > 1e-12 {
                p.scale(radius / norm)
            } else {
                p
            }
        })
        .collect();
    Ok(GeodesicPath {
        diagnostics: GeodesicDiagnostics {
            min_modulus: min_modulus(&points),
            sphere_drift: drift,
            ..Default::default()
        },
        distance: radius * angle,
        points,
        times,
        space: SpaceTag::Sphere,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClosedGeodesicOptions {
    /// Interpolate along the sphere instead of a straight line.
    pub sphere: bool,
    pub projection: ProjectionOptions,
}

/// Geodesic between closed-curve transforms by projecting each interior
/// point of the ambient path onto the closure constraint.
pub fn closed_geodesic(
    q0: &TransformedCurve,
    q1: &TransformedCurve,
    m: usize,
    opts: ClosedGeodesicOptions,
) -> Result<GeodesicPath> {
    for (index, q) in [(0, q0), (m.saturating_sub(1), q1)] {
        let residual = closure_defect(q).norm();
        if residual > opts.projection.tolerance_for(q) {
            return Err(ElasticError::PathProjection { index, residual });
        }
    }
    let ambient = if opts.sphere {
        sphere_geodesic(q0, q1, m)?
    } else {
        flat_geodesic(q0, q1, m)?
    };
    let radius = q0.elastic().sphere_radius();
    let last = ambient.points.len() - 1;
    let mut points = Vec::with_capacity(ambient.points.len());
    let mut residuals = Vec::with_capacity(ambient.points.len());
    for (index, p) in ambient.points.into_iter().enumerate() {
        if index == 0 || index == last {
            residuals.push(closure_defect(&p).norm());
            points.push(p);
            continue;
        }
        let projected = project_to_closed(&p, opts.projection).map_err(|failure| ElasticError::PathProjection {
            index,
            residual: failure.best.residual,
        })?;
        let q = if opts.sphere {
            // f(lambda q) = lambda^2 f(q), so rescaling keeps the curve closed.
            projected.q.scale(radius / projected.q.norm())
        } else {
            projected.q
        };
        residuals.push(closure_defect(&q).norm());
        points.push(q);
    }
    let distance = points.windows(2).map(|w| w[0].distance(&w[1])).sum();
    Ok(GeodesicPath {
        diagnostics: GeodesicDiagnostics {
            min_modulus: min_modulus(&points),
            singular: ambient.diagnostics.singular,
            projection_residuals: residuals,
            sphere_drift: ambient.diagnostics.sphere_drift,
        },
        points,
        times: ambient.times,
        distance,
        space: SpaceTag::Closed,
    })
}

/// Settings for [`shape_geodesic`] and [`shape_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicOptions {
    pub steps: usize,
    /// Rescale to unit length and work on the sphere.
    pub fixed_length: bool,
    pub matching: MatchOptions,
    pub projection: ProjectionOptions,
    pub straightening: StraighteningOptions,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            fixed_length: false,
            matching: MatchOptions::default(),
            projection: ProjectionOptions::default(),
            straightening: StraighteningOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraighteningOptions {
    /// Stop once a sweep changes the energy by less than this.
    pub energy_tol: f64,
    pub max_sweeps: usize,
    /// Fail when the final energy exceeds this multiple of the flat bound.
    pub bound_factor: f64,
}

impl Default for StraighteningOptions {
    fn default() -> Self {
        Self {
            energy_tol: 1e-8,
            max_sweeps: 10_000,
            bound_factor: 2.0,
        }
    }
}

/// A transform-space path together with the curves it represents.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeGeodesic {
    pub path: GeodesicPath,
    /// Argument lift of each path point, on the path partition.
    pub phases: Vec<Vec<f64>>,
    pub curves: Vec<PlaneCurve>,
    /// First input after normalization.
    pub start: PlaneCurve,
    /// Second input after normalization, seed shift, warp and rotation.
    pub end: PlaneCurve,
    pub matching: MatchResult,
    /// The continuous lift disagreed with the endpoints and the path was straightened.
    pub straightened: bool,
    pub straightening_sweeps: usize,
}

/// Piecewise-constant values on `src` resampled onto the finer partition `dst`.
fn refine_values(src: &[f64], values: &[f64], dst: &[f64]) -> Vec<f64> {
    dst.windows(2)
        .map(|w| values[segment_at(src, 0.5 * (w[0] + w[1]))])
        .collect()
}

/// `rho * theta` for the first curve, on partition `bp`.
fn start_phase(c: &PlaneCurve, p: ElasticParams, bp: &[f64]) -> Vec<f64> {
    let polar = c.polar_decompose();
    let lifted: Vec<f64> = polar.theta.iter().map(|t| p.rho() * t).collect();
    refine_values(&polar.params, &lifted, bp)
}

/// `rho * theta_2(gamma(t)) + phi` for the aligned second curve, on partition `bp`.
fn end_phase(m: &MatchResult, p: ElasticParams, bp: &[f64]) -> Vec<f64> {
    let polar = m.c2_base.polar_decompose();
    bp.windows(2)
        .map(|w| {
            let s = m.gamma.eval(0.5 * (w[0] + w[1]));
            p.rho() * polar.theta[segment_at(&polar.params, s)] + m.rotation
        })
        .collect()
}

/// Lifts along the path, each chosen nearest the previous one while walking
/// through intermediate straight-line substeps.
fn track_lifts(points: &[TransformedCurve], start: Vec<f64>) -> Vec<Vec<f64>> {
    const SUBSTEPS: usize = 16;
    let mut lifts = vec![start];
    for w in points.windows(2) {
        let mut current = lifts.last().unwrap().clone();
        for s in 1..=SUBSTEPS {
            let f = s as f64 / SUBSTEPS as f64;
            current = w[0].combine(1.0 - f, &w[1], f).lift_near(&current);
        }
        current = w[1].lift_near(&current);
        lifts.push(current);
    }
    lifts
}

/// Common offset `2 pi k` between two lifts, if there is one.
fn common_offset(lift: &[f64], target: &[f64]) -> Option<f64> {
    let k = ((lift[0] - target[0]) / TAU).round();
    let ok = lift.iter().zip(target).all(|(l, t)| (l - t - TAU * k).abs() < 1e-6);
    ok.then_some(TAU * k)
}

/// Steps of the lift stay within `rho pi`, so the inverted curve maps back to the point.
fn steps_admissible(lift: &[f64], rho: f64) -> bool {
    lift.windows(2).all(|w| (w[1] - w[0]).abs() <= rho * PI + 1e-9)
}

struct Relaxed {
    points: Vec<TransformedCurve>,
    phases: Vec<Vec<f64>>,
    energy: f64,
    sweeps: usize,
}

/// Gauss-Seidel sweeps over the interior phases with moduli held fixed,
/// starting from linear interpolation between the endpoint lifts.
fn relax(
    points: &[TransformedCurve],
    moduli: &[Vec<f64>],
    start: &[f64],
    end: &[f64],
    opts: StraighteningOptions,
) -> Relaxed {
    let m = points.len();
    let mut points = points.to_vec();
    let mut phases: Vec<Vec<f64>> = (0..m)
        .map(|k| {
            let u = k as f64 / (m - 1) as f64;
            start.iter().zip(end).map(|(s, e)| (1.0 - u) * s + u * e).collect()
        })
        .collect();
    for k in 1..m - 1 {
        points[k] = points[k].with_samples(
            moduli[k]
                .iter()
                .zip(&phases[k])
                .map(|(&r, &t)| Complex64::from_polar(r, t))
                .collect(),
        );
    }
    let mut energy = path_energy(&points);
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        for k in 1..m - 1 {
            let samples: Vec<Complex64> = (0..moduli[k].len())
                .map(|j| {
                    // Pointwise minimizer of the two adjacent terms, lifted near the current phase.
                    let pull = points[k - 1].samples()[j] + points[k + 1].samples()[j];
                    let current = phases[k][j];
                    if pull.norm() > 0.0 {
                        phases[k][j] = current + (pull * Complex64::from_polar(1.0, -current)).arg();
                    }
                    Complex64::from_polar(moduli[k][j], phases[k][j])
                })
                .collect();
            points[k] = points[k].with_samples(samples);
        }
        let next = path_energy(&points);
        let change = (energy - next).abs();
        energy = next;
        if change < opts.energy_tol {
            break;
        }
    }
    Relaxed {
        points,
        phases,
        energy,
        sweeps,
    }
}

/// Replaces the interior of `points` by a path whose argument lifts run
/// continuously from `start` to `end + 2 pi k`, keeping the moduli. The
/// offset `k` giving the lowest energy among those nearest the mean gap wins.
fn straighten(
    points: &mut [TransformedCurve],
    start: &[f64],
    end: &[f64],
    opts: StraighteningOptions,
) -> Result<(Vec<Vec<f64>>, usize)> {
    let m = points.len();
    let weights: Vec<f64> = points[0].dt();
    let mean_gap: f64 = start
        .iter()
        .zip(end)
        .zip(&weights)
        .map(|((s, e), w)| (s - e) * w)
        .sum::<f64>();
    let center = (mean_gap / TAU).round();
    let moduli: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.samples().iter().map(|z| z.norm()).collect())
        .collect();
    let mut best: Option<(Relaxed, Vec<f64>)> = None;
    for k in [center - 1.0, center, center + 1.0] {
        let shifted: Vec<f64> = end.iter().map(|e| e + TAU * k).collect();
        let relaxed = relax(points, &moduli, start, &shifted, opts);
        if best.as_ref().is_none_or(|(b, _)| relaxed.energy < b.energy) {
            best = Some((relaxed, shifted));
        }
    }
    let (relaxed, shifted) = best.expect("three offsets tried");
    let bound = points[0].distance(&points[m - 1]).powi(2) / (m - 1) as f64;
    if relaxed.energy > opts.bound_factor * bound + 1e-14 {
        return Err(ElasticError::StraighteningFailed {
            energy: relaxed.energy,
            bound,
        });
    }
    points.clone_from_slice(&relaxed.points);
    let mut phases = relaxed.phases;
    phases[m - 1] = shifted;
    Ok((phases, relaxed.sweeps))
}

fn invert_point(q: &TransformedCurve, phase: &[f64], closed: bool) -> Result<PlaneCurve> {
    let open = inverse_with_phase(q, phase)?;
    if !closed {
        return Ok(open);
    }
    let gap = (open.vertices()[open.vertices().len() - 1] - open.vertices()[0]).norm();
    if gap <= CLOSURE_TOLERANCE * open.arclength() {
        PlaneCurve::new(open.vertices().to_vec(), open.params().to_vec(), true)
    } else {
        Ok(open)
    }
}

/// Aligns two curves and returns the geodesic between them together with
/// the curve at each path point.
pub fn shape_geodesic(
    c1: &PlaneCurve,
    c2: &PlaneCurve,
    p: ElasticParams,
    opts: &GeodesicOptions,
) -> Result<ShapeGeodesic> {
    let match_opts = MatchOptions {
        fixed_length: opts.fixed_length,
        ..opts.matching
    };
    let matched = match_curves(c1, c2, p, &match_opts)?;
    let closed = c1.is_closed() && c2.is_closed();
    let q0 = &matched.q1;
    let q1 = &matched.q2_aligned;
    // Tight enough that inverted path points snap shut.
    let projection = ProjectionOptions {
        tol: Some(opts.projection.tolerance_for(q0).min(1e-10 * p.sphere_radius().powi(2))),
        ..opts.projection
    };
    let mut path = if closed {
        closed_geodesic(
            q0,
            q1,
            opts.steps,
            ClosedGeodesicOptions {
                sphere: opts.fixed_length,
                projection,
            },
        )?
    } else if opts.fixed_length {
        sphere_geodesic(q0, q1, opts.steps)?
    } else {
        flat_geodesic(q0, q1, opts.steps)?
    };
    let bp = merge_partitions(q0.params(), q1.params());
    let start = matched.c1_base.clone();
    let phase0 = start_phase(&start, p, &bp);
    let phase1 = end_phase(&matched, p, &bp);
    let mut phases = track_lifts(&path.points, phase0.clone());
    let tracked_end = phases.last().unwrap();
    let offset = common_offset(tracked_end, &phase1);
    let admissible = p.rho() <= 1.0 || phases.iter().all(|l| steps_admissible(l, p.rho()));
    let mut straightened = false;
    let mut sweeps = 0;
    let end_lift = match offset {
        Some(shift) if admissible => phase1.iter().map(|t| t + shift).collect::<Vec<_>>(),
        _ => {
            log::info!("argument lift inconsistent along path; straightening");
            let (lifts, n) = straighten(&mut path.points, &phase0, &phase1, opts.straightening)?;
            if closed {
                reproject(&mut path, projection)?;
            }
            path.distance = path.path_length();
            path.diagnostics.min_modulus = min_modulus(&path.points);
            straightened = true;
            sweeps = n;
            phases = path.points.iter().zip(&lifts).map(|(q, l)| q.lift_near(l)).collect();
            phases[0] = phase0.clone();
            let end = lifts.last().unwrap().clone();
            let last = phases.len() - 1;
            phases[last] = end.clone();
            end
        }
    };
    let curves = path
        .points
        .iter()
        .zip(&phases)
        .map(|(q, l)| invert_point(q, l, closed))
        .collect::<Result<Vec<_>>>()?;
    let end = invert_point(&q1.refine(&bp), &end_lift, closed)?;
    Ok(ShapeGeodesic {
        path,
        phases,
        curves,
        start,
        end,
        matching: matched,
        straightened,
        straightening_sweeps: sweeps,
    })
}

fn reproject(path: &mut GeodesicPath, opts: ProjectionOptions) -> Result<()> {
    let last = path.points.len() - 1;
    for index in 1..last {
        let projected =
            project_to_closed(&path.points[index], opts).map_err(|failure| ElasticError::PathProjection {
                index,
                residual: failure.best.residual,
            })?;
        path.diagnostics.projection_residuals[index] = projected.residual;
        path.points[index] = projected.q;
    }
    Ok(())
}

/// Shape distance between two curves: the L2 distance after alignment for
/// open curves, the great-circle distance with `fixed_length`, and the
/// projected path length for closed curves.
pub fn shape_distance(c1: &PlaneCurve, c2: &PlaneCurve, p: ElasticParams, opts: &GeodesicOptions) -> Result<f64> {
    let match_opts = MatchOptions {
        fixed_length: opts.fixed_length,
        ..opts.matching
    };
    let matched = match_curves(c1, c2, p, &match_opts)?;
    if c1.is_closed() && c2.is_closed() {
        let path = closed_geodesic(
            &matched.q1,
            &matched.q2_aligned,
            opts.steps,
            ClosedGeodesicOptions {
                sphere: opts.fixed_length,
                projection: opts.projection,
            },
        )?;
        return Ok(path.distance);
    }
    Ok(if opts.fixed_length {
        matched.sphere_distance()
    } else {
        matched.distance
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::forward;

    fn constant(value: Complex64, p: ElasticParams) -> TransformedCurve {
        TransformedCurve::new(vec![value], vec![0.0, 1.0], p).unwrap()
    }

    fn wave(amplitude: f64, freq: f64, n: usize) -> PlaneCurve {
        let pts: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let x = i as f64 / n as f64;
                (x, amplitude * (freq * x).sin())
            })
            .collect();
        PlaneCurve::from_points(&pts).unwrap()
    }

    fn blob(k: usize, bump: f64) -> PlaneCurve {
        let verts = (0..k)
            .map(|j| {
                let s = TAU * j as f64 / k as f64;
                Complex64::from_polar(1.0 + bump * (2.0 * s).cos(), s)
            })
            .collect();
        PlaneCurve::closed_from_loop(verts).unwrap()
    }

    /// Largest vertex distance between `a` and `b` evaluated on `a`'s breakpoints.
    fn curve_gap(a: &PlaneCurve, b: &PlaneCurve) -> f64 {
        a.params()
            .iter()
            .zip(a.vertices())
            .map(|(&t, z)| (z - b.eval(t)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn flat_constants() {
        let p = ElasticParams::new(1.0, 0.75).unwrap();
        let two_b = 1.5;
        let path = flat_geodesic(
            &constant(Complex64::new(two_b, 0.0), p),
            &constant(Complex64::new(0.0, two_b), p),
            3,
        )
        .unwrap();
        assert!((path.distance - two_b * 2f64.sqrt()).abs() < 1e-14);
        assert!((path.points[1].samples()[0] - Complex64::new(0.75, 0.75)).norm() < 1e-15);
        assert!(!path.diagnostics.singular);

        let anti = flat_geodesic(
            &constant(Complex64::new(two_b, 0.0), p),
            &constant(Complex64::new(-two_b, 0.0), p),
            3,
        )
        .unwrap();
        assert!(anti.diagnostics.singular);
        assert!(anti.diagnostics.min_modulus < 1e-15);
    }

    #[test]
    fn sphere_orthogonal_and_antipodal() {
        let p = ElasticParams::new(1.0, 0.75).unwrap();
        let q0 = constant(Complex64::new(1.5, 0.0), p);
        let q1 = constant(Complex64::new(0.0, 1.5), p);
        let path = sphere_geodesic(&q0, &q1, 5).unwrap();
        assert!((path.distance - PI * 0.75).abs() < 1e-14);
        assert!(path.points.iter().all(|q| (q.norm() - 1.5).abs() < 1e-12));
        let same = sphere_geodesic(&q0, &q0, 4).unwrap();
        assert_eq!(same.distance, 0.0);
        assert!(matches!(
            sphere_geodesic(&q0, &q0.scale(-1.0), 3),
            Err(ElasticError::Antipodal { .. })
        ));
        assert!(matches!(
            sphere_geodesic(&q0, &q0.scale(1.1), 3),
            Err(ElasticError::OffSphere { .. })
        ));
    }

    #[test]
    fn closed_path_residuals_and_length() {
        let p = ElasticParams::from_ratio(0.5).unwrap();
        let q0 = forward(&blob(24, 0.0).normalize(true, true), p);
        let q1 = forward(&blob(24, 0.3).normalize(true, true), p);
        let opts = ClosedGeodesicOptions::default();
        let path = closed_geodesic(&q0, &q1, 7, opts).unwrap();
        let tol = opts.projection.tolerance_for(&q0);
        assert!(path.diagnostics.projection_residuals.iter().all(|&r| r <= tol));
        assert!(path.distance >= q0.distance(&q1) - 1e-12);
        assert_eq!(path.space, SpaceTag::Closed);
    }

    #[test]
    fn identical_curves_give_constant_path() {
        let c = wave(0.2, 5.0, 20);
        let opts = GeodesicOptions {
            matching: MatchOptions {
                grid_n: 20,
                ..MatchOptions::default()
            },
            ..GeodesicOptions::default()
        };
        let sg = shape_geodesic(&c, &c, ElasticParams::srvf(), &opts).unwrap();
        assert!(sg.path.distance < 1e-12);
        for curve in &sg.curves {
            assert!(curve_gap(curve, &sg.start) < 1e-12);
        }
    }

    #[test]
    fn endpoints_invert_to_aligned_inputs() {
        let c1 = wave(0.2, 5.0, 20);
        let c2 = wave(0.35, 7.0, 26).rotate(0.4);
        let opts = GeodesicOptions {
            matching: MatchOptions {
                grid_n: 24,
                ..MatchOptions::default()
            },
            ..GeodesicOptions::default()
        };
        for rho in [2.0, 1.0, 0.5, 0.17] {
            let p = ElasticParams::from_ratio(rho).unwrap();
            let sg = shape_geodesic(&c1, &c2, p, &opts).unwrap();
            let first = &sg.curves[0];
            let last = sg.curves.last().unwrap();
            let scale = sg.start.arclength();
            assert!(curve_gap(first, &sg.start) < 1e-8 * scale, "rho {rho}");
            assert!(curve_gap(last, &sg.end) < 1e-8 * scale, "rho {rho}");
            // The aligned second curve is a rotated reparameterization of the input.
            let warped = sg.matching.c2_base.reparameterize(&sg.matching.gamma).unwrap();
            let k = warped.vertices().len() - 1;
            let turn = sg.end.eval(1.0) / warped.vertices()[k];
            let rotated = warped.rotate(turn.arg());
            assert!(curve_gap(&sg.end, &rotated) < 1e-8 * scale, "rho {rho}");
        }
    }

    #[test]
    fn closed_shape_geodesic_closes() {
        let p = ElasticParams::from_ratio(0.5).unwrap();
        let opts = GeodesicOptions {
            matching: MatchOptions {
                grid_n: 24,
                seed_stride: 4,
                ..MatchOptions::default()
            },
            fixed_length: true,
            ..GeodesicOptions::default()
        };
        let sg = shape_geodesic(&blob(24, 0.0), &blob(24, 0.25), p, &opts).unwrap();
        assert!(sg.curves.iter().all(PlaneCurve::is_closed));
        let d = shape_distance(&blob(24, 0.0), &blob(24, 0.25), p, &opts).unwrap();
        assert!((d - sg.path.distance).abs() < 1e-6 * d.max(1.0));
    }

    #[test]
    fn straightening_keeps_endpoints_and_bound() {
        let hook = PlaneCurve::from_points(&[(0., 0.), (1., 0.), (1.3, 0.5), (1.0, 0.9)]).unwrap();
        let line = PlaneCurve::from_points(&[(0., 0.), (1., 0.), (2., 0.), (3., 0.)]).unwrap();
        let opts = GeodesicOptions {
            matching: MatchOptions {
                grid_n: 12,
                ..MatchOptions::default()
            },
            ..GeodesicOptions::default()
        };
        for rho in [2.0, 3.0, 4.0] {
            let p = ElasticParams::from_ratio(rho).unwrap();
            let sg = shape_geodesic(&hook, &line, p, &opts).unwrap();
            assert!(sg.straightened, "rho {rho}");
            let scale = sg.start.arclength();
            assert!(curve_gap(&sg.curves[0], &sg.start) < 1e-8 * scale);
            assert!(curve_gap(sg.curves.last().unwrap(), &sg.end) < 1e-8 * scale);
            let bound = sg.path.points[0].distance(sg.path.points.last().unwrap()).powi(2) / 6.0;
            assert!(sg.path.energy() <= 2.0 * bound + 1e-12);
        }
    }

    #[test]
    fn straightening_reports_stall() {
        let hairpin = PlaneCurve::from_points(&[(0., 0.), (1., 0.), (1.0, 0.2), (0.0, 0.2)]).unwrap();
        let line = PlaneCurve::from_points(&[(0., 0.), (1., 0.), (2., 0.), (3., 0.)]).unwrap();
        let opts = GeodesicOptions {
            matching: MatchOptions {
                grid_n: 12,
                ..MatchOptions::default()
            },
            ..GeodesicOptions::default()
        };
        let p = ElasticParams::from_ratio(2.0).unwrap();
        assert!(matches!(
            shape_geodesic(&hairpin, &line, p, &opts),
            Err(ElasticError::StraighteningFailed { .. })
        ));
    }
}
