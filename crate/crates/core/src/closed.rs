//! Closure constraint for closed curves in transform space.
//!
//! The defect `f(q)` is the endpoint of the inverse-transformed curve, so a
//! transformed curve comes from a closed curve exactly when `f(q) = 0`. The
//! constraint has codimension two; its normal space is spanned by the L2
//! gradients of `Re f` and `Im f`.

use num_complex::Complex64;

use crate::error::{ElasticError, Result};
use crate::transform::{increments, TransformedCurve};

/// `f(q)` together with the gradients of its real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureDefect {
    pub value: Complex64,
    pub grad_re: TransformedCurve,
    pub grad_im: TransformedCurve,
}

/// Endpoint `(1/4b^2) int |q|^2 (q/|q|)^{2b/a} dt` of the inverse curve.
pub fn closure_defect(q: &TransformedCurve) -> Complex64 {
    let phase = q.unwrapped_phase();
    increments(q, &phase).map(|(z, dt)| z * dt).sum()
}

/// L2 gradients of `Re f` and `Im f`, using the same phase unwrapping as the inverse.
pub fn closure_gradients(q: &TransformedCurve) -> (TransformedCurve, TransformedCurve) {
    let p = q.elastic();
    let b = p.b();
    let ratio = b / p.a();
    let k = 1.0 / p.rho();
    let coef = 1.0 / (2.0 * b * b);
    let phase = q.unwrapped_phase();
    let mut re = Vec::with_capacity(q.segment_count());
    let mut im = Vec::with_capacity(q.segment_count());
    for (z, phi) in q.samples().iter().zip(phase) {
        let u = Complex64::from_polar(1.0, k * phi);
        re.push(Complex64::new(u.re, -ratio * u.im) * z * coef);
        im.push(Complex64::new(u.im, ratio * u.re) * z * coef);
    }
    (q.with_samples(re), q.with_samples(im))
}

pub fn closure_state(q: &TransformedCurve) -> ClosureDefect {
    let (grad_re, grad_im) = closure_gradients(q);
    ClosureDefect {
        value: closure_defect(q),
        grad_re,
        grad_im,
    }
}

/// Settings for [`project_to_closed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOptions {
    /// Target `|f|`; `None` means `1e-6 (2b)^2`.
    pub tol: Option<f64>,
    pub max_iter: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            tol: None,
            max_iter: 200,
        }
    }
}

impl ProjectionOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol: Some(tol),
            ..Self::default()
        }
    }

    pub fn tolerance_for(&self, q: &TransformedCurve) -> f64 {
        self.tol.unwrap_or_else(|| {
            let r = q.elastic().sphere_radius();
            1e-6 * r * r
        })
    }
}

/// Result of a closure projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub q: TransformedCurve,
    pub residual: f64,
    pub iterations: usize,
    /// `|f|` after each accepted step, starting with the input.
    pub history: Vec<f64>,
}

/// Failed projection, carrying the best iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionFailure {
    pub error: ElasticError,
    pub best: Projection,
}

const MAX_CONDITION: f64 = 1e12;
const MAX_HALVINGS: usize = 40;

/// Moves `q` onto the closed-curve submanifold `f = 0`.
///
/// Each step solves the 2x2 Gram system `J d = -f` in the span of the two
/// closure gradients and halves the step until `|f|` decreases.
#[allow(clippy::result_large_err)]
pub fn project_to_closed(
    q: &TransformedCurve,
    opts: ProjectionOptions,
) -> std::result::Result<Projection, ProjectionFailure> {
    let tol = opts.tolerance_for(q);
    let mut current = q.clone();
    let mut f = closure_defect(&current);
    let mut history = vec![f.norm()];
    let fail = |error, q: TransformedCurve, history: Vec<f64>, iterations| {
        let residual = *history.last().unwrap();
        Err(ProjectionFailure {
            error,
            best: Projection {
                q,
                residual,
                iterations,
                history,
            },
        })
    };
    for iteration in 0..opts.max_iter {
        if f.norm() <= tol {
            return Ok(Projection {
                q: current,
                residual: f.norm(),
                iterations: iteration,
                history,
            });
        }
        let (g_re, g_im) = closure_gradients(&current);
        let j11 = g_re.norm_sq();
        let j22 = g_im.norm_sq();
        let j12 = g_re.inner(&g_im).re;
        let det = j11 * j22 - j12 * j12;
        let trace = j11 + j22;
        let disc = ((j11 - j22).powi(2) + 4.0 * j12 * j12).sqrt();
        let (hi, lo) = (0.5 * (trace + disc), 0.5 * (trace - disc));
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) || det <= 0.0 {
            return fail(
                ElasticError::SingularJacobian { condition },
                current,
                history,
                iteration,
            );
        }
        let d_re = (-f.re * j22 + f.im * j12) / det;
        let d_im = (-f.im * j11 + f.re * j12) / det;
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let (s_re, s_im) = (step * d_re, step * d_im);
            let trial = current.with_samples(
                current
                    .samples()
                    .iter()
                    .zip(g_re.samples().iter().zip(g_im.samples()))
                    .map(|(z, (gr, gi))| z + gr * s_re + gi * s_im)
                    .collect(),
            );
            let f_trial = closure_defect(&trial);
            if f_trial.norm() < f.norm() {
                accepted = Some((trial, f_trial));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((trial, f_trial)) => {
                current = trial;
                f = f_trial;
                history.push(f.norm());
            }
            None => {
                let residual = f.norm();
                return fail(
                    ElasticError::NoConvergence {
                        iterations: iteration,
                        residual,
                    },
                    current,
                    history,
                    iteration,
                );
            }
        }
    }
    if f.norm() <= tol {
        return Ok(Projection {
            q: current,
            residual: f.norm(),
            iterations: opts.max_iter,
            history,
        });
    }
    let residual = f.norm();
    fail(
        ElasticError::NoConvergence {
            iterations: opts.max_iter,
            residual,
        },
        current,
        history,
        opts.max_iter,
    )
}

/// Convenience wrapper returning only the error on failure.
pub fn project(q: &TransformedCurve, opts: ProjectionOptions) -> Result<Projection> {
    project_to_closed(q, opts).map_err(|f| f.error)
}

/// C0 check of `q(1) = q(0) exp(i (a/b) pi l)` on the last and first pieces.
///
/// For PL data this is only meaningful when the seam sits inside a straight
/// edge, so the first and last pieces belong to the same edge.
pub fn check_membership_v(q: &TransformedCurve, l: i64) -> bool {
    let p = q.elastic();
    let first = q.samples()[0];
    let last = q.samples()[q.segment_count() - 1];
    let expected = first * Complex64::from_polar(1.0, std::f64::consts::PI * p.a() / p.b() * l as f64);
    (last - expected).norm() <= 1e-9 * first.norm().max(last.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ElasticParams, PlaneCurve};
    use crate::transform::forward;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> PlaneCurve {
        PlaneCurve::closed_from_loop(vec![c(0., 0.), c(1., 0.), c(1., 1.), c(0., 1.)]).unwrap()
    }

    /// Square whose seam is the midpoint of its bottom edge.
    fn square_mid_seam() -> PlaneCurve {
        PlaneCurve::closed_from_loop(vec![c(0.5, 0.), c(1., 0.), c(1., 1.), c(0., 1.), c(0., 0.)]).unwrap()
    }

    #[test]
    fn defect_of_closed_and_open_curves() {
        let p = ElasticParams::new(0.8, 0.6).unwrap();
        assert!(closure_defect(&forward(&square(), p)).norm() < 1e-12);
        let seg = PlaneCurve::from_points(&[(0., 0.), (2., 1.)]).unwrap();
        assert!((closure_defect(&forward(&seg, p)) - c(2., 1.)).norm() < 1e-14);
    }

    #[test]
    fn gradients_for_constant_transform() {
        let p = ElasticParams::new(1.0, 0.5).unwrap();
        let q = forward(&PlaneCurve::from_points(&[(0., 0.), (1., 0.)]).unwrap(), p);
        let (gr, gi) = closure_gradients(&q);
        // u = 1: grad Re = q / 2b^2 = 2, grad Im = i (b/a) q / 2b^2 = i
        assert!((gr.samples()[0] - c(2., 0.)).norm() < 1e-15);
        assert!((gi.samples()[0] - c(0., 1.)).norm() < 1e-15);
    }

    #[test]
    fn membership() {
        let p = ElasticParams::new(0.6, 0.5).unwrap();
        let q = forward(&square_mid_seam(), p);
        assert!(check_membership_v(&q, 1));
        assert!(!check_membership_v(&q, 0));
        let unit = ElasticParams::new(1.0, 0.5).unwrap();
        let q = forward(&square_mid_seam(), unit);
        for l in -2..3 {
            assert_eq!(check_membership_v(&q, l), check_membership_v(&q, l + 2));
        }
    }

    #[test]
    fn projection_fixed_point() {
        let q = forward(&square(), ElasticParams::srvf());
        let out = project_to_closed(&q, ProjectionOptions::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.q, q);
    }

    #[test]
    fn projection_closes_an_arc() {
        let arc: Vec<Complex64> = (0..=40)
            .map(|j| Complex64::from_polar(1.0, 1.5 * std::f64::consts::PI * j as f64 / 40.0))
            .collect();
        let curve = PlaneCurve::from_vertices(arc, false).unwrap().normalize(true, true);
        for rho in [1.25, 1.0, 0.5, 0.17] {
            let q = forward(&curve, ElasticParams::from_ratio(rho).unwrap());
            let out = project_to_closed(&q, ProjectionOptions::with_tol(1e-9)).unwrap();
            assert!(out.residual <= 1e-9, "rho {rho}: {}", out.residual);
            assert!(out.history.windows(2).all(|w| w[1] < w[0]));
        }
    }
}
