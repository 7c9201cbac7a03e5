//! The `F_{a,b}` transform taking the elastic metric to the flat L2 metric.
//!
//! A transformed PL curve is piecewise constant: one complex value per
//! segment, `q_j = 2b sqrt(r_j) exp(i rho theta_j)` with `rho = a / 2b`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::curve::{segment_at, validate_params, ElasticParams, PlaneCurve};
use crate::error::{ElasticError, Result};
use crate::reparam::Reparameterization;

/// Piecewise-constant complex function on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedCurve {
    samples: Vec<Complex64>,
    params: Vec<f64>,
    elastic: ElasticParams,
}

impl TransformedCurve {
    pub fn new(samples: Vec<Complex64>, params: Vec<f64>, elastic: ElasticParams) -> Result<Self> {
        validate_params(&params)?;
        if samples.len() + 1 != params.len() {
            return Err(ElasticError::InvalidParams(format!(
                "{} samples need {} breakpoints, got {}",
                samples.len(),
                samples.len() + 1,
                params.len()
            )));
        }
        Ok(Self {
            samples,
            params,
            elastic,
        })
    }

    pub(crate) fn from_parts(samples: Vec<Complex64>, params: Vec<f64>, elastic: ElasticParams) -> Self {
        debug_assert_eq!(samples.len() + 1, params.len());
        Self {
            samples,
            params,
            elastic,
        }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn elastic(&self) -> ElasticParams {
        self.elastic
    }

    pub fn segment_count(&self) -> usize {
        self.samples.len()
    }

    pub fn dt(&self) -> Vec<f64> {
        self.params.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Value at `t` (right-continuous, last piece closed).
    pub fn eval(&self, t: f64) -> Complex64 {
        self.samples[segment_at(&self.params, t.clamp(0.0, 1.0))]
    }

    pub fn norm_sq(&self) -> f64 {
        self.samples
            .iter()
            .zip(self.params.windows(2))
            .map(|(q, w)| q.norm_sqr() * (w[1] - w[0]))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn min_modulus(&self) -> f64 {
        self.samples.iter().map(|q| q.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Complex inner product `int q conj(other) dt`; the L2 metric is its real part.
    pub fn inner(&self, other: &TransformedCurve) -> Complex64 {
        if self.params == other.params {
            return self
                .samples
                .iter()
                .zip(&other.samples)
                .zip(self.params.windows(2))
                .map(|((a, b), w)| a * b.conj() * (w[1] - w[0]))
                .sum();
        }
        let (a, b) = common_refinement(self, other);
        a.inner(&b)
    }

    /// L2 distance, refining to a common partition when needed.
    pub fn distance(&self, other: &TransformedCurve) -> f64 {
        let (a, b) = if self.params == other.params {
            (self.clone(), other.clone())
        } else {
            common_refinement(self, other)
        };
        a.samples
            .iter()
            .zip(&b.samples)
            .zip(a.params.windows(2))
            .map(|((x, y), w)| (x - y).norm_sqr() * (w[1] - w[0]))
            .sum::<f64>()
            .sqrt()
    }

    /// Same function on a finer partition. `breakpoints` must contain every
    /// breakpoint of `self`.
    pub fn refine(&self, breakpoints: &[f64]) -> TransformedCurve {
        let samples = breakpoints.windows(2).map(|w| self.eval(0.5 * (w[0] + w[1]))).collect();
        Self::from_parts(samples, breakpoints.to_vec(), self.elastic)
    }

    /// Pointwise multiplication by `exp(i phi)`.
    pub fn rotate(&self, phi: f64) -> TransformedCurve {
        let w = Complex64::from_polar(1.0, phi);
        self.map(|q| q * w)
    }

    pub fn scale(&self, lambda: f64) -> TransformedCurve {
        self.map(|q| q * lambda)
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> TransformedCurve {
        Self::from_parts(
            self.samples.iter().map(|&q| f(q)).collect(),
            self.params.clone(),
            self.elastic,
        )
    }

    /// `alpha * self + beta * other` on the common refinement.
    pub fn combine(&self, alpha: f64, other: &TransformedCurve, beta: f64) -> TransformedCurve {
        let (a, b) = if self.params == other.params {
            (self.clone(), other.clone())
        } else {
            common_refinement(self, other)
        };
        let samples = a
            .samples
            .iter()
            .zip(&b.samples)
            .map(|(x, y)| x * alpha + y * beta)
            .collect();
        Self::from_parts(samples, a.params, self.elastic)
    }

    /// Argument of each piece, unwrapped so consecutive pieces differ by at
    /// most `pi`; the first is the principal argument.
    pub fn unwrapped_phase(&self) -> Vec<f64> {
        let mut phase = Vec::with_capacity(self.samples.len());
        phase.push(self.samples[0].arg());
        for j in 1..self.samples.len() {
            let step = (self.samples[j] * self.samples[j - 1].conj()).arg();
            phase.push(phase[j - 1] + step);
        }
        phase
    }

    /// Argument of each piece chosen nearest to `reference`.
    pub fn lift_near(&self, reference: &[f64]) -> Vec<f64> {
        self.samples
            .iter()
            .zip(reference)
            .map(|(q, &r)| r + (q * Complex64::from_polar(1.0, -r)).arg())
            .collect()
    }

    /// Same partition, new values.
    pub(crate) fn with_samples(&self, samples: Vec<Complex64>) -> TransformedCurve {
        Self::from_parts(samples, self.params.clone(), self.elastic)
    }
}

/// Union of two breakpoint sets; values closer than `1e-14` are merged.
pub fn merge_partitions(p1: &[f64], p2: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(p1.len() + p2.len());
    let (mut i, mut j) = (0, 0);
    while i < p1.len() || j < p2.len() {
        let next = if j >= p2.len() || (i < p1.len() && p1[i] <= p2[j]) {
            i += 1;
            p1[i - 1]
        } else {
            j += 1;
            p2[j - 1]
        };
        match out.last() {
            Some(&last) if next - last < 1e-14 => {}
            _ => out.push(next),
        }
    }
    let last = out.len() - 1;
    out[last] = 1.0;
    out
}

/// Both curves expressed on the union of their breakpoints.
pub fn common_refinement(q1: &TransformedCurve, q2: &TransformedCurve) -> (TransformedCurve, TransformedCurve) {
    let bp = merge_partitions(&q1.params, &q2.params);
    (q1.refine(&bp), q2.refine(&bp))
}

/// The transform `2b sqrt(r) exp(i rho theta)` on the canonical branch
/// (`theta_1` in `(-pi, pi]`).
pub fn forward(c: &PlaneCurve, p: ElasticParams) -> TransformedCurve {
    let polar = c.polar_decompose();
    let two_b = 2.0 * p.b();
    let rho = p.rho();
    let samples = polar
        .r
        .iter()
        .zip(&polar.theta)
        .map(|(&r, &theta)| Complex64::from_polar(two_b * r.sqrt(), rho * theta))
        .collect();
    TransformedCurve::from_parts(samples, polar.params, p)
}

/// Inverse transform, unwrapping the argument of `q` piece to piece.
pub fn inverse(q: &TransformedCurve) -> Result<PlaneCurve> {
    inverse_with_phase(q, &q.unwrapped_phase())
}

/// Inverse transform with an explicit lift of the argument of `q`.
pub fn inverse_with_phase(q: &TransformedCurve, phase: &[f64]) -> Result<PlaneCurve> {
    let mut vertices = Vec::with_capacity(q.samples.len() + 1);
    vertices.push(Complex64::new(0.0, 0.0));
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, dt) in increments(q, phase) {
        acc += z * dt;
        vertices.push(acc);
    }
    PlaneCurve::new(vertices, q.params.clone(), false)
}

/// Velocity of the inverse curve on each piece, with its parameter length.
pub(crate) fn increments<'a>(q: &'a TransformedCurve, phase: &'a [f64]) -> impl Iterator<Item = (Complex64, f64)> + 'a {
    let b = q.elastic.b();
    let k = 1.0 / q.elastic.rho();
    let scale = 1.0 / (4.0 * b * b);
    q.samples
        .iter()
        .zip(phase)
        .zip(q.params.windows(2))
        .map(move |((z, &phi), w)| (Complex64::from_polar(scale * z.norm_sqr(), k * phi), w[1] - w[0]))
}

pub fn rotate_curve(c: &PlaneCurve, psi: f64) -> PlaneCurve {
    c.rotate(psi)
}

pub fn rotate_transform(q: &TransformedCurve, phi: f64) -> TransformedCurve {
    q.rotate(phi)
}

/// Checks `F(lambda c) = sqrt(lambda) F(c)` within `1e-12` (relative to `|q|`).
pub fn scale_equivariance_check(c: &PlaneCurve, lambda: f64, p: ElasticParams) -> bool {
    if !(lambda > 0.0) {
        return false;
    }
    let scaled = forward(&c.scale(lambda), p);
    let expected = forward(c, p).scale(lambda.sqrt());
    scaled
        .samples
        .iter()
        .zip(&expected.samples)
        .all(|(x, y)| (x - y).norm() <= 1e-12 * y.norm().max(1.0))
}

/// The action `gamma * q = sqrt(gamma') (q o gamma)`.
///
/// The result lives on the union of `gamma`'s breakpoints and the preimages of
/// `q`'s breakpoints; pieces where `gamma` is flat carry zero.
pub fn reparam_action(gamma: &Reparameterization, q: &TransformedCurve) -> TransformedCurve {
    let bp = gamma.breakpoints();
    let vals = gamma.values();
    let mut params = vec![0.0];
    let mut samples = Vec::new();
    for k in 0..bp.len() - 1 {
        let (s0, s1, g0, g1) = (bp[k], bp[k + 1], vals[k], vals[k + 1]);
        let slope = (g1 - g0) / (s1 - s0);
        let mut cuts = vec![s0];
        if slope > 0.0 {
            let first = segment_at(&q.params, g0);
            for &tau in &q.params[first + 1..] {
                if tau >= g1 {
                    break;
                }
                if tau > g0 {
                    cuts.push(s0 + (tau - g0) / slope);
                }
            }
        }
        cuts.push(s1);
        let root = slope.sqrt();
        for w in cuts.windows(2) {
            if w[1] - w[0] < 1e-15 {
                continue;
            }
            let mid = g0 + slope * (0.5 * (w[0] + w[1]) - s0);
            samples.push(q.eval(mid) * root);
            params.push(w[1]);
        }
    }
    let last = params.len() - 1;
    params[last] = 1.0;
    TransformedCurve::from_parts(samples, params, q.elastic)
}

/// The elastic metric at `c` on vertexwise variations `h` and `k`:
/// `sum |v|^-3 (a^2 Im(v h'*) Im(v k'*) + b^2 Re(v h'*) Re(v k'*)) dt`.
pub fn pullback_metric_eval(c: &PlaneCurve, h: &[Complex64], k: &[Complex64], p: ElasticParams) -> Result<f64> {
    let n = c.vertices().len();
    if h.len() != n || k.len() != n {
        return Err(ElasticError::SegmentMismatch {
            left: n,
            right: h.len().min(k.len()),
        });
    }
    let (a2, b2) = (p.a() * p.a(), p.b() * p.b());
    let v = c.edge_vectors();
    let dt = c.dt();
    let total = (0..v.len())
        .map(|j| {
            let dh = (h[j + 1] - h[j]) / dt[j];
            let dk = (k[j + 1] - k[j]) / dt[j];
            let wh = v[j] * dh.conj();
            let wk = v[j] * dk.conj();
            (a2 * wh.im * wk.im + b2 * wh.re * wk.re) / v[j].norm().powi(3) * dt[j]
        })
        .sum();
    Ok(total)
}

/// Piecewise-constant curve on the cone `(4b^2 - a^2)(x^2 + y^2) = a^2 z^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeCurve {
    pub points: Vec<[f64; 3]>,
    pub params: Vec<f64>,
}

impl ConeCurve {
    pub fn norm_sq(&self) -> f64 {
        self.points
            .iter()
            .zip(self.params.windows(2))
            .map(|(p, w)| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) * (w[1] - w[0]))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
}

/// Maps `q = |w| e^{i phi}` to `((a/2b)|w| e^{i (2b/a) phi}, sqrt(4b^2 - a^2)/(2b) |w|)`.
pub fn cone_projection(q: &TransformedCurve) -> Result<ConeCurve> {
    let p = q.elastic;
    let (a, b) = (p.a(), p.b());
    if 2.0 * b < a {
        return Err(ElasticError::ParamRegime { a, b });
    }
    let planar = a / (2.0 * b);
    let height = (4.0 * b * b - a * a).sqrt() / (2.0 * b);
    let k = 1.0 / p.rho();
    let points = q
        .samples
        .iter()
        .zip(q.unwrapped_phase())
        .map(|(w, phi)| {
            let m = w.norm();
            let z = Complex64::from_polar(planar * m, k * phi);
            [z.re, z.im, height * m]
        })
        .collect();
    Ok(ConeCurve {
        points,
        params: q.params.clone(),
    })
}

/// Cone transform computed straight from the curve: `|c'|^{1/2} (a T, sqrt(4b^2 - a^2))`.
pub fn cone_transform_direct(c: &PlaneCurve, p: ElasticParams) -> Result<ConeCurve> {
    let (a, b) = (p.a(), p.b());
    if 2.0 * b < a {
        return Err(ElasticError::ParamRegime { a, b });
    }
    let height = (4.0 * b * b - a * a).sqrt();
    let points = c
        .edge_vectors()
        .iter()
        .map(|v| {
            let root = v.norm().sqrt();
            let t = v / v.norm();
            [a * root * t.re, a * root * t.im, height * root]
        })
        .collect();
    Ok(ConeCurve {
        points,
        params: c.params().to_vec(),
    })
}

/// Number of distinct transform branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchCount {
    Finite(u64),
    Unbounded,
}

/// All images of a curve: `canonical * multiplier^k` for integer `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    pub canonical: TransformedCurve,
    pub multiplier: Complex64,
    pub count: BranchCount,
}

impl BranchSet {
    pub fn member(&self, k: i64) -> TransformedCurve {
        self.canonical.rotate(k as f64 * TAU * self.canonical.elastic.rho())
    }
}

const MAX_BRANCH_DENOMINATOR: u64 = 10_000;

/// Smallest denominator `d <= max_den` with `x` within `tol` of `n / d`.
fn rational_denominator(x: f64, max_den: u64, tol: f64) -> Option<u64> {
    // Convergents of the continued fraction expansion.
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 as u64 > max_den {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some(k2 as u64);
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-300 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// The branch set of `q`; finite exactly when `a / 2b` is rational.
pub fn branch_images(q: &TransformedCurve) -> BranchSet {
    let rho = q.elastic.rho();
    let count = match rational_denominator(rho, MAX_BRANCH_DENOMINATOR, 1e-12 * rho.max(1.0)) {
        Some(d) => BranchCount::Finite(d),
        None => BranchCount::Unbounded,
    };
    BranchSet {
        canonical: q.clone(),
        multiplier: Complex64::from_polar(1.0, PI * q.elastic.a() / q.elastic.b()),
        count,
    }
}
