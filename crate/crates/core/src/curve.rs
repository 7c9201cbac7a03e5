//! Piecewise-linear plane curves and the polar form of their derivative.
//!
//! Points are complex numbers. A curve with `k + 1` vertices has `k` segments;
//! segment `j` (zero-based here) runs over `[t_j, t_{j+1}]` with constant
//! velocity `v_j = (c_{j+1} - c_j) / (t_{j+1} - t_j)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{ElasticError, Result};
use crate::reparam::Reparameterization;

/// Relative endpoint gap (times arclength) under which raw input counts as closed.
pub const CLOSURE_TOLERANCE: f64 = 1e-8;

/// Weights of the elastic metric: `a` on bending, `b` on stretching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticParams {
    a: f64,
    b: f64,
}

impl ElasticParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(ElasticError::InvalidElastic { a, b });
        }
        Ok(Self { a, b })
    }

    /// Parameters with `a = 1` and the given ratio `a / 2b`.
    pub fn from_ratio(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(ElasticError::InvalidElastic { a: 1.0, b: 0.5 / rho });
        }
        Self::new(1.0, 0.5 / rho)
    }

    /// The square-root velocity parameters `(1, 1/2)`.
    pub fn srvf() -> Self {
        Self { a: 1.0, b: 0.5 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `a / 2b`, the exponent applied to the unit tangent.
    pub fn rho(&self) -> f64 {
        self.a / (2.0 * self.b)
    }

    /// Radius of the Hilbert sphere holding unit-length curves, `2b`.
    pub fn sphere_radius(&self) -> f64 {
        2.0 * self.b
    }
}

/// A piecewise-linear immersed plane curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve {
    vertices: Vec<Complex64>,
    params: Vec<f64>,
    closed: bool,
}

/// Piecewise-constant polar form `r_j exp(i theta_j)` of the velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarDerivative {
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub params: Vec<f64>,
}

impl PolarDerivative {
    /// Velocities recovered from the polar form.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        self.r
            .iter()
            .zip(&self.theta)
            .map(|(&r, &t)| Complex64::from_polar(r, t))
            .collect()
    }
}

pub(crate) fn validate_params(params: &[f64]) -> Result<()> {
    if params.len() < 2 {
        return Err(ElasticError::TooFewVertices(params.len()));
    }
    if params[0] != 0.0 || params[params.len() - 1] != 1.0 {
        return Err(ElasticError::InvalidParams(format!(
            "endpoints must be 0 and 1, got {} and {}",
            params[0],
            params[params.len() - 1]
        )));
    }
    if let Some(i) = params.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(ElasticError::InvalidParams(format!(
            "not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

/// `n + 1` evenly spaced breakpoints on `[0, 1]`.
pub fn uniform_params(segments: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..=segments).map(|i| i as f64 / segments as f64).collect();
    p[segments] = 1.0;
    p
}

/// Sign convention for turning orientation: `+1` only for strictly positive input.
fn turn_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Unsigned turning angle and its orientation between consecutive velocities.
fn turn(prev: Complex64, next: Complex64) -> (f64, f64) {
    // conj(prev) * next has argument equal to the counterclockwise turn.
    let w = prev.conj() * next;
    let delta = w.im.abs().atan2(w.re);
    (delta, turn_sign(w.im))
}

impl PlaneCurve {
    /// Builds a curve, validating the breakpoints and the immersion condition.
    ///
    /// Closed input whose endpoint gap is within tolerance is snapped shut.
    pub fn new(mut vertices: Vec<Complex64>, params: Vec<f64>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(ElasticError::TooFewVertices(vertices.len()));
        }
        if params.len() != vertices.len() {
            return Err(ElasticError::InvalidParams(format!(
                "{} params for {} vertices",
                params.len(),
                vertices.len()
            )));
        }
        validate_params(&params)?;
        if vertices.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ElasticError::InvalidArgument("non-finite vertex".into()));
        }
        if let Some(index) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(ElasticError::ZeroEdge { index });
        }
        if closed {
            let length: f64 = vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
            let gap = (vertices[vertices.len() - 1] - vertices[0]).norm();
            let tolerance = CLOSURE_TOLERANCE * length;
            if gap > tolerance {
                return Err(ElasticError::NotClosed { gap, tolerance });
            }
            let last = vertices.len() - 1;
            vertices[last] = vertices[0];
            if vertices.len() < 3 {
                return Err(ElasticError::TooFewVertices(vertices.len()));
            }
        }
        Ok(Self {
            vertices,
            params,
            closed,
        })
    }

    /// Curve with uniform breakpoints.
    pub fn from_vertices(vertices: Vec<Complex64>, closed: bool) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(ElasticError::TooFewVertices(n));
        }
        Self::new(vertices, uniform_params(n - 1), closed)
    }

    /// Open curve through `(x, y)` pairs with uniform breakpoints.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        Self::from_vertices(points.iter().map(|&(x, y)| Complex64::new(x, y)).collect(), false)
    }

    /// Closed curve from a vertex loop. The first vertex is appended when the
    /// input does not already repeat it.
    pub fn closed_from_loop(mut vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() >= 2 {
            let length: f64 = vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
            let gap = (vertices[vertices.len() - 1] - vertices[0]).norm();
            if gap > CLOSURE_TOLERANCE * length {
                vertices.push(vertices[0]);
            }
        }
        Self::from_vertices(vertices, true)
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Parameter lengths `t_{j+1} - t_j`.
    pub fn dt(&self) -> Vec<f64> {
        self.params.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Velocity on each segment. Nonzero by construction.
    pub fn edge_vectors(&self) -> Vec<Complex64> {
        self.vertices
            .windows(2)
            .zip(self.params.windows(2))
            .map(|(v, t)| (v[1] - v[0]) / (t[1] - t[0]))
            .collect()
    }

    pub fn arclength(&self) -> f64 {
        self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Point at parameter `t`, clamped to `[0, 1]`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let t = t.clamp(0.0, 1.0);
        let j = segment_at(&self.params, t);
        let (t0, t1) = (self.params[j], self.params[j + 1]);
        let s = (t - t0) / (t1 - t0);
        self.vertices[j] + (self.vertices[j + 1] - self.vertices[j]) * s
    }

    /// Radius and unwrapped angle of the velocity, segment by segment.
    ///
    /// The first angle is the full-plane argument in `(-pi, pi]`; each later
    /// angle adds the signed exterior angle, so consecutive angles differ by at
    /// most `pi`.
    pub fn polar_decompose(&self) -> PolarDerivative {
        let v = self.edge_vectors();
        let mut theta = Vec::with_capacity(v.len());
        theta.push(v[0].arg());
        for j in 1..v.len() {
            let (delta, sign) = turn(v[j - 1], v[j]);
            theta.push(theta[j - 1] + sign * delta);
        }
        PolarDerivative {
            r: v.iter().map(|z| z.norm()).collect(),
            theta,
            params: self.params.clone(),
        }
    }

    /// Exterior angles `delta theta_j` in `[0, pi]` at each interior vertex.
    pub fn exterior_angles(&self) -> Vec<f64> {
        self.edge_vectors().windows(2).map(|w| turn(w[0], w[1]).0).collect()
    }

    /// Exterior angle at the closing vertex of a closed curve.
    pub fn closing_angle(&self) -> Result<f64> {
        self.require_closed()?;
        let v = self.edge_vectors();
        Ok(turn(v[v.len() - 1], v[0]).0)
    }

    fn require_closed(&self) -> Result<()> {
        let gap = (self.vertices[self.vertices.len() - 1] - self.vertices[0]).norm();
        let tolerance = CLOSURE_TOLERANCE * self.arclength();
        if !self.closed || gap > tolerance {
            return Err(ElasticError::NotClosed { gap, tolerance });
        }
        Ok(())
    }

    /// Whitney rotation index: total turning, including the closing vertex, over `2 pi`.
    pub fn rotation_index(&self) -> Result<i64> {
        self.require_closed()?;
        let polar = self.polar_decompose();
        let v = self.edge_vectors();
        let (delta, sign) = turn(v[v.len() - 1], v[0]);
        let wrapped = polar.theta[polar.theta.len() - 1] + sign * delta;
        Ok(((wrapped - polar.theta[0]) / TAU).round() as i64)
    }

    /// Optionally bases the curve at the origin and rescales it to unit length.
    pub fn normalize(&self, translate: bool, scale: bool) -> PlaneCurve {
        let mut out = self.clone();
        if translate {
            let origin = out.vertices[0];
            out.vertices.iter_mut().for_each(|z| *z -= origin);
        }
        if scale {
            let anchor = out.vertices[0];
            let inv = 1.0 / out.arclength();
            out.vertices.iter_mut().for_each(|z| *z = anchor + (*z - anchor) * inv);
        }
        out
    }

    pub fn translate(&self, offset: Complex64) -> PlaneCurve {
        let mut out = self.clone();
        out.vertices.iter_mut().for_each(|z| *z += offset);
        out
    }

    /// Rotation about the origin by `psi` radians.
    pub fn rotate(&self, psi: f64) -> PlaneCurve {
        let w = Complex64::from_polar(1.0, psi);
        let mut out = self.clone();
        out.vertices.iter_mut().for_each(|z| *z *= w);
        out
    }

    /// Uniform scaling about the origin.
    pub fn scale(&self, lambda: f64) -> PlaneCurve {
        let mut out = self.clone();
        out.vertices.iter_mut().for_each(|z| *z *= lambda);
        out
    }

    /// `n` vertices at evenly spaced parameter values.
    pub fn resample_uniform(&self, n: usize) -> Result<PlaneCurve> {
        if n < 2 {
            return Err(ElasticError::TooFewVertices(n));
        }
        let params = uniform_params(n - 1);
        let vertices = params.iter().map(|&t| self.eval(t)).collect();
        PlaneCurve::new(vertices, params, self.closed)
    }

    /// `n` vertices evenly spaced in arclength, with uniform breakpoints.
    pub fn resample_arclength(&self, n: usize) -> Result<PlaneCurve> {
        if n < 2 {
            return Err(ElasticError::TooFewVertices(n));
        }
        let mut cumulative = Vec::with_capacity(self.vertices.len());
        cumulative.push(0.0);
        for w in self.vertices.windows(2) {
            let last = cumulative[cumulative.len() - 1];
            cumulative.push(last + (w[1] - w[0]).norm());
        }
        let total = cumulative[cumulative.len() - 1];
        let mut vertices = Vec::with_capacity(n);
        let mut j = 0;
        for i in 0..n {
            let s = total * i as f64 / (n - 1) as f64;
            while j + 2 < cumulative.len() && cumulative[j + 1] < s {
                j += 1;
            }
            let seg = cumulative[j + 1] - cumulative[j];
            let f = ((s - cumulative[j]) / seg).clamp(0.0, 1.0);
            vertices.push(self.vertices[j] + (self.vertices[j + 1] - self.vertices[j]) * f);
        }
        vertices[0] = self.vertices[0];
        vertices[n - 1] = self.vertices[self.vertices.len() - 1];
        PlaneCurve::from_vertices(vertices, self.closed)
    }

    /// The composition `c o gamma`, breakpoints refined so it stays piecewise linear.
    pub fn reparameterize(&self, gamma: &Reparameterization) -> Result<PlaneCurve> {
        let mut params = Vec::new();
        let bp = gamma.breakpoints();
        let vals = gamma.values();
        for k in 0..bp.len() - 1 {
            let (s0, s1, g0, g1) = (bp[k], bp[k + 1], vals[k], vals[k + 1]);
            params.push(s0);
            if g1 > g0 {
                for &tau in &self.params {
                    if tau > g0 && tau < g1 {
                        params.push(s0 + (tau - g0) * (s1 - s0) / (g1 - g0));
                    }
                }
            }
        }
        params.push(1.0);
        params.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        let last = params.len() - 1;
        params[last] = 1.0;
        let vertices = params.iter().map(|&t| self.eval(gamma.eval(t))).collect();
        PlaneCurve::new(vertices, params, self.closed)
    }

    /// Closed curve restarted at vertex `shift`; breakpoint gaps rotate with it.
    pub fn cyclic_shift(&self, shift: usize) -> Result<PlaneCurve> {
        self.require_closed()?;
        let k = self.segment_count();
        let s = shift % k;
        let dt = self.dt();
        let mut vertices = Vec::with_capacity(k + 1);
        let mut params = Vec::with_capacity(k + 1);
        let mut t = 0.0;
        for i in 0..k {
            vertices.push(self.vertices[(i + s) % k]);
            params.push(t);
            t += dt[(i + s) % k];
        }
        vertices.push(vertices[0]);
        params.push(1.0);
        PlaneCurve::new(vertices, params, true)
    }
}

/// Index `j` of the segment `[p_j, p_{j+1}]` containing `t`.
pub(crate) fn segment_at(params: &[f64], t: f64) -> usize {
    let last = params.len() - 2;
    match params.binary_search_by(|p| p.partial_cmp(&t).unwrap()) {
        Ok(i) => i.min(last),
        Err(i) => i.saturating_sub(1).min(last),
    }
}

/// Closed-form smooth curves on `[0, 1]`, used for secant sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveGenerator {
    /// Counterclockwise circle traversed `turns` times.
    Circle {
        radius: f64,
        turns: f64,
    },
    Ellipse {
        semi_major: f64,
        semi_minor: f64,
    },
    /// Lemniscate of Gerono, one full traversal.
    FigureEight {
        scale: f64,
    },
}

impl CurveGenerator {
    pub fn unit_circle() -> Self {
        CurveGenerator::Circle {
            radius: 1.0,
            turns: 1.0,
        }
    }

    pub fn position(&self, t: f64) -> Complex64 {
        match *self {
            CurveGenerator::Circle { radius, turns } => Complex64::from_polar(radius, TAU * turns * t),
            CurveGenerator::Ellipse { semi_major, semi_minor } => {
                let s = TAU * t;
                Complex64::new(semi_major * s.cos(), semi_minor * s.sin())
            }
            CurveGenerator::FigureEight { scale } => {
                let s = TAU * t;
                Complex64::new(scale * s.sin(), scale * s.sin() * s.cos())
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            CurveGenerator::Circle { radius, turns } => {
                let w = TAU * turns;
                Complex64::i() * w * Complex64::from_polar(radius, w * t)
            }
            CurveGenerator::Ellipse { semi_major, semi_minor } => {
                let s = TAU * t;
                Complex64::new(-semi_major * s.sin(), semi_minor * s.cos()) * TAU
            }
            CurveGenerator::FigureEight { scale } => {
                let s = TAU * t;
                Complex64::new(scale * s.cos(), scale * (2.0 * s).cos()) * TAU
            }
        }
    }

    /// Continuous tangent angle with `angle(0)` in `(-pi, pi]`.
    pub fn tangent_angle(&self, t: f64) -> f64 {
        match *self {
            CurveGenerator::Circle { turns, .. } => PI / 2.0 + TAU * turns * t,
            _ => {
                // Unwrap along a fine sampling; adequate for these smooth generators.
                let steps = ((t * 4096.0).ceil() as usize).max(1);
                let mut angle = self.velocity(0.0).arg();
                let mut prev = self.velocity(0.0);
                for i in 1..=steps {
                    let next = self.velocity(t * i as f64 / steps as f64);
                    angle += (prev.conj() * next).arg();
                    prev = next;
                }
                angle
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match *self {
            CurveGenerator::Circle { turns, .. } => turns.fract() == 0.0,
            _ => true,
        }
    }
}

/// Secant polygon through `n` samples of `generator` at `j / (n - 1)`.
pub fn secant_sample(generator: &CurveGenerator, n: usize) -> Result<PlaneCurve> {
    secant_sample_fn(|t| generator.position(t), n, generator.is_closed())
}

/// Secant polygon through `n` samples of an arbitrary parametric curve.
pub fn secant_sample_fn<F>(f: F, n: usize, closed: bool) -> Result<PlaneCurve>
where
    F: Fn(f64) -> Complex64,
{
    if n < 2 {
        return Err(ElasticError::TooFewVertices(n));
    }
    let params = uniform_params(n - 1);
    let mut vertices: Vec<Complex64> = params.iter().map(|&t| f(t)).collect();
    if closed {
        vertices[n - 1] = vertices[0];
    }
    PlaneCurve::new(vertices, params, closed)
}
