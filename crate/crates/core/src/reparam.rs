use crate::curve::{segment_at, validate_params};
use crate::error::{ElasticError, Result};

/// A piecewise-linear, nondecreasing warp of `[0, 1]` fixing both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Reparameterization {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl Reparameterization {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_params(&breakpoints).map_err(|e| ElasticError::InvalidReparameterization(e.to_string()))?;
        if values.len() != breakpoints.len() {
            return Err(ElasticError::InvalidReparameterization(format!(
                "{} values for {} breakpoints",
                values.len(),
                breakpoints.len()
            )));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 1.0 {
            return Err(ElasticError::InvalidReparameterization("must fix 0 and 1".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(ElasticError::InvalidReparameterization(
                "values must be nondecreasing".into(),
            ));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn identity() -> Self {
        Self {
            breakpoints: vec![0.0, 1.0],
            values: vec![0.0, 1.0],
        }
    }

    /// Warp through lattice nodes `(i, j)` of a uniform `n x n` grid.
    pub fn from_grid_path(nodes: &[(usize, usize)], n: usize) -> Result<Self> {
        let to_t = |i: usize| if i == n { 1.0 } else { i as f64 / n as f64 };
        Self::new(
            nodes.iter().map(|&(i, _)| to_t(i)).collect(),
            nodes.iter().map(|&(_, j)| to_t(j)).collect(),
        )
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = segment_at(&self.breakpoints, t);
        let (s0, s1) = (self.breakpoints[k], self.breakpoints[k + 1]);
        let (g0, g1) = (self.values[k], self.values[k + 1]);
        g0 + (g1 - g0) * (t - s0) / (s1 - s0)
    }

    /// Slope on each piece.
    pub fn slopes(&self) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(s, g)| (g[1] - g[0]) / (s[1] - s[0]))
            .collect()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .all(|(s, g)| (s - g).abs() <= tol)
    }

    /// Largest deviation from the identity at the breakpoints.
    pub fn max_deviation(&self) -> f64 {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .map(|(s, g)| (s - g).abs())
            .fold(0.0, f64::max)
    }

    /// Inverse warp. Requires strictly increasing values.
    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.values.clone(), self.breakpoints.clone())
    }

    /// `self o inner`, i.e. `t -> self(inner(t))`.
    pub fn compose(&self, inner: &Reparameterization) -> Result<Self> {
        let mut bps = inner.breakpoints.clone();
        for (k, w) in inner.breakpoints.windows(2).enumerate() {
            let (g0, g1) = (inner.values[k], inner.values[k + 1]);
            if g1 > g0 {
                for &tau in &self.breakpoints {
                    if tau > g0 && tau < g1 {
                        bps.push(w[0] + (tau - g0) * (w[1] - w[0]) / (g1 - g0));
                    }
                }
            }
        }
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bps.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        let last = bps.len() - 1;
        bps[last] = 1.0;
        let mut values: Vec<f64> = bps.iter().map(|&t| self.eval(inner.eval(t))).collect();
        values[0] = 0.0;
        values[last] = 1.0;
        Self::new(bps, values)
    }
}
