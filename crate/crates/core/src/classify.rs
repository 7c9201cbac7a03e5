//! Leave-one-out nearest-neighbor classification from a distance matrix.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::curve::PlaneCurve;
use crate::error::{ElasticError, Result};
use crate::samples::LabeledCurve;

/// Square matrix of pairwise distances; entry `(i, j)` compares sample `i` to `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Fills every off-diagonal entry with `dist(i, j)`; the diagonal is zero.
    pub fn compute<F>(n: usize, mut dist: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<f64>,
    {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    values[i * n + j] = dist(i, j)?;
                }
            }
        }
        Ok(Self { n, values })
    }

    /// Builds a matrix from `(i, j, d)` triples computed elsewhere.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut values = vec![0.0; n * n];
        for (i, j, d) in entries {
            values[i * n + j] = d;
        }
        Self { n, values }
    }

    /// Ordered pairs `(i, j)` with `i != j`, row by row.
    pub fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Replaces both `(i, j)` and `(j, i)` by the smaller of the two. Each
    /// direction is the cost of an admissible alignment, so the minimum is
    /// the tighter estimate.
    pub fn symmetrized(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = self.get(i, j).min(self.get(j, i));
                out.values[i * self.n + j] = d;
                out.values[j * self.n + i] = d;
            }
        }
        out
    }

    /// Largest `|d(i,j) - d(j,i)| / max(d(i,j), d(j,i))`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (a, b) = (self.get(i, j), self.get(j, i));
                let scale = a.max(b);
                if scale > 0.0 {
                    worst = worst.max((a - b).abs() / scale);
                }
            }
        }
        worst
    }
}

/// Outcome of leave-one-out 1-NN classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub labels: Vec<String>,
    pub predictions: Vec<String>,
    /// Index of the nearest other sample for each sample.
    pub neighbors: Vec<usize>,
    pub overall: f64,
    /// Per-class rate, in label order.
    pub per_class: Vec<(String, f64)>,
    /// Classes whose every sample was classified correctly.
    pub perfect: usize,
}

/// Checks there are at least two classes with at least two samples each.
pub fn validate_labels(labels: &[String]) -> Result<()> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    if counts.len() < 2 {
        return Err(ElasticError::InvalidArgument(format!(
            "need at least 2 classes, found {}",
            counts.len()
        )));
    }
    if let Some((label, _)) = counts.iter().find(|(_, &c)| c < 2) {
        return Err(ElasticError::InvalidArgument(format!(
            "class '{label}' has a single sample; leave-one-out needs at least 2"
        )));
    }
    Ok(())
}

/// Labels each sample with the class of its nearest other sample (ties go
/// to the lower index).
pub fn leave_one_out(matrix: &DistanceMatrix, labels: &[String]) -> Result<ClassificationReport> {
    validate_labels(labels)?;
    if matrix.len() != labels.len() {
        return Err(ElasticError::InvalidArgument(format!(
            "{} labels for a {}x{} matrix",
            labels.len(),
            matrix.len(),
            matrix.len()
        )));
    }
    let n = labels.len();
    let neighbors: Vec<usize> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .fold((usize::MAX, f64::INFINITY), |best, j| {
                    let d = matrix.get(i, j);
                    if d < best.1 {
                        (j, d)
                    } else {
                        best
                    }
                })
                .0
        })
        .collect();
    let predictions: Vec<String> = neighbors.iter().map(|&j| labels[j].clone()).collect();
    let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (label, predicted) in labels.iter().zip(&predictions) {
        let entry = tally.entry(label).or_default();
        entry.1 += 1;
        if label == predicted {
            entry.0 += 1;
        }
    }
    let correct: usize = tally.values().map(|t| t.0).sum();
    let per_class: Vec<(String, f64)> = tally
        .iter()
        .map(|(label, &(hit, total))| (label.to_string(), hit as f64 / total as f64))
        .collect();
    let perfect = tally.values().filter(|t| t.0 == t.1).count();
    Ok(ClassificationReport {
        labels: labels.to_vec(),
        predictions,
        neighbors,
        overall: correct as f64 / n as f64,
        per_class,
        perfect,
    })
}

/// Default sample count of the arclength baseline.
pub const ARCLENGTH_SAMPLES: usize = 100;

/// Curve resampled evenly in arclength, centered and scaled to unit length.
pub fn arclength_normalized(c: &PlaneCurve, samples: usize) -> Result<Vec<Complex64>> {
    let r = c.resample_arclength(samples)?;
    let length = r.arclength();
    let centroid = r.vertices().iter().sum::<Complex64>() / samples as f64;
    Ok(r.vertices().iter().map(|z| (z - centroid) / length).collect())
}

/// Baseline distance: root-mean-square gap between arclength-resampled,
/// centered, unit-length point sequences.
pub fn arclength_distance(c1: &PlaneCurve, c2: &PlaneCurve, samples: usize) -> Result<f64> {
    let a = arclength_normalized(c1, samples)?;
    let b = arclength_normalized(c2, samples)?;
    let sum: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok((sum / samples as f64).sqrt())
}

/// Labels of a dataset, in order.
pub fn labels_of(set: &[LabeledCurve]) -> Vec<String> {
    set.iter().map(|s| s.label.clone()).collect()
}
