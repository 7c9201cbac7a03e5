use crate::transform::TransformedCurve;

/// Inner products smaller than this leave the rotation undetermined.
pub const DEGENERATE_INNER: f64 = 1e-14;

/// Best rotation of `q2` onto `q1` in transform space.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationAlignment {
    pub angle: f64,
    pub aligned: TransformedCurve,
    pub distance: f64,
    /// The inner product vanished, so every angle is optimal and 0 was used.
    pub degenerate: bool,
}

/// Procrustes alignment over `SO(2)`: `phi = arg int q1 conj(q2) dt`
/// maximizes `Re <q1, e^{i phi} q2>`.
pub fn optimal_rotation(q1: &TransformedCurve, q2: &TransformedCurve) -> RotationAlignment {
    let inner = q1.inner(q2);
    let degenerate = inner.norm() < DEGENERATE_INNER;
    let angle = if degenerate { 0.0 } else { inner.arg() };
    let aligned = q2.rotate(angle);
    let distance = q1.distance(&aligned);
    RotationAlignment {
        angle,
        aligned,
        distance,
        degenerate,
    }
}
