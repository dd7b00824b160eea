//! Biaffine scoring of vector pairs.

use ndarray::{Array2, Array3, ArrayView1, Axis};

use super::DecodeError;

/// Parameters of the biaffine scorer: a `d × K × d` tensor `U` for the
/// bilinear term and a `2d × K` matrix `W` for the linear term over the
/// concatenated pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BiaffineParams {
    u: Array3<f64>,
    w: Array2<f64>,
}

impl BiaffineParams {
    pub fn new(u: Array3<f64>, w: Array2<f64>) -> Result<Self, DecodeError> {
        let (d, k, d2) = u.dim();
        if d == 0 || k == 0 {
            return Err(DecodeError::DimensionMismatch(
                "biaffine dimensions must be positive".into(),
            ));
        }
        if d != d2 {
            return Err(DecodeError::DimensionMismatch(format!(
                "U must be d × K × d, got {d} × {k} × {d2}"
            )));
        }
        if w.dim() != (2 * d, k) {
            return Err(DecodeError::DimensionMismatch(format!(
                "W must be 2d × K = {} × {k}, got {} × {}",
                2 * d,
                w.dim().0,
                w.dim().1
            )));
        }
        Ok(BiaffineParams { u, w })
    }

    pub fn d(&self) -> usize {
        self.u.dim().0
    }

    pub fn k(&self) -> usize {
        self.u.dim().1
    }
}

/// Raw (pre-softmax) biaffine scores of a vector pair:
/// `score[k] = h1ᵀ U[:,k,:] h2 + W[:,k]ᵀ (h1 ⊕ h2)` where `⊕` is
/// concatenation.
pub fn biaffine_score(
    h1: ArrayView1<'_, f64>,
    h2: ArrayView1<'_, f64>,
    params: &BiaffineParams,
) -> Result<Vec<f64>, DecodeError> {
    let d = params.d();
    if h1.len() != d || h2.len() != d {
        return Err(DecodeError::DimensionMismatch(format!(
            "input vectors must have length {d}, got {} and {}",
            h1.len(),
            h2.len()
        )));
    }
    let mut scores = Vec::with_capacity(params.k());
    for k in 0..params.k() {
        let slice = params.u.index_axis(Axis(1), k); // d × d
        let bilinear = h1.dot(&slice.dot(&h2));
        let col = params.w.index_axis(Axis(1), k); // 2d
        let linear = col.slice(ndarray::s![..d]).dot(&h1) + col.slice(ndarray::s![d..]).dot(&h2);
        scores.push(bilinear + linear);
    }
    Ok(scores)
}

/// Numerically stable softmax.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}
