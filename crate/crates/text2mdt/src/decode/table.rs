//! Token-pair label tables, their loss, and the simplified triplet decode.

use ndarray::{Array2, Array3, ArrayView1};

use super::DecodeError;
use crate::tree::{RelationType, Triplet};

/// Probability floor applied before taking logarithms in the loss.
const PROB_CLAMP: f64 = 1e-12;
/// Allowed deviation of a cell's probability mass from 1.
const NORM_TOLERANCE: f64 = 1e-6;

/// An `n × n × k` table assigning each ordered token (or item) pair a
/// probability distribution over `k` labels. Construction checks that every
/// cell is a distribution: nonnegative entries summing to 1 within `1e-6`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairLabelTable {
    probs: Array3<f64>,
}

impl PairLabelTable {
    pub fn new(probs: Array3<f64>) -> Result<Self, DecodeError> {
        let (n, n2, k) = probs.dim();
        if n == 0 || k == 0 || n != n2 {
            return Err(DecodeError::DimensionMismatch(format!(
                "table must be n × n × k with n, k ≥ 1, got {n} × {n2} × {k}"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let cell = probs.slice(ndarray::s![i, j, ..]);
                if let Some(bad) = cell.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
                    return Err(DecodeError::NormalizationError {
                        i,
                        j,
                        message: format!("entry {bad} is negative or not finite"),
                    });
                }
                let sum: f64 = cell.sum();
                if (sum - 1.0).abs() > NORM_TOLERANCE {
                    return Err(DecodeError::NormalizationError {
                        i,
                        j,
                        message: format!("probabilities sum to {sum}, expected 1"),
                    });
                }
            }
        }
        Ok(PairLabelTable { probs })
    }

    /// Builds a table from a row-major flat vector of length `n * n * k`.
    pub fn from_flat(n: usize, k: usize, flat: Vec<f64>) -> Result<Self, DecodeError> {
        let expected = n * n * k;
        if flat.len() != expected {
            return Err(DecodeError::DimensionMismatch(format!(
                "expected {expected} probabilities for a {n} × {n} × {k} table, got {}",
                flat.len()
            )));
        }
        let arr = Array3::from_shape_vec((n, n, k), flat)
            .expect("length was checked against the shape");
        Self::new(arr)
    }

    pub fn n(&self) -> usize {
        self.probs.dim().0
    }

    pub fn k(&self) -> usize {
        self.probs.dim().2
    }

    pub fn cell(&self, i: usize, j: usize) -> ArrayView1<'_, f64> {
        self.probs.slice(ndarray::s![i, j, ..])
    }

    /// The cell's most probable label and its probability; ties go to the
    /// lowest label index.
    pub fn argmax(&self, i: usize, j: usize) -> (usize, f64) {
        let cell = self.cell(i, j);
        let mut best = (0usize, cell[0]);
        for (idx, &p) in cell.iter().enumerate().skip(1) {
            if p > best.1 {
                best = (idx, p);
            }
        }
        best
    }
}

/// Mean cross-entropy of the table against gold label indices:
/// `−(1/n²) Σᵢ Σⱼ log P(l_ij = y_ij)`, with probabilities clamped to
/// `1e-12` so a hard zero never produces an infinite loss.
pub fn table_loss(table: &PairLabelTable, gold: &Array2<usize>) -> Result<f64, DecodeError> {
    let n = table.n();
    if gold.dim() != (n, n) {
        return Err(DecodeError::DimensionMismatch(format!(
            "gold labels must be {n} × {n}, got {} × {}",
            gold.dim().0,
            gold.dim().1
        )));
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let y = gold[(i, j)];
            if y >= table.k() {
                return Err(DecodeError::DimensionMismatch(format!(
                    "gold label {y} at ({i}, {j}) is out of range for k = {}",
                    table.k()
                )));
            }
            total -= table.cell(i, j)[y].max(PROB_CLAMP).ln();
        }
    }
    Ok(total / (n * n) as f64)
}

/// A decoded entity span: token range `start..=end` with its entity label
/// and the rendered text.
#[derive(Debug, Clone, PartialEq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub label: String,
    pub text: String,
    pub prob: f64,
}

/// Result of the triplet-table decode: all entity spans plus the triplets
/// read off the relation cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TableDecode {
    pub spans: Vec<Span>,
    pub triplets: Vec<Triplet>,
}

/// Greedy decode of a token-pair table into entity spans and triplets.
///
/// Table columns are laid out as `[null, entity_labels…, relation_labels…]`.
/// Upper-triangle cells (`i ≤ j`) whose argmax is an entity label become
/// spans `[i..=j]`. A cell whose argmax is a relation label yields a triplet
/// when both its row index and its column index are start tokens of decoded
/// spans; each start token contributes its best span (probability
/// descending, then shorter first). Span text joins tokens without a
/// separator (character-level tokens). Duplicate triplets collapse to one,
/// keeping first-decoded order; cells are visited by (probability
/// descending, i ascending, j ascending).
pub fn decode_triplet_table(
    table: &PairLabelTable,
    entity_labels: &[String],
    relation_labels: &[String],
    tokens: &[String],
) -> Result<TableDecode, DecodeError> {
    let n = table.n();
    if tokens.len() != n {
        return Err(DecodeError::DimensionMismatch(format!(
            "expected {n} tokens to match the table, got {}",
            tokens.len()
        )));
    }
    let expected_k = 1 + entity_labels.len() + relation_labels.len();
    if table.k() != expected_k {
        return Err(DecodeError::DimensionMismatch(format!(
            "table has {} label columns but null + {} entity + {} relation labels need {expected_k}",
            table.k(),
            entity_labels.len(),
            relation_labels.len()
        )));
    }
    let entity_range = 1..1 + entity_labels.len();

    // All argmax-decided cells, ordered deterministically.
    let mut cells: Vec<(f64, usize, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (label, prob) = table.argmax(i, j);
            if label != 0 {
                cells.push((prob, i, j, label));
            }
        }
    }
    cells.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("probabilities are finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut decode = TableDecode::default();
    // Entity pass: spans from upper-triangle entity cells.
    for &(prob, i, j, label) in &cells {
        if entity_range.contains(&label) && i <= j {
            decode.spans.push(Span {
                start: i,
                end: j,
                label: entity_labels[label - 1].clone(),
                text: tokens[i..=j].concat(),
                prob,
            });
        }
    }
    // Best span per start token: highest probability, then shortest.
    let mut best_at_start: Vec<Option<&Span>> = vec![None; n];
    for span in &decode.spans {
        let slot = &mut best_at_start[span.start];
        let better = match slot {
            None => true,
            Some(cur) => span.prob > cur.prob || (span.prob == cur.prob && span.end < cur.end),
        };
        if better {
            *slot = Some(span);
        }
    }

    // Relation pass: (head start, tail start) cells over decoded spans.
    for &(_, i, j, label) in &cells {
        if entity_range.contains(&label) {
            continue;
        }
        let (Some(head), Some(tail)) = (best_at_start[i], best_at_start[j]) else {
            continue;
        };
        let relation = RelationType::from_label(&relation_labels[label - 1 - entity_labels.len()]);
        let triplet = Triplet::new(head.text.clone(), relation, tail.text.clone());
        if !decode.triplets.contains(&triplet) {
            decode.triplets.push(triplet);
        }
    }
    Ok(decode)
}
