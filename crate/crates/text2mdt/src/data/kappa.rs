//! Cohen's kappa for inter-annotator agreement.

use std::collections::HashMap;
use std::hash::Hash;

use super::DataError;

/// Cohen's kappa between two label sequences of equal length:
/// `κ = (p_o − p_e) / (1 − p_e)` with observed agreement `p_o` and chance
/// agreement `p_e` from the raters' marginal label distributions. When both
/// raters always emit one identical label, `p_e = 1` forces `p_o = 1` and
/// the degenerate total agreement is reported as 1.
pub fn cohens_kappa<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64, DataError> {
    if a.len() != b.len() {
        return Err(DataError::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.is_empty() {
        return Err(DataError::EmptyInput);
    }
    let n = a.len() as f64;
    let observed = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / n;

    let mut counts_a: HashMap<&T, usize> = HashMap::new();
    let mut counts_b: HashMap<&T, usize> = HashMap::new();
    for x in a {
        *counts_a.entry(x).or_default() += 1;
    }
    for y in b {
        *counts_b.entry(y).or_default() += 1;
    }
    let expected: f64 = counts_a
        .iter()
        .filter_map(|(label, &ca)| {
            counts_b
                .get(label)
                .map(|&cb| (ca as f64 / n) * (cb as f64 / n))
        })
        .sum();

    if expected >= 1.0 {
        return Ok(1.0);
    }
    Ok((observed - expected) / (1.0 - expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_sequences_score_one() {
        let labels = ["x", "y", "x", "z"];
        assert_eq!(cohens_kappa(&labels, &labels).unwrap(), 1.0);
    }

    #[test]
    fn binary_confusion_example() {
        // Confusion counts (rows = rater A, cols = rater B):
        //   yes/yes 20, yes/no 5, no/yes 10, no/no 15, n = 50.
        // p_o = 35/50 = 0.7; marginals A: yes 25, no 25; B: yes 30, no 20;
        // p_e = 0.5*0.6 + 0.5*0.4 = 0.5; κ = (0.7 − 0.5)/(1 − 0.5) = 0.4.
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut push = |x: u8, y: u8, k: usize| {
            for _ in 0..k {
                a.push(x);
                b.push(y);
            }
        };
        push(1, 1, 20);
        push(1, 0, 5);
        push(0, 1, 10);
        push(0, 0, 15);
        let kappa = cohens_kappa(&a, &b).unwrap();
        assert!((kappa - 0.4).abs() < 1e-12, "kappa was {kappa}");
    }

    #[test]
    fn no_agreement_beyond_chance_is_zero() {
        // Rater B's labels are independent of A's with identical marginals:
        // agreement equals chance, so κ = 0.
        let a = [0, 0, 1, 1];
        let b = [0, 1, 0, 1];
        let kappa = cohens_kappa(&a, &b).unwrap();
        assert!(kappa.abs() < 1e-12, "kappa was {kappa}");
    }

    #[test]
    fn degenerate_single_label_agreement() {
        let a = ["same"; 10];
        assert_eq!(cohens_kappa(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn disagreement_can_go_negative() {
        let a = [0, 1, 0, 1];
        let b = [1, 0, 1, 0];
        assert!(cohens_kappa(&a, &b).unwrap() < 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            cohens_kappa(&[1, 2], &[1]),
            Err(DataError::LengthMismatch { a: 2, b: 1 })
        ));
        let empty: [u8; 0] = [];
        assert!(matches!(
            cohens_kappa(&empty, &empty),
            Err(DataError::EmptyInput)
        ));
    }
}
