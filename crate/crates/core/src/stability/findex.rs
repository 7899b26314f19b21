use crate::margin::{Margin, Tri};

/// Candidate stability index contributed by one row of a transition matrix.
pub fn f_index(alpha: [f64; 3]) -> f64 {
    let min = alpha.iter().copied().fold(f64::INFINITY, f64::min);
    let max = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = alpha.iter().sum();
    if min >= 0.0 {
        f64::INFINITY
    } else if max <= 0.0 {
        f64::NEG_INFINITY
    } else if sum == 0.0 {
        0.0
    } else if sum < 0.0 {
        sum / max
    } else {
        -sum / min
    }
}

/// Whether `f_index(alpha) > 0`, with the row sum judged against the size of
/// its entries.
pub fn f_index_positive(alpha: [f64; 3], tol: f64) -> Tri {
    let min = alpha.iter().copied().fold(f64::INFINITY, f64::min);
    let max = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min >= 0.0 {
        Tri::Yes
    } else if max <= 0.0 {
        Tri::No
    } else {
        Margin::sum(&alpha).positive(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_cases() {
        assert_eq!(f_index([1.0, 2.0, 3.0]), f64::INFINITY);
        assert_eq!(f_index([0.0, 0.0, 0.0]), f64::INFINITY);
        assert_eq!(f_index([-1.0, 0.0, -2.0]), f64::NEG_INFINITY);
        assert_eq!(f_index([1.0, -1.0, 0.0]), 0.0);
        assert!((f_index([-0.8, 1.0, 0.0]) - 0.25).abs() < 1e-15);
        assert!((f_index([1.0, -1.25, 0.0]) + 0.25).abs() < 1e-15);
        assert!((f_index([-3.0, 1.0, 0.5]) - (-1.5 / 1.0)).abs() < 1e-15);
    }

    #[test]
    fn sign_agrees() {
        for row in [[-0.8, 1.0, 0.0], [1.0, -1.25, 0.0], [2.0, -1.0, -0.5]] {
            assert_eq!(f_index_positive(row, 1e-9).is_yes(), f_index(row) > 0.0);
        }
        assert_eq!(f_index_positive([1.0, -1.0, 0.0], 1e-9), Tri::Marginal);
    }
}
