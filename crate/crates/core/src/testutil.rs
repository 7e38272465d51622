//! Test-only oracles.

use crate::linalg::Mat2;

/// Normalized Amari index of a 2×2 matrix; 0 exactly for scaled permutations.
pub fn amari_index(p: &Mat2) -> f64 {
    let a = |i: usize, j: usize| p.get(i, j).abs();
    let mut total = 0.0;
    for i in 0..2 {
        let row_max = a(i, 0).max(a(i, 1));
        total += (a(i, 0) + a(i, 1)) / row_max - 1.0;
    }
    for j in 0..2 {
        let col_max = a(0, j).max(a(1, j));
        total += (a(0, j) + a(1, j)) / col_max - 1.0;
    }
    total / 4.0
}
