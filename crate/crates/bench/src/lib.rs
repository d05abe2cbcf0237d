//! Workloads shared by the benchmarks.

use cosmetic_core::exact_linalg::appendix::{tbk_minus_inv_n_matrix, tbk_plus_inv_n_matrix};
use cosmetic_core::IntMatrix;

/// Intersection forms of growing size from the `tb = -k` families.
pub fn family_matrices(k: i64, n_values: &[i64]) -> Vec<IntMatrix> {
    n_values
        .iter()
        .flat_map(|&n| [tbk_minus_inv_n_matrix(k, n.max(2)), tbk_plus_inv_n_matrix(k, n)])
        .collect()
}
