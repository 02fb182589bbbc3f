//! Explicit similarity transforms relating the quadratic forms.
//!
//! `N(α) = F E M(α) E⁻¹ F⁻¹` and `γ = G H β H⁻¹ G⁻¹`, with every factor and
//! inverse written down in closed form rather than obtained by solving.

use super::{gram_beta, m_alpha_matrix, DenseMatrix, DenseSymMatrix, WeightSequence};
use crate::error::{domain, Result};
use crate::means::alpha_weight;

/// Lower bidiagonal `E`: `e_{i,i} = i^α`, `e_{i,i−1} = −(i−1)^α`.
pub fn e_matrix(alpha: f64, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            ((i + 1) as f64).powf(alpha)
        } else if j + 1 == i {
            -(i as f64).powf(alpha)
        } else {
            0.0
        }
    })
}

/// `E⁻¹`: `e'_{i,j} = i^{−α}` for `j ≤ i`.
pub fn e_inverse(alpha: f64, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        if j <= i {
            ((i + 1) as f64).powf(-alpha)
        } else {
            0.0
        }
    })
}

/// Diagonal of `F`: `(i^{2α−1} − (i−1)^{2α−1})^{−1/2}`.
pub fn f_diagonal(alpha: f64, n: usize) -> Result<Vec<f64>> {
    if !(alpha > 0.5) {
        return domain(format!("F needs alpha > 1/2, got {alpha}"));
    }
    (1..=n as u64)
        .map(|i| Ok(alpha_weight(i, 2.0 * alpha - 1.0)?.powf(-0.5)))
        .collect()
}

/// `D X D⁻¹` for diagonal `D`.
fn diag_conjugate(d: &[f64], x: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(x.nrows(), x.ncols(), |i, j| d[i] * x.get(i, j) / d[j])
}

/// `F E M(α) E⁻¹ F⁻¹`, which equals `N(α)`.
pub fn conjugate_n_alpha(alpha: f64, n: usize) -> Result<DenseSymMatrix> {
    let m = m_alpha_matrix(alpha, n)?.to_dense();
    let f = f_diagonal(alpha, n)?;
    let inner = e_matrix(alpha, n)
        .matmul(&m)?
        .matmul(&e_inverse(alpha, n))?;
    DenseSymMatrix::from_dense_symmetrized(&diag_conjugate(&f, &inner))
}

/// `H`: `h_{i,j} = λ_j` for `j ≤ i`.
pub fn h_matrix(w: &WeightSequence, n: usize) -> Result<DenseMatrix> {
    w.check_len(n)?;
    let lambda = w.lambda();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        if j <= i {
            lambda[j]
        } else {
            0.0
        }
    }))
}

/// `H⁻¹`: `h'_{i,i} = 1/λ_i`, `h'_{i,i−1} = −1/λ_i`, zero otherwise.
/// Needs every `λ_k > 0`.
pub fn h_inverse(w: &WeightSequence, n: usize) -> Result<DenseMatrix> {
    w.check_len(n)?;
    let lambda = w.lambda();
    if let Some(k) = lambda[..n].iter().position(|&l| l <= 0.0) {
        return domain(format!("H is singular: lambda_{} = 0", k + 1));
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0 / lambda[i]
        } else if j + 1 == i {
            -1.0 / lambda[i]
        } else {
            0.0
        }
    }))
}

/// Diagonal of `G`: `Λ_1 / Λ_i`.
pub fn g_diagonal(w: &WeightSequence, n: usize) -> Result<Vec<f64>> {
    w.check_len(n)?;
    let prefix = w.prefix();
    Ok(prefix[..n].iter().map(|p| prefix[0] / p).collect())
}

/// `G H A H⁻¹ G⁻¹` with `A = gram_beta(w, n)`, which equals `gram_gamma(w, n)`.
pub fn conjugate_gamma(w: &WeightSequence, n: usize) -> Result<DenseSymMatrix> {
    let a = gram_beta(w, n)?.to_dense();
    let inner = h_matrix(w, n)?.matmul(&a)?.matmul(&h_inverse(w, n)?)?;
    let g = g_diagonal(w, n)?;
    DenseSymMatrix::from_dense_symmetrized(&diag_conjugate(&g, &inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{gram_gamma, n_alpha_matrix};

    #[test]
    fn explicit_inverses() {
        let e = e_matrix(0.8, 8).matmul(&e_inverse(0.8, 8)).unwrap();
        assert!(e.max_abs_diff(&DenseMatrix::identity(8)).unwrap() < 1e-12);
        let w = WeightSequence::new(vec![1.0, 0.5, 2.0, 0.25, 3.0]).unwrap();
        let h = h_matrix(&w, 5)
            .unwrap()
            .matmul(&h_inverse(&w, 5).unwrap())
            .unwrap();
        assert!(h.max_abs_diff(&DenseMatrix::identity(5)).unwrap() < 1e-12);
        assert!(h_inverse(&WeightSequence::new(vec![1.0, 0.0]).unwrap(), 2).is_err());
    }

    #[test]
    fn f_is_identity_at_alpha_one() {
        assert!(f_diagonal(1.0, 10).unwrap().iter().all(|&f| f == 1.0));
        assert!(f_diagonal(0.5, 3).is_err());
    }

    #[test]
    fn conjugations_match_formulas() {
        for &alpha in &[0.6, 0.75, 1.0, 1.5] {
            let c = conjugate_n_alpha(alpha, 12).unwrap();
            let n = n_alpha_matrix(alpha, 12).unwrap();
            assert!(c.max_abs_diff(&n).unwrap() < 1e-9, "alpha = {alpha}");
        }
        let ones = WeightSequence::ones(4);
        let g = conjugate_gamma(&ones, 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((g.get(i, j) - 1.0 / (i.max(j) + 1) as f64).abs() < 1e-12);
            }
        }
        let w = WeightSequence::new(vec![1.0, 0.5, 1.0 / 3.0]).unwrap();
        let diff = conjugate_gamma(&w, 3)
            .unwrap()
            .max_abs_diff(&gram_gamma(&w, 3).unwrap())
            .unwrap();
        assert!(diff < 1e-12);
    }
}
