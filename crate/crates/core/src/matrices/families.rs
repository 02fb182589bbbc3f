//! Finite truncations of the coefficient matrices. Formulas are written with
//! one-based mathematical indices `i = idx + 1`.

use super::{DenseMatrix, DenseSymMatrix, SpacedSequence, WeightSequence};
use crate::error::{domain, Error, Result};
use crate::means::log_mean;
use crate::sum::CompensatedSum;

#[inline]
fn one_based(idx: usize) -> f64 {
    (idx + 1) as f64
}

/// Lower-triangular weighted mean matrix `η_{i,j} = λ_j / Λ_i` for `j ≤ i`.
pub fn weighted_mean_matrix(w: &WeightSequence) -> DenseMatrix {
    let (lambda, prefix) = (w.lambda(), w.prefix());
    DenseMatrix::from_fn(w.len(), w.len(), |i, j| {
        if j <= i {
            lambda[j] / prefix[i]
        } else {
            0.0
        }
    })
}

/// Backward-accumulated tails `t[m] = Σ_{k=m}^{n-1} terms[k]`.
fn tail_sums(terms: &[f64]) -> Vec<f64> {
    let mut tails = vec![0.0; terms.len()];
    let mut acc = CompensatedSum::new();
    for k in (0..terms.len()).rev() {
        acc.add(terms[k]);
        tails[k] = acc.value();
    }
    tails
}

/// Gram matrix `BᵀB` of the weighted mean matrix:
/// `β_{i,j} = λ_i λ_j Σ_{k=max(i,j)}^{N} Λ_k^{−2}`.
pub fn gram_beta(w: &WeightSequence, n: usize) -> Result<DenseSymMatrix> {
    w.check_len(n)?;
    let (lambda, prefix) = (w.lambda(), w.prefix());
    let inv_sq: Vec<f64> = prefix[..n].iter().map(|p| 1.0 / (p * p)).collect();
    let tails = tail_sums(&inv_sq);
    Ok(DenseSymMatrix::from_fn(n, |i, j| {
        lambda[i] * lambda[j] * tails[i]
    }))
}

/// Copson (adjoint) form `γ_{i,j} = Σ_{k≤min(i,j)} λ_k² / (Λ_i Λ_j)`.
pub fn gram_gamma(w: &WeightSequence, n: usize) -> Result<DenseSymMatrix> {
    w.check_len(n)?;
    let (lambda, prefix) = (w.lambda(), w.prefix());
    let squares: Vec<f64> = lambda[..n].iter().map(|l| l * l).collect();
    let sq_prefix = crate::sum::prefix_sums(&squares);
    Ok(DenseSymMatrix::from_fn(n, |i, j| {
        sq_prefix[j] / (prefix[i] * prefix[j])
    }))
}

fn check_alpha_above_half(alpha: f64, what: &str) -> Result<()> {
    if !(alpha > 0.5 && alpha.is_finite()) {
        return domain(format!("{what} needs alpha > 1/2, got {alpha}"));
    }
    Ok(())
}

/// `m_{i,j} = α² min(i,j)^{2α−1} / ((2α−1) i^α j^α)`.
///
/// The Schur-test constant for this matrix is only established for
/// `1/2 < α ≤ 3/2`; larger `α` is accepted with a warning.
pub fn m_alpha_matrix(alpha: f64, n: usize) -> Result<DenseSymMatrix> {
    check_alpha_above_half(alpha, "M(alpha)")?;
    if alpha > 1.5 {
        log::warn!("M(alpha) with alpha = {alpha} is outside (1/2, 3/2]");
    }
    Ok(DenseSymMatrix::from_fn(n, |i, j| {
        m_alpha_entry(alpha, i, j)
    }))
}

/// Single entry of `M(α)` at zero-based `(i, j)`.
#[inline]
pub fn m_alpha_entry(alpha: f64, i: usize, j: usize) -> f64 {
    let (fi, fj) = (one_based(i), one_based(j));
    let r = 2.0 * alpha - 1.0;
    alpha * alpha * fi.min(fj).powf(r) / (r * fi.powf(alpha) * fj.powf(alpha))
}

/// `ℓ_i = L_{2α−1}(i, i−1)^{α−1}` for `i = 1..=n`, with `L(1, 0)` taken as
/// the `b → 0⁺` limit.
pub fn copson_multipliers(alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_alpha_above_half(alpha, "L_{2alpha-1}")?;
    let r = 2.0 * alpha - 1.0;
    (0..n)
        .map(|i| Ok(log_mean(r, one_based(i), i as f64)?.powf(alpha - 1.0)))
        .collect()
}

/// `n_{i,j} = α² ℓ_i ℓ_j Σ_{k=max(i,j)}^{N} k^{−2α}`, the matrix of the dual form.
pub fn n_alpha_matrix(alpha: f64, n: usize) -> Result<DenseSymMatrix> {
    let ell = copson_multipliers(alpha, n)?;
    let terms: Vec<f64> = (0..n).map(|k| one_based(k).powf(-2.0 * alpha)).collect();
    let tails = tail_sums(&terms);
    let a2 = alpha * alpha;
    Ok(DenseSymMatrix::from_fn(n, |i, j| {
        a2 * ell[i] * ell[j] * tails[i]
    }))
}

/// Upper-triangular `C` with `c_{n,i} = α ℓ_n / i^α` for `i ≥ n`; `CᵀC = M(α)`.
pub fn copson_l_matrix(alpha: f64, n: usize) -> Result<DenseMatrix> {
    let ell = copson_multipliers(alpha, n)?;
    let inv_pow: Vec<f64> = (0..n).map(|i| one_based(i).powf(-alpha)).collect();
    Ok(DenseMatrix::from_fn(n, n, |row, col| {
        if col >= row {
            alpha * ell[row] * inv_pow[col]
        } else {
            0.0
        }
    }))
}

/// Order `r` of the power mean `P_r`; `Infinity` is the `r → ∞` limit `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelOrder {
    Finite(f64),
    Infinity,
}

impl KernelOrder {
    fn validate(self) -> Result<Self> {
        match self {
            KernelOrder::Finite(r) if !(r >= 1.0 && r.is_finite()) => {
                domain(format!("kernel order must be >= 1, got {r}"))
            }
            _ => Ok(self),
        }
    }
}

impl std::fmt::Display for KernelOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelOrder::Finite(r) => write!(f, "{r}"),
            KernelOrder::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for KernelOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(KernelOrder::Infinity),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad kernel order {s:?}")))
                .and_then(|r| KernelOrder::Finite(r).validate()),
        }
    }
}

/// Power mean `P_r(x, y) = ((x^r + y^r)/2)^{1/r}`, evaluated as
/// `max·((1 + (min/max)^r)/2)^{1/r}` to stay finite for large `r`.
pub fn power_mean(order: KernelOrder, x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    match order {
        KernelOrder::Infinity => hi,
        KernelOrder::Finite(1.0) => 0.5 * (x + y),
        KernelOrder::Finite(r) => hi * (0.5 * (1.0 + (lo / hi).powf(r))).powf(1.0 / r),
    }
}

/// Kernel matrix with entries `1 / P_r(i, j)`.
pub fn power_mean_kernel(order: KernelOrder, n: usize) -> Result<DenseSymMatrix> {
    let order = order.validate()?;
    Ok(DenseSymMatrix::from_fn(n, |i, j| {
        1.0 / power_mean(order, one_based(i), one_based(j))
    }))
}

/// Kernel matrix with entries `1 / P_r(i^α j^{1−α}, i^{1−α} j^α)`.
pub fn generalized_kernel(order: KernelOrder, alpha: f64, n: usize) -> Result<DenseSymMatrix> {
    let order = order.validate()?;
    if !alpha.is_finite() {
        return domain(format!("alpha must be finite, got {alpha}"));
    }
    Ok(DenseSymMatrix::from_fn(n, |i, j| {
        let (fi, fj) = (one_based(i), one_based(j));
        let x = fi.powf(alpha) * fj.powf(1.0 - alpha);
        let y = fi.powf(1.0 - alpha) * fj.powf(alpha);
        1.0 / power_mean(order, x, y)
    }))
}

/// Hilbert matrix `1 / (i + j)` with one-based indices.
pub fn hilbert_matrix(n: usize) -> DenseSymMatrix {
    DenseSymMatrix::from_fn(n, |i, j| 1.0 / (one_based(i) + one_based(j)))
}

fn check_alpha_at_least_one(alpha: f64) -> Result<()> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return domain(format!("alpha must be >= 1, got {alpha}"));
    }
    Ok(())
}

/// Skew matrix `K_{rs} = (λ_r λ_s)^{(α−1)/2} / (λ_r^α − λ_s^α)` with zero diagonal.
pub fn mv_skew_matrix(s: &SpacedSequence, alpha: f64) -> Result<DenseMatrix> {
    check_alpha_at_least_one(alpha)?;
    let v = s.values();
    let pw: Vec<f64> = v.iter().map(|x| x.powf(alpha)).collect();
    let n = v.len();
    let mut k = DenseMatrix::zeros(n, n);
    for r in 0..n {
        for c in r + 1..n {
            let entry = (v[r] * v[c]).powf(0.5 * (alpha - 1.0)) / (pw[r] - pw[c]);
            k.set(r, c, entry);
            k.set(c, r, -entry);
        }
    }
    Ok(k)
}

/// `X_{rs} = (λ_r − λ_s)(λ_r λ_s)^{(α−1)/2} / (λ_r^α − λ_s^α)`, `X_{rr} = 1/α`.
pub fn schur_x_matrix(s: &SpacedSequence, alpha: f64) -> Result<DenseSymMatrix> {
    check_alpha_at_least_one(alpha)?;
    let v = s.values();
    let pw: Vec<f64> = v.iter().map(|x| x.powf(alpha)).collect();
    Ok(DenseSymMatrix::from_fn(v.len(), |r, c| {
        if r == c {
            1.0 / alpha
        } else {
            (v[r] - v[c]) * (v[r] * v[c]).powf(0.5 * (alpha - 1.0)) / (pw[r] - pw[c])
        }
    }))
}

/// Entrywise (Schur) product.
pub fn hadamard_product(x: &DenseMatrix, y: &DenseMatrix) -> Result<DenseMatrix> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            expected: x.shape(),
            found: y.shape(),
        });
    }
    Ok(DenseMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
        x.get(i, j) * y.get(i, j)
    }))
}
