//! Operator norms and eigenvalues.
//!
//! Deterministic power iteration estimates the dominant eigenvalue of a
//! symmetric operator; the cyclic Jacobi solver computes the whole spectrum
//! and serves as the independent oracle; the nonlinear power method handles
//! `l^p` norms of nonnegative matrices.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matrices::{DenseMatrix, DenseSymMatrix};

/// Largest dimension accepted by [`eig_sym_all`].
pub const JACOBI_MAX_DIM: usize = 2048;
/// Sweep cap of the Jacobi solver.
pub const JACOBI_MAX_SWEEPS: usize = 64;
/// Default tolerance of the PSD witness.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Consecutive stalled iterations before the start vector is perturbed.
const STALL_WINDOW: usize = 32;

/// A symmetric linear operator given by its action on vectors.
pub trait SymOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

impl SymOperator for DenseSymMatrix {
    fn dim(&self) -> usize {
        DenseSymMatrix::dim(self)
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.matvec(x, out)
    }
}

/// `BᵀB` applied as two matrix-vector products.
#[derive(Debug, Clone, Copy)]
pub struct Gram<'a>(pub &'a DenseMatrix);

impl SymOperator for Gram<'_> {
    fn dim(&self) -> usize {
        self.0.ncols()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let mut tmp = vec![0.0; self.0.nrows()];
        self.0.matvec(x, &mut tmp);
        self.0.matvec_transpose(&tmp, out);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100_000,
        }
    }
}

impl IterationConfig {
    pub fn new(tolerance: f64, max_iterations: usize) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return domain(format!("tolerance must be > 0, got {tolerance}"));
        }
        if max_iterations == 0 {
            return domain("max_iterations must be >= 1");
        }
        Ok(Self {
            tolerance,
            max_iterations,
        })
    }
}

/// A norm value with convergence metadata. `value` is always attained by a
/// concrete vector, so it never exceeds the true norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Result of power iteration: Rayleigh quotient and its unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = norm2(x);
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

/// Rayleigh quotient `θ = vᵀAv` and residual `‖Av − θv‖₂` for unit `v`,
/// with `w = Av` already computed.
fn rayleigh(v: &[f64], w: &[f64]) -> (f64, f64) {
    let theta = dot(v, w);
    let res = v
        .iter()
        .zip(w)
        .map(|(a, b)| (b - theta * a).powi(2))
        .sum::<f64>()
        .sqrt();
    (theta, res)
}

/// Power iteration for the eigenvalue of largest magnitude.
///
/// Starts from the normalized all-ones vector. Converged means
/// `‖Av − θv‖₂ ≤ tol·max(1, |θ|)`. When the Rayleigh quotient has stopped
/// moving and the residual sets no new minimum for 32 iterations in a row,
/// `1/(3+i)` is added to coordinate `i` (zero-based) and the iteration
/// continues. Slow but steady convergence under a small gap keeps setting
/// new minima and is left alone.
pub fn dominant_eigenpair<A: SymOperator + ?Sized>(a: &A, cfg: &IterationConfig) -> EigenPair {
    let n = a.dim();
    if n == 0 {
        return EigenPair {
            value: 0.0,
            vector: Vec::new(),
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
    }
    let tol = cfg.tolerance;
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0; n];
    a.apply(&v, &mut w);
    if norm2(&w) == 0.0 {
        // All-ones is in the kernel; start from the perturbation instead.
        v.iter_mut()
            .enumerate()
            .for_each(|(i, x)| *x = 1.0 / (3.0 + i as f64));
        normalize(&mut v);
        a.apply(&v, &mut w);
    }
    let (mut theta, mut residual) = rayleigh(&v, &w);
    let mut best_residual = residual;
    let mut stalled = 0usize;
    let mut iterations = 0usize;

    while residual > tol * theta.abs().max(1.0) && iterations < cfg.max_iterations {
        iterations += 1;
        let prev_theta = theta;

        std::mem::swap(&mut v, &mut w);
        normalize(&mut v);
        a.apply(&v, &mut w);
        (theta, residual) = rayleigh(&v, &w);

        let flat = (theta - prev_theta).abs() < tol * theta.abs().max(1.0);
        if flat && residual >= best_residual {
            stalled += 1;
        } else {
            stalled = 0;
        }
        best_residual = best_residual.min(residual);
        if stalled >= STALL_WINDOW {
            stalled = 0;
            v.iter_mut()
                .enumerate()
                .for_each(|(i, x)| *x += 1.0 / (3.0 + i as f64));
            normalize(&mut v);
            a.apply(&v, &mut w);
            (theta, residual) = rayleigh(&v, &w);
            best_residual = residual;
        }
    }

    EigenPair {
        value: theta,
        converged: residual <= tol * theta.abs().max(1.0),
        vector: v,
        iterations,
        residual,
    }
}

/// Largest eigenvalue magnitude of a symmetric operator.
pub fn spectral_norm<A: SymOperator + ?Sized>(a: &A, cfg: &IterationConfig) -> NormEstimate {
    let pair = dominant_eigenpair(a, cfg);
    NormEstimate {
        value: pair.value.abs(),
        iterations: pair.iterations,
        residual: pair.residual,
        converged: pair.converged,
    }
}

/// Largest eigenvalue magnitude of a dense symmetric matrix.
pub fn spectral_norm_sym(a: &DenseSymMatrix, cfg: &IterationConfig) -> NormEstimate {
    spectral_norm(a, cfg)
}

/// `‖B‖₂ = √λ_max(BᵀB)`; `residual` refers to the Gram iteration.
pub fn operator_norm_2(b: &DenseMatrix, cfg: &IterationConfig) -> Result<NormEstimate> {
    if !b.is_finite() {
        return domain("matrix has non-finite entries");
    }
    let est = spectral_norm(&Gram(b), cfg);
    Ok(NormEstimate {
        value: est.value.sqrt(),
        ..est
    })
}

/// Largest singular value; for a skew matrix this is the sharp constant of
/// its bilinear form.
pub fn max_singular_value(k: &DenseMatrix, cfg: &IterationConfig) -> Result<NormEstimate> {
    operator_norm_2(k, cfg)
}

fn p_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x
        .iter()
        .map(|v| (v.abs() / m).powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

fn signed_pow(x: f64, e: f64) -> f64 {
    x.signum() * x.abs().powf(e)
}

/// `l^p → l^p` norm of a nonnegative matrix by the nonlinear power method.
///
/// Each step maps `x ↦ ψ_q(Bᵀ ψ_p(Bx))` with `ψ_p(y) = |y|^{p−1}sign(y)`,
/// followed by normalization to unit `p`-norm. For nonnegative `B` the ratio
/// `‖Bx‖_p / ‖x‖_p` is nondecreasing along the iteration. `residual` is the
/// max-norm change of the normalized iterate; the reported value is the
/// best ratio seen.
pub fn operator_norm_p(b: &DenseMatrix, p: f64, cfg: &IterationConfig) -> Result<NormEstimate> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("operator_norm_p needs p > 1, got {p}"));
    }
    if !b.is_finite() || !b.is_nonnegative() {
        return domain("operator_norm_p needs a finite nonnegative matrix");
    }
    let q = p / (p - 1.0);
    let (rows, cols) = b.shape();
    if rows == 0 || cols == 0 {
        return Ok(NormEstimate {
            value: 0.0,
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }

    let mut x = vec![1.0; cols];
    let s = p_norm(&x, p);
    x.iter_mut().for_each(|v| *v /= s);
    let mut y = vec![0.0; rows];
    let mut z = vec![0.0; cols];
    let mut best = 0.0f64;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;

    loop {
        b.matvec(&x, &mut y);
        best = best.max(p_norm(&y, p));
        if residual <= cfg.tolerance || iterations >= cfg.max_iterations {
            break;
        }
        iterations += 1;
        y.iter_mut().for_each(|v| *v = signed_pow(*v, p - 1.0));
        b.matvec_transpose(&y, &mut z);
        z.iter_mut().for_each(|v| *v = signed_pow(*v, q - 1.0));
        let s = p_norm(&z, p);
        if s == 0.0 {
            residual = 0.0;
            break;
        }
        residual = x
            .iter_mut()
            .zip(&z)
            .map(|(xi, zi)| {
                let next = zi / s;
                let d = (next - *xi).abs();
                *xi = next;
                d
            })
            .fold(0.0, f64::max);
    }

    Ok(NormEstimate {
        value: best,
        iterations,
        residual,
        converged: residual <= cfg.tolerance,
    })
}

/// Outcome of a Jacobi eigen-decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiOutcome {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
    /// Frobenius norm of the remaining off-diagonal part.
    pub off_diagonal: f64,
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn eig_sym_all(a: &DenseSymMatrix) -> Result<Vec<f64>> {
    jacobi_eigen(a).map(|o| o.eigenvalues)
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            acc += m[p * n + q] * m[p * n + q];
        }
    }
    (2.0 * acc).sqrt()
}

/// Cyclic-by-row Jacobi rotations with the threshold strategy: during the
/// first three sweeps only entries above `0.2·Σ|a_pq|/n²` are rotated, and
/// later on entries negligible against both diagonal elements are zeroed.
/// Stops once the off-diagonal Frobenius norm is below `1e-15·‖A‖_F`;
/// ending above `1e-14·‖A‖_F` after 64 sweeps is an error.
pub fn jacobi_eigen(a: &DenseSymMatrix) -> Result<JacobiOutcome> {
    let n = a.dim();
    if n > JACOBI_MAX_DIM {
        return Err(Error::SizeLimit {
            n,
            max: JACOBI_MAX_DIM,
        });
    }
    let mut m = a.to_dense().as_slice().to_vec();
    if m.iter().any(|x| !x.is_finite()) {
        return domain("matrix has non-finite entries");
    }
    let frob = a.frobenius_norm();
    let mut off = off_diagonal_norm(&m, n);
    let mut sweeps = 0;
    let mut rots: Vec<(usize, f64, f64)> = Vec::with_capacity(n);
    let mut done = vec![0usize; n];

    while off > 1e-15 * frob && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        let abs_sum: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[p * n + q].abs())
            .sum();
        let threshold = if sweeps <= 3 {
            0.2 * abs_sum / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            // Column updates of this pivot row's rotations are deferred and
            // replayed row by row, so every write stays within one row.
            rots.clear();
            done.fill(0);
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    replay(&mut m, n, p, q, &rots, &mut done[q]);
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                if apq.abs() <= threshold {
                    continue;
                }
                replay(&mut m, n, p, q, &rots, &mut done[q]);
                rots.push(rotate(&mut m, n, p, q));
                done[q] = rots.len();
            }
            // Rows never rotated against `p` have no skip and no offset, so
            // their replays run in independent groups.
            if !rots.is_empty() {
                let fresh: Vec<usize> = (0..n).filter(|&k| k != p && done[k] == 0).collect();
                let mut groups = fresh.chunks_exact(REPLAY_GROUP);
                for g in groups.by_ref() {
                    replay_group(&mut m, n, p, g.try_into().expect("group size"), &rots);
                }
                for &k in groups.remainder() {
                    replay(&mut m, n, p, k, &rots, &mut done[k]);
                }
                for (k, d) in done.iter_mut().enumerate() {
                    if k != p && *d != 0 {
                        replay(&mut m, n, p, k, &rots, d);
                    }
                }
            }
        }
        off = off_diagonal_norm(&m, n);
    }

    if off > 1e-14 * frob {
        return Err(Error::NotConverged {
            method: "Jacobi eigensolver",
            iterations: sweeps,
        });
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(JacobiOutcome {
        eigenvalues,
        sweeps,
        off_diagonal: off,
    })
}

/// Annihilates `m[p][q]` (p < q) by rotating rows `p` and `q`. Returns
/// `(q, s, tau)`; the matching column update is left to [`replay`].
fn rotate(m: &mut [f64], n: usize, p: usize, q: usize) -> (usize, f64, f64) {
    let apq = m[p * n + q];
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    let (head, tail) = m.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let g = *x;
        let h = *y;
        *x = g - s * (h + g * tau);
        *y = h + s * (g - h * tau);
    }
    rp[p] = app - t * apq;
    rq[q] = aqq + t * apq;
    rp[q] = 0.0;
    rq[p] = 0.0;
    (q, s, tau)
}

const REPLAY_GROUP: usize = 8;

fn replay_group(
    m: &mut [f64],
    n: usize,
    p: usize,
    rows: [usize; REPLAY_GROUP],
    rots: &[(usize, f64, f64)],
) {
    let base = rows.map(|k| k * n);
    let mut x = base.map(|b| m[b + p]);
    for &(q, s, tau) in rots {
        for j in 0..REPLAY_GROUP {
            let g = x[j];
            let h = m[base[j] + q];
            x[j] = g - s * (h + g * tau);
            m[base[j] + q] = h + s * (g - h * tau);
        }
    }
    for j in 0..REPLAY_GROUP {
        m[base[j] + p] = x[j];
    }
}

/// Brings row `k` up to date with the column updates of `rots[*done..]`.
fn replay(
    m: &mut [f64],
    n: usize,
    p: usize,
    k: usize,
    rots: &[(usize, f64, f64)],
    done: &mut usize,
) {
    if *done >= rots.len() {
        return;
    }
    let row = &mut m[k * n..(k + 1) * n];
    let mut x = row[p];
    for &(q, s, tau) in &rots[*done..] {
        if q == k {
            continue;
        }
        let g = x;
        let h = row[q];
        x = g - s * (h + g * tau);
        row[q] = h + s * (g - h * tau);
    }
    row[p] = x;
    *done = rots.len();
}

/// PSD verdict with the smallest eigenvalue as witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

pub fn is_positive_semidefinite(a: &DenseSymMatrix, tol: f64) -> Result<PsdVerdict> {
    let eig = eig_sym_all(a)?;
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    Ok(PsdVerdict {
        is_psd: min_eigenvalue >= -tol,
        min_eigenvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{
        gram_beta, hadamard_product, mv_skew_matrix, schur_x_matrix, weighted_mean_matrix,
        SpacedSequence, WeightSequence,
    };
    use crate::verify::TrialRng;

    fn cfg() -> IterationConfig {
        IterationConfig::default()
    }

    fn random_sym(rng: &mut TrialRng, n: usize, signed: bool) -> DenseSymMatrix {
        DenseSymMatrix::from_fn(n, |_, _| {
            let u = rng.next_f64();
            if signed {
                2.0 * u - 1.0
            } else {
                u
            }
        })
    }

    #[test]
    fn spectral_norm_examples() {
        let e = spectral_norm_sym(&DenseSymMatrix::identity(3), &cfg());
        assert!((e.value - 1.0).abs() < 1e-15 && e.converged);
        let a = gram_beta(&WeightSequence::ones(2), 2).unwrap();
        let want = (1.5 + 1.25f64.sqrt()) / 2.0;
        let e = spectral_norm_sym(&a, &cfg());
        assert!((e.value - want).abs() < 1e-12, "{e:?}");
        let e = spectral_norm_sym(&DenseSymMatrix::diagonal(&[1.0, 2.0, 3.0]), &cfg());
        assert!((e.value - 3.0).abs() < 1e-12 && e.converged);
    }

    #[test]
    fn zero_matrix_and_negative_dominant() {
        let e = spectral_norm_sym(&DenseSymMatrix::from_fn(3, |_, _| 0.0), &cfg());
        assert_eq!(e.value, 0.0);
        assert!(e.converged);
        let e = spectral_norm_sym(&DenseSymMatrix::diagonal(&[1.0, -5.0, 2.0]), &cfg());
        assert!((e.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn start_vector_in_null_space_is_recovered() {
        // All-ones is annihilated by this matrix.
        let a = DenseSymMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { -1.0 });
        let e = spectral_norm_sym(&a, &cfg());
        assert!((e.value - 2.0).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn nonconvergence_is_reported() {
        // Eigenvalues ±1 with equal weight on both: θ never settles.
        let a = DenseSymMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        let b = DenseSymMatrix::diagonal(&[1.0, -1.0]);
        let cfg = IterationConfig::new(1e-12, 200).unwrap();
        let e = spectral_norm_sym(&b, &cfg);
        assert!(!e.converged);
        assert_eq!(e.iterations, 200);
        assert!(e.value <= 1.0);
        let e = spectral_norm_sym(&a, &cfg);
        assert!((e.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(
            eig_sym_all(&DenseSymMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        let a = gram_beta(&WeightSequence::ones(2), 2).unwrap();
        let e = eig_sym_all(&a).unwrap();
        let r = 1.25f64.sqrt();
        assert!((e[0] - (1.5 - r) / 2.0).abs() < 1e-15);
        assert!((e[1] - (1.5 + r) / 2.0).abs() < 1e-15);
        let ones = DenseSymMatrix::from_fn(4, |_, _| 1.0);
        let e = eig_sym_all(&ones).unwrap();
        for (x, want) in e.iter().zip([0.0, 0.0, 0.0, 4.0]) {
            assert!((x - want).abs() < 1e-14, "{e:?}");
        }
    }

    #[test]
    fn jacobi_size_limit() {
        let big = DenseSymMatrix::identity(JACOBI_MAX_DIM + 1);
        assert!(matches!(eig_sym_all(&big), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn jacobi_trace_and_off_diagonal() {
        let mut rng = TrialRng::new(11);
        for n in [1, 2, 7, 33, 64] {
            let a = random_sym(&mut rng, n, true);
            let out = jacobi_eigen(&a).unwrap();
            let sum: f64 = out.eigenvalues.iter().sum();
            assert!((sum - a.trace()).abs() <= 1e-10 * n as f64);
            assert!(out.off_diagonal <= 1e-14 * a.frobenius_norm());
            assert!(out.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn power_iteration_matches_jacobi() {
        let mut rng = TrialRng::new(5);
        for k in 0..40 {
            let n = 2 + (k * 7) % 63;
            let a = random_sym(&mut rng, n, false);
            let est = spectral_norm_sym(&a, &cfg());
            let eig = eig_sym_all(&a).unwrap();
            let top = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            assert!(est.converged);
            assert!((est.value - top).abs() <= 1e-9 * top.max(1.0), "n={n}");
            assert!(est.value <= top * (1.0 + 1e-14));
        }
    }

    #[test]
    fn small_gap_converges_without_restarts() {
        // Residual shrinks by 0.997 per step, slower than any fixed ratio test.
        let d = [1.0, 0.997, 0.5];
        let a = DenseSymMatrix::from_fn(3, |i, j| if i == j { d[i] } else { 0.0 });
        let est = spectral_norm_sym(&a, &cfg());
        assert!(est.converged, "{est:?}");
        assert!((est.value - 1.0).abs() < 1e-12);
        assert!(est.iterations < 20_000, "{}", est.iterations);
    }

    #[test]
    fn operator_norm_examples() {
        let e = operator_norm_2(&DenseMatrix::identity(4), &cfg()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-15);
        let b = weighted_mean_matrix(&WeightSequence::ones(2));
        let want = ((1.5 + 1.25f64.sqrt()) / 2.0).sqrt();
        assert!((operator_norm_2(&b, &cfg()).unwrap().value - want).abs() < 1e-12);
        assert!((want - 1.1441228).abs() < 1e-7);
        let d = DenseMatrix::diagonal(&[0.5, -3.0, 2.0]);
        assert!((operator_norm_2(&d, &cfg()).unwrap().value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn duality_on_random_rectangular() {
        let mut rng = TrialRng::new(3);
        for _ in 0..20 {
            let (r, c) = (1 + rng.next_below(20), 1 + rng.next_below(20));
            let b = DenseMatrix::from_fn(r, c, |_, _| rng.next_f64() - 0.3);
            let x = operator_norm_2(&b, &cfg()).unwrap().value;
            let y = operator_norm_2(&b.transpose(), &cfg()).unwrap().value;
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn p_norm_examples() {
        let d = DenseMatrix::diagonal(&[0.5, 3.0, 2.0]);
        for p in [1.5, 2.0, 4.0] {
            let e = operator_norm_p(&d, p, &cfg()).unwrap();
            assert!((e.value - 3.0).abs() < 1e-9, "p={p}: {e:?}");
        }
        let b = weighted_mean_matrix(&WeightSequence::ones(16));
        let two = operator_norm_2(&b, &cfg()).unwrap().value;
        let p2 = operator_norm_p(&b, 2.0, &cfg()).unwrap();
        assert!(p2.converged);
        assert!((two - p2.value).abs() < 1e-9);
        assert!(operator_norm_p(&b, 1.0, &cfg()).is_err());
        let neg = DenseMatrix::diagonal(&[1.0, -1.0]);
        assert!(operator_norm_p(&neg, 2.0, &cfg()).is_err());
    }

    #[test]
    fn cesaro_p_norm_below_hardy_constant() {
        let b = weighted_mean_matrix(&WeightSequence::ones(1024));
        let cfg = IterationConfig::new(1e-12, 2000).unwrap();
        let e = operator_norm_p(&b, 1.5, &cfg).unwrap();
        assert!(e.value < 3.0 && e.value > 2.0, "{e:?}");
    }

    #[test]
    fn singular_value_examples() {
        let z = max_singular_value(&DenseMatrix::zeros(3, 3), &cfg()).unwrap();
        assert_eq!(z.value, 0.0);
        let rot = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!((max_singular_value(&rot, &cfg()).unwrap().value - 1.0).abs() < 1e-12);
        let k = mv_skew_matrix(&SpacedSequence::integers(16), 1.0).unwrap();
        assert!(max_singular_value(&k, &cfg()).unwrap().value < std::f64::consts::PI);
    }

    #[test]
    fn psd_examples() {
        let v = is_positive_semidefinite(&DenseSymMatrix::identity(3), PSD_TOLERANCE).unwrap();
        assert!(v.is_psd && v.min_eigenvalue == 1.0);
        let v = is_positive_semidefinite(&DenseSymMatrix::diagonal(&[1.0, -1.0]), PSD_TOLERANCE)
            .unwrap();
        assert!(!v.is_psd && v.min_eigenvalue == -1.0);
        let s = SpacedSequence::new(vec![1.0, 2.0, 3.0, 5.0, 8.0], 1.0).unwrap();
        let v = is_positive_semidefinite(&schur_x_matrix(&s, 3.0).unwrap(), PSD_TOLERANCE).unwrap();
        assert!(v.is_psd);
    }

    #[test]
    fn schur_product_bound() {
        let mut rng = TrialRng::new(99);
        let s = SpacedSequence::new(vec![1.0, 1.5, 3.0, 4.0, 7.0, 7.5, 11.0], 0.5).unwrap();
        for alpha in [1.0, 2.0, 3.5] {
            let x = schur_x_matrix(&s, alpha).unwrap();
            for _ in 0..10 {
                let y = random_sym(&mut rng, s.len(), true);
                let xy = hadamard_product(&x.to_dense(), &y.to_dense()).unwrap();
                let lhs = operator_norm_2(&xy, &cfg()).unwrap().value;
                let ynorm = eig_sym_all(&y)
                    .unwrap()
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                assert!(lhs <= (1.0 / alpha) * ynorm + 1e-10, "alpha={alpha}");
            }
        }
    }

    #[test]
    fn gram_consistency() {
        let k = mv_skew_matrix(&SpacedSequence::integers(12), 2.0).unwrap();
        let ktk =
            DenseSymMatrix::from_dense_symmetrized(&k.transpose().matmul(&k).unwrap()).unwrap();
        let sv = max_singular_value(&k, &cfg()).unwrap().value;
        let lam = spectral_norm_sym(&ktk, &cfg()).value;
        assert!((sv * sv - lam).abs() < 1e-9);
    }

    #[test]
    fn monotone_truncation_of_cesaro_gram() {
        let w = WeightSequence::ones(512);
        let mut prev = 0.0;
        for n in [2, 4, 8, 16, 32, 64, 128, 256, 512] {
            let v = spectral_norm_sym(&gram_beta(&w, n).unwrap(), &cfg()).value;
            assert!(v >= prev, "n={n}");
            prev = v;
        }
    }
}
