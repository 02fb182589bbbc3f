use std::f64::consts::PI;

use crate::certificates::{m_alpha_certificate, m_alpha_constant, row_majorant};
use crate::error::{domain, Result};
use crate::matrices::{
    conjugate_gamma, conjugate_n_alpha, copson_l_matrix, gram_beta, gram_gamma, hadamard_product,
    hilbert_matrix, m_alpha_matrix, mv_skew_matrix, n_alpha_matrix, power_mean_kernel,
    schur_x_matrix, weighted_mean_matrix, DenseMatrix, DenseSymMatrix, KernelOrder, SpacedSequence,
    WeightSequence,
};
use crate::spectral::{
    eig_sym_all, max_singular_value, operator_norm_2, spectral_norm_sym, IterationConfig,
    PSD_TOLERANCE,
};

use super::{CheckReport, Tally, TrialRng, SLACK_ENTRYWISE, SLACK_POINTWISE, SLACK_SPECTRAL};

fn top_eigenvalue(a: &DenseSymMatrix) -> Result<f64> {
    Ok(eig_sym_all(a)?.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

/// Cesàro Gram norms: below 4, strictly increasing along `ns`, and equal to
/// the Jacobi value.
pub fn check_hardy_constant(ns: &[usize]) -> Result<CheckReport> {
    let cfg = IterationConfig::default();
    let mut t = Tally::new("hardy_constant", SLACK_SPECTRAL);
    let mut prev = 0.0;
    for &n in ns {
        let g = gram_beta(&WeightSequence::ones(n), n)?;
        let est = spectral_norm_sym(&g, &cfg);
        let oracle = top_eigenvalue(&g)?;
        t.close(est.value, oracle, SLACK_SPECTRAL, || {
            format!("N={n} oracle")
        });
        t.require(est.converged, || {
            format!("N={n} power iteration not converged")
        });
        t.le_with(est.value, 4.0, 0.0, || format!("N={n} value {}", est.value));
        t.require(est.value < 4.0, || format!("N={n} not below 4"));
        t.require(est.value > prev, || format!("N={n} not increasing"));
        prev = est.value;
    }
    Ok(t.finish())
}

/// Schur-test certificate of `M(α)`: every weighted row sum below its
/// integral majorant, `U1` below the quoted finite-`N` value, and the power
/// iteration estimate below the certified bound.
pub fn check_certificate(alpha: f64, n: usize) -> Result<CheckReport> {
    let cert = m_alpha_certificate(alpha, n)?;
    let mut t = Tally::new(
        format!("certificates[alpha={alpha},N={n}]"),
        crate::certificates::ROW_SLACK,
    );
    for (k, &v) in cert.schur.row_values.iter().enumerate() {
        t.le(v, row_majorant(alpha, k + 1, n), || {
            format!("row {}", k + 1)
        });
    }
    t.le(cert.schur.u1, cert.analytic_bound, || {
        "U1 vs analytic".into()
    });
    t.require(cert.schur.u1 == cert.schur.u2, || "U1 != U2".into());
    if n <= 2048 {
        let est = spectral_norm_sym(&m_alpha_matrix(alpha, n)?, &IterationConfig::default());
        t.le_with(est.value, cert.schur.bound, SLACK_SPECTRAL, || {
            format!(
                "sandwich: estimate {} vs certificate {}",
                est.value, cert.schur.bound
            )
        });
    }
    Ok(t.finish())
}

/// `‖M(α)‖ ≤ α²/(α−½)²`, with the Jacobi value as cross-check.
pub fn check_theorem1_constant(alpha: f64, n: usize) -> Result<CheckReport> {
    let m = m_alpha_matrix(alpha, n)?;
    let est = spectral_norm_sym(&m, &IterationConfig::default());
    let mut t = Tally::new(
        format!("theorem1_constant[alpha={alpha},N={n}]"),
        SLACK_SPECTRAL,
    );
    t.le(est.value, m_alpha_constant(alpha), || {
        format!("estimate {}", est.value)
    });
    if n <= 512 {
        let oracle = top_eigenvalue(&m)?;
        t.le(oracle, m_alpha_constant(alpha), || {
            format!("oracle {oracle}")
        });
        t.close(est.value, oracle, SLACK_SPECTRAL, || {
            "power vs oracle".into()
        });
    }
    Ok(t.finish())
}

/// `CᵀC = M(α)` entrywise for the Copson factor `C`.
pub fn check_telescoping(alpha: f64, n: usize) -> Result<CheckReport> {
    let c = copson_l_matrix(alpha, n)?;
    let ctc = c.transpose().matmul(&c)?;
    let m = m_alpha_matrix(alpha, n)?;
    let mut t = Tally::new(format!("telescoping[alpha={alpha},N={n}]"), SLACK_ENTRYWISE);
    for i in 0..n {
        for j in 0..n {
            t.close(ctc.get(i, j), m.get(i, j), SLACK_ENTRYWISE, || {
                format!("({}, {})", i + 1, j + 1)
            });
        }
    }
    Ok(t.finish())
}

/// The two similarity transforms and the equality of the spectra of `M(α)`
/// and `N(α)`.
pub fn check_similarity_suite(alpha: f64, n: usize) -> Result<CheckReport> {
    let mut t = Tally::new(
        format!("check_similarity_suite[alpha={alpha},N={n}]"),
        SLACK_ENTRYWISE,
    );
    let nm = n_alpha_matrix(alpha, n)?;
    let conj = conjugate_n_alpha(alpha, n)?;
    for i in 0..n {
        for j in 0..=i {
            t.close(conj.get(i, j), nm.get(i, j), SLACK_SPECTRAL, || {
                format!("(a) F E M E^-1 F^-1 vs N at ({}, {})", i + 1, j + 1)
            });
        }
    }
    for w in [
        WeightSequence::power_difference(alpha, n)?,
        WeightSequence::power(alpha, n)?,
    ] {
        let g = gram_gamma(&w, n)?;
        let cg = conjugate_gamma(&w, n)?;
        for i in 0..n {
            for j in 0..=i {
                t.close(cg.get(i, j), g.get(i, j), SLACK_ENTRYWISE, || {
                    format!("(b) G H beta H^-1 G^-1 vs gamma at ({}, {})", i + 1, j + 1)
                });
            }
        }
    }
    let em = eig_sym_all(&m_alpha_matrix(alpha, n)?)?;
    let en = eig_sym_all(&nm)?;
    for (k, (x, y)) in em.iter().zip(&en).enumerate() {
        t.close(*y, *x, 1e-8, || format!("(c) eigenvalue {}", k + 1));
    }
    Ok(t.finish())
}

/// `γ_ij ≤ m_ij` for `λ_k = k^α − (k−1)^α`.
pub fn check_gamma_le_m(alpha: f64, n: usize) -> Result<CheckReport> {
    if !(alpha > 0.5 && alpha <= 1.5) {
        return domain(format!("gamma <= m needs 1/2 < alpha <= 3/2, got {alpha}"));
    }
    let g = gram_gamma(&WeightSequence::power_difference(alpha, n)?, n)?;
    let m = m_alpha_matrix(alpha, n)?;
    let mut t = Tally::new(
        format!("check_gamma_le_m[alpha={alpha},N={n}]"),
        SLACK_POINTWISE,
    );
    for i in 0..n {
        for j in 0..=i {
            t.le(g.get(i, j), m.get(i, j), || {
                format!("({}, {})", i + 1, j + 1)
            });
        }
    }
    Ok(t.finish())
}

/// For nonincreasing weights, `γ_ij ≥ 1/max(i, j)` entrywise and hence
/// `‖γ‖ ≥ ‖(1/max(i, j))‖`.
pub fn check_gamma_ge_maxinv(label: &str, w: &WeightSequence, n: usize) -> Result<CheckReport> {
    if !w.is_nonincreasing() {
        return domain("gamma >= 1/max needs nonincreasing weights");
    }
    let g = gram_gamma(w, n)?;
    let k = power_mean_kernel(KernelOrder::Infinity, n)?;
    let mut t = Tally::new(
        format!("check_gamma_ge_maxinv[{label},N={n}]"),
        SLACK_POINTWISE,
    );
    for i in 0..n {
        for j in 0..=i {
            // -(γ - 1/max) ≤ 0
            t.le(k.get(i, j) - g.get(i, j), 0.0, || {
                format!("({}, {})", i + 1, j + 1)
            });
        }
    }
    let cfg = IterationConfig::default();
    let sg = spectral_norm_sym(&g, &cfg).value;
    let sk = spectral_norm_sym(&k, &cfg).value;
    t.le_with(sk, sg, SLACK_SPECTRAL, || format!("norms {sg} vs {sk}"));
    Ok(t.finish())
}

pub(crate) fn gamma_ge_maxinv_cases() -> Vec<Result<CheckReport>> {
    type Case = (&'static str, fn(usize) -> f64, usize);
    let cases: [Case; 4] = [
        ("ones", |_| 1.0, 16),
        ("1/k", |k| 1.0 / k as f64, 32),
        ("1/k", |k| 1.0 / k as f64, 64),
        ("2^-k", |k| 0.5f64.powi(k as i32), 64),
    ];
    cases
        .iter()
        .map(|&(label, f, n)| check_gamma_ge_maxinv(label, &WeightSequence::from_fn(n, f)?, n))
        .collect()
}

/// Hilbert matrix norms below `π`, strictly increasing, equal to the Jacobi
/// value, and to `pinned` values when given.
pub fn check_hilbert(ns: &[usize], pinned: Option<&[f64]>) -> Result<CheckReport> {
    if let Some(p) = pinned {
        if p.len() != ns.len() {
            return domain("pinned values must match the sizes");
        }
    }
    let cfg = IterationConfig::default();
    let mut t = Tally::new("hilbert", SLACK_SPECTRAL);
    let mut prev = 0.0;
    for (k, &n) in ns.iter().enumerate() {
        let h = hilbert_matrix(n);
        let est = spectral_norm_sym(&h, &cfg);
        let oracle = top_eigenvalue(&h)?;
        t.close(est.value, oracle, SLACK_SPECTRAL, || {
            format!("N={n} oracle")
        });
        if let Some(p) = pinned {
            t.close(est.value, p[k], SLACK_SPECTRAL, || format!("N={n} pinned"));
        }
        t.le_with(est.value, PI, 0.0, || format!("N={n} value {}", est.value));
        t.require(est.value < PI, || format!("N={n} not below pi"));
        t.require(est.value > prev, || format!("N={n} not increasing"));
        prev = est.value;
    }
    Ok(t.finish())
}

/// Largest singular value of the skew form below `π/(αδ)`; both the power
/// estimate and the Jacobi value of `KᵀK` are checked.
pub fn verify_mv_bound(label: &str, s: &SpacedSequence, alpha: f64) -> Result<CheckReport> {
    let k = mv_skew_matrix(s, alpha)?;
    let bound = PI / (alpha * s.delta());
    let est = max_singular_value(&k, &IterationConfig::default())?;
    let mut t = Tally::new(
        format!("verify_mv_bound[{label},alpha={alpha}]"),
        SLACK_SPECTRAL,
    );
    t.le(est.value, bound, || format!("estimate {}", est.value));
    if s.len() <= 512 {
        let ktk = DenseSymMatrix::from_dense_symmetrized(&k.transpose().matmul(&k)?)?;
        let oracle = top_eigenvalue(&ktk)?.sqrt();
        t.le(oracle, bound, || format!("oracle {oracle}"));
    }
    Ok(t.finish())
}

/// `δ`-spaced random points: `λ_1 ∈ [1, 2)`, gaps `δ + 2u`.
pub(crate) fn random_spaced(
    rng: &mut TrialRng,
    count: usize,
    delta: f64,
) -> Result<SpacedSequence> {
    let mut v = Vec::with_capacity(count);
    let mut x = 1.0 + rng.next_f64();
    for _ in 0..count {
        v.push(x);
        x += delta + 2.0 * rng.next_f64();
    }
    SpacedSequence::new(v, delta)
}

pub(crate) fn mv_cases(seed: u64) -> Vec<Result<CheckReport>> {
    let mut out: Vec<Result<CheckReport>> = [1.0, 2.0, 3.0]
        .iter()
        .map(|&a| verify_mv_bound("r, R=64", &SpacedSequence::integers(64), a))
        .collect();
    out.push(verify_mv_bound("r, R=2", &SpacedSequence::integers(2), 1.0));
    out.push(
        SpacedSequence::new((0..16).map(|k| 2f64.powi(k)).collect(), 1.0)
            .and_then(|s| verify_mv_bound("2^k, R=16", &s, 2.0)),
    );
    let mut rng = TrialRng::new(seed);
    for alpha in [1.0, 1.5, 2.5] {
        out.push(
            random_spaced(&mut rng, 48, 0.5)
                .and_then(|s| verify_mv_bound("random, R=48", &s, alpha)),
        );
    }
    out
}

/// Schur's `X` is positive semidefinite with diagonal exactly `1/α`.
pub fn check_x_psd(label: &str, s: &SpacedSequence, alpha: f64) -> Result<CheckReport> {
    let x = schur_x_matrix(s, alpha)?;
    let eig = eig_sym_all(&x)?;
    let mut t = Tally::new(format!("check_x_psd[{label},alpha={alpha}]"), PSD_TOLERANCE);
    let min = eig[0];
    // -min ≤ 0
    t.le(-min, 0.0, || format!("min eigenvalue {min}"));
    for (k, d) in x.diagonal_entries().iter().enumerate() {
        t.require(*d == 1.0 / alpha, || format!("diagonal {} = {d}", k + 1));
    }
    Ok(t.finish())
}

pub(crate) fn x_psd_cases(seed: u64) -> Vec<Result<CheckReport>> {
    let mut out = Vec::new();
    let mut rng = TrialRng::new(seed);
    let random = random_spaced(&mut rng, 24, 1.0);
    for alpha in [1.0, 1.5, 2.0, 3.0] {
        out.push(
            SpacedSequence::new(vec![1.0, 2.0, 3.0, 5.0, 8.0], 1.0)
                .and_then(|s| check_x_psd("1,2,3,5,8", &s, alpha)),
        );
        out.push(
            random
                .clone()
                .and_then(|s| check_x_psd(&format!("random seed {seed}"), &s, alpha)),
        );
    }
    out
}

/// `‖X∘Y‖₂ ≤ max_i X_ii·‖Y‖₂` for Schur's `X` and random symmetric `Y`.
pub fn check_schur_product(trials: usize, rng: &mut TrialRng) -> Result<CheckReport> {
    let mut t = Tally::new("schur_product", SLACK_ENTRYWISE);
    for trial in 0..trials {
        let alpha = rng.uniform(1.0, 4.0);
        let count = 2 + rng.next_below(30);
        let s = random_spaced(rng, count, 1.0)?;
        let x = schur_x_matrix(&s, alpha)?;
        let y = DenseSymMatrix::from_fn(s.len(), |_, _| rng.uniform(-1.0, 1.0));
        let xy = DenseSymMatrix::from_dense(&hadamard_product(&x.to_dense(), &y.to_dense())?)?;
        let lhs = top_eigenvalue(&xy)?;
        let dmax = x.diagonal_entries().iter().fold(0.0f64, |m, v| m.max(*v));
        let rhs = dmax * top_eigenvalue(&y)?;
        t.le(lhs, rhs, || {
            format!("trial {trial}, alpha={alpha}, R={}", s.len())
        });
    }
    Ok(t.finish())
}

/// Duality `‖B‖ = ‖Bᵀ‖` on random rectangular matrices, and power iteration
/// against Jacobi on random nonnegative symmetric matrices.
pub fn check_oracle_agreement(
    duality_trials: usize,
    oracle_trials: usize,
    rng: &mut TrialRng,
) -> Vec<Result<CheckReport>> {
    let cfg = IterationConfig::default();
    let mut dual = Tally::new("oracle_agreement[duality]", SLACK_ENTRYWISE);
    let mut first_err = None;
    for trial in 0..duality_trials {
        let (r, c) = (1 + rng.next_below(40), 1 + rng.next_below(40));
        let b = DenseMatrix::from_fn(r, c, |_, _| rng.uniform(-1.0, 1.0));
        match (
            operator_norm_2(&b, &cfg),
            operator_norm_2(&b.transpose(), &cfg),
        ) {
            (Ok(x), Ok(y)) => dual.close(x.value, y.value, SLACK_ENTRYWISE, || {
                format!("trial {trial}, {r}x{c}")
            }),
            (Err(e), _) | (_, Err(e)) => first_err = Some(e),
        }
    }
    let mut power = Tally::new("oracle_agreement[power_vs_jacobi]", SLACK_SPECTRAL);
    for trial in 0..oracle_trials {
        let n = 1 + rng.next_below(64);
        let a = DenseSymMatrix::from_fn(n, |_, _| rng.next_f64());
        let est = spectral_norm_sym(&a, &cfg);
        match top_eigenvalue(&a) {
            Ok(oracle) => power.close(est.value, oracle, SLACK_SPECTRAL, || {
                format!("trial {trial}, n={n}")
            }),
            Err(e) => first_err = Some(e),
        }
        power.require(est.converged, || {
            format!("trial {trial}, n={n} not converged")
        });
    }
    let mut out = vec![Ok(dual.finish()), Ok(power.finish())];
    if let Some(e) = first_err {
        out.push(Err(e));
    }
    out
}

/// Scaling all weights by a positive constant leaves `γ` and the norms of
/// `B` and `γ` unchanged.
pub fn check_scaling_invariance(alpha: f64, n: usize) -> Result<CheckReport> {
    let cfg = IterationConfig::default();
    let w = WeightSequence::power_difference(alpha, n)?;
    let g = gram_gamma(&w, n)?;
    let nb = operator_norm_2(&weighted_mean_matrix(&w), &cfg)?.value;
    let ng = spectral_norm_sym(&g, &cfg).value;
    let mut t = Tally::new(format!("scaling_invariance[alpha={alpha},N={n}]"), 1e-12);
    for c in [1e-3, 0.37, 3.0, 1e4] {
        let ws = w.scaled(c)?;
        let gs = gram_gamma(&ws, n)?;
        t.close(gs.max_abs_diff(&g)?, 0.0, 1e-12, || format!("gamma, c={c}"));
        let nbs = operator_norm_2(&weighted_mean_matrix(&ws), &cfg)?.value;
        t.close(nbs, nb, 1e-12, || format!("norm of B, c={c}"));
        t.close(spectral_norm_sym(&gs, &cfg).value, ng, 1e-12, || {
            format!("norm of gamma, c={c}")
        });
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_le_m_examples() {
        let r = check_gamma_le_m(1.0, 32).unwrap();
        assert!(r.passed);
        assert!(r.worst_margin.abs() < 1e-15, "{r:?}");
        for alpha in [0.6, 1.2] {
            let r = check_gamma_le_m(alpha, 64).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(check_gamma_le_m(1.6, 4).is_err());
    }

    #[test]
    fn gamma_ge_maxinv_examples() {
        for r in gamma_ge_maxinv_cases() {
            let r = r.unwrap();
            assert!(r.passed, "{r:?}");
        }
        let inc = WeightSequence::from_fn(4, |k| k as f64).unwrap();
        assert!(check_gamma_ge_maxinv("k", &inc, 4).is_err());
    }

    #[test]
    fn similarity_examples() {
        for (a, n) in [(1.0, 8), (0.75, 16), (1.5, 4)] {
            let r = check_similarity_suite(a, n).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn mv_examples() {
        let r = verify_mv_bound("r", &SpacedSequence::integers(2), 1.0).unwrap();
        assert!(r.passed);
        for r in mv_cases(7) {
            let r = r.unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn x_psd_examples() {
        for r in x_psd_cases(3) {
            let r = r.unwrap();
            assert!(r.passed, "{r:?}");
        }
        // α = 1: the all-ones matrix sits on the boundary.
        let r = check_x_psd("ones", &SpacedSequence::integers(6), 1.0).unwrap();
        assert!(r.passed && r.worst_margin.abs() < 1e-13);
    }

    #[test]
    fn telescoping_and_certificates() {
        for a in [0.6, 1.0, 1.5] {
            assert!(check_telescoping(a, 32).unwrap().passed);
            let r = check_certificate(a, 100).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn invariance_and_schur() {
        assert!(check_scaling_invariance(0.8, 32).unwrap().passed);
        assert!(
            check_schur_product(5, &mut TrialRng::new(2))
                .unwrap()
                .passed
        );
    }
}
