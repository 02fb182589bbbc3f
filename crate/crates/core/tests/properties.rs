use proptest::prelude::*;

use meannorm::certificates::schur_test;
use meannorm::format::{g17, read_matrix_csv, write_matrix_csv};
use meannorm::matrices::{
    gram_beta, gram_gamma, m_alpha_matrix, mv_skew_matrix, power_mean_kernel, schur_x_matrix,
    weighted_mean_matrix, DenseMatrix, DenseSymMatrix, KernelOrder, SpacedSequence, WeightSequence,
};
use meannorm::means::{alpha_weight, log_mean};
use meannorm::spectral::{eig_sym_all, operator_norm_2, spectral_norm_sym, IterationConfig};
use meannorm::verify::{run_suites, TrialRng};

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

fn positive() -> impl Strategy<Value = f64> {
    (-4.0f64..4.0).prop_map(|e| 10f64.powf(e))
}

fn distinct_pair() -> impl Strategy<Value = (f64, f64)> {
    (positive(), positive()).prop_filter("a != b", |(a, b)| rel(*a, *b) > 1e-6)
}

fn weights(max_n: usize) -> impl Strategy<Value = WeightSequence> {
    prop::collection::vec(0.01f64..10.0, 1..=max_n)
        .prop_map(|v| WeightSequence::new(v).expect("positive weights"))
}

fn spaced(max_len: usize) -> impl Strategy<Value = SpacedSequence> {
    (0.5f64..3.0, prop::collection::vec(0.0f64..4.0, 1..max_len)).prop_map(|(start, gaps)| {
        let mut v = vec![start];
        for g in gaps {
            let last = *v.last().unwrap();
            v.push(last + 1.0 + g);
        }
        SpacedSequence::new(v, 1.0).expect("spacing at least 1")
    })
}

fn sym(max_n: usize) -> impl Strategy<Value = DenseSymMatrix> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = TrialRng::new(seed);
        DenseSymMatrix::from_fn(n, |_, _| rng.next_f64())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mean_lies_between((a, b) in distinct_pair(), r in -5.0f64..5.0) {
        let l = log_mean(r, a, b).unwrap();
        prop_assert!(l >= a.min(b) && l <= a.max(b), "{l}");
    }

    #[test]
    fn mean_is_symmetric((a, b) in distinct_pair(), r in -5.0f64..5.0) {
        let x = log_mean(r, a, b).unwrap();
        let y = log_mean(r, b, a).unwrap();
        prop_assert!(rel(x, y) < 1e-13, "{x} vs {y}");
    }

    #[test]
    fn identity_bridge((a, b) in distinct_pair(), r in -3.0f64..3.0) {
        prop_assume!((r.abs() > 1e-3) && ((r - 1.0).abs() > 1e-3));
        let l = log_mean(r, a, b).unwrap();
        let lhs = l.powf(r - 1.0) * r * (a - b);
        let rhs = a.powf(r) - b.powf(r);
        // Both sides inherit the conditioning of a^r − b^r.
        let cond = (a.powf(r).abs() + b.powf(r).abs()) / rhs.abs();
        prop_assert!(rel(lhs, rhs) < 1e-12 * cond.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn mean_increases_in_r(a in 0.01f64..100.0, b in 0.01f64..100.0, r in -5.0f64..4.5) {
        prop_assume!(rel(a, b) > 0.5);
        let lo = log_mean(r, a, b).unwrap();
        let hi = log_mean(r + 0.5, a, b).unwrap();
        prop_assert!(hi > lo, "{lo} !< {hi}");
    }

    #[test]
    fn alpha_weight_is_a_mean_power(k in 2u64..1_000_000, alpha in 0.05f64..3.0) {
        prop_assume!((alpha - 1.0).abs() > 1e-6);
        let w = alpha_weight(k, alpha).unwrap();
        let via_mean = log_mean(alpha, k as f64, (k - 1) as f64).unwrap().powf(alpha - 1.0) * alpha;
        prop_assert!(w > 0.0);
        prop_assert!(rel(w, via_mean) < 1e-12, "{w} vs {via_mean}");
    }

    #[test]
    fn weighted_mean_rows_sum_to_one(w in weights(40)) {
        let b = weighted_mean_matrix(&w);
        for i in 0..b.nrows() {
            let s: f64 = b.row(i).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-13);
            prop_assert!(b.row(i)[i + 1..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn gram_beta_is_btb(w in weights(64)) {
        let n = w.len();
        let b = weighted_mean_matrix(&w);
        let btb = b.transpose().matmul(&b).unwrap();
        let g = gram_beta(&w, n).unwrap().to_dense();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (g.get(i, j), btb.get(i, j));
                prop_assert!((x - y).abs() <= 1e-13 * y.abs().max(1.0), "({i},{j}) {x} vs {y}");
            }
        }
    }

    #[test]
    fn gram_gamma_scale_invariant(w in weights(40), c in positive()) {
        let n = w.len();
        let g = gram_gamma(&w, n).unwrap();
        let gs = gram_gamma(&w.scaled(c).unwrap(), n).unwrap();
        prop_assert!(g.max_abs_diff(&gs).unwrap() <= 1e-12);
    }

    #[test]
    fn beta_and_gamma_spectra_agree(w in weights(32)) {
        let n = w.len();
        let eb = eig_sym_all(&gram_beta(&w, n).unwrap()).unwrap();
        let eg = eig_sym_all(&gram_gamma(&w, n).unwrap()).unwrap();
        for (x, y) in eb.iter().zip(&eg) {
            prop_assert!((x - y).abs() <= 1e-8 * y.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn skew_and_x_structure(s in spaced(24), alpha in 1.0f64..4.0) {
        let k = mv_skew_matrix(&s, alpha).unwrap();
        let x = schur_x_matrix(&s, alpha).unwrap();
        for i in 0..s.len() {
            prop_assert_eq!(k.get(i, i), 0.0);
            prop_assert_eq!(x.get(i, i), 1.0 / alpha);
            for j in 0..s.len() {
                prop_assert_eq!(k.get(i, j), -k.get(j, i));
                prop_assert_eq!(x.get(i, j), x.get(j, i));
            }
        }
    }

    #[test]
    fn power_iteration_matches_jacobi(a in sym(48)) {
        let est = spectral_norm_sym(&a, &IterationConfig::default());
        let eig = eig_sym_all(&a).unwrap();
        let top = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        prop_assert!(est.converged);
        prop_assert!((est.value - top).abs() <= 1e-9 * top.max(1.0), "{} vs {top}", est.value);
        let trace = a.trace();
        let sum: f64 = eig.iter().sum();
        prop_assert!((sum - trace).abs() <= 1e-10 * a.dim() as f64 * trace.abs().max(1.0));
    }

    #[test]
    fn duality(rows in 1usize..30, cols in 1usize..30, seed in any::<u64>()) {
        let mut rng = TrialRng::new(seed);
        let b = DenseMatrix::from_fn(rows, cols, |_, _| rng.uniform(-1.0, 1.0));
        let cfg = IterationConfig::default();
        let x = operator_norm_2(&b, &cfg).unwrap().value;
        let y = operator_norm_2(&b.transpose(), &cfg).unwrap().value;
        prop_assert!((x - y).abs() <= 1e-10 * x.max(1.0), "{x} vs {y}");
    }

    #[test]
    fn schur_test_bounds_the_norm(a in sym(32), seed in any::<u64>()) {
        let n = a.dim();
        let mut rng = TrialRng::new(seed);
        let c: Vec<f64> = (0..n).map(|_| 0.1 + rng.next_f64()).collect();
        let cert = schur_test(&a.to_dense(), &c, &c, 2.0).unwrap();
        prop_assert_eq!(cert.u1, cert.u2);
        let est = spectral_norm_sym(&a, &IterationConfig::default());
        prop_assert!(est.value <= cert.bound * (1.0 + 1e-9), "{} > {}", est.value, cert.bound);
    }

    #[test]
    fn g17_round_trips(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        prop_assert_eq!(g17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn csv_round_trips(rows in 1usize..8, cols in 1usize..8, seed in any::<u64>()) {
        let mut rng = TrialRng::new(seed);
        let m = DenseMatrix::from_fn(rows, cols, |_, _| f64::from_bits(rng.next_u64() >> 2));
        let mut buf = Vec::new();
        write_matrix_csv(&m, &mut buf).unwrap();
        prop_assert_eq!(read_matrix_csv(buf.as_slice()).unwrap(), m);
    }
}

#[test]
fn alpha_one_families_coincide() {
    for n in [1, 2, 7, 33] {
        let m = m_alpha_matrix(1.0, n).unwrap();
        let g = gram_gamma(&WeightSequence::ones(n), n).unwrap();
        let k = power_mean_kernel(KernelOrder::Infinity, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(m.get(i, j), g.get(i, j));
                assert_eq!(m.get(i, j), k.get(i, j));
            }
        }
    }
}

#[test]
fn cesaro_norm_nondecreasing_in_n() {
    let cfg = IterationConfig::default();
    let mut prev = 0.0;
    for k in 1..=9 {
        let n = 1 << k;
        let v = spectral_norm_sym(&gram_beta(&WeightSequence::ones(n), n).unwrap(), &cfg).value;
        assert!(v >= prev && v < 4.0, "N={n}: {v}");
        prev = v;
    }
}

#[test]
fn suites_are_deterministic() {
    for name in [
        "mean_monotonicity",
        "verify_hardy_type",
        "check_x_psd",
        "oracle_agreement",
    ] {
        let a = serde_json::to_string(&run_suites(name, 11).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suites(name, 11).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
    let a = serde_json::to_string(&run_suites("mean_monotonicity", 1).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suites("mean_monotonicity", 2).unwrap()).unwrap();
    assert_ne!(a, b);
}

#[test]
fn full_registry_passes() {
    let reports = run_suites("all", 42).unwrap();
    for r in &reports {
        assert!(r.passed, "{r:?}");
    }
    assert!(reports.iter().any(|r| r.exploratory));
}
