//! Binary64 results against 200-bit evaluations and frozen oracle values.

use astro_float::{BigFloat, Consts, RoundingMode};

use meannorm::certificates::hardy_certificate;
use meannorm::matrices::{mv_skew_matrix, n_alpha_matrix, SpacedSequence};
use meannorm::means::{alpha_weight, log_mean, power_sum_ratio, PowerSumArgs};
use meannorm::spectral::{max_singular_value, IterationConfig};

const P: usize = 200;
const RM: RoundingMode = RoundingMode::ToEven;

struct Hp {
    cc: Consts,
}

impl Hp {
    fn new() -> Self {
        Self {
            cc: Consts::new().expect("constants cache"),
        }
    }

    fn pow(&mut self, x: f64, e: f64) -> BigFloat {
        self.pow_big(&BigFloat::from_f64(x, P), e)
    }

    /// `exp(e·ln x)`; the library `pow` stalls for some bases near 1.
    fn pow_big(&mut self, x: &BigFloat, e: f64) -> BigFloat {
        let l = x.ln(P, RM, &mut self.cc);
        l.mul(&BigFloat::from_f64(e, P), P, RM)
            .exp(P, RM, &mut self.cc)
    }

    fn decimal(&mut self, x: &BigFloat) -> f64 {
        x.format(astro_float::Radix::Dec, RM, &mut self.cc)
            .expect("decimal text")
            .parse()
            .expect("parsable")
    }

    /// `((a^r − b^r)/(r(a − b)))^{1/(r−1)}`.
    fn log_mean(&mut self, r: f64, a: f64, b: f64) -> f64 {
        let num = self.pow(a, r).sub(&self.pow(b, r), P, RM);
        let den = BigFloat::from_f64(r, P).mul(&BigFloat::from_f64(a - b, P), P, RM);
        let q = num.div(&den, P, RM);
        let v = self.pow_big(&q, 1.0 / (r - 1.0));
        self.decimal(&v)
    }
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

#[test]
fn alpha_weight_matches_200_bits() {
    let mut hp = Hp::new();
    let cases = [
        (1_000_000u64, 0.6),
        (1_000_000_000, 0.3),
        (123_456_789_012, 0.9),
        (1_000_000_000_000, 1.7),
        (2, 0.55),
        (17, 2.5),
    ];
    for (k, alpha) in cases {
        let exact = hp
            .pow(k as f64, alpha)
            .sub(&hp.pow((k - 1) as f64, alpha), P, RM);
        let exact = hp.decimal(&exact);
        let got = alpha_weight(k, alpha).unwrap();
        assert!(
            rel(got, exact) < 1e-14,
            "k={k} alpha={alpha}: {got} vs {exact}"
        );
    }
}

#[test]
fn alpha_weight_beats_direct_subtraction() {
    let mut hp = Hp::new();
    let (k, alpha) = (100_000_000_000u64, 0.5);
    let exact = hp
        .pow(k as f64, alpha)
        .sub(&hp.pow((k - 1) as f64, alpha), P, RM);
    let exact = hp.decimal(&exact);
    let naive = (k as f64).powf(alpha) - ((k - 1) as f64).powf(alpha);
    assert!(rel(naive, exact) > 1e-8);
    assert!(rel(alpha_weight(k, alpha).unwrap(), exact) < 1e-14);
}

#[test]
fn log_mean_matches_200_bits() {
    let mut hp = Hp::new();
    let cases = [
        (3.0, 2.0, 1.0),
        (0.5, 5.0, 0.25),
        (-2.0, 3.0, 7.0),
        (-5.0, 0.01, 99.0),
        (5.0, 1.0001, 1.0),
        (2.5, 1e6, 1.0),
        (1e-6, 3.0, 1.0),
    ];
    for (r, a, b) in cases {
        let exact = hp.log_mean(r, a, b);
        let got = log_mean(r, a, b).unwrap();
        assert!(
            rel(got, exact) < 1e-13,
            "r={r} a={a} b={b}: {got} vs {exact}"
        );
    }
    assert!(rel(log_mean(3.0, 2.0, 1.0).unwrap(), (7.0f64 / 3.0).sqrt()) < 1e-15);
    assert!(rel(log_mean(1.0, 2.0, 1.0).unwrap(), 4.0 / std::f64::consts::E) < 1e-15);
}

#[test]
fn power_sum_ratio_examples() {
    let p = |n, r| power_sum_ratio(PowerSumArgs { n, r }).unwrap();
    assert!(rel(p(1, 1.0), 2.0 / 3.0) < 1e-15);
    assert!(rel(p(2, 1.0), 0.75) < 1e-15);
    assert!(rel(p(2, 2.0), (15.0f64 / 28.0).sqrt()) < 1e-15);
}

#[test]
fn n_alpha_single_entry() {
    // α²·L_{1.5}(1, 0)^{1/2} with L_{1.5}(1, 0) = 1.5^{-2}.
    let n = n_alpha_matrix(1.25, 1).unwrap();
    assert!(rel(n.get(0, 0), 25.0 / 24.0) < 1e-15);
}

#[test]
fn mv_skew_r64_pinned() {
    // Largest singular value of 1/(r − s), r ≠ s ≤ 64, from LAPACK's SVD.
    const PINNED: f64 = 3.0080543908243893;
    let k = mv_skew_matrix(&SpacedSequence::integers(64), 1.0).unwrap();
    let est = max_singular_value(&k, &IterationConfig::default()).unwrap();
    assert!(est.converged);
    assert!((est.value - PINNED).abs() < 1e-9, "{}", est.value);
    assert!(est.value > 2.0 && est.value < std::f64::consts::PI);
}

#[test]
fn hardy_certificate_large_n() {
    let cert = hardy_certificate(10_000).unwrap();
    assert!(!cert.violated);
    assert!(cert.schur.u1 <= 3.98, "{}", cert.schur.u1);
    assert_eq!(cert.schur.u1, cert.schur.u2);
    assert!((cert.analytic_bound - 3.98).abs() < 1e-15);
}
