use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matrices::{weighted_mean_matrix, DenseMatrix, WeightSequence};
use crate::means::log_mean;
use crate::spectral::{operator_norm_2, operator_norm_p, IterationConfig, NormEstimate};
use crate::sum::CompensatedSum;

use super::{CheckReport, Tally, TrialRng, SLACK_POINTWISE, SLACK_SPECTRAL};

/// The two weighted-mean families: `λ_k = k^α − (k−1)^α` (so `Λ_n = n^α`)
/// and `λ_k = k^{α−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyFamily {
    Bennett7,
    Bennett8,
}

impl HardyFamily {
    pub fn weights(self, alpha: f64, n: usize) -> Result<WeightSequence> {
        match self {
            Self::Bennett7 => WeightSequence::power_difference(alpha, n),
            Self::Bennett8 => WeightSequence::power(alpha, n),
        }
    }

    /// Whether the inequality with constant `(αp/(αp−1))^p` is proven for
    /// these parameters. Only `λ_k = k^{α−1}` with `1 < α < 2` is open,
    /// except at `α = 1 + 1/p`.
    pub fn is_proven(self, alpha: f64, p: f64) -> bool {
        match self {
            Self::Bennett7 => true,
            Self::Bennett8 => !(alpha > 1.0 && alpha < 2.0) || alpha == 1.0 + 1.0 / p,
        }
    }
}

impl fmt::Display for HardyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bennett7 => "bennett7",
            Self::Bennett8 => "bennett8",
        })
    }
}

impl FromStr for HardyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bennett7" => Ok(Self::Bennett7),
            "bennett8" => Ok(Self::Bennett8),
            other => domain(format!("unknown family '{other}'")),
        }
    }
}

/// `Σ_n |(Σ_{i≤n} λ_i a_i)/Λ_n|^p`.
fn weighted_mean_lhs(w: &WeightSequence, a: &[f64], p: f64) -> f64 {
    let mut inner = CompensatedSum::new();
    let mut outer = CompensatedSum::new();
    for ((l, big), x) in w.lambda().iter().zip(w.prefix()).zip(a) {
        inner.add(l * x);
        outer.add((inner.value() / big).abs().powf(p));
    }
    outer.value()
}

fn norm_estimate(b: &DenseMatrix, p: f64) -> Result<NormEstimate> {
    let cfg = IterationConfig::default();
    if p == 2.0 {
        operator_norm_2(b, &cfg)
    } else {
        operator_norm_p(b, p, &cfg)
    }
}

/// Random-trial check of the weighted-mean inequality with constant
/// `(αp/(αp−1))^p`, plus the single-spike instance and the norm estimate
/// against `αp/(αp−1)`. Unproven parameter ranges yield an exploratory
/// report.
pub fn verify_hardy_type(
    family: HardyFamily,
    alpha: f64,
    p: f64,
    n: usize,
    trials: usize,
    rng: &mut TrialRng,
) -> Result<CheckReport> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p must exceed 1, got {p}"));
    }
    if !(alpha > 0.0 && alpha * p > 1.0 && alpha.is_finite()) {
        return domain(format!(
            "need alpha > 0 and alpha*p > 1, got alpha={alpha}, p={p}"
        ));
    }
    if n == 0 {
        return domain("N must be >= 1");
    }
    let w = family.weights(alpha, n)?;
    let norm_bound = alpha * p / (alpha * p - 1.0);
    let constant = norm_bound.powf(p);
    let mut t = Tally::new(
        format!("verify_hardy_type[{family},alpha={alpha},p={p},N={n}]"),
        SLACK_POINTWISE,
    )
    .exploratory(!family.is_proven(alpha, p));

    let mut spike = vec![0.0; n];
    spike[0] = 1.0;
    t.le(weighted_mean_lhs(&w, &spike, p), constant, || {
        "spike e1".into()
    });
    for trial in 0..trials {
        let a = rng.unit_nonnegative(n, p);
        t.le(weighted_mean_lhs(&w, &a, p), constant, || {
            format!("trial {trial}")
        });
    }
    let est = norm_estimate(&weighted_mean_matrix(&w), p)?;
    t.le_with(est.value, norm_bound, SLACK_SPECTRAL, || {
        format!("norm estimate {} vs {norm_bound}", est.value)
    });
    Ok(t.finish())
}

pub(crate) fn hardy_type_cases(seed: u64) -> Vec<Result<CheckReport>> {
    let mut rng = TrialRng::new(seed);
    let mut out = Vec::new();
    for alpha in [0.6, 1.0, 1.5] {
        out.push(verify_hardy_type(
            HardyFamily::Bennett7,
            alpha,
            2.0,
            256,
            500,
            &mut rng,
        ));
    }
    for alpha in [0.6, 1.0] {
        out.push(verify_hardy_type(
            HardyFamily::Bennett8,
            alpha,
            2.0,
            256,
            500,
            &mut rng,
        ));
    }
    for (family, alpha, p) in [
        (HardyFamily::Bennett7, 0.8, 1.5),
        (HardyFamily::Bennett7, 2.5, 3.0),
        (HardyFamily::Bennett8, 2.5, 1.5),
        (HardyFamily::Bennett8, 1.5, 2.0),
    ] {
        out.push(verify_hardy_type(family, alpha, p, 128, 100, &mut rng));
    }
    // Open range: margins recorded only.
    for alpha in [1.25, 1.5, 1.75] {
        for p in [1.5, 2.0, 3.0] {
            out.push(verify_hardy_type(
                HardyFamily::Bennett8,
                alpha,
                p,
                128,
                50,
                &mut rng,
            ));
        }
    }
    out
}

/// Multipliers `α·L_s(i, i−1)^{α−1}`, `i = 1..=n`.
fn l_s_multipliers(alpha: f64, s: f64, n: usize) -> Result<Vec<f64>> {
    (1..=n)
        .map(|i| Ok(alpha * log_mean(s, i as f64, (i - 1) as f64)?.powf(alpha - 1.0)))
        .collect()
}

fn l_s_lhs(mult: &[f64], alpha: f64, a: &[f64]) -> f64 {
    let mut inner = CompensatedSum::new();
    let mut outer = CompensatedSum::new();
    for (k, (m, x)) in mult.iter().zip(a).enumerate() {
        inner.add(m * x);
        let row = inner.value() / ((k + 1) as f64).powf(alpha);
        outer.add(row * row);
    }
    outer.value()
}

fn check_l_s_domain(alpha: f64, s: f64) -> Result<()> {
    if !(alpha > 0.5 && alpha <= 1.5) {
        return domain(format!("need 1/2 < alpha <= 3/2, got {alpha}"));
    }
    let (lo, hi) = (alpha.min(2.0 * alpha - 1.0), alpha.max(2.0 * alpha - 1.0));
    if !(s >= lo && s <= hi) {
        return domain(format!("s = {s} outside [{lo}, {hi}]"));
    }
    Ok(())
}

/// `Σ_n |Σ_{i≤n} α L_s^{α−1}(i, i−1) n^{−α} a_i|² ≤ α²/(α−½)²·Σ a_i²` on
/// random nonnegative unit vectors.
pub fn check_final_l_s(
    alpha: f64,
    s: f64,
    n: usize,
    trials: usize,
    rng: &mut TrialRng,
) -> Result<CheckReport> {
    check_l_s_domain(alpha, s)?;
    let mult = l_s_multipliers(alpha, s, n)?;
    let constant = alpha * alpha / ((alpha - 0.5) * (alpha - 0.5));
    let mut t = Tally::new(
        format!("check_final_L_s[alpha={alpha},s={s},N={n}]"),
        SLACK_POINTWISE,
    );
    for trial in 0..trials {
        let a = rng.unit_nonnegative(n, 2.0);
        t.le(l_s_lhs(&mult, alpha, &a), constant, || {
            format!("trial {trial}")
        });
    }
    Ok(t.finish())
}

/// For the same nonnegative vectors, the left side moves monotonically in
/// `s` between `s = α` and `s = 2α − 1` (upwards in `s` when `α > 1`,
/// downwards when `α < 1`), with the midpoint in between.
pub fn check_final_l_s_ordering(
    alpha: f64,
    n: usize,
    trials: usize,
    rng: &mut TrialRng,
) -> Result<CheckReport> {
    let (lo, hi) = (alpha.min(2.0 * alpha - 1.0), alpha.max(2.0 * alpha - 1.0));
    check_l_s_domain(alpha, lo)?;
    let ms = [lo, 0.5 * (lo + hi), hi]
        .iter()
        .map(|&s| l_s_multipliers(alpha, s, n))
        .collect::<Result<Vec<_>>>()?;
    let dir = if alpha >= 1.0 { 1.0 } else { -1.0 };
    let mut t = Tally::new(
        format!("check_final_L_s[ordering,alpha={alpha},N={n}]"),
        SLACK_POINTWISE,
    );
    for trial in 0..trials {
        let a = rng.unit_nonnegative(n, 2.0);
        let v: Vec<f64> = ms.iter().map(|m| l_s_lhs(m, alpha, &a)).collect();
        for k in 0..2 {
            // dir·(v[k+1] − v[k]) ≥ 0
            t.le(-dir * (v[k + 1] - v[k]), 0.0, || {
                format!("trial {trial}, step {k}")
            });
        }
    }
    Ok(t.finish())
}

pub(crate) fn final_l_s_cases(seed: u64) -> Vec<Result<CheckReport>> {
    let mut rng = TrialRng::new(seed);
    let mut out = Vec::new();
    for alpha in [0.6f64, 0.75, 1.0, 1.25, 1.5] {
        let (lo, hi) = (alpha.min(2.0 * alpha - 1.0), alpha.max(2.0 * alpha - 1.0));
        for s in [lo, 0.5 * (lo + hi), hi] {
            out.push(check_final_l_s(alpha, s, 128, 200, &mut rng));
        }
        out.push(check_final_l_s_ordering(alpha, 128, 200, &mut rng));
    }
    out
}

/// Weighted means with nondecreasing weights have `l^p` norm at most
/// `p/(p−1)`: norm estimate and random trials.
pub fn check_bennett_increasing(
    label: &str,
    w: &WeightSequence,
    p: f64,
    n: usize,
    trials: usize,
    rng: &mut TrialRng,
) -> Result<CheckReport> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p must exceed 1, got {p}"));
    }
    if !w.is_nondecreasing() {
        return domain("weights must be nondecreasing");
    }
    let w = w.truncated(n)?;
    let q = p / (p - 1.0);
    let mut t = Tally::new(
        format!("check_bennett_increasing[{label},p={p},N={n}]"),
        SLACK_POINTWISE,
    );
    let est = norm_estimate(&weighted_mean_matrix(&w), p)?;
    t.le_with(est.value, q, SLACK_SPECTRAL, || {
        format!("norm estimate {}", est.value)
    });
    let constant = q.powf(p);
    for trial in 0..trials {
        let a = rng.unit_nonnegative(n, p);
        t.le(weighted_mean_lhs(&w, &a, p), constant, || {
            format!("trial {trial}")
        });
    }
    Ok(t.finish())
}

pub(crate) fn bennett_increasing_cases(seed: u64) -> Vec<Result<CheckReport>> {
    let mut rng = TrialRng::new(seed);
    type Case = (&'static str, fn(usize) -> f64, f64, usize);
    let cases: [Case; 5] = [
        ("ones", |_| 1.0, 2.0, 256),
        ("k", |k| k as f64, 2.0, 256),
        ("k^2", |k| (k * k) as f64, 3.0, 64),
        ("sqrt k", |k| (k as f64).sqrt(), 1.5, 128),
        ("k^3", |k| (k as f64).powi(3), 4.0, 64),
    ];
    cases
        .iter()
        .map(|&(label, f, p, n)| {
            check_bennett_increasing(label, &WeightSequence::from_fn(n, f)?, p, n, 100, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cesaro_trials() {
        let r = verify_hardy_type(
            HardyFamily::Bennett7,
            1.0,
            2.0,
            64,
            50,
            &mut TrialRng::new(1),
        )
        .unwrap();
        assert!(r.passed && !r.exploratory, "{r:?}");
        assert_eq!(r.instances_tested, 52);
    }

    #[test]
    fn open_range_is_exploratory() {
        assert!(!HardyFamily::Bennett8.is_proven(1.5, 3.0));
        assert!(HardyFamily::Bennett8.is_proven(1.5, 2.0));
        assert!(HardyFamily::Bennett8.is_proven(1.0, 2.0));
        let r = verify_hardy_type(
            HardyFamily::Bennett8,
            1.25,
            2.0,
            32,
            5,
            &mut TrialRng::new(1),
        )
        .unwrap();
        assert!(r.exploratory && r.passed);
    }

    #[test]
    fn preconditions() {
        let mut rng = TrialRng::new(0);
        assert!(verify_hardy_type(HardyFamily::Bennett7, 0.4, 2.0, 8, 1, &mut rng).is_err());
        assert!(verify_hardy_type(HardyFamily::Bennett7, 1.0, 1.0, 8, 1, &mut rng).is_err());
        assert!(check_final_l_s(1.25, 1.6, 8, 1, &mut rng).is_err());
        assert!(check_final_l_s(0.4, 0.4, 8, 1, &mut rng).is_err());
        let dec = WeightSequence::from_fn(4, |k| 1.0 / k as f64).unwrap();
        assert!(check_bennett_increasing("1/k", &dec, 2.0, 4, 1, &mut rng).is_err());
    }

    #[test]
    fn spike_value() {
        let w = HardyFamily::Bennett7.weights(1.0, 4).unwrap();
        let v = weighted_mean_lhs(&w, &[1.0, 0.0, 0.0, 0.0], 2.0);
        assert!((v - (1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn final_l_s_at_one_is_cesaro() {
        let m = l_s_multipliers(1.0, 1.0, 5).unwrap();
        assert!(m.iter().all(|&x| x == 1.0));
        let r = check_final_l_s(1.25, 1.5, 64, 20, &mut TrialRng::new(4)).unwrap();
        assert!(r.passed);
        let r = check_final_l_s_ordering(1.25, 64, 20, &mut TrialRng::new(4)).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_final_l_s_ordering(0.75, 64, 20, &mut TrialRng::new(4)).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
