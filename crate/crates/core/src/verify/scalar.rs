use crate::error::{domain, Result};
use crate::means::{log_mean, power_sum_ratio, PowerSumArgs};
use crate::sum::CompensatedSum;

use super::{CheckReport, Tally, TrialRng, SLACK_POINTWISE};

/// `L_r(a, b)` strictly increasing on the grid `r = −5, −4.5, …, 5` for
/// `pairs` random `(a, b)` with log-uniform coordinates in `[0.01, 100)`.
pub fn check_mean_monotonicity(pairs: usize, rng: &mut TrialRng) -> Result<CheckReport> {
    let grid: Vec<f64> = (0..=20).map(|k| -5.0 + 0.5 * k as f64).collect();
    let mut t = Tally::new("mean_monotonicity", 0.0);
    let (lo, hi) = (0.01f64.ln(), 100f64.ln());
    for _ in 0..pairs {
        let (a, b) = loop {
            let a = rng.uniform(lo, hi).exp();
            let b = rng.uniform(lo, hi).exp();
            if a != b {
                break (a, b);
            }
        };
        let vals = grid
            .iter()
            .map(|&r| log_mean(r, a, b))
            .collect::<Result<Vec<_>>>()?;
        for (k, w) in vals.windows(2).enumerate() {
            let witness = || format!("a={a} b={b} r={}", grid[k]);
            t.record((w[1] - w[0]) / w[0], 0.0, witness);
            t.require(w[1] > w[0], witness);
        }
    }
    Ok(t.finish())
}

/// `P_n(r) > n/(n+1)` for `n ≤ n_max` and each `r`.
pub fn check_alzer(n_max: u64, rs: &[f64]) -> Result<CheckReport> {
    let mut t = Tally::new("alzer", 0.0);
    for &r in rs {
        for n in 1..=n_max {
            let p = power_sum_ratio(PowerSumArgs { n, r })?;
            let floor = n as f64 / (n as f64 + 1.0);
            let witness = || format!("n={n} r={r} P={p}");
            t.record(p - floor, 0.0, witness);
            t.require(p > floor, witness);
        }
    }
    Ok(t.finish())
}

/// `Σ_{i≤k} i^{α−1} / Σ_{i≤n} i^{α−1} ≤ (k/n)^α` for all `k ≤ n ≤ n_max`.
pub fn check_majorization(alpha: f64, n_max: usize) -> Result<CheckReport> {
    if !(alpha > 0.5 && alpha <= 1.0) {
        return domain(format!("majorization needs 1/2 < alpha <= 1, got {alpha}"));
    }
    let mut acc = CompensatedSum::new();
    let partial: Vec<f64> = (1..=n_max)
        .map(|i| {
            acc.add((i as f64).powf(alpha - 1.0));
            acc.value()
        })
        .collect();
    let mut t = Tally::new(
        format!("check_majorization[alpha={alpha},n={n_max}]"),
        SLACK_POINTWISE,
    );
    for n in 1..=n_max {
        for k in 1..=n {
            let lhs = partial[k - 1] / partial[n - 1];
            let rhs = (k as f64 / n as f64).powf(alpha);
            t.le(lhs, rhs, || format!("k={k} n={n}"));
        }
    }
    Ok(t.finish())
}

/// `t_k = 1 + exp(ln 2^{−10} + k·(ln 999 − ln 2^{−10})/199)`, 200 points
/// log-spaced in `t − 1` from `2^{−10}` to `999`.
pub fn default_t_grid() -> Vec<f64> {
    let lo = (2f64).powi(-10).ln();
    let hi = 999f64.ln();
    (0..200)
        .map(|k| 1.0 + (lo + (hi - lo) * k as f64 / 199.0).exp())
        .collect()
}

/// The two-point inequality in normalized form `t = λ_r/λ_s > 1`:
///
/// ```text
/// (t^{α−1} + t^{(α−1)/2}(t^{α−1} + 1))·((t − 1)/(t^α − 1))² ≤ 3/α²
/// ```
///
/// For `1 < α ≤ 2` the report also asserts the y-form, see [`check_y_form`].
pub fn check_scalar_14(alpha: f64, ts: &[f64]) -> Result<CheckReport> {
    check_scalar_args(alpha, ts)?;
    let mut rep = Tally::new(format!("check_scalar_14[alpha={alpha}]"), 1e-12);
    let bound = 3.0 / (alpha * alpha);
    for &t in ts {
        let lt = t.ln();
        let a = ((alpha - 1.0) * lt).exp();
        let h = (0.5 * (alpha - 1.0) * lt).exp();
        let ratio = (t - 1.0) / (alpha * lt).exp_m1();
        let lhs = (a + h * (a + 1.0)) * ratio * ratio;
        rep.le(lhs, bound, || format!("t={t} kernel form"));
        if alpha > 1.0 && alpha <= 2.0 {
            y_form_point(&mut rep, alpha, t);
        }
    }
    Ok(rep.finish())
}

/// The sufficient condition in `y = t^{α−1}`:
///
/// ```text
/// y^{1/2}(y + 1)/2 ≤ ((y^{α/(α−1)} − 1)/(α(y^{1/(α−1)} − 1)))²
/// ```
///
/// The right side decreases in `α` towards `((y − 1)/ln y)²`, the squared
/// logarithmic mean of `y` and 1, while the left side is `G·A`. Since
/// `L² < G·A` once `y` is large enough, the condition fails for large `α`;
/// at `α = 8` the first failure on the default grid is near `y ≈ 6`. It holds
/// for `α ≤ 2` by AM-GM. The kernel form in [`check_scalar_14`] does not
/// depend on it.
pub fn check_y_form(alpha: f64, ts: &[f64]) -> Result<CheckReport> {
    check_scalar_args(alpha, ts)?;
    if alpha == 1.0 {
        return domain("the y-form needs alpha > 1");
    }
    let mut rep = Tally::new(format!("check_y_form[alpha={alpha}]"), 1e-12);
    for &t in ts {
        y_form_point(&mut rep, alpha, t);
    }
    Ok(rep.finish())
}

fn y_form_point(rep: &mut Tally, alpha: f64, t: f64) {
    let ly = (alpha - 1.0) * t.ln();
    let y = ly.exp();
    let left = y.sqrt() * (y + 1.0) / 2.0;
    let q = (alpha / (alpha - 1.0) * ly).exp_m1() / (alpha * (ly / (alpha - 1.0)).exp_m1());
    rep.le(left, q * q, || format!("t={t} y={y} y-form"));
}

fn check_scalar_args(alpha: f64, ts: &[f64]) -> Result<()> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return domain(format!("scalar check needs alpha >= 1, got {alpha}"));
    }
    if let Some(bad) = ts.iter().find(|&&t| !(t > 1.0 && t.is_finite())) {
        return domain(format!("grid points must exceed 1, got {bad}"));
    }
    Ok(())
}

fn simpson(h: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let step = (b - a) / panels as f64;
    let mut acc = CompensatedSum::new();
    acc.add(h(a));
    acc.add(h(b));
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * h(a + step * k as f64));
    }
    acc.value() * step / 3.0
}

/// `h((a+b)/2) ≤ (1/(b−a))∫_a^b h ≤ (h(a)+h(b))/2` for convex `h`.
///
/// The mean is composite Simpson with `2^11` panels; the Richardson estimate
/// `|S_{2n} − S_n|/15` against `2^10` panels is credited to both sides.
pub fn check_hadamard_midpoint(
    label: &str,
    h: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
) -> Result<CheckReport> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return domain(format!("interval [{a}, {b}] is empty or unbounded"));
    }
    let coarse = simpson(h, a, b, 1 << 10);
    let fine = simpson(h, a, b, 1 << 11);
    let width = b - a;
    let mean = fine / width;
    let err = (fine - coarse).abs() / 15.0 / width;
    let mid = h(0.5 * (a + b));
    let ends = 0.5 * (h(a) + h(b));
    let mut t = Tally::new(format!("check_hadamard_midpoint[{label}]"), SLACK_POINTWISE);
    t.le(mid, mean + err, || format!("midpoint {mid} vs mean {mean}"));
    t.le(mean - err, ends, || {
        format!("mean {mean} vs trapezoid {ends}")
    });
    Ok(t.finish())
}

pub(crate) fn hadamard_cases() -> Vec<Result<CheckReport>> {
    let mut out = vec![
        check_hadamard_midpoint("x^2 on [0,2]", &|x| x * x, 0.0, 2.0),
        check_hadamard_midpoint("-ln x on [1,3]", &|x: f64| -x.ln(), 1.0, 3.0),
        check_hadamard_midpoint("e^x on [0,1]", &f64::exp, 0.0, 1.0),
    ];
    for y in [1.5f64, 10.0, 1000.0] {
        for beta in [0.25, 1.0, 3.0] {
            let ly = y.ln();
            out.push(check_hadamard_midpoint(
                &format!("ln y * y^x, y={y}, on [0,{beta}]"),
                &move |x| ly * (x * ly).exp(),
                0.0,
                beta,
            ));
        }
        out.push(check_hadamard_midpoint(
            &format!("-ln x on [1,{y}]"),
            &|x: f64| -x.ln(),
            1.0,
            y,
        ));
    }
    out
}
