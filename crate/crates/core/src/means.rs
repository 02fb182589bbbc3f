//! Scalar special functions: the generalized logarithmic mean `L_r(a, b)`,
//! the power-sum ratio `P_n(r)` and the difference weights `k^α − (k−1)^α`.

use crate::error::{domain, Result};

/// Exponents this close to 0 or 1 are evaluated with the limiting formula.
pub const SPECIAL_BRANCH_EPS: f64 = 1e-9;

/// Arguments of the generalized logarithmic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanArgs {
    pub r: f64,
    pub a: f64,
    pub b: f64,
}

impl MeanArgs {
    pub fn new(r: f64, a: f64, b: f64) -> Self {
        Self { r, a, b }
    }

    fn validate(&self) -> Result<()> {
        let Self { r, a, b } = *self;
        if !(r.is_finite() && a.is_finite() && b.is_finite()) {
            return domain(format!("non-finite mean arguments ({r}, {a}, {b})"));
        }
        if a <= 0.0 {
            return domain(format!("L_r(a, b) needs a > 0, got a = {a}"));
        }
        if b < 0.0 {
            return domain(format!("L_r(a, b) needs b >= 0, got b = {b}"));
        }
        if a == b {
            return domain(format!("L_r(a, b) needs a != b, got a = b = {a}"));
        }
        if b == 0.0 && r <= 0.0 {
            return domain(format!("L_r(a, 0) is only defined for r > 0, got r = {r}"));
        }
        Ok(())
    }
}

/// Generalized logarithmic mean
///
/// ```text
/// L_r(a,b) = ((a^r − b^r) / (r(a − b)))^{1/(r−1)}     r ∉ {0, 1}
/// L_0(a,b) = (a − b) / (ln a − ln b)
/// L_1(a,b) = e^{−1} (a^a / b^b)^{1/(a−b)}
/// ```
///
/// With `b = 0` and `r > 0` the continuous limit `L_r(a, 0) = a·r^{−1/(r−1)}`
/// is returned (`a/e` at `r = 1`).
///
/// Evaluation goes through `u = ln(max/min)` and `expm1` so that close
/// arguments do not lose digits to cancellation. The arguments are put in
/// decreasing order first, which makes the result exactly symmetric.
pub fn log_mean_general(args: MeanArgs) -> Result<f64> {
    args.validate()?;
    let MeanArgs { r, a, b } = args;
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };

    if lo == 0.0 {
        if (r - 1.0).abs() < SPECIAL_BRANCH_EPS {
            return Ok(hi / std::f64::consts::E);
        }
        return Ok(hi * (-r.ln() / (r - 1.0)).exp());
    }

    let ratio = hi / lo;
    let u = if ratio.is_finite() {
        ratio.ln()
    } else {
        hi.ln() - lo.ln()
    };
    if r.abs() < SPECIAL_BRANCH_EPS {
        // (hi − lo) / ln(hi/lo)
        if u > 700.0 {
            return Ok((hi - lo) / u);
        }
        return Ok(lo * u.exp_m1() / u);
    }
    if (r - 1.0).abs() < SPECIAL_BRANCH_EPS {
        // ln L_1 = (hi ln hi − lo ln lo)/(hi − lo) − 1
        //        = ln lo + hi·u/(hi − lo) − 1
        let log_mean = lo.ln() + hi * u / (hi - lo) - 1.0;
        return Ok(log_mean.exp());
    }

    // (hi^r − lo^r)/(r(hi − lo)) = lo^{r−1} · expm1(r u) / (r expm1(u))
    let log_ratio = ln_abs_expm1(r * u) - r.abs().ln() - ln_abs_expm1(u);
    let e = log_ratio / (r - 1.0);
    if e.abs() < 700.0 {
        Ok(lo * e.exp())
    } else {
        Ok((lo.ln() + e).exp())
    }
}

/// `ln|e^x − 1|` without overflow for large `x`.
fn ln_abs_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().abs().ln()
    }
}

/// Convenience wrapper for `log_mean_general(MeanArgs::new(r, a, b))`.
pub fn log_mean(r: f64, a: f64, b: f64) -> Result<f64> {
    log_mean_general(MeanArgs::new(r, a, b))
}

/// Arguments of the power-sum ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSumArgs {
    pub n: u64,
    pub r: f64,
}

/// `P_n(r) = ((1/n)Σ_{i≤n} i^r / ((1/(n+1))Σ_{i≤n+1} i^r))^{1/r}`.
pub fn power_sum_ratio(args: PowerSumArgs) -> Result<f64> {
    let PowerSumArgs { n, r } = args;
    if n < 1 {
        return domain("P_n(r) needs n >= 1");
    }
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("P_n(r) needs r > 0, got {r}"));
    }
    let mut acc = crate::sum::CompensatedSum::new();
    for i in 1..=n {
        acc.add((i as f64).powf(r));
    }
    let head = acc.value();
    acc.add(((n + 1) as f64).powf(r));
    let full = acc.value();
    let nf = n as f64;
    let ratio = (head / nf) / (full / (nf + 1.0));
    Ok(ratio.powf(1.0 / r))
}

/// `k^α − (k−1)^α`, computed as `k^α · (−expm1(α·ln(1 − 1/k)))` so large `k`
/// keeps full relative accuracy.
pub fn alpha_weight(k: u64, alpha: f64) -> Result<f64> {
    if k < 1 {
        return domain("alpha_weight needs k >= 1");
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("alpha_weight needs alpha > 0, got {alpha}"));
    }
    if k == 1 {
        return Ok(1.0);
    }
    let kf = k as f64;
    let shrink = -(alpha * (-1.0 / kf).ln_1p()).exp_m1();
    Ok(kf.powf(alpha) * shrink)
}
