//! Schur-test certificates.
//!
//! For a nonnegative matrix `A` and positive test sequences `c`, `d`,
//!
//! ```text
//! U1 = max_i Σ_j A_ij c_j^{1/p} / d_i^{1/p}
//! U2 = max_j Σ_i A_ij d_i^{1/q} / c_j^{1/q}
//! ```
//!
//! and `‖A‖_{p,p} ≤ U1^{1/q} U2^{1/p}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matrices::DenseMatrix;
use crate::sum::CompensatedSum;

/// Largest truncation accepted by the family certificates, which never
/// materialize the matrix.
pub const MAX_CERT_DIM: usize = 1 << 16;

/// Relative slack of row-sum comparisons.
pub const ROW_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SchurCertificate {
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub p: f64,
    pub u1: f64,
    pub u2: f64,
    /// `U1^{1/q}·U2^{1/p}`.
    pub bound: f64,
    /// Weighted row sums; `u1` is their maximum.
    pub row_values: Vec<f64>,
    /// Weighted column sums; `u2` is their maximum.
    pub column_values: Vec<f64>,
}

/// Sum of nonnegative terms, smallest first, with compensation.
fn ascending_sum(terms: &mut [f64]) -> f64 {
    if terms.windows(2).all(|w| w[0] >= w[1]) {
        return terms
            .iter()
            .rev()
            .copied()
            .collect::<CompensatedSum>()
            .value();
    }
    if !terms.windows(2).all(|w| w[0] <= w[1]) {
        terms.sort_by(f64::total_cmp);
    }
    terms.iter().copied().collect::<CompensatedSum>().value()
}

fn check_sequence(name: &str, s: &[f64]) -> Result<()> {
    match s.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        Some(k) => domain(format!("{name}_{} must be > 0, got {}", k + 1, s[k])),
        None => Ok(()),
    }
}

/// Schur test of a dense nonnegative matrix: `c` has one entry per column,
/// `d` one per row.
pub fn schur_test(a: &DenseMatrix, c: &[f64], d: &[f64], p: f64) -> Result<SchurCertificate> {
    if !a.is_finite() || !a.is_nonnegative() {
        return domain("schur_test needs a finite nonnegative matrix");
    }
    schur_test_with(a.nrows(), a.ncols(), |i, j| a.get(i, j), c, d, p)
}

/// Schur test of the matrix with entries `entry(i, j)` (zero-based); the
/// entries are produced on the fly and are assumed nonnegative.
pub fn schur_test_with(
    rows: usize,
    cols: usize,
    entry: impl Fn(usize, usize) -> f64,
    c: &[f64],
    d: &[f64],
    p: f64,
) -> Result<SchurCertificate> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("schur_test needs p > 1, got {p}"));
    }
    if c.len() != cols || d.len() != rows {
        return Err(Error::ShapeMismatch {
            expected: (rows, cols),
            found: (d.len(), c.len()),
        });
    }
    check_sequence("c", c)?;
    check_sequence("d", d)?;
    let q = p / (p - 1.0);
    let c_p: Vec<f64> = c.iter().map(|x| x.powf(1.0 / p)).collect();
    let d_p: Vec<f64> = d.iter().map(|x| x.powf(1.0 / p)).collect();
    let c_q: Vec<f64> = c.iter().map(|x| x.powf(1.0 / q)).collect();
    let d_q: Vec<f64> = d.iter().map(|x| x.powf(1.0 / q)).collect();

    let mut terms = vec![0.0; rows.max(cols)];
    let row_values: Vec<f64> = (0..rows)
        .map(|i| {
            let t = &mut terms[..cols];
            t.iter_mut()
                .enumerate()
                .for_each(|(j, x)| *x = entry(i, j) * c_p[j]);
            ascending_sum(t) / d_p[i]
        })
        .collect();
    let column_values: Vec<f64> = (0..cols)
        .map(|j| {
            let t = &mut terms[..rows];
            t.iter_mut()
                .enumerate()
                .for_each(|(i, x)| *x = entry(i, j) * d_q[i]);
            ascending_sum(t) / c_q[j]
        })
        .collect();

    let u1 = row_values.iter().copied().fold(0.0, f64::max);
    let u2 = column_values.iter().copied().fold(0.0, f64::max);
    Ok(SchurCertificate {
        c: c.to_vec(),
        d: d.to_vec(),
        p,
        u1,
        u2,
        bound: if u1 == u2 {
            u1
        } else {
            u1.powf(1.0 / q) * u2.powf(1.0 / p)
        },
        row_values,
        column_values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertFamily {
    Hardy,
    MAlpha,
}

impl fmt::Display for CertFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hardy => "hardy",
            Self::MAlpha => "m_alpha",
        })
    }
}

impl FromStr for CertFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hardy" => Ok(Self::Hardy),
            "m_alpha" => Ok(Self::MAlpha),
            other => domain(format!("unknown certificate family '{other}'")),
        }
    }
}

/// `α²/(α−½)²`, the limiting norm of `M(α)`.
pub fn m_alpha_constant(alpha: f64) -> f64 {
    alpha * alpha / ((alpha - 0.5) * (alpha - 0.5))
}

/// The finite-`N` value quoted alongside the certificate:
/// `α²/(α−½)²·(1 − 1/(2√N))`, which is `4 − 2/√N` at `α = 1`.
pub fn m_alpha_analytic_bound(alpha: f64, n: usize) -> f64 {
    m_alpha_constant(alpha) * (1.0 - 0.5 / (n as f64).sqrt())
}

/// Integral majorant of the weighted row sum of row `i` (one-based) of
/// `M(α)` truncated at `n` with `c = d = (1/k)`:
///
/// ```text
/// ∫_0^n m(i, x)·(i/x)^{1/2} dx = α²/(α−½)²·(1 − (i/n)^{α−½}/2)
/// ```
///
/// The integrand is decreasing in `x` for `α ≤ 3/2`, so it dominates the sum.
pub fn row_majorant(alpha: f64, i: usize, n: usize) -> f64 {
    let ratio = i as f64 / n as f64;
    m_alpha_constant(alpha) * (1.0 - 0.5 * ratio.powf(alpha - 0.5))
}

/// A family certificate: the Schur test with `c = d = (1/i)` at `p = 2`,
/// compared row by row against the integral majorants.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCertificate {
    pub family: CertFamily,
    pub alpha: f64,
    pub n: usize,
    pub schur: SchurCertificate,
    /// Limiting constant `α²/(α−½)²`.
    pub limit: f64,
    pub analytic_bound: f64,
    /// Minimum of `majorant_i − row_i` scaled by `max(1, majorant_i)`.
    pub worst_row_margin: f64,
    /// One-based row attaining `worst_row_margin`.
    pub worst_row: usize,
    pub violated: bool,
}

/// Serialized form of a family certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub family: CertFamily,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    #[serde(rename = "U1")]
    pub u1: f64,
    #[serde(rename = "U2")]
    pub u2: f64,
    pub bound: f64,
    pub analytic_bound: f64,
    pub violated: bool,
}

impl FamilyCertificate {
    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            family: self.family,
            alpha: self.alpha,
            n: self.n,
            p: self.schur.p,
            u1: self.schur.u1,
            u2: self.schur.u2,
            bound: self.limit,
            analytic_bound: self.analytic_bound,
            violated: self.violated,
        }
    }
}

/// Certificate for the Hardy form `1/max(i, j)`, i.e. `M(1)`.
pub fn hardy_certificate(n: usize) -> Result<FamilyCertificate> {
    let mut cert = m_alpha_certificate(1.0, n)?;
    cert.family = CertFamily::Hardy;
    Ok(cert)
}

/// Certificate for `M(α)`, `1/2 < α ≤ 3/2`.
pub fn m_alpha_certificate(alpha: f64, n: usize) -> Result<FamilyCertificate> {
    if !(alpha > 0.5 && alpha <= 1.5) {
        return domain(format!(
            "m_alpha certificate needs 1/2 < alpha <= 3/2, got {alpha}"
        ));
    }
    if n == 0 {
        return domain("certificate needs N >= 1");
    }
    if n > MAX_CERT_DIM {
        return Err(Error::SizeLimit {
            n,
            max: MAX_CERT_DIM,
        });
    }

    // m_ij = (α²/r)·min^{α−1}/max^α with r = 2α − 1; at α = 1 this is
    // exactly 1/max.
    let scale = alpha * alpha / (2.0 * alpha - 1.0);
    let low: Vec<f64> = (1..=n).map(|k| (k as f64).powf(alpha - 1.0)).collect();
    let high: Vec<f64> = (1..=n).map(|k| (k as f64).powf(alpha)).collect();
    let entry = |i: usize, j: usize| {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        scale * low[lo] / high[hi]
    };
    let c: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
    let schur = schur_test_with(n, n, entry, &c, &c, 2.0)?;

    let mut worst_row_margin = f64::INFINITY;
    let mut worst_row = 1;
    for (k, &v) in schur.row_values.iter().enumerate() {
        let maj = row_majorant(alpha, k + 1, n);
        let margin = (maj - v) / maj.max(1.0);
        if margin < worst_row_margin {
            worst_row_margin = margin;
            worst_row = k + 1;
        }
    }
    let analytic_bound = m_alpha_analytic_bound(alpha, n);
    let violated = worst_row_margin < -ROW_SLACK
        || schur.u1 > analytic_bound + ROW_SLACK * analytic_bound.max(1.0);
    if violated {
        log::warn!(
            "certificate violated: alpha={alpha} N={n} U1={} analytic={analytic_bound}",
            schur.u1
        );
    }
    Ok(FamilyCertificate {
        family: CertFamily::MAlpha,
        alpha,
        n,
        schur,
        limit: m_alpha_constant(alpha),
        analytic_bound,
        worst_row_margin,
        worst_row,
        violated,
    })
}
