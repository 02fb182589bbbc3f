//! Matrix families reachable from the command line, their norm estimates and
//! the analytic bounds they are compared with.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use meannorm::certificates::m_alpha_constant;
use meannorm::matrices::{
    generalized_kernel, hilbert_matrix, m_alpha_matrix, mv_skew_matrix, n_alpha_matrix,
    weighted_mean_matrix, DenseMatrix, DenseSymMatrix, KernelOrder, SpacedSequence, WeightSequence,
    MAX_DIM,
};
use meannorm::spectral::{
    max_singular_value, operator_norm_2, operator_norm_p, spectral_norm_sym, IterationConfig,
    NormEstimate,
};
use meannorm::verify::HardyFamily;

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    Cesaro,
    Bennett7,
    Bennett8,
    MAlpha,
    NAlpha,
    Hilbert,
    KernelR,
    MvSkew,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}

impl Family {
    pub fn parse(s: &str) -> Result<Self, UsageError> {
        <Self as ValueEnum>::from_str(s, false)
            .map_err(|_| UsageError(format!("unknown family '{s}'")))
    }

    /// Whether `alpha` enters the matrix at all.
    pub fn uses_alpha(self) -> bool {
        !matches!(self, Family::Cesaro | Family::Hilbert)
    }
}

/// Relative slack when comparing an estimate with its analytic bound.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Instance {
    pub family: Family,
    pub alpha: f64,
    pub n: usize,
    pub p: f64,
    pub order: KernelOrder,
    pub lambda: Option<SpacedSequence>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    /// Whether the bound is a theorem for these parameters rather than a
    /// conjecture being explored.
    pub proven: bool,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub estimate: NormEstimate,
    pub bound: Option<Bound>,
}

impl Evaluation {
    pub fn ratio(&self) -> Option<f64> {
        self.bound.map(|b| self.estimate.value / b.value)
    }

    /// A proven bound exceeded beyond the relative slack.
    pub fn violated(&self) -> bool {
        self.bound
            .is_some_and(|b| b.proven && self.estimate.value > b.value * (1.0 + BOUND_SLACK))
    }
}

fn err(e: meannorm::Error) -> UsageError {
    UsageError(e.to_string())
}

impl Instance {
    /// Checks the parameter combination without building anything.
    pub fn validate(&self) -> Result<(), UsageError> {
        let (a, p) = (self.alpha, self.p);
        if self.n == 0 || self.n > MAX_DIM {
            return Err(UsageError(format!(
                "N must be in 1..={MAX_DIM}, got {}",
                self.n
            )));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(UsageError(format!("p must exceed 1, got {p}")));
        }
        if !a.is_finite() {
            return Err(UsageError(format!("alpha must be finite, got {a}")));
        }
        let bad = |msg: &str| Err(UsageError(format!("{}: {msg}, got alpha={a}", self.family)));
        match self.family {
            Family::Bennett7 | Family::Bennett8 if a <= 0.0 => bad("needs alpha > 0"),
            Family::MAlpha | Family::NAlpha if a <= 0.5 => bad("needs alpha > 1/2"),
            Family::MvSkew if a < 1.0 => bad("needs alpha >= 1"),
            Family::MvSkew if p != 2.0 => Err(UsageError(
                "mv_skew has signed entries and supports only p = 2".into(),
            )),
            _ => Ok(()),
        }
    }

    fn weights(&self) -> Result<WeightSequence, UsageError> {
        match self.family {
            Family::Cesaro => Ok(WeightSequence::ones(self.n)),
            Family::Bennett7 => HardyFamily::Bennett7
                .weights(self.alpha, self.n)
                .map_err(err),
            Family::Bennett8 => HardyFamily::Bennett8
                .weights(self.alpha, self.n)
                .map_err(err),
            _ => unreachable!("not a weighted mean family"),
        }
    }

    fn sequence(&self) -> SpacedSequence {
        self.lambda
            .clone()
            .unwrap_or_else(|| SpacedSequence::integers(self.n))
    }

    fn symmetric(&self) -> Result<Option<DenseSymMatrix>, UsageError> {
        Ok(Some(match self.family {
            Family::MAlpha => m_alpha_matrix(self.alpha, self.n).map_err(err)?,
            Family::NAlpha => n_alpha_matrix(self.alpha, self.n).map_err(err)?,
            Family::Hilbert => hilbert_matrix(self.n),
            Family::KernelR => generalized_kernel(self.order, self.alpha, self.n).map_err(err)?,
            _ => return Ok(None),
        }))
    }

    /// The matrix itself, as written by `dump`.
    pub fn matrix(&self) -> Result<DenseMatrix, UsageError> {
        self.validate()?;
        match self.family {
            Family::Cesaro | Family::Bennett7 | Family::Bennett8 => {
                Ok(weighted_mean_matrix(&self.weights()?))
            }
            Family::MvSkew => mv_skew_matrix(&self.sequence(), self.alpha).map_err(err),
            _ => Ok(self.symmetric()?.expect("symmetric family").to_dense()),
        }
    }

    pub fn bound(&self) -> Option<Bound> {
        let (a, p) = (self.alpha, self.p);
        match self.family {
            Family::Cesaro => Some(Bound {
                value: p / (p - 1.0),
                proven: true,
            }),
            Family::Bennett7 | Family::Bennett8 if a * p > 1.0 => {
                let fam = if self.family == Family::Bennett7 {
                    HardyFamily::Bennett7
                } else {
                    HardyFamily::Bennett8
                };
                Some(Bound {
                    value: a * p / (a * p - 1.0),
                    proven: fam.is_proven(a, p),
                })
            }
            Family::MAlpha | Family::NAlpha if p == 2.0 => Some(Bound {
                value: m_alpha_constant(a),
                proven: a <= 1.5,
            }),
            Family::Hilbert if p == 2.0 => Some(Bound {
                value: PI,
                proven: true,
            }),
            Family::KernelR if p == 2.0 && a == 1.0 => match self.order {
                // 2/(i+j) is twice the Hilbert matrix; 1/max(i,j) is the
                // Copson form of the Cesàro matrix.
                KernelOrder::Finite(1.0) => Some(Bound {
                    value: 2.0 * PI,
                    proven: true,
                }),
                KernelOrder::Infinity => Some(Bound {
                    value: 4.0,
                    proven: true,
                }),
                _ => None,
            },
            Family::MvSkew => Some(Bound {
                value: PI / (a * self.sequence().delta()),
                proven: true,
            }),
            _ => None,
        }
    }

    pub fn evaluate(&self, cfg: &IterationConfig) -> Result<Evaluation, UsageError> {
        self.validate()?;
        let estimate = match self.family {
            Family::Cesaro | Family::Bennett7 | Family::Bennett8 => {
                let b = weighted_mean_matrix(&self.weights()?);
                if self.p == 2.0 {
                    operator_norm_2(&b, cfg).map_err(err)?
                } else {
                    operator_norm_p(&b, self.p, cfg).map_err(err)?
                }
            }
            Family::MvSkew => max_singular_value(&self.matrix()?, cfg).map_err(err)?,
            _ => {
                let a = self.symmetric()?.expect("symmetric family");
                if self.p == 2.0 {
                    spectral_norm_sym(&a, cfg)
                } else {
                    operator_norm_p(&a.to_dense(), self.p, cfg).map_err(err)?
                }
            }
        };
        Ok(Evaluation {
            estimate,
            bound: self.bound(),
        })
    }
}

pub fn parse_order(s: &str) -> Result<KernelOrder, UsageError> {
    s.parse::<KernelOrder>().map_err(err)
}

/// One value per line; blank lines and `#` comments are skipped. The
/// spacing floor is the smallest gap.
pub fn read_lambda_file(path: &Path) -> Result<SpacedSequence, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<f64>()
            .map_err(|e| UsageError(format!("{}:{}: {e}", path.display(), k + 1)))?;
        values.push(v);
    }
    SpacedSequence::from_values(values).map_err(err)
}
