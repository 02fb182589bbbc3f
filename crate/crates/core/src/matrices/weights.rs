use crate::error::{Error, Result};
use crate::means::alpha_weight;
use crate::sum::prefix_sums;

/// Positive weights `λ_1, …, λ_N` together with their prefix sums `Λ_k`.
///
/// `λ_1 > 0` and every `λ_k ≥ 0`, so the prefix sums are strictly positive
/// and nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    lambda: Vec<f64>,
    prefix: Vec<f64>,
}

impl WeightSequence {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        match lambda.first() {
            None => return Err(Error::InvalidWeights("empty weight list".into())),
            Some(&l1) if !(l1 > 0.0) => {
                return Err(Error::InvalidWeights(format!(
                    "lambda_1 must be > 0, got {l1}"
                )))
            }
            _ => {}
        }
        if let Some((k, &l)) = lambda
            .iter()
            .enumerate()
            .find(|(_, l)| !(l.is_finite() && **l >= 0.0))
        {
            return Err(Error::InvalidWeights(format!(
                "lambda_{} must be finite and >= 0, got {l}",
                k + 1
            )));
        }
        let prefix = prefix_sums(&lambda);
        Ok(Self { lambda, prefix })
    }

    /// Weights from `f(k)` for one-based `k = 1..=n`.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((1..=n).map(f).collect())
    }

    /// All weights equal to one: the Cesàro matrix.
    pub fn ones(n: usize) -> Self {
        Self::new(vec![1.0; n.max(1)]).expect("unit weights are valid")
    }

    /// `λ_k = k^α − (k−1)^α`, for which `Λ_n = n^α`.
    pub fn power_difference(alpha: f64, n: usize) -> Result<Self> {
        let lambda = (1..=n as u64)
            .map(|k| alpha_weight(k, alpha))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lambda)
    }

    /// `λ_k = k^{α−1}`.
    pub fn power(alpha: f64, n: usize) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
        }
        Self::from_fn(n, |k| (k as f64).powf(alpha - 1.0))
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// `λ_k` at zero-based index.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// `Λ_k` at zero-based index.
    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.lambda.iter().map(|l| l * c).collect())
    }

    pub fn truncated(&self, n: usize) -> Result<Self> {
        self.check_len(n)?;
        Self::new(self.lambda[..n].to_vec())
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.lambda.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.lambda.windows(2).all(|w| w[1] >= w[0])
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidWeights(format!(
                "truncation {n} not in 1..={}",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Strictly increasing positive points `λ_1 < … < λ_R` with gaps at least `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacedSequence {
    values: Vec<f64>,
    delta: f64,
}

impl SpacedSequence {
    pub fn new(values: Vec<f64>, delta: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidSequence(format!(
                "delta must be > 0, got {delta}"
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidSequence(format!(
                "values must be positive, got {v}"
            )));
        }
        if let Some((r, w)) = values
            .windows(2)
            .enumerate()
            .find(|(_, w)| !(w[1] - w[0] >= delta))
        {
            return Err(Error::InvalidSequence(format!(
                "gap lambda_{} - lambda_{} = {} is below delta = {delta}",
                r + 2,
                r + 1,
                w[1] - w[0]
            )));
        }
        Ok(Self { values, delta })
    }

    /// Uses the smallest consecutive gap as `δ`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let delta = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let delta = if delta.is_finite() { delta } else { 1.0 };
        Self::new(values, delta)
    }

    /// `λ_r = r` for `r = 1..=count`, `δ = 1`.
    pub fn integers(count: usize) -> Self {
        Self::new((1..=count).map(|r| r as f64).collect(), 1.0).expect("integers are 1-spaced")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
