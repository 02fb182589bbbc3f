//! Compensated summation.

/// Neumaier's variant of Kahan summation. Tracks the low-order bits lost
/// by each addition and folds them back in at the end, so the error does
/// not grow with the number of terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<CompensatedSum>().value()
}

/// Compensated sum after sorting the terms by increasing magnitude.
pub fn sorted_sum(terms: &mut [f64]) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    compensated_sum(terms)
}

/// Running compensated prefix sums: `out[k] = xs[0] + ... + xs[k]`.
pub fn prefix_sums(xs: &[f64]) -> Vec<f64> {
    let mut acc = CompensatedSum::new();
    xs.iter()
        .map(|&x| {
            acc.add(x);
            acc.value()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(&xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn harmonic_prefix_sums_match_reverse_order() {
        let xs: Vec<f64> = (1..=100_000).map(|k| 1.0 / k as f64).collect();
        let p = prefix_sums(&xs);
        let reverse: f64 = xs.iter().rev().sum();
        assert!((p[p.len() - 1] - reverse).abs() < 1e-13);
    }

    #[test]
    fn sorted_sum_orders_by_magnitude() {
        let mut t = vec![1.0, 1e-17, 1e-17, 1e-17, 1e-17];
        assert_eq!(sorted_sum(&mut t), 1.0 + 4e-17);
        assert_eq!(t[4], 1.0);
    }
}
