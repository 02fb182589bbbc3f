//! Parameter sweeps: a grid over `alpha × N`, evaluated in parallel and
//! written as CSV in grid order.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use meannorm::format::g17;
use meannorm::matrices::{KernelOrder, MAX_DIM};
use meannorm::spectral::IterationConfig;
use rayon::prelude::*;

use crate::family::{parse_order, Evaluation, Family, Instance};
use crate::UsageError;

pub const HEADER: &str = "family,alpha,N,p,norm_estimate,analytic_bound,ratio,iterations,converged";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_step: f64,
    pub ns: Vec<usize>,
    pub p: f64,
    /// Recorded for reproducibility; the sweep itself draws no random numbers.
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub order: KernelOrder,
    pub tol: f64,
    pub max_iter: usize,
}

/// Sweep settings as read from flags or a config file, before defaults.
#[derive(Debug, Clone, Default)]
pub struct PartialSpec {
    pub family: Option<String>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_step: Option<f64>,
    pub ns: Option<Vec<usize>>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub r: Option<String>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, UsageError>
where
    T::Err: std::fmt::Display,
{
    v.parse()
        .map_err(|e| UsageError(format!("{key}: cannot parse '{v}': {e}")))
}

pub fn parse_n_list(v: &str) -> Result<Vec<usize>, UsageError> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num("N", s))
        .collect()
}

impl PartialSpec {
    /// `key = value` lines; `#` starts a comment.
    pub fn parse_config(text: &str) -> Result<Self, UsageError> {
        let mut spec = Self::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("line {}: expected key = value", k + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "family" => spec.family = Some(value.to_string()),
                "alpha_min" => spec.alpha_min = Some(parse_num(key, value)?),
                "alpha_max" => spec.alpha_max = Some(parse_num(key, value)?),
                "alpha_step" => spec.alpha_step = Some(parse_num(key, value)?),
                "n" | "N" => spec.ns = Some(parse_n_list(value)?),
                "p" => spec.p = Some(parse_num(key, value)?),
                "seed" => spec.seed = Some(parse_num(key, value)?),
                "out" | "output" => spec.out = Some(PathBuf::from(value)),
                "r" => spec.r = Some(value.to_string()),
                "tol" => spec.tol = Some(parse_num(key, value)?),
                "max_iter" => spec.max_iter = Some(parse_num(key, value)?),
                _ => return Err(UsageError(format!("line {}: unknown key '{key}'", k + 1))),
            }
        }
        Ok(spec)
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: PartialSpec) -> PartialSpec {
        PartialSpec {
            family: over.family.or(self.family),
            alpha_min: over.alpha_min.or(self.alpha_min),
            alpha_max: over.alpha_max.or(self.alpha_max),
            alpha_step: over.alpha_step.or(self.alpha_step),
            ns: over.ns.or(self.ns),
            p: over.p.or(self.p),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            r: over.r.or(self.r),
            tol: over.tol.or(self.tol),
            max_iter: over.max_iter.or(self.max_iter),
        }
    }

    pub fn finish(self) -> Result<SweepSpec, UsageError> {
        let family = Family::parse(
            self.family
                .as_deref()
                .ok_or_else(|| UsageError("sweep needs a family".into()))?,
        )?;
        let alpha_min = self.alpha_min.unwrap_or(1.0);
        let alpha_max = self.alpha_max.unwrap_or(alpha_min);
        let alpha_step = self.alpha_step.unwrap_or(0.1);
        let spec = SweepSpec {
            family,
            alpha_min,
            alpha_max,
            alpha_step,
            ns: self.ns.unwrap_or_else(|| vec![256]),
            p: self.p.unwrap_or(2.0),
            seed: self.seed.unwrap_or(0),
            out: self.out,
            order: parse_order(self.r.as_deref().unwrap_or("inf"))?,
            tol: self.tol.unwrap_or(1e-12),
            max_iter: self.max_iter.unwrap_or(100_000),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), UsageError> {
        if !(self.alpha_step > 0.0 && self.alpha_step.is_finite()) {
            return Err(UsageError(format!(
                "alpha step must be > 0, got {}",
                self.alpha_step
            )));
        }
        if !(self.alpha_min <= self.alpha_max) || !self.alpha_max.is_finite() {
            return Err(UsageError(format!(
                "alpha range [{}, {}] is empty",
                self.alpha_min, self.alpha_max
            )));
        }
        if self.ns.is_empty() {
            return Err(UsageError("N list is empty".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n == 0 || n > MAX_DIM) {
            return Err(UsageError(format!("N must be in 1..={MAX_DIM}, got {n}")));
        }
        IterationConfig::new(self.tol, self.max_iter).map_err(|e| UsageError(e.to_string()))?;
        for inst in self.grid() {
            inst.validate()?;
        }
        Ok(())
    }

    /// `alpha_k = min + k·step` up to `max` (with a little room for rounding
    /// in the step count).
    pub fn alphas(&self) -> Vec<f64> {
        if !self.family.uses_alpha() {
            return vec![self.alpha_min];
        }
        let count = ((self.alpha_max - self.alpha_min) / self.alpha_step + 1e-9).floor() as usize;
        (0..=count)
            .map(|k| self.alpha_min + k as f64 * self.alpha_step)
            .collect()
    }

    /// Instances ordered by `(alpha, N)`.
    pub fn grid(&self) -> Vec<Instance> {
        let mut ns = self.ns.clone();
        ns.sort_unstable();
        ns.dedup();
        self.alphas()
            .into_iter()
            .flat_map(|alpha| {
                ns.iter().map(move |&n| Instance {
                    family: self.family,
                    alpha,
                    n,
                    p: self.p,
                    order: self.order,
                    lambda: None,
                })
            })
            .collect()
    }

    pub fn config(&self) -> IterationConfig {
        IterationConfig::new(self.tol, self.max_iter).expect("validated")
    }
}

pub struct Row {
    pub instance: Instance,
    pub eval: Evaluation,
}

impl Row {
    pub fn csv(&self) -> String {
        let e = &self.eval.estimate;
        let opt = |x: Option<f64>| x.map(g17).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance.family,
            g17(self.instance.alpha),
            self.instance.n,
            g17(self.instance.p),
            g17(e.value),
            opt(self.eval.bound.map(|b| b.value)),
            opt(self.eval.ratio()),
            e.iterations,
            e.converged
        )
    }
}

/// Evaluates the grid on the current rayon pool; rows keep grid order.
pub fn run(spec: &SweepSpec) -> Result<Vec<Row>, UsageError> {
    let cfg = spec.config();
    spec.grid()
        .into_par_iter()
        .map(|instance| {
            let eval = instance.evaluate(&cfg)?;
            Ok(Row { instance, eval })
        })
        .collect()
}

pub fn render(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Writes through a temporary file in the target directory, so an aborted
/// run never leaves a partial CSV behind.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Summary counts for the log line after a sweep.
pub fn tally(rows: &[Row]) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for r in rows {
        let key = match (r.eval.bound, r.eval.violated()) {
            (_, true) => "violated",
            (Some(b), false) if !b.proven => "exploratory",
            (Some(_), false) => "within bound",
            (None, _) => "no bound",
        };
        *m.entry(key).or_insert(0) += 1;
        if !r.eval.estimate.converged {
            *m.entry("not converged").or_insert(0) += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> Result<SweepSpec, UsageError> {
        PartialSpec::parse_config(text)?.finish()
    }

    #[test]
    fn alpha_grid_includes_endpoint() {
        let s =
            spec("family = m_alpha\nalpha_min = 0.6\nalpha_max = 1.5\nalpha_step = 0.1\nn = 64")
                .unwrap();
        let a = s.alphas();
        assert_eq!(a.len(), 10);
        assert_eq!(a[0], 0.6);
        assert!((a[9] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn grid_order() {
        let s =
            spec("family = bennett7\nalpha_min = 1\nalpha_max = 1.2\nalpha_step = 0.1\nn = 64, 16")
                .unwrap();
        let g: Vec<_> = s.grid().iter().map(|i| (i.alpha, i.n)).collect();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], (1.0, 16));
        assert_eq!(g[1], (1.0, 64));
        assert!(g
            .windows(2)
            .all(|w| w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 < w[1].1)));
    }

    #[test]
    fn config_errors() {
        assert!(spec("family = hilbert\nn =").is_err());
        assert!(spec("family = hilbert\nbogus = 1").is_err());
        assert!(spec("family = hilbert\nn 5").is_err());
        assert!(spec("family = m_alpha\nalpha_min = 0.4\nn = 4").is_err());
        assert!(spec("family = m_alpha\nalpha_step = 0\nn = 4").is_err());
        assert!(spec("family = hilbert\nn = 9000").is_err());
        assert!(spec("n = 4").is_err());
        assert!(spec("# comment\nfamily = hilbert # trailing\nn = 4\n").is_ok());
    }

    #[test]
    fn flags_override_config() {
        let file = PartialSpec::parse_config("family = hilbert\nn = 4\np = 2").unwrap();
        let flags = PartialSpec {
            ns: Some(vec![8]),
            ..Default::default()
        };
        let s = file.merge(flags).finish().unwrap();
        assert_eq!(s.ns, vec![8]);
        assert_eq!(s.family, Family::Hilbert);
    }
}
