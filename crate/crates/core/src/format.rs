//! Text output: `%.17g` numbers and matrix CSV.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use crate::error::{domain, Result};
use crate::matrices::DenseMatrix;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent form below `1e-4` or from `1e17` on. Every finite `f64`
/// survives a round trip through this text.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One CSV line per row, values in `%.17g`.
pub fn write_matrix_csv<W: Write>(m: &DenseMatrix, out: &mut W) -> io::Result<()> {
    let mut line = String::new();
    for row in m.rows_iter() {
        line.clear();
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            write!(line, "{}", g17(*v)).expect("writing to a String");
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Parses a matrix written by [`write_matrix_csv`].
pub fn read_matrix_csv<R: BufRead>(input: R) -> Result<DenseMatrix> {
    let mut rows = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line.map_err(|e| crate::Error::Domain(format!("read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>();
        match row {
            Ok(r) => rows.push(r),
            Err(e) => return domain(format!("line {}: {e}", k + 1)),
        }
    }
    DenseMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::TrialRng;

    #[test]
    fn matches_c_formatting() {
        assert_eq!(g17(0.5), "0.5");
        assert_eq!(g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(g17(0.25), "0.25");
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(100.0), "100");
        assert_eq!(g17(-2.5), "-2.5");
        assert_eq!(g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(g17(1e17), "1e+17");
        assert_eq!(g17(123456789012345680.0), "1.2345678901234568e+17");
        assert_eq!(g17(0.0001), "0.0001");
        assert_eq!(g17(std::f64::consts::PI), "3.1415926535897931");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1e300), "1.0000000000000001e+300");
        assert_eq!(g17(5e-324), "4.9406564584124654e-324");
    }

    #[test]
    fn round_trips() {
        let mut rng = TrialRng::new(8);
        for _ in 0..10_000 {
            let x = f64::from_bits(rng.next_u64());
            if x.is_finite() {
                assert_eq!(g17(x).parse::<f64>().unwrap(), x);
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let m = DenseMatrix::from_fn(3, 4, |i, j| (i as f64 + 0.1) / (j as f64 + 3.0) - 0.2);
        let mut buf = Vec::new();
        write_matrix_csv(&m, &mut buf).unwrap();
        let back = read_matrix_csv(buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert!(read_matrix_csv("1,2\n3,x\n".as_bytes()).is_err());
        assert!(read_matrix_csv("1,2\n3\n".as_bytes()).is_err());
    }
}
