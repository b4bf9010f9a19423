use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex;
use serde_json::{Map, Number, Value};
use szego_core::lab::ConvergenceReport;
use szego_core::{Ap, LevelCurve, Real, ZeroSet};

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn zeros_csv(zs: &ZeroSet<Ap>, digits: usize) -> String {
    let mut s = String::from("re,im,residual\n");
    for (z, r) in zs.zeros.iter().zip(&zs.residuals) {
        s.push_str(&format!(
            "{},{},{}\n",
            z.re.to_decimal(digits),
            z.im.to_decimal(digits),
            r.to_decimal(digits)
        ));
    }
    s
}

pub fn curve_csv(curve: &LevelCurve<Ap>, digits: usize) -> String {
    let mut s = String::from("theta,re,im\n");
    for p in &curve.samples {
        s.push_str(&format!(
            "{},{},{}\n",
            p.theta.to_decimal(digits),
            p.z.re.to_decimal(digits),
            p.z.im.to_decimal(digits)
        ));
    }
    s
}

pub fn points_csv(header: &str, rows: &[(Complex<Ap>, Ap)], digits: usize) -> String {
    let mut s = format!("{header}\n");
    for (z, v) in rows {
        s.push_str(&format!(
            "{},{},{}\n",
            z.re.to_decimal(digits),
            z.im.to_decimal(digits),
            v.to_decimal(digits)
        ));
    }
    s
}

/// A JSON number carrying every decimal digit of `x`.
pub fn number(x: &Ap, digits: usize) -> Value {
    let text = x.to_decimal(digits);
    match text.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(text),
    }
}

pub fn report_json(rep: &ConvergenceReport<Ap>, digits: usize) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), Value::from(rep.n));
    m.insert("alpha".into(), number(&rep.alpha, digits));
    m.insert("r_eff".into(), number(&rep.r_eff, digits));
    m.insert("level_deviation".into(), number(&rep.level_deviation, digits));
    m.insert("ks_theta".into(), number(&rep.ks_theta, digits));
    m.insert(
        "moment_gaps".into(),
        Value::Array(rep.moment_gaps.iter().map(|g| number(g, digits)).collect()),
    );
    m.insert("supnorm_gap".into(), number(&rep.supnorm_gap, digits));
    m.insert("origin_gap".into(), number(&rep.origin_gap, digits));
    Value::Object(m)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use szego_core::Precision;

    #[test]
    fn numbers_keep_their_digits() {
        let p = Precision::new(256).unwrap();
        let x = Ap::parse("-0.0016666666666666666666666666666666666666667", p).unwrap();
        let v = number(&x, p.decimal_digits());
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with("-1.66666666666666666666666666666666666"), "{text}");
        assert_eq!(number(&Ap::with_prec(0.0, p), 10), Value::Number(0.into()));
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("sub").join("a.csv");
        write_atomic(&f, b"one").unwrap();
        write_atomic(&f, b"two").unwrap();
        assert_eq!(fs::read_to_string(&f).unwrap(), "two");
    }
}
