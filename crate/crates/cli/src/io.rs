//! Damage CSV ingestion, curve CSV emission and report writing.

use crate::CliError;
use fatigue_core::estimation::DamageSeries;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Read a single numeric column; a non-numeric first row is taken as a
/// header. Blank lines are skipped.
pub fn parse_value_csv(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_values(&text, path)
}

fn parse_values(text: &str, path: &Path) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let token = line.split(',').next().unwrap_or("").trim();
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(CliError::Row {
                    line: i + 1,
                    message: format!("non-finite value `{token}`"),
                })
            }
            Err(_) if first => {}
            Err(_) => {
                return Err(CliError::Row {
                    line: i + 1,
                    message: format!("cannot parse `{token}` as a number"),
                })
            }
        }
        first = false;
    }
    if values.is_empty() {
        return Err(CliError::Empty(path.display().to_string()));
    }
    Ok(values)
}

/// Damages per cycle: like [`parse_value_csv`], and every value must be >= 0.
pub fn parse_damage_csv(path: &Path, known_mean: Option<f64>) -> Result<DamageSeries, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let values = parse_values(&text, path)?;
    if let Some(bad) = values.iter().position(|&v| v < 0.0) {
        // map back to the physical line for the message
        let line = text
            .lines()
            .enumerate()
            .filter(|(_, l)| l.trim().split(',').next().unwrap_or("").trim().parse::<f64>().is_ok())
            .nth(bad)
            .map_or(0, |(i, _)| i + 1);
        return Err(CliError::Row {
            line,
            message: format!("negative damage {}", values[bad]),
        });
    }
    Ok(DamageSeries::new(values, known_mean)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(CliError::Usage(format!(
                "grid needs finite min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(CliError::Usage("grid needs at least 2 points".into()));
        }
        if self.log && self.min <= 0.0 {
            return Err(CliError::Usage("a logarithmic grid needs min > 0".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| {
                let s = i as f64 / n as f64;
                if i == n {
                    self.max
                } else if self.log {
                    (self.min.ln() + s * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + s * (self.max - self.min)
                }
            })
            .collect()
    }
}

/// `v` with 12 significant digits, `%.12g` style.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Write `t,value` rows of `f` over `grid`.
pub fn emit_curve_csv<F>(f: F, grid: &GridSpec, path: &Path) -> Result<(), CliError>
where
    F: Fn(f64) -> fatigue_core::Result<f64>,
{
    let body = curve_csv(f, grid)?;
    write_text(path, &body)
}

pub fn curve_csv<F>(f: F, grid: &GridSpec) -> Result<String, CliError>
where
    F: Fn(f64) -> fatigue_core::Result<f64>,
{
    grid.validate()?;
    let mut out = String::from("t,value\n");
    for t in grid.points() {
        let v = f(t)?;
        writeln!(out, "{},{}", fmt_sig(t), fmt_sig(v)).expect("string write");
    }
    Ok(out)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(100.0), "100");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0 / 3.0 * 1e-7), "6.66666666667e-08");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_sig(-0.0786496), "-0.0786496");
        assert_eq!(fmt_sig(9.9999999999999e11), "1e+12");
    }

    #[test]
    fn header_detection_and_errors() {
        let p = Path::new("mem");
        assert_eq!(parse_values("damage\n1.0\n2.5\n", p).unwrap(), vec![1.0, 2.5]);
        assert_eq!(parse_values("1.0\n\n2\n", p).unwrap(), vec![1.0, 2.0]);
        assert!(matches!(parse_values("1.0\nabc\n", p), Err(CliError::Row { line: 2, .. })));
        assert!(matches!(parse_values("damage\n", p), Err(CliError::Empty(_))));
        assert!(matches!(parse_values("", p), Err(CliError::Empty(_))));
    }

    #[test]
    fn grid_validation() {
        let g = GridSpec { min: 3.0, max: 2.0, points: 2, log: false };
        assert!(g.validate().is_err());
        let g = GridSpec { min: 1.0, max: 2.0, points: 1, log: false };
        assert!(g.validate().is_err());
        let g = GridSpec { min: 1.0, max: 4.0, points: 3, log: true };
        assert_eq!(g.points(), vec![1.0, 2.0, 4.0]);
    }
}
