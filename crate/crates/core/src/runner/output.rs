//! CSV serialization.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::scenario::{ColumnSummary, ResultRow, COLUMNS};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Shortest rendering with at most 12 significant digits, in the style of
/// C's `%.12g`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn field(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

pub fn header() -> String {
    COLUMNS.join(",")
}

pub fn write_csv<W: Write>(mut w: W, rows: &[ResultRow]) -> io::Result<()> {
    writeln!(w, "{}", header())?;
    for r in rows {
        let line: Vec<String> = r.values().iter().map(|v| field(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Generic `(name, values)` table, used for the auxiliary subcommands.
pub fn write_table<W: Write>(mut w: W, names: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> io::Result<()> {
    writeln!(w, "{}", names.join(","))?;
    for r in rows {
        let line: Vec<String> = r.into_iter().map(format_number).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// `<dir>/<stem>_<field>=<value>.csv`
pub fn sweep_file_name(dir: &Path, stem: &str, field: &str, value: f64) -> PathBuf {
    dir.join(format!("{stem}_{field}={}.csv", format_number(value)))
}

pub fn write_summary<W: Write>(mut w: W, summary: &[ColumnSummary]) -> io::Result<()> {
    writeln!(w, "{:<14} {:>20} {:>20}", "column", "max", "argmax t")?;
    for c in summary {
        match c.max {
            Some((v, t)) => writeln!(w, "{:<14} {:>20} {:>20}", c.name, format_number(v), format_number(t))?,
            None => writeln!(w, "{:<14} {:>20} {:>20}", c.name, "-", "-")?,
        }
    }
    Ok(())
}
