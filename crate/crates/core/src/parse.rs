//! Text parsers for command-line values and input files.

use crate::error::{Error, Result};
use crate::geometry::SectorSpec;

fn parse_real(token: &str) -> Result<f64> {
    let t = token.trim();
    let v: f64 = t.parse().map_err(|_| Error::Parse(format!("not a number: {t:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("not a finite number: {t:?}")));
    }
    Ok(v)
}

/// Comma-separated finite reals, e.g. `0.5,1,2`.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    text.split(',').map(parse_real).collect()
}

/// `a,b,c,d` as a [`SectorSpec`].
pub fn parse_sector(text: &str) -> Result<SectorSpec> {
    match parse_real_list(text)?.as_slice() {
        &[a, b, c, d] => SectorSpec::new(a, b, c, d),
        other => Err(Error::Parse(format!("sector needs 4 values a,b,c,d, got {}", other.len()))),
    }
}

/// Phase values ξ_1, ξ_2, … separated by commas or whitespace; `#` starts a
/// comment that runs to the end of the line.
pub fn parse_custom_values(text: &str) -> Result<Vec<f64>> {
    let values = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(parse_real)
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(Error::Parse("no values found".into()));
    }
    Ok(values)
}
