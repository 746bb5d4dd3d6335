//! JSON and CSV encodings of the library's reports.
//!
//! JSON documents carry `schema_version` and `kind` next to the report's own
//! fields, and write every float with 17 significant digits so that decoding
//! gives back the same bits.

use std::io::{self, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::spiral::SpiralPoint;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub kind: String,
    #[serde(flatten)]
    pub report: T,
}

/// Pretty printer that writes floats as `d.dddddddddddddddde±x`.
struct Float17<'a>(PrettyFormatter<'a>);

impl Formatter for Float17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        // -0 is written as 0 so that equal reports print identically
        let v = if value == 0.0 { 0.0 } else { value };
        write!(w, "{v:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Encodes `report` inside a versioned envelope, newline-terminated.
pub fn to_json<T: Serialize>(kind: &str, report: &T) -> Result<String> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        report,
    };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17(PrettyFormatter::new()));
    envelope
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("JSON encoding failed: {e}")))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Decodes a document written by [`to_json`], checking the schema version.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<Envelope<T>> {
    let envelope: Envelope<T> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid report JSON: {e}")))?;
    if envelope.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            envelope.schema_version
        )));
    }
    Ok(envelope)
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros dropped.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("CSV output failed: {e}"))
}

/// Writes rows of numbers under `header` (LF line endings).
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

pub const POINT_CSV_HEADER: [&str; 5] = ["n", "x", "y", "radius", "phase_frac"];

pub fn point_row(p: &SpiralPoint) -> Vec<String> {
    vec![
        p.n.to_string(),
        format_g12(p.x),
        format_g12(p.y),
        format_g12(p.radius),
        format_g12(p.phase_frac),
    ]
}

/// `n,x,y,radius,phase_frac` rows.
pub fn write_points_csv<W: Write>(out: W, points: &[SpiralPoint]) -> Result<()> {
    write_csv(out, &POINT_CSV_HEADER, points.iter().map(point_row))
}
