//! Measure ingestion and number formatting for command-line output.

use std::io::{self, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{EmpiricalMeasure, GaussianMeasure, Vector};

fn input_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("{}: {msg}", path.display()))
}

/// One atom per row. A header row is recognized by a non-numeric field;
/// a last header column named `weight` holds the atom weights.
pub fn read_measure_csv(path: &Path) -> Result<EmpiricalMeasure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(path, e))?;
    parse_measure_csv(&text).map_err(|e| match e {
        Error::Input(msg) => input_err(path, msg),
        other => other,
    })
}

pub fn parse_measure_csv(text: &str) -> Result<EmpiricalMeasure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut weights: Option<Vec<f64>> = None;
    let mut width: Option<usize> = None;
    for (k, record) in reader.records().enumerate() {
        let line = k + 1;
        let record = record.map_err(|e| Error::Input(format!("row {line}: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_)
                if rows.is_empty()
                    && width.is_none()
                    && record.iter().all(|f| f.parse::<f64>().is_err()) =>
            {
                width = Some(record.len());
                if record
                    .iter()
                    .next_back()
                    .is_some_and(|c| c.eq_ignore_ascii_case("weight"))
                {
                    weights = Some(Vec::new());
                }
                continue;
            }
            Err(e) => {
                return Err(Error::Input(format!(
                    "row {line}: {e} in `{}`",
                    record.iter().collect::<Vec<_>>().join(",")
                )))
            }
        };
        let expected = *width.get_or_insert(values.len());
        if values.len() != expected {
            return Err(Error::Input(format!(
                "row {line}: expected {expected} fields, found {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "row {line}: field {} is not finite",
                i + 1
            )));
        }
        match weights.as_mut() {
            Some(w) => {
                let (coords, last) = values.split_at(values.len() - 1);
                if coords.is_empty() {
                    return Err(Error::Input(format!(
                        "row {line}: no coordinates besides the weight"
                    )));
                }
                w.push(last[0]);
                rows.push(coords.to_vec());
            }
            None => rows.push(values),
        }
    }
    if rows.is_empty() {
        return Err(Error::Empty);
    }
    EmpiricalMeasure::from_rows(&rows, weights)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

impl GaussianSpec {
    pub fn build(&self) -> Result<GaussianMeasure> {
        let d = self.mean.len();
        if d == 0 {
            return Err(Error::Input("gaussian mean is empty".into()));
        }
        if self.covariance.len() != d || self.covariance.iter().any(|r| r.len() != d) {
            return Err(Error::Input(format!("covariance must be {d}×{d}")));
        }
        let flat: Vec<f64> = self.covariance.iter().flatten().copied().collect();
        if flat.iter().chain(&self.mean).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gaussian specification".into()));
        }
        GaussianMeasure::from_covariance(
            Vector::from_column_slice(&self.mean),
            DMatrix::from_row_slice(d, d, &flat),
        )
    }
}

pub fn read_gaussian_json(path: &Path) -> Result<GaussianMeasure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(path, e))?;
    let spec: GaussianSpec = serde_json::from_str(&text).map_err(|e| input_err(path, e))?;
    spec.build()
}

/// Comma-separated coordinates, e.g. `0.5,-1`.
pub fn parse_vector(s: &str) -> Result<Vector> {
    let coords: std::result::Result<Vec<f64>, _> =
        s.split(',').map(|c| c.trim().parse::<f64>()).collect();
    let coords =
        coords.map_err(|e| Error::Input(format!("cannot parse `{s}` as a vector: {e}")))?;
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite(format!("vector `{s}`")));
    }
    Ok(Vector::from_vec(coords))
}

/// `x` with `digits` significant digits; plain decimal unless the exponent
/// is below -5 or beyond the digit count.
pub fn format_sig(x: f64, digits: usize) -> String {
    debug_assert!(digits >= 1);
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if x == 0.0 || (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(1) as usize;
        let decimals = if x == 0.0 { digits - 1 } else { decimals };
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Significant digits for machine-readable output.
pub const OUTPUT_DIGITS: usize = 17;

/// JSON formatter writing every float with [`OUTPUT_DIGITS`] significant
/// digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct SigFormatter;

impl serde_json::ser::Formatter for SigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_sig(value, OUTPUT_DIGITS).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("json is utf-8")
}
