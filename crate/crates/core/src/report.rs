//! CSV and JSON output for report rows.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Serializes finite floats as numbers and non-finite ones as the strings
/// `-inf`, `inf` and `nan`, so JSON output stays lossless.
pub fn ser_f64<S: Serializer>(x: &f64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        serializer.serialize_f64(*x)
    } else if x.is_nan() {
        serializer.serialize_str("nan")
    } else if *x > 0.0 {
        serializer.serialize_str("inf")
    } else {
        serializer.serialize_str("-inf")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::invalid(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut s =
        serde_json::to_string_pretty(rows).map_err(|e| Error::invalid(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        name: &'static str,
        #[serde(serialize_with = "ser_f64")]
        v: f64,
    }

    #[test]
    fn non_finite_sentinels() {
        let rows = [
            Row { name: "a", v: -2.0 },
            Row {
                name: "b",
                v: f64::NEG_INFINITY,
            },
        ];
        assert_eq!(to_csv(&rows).unwrap(), "name,v\na,-2.0\nb,-inf\n");
        let json = to_json(&rows).unwrap();
        assert!(json.contains("\"v\": -2.0"));
        assert!(json.contains("\"v\": \"-inf\""));
    }
}
