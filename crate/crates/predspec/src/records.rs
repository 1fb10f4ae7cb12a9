//! Output records shared by every command.
//!
//! Each record carries the parameter string of the run that produced it, so
//! a single line is enough to trace a value back to its configuration.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

/// One plotted value: `y` as a function of `x` for a named algorithm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub experiment: String,
    pub algorithm: String,
    /// Name of the quantity on the x axis.
    pub param: String,
    pub x: f64,
    pub y: f64,
    /// Run configuration, `key=value` pairs joined by `;`.
    pub params: String,
}

/// Consistency and robustness of one algorithm under one prediction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRecord {
    pub problem: String,
    pub algorithm: String,
    pub y: f64,
    pub beta_y: f64,
    pub gamma_y: f64,
    pub params: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Writes records as JSON lines or as CSV with a header row.
pub fn write_records<T: Serialize, W: Write>(
    records: &[T],
    format: OutputFormat,
    out: W,
) -> Result<()> {
    match format {
        OutputFormat::Json => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Joins `key=value` pairs in the given order.
pub fn param_string(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Record> {
        vec![Record {
            experiment: "ski-synthetic".into(),
            algorithm: "pdsr".into(),
            param: "p".into(),
            x: 0.5,
            y: 1.25,
            params: param_string(&[("b", "100".into()), ("seed", "7".into())]),
        }]
    }

    #[test]
    fn json_lines() {
        let mut buf = Vec::new();
        write_records(&sample(), OutputFormat::Json, &mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert_eq!(
            line,
            "{\"experiment\":\"ski-synthetic\",\"algorithm\":\"pdsr\",\"param\":\"p\",\"x\":0.5,\"y\":1.25,\"params\":\"b=100;seed=7\"}\n"
        );
    }

    #[test]
    fn csv_has_header_and_same_values() {
        let mut buf = Vec::new();
        write_records(&sample(), OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "experiment,algorithm,param,x,y,params\nski-synthetic,pdsr,p,0.5,1.25,b=100;seed=7\n"
        );
    }
}
