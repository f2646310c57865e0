//! CSV and JSON rendering of result tables.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<(String, Vec<f64>)>,
    pub peaks: Vec<f64>,
    pub theta_pw: Option<f64>,
}

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}={v}");
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.0.as_str()).collect();
        let _ = writeln!(s, "{}", names.join(","));
        let rows = self.columns.first().map_or(0, |c| c.1.len());
        for i in 0..rows {
            let row: Vec<String> = self.columns.iter().map(|c| fmt_float(c.1[i])).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let config: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| {
                let value = if let Ok(i) = v.parse::<i64>() {
                    json!(i)
                } else {
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .map_or_else(|| Value::String(v.clone()), |x| json!(x))
                };
                (k.clone(), value)
            })
            .collect();
        let columns: Map<String, Value> = self
            .columns
            .iter()
            .map(|(name, values)| (name.clone(), json!(values)))
            .collect();
        let doc = json!({
            "config": config,
            "columns": columns,
            "peaks": self.peaks,
            "theta_pw": self.theta_pw,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Write to `path`, or to standard output when there is none.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        Table {
            meta: vec![
                ("P".into(), "1".into()),
                ("channel".into(), "planewave".into()),
            ],
            columns: vec![
                ("theta_p".into(), vec![0.1, 1.0 / 3.0]),
                ("density_raw".into(), vec![1e-300, 2.5]),
            ],
            peaks: vec![1.0 / 3.0],
            theta_pw: Some(1.5),
        }
    }

    #[test]
    fn csv_layout_and_round_trip() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# P=1");
        assert_eq!(lines[1], "# channel=planewave");
        assert_eq!(lines[2], "theta_p,density_raw");
        let row: Vec<f64> = lines[4].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(row, vec![1.0 / 3.0, 2.5]);
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["config"]["P"], json!(1));
        assert_eq!(v["config"]["channel"], json!("planewave"));
        assert_eq!(v["columns"]["theta_p"][1].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(v["theta_pw"], json!(1.5));
    }
}
