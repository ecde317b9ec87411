//! Output rows and their JSON, CSV and text renderings.

use std::str::FromStr;

use clap::ValueEnum;
use freetrace_core::ffield::TraceLabel;
use freetrace_core::formulas::BranchTag;
use freetrace_core::oracle::{CountReport, Method, Quantity};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A count as printed: big integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: String,
    pub c: String,
    pub quantity: String,
    pub method: String,
    pub branch: Option<String>,
    pub value: String,
    #[serde(rename = "match", default)]
    pub matched: Option<bool>,
}

impl From<&CountReport> for Report {
    fn from(r: &CountReport) -> Self {
        Report {
            p: r.p,
            s: r.s,
            m: r.m,
            n: r.n.to_string(),
            c: r.c.to_string(),
            quantity: r.quantity.to_string(),
            method: r.method.name().to_string(),
            branch: r.method.branch().map(|b| b.to_string()),
            value: r.value.to_string(),
            matched: None,
        }
    }
}

impl TryFrom<&Report> for CountReport {
    type Error = CliError;

    fn try_from(r: &Report) -> Result<Self, CliError> {
        let usage = |what: &str| CliError::Usage(format!("bad {what} in report"));
        let method = match (r.method.as_str(), &r.branch) {
            ("oracle", None) => Method::Oracle,
            ("formula", Some(b)) => Method::Formula(BranchTag::from_str(b).map_err(CliError::Usage)?),
            _ => return Err(usage("method")),
        };
        Ok(CountReport {
            p: r.p,
            s: r.s,
            m: r.m,
            n: r.n.parse::<BigUint>().map_err(|_| usage("N"))?,
            c: r.c.parse::<TraceLabel>().map_err(|_| usage("c"))?,
            quantity: Quantity::from_str(&r.quantity).map_err(CliError::Usage)?,
            method,
            value: r.value.parse::<BigUint>().map_err(|_| usage("value"))?,
        })
    }
}

/// JSON is one object per line; CSV has a header row; text is one line of
/// `key=value` pairs per row.
pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut out = String::new();
            for row in rows {
                out.push_str(&serde_json::to_string(row)?);
                out.push('\n');
            }
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Text => {
            let mut out = String::new();
            for row in rows {
                let value = serde_json::to_value(row)?;
                let fields: Vec<String> = value
                    .as_object()
                    .expect("rows serialize as objects")
                    .iter()
                    .map(|(k, v)| match v {
                        serde_json::Value::String(s) => format!("{k}={s}"),
                        serde_json::Value::Null => format!("{k}=-"),
                        other => format!("{k}={other}"),
                    })
                    .collect();
                out.push_str(&fields.join(" "));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Reads back the JSON rendering of [`render`].
pub fn parse_json_lines<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>, CliError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(CliError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CountReport {
        CountReport {
            p: 3,
            s: 1,
            m: 4,
            n: BigUint::from(80u32),
            c: TraceLabel::Zero,
            quantity: Quantity::Z,
            method: Method::Formula(BranchTag::SemiPrimitive),
            value: BigUint::from(8u32),
        }
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::from(&sample());
        r.matched = Some(true);
        let text = render(&[r.clone()], Format::Json).unwrap();
        assert_eq!(
            text.trim(),
            r#"{"p":3,"s":1,"m":4,"N":"80","c":"0","quantity":"Z","method":"formula","branch":"semi-primitive","value":"8","match":true}"#
        );
        let back: Vec<Report> = parse_json_lines(&text).unwrap();
        assert_eq!(back, [r.clone()]);
        assert_eq!(CountReport::try_from(&back[0]).unwrap(), sample());
    }

    #[test]
    fn csv_and_text() {
        let r = Report::from(&sample());
        let csv = render(&[r.clone()], Format::Csv).unwrap();
        assert_eq!(csv, "p,s,m,N,c,quantity,method,branch,value,match\n3,1,4,80,0,Z,formula,semi-primitive,8,\n");
        let text = render(&[r], Format::Text).unwrap();
        assert!(text.starts_with("p=3 s=1 m=4 N=80 c=0 quantity=Z"));
    }
}
