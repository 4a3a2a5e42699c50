use clap::ValueEnum;
use qec_core::cheb_poly::IntPoly;
use qec_core::{LambdaSets, Source};
use serde::{Deserialize, Serialize};

use crate::format::{fmt15, round15};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    Oracle,
    Join,
    Fan,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Oracle => "oracle",
            Method::Join => "join",
            Method::Fan => "fan",
        }
    }
}

/// Result of one `qec` invocation. Floats are rounded to 15 significant
/// digits on construction, so serialized forms round-trip exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub input: String,
    /// The solver that produced the value (never `auto`).
    pub method: Method,
    pub value: f64,
    pub alpha: f64,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_sets: Option<LambdaSets>,
    pub timing_ms: f64,
}

fn round_sets(s: &LambdaSets) -> LambdaSets {
    let r = |v: &[f64]| v.iter().map(|&x| round15(x)).collect();
    LambdaSets {
        m: s.m,
        lambda0: r(&s.lambda0),
        lambda1: r(&s.lambda1),
        lambda2: r(&s.lambda2),
        lambda3: r(&s.lambda3),
        excluded: r(&s.excluded),
    }
}

pub const CSV_HEADER: [&str; 7] = ["input", "method", "value", "alpha", "source", "lambda_sets", "timing_ms"];

impl OutputRecord {
    pub fn new(
        input: String,
        method: Method,
        value: f64,
        alpha: f64,
        source: Source,
        lambda_sets: Option<&LambdaSets>,
        timing_ms: f64,
    ) -> Self {
        OutputRecord {
            input,
            method,
            value: round15(value),
            alpha: round15(alpha),
            source,
            lambda_sets: lambda_sets.map(round_sets),
            timing_ms: round15(timing_ms),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "input:  {}\nmethod: {}\nvalue:  {}\nalpha:  {}\nsource: {}\n",
            self.input,
            self.method.name(),
            fmt15(self.value),
            fmt15(self.alpha),
            self.source
        );
        if let Some(s) = &self.lambda_sets {
            let list = |v: &[f64]| v.iter().map(|&x| fmt15(x)).collect::<Vec<_>>().join(", ");
            out += &format!(
                "Λ₀: {{{}}}\nΛ₁: {{{}}}\nΛ₂: {{{}}}\nΛ₃: {{{}}}\n",
                list(&s.lambda0),
                list(&s.lambda1),
                list(&s.lambda2),
                list(&s.lambda3)
            );
        }
        out += &format!("time:   {} ms\n", fmt15(self.timing_ms));
        out
    }

    pub fn to_csv_fields(&self) -> Vec<String> {
        vec![
            self.input.clone(),
            self.method.name().into(),
            self.value.to_string(),
            self.alpha.to_string(),
            self.source.tag().into(),
            self.lambda_sets
                .as_ref()
                .map(|s| serde_json::to_string(s).expect("lambda sets serialize"))
                .unwrap_or_default(),
            self.timing_ms.to_string(),
        ]
    }

    pub fn from_csv_fields(fields: &[&str]) -> Result<Self, String> {
        let [input, method, value, alpha, source, sets, timing] = fields else {
            return Err(format!("expected {} fields, got {}", CSV_HEADER.len(), fields.len()));
        };
        let quoted = |s: &str| format!("\"{s}\"");
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}"));
        Ok(OutputRecord {
            input: input.to_string(),
            method: serde_json::from_str(&quoted(method)).map_err(|e| e.to_string())?,
            value: num(value)?,
            alpha: num(alpha)?,
            source: serde_json::from_str(&quoted(source)).map_err(|e| e.to_string())?,
            lambda_sets: if sets.is_empty() {
                None
            } else {
                Some(serde_json::from_str(sets).map_err(|e| e.to_string())?)
            },
            timing_ms: num(timing)?,
        })
    }
}

/// One row of a `table` listing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableRow {
    Fan {
        n: usize,
        value: f64,
        alpha: f64,
        source: Source,
    },
    Poly {
        n: usize,
        coeffs: IntPoly,
        poly: String,
    },
    Partial {
        n: usize,
        ue: IntPoly,
        uo: IntPoly,
    },
}

impl TableRow {
    pub fn fan(n: usize, value: f64, alpha: f64, source: Source) -> Self {
        TableRow::Fan {
            n,
            value: round15(value),
            alpha: round15(alpha),
            source,
        }
    }

    pub fn poly(n: usize, p: IntPoly) -> Self {
        TableRow::Poly {
            n,
            poly: p.to_string(),
            coeffs: p,
        }
    }

    pub fn header(&self) -> &'static [&'static str] {
        match self {
            TableRow::Fan { .. } => &["n", "value", "alpha", "source"],
            TableRow::Poly { .. } => &["n", "coeffs", "poly"],
            TableRow::Partial { .. } => &["n", "ue", "uo"],
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let js = |p: &IntPoly| serde_json::to_string(p).expect("polynomial serializes");
        match self {
            TableRow::Fan { n, value, alpha, source } => {
                vec![n.to_string(), value.to_string(), alpha.to_string(), source.tag().into()]
            }
            TableRow::Poly { n, coeffs, poly } => vec![n.to_string(), js(coeffs), poly.clone()],
            TableRow::Partial { n, ue, uo } => vec![n.to_string(), js(ue), js(uo)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let sets = LambdaSets {
            m: 2,
            lambda0: vec![],
            lambda1: vec![-1.5],
            lambda2: vec![],
            lambda3: vec![1.0 / 3.0],
            excluded: vec![-4.0, -2.0, -1.0, 0.0, 1.0],
        };
        OutputRecord::new(
            "join(empty:2, complete:2)".into(),
            Method::Join,
            -0.5,
            -1.5,
            Source::Lambda1,
            Some(&sets),
            0.123456789012345678,
        )
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = serde_json::to_string(&r).unwrap();
        let back: OutputRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert!(text.contains("\"source\":\"lambda1\""));
        assert!(text.contains("0.333333333333333]"));
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(CSV_HEADER).unwrap();
        w.write_record(r.to_csv_fields()).unwrap();
        let bytes = w.into_inner().unwrap();
        let mut rd = csv::Reader::from_reader(bytes.as_slice());
        let row = rd.records().next().unwrap().unwrap();
        let fields: Vec<&str> = row.iter().collect();
        assert_eq!(OutputRecord::from_csv_fields(&fields).unwrap(), r);
    }

    #[test]
    fn table_rows_serialize() {
        let row = TableRow::poly(1, IntPoly::from_i64s(&[8, 0, -6, 2]));
        assert_eq!(row.csv_fields(), vec!["1", "[8,0,-6,2]", "2x^3-6x^2+8"]);
        let text = serde_json::to_string(&row).unwrap();
        assert_eq!(text, r#"{"n":1,"coeffs":[8,0,-6,2],"poly":"2x^3-6x^2+8"}"#);
        let back: TableRow = serde_json::from_str(&text).unwrap();
        assert_eq!(back, row);
    }
}
