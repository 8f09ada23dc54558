//! Result persistence: versioned JSON records and locale-independent CSV.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// One persisted run: config echo plus named outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    pub subcommand: String,
    pub config: Value,
    pub outputs: Value,
    pub wall_ms: f64,
    pub version: String,
}

impl ResultRecord {
    pub fn new(subcommand: &str, config: Value, outputs: Value, wall_ms: f64) -> ResultRecord {
        ResultRecord {
            schema: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            config,
            outputs,
            wall_ms,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serialization cannot fail")
    }

    pub fn parse(s: &str) -> Result<ResultRecord, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A real formatted with 17 significant digits, locale-independent.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV row from mixed string/real cells.
pub fn csv_row(cells: &[String]) -> String {
    cells.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let r = ResultRecord::new(
            "eval",
            json!({"d": 3, "n": 1000}),
            json!({"magnitude": 31.5, "re": -3.25}),
            12.5,
        );
        let back = ResultRecord::parse(&r.emit()).unwrap();
        assert_eq!(r, back);
        assert_eq!(back.schema, 1);
    }

    #[test]
    fn csv_formatting_is_exact() {
        let s = fmt_real(0.1);
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, 0.1);
        assert!(!s.contains(','));
    }
}
