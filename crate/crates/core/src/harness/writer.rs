//! CSV, JSON and per-quantity data files for a finished sweep.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use super::{HarnessError, Row};
use crate::report::fmt_f64;

pub const CSV_HEADER: [&str; 9] = [
    "p",
    "suite",
    "quantity",
    "value",
    "rhs",
    "ratio",
    "pass",
    "paper_tag",
    "params",
];

fn pass_text(pass: Option<bool>) -> &'static str {
    match pass {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

fn record(row: &Row) -> [String; 9] {
    let c = &row.check;
    [
        c.p.to_string(),
        row.suite.clone(),
        c.quantity.clone(),
        c.value.to_string(),
        fmt_f64(c.rhs),
        fmt_f64(c.ratio),
        pass_text(c.pass).to_string(),
        c.tag.clone(),
        c.params.clone(),
    ]
}

/// The CSV text, preceded by `# generated_at=<t>` when a timestamp is given.
pub fn render_csv(rows: &[Row], timestamp: Option<&str>) -> Result<Vec<u8>, HarnessError> {
    let mut buf = Vec::new();
    if let Some(t) = timestamp {
        buf.extend_from_slice(format!("# generated_at={t}\n").as_bytes());
    }
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(CSV_HEADER)?;
        for row in rows {
            w.write_record(record(row))?;
        }
        w.flush()?;
    }
    Ok(buf)
}

/// The JSON mirror: every field a string.
pub fn render_json(rows: &[Row], timestamp: Option<&str>) -> Result<Vec<u8>, HarnessError> {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let map: serde_json::Map<String, Value> = CSV_HEADER
                .iter()
                .zip(record(row))
                .map(|(k, v)| (k.to_string(), Value::String(v)))
                .collect();
            Value::Object(map)
        })
        .collect();
    let doc = match timestamp {
        Some(t) => json!({ "generated_at": t, "rows": rows }),
        None => json!({ "rows": rows }),
    };
    let mut out = serde_json::to_vec_pretty(&doc)?;
    out.push(b'\n');
    Ok(out)
}

/// `<suite>.<quantity>.dat` -> "p ratio" lines.
pub fn render_data_files(rows: &[Row]) -> BTreeMap<String, String> {
    let mut files: BTreeMap<String, String> = BTreeMap::new();
    for row in rows {
        let name = format!("{}.{}.dat", row.suite, row.check.quantity);
        let body = files
            .entry(name)
            .or_insert_with(|| format!("# {} {}: p ratio\n", row.suite, row.check.quantity));
        body.push_str(&format!("{} {}\n", row.check.p, fmt_f64(row.check.ratio)));
    }
    files
}

/// Writes report.csv, report.json and data/*.dat under `dir`.
pub fn write_reports(
    dir: &Path,
    rows: &[Row],
    timestamp: Option<&str>,
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir.join("data"))?;
    fs::write(dir.join("report.csv"), render_csv(rows, timestamp)?)?;
    fs::write(dir.join("report.json"), render_json(rows, timestamp)?)?;
    for (name, body) in render_data_files(rows) {
        fs::write(dir.join("data").join(name), body)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::BoundCheck;

    fn rows() -> Vec<Row> {
        vec![
            Row {
                suite: "weil".into(),
                check: BoundCheck::upper(7, "q", 1, 4.5, "t").with_params("k=1;shifts=1"),
            },
            Row {
                suite: "gaps".into(),
                check: BoundCheck::report(7, "d", 2, 3.0, "t").with_params("a=(1,2)"),
            },
        ]
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(render_csv(&rows(), None).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "p,suite,quantity,value,rhs,ratio,pass,paper_tag,params"
        );
        assert_eq!(
            lines[1],
            "7,weil,q,1,4.5,0.2222222222222222,true,t,k=1;shifts=1"
        );
        assert_eq!(lines[2], "7,gaps,d,2,3,0.6666666666666666,,t,\"a=(1,2)\"");
        let stamped = String::from_utf8(render_csv(&[], Some("123")).unwrap()).unwrap();
        assert_eq!(
            stamped,
            "# generated_at=123\np,suite,quantity,value,rhs,ratio,pass,paper_tag,params\n"
        );
    }

    #[test]
    fn json_uses_strings() {
        let doc: Value = serde_json::from_slice(&render_json(&rows(), None).unwrap()).unwrap();
        assert!(doc.get("generated_at").is_none());
        let first = &doc["rows"][0];
        assert_eq!(first["value"], Value::String("1".into()));
        assert_eq!(first["pass"], Value::String("true".into()));
        assert_eq!(doc["rows"][1]["pass"], Value::String(String::new()));
    }

    #[test]
    fn data_files_group_by_quantity() {
        let files = render_data_files(&rows());
        assert_eq!(files.len(), 2);
        assert!(files["weil.q.dat"].ends_with("7 0.2222222222222222\n"));
    }
}
