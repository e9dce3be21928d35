//! Reading and writing correlation tables.
//!
//! CSV rows are `row,col,value,measurable` for two outputs and
//! `out1,…,outN,value,measurable` otherwise, keyed by waveguide label. Reals
//! are written with 17 significant digits so files are reproducible byte for
//! byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyonic_core::CorrelationMatrix;
use serde::{Deserialize, Serialize};

use crate::config::NamedPhase;
use crate::error::{CliError, Result};

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(order: usize) -> String {
    if order == 2 {
        "row,col,value,measurable".to_string()
    } else {
        let mut cols: Vec<String> = (1..=order).map(|i| format!("out{i}")).collect();
        cols.push("value".into());
        cols.push("measurable".into());
        cols.join(",")
    }
}

/// A correlation matrix together with the waveguide labels and full-array
/// indices of its modes.
pub struct LabelledTable<'a> {
    pub matrix: &'a CorrelationMatrix,
    pub labels: &'a [i64],
    pub indices: &'a [usize],
    pub input_labels: &'a [i64],
    pub phase: Option<&'a NamedPhase>,
}

impl LabelledTable<'_> {
    fn key(&self, tuple: &[usize]) -> Vec<i64> {
        tuple.iter().map(|&p| self.labels[p]).collect()
    }

    /// One CSV line per ordered tuple, with `values` in storage order.
    pub fn to_csv(&self, values: &[String]) -> String {
        let mut out = header(self.matrix.order());
        out.push('\n');
        for (i, (t, _, m)) in self.matrix.entries().enumerate() {
            for l in self.key(&t) {
                out.push_str(&l.to_string());
                out.push(',');
            }
            out.push_str(&values[i]);
            out.push(',');
            out.push_str(if m { "true" } else { "false" });
            out.push('\n');
        }
        out
    }

    pub fn raw_csv(&self) -> String {
        let v: Vec<String> = self.matrix.values().iter().map(|&x| fmt_real(x)).collect();
        self.to_csv(&v)
    }

    pub fn normalized_csv(&self) -> String {
        let v: Vec<String> = self
            .matrix
            .normalized_values()
            .iter()
            .map(|&x| fmt_real(x))
            .collect();
        self.to_csv(&v)
    }

    pub fn structured(&self) -> String {
        let norm = self.matrix.normalized_values();
        let doc = StructuredTable {
            order: self.matrix.order(),
            phase: self.phase.map(|p| PhaseDoc {
                label: p.label.clone(),
                radians: p.phase.radians(),
            }),
            inputs: ModesDoc {
                labels: self.input_labels.to_vec(),
                indices: None,
            },
            window: ModesDoc {
                labels: self.labels.to_vec(),
                indices: Some(self.indices.to_vec()),
            },
            total: self.matrix.total(),
            measurable_total: self.matrix.measurable_total(),
            entries: self
                .matrix
                .entries()
                .enumerate()
                .map(|(i, (t, v, m))| EntryDoc {
                    labels: self.key(&t),
                    value: v,
                    normalized: Some(norm[i]),
                    measurable: m,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize)]
struct PhaseDoc {
    label: String,
    radians: f64,
}

#[derive(Serialize, Deserialize)]
struct ModesDoc {
    labels: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indices: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    labels: Vec<i64>,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<f64>,
    measurable: bool,
}

#[derive(Serialize, Deserialize)]
struct StructuredTable {
    order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase: Option<PhaseDoc>,
    inputs: ModesDoc,
    window: ModesDoc,
    total: f64,
    measurable_total: f64,
    entries: Vec<EntryDoc>,
}

/// Entries read back from either file format, keyed by label tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub order: usize,
    pub entries: BTreeMap<Vec<i64>, (f64, bool)>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Table> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        let parsed = if is_json {
            Self::parse_structured(&text)
        } else {
            Self::parse_csv(&text)
        };
        parsed.map_err(|message| CliError::Config {
            field: Some(path.display().to_string()),
            message,
        })
    }

    pub fn parse_structured(text: &str) -> std::result::Result<Table, String> {
        let doc: StructuredTable = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut entries = BTreeMap::new();
        for e in doc.entries {
            if e.labels.len() != doc.order {
                return Err(format!("entry {:?} does not have {} labels", e.labels, doc.order));
            }
            if entries.insert(e.labels.clone(), (e.value, e.measurable)).is_some() {
                return Err(format!("entry {:?} repeated", e.labels));
            }
        }
        Ok(Table {
            order: doc.order,
            entries,
        })
    }

    pub fn parse_csv(text: &str) -> std::result::Result<Table, String> {
        let mut lines = text.lines().enumerate();
        let (_, head) = lines.next().ok_or("empty file")?;
        let cols: Vec<&str> = head.split(',').map(str::trim).collect();
        if cols.len() < 3 || cols[cols.len() - 2] != "value" || cols[cols.len() - 1] != "measurable" {
            return Err(format!("unexpected header `{head}`"));
        }
        let order = cols.len() - 2;
        let mut entries = BTreeMap::new();
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let err = |m: String| format!("line {}: {m}", n + 1);
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != cols.len() {
                return Err(err(format!("expected {} fields", cols.len())));
            }
            let key = f[..order]
                .iter()
                .map(|s| s.parse::<i64>().map_err(|e| err(format!("label `{s}`: {e}"))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let value = f[order]
                .parse::<f64>()
                .map_err(|e| err(format!("value `{}`: {e}", f[order])))?;
            let measurable = match f[order + 1] {
                "true" | "1" => true,
                "false" | "0" => false,
                other => return Err(err(format!("measurable flag `{other}`"))),
            };
            if entries.insert(key.clone(), (value, measurable)).is_some() {
                return Err(err(format!("entry {key:?} repeated")));
            }
        }
        Ok(Table { order, entries })
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CorrelationMatrix {
        CorrelationMatrix::new(2, 2, vec![0, 1], None, vec![0.5, 0.25, 0.0, 1.0 / 3.0])
            .unwrap()
            .with_mask(vec![true, false, true, true])
            .unwrap()
    }

    #[test]
    fn csv_layout() {
        let m = sample();
        let t = LabelledTable {
            matrix: &m,
            labels: &[-1, 0],
            indices: &[4, 5],
            input_labels: &[-1, 0],
            phase: None,
        };
        let csv = t.raw_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("row,col,value,measurable"));
        assert_eq!(lines.next(), Some("-1,-1,5.0000000000000000e-1,true"));
        assert_eq!(lines.next(), Some("-1,0,2.5000000000000000e-1,false"));
        assert_eq!(lines.next(), Some("0,-1,0.0000000000000000e0,true"));
        assert_eq!(lines.next(), Some("0,0,3.3333333333333331e-1,true"));
    }

    #[test]
    fn both_formats_read_back() {
        let m = sample();
        let t = LabelledTable {
            matrix: &m,
            labels: &[-1, 0],
            indices: &[4, 5],
            input_labels: &[-1, 0],
            phase: None,
        };
        let a = Table::parse_csv(&t.raw_csv()).unwrap();
        let b = Table::parse_structured(&t.structured()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries[&vec![-1, 0]], (0.25, false));
        assert_eq!(a.entries[&vec![0, 0]].0, 1.0 / 3.0);
    }

    #[test]
    fn higher_order_header() {
        assert_eq!(header(3), "out1,out2,out3,value,measurable");
        let t = Table::parse_csv("out1,out2,out3,value,measurable\n1,2,3,0.5,true\n").unwrap();
        assert_eq!(t.order, 3);
    }

    #[test]
    fn malformed_csv() {
        assert!(Table::parse_csv("a,b\n").is_err());
        assert!(Table::parse_csv("row,col,value,measurable\n1,2,x,true\n").is_err());
        assert!(Table::parse_csv("row,col,value,measurable\n1,2,0.1,maybe\n").is_err());
        assert!(Table::parse_csv("row,col,value,measurable\n1,2,0.1,true\n1,2,0.3,true\n").is_err());
    }
}
