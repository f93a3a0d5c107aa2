//! Report serialization: JSON, CSV and LaTeX.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use super::{Experiment, ExperimentReport, HarnessError};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Latex,
}

impl FromStr for Format {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "latex" | "tex" => Ok(Self::Latex),
            other => Err(HarnessError::Usage(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Latex => "latex",
        })
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Bool(bool),
    /// An element, by the node labels of its canonical word.
    Word(Vec<u32>),
    Poly(LaurentPoly),
    /// `Σ c_x m'_x`, listed from the top element down.
    Mprime(Vec<(Vec<u32>, LaurentPoly)>),
}

/// The tabular view of a report, shared by the CSV and LaTeX exporters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn word_plain(w: &[u32]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|l| format!("s{l}")).collect()
    }
}

fn word_latex(w: &[u32]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|l| format!("s_{{{l}}}")).collect()
    }
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Word(w) => word_plain(w),
            Cell::Poly(p) if p.is_zero() => String::new(),
            Cell::Poly(p) => p.to_plain_string(),
            Cell::Mprime(terms) => terms
                .iter()
                .map(|(w, c)| {
                    if c.is_one() {
                        format!("m'[{}]", word_plain(w))
                    } else {
                        format!("({}) m'[{}]", c.to_plain_string(), word_plain(w))
                    }
                })
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    fn latex(&self) -> String {
        match self {
            Cell::Text(s) => s.replace('_', "\\_"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Word(w) => format!("${}$", word_latex(w)),
            Cell::Poly(p) if p.is_zero() => String::new(),
            Cell::Poly(p) => format!("${}$", p.to_latex()),
            Cell::Mprime(terms) => {
                let body: Vec<String> = terms
                    .iter()
                    .map(|(w, c)| {
                        let basis = format!("m'_{{{}}}", word_latex(w));
                        if c.is_one() {
                            basis
                        } else if c.num_terms() == 1 {
                            format!("{} {basis}", c.to_latex())
                        } else {
                            format!("({}) {basis}", c.to_latex())
                        }
                    })
                    .collect();
                format!("${}$", body.join(" + "))
            }
        }
    }
}

impl Table {
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut out = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| HarnessError::Io(e.to_string());
        out.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::plain)).map_err(io)?;
        }
        let bytes = out.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_latex(&self) -> String {
        let spec = "l".repeat(self.columns.len().max(1));
        let mut out = format!("\\begin{{tabular}}{{{spec}}}\n");
        let header: Vec<String> = self.columns.iter().map(|c| c.replace('_', "\\_")).collect();
        out.push_str(&format!("{} \\\\\n\\hline\n", header.join(" & ")));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::latex).collect();
            out.push_str(&format!("{} \\\\\n", cells.join(" & ")));
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

/// The report as JSON, without timing, so repeated runs are byte-identical.
pub fn report_json(report: &ExperimentReport) -> Value {
    serde_json::json!({
        "experiment": report.experiment,
        "graph": report.graph,
        "cap": report.cap,
        "verdict": {
            "claim": report.verdict.claim,
            "expected": report.verdict.expected,
            "holds": report.verdict.holds,
            "matches": report.verdict.matches(),
        },
        "result": report.payload,
    })
}

pub fn export(report: &ExperimentReport, format: Format) -> Result<String, HarnessError> {
    match format {
        Format::Json if report.experiment == Experiment::Group => {
            // One object per element, as JSON lines.
            let rows = report.payload["elements"].as_array().cloned().unwrap_or_default();
            Ok(rows.iter().map(|r| format!("{r}\n")).collect())
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_json(report)).expect("serializable");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => report.table.to_csv(),
        Format::Latex => Ok(report.table.to_latex()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_blanks() {
        let t = Table {
            columns: vec!["w".into(), "p".into()],
            rows: vec![
                vec![Cell::Word(vec![1, 2]), Cell::Poly(LaurentPoly::zero())],
                vec![Cell::Text("a,b".into()), Cell::Poly(LaurentPoly::q_c())],
            ],
        };
        assert_eq!(t.to_csv().unwrap(), "w,p\ns1s2,\n\"a,b\",v^-1 + v\n");
    }

    #[test]
    fn latex_cells() {
        let t = Table {
            columns: vec!["w".into(), "c_w".into()],
            rows: vec![vec![
                Cell::Word(vec![1]),
                Cell::Mprime(vec![(vec![1], LaurentPoly::one()), (vec![], LaurentPoly::v_pow(-1))]),
            ]],
        };
        assert_eq!(
            t.to_latex(),
            "\\begin{tabular}{ll}\nw & c\\_w \\\\\n\\hline\n$s_{1}$ & $m'_{s_{1}} + v^{-1} m'_{e}$ \\\\\n\\end{tabular}\n"
        );
    }
}
