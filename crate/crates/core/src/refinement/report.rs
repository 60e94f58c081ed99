use std::io::Write;

use crate::error::Result;
use crate::io::fmt_f64;
use crate::random_space::ElementId;

/// Outcome for one element at a check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Keep,
    /// Bisected along these 0-based dimensions.
    Split(Vec<usize>),
    /// Triggered but blocked by a guard.
    Skipped(String),
}

impl Decision {
    fn label(&self) -> String {
        match self {
            Decision::Keep => "keep".into(),
            Decision::Split(dims) => {
                let dims: Vec<String> = dims.iter().map(|d| (d + 1).to_string()).collect();
                format!("split:{}", dims.join("+"))
            }
            Decision::Skipped(reason) => format!("skip:{reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub element: ElementId,
    pub probability: f64,
    /// `𝐐` before weighting.
    pub q_total: f64,
    /// The weighted value compared with `TOL1`.
    pub q_hat: f64,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub decision: Decision,
}

/// Indicator values and decisions taken at one check time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RefinementReport {
    pub time: f64,
    pub rows: Vec<ReportRow>,
    pub warnings: Vec<String>,
}

impl RefinementReport {
    pub fn splits(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.decision, Decision::Split(_)))
            .count()
    }

    pub fn csv_header(dim: usize) -> String {
        let mut cols = vec![
            "time".to_string(),
            "element".into(),
            "probability".into(),
            "q_hat".into(),
        ];
        cols.extend((1..=dim).map(|i| format!("s1_{i}")));
        cols.extend((1..=dim).map(|i| format!("s2_{i}")));
        cols.push("decision".into());
        cols.join(",")
    }

    /// Appends one line per element; no header.
    pub fn write_rows<W: Write>(&self, mut w: W) -> Result<()> {
        for row in &self.rows {
            let mut cols = vec![
                fmt_f64(self.time),
                row.element.to_string(),
                fmt_f64(row.probability),
                fmt_f64(row.q_hat),
            ];
            cols.extend(row.s1.iter().map(|&v| fmt_f64(v)));
            cols.extend(row.s2.iter().map(|&v| fmt_f64(v)));
            cols.push(row.decision.label());
            writeln!(w, "{}", cols.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let report = RefinementReport {
            time: 0.5,
            rows: vec![ReportRow {
                element: ElementId(3),
                probability: 0.25,
                q_total: 2.0,
                q_hat: 0.5,
                s1: vec![1.0, 0.0],
                s2: vec![1.0, 0.5],
                decision: Decision::Split(vec![0, 1]),
            }],
            warnings: vec![],
        };
        let mut buf = Vec::new();
        report.write_rows(&mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert!(line.starts_with("5.0000000000000000e-1,3,"));
        assert!(line.trim_end().ends_with(",split:1+2"));
        assert_eq!(
            line.split(',').count(),
            RefinementReport::csv_header(2).split(',').count()
        );
        assert_eq!(report.splits(), 1);
    }
}
