//! Renders hierarchies as JSON, LaTeX or plain text.
//!
//! JSON expressions use the same grammar as [`crate::diffalg::parse_scalar`],
//! so a document can be read back and re-emitted unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diffalg::{parse_scalar, ParseError, Scalar};
use crate::lenard::{HierarchyReport, HierarchyState};
use crate::poisson::PoissonParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Latex,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "latex" | "tex" => Ok(Format::Latex),
            "text" | "txt" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (json, latex, text)")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub check: String,
    pub indices: Vec<usize>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub n: usize,
    pub gradient: Vec<String>,
    pub flow: Vec<String>,
    pub density: Option<String>,
    /// Certificates filed under this index; empty when not certified.
    pub certificates: Vec<CertificateEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyDocument {
    pub case: Option<String>,
    pub h0: BTreeMap<String, String>,
    pub h1: BTreeMap<String, String>,
    /// How expressions are written: `UV-poly`, `UV-laurent-v`, or
    /// `QV-mixed` (powers of `Q0` times jets of `u, v`).
    pub chart: Option<String>,
    pub certified: Option<bool>,
    pub records: Vec<Record>,
}

fn params_map(p: &PoissonParams) -> BTreeMap<String, String> {
    p.entries().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

impl HierarchyDocument {
    pub fn empty() -> Self {
        HierarchyDocument::default()
    }

    pub fn from_state(state: &HierarchyState, report: Option<&HierarchyReport>) -> Self {
        let n = report.map_or(state.depth(), |r| r.depth);
        let chart = match state.coords.chart_map() {
            Some(_) => "QV-mixed".to_string(),
            None => state.coords.signature().chart().name().to_string(),
        };
        let records = (0..=n)
            .map(|k| Record {
                n: k,
                gradient: state.exported_gradient(k).components.iter().map(|c| c.to_string()).collect(),
                flow: state.exported_flow(k).components.iter().map(|c| c.to_string()).collect(),
                density: state.exported_density(k).map(|d| d.to_string()),
                certificates: report
                    .map(|r| {
                        r.for_index(k)
                            .into_iter()
                            .map(|c| CertificateEntry {
                                check: c.kind.name().to_string(),
                                indices: c.indices.clone(),
                                passed: c.passed,
                                detail: c.detail.clone(),
                            })
                            .collect()
                    })
                    .unwrap_or_default(),
            })
            .collect();
        HierarchyDocument {
            case: Some(state.case.name().to_string()),
            h0: params_map(&state.params0),
            h1: params_map(&state.params1),
            chart: Some(chart),
            certified: report.map(|r| r.passed()),
            records,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Reads a document back, checking that every expression parses.
    /// Expressions are stored in canonical form.
    pub fn from_json(src: &str) -> Result<Self, DocumentError> {
        let mut doc: HierarchyDocument = serde_json::from_str(src).map_err(|e| DocumentError::Json(e.to_string()))?;
        let canon = |s: &mut String| -> Result<(), DocumentError> {
            *s = parse_scalar(s).map_err(|e| DocumentError::Expression(s.clone(), e))?.to_string();
            Ok(())
        };
        for v in doc.h0.values_mut().chain(doc.h1.values_mut()) {
            canon(v)?;
        }
        for r in &mut doc.records {
            for s in r.gradient.iter_mut().chain(r.flow.iter_mut()).chain(r.density.iter_mut()) {
                canon(s)?;
            }
        }
        Ok(doc)
    }

    fn parsed(s: &str) -> Scalar {
        parse_scalar(s).expect("documents hold parsed expressions")
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        if let Some(case) = &self.case {
            let _ = writeln!(out, "% case {case}, chart {}", self.chart.as_deref().unwrap_or("-"));
        }
        for r in &self.records {
            let n = r.n;
            let pair = |v: &[String]| -> String {
                let parts: Vec<String> = v.iter().map(|s| Self::parsed(s).latex()).collect();
                format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", parts.join(" \\\\ "))
            };
            let _ = writeln!(out, "\\begin{{align*}}");
            let _ = writeln!(out, "F_{{{n}}} &= {} \\\\", pair(&r.gradient));
            let _ = write!(
                out,
                "\\frac{{d}}{{dt_{{{n}}}}}\\begin{{pmatrix}} u \\\\ v \\end{{pmatrix}} &= {}",
                pair(&r.flow)
            );
            match &r.density {
                Some(h) => {
                    let _ = writeln!(out, " \\\\\nh_{{{n}}} &= {}", Self::parsed(h).latex());
                }
                None => out.push('\n'),
            }
            let _ = writeln!(out, "\\end{{align*}}");
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.case {
            Some(case) => {
                let _ = writeln!(out, "case {case} ({})", self.chart.as_deref().unwrap_or("-"));
                let fmt = |m: &BTreeMap<String, String>| {
                    m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
                };
                let _ = writeln!(out, "H0: {}", fmt(&self.h0));
                let _ = writeln!(out, "H1: {}", fmt(&self.h1));
            }
            None => out.push_str("empty hierarchy\n"),
        }
        for r in &self.records {
            let _ = writeln!(out, "\nn = {}", r.n);
            let _ = writeln!(out, "  F = ({})", r.gradient.join(", "));
            let _ = writeln!(out, "  P = ({})", r.flow.join(", "));
            let _ = writeln!(out, "  h = {}", r.density.as_deref().unwrap_or("(not reconstructed)"));
            for c in &r.certificates {
                let idx: Vec<String> = c.indices.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(
                    out,
                    "  {} [{}] {}{}",
                    c.check,
                    idx.join(","),
                    if c.passed { "ok" } else { "FAILED" },
                    if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
                );
            }
        }
        if let Some(ok) = self.certified {
            let _ = writeln!(out, "\ncertified: {}", if ok { "all checks pass" } else { "FAILURES" });
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Latex => self.to_latex(),
            Format::Text => self.to_text(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("expression `{0}` does not parse: {1}")]
    Expression(String, ParseError),
}
