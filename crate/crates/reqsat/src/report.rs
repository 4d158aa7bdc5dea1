//! Analysis report assembly and rendering.
//!
//! The JSON form is the machine interface (CI gates parse it, and the
//! service returns it); the HTML form mirrors the reviewer-facing
//! four-column table: Requirement1 | Requirement2 | Result | Inference.
//! Both renderings are pure functions of the report value (timestamps
//! are injected by the caller), so identical reports produce identical
//! bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use reqsat_core::analysis::{CorpusAnalysis, Inference, PairOutcome};
use reqsat_core::ast::Requirement;
use reqsat_core::encode::{Diagnostic, EncodedRequirement, SymbolTable};
use reqsat_core::parser::render_requirement;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub generated_at: String,
    pub corpus: Vec<String>,
    pub summary: Summary,
    pub results: Vec<ResultRow>,
    pub symbols: BTreeMap<String, SymbolEntry>,
    pub diagnostics: Vec<DiagnosticRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub comparisons: usize,
    pub contradictions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub req1: ReqRef,
    pub req2: ReqRef,
    pub result: ResultKind,
    pub inference: InferenceKind,
    /// Witnessing assignment keyed `data=value`; absent on
    /// contradictions.
    pub model: Option<BTreeMap<String, bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReqRef {
    pub id: String,
    pub text: String,
    pub logic: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ResultKind {
    Ok,
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InferenceKind {
    Direct,
    Syllogism { chain: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolEntry {
    pub data: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub severity: String,
    pub requirement: String,
    pub message: String,
}

impl From<&Diagnostic> for DiagnosticRow {
    fn from(d: &Diagnostic) -> Self {
        DiagnosticRow {
            severity: d.severity.to_string(),
            requirement: d.requirement.clone(),
            message: d.message.clone(),
        }
    }
}

/// Assemble the report. `reqs` and `encoded` run in parallel; derived
/// requirements have no source text, so both their text and logic
/// columns show the implication notation.
pub fn build_report(
    generated_at: impl Into<String>,
    corpus: Vec<String>,
    reqs: &[Requirement],
    encoded: &[EncodedRequirement],
    analysis: &CorpusAnalysis,
    symbols: &SymbolTable,
    diagnostics: &[Diagnostic],
) -> AnalysisReport {
    let mut refs: BTreeMap<&str, ReqRef> = BTreeMap::new();
    for (req, enc) in reqs.iter().zip(encoded) {
        refs.insert(
            enc.id.as_str(),
            ReqRef {
                id: enc.id.clone(),
                text: render_requirement(req).trim_end().to_string(),
                logic: enc.notation(symbols),
            },
        );
    }
    for derived in &analysis.derived {
        let notation = derived.req.notation(symbols);
        refs.insert(
            derived.req.id.as_str(),
            ReqRef {
                id: derived.req.id.clone(),
                text: notation.clone(),
                logic: notation,
            },
        );
    }

    let results: Vec<ResultRow> = analysis
        .comparisons
        .iter()
        .map(|c| ResultRow {
            req1: refs[c.left_id.as_str()].clone(),
            req2: refs[c.right_id.as_str()].clone(),
            result: match c.verdict.outcome {
                PairOutcome::Ok => ResultKind::Ok,
                PairOutcome::Contradiction => ResultKind::Contradiction,
            },
            inference: match &c.verdict.inference {
                Inference::Direct => InferenceKind::Direct,
                Inference::Syllogism { chain } => InferenceKind::Syllogism {
                    chain: chain.clone(),
                },
            },
            model: c.verdict.model.as_ref().map(|m| {
                m.assignment
                    .iter()
                    .map(|(atom, v)| (atom.key(), *v))
                    .collect()
            }),
        })
        .collect();

    AnalysisReport {
        generated_at: generated_at.into(),
        corpus,
        summary: Summary {
            comparisons: results.len(),
            contradictions: analysis.contradictions(),
        },
        results,
        symbols: symbols
            .entries()
            .map(|(letter, atom)| {
                (
                    letter.to_string(),
                    SymbolEntry {
                        data: atom.data.clone(),
                        value: atom.value.clone(),
                    },
                )
            })
            .collect(),
        diagnostics: diagnostics.iter().map(DiagnosticRow::from).collect(),
    }
}

/// Deterministic, key-sorted JSON; [`parse_json`] inverts it.
pub fn render_json(report: &AnalysisReport) -> String {
    // Going through Value sorts object keys (serde_json maps are
    // BTree-backed), making the bytes independent of field order.
    let value = serde_json::to_value(report).expect("report serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value prints");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> serde_json::Result<AnalysisReport> {
    serde_json::from_str(text)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn cell(text: &str) -> String {
    escape(text).replace('\n', "<br>")
}

const CELL_STYLE: &str = "border:1px solid #999;padding:6px 8px;vertical-align:top;\
                          font-family:monospace;white-space:normal";

/// Self-contained HTML document (inline styles, no scripts, no
/// external assets).
pub fn render_html(report: &AnalysisReport) -> String {
    let mut rows = String::new();
    for row in &report.results {
        let (result_text, result_color) = match row.result {
            ResultKind::Ok => ("OK", "#2e7d32"),
            ResultKind::Contradiction => ("CONTRADICTION", "#c62828"),
        };
        let inference = match &row.inference {
            InferenceKind::Direct => "no inference".to_string(),
            InferenceKind::Syllogism { chain } => format!("via {}", chain.join(" → ")),
        };
        rows.push_str(&format!(
            "<tr>\
             <td style=\"{CELL_STYLE}\">{}</td>\
             <td style=\"{CELL_STYLE}\">{}</td>\
             <td style=\"{CELL_STYLE};color:{result_color};font-weight:bold\">{result_text}</td>\
             <td style=\"{CELL_STYLE}\">{}</td>\
             </tr>\n",
            cell(&format!(
                "ID:{}\n{}",
                row.req1.id,
                strip_id_line(&row.req1.text)
            )),
            cell(&format!(
                "ID:{}\n{}",
                row.req2.id,
                strip_id_line(&row.req2.text)
            )),
            cell(&inference),
        ));
    }

    let mut symbol_rows = String::new();
    for (letter, entry) in &report.symbols {
        symbol_rows.push_str(&format!(
            "<tr><td style=\"{CELL_STYLE}\">{}</td>\
             <td style=\"{CELL_STYLE}\">{}</td>\
             <td style=\"{CELL_STYLE}\">{}</td></tr>\n",
            cell(letter),
            cell(&entry.data),
            cell(&entry.value),
        ));
    }

    let mut diagnostics = String::new();
    if !report.diagnostics.is_empty() {
        diagnostics.push_str("<h2>Diagnostics</h2>\n<ul>\n");
        for d in &report.diagnostics {
            diagnostics.push_str(&format!(
                "<li><b>{}</b> {}: {}</li>\n",
                cell(&d.severity),
                cell(&d.requirement),
                cell(&d.message),
            ));
        }
        diagnostics.push_str("</ul>\n");
    }

    format!(
        "<!DOCTYPE html>\n\
         <html lang=\"en\">\n\
         <head>\n\
         <meta charset=\"utf-8\">\n\
         <title>Contradiction Analysis Report</title>\n\
         </head>\n\
         <body style=\"font-family:sans-serif;margin:2em;color:#222\">\n\
         <h1>Contradiction Analysis Report</h1>\n\
         <p>Generated at {generated}; corpus: {corpus}</p>\n\
         <p><b>{comparisons} comparisons, {contradictions} contradictions</b></p>\n\
         <table style=\"border-collapse:collapse\">\n\
         <thead><tr>\
         <th style=\"{CELL_STYLE};background:#eee\">Requirement1</th>\
         <th style=\"{CELL_STYLE};background:#eee\">Requirement2</th>\
         <th style=\"{CELL_STYLE};background:#eee\">Result</th>\
         <th style=\"{CELL_STYLE};background:#eee\">Inference</th>\
         </tr></thead>\n\
         <tbody>\n{rows}</tbody>\n\
         </table>\n\
         <h2>Symbols</h2>\n\
         <table style=\"border-collapse:collapse\">\n\
         <thead><tr>\
         <th style=\"{CELL_STYLE};background:#eee\">Symbol</th>\
         <th style=\"{CELL_STYLE};background:#eee\">Data</th>\
         <th style=\"{CELL_STYLE};background:#eee\">Value</th>\
         </tr></thead>\n\
         <tbody>\n{symbol_rows}</tbody>\n\
         </table>\n\
         {diagnostics}\
         </body>\n\
         </html>\n",
        generated = cell(&report.generated_at),
        corpus = cell(&report.corpus.join(", ")),
        comparisons = report.summary.comparisons,
        contradictions = report.summary.contradictions,
    )
}

/// Requirement texts already begin with their `ID:` line; drop it so
/// the table cell can show the ID uniformly (derived requirements have
/// notation-only text).
fn strip_id_line(text: &str) -> &str {
    match text.strip_prefix("ID:") {
        Some(rest) => match rest.split_once('\n') {
            Some((_, body)) => body,
            None => rest,
        },
        None => text,
    }
}
