//! Stateless HTTP front end: satisfiability checks over the canonical
//! expression notation and full corpus analysis.
//!
//! * `POST /sat`: conjoin the submitted expressions and solve.
//! * `POST /analyze`: dictionary + requirements in, JSON report out.
//! * `GET /health`: liveness and build version.
//!
//! No request mutates server state; identical requests get identical
//! responses (up to the report timestamp when none is pinned).

use std::collections::BTreeMap;

use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use reqsat_core::analysis::{analyze_corpus, AnalysisOptions};
use reqsat_core::dict::parse_dictionary;
use reqsat_core::encode::{encode, validate_against_dictionary, Severity, Strictness, SymbolTable};
use reqsat_core::logic::{is_satisfiable, parse_expr, BoolExpr};
use reqsat_core::parser::parse_requirements;

use crate::report::build_report;

/// Reject conjunctions with more than this many atom occurrences.
pub const MAX_SAT_ATOMS: usize = 10_000;

pub fn router() -> Router {
    Router::new()
        .route("/sat", post(handle_sat))
        .route("/analyze", post(handle_analyze))
        .route("/health", get(handle_health))
}

pub async fn serve(port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router()).await?;
    Ok(())
}

#[derive(Debug, Deserialize)]
pub struct SatRequest {
    /// Expressions in canonical notation; their conjunction is checked.
    pub expressions: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SatResponse {
    pub satisfiable: bool,
    pub model: Option<BTreeMap<String, bool>>,
    pub contradiction: bool,
}

#[derive(Debug, Deserialize)]
pub struct AnalyzeRequest {
    pub dictionary: String,
    pub requirements: String,
    #[serde(default)]
    pub options: AnalyzeOptions,
}

#[derive(Debug, Deserialize)]
#[serde(default)]
pub struct AnalyzeOptions {
    pub syllogism_depth: u32,
    pub domain_axioms: bool,
    pub lenient: bool,
    pub timestamp: Option<String>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            syllogism_depth: 1,
            domain_axioms: false,
            lenient: false,
            timestamp: None,
        }
    }
}

fn bad_request(message: String) -> Response {
    (StatusCode::BAD_REQUEST, Json(json!({ "error": message }))).into_response()
}

async fn handle_sat(body: Result<Json<SatRequest>, JsonRejection>) -> Response {
    let Json(request) = match body {
        Ok(body) => body,
        Err(rejection) => return bad_request(format!("invalid request body: {rejection}")),
    };
    if request.expressions.is_empty() {
        return bad_request("at least one expression is required".to_string());
    }

    let mut parsed: Vec<BoolExpr> = Vec::with_capacity(request.expressions.len());
    for (i, text) in request.expressions.iter().enumerate() {
        match parse_expr(text) {
            Ok(expr) => parsed.push(expr),
            Err(e) => return bad_request(format!("expression {}: {e}", i + 1)),
        }
    }
    let total_atoms: usize = parsed.iter().map(BoolExpr::atom_occurrences).sum();
    if total_atoms > MAX_SAT_ATOMS {
        return (
            StatusCode::PAYLOAD_TOO_LARGE,
            Json(json!({
                "error": format!("expression too large: {total_atoms} atoms (limit {MAX_SAT_ATOMS})")
            })),
        )
            .into_response();
    }

    let conjunction = BoolExpr::and(parsed);
    let model = is_satisfiable(&conjunction);
    let satisfiable = model.is_some();
    let response = SatResponse {
        satisfiable,
        model: model.map(|m| {
            m.assignment
                .iter()
                .map(|(atom, v)| (atom.data.clone(), *v))
                .collect()
        }),
        contradiction: !satisfiable,
    };
    (StatusCode::OK, Json(response)).into_response()
}

async fn handle_analyze(body: Result<Json<AnalyzeRequest>, JsonRejection>) -> Response {
    let Json(request) = match body {
        Ok(body) => body,
        Err(rejection) => return bad_request(format!("invalid request body: {rejection}")),
    };

    let dict = match parse_dictionary(&request.dictionary) {
        Ok(dict) => dict,
        Err(e) => return (
            StatusCode::BAD_REQUEST,
            Json(json!({
                "error": "dictionary does not parse",
                "diagnostics": [{"severity": "error", "requirement": "", "message": e.to_string()}],
            })),
        )
            .into_response(),
    };
    let reqs = match parse_requirements(&request.requirements) {
        Ok(reqs) => reqs,
        Err(e) => return (
            StatusCode::BAD_REQUEST,
            Json(json!({
                "error": "requirements do not parse",
                "diagnostics": [{"severity": "error", "requirement": "", "message": e.to_string()}],
            })),
        )
            .into_response(),
    };

    let mut diagnostics: Vec<_> = reqs
        .iter()
        .flat_map(|r| validate_against_dictionary(r, &dict))
        .collect();
    let strictness = if request.options.lenient {
        for diag in &mut diagnostics {
            diag.severity = Severity::Warning;
        }
        Strictness::Lenient
    } else if diagnostics.is_empty() {
        Strictness::Strict
    } else {
        let rows: Vec<_> = diagnostics
            .iter()
            .map(|d| {
                json!({
                    "severity": d.severity.to_string(),
                    "requirement": d.requirement,
                    "message": d.message,
                })
            })
            .collect();
        return (
            StatusCode::UNPROCESSABLE_ENTITY,
            Json(json!({ "error": "dictionary validation failed", "diagnostics": rows })),
        )
            .into_response();
    };

    let mut symbols = SymbolTable::new();
    let mut encoded = Vec::with_capacity(reqs.len());
    for req in &reqs {
        match encode(req, &dict, &mut symbols, strictness) {
            Ok(e) => encoded.push(e),
            Err(e) => return bad_request(format!("encoding failed: {e}")),
        }
    }

    let analysis = analyze_corpus(
        &encoded,
        &dict,
        &AnalysisOptions {
            syllogism_depth: request.options.syllogism_depth.min(8),
            domain_axioms: request.options.domain_axioms,
        },
    );
    let timestamp =
        request.options.timestamp.clone().unwrap_or_else(|| {
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
        });
    let report = build_report(
        timestamp,
        vec!["request".to_string()],
        &reqs,
        &encoded,
        &analysis,
        &symbols,
        &diagnostics,
    );
    (StatusCode::OK, Json(report)).into_response()
}

async fn handle_health() -> Response {
    (
        StatusCode::OK,
        Json(json!({
            "status": "ok",
            "version": env!("CARGO_PKG_VERSION"),
        })),
    )
        .into_response()
}
