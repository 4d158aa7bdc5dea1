//! End-to-end pipeline behind the CLI: load dictionary and requirement
//! files, validate, encode, analyze, write reports.
//!
//! Exit-code contract (CI gates on it):
//! * `0`: analysis ran, no contradiction (or failing was disabled)
//! * `1`: analysis ran and found contradictions
//! * `2`: configuration, parse or validation error; no reports written

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use reqsat_core::analysis::{analyze_corpus, AnalysisOptions};
use reqsat_core::ast::Requirement;
use reqsat_core::dict::parse_dictionary;
use reqsat_core::encode::{
    encode, validate_against_dictionary, Diagnostic, Severity, Strictness, SymbolTable,
};
use reqsat_core::parser::parse_requirements;

use crate::report::{build_report, render_html, render_json, AnalysisReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRADICTIONS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

pub const MAX_SYLLOGISM_DEPTH: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Html,
    Json,
    Both,
}

impl ReportFormat {
    fn wants_html(self) -> bool {
        matches!(self, ReportFormat::Html | ReportFormat::Both)
    }

    fn wants_json(self) -> bool {
        matches!(self, ReportFormat::Json | ReportFormat::Both)
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dict_path: PathBuf,
    pub req_paths: Vec<PathBuf>,
    pub output_dir: PathBuf,
    pub format: ReportFormat,
    pub syllogism_depth: u32,
    pub domain_axioms: bool,
    pub lenient: bool,
    pub fail_on_contradiction: bool,
    /// Pinned ISO 8601 timestamp; `None` reads the clock.
    pub timestamp: Option<String>,
}

/// Run the pipeline, printing the one-line summary to stdout and any
/// diagnostics to stderr.
pub fn run(config: &RunConfig) -> i32 {
    match try_run(config) {
        Ok(report) => {
            println!(
                "{} comparisons, {} contradictions",
                report.summary.comparisons, report.summary.contradictions
            );
            if report.summary.contradictions > 0 && config.fail_on_contradiction {
                EXIT_CONTRADICTIONS
            } else {
                EXIT_OK
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_ERROR
        }
    }
}

pub fn try_run(config: &RunConfig) -> Result<AnalysisReport> {
    if config.syllogism_depth > MAX_SYLLOGISM_DEPTH {
        bail!(
            "syllogism depth {} exceeds the limit of {MAX_SYLLOGISM_DEPTH}",
            config.syllogism_depth
        );
    }
    if config.req_paths.is_empty() {
        bail!("at least one requirements file is required");
    }
    let timestamp = match &config.timestamp {
        Some(ts) => {
            chrono::DateTime::parse_from_rfc3339(ts)
                .with_context(|| format!("`{ts}` is not an ISO 8601 timestamp"))?;
            ts.clone()
        }
        None => chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    };

    let dict_text = fs::read_to_string(&config.dict_path)
        .with_context(|| format!("cannot read dictionary {}", config.dict_path.display()))?;
    let dict = parse_dictionary(&dict_text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", config.dict_path.display()))?;

    let mut reqs: Vec<Requirement> = Vec::new();
    let mut corpus_names: Vec<String> = Vec::new();
    let mut id_sources: BTreeMap<String, String> = BTreeMap::new();
    for path in &config.req_paths {
        let name = path.display().to_string();
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read requirements {name}"))?;
        let parsed = parse_requirements(&text).map_err(|e| anyhow::anyhow!("{name}:{e}"))?;
        for req in &parsed {
            if let Some(previous) = id_sources.insert(req.id.clone(), name.clone()) {
                bail!(
                    "{name}: requirement ID `{}` is already defined in {previous}",
                    req.id
                );
            }
        }
        reqs.extend(parsed);
        corpus_names.push(name);
    }

    let mut diagnostics: Vec<Diagnostic> = Vec::new();
    for req in &reqs {
        diagnostics.extend(validate_against_dictionary(req, &dict));
    }
    let strictness = if config.lenient {
        for diag in &mut diagnostics {
            diag.severity = Severity::Warning;
            eprintln!("warning: {}: {}", diag.requirement, diag.message);
        }
        Strictness::Lenient
    } else if diagnostics.is_empty() {
        Strictness::Strict
    } else {
        let mut message = String::from("dictionary validation failed:");
        for diag in &diagnostics {
            message.push_str(&format!("\n  {}: {}", diag.requirement, diag.message));
        }
        bail!(message);
    };

    let mut symbols = SymbolTable::new();
    let encoded: Result<Vec<_>> = reqs
        .iter()
        .map(|r| {
            encode(r, &dict, &mut symbols, strictness)
                .map_err(|e| anyhow::anyhow!("encoding failed: {e}"))
        })
        .collect();
    let encoded = encoded?;

    let analysis = analyze_corpus(
        &encoded,
        &dict,
        &AnalysisOptions {
            syllogism_depth: config.syllogism_depth,
            domain_axioms: config.domain_axioms,
        },
    );

    let report = build_report(
        timestamp,
        corpus_names,
        &reqs,
        &encoded,
        &analysis,
        &symbols,
        &diagnostics,
    );

    fs::create_dir_all(&config.output_dir).with_context(|| {
        format!(
            "cannot create output directory {}",
            config.output_dir.display()
        )
    })?;
    if config.format.wants_json() {
        write_atomic(
            &config.output_dir.join("report.json"),
            render_json(&report).as_bytes(),
        )?;
    }
    if config.format.wants_html() {
        write_atomic(
            &config.output_dir.join("report.html"),
            render_html(&report).as_bytes(),
        )?;
    }
    Ok(report)
}

/// Write via a temp file in the same directory plus rename, so readers
/// never observe a partial report.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("cannot move report into place at {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
        let path = dir.join(name);
        fs::write(&path, content).unwrap();
        path
    }

    fn base_config(dir: &Path) -> RunConfig {
        RunConfig {
            dict_path: dir.join("dict.csv"),
            req_paths: vec![dir.join("a.req")],
            output_dir: dir.join("out"),
            format: ReportFormat::Both,
            syllogism_depth: 1,
            domain_axioms: false,
            lenient: false,
            fail_on_contradiction: true,
            timestamp: Some("2024-01-01T00:00:00Z".to_string()),
        }
    }

    #[test]
    fn clean_corpus_exits_zero_and_writes_reports() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "dict.csv",
            "Data,Range\nP,TRUE|FALSE\nX,GO|STOP\nY,GO|STOP\n",
        );
        write(
            dir.path(),
            "a.req",
            "ID:R1\nGiven P is TRUE\nThen X to GO\n\nID:R2\nGiven P is FALSE\nThen Y to GO\n",
        );
        let config = base_config(dir.path());
        assert_eq!(run(&config), EXIT_OK);
        assert!(config.output_dir.join("report.json").exists());
        assert!(config.output_dir.join("report.html").exists());
    }

    #[test]
    fn contradiction_exits_one_unless_disabled() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "dict.csv",
            "Data,Range\nP,TRUE|FALSE\nX,GO|STOP\n",
        );
        write(
            dir.path(),
            "a.req",
            "ID:R1\nGiven P is TRUE\nThen X to GO\n\nID:R2\nGiven P is FALSE\nThen X to GO\n\
             \nID:R3\nGiven P is NOT TRUE\nThen X to GO\n",
        );
        // R1 vs R2 and R1 vs R3 contradict (P ∧ ¬P); R2 vs R3 agree.
        let mut config = base_config(dir.path());
        assert_eq!(run(&config), EXIT_CONTRADICTIONS);
        config.fail_on_contradiction = false;
        assert_eq!(run(&config), EXIT_OK);
    }

    #[test]
    fn parse_error_exits_two_without_reports() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "dict.csv", "Data,Range\nP,TRUE|FALSE\n");
        write(
            dir.path(),
            "a.req",
            "ID:R1\nGiven P was TRUE\nThen X to GO\n",
        );
        let config = base_config(dir.path());
        assert_eq!(run(&config), EXIT_ERROR);
        assert!(!config.output_dir.join("report.json").exists());
        assert!(!config.output_dir.join("report.html").exists());
    }

    #[test]
    fn strict_validation_failure_exits_two_but_lenient_passes() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "dict.csv", "Data,Range\nP,TRUE|FALSE\n");
        write(
            dir.path(),
            "a.req",
            "ID:R1\nGiven Ghost is ON\nThen X to GO\n",
        );
        let mut config = base_config(dir.path());
        assert_eq!(run(&config), EXIT_ERROR);
        config.lenient = true;
        assert_eq!(run(&config), EXIT_OK);
        let report =
            parse_json(&fs::read_to_string(config.output_dir.join("report.json")).unwrap())
                .unwrap();
        assert!(report.diagnostics.iter().all(|d| d.severity == "warning"));
        assert!(!report.diagnostics.is_empty());
    }

    use crate::report::parse_json;

    #[test]
    fn duplicate_ids_across_files_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "dict.csv", "Data,Range\nP,TRUE|FALSE\nX,GO\n");
        let a = write(
            dir.path(),
            "a.req",
            "ID:R1\nGiven P is TRUE\nThen X to GO\n",
        );
        let b = write(
            dir.path(),
            "b.req",
            "ID:R1\nGiven P is FALSE\nThen X to GO\n",
        );
        let mut config = base_config(dir.path());
        config.req_paths = vec![a, b];
        assert_eq!(run(&config), EXIT_ERROR);
    }

    #[test]
    fn format_selection_writes_only_requested_files() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "dict.csv", "Data,Range\nP,TRUE|FALSE\nX,GO\n");
        write(
            dir.path(),
            "a.req",
            "ID:R1\nGiven P is TRUE\nThen X to GO\n",
        );
        let mut config = base_config(dir.path());
        config.format = ReportFormat::Json;
        assert_eq!(run(&config), EXIT_OK);
        assert!(config.output_dir.join("report.json").exists());
        assert!(!config.output_dir.join("report.html").exists());
    }

    #[test]
    fn pinned_timestamp_is_validated() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "dict.csv", "Data,Range\nP,TRUE|FALSE\nX,GO\n");
        write(
            dir.path(),
            "a.req",
            "ID:R1\nGiven P is TRUE\nThen X to GO\n",
        );
        let mut config = base_config(dir.path());
        config.timestamp = Some("yesterday".to_string());
        assert_eq!(run(&config), EXIT_ERROR);
    }
}
