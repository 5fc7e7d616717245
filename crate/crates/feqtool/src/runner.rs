//! Case selection, parallel evaluation and serial report writing.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use feq_core::cases::{registry, select_cases};
use feq_core::feq::{verify, Verdict, VerificationReport, VerifyOptions};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::report::{self, ReportFile, Summary, SummaryRow};
use crate::CliError;

/// What a run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<VerificationReport>,
    pub rows: Vec<SummaryRow>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn worst(&self) -> Verdict {
        self.reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass)
    }
}

/// Exit status for a finished run: engine errors outrank case failures.
pub fn exit_code(worst: Verdict) -> i32 {
    match worst {
        Verdict::Pass | Verdict::PaperDiscrepancy => 0,
        Verdict::Fail => 1,
        Verdict::EngineError => 2,
    }
}

/// Evaluate the selected cases and write their reports under `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let cases = if cfg.cases.is_empty() {
        registry()?
    } else {
        let ids: Vec<&str> = cfg.cases.iter().map(String::as_str).collect();
        select_cases(&ids)?
    };

    let opts = VerifyOptions {
        mode: cfg.mode,
        params: cfg.quadrature_params(),
        tolerance: cfg.tol,
        sample_plan: cfg.sample_plan.clone(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Engine(e.to_string()))?;
    let reports: Vec<VerificationReport> = pool.install(|| cases.par_iter().map(|c| verify(c, &opts)).collect());

    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    let stamp = (!cfg.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });

    let mut files = Vec::new();
    let mut rows = Vec::new();
    for r in &reports {
        if cfg.format.json() {
            let path = cfg.out.join(format!("{}.json", r.case_id));
            report::write_json(&path, &ReportFile { generated_unix: stamp, report: r.clone() })?;
            files.push(path);
        }
        if cfg.format.csv() {
            let path = cfg.out.join(format!("{}.csv", r.case_id));
            report::write_residual_csv(&path, r)?;
            files.push(path);
        }
        rows.extend(report::summary_rows(r));
    }

    if cfg.format.json() {
        let path = cfg.out.join("summary.json");
        let summary = Summary {
            generated_unix: stamp,
            feq_core: reports.first().map(|r| r.versions.feq_core.clone()).unwrap_or_default(),
            cases: rows.clone(),
        };
        report::write_json(&path, &summary)?;
        files.push(path);
    }
    if cfg.format.csv() {
        let path = cfg.out.join("summary.csv");
        report::write_summary_csv(&path, &rows)?;
        files.push(path);
    }
    Ok(RunOutcome { reports, rows, files })
}
