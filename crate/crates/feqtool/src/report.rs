//! Report files: one JSON document and one residual CSV per case, plus a summary.

use std::io::Write;
use std::path::Path;

use feq_core::feq::{Verdict, VerificationReport};
use feq_core::Complex;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A per-case report as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    #[serde(flatten)]
    pub report: VerificationReport,
}

/// One row of the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub case_id: String,
    pub verdict: Verdict,
    pub mode: String,
    pub q_re: Option<f64>,
    pub q_im: Option<f64>,
    pub sigma2_re: Option<f64>,
    pub sigma2_im: Option<f64>,
    pub max_rel: Option<f64>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub feq_core: String,
    pub cases: Vec<SummaryRow>,
}

/// Summary rows, one per evaluated route.
pub fn summary_rows(report: &VerificationReport) -> Vec<SummaryRow> {
    if report.modes.is_empty() {
        return vec![SummaryRow {
            case_id: report.case_id.clone(),
            verdict: report.verdict,
            mode: report.mode.name().into(),
            q_re: None,
            q_im: None,
            sigma2_re: None,
            sigma2_im: None,
            max_rel: None,
            message: String::new(),
        }];
    }
    report
        .modes
        .iter()
        .map(|m| {
            // free fit for the constants, so that a non-constant ratio shows its exponent
            let shown = m.free_fit.or(m.fit);
            SummaryRow {
                case_id: report.case_id.clone(),
                verdict: m.verdict,
                mode: format!("{:?}", m.mode).to_lowercase(),
                q_re: shown.map(|f| f.q.re),
                q_im: shown.map(|f| f.q.im),
                sigma2_re: m.fit.map(|f| f.sigma2.re),
                sigma2_im: m.fit.map(|f| f.sigma2.im),
                max_rel: m.fit.map(|f| f.max_rel),
                message: m.messages.join("; "),
            }
        })
        .collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Engine(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct ResidualRow {
    mode: String,
    s_re: f64,
    s_im: f64,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    ratio_re: f64,
    ratio_im: f64,
    model_re: Option<f64>,
    model_im: Option<f64>,
    rel_residual: Option<f64>,
}

/// Per-point table: sample values against the fitted model of their route.
pub fn write_residual_csv(path: &Path, report: &VerificationReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::csv(path, e))?;
    for x in &report.samples {
        let fit = report.modes.iter().find(|m| m.mode == x.mode).and_then(|m| m.fit);
        let model: Option<Complex> = fit.map(|f| f.sigma2 * (f.log_q * x.s).exp());
        w.serialize(ResidualRow {
            mode: format!("{:?}", x.mode).to_lowercase(),
            s_re: x.s.re,
            s_im: x.s.im,
            lhs_re: x.lhs.re,
            lhs_im: x.lhs.im,
            rhs_re: x.rhs.re,
            rhs_im: x.rhs.im,
            ratio_re: x.ratio.re,
            ratio_im: x.ratio.im,
            model_re: model.map(|m| m.re),
            model_im: model.map(|m| m.im),
            rel_residual: model.map(|m| (x.ratio - m).norm() / m.norm()),
        })
        .map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::csv(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.12}"))
}

/// Human-readable summary table.
pub fn print_summary(out: &mut impl Write, rows: &[SummaryRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<16} {:<11} {:<18} {:>22} {:>22} {:>10}",
        "case", "mode", "verdict", "Q", "sigma2", "max_rel"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<16} {:<11} {:<18} {:>22} {:>22} {:>10}",
            r.case_id,
            r.mode,
            r.verdict.name(),
            fmt_opt(r.q_re),
            fmt_opt(r.sigma2_re),
            r.max_rel.map_or_else(|| "-".into(), |v| format!("{v:.2e}")),
        )?;
    }
    Ok(())
}
