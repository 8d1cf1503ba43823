use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::petz::{PetzInstance, PipelineDiagnostics, SearchReport};
use crate::pgm::{Ensemble, PgmParameters};

pub const RECORD_VERSION: u32 = 1;

/// Column names of [`CsvRow`], in order. Mirrored by `schema/results.csv.md`.
pub const CSV_COLUMNS: &[&str] = &[
    "kind",
    "index",
    "stream",
    "d_a",
    "d_b",
    "d_e",
    "eps",
    "kappa_sigma",
    "kappa_nsigma",
    "kappa_nsigma_exact",
    "degree_inv_sqrt",
    "degree_sqrt",
    "p_success_measured",
    "p_success_expected",
    "gamma",
    "rounds",
    "n_rep",
    "n_rep_ratio",
    "isometry_defect",
    "error_budget",
    "choi_lower",
    "choi_upper",
    "within_c3",
    "fidelity",
    "exact_fidelity",
    "success",
    "exact_success",
    "modeled_queries",
    "formula_queries",
    "query_ratio",
    "max_abs_diff",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub record_version: u32,
    pub config: ExperimentConfig,
    pub runs: Vec<RunRecord>,
    pub summary: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RunRecord {
    Recover(RecoverRecord),
    Pgm(PgmRecord),
    Search(SearchRecord),
    Sweep(SweepRecord),
    Bayes(BayesRecord),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoverRecord {
    pub index: usize,
    pub stream: u64,
    pub instance: PetzInstance,
    /// Entanglement fidelity of `𝒫̃ ∘ 𝒩` on `σ`.
    pub fidelity: f64,
    /// Entanglement fidelity of `𝒫 ∘ 𝒩` on `σ`.
    pub exact_fidelity: f64,
    pub diagnostics: PipelineDiagnostics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PgmRecord {
    pub index: usize,
    pub stream: u64,
    pub ensemble: Ensemble,
    pub parameters: PgmParameters,
    pub success: f64,
    /// Two-state ensembles only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub helstrom: Option<f64>,
    pub completeness_defect: f64,
    /// Largest Choi entry difference between the instrument and the Petz map of `Tr_X`.
    pub instrument_petz_diff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PgmPipeline>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PgmPipeline {
    /// `Σ_x p_x Pr[label x | σ_x]` for the recovered instrument.
    pub success: f64,
    pub diagnostics: PipelineDiagnostics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub index: usize,
    pub report: SearchReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: usize,
    pub grid_index: usize,
    pub repetition: usize,
    pub stream: u64,
    pub kappa_nsigma_exact: f64,
    /// `n_rep / √(d_E κ_𝒩σ)`
    pub n_rep_ratio: f64,
    pub instance: PetzInstance,
    pub diagnostics: PipelineDiagnostics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesRecord {
    pub index: usize,
    pub stream: u64,
    pub prior: Vec<f64>,
    pub p_y_given_x: Vec<Vec<f64>>,
    /// `p(x|y)` as `[x][y]`.
    pub bayes: Vec<Vec<f64>>,
    /// Petz map of the classical channel read on basis inputs, `[x][y]`.
    pub petz: Vec<Vec<f64>>,
    pub max_abs_diff: f64,
}

/// One CSV line. Columns that do not apply to a kind are left empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CsvRow {
    pub kind: String,
    pub index: usize,
    pub stream: Option<u64>,
    pub d_a: Option<usize>,
    pub d_b: Option<usize>,
    pub d_e: Option<usize>,
    pub eps: Option<f64>,
    pub kappa_sigma: Option<f64>,
    pub kappa_nsigma: Option<f64>,
    pub kappa_nsigma_exact: Option<f64>,
    pub degree_inv_sqrt: Option<usize>,
    pub degree_sqrt: Option<usize>,
    pub p_success_measured: Option<f64>,
    pub p_success_expected: Option<f64>,
    pub gamma: Option<f64>,
    pub rounds: Option<usize>,
    pub n_rep: Option<usize>,
    pub n_rep_ratio: Option<f64>,
    pub isometry_defect: Option<f64>,
    pub error_budget: Option<f64>,
    pub choi_lower: Option<f64>,
    pub choi_upper: Option<f64>,
    pub within_c3: Option<bool>,
    pub fidelity: Option<f64>,
    pub exact_fidelity: Option<f64>,
    pub success: Option<f64>,
    pub exact_success: Option<f64>,
    pub modeled_queries: Option<usize>,
    pub formula_queries: Option<f64>,
    pub query_ratio: Option<f64>,
    pub max_abs_diff: Option<f64>,
}

impl CsvRow {
    fn with_diagnostics(kind: &str, index: usize, stream: u64, d: &PipelineDiagnostics) -> Self {
        Self {
            kind: kind.to_string(),
            index,
            stream: Some(stream),
            d_a: Some(d.d_a),
            d_b: Some(d.d_b),
            d_e: Some(d.d_e),
            eps: Some(d.eps),
            kappa_sigma: Some(d.kappa_sigma),
            kappa_nsigma: Some(d.kappa_nsigma),
            degree_inv_sqrt: Some(d.degrees[0]),
            degree_sqrt: Some(d.degrees[1]),
            p_success_measured: Some(d.p_success_measured),
            p_success_expected: Some(d.p_success_expected),
            gamma: Some(d.gamma),
            rounds: Some(d.rounds),
            n_rep: Some(d.n_rep),
            isometry_defect: Some(d.isometry_defect),
            error_budget: Some(d.error_budget),
            choi_lower: Some(d.choi_lower),
            choi_upper: Some(d.choi_upper),
            within_c3: Some(d.within_c3),
            modeled_queries: Some(d.modeled_queries.total),
            formula_queries: Some(d.modeled_queries.formula),
            query_ratio: Some(d.modeled_queries.ratio),
            ..Default::default()
        }
    }
}

impl RunRecord {
    pub fn csv_row(&self) -> CsvRow {
        match self {
            RunRecord::Recover(r) => CsvRow {
                fidelity: Some(r.fidelity),
                exact_fidelity: Some(r.exact_fidelity),
                ..CsvRow::with_diagnostics("recover", r.index, r.stream, &r.diagnostics)
            },
            RunRecord::Pgm(r) => {
                let base = match &r.pipeline {
                    Some(p) => CsvRow {
                        success: Some(p.success),
                        ..CsvRow::with_diagnostics("pgm", r.index, r.stream, &p.diagnostics)
                    },
                    None => CsvRow {
                        kind: "pgm".into(),
                        index: r.index,
                        stream: Some(r.stream),
                        d_e: Some(r.parameters.d_e),
                        kappa_sigma: Some(r.parameters.kappa_sigma),
                        kappa_nsigma: Some(r.parameters.kappa_nsigma),
                        ..Default::default()
                    },
                };
                CsvRow {
                    exact_success: Some(r.success),
                    max_abs_diff: Some(r.instrument_petz_diff),
                    ..base
                }
            }
            RunRecord::Search(r) => CsvRow {
                kind: "search".into(),
                index: r.index,
                d_a: Some(r.report.n),
                d_b: Some(2),
                eps: Some(r.report.eps),
                choi_upper: Some(r.report.choi_upper),
                success: Some(r.report.approx_success),
                exact_success: Some(r.report.exact_success),
                modeled_queries: Some(r.report.total_queries),
                ..Default::default()
            },
            RunRecord::Sweep(r) => CsvRow {
                kappa_nsigma_exact: Some(r.kappa_nsigma_exact),
                n_rep_ratio: Some(r.n_rep_ratio),
                ..CsvRow::with_diagnostics("sweep", r.index, r.stream, &r.diagnostics)
            },
            RunRecord::Bayes(r) => CsvRow {
                kind: "bayes".into(),
                index: r.index,
                stream: Some(r.stream),
                d_a: Some(r.prior.len()),
                d_b: Some(r.p_y_given_x.len()),
                max_abs_diff: Some(r.max_abs_diff),
                ..Default::default()
            },
        }
    }
}

impl ResultRecord {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn csv_rows(&self) -> Vec<CsvRow> {
        self.runs.iter().map(RunRecord::csv_row).collect()
    }

    /// Writes the header and one row per run.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let rows = self.csv_rows();
        if rows.is_empty() {
            w.write_record(CSV_COLUMNS)?;
        }
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}
