use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;

use super::config::{
    config_err, BayesSpec, Experiment, ExperimentConfig, PgmParams, RecoverParams, SearchParams,
};
use super::record::{
    BayesRecord, PgmPipeline, PgmRecord, RecoverRecord, ResultRecord, RunRecord,
    SearchRecord, RECORD_VERSION,
};
use super::sweep::complexity_sweep;
use crate::channels::{classical_bayes_reversal, classical_channel, compose, KrausMap};
use crate::error::Result;
use crate::linalg::{choi_matrix, entanglement_fidelity, ComplexMatrix, DensityMatrix};
use crate::petz::{exact_petz, run_pipeline_canonical, search_demo, PetzInstance, PetzResult};
use crate::pgm::{
    average_support, helstrom_success, label_marginal, pgm_parameters, pgm_povm,
    pgm_success_probability, pgm_via_petz, pretty_good_instrument, Ensemble,
};
use crate::random::{self, rng_stream};

/// Runs every repetition of the configured experiment. Output is a pure function of the
/// config unless `record_timing` is set.
pub fn run_config(cfg: &ExperimentConfig) -> Result<ResultRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let seed = cfg.seed.unwrap_or(0);
    let runs = match &cfg.experiment {
        Experiment::Recover(p) => (0..cfg.repetitions)
            .map(|i| run_recover(p, cfg.eps, seed, i).map(RunRecord::Recover))
            .collect::<Result<Vec<_>>>()?,
        Experiment::Pgm(p) => (0..cfg.repetitions)
            .map(|i| run_pgm(p, cfg.eps, seed, i).map(RunRecord::Pgm))
            .collect::<Result<Vec<_>>>()?,
        Experiment::Search(p) => run_search(p, cfg.eps, seed, cfg.repetitions)?
            .into_iter()
            .map(RunRecord::Search)
            .collect(),
        Experiment::Sweep(p) => complexity_sweep(p, cfg.eps, seed, cfg.repetitions)?
            .into_iter()
            .map(RunRecord::Sweep)
            .collect(),
        Experiment::Bayes(b) => (0..cfg.repetitions)
            .map(|i| run_bayes(b, seed, i).map(RunRecord::Bayes))
            .collect::<Result<Vec<_>>>()?,
    };
    let summary = summarize(&runs);
    Ok(ResultRecord {
        record_version: RECORD_VERSION,
        config: cfg.clone(),
        runs,
        summary,
        wall_time_ms: cfg
            .record_timing
            .then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

fn instance_from(p: &RecoverParams, eps: f64, rng: &mut random::InstanceRng) -> Result<PetzInstance> {
    let channel = p.channel.build(rng)?;
    let sigma = p.sigma.build(channel.dim_in(), rng)?;
    let exact = PetzInstance::with_exact_bounds(channel, sigma, eps)?;
    let inst = PetzInstance::new(
        exact.channel,
        exact.sigma,
        eps,
        p.kappa_sigma.unwrap_or(exact.kappa_sigma),
        p.kappa_nsigma.unwrap_or(exact.kappa_nsigma),
        p.sqrt_mode,
    )?;
    Ok(inst)
}

/// Pipeline run plus recovery fidelities of `𝒫̃ ∘ 𝒩` and `𝒫 ∘ 𝒩` on `σ`.
pub fn recover_instance(inst: &PetzInstance) -> Result<(PetzResult, f64, f64)> {
    let res = run_pipeline_canonical(inst)?;
    let approx = compose(&inst.channel, &res.recovered_channel)?;
    let exact = compose(&inst.channel, &res.exact)?;
    let s = inst.sigma.matrix();
    let fidelity = entanglement_fidelity(&approx, s)?;
    let exact_fidelity = entanglement_fidelity(&exact, s)?;
    Ok((res, fidelity, exact_fidelity))
}

fn run_recover(p: &RecoverParams, eps: f64, seed: u64, index: usize) -> Result<RecoverRecord> {
    let stream = index as u64;
    let mut rng = rng_stream(seed, stream);
    let inst = instance_from(p, eps, &mut rng)?;
    let (res, fidelity, exact_fidelity) = recover_instance(&inst)?;
    Ok(RecoverRecord {
        index,
        stream,
        instance: inst,
        fidelity,
        exact_fidelity,
        diagnostics: res.diagnostics,
    })
}

/// Probability that the recovered instrument outputs the label of the prepared state.
pub fn instrument_success(e: &Ensemble, instrument: &impl KrausMap) -> Result<f64> {
    let mut total = 0.0;
    for (x, (s, &p)) in e.states().iter().zip(e.probs()).enumerate() {
        let out = instrument.apply(s.matrix())?;
        total += p * label_marginal(&out, e.len())[x];
    }
    Ok(total)
}

fn run_pgm(p: &PgmParams, eps: f64, seed: u64, index: usize) -> Result<PgmRecord> {
    let stream = index as u64;
    let mut rng = rng_stream(seed, stream);
    let ensemble = p.ensemble.build(&mut rng)?;
    let povm = pgm_povm(&ensemble)?;
    let instrument = pretty_good_instrument(&ensemble)?;
    let petz = exact_petz(
        &crate::channels::partial_trace_channel(ensemble.len(), ensemble.dim())?,
        &ensemble.cq_state(),
    )?;
    let helstrom = (ensemble.len() == 2).then(|| {
        let (p, s) = (ensemble.probs(), ensemble.states());
        helstrom_success(p[0], s[0].matrix(), p[1], s[1].matrix())
    });
    let pipeline = if p.pipeline {
        let res = pgm_via_petz(&ensemble, eps)?;
        Some(PgmPipeline {
            success: instrument_success(&ensemble, &res.recovered_channel)?,
            diagnostics: res.diagnostics,
        })
    } else {
        None
    };
    Ok(PgmRecord {
        index,
        stream,
        parameters: pgm_parameters(&ensemble)?,
        success: pgm_success_probability(&ensemble)?,
        helstrom,
        completeness_defect: povm.completeness_defect(&average_support(&ensemble)?),
        instrument_petz_diff: choi_matrix(&instrument).max_abs_diff(&choi_matrix(&petz)),
        pipeline,
        ensemble,
    })
}

fn run_search(p: &SearchParams, eps: f64, seed: u64, repetitions: usize) -> Result<Vec<SearchRecord>> {
    let mut out = Vec::new();
    for rep in 0..repetitions {
        for (k, &n) in p.sizes.iter().enumerate() {
            let index = rep * p.sizes.len() + k;
            let marked = match p.marked {
                Some(m) => m,
                None => rng_stream(seed, index as u64).random_range(1..=n),
            };
            out.push(SearchRecord {
                index,
                report: search_demo(n, marked, eps)?,
            });
        }
    }
    Ok(out)
}

/// Classical Bayes reversal next to the Petz map of the classical channel, both as `[x][y]`.
pub fn bayes_comparison(prior: &[f64], p_y_given_x: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let bayes = classical_bayes_reversal(prior, p_y_given_x)?;
    let channel = classical_channel(p_y_given_x)?;
    let sigma = DensityMatrix::diagonal(prior)?;
    let petz = exact_petz(&channel, &sigma)?;
    let (nx, ny) = (prior.len(), p_y_given_x.len());
    let mut m = vec![vec![0.0; ny]; nx];
    for y in 0..ny {
        if bayes.excluded_outputs.contains(&y) {
            continue;
        }
        let out = petz.apply(&ComplexMatrix::unit(ny, ny, y, y))?;
        for (x, row) in m.iter_mut().enumerate() {
            row[y] = out[(x, x)].re;
        }
    }
    Ok((bayes.matrix, m))
}

fn run_bayes(spec: &BayesSpec, seed: u64, index: usize) -> Result<BayesRecord> {
    let stream = index as u64;
    let mut rng = rng_stream(seed, stream);
    let (prior, p_y_given_x) = match spec {
        BayesSpec::Random { nx, ny } => {
            let prior = random::random_distribution(*nx, 0.5, &mut rng);
            let s: f64 = prior.iter().sum();
            let prior: Vec<f64> = prior.iter().map(|p| p / s).collect();
            (prior, random::random_stochastic(*nx, *ny, &mut rng))
        }
        BayesSpec::Explicit { prior, p_y_given_x } => (prior.clone(), p_y_given_x.clone()),
    };
    let (bayes, petz) = bayes_comparison(&prior, &p_y_given_x)
        .map_err(|e| config_err("experiment.params", e.to_string()))?;
    let max_abs_diff = bayes
        .iter()
        .flatten()
        .zip(petz.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(BayesRecord {
        index,
        stream,
        prior,
        p_y_given_x,
        bayes,
        petz,
        max_abs_diff,
    })
}

fn summarize(runs: &[RunRecord]) -> BTreeMap<String, f64> {
    let mut s = BTreeMap::new();
    let mut put = |k: &str, vals: Vec<f64>| {
        if vals.is_empty() {
            return;
        }
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        s.insert(format!("{k}_max"), max);
        s.insert(format!("{k}_min"), min);
    };
    let diag: Vec<_> = runs
        .iter()
        .filter_map(|r| match r {
            RunRecord::Recover(r) => Some(&r.diagnostics),
            RunRecord::Sweep(r) => Some(&r.diagnostics),
            RunRecord::Pgm(r) => r.pipeline.as_ref().map(|p| &p.diagnostics),
            _ => None,
        })
        .collect();
    put("choi_upper_over_eps", diag.iter().map(|d| d.choi_upper / d.eps).collect());
    put("query_ratio", diag.iter().map(|d| d.modeled_queries.ratio).collect());
    put(
        "n_rep_ratio",
        diag.iter()
            .map(|d| d.n_rep as f64 / (d.d_e as f64 * d.kappa_nsigma).sqrt())
            .collect(),
    );
    put(
        "success",
        runs.iter()
            .filter_map(|r| match r {
                RunRecord::Search(r) => Some(r.report.approx_success),
                RunRecord::Pgm(r) => r.pipeline.as_ref().map(|p| p.success),
                RunRecord::Recover(r) => Some(r.fidelity),
                _ => None,
            })
            .collect(),
    );
    put(
        "max_abs_diff",
        runs.iter()
            .filter_map(|r| match r {
                RunRecord::Bayes(r) => Some(r.max_abs_diff),
                RunRecord::Pgm(r) => Some(r.instrument_petz_diff),
                _ => None,
            })
            .collect(),
    );
    s
}

/// Recomputes a stored run from its recorded instance and checks the metrics agree exactly.
pub fn replay(run: &RunRecord, eps: f64) -> Result<bool> {
    match run {
        RunRecord::Recover(r) => {
            let (res, f, fe) = recover_instance(&r.instance)?;
            Ok(res.diagnostics == r.diagnostics && f == r.fidelity && fe == r.exact_fidelity)
        }
        RunRecord::Sweep(r) => {
            let res = run_pipeline_canonical(&r.instance)?;
            Ok(res.diagnostics == r.diagnostics)
        }
        RunRecord::Pgm(r) => {
            let again = run_pgm(
                &PgmParams {
                    ensemble: super::config::EnsembleSpec::Explicit {
                        ensemble: r.ensemble.clone(),
                    },
                    pipeline: r.pipeline.is_some(),
                },
                eps,
                0,
                r.index,
            )?;
            Ok(PgmRecord { stream: r.stream, ..again } == *r)
        }
        RunRecord::Search(r) => Ok(search_demo(r.report.n, r.report.marked, r.report.eps)? == r.report),
        RunRecord::Bayes(r) => {
            let (bayes, petz) = bayes_comparison(&r.prior, &r.p_y_given_x)?;
            Ok(bayes == r.bayes && petz == r.petz)
        }
    }
}
