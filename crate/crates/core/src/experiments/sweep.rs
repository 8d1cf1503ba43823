use rayon::prelude::*;

use super::config::{config_err, SweepParams};
use super::record::SweepRecord;
use crate::channels::unitary_channel;
use crate::error::Result;
use crate::linalg::condition_bound;
use crate::petz::{run_pipeline_canonical, PetzInstance};
use crate::qsvt::SqrtMode;
use crate::random::{random_channel, random_state, random_unitary, rng_stream};

const MAX_DRAWS: usize = 500;

/// One grid point: `(d_E, κ_𝒩σ bound, ε)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub d_e: usize,
    pub kappa: f64,
    pub eps: f64,
}

/// Grid in `d_E`-major, then `κ`, then `ε` order.
pub fn sweep_grid(p: &SweepParams, default_eps: f64) -> Vec<GridPoint> {
    let eps = if p.eps.is_empty() { vec![default_eps] } else { p.eps.clone() };
    let mut grid = Vec::new();
    for &d_e in &p.d_e {
        for &kappa in &p.kappa {
            for &e in &eps {
                grid.push(GridPoint { d_e, kappa, eps: e });
            }
        }
    }
    grid
}

/// Draws a `dim`-dimensional instance with `d_E` Kraus operators whose exact `κ_𝒩σ` lies
/// below `point.kappa`, then uses `point.kappa` as the bound.
pub fn sweep_instance(p: &SweepParams, point: GridPoint, seed: u64, stream: u64) -> Result<(PetzInstance, f64)> {
    let mut rng = rng_stream(seed, stream);
    for _ in 0..MAX_DRAWS {
        let channel = if point.d_e == 1 {
            unitary_channel(&random_unitary(p.dim, &mut rng))?
        } else {
            random_channel(p.dim, p.dim, point.d_e, &mut rng)
        };
        let sigma = random_state(p.dim, p.floor, &mut rng);
        let exact = PetzInstance::with_exact_bounds(channel, sigma, point.eps)?;
        let kn = condition_bound(exact.n_sigma().matrix())?;
        if kn <= point.kappa {
            let inst = PetzInstance::new(
                exact.channel,
                exact.sigma,
                point.eps,
                exact.kappa_sigma,
                point.kappa,
                SqrtMode::ExactSupport,
            )?;
            return Ok((inst, kn));
        }
    }
    Err(config_err(
        "experiment.params.kappa",
        format!("no instance with κ_𝒩σ ≤ {} in {MAX_DRAWS} draws", point.kappa),
    ))
}

/// Runs the pipeline on every grid point and repetition in parallel. Records come back in
/// grid order, repetitions innermost.
pub fn complexity_sweep(
    p: &SweepParams,
    default_eps: f64,
    seed: u64,
    repetitions: usize,
) -> Result<Vec<SweepRecord>> {
    let grid = sweep_grid(p, default_eps);
    let jobs: Vec<(usize, usize, GridPoint)> = grid
        .iter()
        .enumerate()
        .flat_map(|(g, &pt)| (0..repetitions).map(move |r| (g, r, pt)))
        .collect();
    jobs.par_iter()
        .enumerate()
        .map(|(index, &(grid_index, repetition, point))| {
            let stream = index as u64;
            let (instance, kappa_nsigma_exact) = sweep_instance(p, point, seed, stream)?;
            let res = run_pipeline_canonical(&instance)?;
            let d = res.diagnostics;
            Ok(SweepRecord {
                index,
                grid_index,
                repetition,
                stream,
                kappa_nsigma_exact,
                n_rep_ratio: d.n_rep as f64 / (point.d_e as f64 * point.kappa).sqrt(),
                instance,
                diagnostics: d,
            })
        })
        .collect()
}
