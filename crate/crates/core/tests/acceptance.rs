use std::process::Command;
use std::time::Instant;

use petzsim::channels::{classical_bayes_reversal, partial_trace_channel, unitary_channel, KrausMap};
use petzsim::experiments::{bayes_comparison, Experiment, ExperimentConfig, run_config};
use petzsim::linalg::{choi_matrix, diamond_distance_bounds, eig_hermitian, support_projector, DensityMatrix};
use petzsim::petz::{error_budget, exact_petz, run_pipeline_canonical, search_demo, PetzInstance, C3};
use petzsim::pgm::{
    helstrom_success, pgm_povm, pgm_success_probability, pgm_via_petz, pretty_good_instrument, average_support,
    Ensemble,
};
use petzsim::poly::{approx_inv_sqrt, approx_sqrt, sup_error};
use petzsim::random::{
    random_channel, random_distribution, random_pure_state, random_state, random_stochastic, random_unitary, rng_stream,
};
use petzsim::Result;

const EXACT_TOL: f64 = 1e-9;
const CRIT1_SECONDS: f64 = 10.0;
const CRIT2_SECONDS: f64 = 30.0;
const CRIT2_EPS: f64 = 0.05;
const POLY_GRID: usize = 10_001;
const DEGREE_CONSTANT_SPREAD: f64 = 3.0;
const P_SUCCESS_FACTOR: f64 = 4.0;
const N_REP_RATIO_SPREAD: f64 = 1.5;
const CRIT6_EPS: f64 = 0.1;
const CRIT7_EPS: [f64; 3] = [0.2, 0.1, 0.05];
const SLOPE_RANGE: (f64, f64) = (0.5, 1.5);
const SEARCH_EPS: f64 = 0.1;
const SEARCH_SUCCESS: f64 = 0.9;
const SQRT_N_SLACK: f64 = 0.95;
const PGM_EPS: f64 = 0.1;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn normalized(p: Vec<f64>) -> Vec<f64> {
    let s: f64 = p.iter().sum();
    let mut p: Vec<f64> = p.iter().map(|x| x / s).collect();
    let head: f64 = p[..p.len() - 1].iter().sum();
    let last = p.len() - 1;
    p[last] = 1.0 - head;
    p
}

fn random_instance(seed: u64, stream: u64, d_max: usize, d_e_max: usize, eps: f64) -> Result<PetzInstance> {
    let mut r = rng_stream(seed, stream);
    let d_a = 2 + (stream as usize % (d_max - 1));
    let d_b = 2 + (stream as usize / (d_max - 1) % (d_max - 1));
    let d_e = d_a.div_ceil(d_b).max(1 + stream as usize % d_e_max);
    let ch = random_channel(d_a, d_b, d_e, &mut r);
    let sigma = random_state(d_a, 0.5, &mut r);
    PetzInstance::with_exact_bounds(ch, sigma, eps)
}

fn criterion1() -> Result<Outcome> {
    let start = Instant::now();
    let (mut cp, mut tp, mut fixed) = (0.0f64, 0.0f64, 0.0f64);
    for s in 0..200u64 {
        let mut r = rng_stream(1, s);
        let d_a = 1 + (s as usize % 4);
        let d_b = 1 + (s as usize / 4 % 4);
        let n = d_a.div_ceil(d_b).max(1 + s as usize / 16 % 4);
        let ch = random_channel(d_a, d_b, n, &mut r);
        let sigma = random_state(d_a, 0.2, &mut r);
        let petz = exact_petz(&ch, &sigma)?;
        let n_sigma = ch.apply(sigma.matrix())?;
        cp = cp.max(-eig_hermitian(&choi_matrix(&petz))?.eigenvalues.iter().copied().fold(0.0, f64::min));
        tp = tp.max(petz.gram().max_abs_diff(&support_projector(&n_sigma)?));
        fixed = fixed.max(petz.apply(&n_sigma)?.max_abs_diff(sigma.matrix()));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        cp <= EXACT_TOL && tp <= EXACT_TOL && fixed <= EXACT_TOL && secs < CRIT1_SECONDS,
        format!("min Choi eig {:.1e}, TP defect {tp:.1e}, recovery {fixed:.1e}, {secs:.2} s", -cp),
    )
}

fn criterion2() -> Result<Outcome> {
    let start = Instant::now();
    let (mut exact_gap, mut worst, mut worst_inv) = (0.0f64, 0.0f64, 0.0f64);
    for s in 0..20u64 {
        let mut r = rng_stream(2, s);
        let d = 2 + (s as usize % 2);
        let u = random_unitary(d, &mut r);
        let inst = PetzInstance::with_exact_bounds(unitary_channel(&u)?, random_state(d, 0.5, &mut r), CRIT2_EPS)?;
        let res = run_pipeline_canonical(&inst)?;
        let inverse = unitary_channel(&u.adjoint())?;
        exact_gap = exact_gap.max(choi_matrix(&res.exact).max_abs_diff(&choi_matrix(&inverse)));
        worst = worst.max(res.diagnostics.choi_upper);
        worst_inv = worst_inv.max(diamond_distance_bounds(&res.recovered_channel, &inverse)?.1);
    }
    let secs = start.elapsed().as_secs_f64();
    let bound = C3 * CRIT2_EPS;
    outcome(
        exact_gap <= EXACT_TOL && worst <= bound && worst_inv <= bound && secs < CRIT2_SECONDS,
        format!("exact gap {exact_gap:.1e}, max Choi upper {worst:.2e} and vs U† {worst_inv:.2e} (bound {bound}), {secs:.2} s"),
    )
}

fn criterion3() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for s in 0..50u64 {
        let mut r = rng_stream(3, s);
        let (nx, ny) = (1 + s as usize % 4, 1 + s as usize / 4 % 4);
        let prior = normalized(random_distribution(nx, 0.5, &mut r));
        let w = random_stochastic(nx, ny, &mut r);
        let (bayes, petz) = bayes_comparison(&prior, &w)?;
        let oracle = classical_bayes_reversal(&prior, &w)?;
        for x in 0..nx {
            for y in 0..ny {
                worst = worst.max((petz[x][y] - bayes[x][y]).abs()).max((oracle.get(x, y) - petz[x][y]).abs());
            }
        }
    }
    outcome(worst <= EXACT_TOL, format!("max entry gap {worst:.1e}"))
}

fn criterion4() -> Result<Outcome> {
    let thetas = [0.5, 0.25, 0.1, 0.05];
    let deltas = [0.1, 0.01, 1e-3];
    let mut ok = true;
    let mut constants = Vec::new();
    let mut degrees = vec![vec![[0usize; 2]; deltas.len()]; thetas.len()];
    let (mut worst1, mut worst2) = (0.0f64, 0.0f64);
    for (i, &theta) in thetas.iter().enumerate() {
        for (j, &delta) in deltas.iter().enumerate() {
            let f1 = approx_inv_sqrt(theta, delta)?;
            let f2 = approx_sqrt(theta, delta)?;
            let e1 = sup_error(&f1, |x| x.powf(-0.5), theta, 1.0, POLY_GRID)? / (2.0 * delta / theta.sqrt());
            let e2 = sup_error(&f2, f64::sqrt, theta, 1.0, POLY_GRID)? / (2.0 * delta);
            worst1 = worst1.max(e1);
            worst2 = worst2.max(e2);
            ok &= e1 <= 1.0 && e2 <= 1.0;
            degrees[i][j] = [f1.degree, f2.degree];
            constants.push(f1.degree as f64 / ((1.0 / theta) * (1.0 / delta).ln()));
        }
    }
    let monotone = (0..thetas.len()).all(|i| {
        (0..deltas.len()).all(|j| {
            (i == 0 || (0..2).all(|k| degrees[i][j][k] >= degrees[i - 1][j][k]))
                && (j == 0 || (0..2).all(|k| degrees[i][j][k] >= degrees[i][j - 1][k]))
        })
    });
    let lo = constants.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = constants.iter().copied().fold(0.0, f64::max);
    outcome(
        ok && monotone && hi / lo <= DEGREE_CONSTANT_SPREAD,
        format!(
            "error/bound max {worst1:.2} (inv sqrt) {worst2:.2} (sqrt), monotone {monotone}, degree constant C in [{lo:.2}, {hi:.2}], max degree {}",
            degrees[thetas.len() - 1][deltas.len() - 1][0]
        ),
    )
}

fn criterion5() -> Result<Outcome> {
    let (mut violations, mut worst, mut formula_gap) = (0, 0.0f64, 0.0f64);
    for s in 0..50u64 {
        let inst = random_instance(5, s, 3, 4, 0.1)?;
        let d = run_pipeline_canonical(&inst)?.diagnostics;
        if d.isometry_defect > d.error_budget {
            violations += 1;
        }
        worst = worst.max(d.isometry_defect / d.error_budget);
        formula_gap = formula_gap.max((error_budget(&inst, d.sqrt_error, d.inv_sqrt_error) - d.error_budget).abs());
    }
    outcome(
        violations == 0 && formula_gap == 0.0,
        format!("{violations} of 50 over budget, max defect/budget {worst:.3}"),
    )
}

fn criterion6() -> Result<Outcome> {
    let (mut lo_p, mut hi_p, mut worst_amp) = (f64::INFINITY, 0.0f64, 0.0f64);
    let mut ratios = Vec::new();
    let d_es = [1usize, 2, 4];
    let kappas = [4.0, 8.0, 16.0];
    let mut stream = 0;
    for &d_e in &d_es {
        for &kappa in &kappas {
            let (inst, _) = petzsim::experiments::sweep_instance(
                &petzsim::experiments::SweepParams { d_e: vec![d_e], kappa: vec![kappa], eps: vec![], dim: 2, floor: 0.5 },
                petzsim::experiments::GridPoint { d_e, kappa, eps: CRIT6_EPS },
                6,
                stream,
            )?;
            stream += 1;
            let d = run_pipeline_canonical(&inst)?.diagnostics;
            let rel = d.p_success_measured / d.p_success_expected;
            lo_p = lo_p.min(rel);
            hi_p = hi_p.max(rel);
            worst_amp = worst_amp.max(d.amplified_defect);
            ratios.push(d.n_rep as f64 / (d_e as f64 * kappa).sqrt());
        }
    }
    let c_hi = ratios.iter().copied().fold(0.0, f64::max);
    let c_lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        lo_p >= 1.0 / P_SUCCESS_FACTOR
            && hi_p <= P_SUCCESS_FACTOR
            && worst_amp <= C3 * CRIT6_EPS
            && c_hi / c_lo <= N_REP_RATIO_SPREAD,
        format!(
            "p_success/expected in [{lo_p:.3}, {hi_p:.3}], amplified defect {worst_amp:.2e}, C = n_rep/√(d_E κ) in [{c_lo:.2}, {c_hi:.2}]"
        ),
    )
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion7() -> Result<Outcome> {
    let mut points = Vec::new();
    let mut over = 0;
    let mut worst_ratio = 0.0f64;
    for s in 0..30u64 {
        for &eps in &CRIT7_EPS {
            let inst = random_instance(7, s, 3, 3, eps)?;
            let d = run_pipeline_canonical(&inst)?.diagnostics;
            if d.choi_upper > C3 * eps {
                over += 1;
            }
            worst_ratio = worst_ratio.max(d.choi_upper / eps);
            points.push((eps.ln(), d.choi_upper.ln()));
        }
    }
    let k = slope(&points);
    println!("  c3 calibration: max Choi upper / eps = {worst_ratio:.3} against c3 = {C3}");
    outcome(
        over == 0 && (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&k),
        format!("{over} of 90 over c3·eps, log-log slope {k:.3} (range [{}, {}])", SLOPE_RANGE.0, SLOPE_RANGE.1),
    )
}

fn criterion8() -> Result<Outcome> {
    let mut ok = true;
    let mut rows = Vec::new();
    let mut queries = Vec::new();
    for (i, &n) in [2usize, 4, 8, 16].iter().enumerate() {
        let marked = 1 + i % n;
        let r = search_demo(n, marked, SEARCH_EPS)?;
        ok &= (r.exact_success - 1.0).abs() <= EXACT_TOL && r.approx_success >= SEARCH_SUCCESS;
        queries.push((n, r.total_queries));
        rows.push(format!("N={n}: {:.4}/{} q", r.approx_success, r.total_queries));
    }
    let growth = queries
        .windows(2)
        .all(|w| w[1].1 as f64 / w[0].1 as f64 >= SQRT_N_SLACK * (w[1].0 as f64 / w[0].0 as f64).sqrt());
    outcome(ok && growth, format!("{}, √N growth {growth}", rows.join(", ")))
}

fn criterion9() -> Result<Outcome> {
    let (mut identity, mut completeness) = (0.0f64, 0.0f64);
    for s in 0..50u64 {
        let mut r = rng_stream(9, s);
        let (n, d) = (1 + s as usize % 3, 1 + s as usize / 3 % 3);
        let probs = normalized(random_distribution(n, 0.5, &mut r));
        let states = (0..n).map(|_| random_state(d, 0.0, &mut r)).collect();
        let e = Ensemble::unlabeled(probs, states)?;
        let petz = exact_petz(&partial_trace_channel(n, d)?, &e.cq_state())?;
        identity = identity.max(choi_matrix(&pretty_good_instrument(&e)?).max_abs_diff(&choi_matrix(&petz)));
        completeness = completeness.max(pgm_povm(&e)?.completeness_defect(&average_support(&e)?));
    }
    let mut helstrom_ok = true;
    for s in 0..50u64 {
        let mut r = rng_stream(90, s);
        let d = 2 + s as usize % 2;
        let p0 = 0.2 + 0.6 * (s as f64 / 50.0);
        let (a, b) = (random_pure_state(d, &mut r), random_pure_state(d, &mut r));
        let e = Ensemble::unlabeled(vec![p0, 1.0 - p0], vec![DensityMatrix::pure(&a)?, DensityMatrix::pure(&b)?])?;
        let opt = helstrom_success(p0, e.states()[0].matrix(), 1.0 - p0, e.states()[1].matrix());
        let overlap = petzsim::linalg::inner(&a, &b).norm_sqr();
        let closed = 0.5 * (1.0 + (1.0 - 4.0 * p0 * (1.0 - p0) * overlap).sqrt());
        let pgm = pgm_success_probability(&e)?;
        helstrom_ok &= (opt - closed).abs() <= EXACT_TOL && pgm >= opt * opt - EXACT_TOL && pgm <= opt + EXACT_TOL;
    }
    let mut worst_pipeline = 0.0f64;
    for s in 0..5u64 {
        let mut r = rng_stream(91, s);
        let probs = normalized(random_distribution(2, 0.5, &mut r));
        let e = Ensemble::unlabeled(probs, vec![random_state(2, 0.3, &mut r), random_state(2, 0.3, &mut r)])?;
        let res = pgm_via_petz(&e, PGM_EPS)?;
        worst_pipeline = worst_pipeline.max(diamond_distance_bounds(&res.recovered_channel, &pretty_good_instrument(&e)?)?.1);
    }
    outcome(
        identity <= EXACT_TOL && completeness <= EXACT_TOL && helstrom_ok && worst_pipeline <= C3 * PGM_EPS,
        format!(
            "identity {identity:.1e}, completeness {completeness:.1e}, Helstrom oracle {helstrom_ok}, pipeline vs instrument {worst_pipeline:.2e}"
        ),
    )
}

fn criterion10() -> Result<Outcome> {
    let mut same = true;
    for kind in ["recover", "pgm", "bayes", "search"] {
        let cfg = ExperimentConfig::new(Experiment::default_for(kind).expect("known kind"), 0.1, Some(10));
        same &= run_config(&cfg)?.to_json()? == run_config(&cfg)?.to_json()?;
    }
    let run = || Command::new(env!("CARGO_BIN_EXE_petzsim")).args(["recover", "--seed", "10"]).output();
    let (a, b) = (run()?, run()?);
    let cli_same = a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(same && cli_same, format!("library records identical {same}, CLI bytes identical {cli_same}"))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("exact Petz oracle", criterion1),
        ("unitary special case", criterion2),
        ("classical consistency", criterion3),
        ("polynomial certificates", criterion4),
        ("isometry defect chain", criterion5),
        ("success probability and amplification", criterion6),
        ("end-to-end accuracy", criterion7),
        ("search demonstration", criterion8),
        ("pretty good measurement", criterion9),
        ("determinism", criterion10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (passed, detail) = match f() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if passed { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
