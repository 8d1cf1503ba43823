use petzsim::experiments::*;
use petzsim::petz::C3;

fn config(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

#[test]
fn recover_unitary_has_fidelity_near_one() {
    let cfg = config(
        r#"{"version":1,"seed":3,"eps":0.05,"repetitions":2,
            "experiment":{"kind":"recover","params":{"channel":{"type":"random_unitary","d":2},"sigma":{"type":"random","floor":0.5}}}}"#,
    );
    let rec = run_config(&cfg).unwrap();
    assert_eq!(rec.runs.len(), 2);
    for run in &rec.runs {
        let RunRecord::Recover(r) = run else { panic!() };
        assert!((r.exact_fidelity - 1.0).abs() < 1e-9);
        assert!(1.0 - r.fidelity <= C3 * 0.05, "{}", r.fidelity);
        assert!(r.diagnostics.within_c3);
    }
}

#[test]
fn search_sizes_and_fixed_label() {
    let cfg = config(
        r#"{"version":1,"eps":0.1,"experiment":{"kind":"search","params":{"sizes":[2,4],"marked":2}}}"#,
    );
    let rec = run_config(&cfg).unwrap();
    assert_eq!(rec.runs.len(), 2);
    for run in &rec.runs {
        let RunRecord::Search(r) = run else { panic!() };
        assert_eq!(r.report.marked, 2);
        assert!((r.report.exact_success - 1.0).abs() < 1e-9);
        assert!(r.report.approx_success >= 1.0 - C3 * 0.1);
    }
}

fn sweep(d_e: &[usize], kappa: &[f64], seed: u64) -> Vec<SweepRecord> {
    let p = SweepParams { d_e: d_e.to_vec(), kappa: kappa.to_vec(), eps: vec![], dim: 2, floor: 0.5 };
    complexity_sweep(&p, 0.1, seed, 1).unwrap()
}

#[test]
fn sweep_table_is_in_grid_order() {
    let recs = sweep(&[1, 2], &[4.0, 8.0], 5);
    let order: Vec<(usize, f64)> = recs.iter().map(|r| (r.instance.d_e(), r.instance.kappa_nsigma)).collect();
    assert_eq!(order, vec![(1, 4.0), (1, 8.0), (2, 4.0), (2, 8.0)]);
    for r in &recs {
        assert!(r.kappa_nsigma_exact <= r.instance.kappa_nsigma + 1e-12);
        assert!(r.diagnostics.within_c3, "{:?}", r.diagnostics);
        assert!((4.0..=9.0).contains(&r.n_rep_ratio), "{}", r.n_rep_ratio);
    }
}

#[test]
fn doubling_kappa_grows_queries_polylogarithmically() {
    let recs = sweep(&[2], &[4.0, 8.0, 16.0], 6);
    for w in recs.windows(2) {
        let (a, b) = (&w[0].diagnostics.modeled_queries, &w[1].diagnostics.modeled_queries);
        let measured = b.total as f64 / a.total as f64;
        let formula = b.formula / a.formula;
        let rel = measured / formula;
        assert!((0.8..=2.0).contains(&rel), "{measured} vs {formula}");
    }
}

#[test]
fn n_rep_grows_like_sqrt_d_e() {
    let recs = sweep(&[1, 4], &[8.0], 7);
    let ratio = recs[1].diagnostics.n_rep as f64 / recs[0].diagnostics.n_rep as f64;
    assert!((1.5..=2.7).contains(&ratio), "{ratio}");
}

#[test]
fn replay_reproduces_every_kind() {
    for kind in ["recover", "pgm", "search", "sweep", "bayes"] {
        let mut exp = Experiment::default_for(kind).unwrap();
        if let Experiment::Sweep(p) = &mut exp {
            p.d_e = vec![1, 2];
            p.kappa = vec![4.0];
        }
        let rec = run_config(&ExperimentConfig::new(exp, 0.1, Some(11))).unwrap();
        for run in &rec.runs {
            assert!(replay(run, 0.1).unwrap(), "{kind}");
        }
    }
}

#[test]
fn json_is_deterministic_and_roundtrips() {
    let cfg = ExperimentConfig::new(Experiment::default_for("bayes").unwrap(), 0.1, Some(4));
    let a = run_config(&cfg).unwrap().to_json().unwrap();
    let b = run_config(&cfg).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    let parsed = ResultRecord::from_json(&a).unwrap();
    assert_eq!(parsed.to_json().unwrap(), a);
    assert_eq!(parsed.record_version, RECORD_VERSION);
}

#[test]
fn csv_header_matches_schema_file() {
    let cfg = ExperimentConfig::new(Experiment::default_for("recover").unwrap(), 0.1, Some(1));
    let csv = run_config(&cfg).unwrap().to_csv().unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(header, CSV_COLUMNS);
    let schema = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/results.csv.md")).unwrap();
    let documented: Vec<&str> = schema
        .lines()
        .filter_map(|l| l.strip_prefix("| "))
        .filter_map(|l| l.split(" |").next())
        .filter(|c| *c != "column" && !c.starts_with("---"))
        .collect();
    assert_eq!(documented, CSV_COLUMNS);
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn config_errors_name_the_field() {
    let err = ExperimentConfig::from_json(r#"{"version":1,"eps":0.1,"bogus":1,"experiment":{"kind":"bayes","params":{"type":"random","nx":2,"ny":2}}}"#)
        .unwrap_err()
        .to_string();
    assert!(err.contains("line 1"), "{err}");
    let err = ExperimentConfig::from_json(r#"{"version":1,"eps":0.1,"experiment":{"kind":"bayes","params":{"type":"random","nx":2,"ny":2}}}"#)
        .unwrap_err()
        .to_string();
    assert!(err.contains("seed"), "{err}");
    let err = ExperimentConfig::from_json(r#"{"version":2,"seed":1,"eps":0.1,"experiment":{"kind":"bayes","params":{"type":"random","nx":2,"ny":2}}}"#)
        .unwrap_err()
        .to_string();
    assert!(err.contains("version"), "{err}");
}

#[test]
fn verify_suite_passes_on_another_seed() {
    let out = verify_suite(42, 0.1).unwrap();
    assert!(out.passed(), "{:?}", out.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
}
