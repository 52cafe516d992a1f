use rankmon::analytics::{
    cluster_kmeans, expand_propositional, metric_distribution, satisfaction_rates, AnalyticsError,
};
use rankmon::ingest::{self, generate, parse_mix, to_traceset, GeneratorConfig};
use rankmon::{default_library, eval_fast, parse_formula, EvalError, NamedFormula};

fn config(mix: &str, n: usize) -> GeneratorConfig {
    let mut cfg = GeneratorConfig::new(n, parse_mix(mix).unwrap(), 13);
    cfg.noise_sigma = 0.4;
    cfg
}

#[test]
fn generate_store_load_and_summarise() {
    let dir = tempfile::tempdir().unwrap();
    let synthetic = generate(&config("cold=0.4,missing=0.3,random=0.3", 600)).unwrap();
    let path = dir.path().join("ranks.jsonl");
    ingest::write(&path, &synthetic.dataset).unwrap();
    let ds = ingest::load(&path, 14).unwrap();
    assert_eq!(ds, synthetic.dataset);

    let library: Vec<NamedFormula> = default_library().iter().map(|s| s.named()).collect();
    let rates = satisfaction_rates(&ds, &library).unwrap();
    let (satisfied, total) = rates.overall("no_init_miss");
    assert_eq!(total, 600);
    assert!(satisfied >= 420, "{satisfied}");

    let metrics = metric_distribution(&ds, &library).unwrap();
    assert_eq!(metrics.rows.len(), 9 * 3);
    let km = cluster_kmeans(&ds, 5, 50, 1).unwrap();
    assert_eq!(km.assignments.len(), 600);
}

#[test]
fn user_formula_on_a_record() {
    let ds = generate(&config("warm=1", 20)).unwrap().dataset;
    let rose = parse_formula("F[0,4](d1(x) > 0) & G[0,4](d1(x) >= -0.5)").unwrap();
    for rec in ds.records() {
        let verdict = eval_fast(&rose, &to_traceset(rec)).unwrap();
        assert_eq!(verdict.times.len(), 13);
    }
    let unknown = parse_formula("G(rank < 3)").unwrap();
    let traces = to_traceset(&ds.records()[0]);
    assert!(
        matches!(eval_fast(&unknown, &traces), Err(EvalError::UnknownChannel(c)) if c == "rank")
    );
    let bad = [NamedFormula::new("bad", unknown)];
    assert!(matches!(
        satisfaction_rates(&ds, &bad),
        Err(AnalyticsError::Eval { .. })
    ));
}

#[test]
fn expansion_of_library_members() {
    for spec in default_library() {
        let report = expand_propositional(&spec.formula, 14).unwrap();
        assert!(
            report.total_count >= report.operator_count,
            "{}",
            spec.name()
        );
    }
}
