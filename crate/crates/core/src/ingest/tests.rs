use std::io::Cursor;

use proptest::prelude::*;

use super::*;
use crate::eval::eval_fast;
use crate::props::{default_library, PropertyKind, PropertySpec};

fn header(days: usize) -> String {
    let pos: Vec<String> = (0..days).map(|i| format!("pos_{i}")).collect();
    format!(
        "product_id,category,{},impressions,clicks,purchases\n",
        pos.join(",")
    )
}

fn row(id: &str, positions: &[&str]) -> String {
    format!("{id},c0,{},100,10,1\n", positions.join(","))
}

fn record(id: &str, positions: Vec<f64>) -> ProductRecord {
    ProductRecord {
        product_id: id.into(),
        category: "c0".into(),
        positions,
        impressions: 1,
        clicks: 0,
        purchases: 0,
    }
}

fn satisfied(spec: &PropertySpec, record: &ProductRecord) -> bool {
    eval_fast(&spec.formula, &to_traceset(record))
        .unwrap()
        .satisfied
}

fn lib(kind: PropertyKind) -> PropertySpec {
    default_library()
        .into_iter()
        .find(|s| s.kind == kind)
        .unwrap()
}

#[test]
fn reads_a_small_csv() {
    let p = ["5"; 14];
    let text = header(14) + &row("a", &p) + &row("b", &p) + &row("c", &p);
    let ds = read_csv(text.as_bytes(), DEFAULT_DAYS).unwrap();
    assert_eq!(ds.len(), 3);
    assert_eq!(ds.category_index()["c0"], vec![0, 1, 2]);
    assert_eq!(ds.records()[1].positions, vec![5.0; 14]);
}

#[test]
fn short_row_is_a_schema_error_on_its_line() {
    let text = header(14) + &row("a", &["5"; 14]) + &row("b", &["5"; 13]);
    match read_csv(text.as_bytes(), DEFAULT_DAYS) {
        Err(IngestError::Schema { line, message }) => {
            assert_eq!(line, 3);
            assert!(
                message.contains("expected 19 columns, found 18"),
                "{message}"
            );
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn position_below_one_is_rejected() {
    let mut p = ["5"; 14];
    p[6] = "0.5";
    let text = header(14) + &row("a", &p);
    match read_csv(text.as_bytes(), DEFAULT_DAYS) {
        Err(IngestError::Invalid { line, column, .. }) => {
            assert_eq!((line, column.as_str()), (2, "pos_6"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn other_schema_errors() {
    let p = ["5"; 14];
    let bad_header = header(14).replace("clicks", "klicks") + &row("a", &p);
    assert!(matches!(
        read_csv(bad_header.as_bytes(), 14),
        Err(IngestError::Schema { line: 1, .. })
    ));
    let dup = header(14) + &row("a", &p) + &row("a", &p);
    assert!(matches!(
        read_csv(dup.as_bytes(), 14),
        Err(IngestError::DuplicateId { line: 3, .. })
    ));
    let text = header(14) + &row("a", &p).replace(",1\n", ",-1\n");
    match read_csv(text.as_bytes(), 14) {
        Err(IngestError::Invalid { column, .. }) => assert_eq!(column, "purchases"),
        other => panic!("{other:?}"),
    }
    let mut nan = p;
    nan[0] = "NaN";
    assert!(read_csv((header(14) + &row("a", &nan)).as_bytes(), 14).is_err());
    assert!(read_csv("".as_bytes(), 14).is_err());
    assert!(matches!(
        read_csv(header(14).as_bytes(), 1),
        Err(IngestError::TooFewDays(1))
    ));
}

#[test]
fn days_override_changes_the_schema() {
    let text = header(5) + &row("a", &["1", "2", "-1", "4", "5"]);
    assert_eq!(read_csv(text.as_bytes(), 5).unwrap().days(), 5);
    assert!(read_csv(text.as_bytes(), DEFAULT_DAYS).is_err());
}

#[test]
fn jsonl_reads_and_reports_lines() {
    let good = r#"{"product_id":"a","category":"c1","positions":[1,2,3],"impressions":4,"clicks":5,"purchases":6}"#;
    let text = format!("{good}\n\n{}\n", good.replace("\"a\"", "\"b\""));
    let ds = read_jsonl(Cursor::new(text), 3).unwrap();
    assert_eq!(ds.len(), 2);
    assert_eq!(ds.records()[1].clicks, 5);

    let text = format!(
        "{good}\n{}\n",
        good.replace("[1,2,3]", "[1,2]").replace("\"a\"", "\"b\"")
    );
    match read_jsonl(Cursor::new(text), 3) {
        Err(IngestError::Invalid { line, column, .. }) => {
            assert_eq!((line, column.as_str()), (2, "positions"))
        }
        other => panic!("{other:?}"),
    }
    let text = good.replace("\"clicks\":5", "\"klicks\":5");
    assert!(matches!(
        read_jsonl(Cursor::new(text), 3),
        Err(IngestError::Schema { line: 1, .. })
    ));
}

#[test]
fn derivative_examples() {
    let d = derivative(&[5.0, 4.0, 3.0, 3.0]);
    assert_eq!(d.values, vec![-1.0, -1.0, 0.0]);
    assert!(d.flagged.is_empty());

    let d = derivative(&[3.0, -1.0, 3.0, 5.0]);
    assert_eq!(d.values, vec![0.0, 0.0, 2.0]);
    assert_eq!(d.flagged, vec![0, 1]);

    let rec = record("a", vec![7.0; 14]);
    let traces = to_traceset(&rec);
    assert_eq!(traces.get("x").unwrap().len(), 14);
    let dx = traces.get("d1(x)").unwrap();
    assert_eq!(dx.times(), (0..13).collect::<Vec<_>>().as_slice());
    assert!(dx.values().iter().all(|v| *v == 0.0));
}

#[test]
fn mix_parsing() {
    let mix = parse_mix("cold=0.3, flat=0.7").unwrap();
    assert_eq!(mix.proportion(Pattern::Cold), 0.3);
    assert_eq!(mix.proportion(Pattern::Spiky), 0.0);
    assert!(matches!(
        parse_mix("cold=0.5,flat=0.7"),
        Err(MixError::BadSum(_))
    ));
    assert!(matches!(parse_mix("cold=1.2"), Err(MixError::BadSum(_))));
    assert!(matches!(
        parse_mix("hot=1"),
        Err(MixError::UnknownPattern(_))
    ));
    assert!(matches!(parse_mix("cold"), Err(MixError::Syntax(_))));
    assert!(matches!(
        parse_mix("cold=0.5,cold=0.5"),
        Err(MixError::Duplicate(_))
    ));
    assert!(matches!(
        parse_mix("cold=-0.5,flat=1.5"),
        Err(MixError::BadProportion { .. })
    ));
    assert!(matches!(
        parse_mix("cold=x"),
        Err(MixError::BadProportion { .. })
    ));
}

#[test]
fn counts_are_exact() {
    let mix = parse_mix("cold=0.3,flat=0.5,spiky=0.2").unwrap();
    let counts = mix.counts(10_000);
    assert_eq!(counts[&Pattern::Cold], 3000);
    assert_eq!(counts[&Pattern::Flat], 5000);
    assert_eq!(counts[&Pattern::Spiky], 2000);
    let thirds =
        parse_mix("cold=0.3333333333333333,flat=0.3333333333333333,warm=0.3333333333333334")
            .unwrap();
    assert_eq!(thirds.counts(10).values().sum::<usize>(), 10);
}

fn config(mix: &str, n: usize, seed: u64) -> GeneratorConfig {
    GeneratorConfig::new(n, parse_mix(mix).unwrap(), seed)
}

#[test]
fn planted_cold_and_flat_hold() {
    let cold = generate(&config("cold=1", 100, 1)).unwrap();
    let spec = lib(PropertyKind::ColdStart);
    assert!(cold.dataset.records().iter().all(|r| satisfied(&spec, r)));

    let flat = generate(&config("flat=1", 100, 2)).unwrap();
    for kind in [PropertyKind::FlatStart, PropertyKind::SteadyState] {
        let spec = lib(kind);
        assert!(flat.dataset.records().iter().all(|r| satisfied(&spec, r)));
    }
}

#[test]
fn every_planted_pattern_holds_at_zero_noise() {
    let mix = "flat=0.2,cold=0.2,warm=0.2,spiky=0.2,missing=0.1,random=0.1";
    for days in [6, 14, 30] {
        let mut cfg = config(mix, 1000, 9);
        cfg.days = days;
        let synth = generate(&cfg).unwrap();
        let [flat, cold, warm, ditch, spike, long] = [
            PropertyKind::FlatStart,
            PropertyKind::ColdStart,
            PropertyKind::WarmStart,
            PropertyKind::Ditch,
            PropertyKind::Spike,
            PropertyKind::NoLongMiss,
        ]
        .map(lib);
        for (record, label) in synth.dataset.records().iter().zip(&synth.labels) {
            let ok = match label {
                Pattern::Flat => satisfied(&flat, record),
                Pattern::Cold => satisfied(&cold, record) && !satisfied(&flat, record),
                Pattern::Warm => satisfied(&warm, record) && !satisfied(&flat, record),
                Pattern::Spiky => {
                    (satisfied(&ditch, record) || satisfied(&spike, record))
                        && !satisfied(&flat, record)
                        && !satisfied(&cold, record)
                        && !satisfied(&warm, record)
                }
                Pattern::Missing => !satisfied(&long, record),
                Pattern::Random => record.positions.iter().all(|p| *p >= 1.0),
            };
            assert!(ok, "{label} record {record:?}");
        }
    }
}

#[test]
fn generation_is_deterministic() {
    let mut cfg = config("flat=0.5,spiky=0.25,random=0.25", 300, 42);
    cfg.noise_sigma = 0.7;
    let write = |s: &Synthetic| {
        let mut out = Vec::new();
        write_csv(&mut out, &s.dataset).unwrap();
        s.write_labels(&mut out).unwrap();
        out
    };
    let a = generate(&cfg).unwrap();
    let b = generate(&cfg).unwrap();
    assert_eq!(write(&a), write(&b));
    cfg.seed = 43;
    assert_ne!(write(&a), write(&generate(&cfg).unwrap()));
}

#[test]
fn generator_rejects_bad_configs() {
    let mut cfg = config("flat=1", 10, 0);
    cfg.days = 5;
    assert_eq!(generate(&cfg), Err(MixError::TooFewDays(5)));
    let mut cfg = config("flat=1", 10, 0);
    cfg.noise_sigma = -1.0;
    assert!(generate(&cfg).is_err());
    assert_eq!(generate(&config("flat=1", 0, 0)), Err(MixError::Empty));
}

#[test]
fn labels_sidecar() {
    let synth = generate(&config("warm=1", 3, 5)).unwrap();
    let mut out = Vec::new();
    synth.write_labels(&mut out).unwrap();
    assert_eq!(
        String::from_utf8(out).unwrap(),
        "product_id,planted_pattern\np0,warm\np1,warm\np2,warm\n"
    );
    assert_eq!(
        labels_path(std::path::Path::new("out/d.csv")),
        std::path::Path::new("out/d.labels.csv")
    );
}

#[test]
fn files_round_trip_byte_for_byte() {
    let mut cfg = config("flat=0.3,missing=0.3,random=0.4", 200, 3);
    cfg.noise_sigma = 1.3;
    let ds = generate(&cfg).unwrap().dataset;
    let dir = tempfile::tempdir().unwrap();
    for name in ["d.csv", "d.jsonl"] {
        let path = dir.path().join(name);
        write(&path, &ds).unwrap();
        let loaded = load(&path, DEFAULT_DAYS).unwrap();
        assert_eq!(loaded, ds);
        let again = dir.path().join(format!("again-{name}"));
        write(&again, &loaded).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&again).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_is_one_shorter_and_zero_on_constants(level in 1u16..500, n in 2usize..30) {
        let d = derivative(&vec![f64::from(level); n]);
        prop_assert_eq!(d.values.len(), n - 1);
        prop_assert!(d.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn csv_round_trips_arbitrary_positions(
        rows in prop::collection::vec(
            prop::collection::vec(
                prop_oneof![Just(-1.0), (1.0f64..1e6)],
                14,
            ),
            1..8,
        )
    ) {
        let records = rows
            .into_iter()
            .enumerate()
            .map(|(i, positions)| record(&format!("r{i}"), positions))
            .collect();
        let ds = Dataset::new(records, DEFAULT_DAYS).unwrap();
        let mut csv = Vec::new();
        write_csv(&mut csv, &ds).unwrap();
        prop_assert_eq!(&read_csv(csv.as_slice(), DEFAULT_DAYS).unwrap(), &ds);
        let mut jsonl = Vec::new();
        write_jsonl(&mut jsonl, &ds).unwrap();
        prop_assert_eq!(read_jsonl(jsonl.as_slice(), DEFAULT_DAYS).unwrap(), ds);
    }
}
