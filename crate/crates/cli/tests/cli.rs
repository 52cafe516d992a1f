use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rankmon(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankmon"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn generate(dir: &Path, name: &str, mix: &str, n: usize, seed: u64) {
    let out = rankmon(
        &[
            "generate",
            "--n",
            &n.to_string(),
            "--mix",
            mix,
            "--seed",
            &seed.to_string(),
            "--out",
            name,
        ],
        dir,
    );
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn generate_is_deterministic_and_writes_labels() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "d.csv", "cold=0.3,flat=0.7", 1000, 7);
    generate(dir.path(), "e.csv", "cold=0.3,flat=0.7", 1000, 7);
    let read = |n: &str| fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("d.csv"), read("e.csv"));
    assert_eq!(read("d.labels.csv"), read("e.labels.csv"));
    let labels = String::from_utf8(read("d.labels.csv")).unwrap();
    assert!(labels.starts_with("product_id,planted_pattern\n"));
    assert_eq!(labels.lines().filter(|l| l.ends_with(",cold")).count(), 300);
}

#[test]
fn invalid_mix_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = rankmon(
        &[
            "generate",
            "--n",
            "10",
            "--mix",
            "cold=0.5,flat=0.7",
            "-o",
            "x.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sum to 1.2"));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn check_planted_cold_start() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "cold.csv", "cold=1", 200, 3);
    let out = rankmon(
        &["check", "--prop", "cold_start", "--w", "3", "cold.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("product_id,satisfied\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 200);
    assert!(stderr(&out).contains("200 of 200 records satisfy cold_start"));
}

#[test]
fn check_formula_text_file_and_output() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "d.jsonl", "random=0.5,missing=0.5", 50, 1);
    fs::write(dir.path().join("f.stl"), "G(true)\n").unwrap();
    let out = rankmon(
        &[
            "check",
            "-i",
            "d.jsonl",
            "--formula-file",
            "f.stl",
            "-o",
            "v.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let verdicts = fs::read_to_string(dir.path().join("v.csv")).unwrap();
    assert_eq!(
        verdicts.lines().filter(|l| l.ends_with(",true")).count(),
        50
    );

    let out = rankmon(
        &["check", "-i", "d.jsonl", "--formula", "G(true)"],
        dir.path(),
    );
    assert_eq!(stdout(&out), verdicts);
}

#[test]
fn singular_interval_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "d.csv", "flat=1", 5, 1);
    let out = rankmon(&["check", "--formula", "G[3,1](x<0)", "d.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("non-singular interval"), "{err}");
    assert!(err.contains("^^^^^"), "{err}");
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = rankmon(
        &["check", "--formula", "G(true)", "missing.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));

    let header = "product_id,category,pos_0,pos_1,pos_2,pos_3,pos_4,pos_5,pos_6,pos_7,pos_8,pos_9,pos_10,pos_11,pos_12,pos_13,impressions,clicks,purchases\n";
    let short = format!("{header}a,c0,{}1,2,3\n", "5,".repeat(13));
    fs::write(dir.path().join("short.csv"), short).unwrap();
    let out = rankmon(&["rates", "short.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = rankmon(&["check", "--prop", "sideways", "short.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = rankmon(&["check"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = rankmon(&["bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = rankmon(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn rates_and_metrics_tables() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "d.csv", "cold=0.3,flat=0.5,warm=0.2", 400, 2);
    let out = rankmon(
        &[
            "rates",
            "-i",
            "d.csv",
            "-o",
            "r.csv",
            "--param",
            "ditch.d=12",
            "--extra",
            "never=F(x < 0)",
            "--emit-plot-data",
            "r.dat",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("category"));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.starts_with("category,property,satisfied,total,rate\n"));
    assert_eq!(csv.lines().count(), 1 + 10 * 10);
    assert!(csv
        .lines()
        .filter(|l| l.contains(",never,"))
        .all(|l| l.ends_with(",0")));
    assert!(fs::read_to_string(dir.path().join("r.dat"))
        .unwrap()
        .starts_with("# category flat_start"));

    let out = rankmon(
        &[
            "metrics",
            "d.csv",
            "--prop",
            "warm_start",
            "--prop",
            "spike",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("property,metric,mean,count\n"));
    assert!(text.contains("spike,impressions,NA,0\n"), "{text}");

    let out = rankmon(
        &["rates", "d.csv", "--prop", "reach", "--param", "w=2"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_does_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "d.csv", "spiky=0.5,random=0.5", 3000, 4);
    let one = rankmon(&["--jobs", "1", "metrics", "d.csv"], dir.path());
    let many = rankmon(&["--jobs", "8", "metrics", "d.csv"], dir.path());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn expand_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = rankmon(
        &[
            "expand", "--prop", "ditch", "--param", "w=2", "--days", "13",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("# operators: 39"));
    let out = rankmon(
        &["expand", "--prop", "ditch", "--target", "query"],
        dir.path(),
    );
    assert!(stdout(&out).contains("df[((df.pos_0 > 10) & ("));
    let out = rankmon(
        &["expand", "--formula", "G[0,2](x <= 0)", "--days", "5"],
        dir.path(),
    );
    assert!(stdout(&out).contains("(x@0 <= 0) & (x@1 <= 0) & (x@2 <= 0)"));
    let out = rankmon(
        &["expand", "--formula", "G(x<0)", "--days", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kmeans_outputs() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "d.csv", "flat=0.5,spiky=0.5", 300, 5);
    let out = rankmon(
        &[
            "kmeans",
            "d.csv",
            "--k",
            "4",
            "--seed",
            "1",
            "-o",
            "c.csv",
            "--assignments",
            "a.csv",
            "--emit-plot-data",
            "c.dat",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let centroids = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(centroids.lines().count(), 5);
    assert!(centroids.starts_with("cluster,pos_0,"));
    let assignments = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(assignments.lines().count(), 301);
    assert!(stderr(&out).contains("converged=true"));
    let out = rankmon(&["kmeans", "d.csv", "--k", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
