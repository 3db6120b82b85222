use std::path::PathBuf;
use std::process::{Command, Output};

use koszul_tate::algebra::{GradedPoly, MultiIndex, Var};
use koszul_tate::corpus;
use koszul_tate::dsl;

fn corpus_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn kt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kt")).args(args).output().expect("kt runs")
}

fn kt_on(args: &[&str], file: &str) -> Output {
    let path = corpus_file(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    kt(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn shipped_corpus_matches_generators_and_round_trips() {
    for entry in corpus::entries() {
        let on_disk = std::fs::read_to_string(corpus_file(&entry.file_name)).unwrap();
        assert_eq!(on_disk, entry.text(), "{} is stale; rerun kt-corpus", entry.file_name);
        let ast = dsl::parse(&on_disk).unwrap();
        assert_eq!(ast, entry.ast);
        assert_eq!(dsl::parse(&dsl::render(&ast)).unwrap(), ast);
    }
}

#[test]
fn maxwell_file_expands_to_hand_expansion() {
    let ast = dsl::parse(&std::fs::read_to_string(corpus_file("maxwell4.kt-op")).unwrap()).unwrap();
    let spec = dsl::lower(&ast).unwrap();
    assert_eq!(spec.components.len(), 4);
    let a = |field: u32, dirs: [u8; 2]| GradedPoly::var(Var::jet(field, MultiIndex::from_directions(dirs)));
    for nu in 0..4u32 {
        let mut expected = GradedPoly::zero();
        for mu in (0..4u32).filter(|&mu| mu != nu) {
            let (m, n) = (mu as u8 + 1, nu as u8 + 1);
            expected = &(&expected + &a(nu, [m, m])) - &a(mu, [m, n]);
        }
        assert_eq!(spec.components[nu as usize], expected);
    }
}

#[test]
fn resolve_reports_counts() {
    let o = kt_on(&["resolve"], "gradient3.kt-op");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let counts: Vec<u64> = v["stages"].as_array().unwrap().iter().map(|s| s["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![3, 1]);
    assert_eq!(v["n_max"], 1);
    assert_eq!(v["degenerate"], true);
    assert_eq!(v["termination"], "irreducible at N_max");
    let text = stdout(&o);
    let at = |k: &str| text.find(&format!("\"{k}\":")).unwrap();
    let keys = ["operator", "base_dim", "fields", "degenerate", "stages", "n_max", "termination"];
    assert!(keys.windows(2).all(|w| at(w[0]) < at(w[1])));
}

#[test]
fn resolve_json_is_byte_identical() {
    for file in ["two_form4.kt-op", "maxwell4.kt-op", "gradient4.kt-op"] {
        let a = kt_on(&["resolve", "--oracle-degree", "2"], file);
        let b = kt_on(&["resolve", "--oracle-degree", "2"], file);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{file}");
    }
}

#[test]
fn text_format_and_stage_limit() {
    let o = kt_on(&["resolve", "--format", "text"], "two_form4.kt-op");
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("n_max        1"));
    let o = kt_on(&["resolve", "--max-stage", "0"], "gradient4.kt-op");
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["termination"], "stage-limit reached");
    assert_eq!(v["n_max"], serde_json::Value::Null);
}

#[test]
fn degenerate_edge_cases() {
    let o = kt_on(&["resolve"], "zero.kt-op");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["termination"], "free-module degenerate case");
    for file in ["empty.kt-op", "identity.kt-op", "divergence3.kt-op"] {
        let o = kt_on(&["resolve"], file);
        assert_eq!(code(&o), 0, "{file}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["degenerate"], false, "{file}");
        assert!(v["stages"].as_array().unwrap().is_empty());
    }
}

#[test]
fn nonlinear_operators_exit_3() {
    for file in ["kdv.kt-op", "x_coefficient.kt-op"] {
        let o = kt_on(&["resolve"], file);
        assert_eq!(code(&o), 3, "{file}");
        assert!(stderr(&o).contains("verification-only: operator is not linear with constant coefficients"));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn check_accepts_valid_bundles() {
    for file in [
        "gradient3_verify.kt-op",
        "maxwell4_verify.kt-op",
        "product_gradient_verify.kt-op",
        "correction_verify.kt-op",
    ] {
        let o = kt_on(&["check"], file);
        assert_eq!(code(&o), 0, "{file}: {}", stderr(&o));
    }
}

#[test]
fn check_rejects_corrupted_bundle() {
    let o = kt_on(&["check"], "gradient2_corrupted.kt-op");
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("2*phi_[1,2]"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_1_with_position() {
    let o = kt(&["resolve", "/nonexistent/file.kt-op"]);
    assert_eq!(code(&o), 1);
    let dir = std::env::temp_dir().join(format!("kt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.kt-op");
    std::fs::write(&bad, "base 3\nfield phi\noperator o {\n  E1 = d(4, phi)\n}\n").unwrap();
    let o = kt(&["resolve", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("bad.kt-op:4:"), "{}", stderr(&o));
    assert!(stderr(&o).contains("direction 4 exceeds base 3"));
    let o = kt(&["resolve", "--format", "yaml", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_prints_canonical_form() {
    let o = kt_on(&["parse"], "gradient2.kt-op");
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("# linearity: "));
    let canonical: String = out.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    assert_eq!(dsl::parse(&canonical).unwrap(), corpus::gradient(2));
}
