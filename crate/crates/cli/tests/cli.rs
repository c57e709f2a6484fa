use std::process::{Command, Output};

fn blockalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockalg"))
        .args(args)
        .env_remove("BLOCKALG_WORKERS")
        .output()
        .expect("spawn blockalg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bracket_prints_central_term() {
    let o = blockalg(&[
        "bracket",
        "--variant",
        "B",
        "--x",
        r#"{"alpha":2,"level":0}"#,
        "--y",
        r#"{"alpha":-2,"level":0}"#,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("-4·L_{0,0} + C"), "{}", stdout(&o));
}

#[test]
fn bracket_json_output() {
    let o = blockalg(&[
        "bracket",
        "--format",
        "json",
        "--x",
        r#"{"alpha":1,"level":1}"#,
        "--y",
        r#"{"alpha":1,"level":0}"#,
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // [L_{1,1}, L_{1,0}] = (2·1 − 1·1) L_{2,1}
    assert_eq!(v["data"]["text"], "L_{2,1}");
}

#[test]
fn out_of_variant_key_names_the_key() {
    let o = blockalg(&[
        "bracket",
        "--variant",
        "Vir",
        "--x",
        r#"{"alpha":1,"level":2}"#,
        "--y",
        r#"{"alpha":0,"level":0}"#,
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("L_{1,2}"), "{}", stderr(&o));
}

#[test]
fn malformed_operand_names_the_field() {
    let o = blockalg(&["bracket", "--x", r#"{"alpha":1,"level":0,"coeff":"1/0"}"#, "--y", "{}"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("coeff"), "{}", stderr(&o));
}

#[test]
fn malformed_config_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"degree_bound": 2, "colour": "red"}"#).unwrap();
    let o = blockalg(&["--config", path.to_str().unwrap(), "axioms"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn malformed_module_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"variant": "B"}"#).unwrap();
    let o = blockalg(&["classify", "--module", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error:"), "{}", stderr(&o));
}

#[test]
fn irreducibility_verdicts_agree() {
    let o =
        blockalg(&["module", "--family", "Aab", "--a", "0", "--b", "1", "--range", "-8:8", "irreducible"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("bruteforce=false criterion=false"), "{}", stdout(&o));
}

#[test]
fn negative_parameters_parse() {
    let o = blockalg(&["module", "--a", "-3/2", "--b", "2", "--range", "-6:6", "classify"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("intermediate-series(-3/2,2)"), "{}", stdout(&o));
}

#[test]
fn verma_dims() {
    let o = blockalg(&["verma", "--n", "1", "--depth", "3", "dims"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2, 5, 10"), "{}", stdout(&o));
}

#[test]
fn dump_then_classify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let dump = blockalg(&["module", "--a", "1/2", "--b", "0", "--range", "-6:6", "--format", "json", "dump"]);
    assert!(dump.status.success());
    let v: serde_json::Value = serde_json::from_slice(&dump.stdout).unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, serde_json::to_string(&v["data"]["module"]).unwrap()).unwrap();
    let o = blockalg(&["classify", "--module", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("intermediate-series(1/2,0)"), "{}", stdout(&o));
}

#[test]
fn lemmas_filter_and_empty_selection() {
    let o = blockalg(&["lemmas", "--only", "nested-bracket"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("nested-bracket-identity"));
    let none = blockalg(&["lemmas", "--only", "no-such-claim"]);
    assert!(none.status.success());
}

#[test]
fn strict_mode_fails_on_recorded_discrepancy() {
    let lax = blockalg(&["lemmas", "--only", "recursion-i6"]);
    assert!(lax.status.success());
    let strict = blockalg(&["--strict", "lemmas", "--only", "recursion-i6"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_blockalg"))
            .args(["lemmas", "--format", "json", "--out", path.to_str().unwrap()])
            .env("BLOCKALG_WORKERS", workers)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        (o.stdout, std::fs::read(path).unwrap())
    };
    let (a_out, a_file) = run("a.json", "1");
    let (b_out, b_file) = run("b.json", "4");
    assert_eq!(a_out, b_out);
    assert_eq!(a_file, b_file);
    assert_eq!(a_out, a_file);
}
