use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use qcauchy::format::{quantaloid_from_file, quantaloid_to_file, to_json, QuantaloidFile};
use qcauchy::quantaloid::{conclusion_holds, premise_holds, BilateralityMode, FamilyPair, Witness};
use qcauchy::Quantaloid;

fn qcauchy(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcauchy")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_report(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = qcauchy(dir, &all);
    (code(&out), serde_json::from_slice(&out.stdout).unwrap_or(Value::Null))
}

fn load(dir: &Path, name: &str) -> Quantaloid {
    let text = std::fs::read_to_string(dir.join(name)).unwrap();
    quantaloid_from_file(&serde_json::from_str::<QuantaloidFile>(&text).unwrap()).unwrap()
}

fn gen(dir: &Path, name: &str, args: &[&str]) {
    let mut all = vec!["gen", "-o", name];
    all.extend_from_slice(args);
    let out = qcauchy(dir, &all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    gen(p, "z3.json", &["group", "Z3"]);
    gen(p, "e7.json", &["e7"]);
    gen(p, "i3.json", &["interval", "3"]);
    gen(p, "pm2.json", &["path-metric", "--points", "2", "--edges", "0-1", "--cap", "3"]);
    std::fs::write(
        p.join("single.json"),
        r#"{"quantaloid": "z3.json", "objects": [{"name": "*", "type": "•"}], "hom": [["{1}"]]}"#,
    )
    .unwrap();
    dir
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "report differs from {}", path.display());
}

fn witness_from_json(q: &Quantaloid, v: &Value) -> Witness {
    let object = q.object_index(v["object"].as_str().unwrap()).unwrap();
    let m = |m: &Value| {
        q.morphism(m["src"].as_str().unwrap(), m["dst"].as_str().unwrap(), m["label"].as_str().unwrap()).unwrap()
    };
    let family = v["family"].as_array().unwrap().iter().map(|p| FamilyPair { f: m(&p["f"]), g: m(&p["g"]) }).collect();
    Witness { object, family }
}

#[test]
fn generated_sizes() {
    let dir = workspace();
    let p = dir.path();
    assert_eq!(load(p, "i3.json").hom(0, 0).size(), 4);
    assert_eq!(load(p, "z3.json").hom(0, 0).size(), 8);
}

#[test]
fn e7_file_has_the_documented_table() {
    let dir = workspace();
    let q = load(dir.path(), "e7.json");
    let el = |s: &str| q.elem_by_label(0, 0, s).unwrap();
    // a∘⊤ = ⊤, a∘a = b, a∘b = a, commutative, extended by join preservation
    let table = [
        ("a", "⊤", "⊤"),
        ("a", "a", "b"),
        ("a", "b", "a"),
        ("b", "b", "b"),
        ("b", "⊤", "⊤"),
        ("⊤", "⊤", "⊤"),
        ("1", "a", "a"),
        ("0", "⊤", "0"),
    ];
    for (g, f, gf) in table {
        assert_eq!(q.comp(0, 0, 0, el(g), el(f)), el(gf), "{g}∘{f}");
        assert_eq!(q.comp(0, 0, 0, el(f), el(g)), el(gf), "{f}∘{g}");
    }
    let l = q.hom(0, 0);
    assert!(l.leq(el("b"), el("1")) && l.leq(el("1"), el("⊤")) && l.leq(el("a"), el("⊤")));
    assert!(!l.leq(el("a"), el("1")) && !l.leq(el("b"), el("a")) && !l.leq(el("a"), el("b")));
    assert_eq!(q.id(0), el("1"));
}

#[test]
fn gen_round_trips_for_every_kind() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let kinds: [&[&str]; 11] = [
        &["free-cat", "Z2"],
        &["free-cat", "poset", "--no-involution"],
        &["group", "Z3"],
        &["locale", "diamond"],
        &["interval", "5"],
        &["e7"],
        &["rel", "1,2"],
        &["crible", "Z2"],
        &["site-quotient", "poset"],
        &["path-metric", "--points", "3", "--edges", "0-1,1-2", "--cap", "4"],
        &["split-idempotents", "e7.json"],
    ];
    gen(p, "e7.json", &["e7"]);
    for (i, kind) in kinds.iter().enumerate() {
        let name = format!("out{i}.json");
        gen(p, &name, kind);
        let text = std::fs::read_to_string(p.join(&name)).unwrap();
        let out = qcauchy(p, &["validate", &name]);
        assert_eq!(code(&out), 0, "{kind:?}: {}", stdout(&out));
        let value: Value = serde_json::from_str(&text).unwrap();
        if value.get("homs").is_some() {
            let q = load(p, &name);
            assert_eq!(to_json(&quantaloid_to_file(&q)), text, "{kind:?}");
        }
        let again = qcauchy(p, &{
            let mut a = vec!["gen"];
            a.extend_from_slice(kind);
            a
        });
        assert_eq!(stdout(&again), text, "{kind:?} differs between file and standard output");
    }
}

#[test]
fn bad_generator_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["gen", "interval", "0"][..],
        &["gen", "group", "Zq"],
        &["gen", "locale", "pentagon"],
        &["gen", "rel", "1,x"],
        &["gen", "path-metric", "--points", "2", "--edges", "0-5", "--cap", "3"],
        &["gen", "free-cat", "missing.json"],
        &["gen", "frobnicate"],
    ] {
        assert_eq!(code(&qcauchy(dir.path(), args)), 2, "{args:?}");
    }
}

#[test]
fn validate_exit_codes() {
    let dir = workspace();
    let p = dir.path();
    assert_eq!(code(&qcauchy(p, &["validate", "e7.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["validate", "single.json"])), 0);

    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(p.join("e7.json")).unwrap()).unwrap();
    let labels: Vec<String> = serde_json::from_value(file["homs"]["•->•"]["elements"].clone()).unwrap();
    let (a, one) = (labels.iter().position(|l| l == "a").unwrap(), labels.iter().position(|l| l == "1").unwrap());
    file["compose"]["•->•->•"][a][a] = Value::from(one);
    std::fs::write(p.join("bad.json"), file.to_string()).unwrap();
    let out = qcauchy(p, &["validate", "bad.json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("associativity"), "{}", stdout(&out));

    std::fs::write(p.join("broken.json"), "{\"homs\": [").unwrap();
    assert_eq!(code(&qcauchy(p, &["validate", "broken.json"])), 2);
    std::fs::write(p.join("other.json"), "{\"hello\": 1}").unwrap();
    assert_eq!(code(&qcauchy(p, &["validate", "other.json"])), 2);
    assert_eq!(code(&qcauchy(p, &["validate", "nothing.json"])), 2);

    std::fs::write(
        p.join("badcat.json"),
        r#"{"quantaloid": "z3.json", "objects": [{"name": "*", "type": "•"}], "hom": [["{a}"]]}"#,
    )
    .unwrap();
    let out = qcauchy(p, &["validate", "badcat.json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unit"));
    assert_eq!(code(&qcauchy(p, &["check", "bilateral", "bad.json"])), 2);
}

#[test]
fn check_examples_and_witness_replay() {
    let dir = workspace();
    let p = dir.path();
    let (c, report) = json_report(p, &["check", "bilateral", "z3.json"]);
    assert_eq!(c, 1);
    assert_eq!(report["verdicts"]["Cauchy-bilateral"], false);
    let q = load(p, "z3.json");
    let w = witness_from_json(&q, &report["witnesses"][0]);
    let labels: Vec<(String, String)> = w.family.iter().map(|x| (q.describe(x.f), q.describe(x.g))).collect();
    assert_eq!(labels, [("{a}".to_string(), "{b}".to_string())]);
    assert!(premise_holds(&q, BilateralityMode::Cauchy, &w) && !conclusion_holds(&q, &w));

    let (c, report) = json_report(p, &["check", "strong", "e7.json"]);
    assert_eq!(c, 1);
    let q = load(p, "e7.json");
    let w = witness_from_json(&q, &report["witnesses"][0]);
    let labels: Vec<(String, String)> = w.family.iter().map(|x| (q.describe(x.f), q.describe(x.g))).collect();
    assert_eq!(labels, [("⊤".to_string(), "a".to_string())]);
    assert!(premise_holds(&q, BilateralityMode::Strong, &w) && !conclusion_holds(&q, &w));

    assert_eq!(code(&qcauchy(p, &["check", "bilateral", "e7.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["check", "strong", "i3.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["check", "integral", "i3.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["check", "integral", "e7.json"])), 1);
    assert_eq!(code(&qcauchy(p, &["check", "modular", "e7.json"])), 1);
    // g = {1,a}, f = {1}, h = {a}: g∘f ∧ h = {a} but f ∧ gᵒ∘h = ∅
    assert_eq!(code(&qcauchy(p, &["check", "modular", "z3.json"])), 1);
    gen(p, "free3.json", &["free-cat", "Z3"]);
    assert_eq!(code(&qcauchy(p, &["check", "modular", "free3.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["check", "localic", "e7.json"])), 1);
    assert_eq!(code(&qcauchy(p, &["check", "localic", "z3.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["check", "involution", "e7.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["check", "bilateral", "z3.json", "--max-pairs", "1"])), 2);

    gen(p, "plain.json", &["free-cat", "Z2", "--no-involution"]);
    assert_eq!(code(&qcauchy(p, &["check", "involution", "plain.json"])), 1);
    assert_eq!(code(&qcauchy(p, &["check", "bilateral", "plain.json"])), 2);
}

#[test]
fn complete_examples() {
    let dir = workspace();
    let p = dir.path();
    let (c, r) = json_report(p, &["complete", "cauchy", "single.json", "-o", "cc.json"]);
    assert_eq!(c, 0);
    assert_eq!(r["facts"]["objects"], 3);
    assert_eq!(r["verdicts"]["symmetric"], false);
    assert_eq!(r["verdicts"]["Cauchy complete"], true);
    let cc: Value = serde_json::from_str(&std::fs::read_to_string(p.join("cc.json")).unwrap()).unwrap();
    assert_eq!(cc["provenance"].as_array().unwrap().len(), 3);
    assert_eq!(code(&qcauchy(p, &["validate", "cc.json"])), 0);

    let (c, r) = json_report(p, &["complete", "symmetric", "single.json"]);
    assert_eq!(c, 0);
    assert_eq!(r["facts"]["objects"], 1);

    let (c, r) = json_report(p, &["complete", "symmetrise", "pm2.json", "-o", "s.json"]);
    assert_eq!(c, 0);
    assert_eq!(r["verdicts"]["symmetric"], true);
    // both off-diagonal distances become max(1, ∞) = ∞, the bottom element
    let s: Value = serde_json::from_str(&std::fs::read_to_string(p.join("s.json")).unwrap()).unwrap();
    let hom = &s["hom"];
    assert_eq!(hom[0][1], hom[1][0]);
    assert_eq!(hom[0][1], 3);

    assert_eq!(code(&qcauchy(p, &["complete", "symmetric", "pm2.json"])), 2);
    assert_eq!(code(&qcauchy(p, &["complete", "cauchy", "single.json", "--max-presheaves", "2"])), 2);
}

#[test]
fn compare_l_examples() {
    let dir = workspace();
    let p = dir.path();
    let (c, r) = json_report(p, &["compare-l", "single.json"]);
    assert_eq!(c, 1);
    assert_eq!(r["verdicts"]["injective on objects"], true);
    assert_eq!(r["verdicts"]["surjective on objects"], false);
    let missing: Vec<&str> =
        r["witnesses"].as_array().unwrap().iter().map(|w| w["missing"].as_str().unwrap()).collect();
    assert_eq!(missing, ["•[{a}]", "•[{b}]"]);
    assert_eq!(code(&qcauchy(p, &["compare-l", "pm2.json"])), 0);
    std::fs::write(
        p.join("unit.json"),
        r#"{"quantaloid": "e7.json", "objects": [{"name": "*", "type": "•"}], "hom": [["1"]]}"#,
    )
    .unwrap();
    assert_eq!(code(&qcauchy(p, &["compare-l", "unit.json"])), 0);
}

#[test]
fn counterexample_examples() {
    let dir = workspace();
    let p = dir.path();
    let out = qcauchy(p, &["counterexample", "z3.json", "-o", "w.json", "--completion-out", "wc.json"]);
    assert_eq!(code(&out), 0);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(p.join("w.json")).unwrap()).unwrap();
    assert_eq!(w["objects"].as_array().unwrap().len(), 1);
    assert_eq!(w["hom"][0][0], 1);
    assert!(stdout(&out).contains("= {a} but the involute of"));
    assert_eq!(code(&qcauchy(p, &["validate", "wc.json"])), 0);
    assert_eq!(code(&qcauchy(p, &["counterexample", "e7.json"])), 1);
    gen(p, "plain.json", &["free-cat", "Z2", "--no-involution"]);
    assert_eq!(code(&qcauchy(p, &["counterexample", "plain.json"])), 2);
}

#[test]
fn reports_are_deterministic_and_match_golden_files() {
    let dir = workspace();
    let p = dir.path();
    let cases: [(&str, &[&str]); 6] = [
        ("check_bilateral_z3.txt", &["check", "bilateral", "z3.json"]),
        ("check_strong_e7.txt", &["check", "strong", "e7.json"]),
        ("complete_cauchy_single.txt", &["complete", "cauchy", "single.json", "-o", "cc.json"]),
        ("compare_l_single.txt", &["compare-l", "single.json"]),
        ("counterexample_z3.txt", &["counterexample", "z3.json", "-o", "w.json"]),
        ("check_bilateral_z3.json", &["--json", "check", "bilateral", "z3.json"]),
    ];
    for (name, args) in cases {
        let first = qcauchy(p, args);
        let artifact = std::fs::read(p.join("cc.json")).ok();
        let second = qcauchy(p, args);
        assert_eq!(first.stdout, second.stdout, "{name}");
        assert_eq!(artifact, std::fs::read(p.join("cc.json")).ok(), "{name}");
        golden(name, &stdout(&first));
    }
}

#[test]
fn timing_is_opt_in() {
    let dir = workspace();
    let (_, plain) = json_report(dir.path(), &["check", "strong", "e7.json"]);
    assert!(plain.get("timing_ms").is_none());
    let (_, timed) = json_report(dir.path(), &["check", "strong", "e7.json", "--timing"]);
    assert!(timed["timing_ms"].is_number());
}
