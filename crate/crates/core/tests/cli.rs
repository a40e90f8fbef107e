use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn sepcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepcat")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    sepcat(args).status.code().unwrap()
}

fn json_out(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let path = dir.join(name);
    let p = path.to_str().unwrap();
    let mut all = args.to_vec();
    all.extend(["--json", p]);
    let c = code(&all);
    (
        c,
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap(),
    )
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[test]
fn z2_over_q_is_separable_with_the_averaging_certificate() {
    let d = tmp();
    let cert = path(d.path(), "cert.json");
    assert_eq!(
        code(&[
            "separability",
            "check",
            &data("z2_over_Q.json"),
            "--certificate-out",
            cert.to_str().unwrap()
        ]),
        0
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let terms = &v[0]["terms"];
    assert_eq!(terms.as_array().unwrap().len(), 2);
    for t in terms.as_array().unwrap() {
        assert_eq!(t["coeff"], "1/2");
        assert_eq!(t["u"], t["v"]);
    }
    assert_eq!(
        code(&[
            "separability",
            "verify",
            &data("z2_over_Q.json"),
            "--certificate",
            cert.to_str().unwrap()
        ]),
        0
    );
}

#[test]
fn a2_over_q_is_not_separable() {
    assert_eq!(code(&["separability", "check", &data("a2_over_Q.json")]), 1);
    assert_eq!(code(&["delta", &data("a2.pres.json")]), 1);
    assert_eq!(code(&["obstruction", &data("a2_over_Q.json")]), 1);
}

#[test]
fn wrong_certificate_fails_verification() {
    let d = tmp();
    let cert = path(d.path(), "bad.json");
    std::fs::write(
        &cert,
        r#"[{"x": "x", "y": "x", "terms": [{"coeff": "1", "u": "e", "v": "e"}]}]"#,
    )
    .unwrap();
    assert_eq!(
        code(&[
            "separability",
            "verify",
            &data("z2_over_Q.json"),
            "--certificate",
            cert.to_str().unwrap()
        ]),
        1
    );
}

#[test]
fn group_algebra_of_z2_over_f2_has_two_dimensional_h1() {
    let d = tmp();
    let (c, v) = json_out(
        d.path(),
        "coh.json",
        &[
            "cohomology",
            &data("z2_over_F2.json"),
            "--bimodule",
            "canonical",
            "--max-degree",
            "2",
        ],
    );
    assert_eq!(c, 0);
    assert_eq!(v["degrees"][1]["dim_H"], 2);
    assert_eq!(v["budget_exceeded"], false);
    assert_eq!(code(&["separability", "check", &data("z2_over_F2.json")]), 1);
}

#[test]
fn maschke_reports_the_bad_hom_set() {
    let d = tmp();
    let (c, v) = json_out(
        d.path(),
        "m.json",
        &["maschke", &data("z3.pres.json"), "--field", "Fp:3"],
    );
    assert_eq!(c, 1);
    assert_eq!(v["separable"], false);
    assert_eq!(code(&["maschke", &data("z3.pres.json"), "--field", "Q"]), 0);
    assert_eq!(code(&["maschke", &data("z3.pres.json"), "--field", "Fp:2"]), 0);
    // not a groupoid
    assert_eq!(code(&["maschke", &data("a2.pres.json"), "--field", "Q"]), 2);
}

#[test]
fn delta_accepts_discrete_categories() {
    assert_eq!(code(&["delta", &data("discrete2.pres.json")]), 0);
    assert_eq!(code(&["delta", &data("discrete2.pres.json"), "--field", "Fp:2"]), 0);
}

#[test]
fn linearize_reproduces_the_shipped_category() {
    let d = tmp();
    let out = path(d.path(), "z2.json");
    assert_eq!(
        code(&[
            "linearize",
            &data("z2.pres.json"),
            "--field",
            "Q",
            "-o",
            out.to_str().unwrap()
        ]),
        0
    );
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(data("z2_over_Q.json")).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(code(&["validate", out.to_str().unwrap()]), 0);
}

#[test]
fn module_splitting_and_embedding_on_a_separable_category() {
    let d = tmp();
    let cert = path(d.path(), "cert.json");
    let cert = cert.to_str().unwrap();
    let cat = data("z2_over_Q.json");
    assert_eq!(code(&["separability", "check", &cat, "--certificate-out", cert]), 0);
    for m in ["regular", "sign", "trivial", "random"] {
        assert_eq!(
            code(&["module", "split", &cat, "--module", m, "--certificate", cert]),
            0,
            "{m}"
        );
    }
    let (c, v) = json_out(d.path(), "z.json", &["zelinsky", &cat, "--certificate", cert]);
    assert_eq!(c, 0);
    for p in v["pairs"].as_array().unwrap() {
        assert_eq!(p["injective"], true);
    }
}

#[test]
fn long_exact_sequence_of_a2_has_a_nonzero_connecting_map() {
    let d = tmp();
    let (c, v) = json_out(
        d.path(),
        "les.json",
        &[
            "les",
            &data("a2_over_Q.json"),
            "--ses",
            "kernel-comp",
            "--max-degree",
            "2",
        ],
    );
    assert_eq!(c, 0);
    assert!(v["degrees"][0]["rank_connecting"].as_u64().unwrap() >= 1);
    assert!(v["positions"].as_array().unwrap().iter().all(|p| p["exact"] == true));
}

#[test]
fn tiny_budget_is_a_resource_error() {
    let d = tmp();
    let out = sepcat(&[
        "cohomology",
        &data("z2_over_Q.json"),
        "--bimodule",
        "canonical",
        "--budget",
        "5",
        "--json",
        path(d.path(), "c.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
}

#[test]
fn malformed_input_exits_with_two() {
    let d = tmp();
    let bad = path(d.path(), "bad.json");
    std::fs::write(&bad, "{\"objects\":").unwrap();
    let bad = bad.to_str().unwrap();
    assert_eq!(code(&["separability", "check", bad]), 2);
    assert_eq!(code(&["validate", bad]), 2);
    assert_eq!(code(&["separability", "check", "/nonexistent/cat.json"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["maschke", &data("z2.pres.json"), "--field", "Fp:4"]), 2);
    assert_eq!(
        code(&[
            "cohomology",
            &data("z2_over_Q.json"),
            "--bimodule",
            "canonical",
            "--json",
            "/nonexistent/out.json"
        ]),
        2
    );
}

#[test]
fn invalid_category_is_reported() {
    let d = tmp();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(data("z2_over_Q.json")).unwrap()).unwrap();
    // g∘e = e breaks the unit law
    let comp = v["composition"].as_array_mut().unwrap();
    for e in comp.iter_mut() {
        if e["g"] == "g" && e["f"] == "e" {
            e["result"] = serde_json::json!([{"basis": "e", "coeff": "1"}]);
        }
    }
    let f = path(d.path(), "broken.json");
    std::fs::write(&f, serde_json::to_string(&v).unwrap()).unwrap();
    let out = sepcat(&["validate", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
