use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_surfcluster"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = bin().args(args).env_remove("SURFCLUSTER_SEED").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let out = run(args, stdin);
    assert!(out.status.success(), "{:?} failed: {}", args, String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn tmp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("surfcluster-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn square_exchange_pipeline() {
    let s = ok(&["surface", "new", "--polygon", "4"], "");
    let t = ok(&["triangulate"], &s);
    let e = json(&ok(&["exchange"], &t));
    let eps = e["epsilon"]["rows"].as_array().unwrap();
    let m = e["m"]["rows"].as_array().unwrap();
    let p = e["p"]["rows"].as_array().unwrap();
    let tri = json(&t);
    let n = eps.len();
    assert_eq!(n, 5);
    for i in 0..n {
        let boundary = tri["edges"][i]["kind"] == "boundary";
        for j in 0..n {
            let x = eps[i][j].as_i64().unwrap();
            assert_eq!(x, -eps[j][i].as_i64().unwrap());
            let want_m = if i == j && boundary { -1 } else { 0 };
            assert_eq!(m[i][j].as_i64().unwrap(), want_m);
            assert_eq!(p[i][j].as_i64().unwrap(), x + want_m);
        }
    }
    // the diagonal shares a triangle with all four sides, each side with two edges
    let diag = (0..n).find(|&i| tri["edges"][i]["kind"] == "interior").unwrap();
    for i in 0..n {
        let nonzero = (0..n).filter(|&j| eps[i][j] != 0).count();
        assert_eq!(nonzero, if i == diag { 4 } else { 2 });
    }
}

#[test]
fn verify_duality_on_square() {
    let v = json(&ok(&["verify", "--suite", "duality", "--surface", "square", "--bound", "2"], ""));
    assert_eq!(v["reports"][0]["passed"], true);
    assert_eq!(v["reports"][0]["checked"], 243);
}

#[test]
fn verify_failure_prints_counterexample() {
    let out = run(&["verify", "--suite", "index", "--surface", "square"], "");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("index of the integrality sublattice is 8"), "{}", err);
    assert_eq!(json(&String::from_utf8(out.stdout).unwrap())["reports"][0]["passed"], false);
}

#[test]
fn amalgamation_example_renders_exactly() {
    let lam = data("amal_dominance.json");
    let glued = ok(&["glue", "--lam", lam.to_str().unwrap(), "--left", "α_L", "--right", "α_R", "--name", "\u{1fb1}"], "");
    let ix = json(&ok(&["ix"], &glued));
    assert_eq!(ix["curves"]["text"], "(A_βA_δ + A_γA_ε)/A_\u{1fb1}");
    // the pinnings left on gamma and epsilon contribute 1/(A_gamma A_epsilon)
    assert_eq!(ix["value"]["text"], "(A_βA_δ + A_γA_ε)/(A_γA_εA_\u{1fb1})");
    let rep = json(&ok(&["check-amal", "--lam", lam.to_str().unwrap(), "--left", "α_L", "--right", "α_R"], ""));
    assert_eq!(rep["status"], "negative_pinning_sum");
    assert_eq!(rep["equal"], false);
    assert_eq!(rep["is_term"], true);
}

#[test]
fn schema_errors_carry_pointers() {
    let bad = r#"{"edges":[{"id":0,"kind":"boundary","mplus":0,"mminus":1},{"id":1,"kind":"edge","mplus":1,"mminus":0}],"triangles":[]}"#;
    let out = run(&["exchange"], bad);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("/edges/1/kind"), "{}", err);

    let t = ok(&["triangulate"], &ok(&["surface", "new", "--polygon", "4"], ""));
    let tri = tmp("square.json", &t);
    let lam = r#"{"components":[{"word":[0,77],"kind":"arc","weight":{"num":1,"den":1}}]}"#;
    let out = run(&["shear", "--tri", tri.to_str().unwrap(), "--lam", tmp("bad-lam.json", lam).to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("/components/0/word"));
}

#[test]
fn domain_errors_are_verbatim() {
    let t = ok(&["triangulate"], &ok(&["surface", "new", "--polygon", "4"], ""));
    let out = run(&["flip", "--edge", "0"], &t);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stderr).unwrap().trim(), "error: edge 0 is not an interior edge");
}

#[test]
fn output_is_deterministic() {
    let t = ok(&["triangulate"], &ok(&["surface", "new", "--name", "annulus"], ""));
    let c = ok(&["chart", "--kind", "a"], &t);
    let a = ok(&["mutate-a", "--edge", "1"], &c);
    let b = ok(&["mutate-a", "--edge", "1"], &c);
    assert_eq!(a, b);
    assert_eq!(json(&a)["kind"], "a");
}

#[test]
fn mutation_round_trip_through_files() {
    let t = ok(&["triangulate"], &ok(&["surface", "new", "--polygon", "5"], ""));
    let c = ok(&["chart", "--kind", "x"], &t);
    let c1 = json(&ok(&["mutate-x", "--edge", "5"], &c));
    let new = c1["triangulation"]["next_id"].as_u64().unwrap() - 1;
    let c2 = ok(&["mutate-x", "--edge", &new.to_string()], &c1.to_string());
    // mutating back restores every coordinate; the edge comes back under a fresh id
    let v0 = &json(&c)["symbolic"];
    let v2 = &json(&c2)["symbolic"];
    let fresh = json(&c2)["triangulation"]["next_id"].as_u64().unwrap() - 1;
    for (k, v) in v0.as_object().unwrap() {
        let key = if k == "5" { fresh.to_string() } else { k.clone() };
        let num = &v2[&key]["num"]["terms"];
        let den = &v2[&key]["den"]["terms"];
        let vars0 = &v["num"]["vars"];
        if k == "5" {
            assert_eq!(v2[&key]["num"]["vars"], serde_json::json!([5]));
        } else {
            assert_eq!(&v2[&key]["num"]["vars"], vars0, "edge {}", k);
        }
        assert_eq!(num.as_array().unwrap().len(), 1);
        assert_eq!(den.as_array().unwrap().len(), 1);
    }
}

#[test]
fn json_out_and_seed() {
    let dir = std::env::temp_dir().join(format!("surfcluster-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = bin()
        .args(["verify", "--suite", "round-trip", "--surface", "square", "--bound", "3", "--json-out", path.to_str().unwrap()])
        .env("SURFCLUSTER_SEED", "17")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v = json(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(v["seed"], 17);
    assert_eq!(v["reports"][0]["sampled"], false);
    assert_eq!(v["reports"][0]["checked"], 7i64.pow(5));
}

#[test]
fn rank_of_square_family() {
    let v = json(&ok(&["rank", "--surface", "square", "--bound", "1", "--kind", "x"], ""));
    assert_eq!(v["size"], 243);
    assert_eq!(v["independent"], true);
}

#[test]
fn wilson_of_a_diagonal() {
    let t = ok(&["triangulate"], &ok(&["surface", "new", "--polygon", "4"], ""));
    let c = tmp("xchart.json", &ok(&["chart", "--kind", "x"], &t));
    let tri = json(&t);
    // enter through boundary side 0 and leave through the next boundary interval
    let tris = tri["triangles"].as_array().unwrap();
    let first = tris.iter().find(|x| x.as_array().unwrap().iter().any(|s| s == 0)).unwrap();
    let at = first.as_array().unwrap().iter().position(|s| s == 0).unwrap();
    let exit = first[(at + 1) % 3].as_u64().unwrap();
    let word = format!(r#"{{"components":[{{"word":[0,{}],"kind":"arc","weight":{{"num":1,"den":1}}}}]}}"#, exit);
    let out = run(&["wilson", "--word", tmp("word.json", &word).to_str().unwrap(), "--chart", c.to_str().unwrap()], "");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(v["word"]["turns"].as_array().unwrap().len(), 1);
    assert!(v["matrix"][1][1]["text"].as_str().is_some());
}
