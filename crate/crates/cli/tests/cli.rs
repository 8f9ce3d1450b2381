use std::process::{Command, Output};

fn coxsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxsig")).args(args).output().expect("run coxsig")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = coxsig(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn strings(v: &serde_json::Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn h3_signature_vector_in_alternate_numbering() {
    let v = json(&["sigvec", "H3", "--alpha", "2,4,3", "--labeling", "example73"]);
    assert_eq!(strings(&v["vector"]), ["0", "738", "0", "0", "0", "468", "0", "36", "18", "0"]);
    assert_eq!(v["total"], "1260");
}

#[test]
fn brute_force_flag_agrees() {
    let a = json(&["sigvec", "B3", "--alpha", "2,2,1"]);
    let b = json(&["sigvec", "B3", "--alpha", "2,2,1", "--brute"]);
    assert_eq!(a["vector"], b["vector"]);
}

#[test]
fn symmetric_alias_and_group_info() {
    let v = json(&["group", "S4"]);
    assert_eq!(v["type"], "A3");
    assert_eq!(v["order"], "24");
    let v = json(&["classes", "S4"]);
    assert_eq!(v["classes"].as_array().unwrap().len(), 5);
}

#[test]
fn iss_formats() {
    let v = json(&["iss", "B2"]);
    assert_eq!(v["triangular"], true);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 5);
    let csv = coxsig(&["iss", "A2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("signature,"));
    let tex = coxsig(&["iss", "A2", "--format", "latex"]);
    assert!(String::from_utf8(tex.stdout).unwrap().contains("\\begin{pmatrix}"));
}

#[test]
fn iss_from_given_signatures() {
    let v = json(&["iss", "A2", "--signatures", "0,0;0,1;1,1"]);
    assert_eq!(v["diagonal_nonzero"], true);
}

#[test]
fn dpoly_and_decompose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&["dpoly", "S4", "--rep", "young:2,2"]);
    assert_eq!(v["degree"], 2);
    let path = dir.path().join("p.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let d = json(&["decompose", "S4", "--poly", path.to_str().unwrap()]);
    assert_eq!(d["components"][0]["name"], "(2,2)");
    assert_eq!(d["components"][0]["multiplicity"], 1);
}

#[test]
fn decompose_text_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "x0^2 - x1^2").unwrap();
    let d = json(&["decompose", "S2", "--poly", path.to_str().unwrap()]);
    assert_eq!(d["components"].as_array().unwrap().len(), 2);
    std::fs::write(&path, "x0^2 + x1").unwrap();
    let out = coxsig(&["decompose", "S2", "--poly", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn restriction_branches() {
    let v = json(&["restrict", "--from", "S4", "--to", "S3", "--rep", "young:3,1"]);
    let names: Vec<&str> = v["decomposition"].as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["(3)", "(2,1)"]);
}

#[test]
fn cuspcheck_f4_tie_word() {
    let out = coxsig(&["cuspcheck", "F4", "--word", "1213213234", "--target", "4", "--timing"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["flag"], 0);
    assert!(v["elapsed"].is_number());
    assert!(v["candidates_checked"].as_u64().unwrap() > 0);
}

#[test]
fn verify_passes_on_small_types() {
    for t in ["A3", "B3", "I2(5)", "A1xA2"] {
        let v = json(&["verify", t, "--samples", "5"]);
        assert_eq!(v["passed"], true, "{t}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(coxsig(&["nonsense"]).status.code(), Some(2));
    assert_eq!(coxsig(&["sigvec", "H3"]).status.code(), Some(2));
    assert_eq!(coxsig(&["sigvec", "H3", "--alpha", "1,1"]).status.code(), Some(1));
    assert_eq!(coxsig(&["group", "Q7"]).status.code(), Some(1));
    assert_eq!(coxsig(&["--help"]).status.code(), Some(0));
}

#[test]
fn thread_count_does_not_change_output() {
    let one = coxsig(&["iss", "H3", "--threads", "1"]);
    let four = coxsig(&["iss", "H3", "--threads", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}
