use std::fs;
use std::process::{Command, Output};

fn subpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subpack")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn bound_json_schema() {
    let o = subpack(&["bound", "2", "6", "4", "3", "2", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    for key in ["q", "n", "k", "t", "lambda", "lower", "upper", "methods"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["upper"], 126);
    let methods = v["methods"].as_array().unwrap();
    let value = |name: &str| methods.iter().find(|m| m["method"] == name && m["side"] == "upper").map(|m| m["value"].clone());
    assert_eq!(value("quadratic"), Some(126.into()));
    assert_eq!(value("improved-johnson"), Some(132.into()));
    assert_eq!(value("classic-johnson"), Some(134.into()));
}

#[test]
fn bound_values() {
    let v = json(&subpack(&["bound", "2", "9", "4", "2", "1", "--json"]));
    assert_eq!(v["upper"], 1156);
    let v = json(&subpack(&["--no-registry", "bound", "2", "6", "5", "5", "2", "--json"]));
    assert_eq!((v["lower"].clone(), v["upper"].clone()), (63.into(), 63.into()));
    let text = stdout(&subpack(&["bound", "2", "6", "4", "3", "2", "--no-registry"]));
    assert!(!text.contains("registry"));
}

#[test]
fn method_selection() {
    let v = json(&subpack(&["bound", "2", "6", "4", "3", "2", "--no-registry", "--methods", "trivial,classic-johnson", "--json"]));
    // the recursion sees only the selected methods too, so this is weaker than 134
    assert!(v["upper"].as_u64().unwrap() >= 134);
    let uppers: Vec<&str> =
        v["methods"].as_array().unwrap().iter().filter(|m| m["side"] == "upper").map(|m| m["method"].as_str().unwrap()).collect();
    assert_eq!(uppers, vec!["trivial", "classic-johnson"]);
    let o = subpack(&["bound", "2", "6", "4", "3", "2", "--methods", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(subpack(&["bound", "2", "4", "5", "1", "1"]).status.code(), Some(2));
    assert_eq!(subpack(&["bound", "6", "4", "2", "1", "1"]).status.code(), Some(2));
    assert_eq!(subpack(&["bound", "2", "4"]).status.code(), Some(2));
    assert_eq!(subpack(&["construct", "echelon-ferrers", "2", "4", "2", "2", "2"]).status.code(), Some(2));
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mrd.txt");
    let p = path.to_str().unwrap();
    let o = subpack(&["construct", "lifted-mrd", "2", "4", "2", "2", "2", "-o", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4 blocks"));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "2 4 2 4"));
    assert!(subpack(&["verify", p, "covering", "2", "2"]).status.success());
    // two 2-subspaces of F_2^4 meeting trivially cannot also cover with delta 3
    assert_eq!(subpack(&["verify", p, "covering", "3", "2"]).status.code(), Some(1));

    let o = subpack(&["construct", "linkage", "2", "7", "3", "2", "2", "-o", p]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("64 blocks"));
    let o = subpack(&["construct", "dual-linkage", "2", "6", "2", "1", "2", "-o", p, "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(v["size"].as_u64().unwrap() >= 32);
    assert_eq!(v["verification"]["valid"], true);
}

#[test]
fn verify_rejects_duplicates_and_accepts_all_points() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.txt");
    fs::write(&dup, "2 3 1 2\n\n100\n\n100\n").unwrap();
    let o = subpack(&["verify", dup.to_str().unwrap(), "packing", "1", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("repeats"));

    let mut text = String::from("2 6 1 63\n");
    for v in 1u32..64 {
        text.push_str(&format!("\n{:06b}\n", v));
    }
    let all = dir.path().join("points.txt");
    fs::write(&all, text).unwrap();
    let o = subpack(&["verify", all.to_str().unwrap(), "packing", "1", "1", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["report"]["valid"], true);
}

#[test]
fn table_cells() {
    let o = subpack(&["table", "2", "6", "2", "--json"]);
    let v = json(&o);
    let cells = v["table"]["cells"].as_array().unwrap();
    let cell = |k: u64, t: u64| cells.iter().find(|c| c["k"] == k && c["t"] == t).unwrap().clone();
    let c = cell(5, 4);
    assert!(c["lower"].as_u64().unwrap() <= 32 && 32 <= c["upper"].as_u64().unwrap());
    let v = json(&subpack(&["table", "2", "7", "2", "--json"]));
    let cells = v["table"]["cells"].as_array().unwrap();
    assert!(cells.iter().any(|c| c["k"] == 2 && c["t"] == 2 && c["upper"] == 2667));
    let text = stdout(&subpack(&["table", "2", "6", "2", "--compare"]));
    assert!(text.contains("k=4 t=3: ours 121-126, printed 121-126  same"));
}

#[test]
fn ilp_files() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("m.lp");
    let o = subpack(&["ilp", "2", "4", "2", "1", "1", "-o", lp.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("35 variables, 15 rows"));
    let model = fs::read_to_string(&lp).unwrap();
    assert!(model.contains("Maximize"));
    let index = fs::read_to_string(dir.path().join("m.lp.index")).unwrap();
    assert_eq!(index.lines().count(), 35);
    assert!(index.starts_with("x0 "));

    let mps = dir.path().join("m.mps");
    assert!(subpack(&["ilp", "2", "4", "2", "1", "1", "--format", "mps", "-o", mps.to_str().unwrap()]).status.success());
    let a = subpack::ilp::parse_lp(&model).unwrap();
    let b = subpack::ilp::parse_mps(&fs::read_to_string(&mps).unwrap()).unwrap();
    assert_eq!(a, b);

    let o = subpack(&["ilp", "2", "8", "4", "2", "1", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("200787") && err.contains("1000"), "{err}");
}

#[test]
fn search_commands() {
    let v = json(&subpack(&["search", "exhaustive", "2", "4", "2", "1", "1", "--json"]));
    assert_eq!((v["value"].clone(), v["complete"].clone()), (5.into(), true.into()));
    let a = stdout(&subpack(&["search", "greedy", "2", "5", "2", "1", "1", "--seed", "7"]));
    let b = stdout(&subpack(&["search", "greedy", "2", "5", "2", "1", "1", "--seed", "7"]));
    assert_eq!(a, b);
    let o = subpack(&["--no-registry", "--methods", "trivial", "search", "exhaustive", "2", "5", "3", "2", "2", "--budget", "20"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("budget exhausted"));
}
