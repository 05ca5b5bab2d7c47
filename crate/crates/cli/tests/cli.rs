use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathsep")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathsep")).args(args).env(key, val).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn named(dir: &Path, name: &str) -> String {
    let p = dir.join(format!("{name}.g"));
    let o = run(&["gen", "-f", "named", "--name", name, "-o", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    p.to_str().unwrap().to_string()
}

#[test]
fn bipartite_build_then_verify_and_profile() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("k25.p");
    let o = run(&["build", "--bipartite", "--a", "2", "--b", "5", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("5 paths"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 5);

    let g = d.path().join("k25.g");
    assert_eq!(code(&run(&["gen", "-f", "complete-bipartite", "--a", "2", "--b", "5", "-o", g.to_str().unwrap()])), 0);
    let o = run(&["verify", "-g", g.to_str().unwrap(), "-p", out.to_str().unwrap()]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "PASS"));

    let o = run(&["profile", "-g", g.to_str().unwrap(), "-p", out.to_str().unwrap(), "--a", "2", "--b", "5"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("e2=10"), "{s}");
    assert!(s.contains("2ap: slack 0"), "{s}");
    assert!(s.contains("certificate holds"), "{s}");
}

#[test]
fn build_methods_and_refusals() {
    let d = tempfile::tempdir().unwrap();
    let pet = named(d.path(), "petersen");
    let o = run(&["build", "-i", &pet, "-m", "cubic"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().count() <= 10);

    let k4 = named(d.path(), "k4");
    let o = run(&["build", "-i", &k4, "-m", "degenerate"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("not 2-degenerate"));
    assert_eq!(code(&run(&["build", "-i", &k4, "-m", "cubic"])), 3);
    assert_eq!(stdout(&run(&["build", "-i", &k4])).lines().count(), 5);

    let k5 = put(d.path(), "k5.g", "5 10\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    assert_eq!(code(&run(&["build", "-i", &k5])), 3);
    assert_eq!(code(&run(&["build", "-i", &k5, "-m", "subcubic"])), 3);
}

#[test]
fn build_trace_and_json_forms() {
    let d = tempfile::tempdir().unwrap();
    let g = put(d.path(), "tri.g", "3 3\n0 1\n1 2\n0 2\n");
    let trace = d.path().join("t.json");
    let out = d.path().join("p.json");
    let o = run(&[
        "build", "-i", &g, "-m", "degenerate", "--format", "json", "-o", out.to_str().unwrap(), "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let sys: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sys["n"], 3);
    assert_eq!(sys["paths"].as_array().unwrap().len(), 3);
    let t: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["base_cases"][0]["shape"], "triangle");
    let o = run(&["verify", "-g", &g, "-p", out.to_str().unwrap(), "--strict"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_failures_and_witness() {
    let d = tempfile::tempdir().unwrap();
    let g = put(d.path(), "p3.g", "3 2\n0 1\n1 2\n");
    let p = put(d.path(), "full.p", "0 1 2\n");
    let o = run(&["verify", "-g", &g, "-p", &p]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness:"));
    let o = run(&["--json", "verify", "-g", &g, "-p", &p]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "FAIL");
    assert_eq!(v["witness"]["kind"], "comparable");

    let tri = put(d.path(), "tri.g", "3 3\n0 1\n1 2\n0 2\n");
    let rot = put(d.path(), "rot.p", "# rotations\n0 1 2\n1 2 0\n2 0 1\n");
    assert_eq!(code(&run(&["verify", "-g", &tri, "-p", &rot, "--strict"])), 0);
    let four = put(d.path(), "four.p", "0 1 2\n1 2 0\n2 0 1\n0 1\n");
    assert_eq!(code(&run(&["verify", "-g", &tri, "-p", &four])), 0);
    let o = run(&["verify", "-g", &tri, "-p", &four, "--strict"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("structure:"));

    let bad = put(d.path(), "bad.p", "0 2 1\n0 1 2\n");
    assert_eq!(code(&run(&["verify", "-g", &g, "-p", &bad])), 2);
}

#[test]
fn parse_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let g = put(d.path(), "loop.g", "3 2\n0 1\n1 1\n");
    let o = run(&["build", "-i", &g]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert_eq!(code(&run(&["build", "-i", "/nonexistent/graph"])), 2);
    assert_eq!(code(&run(&["bounds", "--a", "9", "--b", "8"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
}

#[test]
fn exact_outputs() {
    let d = tempfile::tempdir().unwrap();
    for (name, want) in [("k4", "ssp = 5"), ("triangle", "ssp = 3"), ("p3", "ssp = 2")] {
        let g = named(d.path(), name);
        let o = run(&["exact", "-g", &g]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o).trim(), want);
    }
    let g = named(d.path(), "k4");
    let w = d.path().join("w.p");
    let o = run(&["--json", "exact", "-g", &g, "-o", w.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["ssp"].as_u64(), v["lower"].as_u64(), v["upper"].as_u64()), (Some(5), Some(5), Some(5)));
    assert_eq!(code(&run(&["verify", "-g", &g, "-p", w.to_str().unwrap()])), 0);

    let pet = named(d.path(), "petersen");
    let o = run(&["exact", "-g", &pet, "--max-edges", "10"]);
    assert_eq!(code(&o), 4);
    let o = run(&["exact", "-g", &pet, "--time-limit", "0.2"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn bounds_outputs() {
    let o = run(&["bounds", "--a", "3", "--b", "8"]);
    assert!(stdout(&o).contains("exact = 8"));
    let o = run(&["bounds", "--a", "8", "--b", "8"]);
    assert!(stdout(&o).contains("lower ≈ 9.2982"));
    let o = run(&["--json", "bounds", "--a", "8", "--b", "8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["lower"].as_f64().unwrap() - (10f64.sqrt() - 2.0) * 8.0).abs() < 1e-9);
    assert!(v["exact"].is_null() && v["upper"].is_null());
    let o = run(&["bounds", "--table", "--b", "8"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "a,lower_bound");
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[1], "1,8.0");
    assert_eq!(lines[8], "8,9.29822");
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&run(&["gen", "-f", "two-degenerate", "-n", "50", "-s", "7"]));
    let b = stdout(&run(&["gen", "-f", "two-degenerate", "-n", "50", "-s", "7"]));
    assert_eq!(a, b);
    assert!(a.starts_with("50 "));
    assert_ne!(a, stdout(&run(&["gen", "-f", "two-degenerate", "-n", "50", "-s", "8"])));
    let p = stdout(&run(&["gen", "-f", "named", "--name", "petersen"]));
    assert!(p.starts_with("10 15\n"));
    assert_eq!(code(&run(&["gen", "-f", "cubic", "-n", "7"])), 2);
    assert_eq!(code(&run(&["gen", "-f", "named", "--name", "nope"])), 2);
}

#[test]
fn manifest_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let m1 = d.path().join("m1.json");
    let m2 = d.path().join("m2.json");
    let args = |m: &Path| {
        vec!["gen".to_string(), "-f".into(), "cubic".into(), "-n".into(), "12".into(), "-s".into(), "3".into(), "--manifest".into(), m.to_str().unwrap().to_string()]
    };
    let a1: Vec<String> = args(&m1);
    let a2: Vec<String> = args(&m2);
    let o1 = run(&a1.iter().map(String::as_str).collect::<Vec<_>>());
    let o2 = run(&a2.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(stdout(&o1), stdout(&o2));
    let v1: serde_json::Value = serde_json::from_str(&fs::read_to_string(&m1).unwrap()).unwrap();
    let v2: serde_json::Value = serde_json::from_str(&fs::read_to_string(&m2).unwrap()).unwrap();
    assert_eq!(v1["command"], "gen");
    assert_eq!(v1["seed"], 3);
    assert_eq!(v1["exit_code"], 0);
    assert_eq!(v1["outcome"], v2["outcome"]);
}

#[test]
fn loose_ids_and_thread_cap() {
    let d = tempfile::tempdir().unwrap();
    let g = put(d.path(), "loose.g", "# sparse ids\n0 3\n10 20\n20 35\n10 35\n");
    assert_eq!(code(&run(&["build", "-i", &g])), 2);
    let o = run(&["--loose", "build", "-i", &g]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("# vertex 2 = input id 35"), "{s}");
    let k4 = named(d.path(), "k4");
    let o = run_env(&["exact", "-g", &k4], "PATHSEP_MAX_THREADS", "1");
    assert_eq!(stdout(&o).trim(), "ssp = 5");
    assert_eq!(code(&run_env(&["exact", "-g", &k4], "PATHSEP_MAX_THREADS", "zero")), 2);
}
