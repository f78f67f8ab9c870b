use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spankern"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

struct Scratch {
    dir: TempDir,
}

impl Scratch {
    fn new() -> Scratch {
        Scratch {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn gen(&self, name: &str, args: &[&str]) -> String {
        let p = self.path(name);
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["-o", p.to_str().unwrap()]);
        let out = run(&full);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        p.to_str().unwrap().to_string()
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn cube_reduces_to_eight_vertices() {
    let t = Scratch::new();
    let q3 = t.gen("q3.edges", &["hypercube", "--dim", "3"]);
    let out = run(&["kernelize", "--problem", "li", "-p", "0", "-q", "0", "-k", "4", "-l", "2", "-i", &q3]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["outcome"], "Reduced");
    assert_eq!(v["instance"]["graph"]["n"], 8);
    assert!(v["transcript"].is_array());
}

#[test]
fn solve_exit_codes_follow_the_answer() {
    let t = Scratch::new();
    let c5 = t.gen("c5.edges", &["cycle", "-n", "5"]);
    let no = run(&["solve", "--problem", "li", "-p", "0", "-q", "0", "-k", "3", "-l", "2", "-i", &c5]);
    assert_eq!(code(&no), 1);
    assert_eq!(json(&no)["answer"], "no");
    let yes = run(&["solve", "--problem", "li", "-p", "2", "-q", "3", "-k", "2", "-l", "5", "-i", &c5]);
    assert_eq!(code(&yes), 0);
    assert_eq!(json(&yes)["witness"].as_array().unwrap().len(), 5);
    let k6 = t.gen("k6.edges", &["complete", "-n", "6"]);
    let budget = run(&["solve", "--problem", "li", "-k", "4", "-l", "30", "-i", &k6, "--max-trees", "10"]);
    assert_eq!(code(&budget), 2);
    assert_eq!(json(&budget)["answer"], "inconclusive");
}

#[test]
fn audit_passes_and_is_deterministic() {
    for problem in ["lnt", "li"] {
        let args = ["audit", "--problem", problem, "--count", "100", "--max-n", "9", "--seed", "1"];
        let a = run(&args);
        assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
        let text = String::from_utf8(a.stdout.clone()).unwrap();
        assert!(text.contains("100/100 equivalence passes"), "{text}");
        let mut single = args.to_vec();
        single.extend_from_slice(&["--threads", "1"]);
        assert_eq!(run(&single).stdout, a.stdout);
    }
    let j = run(&["audit", "--problem", "lnt", "--count", "20", "--seed", "7", "--json"]);
    let v = json(&j);
    assert_eq!(v["passed"], 20);
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);
}

#[test]
fn kernelize_witness_always_verifies() {
    let t = Scratch::new();
    let cases: Vec<(String, Vec<&str>)> = vec![
        (t.gen("theta.edges", &["theta", "--lengths", "6", "7", "8"]), vec!["-p", "2", "-q", "2", "-k", "2", "-l", "2"]),
        (t.gen("c9.edges", &["cycle", "-n", "9"]), vec!["-p", "2", "-q", "3", "-k", "2", "-l", "3"]),
        (
            t.gen("cl.edges", &["cube-like", "-n", "64", "--relabel", "--seed", "5"]),
            vec!["-p", "0", "-q", "0", "-k", "4", "-l", "2"],
        ),
        (t.gen("k5.edges", &["complete", "-n", "5"]), vec!["-p", "3", "-q", "1", "-k", "4", "-l", "3"]),
    ];
    for (i, (graph, params)) in cases.iter().enumerate() {
        let out_path = t.path(&format!("k{i}.json"));
        let mut args = vec!["kernelize", "--problem", "li", "--witness", "-i", graph, "-o", s(&out_path)];
        args.extend(params);
        let out = run(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let doc: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
        assert!(doc.get("witness").is_some(), "case {i}: no witness in {}", doc["outcome"]);
        let mut args = vec!["verify", "--problem", "li", "-i", graph, "--family", s(&out_path)];
        args.extend(params);
        let v = run(&args);
        assert_eq!(code(&v), 0, "case {i}: {}", String::from_utf8_lossy(&v.stdout));
        assert_eq!(json(&v)["passed"], true);
    }
}

#[test]
fn verify_rejects_a_bad_family() {
    let t = Scratch::new();
    let c4 = t.gen("c4.edges", &["cycle", "-n", "4"]);
    let family = t.write("f.edges", "4 3\n1 2\n2 3\n3 4\n4 3\n1 2\n2 3\n3 4\n");
    let out = run(&["verify", "--problem", "li", "-k", "2", "-l", "2", "-i", &c4, "--family", &family]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["pairs"][0]["distance"], 0);
}

#[test]
fn transcript_file_has_one_line_per_entry() {
    let t = Scratch::new();
    let c20 = t.gen("c20.edges", &["cycle", "-n", "20"]);
    let tr = t.path("t.ndjson");
    let out = run(&["kernelize", "--problem", "lnt", "--nt", "1", "-k", "2", "-l", "1", "-i", &c20, "--transcript", s(&tr)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let lines = fs::read_to_string(&tr).unwrap();
    assert_eq!(lines.lines().count(), v["transcript"].as_array().unwrap().len());
    for line in lines.lines() {
        let entry: Value = serde_json::from_str(line).unwrap();
        assert!(entry["rule"].is_string());
    }
}

#[test]
fn kernelize_output_is_byte_identical_across_runs() {
    let t = Scratch::new();
    let g = t.gen("r.edges", &["random-connected", "-n", "40", "-m", "70", "--seed", "9"]);
    let args = ["kernelize", "--problem", "lnt", "--nt", "3,5", "-p", "1", "-k", "3", "-l", "2", "-i", &g, "--witness"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn usage_errors_exit_64() {
    let t = Scratch::new();
    let c5 = t.gen("c5.edges", &["cycle", "-n", "5"]);
    let q_for_lnt = run(&["kernelize", "--problem", "lnt", "-q", "1", "-k", "1", "-l", "1", "-i", &c5]);
    assert_eq!(code(&q_for_lnt), 64);
    let nt_for_li = run(&["solve", "--problem", "li", "--nt", "1", "-k", "1", "-l", "1", "-i", &c5]);
    assert_eq!(code(&nt_for_li), 64);
    assert_eq!(code(&run(&["kernelize", "--problem", "xx", "-k", "1", "-l", "1"])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["gen", "theta"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn data_errors_exit_65() {
    let t = Scratch::new();
    let bad = t.write("bad.edges", "3 2\n1 2\n2 2\n");
    let out = run(&["solve", "--problem", "li", "-k", "1", "-l", "1", "-i", &bad]);
    assert_eq!(code(&out), 65);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let c5 = t.gen("c5.edges", &["cycle", "-n", "5"]);
    let out = run(&["solve", "--problem", "lnt", "--nt", "9", "-k", "1", "-l", "1", "-i", &c5]);
    assert_eq!(code(&out), 65);
    let out = run(&["solve", "--problem", "li", "-p", "6", "-k", "1", "-l", "1", "-i", &c5]);
    assert_eq!(code(&out), 65);
    let out = run(&["kernelize", "--problem", "li", "-k", "0", "-l", "1", "-i", &c5]);
    assert_eq!(code(&out), 65);
    let out = run(&["solve", "--problem", "li", "-k", "1", "-l", "1", "-i", s(&t.path("missing"))]);
    assert_eq!(code(&out), 65);
}

#[test]
fn construct_output_verifies() {
    let t = Scratch::new();
    let g = t.gen("cl.edges", &["cube-like", "-n", "64", "--relabel", "--seed", "2"]);
    let fam = t.path("fam.json");
    let out = run(&["construct", "-k", "5", "-l", "2", "-i", &g, "-o", s(&fam)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = run(&["verify", "--problem", "li", "-k", "5", "-l", "2", "-i", &g, "--family", s(&fam)]);
    assert_eq!(code(&v), 0);

    let edges = run(&["construct", "-k", "5", "-l", "2", "-i", &g, "--format", "edges"]);
    assert_eq!(code(&edges), 0);
    let fam_edges = t.write("fam.edges", &String::from_utf8(edges.stdout).unwrap());
    let v = run(&["verify", "--problem", "li", "-k", "5", "-l", "2", "-i", &g, "--family", &fam_edges]);
    assert_eq!(code(&v), 0);

    let c30 = t.gen("c30.edges", &["cycle", "-n", "30"]);
    assert_eq!(code(&run(&["construct", "-k", "2", "-l", "2", "-i", &c30])), 65);
    assert_eq!(code(&run(&["construct", "-k", "2", "-l", "2", "--nt", "1", "-i", &g])), 65);
}

#[test]
fn gen_is_seeded() {
    let a = run(&["gen", "random-connected", "-n", "12", "-m", "20", "--seed", "4"]);
    let b = run(&["gen", "random-connected", "-n", "12", "-m", "20", "--seed", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("12 20"));
    assert_eq!(code(&run(&["gen", "random-connected", "-n", "4", "-m", "9"])), 65);
}

#[test]
fn stdin_is_the_default_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_spankern"))
        .args(["solve", "--problem", "li", "-p", "0", "-q", "0", "-k", "3", "-l", "2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"# C5\n5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 1);
}
