use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn arbor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arbor"))
        .args(args)
        .env("SC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn generate_then_validate_and_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.txt");
    let path = path.to_str().unwrap();
    let out = arbor(&["generate", "clique:k=6", "--out", path]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&arbor(&["validate", path])), 0);
    let out = arbor(&["count-exact", path]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "n=6 m=15 triangles=20 degeneracy=5");
}

#[test]
fn validator_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = write(dir.path(), "a.txt", "# n=3\n0 one\n");
    let loops = write(dir.path(), "b.txt", "# n=3\n1 1\n");
    let missing = dir.path().join("none.txt");
    assert_eq!(code(&arbor(&["validate", &malformed])), 2);
    assert_eq!(code(&arbor(&["validate", &loops])), 3);
    assert_eq!(code(&arbor(&["validate", missing.to_str().unwrap()])), 2);
}

#[test]
fn estimate_writes_one_row_per_replica() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = arbor(&[
        "estimate",
        "path:n=50",
        "--algo",
        "edges-testable",
        "--eps",
        "0.5",
        "--delta",
        "0.5",
        "--replicas",
        "4",
        "--seed",
        "100",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "seed,graph_id,exact,kind,estimate,rel_err,q_degree,q_neighbor,q_pair,q_edge,q_vertex,ms");
    assert_eq!(lines.len(), 5);
    for (i, line) in lines[1..].iter().enumerate() {
        assert!(line.starts_with(&format!("{},path:n=50,49,estimate,49,0,", 100 + i)), "{line}");
        assert!(line.ends_with(",0"));
    }
}

#[test]
fn estimate_output_does_not_depend_on_thread_count() {
    let args = [
        "estimate",
        "forest:n=30,alpha=2,seed=1+plant:k=6,seed=2",
        "--algo",
        "triangles-testable",
        "--eps",
        "0.5",
        "--delta",
        "0.5",
        "--advice",
        "5",
        "--replicas",
        "4",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_arbor"))
            .args(args)
            .env("SC_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("3"));
    assert_eq!(one, run("1"));
}

#[test]
fn budget_rows_and_parameter_errors() {
    let out = arbor(&["estimate", "clique:k=6", "--algo", "single-guess", "--guess", "20", "--budget", "5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains(",budget-exhausted,,,"), "{text}");

    for (args, field) in [
        (vec!["--algo", "single-guess"], "guess"),
        (vec!["--algo", "edges-testable", "--eps", "1.5"], "eps"),
        (vec!["--algo", "edges-testable", "--replicas", "0"], "replicas"),
        (vec!["--algo", "triangles-testable", "--advice", "0"], "advice"),
    ] {
        let mut full = vec!["estimate", "clique:k=6"];
        full.extend(args);
        let out = arbor(&full);
        assert_eq!(code(&out), 3);
        assert!(String::from_utf8_lossy(&out.stderr).contains(&format!("`{field}`")));
    }
}

#[test]
fn unreadable_graph_exits_2() {
    let out = arbor(&["estimate", "/nonexistent/graph.txt", "--algo", "edges-testable"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn edge_sweep_reports_spread() {
    let out = arbor(&["sweep", "--family", "edges", "--n", "60", "--alphas", "1,2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,n,m,exact,advice,median_queries,curve,ratio");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("summary,"));
}
