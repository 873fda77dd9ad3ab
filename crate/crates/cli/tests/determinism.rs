//! Repeated invocations with fixed seeds must give byte-identical output
//! whatever the worker count.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};

use serde_json::Value;

const THREADS: [&str; 3] = ["1", "4", "8"];

fn invoke(args: &[&str], threads: &str, out: Option<&Path>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_diamlimit"));
    cmd.env_remove("DIAMLIMIT_THREADS").arg("--threads").arg(threads).args(args);
    if let Some(p) = out {
        cmd.arg("--out").arg(p);
    }
    let o = cmd.output().expect("spawn diamlimit");
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    match out {
        Some(p) => fs::read(p).unwrap(),
        None => o.stdout,
    }
}

fn strip_runtime(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("runtime_seconds");
            m.values_mut().for_each(strip_runtime);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_runtime),
        _ => {}
    }
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let csv_cases: Vec<Vec<&str>> = vec![
        vec!["simulate", "--axes", "1,0.5", "--n", "1000", "--reps", "500", "--seed", "7"],
        vec!["simulate", "--axes", "1,0.5", "--n", "1000", "--reps", "300", "--mode", "fixed", "--k", "3", "--seed", "3"],
        vec!["simulate", "--axes", "1,0.6,0.3", "--dist", "pearson:1.5", "--n", "2000", "--reps", "200", "--seed", "5"],
        vec!["limit", "--axes", "1,0.5", "--b", "10", "--reps", "500", "--k", "2", "--seed", "7"],
        vec!["limit", "--axes", "1,0.5", "--intensity", "lambda:1,1,0.5,1", "--reps", "300", "--seed", "9"],
    ];
    let json_cases: Vec<Vec<&str>> = vec![
        vec!["check", "--body", "ellipsoid", "--axes", "1,0.5"],
        vec!["bounds", "--d", "3", "--e", "2", "--axes", "1,1,0.5", "--n", "500", "--reps", "200", "--seed", "1"],
    ];

    let mut mismatches = Vec::new();
    for (i, args) in csv_cases.iter().enumerate() {
        let outputs: Vec<Vec<u8>> = THREADS
            .iter()
            .map(|t| invoke(args, t, Some(&dir.path().join(format!("c{i}_t{t}.csv")))))
            .collect();
        if outputs.iter().any(|o| o != &outputs[0]) {
            mismatches.push(args.join(" "));
        }
        // a second run at the same thread count
        if invoke(args, "4", Some(&dir.path().join(format!("c{i}_again.csv")))) != outputs[1] {
            mismatches.push(format!("{} (rerun)", args.join(" ")));
        }
    }
    for args in &json_cases {
        let outputs: Vec<Value> = THREADS
            .iter()
            .map(|t| {
                let mut v: Value = serde_json::from_slice(&invoke(args, t, None)).unwrap();
                strip_runtime(&mut v);
                v
            })
            .collect();
        if outputs.iter().any(|o| o != &outputs[0]) {
            mismatches.push(args.join(" "));
        }
    }

    let pass = mismatches.is_empty();
    println!(
        "criterion 12: {} {} commands x threads {{1,4,8}}, {} mismatches{}",
        if pass { "PASS" } else { "FAIL" },
        csv_cases.len() + json_cases.len(),
        mismatches.len(),
        if pass { String::new() } else { format!(": {mismatches:?}") }
    );
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
