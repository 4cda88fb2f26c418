#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

/// A real matrix in spec form.
pub fn real(rows: &[&[f64]]) -> Value {
    json!(rows
        .iter()
        .map(|r| r.iter().map(|&x| [x, 0.0]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn diag(d: &[f64]) -> Value {
    let n = d.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { d[i] } else { 0.0 }).collect())
        .collect();
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    real(&refs)
}

pub fn bsc(p: f64) -> Value {
    json!({"kind": "dmc", "rows": [[1.0 - p, p], [p, 1.0 - p]]})
}

pub fn bec(e: f64) -> Value {
    json!({"kind": "dmc", "rows": [[1.0 - e, 0.0, e], [0.0, 1.0 - e, e]]})
}

/// Pure states `|0>` and `a|0> + b|1>` with `<psi0|psi1> = overlap`.
pub fn pure_pair(overlap: f64) -> Value {
    let b = (1.0 - overlap * overlap).sqrt();
    json!({"kind": "cq", "kets": [[[1.0, 0.0], [0.0, 0.0]], [[overlap, 0.0], [b, 0.0]]]})
}

/// Diagonal binary adder MAC: output `x + y` through a small symmetric noise.
pub fn adder_mac() -> Value {
    let out = |s: usize| {
        let mut d = [0.05; 3];
        d[s] = 0.9;
        diag(&d)
    };
    json!({"kind": "cq_mac", "alphabets": [2, 2], "matrices": [out(0), out(1), out(1), out(2)]})
}

pub fn amplitude_damping(gamma: f64) -> Value {
    json!({"kind": "qubit_kraus", "matrices": [
        real(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]]),
        real(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]]),
    ]})
}

pub struct Workspace {
    pub dir: tempfile::TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    pub fn spec(&self, name: &str, v: &Value) -> PathBuf {
        self.write(name, &serde_json::to_string(v).unwrap())
    }

    pub fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn polarlab(args: &[&str], cwd: &Path) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_polarlab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap();
    Outcome {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Data rows of a CSV (comment and column lines dropped).
pub fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}
