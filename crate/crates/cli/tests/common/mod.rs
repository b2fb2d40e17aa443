#![allow(dead_code)]

use std::path::{Path, PathBuf};

use gradhooke::constitutive::MaterialParams;
use gradhooke::torsion::CrossSectionMesh;
use serde_json::{json, Value};
use tempfile::TempDir;

pub struct Workspace {
    pub dir: TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Workspace { dir: tempfile::tempdir().expect("temporary directory") }
    }

    pub fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, contents).expect("write fixture");
        p
    }

    pub fn material(&self, name: &str, m: &MaterialParams<f64>) -> PathBuf {
        self.write(name, &material_json(m).to_string())
    }

    pub fn mesh(&self, name: &str, mesh: &CrossSectionMesh<f64>) -> PathBuf {
        let boundary: Vec<Value> =
            mesh.boundary().iter().map(|e| json!({ "edge": e.nodes, "loop": e.loop_id })).collect();
        let doc = json!({ "nodes": mesh.nodes(), "triangles": mesh.triangles(), "boundary": boundary });
        self.write(name, &doc.to_string())
    }
}

pub fn material_json(m: &MaterialParams<f64>) -> Value {
    json!({
        "lambda": m.lambda, "mu": m.mu, "c2": m.c2, "c3": m.c3, "c5": m.c5,
        "c11": m.c11, "c15": m.c15, "c8": m.c8,
    })
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}{}", self.stdout, self.stderr))
    }
}

pub fn run(args: &[&str]) -> Run {
    run_threads(args, None)
}

pub fn run_threads(args: &[&str], threads: Option<&str>) -> Run {
    let argv = std::iter::once("gradhooke").chain(args.iter().copied());
    let out = gradhooke_cli::run_with_threads(argv, threads);
    Run { code: out.code, stdout: String::from_utf8(out.stdout).expect("utf-8 output"), stderr: out.stderr }
}

pub fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

pub fn fs(v: &Value) -> Vec<f64> {
    v.as_array().expect("array").iter().map(f).collect()
}

/// Saint-Venant torsion constant of the unit square from the series
/// `J = a⁴/3 (1 − 192/π⁵ Σ_{n odd} tanh(nπ/2)/n⁵)`.
pub fn square_torsion_constant() -> f64 {
    let pi = std::f64::consts::PI;
    let sum: f64 = (0..200).map(|i| 2 * i + 1).map(|n| (n as f64 * pi / 2.0).tanh() / (n as f64).powi(5)).sum();
    (1.0 - 192.0 / pi.powi(5) * sum) / 3.0
}
