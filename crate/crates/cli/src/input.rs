//! Input file formats.
//!
//! Material: `{"lambda", "mu", "c2", "c3", "c5", "c11", "c15", "c8"?}`.
//! Mesh: `{"nodes": [[x, y]], "triangles": [[a, b, c]], "boundary"?: [{"edge": [a, b], "loop": l}]}`
//! or `{"annulus": {"r_int", "r_ext", "n_radial"?, "n_angular"?}}`.
//! Tensor: `{"packed": [18 values]}` or `{"components": [[[..]]]}`.
//! Unknown keys are rejected everywhere.

use std::path::Path;

use gradhooke::constitutive::MaterialParams;
use gradhooke::tensor::{Tensor3, PAIRS};
use gradhooke::torsion::CrossSectionMesh;
use gradhooke::SymTri3F64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::{CliError, Result};

/// Provenance of one input file in a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn input_err(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Input { path: path.to_path_buf(), message: message.into() }
}

fn read(role: &str, path: &Path) -> Result<(Vec<u8>, InputDigest)> {
    let bytes = std::fs::read(path).map_err(|e| input_err(path, format!("cannot read: {e}")))?;
    let digest = InputDigest { role: role.into(), path: path.display().to_string(), sha256: sha256_hex(&bytes) };
    Ok((bytes, digest))
}

fn parse<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| input_err(path, format!("malformed JSON: {e}")))
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    lambda: f64,
    mu: f64,
    c2: f64,
    c3: f64,
    c5: f64,
    c11: f64,
    c15: f64,
    #[serde(default)]
    c8: f64,
}

pub fn parse_material(path: &Path, bytes: &[u8]) -> Result<MaterialParams<f64>> {
    let f: MaterialFile = parse(path, bytes)?;
    let m = MaterialParams::new(f.lambda, f.mu, f.c2, f.c3, f.c5, f.c11, f.c15).hemitropic(f.c8);
    m.validate().map_err(|e| input_err(path, e.to_string()))?;
    Ok(m)
}

pub fn load_material(path: &Path) -> Result<(MaterialParams<f64>, InputDigest)> {
    let (bytes, digest) = read("material", path)?;
    Ok((parse_material(path, &bytes)?, digest))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryEntry {
    edge: [usize; 2],
    #[serde(rename = "loop")]
    loop_id: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    nodes: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    #[serde(default)]
    boundary: Option<Vec<BoundaryEntry>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnulusSpec {
    r_int: f64,
    r_ext: f64,
    #[serde(default)]
    n_radial: Option<usize>,
    #[serde(default)]
    n_angular: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnulusFile {
    annulus: AnnulusSpec,
}

/// A cross-section as given on the command line.
#[derive(Debug, Clone)]
pub enum Geometry {
    Annulus { r_int: f64, r_ext: f64, n_radial: Option<usize>, n_angular: Option<usize> },
    Mesh(Box<CrossSectionMesh<f64>>),
}

pub fn parse_geometry(path: &Path, bytes: &[u8]) -> Result<Geometry> {
    let value: serde_json::Value = parse(path, bytes)?;
    let is_annulus = value.as_object().is_some_and(|o| o.contains_key("annulus"));
    let err = |e: serde_json::Error| input_err(path, e.to_string());
    if is_annulus {
        let a: AnnulusFile = serde_json::from_value(value).map_err(err)?;
        let s = a.annulus;
        return Ok(Geometry::Annulus { r_int: s.r_int, r_ext: s.r_ext, n_radial: s.n_radial, n_angular: s.n_angular });
    }
    let f: MeshFile = serde_json::from_value(value).map_err(err)?;
    let mesh = match f.boundary {
        Some(b) => {
            let b: Vec<([usize; 2], usize)> = b.into_iter().map(|e| (e.edge, e.loop_id)).collect();
            CrossSectionMesh::new(f.nodes, f.triangles, &b)
        }
        None => CrossSectionMesh::from_triangles(f.nodes, f.triangles),
    }
    .map_err(|e| input_err(path, e.to_string()))?;
    Ok(Geometry::Mesh(Box::new(mesh)))
}

pub fn load_geometry(path: &Path) -> Result<(Geometry, InputDigest)> {
    let (bytes, digest) = read("mesh", path)?;
    Ok((parse_geometry(path, &bytes)?, digest))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    #[serde(default)]
    packed: Option<Vec<f64>>,
    #[serde(default)]
    components: Option<[[[f64; 3]; 3]; 3]>,
}

enum TensorData {
    Packed([f64; 18]),
    Components([[[f64; 3]; 3]; 3]),
}

fn parse_tensor(path: &Path, bytes: &[u8]) -> Result<TensorData> {
    let f: TensorFile = parse(path, bytes)?;
    let data = match (f.packed, f.components) {
        (Some(p), None) => TensorData::Packed(
            p.try_into().map_err(|p: Vec<f64>| input_err(path, format!("\"packed\" needs 18 values, got {}", p.len())))?,
        ),
        (None, Some(c)) => TensorData::Components(c),
        _ => return Err(input_err(path, "exactly one of \"packed\" or \"components\" is required")),
    };
    let finite = match &data {
        TensorData::Packed(p) => p.iter().all(|v| v.is_finite()),
        TensorData::Components(c) => c.iter().flatten().flatten().all(|v| v.is_finite()),
    };
    if !finite {
        return Err(input_err(path, "tensor components must be finite"));
    }
    Ok(data)
}

fn asymmetry(c: &[[[f64; 3]; 3]; 3], swap: impl Fn(usize, usize, usize) -> (usize, usize, usize)) -> (f64, f64) {
    let (mut dev, mut max) = (0.0f64, 0.0f64);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let (a, b, d) = swap(i, j, k);
                dev = dev.max((c[i][j][k] - c[a][b][d]).abs());
                max = max.max(c[i][j][k].abs());
            }
        }
    }
    (dev, max)
}

/// A strain gradient, symmetric in its first two indices. `packed` uses the
/// `SymTri3` order (index pair × 3 + third index).
pub fn parse_strain_gradient(path: &Path, bytes: &[u8], tol: f64) -> Result<SymTri3F64> {
    match parse_tensor(path, bytes)? {
        TensorData::Packed(p) => Ok(SymTri3F64::new(p)),
        TensorData::Components(c) => {
            let (dev, max) = asymmetry(&c, |i, j, k| (j, i, k));
            if dev > tol * (1.0 + max) {
                return Err(input_err(path, format!("components are not symmetric in the first two indices (deviation {dev:e})")));
            }
            Ok(SymTri3F64::from_fn(|i, j, k| 0.5 * (c[i][j][k] + c[j][i][k])))
        }
    }
}

pub fn load_strain_gradient(path: &Path, tol: f64) -> Result<(SymTri3F64, InputDigest)> {
    let (bytes, digest) = read("tensor", path)?;
    Ok((parse_strain_gradient(path, &bytes, tol)?, digest))
}

/// A displacement Hessian `C_ijk`, symmetric in its last two indices.
/// `packed[6i + p]` holds `C_ijk` for the `p`-th index pair `(j, k)`.
pub fn parse_hessian(path: &Path, bytes: &[u8], tol: f64) -> Result<Tensor3<f64>> {
    match parse_tensor(path, bytes)? {
        TensorData::Packed(p) => {
            let mut c = Tensor3::zeros();
            for (n, v) in p.iter().enumerate() {
                let (i, (j, k)) = (n / 6, PAIRS[n % 6]);
                c.set([i, j, k], *v);
                c.set([i, k, j], *v);
            }
            Ok(c)
        }
        TensorData::Components(c) => {
            let (dev, max) = asymmetry(&c, |i, j, k| (i, k, j));
            if dev > tol * (1.0 + max) {
                return Err(input_err(path, format!("components are not symmetric in the last two indices (deviation {dev:e})")));
            }
            Ok(Tensor3::from_fn(|[i, j, k]| 0.5 * (c[i][j][k] + c[i][k][j])))
        }
    }
}

pub fn load_hessian(path: &Path, tol: f64) -> Result<(Tensor3<f64>, InputDigest)> {
    let (bytes, digest) = read("tensor", path)?;
    Ok((parse_hessian(path, &bytes, tol)?, digest))
}
