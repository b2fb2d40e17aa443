use gradhooke::constitutive::{
    apply_hooke, coupled_coordinates, gamma_blocks, gammas, sokolowski_fit, voigt_blocks, CoupledCoordinates,
    GammaParams, MaterialParams, VOIGT_BLOCKS,
};
use gradhooke::stability::{report_with_band, StabilityReport, Status};
use gradhooke::tensor::{decompose, recompose, sym_skew, Tensor3};
use gradhooke::torsion::{
    annulus_moments, annulus_solution, elementary_basis, elementary_cube_state, stiffness_from_energy, warp_solve,
    AnnulusQuadrature, CrossSectionMesh, MeshQuadrature, Quadrature2D, SolveDiagnostics, TorsionSolution,
};
use gradhooke::{SymMat3F64, SymTri3F64};
use nalgebra::{Matrix3, SMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{CheckArgs, Cli, Command, DecomposeArgs, ElementaryArgs, GeometryArgs, KtArgs, ReportArgs, WarpArgs};
use crate::input::{self, Geometry, InputDigest};
use crate::output::{matrix, num, nums, object, opt, Cell, RunReport, Table};
use crate::{CliError, Result, EXIT_FAILURE, EXIT_MARGINAL, EXIT_OK};

pub(crate) fn execute(cli: &Cli, command: Vec<String>) -> Result<RunReport> {
    let mut report = match &cli.command {
        Command::Check(a) => check(a),
        Command::Kt(a) => kt(a),
        Command::Warp(a) => warp(a),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Elementary(a) => elementary(a),
        Command::Report(a) => report_cmd(a),
    }?;
    report.command = command;
    Ok(report)
}

fn base(inputs: Vec<InputDigest>, status: &str, results: Value, diagnostics: Value) -> RunReport {
    RunReport {
        command: Vec::new(),
        inputs,
        seed: None,
        status: status.into(),
        results,
        diagnostics,
        table: None,
        exit_code: EXIT_OK,
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Definite => "definite",
        Status::Marginal => "marginal",
        Status::Indefinite => "indefinite",
    }
}

fn status_exit(s: Status) -> i32 {
    match s {
        Status::Definite => EXIT_OK,
        Status::Marginal => EXIT_MARGINAL,
        Status::Indefinite => EXIT_FAILURE,
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

fn material_json(m: &MaterialParams<f64>) -> Value {
    object([
        ("lambda", num(m.lambda)),
        ("mu", num(m.mu)),
        ("c2", num(m.c2)),
        ("c3", num(m.c3)),
        ("c5", num(m.c5)),
        ("c11", num(m.c11)),
        ("c15", num(m.c15)),
        ("c8", num(m.c8)),
    ])
}

fn gammas_json(g: &GammaParams<f64>) -> Value {
    object([
        ("gamma1", num(g.gamma1)),
        ("gamma2", num(g.gamma2)),
        ("gamma3", num(g.gamma3)),
        ("gamma4", num(g.gamma4)),
        ("gamma5", num(g.gamma5)),
    ])
}

fn stability_json(r: &StabilityReport<f64>) -> Value {
    let c = r.c.map_or(Value::Null, |c| {
        object([
            ("ok", json!(c.ok)),
            ("c11", num(c.c11)),
            ("c15_lower", num(c.c15_lower)),
            ("c15_upper", num(c.c15_upper)),
            ("c3", num(c.c3)),
            ("c5", opt(c.c5)),
        ])
    });
    object([
        ("status", json!(status_name(r.status))),
        ("first_gradient_ok", json!(r.first_gradient_ok)),
        ("gamma_ok", json!(r.gamma_ok)),
        ("c_ok", json!(r.c_ok)),
        ("spectral_ok", json!(r.spectral_ok)),
        ("closed_form_applicable", json!(r.closed_form_applicable)),
        ("min_eigenvalue", num(r.min_eigenvalue)),
        ("full_min_eigenvalue", num(r.full_min_eigenvalue)),
        ("band", num(r.band)),
        (
            "first_gradient",
            object([
                ("ok", json!(r.first_gradient.ok)),
                ("shear_margin", num(r.first_gradient.shear_margin)),
                ("bulk_margin", num(r.first_gradient.bulk_margin)),
            ]),
        ),
        ("gammas", gammas_json(&r.gammas)),
        (
            "gamma_conditions",
            object([
                ("ok", json!(r.gamma.ok)),
                ("gamma1", num(r.gamma.gamma1)),
                ("gamma2", num(r.gamma.gamma2)),
                ("gamma2_upper", num(r.gamma.gamma2_upper)),
                ("gamma4", opt(r.gamma.gamma4)),
                ("gamma5", num(r.gamma.gamma5)),
            ]),
        ),
        ("c_conditions", c),
    ])
}

fn check(a: &CheckArgs) -> Result<RunReport> {
    positive("--tolerance", a.tolerance)?;
    let (m, digest) = input::load_material(&a.material)?;
    let r = report_with_band(&m, a.tolerance);
    let mut out = base(vec![digest], status_name(r.status), stability_json(&r), object([("tolerance", num(a.tolerance))]));
    out.exit_code = status_exit(r.status);
    Ok(out)
}

fn geometry(g: &GeometryArgs) -> Result<(Geometry, Vec<InputDigest>)> {
    match (&g.mesh, g.annulus) {
        (Some(path), _) => {
            let (geo, d) = input::load_geometry(path)?;
            Ok((geo, vec![d]))
        }
        (None, Some((r_int, r_ext))) => Ok((Geometry::Annulus { r_int, r_ext, n_radial: None, n_angular: None }, vec![])),
        (None, None) => Err(CliError::Usage("one of --mesh or --annulus is required".into())),
    }
}

fn refuse_indefinite(m: &MaterialParams<f64>) -> Result<Status> {
    let status = report_with_band(m, gradhooke::stability::BOUNDARY_BAND).status;
    if status == Status::Indefinite {
        return Err(CliError::Refused("material energy is indefinite".into()));
    }
    Ok(status)
}

/// Area, centroid and polar moment about the centroid.
fn section_moments(mesh: &CrossSectionMesh<f64>) -> (f64, [f64; 2], f64) {
    let pts = MeshQuadrature::new(mesh).points();
    let area: f64 = pts.iter().map(|p| p.weight).sum();
    let c = [0, 1].map(|k| pts.iter().map(|p| p.weight * p.x[k]).sum::<f64>() / area);
    let ip = pts.iter().map(|p| p.weight * ((p.x[0] - c[0]).powi(2) + (p.x[1] - c[1]).powi(2))).sum();
    (area, c, ip)
}

fn solve_diagnostics_json(d: &Option<SolveDiagnostics>) -> Value {
    let Some(d) = d else { return Value::Null };
    object([
        ("dofs", json!(d.dofs)),
        ("factor_nnz", json!(d.factor_nnz)),
        ("h_max", num(d.h_max)),
        ("energy", num(d.energy)),
        ("interior_residual_max", num(d.interior_residual_max)),
        ("interior_residual_rms", num(d.interior_residual_rms)),
        ("traction_residual_max", num(d.traction_residual_max)),
        ("double_traction_residual_max", num(d.double_traction_residual_max)),
        ("w_max_abs", num(d.w_max_abs)),
    ])
}

fn mesh_for(geo: Geometry, g: &GeometryArgs) -> Result<CrossSectionMesh<f64>> {
    match geo {
        Geometry::Mesh(m) => Ok(*m),
        Geometry::Annulus { r_int, r_ext, n_radial, n_angular } => {
            Ok(CrossSectionMesh::annulus(r_int, r_ext, n_radial.unwrap_or(g.radial), n_angular.unwrap_or(g.angular))?)
        }
    }
}

fn kt(a: &KtArgs) -> Result<RunReport> {
    if !a.theta.is_finite() || a.theta == 0.0 {
        return Err(CliError::Usage(format!("--theta must be finite and non-zero, got {}", a.theta)));
    }
    let (m, digest) = input::load_material(&a.material)?;
    let (geo, mut inputs) = geometry(&a.geometry)?;
    inputs.insert(0, digest);
    let status = refuse_indefinite(&m)?;
    match geo {
        Geometry::Annulus { r_int, r_ext, .. } => {
            let sol = annulus_solution(&m, a.theta, r_int, r_ext)?;
            let quad = stiffness_from_energy(&sol, &AnnulusQuadrature::new(r_int, r_ext))?;
            let (polar, gradient) = sol.annulus_split().expect("annulus solution");
            let (ip, area) = annulus_moments(r_int, r_ext);
            let results = object([
                ("geometry", json!("annulus")),
                ("method", json!("closed_form")),
                ("r_int", num(r_int)),
                ("r_ext", num(r_ext)),
                ("theta", num(a.theta)),
                ("k_t", num(sol.k_t)),
                ("classical_term", num(polar)),
                ("gradient_correction", num(gradient)),
                ("torque", num(sol.k_t * a.theta)),
                ("energy_per_length", num(sol.energy())),
                ("area", num(area)),
                ("polar_moment", num(ip)),
            ]);
            let diagnostics = object([
                ("material_status", json!(status_name(status))),
                ("k_t_energy_quadrature", num(quad)),
                ("energy_quadrature_relative_difference", num((quad - sol.k_t) / sol.k_t)),
                ("solver", Value::Null),
                ("warnings", json!(sol.warnings)),
            ]);
            Ok(base(inputs, "ok", results, diagnostics))
        }
        Geometry::Mesh(mesh) => {
            let sol = warp_solve(&mesh, &m)?.with_theta(a.theta);
            let classical = warp_solve(&mesh, &MaterialParams::classical(m.lambda, m.mu))?;
            let (area, centroid, ip) = section_moments(&mesh);
            let results = object([
                ("geometry", json!("mesh")),
                ("method", json!("warp_solve")),
                ("theta", num(a.theta)),
                ("k_t", num(sol.k_t)),
                ("classical_term", num(classical.k_t)),
                ("gradient_correction", num(sol.k_t - classical.k_t)),
                ("torque", num(sol.k_t * a.theta)),
                ("energy_per_length", num(sol.energy())),
                ("area", num(area)),
                ("centroid", nums(&centroid)),
                ("polar_moment", num(ip)),
            ]);
            let mut warnings = sol.warnings.clone();
            warnings.extend(classical.warnings.iter().map(|w| format!("classical solve: {w}")));
            let diagnostics = object([
                ("material_status", json!(status_name(status))),
                ("solver", solve_diagnostics_json(&sol.diagnostics)),
                ("classical_solver", solve_diagnostics_json(&classical.diagnostics)),
                ("warnings", json!(warnings)),
            ]);
            Ok(base(inputs, "ok", results, diagnostics))
        }
    }
}

fn warp(a: &WarpArgs) -> Result<RunReport> {
    if !a.theta.is_finite() {
        return Err(CliError::Usage(format!("--theta must be finite, got {}", a.theta)));
    }
    let (m, digest) = input::load_material(&a.material)?;
    let (geo, mut inputs) = geometry(&a.geometry)?;
    inputs.insert(0, digest);
    let status = refuse_indefinite(&m)?;
    let mesh = mesh_for(geo, &a.geometry)?;
    let sol: TorsionSolution<f64> = warp_solve(&mesh, &m)?.with_theta(a.theta);
    let w: Vec<f64> = sol.node_values().iter().map(|v| v * a.theta).collect();
    let nodes = mesh.nodes();
    let table = Table {
        header: ["x", "y", "w"].map(String::from).to_vec(),
        rows: nodes.iter().zip(&w).map(|(x, w)| vec![Cell::Float(x[0]), Cell::Float(x[1]), Cell::Float(*w)]).collect(),
    };
    let results = object([
        ("theta", num(a.theta)),
        ("k_t", num(sol.k_t)),
        ("nodes", matrix(nodes)),
        ("triangles", json!(mesh.triangles())),
        ("w", nums(&w)),
    ]);
    let diagnostics = object([
        ("material_status", json!(status_name(status))),
        ("solver", solve_diagnostics_json(&sol.diagnostics)),
        ("w_max_abs", num(w.iter().fold(0.0f64, |s, v| s.max(v.abs())))),
        ("warnings", json!(sol.warnings)),
    ]);
    let mut out = base(inputs, "ok", results, diagnostics);
    out.table = Some(table);
    Ok(out)
}

fn random_values<const N: usize>(seed: u64) -> [f64; N] {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| r.random_range(-1.0..1.0))
}

fn tri_components(get: impl Fn(usize, usize, usize) -> f64) -> Value {
    Value::Array(
        (0..3)
            .map(|i| Value::Array((0..3).map(|j| Value::Array((0..3).map(|k| num(get(i, j, k))).collect())).collect()))
            .collect(),
    )
}

fn mat3<const R: usize, const C: usize>(m: &SMatrix<f64, R, C>) -> Value {
    Value::Array((0..R).map(|i| Value::Array((0..C).map(|j| num(m[(i, j)])).collect())).collect())
}

fn coordinates_json(c: &CoupledCoordinates<f64>) -> Value {
    object([
        ("triples", matrix(&c.triples)),
        ("tilde_differences", nums(&c.tilde_differences)),
        ("hat_sums", nums(&c.hat_sums)),
        ("hat_diagonal", nums(&c.hat_diagonal)),
        ("tilde_123", num(c.tilde_123)),
    ])
}

fn coordinates_flat(c: &CoupledCoordinates<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = c.triples.iter().flatten().copied().collect();
    v.extend(c.tilde_differences);
    v.extend(c.hat_sums);
    v.extend(c.hat_diagonal);
    v.push(c.tilde_123);
    v
}

fn decompose_cmd(a: &DecomposeArgs) -> Result<RunReport> {
    let (k, mut inputs) = match (&a.tensor, a.seed) {
        (Some(path), _) => {
            let (k, d) = input::load_strain_gradient(path, a.tolerance)?;
            (k, vec![d])
        }
        (None, Some(seed)) => (SymTri3F64::new(random_values(seed)), vec![]),
        (None, None) => return Err(CliError::Usage("a tensor file or --seed is required".into())),
    };
    let (tilde, hat) = decompose(&k);
    let skew = sym_skew(&hat);
    let back = recompose(&tilde, &hat);
    let coords = coupled_coordinates(&k);
    let mut results = object([
        ("input", object([("packed", nums(k.packed())), ("components", tri_components(|i, j, l| k.get(i, j, l)))])),
        (
            "tilde",
            object([("packed", nums(tilde.packed())), ("components", tri_components(|i, j, l| tilde.get(i, j, l)))]),
        ),
        (
            "hat",
            object([("packed", nums(hat.packed())), ("matrix", mat3(&hat.to_matrix()))]),
        ),
        ("sym_skew", object([("packed", nums(skew.packed()))])),
        ("coupled_coordinates", coordinates_json(&coords)),
    ]);
    let mut diagnostics = object([
        ("reconstruction_error", num(back.sub(&k).max_abs())),
        ("parts_inner", num(tilde.to_sym_tri().inner(&skew))),
        ("norm_squared", num(k.inner(&k))),
        ("hat_trace", num(hat.trace())),
        ("coordinates_round_trip_error", num(coords.to_tensor().sub(&k).max_abs())),
    ]);
    if let Some(path) = &a.material {
        let (m, d) = input::load_material(path)?;
        inputs.push(d);
        let p = apply_hooke(&m, &SymMat3F64::zero(), &k).p;
        let actual = coupled_coordinates(&p);
        let predicted = coords.respond(&gammas(&m));
        let mismatch = coordinates_flat(&actual)
            .iter()
            .zip(coordinates_flat(&predicted))
            .fold(0.0f64, |s, (x, y)| s.max((x - y).abs()));
        results["response"] = object([
            ("hyperstress", nums(p.packed())),
            ("coupled_coordinates", coordinates_json(&actual)),
        ]);
        diagnostics["response_coordinates_mismatch"] = num(mismatch);
    }
    let mut out = base(inputs, "ok", results, diagnostics);
    out.seed = if a.tensor.is_none() { a.seed } else { None };
    Ok(out)
}

const FACE_NAMES: [&str; 3] = ["x1", "x2", "x3"];

fn face_label(n: &[i8; 3]) -> String {
    let axis = n.iter().position(|v| *v != 0).expect("unit normal");
    format!("{}{}", if n[axis] > 0 { "+" } else { "-" }, FACE_NAMES[axis])
}

fn elementary(a: &ElementaryArgs) -> Result<RunReport> {
    positive("--half-width", a.half_width)?;
    if a.grid < 2 {
        return Err(CliError::Usage(format!("--grid needs at least 2 samples per axis, got {}", a.grid)));
    }
    let (m, digest) = input::load_material(&a.material)?;
    let (c, mut inputs, source) = match (&a.tensor, a.basis, a.seed) {
        (Some(path), _, _) => {
            let (c, d) = input::load_hessian(path, a.tolerance)?;
            (c, vec![d], json!("file"))
        }
        (None, Some(n), _) => {
            let c = elementary_basis::<f64>(n).map_err(|e| CliError::Usage(e.to_string()))?;
            (c, vec![], json!({ "basis": n }))
        }
        (None, None, Some(seed)) => {
            let v: [f64; 18] = random_values(seed);
            let mut c = Tensor3::zeros();
            for (n, x) in v.iter().enumerate() {
                let (i, (j, k)) = (n / 6, gradhooke::tensor::PAIRS[n % 6]);
                c.set([i, j, k], *x);
                c.set([i, k, j], *x);
            }
            (c, vec![], json!("seed"))
        }
        (None, None, None) => return Err(CliError::Usage("a tensor file, --basis or --seed is required".into())),
    };
    inputs.insert(0, digest);
    let s = elementary_cube_state(&c, &m, a.half_width)?;
    let h = a.half_width;
    let n = a.grid;
    let coord = |i: usize| -h + 2.0 * h * i as f64 / (n - 1) as f64;

    let mut rows = Vec::new();
    let row = |kind: &str, label: String, x: [f64; 3], v: [f64; 3]| {
        let mut r = vec![Cell::Text(kind.into()), Cell::Text(label)];
        r.extend(x.iter().chain(&v).map(|c| Cell::Float(*c)));
        r
    };
    let mut grid = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = [coord(i), coord(j), coord(k)];
                let u = s.displacement(&x);
                rows.push(row("displacement", String::new(), x, u));
                grid.push(object([("x", nums(&x)), ("u", nums(&u))]));
            }
        }
    }
    let mut faces = Vec::new();
    for (normal, tau) in &s.face_double_forces {
        let x = normal.map(|v| h * f64::from(v));
        rows.push(row("double_force", face_label(normal), x, *tau));
        faces.push(object([
            ("face", json!(face_label(normal))),
            ("normal", json!(normal)),
            ("center", nums(&x)),
            ("tau", nums(tau)),
        ]));
    }
    let mut edges = Vec::new();
    for (na, nb, f) in &s.edge_forces {
        let x: [f64; 3] = std::array::from_fn(|k| h * f64::from(na[k] + nb[k]));
        let label = format!("{}{}", face_label(na), face_label(nb));
        rows.push(row("edge_force", label.clone(), x, *f));
        edges.push(object([
            ("edge", json!(label)),
            ("normals", json!([na, nb])),
            ("midpoint", nums(&x)),
            ("f", nums(f)),
        ]));
    }
    let results = object([
        ("source", source),
        ("half_width", num(h)),
        ("c", tri_components(|i, j, k| s.c.get([i, j, k]))),
        ("grad_eps", nums(s.grad_eps.packed())),
        ("hyperstress", nums(s.p.packed())),
        ("stress_center", nums(s.s_center.packed())),
        ("faces", Value::Array(faces)),
        ("edges", Value::Array(edges)),
        ("grid", Value::Array(grid)),
    ]);
    let diagnostics = object([
        ("mean_strain", nums(s.mean_strain.packed())),
        ("hyperstress_divergence", matrix(&s.hyperstress_divergence)),
        ("material", material_json(&m)),
    ]);
    let mut out = base(inputs, "ok", results, diagnostics);
    out.seed = if a.tensor.is_none() && a.basis.is_none() { a.seed } else { None };
    out.table = Some(Table {
        header: ["kind", "label", "x1", "x2", "x3", "v1", "v2", "v3"].map(String::from).to_vec(),
        rows,
    });
    Ok(out)
}

fn labels<const N: usize>(t: &[(usize, usize, usize); N]) -> Value {
    json!(t.iter().map(|(i, j, k)| format!("{}{}{}", i + 1, j + 1, k + 1)).collect::<Vec<_>>())
}

fn report_cmd(a: &ReportArgs) -> Result<RunReport> {
    positive("--tolerance", a.tolerance)?;
    positive("--fit-tolerance", a.fit_tolerance)?;
    let (m, digest) = input::load_material(&a.material)?;
    let g = gammas(&m);
    let (g1, g2) = voigt_blocks(&m);
    let (gm1, gm2): (Matrix3<f64>, Matrix3<f64>) = gamma_blocks(&g);
    let stability = report_with_band(&m, a.tolerance);
    let fit = sokolowski_fit(&m, a.fit_tolerance);
    let sokolowski = match fit {
        Some(f) => object([
            ("reducible", json!(true)),
            ("mu", num(f.mu)),
            ("eta", num(f.eta)),
            ("ell_sq", num(f.ell_sq)),
        ]),
        None => object([("reducible", json!(false)), ("note", json!("no Sokolowski reduction"))]),
    };
    let results = object([
        ("material", material_json(&m)),
        ("gammas", gammas_json(&g)),
        (
            "voigt_blocks",
            object([
                ("g1", mat3(&g1)),
                ("g2", mat3(&g2)),
                ("g1_components", Value::Array(VOIGT_BLOCKS.0.iter().map(labels).collect())),
                ("g2_components", labels(&VOIGT_BLOCKS.1)),
            ]),
        ),
        ("gamma_blocks", object([("gamma1", mat3(&gm1)), ("gamma2", mat3(&gm2))])),
        ("stability", stability_json(&stability)),
        ("sokolowski", sokolowski),
    ]);
    let diagnostics = object([("tolerance", num(a.tolerance)), ("fit_tolerance", num(a.fit_tolerance))]);
    Ok(base(vec![digest], status_name(stability.status), results, diagnostics))
}
