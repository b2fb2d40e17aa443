//! Positive-definiteness certification of the stored energy.
//!
//! The closed-form inequalities in the γ and c moduli are certified against a
//! spectral oracle: the matrix of the energy over an orthonormal basis of
//! `SymMat3 ⊕ SymTri3` (6 + 18 dimensions).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::constitutive::{gammas, GammaParams, Hooke, MaterialParams};
use crate::error::{Error, Result};
use crate::tensor::{recompose, DevMat3, FullSymTri3, SymMat3, SymTri3, PAIRS};
use crate::Real;

/// Relative width of the band around zero inside which a minimum eigenvalue
/// is treated as marginal.
pub const BOUNDARY_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstGradientCheck<T> {
    pub ok: bool,
    /// `μ`
    pub shear_margin: T,
    /// `3λ + 2μ`
    pub bulk_margin: T,
}

pub fn first_gradient_positivity<T: Real>(lambda: T, mu: T) -> FirstGradientCheck<T> {
    let bulk = T::lit(3.0) * lambda + T::lit(2.0) * mu;
    FirstGradientCheck { ok: mu > T::zero() && bulk > T::zero(), shear_margin: mu, bulk_margin: bulk }
}

/// Margins of `γ₁ > 0`, `0 < γ₂ < 5γ₁`, `γ₄ > 5γ₃²/(5γ₁ − γ₂)`, `γ₅ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCheck<T> {
    pub ok: bool,
    pub gamma1: T,
    pub gamma2: T,
    /// `5γ₁ − γ₂`
    pub gamma2_upper: T,
    /// `γ₄ − 5γ₃²/(5γ₁ − γ₂)`; `None` when `5γ₁ − γ₂ ≤ 0`.
    pub gamma4: Option<T>,
    pub gamma5: T,
}

pub fn gamma_positivity<T: Real>(g: &GammaParams<T>) -> GammaCheck<T> {
    let upper = T::lit(5.0) * g.gamma1 - g.gamma2;
    let g4 = (upper > T::zero()).then(|| g.gamma4 - T::lit(5.0) * g.gamma3 * g.gamma3 / upper);
    let z = T::zero();
    let ok = g.gamma1 > z && g.gamma2 > z && upper > z && g4.is_some_and(|v| v > z) && g.gamma5 > z;
    GammaCheck { ok, gamma1: g.gamma1, gamma2: g.gamma2, gamma2_upper: upper, gamma4: g4, gamma5: g.gamma5 }
}

/// Margins of `c₁₁ > 0`, `−c₁₁/2 < c₁₅ < c₁₁`, `5c₃ + 4c₁₁ > 2c₁₅` and the
/// lower bound on `c₅`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CCheck<T> {
    pub ok: bool,
    pub c11: T,
    /// `c₁₅ + c₁₁/2`
    pub c15_lower: T,
    /// `c₁₁ − c₁₅`
    pub c15_upper: T,
    /// `5c₃ + 4c₁₁ − 2c₁₅`
    pub c3: T,
    /// `c₅ − num/den`; `None` when `den = 4c₁₅ − 10c₃ − 8c₁₁ ≥ 0`.
    pub c5: Option<T>,
}

/// Closed-form conditions in the c moduli. Requires `c₈ = 0`.
///
/// The bound on `c₅` is `c₅ > num/den` with
/// `num = c₃(3c₁₁ + c₁₅) + 2(c₁₁² − 5c₂² − 6c₁₅c₂ − 2c₁₅² + c₁₁(2c₂ + c₁₅))`
/// and `den = 4c₁₅ − 10c₃ − 8c₁₁`. The third condition is exactly `den < 0`,
/// so the direction of the bound is fixed; a non-negative denominator fails.
pub fn c_positivity<T: Real>(m: &MaterialParams<T>) -> Result<CCheck<T>> {
    if m.is_hemitropic() {
        return Err(Error::Unsupported("c8 = 0 for the closed-form conditions".into()));
    }
    let l = T::lit;
    let (c2, c3, c5, c11, c15) = (m.c2, m.c3, m.c5, m.c11, m.c15);
    let num = c3 * (l(3.0) * c11 + c15)
        + l(2.0) * (c11 * c11 - l(5.0) * c2 * c2 - l(6.0) * c15 * c2 - l(2.0) * c15 * c15 + c11 * (l(2.0) * c2 + c15));
    let den = l(4.0) * c15 - l(10.0) * c3 - l(8.0) * c11;
    let c5_margin = (den < T::zero()).then(|| c5 - num / den);
    let out = CCheck {
        ok: false,
        c11,
        c15_lower: c15 + c11 * l(0.5),
        c15_upper: c11 - c15,
        c3: l(5.0) * c3 + l(4.0) * c11 - l(2.0) * c15,
        c5: c5_margin,
    };
    let z = T::zero();
    let ok = out.c11 > z && out.c15_lower > z && out.c15_upper > z && out.c3 > z && c5_margin.is_some_and(|v| v > z);
    Ok(CCheck { ok, ..out })
}

/// Orthonormal basis of `SymMat3` under `A:B` (6 elements).
pub fn strain_basis<T: Real>() -> Vec<SymMat3<T>> {
    let r = T::one() / T::lit(2.0).sqrt();
    PAIRS
        .iter()
        .map(|&(i, j)| {
            let mut e = SymMat3::zero();
            e.set(i, j, if i == j { T::one() } else { r });
            e
        })
        .collect()
}

/// Orthonormal basis of `SymTri3` under the 27-term inner product: the 18
/// packed components, scaled by `1/√multiplicity`.
pub fn gradient_basis<T: Real>() -> Vec<SymTri3<T>> {
    let r = T::one() / T::lit(2.0).sqrt();
    let mut out = Vec::with_capacity(18);
    for &(i, j) in PAIRS.iter() {
        for k in 0..3 {
            let mut g = SymTri3::zero();
            g.set(i, j, k, if i == j { T::one() } else { r });
            out.push(g);
        }
    }
    out
}

/// The 24×24 matrix `M` with `ψ = ½ xᵀ M x` in the orthonormal basis
/// (strain block first).
pub fn quadratic_form_matrix<T: Real>(m: &MaterialParams<T>) -> DMatrix<T> {
    let hooke = Hooke::new(m);
    let eb = strain_basis::<T>();
    let gb = gradient_basis::<T>();
    let zero_e = SymMat3::zero();
    let zero_g = SymTri3::zero();
    let states: Vec<(SymMat3<T>, SymTri3<T>)> =
        eb.iter().map(|e| (*e, zero_g)).chain(gb.iter().map(|g| (zero_e, *g))).collect();
    let responses: Vec<_> = states.iter().map(|(e, g)| hooke.apply(e, g)).collect();
    let n = states.len();
    let mut mat = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let (e, g) = &states[a];
            let r = &responses[b];
            mat[(a, b)] = r.s.ddot(e) + r.p.inner(g);
        }
    }
    (&mat + mat.transpose()) * T::lit(0.5)
}

fn min_eig<T: Real>(m: DMatrix<T>) -> T {
    SymmetricEigen::new(m).eigenvalues.min()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCheck<T> {
    /// Minimum eigenvalue of the strain-gradient block exceeds the band.
    pub ok: bool,
    /// Smallest eigenvalue of the 18×18 strain-gradient block.
    pub min_eigenvalue: T,
    /// Smallest eigenvalue of the full 24×24 form.
    pub full_min_eigenvalue: T,
    /// `BOUNDARY_BAND · ‖m‖`
    pub band: T,
}

pub fn spectral_positivity<T: Real>(m: &MaterialParams<T>) -> SpectralCheck<T> {
    spectral_positivity_with_band(m, T::lit(BOUNDARY_BAND))
}

/// As [`spectral_positivity`] with the relative band `band_rel` in place of
/// [`BOUNDARY_BAND`].
pub fn spectral_positivity_with_band<T: Real>(m: &MaterialParams<T>, band_rel: T) -> SpectralCheck<T> {
    let full = quadratic_form_matrix(m);
    let grad = full.view((6, 6), (18, 18)).into_owned();
    let band = band_rel * m.norm();
    let min_eigenvalue = min_eig(grad);
    SpectralCheck { ok: min_eigenvalue > band, min_eigenvalue, full_min_eigenvalue: min_eig(full), band }
}

/// Smallest eigenvalue of the energy restricted to the couple-stress
/// subspace `{K = sym_skew(K̂)}` (8 dimensions), measured with the 27-term
/// inner product. Solved as a generalized eigenproblem through the Cholesky
/// factor of the Gram matrix.
pub fn couple_stress_min_eigenvalue<T: Real>(m: &MaterialParams<T>) -> T {
    let hooke = Hooke::new(m);
    let basis: Vec<SymTri3<T>> = (0..8)
        .map(|n| {
            let mut packed = [T::zero(); 8];
            packed[n] = T::one();
            recompose(&FullSymTri3::zero(), &DevMat3::new(packed))
        })
        .collect();
    let zero_e = SymMat3::zero();
    let gram = DMatrix::from_fn(8, 8, |a, b| basis[a].inner(&basis[b]));
    let form = DMatrix::from_fn(8, 8, |a, b| hooke.apply(&zero_e, &basis[b]).p.inner(&basis[a]));
    let form = (&form + form.transpose()) * T::lit(0.5);
    let l = gram.cholesky().expect("Gram matrix of a basis is positive definite").l();
    let l_inv = l.try_inverse().expect("triangular factor is invertible");
    min_eig(&l_inv * form * l_inv.transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Definite,
    Marginal,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport<T> {
    pub first_gradient_ok: bool,
    pub gamma_ok: bool,
    /// `false` for hemitropic materials, where the closed forms do not apply.
    pub c_ok: bool,
    pub spectral_ok: bool,
    /// Smallest eigenvalue of the strain-gradient block.
    pub min_eigenvalue: T,
    pub full_min_eigenvalue: T,
    pub band: T,
    pub closed_form_applicable: bool,
    pub first_gradient: FirstGradientCheck<T>,
    pub gammas: GammaParams<T>,
    pub gamma: GammaCheck<T>,
    pub c: Option<CCheck<T>>,
    pub status: Status,
}

/// Aggregates every test. The status follows the full 24×24 spectrum:
/// definite above the band, marginal inside it, indefinite below.
pub fn report<T: Real>(m: &MaterialParams<T>) -> StabilityReport<T> {
    report_with_band(m, T::lit(BOUNDARY_BAND))
}

pub fn report_with_band<T: Real>(m: &MaterialParams<T>, band_rel: T) -> StabilityReport<T> {
    let first = first_gradient_positivity(m.lambda, m.mu);
    let g = gammas(m);
    let gamma = gamma_positivity(&g);
    let c = c_positivity(m).ok();
    let eig = spectral_positivity_with_band(m, band_rel);
    let status = if eig.full_min_eigenvalue > eig.band {
        Status::Definite
    } else if eig.full_min_eigenvalue >= -eig.band {
        Status::Marginal
    } else {
        Status::Indefinite
    };
    StabilityReport {
        first_gradient_ok: first.ok,
        gamma_ok: gamma.ok,
        c_ok: c.is_some_and(|c| c.ok),
        spectral_ok: eig.ok,
        min_eigenvalue: eig.min_eigenvalue,
        full_min_eigenvalue: eig.full_min_eigenvalue,
        band: eig.band,
        closed_form_applicable: c.is_some(),
        first_gradient: first,
        gammas: g,
        gamma,
        c,
        status,
    }
}

#[cfg(test)]
mod tests;
