//! Isotropic strain-gradient (second gradient) linear elasticity.
//!
//! The crate covers the seven-modulus isotropic constitutive law for stress
//! and hyperstress, certification of positive definiteness of the stored
//! energy, finite-strain kinematics from analytic placement maps, and the
//! Saint-Venant torsion problem (closed-form hollow circular section and a
//! C¹ finite-element warping solver for general sections).
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`). Aliases for
//! the common `f64` instantiations live at the crate root.

#![allow(clippy::needless_range_loop)]

pub mod constitutive;
pub mod error;
pub mod kinematics;
pub mod scalar;
pub mod stability;
pub mod tensor;
pub mod torsion;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Mat3F64 = tensor::Mat3<f64>;
pub type Vec3F64 = tensor::Vec3<f64>;
pub type SymMat3F64 = tensor::SymMat3<f64>;
pub type DevMat3F64 = tensor::DevMat3<f64>;
pub type SymTri3F64 = tensor::SymTri3<f64>;
pub type FullSymTri3F64 = tensor::FullSymTri3<f64>;
pub type Tensor3F64 = tensor::Tensor3<f64>;

pub type MaterialParamsF64 = constitutive::MaterialParams<f64>;
pub type MaterialParamsF32 = constitutive::MaterialParams<f32>;
pub type GammaParamsF64 = constitutive::GammaParams<f64>;
pub type StressStateF64 = constitutive::StressState<f64>;
pub type StabilityReportF64 = stability::StabilityReport<f64>;
pub type TorsionSolutionF64 = torsion::TorsionSolution<f64>;
pub type CrossSectionMeshF64 = torsion::CrossSectionMesh<f64>;
