use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gradhooke", version, about = "Isotropic strain-gradient elasticity toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify positive definiteness of the stored energy.
    Check(CheckArgs),
    /// Torsional stiffness of a section.
    Kt(KtArgs),
    /// Warping function of a section by finite elements.
    Warp(WarpArgs),
    /// Split a strain gradient into its totally symmetric and sym-skew parts.
    Decompose(DecomposeArgs),
    /// Elementary quadratic deformation of a cube and its contact actions.
    Elementary(ElementaryArgs),
    /// Full constitutive report for a material.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_name = "FILE")]
    pub material: PathBuf,

    /// Relative half-width of the marginal band around zero eigenvalue.
    #[arg(long, value_name = "VAL", default_value_t = gradhooke::stability::BOUNDARY_BAND)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    /// Mesh JSON, or `{"annulus": {"r_int": .., "r_ext": ..}}`.
    #[arg(long, value_name = "FILE", conflicts_with = "annulus", required_unless_present = "annulus")]
    pub mesh: Option<PathBuf>,

    /// Hollow circular section `RINT,REXT`.
    #[arg(long, value_name = "RINT,REXT", value_parser = parse_annulus)]
    pub annulus: Option<(f64, f64)>,

    /// Radial divisions when an annulus has to be meshed.
    #[arg(long, value_name = "N", default_value_t = 8)]
    pub radial: usize,

    /// Angular divisions when an annulus has to be meshed.
    #[arg(long, value_name = "N", default_value_t = 64)]
    pub angular: usize,
}

#[derive(Debug, Args)]
pub struct KtArgs {
    #[arg(long, value_name = "FILE")]
    pub material: PathBuf,

    #[command(flatten)]
    pub geometry: GeometryArgs,

    /// Twist per unit length.
    #[arg(long, value_name = "VAL", default_value_t = 1.0)]
    pub theta: f64,
}

#[derive(Debug, Args)]
pub struct WarpArgs {
    #[arg(long, value_name = "FILE")]
    pub material: PathBuf,

    #[command(flatten)]
    pub geometry: GeometryArgs,

    /// Twist per unit length; nodal warping is scaled by it.
    #[arg(long, value_name = "VAL", default_value_t = 1.0)]
    pub theta: f64,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Tensor JSON: `{"packed": [18 values]}` or `{"components": 3x3x3}`.
    #[arg(value_name = "FILE", required_unless_present = "seed", conflicts_with = "seed")]
    pub tensor: Option<PathBuf>,

    /// Decompose a random tensor drawn from this seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,

    /// Also report the hyperstress response of this material.
    #[arg(long, value_name = "FILE")]
    pub material: Option<PathBuf>,

    /// Allowed asymmetry of nested input in the first two indices.
    #[arg(long, value_name = "VAL", default_value_t = 1e-12)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct ElementaryArgs {
    /// Tensor JSON for `C`, symmetric in its last two indices.
    #[arg(value_name = "FILE", required_unless_present_any = ["basis", "seed"], conflicts_with_all = ["basis", "seed"])]
    pub tensor: Option<PathBuf>,

    /// Basis element `n = 6i + p` (0..18).
    #[arg(long, value_name = "N", conflicts_with = "seed")]
    pub basis: Option<usize>,

    /// Random `C` drawn from this seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,

    #[arg(long, value_name = "FILE")]
    pub material: PathBuf,

    /// Half-width `a` of the cube `[-a, a]^3`.
    #[arg(long, value_name = "VAL", default_value_t = 1.0)]
    pub half_width: f64,

    /// Displacement samples per axis.
    #[arg(long, value_name = "N", default_value_t = 5)]
    pub grid: usize,

    /// Allowed asymmetry of `C` in its last two indices.
    #[arg(long, value_name = "VAL", default_value_t = 1e-12)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_name = "FILE")]
    pub material: PathBuf,

    /// Relative half-width of the marginal band around zero eigenvalue.
    #[arg(long, value_name = "VAL", default_value_t = gradhooke::stability::BOUNDARY_BAND)]
    pub tolerance: f64,

    /// Relative size below which γ₁, γ₂, γ₃ count as zero for the
    /// couple-stress fit.
    #[arg(long, value_name = "VAL", default_value_t = 1e-12)]
    pub fit_tolerance: f64,
}

fn parse_annulus(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected RINT,REXT, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn annulus_flag() {
        assert_eq!(parse_annulus("0.5, 1").unwrap(), (0.5, 1.0));
        assert!(parse_annulus("0.5").is_err());
        assert!(parse_annulus("a,1").is_err());
    }
}
