//! Gauss rules on intervals, triangles and annuli.

use crate::Real;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Collapsed Gauss rule on the reference triangle `(0,0), (1,0), (0,1)`:
/// barycentric-free points `(ξ, η)` and weights summing to ½. With `n`
/// points per direction it is exact for polynomials of degree `2n − 2`.
pub fn triangle_rule(n: usize) -> Vec<([f64; 2], f64)> {
    let (x, w) = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for (xi, wi) in x.iter().zip(&w) {
        let u = 0.5 * (xi + 1.0);
        for (xj, wj) in x.iter().zip(&w) {
            let v = 0.5 * (xj + 1.0);
            out.push(([u, v * (1.0 - u)], 0.25 * wi * wj * (1.0 - u)));
        }
    }
    out
}

/// A weighted point of a planar quadrature; `element` names the mesh
/// triangle containing it, when there is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint<T> {
    pub x: [T; 2],
    pub weight: T,
    pub element: Option<usize>,
}

/// A quadrature rule over a cross-section.
pub trait Quadrature2D<T: Real> {
    fn points(&self) -> Vec<QuadPoint<T>>;
}

/// Tensor rule on `R_int ≤ r ≤ R_ext`: Gauss–Legendre in the radius and
/// the (spectrally exact) uniform rule in the angle.
#[derive(Debug, Clone, Copy)]
pub struct AnnulusQuadrature<T> {
    pub r_int: T,
    pub r_ext: T,
    pub n_radial: usize,
    pub n_angular: usize,
}

impl<T: Real> AnnulusQuadrature<T> {
    pub fn new(r_int: T, r_ext: T) -> Self {
        Self { r_int, r_ext, n_radial: 8, n_angular: 32 }
    }
}

impl<T: Real> Quadrature2D<T> for AnnulusQuadrature<T> {
    fn points(&self) -> Vec<QuadPoint<T>> {
        let (x, w) = gauss_legendre(self.n_radial);
        let half = (self.r_ext - self.r_int) * T::lit(0.5);
        let mid = (self.r_ext + self.r_int) * T::lit(0.5);
        let dphi = T::two_pi() / T::lit(self.n_angular as f64);
        let mut out = Vec::with_capacity(self.n_radial * self.n_angular);
        for (xi, wi) in x.iter().zip(&w) {
            let r = mid + half * T::lit(*xi);
            let wr = half * T::lit(*wi) * r * dphi;
            for j in 0..self.n_angular {
                let phi = dphi * T::lit(j as f64);
                out.push(QuadPoint { x: [r * phi.cos(), r * phi.sin()], weight: wr, element: None });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "n = {n}, degree {deg}");
            }
        }
    }

    #[test]
    fn triangle_rule_is_exact_to_degree_ten() {
        let rule = triangle_rule(6);
        let fact = |n: u32| (1..=n).map(|k| k as f64).product::<f64>();
        for a in 0..=10u32 {
            for b in 0..=(10 - a) {
                let q: f64 = rule.iter().map(|([x, y], w)| w * x.powi(a as i32) * y.powi(b as i32)).sum();
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                assert!((q - exact).abs() < 1e-15, "x^{a} y^{b}");
            }
        }
    }

    #[test]
    fn annulus_rule_integrates_polar_moment() {
        let q = AnnulusQuadrature::new(0.5, 1.0);
        let ip: f64 = q.points().iter().map(|p| p.weight * (p.x[0] * p.x[0] + p.x[1] * p.x[1])).sum();
        let exact = std::f64::consts::PI * (1.0 - 0.0625) / 2.0;
        assert!((ip - exact).abs() < 1e-14);
    }
}
