//! Analytic placement maps used to feed the kinematic operators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::tensor::{Mat3, Tensor3, Vec3};
use crate::Real;

/// A placement `χ` with analytic first and second derivatives.
///
/// `grad_f` returns `F_{αi,j}` indexed `[α, i, j]`; it must be symmetric in
/// `(i, j)`.
pub trait PlacementProbe<T: Real>: Sync {
    fn chi(&self, x: &Vec3<T>) -> Vec3<T>;
    fn f(&self, x: &Vec3<T>) -> Mat3<T>;
    fn grad_f(&self, x: &Vec3<T>) -> Tensor3<T>;
}

impl<T: Real, P: PlacementProbe<T> + ?Sized> PlacementProbe<T> for &P {
    fn chi(&self, x: &Vec3<T>) -> Vec3<T> {
        (**self).chi(x)
    }
    fn f(&self, x: &Vec3<T>) -> Mat3<T> {
        (**self).f(x)
    }
    fn grad_f(&self, x: &Vec3<T>) -> Tensor3<T> {
        (**self).grad_f(x)
    }
}

/// `χ = F X + c` with constant `F`.
#[derive(Debug, Clone)]
pub struct Affine<T: Real> {
    pub f: Mat3<T>,
    pub c: Vec3<T>,
}

impl<T: Real> Affine<T> {
    /// Rigid motion `χ = Q X + c`; `q` is not checked.
    pub fn rigid(q: Mat3<T>, c: Vec3<T>) -> Self {
        Self { f: q, c }
    }
}

impl<T: Real> PlacementProbe<T> for Affine<T> {
    fn chi(&self, x: &Vec3<T>) -> Vec3<T> {
        self.f * x + self.c
    }
    fn f(&self, _x: &Vec3<T>) -> Mat3<T> {
        self.f
    }
    fn grad_f(&self, _x: &Vec3<T>) -> Tensor3<T> {
        Tensor3::zeros()
    }
}

/// `χ_α = X_α + C_{αjk} X_j X_k / 2`. The coefficient array is symmetrized
/// in its last two indices on construction.
#[derive(Debug, Clone)]
pub struct Quadratic<T: Real> {
    c: Tensor3<T>,
}

impl<T: Real> Quadratic<T> {
    pub fn new(c: &Tensor3<T>) -> Self {
        let half = T::lit(0.5);
        Self { c: Tensor3::from_fn(|[a, j, k]| half * (c.get([a, j, k]) + c.get([a, k, j]))) }
    }

    pub fn coefficients(&self) -> &Tensor3<T> {
        &self.c
    }
}

impl<T: Real> PlacementProbe<T> for Quadratic<T> {
    fn chi(&self, x: &Vec3<T>) -> Vec3<T> {
        let half = T::lit(0.5);
        Vec3::from_fn(|a, _| {
            let mut s = x[a];
            for j in 0..3 {
                for k in 0..3 {
                    s += half * self.c.get([a, j, k]) * x[j] * x[k];
                }
            }
            s
        })
    }
    fn f(&self, x: &Vec3<T>) -> Mat3<T> {
        Mat3::from_fn(|a, i| {
            let mut s = if a == i { T::one() } else { T::zero() };
            for k in 0..3 {
                s += self.c.get([a, i, k]) * x[k];
            }
            s
        })
    }
    fn grad_f(&self, _x: &Vec3<T>) -> Tensor3<T> {
        self.c.clone()
    }
}

/// Finite placement generated by the Saint-Venant torsion displacement
/// `u = (−ΘX₂X₃, ΘX₁X₃, Θw)` with a quadratic warping
/// `w = w₀ + w₁X₁ + w₂X₂ + (w₁₁X₁² + 2w₁₂X₁X₂ + w₂₂X₂²)/2`.
#[derive(Debug, Clone)]
pub struct Torsion<T: Real> {
    pub theta: T,
    /// `[w₀, w₁, w₂, w₁₁, w₁₂, w₂₂]`
    pub w: [T; 6],
}

impl<T: Real> Torsion<T> {
    pub fn unwarped(theta: T) -> Self {
        Self { theta, w: [T::zero(); 6] }
    }

    fn warp(&self, x: &Vec3<T>) -> (T, T, T) {
        let [w0, w1, w2, w11, w12, w22] = self.w;
        let (a, b) = (x[0], x[1]);
        let half = T::lit(0.5);
        let w = w0 + w1 * a + w2 * b + half * (w11 * a * a + T::lit(2.0) * w12 * a * b + w22 * b * b);
        (w, w1 + w11 * a + w12 * b, w2 + w12 * a + w22 * b)
    }
}

impl<T: Real> PlacementProbe<T> for Torsion<T> {
    fn chi(&self, x: &Vec3<T>) -> Vec3<T> {
        let t = self.theta;
        let (w, _, _) = self.warp(x);
        Vec3::new(x[0] - t * x[1] * x[2], x[1] + t * x[0] * x[2], x[2] + t * w)
    }
    fn f(&self, x: &Vec3<T>) -> Mat3<T> {
        let t = self.theta;
        let (_, w1, w2) = self.warp(x);
        let o = T::one();
        Mat3::new(o, -t * x[2], -t * x[1], t * x[2], o, t * x[0], t * w1, t * w2, o)
    }
    fn grad_f(&self, _x: &Vec3<T>) -> Tensor3<T> {
        let t = self.theta;
        let [_, _, _, w11, w12, w22] = self.w;
        let mut g = Tensor3::zeros();
        g.set([0, 1, 2], -t);
        g.set([0, 2, 1], -t);
        g.set([1, 0, 2], t);
        g.set([1, 2, 0], t);
        g.set([2, 0, 0], t * w11);
        g.set([2, 0, 1], t * w12);
        g.set([2, 1, 0], t * w12);
        g.set([2, 1, 1], t * w22);
        g
    }
}

/// `χ_α = X_α + a_α sin(k_α·X + φ_α)`: a smooth, genuinely non-polynomial
/// placement.
#[derive(Debug, Clone)]
pub struct Sinusoidal<T: Real> {
    pub amplitude: Vec3<T>,
    /// Row `α` is the wave vector `k_α`.
    pub wave: Mat3<T>,
    pub phase: Vec3<T>,
}

impl<T: Real> Sinusoidal<T> {
    /// Random instance with amplitudes below `max_amplitude` and unit-order
    /// wave vectors; small amplitudes keep `det F > 0`.
    pub fn random(seed: u64, max_amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let uni = Uniform::new(-1.0, 1.0).expect("valid range");
        let mut n = || -> f64 { StandardNormal.sample(&mut rng) };
        let wave = Mat3::from_fn(|_, _| T::lit(n()));
        let phase = Vec3::from_fn(|_, _| T::lit(n()));
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let amplitude = Vec3::from_fn(|_, _| T::lit(max_amplitude * uni.sample(&mut rng2)));
        Self { amplitude, wave, phase }
    }

    fn arg(&self, a: usize, x: &Vec3<T>) -> T {
        self.wave.row(a).transpose().dot(x) + self.phase[a]
    }
}

impl<T: Real> PlacementProbe<T> for Sinusoidal<T> {
    fn chi(&self, x: &Vec3<T>) -> Vec3<T> {
        Vec3::from_fn(|a, _| x[a] + self.amplitude[a] * self.arg(a, x).sin())
    }
    fn f(&self, x: &Vec3<T>) -> Mat3<T> {
        Mat3::from_fn(|a, i| {
            let d = if a == i { T::one() } else { T::zero() };
            d + self.amplitude[a] * self.arg(a, x).cos() * self.wave[(a, i)]
        })
    }
    fn grad_f(&self, x: &Vec3<T>) -> Tensor3<T> {
        Tensor3::from_fn(|[a, i, j]| -self.amplitude[a] * self.arg(a, x).sin() * self.wave[(a, i)] * self.wave[(a, j)])
    }
}

/// Superposed rigid rotation: `χ' = Q χ`.
#[derive(Debug, Clone)]
pub struct Rotated<T: Real, P> {
    pub q: Mat3<T>,
    pub inner: P,
}

impl<T: Real, P: PlacementProbe<T>> PlacementProbe<T> for Rotated<T, P> {
    fn chi(&self, x: &Vec3<T>) -> Vec3<T> {
        self.q * self.inner.chi(x)
    }
    fn f(&self, x: &Vec3<T>) -> Mat3<T> {
        self.q * self.inner.f(x)
    }
    fn grad_f(&self, x: &Vec3<T>) -> Tensor3<T> {
        let g = self.inner.grad_f(x);
        Tensor3::from_fn(|[a, i, j]| {
            let mut s = T::zero();
            for b in 0..3 {
                s += self.q[(a, b)] * g.get([b, i, j]);
            }
            s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_derivatives<P: PlacementProbe<f64>>(p: &P, x: Vec3<f64>) {
        let h = 1e-5;
        let f = p.f(&x);
        let g = p.grad_f(&x);
        for j in 0..3 {
            let mut e = Vec3::zeros();
            e[j] = h;
            let dchi = (p.chi(&(x + e)) - p.chi(&(x - e))) / (2.0 * h);
            let df = (p.f(&(x + e)) - p.f(&(x - e))) / (2.0 * h);
            for a in 0..3 {
                assert!((dchi[a] - f[(a, j)]).abs() < 1e-8, "F[{a},{j}]");
                for i in 0..3 {
                    assert!((df[(a, i)] - g.get([a, i, j])).abs() < 1e-8, "gradF[{a},{i},{j}]");
                    assert!((g.get([a, i, j]) - g.get([a, j, i])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let x = Vec3::new(0.3, -0.2, 0.7);
        check_derivatives(&Sinusoidal::<f64>::random(4, 0.1), x);
        check_derivatives(&Torsion { theta: 0.3, w: [0.1, 0.2, -0.1, 0.4, -0.3, 0.2] }, x);
        let c = Tensor3::from_fn(|[a, j, k]| 0.1 * ((a + 2 * j + 3 * k) as f64).sin());
        check_derivatives(&Quadratic::new(&c), x);
        let q = crate::tensor::random_orthogonal(8, true);
        check_derivatives(&Rotated { q, inner: Sinusoidal::<f64>::random(5, 0.1) }, x);
    }
}
