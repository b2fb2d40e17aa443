use crate::Real;

use super::Mat3;

/// Dense tensor of order `N` over three dimensions, stored row-major
/// (last index fastest) in `3^N` components.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T, const N: usize> {
    data: Vec<T>,
}

pub type Tensor3<T> = Tensor<T, 3>;
pub type Tensor4<T> = Tensor<T, 4>;
pub type Tensor5<T> = Tensor<T, 5>;
pub type Tensor6<T> = Tensor<T, 6>;

const fn len(order: usize) -> usize {
    3usize.pow(order as u32)
}

impl<T: Real, const N: usize> Tensor<T, N> {
    pub fn zeros() -> Self {
        Self { data: vec![T::zero(); len(N)] }
    }

    pub fn from_fn(mut f: impl FnMut([usize; N]) -> T) -> Self {
        let data = (0..len(N)).map(|flat| f(Self::unflatten(flat))).collect();
        Self { data }
    }

    #[inline]
    fn flatten(idx: [usize; N]) -> usize {
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < 3);
            acc * 3 + i
        })
    }

    #[inline]
    fn unflatten(mut flat: usize) -> [usize; N] {
        let mut idx = [0; N];
        for slot in idx.iter_mut().rev() {
            *slot = flat % 3;
            flat /= 3;
        }
        idx
    }

    #[inline]
    pub fn get(&self, idx: [usize; N]) -> T {
        self.data[Self::flatten(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: [usize; N], v: T) {
        let f = Self::flatten(idx);
        self.data[f] = v;
    }

    #[inline]
    pub fn add_at(&mut self, idx: [usize; N], v: T) {
        let f = Self::flatten(idx);
        self.data[f] += v;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    pub fn scale(&self, s: T) -> Self {
        Self { data: self.data.iter().map(|&v| v * s).collect() }
    }

    /// Largest deviation from invariance under the index permutation `perm`
    /// (`perm[m]` is the source slot of output slot `m`).
    pub fn asymmetry(&self, perm: [usize; N]) -> T {
        let mut worst = T::zero();
        for flat in 0..len(N) {
            let idx = Self::unflatten(flat);
            let mut p = [0; N];
            for m in 0..N {
                p[m] = idx[perm[m]];
            }
            worst = worst.max((self.data[flat] - self.get(p)).abs());
        }
        worst
    }

    /// `(R T)_{i₁…i_N} = Q_{h₁i₁} ⋯ Q_{h_Ni_N} T_{h₁…h_N}`, contracting one
    /// slot at a time.
    pub fn rotate(&self, q: &Mat3<T>) -> Self {
        let mut cur = self.data.clone();
        let mut next = vec![T::zero(); cur.len()];
        for mode in 0..N {
            let stride = len(N - 1 - mode);
            let outer = len(mode);
            for o in 0..outer {
                let base = o * 3 * stride;
                for i in 0..3 {
                    for inner in 0..stride {
                        let mut s = T::zero();
                        for h in 0..3 {
                            s += q[(h, i)] * cur[base + h * stride + inner];
                        }
                        next[base + i * stride + inner] = s;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Self { data: cur }
    }
}
