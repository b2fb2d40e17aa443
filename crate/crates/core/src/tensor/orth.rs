use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::Real;

use super::Mat3;

/// Rejects `q` unless `max |QᵀQ − I| <= tol`.
pub fn check_orthogonal<T: Real>(q: &Mat3<T>, tol: f64) -> Result<()> {
    let dev = (q.transpose() * q - Mat3::identity()).amax();
    if dev > T::lit(tol) {
        return Err(Error::NotOrthogonal { deviation: dev.to_f64_lossy() });
    }
    Ok(())
}

/// Deterministic pseudo-random orthogonal matrix.
///
/// A proper rotation is drawn from a normalized Gaussian quaternion
/// (uniform on SO(3)). For `proper == false` it is composed with the
/// reflection `diag(-1, 1, 1)`, giving `det Q = -1`.
pub fn random_orthogonal<T: Real>(seed: u64, proper: bool) -> Mat3<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut qv = [0.0f64; 4];
    loop {
        for v in qv.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        let n = qv.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-8 {
            qv.iter_mut().for_each(|v| *v /= n);
            break;
        }
    }
    let [w, x, y, z] = qv;
    let r = [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ];
    let sign = |j: usize| if !proper && j == 0 { -1.0 } else { 1.0 };
    Mat3::from_fn(|i, j| T::lit(r[i][j] * sign(j)))
}
