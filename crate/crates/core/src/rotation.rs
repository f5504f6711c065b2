//! Proper rotations of R^3.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orthogonality and determinant tolerance for [`Rotation::new`].
pub const ROTATION_TOL: f64 = 1e-12;

/// A validated proper rotation (orthogonal, det = +1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 3]; 3]", into = "[[f64; 3]; 3]")]
pub struct Rotation {
    matrix: [[f64; 3]; 3],
}

impl TryFrom<[[f64; 3]; 3]> for Rotation {
    type Error = Error;

    fn try_from(m: [[f64; 3]; 3]) -> Result<Self> {
        Rotation::new(m)
    }
}

impl From<Rotation> for [[f64; 3]; 3] {
    fn from(r: Rotation) -> Self {
        r.matrix
    }
}

impl Rotation {
    pub fn new(matrix: [[f64; 3]; 3]) -> Result<Self> {
        let mut orthogonality = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let rrt: f64 = (0..3).map(|k| matrix[i][k] * matrix[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                orthogonality = orthogonality.max((rrt - target).abs());
            }
        }
        let det = det3(&matrix);
        if !(orthogonality <= ROTATION_TOL && (det - 1.0).abs() <= ROTATION_TOL) {
            return Err(Error::NotRotation { orthogonality, det });
        }
        Ok(Rotation { matrix })
    }

    pub fn identity() -> Self {
        Rotation {
            matrix: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rotation by `angle` radians about `axis` (normalized internally).
    pub fn about_axis(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rotation {
            matrix: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    /// Uniformly distributed rotation from a random unit quaternion.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // Shoemake's subgroup algorithm.
        let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
        let tau = std::f64::consts::TAU;
        let a = (1.0 - u1).sqrt();
        let b = u1.sqrt();
        let (w, x, y, z) = (
            a * (tau * u2).sin(),
            a * (tau * u2).cos(),
            b * (tau * u3).sin(),
            b * (tau * u3).cos(),
        );
        Rotation {
            matrix: [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - z * w),
                    2.0 * (x * z + y * w),
                ],
                [
                    2.0 * (x * y + z * w),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - x * w),
                ],
                [
                    2.0 * (x * z - y * w),
                    2.0 * (y * z + x * w),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ],
        }
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.matrix
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Rotation) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        Rotation { matrix: m }
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DenseTensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_reflections_and_skew_matrices() {
        let reflection = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(
            Rotation::new(reflection),
            Err(Error::NotRotation { .. })
        ));
        let scaled = [[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]];
        assert!(Rotation::new(scaled).is_err());
        assert!(Rotation::new(*Rotation::identity().matrix()).is_ok());
    }

    #[test]
    fn random_rotations_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = Rotation::random(&mut rng);
            Rotation::new(*r.matrix()).unwrap();
        }
    }

    #[test]
    fn rotate_examples() {
        let t = DenseTensor::from_fn(3, |ix| (ix[0] * 9 + ix[1] * 3 + ix[2]) as f64 - 4.0);
        assert_eq!(t.rotate(&Rotation::identity()), t);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = Rotation::random(&mut rng);
        let d = DenseTensor::delta().rotate(&r);
        assert!((&d - &DenseTensor::delta()).max_abs() < 1e-12);

        let quarter = Rotation::about_axis([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2);
        let e = DenseTensor::unit(0).rotate(&quarter);
        assert!((&e - &DenseTensor::unit(1)).max_abs() < 1e-15);
    }

    #[test]
    fn rotation_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = DenseTensor::from_fn(4, |ix| ((ix[0] + 2 * ix[1]) * (ix[2] + 1)) as f64 - ix[3] as f64);
        for _ in 0..10 {
            let r1 = Rotation::random(&mut rng);
            let r2 = Rotation::random(&mut rng);
            let two_step = t.rotate(&r1).rotate(&r2);
            let once = t.rotate(&r2.compose(&r1));
            assert!((&two_step - &once).max_abs() < 1e-12 * t.norm());
        }
    }

    #[test]
    fn epsilon_invariant_under_proper_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = DenseTensor::epsilon();
        let r = Rotation::random(&mut rng);
        assert!((&e.rotate(&r) - &e).max_abs() < 1e-12);
    }
}
