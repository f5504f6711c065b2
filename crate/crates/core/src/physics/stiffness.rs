//! Fourth-order stiffness tensor and its Lamé/deviator decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::{check_deviator, MEMBERSHIP_TOL};
use crate::tensor::DenseTensor;

/// Absolute symmetry tolerance, scaled by `max(1, max |C|)`.
pub const STIFFNESS_SYMMETRY_TOL: f64 = 1e-12;

/// Order-4 tensor with minor symmetries `C_ijkl = C_jikl = C_ijlk` and major
/// symmetry `C_ijkl = C_klij`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StiffnessTensor {
    tensor: DenseTensor,
}

impl StiffnessTensor {
    pub fn new(tensor: DenseTensor) -> Result<Self> {
        if tensor.order() != 4 {
            return Err(Error::OrderMismatch {
                expected: 4,
                found: tensor.order(),
            });
        }
        let scale = tensor.max_abs().max(1.0);
        let checks: [(&str, [usize; 4]); 3] = [
            ("minor (ij)", [1, 0, 2, 3]),
            ("minor (kl)", [0, 1, 3, 2]),
            ("major", [2, 3, 0, 1]),
        ];
        for (name, perm) in checks {
            let swapped = tensor.transpose(&perm)?;
            for (n, (a, b)) in tensor.components().iter().zip(swapped.components()).enumerate() {
                let diff = (a - b).abs();
                if diff > STIFFNESS_SYMMETRY_TOL * scale {
                    let idx = [n / 27, n / 9 % 3, n / 3 % 3, n % 3];
                    return Err(Error::Symmetry(format!(
                        "stiffness tensor violates {name} symmetry at {idx:?} by {diff:.3e}"
                    )));
                }
            }
        }
        Ok(Self { tensor })
    }

    /// Isotropic tensor `lambda delta_ij delta_kl + mu (delta_ik delta_jl + delta_il delta_jk)`.
    pub fn isotropic(lambda: f64, mu: f64) -> Self {
        Self {
            tensor: DenseTensor::from_fn(4, |x| {
                let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                lambda * kd(i, j) * kd(k, l) + mu * (kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k))
            }),
        }
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> DenseTensor {
        self.tensor
    }
}

impl<'de> Deserialize<'de> for StiffnessTensor {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            tensor: DenseTensor,
        }
        let raw = Raw::deserialize(de)?;
        StiffnessTensor::new(raw.tensor).map_err(serde::de::Error::custom)
    }
}

/// Lamé coefficients, two order-2 deviators and one order-4 deviator. The
/// scalar parts and the order-2 parts are not mutually orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StiffnessDeviators {
    pub lambda: f64,
    pub mu: f64,
    pub d1: DenseTensor,
    pub d2: DenseTensor,
    pub d4: DenseTensor,
}

fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `lambda delta delta + mu (..) + {delta_ij D1_kl + delta_kl D1_ij}
///  + {delta_ik D2_jl + delta_il D2_jk + delta_jk D2_il + delta_jl D2_ik}`.
fn isotropic_and_order2(lambda: f64, mu: f64, d1: &DenseTensor, d2: &DenseTensor) -> DenseTensor {
    DenseTensor::from_fn(4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        lambda * kd(i, j) * kd(k, l)
            + mu * (kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k))
            + kd(i, j) * d1.get(&[k, l])
            + kd(k, l) * d1.get(&[i, j])
            + kd(i, k) * d2.get(&[j, l])
            + kd(i, l) * d2.get(&[j, k])
            + kd(j, k) * d2.get(&[i, l])
            + kd(j, l) * d2.get(&[i, k])
    })
}

/// `(C_iikk, C_ikik)`.
pub fn stiffness_traces(c: &DenseTensor) -> (f64, f64) {
    let mut iikk = 0.0;
    let mut ikik = 0.0;
    for i in 0..3 {
        for k in 0..3 {
            iikk += c.get(&[i, i, k, k]);
            ikik += c.get(&[i, k, i, k]);
        }
    }
    (iikk, ikik)
}

pub fn stiffness_decompose(c: &StiffnessTensor) -> StiffnessDeviators {
    let t = &c.tensor;
    let (iikk, ikik) = stiffness_traces(t);
    let lambda = (2.0 * iikk - ikik) / 15.0;
    let mu = (3.0 * ikik - iikk) / 30.0;
    // A_ij = C_kkij, B_ij = C_kikj, both with the isotropic trace removed.
    let a = DenseTensor::from_fn(2, |x| {
        (0..3).map(|k| t.get(&[k, k, x[0], x[1]])).sum::<f64>() - iikk / 3.0 * kd(x[0], x[1])
    });
    let b = DenseTensor::from_fn(2, |x| {
        (0..3).map(|k| t.get(&[k, x[0], k, x[1]])).sum::<f64>() - ikik / 3.0 * kd(x[0], x[1])
    });
    let d1 = &a.scale(5.0 / 7.0) - &b.scale(4.0 / 7.0);
    let d2 = &b.scale(3.0 / 7.0) - &a.scale(2.0 / 7.0);
    let d4 = t - &isotropic_and_order2(lambda, mu, &d1, &d2);
    StiffnessDeviators {
        lambda,
        mu,
        d1,
        d2,
        d4,
    }
}

pub fn stiffness_reconstruct(d: &StiffnessDeviators) -> Result<StiffnessTensor> {
    for (t, order, what) in [(&d.d1, 2, "stiffness D1"), (&d.d2, 2, "stiffness D2"), (&d.d4, 4, "stiffness D4")] {
        if t.order() != order {
            return Err(Error::OrderMismatch {
                expected: order,
                found: t.order(),
            });
        }
        check_deviator(t, what, MEMBERSHIP_TOL)?;
    }
    let mut out = isotropic_and_order2(d.lambda, d.mu, &d.d1, &d.d2);
    out.axpy(1.0, &d.d4);
    StiffnessTensor::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_example() {
        let c = StiffnessTensor::isotropic(2.0, 1.0);
        assert_eq!(stiffness_traces(c.tensor()), (24.0, 18.0));
        let d = stiffness_decompose(&c);
        assert!((d.lambda - 2.0).abs() < 1e-12);
        assert!((d.mu - 1.0).abs() < 1e-12);
        assert!(d.d1.max_abs() < 1e-12 && d.d2.max_abs() < 1e-12 && d.d4.max_abs() < 1e-12);
    }

    #[test]
    fn lambda_only_reconstruction() {
        let d = StiffnessDeviators {
            lambda: 1.0,
            mu: 0.0,
            d1: DenseTensor::zeros(2),
            d2: DenseTensor::zeros(2),
            d4: DenseTensor::zeros(4),
        };
        let c = stiffness_reconstruct(&d).unwrap();
        assert_eq!(c.tensor().get(&[0, 0, 1, 1]), 1.0);
        assert_eq!(c.tensor().get(&[0, 1, 0, 1]), 0.0);
    }

    #[test]
    fn zero_round_trip() {
        let c = StiffnessTensor::new(DenseTensor::zeros(4)).unwrap();
        let d = stiffness_decompose(&c);
        assert_eq!(d.lambda, 0.0);
        assert_eq!(stiffness_reconstruct(&d).unwrap(), c);
    }

    #[test]
    fn rejects_broken_symmetry() {
        let t = DenseTensor::zeros(4).with(&[0, 0, 1, 1], 1.0).with(&[1, 1, 0, 0], 1.0);
        assert!(StiffnessTensor::new(t.clone()).is_ok());
        assert!(StiffnessTensor::new(t.with(&[0, 1, 2, 2], 1.0)).is_err());
        assert!(StiffnessTensor::new(DenseTensor::zeros(3)).is_err());
    }

    #[test]
    fn reconstruct_rejects_non_deviators() {
        let d = StiffnessDeviators {
            lambda: 0.0,
            mu: 0.0,
            d1: DenseTensor::delta(),
            d2: DenseTensor::zeros(2),
            d4: DenseTensor::zeros(4),
        };
        assert!(stiffness_reconstruct(&d).is_err());
    }
}
