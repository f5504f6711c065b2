//! Voigt 6x6 representation of a stiffness tensor.
//!
//! The map is a pure relabeling `11, 22, 33, 23, 13, 12 -> 1..6` with
//! `C_ijkl = m_ab`. No `2` or `sqrt(2)` weights are applied, so this is the
//! stiffness convention, not Mandel notation and not the compliance one.

use serde::{Deserialize, Serialize};

use super::stiffness::StiffnessTensor;
use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// Absolute symmetry tolerance, scaled by `max(1, max |m|)`.
pub const VOIGT_SYMMETRY_TOL: f64 = 1e-12;

/// Index pairs for Voigt labels 1..6 (0-based).
pub const VOIGT_PAIRS: [[usize; 2]; 6] = [[0, 0], [1, 1], [2, 2], [1, 2], [0, 2], [0, 1]];

/// Voigt label (0-based) of an index pair.
pub fn voigt_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (a, b) if a == b => a,
        (1, 2) => 3,
        (0, 2) => 4,
        _ => 5,
    }
}

/// Symmetric 6x6 matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct VoigtMatrix {
    m: [[f64; 6]; 6],
}

impl VoigtMatrix {
    pub fn new(m: [[f64; 6]; 6]) -> Result<Self> {
        let scale = m.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
        for a in 0..6 {
            for b in 0..a {
                let diff = (m[a][b] - m[b][a]).abs();
                if diff > VOIGT_SYMMETRY_TOL * scale {
                    return Err(Error::Symmetry(format!(
                        "Voigt matrix not symmetric: m[{}][{}] - m[{}][{}] = {diff:.3e}",
                        a + 1,
                        b + 1,
                        b + 1,
                        a + 1
                    )));
                }
            }
        }
        Ok(Self { m })
    }

    /// From rows of arbitrary length; must be 6 rows of 6 entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != 6 {
            return Err(Error::Symmetry(format!("Voigt matrix needs 6 rows, got {}", rows.len())));
        }
        let mut m = [[0.0; 6]; 6];
        for (a, row) in rows.iter().enumerate() {
            if row.len() != 6 {
                return Err(Error::Symmetry(format!(
                    "Voigt row {} has {} entries, expected 6",
                    a + 1,
                    row.len()
                )));
            }
            m[a].copy_from_slice(row);
        }
        Self::new(m)
    }

    pub fn rows(&self) -> &[[f64; 6]; 6] {
        &self.m
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.m[a][b]
    }
}

impl<'de> Deserialize<'de> for VoigtMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(de)?;
        VoigtMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub fn voigt_to_tensor(m: &VoigtMatrix) -> StiffnessTensor {
    let t = DenseTensor::from_fn(4, |x| m.m[voigt_index(x[0], x[1])][voigt_index(x[2], x[3])]);
    StiffnessTensor::new(t).expect("symmetric Voigt matrix gives a symmetric tensor")
}

pub fn tensor_to_voigt(c: &StiffnessTensor) -> VoigtMatrix {
    let t = c.tensor();
    let mut m = [[0.0; 6]; 6];
    for (a, [i, j]) in VOIGT_PAIRS.iter().enumerate() {
        for (b, [k, l]) in VOIGT_PAIRS.iter().enumerate() {
            m[a][b] = t.get(&[*i, *j, *k, *l]);
        }
    }
    // Exact copy of tensor entries; major symmetry holds within tolerance.
    VoigtMatrix { m }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_relabels() {
        let mut m = [[0.0; 6]; 6];
        for (a, row) in m.iter_mut().enumerate() {
            row[a] = 1.0;
        }
        let c = voigt_to_tensor(&VoigtMatrix::new(m).unwrap());
        assert_eq!(c.tensor().get(&[0, 0, 0, 0]), 1.0);
        assert_eq!(c.tensor().get(&[1, 2, 1, 2]), 1.0);
        assert_eq!(c.tensor().get(&[2, 1, 1, 2]), 1.0);
        assert_eq!(c.tensor().get(&[0, 0, 1, 1]), 0.0);
    }

    #[test]
    fn isotropic_entries() {
        let m = tensor_to_voigt(&StiffnessTensor::isotropic(2.0, 1.0));
        assert_eq!(m.get(0, 0), 4.0);
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.get(3, 3), 1.0);
        assert_eq!(m.get(3, 4), 0.0);
    }

    #[test]
    fn round_trip_exact() {
        let mut m = [[0.0; 6]; 6];
        for a in 0..6 {
            for b in a..6 {
                let v = ((a * 7 + b * 3) as f64).sin() * 1e3 + 0.1;
                m[a][b] = v;
                m[b][a] = v;
            }
        }
        let vm = VoigtMatrix::new(m).unwrap();
        assert_eq!(tensor_to_voigt(&voigt_to_tensor(&vm)), vm);
    }

    #[test]
    fn rejects_asymmetric_and_bad_shape() {
        let mut m = [[0.0; 6]; 6];
        m[0][1] = 1.0;
        assert!(VoigtMatrix::new(m).is_err());
        assert!(VoigtMatrix::from_rows(&vec![vec![0.0; 6]; 5]).is_err());
        assert!(serde_json::from_str::<VoigtMatrix>("[[1,2,3,4,5,6]]").is_err());
    }
}
