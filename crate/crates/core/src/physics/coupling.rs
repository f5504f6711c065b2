//! Third-order coupling tensor `H_{ijk} = H_{jik}` and its four-deviator
//! decomposition.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::closedform::l4;
use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::harmonic::{check_deviator, MEMBERSHIP_TOL};
use crate::tensor::{levi_civita as eps, DenseTensor};

/// Absolute symmetry tolerance, scaled by `max(1, max |H|)`.
pub const COUPLING_SYMMETRY_TOL: f64 = 1e-12;

/// Order-3 tensor symmetric in its first two indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingTensor {
    tensor: DenseTensor,
}

impl CouplingTensor {
    pub fn new(tensor: DenseTensor) -> Result<Self> {
        if tensor.order() != 3 {
            return Err(Error::OrderMismatch {
                expected: 3,
                found: tensor.order(),
            });
        }
        let scale = tensor.max_abs().max(1.0);
        for i in 0..3 {
            for j in 0..i {
                for k in 0..3 {
                    let diff = (tensor.get(&[i, j, k]) - tensor.get(&[j, i, k])).abs();
                    if diff > COUPLING_SYMMETRY_TOL * scale {
                        return Err(Error::Symmetry(format!(
                            "coupling tensor: H[{i},{j},{k}] - H[{j},{i},{k}] = {diff:.3e}"
                        )));
                    }
                }
            }
        }
        Ok(Self { tensor })
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> DenseTensor {
        self.tensor
    }
}

impl<'de> Deserialize<'de> for CouplingTensor {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            tensor: DenseTensor,
        }
        let raw = Raw::deserialize(de)?;
        CouplingTensor::new(raw.tensor).map_err(serde::de::Error::custom)
    }
}

/// Which set of coefficient functionals maps `H` to its deviators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingVariant {
    /// The widely circulated closed-form coefficient list, taken verbatim.
    /// Its `v2` third component fails the round trip; see [`coefficient_diff`].
    Printed,
    /// Functionals read off the generic order-3 decomposition restricted to
    /// the coupling symmetry.
    Fitted,
}

/// `v2, v3, D1, D3` are independent; `alpha = 0`, `v1 = 5/2 v3 - v2` and
/// `D2 = -2/3 D1` are derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingDeviators {
    pub alpha: f64,
    pub v1: DenseTensor,
    pub v2: DenseTensor,
    pub v3: DenseTensor,
    pub d1: DenseTensor,
    pub d2: DenseTensor,
    pub d3: DenseTensor,
}

impl CouplingDeviators {
    /// Builds the record from the independent deviators, filling in the
    /// derived ones.
    pub fn from_independent(
        v2: DenseTensor,
        v3: DenseTensor,
        d1: DenseTensor,
        d3: DenseTensor,
    ) -> Result<Self> {
        for (t, order) in [(&v2, 1), (&v3, 1), (&d1, 2), (&d3, 3)] {
            if t.order() != order {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: t.order(),
                });
            }
        }
        let v1 = &v3.scale(2.5) - &v2;
        let d2 = d1.scale(-2.0 / 3.0);
        Ok(Self {
            alpha: 0.0,
            v1,
            v2,
            v3,
            d1,
            d2,
            d3,
        })
    }
}

/// Canonical independent components: `H[a,b,c]` with `a <= b`, 18 in total.
pub fn canonical_indices() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(18);
    for a in 0..3 {
        for b in a..3 {
            for c in 0..3 {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn canonical_position(index: [usize; 3]) -> usize {
    let [a, b, c] = index;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    canonical_indices()
        .iter()
        .position(|x| *x == [a, b, c])
        .expect("canonical index")
}

/// Output slots of the decomposition functionals: field name and index.
fn output_slots() -> Vec<(&'static str, Vec<usize>)> {
    let mut slots = Vec::new();
    for i in 0..3 {
        slots.push(("v2", vec![i]));
    }
    for i in 0..3 {
        slots.push(("v3", vec![i]));
    }
    for ij in [[0, 0], [1, 1], [2, 2], [0, 1], [0, 2], [1, 2]] {
        slots.push(("D1", ij.to_vec()));
    }
    for ijk in [
        [0, 0, 0],
        [1, 1, 1],
        [2, 2, 2],
        [0, 1, 1],
        [0, 2, 2],
        [1, 0, 0],
        [1, 2, 2],
        [2, 0, 0],
        [2, 1, 1],
        [0, 1, 2],
    ] {
        slots.push(("D", ijk.to_vec()));
    }
    slots
}

type Printed = (f64, [usize; 3]);

/// Printed coefficient list, 1-based indices, one row per output slot.
fn printed_rows() -> Vec<Vec<Printed>> {
    let q = 0.25;
    let t = 1.0 / 30.0;
    let h = 0.5;
    let f = 1.0 / 5.0;
    let ff = 1.0 / 15.0;
    vec![
        // v2
        vec![(q, [2, 2, 1]), (-q, [1, 2, 2]), (q, [3, 3, 1]), (-q, [1, 3, 3])],
        vec![(q, [1, 1, 2]), (-q, [1, 2, 1]), (q, [3, 3, 2]), (-q, [2, 3, 3])],
        vec![(q, [1, 3, 3]), (-q, [1, 3, 1]), (q, [2, 2, 3]), (-q, [2, 3, 2])],
        // v3
        vec![(4.0 * t, [1, 1, 1]), (t, [1, 2, 2]), (t, [1, 3, 3]), (3.0 * t, [2, 2, 1]), (3.0 * t, [3, 3, 1])],
        vec![(4.0 * t, [2, 2, 2]), (t, [1, 2, 1]), (t, [2, 3, 3]), (3.0 * t, [1, 1, 2]), (3.0 * t, [3, 3, 2])],
        vec![(4.0 * t, [3, 3, 3]), (t, [1, 3, 1]), (t, [2, 3, 2]), (3.0 * t, [1, 1, 3]), (3.0 * t, [2, 2, 3])],
        // D1: 11, 22, 33, 12, 13, 23
        vec![(h, [1, 2, 3]), (-h, [1, 3, 2])],
        vec![(h, [2, 3, 1]), (-h, [1, 2, 3])],
        vec![(h, [1, 3, 2]), (-h, [2, 3, 1])],
        vec![(-q, [1, 1, 3]), (q, [1, 3, 1]), (q, [2, 2, 3]), (-q, [2, 3, 2])],
        vec![(q, [1, 1, 2]), (-q, [1, 2, 1]), (q, [2, 3, 3]), (-q, [3, 3, 2])],
        vec![(q, [1, 2, 2]), (-q, [2, 2, 1]), (-q, [1, 3, 3]), (q, [3, 3, 1])],
        // D: 111, 222, 333, 122, 133, 211, 233, 311, 322, 123
        vec![(2.0 * f, [1, 1, 1]), (-2.0 * f, [1, 2, 2]), (-2.0 * f, [1, 3, 3]), (-f, [2, 2, 1]), (-f, [3, 3, 1])],
        vec![(2.0 * f, [2, 2, 2]), (-2.0 * f, [2, 1, 1]), (-2.0 * f, [2, 3, 3]), (-f, [1, 1, 2]), (-f, [3, 3, 2])],
        vec![(2.0 * f, [3, 3, 3]), (-2.0 * f, [3, 2, 2]), (-2.0 * f, [3, 1, 1]), (-f, [1, 1, 3]), (-f, [2, 2, 3])],
        vec![(8.0 * ff, [1, 2, 2]), (-f, [1, 1, 1]), (-2.0 * ff, [1, 3, 3]), (4.0 * ff, [2, 2, 1]), (-ff, [3, 3, 1])],
        vec![(8.0 * ff, [1, 3, 3]), (-f, [1, 1, 1]), (-ff, [2, 2, 1]), (4.0 * ff, [3, 3, 1]), (-2.0 * ff, [2, 1, 2])],
        vec![(8.0 * ff, [2, 1, 1]), (-f, [2, 2, 2]), (-2.0 * ff, [2, 3, 3]), (4.0 * ff, [1, 1, 2]), (-ff, [3, 3, 2])],
        vec![(8.0 * ff, [2, 3, 3]), (-2.0 * ff, [2, 1, 1]), (-f, [2, 2, 2]), (-ff, [1, 1, 2]), (4.0 * ff, [3, 3, 2])],
        vec![(8.0 * ff, [3, 1, 1]), (-2.0 * ff, [3, 2, 2]), (-f, [3, 3, 3]), (4.0 * ff, [1, 1, 3]), (-ff, [2, 2, 3])],
        vec![(8.0 * ff, [3, 2, 2]), (-2.0 * ff, [3, 1, 1]), (-f, [3, 3, 3]), (-ff, [1, 1, 3]), (4.0 * ff, [2, 2, 3])],
        vec![(1.0 / 3.0, [1, 2, 3]), (1.0 / 3.0, [1, 3, 2]), (1.0 / 3.0, [2, 3, 1])],
    ]
}

/// Functional matrix (22 output slots x 18 canonical components).
type Functionals = Vec<[f64; 18]>;

fn printed_functionals() -> &'static Functionals {
    static CELL: OnceLock<Functionals> = OnceLock::new();
    CELL.get_or_init(|| {
        printed_rows()
            .into_iter()
            .map(|row| {
                let mut out = [0.0; 18];
                for (c, [a, b, d]) in row {
                    out[canonical_position([a - 1, b - 1, d - 1])] += c;
                }
                out
            })
            .collect()
    })
}

fn fitted_functionals() -> &'static Functionals {
    static CELL: OnceLock<Functionals> = OnceLock::new();
    CELL.get_or_init(|| {
        let slots = output_slots();
        let mut rows = vec![[0.0; 18]; slots.len()];
        for (col, [a, b, c]) in canonical_indices().into_iter().enumerate() {
            let e = DenseTensor::zeros(3).with(&[a, b, c], 1.0).with(&[b, a, c], 1.0);
            let d = decompose(&e);
            let part = |s, j| &d.part(s, j).expect("order-3 part").deviator;
            for (row, (field, idx)) in slots.iter().enumerate() {
                let source = match *field {
                    "v2" => part(1, 2),
                    "v3" => part(1, 3),
                    "D1" => part(2, 1),
                    _ => part(3, 1),
                };
                rows[row][col] = source.get(idx);
            }
        }
        rows
    })
}

fn functionals(variant: CouplingVariant) -> &'static Functionals {
    match variant {
        CouplingVariant::Printed => printed_functionals(),
        CouplingVariant::Fitted => fitted_functionals(),
    }
}

/// Decomposition with the printed coefficient list.
pub fn coupling_decompose(h: &CouplingTensor) -> CouplingDeviators {
    coupling_decompose_with(h, CouplingVariant::Printed)
}

pub fn coupling_decompose_with(h: &CouplingTensor, variant: CouplingVariant) -> CouplingDeviators {
    let x: Vec<f64> = canonical_indices()
        .iter()
        .map(|&[a, b, c]| h.tensor.get(&[a, b, c]))
        .collect();
    let mut v2 = DenseTensor::zeros(1);
    let mut v3 = DenseTensor::zeros(1);
    let mut d1 = DenseTensor::zeros(2);
    let mut d3 = DenseTensor::zeros(3);
    for ((field, idx), row) in output_slots().iter().zip(functionals(variant)) {
        let value: f64 = row.iter().zip(&x).map(|(r, h)| r * h).sum();
        match *field {
            "v2" => v2 = v2.with(idx, value),
            "v3" => v3 = v3.with(idx, value),
            "D1" => d1 = fill_symmetric(d1, idx, value),
            _ => d3 = fill_symmetric(d3, idx, value),
        }
    }
    CouplingDeviators::from_independent(v2, v3, d1, d3).expect("fixed orders")
}

/// Sets every permutation of `index`.
fn fill_symmetric(mut t: DenseTensor, index: &[usize], value: f64) -> DenseTensor {
    use itertools::Itertools;
    for p in index.iter().copied().permutations(index.len()) {
        t = t.with(&p, value);
    }
    t
}

/// Assembles `H_{ijk}` from the independent deviators:
/// `eps_jkt eps_tis v2_s - delta_jk v2_i + 5/2 delta_jk v3_i + L_ijks v3_s
///  + eps_jks D1_si - 1/3 (eps_isj D1_ks + eps_isk D1_js) + D_ijk`.
pub fn coupling_reconstruct(d: &CouplingDeviators) -> Result<CouplingTensor> {
    for (t, what) in [(&d.d1, "coupling D1"), (&d.d3, "coupling D")] {
        check_deviator(t, what, MEMBERSHIP_TOL)?;
    }
    for (t, order) in [(&d.v2, 1), (&d.v3, 1)] {
        if t.order() != order {
            return Err(Error::OrderMismatch {
                expected: order,
                found: t.order(),
            });
        }
    }
    let l = l4();
    let kd = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let t = DenseTensor::from_fn(3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        let mut sum = 0.0;
        for s in 0..3 {
            for t in 0..3 {
                sum += eps(j, k, t) * eps(t, i, s) * d.v2.get(&[s]);
            }
            sum += l.get(&[i, j, k, s]) * d.v3.get(&[s]);
            sum += eps(j, k, s) * d.d1.get(&[s, i]);
            sum -= (eps(i, s, j) * d.d1.get(&[k, s]) + eps(i, s, k) * d.d1.get(&[j, s])) / 3.0;
        }
        sum += kd(j, k) * (2.5 * d.v3.get(&[i]) - d.v2.get(&[i]));
        sum + d.d3.get(&[i, j, k])
    });
    CouplingTensor::new(t)
}

/// One printed coefficient that differs from the fitted one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientDiff {
    /// Output field and 1-based component, e.g. `v2_3` or `D_133`.
    pub output: String,
    /// Canonical 1-based input component `H_abc` with `a <= b`.
    pub input: String,
    pub printed: f64,
    pub fitted: f64,
}

/// Entries where the printed and fitted functionals differ by more than
/// `tol`.
pub fn coefficient_diff(tol: f64) -> Vec<CoefficientDiff> {
    let one_based = |idx: &[usize]| idx.iter().map(|i| (i + 1).to_string()).collect::<String>();
    let canon = canonical_indices();
    let mut out = Vec::new();
    for (row, (field, idx)) in output_slots().iter().enumerate() {
        for (col, c) in canon.iter().enumerate() {
            let printed = printed_functionals()[row][col];
            let fitted = fitted_functionals()[row][col];
            if (printed - fitted).abs() > tol {
                out.push(CoefficientDiff {
                    output: format!("{field}_{}", one_based(idx)),
                    input: format!("H_{}", one_based(c)),
                    printed,
                    fitted,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coupling(rng: &mut ChaCha8Rng) -> CouplingTensor {
        let t = DenseTensor::from_fn(3, |_| rng.gen_range(-1.0..1.0));
        let sym = t.symmetrize(&[0, 1]).unwrap();
        CouplingTensor::new(sym).unwrap()
    }

    #[test]
    fn rejects_asymmetric_and_wrong_order() {
        let t = DenseTensor::zeros(3).with(&[0, 1, 2], 1.0);
        assert!(matches!(CouplingTensor::new(t), Err(Error::Symmetry(_))));
        assert!(CouplingTensor::new(DenseTensor::zeros(2)).is_err());
    }

    #[test]
    fn zero_input() {
        let h = CouplingTensor::new(DenseTensor::zeros(3)).unwrap();
        for variant in [CouplingVariant::Printed, CouplingVariant::Fitted] {
            let d = coupling_decompose_with(&h, variant);
            assert_eq!(d.v2.max_abs() + d.v3.max_abs() + d.d1.max_abs() + d.d3.max_abs(), 0.0);
            assert_eq!(coupling_reconstruct(&d).unwrap().tensor(), &DenseTensor::zeros(3));
        }
    }

    #[test]
    fn single_component_example() {
        let t = DenseTensor::zeros(3).with(&[0, 1, 2], 1.0).with(&[1, 0, 2], 1.0);
        let d = coupling_decompose(&CouplingTensor::new(t).unwrap());
        assert!((d.d3.get(&[0, 1, 2]) - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.d1.get(&[0, 0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn only_top_deviator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let top = crate::harmonic::project_deviator(&DenseTensor::from_fn(3, |_| rng.gen_range(-1.0..1.0)));
        let d = CouplingDeviators::from_independent(
            DenseTensor::zeros(1),
            DenseTensor::zeros(1),
            DenseTensor::zeros(2),
            top.clone(),
        )
        .unwrap();
        assert!((coupling_reconstruct(&d).unwrap().tensor() - &top).max_abs() < 1e-15);
    }

    #[test]
    fn derived_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = coupling_decompose(&random_coupling(&mut rng));
        assert_eq!(d.alpha, 0.0);
        assert_eq!(d.v1, &d.v3.scale(2.5) - &d.v2);
        assert_eq!(d.d2, d.d1.scale(-2.0 / 3.0));
    }

    #[test]
    fn fitted_variant_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let h = random_coupling(&mut rng);
            let d = coupling_decompose_with(&h, CouplingVariant::Fitted);
            check_deviator(&d.d1, "D1", 1e-10).unwrap();
            check_deviator(&d.d3, "D", 1e-10).unwrap();
            let back = coupling_reconstruct(&d).unwrap();
            assert!((back.tensor() - h.tensor()).norm() <= 1e-10 * h.tensor().norm());
        }
    }

    #[test]
    fn printed_list_differs_in_one_entry() {
        let diff = coefficient_diff(1e-12);
        let keys: Vec<(&str, &str)> = diff.iter().map(|d| (d.output.as_str(), d.input.as_str())).collect();
        assert_eq!(keys, [("v2_3", "H_113"), ("v2_3", "H_133")]);
        assert_eq!((diff[0].printed, diff[0].fitted), (0.0, 0.25));
        assert_eq!((diff[1].printed, diff[1].fitted), (0.25, 0.0));
    }

    #[test]
    fn printed_variant_fails_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random_coupling(&mut rng);
        let back = coupling_reconstruct(&coupling_decompose(&h)).unwrap();
        assert!((back.tensor() - h.tensor()).norm() > 1e-3 * h.tensor().norm());
    }

    #[test]
    fn engine_relations_hold_on_symmetric_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = random_coupling(&mut rng);
        let e = decompose(h.tensor());
        let dev = |s, j| e.part(s, j).unwrap().deviator.clone();
        let tol = 1e-12 * h.tensor().norm();
        assert!(dev(0, 1).max_abs() < tol);
        assert!((&dev(1, 1) - &(&dev(1, 3).scale(2.5) - &dev(1, 2))).max_abs() < tol);
        assert!((&dev(2, 2) - &dev(2, 1).scale(-2.0 / 3.0)).max_abs() < tol);
    }
}
