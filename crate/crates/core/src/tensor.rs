//! Dense tensors over three-dimensional Euclidean space.
//!
//! A tensor of order `n` stores its `3^n` components in row-major order: the
//! multi-index `(i_1, ..., i_n)` (each `i_k` in `0..3`) lives at offset
//! `sum_k i_k * 3^(n-k)`. Index positions passed to the methods below are
//! zero-based, so the usual "(1,2)-trace" is `trace_pair(0, 1)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension.
pub const DIM: usize = 3;

/// `3^order` as a component count.
pub fn component_count(order: usize) -> usize {
    DIM.pow(order as u32)
}

/// Dense order-n tensor over R^3.
///
/// Values are immutable through the public API; every operation returns a new
/// tensor.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTensor", into = "RawTensor")]
pub struct DenseTensor {
    order: usize,
    components: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTensor {
    order: usize,
    components: Vec<f64>,
}

impl TryFrom<RawTensor> for DenseTensor {
    type Error = Error;

    fn try_from(raw: RawTensor) -> Result<Self> {
        DenseTensor::from_components(raw.order, raw.components)
    }
}

impl From<DenseTensor> for RawTensor {
    fn from(t: DenseTensor) -> Self {
        RawTensor {
            order: t.order,
            components: t.components,
        }
    }
}

impl fmt::Debug for DenseTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseTensor")
            .field("order", &self.order)
            .field("components", &self.components)
            .finish()
    }
}

impl DenseTensor {
    pub fn zeros(order: usize) -> Self {
        DenseTensor {
            order,
            components: vec![0.0; component_count(order)],
        }
    }

    pub fn from_components(order: usize, components: Vec<f64>) -> Result<Self> {
        let expected = component_count(order);
        if components.len() != expected {
            return Err(Error::ComponentCount {
                order,
                len: components.len(),
                expected,
            });
        }
        Ok(DenseTensor { order, components })
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(order: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut index = vec![0usize; order];
        let components = (0..component_count(order))
            .map(|offset| {
                decode_into(offset, &mut index);
                f(&index)
            })
            .collect();
        DenseTensor { order, components }
    }

    pub fn scalar(value: f64) -> Self {
        DenseTensor {
            order: 0,
            components: vec![value],
        }
    }

    pub fn vector(v: [f64; 3]) -> Self {
        DenseTensor {
            order: 1,
            components: v.to_vec(),
        }
    }

    /// Unit vector `e_i` (zero-based).
    pub fn unit(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Self::vector(v)
    }

    /// Kronecker delta.
    pub fn delta() -> Self {
        Self::from_fn(2, |ix| if ix[0] == ix[1] { 1.0 } else { 0.0 })
    }

    /// Levi-Civita permutation tensor.
    pub fn epsilon() -> Self {
        Self::from_fn(3, |ix| levi_civita(ix[0], ix[1], ix[2]))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Value of an order-0 tensor (the first component otherwise).
    pub fn as_scalar(&self) -> f64 {
        self.components[0]
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.components[self.offset(index)]
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.order, "multi-index length != order");
        index.iter().fold(0, |acc, &i| {
            debug_assert!(i < DIM);
            acc * DIM + i
        })
    }

    /// Returns a copy with one component replaced.
    pub fn with(mut self, index: &[usize], value: f64) -> Self {
        let off = self.offset(index);
        self.components[off] = value;
        self
    }

    fn check_same_order(&self, other: &DenseTensor) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &DenseTensor) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &DenseTensor) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|x| x * factor)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        DenseTensor {
            order: self.order,
            components: self.components.iter().map(|&x| f(x)).collect(),
        }
    }

    fn zip_map(&self, other: &DenseTensor, f: impl Fn(f64, f64) -> f64) -> Self {
        DenseTensor {
            order: self.order,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// In-place `self += factor * other`; used by accumulation loops.
    pub(crate) fn axpy(&mut self, factor: f64, other: &DenseTensor) {
        debug_assert_eq!(self.order, other.order);
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            *a += factor * b;
        }
    }

    /// Frobenius inner product: sum of componentwise products.
    pub fn frobenius(&self, other: &DenseTensor) -> Result<f64> {
        self.check_same_order(other)?;
        Ok(dot(&self.components, &other.components))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        dot(&self.components, &self.components).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Outer (tensor) product: `C_{i..j..} = A_{i..} B_{j..}`.
    pub fn outer(&self, other: &DenseTensor) -> Self {
        let mut components = Vec::with_capacity(self.len() * other.len());
        for &a in &self.components {
            components.extend(other.components.iter().map(|&b| a * b));
        }
        DenseTensor {
            order: self.order + other.order,
            components,
        }
    }

    /// Complete contraction `A[B]`: `B` (order m) is summed against the
    /// first `m` indices of `A` (order n >= m).
    pub fn contract_complete(&self, other: &DenseTensor) -> Result<Self> {
        if other.order > self.order {
            return Err(Error::ContractionOrder {
                outer: self.order,
                inner: other.order,
            });
        }
        let rest = component_count(self.order - other.order);
        let mut components = vec![0.0; rest];
        for (block, &b) in self.components.chunks_exact(rest).zip(&other.components) {
            if b != 0.0 {
                for (c, &a) in components.iter_mut().zip(block) {
                    *c += a * b;
                }
            }
        }
        Ok(DenseTensor {
            order: self.order - other.order,
            components,
        })
    }

    /// Single contraction `A . B`: last index of `A` against first index of `B`.
    pub fn contract_single(&self, other: &DenseTensor) -> Result<Self> {
        self.contract_trailing(other, 1)
    }

    /// Double contraction `A : B`: last two indices of `A` against the first
    /// two of `B`, pairing `A_{..kl} B_{kl..}`.
    pub fn contract_double(&self, other: &DenseTensor) -> Result<Self> {
        self.contract_trailing(other, 2)
    }

    fn contract_trailing(&self, other: &DenseTensor, count: usize) -> Result<Self> {
        if self.order < count || other.order < count {
            return Err(Error::ContractionOrder {
                outer: self.order.min(other.order),
                inner: count,
            });
        }
        let shared = component_count(count);
        let left = component_count(self.order - count);
        let right = component_count(other.order - count);
        let mut components = vec![0.0; left * right];
        for i in 0..left {
            let row = &self.components[i * shared..(i + 1) * shared];
            let out = &mut components[i * right..(i + 1) * right];
            for (k, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let col = &other.components[k * right..(k + 1) * right];
                for (c, &b) in out.iter_mut().zip(col) {
                    *c += a * b;
                }
            }
        }
        Ok(DenseTensor {
            order: self.order + other.order - 2 * count,
            components,
        })
    }

    /// Axis permutation with numpy `transpose` semantics: axis `p` of the
    /// result is axis `axes[p]` of `self`.
    pub fn transpose(&self, axes: &[usize]) -> Result<Self> {
        if axes.len() != self.order || !is_permutation(axes) {
            return Err(Error::InvalidPermutation(axes.to_vec()));
        }
        let mut source = vec![0usize; self.order];
        Ok(Self::from_fn(self.order, |ix| {
            for (p, &a) in axes.iter().enumerate() {
                source[a] = ix[p];
            }
            self.get(&source)
        }))
    }

    /// Average of `self` over all permutations of the index positions in
    /// `positions`; all other positions are left untouched.
    pub fn symmetrize(&self, positions: &[usize]) -> Result<Self> {
        self.check_positions(positions)?;
        if positions.len() < 2 {
            return Ok(self.clone());
        }
        // Averaging over all permutations of the chosen positions equals the
        // mean over each orbit: entries sharing the fixed-position indices and
        // the multiset of chosen-position indices.
        let m = positions.len() + 1;
        let mut in_subset = vec![false; self.order];
        for &p in positions {
            in_subset[p] = true;
        }
        let orbit_key = |ix: &[usize]| {
            let mut fixed = 0usize;
            let mut counts = [0usize; 2];
            for (pos, &i) in ix.iter().enumerate() {
                if in_subset[pos] {
                    if i < 2 {
                        counts[i] += 1;
                    }
                } else {
                    fixed = fixed * DIM + i;
                }
            }
            (fixed * m + counts[0]) * m + counts[1]
        };
        let mut keys = Vec::with_capacity(self.len());
        let mut index = vec![0usize; self.order];
        let mut groups: HashMap<usize, (f64, usize)> = HashMap::new();
        for (offset, &x) in self.components.iter().enumerate() {
            decode_into(offset, &mut index);
            let key = orbit_key(&index);
            let g = groups.entry(key).or_insert((0.0, 0));
            g.0 += x;
            g.1 += 1;
            keys.push(key);
        }
        let components = keys
            .iter()
            .map(|k| {
                let (sum, count) = groups[k];
                sum / count as f64
            })
            .collect();
        Ok(DenseTensor {
            order: self.order,
            components,
        })
    }

    /// Full symmetrization over every index position.
    pub fn symmetrize_all(&self) -> Self {
        let all: Vec<usize> = (0..self.order).collect();
        self.symmetrize(&all).expect("all positions are valid")
    }

    /// Trace over the index pair `(p, q)`, producing an order `n-2` tensor
    /// whose remaining indices keep their relative order.
    pub fn trace_pair(&self, p: usize, q: usize) -> Result<Self> {
        self.check_positions(&[p, q])?;
        let remaining: Vec<usize> = (0..self.order).filter(|&x| x != p && x != q).collect();
        let mut source = vec![0usize; self.order];
        Ok(Self::from_fn(self.order - 2, |ix| {
            for (&pos, &i) in remaining.iter().zip(ix) {
                source[pos] = i;
            }
            (0..DIM)
                .map(|s| {
                    source[p] = s;
                    source[q] = s;
                    self.get(&source)
                })
                .sum()
        }))
    }

    /// Applies a rotation to every index: `T'_{j..} = R_{j i} ... T_{i..}`.
    pub fn rotate(&self, rotation: &crate::rotation::Rotation) -> Self {
        let r = rotation.matrix();
        let mut current = self.components.clone();
        let mut next = vec![0.0; current.len()];
        // One mode product per axis; axis `a` has stride 3^(n-1-a).
        for axis in 0..self.order {
            let stride = component_count(self.order - 1 - axis);
            let block = stride * DIM;
            for (src, dst) in current.chunks_exact(block).zip(next.chunks_exact_mut(block)) {
                for j in 0..DIM {
                    let out = &mut dst[j * stride..(j + 1) * stride];
                    out.fill(0.0);
                    for i in 0..DIM {
                        let rji = r[j][i];
                        if rji == 0.0 {
                            continue;
                        }
                        for (o, &x) in out.iter_mut().zip(&src[i * stride..(i + 1) * stride]) {
                            *o += rji * x;
                        }
                    }
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
        DenseTensor {
            order: self.order,
            components: current,
        }
    }

    /// Slice with the first index fixed to `k`.
    pub fn slice_first(&self, k: usize) -> Self {
        assert!(self.order >= 1 && k < DIM);
        let len = component_count(self.order - 1);
        DenseTensor {
            order: self.order - 1,
            components: self.components[k * len..(k + 1) * len].to_vec(),
        }
    }

    /// Inverse of [`slice_first`](Self::slice_first): `sum_k e_k (x) slices[k]`.
    pub fn stack_first(slices: &[DenseTensor; 3]) -> Result<Self> {
        let order = slices[0].order;
        for s in &slices[1..] {
            slices[0].check_same_order(s)?;
        }
        let mut components = Vec::with_capacity(DIM * slices[0].len());
        for s in slices {
            components.extend_from_slice(&s.components);
        }
        Ok(DenseTensor {
            order: order + 1,
            components,
        })
    }

    /// Largest deviation from symmetry over `positions`, i.e.
    /// `|t - sym(t)|_max`.
    pub fn symmetry_residual(&self, positions: &[usize]) -> Result<f64> {
        let sym = self.symmetrize(positions)?;
        Ok(self.zip_map(&sym, |a, b| a - b).max_abs())
    }

    fn check_positions(&self, positions: &[usize]) -> Result<()> {
        for (i, &p) in positions.iter().enumerate() {
            if p >= self.order {
                return Err(Error::PositionOutOfRange {
                    position: p,
                    order: self.order,
                });
            }
            if positions[..i].contains(&p) {
                return Err(Error::RepeatedPosition(p));
            }
        }
        Ok(())
    }
}

impl Add for &DenseTensor {
    type Output = DenseTensor;

    fn add(self, rhs: &DenseTensor) -> DenseTensor {
        self.try_add(rhs).expect("tensor orders must match")
    }
}

impl Sub for &DenseTensor {
    type Output = DenseTensor;

    fn sub(self, rhs: &DenseTensor) -> DenseTensor {
        self.try_sub(rhs).expect("tensor orders must match")
    }
}

impl Mul<&DenseTensor> for f64 {
    type Output = DenseTensor;

    fn mul(self, rhs: &DenseTensor) -> DenseTensor {
        rhs.scale(self)
    }
}

impl Neg for &DenseTensor {
    type Output = DenseTensor;

    fn neg(self) -> DenseTensor {
        self.scale(-1.0)
    }
}

/// Levi-Civita symbol for zero-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (1, 0, 2) | (2, 1, 0) => -1.0,
        _ => 0.0,
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn decode_into(mut offset: usize, index: &mut [usize]) {
    for slot in index.iter_mut().rev() {
        *slot = offset % DIM;
        offset /= DIM;
    }
}

fn is_permutation(axes: &[usize]) -> bool {
    let mut seen = vec![false; axes.len()];
    axes.iter().all(|&a| a < axes.len() && !std::mem::replace(&mut seen[a], true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    const TOL: f64 = 1e-12;

    fn v123() -> DenseTensor {
        DenseTensor::vector([1.0, 2.0, 3.0])
    }

    #[test]
    fn offsets_are_row_major() {
        let t = DenseTensor::from_fn(3, |ix| (ix[0] * 9 + ix[1] * 3 + ix[2]) as f64);
        for (off, &c) in t.components().iter().enumerate() {
            assert_eq!(off as f64, c);
        }
        assert_eq!(t.offset(&[2, 1, 0]), 21);
    }

    #[test]
    fn rejects_wrong_component_count() {
        let err = DenseTensor::from_components(2, vec![0.0; 8]).unwrap_err();
        assert!(matches!(err, Error::ComponentCount { expected: 9, .. }));
    }

    #[test]
    fn outer_examples() {
        let t = DenseTensor::from_fn(2, |ix| (ix[0] + 2 * ix[1]) as f64);
        assert_eq!(DenseTensor::scalar(1.0).outer(&t), t);

        let e12 = DenseTensor::unit(0).outer(&DenseTensor::unit(1));
        for (off, &c) in e12.components().iter().enumerate() {
            assert_eq!(c, if off == 1 { 1.0 } else { 0.0 });
        }

        let vv = v123().outer(&v123());
        assert_eq!(vv.get(&[1, 2]), 6.0);
        assert_eq!(vv.get(&[2, 1]), 6.0);
        assert_eq!(vv.get(&[0, 0]), 1.0);
    }

    #[test]
    fn complete_contraction_examples() {
        let d = DenseTensor::delta();
        assert_eq!(d.contract_complete(&d).unwrap().as_scalar(), 3.0);

        let a = DenseTensor::from_fn(3, |ix| (ix[0] + ix[1] * ix[2]) as f64 - 1.5);
        assert_eq!(
            a.contract_complete(&DenseTensor::scalar(2.5)).unwrap(),
            a.scale(2.5)
        );

        // eps[e1 (x) e2] = e3
        let e12 = DenseTensor::unit(0).outer(&DenseTensor::unit(1));
        let r = DenseTensor::epsilon().contract_complete(&e12).unwrap();
        assert_eq!(r, DenseTensor::unit(2));

        let err = v123().contract_complete(&d).unwrap_err();
        assert!(matches!(err, Error::ContractionOrder { .. }));
    }

    #[test]
    fn single_and_double_contraction_conventions() {
        // A . B pairs the last index of A with the first of B.
        let a = DenseTensor::from_fn(2, |ix| (3 * ix[0] + ix[1]) as f64);
        let b = DenseTensor::from_fn(2, |ix| (ix[0] as f64) - 2.0 * ix[1] as f64);
        let c = a.contract_single(&b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect: f64 = (0..3).map(|k| a.get(&[i, k]) * b.get(&[k, j])).sum();
                assert_eq!(c.get(&[i, j]), expect);
            }
        }
        // A : B = A_{kl} B_{kl} for order-2 operands
        let dd = a.contract_double(&b).unwrap();
        assert_eq!(dd.order(), 0);
        assert_eq!(dd.as_scalar(), a.frobenius(&b).unwrap());

        let eps = DenseTensor::epsilon();
        let e = eps.contract_double(&DenseTensor::unit(0).outer(&DenseTensor::unit(1)));
        let e = e.unwrap();
        // eps_{i01} = delta_{i2}
        assert_eq!(e, DenseTensor::unit(2));
    }

    #[test]
    fn symmetrize_examples() {
        let t = DenseTensor::zeros(2).with(&[0, 1], 1.0);
        let s = t.symmetrize(&[0, 1]).unwrap();
        assert_eq!(s.get(&[0, 1]), 0.5);
        assert_eq!(s.get(&[1, 0]), 0.5);

        let sym = v123().outer(&v123());
        assert_eq!(sym.symmetrize_all(), sym);

        let t = DenseTensor::zeros(3).with(&[0, 1, 2], 6.0);
        let s = t.symmetrize_all();
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            assert!((s.get(&p) - 1.0).abs() < TOL);
        }
        assert!((s.norm() - 6f64.sqrt()).abs() < TOL);
    }

    #[test]
    fn symmetrize_partial_leaves_other_positions() {
        let t = DenseTensor::zeros(3).with(&[0, 1, 2], 1.0);
        let s = t.symmetrize(&[1, 2]).unwrap();
        assert_eq!(s.get(&[0, 1, 2]), 0.5);
        assert_eq!(s.get(&[0, 2, 1]), 0.5);
        assert_eq!(s.get(&[1, 0, 2]), 0.0);
        assert!(matches!(
            t.symmetrize(&[1, 1]),
            Err(Error::RepeatedPosition(1))
        ));
        assert!(matches!(
            t.symmetrize(&[3]),
            Err(Error::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(DenseTensor::delta().trace_pair(0, 1).unwrap().as_scalar(), 3.0);
        assert_eq!(
            DenseTensor::epsilon().trace_pair(0, 1).unwrap(),
            DenseTensor::zeros(1)
        );
        let vv = v123().outer(&v123());
        assert_eq!(vv.trace_pair(0, 1).unwrap().as_scalar(), 14.0);
        assert!(matches!(
            vv.trace_pair(1, 1),
            Err(Error::RepeatedPosition(1))
        ));
    }

    #[test]
    fn trace_keeps_remaining_index_order() {
        let t = DenseTensor::from_fn(4, |ix| (ix[0] * 27 + ix[1] * 9 + ix[2] * 3 + ix[3]) as f64);
        let tr = t.trace_pair(1, 3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expect: f64 = (0..3).map(|s| t.get(&[a, s, b, s])).sum();
                assert_eq!(tr.get(&[a, b]), expect);
            }
        }
    }

    #[test]
    fn delta_and_epsilon_values() {
        let e = DenseTensor::epsilon();
        assert_eq!(e.get(&[0, 1, 2]), 1.0);
        assert_eq!(e.get(&[1, 2, 0]), 1.0);
        assert_eq!(e.get(&[2, 0, 1]), 1.0);
        assert_eq!(e.get(&[0, 2, 1]), -1.0);
        assert_eq!(e.get(&[0, 0, 1]), 0.0);
        assert_eq!(DenseTensor::delta().get(&[2, 2]), 1.0);
        assert_eq!(DenseTensor::delta().get(&[0, 2]), 0.0);
    }

    #[test]
    fn frobenius_examples() {
        let d = DenseTensor::delta();
        assert_eq!(d.frobenius(&d).unwrap(), 3.0);
        assert_eq!(d.frobenius(&DenseTensor::zeros(2)).unwrap(), 0.0);
        let e = DenseTensor::epsilon();
        assert_eq!(e.frobenius(&e).unwrap(), 6.0);
        assert!(matches!(
            d.frobenius(&e),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn transpose_matches_definition() {
        let t = DenseTensor::from_fn(3, |ix| (ix[0] * 9 + ix[1] * 3 + ix[2]) as f64);
        let p = t.transpose(&[2, 0, 1]).unwrap();
        for ix in (0..3).map(|_| 0..3usize).multi_cartesian_product() {
            assert_eq!(p.get(&ix), t.get(&[ix[1], ix[2], ix[0]]));
        }
        assert!(t.transpose(&[0, 0, 1]).is_err());
    }

    #[test]
    fn slice_and_stack_round_trip() {
        let t = DenseTensor::from_fn(3, |ix| (ix[0] * 9 + ix[1] * 3 + ix[2]) as f64);
        let slices = [t.slice_first(0), t.slice_first(1), t.slice_first(2)];
        assert_eq!(slices[1].get(&[2, 0]), t.get(&[1, 2, 0]));
        assert_eq!(DenseTensor::stack_first(&slices).unwrap(), t);
    }

    #[test]
    fn json_shape() {
        let t = DenseTensor::vector([1.0, -2.0, 0.5]);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"order":1,"components":[1.0,-2.0,0.5]}"#);
        let back: DenseTensor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let bad = serde_json::from_str::<DenseTensor>(r#"{"order":2,"components":[1.0]}"#);
        assert!(bad.is_err());
    }
}
