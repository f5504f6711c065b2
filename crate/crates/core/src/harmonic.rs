//! The space of order-s deviators (totally symmetric, traceless tensors) and
//! an orthonormal coordinate chart on it.
//!
//! The basis for order `s` is built from the `(s+1)(s+2)/2` symmetric
//! monomials `sym(e_{i1} (x) ... (x) e_{is})`, `i1 <= ... <= is`, taken in
//! lexicographic order. The kernel of the trace map restricted to their span
//! is computed from a symmetric eigendecomposition; the monomials are then
//! projected onto that kernel and orthonormalized (Gram-Schmidt, two passes)
//! in the same lexicographic order, which fixes the basis independently of
//! the eigensolver's choice of kernel vectors.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tensor::{component_count, dot, DenseTensor, DIM};

/// Relative tolerance for deviator membership checks.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Orthonormal basis of the deviator space of one order.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviatorBasis {
    order: usize,
    elements: Vec<DenseTensor>,
}

impl DeviatorBasis {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `2s + 1`.
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[DenseTensor] {
        &self.elements
    }
}

/// Coordinates of a deviator relative to the cached basis of its order.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviatorCoords {
    pub order: usize,
    pub coords: Vec<f64>,
}

/// Builds the basis for order `s`. Deterministic: equal `s` gives a
/// bit-identical basis.
pub fn build_basis(s: usize) -> DeviatorBasis {
    let monomials = symmetric_monomials(s);
    let kernel = if s < 2 {
        monomials.clone()
    } else {
        trace_kernel(s, &monomials)
    };
    let kernel = gram_schmidt(kernel.iter(), 0.0);
    let projected: Vec<DenseTensor> = monomials
        .iter()
        .map(|m| project_onto(m, &kernel))
        .collect();
    let elements = gram_schmidt(projected.iter(), 1e-8);
    assert_eq!(
        elements.len(),
        2 * s + 1,
        "deviator space of order {s} must have dimension {}",
        2 * s + 1
    );
    DeviatorBasis { order: s, elements }
}

/// Shared cached basis for order `s`.
pub fn basis(s: usize) -> Arc<DeviatorBasis> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<DeviatorBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().expect("basis cache poisoned").get(&s) {
        return Arc::clone(b);
    }
    let built = Arc::new(build_basis(s));
    let mut guard = cache.write().expect("basis cache poisoned");
    Arc::clone(guard.entry(s).or_insert(built))
}

/// Orthogonal (Frobenius) projection onto the deviator space of `t`'s order.
pub fn project_deviator(t: &DenseTensor) -> DenseTensor {
    let b = basis(t.order());
    project_onto(t, b.elements())
}

/// Coordinates of a deviator; rejects tensors farther than
/// [`MEMBERSHIP_TOL`] (relative) from the deviator space.
pub fn coords(t: &DenseTensor, basis: &DeviatorBasis) -> Result<DeviatorCoords> {
    if t.order() != basis.order {
        return Err(Error::OrderMismatch {
            expected: basis.order,
            found: t.order(),
        });
    }
    let c: Vec<f64> = basis
        .elements
        .iter()
        .map(|b| dot(b.components(), t.components()))
        .collect();
    let norm = t.norm();
    if norm > 0.0 {
        let back = combine(&c, &basis.elements, t.order());
        let residual = (t - &back).norm() / norm;
        if residual > MEMBERSHIP_TOL {
            return Err(Error::NotDeviator {
                what: "tensor",
                order: t.order(),
                residual,
            });
        }
    }
    Ok(DeviatorCoords {
        order: basis.order,
        coords: c,
    })
}

/// Coordinates without the membership check (pure projection coefficients).
pub(crate) fn raw_coords(t: &DenseTensor, basis: &DeviatorBasis) -> Vec<f64> {
    basis
        .elements
        .iter()
        .map(|b| dot(b.components(), t.components()))
        .collect()
}

pub fn from_coords(c: &DeviatorCoords, basis: &DeviatorBasis) -> Result<DenseTensor> {
    if c.order != basis.order {
        return Err(Error::OrderMismatch {
            expected: basis.order,
            found: c.order,
        });
    }
    if c.coords.len() != basis.dim() {
        return Err(Error::CoordinateLength {
            expected: basis.dim(),
            found: c.coords.len(),
        });
    }
    Ok(combine(&c.coords, &basis.elements, basis.order))
}

pub(crate) fn combine(c: &[f64], elements: &[DenseTensor], order: usize) -> DenseTensor {
    let mut out = DenseTensor::zeros(order);
    for (&x, b) in c.iter().zip(elements) {
        if x != 0.0 {
            out.axpy(x, b);
        }
    }
    out
}

/// Symmetry and trace defects of a tensor, both as max-abs values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviatorDefects {
    pub symmetry: f64,
    pub trace: f64,
}

impl DeviatorDefects {
    /// Largest defect divided by the tensor norm (absolute when the norm is 0).
    pub fn relative(&self, norm: f64) -> f64 {
        let worst = self.symmetry.max(self.trace);
        if norm > 0.0 {
            worst / norm
        } else {
            worst
        }
    }
}

pub fn deviator_defects(t: &DenseTensor) -> DeviatorDefects {
    let symmetry = t.symmetry_residual(&(0..t.order()).collect::<Vec<_>>()).unwrap_or(0.0);
    let trace = if t.order() >= 2 {
        t.symmetrize_all()
            .trace_pair(0, 1)
            .map(|tr| tr.max_abs())
            .unwrap_or(0.0)
    } else {
        0.0
    };
    DeviatorDefects { symmetry, trace }
}

/// Checks membership in the deviator space at the given relative tolerance.
pub fn check_deviator(t: &DenseTensor, what: &'static str, tol: f64) -> Result<()> {
    let residual = deviator_defects(t).relative(t.norm());
    if residual > tol {
        return Err(Error::NotDeviator {
            what,
            order: t.order(),
            residual,
        });
    }
    Ok(())
}

fn project_onto(t: &DenseTensor, orthonormal: &[DenseTensor]) -> DenseTensor {
    let c: Vec<f64> = orthonormal
        .iter()
        .map(|b| dot(b.components(), t.components()))
        .collect();
    combine(&c, orthonormal, t.order())
}

/// `sym(e_{i1} (x) ... (x) e_{is})` for every non-decreasing index tuple, in
/// lexicographic order. Each entry is `prod(m_c!) / s!` on the permutations
/// of the tuple, zero elsewhere.
fn symmetric_monomials(s: usize) -> Vec<DenseTensor> {
    let factorial = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    (0..DIM)
        .combinations_with_replacement(s)
        .map(|tuple| {
            let counts = multiplicities(&tuple);
            let value = counts.iter().map(|&m| factorial(m)).product::<f64>() / factorial(s);
            DenseTensor::from_fn(s, |ix| if multiplicities(ix) == counts { value } else { 0.0 })
        })
        .collect()
}

fn multiplicities(ix: &[usize]) -> [usize; DIM] {
    let mut m = [0; DIM];
    for &i in ix {
        m[i] += 1;
    }
    m
}

/// Kernel of the (1,2)-trace restricted to the span of `monomials`, returned
/// as (not yet orthonormal) tensors.
fn trace_kernel(s: usize, monomials: &[DenseTensor]) -> Vec<DenseTensor> {
    let traces: Vec<DenseTensor> = monomials
        .iter()
        .map(|m| m.trace_pair(0, 1).expect("order >= 2"))
        .collect();
    let rows = component_count(s - 2);
    let a = DMatrix::from_fn(rows, monomials.len(), |r, c| traces[c].components()[r]);
    let gram = a.transpose() * &a;
    let eig = SymmetricEigen::new(gram);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &ev)| ev.abs() <= 1e-10 * scale)
        .map(|(col, _)| {
            let v = eig.eigenvectors.column(col);
            combine(v.as_slice(), monomials, s)
        })
        .collect()
}

/// Modified Gram-Schmidt with reorthogonalization; vectors whose remaining
/// norm falls to `drop_tol` or below are discarded.
fn gram_schmidt<'a>(
    vectors: impl Iterator<Item = &'a DenseTensor>,
    drop_tol: f64,
) -> Vec<DenseTensor> {
    let mut out: Vec<DenseTensor> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = dot(q.components(), w.components());
                w.axpy(-c, q);
            }
        }
        let n = w.norm();
        if n > drop_tol {
            out.push(w.scale(1.0 / n));
        }
    }
    out
}
