//! Splitting of `V (x) D^(n)` into deviators of orders `n-1`, `n`, `n+1`.
//!
//! The forward map is
//!
//! ```text
//! G_{k i1..in} = (2n-1)/(n-1) delta_{k î1} D_{î2..în}
//!              - delta_{î1 î2} D_{î3..în k}
//!              + eps_{k s î1} D'_{î2..în s}
//!              + D''_{k i1..in}
//! ```
//!
//! with hats denoting symmetrization over `(i1..in)`. The inverse is obtained
//! by solving the forward map in deviator coordinates; the square coordinate
//! matrix is LU-factored once per `n` and cached.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector, LU};

use crate::error::{Error, Result};
use crate::harmonic::{self, basis, check_deviator, MEMBERSHIP_TOL};
use crate::tensor::DenseTensor;

/// Membership tolerance for `V (x) D^(n)` inputs to [`extract_from_g`].
pub const SPLIT_MEMBERSHIP_TOL: f64 = 1e-9;

/// Which of the three deviators a piece of `G` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPiece {
    Lower,
    Middle,
    Upper,
}

impl SplitPiece {
    pub(crate) const ALL: [SplitPiece; 3] = [SplitPiece::Lower, SplitPiece::Middle, SplitPiece::Upper];

    /// Deviator order of this piece when splitting `V (x) D^(n)`.
    pub fn order(self, n: usize) -> usize {
        match self {
            SplitPiece::Lower => n - 1,
            SplitPiece::Middle => n,
            SplitPiece::Upper => n + 1,
        }
    }
}

/// Builds `G in V (x) D^(n)` from deviators of orders `n-1`, `n`, `n+1`.
pub fn assemble_g(
    lower: &DenseTensor,
    middle: &DenseTensor,
    upper: &DenseTensor,
) -> Result<DenseTensor> {
    let n = middle.order();
    if n < 2 {
        return Err(Error::SplittingOrder(n));
    }
    for (t, piece, what) in [
        (lower, SplitPiece::Lower, "lower deviator"),
        (middle, SplitPiece::Middle, "middle deviator"),
        (upper, SplitPiece::Upper, "upper deviator"),
    ] {
        if t.order() != piece.order(n) {
            return Err(Error::OrderMismatch {
                expected: piece.order(n),
                found: t.order(),
            });
        }
        check_deviator(t, what, MEMBERSHIP_TOL)?;
    }
    let mut g = lower_term(n, lower);
    g.axpy(1.0, &middle_term(n, middle));
    g.axpy(1.0, upper);
    Ok(g)
}

/// The contribution of a single piece, without input validation.
pub(crate) fn piece_term(piece: SplitPiece, n: usize, d: &DenseTensor) -> DenseTensor {
    match piece {
        SplitPiece::Lower => lower_term(n, d),
        SplitPiece::Middle => middle_term(n, d),
        SplitPiece::Upper => d.clone(),
    }
}

fn trailing(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

/// `(2n-1)/(n-1) delta_{k î1} D_{î2..în} - delta_{î1 î2} D_{î3..în k}`.
pub(crate) fn lower_term(n: usize, d: &DenseTensor) -> DenseTensor {
    debug_assert_eq!(d.order() + 1, n);
    let a = (2 * n - 1) as f64 / (n - 1) as f64;
    // X_{k i1 i2..in} = delta_{k i1} D_{i2..in}
    let x = DenseTensor::delta().outer(d);
    // Y_{k i1 i2 i3..in} = delta_{i1 i2} D_{k i3..in}; D is symmetric so this
    // is delta_{i1 i2} D_{i3..in k}.
    let mut axes = vec![2, 0, 1];
    axes.extend(3..=n);
    let y = x.transpose(&axes).expect("valid permutation");
    let combined = &x.scale(a) - &y;
    combined.symmetrize(&trailing(n)).expect("valid positions")
}

/// `eps_{k s î1} D_{î2..în s}`.
pub(crate) fn middle_term(n: usize, d: &DenseTensor) -> DenseTensor {
    debug_assert_eq!(d.order(), n);
    // W_{k i1 i2..in} = sum_s eps_{k s i1} D_{s i2..in} = -(eps . D)
    let w = DenseTensor::epsilon()
        .contract_single(d)
        .expect("order >= 1")
        .scale(-1.0);
    w.symmetrize(&trailing(n)).expect("valid positions")
}

/// Inverse of [`assemble_g`]. Returns `[lower, middle, upper]`.
pub fn extract_from_g(g: &DenseTensor) -> Result<[DenseTensor; 3]> {
    if g.order() < 3 {
        return Err(Error::SplittingOrder(g.order().saturating_sub(1)));
    }
    let n = g.order() - 1;
    let residual = vector_deviator_residual(g);
    if residual > SPLIT_MEMBERSHIP_TOL {
        return Err(Error::NotInVectorDeviatorSpace { n, residual });
    }
    let map = split_map(n);
    let b = basis(n);
    let mut rhs = Vec::with_capacity(3 * b.dim());
    for k in 0..3 {
        rhs.extend(harmonic::raw_coords(&g.slice_first(k), &b));
    }
    let x = map.solve(&rhs);
    let mut out = Vec::with_capacity(3);
    let mut offset = 0;
    for piece in SplitPiece::ALL {
        let pb = basis(piece.order(n));
        let c = &x[offset..offset + pb.dim()];
        out.push(harmonic::combine(c, pb.elements(), pb.order()));
        offset += pb.dim();
    }
    Ok(out.try_into().expect("three pieces"))
}

/// Relative distance of `g` from `V (x) D^(n)`: worst slice deviator defect
/// over `|g|` (absolute for `g = 0`).
pub fn vector_deviator_residual(g: &DenseTensor) -> f64 {
    let worst = (0..3)
        .map(|k| {
            let d = harmonic::deviator_defects(&g.slice_first(k));
            d.symmetry.max(d.trace)
        })
        .fold(0.0, f64::max);
    let norm = g.norm();
    if norm > 0.0 {
        worst / norm
    } else {
        worst
    }
}

/// Matrix of the forward map in deviator coordinates for one `n`.
pub(crate) struct SplitMap {
    n: usize,
    matrix: DMatrix<f64>,
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl SplitMap {
    fn build(n: usize) -> Self {
        let slice_basis = basis(n);
        let rows = 3 * slice_basis.dim();
        let mut columns: Vec<f64> = Vec::with_capacity(rows * rows);
        for piece in SplitPiece::ALL {
            let pb = basis(piece.order(n));
            for e in pb.elements() {
                let g = piece_term(piece, n, e);
                for k in 0..3 {
                    columns.extend(harmonic::raw_coords(&g.slice_first(k), &slice_basis));
                }
            }
        }
        let cols = columns.len() / rows;
        assert_eq!(cols, rows, "domain dimension must equal 3(2n+1)");
        let matrix = DMatrix::from_column_slice(rows, cols, &columns);
        let lu = matrix.clone().lu();
        assert!(lu.is_invertible(), "splitting map for n = {n} is singular");
        SplitMap { n, matrix, lu }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let b = DVector::from_column_slice(rhs);
        self.lu
            .solve(&b)
            .expect("invertible by construction")
            .as_slice()
            .to_vec()
    }

    /// Slice coordinates produced by one piece given in its own coordinates.
    pub(crate) fn piece_block(&self, piece: SplitPiece) -> DMatrix<f64> {
        let n = self.n;
        let start: usize = SplitPiece::ALL
            .iter()
            .take_while(|&&p| p != piece)
            .map(|p| 2 * p.order(n) + 1)
            .sum();
        let width = 2 * piece.order(n) + 1;
        self.matrix.columns(start, width).into_owned()
    }
}

pub(crate) fn split_map(n: usize) -> Arc<SplitMap> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<SplitMap>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.read().expect("split cache poisoned").get(&n) {
        return Arc::clone(m);
    }
    let built = Arc::new(SplitMap::build(n));
    let mut guard = cache.write().expect("split cache poisoned");
    Arc::clone(guard.entry(n).or_insert(built))
}

/// Domain dimension `(2(n-1)+1) + (2n+1) + (2(n+1)+1)` of the splitting map.
pub fn split_domain_dim(n: usize) -> usize {
    SplitPiece::ALL.iter().map(|p| 2 * p.order(n) + 1).sum()
}
