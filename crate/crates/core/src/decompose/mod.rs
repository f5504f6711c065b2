//! Recursive irreducible decomposition of arbitrary-order tensors.
//!
//! An order-(n+1) tensor is written as `sum_k e_k (x) T_k` with order-n
//! slices `T_k = t[k, ..]`. Each slice is decomposed recursively; for every
//! part label shared by the three slices, the three slice deviators are
//! combined and split again:
//!
//! * three scalars form a vector (order 1),
//! * three vectors form an order-2 tensor `G_{jk} = (v_k)_j`, split into a
//!   scalar, an axial vector and an order-2 deviator,
//! * three order-s deviators (s >= 2) form `G = sum_k e_k (x) D_k` in
//!   `V (x) D^(s)`, split into deviators of orders s-1, s and s+1 (see
//!   [`splitting`]).
//!
//! Part ordering: parts are sorted by `(s, J)`. Within one `s`, `J` counts
//! children in generation order, walking the parent parts in their own
//! `(s, J)` order and emitting each parent's children lowest order first.
//!
//! The embedded tensor of a part is obtained by replaying the forward maps
//! with every other deviator set to zero.

pub mod counting;
mod order2;
mod plan;
pub mod splitting;

use serde::{Deserialize, Serialize};

pub use counting::{count_parts, count_row, degrees_of_freedom, trinomial, trinomial_row};
pub use order2::assemble_order2;
pub use splitting::{assemble_g, extract_from_g, split_domain_dim, SplitPiece};

use crate::error::{Error, Result};
use crate::harmonic::{self, basis};
use crate::tensor::DenseTensor;

/// One irreducible part: an order-s deviator and its order-n contribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrreduciblePart {
    pub s: usize,
    #[serde(rename = "J")]
    pub j: usize,
    pub deviator: DenseTensor,
    pub embedded: DenseTensor,
}

/// Ordered list of parts whose embedded tensors sum to the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub order: usize,
    pub parts: Vec<IrreduciblePart>,
}

impl Decomposition {
    /// Number of parts with deviator order `s`.
    pub fn count(&self, s: usize) -> usize {
        self.parts.iter().filter(|p| p.s == s).count()
    }

    pub fn labels(&self) -> Vec<(usize, usize)> {
        self.parts.iter().map(|p| (p.s, p.j)).collect()
    }

    pub fn part(&self, s: usize, j: usize) -> Option<&IrreduciblePart> {
        self.parts.iter().find(|p| p.s == s && p.j == j)
    }

    /// Deviators in part order.
    pub fn deviators(&self) -> Vec<&DenseTensor> {
        self.parts.iter().map(|p| &p.deviator).collect()
    }
}

/// `(s, J)` labels of the parts of an order-n decomposition, in part order.
pub fn part_labels(order: usize) -> Vec<(usize, usize)> {
    plan::plan(order).labels()
}

/// Decomposes an order-2 tensor into `alpha * delta + eps . v + D`.
pub fn decompose_order2(t: &DenseTensor) -> Result<Decomposition> {
    if t.order() != 2 {
        return Err(Error::OrderMismatch {
            expected: 2,
            found: t.order(),
        });
    }
    Ok(decompose(t))
}

/// Full recursive decomposition. Never fails; a zero tensor yields zero parts.
pub fn decompose(t: &DenseTensor) -> Decomposition {
    let order = t.order();
    let deviators = part_deviators(t);
    let p = plan::plan(order);
    let parts = p
        .parts
        .iter()
        .enumerate()
        .zip(deviators)
        .map(|((idx, pp), deviator)| {
            let embedded = embed_unchecked(order, idx, &deviator);
            IrreduciblePart {
                s: pp.s,
                j: pp.j,
                deviator,
                embedded,
            }
        })
        .collect();
    Decomposition { order, parts }
}

/// Deviators aligned with the plan's part order.
fn part_deviators(t: &DenseTensor) -> Vec<DenseTensor> {
    match t.order() {
        0 | 1 => vec![t.clone()],
        2 => order2::split(t).to_vec(),
        n => {
            let p = plan::plan(n);
            let slices: Vec<Vec<DenseTensor>> = (0..3)
                .map(|k| part_deviators(&t.slice_first(k)))
                .collect();
            let parent = plan::plan(n - 1);
            let mut out: Vec<Option<DenseTensor>> = vec![None; p.parts.len()];
            for (q, kids) in p.children.iter().enumerate() {
                let produced = plan::split_slices(
                    parent.parts[q].s,
                    [&slices[0][q], &slices[1][q], &slices[2][q]],
                );
                for (&slot, d) in kids.iter().zip(produced) {
                    out[slot] = Some(d);
                }
            }
            out.into_iter()
                .map(|d| d.expect("every part has a parent"))
                .collect()
        }
    }
}

fn embed_unchecked(order: usize, part: usize, deviator: &DenseTensor) -> DenseTensor {
    let c = harmonic::raw_coords(deviator, &basis(deviator.order()));
    let components = plan::embed_coords(order, part, &c);
    DenseTensor::from_components(order, components).expect("embedding has 3^n components")
}

/// Order-n contribution of a deviator placed at part index `part` of the
/// order-n decomposition (all other deviators zero).
pub fn embed(order: usize, part: usize, deviator: &DenseTensor) -> Result<DenseTensor> {
    let p = plan::plan(order);
    let pp = p.parts.get(part).ok_or_else(|| {
        Error::MalformedDecomposition(format!(
            "part index {part} out of range for order {order} ({} parts)",
            p.parts.len()
        ))
    })?;
    if deviator.order() != pp.s {
        return Err(Error::OrderMismatch {
            expected: pp.s,
            found: deviator.order(),
        });
    }
    harmonic::check_deviator(deviator, "part deviator", harmonic::MEMBERSHIP_TOL)?;
    Ok(embed_unchecked(order, part, deviator))
}

/// Sum of the embedded parts.
pub fn reconstruct(d: &Decomposition) -> DenseTensor {
    let mut out = DenseTensor::zeros(d.order);
    for p in &d.parts {
        out.axpy(1.0, &p.embedded);
    }
    out
}

/// Diagnostics produced by [`verify`]. All residuals are relative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub order: usize,
    /// `|sum embedded - t| / |t|` (absolute when `t = 0`).
    pub reconstruction_residual: f64,
    /// Worst deviator symmetry defect over the deviator's norm.
    pub max_symmetry_residual: f64,
    /// Worst deviator trace defect over the deviator's norm.
    pub max_trace_residual: f64,
    /// Worst `|<P_i, P_j>| / (|P_i| |P_j|)` over distinct nonzero parts.
    pub max_orthogonality: f64,
    /// Worst `|embedded - embed(deviator)| / |t|`: checks that each part's
    /// embedded tensor matches its deviator. Infinite if labels are invalid.
    pub embedding_residual: f64,
    pub expected_counts: Vec<u128>,
    pub found_counts: Vec<usize>,
    pub counts_match: bool,
    /// Structural problems (wrong orders, unexpected labels).
    pub problems: Vec<String>,
}

impl VerifyReport {
    /// Human-readable list of every check exceeding `tol`.
    pub fn failures(&self, tol: f64) -> Vec<String> {
        let mut out = self.problems.clone();
        let checks = [
            ("reconstruction residual", self.reconstruction_residual),
            ("deviator symmetry residual", self.max_symmetry_residual),
            ("deviator trace residual", self.max_trace_residual),
            ("orthogonality", self.max_orthogonality),
            ("embedding residual", self.embedding_residual),
        ];
        for (name, value) in checks {
            if !(value <= tol) {
                out.push(format!("{name} {value:.3e} exceeds {tol:.1e}"));
            }
        }
        if !self.counts_match {
            out.push(format!(
                "part counts {:?} differ from expected {:?}",
                self.found_counts, self.expected_counts
            ));
        }
        out
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.failures(tol).is_empty()
    }
}

/// Checks a decomposition against the tensor it claims to decompose.
pub fn verify(d: &Decomposition, t: &DenseTensor) -> VerifyReport {
    let n = d.order;
    let mut problems = Vec::new();
    if t.order() != n {
        problems.push(format!("tensor order {} != decomposition order {n}", t.order()));
    }

    let scale = t.norm();
    let relative = |x: f64| if scale > 0.0 { x / scale } else { x };

    let reconstruction_residual = if t.order() == n {
        relative((&reconstruct(d) - t).norm())
    } else {
        f64::INFINITY
    };

    let mut max_symmetry_residual: f64 = 0.0;
    let mut max_trace_residual: f64 = 0.0;
    for (i, p) in d.parts.iter().enumerate() {
        if p.deviator.order() != p.s {
            problems.push(format!(
                "part {i}: deviator order {} != s = {}",
                p.deviator.order(),
                p.s
            ));
            continue;
        }
        if p.embedded.order() != n {
            problems.push(format!("part {i}: embedded order {} != {n}", p.embedded.order()));
        }
        let defects = harmonic::deviator_defects(&p.deviator);
        let norm = p.deviator.norm();
        let rel = |x: f64| if norm > 0.0 { x / norm } else { x };
        max_symmetry_residual = max_symmetry_residual.max(rel(defects.symmetry));
        max_trace_residual = max_trace_residual.max(rel(defects.trace));
    }

    let embedded: Vec<&DenseTensor> = d
        .parts
        .iter()
        .map(|p| &p.embedded)
        .filter(|e| e.order() == n)
        .collect();
    let norms: Vec<f64> = embedded.iter().map(|e| e.norm()).collect();
    let mut max_orthogonality: f64 = 0.0;
    for i in 0..embedded.len() {
        for j in (i + 1)..embedded.len() {
            if norms[i] > 0.0 && norms[j] > 0.0 {
                let ip = embedded[i].frobenius(embedded[j]).expect("same order");
                max_orthogonality = max_orthogonality.max(ip.abs() / (norms[i] * norms[j]));
            }
        }
    }

    let expected_counts = count_row(n);
    let found_counts: Vec<usize> = (0..=n).map(|s| d.count(s)).collect();
    let counts_match = d.parts.iter().all(|p| p.s <= n)
        && expected_counts
            .iter()
            .zip(&found_counts)
            .all(|(&e, &f)| e == f as u128);

    let embedding_residual = if d.labels() == part_labels(n) && problems.is_empty() {
        d.parts
            .iter()
            .enumerate()
            .map(|(idx, p)| relative((&embed_unchecked(n, idx, &p.deviator) - &p.embedded).norm()))
            .fold(0.0, f64::max)
    } else {
        if d.labels() != part_labels(n) {
            problems.push("part labels differ from the canonical (s, J) order".into());
        }
        f64::INFINITY
    };

    VerifyReport {
        order: n,
        reconstruction_residual,
        max_symmetry_residual,
        max_trace_residual,
        max_orthogonality,
        embedding_residual,
        expected_counts,
        found_counts,
        counts_match,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::project_deviator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(order: usize, rng: &mut ChaCha8Rng) -> DenseTensor {
        DenseTensor::from_fn(order, |_| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn order2_parts() {
        let d = decompose_order2(&DenseTensor::delta()).unwrap();
        assert_eq!(d.labels(), vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(d.parts[0].deviator.as_scalar(), 1.0);
        assert_eq!(d.parts[1].deviator.max_abs(), 0.0);
        assert_eq!(d.parts[2].deviator.max_abs(), 0.0);
        assert!((&d.parts[0].embedded - &DenseTensor::delta()).max_abs() < 1e-15);
        assert!(matches!(
            decompose_order2(&DenseTensor::zeros(3)),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn zero_tensor_has_zero_parts() {
        for n in 0..=5 {
            let d = decompose(&DenseTensor::zeros(n));
            assert!(d.parts.iter().all(|p| p.deviator.max_abs() == 0.0));
            assert!(d.parts.iter().all(|p| p.embedded.max_abs() == 0.0));
            for s in 0..=n {
                assert_eq!(d.count(s) as u128, count_parts(n, s).unwrap());
            }
            assert_eq!(reconstruct(&d), DenseTensor::zeros(n));
            assert!(verify(&d, &DenseTensor::zeros(n)).passes(1e-12));
        }
    }

    #[test]
    fn order3_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = decompose(&random_tensor(3, &mut rng));
        assert_eq!((0..=3).map(|s| d.count(s)).collect::<Vec<_>>(), vec![1, 3, 2, 1]);
    }

    #[test]
    fn order4_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_tensor(4, &mut rng);
        let d = decompose(&t);
        assert_eq!(d.parts.len(), 19);
        let r = reconstruct(&d);
        assert!((&r - &t).norm() <= 1e-10 * t.norm());
    }

    #[test]
    fn pure_deviator_is_single_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..=5 {
            let t = project_deviator(&random_tensor(n, &mut rng));
            let d = decompose(&t);
            for p in &d.parts {
                if p.s == n {
                    assert!((&p.deviator - &t).norm() <= 1e-10 * t.norm());
                    assert!((&p.embedded - &t).norm() <= 1e-10 * t.norm());
                } else {
                    assert!(p.embedded.norm() <= 1e-10 * t.norm(), "n={n} part {:?}", (p.s, p.j));
                }
            }
        }
    }

    #[test]
    fn verify_catches_tampering() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = random_tensor(3, &mut rng);
        let mut d = decompose(&t);
        assert!(verify(&d, &t).passes(1e-9));
        d.parts[2].embedded = d.parts[2].embedded.scale(1.5);
        let report = verify(&d, &t);
        assert!(report.reconstruction_residual > 1e-3);
        assert!(!report.passes(1e-9));
    }

    #[test]
    fn verify_flags_bad_labels() {
        let mut d = decompose(&DenseTensor::zeros(3));
        d.parts.pop();
        let report = verify(&d, &DenseTensor::zeros(3));
        assert!(!report.counts_match);
        assert!(report.embedding_residual.is_infinite());
        assert!(!report.passes(1e-9));
    }

    #[test]
    fn embed_validates_inputs() {
        assert!(embed(3, 99, &DenseTensor::zeros(1)).is_err());
        assert!(matches!(
            embed(3, 0, &DenseTensor::zeros(2)),
            Err(Error::OrderMismatch { .. })
        ));
        let e = embed(3, 0, &DenseTensor::scalar(2.0)).unwrap();
        // alpha part of an order-3 tensor: eps_{jki} alpha
        assert!((&e - &DenseTensor::epsilon().scale(2.0)).max_abs() < 1e-14);
    }
}
