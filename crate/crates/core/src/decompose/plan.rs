//! Data-independent description of the recursion for each tensor order: the
//! list of parts, where each part comes from, and the linear maps used to
//! replay a single deviator back up to an order-n tensor.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};

use super::order2;
use super::splitting::{split_map, SplitPiece};
use crate::harmonic::{self, basis};
use crate::tensor::{component_count, DenseTensor};

/// How a part of an order-(n+1) tensor arises from a part of its order-n
/// slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Lift {
    /// Three slice scalars form a vector.
    Vector,
    /// Three slice vectors form an order-2 tensor, split into trace, axial
    /// vector and deviator.
    Order2(Order2Piece),
    /// Three slice deviators of order `s >= 2` form `G in V (x) D^(s)`.
    Split(SplitPiece),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Order2Piece {
    Trace,
    Axial,
    Deviator,
}

impl Order2Piece {
    pub(crate) const ALL: [Order2Piece; 3] =
        [Order2Piece::Trace, Order2Piece::Axial, Order2Piece::Deviator];

    fn order(self) -> usize {
        match self {
            Order2Piece::Trace => 0,
            Order2Piece::Axial => 1,
            Order2Piece::Deviator => 2,
        }
    }

    /// Contribution of this piece to an order-2 tensor.
    pub(crate) fn term(self, d: &DenseTensor) -> DenseTensor {
        match self {
            Order2Piece::Trace => order2::trace_term(d),
            Order2Piece::Axial => order2::axial_term(d),
            Order2Piece::Deviator => d.clone(),
        }
    }
}

/// Lifts available for a parent part with deviator order `s`, in the order
/// their children are generated.
pub(crate) fn lifts_for(s: usize) -> Vec<Lift> {
    match s {
        0 => vec![Lift::Vector],
        1 => Order2Piece::ALL.iter().map(|&p| Lift::Order2(p)).collect(),
        _ => SplitPiece::ALL.iter().map(|&p| Lift::Split(p)).collect(),
    }
}

fn child_order(parent_s: usize, lift: Lift) -> usize {
    match lift {
        Lift::Vector => 1,
        Lift::Order2(p) => p.order(),
        Lift::Split(p) => p.order(parent_s),
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Source {
    /// Orders 0, 1, 2: the part is read off directly. `embed` maps deviator
    /// coordinates to the order-n components.
    Base { embed: DMatrix<f64> },
    /// `forward` maps the part's deviator coordinates to the stacked
    /// coordinates of the three slice deviators of the parent part.
    Lift {
        parent: usize,
        forward: DMatrix<f64>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct PlanPart {
    pub s: usize,
    pub j: usize,
    pub source: Source,
}

#[derive(Debug)]
pub(crate) struct Plan {
    pub order: usize,
    /// Sorted by `(s, j)`.
    pub parts: Vec<PlanPart>,
    /// For each part of the order-(n-1) plan, the indices of the parts it
    /// generates, in lift order.
    pub children: Vec<Vec<usize>>,
}

impl Plan {
    fn base(order: usize) -> Plan {
        // order 1 has only the vector part
        let first = if order == 1 { 1 } else { 0 };
        let parts = (first..=order)
            .map(|s| {
                let b = basis(s);
                let cols: Vec<DenseTensor> = b
                    .elements()
                    .iter()
                    .map(|e| match order {
                        0 | 1 => e.clone(),
                        _ => Order2Piece::ALL[s].term(e),
                    })
                    .collect();
                PlanPart {
                    s,
                    j: 1,
                    source: Source::Base {
                        embed: columns_matrix(&cols, component_count(order)),
                    },
                }
            })
            .collect();
        Plan {
            order,
            parts,
            children: Vec::new(),
        }
    }

    fn lifted(parent: &Plan) -> Plan {
        let order = parent.order + 1;
        let mut next_j: HashMap<usize, usize> = HashMap::new();
        let mut generated: Vec<(usize, usize, usize, Lift)> = Vec::new(); // (s, j, parent, lift)
        for (q, pp) in parent.parts.iter().enumerate() {
            for lift in lifts_for(pp.s) {
                let s = child_order(pp.s, lift);
                let j = next_j.entry(s).or_insert(0);
                *j += 1;
                generated.push((s, *j, q, lift));
            }
        }
        let mut order_idx: Vec<usize> = (0..generated.len()).collect();
        order_idx.sort_by_key(|&i| (generated[i].0, generated[i].1));
        let mut position = vec![0usize; generated.len()];
        for (pos, &i) in order_idx.iter().enumerate() {
            position[i] = pos;
        }
        let mut children = vec![Vec::new(); parent.parts.len()];
        for (i, g) in generated.iter().enumerate() {
            children[g.2].push(position[i]);
        }
        let parts = order_idx
            .iter()
            .map(|&i| {
                let (s, j, q, lift) = generated[i];
                PlanPart {
                    s,
                    j,
                    source: Source::Lift {
                        parent: q,
                        forward: forward_matrix(parent.parts[q].s, lift),
                    },
                }
            })
            .collect();
        Plan {
            order,
            parts,
            children,
        }
    }

    /// `(s, J)` labels in part order.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        self.parts.iter().map(|p| (p.s, p.j)).collect()
    }
}

/// Stacked slice coordinates produced by one child deviator, as a matrix
/// over the child's coordinates.
fn forward_matrix(parent_s: usize, lift: Lift) -> DMatrix<f64> {
    match lift {
        Lift::Split(piece) => split_map(parent_s).piece_block(piece),
        Lift::Vector | Lift::Order2(_) => {
            let child_basis = basis(child_order(parent_s, lift));
            let slice_basis = basis(parent_s);
            let cols: Vec<Vec<f64>> = child_basis
                .elements()
                .iter()
                .map(|e| {
                    let g = match lift {
                        Lift::Vector => e.clone(),
                        // G_{jk} = (v_k)_j: slice k is column k of G.
                        Lift::Order2(p) => p.term(e).transpose(&[1, 0]).expect("order 2"),
                        Lift::Split(_) => unreachable!(),
                    };
                    (0..3)
                        .flat_map(|k| harmonic::raw_coords(&g.slice_first(k), &slice_basis))
                        .collect()
                })
                .collect();
            let rows = 3 * slice_basis.dim();
            DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
        }
    }
}

fn columns_matrix(cols: &[DenseTensor], rows: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols.len(), |r, c| cols[c].components()[r])
}

pub(crate) fn plan(order: usize) -> Arc<Plan> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Plan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().expect("plan cache poisoned").get(&order) {
        return Arc::clone(p);
    }
    let built = if order <= 2 {
        Plan::base(order)
    } else {
        Plan::lifted(&plan(order - 1))
    };
    let mut guard = cache.write().expect("plan cache poisoned");
    Arc::clone(guard.entry(order).or_insert(Arc::new(built)))
}

/// Replays one part's deviator (given in coordinates) up to the order-n
/// tensor components, with every other deviator set to zero.
pub(crate) fn embed_coords(order: usize, part: usize, coords: &[f64]) -> Vec<f64> {
    let p = plan(order);
    let pp = &p.parts[part];
    let x = DVector::from_column_slice(coords);
    match &pp.source {
        Source::Base { embed } => (embed * x).as_slice().to_vec(),
        Source::Lift {
            parent, forward, ..
        } => {
            let stacked = forward * x;
            let width = stacked.len() / 3;
            let mut out = Vec::with_capacity(component_count(order));
            for k in 0..3 {
                let slice = &stacked.as_slice()[k * width..(k + 1) * width];
                if slice.iter().all(|&c| c == 0.0) {
                    out.extend(std::iter::repeat_n(0.0, component_count(order - 1)));
                } else {
                    out.extend(embed_coords(order - 1, *parent, slice));
                }
            }
            out
        }
    }
}

/// Applies the inverse of one lift to the three slice deviators of a parent
/// part, returning the child deviators in lift order.
pub(crate) fn split_slices(parent_s: usize, slices: [&DenseTensor; 3]) -> Vec<DenseTensor> {
    match parent_s {
        0 => vec![DenseTensor::vector([
            slices[0].as_scalar(),
            slices[1].as_scalar(),
            slices[2].as_scalar(),
        ])],
        1 => {
            let stacked = DenseTensor::stack_first(&slices.map(Clone::clone)).expect("same order");
            let g = stacked.transpose(&[1, 0]).expect("order 2");
            order2::split(&g).to_vec()
        }
        _ => {
            let g = DenseTensor::stack_first(&slices.map(Clone::clone)).expect("same order");
            // Slice deviators come out of the previous level exactly in the
            // deviator space, so extraction cannot fail on membership.
            super::splitting::extract_from_g(&g)
                .expect("slice deviators span V (x) D^(s)")
                .to_vec()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::counting::count_parts;

    #[test]
    fn counts_match_closed_form() {
        for n in 0..=6 {
            let p = plan(n);
            for s in 0..=n {
                let found = p.parts.iter().filter(|x| x.s == s).count() as u128;
                assert_eq!(found, count_parts(n, s).unwrap(), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn labels_sorted_and_one_based() {
        let p = plan(4);
        let labels = p.labels();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(labels, sorted);
        assert_eq!(labels[0], (0, 1));
        assert_eq!(labels.last(), Some(&(4, 1)));
    }

    #[test]
    fn every_part_has_exactly_one_parent_slot() {
        for n in 3..=5 {
            let p = plan(n);
            let mut seen = vec![0; p.parts.len()];
            for kids in &p.children {
                for &k in kids {
                    seen[k] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
        }
    }
}
