//! Explicit decompositions of order-3 and order-4 tensors, written term by
//! term with `delta`, `eps` and the `L` tensor.
//!
//! Each term pairs one hemitropic pattern with one deviator of the recursive
//! engine (same `(s, J)` label). The scalar factor of every term is fitted
//! against the engine by least squares ([`fit_coefficients`]) and the fitted
//! values are frozen in `golden/closedform_coefficients.json`, which the
//! `assemble_*` functions use.
//!
//! Conventions (new index first, `i` in `T_{ijk}` / `T_{ijkl}`):
//!
//! * a hat-group such as `eps_{is ĵ} D_{k̂ s}` symmetrizes the bracketed
//!   factor over the hatted slots;
//! * a repeated dummy index in a product of three `eps` is read as two
//!   distinct dummies (`eps_{klt} eps_{tjs} eps_{siu} v_u`);
//! * nested hat groups are applied innermost first, following the order in
//!   which the recursion builds them.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, part_labels};
use crate::error::{Error, Result};
use crate::harmonic::{check_deviator, MEMBERSHIP_TOL};
use crate::tensor::{levi_civita as eps, DenseTensor};

/// `L_{ijkl} = 3/2 (delta_ij delta_kl + delta_ik delta_jl) - delta_il delta_jk`.
pub fn l4() -> DenseTensor {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    DenseTensor::from_fn(4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        1.5 * (d(i, j) * d(k, l) + d(i, k) * d(j, l)) - d(i, l) * d(j, k)
    })
}

/// `L[D]_{k j1..js} = (2s-1)/(s-1) delta_{k ĵ1} D_{ĵ2..ĵs} - delta_{ĵ1 ĵ2} D_{ĵ3..ĵs k}`
/// for an order-(s-1) deviator `D`, hats symmetrizing over `j1..js`.
pub fn l_apply(s: usize, d: &DenseTensor) -> Result<DenseTensor> {
    if s < 2 {
        return Err(Error::SplittingOrder(s));
    }
    if d.order() + 1 != s {
        return Err(Error::OrderMismatch {
            expected: s - 1,
            found: d.order(),
        });
    }
    check_deviator(d, "L operand", MEMBERSHIP_TOL)?;
    Ok(l_apply_raw(s, d))
}

/// The same expression without requiring `d` to be a deviator; `d`'s index
/// order is respected, so `D_{ĵ3..ĵs k}` keeps `k` in the last slot.
fn l_apply_raw(s: usize, d: &DenseTensor) -> DenseTensor {
    let coefficient = (2 * s - 1) as f64 / (s - 1) as f64;
    let x = DenseTensor::delta().outer(d); // delta_{k j1} D_{j2..js}
    let mut axes = vec![s, 0, 1];
    axes.extend(2..s);
    let y = x.transpose(&axes).expect("permutation"); // delta_{j1 j2} D_{j3..js k}
    let hats: Vec<usize> = (1..=s).collect();
    (&x.scale(coefficient) - &y).symmetrize(&hats).expect("positions")
}

/// The order-2s tensor `L_{k j1..js l1..l(s-1)}` defined by its contraction
/// with order-(s-1) tensors over the trailing `l` indices.
pub fn l_tensor(s: usize) -> Result<DenseTensor> {
    if s < 2 {
        return Err(Error::SplittingOrder(s));
    }
    let m = s - 1;
    let len = 3usize.pow(m as u32);
    let images: Vec<DenseTensor> = (0..len)
        .map(|offset| {
            let mut e = vec![0.0; len];
            e[offset] = 1.0;
            l_apply_raw(s, &DenseTensor::from_components(m, e).expect("length"))
        })
        .collect();
    let head = 3usize.pow((s + 1) as u32);
    let mut comps = vec![0.0; head * len];
    for (col, img) in images.iter().enumerate() {
        for (row, &v) in img.components().iter().enumerate() {
            comps[row * len + col] = v;
        }
    }
    DenseTensor::from_components(2 * s, comps)
}

/// Contracts the last `b.order()` indices of `a` with `b`.
fn contract_trailing(a: &DenseTensor, b: &DenseTensor) -> DenseTensor {
    let len = b.len();
    let comps = a
        .components()
        .chunks_exact(len)
        .map(|row| row.iter().zip(b.components()).map(|(x, y)| x * y).sum())
        .collect();
    DenseTensor::from_components(a.order() - b.order(), comps).expect("length")
}

fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// One structural term: the hemitropic pattern applied to one deviator.
pub struct Term {
    pub name: &'static str,
    pub s: usize,
    pub j: usize,
    apply: fn(&DenseTensor) -> DenseTensor,
}

impl Term {
    pub fn apply(&self, d: &DenseTensor) -> DenseTensor {
        (self.apply)(d)
    }
}

fn order3_terms() -> Vec<Term> {
    vec![
        Term {
            name: "eps_jki alpha",
            s: 0,
            j: 1,
            apply: |a| DenseTensor::from_fn(3, |x| eps(x[1], x[2], x[0]) * a.as_scalar()),
        },
        Term {
            name: "delta_jk v1_i",
            s: 1,
            j: 1,
            apply: |v| DenseTensor::from_fn(3, |x| kd(x[1], x[2]) * v.get(&[x[0]])),
        },
        Term {
            name: "eps_jkt eps_tis v2_s",
            s: 1,
            j: 2,
            apply: |v| {
                DenseTensor::from_fn(3, |x| {
                    let (i, j, k) = (x[0], x[1], x[2]);
                    sum2(|t, s| eps(j, k, t) * eps(t, i, s) * v.get(&[s]))
                })
            },
        },
        Term {
            name: "L_ijks v3_s",
            s: 1,
            j: 3,
            apply: |v| contract_trailing(&l4(), v),
        },
        Term {
            name: "eps_jks D1_si",
            s: 2,
            j: 1,
            apply: |d| {
                DenseTensor::from_fn(3, |x| {
                    let (i, j, k) = (x[0], x[1], x[2]);
                    sum1(|s| eps(j, k, s) * d.get(&[s, i]))
                })
            },
        },
        Term {
            name: "eps_is^j D2_k^s",
            s: 2,
            j: 2,
            apply: |d| {
                DenseTensor::from_fn(3, |x| {
                    let (i, j, k) = (x[0], x[1], x[2]);
                    sum1(|s| eps(i, s, j) * d.get(&[k, s]))
                })
                .symmetrize(&[1, 2])
                .expect("positions")
            },
        },
        Term {
            name: "D_ijk",
            s: 3,
            j: 1,
            apply: |d| d.clone(),
        },
    ]
}

fn order4_terms() -> Vec<Term> {
    vec![
        Term {
            name: "delta_ij delta_kl alpha1",
            s: 0,
            j: 1,
            apply: |a| {
                DenseTensor::from_fn(4, |x| kd(x[0], x[1]) * kd(x[2], x[3]) * a.as_scalar())
            },
        },
        Term {
            name: "eps_klt eps_tji alpha2",
            s: 0,
            j: 2,
            apply: |a| {
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum1(|t| eps(k, l, t) * eps(t, j, i)) * a.as_scalar()
                })
            },
        },
        Term {
            name: "L_jkli alpha3",
            s: 0,
            j: 3,
            apply: |a| {
                let l = l4();
                DenseTensor::from_fn(4, |x| l.get(&[x[1], x[2], x[3], x[0]]) * a.as_scalar())
            },
        },
        Term {
            name: "eps_klj v1_i",
            s: 1,
            j: 1,
            apply: |v| DenseTensor::from_fn(4, |x| eps(x[2], x[3], x[1]) * v.get(&[x[0]])),
        },
        Term {
            name: "delta_kl eps_jis v2_s",
            s: 1,
            j: 2,
            apply: |v| {
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    kd(k, l) * sum1(|s| eps(j, i, s) * v.get(&[s]))
                })
            },
        },
        Term {
            name: "eps_klt eps_tjs eps_siu v3_u",
            s: 1,
            j: 3,
            apply: |v| {
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum3(|t, s, u| eps(k, l, t) * eps(t, j, s) * eps(s, i, u) * v.get(&[u]))
                })
            },
        },
        Term {
            name: "L_jkls eps_sit v4_t",
            s: 1,
            j: 4,
            apply: |v| {
                let l = l4();
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, ll) = (x[0], x[1], x[2], x[3]);
                    sum2(|s, t| l.get(&[j, k, ll, s]) * eps(s, i, t) * v.get(&[t]))
                })
            },
        },
        Term {
            name: "eps_kls L_isjt v5_t",
            s: 1,
            j: 5,
            apply: |v| {
                let l = l4();
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, ll) = (x[0], x[1], x[2], x[3]);
                    sum2(|s, t| eps(k, ll, s) * l.get(&[i, s, j, t]) * v.get(&[t]))
                })
            },
        },
        Term {
            name: "eps_js^k L_is^l_t v6_t",
            s: 1,
            j: 6,
            apply: |v| {
                let l = l4();
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, ll) = (x[0], x[1], x[2], x[3]);
                    sum2(|s, t| eps(j, s, k) * l.get(&[i, s, ll, t]) * v.get(&[t]))
                })
                .symmetrize(&[2, 3])
                .expect("positions")
            },
        },
        Term {
            name: "delta_kl D1_ji",
            s: 2,
            j: 1,
            apply: |d| DenseTensor::from_fn(4, |x| kd(x[2], x[3]) * d.get(&[x[1], x[0]])),
        },
        Term {
            name: "eps_klt eps_tjs D2_si",
            s: 2,
            j: 2,
            apply: |d| {
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum2(|t, s| eps(k, l, t) * eps(t, j, s) * d.get(&[s, i]))
                })
            },
        },
        Term {
            name: "L_jkls D3_si",
            s: 2,
            j: 3,
            apply: |d| {
                let l = l4();
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, ll) = (x[0], x[1], x[2], x[3]);
                    sum1(|s| l.get(&[j, k, ll, s]) * d.get(&[s, i]))
                })
            },
        },
        Term {
            name: "eps_kls eps_it^s D4_^j_t",
            s: 2,
            j: 4,
            apply: |d| {
                // M_{isj} = sym_{(s,j)} eps_{its} D_{jt}
                let m = DenseTensor::from_fn(3, |x| {
                    let (i, s, j) = (x[0], x[1], x[2]);
                    sum1(|t| eps(i, t, s) * d.get(&[j, t]))
                })
                .symmetrize(&[1, 2])
                .expect("positions");
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum1(|s| eps(k, l, s) * m.get(&[i, s, j]))
                })
            },
        },
        Term {
            name: "eps_js^k eps_it^s D5_^l_t",
            s: 2,
            j: 5,
            apply: |d| {
                // M_{isl} = sym_{(s,l)} eps_{its} D_{lt}; then sym_{(k,l)} eps_{jsk} M_{isl}
                let m = DenseTensor::from_fn(3, |x| {
                    let (i, s, l) = (x[0], x[1], x[2]);
                    sum1(|t| eps(i, t, s) * d.get(&[l, t]))
                })
                .symmetrize(&[1, 2])
                .expect("positions");
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum1(|s| eps(j, s, k) * m.get(&[i, s, l]))
                })
                .symmetrize(&[2, 3])
                .expect("positions")
            },
        },
        Term {
            name: "L_ijklst D6_st",
            s: 2,
            j: 6,
            apply: |d| l_apply_raw(3, d),
        },
        Term {
            name: "eps_kls D1_isj",
            s: 3,
            j: 1,
            apply: |d| {
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum1(|s| eps(k, l, s) * d.get(&[i, s, j]))
                })
            },
        },
        Term {
            name: "eps_js^k D2_is^l",
            s: 3,
            j: 2,
            apply: |d| {
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum1(|s| eps(j, s, k) * d.get(&[i, s, l]))
                })
                .symmetrize(&[2, 3])
                .expect("positions")
            },
        },
        Term {
            name: "eps_is^j D3_^k^l_s",
            s: 3,
            j: 3,
            apply: |d| {
                DenseTensor::from_fn(4, |x| {
                    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                    sum1(|s| eps(i, s, j) * d.get(&[k, l, s]))
                })
                .symmetrize(&[1, 2, 3])
                .expect("positions")
            },
        },
        Term {
            name: "D_ijkl",
            s: 4,
            j: 1,
            apply: |d| d.clone(),
        },
    ]
}

fn sum1(f: impl Fn(usize) -> f64) -> f64 {
    (0..3).map(f).sum()
}

fn sum2(f: impl Fn(usize, usize) -> f64) -> f64 {
    (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| f(a, b)).sum()
}

fn sum3(f: impl Fn(usize, usize, usize) -> f64) -> f64 {
    (0..3)
        .map(|a| sum2(|b, c| f(a, b, c)))
        .sum()
}

/// Structural terms for order 3 or 4, in engine part order.
pub fn terms(order: usize) -> Result<Vec<Term>> {
    match order {
        3 => Ok(order3_terms()),
        4 => Ok(order4_terms()),
        _ => Err(Error::OrderMismatch {
            expected: 4,
            found: order,
        }),
    }
}

/// Fitted scalar factor for one term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermCoefficient {
    pub term: String,
    pub s: usize,
    #[serde(rename = "J")]
    pub j: usize,
    pub coefficient: f64,
}

/// Frozen coefficient tables for both orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCoefficients {
    pub order3: Vec<TermCoefficient>,
    pub order4: Vec<TermCoefficient>,
}

const GOLDEN_JSON: &str = include_str!("../golden/closedform_coefficients.json");

pub fn golden() -> &'static GoldenCoefficients {
    static GOLDEN: OnceLock<GoldenCoefficients> = OnceLock::new();
    GOLDEN.get_or_init(|| serde_json::from_str(GOLDEN_JSON).expect("golden coefficient file parses"))
}

/// Result of fitting the structural terms to the recursive engine.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub order: usize,
    pub coefficients: Vec<TermCoefficient>,
    /// Relative least-squares residual over all samples.
    pub residual: f64,
    /// Terms whose fitted contribution does not match the engine's embedded
    /// part (relative mismatch above `1e-10`), with the mismatch.
    pub inconsistent: Vec<(String, f64)>,
}

/// Fits one scalar per structural term so that the terms, evaluated on the
/// engine's deviators, reproduce `samples`.
pub fn fit_coefficients(order: usize, samples: &[DenseTensor]) -> Result<FitReport> {
    let terms = terms(order)?;
    let labels = part_labels(order);
    assert_eq!(labels.len(), terms.len());
    let rows = samples.len() * 3usize.pow(order as u32);
    let mut a = DMatrix::<f64>::zeros(rows, terms.len());
    let mut b = DVector::<f64>::zeros(rows);
    let mut per_sample = Vec::with_capacity(samples.len());
    for (n, t) in samples.iter().enumerate() {
        if t.order() != order {
            return Err(Error::OrderMismatch {
                expected: order,
                found: t.order(),
            });
        }
        let d = decompose(t);
        let offset = n * t.len();
        let mut columns = Vec::with_capacity(terms.len());
        for (q, term) in terms.iter().enumerate() {
            let col = term.apply(&d.parts[q].deviator);
            for (r, &v) in col.components().iter().enumerate() {
                a[(offset + r, q)] = v;
            }
            columns.push(col);
        }
        for (r, &v) in t.components().iter().enumerate() {
            b[offset + r] = v;
        }
        per_sample.push((d, columns));
    }
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-12).map_err(|e| Error::Symmetry(e.to_string()))?;
    let residual = (&a * &x - &b).norm() / b.norm().max(f64::MIN_POSITIVE);

    let mut inconsistent = Vec::new();
    for (q, term) in terms.iter().enumerate() {
        let mut worst: f64 = 0.0;
        for (d, columns) in &per_sample {
            let engine = &d.parts[q].embedded;
            let mismatch = (&columns[q].scale(x[q]) - engine).norm();
            let scale = engine.norm().max(f64::MIN_POSITIVE);
            worst = worst.max(mismatch / scale);
        }
        if worst > 1e-10 {
            inconsistent.push((term.name.to_string(), worst));
        }
    }

    let coefficients = terms
        .iter()
        .zip(x.iter())
        .map(|(t, &c)| TermCoefficient {
            term: t.name.to_string(),
            s: t.s,
            j: t.j,
            coefficient: c,
        })
        .collect();
    Ok(FitReport {
        order,
        coefficients,
        residual,
        inconsistent,
    })
}

fn assemble(order: usize, deviators: &[DenseTensor], table: &[TermCoefficient]) -> Result<DenseTensor> {
    let terms = terms(order)?;
    if deviators.len() != terms.len() {
        return Err(Error::MalformedDecomposition(format!(
            "expected {} deviators for order {order}, got {}",
            terms.len(),
            deviators.len()
        )));
    }
    let mut out = DenseTensor::zeros(order);
    for ((term, d), coef) in terms.iter().zip(deviators).zip(table) {
        if d.order() != term.s {
            return Err(Error::MalformedDecomposition(format!(
                "deviator for {} must have order {}, got {}",
                term.name,
                term.s,
                d.order()
            )));
        }
        check_deviator(d, "closed-form deviator", MEMBERSHIP_TOL)?;
        out.axpy(coef.coefficient, &term.apply(d));
    }
    Ok(out)
}

/// Order-3 closed form from deviators in engine order
/// `(alpha, v1, v2, v3, D1, D2, D)`.
pub fn assemble_order3(deviators: &[DenseTensor]) -> Result<DenseTensor> {
    assemble(3, deviators, &golden().order3)
}

/// Order-4 closed form from the 19 deviators in engine order.
pub fn assemble_order4(deviators: &[DenseTensor]) -> Result<DenseTensor> {
    assemble(4, deviators, &golden().order4)
}
