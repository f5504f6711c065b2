//! Second-order base case: `T = alpha * delta + eps . v + D`.

use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// Scalar, axial vector and deviator of an order-2 tensor.
pub(crate) fn split(t: &DenseTensor) -> [DenseTensor; 3] {
    debug_assert_eq!(t.order(), 2);
    let alpha = (0..3).map(|i| t.get(&[i, i])).sum::<f64>() / 3.0;
    // v_s = 1/2 eps_{ijs} t_{ij}
    let v = DenseTensor::epsilon()
        .transpose(&[2, 0, 1])
        .and_then(|e| e.contract_double(t))
        .expect("fixed orders")
        .scale(0.5);
    let sym = t.symmetrize(&[0, 1]).expect("order 2");
    let dev = &sym - &DenseTensor::delta().scale(alpha);
    [DenseTensor::scalar(alpha), v, dev]
}

/// `alpha * delta`.
pub(crate) fn trace_term(alpha: &DenseTensor) -> DenseTensor {
    DenseTensor::delta().scale(alpha.as_scalar())
}

/// `(eps . v)_{ij} = eps_{ijs} v_s`.
pub(crate) fn axial_term(v: &DenseTensor) -> DenseTensor {
    DenseTensor::epsilon()
        .contract_single(v)
        .expect("vector operand")
}

/// Assembles the three order-2 pieces back into a tensor.
pub fn assemble_order2(alpha: f64, v: &DenseTensor, d: &DenseTensor) -> Result<DenseTensor> {
    if v.order() != 1 {
        return Err(Error::OrderMismatch {
            expected: 1,
            found: v.order(),
        });
    }
    if d.order() != 2 {
        return Err(Error::OrderMismatch {
            expected: 2,
            found: d.order(),
        });
    }
    let mut out = trace_term(&DenseTensor::scalar(alpha));
    out.axpy(1.0, &axial_term(v));
    out.axpy(1.0, d);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_is_pure_trace() {
        let [a, v, d] = split(&DenseTensor::delta());
        assert_eq!(a.as_scalar(), 1.0);
        assert_eq!(v.max_abs(), 0.0);
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn antisymmetric_is_axial() {
        let t = DenseTensor::zeros(2).with(&[0, 1], 1.0).with(&[1, 0], -1.0);
        let [a, v, d] = split(&t);
        assert_eq!(a.as_scalar(), 0.0);
        assert_eq!(v, DenseTensor::vector([0.0, 0.0, 1.0]));
        assert_eq!(d.max_abs(), 0.0);
        assert_eq!(axial_term(&v), t);
    }

    #[test]
    fn traceless_symmetric_is_deviator() {
        let t = DenseTensor::zeros(2)
            .with(&[0, 0], 1.0)
            .with(&[1, 1], 1.0)
            .with(&[2, 2], -2.0);
        let [a, v, d] = split(&t);
        assert_eq!(a.as_scalar(), 0.0);
        assert_eq!(v.max_abs(), 0.0);
        assert_eq!(d, t);
    }

    #[test]
    fn pieces_reassemble() {
        let t = DenseTensor::from_fn(2, |ix| (ix[0] as f64 + 1.0) * (2.0 - ix[1] as f64 * 1.5));
        let [a, v, d] = split(&t);
        let back = assemble_order2(a.as_scalar(), &v, &d).unwrap();
        assert!((&back - &t).max_abs() < 1e-15);
    }
}
