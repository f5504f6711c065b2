use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use deviatoric::closedform::{assemble_order3, l_apply};
use deviatoric::decompose::{
    assemble_g, count_parts, decompose, extract_from_g, reconstruct, trinomial, verify,
};
use deviatoric::harmonic::{deviator_defects, project_deviator};
use deviatoric::physics::{
    coupling_decompose_with, coupling_reconstruct, stiffness_decompose, stiffness_reconstruct,
    tensor_to_voigt, voigt_to_tensor, CouplingTensor, CouplingVariant, StiffnessTensor, VoigtMatrix,
};
use deviatoric::{DenseTensor, Rotation};

fn tensor(order: usize) -> impl Strategy<Value = DenseTensor> {
    prop::collection::vec(-10.0f64..10.0, 3usize.pow(order as u32))
        .prop_map(move |c| DenseTensor::from_components(order, c).unwrap())
}

fn rotation() -> impl Strategy<Value = Rotation> {
    any::<u64>().prop_map(|seed| Rotation::random(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn close(a: &DenseTensor, b: &DenseTensor, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetrize_is_idempotent(t in tensor(3)) {
        let s = t.symmetrize_all();
        prop_assert!(close(&s.symmetrize_all(), &s, 1e-14));
    }

    #[test]
    fn rotation_preserves_norm_and_composes(t in tensor(3), r in rotation(), q in rotation()) {
        prop_assert!((t.rotate(&r).norm() - t.norm()).abs() <= 1e-12 * t.norm().max(1.0));
        prop_assert!(close(&t.rotate(&q).rotate(&r), &t.rotate(&r.compose(&q)), 1e-12));
    }

    #[test]
    fn contraction_with_delta_is_trace(t in tensor(2)) {
        let tr = t.contract_complete(&DenseTensor::delta()).unwrap().as_scalar();
        prop_assert!((tr - (0..3).map(|i| t.get(&[i, i])).sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn projection_gives_deviator(t in tensor(4)) {
        let d = project_deviator(&t);
        let defects = deviator_defects(&d);
        prop_assert!(defects.symmetry.max(defects.trace) <= 1e-12 * t.norm().max(1.0));
        prop_assert!(close(&project_deviator(&d), &d, 1e-12));
    }

    #[test]
    fn decomposition_round_trips(order in 0usize..=5, seed in any::<u64>()) {
        let t = deviatoric::cli::random_tensor(order, seed);
        let d = decompose(&t);
        prop_assert!(close(&reconstruct(&d), &t, 1e-10));
        prop_assert!(verify(&d, &t).passes(1e-10));
    }

    #[test]
    fn decomposition_is_linear(a in tensor(3), b in tensor(3), x in -3.0f64..3.0) {
        let combined = decompose(&(&a.scale(x) + &b));
        let (da, db) = (decompose(&a), decompose(&b));
        for ((p, q), r) in combined.parts.iter().zip(&da.parts).zip(&db.parts) {
            prop_assert!(close(&p.embedded, &(&q.embedded.scale(x) + &r.embedded), 1e-10));
        }
    }

    #[test]
    fn decomposition_is_equivariant(t in tensor(3), r in rotation()) {
        let d = decompose(&t);
        let dr = decompose(&t.rotate(&r));
        for (p, q) in d.parts.iter().zip(&dr.parts) {
            prop_assert!(close(&q.embedded, &p.embedded.rotate(&r), 1e-10));
        }
    }

    #[test]
    fn split_round_trips(n in 2usize..=4, lo in tensor(3), mid in tensor(4), up in tensor(5)) {
        let cut = |t: &DenseTensor, m: usize| project_deviator(&DenseTensor::from_components(m, t.components()[..3usize.pow(m as u32)].to_vec()).unwrap());
        let (lo, mid, up) = (cut(&lo, n - 1), cut(&mid, n), cut(&up, n + 1));
        let g = assemble_g(&lo, &mid, &up).unwrap();
        let [a, b, c] = extract_from_g(&g).unwrap();
        prop_assert!(close(&a, &lo, 1e-10) && close(&b, &mid, 1e-10) && close(&c, &up, 1e-10));
        prop_assert!(close(&assemble_g(&lo, &DenseTensor::zeros(n), &DenseTensor::zeros(n + 1)).unwrap(), &l_apply(n, &lo).unwrap(), 1e-12));
    }

    #[test]
    fn closed_form_order3_matches_engine(t in tensor(3)) {
        let devs: Vec<DenseTensor> = decompose(&t).parts.into_iter().map(|p| p.deviator).collect();
        prop_assert!(close(&assemble_order3(&devs).unwrap(), &t, 1e-10));
    }

    #[test]
    fn stiffness_round_trips(entries in prop::collection::vec(-5.0f64..5.0, 21)) {
        let mut m = [[0.0; 6]; 6];
        let mut it = entries.into_iter();
        for a in 0..6 {
            for b in a..6 {
                let v = it.next().unwrap();
                m[a][b] = v;
                m[b][a] = v;
            }
        }
        let vm = VoigtMatrix::new(m).unwrap();
        let c = voigt_to_tensor(&vm);
        prop_assert_eq!(&tensor_to_voigt(&c), &vm);
        let d = stiffness_decompose(&c);
        let back: StiffnessTensor = stiffness_reconstruct(&d).unwrap();
        prop_assert!(close(back.tensor(), c.tensor(), 1e-12));
    }

    #[test]
    fn coupling_fitted_round_trips(t in tensor(3)) {
        let h = CouplingTensor::new(t.symmetrize(&[0, 1]).unwrap()).unwrap();
        prop_assert!(decompose(h.tensor()).part(0, 1).unwrap().deviator.as_scalar().abs() <= 1e-10 * h.tensor().norm().max(1.0));
        let d = coupling_decompose_with(&h, CouplingVariant::Fitted);
        prop_assert!(close(coupling_reconstruct(&d).unwrap().tensor(), h.tensor(), 1e-10));
    }

    #[test]
    fn trinomial_recurrence(n in 0usize..40, s in -45i64..45) {
        prop_assert_eq!(trinomial(n + 1, s), trinomial(n, s - 1) + trinomial(n, s) + trinomial(n, s + 1));
        prop_assert_eq!(trinomial(n, s), trinomial(n, -s));
    }
}

#[test]
fn dof_identity_up_to_twelve() {
    for n in 0..=12usize {
        let sum: u128 = (0..=n).map(|s| (1 + 2 * s as u128) * count_parts(n, s).unwrap()).sum();
        assert_eq!(sum, 3u128.pow(n as u32));
    }
}
