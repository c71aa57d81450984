use proptest::prelude::*;
use staircase_core::linalg::{spectral_norm, CMat};
use staircase_core::numeric_model::{
    build_seto_example, compatibility_defect, doubly_commute_defect, isometry_defect, DEFAULT_RANK_TOL,
};
use staircase_core::{compress, Diagram, LatticePoint, MonomialSubspace, NumericSubspace, ShiftOp, Window, C64};

fn p(i: i64, j: i64) -> LatticePoint {
    LatticePoint::new(i, j)
}

fn corners(lo: i64, hi: i64, max: usize) -> impl Strategy<Value = Vec<LatticePoint>> {
    prop::collection::btree_set(lo..hi, 1..=max)
        .prop_flat_map(move |is| {
            let k = is.len();
            (Just(is), prop::collection::btree_set(lo..hi, k..=k))
        })
        .prop_map(|(is, js)| is.into_iter().zip(js.into_iter().rev()).map(|(i, j)| p(i, j)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn adjoint_coherence(cs in corners(0, 6, 3)) {
        let w = Window::square(0, 8, 2).unwrap();
        let m = MonomialSubspace::from_diagram(Diagram::finite_corner(cs).unwrap(), p(0, 0), w).unwrap();
        let num = NumericSubspace::from_monomial(&m);
        for (fwd, back) in [(ShiftOp::W, ShiftOp::W_ADJ), (ShiftOp::Z, ShiftOp::Z_ADJ)] {
            let a = compress(fwd, &num).unwrap().matrix().adjoint().to_dense();
            let b = compress(back, &num).unwrap().matrix().to_dense();
            prop_assert!((a - b).camax() < 1e-13);
        }
    }

    /// Numeric defects on coordinate embeddings reproduce the exact answers.
    #[test]
    fn monomial_embedding_equivalence(cs in corners(0, 6, 3)) {
        let w = Window::square(-1, 9, 2).unwrap();
        let m = MonomialSubspace::from_diagram(Diagram::finite_corner(cs).unwrap(), p(0, 0), w).unwrap();
        let num = NumericSubspace::from_monomial(&m);
        let sw = compress(ShiftOp::W, &num).unwrap();
        let sz = compress(ShiftOp::Z, &num).unwrap();
        let dc = doubly_commute_defect(&sz, &sw).unwrap();
        let exact = m.doubly_commute_check().unwrap().holds;
        prop_assert_eq!(dc < 1e-10, exact, "numeric defect {}", dc);
        prop_assert!(!exact || dc == 0.0);
        prop_assert!(exact || (dc - 1.0).abs() < 1e-12);
        let compat = compatibility_defect(&sw, &sz, 2, 2, DEFAULT_RANK_TOL).unwrap();
        prop_assert!(compat.defect < 1e-10);
        prop_assert!(isometry_defect(&sw) < 1e-10 && isometry_defect(&sz) < 1e-10);
    }
}

/// Dense oracle for the compressed shift: `B^* T B` with `B` the basis
/// matrix over the window points.
#[test]
fn seto_compression_matches_dense_oracle() {
    let lam = C64::new(0.5, 0.0);
    let w = Window::square(0, 7, 2).unwrap();
    let ex = build_seto_example(lam, w).unwrap();
    let pts: Vec<LatticePoint> = w.extended().points().collect();
    let idx = |q: LatticePoint| pts.iter().position(|&x| x == q);
    let basis = ex.subspace.basis();
    let b = CMat::from_fn(pts.len(), basis.len(), |r, c| basis[c].get(pts[r]));
    let t = CMat::from_fn(pts.len(), pts.len(), |r, c| {
        if idx(pts[c] + p(1, 0)) == Some(r) {
            C64::new(1.0, 0.0)
        } else {
            C64::default()
        }
    });
    let dense = b.adjoint() * t * &b;
    let sparse = compress(ShiftOp::W, &ex.subspace).unwrap().matrix().to_dense();
    assert!(spectral_norm(&(dense - sparse)) < 1e-13);
}

/// `‖[P_{ran S_w^m}, P_{ran S_z^n}]‖ = |λ|^m sqrt(1 - |λ|^{2m})`, independent of `n`.
#[test]
fn seto_compatibility_closed_form() {
    for lam in [0.25, 0.5] {
        let ex = build_seto_example(C64::new(lam, 0.0), Window::square(0, 30, 3).unwrap()).unwrap();
        let sw = compress(ShiftOp::W, &ex.subspace).unwrap();
        let sz = compress(ShiftOp::Z, &ex.subspace).unwrap();
        let r = compatibility_defect(&sw, &sz, 2, 2, DEFAULT_RANK_TOL).unwrap();
        for ((m, _), v) in &r.table {
            let lm = lam.powi(*m as i32);
            let want = lm * (1.0 - lm * lm).sqrt();
            assert!((v - want).abs() < 1e-10, "λ={lam} m={m}: {v} vs {want}");
        }
        assert_eq!(r.argmax.0, 1);
    }
}

#[test]
fn seto_defect_converges_monotonically() {
    for lam in [0.25, 0.5, 0.75] {
        let mut prev = f64::INFINITY;
        for n in [10, 20, 40, 60] {
            let d = build_seto_example(C64::new(lam, 0.0), Window::square(0, n, 2).unwrap())
                .unwrap()
                .evaluate()
                .unwrap();
            let err = (d.defect - lam).abs();
            assert!(err <= prev + 1e-15, "λ={lam} n={n}: {err} after {prev}");
            prev = err;
        }
        assert!(prev < 1e-6);
    }
}
