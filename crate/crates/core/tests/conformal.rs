use proptest::prelude::*;
use shv_core::conformal::{
    assemble_from_products, check_conformal_module, check_jacobi, check_skew, jth_products, rank_one_irreducible,
    ConformalAlgebraSpec, ExtensionAnsatz, RankOneModuleSpec,
};
use shv_core::poly::{Poly, D, LAMBDA};
use shv_core::superalgebra::mode_bracket;
use shv_core::Scalar;

fn ansatz(a: Scalar, b: i64, c: i64, phi: Poly, psi: Poly) -> ExtensionAnsatz {
    ExtensionAnsatz {
        a,
        b: Scalar::from_int(b),
        c: Scalar::from_int(c),
        phi,
        psi,
    }
}

fn passes(spec: &ConformalAlgebraSpec) -> bool {
    check_skew(spec).passed() && check_jacobi(spec).passed()
}

#[test]
fn perturbations_break_the_axioms() {
    let (d, l) = (Poly::var(D), Poly::var(LAMBDA));
    let one = Scalar::one();
    let perturbed = [
        ansatz(Scalar::zero(), 0, 0, Poly::zero(), Poly::int(2)),
        ansatz(Scalar::from_int(2), 0, 0, Poly::zero(), Poly::int(2)),
        ansatz(Scalar::ratio(1, 2), 0, 0, Poly::zero(), Poly::int(2)),
        ansatz(one.clone(), 1, 0, Poly::zero(), Poly::int(2)),
        ansatz(one.clone(), 0, 1, Poly::zero(), Poly::int(2)),
        ansatz(one.clone(), 0, 0, Poly::int(1), Poly::int(2)),
        ansatz(one.clone(), 0, 0, &d + &l.scale(&Scalar::from_int(2)), Poly::int(2)),
        ansatz(one.clone(), 0, 0, Poly::zero(), l.clone()),
        ansatz(one, 0, 0, Poly::zero(), &d + &l.scale(&Scalar::from_int(2))),
    ];
    for a in &perturbed {
        let spec = ConformalAlgebraSpec::extension(a).unwrap();
        assert!(!passes(&spec), "{a:?}");
    }
}

#[test]
fn products_reassemble_the_brackets() {
    for spec in [
        ConformalAlgebraSpec::super_heisenberg_virasoro(),
        ConformalAlgebraSpec::heisenberg_virasoro(),
    ] {
        for x in spec.generators() {
            for y in spec.generators() {
                let products = jth_products(&spec, &x.name, &y.name).unwrap();
                assert_eq!(
                    &assemble_from_products(&products),
                    spec.entry(&x.name, &y.name).unwrap()
                );
            }
        }
    }
}

#[test]
fn modes_before_reindexing() {
    let spec = ConformalAlgebraSpec::super_heisenberg_virasoro();
    for m in -6..=6 {
        for n in -6..=6 {
            let got = mode_bracket(&spec, "L", m, "L", n).unwrap();
            let mut want = std::collections::BTreeMap::new();
            if m != n {
                want.insert(("L".to_string(), m + n - 1), Scalar::from_int(m - n));
            }
            assert_eq!(got, want, "[L_({m}), L_({n})]");
        }
    }
}

proptest! {
    #[test]
    fn rescaled_odd_square_is_still_an_algebra(p in -9i64..9, q in 1i64..5) {
        prop_assume!(p != 0);
        let a = ansatz(Scalar::one(), 0, 0, Poly::zero(), Poly::constant(Scalar::ratio(p, q)));
        prop_assert!(passes(&ConformalAlgebraSpec::extension(&a).unwrap()));
    }

    #[test]
    fn rank_one_modules_are_modules(a in -6i64..6, b in -6i64..6, c in -6i64..6) {
        let m = RankOneModuleSpec::new(Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(c));
        let report = check_conformal_module(&ConformalAlgebraSpec::heisenberg_virasoro(), &m.action()).unwrap();
        prop_assert!(report.passed());
        prop_assert_eq!(rank_one_irreducible(&m), a != 0 || c != 0);
    }
}
