use proptest::prelude::*;
use shv_core::conformal::ConformalAlgebraSpec;
use shv_core::superalgebra::{
    bracket, check_ns_embedding, check_ns_embedding_with, generators_up_to, lie_of, ns_embed, quotient_algebra,
    AlgebraTag, Family, GenIndex, Generator, SubalgebraSpec, SuperElement,
};
use shv_core::{Parity, Scalar};

/// The defining relations written out with doubled indices.
fn oracle(tag: AlgebraTag, x: Generator, y: Generator) -> SuperElement {
    let (m2, n2) = (x.index.doubled(), y.index.doubled());
    let sum = GenIndex::from_doubled(m2 + n2);
    let half = |d: i64| Scalar::ratio(d, 2);
    let (c, f) = match (x.family, y.family) {
        (Family::L, Family::L) => (half(n2 - m2), Family::L),
        (Family::L, f) => (half(n2), f),
        (f, Family::L) => (half(-m2), f),
        (Family::G, Family::G) => (Scalar::from_int(2), Family::I),
        _ => return SuperElement::zero(tag),
    };
    SuperElement::from_terms(tag, [(Generator::new(f, sum), c)]).unwrap()
}

fn elem(tag: AlgebraTag, g: Generator) -> SuperElement {
    SuperElement::generator(tag, g).unwrap()
}

fn sign(x: Generator, y: Generator) -> Scalar {
    Parity::swap_sign(x.parity(), y.parity())
}

#[test]
fn bracket_matches_relations() {
    for tag in [AlgebraTag::Ramond, AlgebraTag::NeveuSchwarz] {
        for x in generators_up_to(tag, 6) {
            for y in generators_up_to(tag, 6) {
                let got = bracket(&elem(tag, x), &elem(tag, y)).unwrap();
                assert_eq!(got, oracle(tag, x, y), "[{x}, {y}]");
            }
        }
    }
}

#[test]
fn super_skew_symmetry() {
    for tag in [AlgebraTag::Ramond, AlgebraTag::NeveuSchwarz] {
        for x in generators_up_to(tag, 10) {
            for y in generators_up_to(tag, 10) {
                let xy = bracket(&elem(tag, x), &elem(tag, y)).unwrap();
                let yx = bracket(&elem(tag, y), &elem(tag, x)).unwrap();
                assert_eq!(xy, yx.scale(&-sign(x, y)), "[{x}, {y}]");
            }
        }
    }
}

#[test]
fn super_jacobi_identity() {
    for tag in [AlgebraTag::Ramond, AlgebraTag::NeveuSchwarz] {
        let gens = generators_up_to(tag, 6);
        for &x in &gens {
            for &y in &gens {
                let xy = bracket(&elem(tag, x), &elem(tag, y)).unwrap();
                for &z in &gens {
                    let (ex, ey, ez) = (elem(tag, x), elem(tag, y), elem(tag, z));
                    let lhs = bracket(&ex, &bracket(&ey, &ez).unwrap()).unwrap();
                    let first = bracket(&xy, &ez).unwrap();
                    let second = bracket(&ey, &bracket(&ex, &ez).unwrap()).unwrap().scale(&sign(x, y));
                    let residual = lhs.sub(&first).unwrap().sub(&second).unwrap();
                    assert!(residual.is_zero(), "({x}, {y}, {z})");
                }
            }
        }
    }
}

#[test]
fn mode_algebra_is_ramond() {
    let table = lie_of(&ConformalAlgebraSpec::super_heisenberg_virasoro(), -8..=8).unwrap();
    assert_eq!(table.len(), 9 * 17 * 17);
    for ((x, y), got) in table {
        assert_eq!(got, oracle(AlgebraTag::Ramond, x, y), "[{x}, {y}]");
    }
}

#[test]
fn mode_algebra_of_the_even_part() {
    let table = lie_of(&ConformalAlgebraSpec::heisenberg_virasoro(), -5..=5).unwrap();
    for ((x, y), got) in table {
        assert_eq!(got, oracle(AlgebraTag::Ramond, x, y), "[{x}, {y}]");
    }
}

#[test]
fn ns_embedding_is_a_homomorphism() {
    let report = check_ns_embedding(6);
    assert!(report.passed(), "{report:?}");
    assert!(report.pairs_checked > 0);
}

#[test]
fn ns_embedding_without_the_half_fails() {
    let corrupted = |x: &SuperElement| {
        let image = ns_embed(x).unwrap();
        let mut out = SuperElement::zero(AlgebraTag::Ramond);
        for (g, c) in image.terms() {
            let c = if g.family == Family::L {
                c * &Scalar::from_int(2)
            } else {
                c.clone()
            };
            out.add_term(*g, c).unwrap();
        }
        out
    };
    let report = check_ns_embedding_with(4, &corrupted);
    assert!(!report.passed());
    assert!(!report.failures.is_empty());
}

#[test]
fn quotients_are_lie_superalgebras() {
    for alpha in 0..=6 {
        for beta in 0..=3 {
            if alpha < 2 * beta {
                assert!(quotient_algebra(alpha, beta, 0).is_err());
                continue;
            }
            for z in 0..=3 {
                let q = quotient_algebra(alpha, beta, z).unwrap();
                let ideal = q.ideal();
                let sub = SubalgebraSpec::alpha_beta(alpha, beta).unwrap();
                for g in &q.survivors {
                    assert!(sub.contains(g) && !ideal.contains(g));
                }
                let count = ((z + alpha + 1 + z + 1 + z + beta + 1) - (-alpha)) - (-beta);
                assert_eq!(q.survivors.len() as i64, count, "α={alpha} β={beta} z={z}");
                assert!(q.jacobi_violations().is_empty(), "α={alpha} β={beta} z={z}");
            }
        }
    }
}

#[test]
fn smallest_quotient() {
    let q = quotient_algebra(0, 0, 0).unwrap();
    let names: Vec<String> = q.survivors.iter().map(|g| format!("{}{}", g.family, g.index)).collect();
    assert_eq!(names, ["L0", "I0", "G0"]);
    let g0 = Generator::int(Family::G, 0);
    assert_eq!(
        q.bracket(&g0, &g0),
        SuperElement::from_terms(
            AlgebraTag::Ramond,
            [(Generator::int(Family::I, 0), Scalar::from_int(2))]
        )
        .unwrap()
    );
}

fn ramond_generator() -> impl Strategy<Value = Generator> {
    (0..3usize, -12i64..=12).prop_map(|(f, n)| Generator::int(Family::ALL[f], n))
}

proptest! {
    #[test]
    fn subalgebras_are_closed(
        beta in 0i64..3, extra in 0i64..3,
        (fx, dx) in (0..3usize, 0i64..10), (fy, dy) in (0..3usize, 0i64..10),
    ) {
        let alpha = 2 * beta + extra;
        let sub = SubalgebraSpec::alpha_beta(alpha, beta).unwrap();
        let member = |f: usize, d: i64| {
            let family = Family::ALL[f];
            Generator::int(family, sub.lower_bound(family) + d)
        };
        let (x, y) = (member(fx, dx), member(fy, dy));
        prop_assert!(sub.contains(&x) && sub.contains(&y));
        let xy = bracket(&elem(AlgebraTag::Ramond, x), &elem(AlgebraTag::Ramond, y)).unwrap();
        prop_assert!(sub.member(&xy));
    }

    #[test]
    fn rst_subalgebras_are_closed(r in 0i64..5, (fx, dx) in (0..3usize, 0i64..10), (fy, dy) in (0..3usize, 0i64..10)) {
        let sub = SubalgebraSpec::t(r);
        let x = Generator::int(Family::ALL[fx], r + dx);
        let y = Generator::int(Family::ALL[fy], r + dy);
        let xy = bracket(&elem(AlgebraTag::Ramond, x), &elem(AlgebraTag::Ramond, y)).unwrap();
        prop_assert!(sub.member(&xy));
    }

    #[test]
    fn bracket_is_bilinear(
        a in -20i64..20, b in 1i64..7,
        x in ramond_generator(), y in ramond_generator(), w in ramond_generator(),
    ) {
        let k = Scalar::ratio(a, b);
        let (ex, ey, ew) = (elem(AlgebraTag::Ramond, x), elem(AlgebraTag::Ramond, y), elem(AlgebraTag::Ramond, w));
        let lhs = bracket(&ex.scale(&k).add(&ew).unwrap(), &ey).unwrap();
        let rhs = bracket(&ex, &ey).unwrap().scale(&k).add(&bracket(&ew, &ey).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalars_are_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = Scalar::ratio(a, b);
        let y = Scalar::ratio(c, d);
        prop_assert_eq!(&(&(&x + &y) - &y), &x);
        if !y.is_zero() {
            prop_assert_eq!(&(&(&x * &y) / &y), &x);
        }
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}
