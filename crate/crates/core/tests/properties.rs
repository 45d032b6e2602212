use hinv_core::clifford::{h_element, HGenerator, REpsMatrix};
use hinv_core::constructions::{build_family, Family, FamilySpec, LambdaMode};
use hinv_core::distributions::{act_group, apply_weyl, degree, normalize, DistExpr, DistTerm, Homogeneity};
use hinv_core::orbits::{stratum_of, ProjPoint};
use hinv_core::scalars::{AffineExponent, GaussianRational, Scalar};
use hinv_core::weyl::{compose, z, zbar, WeylOp};
use num::BigRational;
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(re, im, den)| {
        Scalar::constant(GaussianRational::new(BigRational::new(re.into(), den.into()), BigRational::new(im.into(), den.into())))
    })
}

fn h_elem(n: usize) -> impl Strategy<Value = REpsMatrix> {
    (-2i32..=2, prop::collection::vec(gauss(), n - 1))
        .prop_map(move |(m, coeffs)| h_element(n, &Scalar::unit_power(m), &coeffs))
}

/// Expressions with a power factor on z2 and a delta in z3, the shape the
/// group action accepts.
fn expr3() -> impl Strategy<Value = DistExpr> {
    let term = (gauss(), 0u32..2, 0u32..2, 0u32..3, 0u32..3, 0u32..3, 0u32..3).prop_map(|(c, p1, q1, p2, q2, a, b)| {
        DistTerm::new(3, c)
            .monomial(1, p1, q1)
            .monomial(2, p2, q2)
            .power(2, AffineExponent::from_ratios(1, 1, -1, 2))
            .unwrap()
            .delta(3, a, b)
            .unwrap()
    });
    prop::collection::vec(term, 1..4).prop_map(|ts| normalize(&DistExpr::from_terms(3, ts)))
}

/// Degree-zero vector fields `x_a ∂_b`.
fn field3() -> impl Strategy<Value = WeylOp> {
    prop::collection::vec((gauss(), 0usize..6, 0usize..6), 1..3).prop_map(|parts| {
        parts
            .into_iter()
            .fold(WeylOp::zero(3), |acc, (c, a, b)| acc.add(&WeylOp::vector_field_term(3, c, a, b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_action_is_a_left_action(g in h_elem(3), h in h_elem(3), e in expr3()) {
        let lhs = act_group(&g.mul(&h), &e).unwrap();
        let rhs = act_group(&g, &act_group(&h, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_sequential_application(p in field3(), q in field3(), e in expr3()) {
        let lhs = apply_weyl(&compose(&p, &q), &e).unwrap();
        let rhs = apply_weyl(&p, &apply_weyl(&q, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_zero_fields_preserve_degree(p in field3(), e in expr3()) {
        let before = degree(&e);
        let after = degree(&apply_weyl(&p, &e).unwrap());
        if let (Homogeneity::Degree(a), Homogeneity::Degree(b)) = (&before, &after) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn families_are_fixed_by_random_elements(g in h_elem(4), l in 0u32..3, which in 0usize..3) {
        let family = [Family::T, Family::Tbar, Family::Tj(2)][which];
        let e = build_family(&FamilySpec::new(4, family, l, LambdaMode::Formal)).unwrap();
        prop_assert_eq!(act_group(&g, &e).unwrap(), e);
    }

    #[test]
    fn stratum_is_preserved_by_the_group(g in h_elem(4), coords in prop::collection::vec((-3i64..=3, -3i64..=3), 4)) {
        prop_assume!(coords.iter().any(|&c| c != (0, 0)));
        let p = ProjPoint::from_ints(&coords).unwrap();
        let v: Vec<(Scalar, Scalar)> = p.coords().iter().map(|c| (Scalar::constant(c.clone()), Scalar::constant(c.conj()))).collect();
        let image = g.act(&v);
        let j = image.iter().rposition(|(x, _)| !x.is_zero()).unwrap() + 1;
        prop_assert_eq!(j, stratum_of(&p).j);
    }
}

#[test]
fn phase_generator_fixes_zero_weight_but_not_others() {
    let zero_weight = normalize(&DistExpr::from_terms(
        2,
        vec![DistTerm::new(2, Scalar::one()).monomial(1, 1, 0).delta(2, 1, 0).unwrap()],
    ));
    let g = HGenerator::Phase(1).matrix(2);
    assert_eq!(act_group(&g, &zero_weight).unwrap(), zero_weight);
    let weighted = normalize(&DistExpr::from_terms(2, vec![DistTerm::new(2, Scalar::one()).monomial(1, 1, 0).delta(2, 0, 0).unwrap()]));
    let moved = act_group(&g, &weighted).unwrap();
    assert_eq!(moved, weighted.scale(&Scalar::unit_power(-1)));
}

#[test]
fn vector_field_symbols() {
    assert_eq!((z(1), zbar(1), z(3)), (0, 1, 4));
}

fn golden(name: &str, spec: FamilySpec) {
    let path = format!("{}/tests/golden/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    let got = format!("{}\n", build_family(&spec).unwrap());
    if std::env::var_os("HINV_BLESS").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {path}; rerun with HINV_BLESS=1"));
    assert_eq!(got, want, "canonical text of {name} changed");
}

#[test]
fn canonical_text_of_families() {
    golden("t_n3_l2", FamilySpec::new(3, Family::T, 2, LambdaMode::Formal));
    golden("tbar_n3_l2", FamilySpec::new(3, Family::Tbar, 2, LambdaMode::Formal));
    golden("tj2_n4_l2", FamilySpec::new(4, Family::Tj(2), 2, LambdaMode::Formal));
    golden("t2_n2_l3", FamilySpec::new(2, Family::T2, 3, LambdaMode::Value(BigRational::from_integer(2.into()))));
}
