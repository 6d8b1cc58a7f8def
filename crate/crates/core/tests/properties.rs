//! Property tests: algebraic laws and fast-path/oracle agreement on random
//! inputs.

use proptest::prelude::*;
use std::sync::OnceLock;

use punctured_skein::curve_algebra::{oracle_resolution, resolution, AlgebraElement, CurveAlgebra, Sign};
use punctured_skein::lambda_expansion::Expander;
use punctured_skein::laurent::{rat, LaurentPoly};
use punctured_skein::normal_curves::{
    corner_to_edge, edge_to_corner, enumerate_reduced, validate_reduced, ReducedMulticurve,
};
use punctured_skein::quantum_skein::{qbasis, qmultiply, specialize_classical};
use punctured_skein::triangulation::{octahedron, tetrahedron};
use punctured_skein::verification::oracle_realizable_reduced;

fn tet() -> &'static CurveAlgebra {
    static A: OnceLock<CurveAlgebra> = OnceLock::new();
    A.get_or_init(|| CurveAlgebra::new(tetrahedron()))
}

fn oct() -> &'static CurveAlgebra {
    static A: OnceLock<CurveAlgebra> = OnceLock::new();
    A.get_or_init(|| CurveAlgebra::new(octahedron()))
}

fn tet_curves() -> &'static [ReducedMulticurve] {
    static C: OnceLock<Vec<ReducedMulticurve>> = OnceLock::new();
    C.get_or_init(|| enumerate_reduced(tet().triangulation(), 2))
}

fn oct_curves() -> &'static [ReducedMulticurve] {
    static C: OnceLock<Vec<ReducedMulticurve>> = OnceLock::new();
    C.get_or_init(|| enumerate_reduced(oct().triangulation(), 2))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..=2, 3), -4i64..=4), 0..5).prop_map(|terms| {
        let mut p = LaurentPoly::zero(3);
        for (e, c) in terms {
            p.add_term(e, rat(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).unwrap().div_exact(&b, 1 << 12).unwrap(), a);
    }

    #[test]
    fn validation_agrees_with_the_geometric_oracle(w in prop::collection::vec(-1i32..=5, 12)) {
        let tri = tet().triangulation();
        prop_assert_eq!(validate_reduced(tri, &w).is_ok(), oracle_realizable_reduced(tri, &w).unwrap());
    }

    #[test]
    fn edge_coordinates_round_trip(i in 0usize..10_000) {
        let tri = tet().triangulation();
        let c = &tet_curves()[i % tet_curves().len()];
        // Curves without arcs are determined by their intersection numbers.
        if c.end_vertices(tri).is_empty() {
            prop_assert_eq!(edge_to_corner(tri, &corner_to_edge(tri, c.corners())).unwrap(), c.corners().to_vec());
        }
    }

    #[test]
    fn fast_resolutions_match_the_oracle_on_the_octahedron(i in 0usize..10_000, e in 0usize..12, positive: bool) {
        let tri = oct().triangulation();
        let c = &oct_curves()[i % oct_curves().len()];
        let sign = if positive { Sign::Positive } else { Sign::Negative };
        prop_assert_eq!(resolution(tri, e, c, sign).unwrap(), oracle_resolution(tri, e, c, sign).unwrap());
    }

    #[test]
    fn classical_product_is_commutative(i in 0usize..10_000, j in 0usize..10_000) {
        let cs = tet_curves();
        let (a, b) = (&cs[i % cs.len()], &cs[j % cs.len()]);
        prop_assert_eq!(tet().multiply_basis(a, b).unwrap(), tet().multiply_basis(b, a).unwrap());
    }

    #[test]
    fn quantum_product_is_associative_and_specializes(i in 0usize..10_000, j in 0usize..10_000, k in 0usize..10_000) {
        let alg = tet();
        let cs = tet_curves();
        let q = |n: usize| qbasis(alg, cs[n % cs.len()].clone());
        let (a, b, c) = (q(i), q(j), q(k));
        let ab = qmultiply(alg, &a, &b).unwrap();
        prop_assert_eq!(
            qmultiply(alg, &ab, &c).unwrap(),
            qmultiply(alg, &a, &qmultiply(alg, &b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            specialize_classical(alg, &ab).unwrap(),
            alg.multiply_basis(&cs[i % cs.len()], &cs[j % cs.len()]).unwrap()
        );
    }

    #[test]
    fn expansion_is_multiplicative(i in 0usize..10_000, j in 0usize..10_000) {
        let alg = tet();
        let cs = tet_curves();
        let (a, b) = (&cs[i % cs.len()], &cs[j % cs.len()]);
        let x = Expander::new(alg);
        let prod = alg.multiply_basis(a, b).unwrap();
        // Clear negative vertex exponents: multiply both sides by v^k and Φ(v)^k.
        let mut clear = vec![0i32; alg.nvars()];
        for c in prod.terms().values() {
            for (v, k) in clear.iter_mut().enumerate() {
                *k = (*k).max(-c.min_exponent(v).unwrap_or(0));
            }
        }
        let cleared = AlgebraElement::from_terms(
            alg.nvars(),
            prod.terms().iter().map(|(k, c)| (k.clone(), c.shift(&clear))).collect(),
        );
        let mut rhs = x.phi_curve(a).unwrap().mul(&x.phi_curve(b).unwrap()).unwrap();
        for (v, &k) in clear.iter().enumerate() {
            rhs = rhs.mul(&x.phi_vertex(v).pow(k as u32)).unwrap();
        }
        prop_assert_eq!(x.phi_expand(&cleared).unwrap(), rhs);
    }

    #[test]
    fn element_json_round_trip(i in 0usize..10_000, j in 0usize..10_000, c in -5i64..=5, e in -2i32..=2) {
        let alg = tet();
        let cs = tet_curves();
        let mut x = AlgebraElement::zero(4);
        x.add_term(cs[i % cs.len()].clone(), &LaurentPoly::monomial(vec![e, 0, 1, 0], rat(c)));
        x.add_term(cs[j % cs.len()].clone(), &LaurentPoly::constant(4, rat(1)));
        prop_assert_eq!(AlgebraElement::from_json(alg.triangulation(), 4, &x.to_json()).unwrap(), x);
    }
}
