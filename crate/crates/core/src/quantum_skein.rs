//! The q-deformed product over `ℤ[q^{±½}][v^{±}]` and its classical limit.
//!
//! A quantum element is an [`AlgebraElement`] whose coefficients carry one
//! extra trailing variable slot holding the exponent of `q^{½}`; the leading
//! slots are the vertex variables. The product `a·b` stacks `a` over `b`:
//! every interior crossing is resolved with weights `q` and `q^{−1}`, every
//! puncture meeting with `q^{±½}v^{−1}`, trivial framed loops evaluate to
//! `−q²−q^{−2}` and puncture loops to `q+q^{−1}`.
//!
//! Substituting `q^{½} = 1` collapses the extra slot and recovers the
//! commutative curve algebra. The commutator `ab − ba` then vanishes, and its
//! first-order coefficient `(ab − ba)/(q − q^{−1})` at `q = 1` is the
//! quantity compared against the Goldman bracket.

use crate::curve_algebra::{AlgebraElement, CurveAlgebra};
use crate::error::{Error, Result};
use crate::laurent::{rat_frac, LaurentPoly};
use crate::normal_curves::ReducedMulticurve;
use crate::strand_oracle::Mode;

/// An element with coefficients in `ℤ[q^{±½}][v^{±}]`; the `q^{½}` exponent
/// lives in the last variable slot.
pub type QAlgebraElement = AlgebraElement;

/// Index of the `q^{½}` slot for an algebra over `alg`.
pub fn q_slot(alg: &CurveAlgebra) -> usize {
    alg.nvars()
}

/// Lifts a classical element to a quantum one with `q`-free coefficients.
pub fn lift(alg: &CurveAlgebra, a: &AlgebraElement) -> Result<QAlgebraElement> {
    check_nvars(a, alg.nvars())?;
    Ok(a.insert_slot(q_slot(alg)))
}

/// A basis curve as a quantum element.
pub fn qbasis(alg: &CurveAlgebra, curve: ReducedMulticurve) -> QAlgebraElement {
    AlgebraElement::basis(curve, alg.nvars() + 1)
}

/// The quantum product `a·b` with `a` stacked over `b`.
pub fn qmultiply(alg: &CurveAlgebra, a: &QAlgebraElement, b: &QAlgebraElement) -> Result<QAlgebraElement> {
    alg.product(Mode::Quantum, a, b)
}

/// Substitutes `q^{½} = 1`.
pub fn specialize_classical(alg: &CurveAlgebra, qa: &QAlgebraElement) -> Result<AlgebraElement> {
    check_nvars(qa, alg.nvars() + 1)?;
    Ok(qa.collapse_slot(q_slot(alg)))
}

/// The commutator `a·b − b·a`.
pub fn commutator(alg: &CurveAlgebra, a: &QAlgebraElement, b: &QAlgebraElement) -> Result<QAlgebraElement> {
    qmultiply(alg, a, b)?.sub(&qmultiply(alg, b, a)?)
}

/// First-order part of a commutator: `c/(q − q^{−1})` evaluated at `q = 1`.
///
/// With `t = q^{½}` the quotient's limit is `(dc/dt)(1)/4`, so each term
/// `t^k·m` contributes `k/4·m` to the classical coefficient `m`.
pub fn first_order(alg: &CurveAlgebra, c: &QAlgebraElement) -> Result<AlgebraElement> {
    check_nvars(c, alg.nvars() + 1)?;
    let n = alg.nvars();
    let mut out = AlgebraElement::zero(n);
    for (curve, coeff) in c.terms() {
        let mut p = LaurentPoly::zero(n);
        for (exps, value) in coeff.terms() {
            let k = exps[n];
            if k != 0 {
                p.add_term(exps[..n].to_vec(), value * rat_frac(k as i64, 4));
            }
        }
        out.add_term(curve.clone(), &p);
    }
    Ok(out)
}

fn check_nvars(a: &AlgebraElement, n: usize) -> Result<()> {
    if a.nvars() == n {
        Ok(())
    } else {
        Err(Error::Arity(format!("expected {} coefficient variables, found {}", n, a.nvars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;
    use crate::normal_curves::enumerate_reduced;
    use crate::triangulation::tetrahedron;

    fn tet() -> CurveAlgebra {
        CurveAlgebra::new(tetrahedron())
    }

    #[test]
    fn edge_square_specializes_to_classical_square() {
        let alg = tet();
        let e = qbasis(&alg, ReducedMulticurve::edge(alg.triangulation(), 0));
        let sq = qmultiply(&alg, &e, &e).unwrap();
        let cl = specialize_classical(&alg, &sq).unwrap();
        let direct = alg.multiply(&alg.edge(0), &alg.edge(0)).unwrap();
        assert_eq!(cl, direct);
    }

    #[test]
    fn specialization_matches_classical_and_commutator_vanishes() {
        let alg = tet();
        let curves = enumerate_reduced(alg.triangulation(), 1);
        for a in curves.iter().take(8) {
            for b in curves.iter().rev().take(8) {
                let (qa, qb) = (qbasis(&alg, a.clone()), qbasis(&alg, b.clone()));
                let q = qmultiply(&alg, &qa, &qb).unwrap();
                let c = alg.multiply_basis(a, b).unwrap();
                assert_eq!(specialize_classical(&alg, &q).unwrap(), c);
                let comm = commutator(&alg, &qa, &qb).unwrap();
                assert!(specialize_classical(&alg, &comm).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn lift_then_specialize_is_identity() {
        let alg = tet();
        let mut a = alg.edge(1);
        a = a.scale_rational(&rat(3)).add(&alg.vertex(2)).unwrap();
        assert_eq!(specialize_classical(&alg, &lift(&alg, &a).unwrap()).unwrap(), a);
    }
}
