//! The generalized Goldman bracket on the curve algebra.
//!
//! For reduced multicurves `α`, `β` drawn with `α` above `β`,
//!
//! ```text
//! {α, β} = ½ Σ_p ((αβ)_p⁺ − (αβ)_p⁻) + ¼ Σ_v v^{−1} ((αβ)_v⁺ − (αβ)_v⁻)
//! ```
//!
//! where `p` runs over interior crossings and `v` over punctures where an end
//! of `α` meets an end of `β`. The term `(αβ)_x^±` resolves the single point
//! `x` positively or negatively and expands every other crossing and meeting
//! in full. Signs follow the positive and negative resolutions: `+` is
//! [`Sign::Positive`] (smoothing `B` at crossings, join `Backward` at
//! punctures, both relative to the upper strand). The join weight `v^{−1}`
//! supplied by the oracle is the `1/v` of the formula.
//!
//! Vertex variables are central for the bracket (`{v, β} = 0`), so the
//! bracket extends bilinearly over Laurent coefficients.

use rayon::prelude::*;

use crate::curve_algebra::{AlgebraElement, CurveAlgebra, Sign};
use crate::error::{Error, Result};
use crate::laurent::{rat_frac, LaurentPoly};
use crate::normal_curves::ReducedMulticurve;
use crate::strand_oracle::{Mode, Pin, StrandDiagram};

/// Bracket of two basis curves.
pub fn bracket_basis(
    alg: &CurveAlgebra,
    alpha: &ReducedMulticurve,
    beta: &ReducedMulticurve,
) -> Result<AlgebraElement> {
    let tri = alg.triangulation();
    let n = alg.nvars();
    let mut out = AlgebraElement::zero(n);
    if alpha.is_empty() || beta.is_empty() {
        return Ok(out);
    }
    let d = StrandDiagram::superimpose(
        tri,
        &StrandDiagram::from_reduced(tri, alpha)?,
        &StrandDiagram::from_reduced(tri, beta)?,
    )?;
    let order = alg.move_order();
    let signed = |pos: Pin, neg: Pin| -> Result<AlgebraElement> {
        let p = AlgebraElement::from_terms(n, d.resolve_pinned(tri, Mode::Classical, order, Some(pos))?);
        let m = AlgebraElement::from_terms(n, d.resolve_pinned(tri, Mode::Classical, order, Some(neg))?);
        p.sub(&m)
    };
    for k in 0..d.crossings(tri).len() {
        let t = signed(Pin::Crossing(k, Sign::Positive.smoothing()), Pin::Crossing(k, Sign::Negative.smoothing()))?;
        out = out.add(&t.scale_rational(&rat_frac(1, 2)))?;
    }
    for (v, _) in d.meetings(tri)? {
        let t = signed(Pin::Join(v, Sign::Positive.join()), Pin::Join(v, Sign::Negative.join()))?;
        out = out.add(&t.scale_rational(&rat_frac(1, 4)))?;
    }
    Ok(out)
}

/// Bracket of two classical elements, extended bilinearly from basis pairs.
pub fn bracket(alg: &CurveAlgebra, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    let n = alg.nvars();
    for x in [a, b] {
        if x.nvars() != n {
            return Err(Error::Arity(format!("expected {} coefficient variables, found {}", n, x.nvars())));
        }
    }
    let pairs: Vec<(&ReducedMulticurve, &LaurentPoly, &ReducedMulticurve, &LaurentPoly)> =
        a.terms().iter().flat_map(|(x, cx)| b.terms().iter().map(move |(y, cy)| (x, cx, y, cy))).collect();
    let parts: Vec<AlgebraElement> =
        pairs.par_iter().map(|&(x, cx, y, cy)| bracket_basis(alg, x, y)?.scale(&cx.mul(cy)?)).collect::<Result<_>>()?;
    parts.iter().try_fold(AlgebraElement::zero(n), |acc, p| acc.add(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_curves::enumerate_reduced;
    use crate::triangulation::tetrahedron;

    #[test]
    fn vertex_is_central() {
        let alg = CurveAlgebra::new(tetrahedron());
        let v = alg.vertex(1);
        let e = alg.edge(2);
        assert!(bracket(&alg, &v, &e).unwrap().is_zero());
        assert!(bracket(&alg, &e, &v).unwrap().is_zero());
    }

    #[test]
    fn disjoint_curves_commute() {
        let alg = CurveAlgebra::new(tetrahedron());
        // Edges 0 and 3 are opposite edges of the tetrahedron.
        assert!(bracket(&alg, &alg.edge(0), &alg.edge(3)).unwrap().is_zero());
    }

    #[test]
    fn antisymmetric_on_small_curves() {
        let alg = CurveAlgebra::new(tetrahedron());
        let curves = enumerate_reduced(alg.triangulation(), 1);
        for a in curves.iter().take(10) {
            for b in curves.iter().take(10) {
                let ab = bracket_basis(&alg, a, b).unwrap();
                let ba = bracket_basis(&alg, b, a).unwrap();
                assert_eq!(ab, ba.neg(), "{a:?} {b:?}");
            }
        }
    }
}
