//! Laurent expansions in the edge variables `λ_i`.
//!
//! The map `Φ` sends a curve to its lambda length. On a triangulation the
//! lambda lengths of the edges are coordinates, and every curve expands as a
//! Laurent polynomial in them. Expansion is recursive. A multicurve with
//! several components expands as the product of its components, since
//! disjoint curves with distinct ends multiply to their union. For a
//! connected `α` meeting the interior of some edge, pick the lowest-index
//! such edge `e_i` whose endpoints carry no end of `α` (or the lowest-index
//! intersected edge when every one does) and use `λ_i·Φ(α) = Φ(e_i·α)`.
//! Every curve in the product `e_i·α` must meet the edge interiors fewer
//! times than `α`; this is checked at every step. A curve meeting no edge
//! interior is a union of edges and expands as the corresponding monomial.
//!
//! A vertex variable expands as the horocycle length
//!
//! ```text
//! Φ(v) = Σ over corners (v, Δ) of λ_opp / (λ_in · λ_out)
//! ```
//!
//! which is what the puncture relation gives for two edges meeting at `v`.
//! Products `e_i·α` may carry `v^{−1}` from shared endpoints. The recursion
//! clears them by multiplying through by `Φ(v)` and dividing exactly at the
//! end. User input to [`Expander::phi_expand`] must have nonnegative vertex
//! exponents.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::curve_algebra::{AlgebraElement, CurveAlgebra};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Rational};
use crate::normal_curves::{corner_to_edge, ReducedMulticurve};
use crate::strand_oracle::StrandDiagram;

/// Laurent polynomial with one variable slot per edge.
pub type LambdaPoly = LaurentPoly;

/// Bound on the steps of one exact division during expansion.
const DIVISION_STEPS: usize = 1 << 16;

/// Expansion engine with a per-curve cache.
pub struct Expander<'a> {
    alg: &'a CurveAlgebra,
    cache: Mutex<HashMap<ReducedMulticurve, LambdaPoly>>,
}

/// Total number of interior intersections with the edges.
pub fn intersection_weight(alg: &CurveAlgebra, alpha: &ReducedMulticurve) -> i64 {
    corner_to_edge(alg.triangulation(), alpha.corners()).iter().sum()
}

impl<'a> Expander<'a> {
    /// A fresh expander over `alg`.
    pub fn new(alg: &'a CurveAlgebra) -> Self {
        Expander { alg, cache: Mutex::new(HashMap::new()) }
    }

    fn nedges(&self) -> usize {
        self.alg.triangulation().edge_count()
    }

    /// `λ_i` as a polynomial.
    pub fn lambda(&self, i: usize) -> LambdaPoly {
        LaurentPoly::var_pow(self.nedges(), i, 1)
    }

    /// `Φ(v)`: the horocycle length at vertex `v`.
    pub fn phi_vertex(&self, v: usize) -> LambdaPoly {
        let tri = self.alg.triangulation();
        let mut out = LaurentPoly::zero(self.nedges());
        for &c in tri.vertex_rotation(v) {
            let (t, i) = (c / 3, c % 3);
            let te = tri.triangle_edges(t);
            let mut exps = vec![0; self.nedges()];
            exps[te[i]] += 1;
            exps[te[(i + 1) % 3]] -= 1;
            exps[te[(i + 2) % 3]] -= 1;
            out.add_term(exps, Rational::one());
        }
        out
    }

    /// `Φ(α)` for a basis curve.
    pub fn phi_curve(&self, alpha: &ReducedMulticurve) -> Result<LambdaPoly> {
        if let Some(p) = self.cache.lock().expect("cache lock").get(alpha) {
            return Ok(p.clone());
        }
        let p = self.expand_curve(alpha)?;
        self.cache.lock().expect("cache lock").insert(alpha.clone(), p.clone());
        Ok(p)
    }

    fn expand_curve(&self, alpha: &ReducedMulticurve) -> Result<LambdaPoly> {
        let tri = self.alg.triangulation();
        let n = self.nedges();
        let m = corner_to_edge(tri, alpha.corners());
        if m.iter().any(|&x| x > 0) {
            let parts = StrandDiagram::from_reduced(tri, alpha)?.components(tri)?;
            if parts.len() > 1 {
                let mut out = LaurentPoly::one(n);
                for part in &parts {
                    out = out.mul(&self.phi_curve(part)?)?;
                }
                return Ok(out);
            }
        }
        let ends = alpha.end_vertices(tri);
        let free = |e: usize| {
            let (a, b) = tri.edge_ends(e);
            !ends.contains(&a) && !ends.contains(&b)
        };
        let pick = (0..n).find(|&e| m[e] > 0 && free(e)).or_else(|| m.iter().position(|&x| x > 0));
        let Some(i) = pick else {
            let edges = alpha.edge_components(tri);
            let mut rest = alpha.clone();
            let mut exps = vec![0; n];
            for &e in &edges {
                rest = rest.remove_component(&ReducedMulticurve::edge(tri, e));
                exps[e] += 1;
            }
            if !rest.is_empty() {
                return Err(Error::Invariant(format!(
                    "curve {alpha:?} meets no edge interior but is not a union of edges"
                )));
            }
            return Ok(LaurentPoly::monomial(exps, Rational::one()));
        };
        let weight: i64 = m.iter().sum();
        let product = self.alg.multiply_basis(&ReducedMulticurve::edge(tri, i), alpha)?;
        let nv = tri.vertex_count();
        // Largest power of each v^{-1} among the coefficients.
        let clear: Vec<i32> = (0..nv)
            .map(|v| product.terms().values().filter_map(|c| c.min_exponent(v)).min().unwrap_or(0).min(0).abs())
            .collect();
        let mut numerator = LaurentPoly::zero(n);
        for (gamma, coeff) in product.terms() {
            let w = intersection_weight(self.alg, gamma);
            if w >= weight {
                return Err(Error::Invariant(format!(
                    "expansion does not terminate: e{i}·{alpha:?} contains {gamma:?} with weight {w} ≥ {weight}"
                )));
            }
            let cleared = coeff.shift(&clear);
            numerator = numerator.add(&self.vertex_substitute(&cleared)?.mul(&self.phi_curve(gamma)?)?)?;
        }
        let mut denominator = self.lambda(i);
        for (v, &k) in clear.iter().enumerate() {
            denominator = denominator.mul(&self.phi_vertex(v).pow(k as u32))?;
        }
        if clear.iter().all(|&k| k == 0) {
            return Ok(numerator.shift(&unit(n, i, -1)));
        }
        numerator.div_exact(&denominator, DIVISION_STEPS)
    }

    /// Substitutes `v ↦ Φ(v)` in a coefficient with nonnegative exponents.
    fn vertex_substitute(&self, coeff: &LaurentPoly) -> Result<LambdaPoly> {
        let n = self.nedges();
        let mut out = LaurentPoly::zero(n);
        for (exps, c) in coeff.terms() {
            let mut term = LaurentPoly::constant(n, c.clone());
            for (v, &k) in exps.iter().enumerate() {
                if k < 0 {
                    return Err(Error::Unsupported(format!(
                        "negative exponent of v{v}; only nonnegative vertex exponents expand"
                    )));
                }
                if k > 0 {
                    term = term.mul(&self.phi_vertex(v).pow(k as u32))?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `Φ` of an element whose coefficients have nonnegative vertex exponents.
    pub fn phi_expand(&self, elem: &AlgebraElement) -> Result<LambdaPoly> {
        let nv = self.alg.nvars();
        if elem.nvars() != nv {
            return Err(Error::Arity(format!("expected {} coefficient variables, found {}", nv, elem.nvars())));
        }
        let mut out = LaurentPoly::zero(self.nedges());
        for (curve, coeff) in elem.terms() {
            out = out.add(&self.vertex_substitute(coeff)?.mul(&self.phi_curve(curve)?)?)?;
        }
        Ok(out)
    }

    /// Checks the localization round trip for `α` and returns its report.
    ///
    /// With `m` the vector of interior intersection numbers, `e^m·α` is
    /// computed twice: by repeated multiplication, and by reading
    /// `Φ(α)·λ^m` as a polynomial in the edges and multiplying out its
    /// monomials in the algebra.
    pub fn verify_localization_roundtrip(&self, alpha: &ReducedMulticurve) -> Result<RoundTrip> {
        let tri = self.alg.triangulation();
        let m = corner_to_edge(tri, alpha.corners());
        let mut direct = AlgebraElement::basis(alpha.clone(), self.alg.nvars());
        for (i, &k) in m.iter().enumerate() {
            for _ in 0..k {
                direct = self.alg.multiply(&self.alg.edge(i), &direct)?;
            }
        }
        let shift: Vec<i32> = m.iter().map(|&k| k as i32).collect();
        let poly = self.phi_curve(alpha)?.shift(&shift);
        let polynomial = poly.terms().all(|(e, _)| e.iter().all(|&x| x >= 0));
        let positive = poly.has_positive_integer_coefficients();
        let mut via_lambda = AlgebraElement::zero(self.alg.nvars());
        if polynomial {
            for (exps, c) in poly.terms() {
                let mut mono = AlgebraElement::one(tri, self.alg.nvars());
                for (i, &k) in exps.iter().enumerate() {
                    for _ in 0..k {
                        mono = self.alg.multiply(&mono, &self.alg.edge(i))?;
                    }
                }
                via_lambda = via_lambda.add(&mono.scale_rational(c))?;
            }
        }
        Ok(RoundTrip { m, polynomial, positive, agree: polynomial && via_lambda == direct, expansion: poly })
    }
}

/// Outcome of [`Expander::verify_localization_roundtrip`].
#[derive(Debug, Clone)]
pub struct RoundTrip {
    /// Interior intersection numbers of `α` with the edges.
    pub m: Vec<i64>,
    /// `Φ(α)·λ^m`.
    pub expansion: LambdaPoly,
    /// True when `Φ(α)·λ^m` has only nonnegative exponents.
    pub polynomial: bool,
    /// True when every coefficient of `Φ(α)·λ^m` is a positive integer.
    pub positive: bool,
    /// True when both computations of `e^m·α` agree.
    pub agree: bool,
}

fn unit(n: usize, i: usize, value: i32) -> Vec<i32> {
    let mut v = vec![0; n];
    v[i] = value;
    v
}

/// Exact evaluation at a positive assignment of the edge variables.
pub fn numeric_evaluate(p: &LambdaPoly, assignment: &[Rational]) -> Result<Rational> {
    if let Some(i) = assignment.iter().position(|x| !x.is_positive()) {
        return Err(Error::Unsupported(format!("lambda length of edge {i} must be positive")));
    }
    p.evaluate(assignment)
}

/// Rank over the rationals of a matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;
    use crate::triangulation::tetrahedron;

    #[test]
    fn edges_and_empty_expand_to_monomials() {
        let alg = CurveAlgebra::new(tetrahedron());
        let x = Expander::new(&alg);
        assert_eq!(x.phi_curve(&ReducedMulticurve::empty(alg.triangulation())).unwrap(), LaurentPoly::one(6));
        for i in 0..6 {
            assert_eq!(x.phi_curve(&ReducedMulticurve::edge(alg.triangulation(), i)).unwrap(), x.lambda(i));
        }
    }

    #[test]
    fn vertex_expansion_matches_puncture_relation() {
        // Two edges at v: e_a·e_b = v^{-1}(γ1 + γ2), so Φ(v)·λ_aλ_b = Φ(γ1) + Φ(γ2).
        let alg = CurveAlgebra::new(tetrahedron());
        let x = Expander::new(&alg);
        let prod = alg.multiply(&alg.edge(0), &alg.edge(1)).unwrap();
        let shifted = AlgebraElement::from_terms(
            4,
            prod.terms().iter().map(|(k, c)| (k.clone(), c.shift(&[0, 1, 0, 0]))).collect(),
        );
        let lhs = x.phi_vertex(1).mul(&x.lambda(0)).unwrap().mul(&x.lambda(1)).unwrap();
        assert_eq!(x.phi_expand(&shifted).unwrap(), lhs);
    }

    #[test]
    fn negative_vertex_exponent_is_rejected() {
        let alg = CurveAlgebra::new(tetrahedron());
        let x = Expander::new(&alg);
        let e = AlgebraElement::term(ReducedMulticurve::empty(alg.triangulation()), LaurentPoly::var_pow(4, 0, -1));
        assert!(matches!(x.phi_expand(&e), Err(Error::Unsupported(_))));
    }

    #[test]
    fn numeric_evaluation_rejects_nonpositive_lengths() {
        let p = LaurentPoly::var_pow(2, 0, 1);
        assert_eq!(numeric_evaluate(&p, &[rat(3), rat(1)]).unwrap(), rat(3));
        assert!(numeric_evaluate(&p, &[rat(0), rat(1)]).is_err());
    }

    #[test]
    fn rank_of_small_matrices() {
        let r = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        assert_eq!(rank(&[r(&[1, 2]), r(&[2, 4])]), 1);
        assert_eq!(rank(&[r(&[1, 2]), r(&[0, 1]), r(&[5, 5])]), 2);
    }
}
