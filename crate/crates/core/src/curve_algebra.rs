//! The curve algebra: sparse elements over the reduced-multicurve basis,
//! products, and the fast positive/negative resolutions of `e·α`.
//!
//! An [`AlgebraElement`] maps reduced multicurves to Laurent polynomials in
//! the vertex variables (and, for quantum elements, one extra trailing slot
//! holding the exponent of `q^{½}`). Products of basis curves are computed by
//! the strand oracle and cached per [`CurveAlgebra`].
//!
//! For an edge `e` with top vertex `v` and bottom vertex `w`, a reduced
//! multicurve `α` belongs to class `RMC^j` when it has arc ends at `j` of the
//! two endpoints of `e`. The positive and negative resolutions `Pα`, `Nα` of
//! `e·α` are obtained on a locally planar triangulation by local changes of
//! corner coordinates inside `Star(e)`: a *top change* around `v` and a
//! *bottom change* around `w`, each determined by the first corner (scanning
//! counterclockwise for `P`, clockwise for `N`, starting at `e`) whose value
//! is `0` (no end at that vertex) or `−½` (an end there). Both changes are
//! computed from `α` and added.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{parse_rational, rat, LaurentPoly, Rational};
use crate::normal_curves::{self, ReducedMulticurve};
use crate::strand_oracle::{self, Mode, MoveOrder, Smoothing, StrandDiagram, VertexJoin};
use crate::triangulation::{StarLabels, Triangulation};

/// Finite sum of reduced multicurves with Laurent polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    nvars: usize,
    terms: BTreeMap<ReducedMulticurve, LaurentPoly>,
}

impl AlgebraElement {
    /// The zero element with coefficients in `nvars` variables.
    pub fn zero(nvars: usize) -> Self {
        AlgebraElement { nvars, terms: BTreeMap::new() }
    }

    /// The unit, the empty multicurve with coefficient 1.
    pub fn one(tri: &Triangulation, nvars: usize) -> Self {
        Self::basis(ReducedMulticurve::empty(tri), nvars)
    }

    /// A single basis curve with coefficient 1.
    pub fn basis(curve: ReducedMulticurve, nvars: usize) -> Self {
        Self::term(curve, LaurentPoly::one(nvars))
    }

    /// A single basis curve with the given coefficient.
    pub fn term(curve: ReducedMulticurve, coeff: LaurentPoly) -> Self {
        let mut e = AlgebraElement::zero(coeff.nvars());
        e.add_term(curve, &coeff);
        e
    }

    /// Builds an element from a map, dropping zero coefficients.
    pub fn from_terms(nvars: usize, terms: BTreeMap<ReducedMulticurve, LaurentPoly>) -> Self {
        let mut e = AlgebraElement::zero(nvars);
        for (k, v) in terms {
            e.add_term(k, &v);
        }
        e
    }

    /// Number of coefficient variables.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The term map, ordered by corner vector.
    pub fn terms(&self) -> &BTreeMap<ReducedMulticurve, LaurentPoly> {
        &self.terms
    }

    /// Number of basis curves with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero element.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a basis curve.
    pub fn coeff(&self, curve: &ReducedMulticurve) -> LaurentPoly {
        self.terms.get(curve).cloned().unwrap_or_else(|| LaurentPoly::zero(self.nvars))
    }

    /// Adds `coeff · curve` in place.
    pub fn add_term(&mut self, curve: ReducedMulticurve, coeff: &LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&curve) {
            Some(c) => {
                let sum = c.add(coeff).expect("matching arity");
                if sum.is_zero() {
                    self.terms.remove(&curve);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(curve, coeff.clone());
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Arity(format!("expected {} coefficient variables, found {}", self.nvars, other.nvars)));
        }
        Ok(())
    }

    /// Sum of two elements.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        Ok(out)
    }

    /// Difference of two elements.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.scale_rational(&rat(-1))
    }

    /// Multiplies every coefficient by a Laurent polynomial.
    pub fn scale(&self, c: &LaurentPoly) -> Result<Self> {
        if c.nvars() != self.nvars {
            return Err(Error::Arity(format!("expected {} coefficient variables, found {}", self.nvars, c.nvars())));
        }
        let mut out = AlgebraElement::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.mul(c)?);
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a rational number.
    pub fn scale_rational(&self, c: &Rational) -> Self {
        let mut out = AlgebraElement::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.scale(c));
        }
        out
    }

    /// Sets the exponent slot `i` to zero in every coefficient (substituting 1
    /// for that variable) and removes the slot.
    pub fn collapse_slot(&self, i: usize) -> Self {
        let mut out = AlgebraElement::zero(self.nvars - 1);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.collapse_slot(i));
        }
        out
    }

    /// Inserts a zero exponent slot at position `i` in every coefficient.
    pub fn insert_slot(&self, i: usize) -> Self {
        let mut out = AlgebraElement::zero(self.nvars + 1);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.insert_slot(i));
        }
        out
    }

    /// True when every coefficient has integer coefficients.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(LaurentPoly::has_integer_coefficients)
    }

    /// JSON document: a list of `{"coeff": {"v_exponents", "value"}, "curve"}`
    /// entries, one per monomial, in canonical order.
    pub fn to_json(&self) -> Value {
        let mut out = Vec::new();
        for (k, v) in &self.terms {
            for (exps, c) in v.terms() {
                out.push(json!({
                    "coeff": {"v_exponents": exps, "value": c.to_string()},
                    "curve": k.to_json(),
                }));
            }
        }
        Value::Array(out)
    }

    /// Parses an element document, validating every curve as reduced.
    pub fn from_json(tri: &Triangulation, nvars: usize, v: &Value) -> Result<Self> {
        let list = v.as_array().ok_or_else(|| Error::Parse("element document must be a list".into()))?;
        let mut out = AlgebraElement::zero(nvars);
        for (i, entry) in list.iter().enumerate() {
            let curve = entry.get("curve").ok_or_else(|| Error::Parse(format!("entry {i}: missing \"curve\"")))?;
            let w = normal_curves::parse_curve_doc(curve)?;
            let rm = normal_curves::validate_reduced(tri, &w)?;
            let coeff = match entry.get("coeff") {
                None => LaurentPoly::one(nvars),
                Some(c) => {
                    let exps: Vec<i32> = match c.get("v_exponents") {
                        None => vec![0; nvars],
                        Some(e) => serde_json::from_value(e.clone())?,
                    };
                    if exps.len() != nvars {
                        return Err(Error::Arity(format!(
                            "expected {} coefficient variables, found {}",
                            nvars,
                            exps.len()
                        )));
                    }
                    let value = match c.get("value") {
                        None => rat(1),
                        Some(Value::String(s)) => parse_rational(s)?,
                        Some(Value::Number(n)) => parse_rational(&n.to_string())?,
                        Some(_) => return Err(Error::Parse(format!("entry {i}: bad coefficient value"))),
                    };
                    LaurentPoly::monomial(exps, value)
                }
            };
            out.add_term(rm, &coeff);
        }
        Ok(out)
    }

    /// Aligned text rendering, one term per line.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0\n".to_string();
        }
        let rows: Vec<(String, String)> =
            self.terms.iter().map(|(k, v)| (format!("({v})"), normal_curves::format_corners(k.corners()))).collect();
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        rows.iter().map(|(c, k)| format!("{c:<width$}  {k}\n")).collect()
    }
}

type BasisProduct = Arc<BTreeMap<ReducedMulticurve, LaurentPoly>>;

/// A triangulation together with a cache of basis products.
pub struct CurveAlgebra {
    tri: Triangulation,
    order: MoveOrder,
    cache: Mutex<HashMap<(Mode, ReducedMulticurve, ReducedMulticurve), BasisProduct>>,
}

impl CurveAlgebra {
    /// A new algebra over `tri`.
    pub fn new(tri: Triangulation) -> Self {
        Self::with_order(tri, MoveOrder::First)
    }

    /// A new algebra whose normalizations use the given move order.
    pub fn with_order(tri: Triangulation, order: MoveOrder) -> Self {
        CurveAlgebra { tri, order, cache: Mutex::new(HashMap::new()) }
    }

    /// The underlying triangulation.
    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    /// Move order used when normalizing diagrams.
    pub fn move_order(&self) -> MoveOrder {
        self.order
    }

    /// Number of classical coefficient variables (one per vertex).
    pub fn nvars(&self) -> usize {
        self.tri.vertex_count()
    }

    /// Product of two basis curves, `first` drawn above `second`.
    pub fn basis_product(
        &self,
        mode: Mode,
        first: &ReducedMulticurve,
        second: &ReducedMulticurve,
    ) -> Result<BasisProduct> {
        let key = (mode, first.clone(), second.clone());
        if let Some(p) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        let p = Arc::new(if first.is_empty() || second.is_empty() {
            let mut m = BTreeMap::new();
            m.insert(first.disjoint_union(second), LaurentPoly::one(mode.nvars(&self.tri)));
            m
        } else {
            strand_oracle::product(&self.tri, first, second, mode, self.order)?
        });
        self.cache.lock().expect("cache lock").insert(key, p.clone());
        Ok(p)
    }

    /// Product in the given mode; coefficients must have `mode.nvars` slots.
    pub fn product(&self, mode: Mode, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        let n = mode.nvars(&self.tri);
        if a.nvars != n {
            return Err(Error::Arity(format!("expected {} coefficient variables, found {}", n, a.nvars)));
        }
        if b.nvars != n {
            return Err(Error::Arity(format!("expected {} coefficient variables, found {}", n, b.nvars)));
        }
        let pairs: Vec<(&ReducedMulticurve, &ReducedMulticurve)> =
            a.terms.keys().flat_map(|x| b.terms.keys().map(move |y| (x, y))).collect();
        let products: Vec<BasisProduct> =
            pairs.par_iter().map(|(x, y)| self.basis_product(mode, x, y)).collect::<Result<_>>()?;
        let mut out = AlgebraElement::zero(n);
        for ((x, y), p) in pairs.iter().zip(products) {
            let c = a.terms[*x].mul(&b.terms[*y])?;
            for (k, v) in p.iter() {
                out.add_term(k.clone(), &v.mul(&c)?);
            }
        }
        Ok(out)
    }

    /// Classical product.
    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.product(Mode::Classical, a, b)
    }

    /// Classical product of two basis curves.
    pub fn multiply_basis(&self, a: &ReducedMulticurve, b: &ReducedMulticurve) -> Result<AlgebraElement> {
        let p = self.basis_product(Mode::Classical, a, b)?;
        Ok(AlgebraElement::from_terms(self.nvars(), (*p).clone()))
    }

    /// The edge class `e` as an element.
    pub fn edge(&self, e: usize) -> AlgebraElement {
        AlgebraElement::basis(ReducedMulticurve::edge(&self.tri, e), self.nvars())
    }

    /// The vertex variable `v_i` as an element.
    pub fn vertex(&self, v: usize) -> AlgebraElement {
        AlgebraElement::term(ReducedMulticurve::empty(&self.tri), LaurentPoly::var_pow(self.nvars(), v, 1))
    }
}

/// Endpoint of the fixed edge shared with a curve in class `RMC¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    /// The top vertex `v`.
    Top,
    /// The bottom vertex `w`.
    Bottom,
}

/// Number of endpoints of `e` at which `α` has arc ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResolutionClass {
    /// Shared endpoint count, 0, 1 or 2.
    pub j: u8,
    /// Which endpoint is shared when `j = 1`.
    pub endpoint: Option<Endpoint>,
}

impl std::fmt::Display for ResolutionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.endpoint {
            Some(Endpoint::Top) => write!(f, "RMC1_v"),
            Some(Endpoint::Bottom) => write!(f, "RMC1_w"),
            None => write!(f, "RMC{}", self.j),
        }
    }
}

/// Class of `α` with respect to edge `e`.
pub fn rmc_class(tri: &Triangulation, e: usize, alpha: &ReducedMulticurve) -> ResolutionClass {
    let (top, bottom) = tri.edge_ends(e);
    let at_top = alpha.has_end_at(tri, top);
    let at_bottom = alpha.has_end_at(tri, bottom);
    match (at_top, at_bottom) {
        (false, false) => ResolutionClass { j: 0, endpoint: None },
        (true, true) => ResolutionClass { j: 2, endpoint: None },
        (true, false) => ResolutionClass { j: 1, endpoint: Some(Endpoint::Top) },
        (false, true) => ResolutionClass { j: 1, endpoint: Some(Endpoint::Bottom) },
    }
}

/// Sign of a resolution of `e·α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// Every crossing resolved counterclockwise from `e` to `α`.
    Positive,
    /// Every crossing resolved clockwise from `e` to `α`.
    Negative,
}

impl Sign {
    /// Smoothing of interior crossings of `e` (upper) with `α` (lower).
    pub fn smoothing(self) -> Smoothing {
        match self {
            Sign::Positive => Smoothing::B,
            Sign::Negative => Smoothing::A,
        }
    }

    /// Join side at a shared endpoint, starting from the end of `e`.
    pub fn join(self) -> VertexJoin {
        match self {
            Sign::Positive => VertexJoin::Backward,
            Sign::Negative => VertexJoin::Forward,
        }
    }
}

/// A coefficient times a basis curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolved {
    /// Coefficient in the classical vertex ring.
    pub coefficient: LaurentPoly,
    /// The basis curve.
    pub curve: ReducedMulticurve,
}

/// Index of the first corner in `seq` whose value is `target`.
fn first_with(w: &[i32], seq: impl Iterator<Item = usize>, corners: &[usize], target: i32) -> Result<usize> {
    for i in seq {
        if w[corners[i]] == target {
            return Ok(i);
        }
    }
    Err(Error::Invariant(format!(
        "no corner with value {} around a vertex of the edge",
        normal_curves::format_half(target)
    )))
}

/// Adds the change around one vertex to `delta`.
///
/// `corners`, `left`, `right` are the cycle at the vertex with its opposite
/// corners; `ends` tells whether `α` ends at the vertex; `sign` selects the
/// scan direction.
fn vertex_change(
    w: &[i32],
    delta: &mut [i32],
    corners: &[usize],
    left: &[usize],
    right: &[usize],
    ends: bool,
    sign: Sign,
) -> Result<usize> {
    let s = corners.len() - 1;
    let target = if ends { -1 } else { 0 };
    let m = match sign {
        Sign::Positive => first_with(w, 0..=s, corners, target)?,
        Sign::Negative => first_with(w, (0..=s).rev(), corners, target)?,
    };
    let unit = if ends { 2 } else { -2 };
    for i in 0..=s {
        let passed = match sign {
            Sign::Positive => {
                if ends {
                    i > m
                } else {
                    i < m
                }
            }
            Sign::Negative => {
                if ends {
                    i < m
                } else {
                    i > m
                }
            }
        };
        if passed {
            delta[corners[i]] += unit;
        }
    }
    delta[corners[m]] += unit / 2;
    let (dr, dl) = match (sign, ends) {
        (Sign::Positive, false) => (-1, 1),
        (Sign::Negative, false) => (1, -1),
        (Sign::Positive, true) => (-1, 1),
        (Sign::Negative, true) => (1, -1),
    };
    delta[right[m]] += dr;
    delta[left[m]] += dl;
    Ok(m)
}

/// Index `m` of the first corner used by the top change and `n` by the
/// bottom change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChangeIndices {
    /// Top index into `a`.
    pub m: usize,
    /// Bottom index into `b`.
    pub n: usize,
}

fn fast_resolution(
    tri: &Triangulation,
    labels: &StarLabels,
    alpha: &ReducedMulticurve,
    sign: Sign,
) -> Result<(Resolved, ChangeIndices)> {
    let w = alpha.corners();
    let v = tri.vertex_count();
    let (top, bottom) = (labels.top, labels.bottom);
    let mut coefficient = LaurentPoly::one(v);
    let top_end = alpha.has_end_at(tri, top);
    let bottom_end = alpha.has_end_at(tri, bottom);
    if top_end {
        coefficient = coefficient.shift(&unit_vec(v, top, -1));
    }
    if bottom_end {
        coefficient = coefficient.shift(&unit_vec(v, bottom, -1));
    }
    if sign == Sign::Negative && alpha.contains_edge(tri, labels.edge) {
        let rest = alpha.remove_component(&ReducedMulticurve::edge(tri, labels.edge));
        return Ok((Resolved { coefficient: coefficient.scale(&rat(-2)), curve: rest }, ChangeIndices { m: 0, n: 0 }));
    }
    let mut delta = vec![0; w.len()];
    let m = vertex_change(w, &mut delta, &labels.a, &labels.a_left, &labels.a_right, top_end, sign)?;
    let n = vertex_change(w, &mut delta, &labels.b, &labels.b_left, &labels.b_right, bottom_end, sign)?;
    let out: Vec<i32> = w.iter().zip(&delta).map(|(x, d)| x + d).collect();
    let curve = normal_curves::validate_reduced(tri, &out)
        .map_err(|viol| Error::Invariant(format!("fast resolution produced an invalid vector ({viol})")))?;
    Ok((Resolved { coefficient, curve }, ChangeIndices { m, n }))
}

fn unit_vec(n: usize, i: usize, value: i32) -> Vec<i32> {
    let mut v = vec![0; n];
    v[i] = value;
    v
}

/// Fast positive resolution `Pα` with its coefficient (locally planar
/// triangulations), or the oracle's all-positive state otherwise.
pub fn positive_resolution(tri: &Triangulation, e: usize, alpha: &ReducedMulticurve) -> Result<Resolved> {
    resolution(tri, e, alpha, Sign::Positive)
}

/// Fast negative resolution `Nα` with its coefficient (locally planar
/// triangulations), or the oracle's all-negative state otherwise.
pub fn negative_resolution(tri: &Triangulation, e: usize, alpha: &ReducedMulticurve) -> Result<Resolved> {
    resolution(tri, e, alpha, Sign::Negative)
}

/// Fast resolution of the given sign, falling back to the oracle when the
/// triangulation is not locally planar.
pub fn resolution(tri: &Triangulation, e: usize, alpha: &ReducedMulticurve, sign: Sign) -> Result<Resolved> {
    if !tri.is_locally_planar() {
        return oracle_resolution(tri, e, alpha, sign);
    }
    fast_resolution_with_indices(tri, e, alpha, sign).map(|r| r.0)
}

/// Fast resolution together with the scan indices `m`, `n` it used.
pub fn fast_resolution_with_indices(
    tri: &Triangulation,
    e: usize,
    alpha: &ReducedMulticurve,
    sign: Sign,
) -> Result<(Resolved, ChangeIndices)> {
    if !tri.is_locally_planar() {
        return Err(Error::NotLocallyPlanar("the fast resolution path needs a locally planar triangulation".into()));
    }
    let labels = tri.star_labels(e)?;
    fast_resolution(tri, &labels, alpha, sign)
}

/// The resolution of `e·α` read off the explicit diagram: every interior
/// crossing and every shared endpoint resolved with the given sign.
pub fn oracle_resolution(tri: &Triangulation, e: usize, alpha: &ReducedMulticurve, sign: Sign) -> Result<Resolved> {
    let d = StrandDiagram::superimpose(
        tri,
        &StrandDiagram::from_reduced(tri, &ReducedMulticurve::edge(tri, e))?,
        &StrandDiagram::from_reduced(tri, alpha)?,
    )?;
    // When `e` is a component of `α` its two copies run parallel: the
    // positive state joins them around both punctures and the negative
    // state closes them off on the short side at both ends.
    let parallel = alpha.contains_edge(tri, e);
    let joins: Vec<(usize, VertexJoin)> = d
        .meetings(tri)?
        .into_iter()
        .map(|(v, short)| match (parallel, short) {
            (true, Some(s)) if sign == Sign::Negative => (v, s),
            (true, Some(s)) => (v, s.opposite()),
            _ => (v, sign.join()),
        })
        .collect();
    let st = d.resolve_state_with(tri, Mode::Classical, sign.smoothing(), &joins)?;
    Ok(Resolved { coefficient: st.coefficient, curve: st.curve })
}

/// Distinct results of the states of `e·α` that have no turnback, read off
/// the explicit diagram.
pub fn oracle_turnback_free(
    tri: &Triangulation,
    e: usize,
    alpha: &ReducedMulticurve,
) -> Result<BTreeSet<(ReducedMulticurve, LaurentPoly)>> {
    let d = StrandDiagram::superimpose(
        tri,
        &StrandDiagram::from_reduced(tri, &ReducedMulticurve::edge(tri, e))?,
        &StrandDiagram::from_reduced(tri, alpha)?,
    )?;
    Ok(d.all_states(tri, Mode::Classical)?
        .into_iter()
        .filter(|s| s.turnback_free)
        .map(|s| (s.curve, s.coefficient))
        .collect())
}

/// Edge degree `½(α(a₀) + α(a_s) + α(b₀) + α(b_t))`, checking that it also
/// equals `α(a₀) + α(b_t)` and `α(a_s) + α(b₀)`.
pub fn edge_degree(tri: &Triangulation, e: usize, alpha: &ReducedMulticurve) -> Result<i32> {
    let l = tri.star_labels(e)?;
    edge_degree_with(&l, alpha)
}

/// Edge degree with precomputed star labels.
pub fn edge_degree_with(l: &StarLabels, alpha: &ReducedMulticurve) -> Result<i32> {
    let w = alpha.corners();
    let (a0, as_, b0, bt) = (w[l.a[0]], w[l.a[l.s()]], w[l.b[0]], w[l.b[l.t()]]);
    let sum = a0 + as_ + b0 + bt;
    if sum % 4 != 0 || 2 * (a0 + bt) != sum || 2 * (as_ + b0) != sum {
        return Err(Error::Invariant(format!("edge degree identities fail for {}", normal_curves::format_corners(w))));
    }
    Ok(sum / 4)
}

/// `π(α) = (α(a_s), α(b_t))` as doubled values.
pub fn pi_projection(tri: &Triangulation, e: usize, alpha: &ReducedMulticurve) -> Result<(i32, i32)> {
    let l = tri.star_labels(e)?;
    let w = alpha.corners();
    Ok((w[l.a[l.s()]], w[l.b[l.t()]]))
}

/// Restriction of `elem` to its basis curves of maximal edge degree.
pub fn leading_terms(tri: &Triangulation, e: usize, elem: &AlgebraElement) -> Result<AlgebraElement> {
    if elem.is_zero() {
        return Err(Error::Invariant("the zero element has no leading terms".into()));
    }
    let l = tri.star_labels(e)?;
    let degs: Vec<(i32, &ReducedMulticurve)> =
        elem.terms.keys().map(|k| edge_degree_with(&l, k).map(|d| (d, k))).collect::<Result<_>>()?;
    let max = degs.iter().map(|d| d.0).max().unwrap_or(0);
    let mut out = AlgebraElement::zero(elem.nvars);
    for (d, k) in degs {
        if d == max {
            out.add_term(k.clone(), &elem.terms[k]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::tetrahedron;

    #[test]
    fn unit_and_disjoint_products() {
        let tri = tetrahedron();
        let alg = CurveAlgebra::new(tri.clone());
        let one = AlgebraElement::one(&tri, 4);
        let e0 = alg.edge(0);
        assert_eq!(alg.multiply(&one, &e0).unwrap(), e0);
        // Edges 0 and 3 are opposite on the tetrahedron.
        let p = alg.multiply(&e0, &alg.edge(3)).unwrap();
        assert_eq!(p.len(), 1);
        let k = p.terms().keys().next().unwrap();
        assert_eq!(k, &ReducedMulticurve::edge(&tri, 0).disjoint_union(&ReducedMulticurve::edge(&tri, 3)));
    }

    #[test]
    fn edge_squared_contains_minus_two_empty_state() {
        let tri = tetrahedron();
        let n = negative_resolution(&tri, 0, &ReducedMulticurve::edge(&tri, 0)).unwrap();
        assert!(n.curve.is_empty());
        let (top, bottom) = tri.edge_ends(0);
        let mut exps = vec![0; 4];
        exps[top] = -1;
        exps[bottom] = -1;
        assert_eq!(n.coefficient, LaurentPoly::monomial(exps, rat(-2)));
    }

    #[test]
    fn degree_of_edge_is_minus_one() {
        let tri = tetrahedron();
        assert_eq!(edge_degree(&tri, 0, &ReducedMulticurve::edge(&tri, 0)).unwrap(), -1);
        assert_eq!(edge_degree(&tri, 0, &ReducedMulticurve::empty(&tri)).unwrap(), 0);
        assert_eq!(pi_projection(&tri, 0, &ReducedMulticurve::edge(&tri, 0)).unwrap(), (-1, -1));
    }

    #[test]
    fn element_arithmetic() {
        let tri = tetrahedron();
        let alg = CurveAlgebra::new(tri);
        let a = alg.edge(1).add(&alg.edge(2)).unwrap();
        assert!(a.add(&a.neg()).unwrap().is_zero());
        assert_eq!(a.add(&AlgebraElement::zero(4)).unwrap(), a);
        let json = a.to_json();
        assert_eq!(AlgebraElement::from_json(alg.triangulation(), 4, &json).unwrap(), a);
    }
}
