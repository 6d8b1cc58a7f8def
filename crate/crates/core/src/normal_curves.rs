//! Generalized corner coordinates of normal multicurves.
//!
//! A multicurve in normal position meets each triangle in finitely many
//! pieces: *corner arcs* joining two edges, at most one arc from a vertex to
//! the opposite edge, or an edge of the triangulation itself. Its corner
//! coordinates record, for every corner, how many corner arcs cut it, shifted
//! by `±½` in triangles that contain an arc end:
//!
//! | triangle type | meaning                           | corner values          |
//! |---------------|-----------------------------------|------------------------|
//! | I             | only corner arcs                  | `(a, b, c)`            |
//! | II            | one arc from a vertex to an edge  | `(−½, a+½, b+½)`       |
//! | III           | one edge of the triangle          | `(−½, −½, k+½)`        |
//!
//! Values are stored doubled, so a [`CornerVector`] is a vector of integers
//! indexed by corner (`3·triangle + position`). The conditions checked by
//! [`validate_normal`] and [`validate_reduced`] are:
//!
//! 1. every value is at least `−½`;
//! 2. in each triangle the values are all integers or all strict half-integers;
//! 3. in each triangle at least one value is nonnegative;
//! 4. the two corners adjacent to an edge have the same sum on both sides;
//! 5. every vertex has a corner with value at most `0`;
//! 6. every vertex carries at most one arc end;
//! 7. every half-integral triangle has a value `−½`.
//!
//! Conditions (1)-(4) together with (7) characterize normal multicurves: a
//! half-integral triangle such as `(½, ½, ½)` passes (1)-(4) but has no arc
//! end to account for its half-integers. Condition (5) excludes puncture
//! loops, and (6) excludes two arc ends meeting at one puncture, which the
//! puncture relation rewrites into curves with fewer ends.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

/// Doubled corner values, indexed by corner.
pub type CornerVector = Vec<i32>;

/// Triangle type of a normal multicurve in one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriangleType {
    /// Only corner arcs.
    I,
    /// One arc from the vertex of the given corner position to the opposite edge.
    II {
        /// Position (0..3) of the corner holding the arc end.
        corner: usize,
    },
    /// The edge in the given position is a component of the multicurve.
    III {
        /// Position (0..3) of the edge component inside the triangle.
        edge: usize,
    },
}

/// First violated coordinate condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Condition number (1..=6).
    pub condition: u8,
    /// Human-readable location of the violation.
    pub location: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition ({}) violated at {}", self.condition, self.location)
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Coordinates(v.to_string())
    }
}

/// A validated reduced multicurve, keyed by its doubled corner coordinates.
///
/// Equality, ordering and hashing are those of the corner vector, which is
/// injective on isotopy classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedMulticurve {
    corners: Vec<i32>,
}

impl fmt::Debug for ReducedMulticurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_corners(&self.corners))
    }
}

impl ReducedMulticurve {
    /// Wraps a corner vector without validation.
    ///
    /// Callers must guarantee conditions (1)-(6); use [`validate_reduced`]
    /// for untrusted input.
    pub fn from_corners_unchecked(corners: Vec<i32>) -> Self {
        ReducedMulticurve { corners }
    }

    /// The empty multicurve.
    pub fn empty(tri: &Triangulation) -> Self {
        ReducedMulticurve { corners: vec![0; tri.corner_count()] }
    }

    /// The multicurve consisting of edge `e` alone.
    pub fn edge(tri: &Triangulation, e: usize) -> Self {
        ReducedMulticurve { corners: edge_vector(tri, e) }
    }

    /// Doubled corner values.
    pub fn corners(&self) -> &[i32] {
        &self.corners
    }

    /// Doubled value at corner `c`.
    pub fn at(&self, c: usize) -> i32 {
        self.corners[c]
    }

    /// True for the empty multicurve.
    pub fn is_empty(&self) -> bool {
        self.corners.iter().all(|&x| x == 0)
    }

    /// Vertices carrying an arc end (each at most once).
    pub fn end_vertices(&self, tri: &Triangulation) -> Vec<usize> {
        let counts = end_counts(tri, &self.corners);
        (0..tri.vertex_count()).filter(|&v| counts[v] > 0).collect()
    }

    /// True when the multicurve has an arc end at vertex `v`.
    pub fn has_end_at(&self, tri: &Triangulation, v: usize) -> bool {
        tri.vertex_rotation(v).iter().any(|&c| self.corners[c] == -1)
    }

    /// True when edge `e` is a component.
    pub fn contains_edge(&self, tri: &Triangulation, e: usize) -> bool {
        let [(t, i), _] = tri.edge_slots(e);
        triangle_type(tri, &self.corners, t) == TriangleType::III { edge: i }
    }

    /// Edge components of the multicurve.
    pub fn edge_components(&self, tri: &Triangulation) -> Vec<usize> {
        (0..tri.edge_count()).filter(|&e| self.contains_edge(tri, e)).collect()
    }

    /// Corner-wise sum of doubled values (disjoint union of disjoint curves).
    pub fn disjoint_union(&self, other: &ReducedMulticurve) -> ReducedMulticurve {
        ReducedMulticurve { corners: self.corners.iter().zip(&other.corners).map(|(a, b)| a + b).collect() }
    }

    /// Corner-wise difference of doubled values (removes a component).
    pub fn remove_component(&self, component: &ReducedMulticurve) -> ReducedMulticurve {
        ReducedMulticurve { corners: self.corners.iter().zip(&component.corners).map(|(a, b)| a - b).collect() }
    }

    /// JSON curve document `{"corners": [...]}` with doubled values.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "corners": self.corners })
    }
}

/// Parses a curve document `{"corners": [d0, d1, ...]}` (doubled values).
pub fn parse_curve_doc(v: &serde_json::Value) -> Result<CornerVector> {
    let arr = v
        .get("corners")
        .and_then(|c| c.as_array())
        .ok_or_else(|| Error::Parse("curve document needs a \"corners\" array".into()))?;
    arr.iter()
        .map(|x| {
            x.as_i64().map(|n| n as i32).ok_or_else(|| Error::Parse(format!("corner value {x} is not an integer")))
        })
        .collect()
}

/// Formats doubled values as half-integers, e.g. `[-1/2, 0, 1/2]`.
pub fn format_corners(w: &[i32]) -> String {
    let parts: Vec<String> = w.iter().map(|&d| format_half(d)).collect();
    format!("[{}]", parts.join(", "))
}

/// Formats one doubled value as a half-integer.
pub fn format_half(d: i32) -> String {
    if d % 2 == 0 {
        (d / 2).to_string()
    } else {
        format!("{d}/2")
    }
}

/// Parses a half-integer bound such as `"1/2"`, `"0.5"` or `"1"` into its
/// doubled value.
pub fn parse_half(s: &str) -> Result<i32> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not a nonnegative half-integer"));
    let doubled = if let Some((n, d)) = s.split_once('/') {
        let n: i32 = n.trim().parse().map_err(|_| bad())?;
        match d.trim() {
            "1" => 2 * n,
            "2" => n,
            _ => return Err(bad()),
        }
    } else if let Ok(n) = s.parse::<i32>() {
        2 * n
    } else {
        let x: f64 = s.parse().map_err(|_| bad())?;
        let d = (2.0 * x).round();
        if (2.0 * x - d).abs() > 1e-9 {
            return Err(bad());
        }
        d as i32
    };
    if doubled < 0 {
        return Err(bad());
    }
    Ok(doubled)
}

/// Doubled corner vector of the single edge `e`.
pub fn edge_vector(tri: &Triangulation, e: usize) -> CornerVector {
    let mut w = vec![0; tri.corner_count()];
    for (t, i) in tri.edge_slots(e) {
        w[3 * t + i] += 1;
        w[3 * t + (i + 1) % 3] -= 1;
        w[3 * t + (i + 2) % 3] -= 1;
    }
    w
}

/// Type of the triangle `t` for corner vector `w`, assuming conditions (1)-(3).
pub fn triangle_type(tri: &Triangulation, w: &[i32], t: usize) -> TriangleType {
    let _ = tri;
    let x = [w[3 * t], w[3 * t + 1], w[3 * t + 2]];
    let neg: Vec<usize> = (0..3).filter(|&i| x[i] == -1).collect();
    match neg.len() {
        0 => TriangleType::I,
        1 => TriangleType::II { corner: neg[0] },
        _ => {
            let other = (0..3).find(|i| !neg.contains(i)).unwrap_or(0);
            TriangleType::III { edge: other }
        }
    }
}

/// Checks conditions (1)-(4) and (7).
pub fn validate_normal(tri: &Triangulation, w: &[i32]) -> std::result::Result<(), Violation> {
    if w.len() != tri.corner_count() {
        return Err(Violation {
            condition: 0,
            location: format!("vector has {} entries, expected {}", w.len(), tri.corner_count()),
        });
    }
    for (c, &x) in w.iter().enumerate() {
        if x < -1 {
            return Err(Violation { condition: 1, location: format!("corner {c}") });
        }
    }
    for t in 0..tri.triangle_count() {
        let x = [w[3 * t], w[3 * t + 1], w[3 * t + 2]];
        let parities: Vec<i32> = x.iter().map(|v| v.rem_euclid(2)).collect();
        if !(parities.iter().all(|&p| p == 0) || parities.iter().all(|&p| p == 1)) {
            return Err(Violation { condition: 2, location: format!("triangle {t}") });
        }
        if x.iter().all(|&v| v < 0) {
            return Err(Violation { condition: 3, location: format!("triangle {t}") });
        }
        if parities[0] == 1 && !x.contains(&-1) {
            return Err(Violation { condition: 7, location: format!("triangle {t}") });
        }
    }
    for e in 0..tri.edge_count() {
        let sums: Vec<i32> =
            tri.edge_slots(e).iter().map(|&(t, i)| w[3 * t + (i + 1) % 3] + w[3 * t + (i + 2) % 3]).collect();
        if sums[0] != sums[1] {
            return Err(Violation { condition: 4, location: format!("edge {e}") });
        }
    }
    Ok(())
}

/// Number of arc ends at every vertex, assuming conditions (1)-(4).
pub fn end_counts(tri: &Triangulation, w: &[i32]) -> Vec<usize> {
    let mut counts = vec![0; tri.vertex_count()];
    for t in 0..tri.triangle_count() {
        if let TriangleType::II { corner } = triangle_type(tri, w, t) {
            counts[tri.corner_vertex(3 * t + corner)] += 1;
        }
    }
    for e in 0..tri.edge_count() {
        let [(t, i), _] = tri.edge_slots(e);
        if triangle_type(tri, w, t) == (TriangleType::III { edge: i }) {
            let (a, b) = tri.edge_ends(e);
            counts[a] += 1;
            counts[b] += 1;
        }
    }
    counts
}

/// Checks conditions (5) and (6) given (1)-(4).
fn check_reduced_extra(tri: &Triangulation, w: &[i32]) -> std::result::Result<(), Violation> {
    for v in 0..tri.vertex_count() {
        if tri.vertex_rotation(v).iter().all(|&c| w[c] > 0) {
            return Err(Violation { condition: 5, location: format!("vertex {v}") });
        }
    }
    let counts = end_counts(tri, w);
    if let Some(v) = counts.iter().position(|&k| k > 1) {
        return Err(Violation { condition: 6, location: format!("vertex {v}") });
    }
    Ok(())
}

/// Checks conditions (1)-(6) and wraps the vector as a reduced multicurve.
pub fn validate_reduced(tri: &Triangulation, w: &[i32]) -> std::result::Result<ReducedMulticurve, Violation> {
    validate_normal(tri, w)?;
    check_reduced_extra(tri, w)?;
    Ok(ReducedMulticurve { corners: w.to_vec() })
}

/// Checks conditions (1)-(5) and (7), without the one-end rule.
pub fn satisfies_conditions_1_to_5(tri: &Triangulation, w: &[i32]) -> bool {
    if validate_normal(tri, w).is_err() {
        return false;
    }
    (0..tri.vertex_count()).all(|v| tri.vertex_rotation(v).iter().any(|&c| w[c] <= 0))
}

/// Edge intersection numbers `α(e_i) = α(c_{i+1}) + α(c_{i+2})` of one
/// triangle, for integral corner values.
pub fn triangle_corner_to_edge(c: [i64; 3]) -> [i64; 3] {
    [c[1] + c[2], c[2] + c[0], c[0] + c[1]]
}

/// Corner values `α(c_i) = ½(α(e_{i+1}) + α(e_{i+2}) − α(e_i))` of one
/// triangle of a multiloop.
pub fn triangle_edge_to_corner(e: [i64; 3]) -> Result<[i64; 3]> {
    let mut out = [0i64; 3];
    for i in 0..3 {
        let num = e[(i + 1) % 3] + e[(i + 2) % 3] - e[i];
        if num < 0 {
            return Err(Error::EdgeVector(format!("triangle inequality fails for edge values {e:?}")));
        }
        if num % 2 != 0 {
            return Err(Error::EdgeVector(format!("parity fails for edge values {e:?}")));
        }
        out[i] = num / 2;
    }
    Ok(out)
}

/// Interior intersection numbers of a normal multicurve with every edge.
///
/// For triangles of type I and II this is the displayed formula; an edge
/// component meets no edge interior and contributes zero.
pub fn corner_to_edge(tri: &Triangulation, w: &[i32]) -> Vec<i64> {
    (0..tri.edge_count())
        .map(|e| {
            let [(t, i), _] = tri.edge_slots(e);
            let s = w[3 * t + (i + 1) % 3] + w[3 * t + (i + 2) % 3];
            if s < 0 {
                0
            } else {
                (s / 2) as i64
            }
        })
        .collect()
}

/// Corner vector (doubled) of the multiloop with the given edge intersection
/// numbers.
pub fn edge_to_corner(tri: &Triangulation, edges: &[i64]) -> Result<CornerVector> {
    if edges.len() != tri.edge_count() {
        return Err(Error::Arity(format!("edge vector has {} entries, expected {}", edges.len(), tri.edge_count())));
    }
    let mut w = vec![0; tri.corner_count()];
    for t in 0..tri.triangle_count() {
        let te = tri.triangle_edges(t);
        let c = triangle_edge_to_corner([edges[te[0]], edges[te[1]], edges[te[2]]])
            .map_err(|e| Error::EdgeVector(format!("triangle {t}: {e}")))?;
        for i in 0..3 {
            w[3 * t + i] = 2 * c[i] as i32;
        }
    }
    Ok(w)
}

/// All reduced multicurves with every corner value in `[−½, bound]`, where
/// `bound_doubled` is twice the bound, in lexicographic order of the doubled
/// corner vectors.
pub fn enumerate_reduced(tri: &Triangulation, bound_doubled: i32) -> Vec<ReducedMulticurve> {
    let mut out = Vec::new();
    enumerate_with(tri, bound_doubled, &mut |w| {
        if check_reduced_extra(tri, w).is_ok() {
            out.push(ReducedMulticurve { corners: w.to_vec() });
        }
    });
    out
}

/// All vectors in the grid satisfying conditions (1)-(4) and (7), in lexicographic
/// order, passed to `visit`.
pub fn enumerate_with(tri: &Triangulation, bound_doubled: i32, visit: &mut dyn FnMut(&[i32])) {
    let mut triples: Vec<[i32; 3]> = Vec::new();
    for a in -1..=bound_doubled {
        for b in -1..=bound_doubled {
            for c in -1..=bound_doubled {
                let x = [a, b, c];
                let par = x[0].rem_euclid(2);
                if x.iter().any(|v| v.rem_euclid(2) != par) {
                    continue;
                }
                if x.iter().all(|&v| v < 0) || (par == 1 && !x.contains(&-1)) {
                    continue;
                }
                triples.push(x);
            }
        }
    }
    let nt = tri.triangle_count();
    // For each triangle, the edges whose second slot is this triangle and
    // whose first slot is an earlier (or the same) triangle.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); nt];
    for e in 0..tri.edge_count() {
        let [(t0, _), (t1, _)] = tri.edge_slots(e);
        closing[t0.max(t1)].push(e);
    }
    let mut w = vec![0; tri.corner_count()];
    fn rec(
        tri: &Triangulation,
        t: usize,
        triples: &[[i32; 3]],
        closing: &[Vec<usize>],
        w: &mut Vec<i32>,
        visit: &mut dyn FnMut(&[i32]),
    ) {
        if t == tri.triangle_count() {
            visit(w);
            return;
        }
        'next: for x in triples {
            w[3 * t] = x[0];
            w[3 * t + 1] = x[1];
            w[3 * t + 2] = x[2];
            for &e in &closing[t] {
                let s = tri.edge_slots(e);
                let sum = |(tt, i): (usize, usize)| w[3 * tt + (i + 1) % 3] + w[3 * tt + (i + 2) % 3];
                if sum(s[0]) != sum(s[1]) {
                    continue 'next;
                }
            }
            rec(tri, t + 1, triples, closing, w, visit);
        }
    }
    rec(tri, 0, &triples, &closing, &mut w, visit);
}

/// The other diagonal of the quadrilateral formed by the two triangles on
/// `e`: an arc between the two corners opposite `e`, crossing `e` once.
pub fn flip_arc(tri: &Triangulation, e: usize) -> Result<ReducedMulticurve> {
    let mut w = vec![0; tri.corner_count()];
    for (t, i) in tri.edge_slots(e) {
        w[3 * t + i] -= 1;
        w[3 * t + (i + 1) % 3] += 1;
        w[3 * t + (i + 2) % 3] += 1;
    }
    Ok(validate_reduced(tri, &w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::tetrahedron;

    #[test]
    fn empty_and_edges_are_reduced() {
        let t = tetrahedron();
        assert!(validate_reduced(&t, &[0; 12]).is_ok());
        for e in 0..6 {
            let w = edge_vector(&t, e);
            assert!(validate_normal(&t, &w).is_ok());
            let r = validate_reduced(&t, &w).unwrap();
            assert_eq!(r.edge_components(&t), vec![e]);
            assert_eq!(w.iter().filter(|&&x| x == -1).count(), 4);
            assert_eq!(w.iter().filter(|&&x| x == 1).count(), 2);
        }
    }

    #[test]
    fn single_unit_entry_breaks_matching() {
        let t = tetrahedron();
        let mut w = vec![0; 12];
        w[0] = 2;
        assert_eq!(validate_normal(&t, &w).unwrap_err().condition, 4);
    }

    #[test]
    fn puncture_loop_fails_condition_five() {
        let t = tetrahedron();
        let mut w = vec![0; 12];
        for &c in t.vertex_rotation(0) {
            w[c] = 2;
        }
        assert!(validate_normal(&t, &w).is_ok());
        assert_eq!(validate_reduced(&t, &w).unwrap_err().condition, 5);
    }

    #[test]
    fn triangle_types() {
        let t = tetrahedron();
        let w = edge_vector(&t, 0);
        let [(tl, il), (tr, ir)] = t.edge_slots(0);
        assert_eq!(triangle_type(&t, &w, tl), TriangleType::III { edge: il });
        assert_eq!(triangle_type(&t, &w, tr), TriangleType::III { edge: ir });
        let zero = vec![0; 12];
        assert_eq!(triangle_type(&t, &zero, 0), TriangleType::I);
    }

    #[test]
    fn edge_corner_conversions() {
        assert_eq!(triangle_corner_to_edge([0, 0, 0]), [0, 0, 0]);
        assert_eq!(triangle_corner_to_edge([1, 1, 0]), [1, 1, 2]);
        assert_eq!(triangle_edge_to_corner([1, 1, 2]).unwrap(), [1, 1, 0]);
        assert!(matches!(triangle_edge_to_corner([1, 1, 1]), Err(Error::EdgeVector(_))));
        let t = tetrahedron();
        assert_eq!(corner_to_edge(&t, &edge_vector(&t, 2)), vec![0; 6]);
    }

    #[test]
    fn enumeration_basics() {
        let t = tetrahedron();
        let b0 = enumerate_reduced(&t, 0);
        assert_eq!(b0.len(), 1);
        let b1 = enumerate_reduced(&t, 1);
        for e in 0..6 {
            assert!(b1.contains(&ReducedMulticurve::edge(&t, e)));
        }
        let mut sorted = b1.clone();
        sorted.sort();
        assert_eq!(sorted, b1);
    }

    #[test]
    fn half_parsing() {
        assert_eq!(parse_half("1/2").unwrap(), 1);
        assert_eq!(parse_half("0.5").unwrap(), 1);
        assert_eq!(parse_half("1").unwrap(), 2);
        assert!(parse_half("0.3").is_err());
        assert!(parse_half("-1").is_err());
    }

    #[test]
    fn half_integral_triangle_needs_a_negative_corner() {
        let t = tetrahedron();
        let mut w = vec![0; 12];
        w[0] = 1;
        w[1] = 1;
        w[2] = 1;
        assert_eq!(validate_normal(&t, &w).unwrap_err().condition, 7);
    }

    #[test]
    fn flip_arc_crosses_its_edge_once() {
        let t = tetrahedron();
        for e in 0..6 {
            let d = flip_arc(&t, e).unwrap();
            let mut expected = vec![0; 6];
            expected[e] = 1;
            assert_eq!(corner_to_edge(&t, d.corners()), expected);
            assert_eq!(d.end_vertices(&t).len(), 2);
        }
    }
}
