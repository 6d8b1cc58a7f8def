//! Combinatorial ideal triangulations of closed punctured surfaces.
//!
//! A triangulation is given by a vertex count, a list of edges (pairs of
//! endpoint vertices) and a list of triangles, each an ordered triple of edge
//! indices listed in counterclockwise boundary order. Every edge must be used
//! by exactly two triangle slots. The first slot that mentions an edge is the
//! triangle on the *left* of that edge; the second is on the *right*.
//!
//! # Corners
//!
//! Triangle `t` has corners `3t`, `3t+1`, `3t+2`. Corner `3t+i` sits at the
//! vertex opposite the edge in position `i`. Walking the boundary of a triangle
//! counterclockwise visits, for each `i`, corner `i+1`, edge `i`, corner `i+2`
//! (indices mod 3), so edge `i` runs from the vertex of corner `i+1` to the
//! vertex of corner `i+2`.
//!
//! # Edge orientation
//!
//! The left triangle of an edge traverses it from the *bottom* vertex `w` to
//! the *top* vertex `v`; the right triangle traverses it from `v` to `w`.
//!
//! # Rotation around a vertex
//!
//! The *star order* around a vertex starts at a corner and repeatedly crosses
//! the edge through which the triangle boundary leaves that vertex. For an edge
//! `e` with top `v` this order runs from the corner at `v` in the left triangle
//! to the corner at `v` in the right triangle without crossing `e`, which is
//! the order used by [`StarLabels`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A triangle slot: `(triangle index, position 0..3)`.
pub type Slot = (usize, usize);

/// JSON document describing a triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationDoc {
    /// Number of vertices (punctures).
    pub vertices: usize,
    /// Edge endpoint pairs.
    pub edges: Vec<[usize; 2]>,
    /// Counterclockwise edge triples.
    pub triangles: Vec<[usize; 3]>,
    /// Optional declared genus, checked against the Euler characteristic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
}

/// A validated combinatorial triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    /// `[left slot, right slot]` for every edge.
    edge_slots: Vec<[Slot; 2]>,
    /// `(top, bottom)` vertex of every edge.
    edge_ends: Vec<(usize, usize)>,
    corner_vertex: Vec<usize>,
    /// Corners around each vertex in star order.
    vertex_rotation: Vec<Vec<usize>>,
    genus: usize,
}

/// Reason a triangulation fails to be locally planar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanarityWitness {
    /// An edge whose two endpoints coincide.
    LoopEdge {
        /// The offending edge.
        edge: usize,
    },
    /// Two distinct edges joining the same pair of vertices.
    TwoCycle {
        /// First edge of the cycle.
        first: usize,
        /// Second edge of the cycle.
        second: usize,
    },
    /// The surface is the sphere with three punctures.
    ThreePuncturedSphere,
}

/// Labels of the corners in the star of an edge.
///
/// `a[0..=s]` are the corners at the top vertex `v`, starting in the left
/// triangle and ending in the right triangle; `b[0..=t]` are the corners at
/// the bottom vertex `w`, starting in the right triangle and ending in the
/// left triangle. `a_left[i]` and `a_right[i]` are the two other corners of
/// the triangle containing `a[i]`, and similarly for `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarLabels {
    /// The edge.
    pub edge: usize,
    /// Top vertex.
    pub top: usize,
    /// Bottom vertex.
    pub bottom: usize,
    /// Corners around the top vertex.
    pub a: Vec<usize>,
    /// Corners around the bottom vertex.
    pub b: Vec<usize>,
    /// Left opposite corner of each `a[i]`.
    pub a_left: Vec<usize>,
    /// Right opposite corner of each `a[i]`.
    pub a_right: Vec<usize>,
    /// Left opposite corner of each `b[j]`.
    pub b_left: Vec<usize>,
    /// Right opposite corner of each `b[j]`.
    pub b_right: Vec<usize>,
}

impl StarLabels {
    /// Index `s` of the last top corner.
    pub fn s(&self) -> usize {
        self.a.len() - 1
    }

    /// Index `t` of the last bottom corner.
    pub fn t(&self) -> usize {
        self.b.len() - 1
    }
}

impl Triangulation {
    /// Parses and validates a JSON triangulation document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TriangulationDoc = serde_json::from_str(text)?;
        Self::build(&doc)
    }

    /// Validates a parsed document and fixes the corner enumeration.
    pub fn build(doc: &TriangulationDoc) -> Result<Self> {
        let n = doc.vertices;
        let ne = doc.edges.len();
        let nt = doc.triangles.len();
        if n == 0 || nt == 0 {
            return Err(Error::Triangulation("empty triangulation".into()));
        }
        for (i, e) in doc.edges.iter().enumerate() {
            if e[0] >= n || e[1] >= n {
                return Err(Error::Triangulation(format!("edge {i} references vertex outside 0..{n}")));
            }
        }
        let mut slots: Vec<Vec<Slot>> = vec![Vec::new(); ne];
        for (t, tri) in doc.triangles.iter().enumerate() {
            for (i, &e) in tri.iter().enumerate() {
                if e >= ne {
                    return Err(Error::Triangulation(format!("triangle {t} references dangling edge {e}")));
                }
                slots[e].push((t, i));
            }
        }
        for (e, s) in slots.iter().enumerate() {
            if s.len() != 2 {
                return Err(Error::EdgeMultiplicity { edge: e, count: s.len() });
            }
        }
        let edge_slots: Vec<[Slot; 2]> = slots.iter().map(|s| [s[0], s[1]]).collect();
        let forward = solve_directions(doc, &edge_slots)?;

        // Traversal of slot (t,i): from start to end vertex.
        let trav = |t: usize, i: usize| -> (usize, usize) {
            let e = doc.edges[doc.triangles[t][i]];
            if forward[t][i] {
                (e[0], e[1])
            } else {
                (e[1], e[0])
            }
        };
        let mut corner_vertex = vec![0; 3 * nt];
        for t in 0..nt {
            for i in 0..3 {
                corner_vertex[3 * t + (i + 1) % 3] = trav(t, i).0;
            }
        }
        let edge_ends: Vec<(usize, usize)> = edge_slots
            .iter()
            .map(|s| {
                let (start, end) = trav(s[0].0, s[0].1);
                (end, start)
            })
            .collect();

        let mut tri = Triangulation {
            vertex_count: n,
            edges: doc.edges.clone(),
            triangles: doc.triangles.clone(),
            edge_slots,
            edge_ends,
            corner_vertex,
            vertex_rotation: Vec::new(),
            genus: 0,
        };

        let mut seen = vec![false; 3 * nt];
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
        for c in 0..3 * nt {
            if seen[c] {
                continue;
            }
            let v = tri.corner_vertex[c];
            if !rotation[v].is_empty() {
                return Err(Error::Triangulation(format!("link of vertex {v} is not a single cycle")));
            }
            let mut cur = c;
            loop {
                if seen[cur] {
                    return Err(Error::Triangulation(format!("rotation around vertex {v} does not close up")));
                }
                seen[cur] = true;
                rotation[v].push(cur);
                cur = tri.star_next(cur);
                if cur == c {
                    break;
                }
            }
        }
        if let Some(v) = rotation.iter().position(|r| r.is_empty()) {
            return Err(Error::Triangulation(format!("vertex {v} meets no triangle")));
        }
        tri.vertex_rotation = rotation;

        let chi = n as i64 - ne as i64 + nt as i64;
        if chi > 2 || chi % 2 != 0 {
            return Err(Error::Triangulation(format!(
                "Euler characteristic {chi} is not that of a closed orientable surface"
            )));
        }
        tri.genus = ((2 - chi) / 2) as usize;
        if let Some(g) = doc.genus {
            if g != tri.genus {
                return Err(Error::Triangulation(format!(
                    "declared genus {g} but Euler characteristic {chi} gives genus {}",
                    tri.genus
                )));
            }
        }
        Ok(tri)
    }

    /// The document this triangulation was built from.
    pub fn to_doc(&self) -> TriangulationDoc {
        TriangulationDoc {
            vertices: self.vertex_count,
            edges: self.edges.clone(),
            triangles: self.triangles.clone(),
            genus: Some(self.genus),
        }
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of triangles.
    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Number of corners, `3·|T|`.
    pub fn corner_count(&self) -> usize {
        3 * self.triangles.len()
    }

    /// Genus of the closed surface.
    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Euler characteristic `V − E + F` of the closed surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Edge indices of triangle `t` in counterclockwise order.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    /// Edge in slot `(t, i)`.
    pub fn slot_edge(&self, t: usize, i: usize) -> usize {
        self.triangles[t][i % 3]
    }

    /// `[left slot, right slot]` of edge `e`.
    pub fn edge_slots(&self, e: usize) -> [Slot; 2] {
        self.edge_slots[e]
    }

    /// True when slot `(t, i)` is the left slot of its edge.
    pub fn slot_is_left(&self, t: usize, i: usize) -> bool {
        let e = self.triangles[t][i];
        self.edge_slots[e][0] == (t, i)
    }

    /// The other slot of the edge in slot `(t, i)`.
    pub fn opposite_slot(&self, t: usize, i: usize) -> Slot {
        let e = self.triangles[t][i];
        let s = self.edge_slots[e];
        if s[0] == (t, i) {
            s[1]
        } else {
            s[0]
        }
    }

    /// `(top, bottom)` vertices of edge `e`.
    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        self.edge_ends[e]
    }

    /// Vertex at corner `c`.
    pub fn corner_vertex(&self, c: usize) -> usize {
        self.corner_vertex[c]
    }

    /// Triangle containing corner `c`.
    pub fn corner_triangle(&self, c: usize) -> usize {
        c / 3
    }

    /// Corners around vertex `v` in star order.
    pub fn vertex_rotation(&self, v: usize) -> &[usize] {
        &self.vertex_rotation[v]
    }

    /// Number of corners at vertex `v`.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.vertex_rotation[v].len()
    }

    /// Next corner around the same vertex in star order.
    ///
    /// Crosses the edge through which the triangle boundary leaves the vertex.
    pub fn star_next(&self, c: usize) -> usize {
        let (t, i) = (c / 3, c % 3);
        let (t2, j) = self.opposite_slot(t, (i + 2) % 3);
        3 * t2 + (j + 2) % 3
    }

    /// Previous corner around the same vertex in star order.
    pub fn star_prev(&self, c: usize) -> usize {
        let (t, i) = (c / 3, c % 3);
        let (t2, j) = self.opposite_slot(t, (i + 1) % 3);
        3 * t2 + (j + 1) % 3
    }

    /// Position (0..3) in triangle `t` of the corner at the far end of edge
    /// position `i` when walking the boundary counterclockwise.
    pub fn slot_end_position(i: usize) -> usize {
        (i + 2) % 3
    }

    /// Position (0..3) of the corner where edge position `i` starts.
    pub fn slot_start_position(i: usize) -> usize {
        (i + 1) % 3
    }

    /// Checks local planarity and returns a witness on failure.
    pub fn locally_planar_witness(&self) -> Option<PlanarityWitness> {
        for (e, &(a, b)) in self.edge_ends.iter().enumerate() {
            if a == b {
                return Some(PlanarityWitness::LoopEdge { edge: e });
            }
        }
        let mut seen = std::collections::BTreeMap::new();
        for (e, &(a, b)) in self.edge_ends.iter().enumerate() {
            let key = (a.min(b), a.max(b));
            if let Some(&first) = seen.get(&key) {
                return Some(PlanarityWitness::TwoCycle { first, second: e });
            }
            seen.insert(key, e);
        }
        if self.vertex_count == 3 && self.genus == 0 {
            return Some(PlanarityWitness::ThreePuncturedSphere);
        }
        None
    }

    /// True when there are no loop edges, no two-cycles, and the surface is
    /// not the three-punctured sphere.
    pub fn is_locally_planar(&self) -> bool {
        self.locally_planar_witness().is_none()
    }

    /// Corner labels of the star of edge `e`.
    pub fn star_labels(&self, e: usize) -> Result<StarLabels> {
        if e >= self.edges.len() {
            return Err(Error::Index(format!("edge {e} out of range")));
        }
        if let Some(w) = self.locally_planar_witness() {
            return Err(Error::NotLocallyPlanar(format!("{w:?}")));
        }
        let [(tl, il), (tr, ir)] = self.edge_slots[e];
        let (top, bottom) = self.edge_ends[e];
        let a0 = 3 * tl + (il + 2) % 3;
        let a_last = 3 * tr + (ir + 1) % 3;
        let b0 = 3 * tr + (ir + 2) % 3;
        let b_last = 3 * tl + (il + 1) % 3;
        let a = self.walk(a0, a_last)?;
        let b = self.walk(b0, b_last)?;
        let left = |c: usize| 3 * (c / 3) + (c % 3 + 1) % 3;
        let right = |c: usize| 3 * (c / 3) + (c % 3 + 2) % 3;
        Ok(StarLabels {
            edge: e,
            top,
            bottom,
            a_left: a.iter().map(|&c| left(c)).collect(),
            a_right: a.iter().map(|&c| right(c)).collect(),
            b_left: b.iter().map(|&c| left(c)).collect(),
            b_right: b.iter().map(|&c| right(c)).collect(),
            a,
            b,
        })
    }

    fn walk(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        let mut out = vec![from];
        let mut cur = from;
        while cur != to {
            cur = self.star_next(cur);
            if out.len() > self.corner_count() {
                return Err(Error::Invariant("star walk does not terminate".into()));
            }
            out.push(cur);
        }
        Ok(out)
    }
}

/// Determines, for every triangle slot, whether the triangle traverses the
/// edge from `edges[e][0]` to `edges[e][1]` (forward) or backward, such that
/// consecutive edges share their intermediate vertex and the two slots of
/// every edge traverse it in opposite directions.
fn solve_directions(doc: &TriangulationDoc, edge_slots: &[[Slot; 2]]) -> Result<Vec<[bool; 3]>> {
    let nt = doc.triangles.len();
    let mut options: Vec<Vec<[bool; 3]>> = Vec::with_capacity(nt);
    for (t, tri) in doc.triangles.iter().enumerate() {
        let mut opts = Vec::new();
        for mask in 0..8u8 {
            let d = [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0];
            let ends = |i: usize| {
                let e = doc.edges[tri[i]];
                if d[i] {
                    (e[0], e[1])
                } else {
                    (e[1], e[0])
                }
            };
            if (0..3).all(|i| ends(i).1 == ends((i + 1) % 3).0) {
                opts.push(d);
            }
        }
        if opts.is_empty() {
            return Err(Error::Triangulation(format!(
                "triangle {t}: consecutive edges do not share their intermediate vertex"
            )));
        }
        options.push(opts);
    }
    let mut choice: Vec<Option<[bool; 3]>> = vec![None; nt];
    fn consistent(doc: &TriangulationDoc, edge_slots: &[[Slot; 2]], choice: &[Option<[bool; 3]>], t: usize) -> bool {
        let d = choice[t].expect("set");
        for i in 0..3 {
            let e = doc.triangles[t][i];
            for &(t2, j) in &edge_slots[e] {
                if (t2, j) == (t, i) {
                    continue;
                }
                if let Some(d2) = choice[t2] {
                    let (a, b) = (doc.edges[e][0], doc.edges[e][1]);
                    if a != b && d2[j] == d[i] {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn search(
        doc: &TriangulationDoc,
        edge_slots: &[[Slot; 2]],
        options: &[Vec<[bool; 3]>],
        choice: &mut Vec<Option<[bool; 3]>>,
        t: usize,
    ) -> bool {
        if t == options.len() {
            return true;
        }
        for &o in &options[t] {
            choice[t] = Some(o);
            if consistent(doc, edge_slots, choice, t) && search(doc, edge_slots, options, choice, t + 1) {
                return true;
            }
        }
        choice[t] = None;
        false
    }
    if !search(doc, edge_slots, &options, &mut choice, 0) {
        return Err(Error::Triangulation("no orientation-consistent traversal of the edges exists".into()));
    }
    Ok(choice.into_iter().map(|c| c.expect("solved")).collect())
}

/// Tetrahedral triangulation of the sphere with four punctures.
pub fn tetrahedron() -> Triangulation {
    Triangulation::from_json(include_str!("../data/tetrahedron.json")).expect("bundled data")
}

/// Octahedral triangulation of the sphere with six punctures.
pub fn octahedron() -> Triangulation {
    Triangulation::from_json(include_str!("../data/octahedron.json")).expect("bundled data")
}

/// Seven-vertex triangulation of the torus (the complete graph on seven
/// vertices).
pub fn torus7() -> Triangulation {
    Triangulation::from_json(include_str!("../data/torus7.json")).expect("bundled data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_counts() {
        let t = tetrahedron();
        assert_eq!(t.corner_count(), 12);
        assert_eq!(t.genus(), 0);
        assert!(t.is_locally_planar());
        for v in 0..4 {
            assert_eq!(t.vertex_degree(v), 3);
        }
    }

    #[test]
    fn star_labels_on_tetrahedron() {
        let t = tetrahedron();
        for e in 0..t.edge_count() {
            let s = t.star_labels(e).unwrap();
            assert_eq!(s.s(), 2);
            assert_eq!(s.t(), 2);
            assert_eq!(s.a[0], s.b_left[s.t()]);
            assert_eq!(s.b[s.t()], s.a_right[0]);
            assert_eq!(s.a_left[0], s.b_right[s.t()]);
            assert_eq!(s.a[s.s()], s.b_right[0]);
            assert_eq!(s.b[0], s.a_left[s.s()]);
            assert_eq!(s.b_left[0], s.a_right[s.s()]);
        }
    }

    #[test]
    fn edge_multiplicity_error() {
        let doc = r#"{"vertices":4,"edges":[[0,1],[1,2],[2,0],[0,3]],
            "triangles":[[0,1,2],[0,1,2],[0,1,2]]}"#;
        let err = Triangulation::from_json(doc).unwrap_err();
        assert!(matches!(err, Error::EdgeMultiplicity { .. }));
    }

    #[test]
    fn single_triangle_is_rejected() {
        let doc = r#"{"vertices":1,"edges":[[0,0],[0,0],[0,0]],"triangles":[[0,1,2]]}"#;
        assert!(Triangulation::from_json(doc).is_err());
    }

    #[test]
    fn three_punctured_sphere_is_not_locally_planar() {
        let doc = r#"{"vertices":3,"edges":[[1,0],[2,1],[0,2]],
            "triangles":[[0,1,2],[2,1,0]]}"#;
        let t = Triangulation::from_json(doc).unwrap();
        assert_eq!(t.genus(), 0);
        assert_eq!(t.locally_planar_witness(), Some(PlanarityWitness::ThreePuncturedSphere));
        assert!(t.star_labels(0).is_err());
    }

    #[test]
    fn loop_edge_witness() {
        // Once-punctured torus: one vertex, three loop edges.
        let doc = r#"{"vertices":1,"edges":[[0,0],[0,0],[0,0]],
            "triangles":[[0,1,2],[0,1,2]]}"#;
        let t = Triangulation::from_json(doc).unwrap();
        assert_eq!(t.genus(), 1);
        assert_eq!(t.locally_planar_witness(), Some(PlanarityWitness::LoopEdge { edge: 0 }));
    }
}
