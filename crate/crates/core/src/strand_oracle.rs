//! Explicit curve diagrams: the geometric ground truth for every fast
//! algorithm in the crate.
//!
//! A [`StrandDiagram`] draws a generalized multicurve inside the triangulated
//! surface. Each edge carries an ordered list of *points* (from its bottom
//! vertex to its top vertex) where strands cross it, and each corner carries an
//! ordered list of *ports* where strands end at the puncture. Inside every
//! triangle the points and ports on its boundary are joined in pairs by
//! *chords*. Walking the boundary of triangle `t` counterclockwise visits
//!
//! ```text
//! ports of corner 1, points of edge 0, ports of corner 2,
//! points of edge 1, ports of corner 0, points of edge 2
//! ```
//!
//! and two chords cross exactly when their endpoints interleave in this cyclic
//! order. Every chord endpoint is a *handle*: a point has one handle per side
//! of its edge (side 0 lies in the left triangle, side 1 in the right one) and
//! a port has a single handle.
//!
//! Products are computed by superimposing two diagrams (the first factor is
//! drawn above the second), removing bigons, expanding every interior crossing
//! into its two smoothings triangle by triangle, resolving each pair of arc
//! ends that meet at a puncture by joining them around one side of it, and
//! finally normalizing: turnbacks are cancelled, arc ends hugging an edge are
//! slid around their puncture, and trivial and puncture loops are deleted with
//! their skein constants.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::{rat, LaurentPoly};
use crate::normal_curves::{self, CornerVector, ReducedMulticurve};
use crate::triangulation::Triangulation;

/// Identifier of a point or port.
pub type Id = u32;
/// Chord endpoint: `2·id + side`.
pub type Handle = u32;

const NONE: Handle = Handle::MAX;

fn handle(id: Id, side: usize) -> Handle {
    id * 2 + side as Handle
}

fn hid(h: Handle) -> Id {
    h / 2
}

fn hside(h: Handle) -> usize {
    (h % 2) as usize
}

fn flip(h: Handle) -> Handle {
    h ^ 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Loc {
    Edge(usize),
    Corner(usize),
    Dead,
}

/// Coefficient conventions for resolving diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Classical curve algebra: smoothings weigh 1, trivial loops −2,
    /// puncture loops 2, each puncture resolution `v⁻¹`.
    Classical,
    /// Quantum skein algebra: smoothings weigh `q^{±1}`, trivial loops
    /// `−q²−q⁻²`, puncture loops `q+q⁻¹`, each puncture resolution
    /// `q^{±½}v⁻¹`. Exponents of `q` are tracked in half units.
    Quantum,
}

/// Smoothing of an interior crossing.
///
/// With the four rays at a crossing listed counterclockwise, the `A`
/// smoothing joins each ray of the upper strand to the ray of the lower
/// strand clockwise from it; `B` joins it to the counterclockwise one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Smoothing {
    /// Upper ray joined to its clockwise neighbour.
    A,
    /// Upper ray joined to its counterclockwise neighbour.
    B,
}

/// Side on which two arc ends at a puncture are joined.
///
/// `Forward` leaves the end of the upper strand in star order (across the
/// edge through which the triangle boundary leaves the puncture) until it
/// reaches the end of the lower strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexJoin {
    /// Around the puncture in star order, starting from the upper end.
    Forward,
    /// Against star order, starting from the upper end.
    Backward,
}

impl VertexJoin {
    /// The other join side.
    pub fn opposite(self) -> Self {
        match self {
            VertexJoin::Forward => VertexJoin::Backward,
            VertexJoin::Backward => VertexJoin::Forward,
        }
    }
}

/// Strategy for picking the next normalization move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveOrder {
    /// Always apply the first applicable move found by the scan.
    First,
    /// Always apply the last applicable move found by the scan.
    Last,
    /// Pick uniformly among the applicable moves with a seeded generator.
    Seeded(u64),
}

/// Result of normalizing a crossingless diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Number of trivial loops deleted.
    pub trivial_loops: u32,
    /// Number of puncture loops deleted.
    pub puncture_loops: u32,
    /// The remaining reduced multicurve.
    pub curve: ReducedMulticurve,
}

/// A transverse double point between the two layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Triangle containing the crossing.
    pub triangle: usize,
    /// Chord of the upper layer.
    pub upper: (Handle, Handle),
    /// Chord of the lower layer.
    pub lower: (Handle, Handle),
}

/// One fully resolved state of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedState {
    /// Smoothing used at each interior crossing, in [`StrandDiagram::crossings`] order.
    pub smoothings: Vec<Smoothing>,
    /// Join side used at each puncture meeting, in increasing vertex order.
    pub joins: Vec<(usize, VertexJoin)>,
    /// True when the resolved diagram had no turnback and no closed loop
    /// before normalization.
    pub turnback_free: bool,
    /// Coefficient, a Laurent polynomial in the ring of the chosen mode.
    pub coefficient: LaurentPoly,
    /// The normalized curve.
    pub curve: ReducedMulticurve,
}

/// Sparse polynomial in `q^{½}` with integer coefficients, keyed by the
/// exponent of `q^{½}`.
type QPoly = BTreeMap<i32, i64>;

fn qmul(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = QPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn qmono(exp: i32, c: i64) -> QPoly {
    let mut m = QPoly::new();
    m.insert(exp, c);
    m
}

fn qpow(a: &QPoly, n: u32) -> QPoly {
    let mut out = qmono(0, 1);
    for _ in 0..n {
        out = qmul(&out, a);
    }
    out
}

impl Mode {
    fn smoothing(self, s: Smoothing) -> QPoly {
        match (self, s) {
            (Mode::Classical, _) => qmono(0, 1),
            (Mode::Quantum, Smoothing::A) => qmono(2, 1),
            (Mode::Quantum, Smoothing::B) => qmono(-2, 1),
        }
    }

    fn trivial_loop(self) -> QPoly {
        match self {
            Mode::Classical => qmono(0, -2),
            Mode::Quantum => {
                let mut p = qmono(4, -1);
                p.insert(-4, -1);
                p
            }
        }
    }

    fn puncture_loop(self) -> QPoly {
        match self {
            Mode::Classical => qmono(0, 2),
            Mode::Quantum => {
                let mut p = qmono(2, 1);
                p.insert(-2, 1);
                p
            }
        }
    }

    fn vertex(self, j: VertexJoin) -> QPoly {
        match (self, j) {
            (Mode::Classical, _) => qmono(0, 1),
            (Mode::Quantum, VertexJoin::Forward) => qmono(1, 1),
            (Mode::Quantum, VertexJoin::Backward) => qmono(-1, 1),
        }
    }

    /// Number of Laurent variables: one per vertex, plus `q^{½}` when quantum.
    pub fn nvars(self, tri: &Triangulation) -> usize {
        match self {
            Mode::Classical => tri.vertex_count(),
            Mode::Quantum => tri.vertex_count() + 1,
        }
    }
}

/// Boundary position of a handle inside its triangle: (segment, index).
type Pos = (u8, usize);

/// An explicit curve diagram; see the module documentation.
#[derive(Clone, Debug)]
pub struct StrandDiagram {
    edges: Vec<Vec<Id>>,
    corners: Vec<Vec<Id>>,
    loc: Vec<Loc>,
    layer: Vec<u8>,
    mate: Vec<Handle>,
}

/// Resolution options of one triangle: matchings of its chord endpoints with
/// their aggregated weights.
struct TriangleOptions {
    options: Vec<(Vec<(Handle, Handle)>, QPoly)>,
}

/// One smoothing state of one triangle.
struct TriangleState {
    pairs: Vec<(Handle, Handle)>,
    smoothings: Vec<Smoothing>,
    loops: u32,
}

enum Move {
    Turnback { edge: usize, index: usize, side: usize },
    Unwind { port: Id, outgoing: bool },
    PunctureLoop { points: Vec<Id> },
}

impl StrandDiagram {
    /// The empty diagram.
    pub fn empty(tri: &Triangulation) -> Self {
        StrandDiagram {
            edges: vec![Vec::new(); tri.edge_count()],
            corners: vec![Vec::new(); tri.corner_count()],
            loc: Vec::new(),
            layer: Vec::new(),
            mate: Vec::new(),
        }
    }

    fn check_supported(tri: &Triangulation) -> Result<()> {
        for t in 0..tri.triangle_count() {
            let e = tri.triangle_edges(t);
            if e[0] == e[1] || e[1] == e[2] || e[0] == e[2] {
                return Err(Error::Unsupported(format!(
                    "triangle {t} uses one edge twice; strand diagrams need three distinct edges per triangle"
                )));
            }
        }
        Ok(())
    }

    fn new_id(&mut self, loc: Loc, layer: u8) -> Id {
        let id = self.loc.len() as Id;
        self.loc.push(loc);
        self.layer.push(layer);
        self.mate.push(NONE);
        self.mate.push(NONE);
        id
    }

    fn connect(&mut self, a: Handle, b: Handle) {
        self.mate[a as usize] = b;
        self.mate[b as usize] = a;
    }

    fn mate_of(&self, h: Handle) -> Handle {
        self.mate[h as usize]
    }

    /// Number of live edge points.
    pub fn point_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Number of live ports.
    pub fn port_count(&self) -> usize {
        self.corners.iter().map(Vec::len).sum()
    }

    /// True when the diagram has no strands.
    pub fn is_empty(&self) -> bool {
        self.point_count() == 0 && self.port_count() == 0
    }

    fn triangle_of(&self, tri: &Triangulation, h: Handle) -> usize {
        match self.loc[hid(h) as usize] {
            Loc::Edge(e) => tri.edge_slots(e)[hside(h)].0,
            Loc::Corner(c) => c / 3,
            Loc::Dead => usize::MAX,
        }
    }

    /// Position of the handle in its triangle's counterclockwise boundary.
    fn pos(&self, tri: &Triangulation, h: Handle) -> Pos {
        let id = hid(h);
        match self.loc[id as usize] {
            Loc::Edge(e) => {
                let side = hside(h);
                let (_, j) = tri.edge_slots(e)[side];
                let list = &self.edges[e];
                let g = list.iter().position(|&x| x == id).expect("point on its edge");
                let local = if side == 0 { g } else { list.len() - 1 - g };
                (2 * j as u8 + 1, local)
            }
            Loc::Corner(c) => {
                let i = c % 3;
                let k = self.corners[c].iter().position(|&x| x == id).expect("port in its corner");
                (2 * ((i + 2) % 3) as u8, k)
            }
            Loc::Dead => (u8::MAX, 0),
        }
    }

    /// Handle of the point at `local` position on slot `(t, j)`.
    fn slot_handle(&self, tri: &Triangulation, t: usize, j: usize, local: usize) -> Handle {
        let e = tri.slot_edge(t, j);
        let side = if tri.slot_is_left(t, j) { 0 } else { 1 };
        let list = &self.edges[e];
        let g = if side == 0 { local } else { list.len() - 1 - local };
        handle(list[g], side)
    }

    fn slot_side(tri: &Triangulation, t: usize, j: usize) -> usize {
        if tri.slot_is_left(t, j) {
            0
        } else {
            1
        }
    }

    /// Inserts a new point on slot `(t, j)` at the local start (next to the
    /// corner where the slot begins) or the local end.
    fn insert_point(&mut self, tri: &Triangulation, t: usize, j: usize, at_start: bool, layer: u8) -> Id {
        let e = tri.slot_edge(t, j);
        let side = Self::slot_side(tri, t, j);
        let id = self.new_id(Loc::Edge(e), layer);
        let front = (side == 0) == at_start;
        if front {
            self.edges[e].insert(0, id);
        } else {
            self.edges[e].push(id);
        }
        id
    }

    fn remove_point(&mut self, id: Id) {
        if let Loc::Edge(e) = self.loc[id as usize] {
            self.edges[e].retain(|&x| x != id);
        }
        self.loc[id as usize] = Loc::Dead;
        self.mate[handle(id, 0) as usize] = NONE;
        self.mate[handle(id, 1) as usize] = NONE;
    }

    fn remove_port(&mut self, id: Id) {
        if let Loc::Corner(c) = self.loc[id as usize] {
            self.corners[c].retain(|&x| x != id);
        }
        self.loc[id as usize] = Loc::Dead;
        self.mate[handle(id, 0) as usize] = NONE;
    }

    /// Realizes a vector satisfying conditions (1)-(4) as a crossingless
    /// normal diagram.
    pub fn from_normal(tri: &Triangulation, w: &[i32]) -> Result<Self> {
        Self::check_supported(tri)?;
        normal_curves::validate_normal(tri, w)?;
        let mut d = StrandDiagram::empty(tri);
        let counts = normal_curves::corner_to_edge(tri, w);
        for (e, &n) in counts.iter().enumerate() {
            for _ in 0..n {
                let id = d.new_id(Loc::Edge(e), 0);
                d.edges[e].push(id);
            }
        }
        for t in 0..tri.triangle_count() {
            let x = [w[3 * t], w[3 * t + 1], w[3 * t + 2]];
            let arcs: Vec<usize> = x.iter().map(|&v| if v < 0 { 0 } else { (v / 2) as usize }).collect();
            let ty = normal_curves::triangle_type(tri, w, t);
            let slot_len = |j: usize| counts[tri.slot_edge(t, j)] as usize;
            for i in 0..3 {
                let out = (i + 2) % 3;
                let inc = (i + 1) % 3;
                for k in 0..arcs[i] {
                    let a = d.slot_handle(tri, t, out, k);
                    let b = d.slot_handle(tri, t, inc, slot_len(inc) - 1 - k);
                    d.connect(a, b);
                }
            }
            match ty {
                normal_curves::TriangleType::I => {}
                normal_curves::TriangleType::II { corner } => {
                    let p = d.new_id(Loc::Corner(3 * t + corner), 0);
                    d.corners[3 * t + corner].push(p);
                    let target = d.slot_handle(tri, t, corner, arcs[(corner + 1) % 3]);
                    d.connect(handle(p, 0), target);
                }
                normal_curves::TriangleType::III { edge } => {
                    if tri.slot_is_left(t, edge) {
                        let c_out = 3 * t + (edge + 1) % 3;
                        let c_in = 3 * t + (edge + 2) % 3;
                        let p = d.new_id(Loc::Corner(c_out), 0);
                        d.corners[c_out].push(p);
                        let q = d.new_id(Loc::Corner(c_in), 0);
                        d.corners[c_in].insert(0, q);
                        d.connect(handle(p, 0), handle(q, 0));
                    }
                }
            }
        }
        d.check_consistency(tri)?;
        Ok(d)
    }

    /// Realizes a reduced multicurve as a crossingless normal diagram.
    pub fn from_reduced(tri: &Triangulation, rm: &ReducedMulticurve) -> Result<Self> {
        Self::from_normal(tri, rm.corners())
    }

    /// A single trivial loop: a small circle crossing `edge` twice.
    pub fn trivial_loop(tri: &Triangulation, edge: usize) -> Result<Self> {
        Self::check_supported(tri)?;
        let mut d = StrandDiagram::empty(tri);
        let a = d.new_id(Loc::Edge(edge), 0);
        let b = d.new_id(Loc::Edge(edge), 0);
        d.edges[edge] = vec![a, b];
        d.connect(handle(a, 0), handle(b, 0));
        d.connect(handle(a, 1), handle(b, 1));
        Ok(d)
    }

    /// A single loop around vertex `v`, cutting every corner at `v` once.
    pub fn puncture_loop(tri: &Triangulation, v: usize) -> Result<Self> {
        let mut w = vec![0; tri.corner_count()];
        for &c in tri.vertex_rotation(v) {
            w[c] += 2;
        }
        Self::from_normal(tri, &w)
    }

    /// Verifies that every live handle has a partner in the same triangle.
    pub fn check_consistency(&self, tri: &Triangulation) -> Result<()> {
        for (id, loc) in self.loc.iter().enumerate() {
            let sides: &[usize] = match loc {
                Loc::Edge(_) => &[0, 1],
                Loc::Corner(_) => &[0],
                Loc::Dead => &[],
            };
            for &s in sides {
                let h = handle(id as Id, s);
                let m = self.mate_of(h);
                if m == NONE {
                    return Err(Error::Invariant(format!("handle {h} has no partner")));
                }
                if self.mate_of(m) != h {
                    return Err(Error::Invariant(format!("handle {h} partner is not symmetric")));
                }
                if self.loc[hid(m) as usize] == Loc::Dead {
                    return Err(Error::Invariant(format!("handle {h} joined to a dead handle")));
                }
                if self.triangle_of(tri, m) != self.triangle_of(tri, h) {
                    return Err(Error::Invariant(format!("chord at handle {h} leaves its triangle")));
                }
            }
        }
        Ok(())
    }

    /// Chords of triangle `t` as handle pairs `(a, b)` with `a < b`.
    fn triangle_chords(&self, tri: &Triangulation, t: usize) -> Vec<(Handle, Handle)> {
        let mut hs = Vec::new();
        for i in 0..3 {
            for &p in &self.corners[3 * t + i] {
                hs.push(handle(p, 0));
            }
            let e = tri.slot_edge(t, i);
            let side = Self::slot_side(tri, t, i);
            for &p in &self.edges[e] {
                hs.push(handle(p, side));
            }
        }
        let mut out: Vec<(Handle, Handle)> = hs
            .into_iter()
            .filter_map(|h| {
                let m = self.mate_of(h);
                (h < m).then_some((h, m))
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn chord_layer(&self, c: (Handle, Handle)) -> u8 {
        self.layer[hid(c.0) as usize]
    }

    fn interleave(a: (Pos, Pos), b: (Pos, Pos)) -> bool {
        let (lo, hi) = if a.0 < a.1 { (a.0, a.1) } else { (a.1, a.0) };
        let inside = |p: Pos| lo < p && p < hi;
        inside(b.0) != inside(b.1)
    }

    fn crosses(&self, tri: &Triangulation, a: (Handle, Handle), b: (Handle, Handle)) -> bool {
        let pa = (self.pos(tri, a.0), self.pos(tri, a.1));
        let pb = (self.pos(tri, b.0), self.pos(tri, b.1));
        Self::interleave(pa, pb)
    }

    /// Interior crossings between the upper layer (0) and the lower layer (1).
    pub fn crossings(&self, tri: &Triangulation) -> Vec<Crossing> {
        let mut out = Vec::new();
        for t in 0..tri.triangle_count() {
            let chords = self.triangle_chords(tri, t);
            for (i, &a) in chords.iter().enumerate() {
                for &b in &chords[i + 1..] {
                    let (la, lb) = (self.chord_layer(a), self.chord_layer(b));
                    if la != lb && self.crosses(tri, a, b) {
                        let (upper, lower) = if la == 0 { (a, b) } else { (b, a) };
                        out.push(Crossing { triangle: t, upper, lower });
                    }
                }
            }
        }
        out
    }

    /// Vertices at which two or more arc ends meet, with their port counts.
    pub fn vertex_meetings(&self, tri: &Triangulation) -> Vec<(usize, usize)> {
        (0..tri.vertex_count())
            .filter_map(|v| {
                let n: usize = tri.vertex_rotation(v).iter().map(|&c| self.corners[c].len()).sum();
                (n >= 2).then_some((v, n))
            })
            .collect()
    }

    /// Superimposes `upper` above `lower`, in minimal position up to bigons
    /// along edges and half-bigons between ends sharing a corner.
    pub fn superimpose(tri: &Triangulation, upper: &StrandDiagram, lower: &StrandDiagram) -> Result<Self> {
        Self::check_supported(tri)?;
        let mut d = upper.clone();
        for l in d.layer.iter_mut() {
            *l = 0;
        }
        let offset = d.loc.len() as Id;
        for id in 0..lower.loc.len() {
            d.loc.push(lower.loc[id]);
            d.layer.push(1);
        }
        for &m in &lower.mate {
            d.mate.push(if m == NONE { NONE } else { m + 2 * offset });
        }
        for e in 0..tri.edge_count() {
            let extra: Vec<Id> = lower.edges[e].iter().map(|&x| x + offset).collect();
            d.edges[e].extend(extra);
        }
        for c in 0..tri.corner_count() {
            let extra: Vec<Id> = lower.corners[c].iter().map(|&x| x + offset).collect();
            d.corners[c].extend(extra);
            let mut keyed: Vec<((u8, u8), Id)> = d.corners[c].iter().map(|&p| (d.port_key(tri, c, p), p)).collect();
            keyed.sort_by_key(|&(k, _)| k);
            d.corners[c] = keyed.into_iter().map(|(_, p)| p).collect();
        }
        d.remove_bigons(tri)?;
        d.check_consistency(tri)?;
        Ok(d)
    }

    /// Ordering key of a port within its corner: ends hugging the incoming
    /// edge first (upper layer nearest the edge), then ends running into the
    /// triangle, then ends hugging the outgoing edge (upper layer last).
    fn port_key(&self, tri: &Triangulation, c: usize, p: Id) -> (u8, u8) {
        let _ = tri;
        let i = c % 3;
        let m = self.mate_of(handle(p, 0));
        let layer = self.layer[p as usize];
        if let Loc::Corner(c2) = self.loc[hid(m) as usize] {
            if c2 / 3 == c / 3 && c2 != c {
                let k = 3 - i - c2 % 3;
                if k == (i + 1) % 3 {
                    return (0, layer);
                }
                if k == (i + 2) % 3 {
                    return (2, 1 - layer);
                }
            }
        }
        (1, layer)
    }

    /// Follows two parallel strands from handles `a`, `b` (in the same
    /// triangle) until their chords cross or they separate. Returns the
    /// crossing key and the adjacent point pairs passed on the way.
    fn follow(
        &self,
        tri: &Triangulation,
        a: Handle,
        b: Handle,
    ) -> Option<((usize, Handle, Handle), Vec<(usize, Id, Id)>)> {
        let mut run = Vec::new();
        let (mut a, mut b) = (a, b);
        let limit = self.point_count() + 2;
        for _ in 0..limit {
            let (a2, b2) = (self.mate_of(a), self.mate_of(b));
            if self.crosses(tri, (a, a2), (b, b2)) {
                let t = self.triangle_of(tri, a);
                let ka = a.min(a2);
                let kb = b.min(b2);
                return Some(((t, ka.min(kb), ka.max(kb)), run));
            }
            match (self.loc[hid(a2) as usize], self.loc[hid(b2) as usize]) {
                (Loc::Edge(g), Loc::Edge(g2)) if g == g2 => {
                    let list = &self.edges[g];
                    let ia = list.iter().position(|&x| x == hid(a2))?;
                    let ib = list.iter().position(|&x| x == hid(b2))?;
                    if ia.abs_diff(ib) != 1 {
                        return None;
                    }
                    run.push((g, hid(a2), hid(b2)));
                    a = flip(a2);
                    b = flip(b2);
                }
                _ => return None,
            }
        }
        None
    }

    fn swap_points(&mut self, e: usize, x: Id, y: Id) {
        let list = &mut self.edges[e];
        let ix = list.iter().position(|&p| p == x);
        let iy = list.iter().position(|&p| p == y);
        if let (Some(ix), Some(iy)) = (ix, iy) {
            list.swap(ix, iy);
        }
    }

    fn remove_bigons(&mut self, tri: &Triangulation) -> Result<()> {
        let cap = 4 * (self.point_count() + self.port_count() + 1).pow(2);
        for _ in 0..cap {
            if !self.remove_one_bigon(tri) {
                return Ok(());
            }
        }
        Err(Error::Invariant("bigon removal does not terminate".into()))
    }

    fn remove_one_bigon(&mut self, tri: &Triangulation) -> bool {
        for e in 0..tri.edge_count() {
            for i in 0..self.edges[e].len().saturating_sub(1) {
                let (p, q) = (self.edges[e][i], self.edges[e][i + 1]);
                if self.layer[p as usize] == self.layer[q as usize] {
                    continue;
                }
                let f0 = self.follow(tri, handle(p, 0), handle(q, 0));
                let f1 = self.follow(tri, handle(p, 1), handle(q, 1));
                if let (Some((k0, r0)), Some((k1, r1))) = (f0, f1) {
                    if k0 == k1 {
                        continue;
                    }
                    self.edges[e].swap(i, i + 1);
                    for (g, x, y) in r0.into_iter().chain(r1) {
                        self.swap_points(g, x, y);
                    }
                    return true;
                }
            }
        }
        for c in 0..tri.corner_count() {
            for i in 0..self.corners[c].len().saturating_sub(1) {
                let (p, q) = (self.corners[c][i], self.corners[c][i + 1]);
                if self.layer[p as usize] == self.layer[q as usize] {
                    continue;
                }
                if let Some((_, run)) = self.follow(tri, handle(p, 0), handle(q, 0)) {
                    self.corners[c].swap(i, i + 1);
                    for (g, x, y) in run {
                        self.swap_points(g, x, y);
                    }
                    return true;
                }
            }
        }
        false
    }

    /// Enumerates the smoothing states of the crossings inside triangle `t`.
    fn triangle_states(
        &self,
        tri: &Triangulation,
        t: usize,
        fixed: Option<Smoothing>,
        pin: Option<(usize, Smoothing)>,
    ) -> Vec<TriangleState> {
        let chords = self.triangle_chords(tri, t);
        let n = chords.len();
        let pos: Vec<(Pos, Pos)> = chords.iter().map(|&(a, b)| (self.pos(tri, a), self.pos(tri, b))).collect();
        // Orient every chord from its lower to its higher boundary position.
        let lohi: Vec<(Handle, Handle, Pos, Pos)> = chords
            .iter()
            .zip(&pos)
            .map(|(&(a, b), &(pa, pb))| if pa < pb { (a, b, pa, pb) } else { (b, a, pb, pa) })
            .collect();
        let layers: Vec<u8> = chords.iter().map(|&c| self.chord_layer(c)).collect();
        let mut xs: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if layers[i] != layers[j] && Self::interleave(pos[i], pos[j]) {
                    xs.push((i, j));
                }
            }
        }
        if xs.is_empty() {
            return vec![TriangleState { pairs: chords, smoothings: Vec::new(), loops: 0 }];
        }
        // Crossings along each chord, ordered from its low end.
        let mut along: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, &(i, j)) in xs.iter().enumerate() {
            along[i].push(k);
            along[j].push(k);
        }
        let inside_key = |c: usize, k: usize| -> Pos {
            let (i, j) = xs[k];
            let other = if i == c { j } else { i };
            let (_, _, lo, hi) = lohi[c];
            let (_, _, olo, ohi) = lohi[other];
            if lo < olo && olo < hi {
                olo
            } else {
                ohi
            }
        };
        for c in 0..n {
            let mut v = std::mem::take(&mut along[c]);
            v.sort_by_key(|&k| inside_key(c, k));
            along[c] = v;
        }
        let mut index_on: Vec<[usize; 2]> = vec![[0; 2]; xs.len()];
        for (k, &(i, j)) in xs.iter().enumerate() {
            index_on[k][0] = along[i].iter().position(|&x| x == k).unwrap_or(0);
            index_on[k][1] = along[j].iter().position(|&x| x == k).unwrap_or(0);
        }
        let idx_on = |k: usize, c: usize| -> usize {
            if xs[k].0 == c {
                index_on[k][0]
            } else {
                index_on[k][1]
            }
        };
        // Rays in counterclockwise order: (chord, toward_high_end).
        let rays: Vec<[(usize, bool); 4]> = xs
            .iter()
            .map(|&(i, j)| {
                let mut r = [(i, false), (i, true), (j, false), (j, true)];
                r.sort_by_key(|&(c, hi)| if hi { lohi[c].3 } else { lohi[c].2 });
                r
            })
            .collect();
        let over_first: Vec<bool> = rays.iter().map(|r| layers[r[0].0] == 0).collect();
        let states: Vec<Vec<Smoothing>> = match fixed {
            Some(s) => vec![vec![s; xs.len()]],
            None => (0..1u64 << xs.len())
                .map(|bits| {
                    (0..xs.len()).map(|k| if bits >> k & 1 == 0 { Smoothing::A } else { Smoothing::B }).collect()
                })
                .collect(),
        };
        let states: Vec<Vec<Smoothing>> = match pin {
            Some((k, s)) => states.into_iter().filter(|st| st.get(k) == Some(&s)).collect(),
            None => states,
        };
        let mut out = Vec::with_capacity(states.len());
        for smoothing in states {
            // partner[k][r] = index of the ray joined to ray r at crossing k.
            let partner: Vec<[usize; 4]> = (0..xs.len())
                .map(|k| {
                    let s0 = [1, 0, 3, 2];
                    let s1 = [3, 2, 1, 0];
                    let use_s1 = (smoothing[k] == Smoothing::A) == over_first[k];
                    if use_s1 {
                        s1
                    } else {
                        s0
                    }
                })
                .collect();
            let ray_index = |k: usize, c: usize, hi: bool| -> usize {
                rays[k].iter().position(|&r| r == (c, hi)).expect("ray present")
            };
            let mut visited: Vec<Vec<bool>> = along.iter().map(|v| vec![false; v.len() + 1]).collect();
            // Walk from crossing index `idx` on chord `c` moving toward the
            // high end (`up`) or low end; returns the boundary handle reached.
            let walk = |mut c: usize, mut idx: isize, mut up: bool, visited: &mut Vec<Vec<bool>>| -> (usize, bool) {
                loop {
                    let m = along[c].len() as isize;
                    if up && idx >= m {
                        visited[c][m as usize] = true;
                        return (c, true);
                    }
                    if !up && idx < 0 {
                        visited[c][0] = true;
                        return (c, false);
                    }
                    let seg = if up { idx as usize } else { idx as usize + 1 };
                    visited[c][seg] = true;
                    let k = along[c][idx as usize];
                    // Arriving from the low side means we came along the ray
                    // pointing to the low end.
                    let r = ray_index(k, c, !up);
                    let (c2, hi2) = rays[k][partner[k][r]];
                    let i2 = idx_on(k, c2) as isize;
                    c = c2;
                    up = hi2;
                    idx = if up { i2 + 1 } else { i2 - 1 };
                }
            };
            let mut pairs = Vec::new();
            for c in 0..n {
                if !visited[c][0] {
                    visited[c][0] = true;
                    let (c2, hi) = walk(c, 0, true, &mut visited);
                    let a = lohi[c].0;
                    let b = if hi { lohi[c2].1 } else { lohi[c2].0 };
                    pairs.push((a.min(b), a.max(b)));
                }
                let m = along[c].len();
                if !visited[c][m] {
                    visited[c][m] = true;
                    let (c2, hi) = walk(c, m as isize - 1, false, &mut visited);
                    let a = lohi[c].1;
                    let b = if hi { lohi[c2].1 } else { lohi[c2].0 };
                    pairs.push((a.min(b), a.max(b)));
                }
            }
            let mut loops = 0;
            for c in 0..n {
                for s in 1..along[c].len() {
                    if !visited[c][s] {
                        loops += 1;
                        let mut cur = c;
                        let mut idx = s as isize;
                        let mut up = true;
                        // Traverse the closed component starting at segment s.
                        loop {
                            let seg = if up { idx as usize } else { idx as usize + 1 };
                            if visited[cur][seg] {
                                break;
                            }
                            visited[cur][seg] = true;
                            let k = along[cur][idx as usize];
                            let r = ray_index(k, cur, !up);
                            let (c2, hi2) = rays[k][partner[k][r]];
                            let i2 = idx_on(k, c2) as isize;
                            cur = c2;
                            up = hi2;
                            idx = if up { i2 + 1 } else { i2 - 1 };
                        }
                    }
                }
            }
            pairs.sort_unstable();
            out.push(TriangleState { pairs, smoothings: smoothing, loops });
        }
        out
    }

    fn triangle_options(
        &self,
        tri: &Triangulation,
        t: usize,
        mode: Mode,
        pin: Option<(usize, Smoothing)>,
    ) -> TriangleOptions {
        let mut agg: BTreeMap<Vec<(Handle, Handle)>, QPoly> = BTreeMap::new();
        for st in self.triangle_states(tri, t, None, pin) {
            let mut w = qmono(0, 1);
            for &s in &st.smoothings {
                w = qmul(&w, &mode.smoothing(s));
            }
            w = qmul(&w, &qpow(&mode.trivial_loop(), st.loops));
            let slot = agg.entry(st.pairs).or_default();
            for (e, c) in w {
                *slot.entry(e).or_insert(0) += c;
            }
        }
        TriangleOptions {
            options: agg
                .into_iter()
                .map(|(k, mut v)| {
                    v.retain(|_, c| *c != 0);
                    (k, v)
                })
                .filter(|(_, v)| !v.is_empty())
                .collect(),
        }
    }

    /// Replaces the chords of the listed triangles by the given matchings.
    fn apply_matching(&mut self, pairs: &[(Handle, Handle)]) {
        for &(a, b) in pairs {
            self.connect(a, b);
        }
    }

    /// Pairs of arc ends meeting at a puncture: `(vertex, upper port, lower port)`.
    fn end_pairs(&self, tri: &Triangulation) -> Result<Vec<(usize, Id, Id)>> {
        let mut out = Vec::new();
        for v in 0..tri.vertex_count() {
            let ports: Vec<Id> = tri.vertex_rotation(v).iter().flat_map(|&c| self.corners[c].iter().copied()).collect();
            match ports.len() {
                0 | 1 => {}
                2 => {
                    let (p, q) = (ports[0], ports[1]);
                    let (p, q) = if self.layer[p as usize] <= self.layer[q as usize] { (p, q) } else { (q, p) };
                    out.push((v, p, q));
                }
                n => {
                    return Err(Error::Unsupported(format!(
                        "{n} arc ends meet at vertex {v}; at most two are supported"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Joins the ends at ports `p` and `q` around their common puncture.
    /// Returns the number of trivial and puncture loops closed off directly.
    fn join_ends(&mut self, tri: &Triangulation, p: Id, q: Id, dir: VertexJoin) -> Result<(u32, u32)> {
        let Loc::Corner(cp) = self.loc[p as usize] else {
            return Err(Error::Invariant("port expected".into()));
        };
        let Loc::Corner(cq) = self.loc[q as usize] else {
            return Err(Error::Invariant("port expected".into()));
        };
        let hp = handle(p, 0);
        let hq = handle(q, 0);
        let forward = dir == VertexJoin::Forward;
        let same_corner_short = cp == cq && {
            let list = &self.corners[cp];
            let ip = list.iter().position(|&x| x == p).unwrap_or(0);
            let iq = list.iter().position(|&x| x == q).unwrap_or(0);
            if forward {
                iq > ip
            } else {
                iq < ip
            }
        };
        if self.mate_of(hp) == hq {
            self.remove_port(p);
            self.remove_port(q);
            return Ok(if same_corner_short { (1, 0) } else { (0, 1) });
        }
        let xp = self.mate_of(hp);
        let xq = self.mate_of(hq);
        self.remove_port(p);
        self.remove_port(q);
        if same_corner_short {
            self.connect(xp, xq);
            return Ok((0, 0));
        }
        let layer = self.layer[p as usize];
        let mut cur = cp;
        let mut prev = xp;
        for _ in 0..=tri.corner_count() {
            let t = cur / 3;
            let i = cur % 3;
            let (slot, at_start) = if forward { ((i + 2) % 3, true) } else { ((i + 1) % 3, false) };
            let n = self.insert_point(tri, t, slot, at_start, layer);
            let side = Self::slot_side(tri, t, slot);
            self.connect(prev, handle(n, side));
            prev = handle(n, 1 - side);
            cur = if forward { tri.star_next(cur) } else { tri.star_prev(cur) };
            if cur == cq {
                self.connect(prev, xq);
                return Ok((0, 0));
            }
        }
        Err(Error::Invariant("puncture join did not terminate".into()))
    }
}

/// Accumulated coefficients: curve → exponent vector → integer coefficient.
type Acc = BTreeMap<ReducedMulticurve, BTreeMap<Vec<i32>, i64>>;

fn acc_merge(mut a: Acc, b: Acc) -> Acc {
    for (k, m) in b {
        let slot = a.entry(k).or_default();
        for (e, c) in m {
            *slot.entry(e).or_insert(0) += c;
        }
    }
    a
}

fn acc_to_polys(acc: Acc, nvars: usize) -> BTreeMap<ReducedMulticurve, LaurentPoly> {
    let mut out = BTreeMap::new();
    for (k, m) in acc {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in m {
            if c != 0 {
                p.add_term(e, rat(c));
            }
        }
        if !p.is_zero() {
            out.insert(k, p);
        }
    }
    out
}

/// Exponent vectors and coefficients of `weight · ∏ v⁻¹` over the joined vertices.
fn weight_terms(tri: &Triangulation, mode: Mode, weight: &QPoly, joined: &[usize]) -> Vec<(Vec<i32>, i64)> {
    let mut base = vec![0; mode.nvars(tri)];
    for &v in joined {
        base[v] -= 1;
    }
    weight
        .iter()
        .map(|(&qe, &c)| {
            let mut e = base.clone();
            if mode == Mode::Quantum {
                e[tri.vertex_count()] = qe;
            } else {
                debug_assert_eq!(qe, 0);
            }
            (e, c)
        })
        .collect()
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

impl StrandDiagram {
    /// Slot position of edge `f` in triangle `t`.
    fn slot_position(tri: &Triangulation, t: usize, f: usize) -> Option<usize> {
        (0..3).find(|&j| tri.slot_edge(t, j) == f)
    }

    fn local_index(&self, h: Handle) -> Option<(usize, usize)> {
        let id = hid(h);
        let Loc::Edge(e) = self.loc[id as usize] else { return None };
        let list = &self.edges[e];
        let g = list.iter().position(|&x| x == id)?;
        Some((if hside(h) == 0 { g } else { list.len() - 1 - g }, list.len()))
    }

    fn has_turnback(&self) -> bool {
        for list in &self.edges {
            for &p in list {
                for s in 0..2 {
                    let m = self.mate_of(handle(p, s));
                    if hside(m) == s && list.contains(&hid(m)) && matches!(self.loc[hid(m) as usize], Loc::Edge(_)) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn collect_moves(&self, tri: &Triangulation) -> Vec<Move> {
        let mut moves = Vec::new();
        for (e, list) in self.edges.iter().enumerate() {
            for i in 0..list.len().saturating_sub(1) {
                for side in 0..2 {
                    if self.mate_of(handle(list[i], side)) == handle(list[i + 1], side) {
                        moves.push(Move::Turnback { edge: e, index: i, side });
                    }
                }
            }
        }
        for (c, ports) in self.corners.iter().enumerate() {
            let (t, i) = (c / 3, c % 3);
            for (k, &p) in ports.iter().enumerate() {
                let a = self.mate_of(handle(p, 0));
                let Loc::Edge(f) = self.loc[hid(a) as usize] else { continue };
                let Some(j) = Self::slot_position(tri, t, f) else { continue };
                let Some((local, len)) = self.local_index(a) else { continue };
                if j == (i + 2) % 3 && k + 1 == ports.len() && local == 0 {
                    moves.push(Move::Unwind { port: p, outgoing: true });
                } else if j == (i + 1) % 3 && k == 0 && local + 1 == len {
                    moves.push(Move::Unwind { port: p, outgoing: false });
                }
            }
        }
        let mut seen = vec![false; self.loc.len()];
        for list in &self.edges {
            for &start in list {
                if seen[start as usize] {
                    continue;
                }
                let mut points = Vec::new();
                let mut vertex = None;
                let mut corner_arcs_only = true;
                let mut closed = false;
                let mut cur = handle(start, 0);
                for _ in 0..=self.loc.len() {
                    points.push(hid(cur));
                    let m = self.mate_of(cur);
                    let (Loc::Edge(e1), Loc::Edge(e2)) = (self.loc[hid(cur) as usize], self.loc[hid(m) as usize])
                    else {
                        break;
                    };
                    let t = self.triangle_of(tri, cur);
                    let j1 = tri.edge_slots(e1)[hside(cur)].1;
                    let j2 = tri.edge_slots(e2)[hside(m)].1;
                    if j1 == j2 {
                        corner_arcs_only = false;
                    } else {
                        let v = tri.corner_vertex(3 * t + 3 - j1 - j2);
                        if vertex.is_some_and(|w| w != v) {
                            corner_arcs_only = false;
                        }
                        vertex = Some(v);
                    }
                    cur = flip(m);
                    if cur == handle(start, 0) {
                        closed = true;
                        break;
                    }
                }
                for &p in &points {
                    seen[p as usize] = true;
                }
                if closed && corner_arcs_only {
                    if let Some(v) = vertex {
                        if points.len() == tri.vertex_degree(v) {
                            moves.push(Move::PunctureLoop { points });
                        }
                    }
                }
            }
        }
        moves
    }

    fn apply_move(&mut self, tri: &Triangulation, mv: Move, nf: &mut (u32, u32)) -> Result<()> {
        match mv {
            Move::Turnback { edge, index, side } => {
                let (p, q) = (self.edges[edge][index], self.edges[edge][index + 1]);
                let o = 1 - side;
                let a = self.mate_of(handle(p, o));
                let b = self.mate_of(handle(q, o));
                self.remove_point(p);
                self.remove_point(q);
                if a == handle(q, o) {
                    nf.0 += 1;
                } else {
                    self.connect(a, b);
                }
            }
            Move::Unwind { port, outgoing } => {
                let Loc::Corner(c) = self.loc[port as usize] else {
                    return Err(Error::Invariant("unwind on a dead port".into()));
                };
                let a = self.mate_of(handle(port, 0));
                let b = self.mate_of(flip(a));
                let c2 = if outgoing { tri.star_next(c) } else { tri.star_prev(c) };
                if self.triangle_of(tri, flip(a)) != c2 / 3 {
                    return Err(Error::Invariant("unwind lands in the wrong triangle".into()));
                }
                self.remove_point(hid(a));
                self.corners[c].retain(|&x| x != port);
                self.loc[port as usize] = Loc::Corner(c2);
                if outgoing {
                    self.corners[c2].insert(0, port);
                } else {
                    self.corners[c2].push(port);
                }
                self.connect(handle(port, 0), b);
            }
            Move::PunctureLoop { points } => {
                for p in points {
                    self.remove_point(p);
                }
                nf.1 += 1;
            }
        }
        Ok(())
    }

    /// Normalizes a crossingless diagram with at most one arc end per
    /// puncture: cancels turnbacks, slides arc ends off edges they hug, and
    /// deletes trivial and puncture loops.
    pub fn normalize(&mut self, tri: &Triangulation, order: MoveOrder) -> Result<NormalForm> {
        let mut rng = match order {
            MoveOrder::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
            _ => None,
        };
        let mut counts = (0u32, 0u32);
        let mut size = self.point_count();
        loop {
            let mut moves = self.collect_moves(tri);
            if moves.is_empty() {
                break;
            }
            let k = match (order, rng.as_mut()) {
                (MoveOrder::First, _) => 0,
                (MoveOrder::Last, _) => moves.len() - 1,
                (MoveOrder::Seeded(_), Some(r)) => r.gen_range(0..moves.len()),
                (MoveOrder::Seeded(_), None) => 0,
            };
            let mv = moves.swap_remove(k);
            self.apply_move(tri, mv, &mut counts)?;
            let new_size = self.point_count();
            if new_size >= size {
                return Err(Error::Invariant("normalization move did not shrink the diagram".into()));
            }
            size = new_size;
        }
        let curve = self.read_curve(tri)?;
        Ok(NormalForm { trivial_loops: counts.0, puncture_loops: counts.1, curve })
    }

    /// Reads the corner coordinates of a crossingless normal diagram.
    pub fn corner_vector(&self, tri: &Triangulation) -> Result<CornerVector> {
        self.corner_vector_of(tri, None)
    }

    /// Connected components of a crossing-free diagram, each read as a
    /// reduced multicurve.
    pub fn components(&self, tri: &Triangulation) -> Result<Vec<ReducedMulticurve>> {
        let n = self.loc.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (h, &m) in self.mate.iter().enumerate() {
            if m != NONE {
                let (a, b) = (root(&mut parent, hid(h as Handle) as usize), root(&mut parent, hid(m) as usize));
                parent[a] = b;
            }
        }
        let live: BTreeSet<Id> = self.edges.iter().chain(&self.corners).flatten().copied().collect();
        let mut groups: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
        for &id in &live {
            let r = root(&mut parent, id as usize);
            groups.entry(r).or_insert_with(|| vec![false; n])[id as usize] = true;
        }
        groups
            .values()
            .map(|keep| Ok(normal_curves::validate_reduced(tri, &self.corner_vector_of(tri, Some(keep))?)?))
            .collect()
    }

    fn corner_vector_of(&self, tri: &Triangulation, keep: Option<&[bool]>) -> Result<CornerVector> {
        if !self.crossings(tri).is_empty() {
            return Err(Error::Invariant("diagram has crossings".into()));
        }
        let mut n = vec![[0i32; 3]; tri.triangle_count()];
        let mut type2 = vec![None; tri.triangle_count()];
        let mut comp_edges = BTreeSet::new();
        let slot_of = |h: Handle| -> Option<usize> {
            match self.loc[hid(h) as usize] {
                Loc::Edge(e) => Some(tri.edge_slots(e)[hside(h)].1),
                _ => None,
            }
        };
        for t in 0..tri.triangle_count() {
            for (a, b) in self.triangle_chords(tri, t) {
                if keep.is_some_and(|k| !k[hid(a) as usize]) {
                    continue;
                }
                match (self.loc[hid(a) as usize], self.loc[hid(b) as usize]) {
                    (Loc::Edge(_), Loc::Edge(_)) => {
                        let (ja, jb) = (slot_of(a).unwrap_or(0), slot_of(b).unwrap_or(0));
                        if ja == jb {
                            return Err(Error::Invariant(format!("turnback in triangle {t}")));
                        }
                        n[t][3 - ja - jb] += 1;
                    }
                    (Loc::Corner(c), Loc::Edge(_)) | (Loc::Edge(_), Loc::Corner(c)) => {
                        let j = if let Loc::Edge(_) = self.loc[hid(a) as usize] { slot_of(a) } else { slot_of(b) };
                        if j != Some(c % 3) || type2[t].is_some() {
                            return Err(Error::Invariant(format!("arc end in triangle {t} is not normal")));
                        }
                        type2[t] = Some(c % 3);
                    }
                    (Loc::Corner(c1), Loc::Corner(c2)) => {
                        if c1 == c2 {
                            return Err(Error::Invariant(format!("contractible arc in triangle {t}")));
                        }
                        comp_edges.insert(tri.slot_edge(t, 3 - c1 % 3 - c2 % 3));
                    }
                    _ => return Err(Error::Invariant("chord touches a dead handle".into())),
                }
            }
        }
        let mut w = vec![0; tri.corner_count()];
        for t in 0..tri.triangle_count() {
            let comp = (0..3).find(|&j| comp_edges.contains(&tri.slot_edge(t, j)));
            let x: [i32; 3] = if let Some(k) = comp {
                if type2[t].is_some() || n[t][(k + 1) % 3] != 0 || n[t][(k + 2) % 3] != 0 {
                    return Err(Error::Invariant(format!("edge component in triangle {t} meets other strands")));
                }
                let mut x = [-1; 3];
                x[k] = 2 * n[t][k] + 1;
                x
            } else if let Some(i) = type2[t] {
                if n[t][i] != 0 {
                    return Err(Error::Invariant(format!("arc end in triangle {t} is not normal")));
                }
                let mut x = [0; 3];
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj = if j == i { -1 } else { 2 * n[t][j] + 1 };
                }
                x
            } else {
                [2 * n[t][0], 2 * n[t][1], 2 * n[t][2]]
            };
            w[3 * t..3 * t + 3].copy_from_slice(&x);
        }
        Ok(w)
    }

    /// Reads the diagram as a reduced multicurve.
    pub fn read_curve(&self, tri: &Triangulation) -> Result<ReducedMulticurve> {
        let w = self.corner_vector(tri)?;
        normal_curves::validate_reduced(tri, &w)
            .map_err(|v| Error::Invariant(format!("normalized diagram is not reduced: {v}")))
    }

    /// Applies puncture joins, records turnbacks, normalizes, and returns the
    /// curve with its exponent terms.
    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        tri: &Triangulation,
        mode: Mode,
        weight: &QPoly,
        loops: u32,
        pairs: &[(usize, Id, Id)],
        joins: &[VertexJoin],
        order: MoveOrder,
    ) -> Result<(ReducedMulticurve, Vec<(Vec<i32>, i64)>, bool)> {
        let mut d = self.clone();
        let mut w = weight.clone();
        let mut trivial = loops;
        let mut puncture = 0;
        for (&(_, p, q), &j) in pairs.iter().zip(joins) {
            let (a, b) = d.join_ends(tri, p, q, j)?;
            trivial += a;
            puncture += b;
            w = qmul(&w, &mode.vertex(j));
        }
        let clean = trivial == 0 && puncture == 0 && !d.has_turnback();
        let nf = d.normalize(tri, order)?;
        w = qmul(&w, &qpow(&mode.trivial_loop(), trivial + nf.trivial_loops));
        w = qmul(&w, &qpow(&mode.puncture_loop(), puncture + nf.puncture_loops));
        let joined: Vec<usize> = pairs.iter().map(|&(v, _, _)| v).collect();
        Ok((nf.curve, weight_terms(tri, mode, &w, &joined), clean))
    }

    /// Expands the diagram into reduced multicurves with coefficients.
    pub fn resolve_all(
        &self,
        tri: &Triangulation,
        mode: Mode,
        order: MoveOrder,
    ) -> Result<BTreeMap<ReducedMulticurve, LaurentPoly>> {
        self.resolve_pinned(tri, mode, order, None)
    }

    /// Expands the diagram with one crossing or one puncture meeting held at
    /// a fixed resolution and every other one summed over both.
    ///
    /// Crossings are numbered as in [`StrandDiagram::crossings`].
    pub fn resolve_pinned(
        &self,
        tri: &Triangulation,
        mode: Mode,
        order: MoveOrder,
        pin: Option<Pin>,
    ) -> Result<BTreeMap<ReducedMulticurve, LaurentPoly>> {
        let pairs = self.end_pairs(tri)?;
        let mut crossing_pin: Option<(usize, usize, Smoothing)> = None;
        let mut join_pin: Option<(usize, VertexJoin)> = None;
        match pin {
            Some(Pin::Crossing(k, s)) => {
                let xs = self.crossings(tri);
                let x = xs.get(k).ok_or_else(|| Error::Index(format!("crossing {k} out of range")))?;
                let local = xs[..k].iter().filter(|y| y.triangle == x.triangle).count();
                crossing_pin = Some((x.triangle, local, s));
            }
            Some(Pin::Join(v, j)) => {
                let k = pairs
                    .iter()
                    .position(|&(w, _, _)| w == v)
                    .ok_or_else(|| Error::Invariant(format!("no arc ends meet at vertex {v}")))?;
                join_pin = Some((k, j));
            }
            None => {}
        }
        if mode == Mode::Quantum {
            for &(v, p, q) in &pairs {
                if self.layer[p as usize] == self.layer[q as usize] {
                    return Err(Error::Unsupported(format!("two ends of one factor meet at vertex {v}")));
                }
            }
        }
        let active: Vec<(usize, TriangleOptions)> = (0..tri.triangle_count())
            .map(|t| {
                let pin = crossing_pin.filter(|p| p.0 == t).map(|p| (p.1, p.2));
                (t, self.triangle_options(tri, t, mode, pin))
            })
            .filter(|(t, o)| o.options.len() != 1 || o.options[0].0 != self.triangle_chords(tri, *t))
            .collect();
        let total = active.iter().try_fold(1u64, |acc, (_, o)| acc.checked_mul(o.options.len() as u64));
        let total = match total {
            Some(n) if n <= 1 << 26 => n,
            _ => return Err(Error::Unsupported("too many smoothing states".into())),
        };
        let join_states: Vec<Vec<VertexJoin>> = (0..1u32 << pairs.len())
            .map(|bits| {
                (0..pairs.len())
                    .map(|k| if bits >> k & 1 == 0 { VertexJoin::Forward } else { VertexJoin::Backward })
                    .collect::<Vec<_>>()
            })
            .filter(|js| join_pin.is_none_or(|(k, j)| js[k] == j))
            .collect();
        let acc = (0..total)
            .into_par_iter()
            .map(|idx| -> Result<Acc> {
                let mut d = self.clone();
                let mut weight = qmono(0, 1);
                let mut rest = idx;
                for (_, o) in &active {
                    let n = o.options.len() as u64;
                    let (pairs_t, w) = &o.options[(rest % n) as usize];
                    rest /= n;
                    d.apply_matching(pairs_t);
                    weight = qmul(&weight, w);
                }
                let mut acc = Acc::new();
                for (js, joins) in join_states.iter().enumerate() {
                    let ord = match order {
                        MoveOrder::Seeded(s) => MoveOrder::Seeded(mix_seed(s, idx * 64 + js as u64)),
                        o => o,
                    };
                    let (curve, terms, _) = d.finish(tri, mode, &weight, 0, &pairs, joins, ord)?;
                    let slot = acc.entry(curve).or_default();
                    for (e, c) in terms {
                        *slot.entry(e).or_insert(0) += c;
                    }
                }
                Ok(acc)
            })
            .try_reduce(Acc::new, |a, b| Ok(acc_merge(a, b)))?;
        Ok(acc_to_polys(acc, mode.nvars(tri)))
    }

    /// Lists every individual state: one smoothing per crossing and one join
    /// side per puncture meeting.
    pub fn all_states(&self, tri: &Triangulation, mode: Mode) -> Result<Vec<ResolvedState>> {
        self.states_with(tri, mode, None, None)
    }

    /// Resolves the single state using `smoothing` at every crossing and
    /// `join` at every puncture meeting.
    pub fn resolve_state(
        &self,
        tri: &Triangulation,
        mode: Mode,
        smoothing: Smoothing,
        join: VertexJoin,
    ) -> Result<ResolvedState> {
        let joins: Vec<(usize, VertexJoin)> = self.end_pairs(tri)?.into_iter().map(|(v, _, _)| (v, join)).collect();
        self.resolve_state_with(tri, mode, smoothing, &joins)
    }

    /// Resolves the single state using `smoothing` at every crossing and the
    /// listed join side at each puncture meeting.
    pub fn resolve_state_with(
        &self,
        tri: &Triangulation,
        mode: Mode,
        smoothing: Smoothing,
        joins: &[(usize, VertexJoin)],
    ) -> Result<ResolvedState> {
        let mut v = self.states_with(tri, mode, Some(smoothing), Some(joins))?;
        v.pop().ok_or_else(|| Error::Invariant("no state".into()))
    }

    /// Puncture meetings as `(vertex, short side)`: the short side is the join
    /// direction that closes the two ends without passing another corner,
    /// defined when both ends sit in one corner.
    pub fn meetings(&self, tri: &Triangulation) -> Result<Vec<(usize, Option<VertexJoin>)>> {
        Ok(self
            .end_pairs(tri)?
            .into_iter()
            .map(|(v, p, q)| {
                let (Loc::Corner(cp), Loc::Corner(cq)) = (self.loc[p as usize], self.loc[q as usize]) else {
                    return (v, None);
                };
                if cp != cq {
                    return (v, None);
                }
                let list = &self.corners[cp];
                let ip = list.iter().position(|&x| x == p);
                let iq = list.iter().position(|&x| x == q);
                (v, Some(if iq > ip { VertexJoin::Forward } else { VertexJoin::Backward }))
            })
            .collect())
    }

    fn states_with(
        &self,
        tri: &Triangulation,
        mode: Mode,
        smoothing: Option<Smoothing>,
        join: Option<&[(usize, VertexJoin)]>,
    ) -> Result<Vec<ResolvedState>> {
        let pairs = self.end_pairs(tri)?;
        let per: Vec<Vec<TriangleState>> =
            (0..tri.triangle_count()).map(|t| self.triangle_states(tri, t, smoothing, None)).collect();
        let total: u64 = per.iter().map(|s| s.len() as u64).product();
        if total > 1 << 20 {
            return Err(Error::Unsupported("too many smoothing states".into()));
        }
        let join_states: Vec<Vec<VertexJoin>> = match join {
            Some(js) => vec![pairs
                .iter()
                .map(|&(v, _, _)| {
                    js.iter()
                        .find(|(w, _)| *w == v)
                        .map(|&(_, j)| j)
                        .ok_or_else(|| Error::Invariant(format!("no join side given for vertex {v}")))
                })
                .collect::<Result<Vec<_>>>()?],
            None => (0..1u32 << pairs.len())
                .map(|bits| {
                    (0..pairs.len())
                        .map(|k| if bits >> k & 1 == 0 { VertexJoin::Forward } else { VertexJoin::Backward })
                        .collect()
                })
                .collect(),
        };
        let mut out = Vec::new();
        for idx in 0..total {
            let mut d = self.clone();
            let mut rest = idx;
            let mut smoothings = Vec::new();
            let mut loops = 0;
            let mut weight = qmono(0, 1);
            for states in &per {
                let n = states.len() as u64;
                let st = &states[(rest % n) as usize];
                rest /= n;
                d.apply_matching(&st.pairs);
                loops += st.loops;
                for &s in &st.smoothings {
                    weight = qmul(&weight, &mode.smoothing(s));
                }
                smoothings.extend(st.smoothings.iter().copied());
            }
            for joins in &join_states {
                let (curve, terms, clean) = d.finish(tri, mode, &weight, loops, &pairs, joins, MoveOrder::First)?;
                let mut coefficient = LaurentPoly::zero(mode.nvars(tri));
                for (e, c) in terms {
                    coefficient.add_term(e, rat(c));
                }
                out.push(ResolvedState {
                    smoothings: smoothings.clone(),
                    joins: pairs.iter().zip(joins).map(|(&(v, _, _), &j)| (v, j)).collect(),
                    turnback_free: clean && loops == 0,
                    coefficient,
                    curve,
                });
            }
        }
        Ok(out)
    }
}

/// A single crossing or puncture meeting held at one resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pin {
    /// Crossing index (as listed by [`StrandDiagram::crossings`]) and its smoothing.
    Crossing(usize, Smoothing),
    /// Vertex of a puncture meeting and its join side.
    Join(usize, VertexJoin),
}

/// Product of two reduced multicurves computed from explicit diagrams, with
/// `first` drawn above `second`.
pub fn product(
    tri: &Triangulation,
    first: &ReducedMulticurve,
    second: &ReducedMulticurve,
    mode: Mode,
    order: MoveOrder,
) -> Result<BTreeMap<ReducedMulticurve, LaurentPoly>> {
    let a = StrandDiagram::from_reduced(tri, first)?;
    let b = StrandDiagram::from_reduced(tri, second)?;
    StrandDiagram::superimpose(tri, &a, &b)?.resolve_all(tri, mode, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_curves::{enumerate_reduced, flip_arc};
    use crate::triangulation::tetrahedron;

    fn one(n: usize) -> LaurentPoly {
        LaurentPoly::one(n)
    }

    #[test]
    fn reduced_curves_round_trip_through_diagrams() {
        let tri = tetrahedron();
        for c in enumerate_reduced(&tri, 2) {
            let mut d = StrandDiagram::from_reduced(&tri, &c).unwrap();
            d.check_consistency(&tri).unwrap();
            assert_eq!(d.corner_vector(&tri).unwrap(), c.corners());
            let nf = d.normalize(&tri, MoveOrder::First).unwrap();
            assert_eq!((nf.trivial_loops, nf.puncture_loops), (0, 0));
            assert_eq!(nf.curve, c);
        }
    }

    #[test]
    fn loop_constants() {
        let tri = tetrahedron();
        let empty = ReducedMulticurve::empty(&tri);
        let t =
            StrandDiagram::trivial_loop(&tri, 2).unwrap().resolve_all(&tri, Mode::Classical, MoveOrder::First).unwrap();
        assert_eq!(t[&empty], LaurentPoly::constant(4, rat(-2)));
        let p = StrandDiagram::puncture_loop(&tri, 3)
            .unwrap()
            .resolve_all(&tri, Mode::Classical, MoveOrder::First)
            .unwrap();
        assert_eq!(p[&empty], LaurentPoly::constant(4, rat(2)));
    }

    #[test]
    fn superimposing_the_empty_curve_is_the_identity() {
        let tri = tetrahedron();
        let empty = ReducedMulticurve::empty(&tri);
        for c in enumerate_reduced(&tri, 1) {
            for (a, b) in [(&c, &empty), (&empty, &c)] {
                let p = product(&tri, a, b, Mode::Classical, MoveOrder::First).unwrap();
                assert_eq!(p.len(), 1);
                assert_eq!(p[&c], one(4));
            }
        }
    }

    #[test]
    fn edge_squared_by_hand() {
        // Two parallel copies of edge 0 (ends at vertices 1 and 0). Each of the
        // two puncture meetings is joined either inside the thin bigon or
        // around the puncture, with weight v^{-1}. Inside at both ends gives a
        // trivial loop (-2), around at one end a puncture loop (+2, twice),
        // around at both ends the loop enclosing the edge.
        let tri = tetrahedron();
        let e = ReducedMulticurve::edge(&tri, 0);
        let p = product(&tri, &e, &e, Mode::Classical, MoveOrder::First).unwrap();
        let weight = LaurentPoly::monomial(vec![-1, -1, 0, 0], rat(1));
        let mut encircling = vec![0; 12];
        for c in [0, 4, 8, 10] {
            encircling[c] = 2;
        }
        let encircling = normal_curves::validate_reduced(&tri, &encircling).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[&ReducedMulticurve::empty(&tri)], weight.scale(&rat(2)));
        assert_eq!(p[&encircling], weight);
    }

    #[test]
    fn ptolemy_product_has_two_unit_terms() {
        let tri = tetrahedron();
        for e in 0..tri.edge_count() {
            let p = product(
                &tri,
                &ReducedMulticurve::edge(&tri, e),
                &flip_arc(&tri, e).unwrap(),
                Mode::Classical,
                MoveOrder::First,
            )
            .unwrap();
            assert_eq!(p.len(), 2);
            assert!(p.values().all(|c| *c == one(4)));
        }
    }

    #[test]
    fn classical_products_commute_and_ignore_move_order() {
        let tri = tetrahedron();
        let curves = enumerate_reduced(&tri, 1);
        for a in curves.iter().step_by(3) {
            for b in curves.iter().step_by(4) {
                let ab = product(&tri, a, b, Mode::Classical, MoveOrder::First).unwrap();
                assert_eq!(ab, product(&tri, b, a, Mode::Classical, MoveOrder::First).unwrap());
                assert_eq!(ab, product(&tri, a, b, Mode::Classical, MoveOrder::Last).unwrap());
                assert_eq!(ab, product(&tri, a, b, Mode::Classical, MoveOrder::Seeded(9)).unwrap());
            }
        }
    }

    #[test]
    fn pinning_partitions_the_state_sum() {
        let tri = tetrahedron();
        let a = StrandDiagram::from_reduced(&tri, &ReducedMulticurve::edge(&tri, 0)).unwrap();
        let b = StrandDiagram::from_reduced(&tri, &flip_arc(&tri, 0).unwrap()).unwrap();
        let d = StrandDiagram::superimpose(&tri, &a, &b).unwrap();
        assert_eq!(d.crossings(&tri).len(), 1);
        let full = d.resolve_all(&tri, Mode::Classical, MoveOrder::First).unwrap();
        let mut sum: BTreeMap<ReducedMulticurve, LaurentPoly> = BTreeMap::new();
        for s in [Smoothing::A, Smoothing::B] {
            for (k, c) in d.resolve_pinned(&tri, Mode::Classical, MoveOrder::First, Some(Pin::Crossing(0, s))).unwrap()
            {
                let acc = sum.entry(k).or_insert_with(|| LaurentPoly::zero(4));
                *acc = acc.add(&c).unwrap();
            }
        }
        assert_eq!(sum, full);
    }
}
