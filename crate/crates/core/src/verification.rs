//! Seeded, reproducible verification suites with machine-readable reports.
//!
//! Each suite enumerates curves (or samples them with a seeded ChaCha
//! generator), checks one family of statements, and returns a [`Report`]
//! `{suite, instances, failures, seed, stats}`. A suite passes when its
//! failure count is zero; at most [`MAX_WITNESSES`] failures are kept as
//! witnesses. Reports merge associatively.
//!
//! | suite            | statements checked                                                       |
//! |------------------|--------------------------------------------------------------------------|
//! | `coordinates`    | the coordinate conditions accept exactly the realizable reduced vectors   |
//! | `resolutions`    | fast `P`/`N` against the oracle, degree shift, class shift, `π` tables, injectivity, leading terms, extremal changes |
//! | `nonzerodivisor` | `e·β ≠ 0` for random combinations, leading terms are `P`/`N` images, splitting by class |
//! | `localization`   | round trips, positivity, `Φ` multiplicative, distinct expansions of full rank |
//! | `quantum`        | classical specialization, vanishing commutator, associativity, first-order ratio |
//! | `bracket`        | antisymmetry, central vertices, Leibniz, Jacobi                           |
//! | `constants`      | loop values and the Ptolemy product                                      |
//! | `confluence`     | move order and thread count never change serialized output               |

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve_algebra::{
    edge_degree_with, fast_resolution_with_indices, leading_terms, oracle_resolution, rmc_class, AlgebraElement,
    CurveAlgebra, Endpoint, Sign,
};
use crate::error::{Error, Result};
use crate::goldman_bracket::bracket;
use crate::lambda_expansion::{numeric_evaluate, rank, Expander};
use crate::laurent::{rat, LaurentPoly, Rational};
use crate::normal_curves::{self, enumerate_reduced, flip_arc, format_corners, ReducedMulticurve};
use crate::quantum_skein::{commutator, first_order, qbasis, qmultiply, specialize_classical};
use crate::strand_oracle::{self, Mode, MoveOrder, StrandDiagram};
use crate::triangulation::Triangulation;

/// Maximum number of failure witnesses kept in a report.
pub const MAX_WITNESSES: usize = 20;

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 8] =
    ["coordinates", "resolutions", "nonzerodivisor", "localization", "quantum", "bracket", "constants", "confluence"];

/// Outcome of one suite.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    /// Suite name.
    pub suite: String,
    /// Number of checked instances.
    pub instances: u64,
    /// Total number of failed checks.
    pub failure_count: u64,
    /// Up to [`MAX_WITNESSES`] failure witnesses.
    pub failures: Vec<Value>,
    /// Seed of the random sampler, when the suite samples.
    pub seed: Option<u64>,
    /// Suite-specific counters.
    pub stats: BTreeMap<String, Value>,
}

impl Report {
    /// An empty report.
    pub fn new(suite: &str, seed: Option<u64>) -> Self {
        Report {
            suite: suite.to_string(),
            instances: 0,
            failure_count: 0,
            failures: Vec::new(),
            seed,
            stats: BTreeMap::new(),
        }
    }

    /// True when no check failed.
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Records one failure with its witness.
    pub fn fail(&mut self, witness: Value) {
        self.failure_count += 1;
        if let Some(check) = witness.get("check").and_then(Value::as_str) {
            self.count(&format!("failed: {check}"), 1);
        }
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(witness);
        }
    }

    /// Records a check that passes when `ok` holds.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        if !ok {
            self.fail(witness());
        }
    }

    /// Adds `k` to a numeric counter.
    pub fn count(&mut self, key: &str, k: u64) {
        let v = self.stats.entry(key.to_string()).or_insert(json!(0));
        *v = json!(v.as_u64().unwrap_or(0) + k);
    }

    /// Combines two reports of the same suite.
    pub fn merge(mut self, other: Report) -> Report {
        self.instances += other.instances;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(f);
            }
        }
        for (k, v) in other.stats {
            match (self.stats.get(&k).and_then(Value::as_u64), v.as_u64()) {
                (Some(a), Some(b)) => {
                    self.stats.insert(k, json!(a + b));
                }
                _ => {
                    self.stats.insert(k, v);
                }
            }
        }
        self
    }

    /// Number of failures recorded under the witness key `"check": check`.
    pub fn failures_of(&self, check: &str) -> u64 {
        self.stats.get(&format!("failed: {check}")).and_then(Value::as_u64).unwrap_or(0)
    }

    /// Numeric counter, zero when absent.
    pub fn stat(&self, key: &str) -> u64 {
        self.stats.get(key).and_then(Value::as_u64).unwrap_or(0)
    }

    /// JSON form.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

/// Parameters shared by the suites.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Per-corner bound, doubled.
    pub bound_doubled: i32,
    /// Seed of the random sampler.
    pub seed: u64,
    /// Number of random trials per edge or sampled tuples.
    pub trials: usize,
    /// Restrict edge-indexed suites to one edge.
    pub edge: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { bound_doubled: 1, seed: 0, trials: 200, edge: None }
    }
}

/// Runs the named suite.
pub fn run_suite(alg: &CurveAlgebra, name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let tri = alg.triangulation();
    match name {
        "coordinates" => suite_coordinates(tri, cfg.bound_doubled),
        "resolutions" => suite_resolutions(alg, cfg.edge, cfg.bound_doubled),
        "nonzerodivisor" => suite_nonzerodivisor(alg, cfg.edge, cfg.bound_doubled, cfg.trials, cfg.seed),
        "localization" => suite_localization(alg, cfg.bound_doubled, cfg.seed),
        "quantum" => suite_quantum(alg, cfg.bound_doubled, cfg.trials, cfg.seed),
        "bracket" => suite_bracket(alg, cfg.bound_doubled, cfg.trials, cfg.trials / 5, cfg.seed),
        "constants" => suite_constants(alg),
        "confluence" => suite_confluence(alg, cfg.bound_doubled, cfg.trials, cfg.seed),
        other => Err(Error::Unsupported(format!("unknown suite '{other}'; expected one of {}", SUITES.join(", ")))),
    }
}

fn edges_of(tri: &Triangulation, edge: Option<usize>) -> Result<Vec<usize>> {
    match edge {
        Some(e) if e < tri.edge_count() => Ok(vec![e]),
        Some(e) => Err(Error::Index(format!("edge {e} (triangulation has {} edges)", tri.edge_count()))),
        None => Ok((0..tri.edge_count()).collect()),
    }
}

fn curve_json(c: &ReducedMulticurve) -> Value {
    json!(format_corners(c.corners()))
}

// ---------------------------------------------------------------------------
// coordinates

/// Geometric pieces of one triangle read from its three doubled values:
/// corner-arc counts, the corner holding an arc end, and the position of an
/// edge component. `None` when no piece set has these coordinates.
fn decode_triangle(x: [i32; 3]) -> Option<([i32; 3], Option<usize>, Option<usize>)> {
    let negatives: Vec<usize> = (0..3).filter(|&i| x[i] < 0).collect();
    if x.iter().any(|&v| v < -1) {
        return None;
    }
    let odd = x.iter().all(|v| v.rem_euclid(2) == 1);
    let even = x.iter().all(|v| v.rem_euclid(2) == 0);
    match negatives.len() {
        0 if even => Some(([x[0] / 2, x[1] / 2, x[2] / 2], None, None)),
        1 if odd => {
            let i = negatives[0];
            let mut arcs = [0; 3];
            for j in 0..3 {
                if j != i {
                    arcs[j] = (x[j] - 1) / 2;
                }
            }
            Some((arcs, Some(i), None))
        }
        2 if odd => {
            let k = (0..3).find(|j| !negatives.contains(j))?;
            let mut arcs = [0; 3];
            arcs[k] = (x[k] - 1) / 2;
            Some((arcs, None, Some(k)))
        }
        _ => None,
    }
}

/// Oracle verdict on one vector: builds the curve piece by piece, glues the
/// triangles, and checks the result geometrically (at most one arc end per
/// puncture, no loop removed by normalization, the same vector read back).
pub fn oracle_realizable_reduced(tri: &Triangulation, w: &[i32]) -> Result<bool> {
    let mut pieces = Vec::with_capacity(tri.triangle_count());
    for t in 0..tri.triangle_count() {
        match decode_triangle([w[3 * t], w[3 * t + 1], w[3 * t + 2]]) {
            Some(p) => pieces.push(p),
            None => return Ok(false),
        }
    }
    // Points on slot j of a triangle: corner arcs at the two corners touching
    // the slot, plus the arc from the opposite corner; edge components lie
    // on their edge without crossing it.
    let slot_points = |t: usize, j: usize| -> i32 {
        let (arcs, end, _) = pieces[t];
        arcs[(j + 1) % 3] + arcs[(j + 2) % 3] + i32::from(end == Some(j))
    };
    for e in 0..tri.edge_count() {
        let [(t0, j0), (t1, j1)] = tri.edge_slots(e);
        if slot_points(t0, j0) != slot_points(t1, j1) {
            return Ok(false);
        }
        let c0 = pieces[t0].2 == Some(j0);
        let c1 = pieces[t1].2 == Some(j1);
        if c0 != c1 {
            return Ok(false);
        }
    }
    let mut ends = vec![0usize; tri.vertex_count()];
    for (t, p) in pieces.iter().enumerate() {
        if let Some(i) = p.1 {
            ends[tri.corner_vertex(3 * t + i)] += 1;
        }
    }
    for e in 0..tri.edge_count() {
        let [(t, j), _] = tri.edge_slots(e);
        if pieces[t].2 == Some(j) {
            let (a, b) = tri.edge_ends(e);
            ends[a] += 1;
            ends[b] += 1;
        }
    }
    if ends.iter().any(|&k| k > 1) {
        return Ok(false);
    }
    let mut d = StrandDiagram::from_normal(tri, w)?;
    match d.normalize(tri, MoveOrder::First) {
        Ok(nf) => Ok(nf.trivial_loops == 0 && nf.puncture_loops == 0 && nf.curve.corners() == w),
        Err(Error::Coordinates(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Compares `validate_reduced` with the oracle on every vector of the grid
/// `[−½, bound]^C`.
pub fn suite_coordinates(tri: &Triangulation, bound_doubled: i32) -> Result<Report> {
    let mut r = Report::new("coordinates", None);
    let c = tri.corner_count();
    let base = (bound_doubled + 2) as u64;
    let total = base.checked_pow(c as u32).filter(|&n| n <= 1 << 32).ok_or_else(|| {
        Error::Unsupported(format!("grid of {base}^{c} vectors is too large for the coordinates suite"))
    })?;
    let mut w = vec![-1i32; c];
    let mut accepted = 0u64;
    for _ in 0..total {
        let fast = normal_curves::validate_reduced(tri, &w).is_ok();
        // Vectors rejected by the per-triangle decoding are cheap; build the
        // diagram only for vectors with a chance of being realizable.
        let slow = oracle_realizable_reduced(tri, &w)?;
        if fast {
            accepted += 1;
        }
        r.check(fast == slow, || json!({"vector": format_corners(&w), "validate_reduced": fast, "oracle": slow}));
        // Next grid vector, last coordinate fastest.
        for i in (0..c).rev() {
            if w[i] < bound_doubled {
                w[i] += 1;
                break;
            }
            w[i] = -1;
        }
    }
    r.instances = total;
    r.count("accepted", accepted);
    Ok(r)
}

// ---------------------------------------------------------------------------
// resolutions

/// Expected doubled change `π(Pα) − π(α)` from the case table, or `None`
/// when `(m, n)` falls outside the listed cases.
pub fn pi_table(j: u8, endpoint: Option<Endpoint>, m: usize, n: usize, s: usize, t: usize) -> Option<(i32, i32)> {
    let base = match (j, endpoint) {
        (0, _) => (0, 0),
        (1, Some(Endpoint::Bottom)) => (0, 2),
        (2, _) => (2, 2),
        _ => return None,
    };
    let m_mid = m != 0 && m != s;
    let n_mid = n != 0 && n != t;
    let shift = if m_mid && n_mid {
        (0, 0)
    } else if (m_mid && n == 0) || (m == s && n_mid) {
        (-1, 0)
    } else if (m_mid && n == t) || (m == 0 && n_mid) {
        (0, -1)
    } else if (m == 0 && n == 0) || (m == s && n == t) {
        (-1, -1)
    } else {
        return None;
    };
    Some((base.0 + shift.0, base.1 + shift.1))
}

/// Fast resolutions against the oracle and the bookkeeping lemmas, for every
/// enumerated curve and every edge (or the given edge).
pub fn suite_resolutions(alg: &CurveAlgebra, edge: Option<usize>, bound_doubled: i32) -> Result<Report> {
    let tri = alg.triangulation();
    let mut r = Report::new("resolutions", None);
    if !tri.is_locally_planar() {
        return Err(Error::NotLocallyPlanar("the resolution suite needs a locally planar triangulation".into()));
    }
    let curves = enumerate_reduced(tri, bound_doubled);
    for e in edges_of(tri, edge)? {
        let l = tri.star_labels(e)?;
        let (s, t) = (l.s(), l.t());
        let mut seen: HashMap<(Sign, u8, ReducedMulticurve), ReducedMulticurve> = HashMap::new();
        for alpha in &curves {
            r.instances += 1;
            let class = rmc_class(tri, e, alpha);
            let deg = edge_degree_with(&l, alpha)?;
            let mut images = BTreeSet::new();
            for sign in [Sign::Positive, Sign::Negative] {
                let (fast, idx) = fast_resolution_with_indices(tri, e, alpha, sign)?;
                let oracle = oracle_resolution(tri, e, alpha, sign)?;
                r.check(fast == oracle, || {
                    json!({"check": "fast vs oracle", "edge": e, "sign": format!("{sign:?}"), "alpha": curve_json(alpha),
                           "fast": curve_json(&fast.curve), "oracle": curve_json(&oracle.curve)})
                });
                let d2 = edge_degree_with(&l, &fast.curve)?;
                r.check(d2 == deg + class.j as i32 - 1, || {
                    json!({"check": "degree shift", "edge": e, "alpha": curve_json(alpha), "deg": deg, "image_deg": d2})
                });
                let c2 = rmc_class(tri, e, &fast.curve);
                let shift_ok = c2.j == 2 - class.j
                    && match class.endpoint {
                        Some(Endpoint::Top) => c2.endpoint == Some(Endpoint::Bottom),
                        Some(Endpoint::Bottom) => c2.endpoint == Some(Endpoint::Top),
                        None => true,
                    };
                r.check(shift_ok, || {
                    json!({"check": "class shift", "edge": e, "alpha": curve_json(alpha), "from": class.to_string(), "to": c2.to_string()})
                });
                if let Some(prev) = seen.insert((sign, class.j, fast.curve.clone()), alpha.clone()) {
                    r.check(prev == *alpha, || {
                        json!({"check": "injectivity", "edge": e, "sign": format!("{sign:?}"), "first": curve_json(&prev), "second": curve_json(alpha)})
                    });
                }
                if sign == Sign::Positive && !alpha.contains_edge(tri, e) {
                    let w = alpha.corners();
                    let got = (fast.curve.at(l.a[s]) - w[l.a[s]], fast.curve.at(l.b[t]) - w[l.b[t]]);
                    match pi_table(class.j, class.endpoint, idx.m, idx.n, s, t) {
                        Some(expected) => {
                            r.count("pi_covered", 1);
                            r.check(got == expected, || {
                                json!({"check": "pi table", "edge": e, "alpha": curve_json(alpha), "class": class.to_string(),
                                       "m": idx.m, "n": idx.n, "expected_doubled": [expected.0, expected.1], "got_doubled": [got.0, got.1]})
                            });
                        }
                        None => r.count(&format!("pi_uncovered_{class}"), 1),
                    }
                }
                images.insert(fast.curve);
            }
            // The leading terms of e·α are among {Pα, Nα}.
            let prod = alg.multiply_basis(&ReducedMulticurve::edge(tri, e), alpha)?;
            let lead = leading_terms(tri, e, &prod)?;
            let lead_deg = lead.terms().keys().next().map(|k| edge_degree_with(&l, k)).transpose()?;
            r.check(
                lead.terms().keys().all(|k| images.contains(k)) && lead_deg == Some(deg + class.j as i32 - 1),
                || {
                    json!({"check": "leading terms", "edge": e, "alpha": curve_json(alpha),
                          "leading": lead.terms().keys().map(curve_json).collect::<Vec<_>>()})
                },
            );
            // Extremal change: strict inequalities at b_{t-1} and b_1.
            let p = fast_resolution_with_indices(tri, e, alpha, Sign::Positive)?.0.curve;
            let n = fast_resolution_with_indices(tri, e, alpha, Sign::Negative)?.0.curve;
            let pi = (alpha.at(l.a[s]), alpha.at(l.b[t]));
            let d2 = 2 * deg;
            let high = match (class.j, class.endpoint) {
                (0, _) => d2 > 0 && pi == (d2, d2),
                (1, Some(Endpoint::Bottom)) => pi == (d2 + 1, d2),
                (2, _) => pi == (d2 + 1, d2 + 1),
                _ => false,
            };
            let low = match (class.j, class.endpoint) {
                (0, _) => d2 > 0 && pi == (0, 0),
                (1, Some(Endpoint::Bottom)) => pi == (0, -1),
                (2, _) => pi == (-1, -1),
                _ => false,
            };
            if high && low {
                // The two hypotheses coincide only on a collapsed square
                // (`RMC²` with degree −1), where the two strict inequalities
                // on the same corner contradict each other for `t = 2`.
                r.count("extremal_degenerate", 1);
            }
            let low = low && !high;
            if high {
                r.count("extremal_high", 1);
                r.check(
                    p.at(l.b[t - 1]) > n.at(l.b[t - 1]),
                    || json!({"check": "extremal high", "edge": e, "alpha": curve_json(alpha)}),
                );
            }
            if low {
                r.count("extremal_low", 1);
                r.check(
                    p.at(l.b[1]) < n.at(l.b[1]),
                    || json!({"check": "extremal low", "edge": e, "alpha": curve_json(alpha)}),
                );
            }
        }
    }
    r.count("curves", curves.len() as u64);
    Ok(r)
}

// ---------------------------------------------------------------------------
// nonzerodivisor

fn random_combination(
    rng: &mut ChaCha8Rng,
    curves: &[ReducedMulticurve],
    nvars: usize,
    graded: bool,
) -> AlgebraElement {
    let k = rng.gen_range(1..=4.min(curves.len()));
    let mut out = AlgebraElement::zero(nvars);
    for c in curves.choose_multiple(rng, k) {
        let mut value = 0;
        while value == 0 {
            value = rng.gen_range(-3..=3);
        }
        let exps: Vec<i32> = if graded { (0..nvars).map(|_| rng.gen_range(-1..=1)).collect() } else { vec![0; nvars] };
        out.add_term(c.clone(), &LaurentPoly::monomial(exps, rat(value)));
    }
    out
}

/// Random nonzero combinations `β`: `e·β ≠ 0`, every leading term of `e·β`
/// is `P` or `N` of a component of `β` of maximal shifted degree, and
/// `e·β = 0` exactly when every class part `e·β^j` vanishes.
pub fn suite_nonzerodivisor(
    alg: &CurveAlgebra,
    edge: Option<usize>,
    bound_doubled: i32,
    trials: usize,
    seed: u64,
) -> Result<Report> {
    let tri = alg.triangulation();
    let mut r = Report::new("nonzerodivisor", Some(seed));
    let curves = enumerate_reduced(tri, bound_doubled);
    let nv = alg.nvars();
    for e in edges_of(tri, edge)? {
        let l = tri.star_labels(e)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (e as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let edge_el = alg.edge(e);
        for trial in 0..trials {
            r.instances += 1;
            let beta = random_combination(&mut rng, &curves, nv, trial % 2 == 1);
            let prod = alg.multiply(&edge_el, &beta)?;
            let witness = || json!({"beta": beta.to_json()});
            if prod.is_zero() {
                r.fail(json!({"check": "e·β ≠ 0", "edge": e, "beta": beta.to_json()}));
                continue;
            }
            // Split by class.
            let mut parts_zero = true;
            for j in 0..3u8 {
                let part = AlgebraElement::from_terms(
                    nv,
                    beta.terms()
                        .iter()
                        .filter(|(k, _)| rmc_class(tri, e, k).j == j)
                        .map(|(k, c)| (k.clone(), c.clone()))
                        .collect(),
                );
                if part.is_zero() {
                    continue;
                }
                let ep = alg.multiply(&edge_el, &part)?;
                parts_zero &= ep.is_zero();
                r.check(
                    ep.terms().keys().all(|k| rmc_class(tri, e, k).j == 2 - j),
                    || json!({"check": "class shift of e·β^j", "edge": e, "j": j, "beta": beta.to_json()}),
                );
            }
            r.check(!parts_zero, || json!({"check": "split", "edge": e, "beta": beta.to_json()}));
            // Leading terms come from P/N of components of maximal shifted degree.
            let shifted: Vec<(i32, &ReducedMulticurve)> = beta
                .terms()
                .keys()
                .map(|k| edge_degree_with(&l, k).map(|d| (d + rmc_class(tri, e, k).j as i32 - 1, k)))
                .collect::<Result<_>>()?;
            let top = shifted.iter().map(|x| x.0).max().unwrap_or(0);
            let mut images = BTreeSet::new();
            for (_, k) in shifted.iter().filter(|x| x.0 == top) {
                for sign in [Sign::Positive, Sign::Negative] {
                    images.insert(fast_resolution_with_indices(tri, e, k, sign)?.0.curve);
                }
            }
            let lead = leading_terms(tri, e, &prod)?;
            let ok = lead.terms().keys().all(|k| images.contains(k))
                && lead.terms().keys().all(|k| edge_degree_with(&l, k).is_ok_and(|d| d == top));
            if !ok {
                r.fail(json!({"check": "leading terms are P/N images", "edge": e, "beta": witness()["beta"].clone()}));
            }
        }
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// localization

/// Round trips and positivity for every enumerated curve, `Φ` multiplicative
/// on sampled pairs, and distinct expansions with a full-rank evaluation
/// matrix at five seeded positive integer points.
pub fn suite_localization(alg: &CurveAlgebra, bound_doubled: i32, seed: u64) -> Result<Report> {
    let tri = alg.triangulation();
    let mut r = Report::new("localization", Some(seed));
    let x = Expander::new(alg);
    let curves = enumerate_reduced(tri, bound_doubled);
    r.count("curves", curves.len() as u64);
    let mut expansions = Vec::with_capacity(curves.len());
    for c in &curves {
        r.instances += 1;
        let rt = x.verify_localization_roundtrip(c)?;
        r.check(rt.polynomial && rt.positive && rt.agree, || {
            json!({"check": "round trip", "curve": curve_json(c), "polynomial": rt.polynomial, "positive": rt.positive, "agree": rt.agree})
        });
        expansions.push(x.phi_curve(c)?);
    }
    let distinct: BTreeSet<&LaurentPoly> = expansions.iter().collect();
    r.check(
        distinct.len() == expansions.len(),
        || json!({"check": "distinct expansions", "curves": expansions.len(), "distinct": distinct.len()}),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<Rational>> =
        (0..5).map(|_| (0..tri.edge_count()).map(|_| rat(rng.gen_range(1..=9))).collect()).collect();
    let rows: Vec<Vec<Rational>> = expansions
        .iter()
        .map(|p| points.iter().map(|pt| numeric_evaluate(p, pt)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let rk = rank(&rows);
    let full = rows.len().min(points.len());
    r.stats.insert("rank".into(), json!(rk));
    r.check(rk == full, || json!({"check": "evaluation rank", "rank": rk, "expected": full}));
    let vectors: BTreeSet<&Vec<Rational>> = rows.iter().collect();
    r.stats.insert("distinct_value_vectors".into(), json!(vectors.len()));
    let nv = alg.nvars();
    for _ in 0..50.min(curves.len() * curves.len()) {
        let a = &curves[rng.gen_range(0..curves.len())];
        let b = &curves[rng.gen_range(0..curves.len())];
        r.instances += 1;
        let p = alg.multiply_basis(a, b)?;
        let clear: Vec<i32> = (0..nv)
            .map(|v| p.terms().values().filter_map(|c| c.min_exponent(v)).min().unwrap_or(0).min(0).abs())
            .collect();
        let cleared =
            AlgebraElement::from_terms(nv, p.terms().iter().map(|(k, c)| (k.clone(), c.shift(&clear))).collect());
        let mut rhs = x.phi_curve(a)?.mul(&x.phi_curve(b)?)?;
        for (v, &k) in clear.iter().enumerate() {
            rhs = rhs.mul(&x.phi_vertex(v).pow(k as u32))?;
        }
        r.check(
            x.phi_expand(&cleared)? == rhs,
            || json!({"check": "Φ multiplicative", "a": curve_json(a), "b": curve_json(b)}),
        );
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// quantum

fn sample_pairs(
    rng: &mut ChaCha8Rng,
    curves: &[ReducedMulticurve],
    n: usize,
) -> Vec<(ReducedMulticurve, ReducedMulticurve)> {
    (0..n)
        .map(|_| (curves[rng.gen_range(0..curves.len())].clone(), curves[rng.gen_range(0..curves.len())].clone()))
        .collect()
}

/// Specialization and commutator checks on sampled pairs, associativity on
/// sampled triples, and the ratio between first-order commutator and bracket.
pub fn suite_quantum(alg: &CurveAlgebra, bound_doubled: i32, pairs: usize, seed: u64) -> Result<Report> {
    let tri = alg.triangulation();
    let mut r = Report::new("quantum", Some(seed));
    let curves = enumerate_reduced(tri, bound_doubled);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios: BTreeMap<String, u64> = BTreeMap::new();
    for (a, b) in sample_pairs(&mut rng, &curves, pairs) {
        r.instances += 1;
        let (qa, qb) = (qbasis(alg, a.clone()), qbasis(alg, b.clone()));
        let q = qmultiply(alg, &qa, &qb)?;
        let classical = alg.multiply_basis(&a, &b)?;
        r.check(
            specialize_classical(alg, &q)? == classical,
            || json!({"check": "specialization", "a": curve_json(&a), "b": curve_json(&b)}),
        );
        let comm = commutator(alg, &qa, &qb)?;
        r.check(
            specialize_classical(alg, &comm)?.is_zero(),
            || json!({"check": "commutator at q=1", "a": curve_json(&a), "b": curve_json(&b)}),
        );
        let fo = first_order(alg, &comm)?;
        let br = bracket(
            alg,
            &AlgebraElement::basis(a.clone(), alg.nvars()),
            &AlgebraElement::basis(b.clone(), alg.nvars()),
        )?;
        let key = if br.is_zero() && fo.is_zero() {
            "both zero".to_string()
        } else if br.is_zero() || fo.is_zero() {
            "one side zero".to_string()
        } else if fo == br.scale_rational(&rat(-2)) {
            "-2".to_string()
        } else {
            "not proportional by -2".to_string()
        };
        *ratios.entry(key).or_default() += 1;
    }
    for _ in 0..(pairs / 4).max(1) {
        r.instances += 1;
        let pick = |rng: &mut ChaCha8Rng| qbasis(alg, curves[rng.gen_range(0..curves.len())].clone());
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let left = qmultiply(alg, &qmultiply(alg, &a, &b)?, &c)?;
        let right = qmultiply(alg, &a, &qmultiply(alg, &b, &c)?)?;
        r.check(
            left == right,
            || json!({"check": "associativity", "a": a.to_json(), "b": b.to_json(), "c": c.to_json()}),
        );
    }
    r.stats.insert("first_order_over_bracket".into(), json!(ratios));
    Ok(r)
}

// ---------------------------------------------------------------------------
// bracket

/// Antisymmetry and central vertices on sampled pairs, Leibniz and Jacobi on
/// sampled triples.
pub fn suite_bracket(
    alg: &CurveAlgebra,
    bound_doubled: i32,
    leibniz: usize,
    jacobi: usize,
    seed: u64,
) -> Result<Report> {
    let tri = alg.triangulation();
    let nv = alg.nvars();
    let mut r = Report::new("bracket", Some(seed));
    let curves = enumerate_reduced(tri, bound_doubled);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = |c: &ReducedMulticurve| AlgebraElement::basis(c.clone(), nv);
    let mut nonzero = 0u64;
    // All pairs on small enumerations, `leibniz` sampled pairs otherwise.
    let pairs: Vec<(&ReducedMulticurve, &ReducedMulticurve)> = if curves.len() <= 40 {
        curves.iter().flat_map(|a| curves.iter().map(move |b| (a, b))).collect()
    } else {
        (0..leibniz)
            .map(|_| (&curves[rng.gen_range(0..curves.len())], &curves[rng.gen_range(0..curves.len())]))
            .collect()
    };
    for (a, b) in pairs {
        r.instances += 1;
        {
            let ab = bracket(alg, &basis(a), &basis(b))?;
            let ba = bracket(alg, &basis(b), &basis(a))?;
            if !ab.is_zero() {
                nonzero += 1;
            }
            r.check(ab == ba.neg(), || json!({"check": "antisymmetry", "a": curve_json(a), "b": curve_json(b)}));
        }
    }
    for a in &curves {
        for v in 0..nv {
            r.instances += 1;
            r.check(
                bracket(alg, &alg.vertex(v), &basis(a))?.is_zero(),
                || json!({"check": "{v, β} = 0", "v": v, "beta": curve_json(a)}),
            );
        }
    }
    r.count("nonzero_pairs", nonzero);
    let pick = |rng: &mut ChaCha8Rng| basis(&curves[rng.gen_range(0..curves.len())]);
    for _ in 0..leibniz {
        r.instances += 1;
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let left = bracket(alg, &a, &alg.multiply(&b, &c)?)?;
        let right = alg.multiply(&bracket(alg, &a, &b)?, &c)?.add(&alg.multiply(&b, &bracket(alg, &a, &c)?)?)?;
        r.check(left == right, || json!({"check": "Leibniz", "a": a.to_json(), "b": b.to_json(), "c": c.to_json()}));
    }
    for _ in 0..jacobi {
        r.instances += 1;
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let sum = bracket(alg, &a, &bracket(alg, &b, &c)?)?
            .add(&bracket(alg, &b, &bracket(alg, &c, &a)?)?)?
            .add(&bracket(alg, &c, &bracket(alg, &a, &b)?)?)?;
        r.check(sum.is_zero(), || json!({"check": "Jacobi", "a": a.to_json(), "b": b.to_json(), "c": c.to_json()}));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// constants

fn q_poly(nvars: usize, terms: &[(i32, i64)]) -> LaurentPoly {
    let mut p = LaurentPoly::zero(nvars);
    for &(k, c) in terms {
        let mut e = vec![0; nvars];
        e[nvars - 1] = k;
        p.add_term(e, rat(c));
    }
    p
}

/// Loop values in both modes and the Ptolemy product of two crossing
/// diagonals of a quadrilateral.
pub fn suite_constants(alg: &CurveAlgebra) -> Result<Report> {
    let tri = alg.triangulation();
    let mut r = Report::new("constants", None);
    let empty = ReducedMulticurve::empty(tri);
    let nv = alg.nvars();
    let cases = [
        (StrandDiagram::trivial_loop(tri, 0)?, Mode::Classical, LaurentPoly::constant(nv, rat(-2)), "trivial loop"),
        (StrandDiagram::puncture_loop(tri, 0)?, Mode::Classical, LaurentPoly::constant(nv, rat(2)), "puncture loop"),
        (
            StrandDiagram::trivial_loop(tri, 0)?,
            Mode::Quantum,
            q_poly(nv + 1, &[(4, -1), (-4, -1)]),
            "quantum trivial loop",
        ),
        (
            StrandDiagram::puncture_loop(tri, 0)?,
            Mode::Quantum,
            q_poly(nv + 1, &[(2, 1), (-2, 1)]),
            "quantum puncture loop",
        ),
    ];
    for (d, mode, expected, name) in cases {
        r.instances += 1;
        let res = d.resolve_all(tri, mode, MoveOrder::First)?;
        let ok = res.len() == 1 && res.get(&empty) == Some(&expected);
        r.check(ok, || json!({"check": name, "got": res.values().map(|p| p.to_string()).collect::<Vec<_>>()}));
    }
    for e in 0..tri.edge_count() {
        r.instances += 1;
        let diagonal = flip_arc(tri, e)?;
        let prod = alg.multiply_basis(&ReducedMulticurve::edge(tri, e), &diagonal)?;
        let ok = prod.len() == 2 && prod.terms().values().all(|c| *c == LaurentPoly::one(nv));
        r.check(ok, || json!({"check": "Ptolemy", "edge": e, "product": prod.to_json()}));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// confluence

fn products_bytes(
    tri: &Triangulation,
    pairs: &[(ReducedMulticurve, ReducedMulticurve)],
    mode: Mode,
    order: MoveOrder,
) -> Result<Vec<u8>> {
    let nvars = mode.nvars(tri);
    let mut out = Vec::new();
    for (a, b) in pairs {
        let p = strand_oracle::product(tri, a, b, mode, order)?;
        out.extend(serde_json::to_vec(&AlgebraElement::from_terms(nvars, p).to_json())?);
    }
    Ok(out)
}

/// Serialized products are byte-identical across move orders and thread
/// counts.
pub fn suite_confluence(alg: &CurveAlgebra, bound_doubled: i32, pairs: usize, seed: u64) -> Result<Report> {
    let tri = alg.triangulation();
    let mut r = Report::new("confluence", Some(seed));
    let curves = enumerate_reduced(tri, bound_doubled);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = sample_pairs(&mut rng, &curves, pairs);
    for mode in [Mode::Classical, Mode::Quantum] {
        let reference = products_bytes(tri, &sample, mode, MoveOrder::First)?;
        let orders = [MoveOrder::Last, MoveOrder::Seeded(seed), MoveOrder::Seeded(seed.wrapping_add(1))];
        for order in orders {
            r.instances += 1;
            let got = products_bytes(tri, &sample, mode, order)?;
            r.check(
                got == reference,
                || json!({"check": "move order", "mode": format!("{mode:?}"), "order": format!("{order:?}")}),
            );
        }
        for threads in [1, 2, 4] {
            r.instances += 1;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
            let got = pool.install(|| products_bytes(tri, &sample, mode, MoveOrder::Seeded(seed)))?;
            r.check(got == reference, || json!({"check": "threads", "mode": format!("{mode:?}"), "threads": threads}));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::tetrahedron;

    #[test]
    fn pi_table_cases() {
        assert_eq!(pi_table(0, None, 1, 1, 2, 2), Some((0, 0)));
        assert_eq!(pi_table(0, None, 0, 0, 2, 2), Some((-1, -1)));
        assert_eq!(pi_table(2, None, 2, 1, 2, 2), Some((1, 2)));
        assert_eq!(pi_table(1, Some(Endpoint::Bottom), 0, 1, 2, 2), Some((0, 1)));
        assert_eq!(pi_table(0, None, 0, 2, 2, 2), None);
        assert_eq!(pi_table(1, Some(Endpoint::Top), 1, 1, 2, 2), None);
    }

    #[test]
    fn decoding_recognizes_piece_types() {
        assert_eq!(decode_triangle([0, 2, 4]), Some(([0, 1, 2], None, None)));
        assert_eq!(decode_triangle([-1, 1, 3]), Some(([0, 0, 1], Some(0), None)));
        assert_eq!(decode_triangle([-1, -1, 1]), Some(([0, 0, 0], None, Some(2))));
        assert_eq!(decode_triangle([1, 1, 1]), None);
        assert_eq!(decode_triangle([0, 1, 2]), None);
    }

    #[test]
    fn report_merge_adds_counts() {
        let mut a = Report::new("x", None);
        a.instances = 2;
        a.count("k", 1);
        let mut b = Report::new("x", None);
        b.instances = 3;
        b.fail(json!("w"));
        b.count("k", 4);
        let m = a.merge(b);
        assert_eq!(m.instances, 5);
        assert_eq!(m.failure_count, 1);
        assert_eq!(m.stats["k"], json!(5));
    }

    #[test]
    fn constants_suite_passes_on_tetrahedron() {
        let alg = CurveAlgebra::new(tetrahedron());
        let r = suite_constants(&alg).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}
