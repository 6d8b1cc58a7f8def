//! Acceptance gate: one pass/fail line per criterion, nonzero exit on any
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use punctured_skein::cli;
use punctured_skein::curve_algebra::{fast_resolution_with_indices, oracle_resolution, CurveAlgebra, Sign};
use punctured_skein::normal_curves::enumerate_reduced;
use punctured_skein::triangulation::{octahedron, tetrahedron, Triangulation};
use punctured_skein::verification::{
    suite_bracket, suite_confluence, suite_constants, suite_coordinates, suite_localization, suite_nonzerodivisor,
    suite_quantum, suite_resolutions, Report,
};

const SEED: u64 = 20_241_015;

struct Line {
    ok: bool,
    detail: String,
}

fn line(ok: bool, detail: impl Into<String>) -> Line {
    Line { ok, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Line) -> Line {
    let start = Instant::now();
    let mut l = f();
    let took = start.elapsed();
    l.detail.push_str(&format!("; {:.2?}", took));
    if let Some(limit) = limit {
        l.detail.push_str(&format!(" (target < {:?})", limit));
        l.ok &= took < limit;
    }
    l
}

fn failures(r: &Report, checks: &[&str]) -> u64 {
    checks.iter().map(|c| r.failures_of(c)).sum()
}

fn criterion_1() -> Line {
    let tri = tetrahedron();
    let half = suite_coordinates(&tri, 1).unwrap();
    let one = suite_coordinates(&tri, 2).unwrap();
    line(
        half.passed() && one.passed(),
        format!(
            "tetrahedron bound 1/2: {} vectors, {} accepted, {} discrepancies; bound 1: {} vectors, {} accepted, {} discrepancies",
            half.instances,
            half.stat("accepted"),
            half.failure_count,
            one.instances,
            one.stat("accepted"),
            one.failure_count
        ),
    )
}

fn resolution_cases() -> Vec<(&'static str, Triangulation, i32)> {
    vec![("tetrahedron", tetrahedron(), 2), ("octahedron", octahedron(), 1)]
}

fn criterion_2() -> Line {
    let mut checked = 0u64;
    let mut bad = 0u64;
    for (_, tri, bound) in resolution_cases() {
        let curves = enumerate_reduced(&tri, bound);
        for e in 0..tri.edge_count() {
            for a in &curves {
                for sign in [Sign::Positive, Sign::Negative] {
                    checked += 1;
                    let fast = fast_resolution_with_indices(&tri, e, a, sign).unwrap().0;
                    if fast != oracle_resolution(&tri, e, a, sign).unwrap() {
                        bad += 1;
                    }
                }
            }
        }
    }
    line(bad == 0, format!("{checked} fast resolutions compared with the oracle, {bad} disagreements"))
}

fn resolution_reports() -> Vec<(&'static str, Report)> {
    resolution_cases()
        .into_iter()
        .map(|(name, tri, bound)| (name, suite_resolutions(&CurveAlgebra::new(tri), None, bound).unwrap()))
        .collect()
}

fn criterion_3(reports: &[(&str, Report)]) -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, r) in reports {
        let bad = failures(r, &["degree shift", "class shift", "pi table"]);
        ok &= bad == 0;
        parts.push(format!(
            "{name}: {} instances, {} table cases checked, {} outside the tables (RMC1_v), {bad} failures",
            r.instances,
            r.stat("pi_covered"),
            r.stat("pi_uncovered_RMC1_v")
        ));
    }
    line(ok, parts.join("; "))
}

fn criterion_4(reports: &[(&str, Report)]) -> Line {
    let bad: u64 = reports.iter().map(|(_, r)| r.failures_of("injectivity")).sum();
    let n: u64 = reports.iter().map(|(_, r)| r.instances).sum();
    line(bad == 0, format!("{n} (edge, curve) pairs, {bad} collisions within a class"))
}

fn criterion_5() -> Line {
    let alg = CurveAlgebra::new(tetrahedron());
    let r = suite_nonzerodivisor(&alg, None, 2, 1000, SEED).unwrap();
    line(
        r.passed(),
        format!(
            "{} trials over 6 edges: {} zero products, {} leading-term violations, {} other failures",
            r.instances,
            r.failures_of("e·β ≠ 0"),
            r.failures_of("leading terms are P/N images"),
            r.failure_count - r.failures_of("e·β ≠ 0") - r.failures_of("leading terms are P/N images")
        ),
    )
}

fn criterion_6() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, tri, bound) in resolution_cases() {
        let r = suite_localization(&CurveAlgebra::new(tri), bound, SEED).unwrap();
        let bad = r.failures_of("round trip");
        ok &= bad == 0 && r.failures_of("Φ multiplicative") == 0;
        parts.push(format!("{name}: {} curves, {bad} round-trip failures", r.stat("curves")));
    }
    line(ok, parts.join("; "))
}

fn criterion_7() -> Line {
    let r = suite_localization(&CurveAlgebra::new(tetrahedron()), 1, SEED).unwrap();
    let curves = enumerate_reduced(&tetrahedron(), 1).len();
    let rank = r.stats["rank"].as_u64().unwrap_or(0);
    line(
        r.failures_of("distinct expansions") == 0 && r.failures_of("evaluation rank") == 0,
        format!(
            "{curves} curves at bound 1/2 with pairwise distinct expansions; evaluation rank {rank} of {}",
            curves.min(5)
        ),
    )
}

fn criterion_8() -> Line {
    let r = suite_constants(&CurveAlgebra::new(tetrahedron())).unwrap();
    line(r.passed(), format!("{} loop and Ptolemy checks, {} failures", r.instances, r.failure_count))
}

fn criterion_9() -> Line {
    let r = suite_quantum(&CurveAlgebra::new(tetrahedron()), 2, 200, SEED).unwrap();
    line(
        r.failures_of("specialization") == 0 && r.failures_of("commutator at q=1") == 0,
        format!(
            "200 sampled pairs: {} specialization failures, {} nonvanishing commutators",
            r.failures_of("specialization"),
            r.failures_of("commutator at q=1")
        ),
    )
}

fn criterion_10() -> Line {
    let r = suite_bracket(&CurveAlgebra::new(tetrahedron()), 1, 100, 20, SEED).unwrap();
    line(
        r.passed(),
        format!(
            "antisymmetry {}, central vertices {}, Leibniz (100) {}, Jacobi (20) {} failures",
            r.failures_of("antisymmetry"),
            r.failures_of("{v, β} = 0"),
            r.failures_of("Leibniz"),
            r.failures_of("Jacobi")
        ),
    )
}

fn criterion_11() -> Line {
    let r = suite_confluence(&CurveAlgebra::new(tetrahedron()), 2, 100, SEED).unwrap();
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/cli");
    let path = |f: &str| data.join(f).to_string_lossy().into_owned();
    let invocations: Vec<Vec<String>> = vec![
        vec![
            "multiply",
            "--tri",
            &path("square.json"),
            "--elem",
            &path("diagonal1.json"),
            "--elem",
            &path("diagonal2.json"),
        ],
        vec![
            "multiply",
            "--quantum",
            "--tri",
            &path("tet.json"),
            "--elem",
            &path("diagonal2.json"),
            "--elem",
            &path("diagonal1.json"),
        ],
        vec![
            "bracket",
            "--tri",
            &path("tet.json"),
            "--elem",
            &path("diagonal1.json"),
            "--elem",
            &path("diagonal2.json"),
        ],
        vec!["verify", "--tri", &path("tet.json"), "--suite", "quantum", "--seed", "5", "--trials", "30"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    let mut cli_bad = 0;
    for inv in &invocations {
        let run = |threads: &str| {
            let mut argv = vec!["punctured-skein".to_string()];
            argv.extend(inv.iter().cloned());
            argv.extend(["--threads".to_string(), threads.to_string()]);
            cli::run(argv)
        };
        let reference = run("1");
        for t in ["2", "4"] {
            let o = run(t);
            if o != reference || o.code != 0 {
                cli_bad += 1;
            }
        }
    }
    line(
        r.passed() && cli_bad == 0,
        format!(
            "{} move-order and thread-pool comparisons, {} differ; {} CLI invocations under --threads 1/2/4, {cli_bad} differ",
            r.instances,
            r.failure_count,
            invocations.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut lines: Vec<(usize, &str, Line)> = Vec::new();
    lines.push((1, "coordinate characterization", timed(Some(Duration::from_secs(10)), criterion_1)));
    lines.push((2, "resolution equivalence", timed(Some(Duration::from_secs(60)), criterion_2)));
    let reports = resolution_reports();
    lines.push((3, "degree and pi bookkeeping", timed(None, || criterion_3(&reports))));
    lines.push((4, "injectivity of P and N", timed(None, || criterion_4(&reports))));
    lines.push((5, "non-zero-divisor", timed(None, criterion_5)));
    lines.push((6, "localization round trips", timed(None, criterion_6)));
    lines.push((7, "injectivity witness for the expansion", timed(None, criterion_7)));
    lines.push((8, "skein constants", timed(None, criterion_8)));
    lines.push((9, "quantum specialization", timed(None, criterion_9)));
    lines.push((10, "bracket algebra laws", timed(None, criterion_10)));
    lines.push((11, "confluence and determinism", timed(None, criterion_11)));
    let mut all = true;
    for (n, name, l) in &lines {
        all &= l.ok;
        println!("criterion {n:>2} {}: {name}: {}", if l.ok { "PASS" } else { "FAIL" }, l.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
