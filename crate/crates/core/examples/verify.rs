//! Running the verification suites and printing their reports.

use punctured_skein::curve_algebra::CurveAlgebra;
use punctured_skein::triangulation::tetrahedron;
use punctured_skein::verification::{run_suite, SuiteConfig, SUITES};

fn main() {
    let alg = CurveAlgebra::new(tetrahedron());
    let cfg = SuiteConfig { bound_doubled: 1, seed: 1, trials: 50, edge: None };
    for name in SUITES {
        let r = run_suite(&alg, name, &cfg).unwrap();
        println!(
            "{:<16} {}  instances {:>7}  failures {}",
            r.suite,
            if r.passed() { "PASS" } else { "FAIL" },
            r.instances,
            r.failure_count
        );
    }
    let r = run_suite(&alg, "resolutions", &cfg).unwrap();
    println!("{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
}
