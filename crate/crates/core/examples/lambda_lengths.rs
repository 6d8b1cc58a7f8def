//! Laurent expansions in lambda lengths and the localization round trip.

use punctured_skein::curve_algebra::CurveAlgebra;
use punctured_skein::lambda_expansion::Expander;
use punctured_skein::normal_curves::{enumerate_reduced, format_corners};
use punctured_skein::triangulation::tetrahedron;

fn main() {
    let alg = CurveAlgebra::new(tetrahedron());
    let x = Expander::new(&alg);
    println!("Phi(v0) = {}", x.phi_vertex(0));
    for c in enumerate_reduced(alg.triangulation(), 1).iter().take(8) {
        let rt = x.verify_localization_roundtrip(c).unwrap();
        println!(
            "{}\n    Phi = {}\n    m = {:?}, positive polynomial: {}, paths agree: {}",
            format_corners(c.corners()),
            x.phi_curve(c).unwrap(),
            rt.m,
            rt.polynomial && rt.positive,
            rt.agree
        );
    }
}
