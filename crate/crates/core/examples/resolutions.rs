//! Positive and negative resolutions, edge degree and leading terms.

use punctured_skein::curve_algebra::{
    edge_degree, leading_terms, pi_projection, resolution, rmc_class, CurveAlgebra, Sign,
};
use punctured_skein::normal_curves::{enumerate_reduced, format_corners, format_half, ReducedMulticurve};
use punctured_skein::triangulation::tetrahedron;

fn main() {
    let alg = CurveAlgebra::new(tetrahedron());
    let tri = alg.triangulation();
    let e = 0;
    for alpha in enumerate_reduced(tri, 1).iter().take(6) {
        let (px, py) = pi_projection(tri, e, alpha).unwrap();
        println!(
            "{}  class {}  degree {}  pi ({}, {})",
            format_corners(alpha.corners()),
            rmc_class(tri, e, alpha),
            edge_degree(tri, e, alpha).unwrap(),
            format_half(px),
            format_half(py)
        );
        for sign in [Sign::Positive, Sign::Negative] {
            let r = resolution(tri, e, alpha, sign).unwrap();
            println!("    {sign:?}: ({})  {}", r.coefficient, format_corners(r.curve.corners()));
        }
        let prod = alg.multiply_basis(&ReducedMulticurve::edge(tri, e), alpha).unwrap();
        println!("    leading terms of e*alpha: {}", leading_terms(tri, e, &prod).unwrap().len());
    }
}
