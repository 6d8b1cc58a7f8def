//! The Goldman bracket and its algebraic laws on a few curves.

use punctured_skein::curve_algebra::{AlgebraElement, CurveAlgebra};
use punctured_skein::goldman_bracket::bracket;
use punctured_skein::normal_curves::flip_arc;
use punctured_skein::triangulation::tetrahedron;

fn main() {
    let alg = CurveAlgebra::new(tetrahedron());
    let d = AlgebraElement::basis(flip_arc(alg.triangulation(), 0).unwrap(), alg.nvars());
    let e = alg.edge(0);
    let b = bracket(&alg, &e, &d).unwrap();
    println!("{{e0, flip(e0)}} =\n{}", b.to_text());
    println!("antisymmetric: {}", bracket(&alg, &d, &e).unwrap() == b.neg());
    println!("{{e0, e3}} = {}", bracket(&alg, &e, &alg.edge(3)).unwrap().to_text().trim());
    println!("{{v1, e0}} = {}", bracket(&alg, &alg.vertex(1), &e).unwrap().to_text().trim());
}
