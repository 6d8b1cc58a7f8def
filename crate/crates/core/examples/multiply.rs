//! Products in the curve algebra, including the Ptolemy relation.

use punctured_skein::curve_algebra::{AlgebraElement, CurveAlgebra};
use punctured_skein::laurent::rat;
use punctured_skein::normal_curves::flip_arc;

fn main() {
    let alg = CurveAlgebra::new(punctured_skein::triangulation::tetrahedron());
    let tri = alg.triangulation();
    let diagonal = AlgebraElement::basis(flip_arc(tri, 0).unwrap(), alg.nvars());
    println!("e0 * flip(e0) =\n{}", alg.multiply(&alg.edge(0), &diagonal).unwrap().to_text());
    println!("e0 * e0 =\n{}", alg.multiply(&alg.edge(0), &alg.edge(0)).unwrap().to_text());
    let x = alg.edge(1).scale_rational(&rat(3)).add(&alg.vertex(2)).unwrap();
    println!("(3 e1 + v2) * e3 =\n{}", alg.multiply(&x, &alg.edge(3)).unwrap().to_text());
}
