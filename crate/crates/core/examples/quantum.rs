//! The q-deformed product, its classical limit and the first-order commutator.

use punctured_skein::curve_algebra::{AlgebraElement, CurveAlgebra};
use punctured_skein::goldman_bracket::bracket;
use punctured_skein::normal_curves::{flip_arc, ReducedMulticurve};
use punctured_skein::quantum_skein::{commutator, first_order, qbasis, qmultiply, specialize_classical};
use punctured_skein::triangulation::tetrahedron;

fn main() {
    let alg = CurveAlgebra::new(tetrahedron());
    let tri = alg.triangulation();
    let (e, d) = (ReducedMulticurve::edge(tri, 0), flip_arc(tri, 0).unwrap());
    let (qe, qd) = (qbasis(&alg, e.clone()), qbasis(&alg, d.clone()));
    let prod = qmultiply(&alg, &qe, &qd).unwrap();
    println!("e0 * flip(e0), last variable is q^(1/2):\n{}", prod.to_text());
    println!("at q^(1/2) = 1:\n{}", specialize_classical(&alg, &prod).unwrap().to_text());
    let c = commutator(&alg, &qe, &qd).unwrap();
    let n = alg.nvars();
    println!("first order of the commutator:\n{}", first_order(&alg, &c).unwrap().to_text());
    println!(
        "bracket:\n{}",
        bracket(&alg, &AlgebraElement::basis(e, n), &AlgebraElement::basis(d, n)).unwrap().to_text()
    );
}
