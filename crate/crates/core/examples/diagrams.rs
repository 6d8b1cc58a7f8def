//! Explicit strand diagrams: superposition, crossings and the full state sum.

use punctured_skein::normal_curves::{flip_arc, format_corners, ReducedMulticurve};
use punctured_skein::strand_oracle::{Mode, MoveOrder, StrandDiagram};
use punctured_skein::triangulation::tetrahedron;

fn main() {
    let tri = tetrahedron();
    let upper = StrandDiagram::from_reduced(&tri, &ReducedMulticurve::edge(&tri, 0)).unwrap();
    let lower = StrandDiagram::from_reduced(&tri, &flip_arc(&tri, 0).unwrap()).unwrap();
    let d = StrandDiagram::superimpose(&tri, &upper, &lower).unwrap();
    println!("{} interior crossings, {} puncture meetings", d.crossings(&tri).len(), d.vertex_meetings(&tri).len());
    for (curve, coeff) in d.resolve_all(&tri, Mode::Classical, MoveOrder::First).unwrap() {
        println!("  ({coeff})  {}", format_corners(curve.corners()));
    }
    let t = StrandDiagram::trivial_loop(&tri, 0).unwrap();
    println!(
        "trivial loop: {:?}",
        t.resolve_all(&tri, Mode::Classical, MoveOrder::First).unwrap().values().collect::<Vec<_>>()
    );
    let t = StrandDiagram::trivial_loop(&tri, 0).unwrap();
    println!(
        "trivial framed loop: {:?}",
        t.resolve_all(&tri, Mode::Quantum, MoveOrder::First).unwrap().values().collect::<Vec<_>>()
    );
}
