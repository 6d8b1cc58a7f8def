//! Corner coordinates: validating vectors and converting to intersection numbers.

use punctured_skein::normal_curves::{corner_to_edge, format_corners, validate_reduced, ReducedMulticurve};
use punctured_skein::triangulation::tetrahedron;

fn main() {
    let tri = tetrahedron();
    let e0 = ReducedMulticurve::edge(&tri, 0);
    println!("edge 0: {}", format_corners(e0.corners()));

    // Doubled values: 2 means one strand across the corner, -1 an arc end.
    let mut loop_vector = vec![0; 12];
    for c in [0, 4, 8, 10] {
        loop_vector[c] = 2;
    }
    match validate_reduced(&tri, &loop_vector) {
        Ok(c) => println!(
            "{} is reduced; edge intersections {:?}",
            format_corners(c.corners()),
            corner_to_edge(&tri, c.corners())
        ),
        Err(v) => println!("rejected: {v}"),
    }

    let puncture_loop: Vec<i32> = (0..12).map(|c| if tri.vertex_rotation(0).contains(&c) { 2 } else { 0 }).collect();
    println!("loop around vertex 0: {}", validate_reduced(&tri, &puncture_loop).unwrap_err());
    println!(
        "three half-integers without an end: {}",
        validate_reduced(&tri, &[1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap_err()
    );
}
