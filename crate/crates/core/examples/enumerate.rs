//! Enumerating reduced multicurves with bounded corner coordinates.

use punctured_skein::normal_curves::{enumerate_reduced, format_corners};
use punctured_skein::triangulation::{octahedron, tetrahedron};

fn main() {
    let tri = tetrahedron();
    let half = enumerate_reduced(&tri, 1);
    println!("tetrahedron, corners <= 1/2: {} curves", half.len());
    for c in &half {
        println!("  {}  ends at {:?}", format_corners(c.corners()), c.end_vertices(&tri));
    }
    println!("tetrahedron, corners <= 1: {} curves", enumerate_reduced(&tri, 2).len());
    println!("octahedron, corners <= 1/2: {} curves", enumerate_reduced(&octahedron(), 1).len());
}
