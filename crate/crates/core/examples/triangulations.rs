//! Built-in triangulations: counts, genus, local planarity and the star of an edge.

use punctured_skein::triangulation::{octahedron, tetrahedron, torus7, Triangulation};

fn main() {
    for (name, tri) in [("tetrahedron", tetrahedron()), ("octahedron", octahedron()), ("torus7", torus7())] {
        println!(
            "{name}: {} vertices, {} edges, {} triangles, genus {}, locally planar: {}",
            tri.vertex_count(),
            tri.edge_count(),
            tri.triangle_count(),
            tri.genus(),
            tri.is_locally_planar()
        );
    }
    let tri = tetrahedron();
    let star = tri.star_labels(0).expect("the tetrahedron is locally planar");
    println!(
        "star of edge 0: top vertex {}, bottom vertex {}, s = {}, t = {}",
        star.top,
        star.bottom,
        star.s(),
        star.t()
    );
    println!("  corners a = {:?}, b = {:?}", star.a, star.b);

    let doc = r#"{"vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]], "triangles": [[0, 1, 2], [2, 1, 0]], "genus": 0}"#;
    let three = Triangulation::from_json(doc).expect("valid document");
    println!("three-punctured sphere: {:?}", three.locally_planar_witness());
}
