//! Counting consequences of the Hilbert series: faces of generic
//! deformations, regions of doubled arrangements, the top-degree part, and
//! log-concavity.

use superzono::invariants::{
    doubled_region_count, fvector_generic, graphical_region_identity, hilbert_via_tutte, logconcavity_check,
    top_summand_check,
};
use superzono::Arrangement;

fn main() {
    let tri = Arrangement::from_int_normals(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
    let series = hilbert_via_tutte(&tri);
    println!("Hilb = {series}");
    println!("f-vector of a generic deformation: {:?}", fvector_generic(&tri).counts);
    let doubled = doubled_region_count(&tri);
    println!("doubled: {} regions, {} independent sets", doubled.dimension, doubled.doubled_independent_sets);
    println!("top part {}", top_summand_check(&tri, &series).extracted);
    println!("log-concave: {}", logconcavity_check(&series).passed());

    for (name, edges, n) in [
        ("K3", vec![(1, 2), (2, 3), (1, 3)], 3),
        ("P3", vec![(1, 2), (2, 3)], 3),
        ("C4", vec![(1, 2), (2, 3), (3, 4), (1, 4)], 4),
    ] {
        let g = graphical_region_identity(&edges, n).unwrap();
        println!("{name}: Hilb(1,1) = {}, 2^(n-1) T(3/2, 1) = {}", g.dimension, g.tutte_value);
    }
}
