//! Internal and external activities of every basis, and how they change when
//! the last hyperplane is deleted or restricted to.

use superzono::matroid::{activity_correspondence, all_activities};
use superzono::Arrangement;

fn main() {
    let a = Arrangement::from_int_normals(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1], &[1, 0, 1]]).unwrap();
    println!("{:<12} {:<10} {:<10} {:<10} {:<10}", "basis", "EA", "EP", "IA", "IP");
    for r in all_activities(&a) {
        println!(
            "{:<12} {:<10} {:<10} {:<10} {:<10}",
            format!("{:?}", r.basis),
            format!("{:?}", r.externally_active),
            format!("{:?}", r.externally_passive),
            format!("{:?}", r.internally_active),
            format!("{:?}", r.internally_passive),
        );
    }
    let rep = activity_correspondence(&a).expect("some hyperplane is neither a loop nor a coloop");
    println!(
        "deletion/restriction correspondence: {} bases avoid H0, {} contain it, {} failures",
        rep.bases_avoiding,
        rep.bases_containing,
        rep.failures.len()
    );
}
