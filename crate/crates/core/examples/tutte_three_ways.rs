//! The Tutte polynomial by subset sums, by deletion-contraction and by
//! counting activities, plus the characteristic polynomial.

use superzono::matroid::{all_activities, characteristic_poly, tutte, TutteMethod};
use superzono::Arrangement;

fn main() {
    let braid = Arrangement::from_graph(&[(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)], 4).unwrap();
    for m in TutteMethod::ALL {
        println!("{:>10}: {}", m.name(), tutte(&braid, m));
    }
    println!("bases: {}", all_activities(&braid).len());
    println!("chi(s) = {}", characteristic_poly(&braid));
}
