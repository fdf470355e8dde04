//! Inverse systems of the power ideals with exponent rho + k for k = -1..=2.
//! Only k = 1 has a known Tutte formula; the others are data.

use superzono::perp::hilbert_via_perp;
use superzono::Arrangement;

fn main() {
    let axes = Arrangement::from_int_normals(2, &[&[1, 0], &[0, 1]]).unwrap();
    let tri = Arrangement::from_int_normals(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
    for a in [&axes, &tri] {
        println!("{a}");
        for k in -1..=2 {
            println!("  k = {k:>2}: {}", hilbert_via_perp(a, k).unwrap());
        }
    }
}
