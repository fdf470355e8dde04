//! The activity basis of the inverse system: one family of products of linear
//! forms and their differentials per basis of the matroid, then the checks
//! that it really is a basis.

use superzono::inverse_basis::{build_family, verify_basis};
use superzono::Arrangement;

fn main() {
    let a = Arrangement::from_int_normals(2, &[&[1, 0], &[1, -1]]).unwrap();
    let family = build_family(&a);
    for (bd, items) in family.by_bidegree() {
        for (d, e) in items {
            println!("{bd} from basis {:?}: {e}", d.source_basis);
        }
    }
    let report = verify_basis(&a);
    println!("{} elements, census {}", report.cardinality, report.census);
    for c in &report.checks {
        println!("  {:<26} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
}
