//! Compares the k = 0 inverse system with the Tutte formula
//! (1+t)^r q^(m-r) T(1/(1+t), 1/q) on a seeded random sample.

use superzono::corpus::corpus;
use superzono::invariants::conjecture_internal_check;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let sample = corpus(seed, 40, 5);
    let mut agree = 0;
    for a in &sample {
        let rep = conjecture_internal_check(a);
        if rep.equal {
            agree += 1;
        } else {
            println!("{a}: {} vs {} (essentialization agrees: {:?})", rep.lhs, rep.rhs, rep.essentialized_equal);
        }
    }
    println!("{agree} of {} agree", sample.len());
}
