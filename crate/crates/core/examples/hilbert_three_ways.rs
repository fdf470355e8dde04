//! The bigraded Hilbert series of the inverse system computed from kernels,
//! from the Tutte polynomial, and by deletion/restriction.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superzono::corpus::random_arrangement;
use superzono::invariants::{hilbert_via_recursion, hilbert_via_tutte};
use superzono::perp::PerpSolver;
use superzono::Arrangement;

fn report(a: &Arrangement) {
    let start = Instant::now();
    let solver = PerpSolver::new(a, 1).unwrap();
    let perp = solver.hilbert();
    let elapsed = start.elapsed();
    println!("{a}");
    println!("  kernels   {perp}  ({elapsed:.2?}, {} primes)", solver.primes_used());
    println!("  tutte     {}", hilbert_via_tutte(a));
    println!("  recursion {}", hilbert_via_recursion(a));
}

fn main() {
    report(&Arrangement::from_int_normals(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    report(&random_arrangement(&mut rng, 3, 5, 2));
    report(&random_arrangement(&mut rng, 4, 5, 2));
}
