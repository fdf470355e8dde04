//! Seeded random arrangements for property tests and surveys.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Arrangement;
use crate::rational::Rational;
use crate::superspace::{Bidegree, SuperElement, ThetaWord, XMonomial};

/// A random arrangement with `m` nonzero integer normals in `[-bound, bound]^n`.
pub fn random_arrangement<R: Rng>(rng: &mut R, n: usize, m: usize, bound: i64) -> Arrangement {
    assert!(n >= 1 && bound >= 1);
    let normals = (0..m)
        .map(|_| loop {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
            if v.iter().any(|&c| c != 0) {
                break v.into_iter().map(Rational::from).collect();
            }
        })
        .collect();
    Arrangement::from_normals(n, normals).expect("nonzero normals of the right length")
}

/// The standard corpus: `count` arrangements with `n ∈ {2,3,4}`,
/// `m ∈ {1..=max_m}` and entries in `[-2, 2]`, reproducible from `seed`.
pub fn corpus(seed: u64, count: usize, max_m: usize) -> Vec<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=4);
            let m = rng.gen_range(1..=max_m);
            random_arrangement(&mut rng, n, m, 2)
        })
        .collect()
}

/// A rational with numerator in `[-bound, bound]` and denominator in `1..=3`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=3))
}

/// A random bihomogeneous element with up to `terms` terms; may be zero.
pub fn random_bihomogeneous<R: Rng>(rng: &mut R, n: usize, bd: Bidegree, terms: usize) -> SuperElement {
    let mut out = SuperElement::zero(n);
    if bd.fermionic as usize > n {
        return out;
    }
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        for _ in 0..bd.bosonic {
            exps[rng.gen_range(0..n)] += 1;
        }
        let mut mask = 0u32;
        while mask.count_ones() < bd.fermionic {
            mask |= 1 << rng.gen_range(0..n);
        }
        out.add_term(XMonomial::new(exps), ThetaWord::from_mask(mask), random_rational(rng, 3));
    }
    out
}

/// A random element whose bihomogeneous parts have bosonic degree at most `max_bosonic`.
pub fn random_element<R: Rng>(rng: &mut R, n: usize, max_bosonic: u32, terms: usize) -> SuperElement {
    let mut out = SuperElement::zero(n);
    for _ in 0..terms {
        let bd = Bidegree::new(rng.gen_range(0..=max_bosonic), rng.gen_range(0..=n as u32));
        out = &out + &random_bihomogeneous(rng, n, bd, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_in_range() {
        let a = corpus(7, 20, 6);
        assert_eq!(a, corpus(7, 20, 6));
        for arr in &a {
            assert!((2..=4).contains(&arr.dim()));
            assert!((1..=6).contains(&arr.len()));
            assert!(!arr.has_loops());
            for h in arr.hyperplanes() {
                assert!(h.normal.iter().all(|c| c.abs() <= Rational::from(2)));
            }
        }
    }

    #[test]
    fn random_elements_have_requested_bidegree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let bd = Bidegree::new(rng.gen_range(0..4), rng.gen_range(0..4));
            let e = random_bihomogeneous(&mut rng, 3, bd, 3);
            assert!(e.is_zero() || e.bidegree() == Some(bd));
        }
    }
}
