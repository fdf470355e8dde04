//! Bases, internal/external activities and Tutte polynomials of the matroid
//! represented by an arrangement's normal vectors.

use std::collections::HashMap;

use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::linalg;
use crate::poly::{Poly2, TuttePoly, UniPoly};
use crate::rational::Rational;
use crate::{Error, Result};

/// A basis with its four activity classes. All index sets are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisRecord {
    pub basis: Vec<usize>,
    pub externally_active: Vec<usize>,
    pub externally_passive: Vec<usize>,
    pub internally_active: Vec<usize>,
    pub internally_passive: Vec<usize>,
}

impl BasisRecord {
    pub fn ea(&self) -> usize {
        self.externally_active.len()
    }
    pub fn ep(&self) -> usize {
        self.externally_passive.len()
    }
    pub fn ia(&self) -> usize {
        self.internally_active.len()
    }
    pub fn ip(&self) -> usize {
        self.internally_passive.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TutteMethod {
    SubsetSum,
    DeletionContraction,
    Activity,
}

impl TutteMethod {
    pub const ALL: [TutteMethod; 3] =
        [TutteMethod::SubsetSum, TutteMethod::DeletionContraction, TutteMethod::Activity];

    pub fn name(self) -> &'static str {
        match self {
            TutteMethod::SubsetSum => "subset-sum",
            TutteMethod::DeletionContraction => "delcon",
            TutteMethod::Activity => "activity",
        }
    }
}

/// Calls `f` on every `k`-subset of `0..m` in lexicographic order.
pub fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + m - k) else { return };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// All bases in lexicographic order.
pub fn enumerate_bases(a: &Arrangement) -> Vec<Vec<usize>> {
    let r = a.rank();
    let mut out = Vec::new();
    for_each_combination(a.len(), r, |s| {
        if a.rank_of(s) == r {
            out.push(s.to_vec());
        }
    });
    out
}

/// Number of independent subsets.
pub fn count_independent_sets(a: &Arrangement) -> usize {
    independent_set_sizes(a).iter().sum()
}

/// `sizes[k]` is the number of independent sets of size `k`.
pub fn independent_set_sizes(a: &Arrangement) -> Vec<usize> {
    let r = a.rank();
    (0..=r)
        .map(|k| {
            let mut c = 0;
            for_each_combination(a.len(), k, |s| {
                if a.rank_of(s) == k {
                    c += 1;
                }
            });
            c
        })
        .collect()
}

/// Number of subsets of full rank.
pub fn count_spanning_sets(a: &Arrangement) -> usize {
    let r = a.rank();
    (0u64..1 << a.len()).filter(|&mask| a.rank_of_mask(mask) == r).count()
}

/// Classifies every hyperplane relative to the basis `b`.
///
/// `H ∉ B` is externally active when it is the smallest element of its
/// fundamental circuit in `B ∪ H`; `H ∈ B` is internally active when it is the
/// smallest element of its fundamental cocircuit.
pub fn classify_activities(a: &Arrangement, b: &[usize]) -> Result<BasisRecord> {
    let mut basis = b.to_vec();
    basis.sort_unstable();
    basis.dedup();
    let r = a.rank();
    if basis.len() != b.len() || basis.len() != r || basis.iter().any(|&i| i >= a.len()) || a.rank_of(&basis) != r {
        return Err(Error::NotABasis(b.to_vec()));
    }
    let vectors: Vec<Vec<Rational>> = basis.iter().map(|&i| a.normal(i).to_vec()).collect();
    // coords[e][k]: coefficient of basis[k] when expanding normal e.
    let coords: Vec<Vec<Rational>> = (0..a.len())
        .map(|e| linalg::coordinates(&vectors, a.normal(e)).expect("basis spans every normal"))
        .collect();
    let in_basis = |e: usize| basis.binary_search(&e).is_ok();

    let mut rec = BasisRecord {
        basis: basis.clone(),
        externally_active: Vec::new(),
        externally_passive: Vec::new(),
        internally_active: Vec::new(),
        internally_passive: Vec::new(),
    };
    for e in (0..a.len()).filter(|&e| !in_basis(e)) {
        let circuit_min = basis.iter().zip(&coords[e]).filter(|(_, c)| !c.is_zero()).map(|(&i, _)| i).min();
        match circuit_min {
            Some(m) if m < e => rec.externally_passive.push(e),
            _ => rec.externally_active.push(e),
        }
    }
    for (k, &h) in basis.iter().enumerate() {
        let cocircuit_min = (0..a.len()).filter(|&e| !in_basis(e) && !coords[e][k].is_zero()).min();
        match cocircuit_min {
            Some(m) if m < h => rec.internally_passive.push(h),
            _ => rec.internally_active.push(h),
        }
    }
    Ok(rec)
}

/// Activity records for every basis, in lexicographic order of the bases.
pub fn all_activities(a: &Arrangement) -> Vec<BasisRecord> {
    enumerate_bases(a)
        .iter()
        .map(|b| classify_activities(a, b).expect("enumerated bases are bases"))
        .collect()
}

pub fn tutte(a: &Arrangement, method: TutteMethod) -> TuttePoly {
    match method {
        TutteMethod::SubsetSum => tutte_subset_sum(a),
        TutteMethod::DeletionContraction => tutte_deletion_contraction(a),
        TutteMethod::Activity => tutte_activity(a),
    }
}

/// `Σ_{S ⊆ E} (x−1)^{r − rk S} (y−1)^{|S| − rk S}`.
pub fn tutte_subset_sum(a: &Arrangement) -> TuttePoly {
    assert!(a.len() < 64);
    let r = a.rank();
    let xm1 = Poly2::from_terms(&[(1, 0, 1), (0, 0, -1)]);
    let ym1 = Poly2::from_terms(&[(0, 1, 1), (0, 0, -1)]);
    let mut acc = Poly2::zero();
    let mut cache: HashMap<(usize, usize), Poly2> = HashMap::new();
    for mask in 0u64..1 << a.len() {
        let rk = a.rank_of_mask(mask);
        let size = mask.count_ones() as usize;
        let term = cache
            .entry((r - rk, size - rk))
            .or_insert_with(|| &xm1.pow((r - rk) as u32) * &ym1.pow((size - rk) as u32));
        acc = &acc + term;
    }
    TuttePoly(acc)
}

/// `Σ_B x^{ia(B)} y^{ea(B)}`.
pub fn tutte_activity(a: &Arrangement) -> TuttePoly {
    let mut acc = Poly2::zero();
    for rec in all_activities(a) {
        acc.add_term(rec.ia() as u32, rec.ea() as u32, 1);
    }
    TuttePoly(acc)
}

/// Deletion-contraction on the last hyperplane, memoized on
/// [`Arrangement::canonical_key`]; contraction is restriction.
pub fn tutte_deletion_contraction(a: &Arrangement) -> TuttePoly {
    let mut memo = HashMap::new();
    TuttePoly(delcon(a, &mut memo))
}

fn delcon(a: &Arrangement, memo: &mut HashMap<(usize, Vec<Vec<Rational>>), Poly2>) -> Poly2 {
    if a.is_empty() {
        return Poly2::one();
    }
    let key = a.canonical_key();
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    // Work on the canonical representative so the pivot is deterministic.
    let canon = Arrangement::with_loops(
        key.0,
        key.1.iter().map(|v| crate::Hyperplane::new(v.clone(), "")).collect(),
    )
    .expect("same dimension");
    let last = canon.len() - 1;
    let deleted = canon.delete(last).expect("in range");
    let result = if canon.is_loop(last) {
        &Poly2::monomial(0, 1, 1) * &delcon(&deleted, memo)
    } else if canon.is_coloop(last) {
        &Poly2::monomial(1, 0, 1) * &delcon(&canon.restrict(last).expect("not a loop"), memo)
    } else {
        &delcon(&deleted, memo) + &delcon(&canon.restrict(last).expect("not a loop"), memo)
    };
    memo.insert(key, result.clone());
    result
}

/// `χ_A(s) = (−1)^r T_A(1 − s, 0)`.
pub fn characteristic_poly(a: &Arrangement) -> UniPoly {
    let t = tutte_subset_sum(a);
    let r = a.rank();
    // (1 − s)^k as ascending coefficients
    let mut coeffs = vec![0i64; r + 1];
    for (xa, yb, c) in t.terms() {
        if yb != 0 {
            continue;
        }
        let mut binom = 1i64;
        for k in 0..=xa as usize {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            coeffs[k] += c * binom * sign;
            binom = binom * (xa as i64 - k as i64) / (k as i64 + 1);
        }
    }
    if r % 2 == 1 {
        for c in coeffs.iter_mut() {
            *c = -*c;
        }
    }
    UniPoly::new(coeffs)
}

/// Tutte polynomial of the `d`-fold thickening from that of the original
/// matroid of rank `r`: `T_{2M}(x, y) = (1+y)^r T_M((x+y)/(1+y), y²)`.
pub fn thicken_tutte(t: &TuttePoly, r: usize, d: u32) -> Result<TuttePoly> {
    if d != 2 {
        return Err(Error::UnsupportedThickening(d));
    }
    let x_plus_y = Poly2::from_terms(&[(1, 0, 1), (0, 1, 1)]);
    let one_plus_y = Poly2::from_terms(&[(0, 0, 1), (0, 1, 1)]);
    let mut acc = Poly2::zero();
    for (a, b, c) in t.terms() {
        if a as usize > r {
            return Err(Error::NonIntegral(format!(
                "x-degree {a} of the Tutte polynomial exceeds the rank {r}"
            )));
        }
        let term = &(&x_plus_y.pow(a) * &one_plus_y.pow(r as u32 - a)).shift(0, 2 * b) * &Poly2::constant(c);
        acc = &acc + &term;
    }
    Ok(TuttePoly(acc))
}

/// All subsets as bitmasks together with their rank; used by closed-form engines.
/// Outcome of comparing activities of `A` with those of `A − H_0` and `A | H_0`,
/// where `H_0` is the last hyperplane of `arrangement`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    /// The reordered arrangement's hyperplanes, as indices into the original.
    pub order: Vec<usize>,
    pub bases_avoiding: usize,
    pub bases_containing: usize,
    pub failures: Vec<String>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Moves the largest hyperplane that is neither a loop nor a coloop to the end
/// and checks the activity correspondence there. `None` if no such hyperplane exists.
///
/// For bases `B'` avoiding `H_0`: activities agree with `A − H_0` except that
/// `H_0` joins `EP`. For bases `B''` containing `H_0`: `H_0 ∈ IP(B'')`, and
/// removing `H_0` gives a basis of `A | H_0` whose four classes are the old
/// ones with `H_0` dropped.
pub fn activity_correspondence(a: &Arrangement) -> Option<CorrespondenceReport> {
    let h0 = (0..a.len()).rev().find(|&h| !a.is_loop(h) && !a.is_coloop(h))?;
    let order: Vec<usize> = (0..a.len()).filter(|&h| h != h0).chain([h0]).collect();
    let a = a.permute(&order);
    let last = a.len() - 1;
    let deleted = a.delete(last).expect("in range");
    let restricted = a.restrict(last).expect("not a loop");
    let mut failures = Vec::new();
    let (mut avoiding, mut containing) = (0, 0);
    for rec in all_activities(&a) {
        if rec.basis.last() != Some(&last) {
            avoiding += 1;
            let mut expected = match classify_activities(&deleted, &rec.basis) {
                Ok(r) => r,
                Err(_) => {
                    failures.push(format!("{:?} is not a basis after deletion", rec.basis));
                    continue;
                }
            };
            expected.externally_passive.push(last);
            if expected != rec {
                failures.push(format!("deletion mismatch at {:?}: {rec:?} vs {expected:?}", rec.basis));
            }
        } else {
            containing += 1;
            if !rec.internally_passive.contains(&last) {
                failures.push(format!("H_0 not internally passive in {:?}", rec.basis));
            }
            let drop = |v: &[usize]| v.iter().copied().filter(|&h| h != last).collect::<Vec<_>>();
            let expected = BasisRecord {
                basis: drop(&rec.basis),
                externally_active: drop(&rec.externally_active),
                externally_passive: drop(&rec.externally_passive),
                internally_active: drop(&rec.internally_active),
                internally_passive: drop(&rec.internally_passive),
            };
            match classify_activities(&restricted, &expected.basis) {
                Ok(got) if got == expected => {}
                Ok(got) => failures.push(format!("restriction mismatch at {:?}: {got:?} vs {expected:?}", rec.basis)),
                Err(_) => failures.push(format!("{:?} is not a basis after restriction", expected.basis)),
            }
        }
    }
    Some(CorrespondenceReport { order, bases_avoiding: avoiding, bases_containing: containing, failures })
}

pub(crate) fn subset_ranks(a: &Arrangement) -> Vec<(u64, usize)> {
    assert!(a.len() < 64);
    (0u64..1 << a.len()).map(|m| (m, a.rank_of_mask(m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Arrangement {
        Arrangement::from_int_normals(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn double_line() -> Arrangement {
        Arrangement::from_int_normals(2, &[&[1, 0], &[1, 0]]).unwrap()
    }

    #[test]
    fn correspondence_on_small_cases() {
        let rep = activity_correspondence(&triangle()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!((rep.bases_avoiding, rep.bases_containing), (1, 2));
        let rep = activity_correspondence(&double_line()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        let coloops = Arrangement::from_int_normals(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert!(activity_correspondence(&coloops).is_none());
        let a = Arrangement::from_int_normals(3, &[&[1, 0, 0], &[1, 1, 0], &[0, 1, 0], &[0, 0, 1], &[1, 0, 1]]).unwrap();
        let rep = activity_correspondence(&a).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = Vec::new();
        for_each_combination(3, 0, |s| empty.push(s.to_vec()));
        assert_eq!(empty, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn bases_examples() {
        assert_eq!(enumerate_bases(&triangle()), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(enumerate_bases(&double_line()), vec![vec![0], vec![1]]);
        assert_eq!(enumerate_bases(&Arrangement::empty(2)), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn triangle_activity_table() {
        let a = triangle();
        let r = classify_activities(&a, &[0, 1]).unwrap();
        assert_eq!(r.externally_passive, vec![2]);
        assert_eq!(r.internally_active, vec![0, 1]);
        assert!(r.externally_active.is_empty() && r.internally_passive.is_empty());

        let r = classify_activities(&a, &[0, 2]).unwrap();
        assert_eq!(r.externally_passive, vec![1]);
        assert_eq!(r.internally_active, vec![0]);
        assert_eq!(r.internally_passive, vec![2]);

        let r = classify_activities(&a, &[1, 2]).unwrap();
        assert_eq!(r.externally_active, vec![0]);
        assert_eq!(r.internally_passive, vec![1, 2]);
        assert!(r.internally_active.is_empty() && r.externally_passive.is_empty());
    }

    #[test]
    fn non_basis_is_rejected() {
        let a = double_line();
        assert!(matches!(classify_activities(&a, &[0, 1]), Err(Error::NotABasis(_))));
        assert!(matches!(classify_activities(&triangle(), &[0]), Err(Error::NotABasis(_))));
    }

    #[test]
    fn tutte_examples() {
        let expected = TuttePoly::from_terms(&[(2, 0, 1), (1, 0, 1), (0, 1, 1)]);
        for m in TutteMethod::ALL {
            assert_eq!(tutte(&triangle(), m), expected, "{}", m.name());
            assert_eq!(tutte(&Arrangement::empty(3), m), TuttePoly::from_terms(&[(0, 0, 1)]));
            assert_eq!(tutte(&double_line(), m), TuttePoly::from_terms(&[(1, 0, 1), (0, 1, 1)]));
        }
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(characteristic_poly(&triangle()), UniPoly::new(vec![2, -3, 1]));
        assert_eq!(characteristic_poly(&Arrangement::empty(2)), UniPoly::new(vec![1]));
        let single = Arrangement::from_int_normals(1, &[&[1]]).unwrap();
        assert_eq!(characteristic_poly(&single), UniPoly::new(vec![-1, 1]));
    }

    #[test]
    fn thickening_examples() {
        let single = Arrangement::from_int_normals(1, &[&[1]]).unwrap();
        let t = thicken_tutte(&tutte_subset_sum(&single), 1, 2).unwrap();
        assert_eq!(t, tutte_subset_sum(&single.thicken(2)));
        assert_eq!(t, TuttePoly::from_terms(&[(1, 0, 1), (0, 1, 1)]));

        let t = thicken_tutte(&tutte_subset_sum(&triangle()), 2, 2).unwrap();
        assert_eq!(t.eval_ones(), 12);
        assert_eq!(t, tutte_subset_sum(&triangle().thicken(2)));

        let one = TuttePoly::from_terms(&[(0, 0, 1)]);
        assert_eq!(thicken_tutte(&one, 0, 2).unwrap(), one);
        assert!(thicken_tutte(&one, 0, 3).is_err());
        assert!(thicken_tutte(&TuttePoly::from_terms(&[(2, 0, 1)]), 1, 2).is_err());
    }

    #[test]
    fn counting() {
        let a = triangle();
        assert_eq!(count_independent_sets(&a), 7);
        assert_eq!(count_spanning_sets(&a), 4);
        assert_eq!(independent_set_sizes(&a), vec![1, 3, 3]);
    }
}
