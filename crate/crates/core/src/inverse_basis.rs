//! The activity basis of the inverse system at `k = 1`.
//!
//! For every basis `B` with activity classes `EA, EP, IA, IP`, and every choice
//! of `I ⊆ IP` and disjoint `S, T ⊆ IA`, the family contains
//!
//! ```text
//! ∏_{e ∈ EP} α_e · ∏_{s ∈ S} α_s · ∏_{h ∈ I ∪ T} dα_h
//! ```
//!
//! with the fermionic factors in increasing hyperplane order. `α_H` is the
//! stored normal of `H` read as a linear form, exactly as given.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::linalg;
use crate::matroid::{all_activities, BasisRecord};
use crate::modular::{self, PrimeField};
use crate::perp::PerpSolver;
use crate::poly::{BigradedSeries, Poly2};
use crate::superspace::{Bidegree, SuperElement};

/// Which index sets produced a family element. All indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElementDescriptor {
    pub source_basis: Vec<usize>,
    pub e: Vec<usize>,
    pub i: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl BasisElementDescriptor {
    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new((self.e.len() + self.s.len()) as u32, (self.i.len() + self.t.len()) as u32)
    }
}

#[derive(Debug, Clone)]
pub struct BasisFamily {
    pub elements: Vec<(BasisElementDescriptor, SuperElement)>,
}

impl BasisFamily {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements in each bidegree.
    pub fn census(&self) -> BigradedSeries {
        let mut p = Poly2::zero();
        for (d, _) in &self.elements {
            let bd = d.bidegree();
            p.add_term(bd.bosonic, bd.fermionic, 1);
        }
        BigradedSeries(p)
    }

    /// Elements grouped by bidegree, in family order.
    pub fn by_bidegree(&self) -> BTreeMap<Bidegree, Vec<&(BasisElementDescriptor, SuperElement)>> {
        let mut out: BTreeMap<Bidegree, Vec<_>> = BTreeMap::new();
        for item in &self.elements {
            out.entry(item.0.bidegree()).or_default().push(item);
        }
        out
    }
}

fn alpha(a: &Arrangement, h: usize) -> SuperElement {
    SuperElement::linear_form(a.normal(h))
}

fn d_alpha(a: &Arrangement, h: usize) -> SuperElement {
    SuperElement::theta_form(a.normal(h))
}

fn product(a: &Arrangement, bosonic: &[usize], fermionic: &[usize]) -> SuperElement {
    let mut acc = SuperElement::one(a.dim());
    for &h in bosonic {
        acc = &acc * &alpha(a, h);
    }
    for &h in fermionic {
        acc = &acc * &d_alpha(a, h);
    }
    acc
}

fn descriptor_element(a: &Arrangement, d: &BasisElementDescriptor) -> SuperElement {
    let bosonic: Vec<usize> = d.e.iter().chain(&d.s).copied().collect();
    let mut fermionic: Vec<usize> = d.i.iter().chain(&d.t).copied().collect();
    fermionic.sort_unstable();
    product(a, &bosonic, &fermionic)
}

/// All descriptors for one basis: `I` runs over subsets of `IP` by bitmask,
/// and each internally active hyperplane is assigned to neither set, `S`, or `T`.
fn descriptors_for(rec: &BasisRecord) -> Vec<BasisElementDescriptor> {
    let ip = &rec.internally_passive;
    let ia = &rec.internally_active;
    let mut out = Vec::new();
    for mask in 0u64..1 << ip.len() {
        let i: Vec<usize> = ip.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &h)| h).collect();
        for code in 0..3usize.pow(ia.len() as u32) {
            let (mut s, mut t) = (Vec::new(), Vec::new());
            let mut c = code;
            for &h in ia {
                match c % 3 {
                    1 => s.push(h),
                    2 => t.push(h),
                    _ => {}
                }
                c /= 3;
            }
            out.push(BasisElementDescriptor {
                source_basis: rec.basis.clone(),
                e: rec.externally_passive.clone(),
                i: i.clone(),
                s,
                t,
            });
        }
    }
    out
}

/// The activity family of `a`, bases in lexicographic order.
pub fn build_family(a: &Arrangement) -> BasisFamily {
    let elements = all_activities(a)
        .iter()
        .flat_map(descriptors_for)
        .map(|d| {
            let e = descriptor_element(a, &d);
            (d, e)
        })
        .collect();
    BasisFamily { elements }
}

/// `Σ_B (1+q+t)^{ia(B)} (1+t)^{ip(B)} q^{ep(B)}`.
pub fn activity_series(a: &Arrangement) -> BigradedSeries {
    let mut acc = Poly2::zero();
    for rec in all_activities(a) {
        let term = &(&BigradedSeries::one_q_t().pow(rec.ia() as u32) * &BigradedSeries::one_t().pow(rec.ip() as u32))
            .shift(rec.ep() as u32, 0);
        acc = &acc + term;
    }
    BigradedSeries(acc)
}

/// `Σ_B 2^{ip(B)} 3^{ia(B)}`.
pub fn family_size(a: &Arrangement) -> u64 {
    all_activities(a).iter().map(|r| 2u64.pow(r.ip() as u32) * 3u64.pow(r.ia() as u32)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// The first offending element or bidegree, when the check failed.
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str, witness: Option<String>) -> Self {
        CheckOutcome { name: name.to_string(), passed: witness.is_none(), witness }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisReport {
    pub cardinality: usize,
    pub census: BigradedSeries,
    pub perp_series: BigradedSeries,
    pub activity_series: BigradedSeries,
    pub checks: Vec<CheckOutcome>,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn first_difference(a: &BigradedSeries, b: &BigradedSeries) -> Option<String> {
    let diff = &a.0 - &b.0;
    let (i, j, _) = diff.terms().next()?;
    Some(format!("bidegree ({i},{j}): {} vs {}", a.coeff(i, j), b.coeff(i, j)))
}

/// Rank of rows that are known to live in one slice; exact, with a modular
/// shortcut when the rows are visibly independent.
fn slice_rank(rows: &[Vec<crate::Rational>], ncols: usize) -> usize {
    let f = PrimeField::new(modular::primes().next().expect("primes exist"));
    let reduced: Option<Vec<Vec<u64>>> = rows.iter().map(|r| r.iter().map(|c| f.from_rational(c)).collect()).collect();
    if let Some(mut m) = reduced {
        // rank mod p never exceeds the rational rank
        if modular::rref(f, &mut m, ncols).len() == rows.len() {
            return rows.len();
        }
    }
    linalg::rank(rows, ncols)
}

/// Checks that the activity family is a basis of the `k = 1` inverse system:
/// membership, independence per bidegree, census against the kernel
/// dimensions, and census against the activity series.
pub fn verify_basis(a: &Arrangement) -> BasisReport {
    let solver = PerpSolver::new(a, 1).expect("k = 1 is valid");
    verify_basis_with(a, &solver)
}

/// As [`verify_basis`], reusing a solver built for `(a, 1)`.
pub fn verify_basis_with(a: &Arrangement, solver: &PerpSolver) -> BasisReport {
    let family = build_family(a);
    let census = family.census();
    let perp_series = solver.hilbert();
    let activity = activity_series(a);

    let membership = family
        .elements
        .iter()
        .find(|(_, e)| !solver.contains(e))
        .map(|(d, e)| format!("{d:?} -> {e}"));

    let layout = solver.layout();
    let mut independence = None;
    for (bd, items) in family.by_bidegree() {
        if bd.bosonic > solver.bosonic_bound() {
            independence = Some(format!("bidegree {bd} lies above the degree bound"));
            break;
        }
        let rows: Vec<Vec<crate::Rational>> =
            items.iter().map(|(_, e)| layout.to_vector(bd.bosonic, bd.fermionic, e)).collect();
        let r = slice_rank(&rows, layout.slice_len(bd.bosonic, bd.fermionic));
        if r != rows.len() {
            independence = Some(format!("bidegree {bd}: rank {r} for {} elements", rows.len()));
            break;
        }
    }

    BasisReport {
        cardinality: family.len(),
        checks: vec![
            CheckOutcome::new("membership", membership),
            CheckOutcome::new("independence", independence),
            CheckOutcome::new("census-vs-perp", first_difference(&census, &perp_series)),
            CheckOutcome::new("census-vs-activity-series", first_difference(&census, &activity)),
        ],
        census,
        perp_series,
        activity_series: activity,
    }
}

/// The fermionic-degree-0 part (`I = T = ∅`) and the fermionic-degree-`r`
/// part (`I = IP`, `T = IA`, `S = ∅`) of the family.
pub fn classical_subfamilies(a: &Arrangement) -> (BasisFamily, BasisFamily) {
    let family = build_family(a);
    let r = a.rank() as u32;
    let (mut external, mut central) = (Vec::new(), Vec::new());
    for item in family.elements {
        let bd = item.0.bidegree();
        if bd.fermionic == 0 {
            external.push(item.clone());
        }
        if bd.fermionic == r {
            central.push(item);
        }
    }
    (BasisFamily { elements: external }, BasisFamily { elements: central })
}

/// Counts from the deletion/restriction split of the family at the last
/// hyperplane `H`: elements from bases avoiding `H` match the family of
/// `A − H` one for one, and the rest come in pairs with and without `dα_H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitCounts {
    pub total: u64,
    pub deletion: u64,
    pub restriction: u64,
    /// Elements from bases containing `H` that do not use `dα_H`.
    pub without_d_alpha: u64,
}

impl SplitCounts {
    pub fn consistent(&self) -> bool {
        self.total == self.deletion + 2 * self.without_d_alpha && self.without_d_alpha == self.restriction
    }
}

/// `None` when the last hyperplane is a loop or a coloop.
pub fn split_counts(a: &Arrangement) -> Option<SplitCounts> {
    let h = a.len().checked_sub(1)?;
    if a.is_loop(h) || a.is_coloop(h) {
        return None;
    }
    let without = build_family(a)
        .elements
        .iter()
        .filter(|(d, _)| d.source_basis.contains(&h) && !d.i.contains(&h))
        .count() as u64;
    Some(SplitCounts {
        total: family_size(a),
        deletion: family_size(&a.delete(h).ok()?),
        restriction: family_size(&a.restrict(h).ok()?),
        without_d_alpha: without,
    })
}
