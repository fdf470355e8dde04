//! Hilbert series from matroid data, and the enumerative and structural
//! statements that follow from it.

use std::collections::HashMap;

use serde::Serialize;

use crate::arrangement::{Arrangement, Hyperplane};
use crate::matroid::{self, characteristic_poly, count_independent_sets, independent_set_sizes, subset_ranks};
use crate::perp::hilbert_via_perp;
use crate::poly::{BigradedSeries, Poly2, TuttePoly};
use crate::rational::Rational;
use crate::{Error, Result};

/// `Σ_{S ⊆ A} q^{m−|S|} (1−q)^{|S|−rk S} (1+t)^{rk S}`.
pub fn hilbert_via_tutte(a: &Arrangement) -> BigradedSeries {
    let m = a.len() as u32;
    let one_minus_q = Poly2::from_terms(&[(0, 0, 1), (1, 0, -1)]);
    let one_t = BigradedSeries::one_t();
    let mut cache: HashMap<(u32, u32), Poly2> = HashMap::new();
    let mut acc = Poly2::zero();
    for (mask, rk) in subset_ranks(a) {
        let size = mask.count_ones();
        let rk = rk as u32;
        let term = cache
            .entry((size, rk))
            .or_insert_with(|| (&one_minus_q.pow(size - rk) * &one_t.pow(rk)).shift(m - size, 0));
        acc = &acc + term;
    }
    BigradedSeries(acc)
}

/// `(1+t)^r q^{m−r} T((1+q+t)/(1+t), 1/q)` with denominators cleared term by term.
pub fn hilbert_from_tutte(t: &TuttePoly, m: usize, r: usize) -> Result<BigradedSeries> {
    let mut acc = Poly2::zero();
    for (a, b, c) in t.terms() {
        if a as usize > r || b as usize + r > m {
            return Err(Error::NonIntegral(format!("Tutte term x^{a} y^{b} with m = {m}, r = {r}")));
        }
        let term = (&BigradedSeries::one_q_t().pow(a) * &BigradedSeries::one_t().pow(r as u32 - a))
            .shift((m - r) as u32 - b, 0)
            .scale(c);
        acc = &acc + &term;
    }
    Ok(BigradedSeries(acc))
}

/// Deletion/restriction recursion on the last hyperplane, memoized on
/// [`Arrangement::canonical_key`].
pub fn hilbert_via_recursion(a: &Arrangement) -> BigradedSeries {
    let mut memo = HashMap::new();
    BigradedSeries(recurse(a, &mut memo))
}

fn recurse(a: &Arrangement, memo: &mut HashMap<(usize, Vec<Vec<Rational>>), Poly2>) -> Poly2 {
    if a.is_empty() {
        return Poly2::one();
    }
    let key = a.canonical_key();
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let canon = Arrangement::with_loops(key.0, key.1.iter().map(|v| Hyperplane::new(v.clone(), "")).collect())
        .expect("same dimension");
    let last = canon.len() - 1;
    let result = if canon.is_loop(last) {
        recurse(&canon.delete(last).expect("in range"), memo)
    } else if canon.is_coloop(last) {
        &BigradedSeries::one_q_t() * &recurse(&canon.restrict(last).expect("not a loop"), memo)
    } else {
        let del = recurse(&canon.delete(last).expect("in range"), memo).shift(1, 0);
        let res = &BigradedSeries::one_t() * &recurse(&canon.restrict(last).expect("not a loop"), memo);
        &del + &res
    };
    memo.insert(key, result.clone());
    result
}

/// The external slice `q^{m−r} T(1+q, 1/q)`.
pub fn external_series(t: &TuttePoly, m: usize, r: usize) -> Poly2 {
    let one_q = BigradedSeries::one_q();
    let mut acc = Poly2::zero();
    for (a, b, c) in t.terms() {
        acc = &acc + &one_q.pow(a).shift((m - r) as u32 - b, 0).scale(c);
    }
    acc
}

/// The central slice `q^{m−r} T(1, 1/q)`.
pub fn central_series(t: &TuttePoly, m: usize, r: usize) -> Poly2 {
    let mut acc = Poly2::zero();
    for (_, b, c) in t.terms() {
        acc.add_term((m - r) as u32 - b, 0, c);
    }
    acc
}

/// Face numbers `f_0..f_n` of the generic deformation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FVector {
    pub counts: Vec<u64>,
}

impl FVector {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `f_{n−i}` is the `t^i` coefficient of `Σ_{S independent} (1+t)^{|S|}`.
pub fn fvector_generic(a: &Arrangement) -> FVector {
    let n = a.dim();
    let mut by_t = vec![0u64; n + 1];
    for (size, count) in independent_set_sizes(a).into_iter().enumerate() {
        let mut binom = 1u64;
        for (i, slot) in by_t.iter_mut().enumerate().take(size + 1) {
            *slot += count as u64 * binom;
            binom = binom * (size - i) as u64 / (i as u64 + 1);
        }
    }
    FVector { counts: (0..=n).map(|f| by_t[n - f]).collect() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopSummandReport {
    pub extracted: BigradedSeries,
    pub predicted: BigradedSeries,
    pub equal: bool,
}

/// Compares the top-degree part of `series` with `(−1)^r q^{m−r} t^r χ(−q/t)`.
pub fn top_summand_check(a: &Arrangement, series: &BigradedSeries) -> TopSummandReport {
    let r = a.rank();
    let m = a.len();
    let chi = characteristic_poly(a);
    let mut predicted = Poly2::zero();
    for (i, &c) in chi.coeffs().iter().enumerate() {
        let sign = if (r + i) % 2 == 0 { 1 } else { -1 };
        predicted.add_term((m - r + i) as u32, (r - i) as u32, sign * c);
    }
    let extracted = BigradedSeries(series.top_part());
    let predicted = BigradedSeries(predicted);
    let equal = extracted == predicted;
    TopSummandReport { extracted, predicted, equal }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubledReport {
    /// `Hilb(1, 1)`.
    pub dimension: i64,
    /// Independent sets of the arrangement with every hyperplane doubled.
    pub doubled_independent_sets: u64,
    /// Whether `Hilb(q², q)` equals the external series of the doubled arrangement.
    pub series_identity: bool,
    pub equal: bool,
}

fn specialize_q2_q(s: &Poly2) -> Vec<i64> {
    let mut out = Vec::new();
    for (i, j, c) in s.terms() {
        let d = (2 * i + j) as usize;
        if out.len() <= d {
            out.resize(d + 1, 0);
        }
        out[d] += c;
    }
    out
}

/// Region count of the doubled generic deformation, two ways.
pub fn doubled_region_count(a: &Arrangement) -> DoubledReport {
    let series = hilbert_via_tutte(a);
    let doubled = a.thicken(2);
    let t2 = matroid::tutte_subset_sum(&doubled);
    let ext = external_series(&t2, doubled.len(), doubled.rank());
    let lhs = specialize_q2_q(&series);
    let rhs = ext.row(0);
    let trim = |v: &[i64]| {
        let end = v.iter().rposition(|&c| c != 0).map_or(0, |p| p + 1);
        v[..end].to_vec()
    };
    let dimension = series.eval_ones();
    let independent = count_independent_sets(&doubled) as u64;
    DoubledReport {
        dimension,
        doubled_independent_sets: independent,
        series_identity: trim(&lhs) == trim(&rhs),
        equal: dimension == independent as i64,
    }
}

/// `(1+t)^r q^{m−r} T(1/(1+t), 1/q)`, the conjectured internal series.
pub fn conjecture_rhs(a: &Arrangement) -> BigradedSeries {
    let t = matroid::tutte_subset_sum(a);
    let (m, r) = (a.len(), a.rank());
    let mut acc = Poly2::zero();
    for (x, y, c) in t.terms() {
        acc = &acc + &BigradedSeries::one_t().pow(r as u32 - x).shift((m - r) as u32 - y, 0).scale(c);
    }
    BigradedSeries(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub lhs: BigradedSeries,
    pub rhs: BigradedSeries,
    pub equal: bool,
    pub essential: bool,
    /// For a non-essential arrangement, the comparison redone on its essentialization.
    pub essentialized_equal: Option<bool>,
}

/// Compares the `k = 0` inverse system with [`conjecture_rhs`]. Reported, never asserted.
///
/// Lines inside every hyperplane have exponent 0 at `k = 0`; such flats impose
/// no constraint, so for a non-essential arrangement the left side also counts
/// polynomials in the directions those lines span.
pub fn conjecture_internal_check(a: &Arrangement) -> ConjectureReport {
    let lhs = hilbert_via_perp(a, 0).expect("k = 0 is valid");
    let rhs = conjecture_rhs(a);
    let equal = lhs == rhs;
    let essential = a.is_essential();
    let essentialized_equal =
        (!essential).then(|| hilbert_via_perp(&a.essentialization(), 0).expect("k = 0 is valid") == rhs);
    ConjectureReport { lhs, rhs, equal, essential, essentialized_equal }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogConcavityReport {
    pub sequences_checked: usize,
    pub violations: Vec<String>,
}

impl LogConcavityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `None` when log-concave without internal zeros, otherwise a description.
fn sequence_problem(seq: &[i64]) -> Option<String> {
    let start = seq.iter().position(|&c| c != 0)?;
    let end = seq.iter().rposition(|&c| c != 0)?;
    let s = &seq[start..=end];
    if let Some(z) = s.iter().position(|&c| c == 0) {
        return Some(format!("internal zero at position {} in {seq:?}", start + z));
    }
    for k in 1..s.len().saturating_sub(1) {
        if (s[k] as i128).pow(2) < s[k - 1] as i128 * s[k + 1] as i128 {
            return Some(format!("{}^2 < {}*{} at position {} in {seq:?}", s[k], s[k - 1], s[k + 1], start + k));
        }
    }
    None
}

/// Log-concavity of every row, column and total-degree diagonal of `s`.
pub fn logconcavity_check(s: &BigradedSeries) -> LogConcavityReport {
    let mut violations = Vec::new();
    let mut checked = 0;
    let max_q = s.max_degree_first().unwrap_or(0);
    let max_t = s.max_degree_second().unwrap_or(0);
    for b in 0..=max_t {
        checked += 1;
        if let Some(p) = sequence_problem(&s.row(b)) {
            violations.push(format!("row t^{b}: {p}"));
        }
    }
    for a in 0..=max_q {
        checked += 1;
        if let Some(p) = sequence_problem(&s.column(a)) {
            violations.push(format!("column q^{a}: {p}"));
        }
    }
    for d in 0..=max_q + max_t {
        checked += 1;
        if let Some(p) = sequence_problem(&s.diagonal(d)) {
            violations.push(format!("diagonal {d}: {p}"));
        }
    }
    LogConcavityReport { sequences_checked: checked, violations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphicalReport {
    /// `Hilb(1, 1)` of the graphical arrangement.
    pub dimension: i64,
    /// `2^r T_G(3/2, 1)`.
    pub tutte_value: Rational,
    pub connected: bool,
    pub equal: bool,
}

/// `Hilb(1,1) = 2^{n−1} T_G(3/2, 1)` for a connected graph on `n` vertices.
/// For a disconnected graph the factor is `2^r` and the result is only reported.
pub fn graphical_region_identity(edges: &[(usize, usize)], n: usize) -> Result<GraphicalReport> {
    let a = Arrangement::from_graph(edges, n)?;
    let r = a.rank();
    let t = matroid::tutte_subset_sum(&a);
    let value = t.eval(&Rational::new(3, 2), &Rational::one()) * Rational::from(2).pow(r as u32);
    if !value.is_integer() {
        return Err(Error::NonIntegral(format!("2^{r} T_G(3/2, 1) = {value}")));
    }
    let dimension = hilbert_via_tutte(&a).eval_ones();
    Ok(GraphicalReport {
        dimension,
        equal: value == Rational::from(dimension),
        tutte_value: value,
        connected: n == 0 || r + 1 == n,
    })
}

/// For every coloop `H`: whether `engine(A − H) == engine(A | H)`.
pub fn coloop_rule_check(a: &Arrangement, engine: impl Fn(&Arrangement) -> BigradedSeries) -> Vec<(usize, bool)> {
    (0..a.len())
        .filter(|&h| a.is_coloop(h))
        .map(|h| {
            let del = engine(&a.delete(h).expect("in range"));
            let res = engine(&a.restrict(h).expect("coloops are not loops"));
            (h, del == res)
        })
        .collect()
}

/// For every non-loop `H`: whether stripping the loops of `A | H` leaves `engine` unchanged.
pub fn loop_stripping_check(a: &Arrangement, engine: impl Fn(&Arrangement) -> BigradedSeries) -> Vec<(usize, bool)> {
    (0..a.len())
        .filter(|&h| !a.is_loop(h))
        .map(|h| {
            let res = a.restrict(h).expect("not a loop");
            (h, engine(&res) == engine(&res.without_loops()))
        })
        .collect()
}
