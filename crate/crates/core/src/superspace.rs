//! Superspace: polynomials in commuting `x` variables tensored with the exterior
//! algebra on anticommuting `θ` variables, with exact rational coefficients.
//!
//! Variables are indexed from 0 internally; `x_1` in mathematical notation is
//! index 0 here. Display uses 1-based names.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::{Error, Result};

/// Largest ambient dimension supported by the bitmask encoding of [`ThetaWord`].
pub const MAX_DIM: usize = 32;

/// Exponent vector of a monomial in the bosonic variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XMonomial(Vec<u32>);

impl XMonomial {
    pub fn one(n: usize) -> Self {
        XMonomial(vec![0; n])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        XMonomial(exponents)
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        XMonomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &XMonomial) -> XMonomial {
        XMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A sorted product of distinct fermionic variables, stored as a bitmask
/// (bit `i` set means `θ_{i+1}` is present).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ThetaWord(u32);

impl ThetaWord {
    pub const EMPTY: ThetaWord = ThetaWord(0);

    pub fn from_mask(mask: u32) -> Self {
        ThetaWord(mask)
    }

    pub fn single(i: usize) -> Self {
        ThetaWord(1 << i)
    }

    /// Builds the word from distinct indices in any order, returning the sign of
    /// the sorting permutation, or `None` when an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(ThetaWord, i32)> {
        let mut word = ThetaWord::EMPTY;
        let mut sign = 1;
        for &i in indices {
            let (w, s) = theta_concat(word, ThetaWord::single(i))?;
            word = w;
            sign *= s;
        }
        Some((word, sign))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    /// Sign `(−1)^{s−1}` of contracting `θ_i` out of this word, where `s` is the
    /// 1-based position of `θ_i`, together with the remaining word.
    pub fn contract(self, i: usize) -> Option<(ThetaWord, i32)> {
        if !self.contains(i) {
            return None;
        }
        let before = (self.0 & ((1u32 << i) - 1)).count_ones();
        let sign = if before % 2 == 0 { 1 } else { -1 };
        Some((ThetaWord(self.0 & !(1 << i)), sign))
    }
}

/// Concatenates two fermionic words: returns the sorted word and the sign of the
/// sorting permutation, or `None` when they share a variable (`θ_i² = 0`).
pub fn theta_concat(a: ThetaWord, b: ThetaWord) -> Option<(ThetaWord, i32)> {
    if a.0 & b.0 != 0 {
        return None;
    }
    // Each pair (i in a, j in b) with i > j costs one transposition.
    let mut inversions = 0;
    let mut rest = b.0;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a.0 >> j >> 1).count_ones();
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((ThetaWord(a.0 | b.0), sign))
}

/// Bosonic and fermionic degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub bosonic: u32,
    pub fermionic: u32,
}

impl Bidegree {
    pub fn new(bosonic: u32, fermionic: u32) -> Self {
        Self { bosonic, fermionic }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.bosonic, self.fermionic)
    }
}

/// An element of the superspace ring in canonical form: no zero coefficients,
/// fermionic words sorted with the sign folded into the coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperElement {
    n: usize,
    terms: BTreeMap<(XMonomial, ThetaWord), Rational>,
}

impl SuperElement {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "ambient dimension {n} exceeds {MAX_DIM}");
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(n, XMonomial::one(n), ThetaWord::EMPTY, c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn term(n: usize, x: XMonomial, theta: ThetaWord, c: Rational) -> Self {
        assert_eq!(x.dim(), n);
        let mut e = Self::zero(n);
        e.add_term(x, theta, c);
        e
    }

    /// `x_i` (0-based).
    pub fn x(n: usize, i: usize) -> Self {
        Self::term(n, XMonomial::var(n, i), ThetaWord::EMPTY, Rational::one())
    }

    /// `θ_i` (0-based).
    pub fn theta(n: usize, i: usize) -> Self {
        Self::term(n, XMonomial::one(n), ThetaWord::single(i), Rational::one())
    }

    /// The linear form `Σ a_i x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut e = Self::zero(n);
        for (i, a) in coeffs.iter().enumerate() {
            e.add_term(XMonomial::var(n, i), ThetaWord::EMPTY, a.clone());
        }
        e
    }

    /// The fermionic linear form `Σ a_i θ_i`, which is `d` of [`SuperElement::linear_form`].
    pub fn theta_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut e = Self::zero(n);
        for (i, a) in coeffs.iter().enumerate() {
            e.add_term(XMonomial::one(n), ThetaWord::single(i), a.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XMonomial, ThetaWord, &Rational)> {
        self.terms.iter().map(|((x, t), c)| (x, *t, c))
    }

    pub fn coefficient(&self, x: &XMonomial, theta: ThetaWord) -> Rational {
        self.terms.get(&(x.clone(), theta)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, x: XMonomial, theta: ThetaWord, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (x, theta);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_dim(&self, other: &SuperElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &SuperElement) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for ((x, t), c) in &other.terms {
            out.add_term(x.clone(), *t, c.clone());
        }
        Ok(out)
    }

    /// The exact product in canonical form.
    pub fn multiply(&self, other: &SuperElement) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for ((xa, ta), ca) in &self.terms {
            for ((xb, tb), cb) in &other.terms {
                if let Some((t, sign)) = theta_concat(*ta, *tb) {
                    let c = ca * cb;
                    out.add_term(xa.mul(xb), t, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.multiply(self).expect("same dimension");
        }
        acc
    }

    /// The Euler operator `d f = Σ_i (∂f/∂x_i) · θ_i`.
    pub fn euler_d(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((x, t), c) in &self.terms {
            for i in 0..self.n {
                let a = x.0[i];
                if a == 0 {
                    continue;
                }
                let Some((word, sign)) = theta_concat(*t, ThetaWord::single(i)) else {
                    continue;
                };
                let mut e = x.0.clone();
                e[i] -= 1;
                let coeff = c * &Rational::from(a as i64);
                out.add_term(XMonomial(e), word, if sign < 0 { -coeff } else { coeff });
            }
        }
        out
    }

    /// `self ⊙ g`: substitute `∂/∂x_i` for `x_i` and the contraction `∂/∂θ_i` for
    /// `θ_i` in `self`, then apply the resulting operator to `g`.
    pub fn apply(&self, g: &SuperElement) -> Result<Self> {
        self.check_dim(g)?;
        let mut out = Self::zero(self.n);
        for ((xa, ta), ca) in &self.terms {
            let indices = ta.indices();
            for ((xb, tb), cb) in &g.terms {
                let Some((word, sign)) = contract_word(&indices, *tb) else {
                    continue;
                };
                let Some((mono, factor)) = differentiate(xa, xb) else {
                    continue;
                };
                let c = &(ca * cb) * &factor;
                out.add_term(mono, word, if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Splits into bihomogeneous components keyed by bidegree.
    pub fn bihomogeneous_components(&self) -> BTreeMap<Bidegree, SuperElement> {
        let mut out: BTreeMap<Bidegree, SuperElement> = BTreeMap::new();
        for ((x, t), c) in &self.terms {
            let bd = Bidegree::new(x.degree(), t.degree());
            out.entry(bd)
                .or_insert_with(|| Self::zero(self.n))
                .add_term(x.clone(), *t, c.clone());
        }
        out
    }

    /// The bidegree when the element is nonzero and bihomogeneous.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|(x, t)| Bidegree::new(x.degree(), t.degree()));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Substitutes `x_i ↦ Σ_j m[i][j] y_j` and `θ_i ↦ Σ_j m[i][j] η_j` for an
    /// `n × n'` matrix `m`, producing an element of the `n'`-dimensional ring.
    pub fn substitute_linear(&self, m: &[Vec<Rational>]) -> Self {
        assert_eq!(m.len(), self.n);
        let n2 = m.first().map_or(0, Vec::len);
        let xs: Vec<SuperElement> = m.iter().map(|row| SuperElement::linear_form(row)).collect();
        let ths: Vec<SuperElement> = m.iter().map(|row| SuperElement::theta_form(row)).collect();
        let mut out = Self::zero(n2);
        for ((x, t), c) in &self.terms {
            let mut term = SuperElement::constant(n2, c.clone());
            for (i, &e) in x.0.iter().enumerate() {
                for _ in 0..e {
                    term = term.multiply(&xs[i]).expect("same dimension");
                }
            }
            for i in t.indices() {
                term = term.multiply(&ths[i]).expect("same dimension");
            }
            out = out.try_add(&term).expect("same dimension");
        }
        out
    }
}

/// Applies `∂^θ_{j_1} ∘ ⋯ ∘ ∂^θ_{j_r}` (innermost last index) to the word.
fn contract_word(indices: &[usize], word: ThetaWord) -> Option<(ThetaWord, i32)> {
    let mut w = word;
    let mut sign = 1;
    for &i in indices.iter().rev() {
        let (next, s) = w.contract(i)?;
        w = next;
        sign *= s;
    }
    Some((w, sign))
}

/// `∂^a x^b = (b!/(b−a)!) x^{b−a}`, or `None` when some `a_i > b_i`.
fn differentiate(a: &XMonomial, b: &XMonomial) -> Option<(XMonomial, Rational)> {
    let mut factor: i64 = 1;
    let mut big = Rational::one();
    let mut e = Vec::with_capacity(b.0.len());
    for (&ai, &bi) in a.0.iter().zip(&b.0) {
        if ai > bi {
            return None;
        }
        for k in 0..ai {
            let f = (bi - k) as i64;
            match factor.checked_mul(f) {
                Some(v) => factor = v,
                None => {
                    big = big * Rational::from(factor);
                    factor = f;
                }
            }
        }
        e.push(bi - ai);
    }
    Some((XMonomial(e), big * Rational::from(factor)))
}

impl Add for &SuperElement {
    type Output = SuperElement;
    fn add(self, rhs: &SuperElement) -> SuperElement {
        self.try_add(rhs).expect("ambient dimension mismatch")
    }
}

impl Sub for &SuperElement {
    type Output = SuperElement;
    fn sub(self, rhs: &SuperElement) -> SuperElement {
        self.try_add(&-rhs).expect("ambient dimension mismatch")
    }
}

impl Neg for &SuperElement {
    type Output = SuperElement;
    fn neg(self) -> SuperElement {
        self.scale(&-Rational::one())
    }
}

impl Mul for &SuperElement {
    type Output = SuperElement;
    fn mul(self, rhs: &SuperElement) -> SuperElement {
        self.multiply(rhs).expect("ambient dimension mismatch")
    }
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((x, t), c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (i, &e) in x.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            for i in t.indices() {
                factors.push(format!("θ{}", i + 1));
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Serialized form of one term: `{"coeff": "p/q", "x": [exponents], "theta": [1-based indices]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: Rational,
    pub x: Vec<u32>,
    pub theta: Vec<usize>,
}

impl SuperElement {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|((x, t), c)| TermRecord {
                coeff: c.clone(),
                x: x.0.clone(),
                theta: t.indices().into_iter().map(|i| i + 1).collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn x(i: usize) -> SuperElement {
        SuperElement::x(2, i)
    }

    fn th(i: usize) -> SuperElement {
        SuperElement::theta(2, i)
    }

    #[test]
    fn theta_concat_signs() {
        let (t1, t2) = (ThetaWord::single(0), ThetaWord::single(1));
        assert_eq!(theta_concat(t1, t2), Some((ThetaWord::from_mask(0b11), 1)));
        assert_eq!(theta_concat(t2, t1), Some((ThetaWord::from_mask(0b11), -1)));
        assert_eq!(theta_concat(t1, t1), None);
        let (w, s) = ThetaWord::from_indices(&[2, 0, 1]).unwrap();
        assert_eq!((w.indices(), s), (vec![0, 1, 2], 1));
        assert_eq!(ThetaWord::from_indices(&[1, 0, 2]).unwrap().1, -1);
    }

    #[test]
    fn multiplication_examples() {
        let a = &x(0) + &th(0);
        let b = &x(0) - &th(0);
        assert_eq!(&a * &b, x(0).pow(2));
        assert_eq!(&th(0) * &th(1), SuperElement::term(2, XMonomial::one(2), ThetaWord::from_mask(3), q(1)));
        assert_eq!(&th(1) * &th(0), -&(&th(0) * &th(1)));
        let lhs = &(&x(0) * &th(1)) * &(&x(1) * &th(0));
        let rhs = -&(&(&x(0) * &x(1)) * &(&th(0) * &th(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(x(0).pow(2).euler_d(), (&x(0) * &th(0)).scale(&q(2)));
        assert_eq!((&x(0) * &x(1)).euler_d(), &(&x(1) * &th(0)) + &(&x(0) * &th(1)));
        let f = &x(0).pow(2) * &x(1);
        assert!(f.euler_d().euler_d().is_zero());
    }

    #[test]
    fn apply_examples() {
        assert_eq!(x(0).apply(&x(0).pow(2)).unwrap(), x(0).scale(&q(2)));
        let t12 = &th(0) * &th(1);
        assert_eq!(th(0).apply(&t12).unwrap(), th(1));
        assert_eq!(th(1).apply(&t12).unwrap(), -&th(0));
        let op = (&x(0) + &x(1)).pow(2);
        assert_eq!(op.apply(&(&x(0) * &x(1))).unwrap(), SuperElement::constant(2, q(2)));
        // θ1θ2 ⊙ θ1θ2 = ∂θ1(∂θ2(θ1θ2)) = ∂θ1(−θ1) = −1
        assert_eq!(t12.apply(&t12).unwrap(), SuperElement::constant(2, q(-1)));
        assert!(x(0).apply(&th(0)).unwrap().is_zero());
    }

    #[test]
    fn components() {
        let f = &(&SuperElement::one(2) + &x(0)) + &th(0);
        let comps = f.bihomogeneous_components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[&Bidegree::new(0, 0)], SuperElement::one(2));
        assert_eq!(comps[&Bidegree::new(1, 0)], x(0));
        assert_eq!(comps[&Bidegree::new(0, 1)], th(0));
        assert!(SuperElement::zero(2).bihomogeneous_components().is_empty());
        let g = &(&x(0) * &th(0)) + &(&x(0) * &th(1));
        let comps = g.bihomogeneous_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&Bidegree::new(1, 1)], g);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = SuperElement::x(2, 0);
        let b = SuperElement::x(3, 0);
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.apply(&b).is_err());
    }

    #[test]
    fn display() {
        let f = &(&x(0).pow(2).scale(&q(3)) - &(&x(1) * &th(0))) + &SuperElement::one(2);
        assert_eq!(f.to_string(), "1 - x2*θ1 + 3*x1^2");
    }
}
