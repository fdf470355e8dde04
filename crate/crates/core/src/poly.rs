//! Integer polynomials in two variables (bigraded series, Tutte polynomials)
//! and in one variable (characteristic polynomials).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::rational::Rational;

/// A polynomial with integer coefficients in two variables, keyed by exponent pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), i64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn monomial(a: u32, b: u32, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    /// Builds from `(a, b, coeff)` triples; repeated exponents accumulate.
    pub fn from_terms(terms: &[(u32, u32, i64)]) -> Self {
        let mut p = Self::zero();
        for &(a, b, c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> i64 {
        self.terms.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, i64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero();
        for (a, b, x) in self.terms() {
            out.add_term(a, b, x * c);
        }
        out
    }

    /// Multiplies by the monomial `u^a v^b`.
    pub fn shift(&self, da: u32, db: u32) -> Self {
        Self { terms: self.terms.iter().map(|(&(a, b), &c)| ((a + da, b + db), c)).collect() }
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        self.terms().map(|(a, b, c)| Rational::from(c) * u.pow(a) * v.pow(b)).sum()
    }

    /// Sum of all coefficients.
    pub fn eval_ones(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn max_degree_first(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn max_degree_second(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0 + k.1).max()
    }

    /// Coefficients of `v^b` as a polynomial in the first variable, low degree first.
    pub fn row(&self, b: u32) -> Vec<i64> {
        let Some(max) = self.max_degree_first() else { return Vec::new() };
        let mut out: Vec<i64> = (0..=max).map(|a| self.coeff(a, b)).collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// Coefficients of `u^a` as a polynomial in the second variable, low degree first.
    pub fn column(&self, a: u32) -> Vec<i64> {
        let Some(max) = self.max_degree_second() else { return Vec::new() };
        let mut out: Vec<i64> = (0..=max).map(|b| self.coeff(a, b)).collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// Coefficients of total degree `d`, ordered by increasing power of the second variable.
    pub fn diagonal(&self, d: u32) -> Vec<i64> {
        let mut out: Vec<i64> = (0..=d).map(|b| self.coeff(d - b, b)).collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// The homogeneous part of maximal total degree.
    pub fn top_part(&self) -> Self {
        let Some(d) = self.total_degree() else { return Self::zero() };
        Self {
            terms: self.terms.iter().filter(|(k, _)| k.0 + k.1 == d).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    /// Substitutes the second variable by zero.
    pub fn at_second_zero(&self) -> Self {
        Self { terms: self.terms.iter().filter(|(k, _)| k.1 == 0).map(|(&k, &c)| (k, c)).collect() }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, u: &str, v: &str) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (k, key) in keys.iter().enumerate() {
            let c = self.terms[key];
            let sep = match (k, c < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}{}", monomial_str(c.unsigned_abs(), &[(u, key.0), (v, key.1)]))?;
        }
        Ok(())
    }
}

fn monomial_str(abs: u64, vars: &[(&str, u32)]) -> String {
    let mut s = String::new();
    for &(name, e) in vars {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}^{e}")),
        }
    }
    if s.is_empty() {
        abs.to_string()
    } else if abs == 1 {
        s
    } else {
        format!("{abs}{s}")
    }
}

/// Univariate polynomial written ascending, `sum c_i u^i`.
fn fmt_ascending(coeffs: &[(u32, i64)], var: &str) -> String {
    let mut s = String::new();
    for (k, &(e, c)) in coeffs.iter().enumerate() {
        let sep = match (k, c < 0) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        s.push_str(sep);
        s.push_str(&monomial_str(c.unsigned_abs(), &[(var, e)]));
    }
    s
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (a, b, c) in rhs.terms() {
            out.add_term(a, b, c);
        }
        out
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (a, b, c) in rhs.terms() {
            out.add_term(a, b, -c);
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1)
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (a, b, c) in self.terms() {
            for (d, e, g) in rhs.terms() {
                out.add_term(a + d, b + e, c * g);
            }
        }
        out
    }
}

macro_rules! named_poly2 {
    ($(#[$doc:meta])* $name:ident, $u:literal, $v:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
        pub struct $name(pub Poly2);

        impl std::ops::Deref for $name {
            type Target = Poly2;
            fn deref(&self) -> &Poly2 {
                &self.0
            }
        }

        impl From<Poly2> for $name {
            fn from(p: Poly2) -> Self {
                $name(p)
            }
        }

        impl $name {
            pub fn from_terms(terms: &[(u32, u32, i64)]) -> Self {
                $name(Poly2::from_terms(terms))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                #[derive(Serialize)]
                struct Term {
                    #[serde(rename = $u)]
                    a: u32,
                    #[serde(rename = $v)]
                    b: u32,
                    coeff: i64,
                }
                let mut seq = serializer.serialize_seq(Some(self.0.terms.len()))?;
                for (a, b, coeff) in self.0.terms() {
                    seq.serialize_element(&Term { a, b, coeff })?;
                }
                seq.end()
            }
        }
    };
}

named_poly2!(
    /// A bigraded Hilbert series `Σ c_{i,j} q^i t^j`.
    BigradedSeries,
    "q",
    "t"
);

named_poly2!(
    /// A Tutte polynomial `Σ c_{a,b} x^a y^b`.
    TuttePoly,
    "x",
    "y"
);

impl BigradedSeries {
    /// `1 + q + t`.
    pub fn one_q_t() -> Poly2 {
        Poly2::from_terms(&[(0, 0, 1), (1, 0, 1), (0, 1, 1)])
    }

    /// `1 + t`.
    pub fn one_t() -> Poly2 {
        Poly2::from_terms(&[(0, 0, 1), (0, 1, 1)])
    }

    /// `1 + q`.
    pub fn one_q() -> Poly2 {
        Poly2::from_terms(&[(0, 0, 1), (1, 0, 1)])
    }

    /// Coefficient of `t^j` as ascending coefficients in `q`.
    pub fn t_layer(&self, j: u32) -> Vec<i64> {
        self.0.row(j)
    }
}

impl fmt::Display for BigradedSeries {
    /// Grouped by powers of `t`, each group ascending in `q`:
    /// `(1 + 2q + 3q^2 + q^3) + t(2 + 4q + 3q^2) + t^2(1 + 2q)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return write!(f, "0");
        }
        let maxt = self.0.max_degree_second().unwrap_or(0);
        let mut groups = Vec::new();
        let multi = (0..=maxt).filter(|&j| !self.0.row(j).is_empty()).count() > 1;
        for j in 0..=maxt {
            let row: Vec<(u32, i64)> = self
                .0
                .row(j)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(i, c)| (i as u32, c))
                .collect();
            if row.is_empty() {
                continue;
            }
            let inner = fmt_ascending(&row, "q");
            let prefix = match j {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{j}"),
            };
            let group = if j > 0 && inner == "1" {
                prefix
            } else if j > 0 && row.len() == 1 {
                format!("{inner}{prefix}")
            } else if row.len() > 1 && (j > 0 || multi) {
                format!("{prefix}({inner})")
            } else {
                inner
            };
            groups.push(group);
        }
        write!(f, "{}", groups.join(" + "))
    }
}

impl fmt::Display for TuttePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, "x", "y")
    }
}

/// A univariate integer polynomial, coefficients listed from degree 0 upward.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct UniPoly(pub Vec<i64>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, &c| acc * s + Rational::from(c))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let desc: Vec<(u32, i64)> =
            self.0.iter().enumerate().rev().filter(|(_, c)| **c != 0).map(|(i, &c)| (i as u32, c)).collect();
        write!(f, "{}", fmt_ascending(&desc, "s"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = BigradedSeries::one_q_t();
        let sq = &a * &a;
        assert_eq!(sq.coeff(1, 1), 2);
        assert_eq!(sq.eval_ones(), 9);
        assert_eq!((&sq - &sq), Poly2::zero());
        assert_eq!(a.pow(3).eval_ones(), 27);
    }

    #[test]
    fn series_layout() {
        let s = BigradedSeries::from_terms(&[
            (0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 1),
            (0, 1, 2), (1, 1, 4), (2, 1, 3),
            (0, 2, 1), (1, 2, 2),
        ]);
        assert_eq!(s.to_string(), "(1 + 2q + 3q^2 + q^3) + t(2 + 4q + 3q^2) + t^2(1 + 2q)");
        assert_eq!(BigradedSeries(BigradedSeries::one_q_t()).to_string(), "(1 + q) + t");
        assert_eq!(BigradedSeries::from_terms(&[(0, 0, 1)]).to_string(), "1");
        assert_eq!(BigradedSeries::from_terms(&[(1, 2, 3)]).to_string(), "3qt^2");
    }

    #[test]
    fn tutte_layout() {
        let t = TuttePoly::from_terms(&[(2, 0, 1), (1, 0, 1), (0, 1, 1)]);
        assert_eq!(t.to_string(), "x^2 + x + y");
        assert_eq!(TuttePoly::from_terms(&[(0, 0, 1)]).to_string(), "1");
    }

    #[test]
    fn univariate() {
        let chi = UniPoly::new(vec![2, -3, 1, 0]);
        assert_eq!(chi.degree(), Some(2));
        assert_eq!(chi.to_string(), "s^2 - 3s + 2");
        assert_eq!(chi.eval(&Rational::from(2)), Rational::zero());
    }

    #[test]
    fn slices() {
        let s = Poly2::from_terms(&[(0, 0, 1), (2, 0, 3), (1, 1, 4), (0, 2, 5)]);
        assert_eq!(s.row(0), vec![1, 0, 3]);
        assert_eq!(s.column(0), vec![1, 0, 5]);
        assert_eq!(s.diagonal(2), vec![3, 4, 5]);
        assert_eq!(s.top_part(), Poly2::from_terms(&[(2, 0, 3), (1, 1, 4), (0, 2, 5)]));
    }
}
