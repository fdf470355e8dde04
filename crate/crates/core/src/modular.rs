//! Arithmetic modulo word-sized primes, Chinese remaindering and rational
//! reconstruction. Used to find kernels quickly; results are always lifted
//! back to the rationals and checked there.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// A prime field `Z/pZ` with `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p < 1 << 62 && is_prime(p));
        PrimeField { p }
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced below p")
    }

    /// The image of a rational, or `None` when `p` divides the denominator.
    pub fn from_rational(self, v: &Rational) -> Option<u64> {
        let d = self.from_bigint(&v.denom());
        (d != 0).then(|| self.mul(self.from_bigint(&v.numer()), self.inv(d)))
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &b in &BASES {
        let mut x = pow(b, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, largest first.
pub fn primes() -> impl Iterator<Item = u64> {
    ((1u64 << 61)..(1u64 << 62)).rev().filter(|&c| c % 2 == 1 && is_prime(c))
}

/// Reduces `rows` in place to reduced row echelon form over the field and
/// returns the pivot columns. Zero rows are dropped.
pub fn rref(f: PrimeField, rows: &mut Vec<Vec<u64>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let Some(r) = (top..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(top, r);
        let inv = f.inv(rows[top][col]);
        for x in rows[top].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = std::mem::take(&mut rows[top]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if p != 0 {
                    *x = f.sub(*x, f.mul(factor, p));
                }
            }
        }
        rows[top] = pivot_row;
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    pivots
}

/// A basis of `{ c : Σ c_r rows[r] = 0 }`.
pub fn left_nullspace(f: PrimeField, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let r = rows.len();
    let Some(len) = rows.first().map(Vec::len) else { return Vec::new() };
    let mut aug: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let mut v = Vec::with_capacity(len + r);
            v.extend_from_slice(row);
            v.resize(len + r, 0);
            v[len + k] = 1;
            v
        })
        .collect();
    let mut top = 0;
    for col in 0..len {
        if top == r {
            break;
        }
        let Some(p) = (top..r).find(|&k| aug[k][col] != 0) else { continue };
        aug.swap(top, p);
        let inv = f.inv(aug[top][col]);
        let pivot_row = std::mem::take(&mut aug[top]);
        for row in aug.iter_mut().skip(top + 1) {
            if row[col] == 0 {
                continue;
            }
            let factor = f.mul(row[col], inv);
            for (x, &p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if p != 0 {
                    *x = f.sub(*x, f.mul(factor, p));
                }
            }
        }
        aug[top] = pivot_row;
        top += 1;
    }
    aug.into_iter().skip(top).map(|row| row[len..].to_vec()).collect()
}

/// Combines `x ≡ r (mod m)` with `x ≡ s (mod p)` into a residue modulo `m·p`.
pub fn crt(r: &BigInt, m: &BigInt, s: u64, f: PrimeField) -> BigInt {
    let rp = f.from_bigint(r);
    let mp = f.from_bigint(m);
    let t = f.mul(f.sub(s, rp), f.inv(mp));
    r + m * BigInt::from(t)
}

/// The unique `a/b` with `|a|, b ≤ sqrt(m/2)` and `a ≡ b·r (mod m)`, if any.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    let (num, den) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::from_bigints(num, den))
}
