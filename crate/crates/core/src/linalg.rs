//! Exact linear algebra over the rationals.
//!
//! Matrices are plain row vectors of [`Rational`]. Everything here is exact;
//! pivots are chosen by smallest height to keep entries short.

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot columns.
/// Zero rows are dropped.
pub fn rref(rows: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let best = (top..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].height());
        let Some(best) = best else { continue };
        rows.swap(top, best);
        let inv = rows[top][col].recip();
        for x in rows[top].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, p) in pivot_row.iter().enumerate() {
                if !p.is_zero() {
                    row[c] -= &factor * p;
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// A basis of `{ v : rows · v = 0 }`, one vector per free column, in increasing
/// order of the free column.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Matrix {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                if !row[free].is_zero() {
                    v[p] = -&row[free];
                }
            }
            v
        })
        .collect()
}

/// Solves `basis^T · c = target` for `c`, where `basis` holds linearly independent
/// vectors. Returns `None` when `target` is outside their span.
pub fn coordinates(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let n = target.len();
    // Augmented system: n equations, k unknowns.
    let mut rows: Matrix = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut c = vec![Rational::zero(); k];
    for (row, &p) in rows.iter().zip(&pivots) {
        c[p] = row[k].clone();
    }
    Some(c)
}

/// Incremental row echelon form with optional bookkeeping of how each stored
/// row was formed from the inserted vectors.
///
/// Stored rows are sparse; a row inserted later is zero at every earlier pivot,
/// so reducing against the rows in insertion order clears each pivot for good.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<(usize, Vec<(usize, Rational)>)>,
    track: bool,
    combos: Vec<Vec<(usize, Rational)>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new(), track: false, combos: Vec::new(), inserted: 0 }
    }

    /// Tracks combinations so that [`Echelon::insert_tracked`] can report relations.
    pub fn tracking(ncols: usize) -> Self {
        Self { track: true, ..Self::new(ncols) }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    fn reduce(&self, v: &mut [Rational], mut combo: Option<&mut Vec<(usize, Rational)>>) {
        for (k, (p, row)) in self.rows.iter().enumerate() {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (c, x) in row {
                v[*c] -= &f * x;
            }
            if let Some(combo) = combo.as_deref_mut() {
                for (i, x) in &self.combos[k] {
                    combo.push((*i, -(&f * x)));
                }
            }
        }
    }

    /// Reduces `v` and stores it if independent. Returns `true` when the rank grew.
    pub fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v, None);
        self.push_reduced(v, Vec::new())
    }

    /// Like [`Echelon::insert`], but when `v` is dependent on earlier inserts returns
    /// the relation: coefficients `c` (indexed by insertion order) with `Σ c_i v_i = 0`
    /// and `c` nonzero at this insert.
    pub fn insert_tracked(&mut self, mut v: Vec<Rational>) -> Option<Vec<Rational>> {
        assert!(self.track);
        let me = self.inserted;
        self.inserted += 1;
        let mut combo = vec![(me, Rational::one())];
        self.reduce(&mut v, Some(&mut combo));
        if self.push_reduced(v, combo.clone()) {
            None
        } else {
            let mut rel = vec![Rational::zero(); me + 1];
            for (i, x) in combo {
                rel[i] += x;
            }
            Some(rel)
        }
    }

    fn push_reduced(&mut self, v: Vec<Rational>, combo: Vec<(usize, Rational)>) -> bool {
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        let row: Vec<(usize, Rational)> = v
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (c, x * &inv))
            .collect();
        if self.track {
            let mut merged: Vec<(usize, Rational)> = Vec::new();
            let mut sorted = combo;
            sorted.sort_by_key(|(i, _)| *i);
            for (i, x) in sorted {
                match merged.last_mut() {
                    Some((j, y)) if *j == i => *y += x,
                    _ => merged.push((i, x)),
                }
            }
            merged.retain(|(_, x)| !x.is_zero());
            for (_, x) in merged.iter_mut() {
                *x = &*x * &inv;
            }
            self.combos.push(merged);
        }
        self.rows.push((p, row));
        true
    }

    /// Whether `v` lies in the span of what has been inserted.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v, None);
        v.iter().all(Rational::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&mat(&[&[1, 0, 1], &[0, 1, 1]]), 3), 2);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(&[], 3), 0);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn coordinates_in_span() {
        let basis = mat(&[&[1, 0, 1], &[0, 1, 1]]);
        let c = coordinates(&basis, &mat(&[&[2, 3, 5]])[0]).unwrap();
        assert_eq!(c, vec![Rational::from(2), Rational::from(3)]);
        assert!(coordinates(&basis, &mat(&[&[1, 1, 1]])[0]).is_none());
    }

    #[test]
    fn tracked_relations() {
        let mut e = Echelon::tracking(2);
        assert!(e.insert_tracked(mat(&[&[1, 1]])[0].clone()).is_none());
        assert!(e.insert_tracked(mat(&[&[1, -1]])[0].clone()).is_none());
        let rel = e.insert_tracked(mat(&[&[3, 1]])[0].clone()).unwrap();
        let vs = mat(&[&[1, 1], &[1, -1], &[3, 1]]);
        for col in 0..2 {
            let s: Rational = rel.iter().zip(&vs).map(|(c, v)| c * &v[col]).sum();
            assert!(s.is_zero());
        }
        assert!(!rel[2].is_zero());
    }
}
