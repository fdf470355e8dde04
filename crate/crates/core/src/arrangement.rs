//! Rational central multiarrangements.
//!
//! The order of the hyperplanes is significant: it is the total order used for
//! basis activities. Index sets are 0-based positions in that order.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use crate::linalg::{self, Echelon};
use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Rational>,
    pub label: String,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rational>, label: impl Into<String>) -> Self {
        Self { normal, label: label.into() }
    }

    pub fn is_loop(&self) -> bool {
        self.normal.iter().all(Rational::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrangement {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
}

/// A flat of dimension at least one: the intersection of the hyperplanes in
/// `containing_set`, which lists every hyperplane containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    pub containing_set: Vec<usize>,
    pub subspace_basis: Vec<Vec<Rational>>,
    /// Number of hyperplanes (with multiplicity) not containing the flat.
    pub rho: usize,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.subspace_basis.len()
    }
}

pub(crate) fn default_label(normal: &[Rational]) -> String {
    let mut s = String::new();
    for (i, c) in normal.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { "-" } else { "+" });
        }
        let a = c.abs();
        if !a.is_one() {
            s.push_str(&format!("{a}*"));
        }
        s.push_str(&format!("x{}", i + 1));
    }
    if s.is_empty() {
        "0".to_string()
    } else {
        s
    }
}

impl Arrangement {
    /// An arrangement from user input: every normal must be nonzero and of length `n`.
    pub fn new(n: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        for (index, h) in hyperplanes.iter().enumerate() {
            if h.normal.len() != n {
                return Err(Error::NormalLength { index, got: h.normal.len(), expected: n });
            }
            if h.is_loop() {
                return Err(Error::ZeroNormal(index));
            }
        }
        Ok(Self { n, hyperplanes })
    }

    /// Like [`Arrangement::new`] but permits loops (zero normals).
    pub fn with_loops(n: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        for (index, h) in hyperplanes.iter().enumerate() {
            if h.normal.len() != n {
                return Err(Error::NormalLength { index, got: h.normal.len(), expected: n });
            }
        }
        Ok(Self { n, hyperplanes })
    }

    /// Convenience constructor from rational normals, labelled by their linear forms.
    pub fn from_normals(n: usize, normals: Vec<Vec<Rational>>) -> Result<Self> {
        let hs = normals
            .into_iter()
            .map(|v| {
                let label = default_label(&v);
                Hyperplane::new(v, label)
            })
            .collect();
        Self::new(n, hs)
    }

    /// Convenience constructor from integer normals.
    pub fn from_int_normals(n: usize, normals: &[&[i64]]) -> Result<Self> {
        Self::from_normals(
            n,
            normals.iter().map(|v| v.iter().map(|&c| Rational::from(c)).collect()).collect(),
        )
    }

    pub fn empty(n: usize) -> Self {
        Self { n, hyperplanes: Vec::new() }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Size, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn normal(&self, i: usize) -> &[Rational] {
        &self.hyperplanes[i].normal
    }

    pub fn is_loop(&self, i: usize) -> bool {
        self.hyperplanes[i].is_loop()
    }

    pub fn has_loops(&self) -> bool {
        self.hyperplanes.iter().any(Hyperplane::is_loop)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.len() });
        }
        Ok(())
    }

    /// Rank of the normals indexed by `subset`.
    pub fn rank_of(&self, subset: &[usize]) -> usize {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| self.normal(i).to_vec()).collect();
        linalg::rank(&rows, self.n)
    }

    pub fn rank_of_mask(&self, mask: u64) -> usize {
        self.rank_of(&mask_indices(mask))
    }

    /// Rank of the whole arrangement.
    pub fn rank(&self) -> usize {
        self.rank_of(&(0..self.len()).collect::<Vec<_>>())
    }

    /// Whether `i` is a coloop: its normal lies outside the span of the others.
    pub fn is_coloop(&self, i: usize) -> bool {
        let others: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.rank_of(&others) < self.rank()
    }

    /// Removes one copy of hyperplane `i`, keeping the order of the rest.
    pub fn delete(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let mut hs = self.hyperplanes.clone();
        hs.remove(i);
        Ok(Self { n: self.n, hyperplanes: hs })
    }

    /// A rational basis of hyperplane `i` (the kernel of its normal), pivoting at
    /// the first nonzero coordinate; one vector per remaining coordinate.
    pub fn hyperplane_basis(&self, i: usize) -> Result<Vec<Vec<Rational>>> {
        self.check_index(i)?;
        if self.is_loop(i) {
            return Err(Error::RestrictAtLoop(i));
        }
        Ok(linalg::nullspace(&[self.normal(i).to_vec()], self.n))
    }

    /// Restriction to hyperplane `i`, in coordinates given by [`Arrangement::hyperplane_basis`].
    /// Copies parallel to `H_i` become loops and are kept, in order.
    pub fn restrict(&self, i: usize) -> Result<Self> {
        let basis = self.hyperplane_basis(i)?;
        let hyperplanes = self
            .hyperplanes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| {
                let normal = basis
                    .iter()
                    .map(|v| h.normal.iter().zip(v).map(|(a, b)| a * b).sum())
                    .collect();
                Hyperplane::new(normal, h.label.clone())
            })
            .collect();
        Ok(Self { n: self.n - 1, hyperplanes })
    }

    /// Whether the normals span the whole dual space.
    pub fn is_essential(&self) -> bool {
        self.rank() == self.n
    }

    /// The same matroid in dimension `rank`: each normal is replaced by its
    /// coordinates in the greedy (lexicographically first) basis of the span.
    pub fn essentialization(&self) -> Self {
        let mut basis: Vec<usize> = Vec::new();
        for i in 0..self.len() {
            basis.push(i);
            if self.rank_of(&basis) < basis.len() {
                basis.pop();
            }
        }
        let vectors: Vec<Vec<Rational>> = basis.iter().map(|&i| self.hyperplanes[i].normal.clone()).collect();
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|h| {
                let normal = linalg::coordinates(&vectors, &h.normal).expect("every normal lies in the span");
                Hyperplane::new(normal, h.label.clone())
            })
            .collect();
        Self { n: basis.len(), hyperplanes }
    }

    /// Drops every loop, keeping the order of the rest.
    pub fn without_loops(&self) -> Self {
        Self {
            n: self.n,
            hyperplanes: self.hyperplanes.iter().filter(|h| !h.is_loop()).cloned().collect(),
        }
    }

    /// Every hyperplane whose normal lies in the span of the normals in `subset`.
    pub fn closure(&self, subset: &[usize]) -> Vec<usize> {
        let mut ech = Echelon::new(self.n);
        for &i in subset {
            ech.insert(self.normal(i).to_vec());
        }
        (0..self.len()).filter(|&i| ech.contains(self.normal(i))).collect()
    }

    /// All flats of dimension at least one, ordered by the bitmask of their
    /// containing sets. The ambient space (the closure of the empty set) is
    /// always included when `n ≥ 1`.
    pub fn flats(&self) -> Vec<Flat> {
        assert!(self.len() <= 64, "flat enumeration supports at most 64 hyperplanes");
        if self.n == 0 {
            return Vec::new();
        }
        let mut seen: HashSet<u64> = HashSet::new();
        let mut found: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let start = self.closure(&[]);
        seen.insert(indices_mask(&start));
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let mask = indices_mask(&set);
            if self.rank_of(&set) >= self.n {
                continue;
            }
            found.insert(mask, set.clone());
            for i in 0..self.len() {
                if mask >> i & 1 == 1 {
                    continue;
                }
                let mut next = set.clone();
                next.push(i);
                let closed = self.closure(&next);
                if seen.insert(indices_mask(&closed)) {
                    queue.push_back(closed);
                }
            }
        }
        found
            .into_values()
            .map(|set| {
                let rows: Vec<Vec<Rational>> = set.iter().map(|&i| self.normal(i).to_vec()).collect();
                let subspace_basis = linalg::nullspace(&rows, self.n);
                let rho = self.len() - set.len();
                Flat { containing_set: set, subspace_basis, rho }
            })
            .collect()
    }

    /// The graphical arrangement: one hyperplane `x_i − x_j = 0` per edge `{i, j}`,
    /// vertices numbered `1..=n`, in the order of `edges`.
    pub fn from_graph(edges: &[(usize, usize)], n: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut hs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
            let mut normal = vec![Rational::zero(); n];
            normal[u - 1] = Rational::one();
            normal[v - 1] = -Rational::one();
            hs.push(Hyperplane::new(normal, format!("x{u}-x{v}")));
        }
        Self::new(n, hs)
    }

    /// Each hyperplane repeated `d` times, copies adjacent.
    pub fn thicken(&self, d: usize) -> Self {
        Self {
            n: self.n,
            hyperplanes: self
                .hyperplanes
                .iter()
                .flat_map(|h| std::iter::repeat(h.clone()).take(d))
                .collect(),
        }
    }

    /// Applies the invertible change of coordinates `α ↦ M α` to every normal.
    pub fn transform(&self, m: &[Vec<Rational>]) -> Self {
        Self {
            n: self.n,
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| {
                    let normal = m
                        .iter()
                        .map(|row| row.iter().zip(&h.normal).map(|(a, b)| a * b).sum())
                        .collect();
                    Hyperplane::new(normal, h.label.clone())
                })
                .collect(),
        }
    }

    /// Reorders the hyperplanes: position `k` of the result is hyperplane `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self { n: self.n, hyperplanes: perm.iter().map(|&i| self.hyperplanes[i].clone()).collect() }
    }

    /// Key identifying the arrangement up to rescaling and reordering of normals:
    /// each normal scaled to have first nonzero entry 1, then sorted.
    pub fn canonical_key(&self) -> (usize, Vec<Vec<Rational>>) {
        let mut cols: Vec<Vec<Rational>> = self
            .hyperplanes
            .iter()
            .map(|h| match h.normal.iter().find(|c| !c.is_zero()) {
                Some(lead) => {
                    let inv = lead.recip();
                    h.normal.iter().map(|c| c * &inv).collect()
                }
                None => h.normal.clone(),
            })
            .collect();
        cols.sort();
        (self.n, cols)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.hyperplanes.iter().map(|h| h.label.as_str()).collect();
        write!(f, "{{{}}} in dimension {}", labels.join(", "), self.n)
    }
}

pub fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn indices_mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Arrangement {
        Arrangement::from_int_normals(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn essentialization_keeps_the_matroid() {
        let a = Arrangement::from_int_normals(3, &[&[1, -1, 2], &[0, -1, 2], &[-2, 0, 0]]).unwrap();
        assert!(!a.is_essential());
        let e = a.essentialization();
        assert_eq!((e.dim(), e.len(), e.rank()), (2, 3, 2));
        assert!(e.is_essential());
        for mask in 0..8u64 {
            assert_eq!(a.rank_of_mask(mask), e.rank_of_mask(mask));
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(triangle().rank(), 2);
        assert_eq!(triangle().rank_of(&[]), 0);
        let double = Arrangement::from_int_normals(2, &[&[1, 0], &[1, 0]]).unwrap();
        assert_eq!(double.rank(), 1);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(Arrangement::from_int_normals(2, &[&[0, 0]]), Err(Error::ZeroNormal(0))));
        assert!(matches!(
            Arrangement::from_int_normals(2, &[&[1, 0, 0]]),
            Err(Error::NormalLength { .. })
        ));
    }

    #[test]
    fn deletion() {
        let a = Arrangement::from_int_normals(2, &[&[1, 0], &[1, -1]]).unwrap();
        let d = a.delete(1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.normal(0), &[q(1), q(0)]);
        let double = Arrangement::from_int_normals(2, &[&[1, 0], &[1, 0]]).unwrap();
        assert_eq!(double.delete(0).unwrap().len(), 1);
        assert!(matches!(Arrangement::empty(2).delete(0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn restriction() {
        let double = Arrangement::from_int_normals(2, &[&[1, 0], &[1, 0]]).unwrap();
        let r = double.restrict(0).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.len(), 1);
        assert!(r.is_loop(0));
        assert!(r.without_loops().is_empty());

        let t = triangle().restrict(2).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.len(), 2);
        assert!(!t.is_loop(0) && !t.is_loop(1));
        assert_eq!(t.rank(), 1);

        let single = Arrangement::from_int_normals(1, &[&[3]]).unwrap();
        let r = single.restrict(0).unwrap();
        assert_eq!((r.dim(), r.len()), (0, 0));
        assert!(matches!(r.restrict(0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(double.restrict(0).unwrap().restrict(0), Err(Error::RestrictAtLoop(0))));
    }

    #[test]
    fn flats_examples() {
        let a = Arrangement::from_int_normals(2, &[&[1, -1]]).unwrap();
        let flats = a.flats();
        assert_eq!(flats.len(), 2);
        assert_eq!((flats[0].rho, flats[0].dim()), (1, 2));
        assert_eq!((flats[1].rho, flats[1].dim()), (0, 1));

        let flats = triangle().flats();
        assert_eq!(flats.len(), 4);
        assert_eq!(flats[0].rho, 3);
        assert!(flats[1..].iter().all(|f| f.rho == 2 && f.dim() == 1));

        let flats = Arrangement::empty(2).flats();
        assert_eq!(flats.len(), 1);
        assert_eq!((flats[0].rho, flats[0].dim()), (0, 2));
    }

    #[test]
    fn graphs() {
        let k3 = Arrangement::from_graph(&[(1, 2), (2, 3), (1, 3)], 3).unwrap();
        assert_eq!((k3.len(), k3.rank(), k3.dim()), (3, 2, 3));
        let edge = Arrangement::from_graph(&[(1, 2)], 2).unwrap();
        assert_eq!(edge.normal(0), &[q(1), q(-1)]);
        let path = Arrangement::from_graph(&[(1, 2), (2, 3)], 3).unwrap();
        assert_eq!(path.rank(), 2);
        assert!(matches!(Arrangement::from_graph(&[(1, 1)], 2), Err(Error::SelfLoop(1))));
        assert!(matches!(Arrangement::from_graph(&[(1, 2), (2, 1)], 2), Err(Error::DuplicateEdge(2, 1))));
        assert!(matches!(Arrangement::from_graph(&[(1, 4)], 3), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn coloops() {
        let a = Arrangement::from_int_normals(2, &[&[1, 0], &[1, 0], &[0, 1]]).unwrap();
        assert!(!a.is_coloop(0));
        assert!(a.is_coloop(2));
        assert_eq!(a.delete(2).unwrap().rank(), a.rank() - 1);
    }

    #[test]
    fn labels() {
        let a = Arrangement::from_int_normals(3, &[&[1, -2, 0], &[0, 0, -1]]).unwrap();
        assert_eq!(a.hyperplanes()[0].label, "x1-2*x2");
        assert_eq!(a.hyperplanes()[1].label, "-x3");
    }
}
