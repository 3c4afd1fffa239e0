//! Subspaces of GF(q)^n in reduced row echelon canonical form.
//!
//! The dual space is coordinatized by the dual of the standard basis, so a
//! functional is again a row vector and pairs with a vector by the dot
//! product. Annihilators are therefore ordinary null spaces.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{dot, Matrix};

/// A subspace stored by its unique RREF basis. Two values are equal exactly
/// when they contain the same vectors.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    n: usize,
    dim: usize,
    /// `dim × n` RREF rows, row-major.
    rows: Vec<Elem>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.dim == other.dim && self.rows == other.rows && self.field == other.field
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rows.hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dimension first, then lexicographic on the canonical rows.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.dim, &self.rows).cmp(&(other.n, other.dim, &other.rows))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, r) in self.basis().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for x in r {
                write!(f, "{x}")?;
            }
        }
        write!(f, "⟩")
    }
}

impl Subspace {
    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            n,
            dim: 0,
            rows: Vec::new(),
        }
    }

    pub fn full(field: &Field, n: usize) -> Subspace {
        Subspace::from_matrix(&Matrix::identity(field, n))
    }

    /// Span of the rows of a matrix.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let r = m.rref();
        let n = m.cols();
        Subspace {
            field: m.field().clone(),
            n,
            dim: r.rank,
            rows: r.matrix.data()[..r.rank * n].to_vec(),
        }
    }

    /// Span of the given vectors, each of length `n`.
    pub fn span<V: AsRef<[Elem]>>(field: &Field, n: usize, vectors: &[V]) -> Result<Subspace> {
        let mut data = Vec::with_capacity(vectors.len() * n);
        for v in vectors {
            let v = v.as_ref();
            if v.len() != n {
                return Err(Error::AmbientMismatch(n, v.len()));
            }
            data.extend_from_slice(v);
        }
        let m = Matrix::from_flat(field, vectors.len(), n, data)?;
        Ok(Subspace::from_matrix(&m))
    }

    /// Span of standard basis vectors `e_i` for the given (0-based) indices.
    pub fn coordinate(field: &Field, n: usize, indices: &[usize]) -> Subspace {
        let vectors: Vec<Vec<Elem>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Subspace::span(field, n, &vectors).expect("coordinate vectors are valid")
    }

    /// Wraps rows that are already in RREF with no zero rows. Used by
    /// enumerators that generate canonical forms directly.
    pub(crate) fn from_canonical_rows(field: &Field, n: usize, rows: Vec<Elem>) -> Subspace {
        let dim = if n == 0 { 0 } else { rows.len() / n };
        Subspace {
            field: field.clone(),
            n,
            dim,
            rows,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim == self.n
    }

    pub fn basis(&self) -> impl Iterator<Item = &[Elem]> {
        self.rows.chunks(self.n.max(1)).take(self.dim)
    }

    pub fn canonical_rows(&self) -> &[Elem] {
        &self.rows
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.basis().map(|r| r.iter().map(|&x| x as u64).collect()).collect()
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_flat(&self.field, self.dim, self.n, self.rows.clone()).expect("valid rows")
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect()
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q() as u32, other.field.q() as u32));
        }
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Reduces `v` against the canonical basis; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, pc) in self.basis().zip(self.pivots()) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(nc, r));
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Elem]) -> bool {
        v.len() == self.n && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.field == other.field && self.n == other.n && self.basis().all(|r| other.contains_vector(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        Ok(self.sum_unchecked(other))
    }

    pub(crate) fn sum_unchecked(&self, other: &Subspace) -> Subspace {
        if other.dim == 0 {
            return self.clone();
        }
        if self.dim == 0 {
            return other.clone();
        }
        let mut data = self.rows.clone();
        data.extend_from_slice(&other.rows);
        let m = Matrix::from_flat(&self.field, self.dim + other.dim, self.n, data).expect("valid rows");
        Subspace::from_matrix(&m)
    }

    /// Dimension of `self + other` without building the canonical form.
    pub fn sum_dim(&self, other: &Subspace) -> usize {
        if other.dim == 0 {
            return self.dim;
        }
        let mut data = self.rows.clone();
        data.extend_from_slice(&other.rows);
        Matrix::from_flat(&self.field, self.dim + other.dim, self.n, data)
            .expect("valid rows")
            .rank()
    }

    /// `self ∩ other`, computed as `(self⁰ + other⁰)⁰`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        Ok(self.intersect_unchecked(other))
    }

    pub(crate) fn intersect_unchecked(&self, other: &Subspace) -> Subspace {
        if self.is_subspace_of(other) {
            return self.clone();
        }
        if other.is_subspace_of(self) {
            return other.clone();
        }
        self.annihilator().sum_unchecked(&other.annihilator()).annihilator()
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim + other.dim - self.sum_dim(other)
    }

    /// Sum of a nonempty family.
    pub fn sum_all<'a, I: IntoIterator<Item = &'a Subspace>>(items: I) -> Option<Subspace> {
        let mut iter = items.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, s| acc.sum_unchecked(s)))
    }

    /// Intersection of a nonempty family.
    pub fn intersect_all<'a, I: IntoIterator<Item = &'a Subspace>>(items: I) -> Option<Subspace> {
        let mut iter = items.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, s| acc.intersect_unchecked(s)))
    }

    /// The subspace of the dual space formed by the functionals vanishing on `self`.
    pub fn annihilator(&self) -> Subspace {
        if self.dim == 0 {
            return Subspace::full(&self.field, self.n);
        }
        let kernel = self.matrix().right_kernel();
        Subspace::from_canonical_rows(&self.field, self.n, kernel.data().to_vec())
    }

    /// True when every vector of `self` pairs to zero with every functional of `functionals`.
    pub fn annihilated_by(&self, functionals: &Subspace) -> bool {
        self.basis()
            .all(|x| functionals.basis().all(|y| dot(&self.field, x, y) == 0))
    }

    /// Extends the basis of `self` by standard basis vectors to a basis of the
    /// whole space. Returns the added coordinate indices.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let pivots = self.pivots();
        (0..self.n).filter(|c| !pivots.contains(c)).collect()
    }

    /// A canonical vector spanning `self` modulo `base` when `self` is one
    /// dimension larger than `base ⊂ self`.
    pub fn representative_over(&self, base: &Subspace) -> Option<Vec<Elem>> {
        if self.dim != base.dim + 1 {
            return None;
        }
        let f = &self.field;
        for row in self.basis() {
            let mut v = base.reduce(row);
            if let Some(lead) = v.iter().position(|&x| x != 0) {
                let inv = f.inv(v[lead]).unwrap();
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                return Some(v);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    fn e(f: &Field, n: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(f, n, idx)
    }

    /// All vectors of GF(q)^n.
    fn all_vectors(f: &Field, n: usize) -> Vec<Vec<Elem>> {
        let q = f.q();
        (0..q.pow(n as u32))
            .map(|mut c| {
                (0..n)
                    .map(|_| {
                        let d = c % q;
                        c /= q;
                        d as Elem
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn sum_examples() {
        let f = gf2();
        let s = e(&f, 4, &[0, 1]);
        assert_eq!(s.sum(&s).unwrap(), s);
        let a = e(&f, 4, &[0]).sum(&e(&f, 4, &[1])).unwrap();
        assert_eq!(a, e(&f, 4, &[0, 1]));
        assert_eq!(a.dim(), 2);
        let b = e(&f, 4, &[0, 1]).sum(&e(&f, 4, &[1, 2])).unwrap();
        assert_eq!(b, e(&f, 4, &[0, 1, 2]));
    }

    #[test]
    fn intersection_examples() {
        let f = gf2();
        let s = e(&f, 4, &[0, 1]);
        assert_eq!(s.intersect(&s).unwrap(), s);
        assert!(s.intersect(&e(&f, 4, &[2, 3])).unwrap().is_zero());
        assert_eq!(s.intersect(&e(&f, 4, &[1, 2])).unwrap(), e(&f, 4, &[1]));
    }

    #[test]
    fn mismatches_are_errors() {
        let f = gf2();
        let g = Field::prime(3).unwrap();
        assert!(e(&f, 4, &[0]).sum(&e(&f, 3, &[0])).is_err());
        assert!(e(&f, 4, &[0]).intersect(&e(&g, 4, &[0])).is_err());
    }

    #[test]
    fn annihilator_examples() {
        let f = gf2();
        assert_eq!(Subspace::zero(&f, 4).annihilator().dim(), 4);
        assert_eq!(e(&f, 4, &[0]).annihilator(), e(&f, 4, &[1, 2, 3]));
    }

    #[test]
    fn annihilator_matches_exhaustive_pairing() {
        let f = gf2();
        let s = Subspace::span(&f, 3, &[[1u8, 1, 0]]).unwrap();
        let ann = s.annihilator();
        assert_eq!(ann.dim(), 2);
        let vectors = all_vectors(&f, 3);
        let in_s: Vec<_> = vectors.iter().filter(|v| s.contains_vector(v)).collect();
        let expected: Vec<_> = vectors
            .iter()
            .filter(|y| in_s.iter().all(|x| dot(&f, x, y) == 0))
            .cloned()
            .collect();
        let got: Vec<_> = vectors.iter().filter(|y| ann.contains_vector(y)).cloned().collect();
        assert_eq!(got, expected);
        assert!(ann.contains_vector(&[1, 1, 0]));
    }

    #[test]
    fn pointwise_intersection_matches() {
        let f = Field::prime(3).unwrap();
        let a = Subspace::span(&f, 3, &[[1u8, 2, 0], [0, 1, 1]]).unwrap();
        let b = Subspace::span(&f, 3, &[[1u8, 0, 1], [0, 0, 1]]).unwrap();
        let i = a.intersect(&b).unwrap();
        for v in all_vectors(&f, 3) {
            assert_eq!(i.contains_vector(&v), a.contains_vector(&v) && b.contains_vector(&v));
        }
    }

    #[test]
    fn canonical_equality_and_representatives() {
        let f = gf2();
        let a = Subspace::span(&f, 3, &[[1u8, 1, 0], [0, 1, 1]]).unwrap();
        let b = Subspace::span(&f, 3, &[[1u8, 0, 1], [1, 1, 0]]).unwrap();
        assert_eq!(a, b);
        let base = Subspace::span(&f, 3, &[[1u8, 1, 0]]).unwrap();
        let rep = a.representative_over(&base).unwrap();
        assert!(a.contains_vector(&rep));
        assert!(!base.contains_vector(&rep));
        assert_eq!(Subspace::full(&f, 3).complement_coordinates(), Vec::<usize>::new());
    }
}
