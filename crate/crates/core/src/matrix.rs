//! Dense matrices over GF(q), row-major.
//!
//! Vectors are rows; a matrix `A` acts on a row vector `x` as `x · A`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldAutomorphism};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Output of row reduction.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from already-valid encoded entries.
    pub fn from_flat(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|&&x| x as usize >= field.q()) {
            return Err(Error::InvalidEntry {
                value: bad as u64,
                q: field.q() as u32,
            });
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows as found in JSON input.
    pub fn from_rows<R: AsRef<[u64]>>(field: &Field, cols: usize, rows: &[R]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for &v in row {
                data.push(field.element(v)?);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Elem]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.row_iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect()
    }

    /// Stacks the rows of `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q() as u32, other.field.q() as u32));
        }
        if self.cols != other.cols {
            return Err(Error::AmbientMismatch(self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(x.len(), self.rows);
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(k, c)));
            }
        }
        out
    }

    /// Applies a field automorphism to every entry.
    pub fn map_entries(&self, sigma: FieldAutomorphism) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| sigma.apply(f, x)).collect(),
        }
    }

    /// Reduced row echelon form, computed by Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        Rref { matrix: m, rank, pivots }
    }

    /// Reduces in place and returns the pivot columns.
    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if pr != lead {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, lead * cols + j);
                }
            }
            let inv = f.inv(self.data[lead * cols + c]).expect("nonzero pivot");
            if inv != 1 {
                for j in c..cols {
                    let idx = lead * cols + j;
                    self.data[idx] = f.mul(self.data[idx], inv);
                }
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.data[r * cols + c];
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..cols {
                    let v = self.data[lead * cols + j];
                    if v != 0 {
                        let idx = r * cols + j;
                        self.data[idx] = f.add(self.data[idx], f.mul(nf, v));
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            aug.data[r * 2 * n..r * 2 * n + n].copy_from_slice(self.row(r));
            aug.data[r * 2 * n + n + r] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            inv.data[r * n..(r + 1) * n].copy_from_slice(&aug.data[r * 2 * n + n..(r + 1) * 2 * n]);
        }
        Ok(inv)
    }

    /// Basis (as rows, in RREF) of `{ y : row · y = 0 for every row }`.
    pub fn right_kernel(&self) -> Matrix {
        let f = self.field.clone();
        let Rref { matrix: r, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(&f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.data[i * self.cols + fc] = 1;
            for (pr, &pc) in pivots.iter().enumerate() {
                out.data[i * self.cols + pc] = f.neg(r.get(pr, fc));
            }
        }
        out.rref_in_place();
        out
    }
}

/// Dot product `Σ x_i y_i`.
pub fn dot(field: &Field, x: &[Elem], y: &[Elem]) -> Elem {
    x.iter()
        .zip(y)
        .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

/// `Σ coeffs[i] · vectors[i]`.
pub fn combine(field: &Field, coeffs: &[Elem], vectors: &[&[Elem]], len: usize) -> Vec<Elem> {
    let mut out = vec![0; len];
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v.iter()) {
            *o = field.add(*o, field.mul(c, x));
        }
    }
    out
}
