//! Semilinear isomorphisms `x ↦ σ(x) · A`.
//!
//! A map flagged `codomain_is_dual` targets V* (dual coordinates); the
//! automorphism of the flag complex it induces sends `S` to the annihilator
//! of its image, which preserves `G_k(V)` only when `n = 2k`.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldAutomorphism};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    matrix: Matrix,
    sigma: FieldAutomorphism,
    codomain_is_dual: bool,
}

impl SemilinearMap {
    pub fn new(matrix: Matrix, sigma: FieldAutomorphism, codomain_is_dual: bool) -> Result<SemilinearMap> {
        if !matrix.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(SemilinearMap {
            matrix,
            sigma,
            codomain_is_dual,
        })
    }

    pub fn linear(matrix: Matrix) -> Result<SemilinearMap> {
        SemilinearMap::new(matrix, FieldAutomorphism::IDENTITY, false)
    }

    pub fn identity(field: &Field, n: usize) -> SemilinearMap {
        SemilinearMap {
            matrix: Matrix::identity(field, n),
            sigma: FieldAutomorphism::IDENTITY,
            codomain_is_dual: false,
        }
    }

    /// The linear map permuting standard basis vectors: `e_i ↦ e_{perm[i]}`.
    pub fn permutation(field: &Field, perm: &[usize]) -> Result<SemilinearMap> {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut m = Matrix::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::pre(format!("{perm:?} is not a permutation")));
            }
            m.set(i, j, 1);
        }
        SemilinearMap::linear(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn sigma(&self) -> FieldAutomorphism {
        self.sigma
    }

    pub fn codomain_is_dual(&self) -> bool {
        self.codomain_is_dual
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply_vector(&self, x: &[Elem]) -> Vec<Elem> {
        let f = self.matrix.field();
        let twisted: Vec<Elem> = x.iter().map(|&a| self.sigma.apply(f, a)).collect();
        self.matrix.vec_mul(&twisted)
    }

    /// Image of a subspace (in dual coordinates when the codomain is V*).
    pub fn apply(&self, s: &Subspace) -> Result<Subspace> {
        if s.field() != self.field() {
            return Err(Error::FieldMismatch(s.field().q() as u32, self.field().q() as u32));
        }
        if s.ambient_dim() != self.dim() {
            return Err(Error::AmbientMismatch(s.ambient_dim(), self.dim()));
        }
        let images: Vec<Vec<Elem>> = s.basis().map(|x| self.apply_vector(x)).collect();
        Subspace::span(self.field(), self.dim(), &images)
    }

    /// The induced automorphism of the subspace lattice of V: `S ↦ u(S)` for
    /// maps into V, `S ↦ u(S)⁰` for maps into V*.
    pub fn act(&self, s: &Subspace) -> Result<Subspace> {
        let image = self.apply(s)?;
        Ok(if self.codomain_is_dual {
            image.annihilator()
        } else {
            image
        })
    }

    /// `(u*)⁻¹`, acting on dual coordinates: `y ↦ σ(y) · (Aᵀ)⁻¹`. It satisfies
    /// `ǔ(S⁰) = u(S)⁰`.
    pub fn contragredient(&self) -> Result<SemilinearMap> {
        if self.codomain_is_dual {
            return Err(Error::pre("contragredient is defined here for maps V → V only"));
        }
        let inv_t = self.matrix.transpose().inverse()?;
        Ok(SemilinearMap {
            matrix: inv_t,
            sigma: self.sigma,
            codomain_is_dual: false,
        })
    }

    /// `self ∘ other` for two maps V → V.
    pub fn compose(&self, other: &SemilinearMap) -> Result<SemilinearMap> {
        if self.codomain_is_dual || other.codomain_is_dual {
            return Err(Error::pre("composition of dualities is not supported"));
        }
        // u(v(x)) = σ_u(σ_v(x) B) A = σ_u σ_v(x) · σ_u(B) · A
        let b = other.matrix.map_entries(self.sigma);
        let matrix = b.mul(&self.matrix)?;
        let e = self.field().e();
        let sigma = FieldAutomorphism::new((self.sigma.frobenius_power + other.sigma.frobenius_power) % e);
        Ok(SemilinearMap {
            matrix,
            sigma,
            codomain_is_dual: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmannian::enumerate;

    #[test]
    fn identity_and_permutation() {
        let f = Field::prime(2).unwrap();
        let id = SemilinearMap::identity(&f, 3);
        let s = Subspace::span(&f, 3, &[[1u8, 1, 0]]).unwrap();
        assert_eq!(id.apply(&s).unwrap(), s);
        let swap = SemilinearMap::permutation(&f, &[1, 0, 2]).unwrap();
        assert_eq!(
            swap.apply(&Subspace::coordinate(&f, 3, &[0])).unwrap(),
            Subspace::coordinate(&f, 3, &[1])
        );
        assert_eq!(swap.contragredient().unwrap(), swap);
        assert_eq!(id.contragredient().unwrap(), id);
    }

    #[test]
    fn singular_rejected() {
        let f = Field::prime(2).unwrap();
        let m = Matrix::from_rows(&f, 2, &[[1, 1], [1, 1]]).unwrap();
        assert!(matches!(SemilinearMap::linear(m), Err(Error::Singular)));
    }

    #[test]
    fn frobenius_diagonal_on_gf4_line() {
        // σ = Frobenius, A = diag(1, d); the line ⟨(1, ω)⟩ goes to ⟨(1, ω² d)⟩.
        let f = Field::new(2, 2).unwrap();
        let (w, d) = (2u8, 3u8);
        let m = Matrix::from_rows(&f, 2, &[[1, 0], [0, d as u64]]).unwrap();
        let u = SemilinearMap::new(m, FieldAutomorphism::new(1), false).unwrap();
        let line = Subspace::span(&f, 2, &[[1u8, w]]).unwrap();
        let image = u.apply(&line).unwrap();
        let w2 = f.mul(w, w);
        assert_eq!(image, Subspace::span(&f, 2, &[[1u8, f.mul(w2, d)]]).unwrap());
        // pointwise: every vector of the line maps into the image
        for a in f.elements() {
            let v = [a, f.mul(a, w)];
            assert!(image.contains_vector(&u.apply_vector(&v)));
        }
    }

    #[test]
    fn contragredient_law_on_all_planes() {
        let f = Field::prime(2).unwrap();
        let m = Matrix::from_rows(&f, 4, &[[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 0]]).unwrap();
        let u = SemilinearMap::linear(m).unwrap();
        let c = u.contragredient().unwrap();
        let planes = enumerate(&f, 4, 2).unwrap();
        assert_eq!(planes.len(), 35);
        for s in &planes {
            assert_eq!(c.apply(&s.annihilator()).unwrap(), u.apply(s).unwrap().annihilator());
        }
    }

    #[test]
    fn contragredient_law_semilinear_gf4() {
        let f = Field::new(2, 2).unwrap();
        let m = Matrix::from_rows(&f, 3, &[[1, 2, 0], [0, 1, 3], [1, 0, 2]]).unwrap();
        let u = SemilinearMap::new(m, FieldAutomorphism::new(1), false).unwrap();
        let c = u.contragredient().unwrap();
        for s in enumerate(&f, 3, 1).unwrap() {
            assert_eq!(c.apply(&s.annihilator()).unwrap(), u.apply(&s).unwrap().annihilator());
        }
        assert_eq!(c.contragredient().unwrap(), u);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let f = Field::new(2, 2).unwrap();
        let a = SemilinearMap::new(
            Matrix::from_rows(&f, 2, &[[1, 2], [0, 1]]).unwrap(),
            FieldAutomorphism::new(1),
            false,
        )
        .unwrap();
        let b = SemilinearMap::new(
            Matrix::from_rows(&f, 2, &[[3, 0], [1, 1]]).unwrap(),
            FieldAutomorphism::new(1),
            false,
        )
        .unwrap();
        let ab = a.compose(&b).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                let v = [x, y];
                assert_eq!(ab.apply_vector(&v), a.apply_vector(&b.apply_vector(&v)));
            }
        }
    }
}
