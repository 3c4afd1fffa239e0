//! Arithmetic in GF(p^e).
//!
//! An element is stored as a byte: the integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! where `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is its residue modulo the field's
//! defining polynomial. This encoding is what matrices and JSON files carry.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::caps::{Caps, HARD_MAX_Q};
use crate::error::{Error, Result};

/// A field element in its integer encoding.
pub type Elem = u8;

/// `(p, e)` pair identifying a finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
}

struct Tables {
    p: u32,
    e: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    /// `frob[t * q + x] = x^(p^t)`
    frob: Vec<Elem>,
}

/// Handle to a finite field with precomputed operation tables.
///
/// Cloning is cheap; equal `(p, e)` share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.e.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Polynomials over GF(p) as coefficient vectors, lowest degree first.
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let b = trim(b.to_vec());
        let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p);
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let factor = r.last().unwrap() * lead_inv % p;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - factor * bi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        (1..p).find(|x| a * x % p == 1).expect("invertible residue")
    }

    /// Monic polynomial of the given degree whose lower coefficients are the
    /// base-p digits of `index`.
    pub fn monic(degree: u32, mut index: u32, p: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(degree as usize + 1);
        for _ in 0..degree {
            c.push(index % p);
            index /= p;
        }
        c.push(1);
        c
    }

    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() as u32 - 1;
        for d in 1..=deg / 2 {
            for idx in 0..p.pow(d) {
                let g = monic(d, idx, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), Arc<Tables>>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), Arc<Tables>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// GF(p^e) under the default caps.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        Field::with_caps(p, e, &Caps::default())
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    pub fn from_spec(spec: FieldSpec, caps: &Caps) -> Result<Field> {
        Field::with_caps(spec.p, spec.e, caps)
    }

    pub fn with_caps(p: u32, e: u32, caps: &Caps) -> Result<Field> {
        let bad = |reason: &str| Error::InvalidField {
            p,
            e,
            reason: reason.to_string(),
        };
        if !is_prime(p) {
            return Err(bad("characteristic is not prime"));
        }
        if e == 0 {
            return Err(bad("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= HARD_MAX_Q as u64);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(bad("order exceeds the byte encoding")),
        };
        if q > caps.max_q {
            return Err(Error::CapExceeded(format!("field order {q} exceeds cap {}", caps.max_q)));
        }
        let mut reg = registry().lock().expect("field registry poisoned");
        let tables = reg
            .entry((p, e))
            .or_insert_with(|| Arc::new(Tables::build(p, e)))
            .clone();
        Ok(Field(tables))
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            e: self.0.e,
        }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> usize {
        self.0.q
    }

    /// Defining polynomial, lowest coefficient first, monic of degree `e`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.0.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q + b as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.0.inv[a as usize])
    }

    /// `a^(p^t)`.
    #[inline]
    pub fn frobenius(&self, a: Elem, t: u32) -> Elem {
        let t = (t % self.0.e) as usize;
        self.0.frob[t * self.0.q + a as usize]
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Residue coefficients of an element, lowest degree first.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut a = a as u32;
        (0..self.0.e)
            .map(|_| {
                let c = a % self.0.p;
                a /= self.0.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::pre(format!("invalid coefficient vector {coeffs:?} for {self:?}")));
        }
        Ok(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.0.p + c) as Elem)
    }

    /// Validates an integer-encoded element read from external input.
    pub fn element(&self, value: u64) -> Result<Elem> {
        if value >= self.0.q as u64 {
            return Err(Error::InvalidEntry {
                value,
                q: self.0.q as u32,
            });
        }
        Ok(value as Elem)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(|x| x as Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.0.q).map(|x| x as Elem)
    }

    /// All automorphisms of the field, identity first.
    pub fn automorphisms(&self) -> Vec<FieldAutomorphism> {
        (0..self.0.e).map(FieldAutomorphism::new).collect()
    }
}

impl Tables {
    fn build(p: u32, e: u32) -> Tables {
        let q = p.pow(e) as usize;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(e))
                .map(|idx| poly::monic(e, idx, p))
                .find(|f| poly::is_irreducible(f, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let digits = |x: usize| -> Vec<u32> {
            let mut x = x as u32;
            (0..e)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[u32]| -> Elem {
            let mut v = 0u32;
            for &ci in c.iter().take(e as usize).rev() {
                v = v * p + ci;
            }
            v as Elem
        };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly::rem(&prod, &modulus, p);
                r.resize(e as usize, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem;
            }
        }
        let mut frob = vec![0; q * e as usize];
        for a in 0..q {
            frob[a] = a as Elem;
        }
        for t in 1..e as usize {
            for a in 0..q {
                let prev = frob[(t - 1) * q + a] as usize;
                let mut acc = 1usize;
                for _ in 0..p {
                    acc = mul[acc * q + prev] as usize;
                }
                frob[t * q + a] = acc as Elem;
            }
        }
        Tables {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            frob,
        }
    }
}

/// `x ↦ x^(p^t)`; every automorphism of GF(p^e) has this form for a unique `t < e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FieldAutomorphism {
    pub frobenius_power: u32,
}

impl FieldAutomorphism {
    pub const IDENTITY: FieldAutomorphism = FieldAutomorphism { frobenius_power: 0 };

    pub fn new(frobenius_power: u32) -> Self {
        FieldAutomorphism { frobenius_power }
    }

    pub fn is_identity(&self, field: &Field) -> bool {
        self.frobenius_power % field.e() == 0
    }

    #[inline]
    pub fn apply(&self, field: &Field, a: Elem) -> Elem {
        field.frobenius(a, self.frobenius_power)
    }

    pub fn inverse(&self, field: &Field) -> FieldAutomorphism {
        let e = field.e();
        FieldAutomorphism::new((e - self.frobenius_power % e) % e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(matches!(Field::new(2, 5), Err(Error::CapExceeded(_))));
        let wide = Caps {
            max_q: 256,
            ..Caps::default()
        };
        assert!(Field::with_caps(2, 8, &wide).is_ok());
        assert!(Field::with_caps(3, 6, &wide).is_err());
    }

    #[test]
    fn smallest_irreducible_moduli() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (7, 1), (11, 1), (13, 1)] {
            let f = Field::new(p, e).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        for (p, e) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
            let f = Field::new(p, e).unwrap();
            for t in 0..e {
                let image: std::collections::BTreeSet<_> = f.elements().map(|a| f.frobenius(a, t)).collect();
                assert_eq!(image.len(), f.q());
                for a in f.elements() {
                    assert_eq!(f.frobenius(a, t), f.pow(a, (p as u64).pow(t)));
                    for b in f.elements() {
                        assert_eq!(f.frobenius(f.mul(a, b), t), f.mul(f.frobenius(a, t), f.frobenius(b, t)));
                        assert_eq!(f.frobenius(f.add(a, b), t), f.add(f.frobenius(a, t), f.frobenius(b, t)));
                    }
                }
            }
            for a in f.elements() {
                assert_eq!(f.frobenius(a, e), a);
            }
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
        assert!(f.from_coeffs(&[3, 0]).is_err());
        assert!(f.element(9).is_err());
    }

    #[test]
    fn gf4_structure() {
        // ω = x satisfies ω^2 = ω + 1.
        let f = Field::new(2, 2).unwrap();
        let w = 2;
        assert_eq!(f.mul(w, w), 3);
        assert_eq!(f.frobenius(w, 1), 3);
        let sigma = FieldAutomorphism::new(1);
        assert_eq!(sigma.inverse(&f), sigma);
    }
}
