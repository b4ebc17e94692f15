//! Finite fields GF(q) for prime powers q <= 256, together with matrices,
//! canonical subspaces and Grassmannian enumeration over them.
//!
//! Field elements are plain `u8` indices in `0..q`. For prime q the index is
//! the residue itself; for q = p^e it encodes the coefficient vector of the
//! polynomial representative in base p (constant term least significant).

mod matrix;
pub mod poly;
mod subspace;

pub use matrix::Matrix;
pub use subspace::{enumerate_subspaces, span_dim, subspace_distance, Grassmannian, Subspace};

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

pub type Elem = u8;

/// Irreducible polynomials used to build GF(p^e), coefficients listed from
/// the constant term upwards. These are the Conway polynomials for the pair.
const CONWAY: &[(u32, &[Elem])] = &[
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (3, &[1, 2, 0, 0, 0, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (7, &[3, 6, 1]),
];

pub(crate) fn conway_polynomial(p: u32, degree: usize) -> Option<&'static [Elem]> {
    CONWAY
        .iter()
        .find(|(cp, poly)| *cp == p && poly.len() == degree + 1)
        .map(|(_, poly)| *poly)
}

pub struct Field {
    q: u32,
    p: u32,
    e: u32,
    modulus: Option<Vec<Elem>>,
    add: Box<[Elem]>,
    mul: Box<[Elem]>,
    neg: Box<[Elem]>,
    inv: Box<[Elem]>,
}

/// Fields are interned per order, so the order identifies them.
impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.order() == other.order()
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Field {
    /// Interned field of order `q`. Fields live for the whole program.
    pub fn get(q: u32) -> Result<&'static Field> {
        static CACHE: OnceLock<RwLock<HashMap<u32, &'static Field>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(f) = cache.read().unwrap().get(&q) {
            return Ok(f);
        }
        let field: &'static Field = Box::leak(Box::new(Field::build(q)?));
        let mut w = cache.write().unwrap();
        Ok(*w.entry(q).or_insert(field))
    }

    fn build(q: u32) -> Result<Field> {
        if q > 256 {
            return Err(Error::InvalidField(q));
        }
        let (p, e) = prime_power(q).ok_or(Error::InvalidField(q))?;
        if e == 1 {
            return Ok(Field::prime(p));
        }
        let base = Field::get(p)?;
        let modulus = match conway_polynomial(p, e as usize) {
            Some(m) => m.to_vec(),
            None => poly::first_irreducible(base, e as usize),
        };
        Ok(Field::extension(base, modulus))
    }

    fn prime(p: u32) -> Field {
        let n = p as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as Elem;
                mul[a * n + b] = ((a * b) % n) as Elem;
            }
        }
        let neg = (0..n).map(|a| ((n - a) % n) as Elem).collect::<Vec<_>>();
        let inv = (0..n)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..n).find(|b| (a * b) % n == 1).unwrap() as Elem
                }
            })
            .collect::<Vec<_>>();
        Field {
            q: p,
            p,
            e: 1,
            modulus: None,
            add: add.into(),
            mul: mul.into(),
            neg: neg.into(),
            inv: inv.into(),
        }
    }

    fn extension(base: &Field, modulus: Vec<Elem>) -> Field {
        let p = base.q as usize;
        let e = modulus.len() - 1;
        let q = p.pow(e as u32);
        let digits = |mut a: usize| -> Vec<Elem> {
            let mut d = vec![0; e];
            for slot in d.iter_mut() {
                *slot = (a % p) as Elem;
                a /= p;
            }
            d
        };
        let undigits = |d: &[Elem]| d.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize);
        let all: Vec<Vec<Elem>> = (0..q).map(digits).collect();

        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<Elem> = all[a].iter().zip(&all[b]).map(|(&x, &y)| base.add(x, y)).collect();
                add[a * q + b] = undigits(&s) as Elem;
                let prod = poly::mul(base, &all[a], &all[b]);
                let mut r = poly::rem(base, &prod, &modulus);
                r.resize(e, 0);
                mul[a * q + b] = undigits(&r) as Elem;
            }
        }
        let neg: Vec<Elem> = (0..q)
            .map(|a| {
                let d: Vec<Elem> = all[a].iter().map(|&x| base.neg(x)).collect();
                undigits(&d) as Elem
            })
            .collect();
        let inv: Vec<Elem> = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem
                }
            })
            .collect();
        Field {
            q: q as u32,
            p: base.q,
            e: e as u32,
            modulus: Some(modulus),
            add: add.into(),
            mul: mul.into(),
            neg: neg.into(),
            inv: inv.into(),
        }
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Defining polynomial over GF(p) for non-prime fields, constant term first.
    pub fn modulus(&self) -> Option<&[Elem]> {
        self.modulus.as_deref()
    }

    /// Human-readable description, used as reproducibility metadata.
    pub fn describe(&self) -> String {
        match &self.modulus {
            None => format!("GF({})", self.q),
            Some(m) => format!("GF({}) = GF({})[x]/({})", self.q, self.p, poly::display(m)),
        }
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in GF({})", self.q);
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|a| a as Elem)
    }
}
