//! Dense univariate polynomials over a [`Field`] and the extension fields
//! GF(q^m) built from them.
//!
//! Polynomials are coefficient vectors, constant term first. Results are
//! always trimmed (no trailing zeros; the zero polynomial is empty).

use super::{conway_polynomial, Elem, Field};

pub fn trim(mut v: Vec<Elem>) -> Vec<Elem> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let neg: Vec<Elem> = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &neg)
}

pub fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo `m`. `m` must be nonzero.
pub fn rem(f: &Field, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mc));
        }
        r = trim(r);
    }
    r
}

pub fn mul_mod(f: &Field, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_mod(f: &Field, a: &[Elem], mut exp: u128, m: &[Elem]) -> Vec<Elem> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(f, &acc, &base, m);
        }
        base = mul_mod(f, &base, &base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead);
        a.iter_mut().for_each(|c| *c = f.mul(*c, inv));
    }
    a
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x^(q^i) mod m, by repeated q-th powering.
fn frobenius_power_of_x(f: &Field, i: usize, m: &[Elem]) -> Vec<Elem> {
    let mut h = rem(f, &[0, 1], m);
    for _ in 0..i {
        h = pow_mod(f, &h, f.order() as u128, m);
    }
    h
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Field, m: &[Elem]) -> bool {
    let m = trim(m.to_vec());
    if m.len() < 2 {
        return false;
    }
    let n = m.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    if sub(f, &frobenius_power_of_x(f, n, &m), &x) != Vec::<Elem>::new() {
        return false;
    }
    prime_factors(n).into_iter().all(|r| {
        let h = sub(f, &frobenius_power_of_x(f, n / r, &m), &x);
        gcd(f, &h, &m).len() == 1
    })
}

/// The monic irreducible polynomial of the given degree whose lower
/// coefficients, read as a base-q number with the constant term least
/// significant, are smallest.
pub fn first_irreducible(f: &Field, degree: usize) -> Vec<Elem> {
    assert!(degree >= 1);
    let q = f.order() as usize;
    let mut coeffs = vec![0 as Elem; degree];
    loop {
        let mut candidate = coeffs.clone();
        candidate.push(1);
        if is_irreducible(f, &candidate) {
            return candidate;
        }
        // base-q increment, constant term first
        let mut i = 0;
        loop {
            assert!(i < degree, "no irreducible polynomial of degree {degree}");
            coeffs[i] += 1;
            if (coeffs[i] as usize) < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

pub fn display(m: &[Elem]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        let term = match i {
            0 => coeff,
            1 => format!("{coeff}x"),
            _ => format!("{coeff}x^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// GF(q^m) as GF(q)[x]/(g) for a fixed irreducible g of degree m. Elements
/// are coordinate vectors of length m over GF(q) in the basis 1, x, ..., x^(m-1).
#[derive(Debug, Clone)]
pub struct ExtField {
    base: &'static Field,
    modulus: Vec<Elem>,
}

impl ExtField {
    pub fn new(base: &'static Field, degree: usize) -> ExtField {
        assert!(degree >= 1);
        let modulus = if base.degree() == 1 {
            conway_polynomial(base.order(), degree)
                .map(|m| m.to_vec())
                .unwrap_or_else(|| first_irreducible(base, degree))
        } else {
            first_irreducible(base, degree)
        };
        ExtField { base, modulus }
    }

    pub fn base(&self) -> &'static Field {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    fn pad(&self, mut v: Vec<Elem>) -> Vec<Elem> {
        v.resize(self.degree(), 0);
        v
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![0; self.degree()]
    }

    /// The basis element x^i.
    pub fn basis(&self, i: usize) -> Vec<Elem> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    /// Element whose coordinates are the base-q digits of `index`.
    pub fn from_index(&self, mut index: u128) -> Vec<Elem> {
        let q = self.base.order() as u128;
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = (index % q) as Elem;
            index /= q;
        }
        v
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        self.pad(mul_mod(self.base, a, b, &self.modulus))
    }

    /// a^(q^i), the i-th power of the Frobenius automorphism.
    pub fn frobenius(&self, a: &[Elem], i: usize) -> Vec<Elem> {
        let mut out = a.to_vec();
        for _ in 0..i {
            out = self.pad(pow_mod(self.base, &out, self.base.order() as u128, &self.modulus));
        }
        out
    }
}
