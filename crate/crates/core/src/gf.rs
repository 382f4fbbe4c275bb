//! Finite fields of small order with table-driven arithmetic.
//!
//! An element of F_q, q = p^e, is a dense index in `[0, q)`: the index
//! `c0 + c1 p + ... + c_{e-1} p^{e-1}` encodes the residue
//! `c0 + c1 x + ... + c_{e-1} x^{e-1}` modulo the defining polynomial.
//! Index 0 is zero and index 1 is one.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Largest supported order; indices must fit in a `u8`.
pub const MAX_ORDER: u64 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("modulus must be monic with {expected} coefficients, got {got:?}")]
    ModulusShape { expected: usize, got: Vec<u32> },
    #[error("modulus {0:?} is reducible over F_{1}")]
    Reducible(Vec<u32>, u32),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("element index {idx} out of range for F_{q}")]
    OutOfRange { idx: u64, q: usize },
}

/// An element of a [`Field`], stored as its dense index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub(crate) u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn idx(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serialized form of a field: `{p, e, modulus: [c0..ce]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

pub struct Field {
    p: u32,
    e: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (modulus {:?})", self.q, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

// Polynomials over F_p as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=dm {
            let k = dr - dm + i;
            r[k] = (r[k] + p * p - c * m[i] % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|b| a * b % p == 1).expect("nonzero residue mod a prime")
}

fn digits(mut i: u64, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = (i % p as u64) as u32;
            i /= p as u64;
            d
        })
        .collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..(p as u64).pow(d as u32) {
            let mut div = digits(low, p, d as u32);
            div.push(1);
            let r = poly_rem(m, &div, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Least irreducible monic polynomial of degree `e`, ordered by the integer
/// `c0 + c1 p + ... + c_{e-1} p^{e-1}` of its non-leading coefficients.
pub fn auto_modulus(p: u32, e: u32) -> Vec<u32> {
    (0..(p as u64).pow(e))
        .map(|i| {
            let mut m = digits(i, p, e);
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

impl Field {
    /// Builds F_{p^e}; `modulus = None` selects [`auto_modulus`].
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Arc<Field>, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if e == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(GfError::TooLarge(q64));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(GfError::ModulusShape { expected: e as usize + 1, got: m });
                }
                if !is_irreducible(&m, p) {
                    return Err(GfError::Reducible(m, p));
                }
                m
            }
            None => auto_modulus(p, e),
        };
        let q = q64 as usize;
        let encode = |c: &[u32]| -> u8 {
            c.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64) as u8
        };
        let elems: Vec<Vec<u32>> = (0..q as u64).map(|i| digits(i, p, e)).collect();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = (0..e as usize).map(|k| (elems[a][k] + elems[b][k]) % p).collect();
                add[a * q + b] = encode(&s);
                let mut prod = vec![0u32; 2 * e as usize - 1];
                for i in 0..e as usize {
                    for j in 0..e as usize {
                        prod[i + j] = (prod[i + j] + elems[a][i] * elems[b][j]) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(e as usize, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8 })
            .collect();
        Ok(Arc::new(Field { p, e, q, modulus, add, mul, neg, inv }))
    }

    /// Convenience constructor for the prime field F_p.
    pub fn prime(p: u32) -> Result<Arc<Field>, GfError> {
        Field::new(p, 1, None)
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, e: self.e, modulus: self.modulus.clone() }
    }

    pub fn elem(&self, idx: u64) -> Result<Fe, GfError> {
        if idx < self.q as u64 {
            Ok(Fe(idx as u8))
        } else {
            Err(GfError::OutOfRange { idx, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(|i| Fe(i as u8))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(|i| Fe(i as u8))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.p as i64) as u8)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.idx() * self.q + b.idx()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.idx() * self.q + b.idx()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.idx()])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, GfError> {
        if a.is_zero() {
            Err(GfError::InverseOfZero)
        } else {
            Ok(Fe(self.inv[a.idx()]))
        }
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        Fe(self.inv[a.idx()])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut k: u64) -> Fe {
        let (mut base, mut acc) = (a, Fe::ONE);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Some square root of `a`, or `None` if `a` is a non-square.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        self.elements().find(|&b| self.mul(b, b) == a)
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> Option<usize> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != Fe::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }
}
