//! Arithmetic in the prime field F_p: residues, Legendre symbols and square
//! roots via Tonelli-Shanks.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("division by zero mod {0}")]
    DivisionByZero(u64),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

/// Residue in `[0, p)` for an odd prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u64,
    modulus: u64,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElem {
    pub fn new(value: i64, p: u64) -> FieldElem {
        let m = p as i64;
        FieldElem {
            value: value.rem_euclid(m) as u64,
            modulus: p,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: FieldElem) -> FieldElem {
        debug_assert_eq!(self.modulus, other.modulus);
        FieldElem {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn sub(&self, other: FieldElem) -> FieldElem {
        debug_assert_eq!(self.modulus, other.modulus);
        FieldElem {
            value: (self.value + self.modulus - other.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn mul(&self, other: FieldElem) -> FieldElem {
        debug_assert_eq!(self.modulus, other.modulus);
        FieldElem {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem {
            value: pow_mod(self.value, e, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        if self.value == 0 {
            return Err(FieldError::DivisionByZero(self.modulus));
        }
        Ok(self.pow(self.modulus - 2))
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre symbol of `a` mod the odd prime `p`: -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = FieldElem::new(a, p);
    if a.is_zero() {
        return 0;
    }
    if a.pow((p - 1) / 2).value() == 1 {
        1
    } else {
        -1
    }
}

/// Canonical square root of `a` mod the odd prime `p`: the smaller of the two
/// roots as residues in `[0, p)`, or `None` for a non-residue.
pub fn sqrt_mod(a: i64, p: u64) -> Option<FieldElem> {
    let a = FieldElem::new(a, p);
    if a.is_zero() {
        return Some(a);
    }
    if legendre(a.value() as i64, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        a.pow((p + 1) / 4)
    } else {
        tonelli_shanks(a, p)
    };
    debug_assert_eq!(root.mul(root), a);
    let other = root.neg();
    Some(if other.value() < root.value() { other } else { root })
}

fn tonelli_shanks(a: FieldElem, p: u64) -> FieldElem {
    // p - 1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    // first non-residue
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = FieldElem::new(z, p).pow(q);
    let mut t = a.pow(q);
    let mut r = a.pow(q.div_ceil(2));
    while t.value() != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2.value() != 1 {
            t2 = t2.mul(t2);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = b.mul(b);
        }
        m = i;
        c = b.mul(b);
        t = t.mul(c);
        r = r.mul(b);
    }
    r
}
