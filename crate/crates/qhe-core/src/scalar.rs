//! Exact scalar arithmetic over the rationals and over prime fields.
//!
//! Every scalar in the system is either an arbitrary-precision rational
//! (kept in lowest terms by construction) or a least residue mod a prime.
//! There is no floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScalarError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (need 2 <= p < 2^31)")]
    ModulusRange(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("division by zero")]
    DivisionByZero,
}

/// The coefficient field of a run: exact rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn validate(&self) -> Result<(), ScalarError> {
        match self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime { p } => {
                if *p < 2 || *p >= (1 << 31) {
                    return Err(ScalarError::ModulusRange(*p));
                }
                if !is_prime(*p) {
                    return Err(ScalarError::NotPrime(*p));
                }
                Ok(())
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime { p } => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime { p } => Scalar::Fp { v: 1 % *p, p: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime { p } => {
                let p = *p as i128;
                let v = ((n as i128 % p) + p) % p;
                Scalar::Fp { v: v as u64, p: p as u64 }
            }
        }
    }

    /// Parses `"3"`, `"-2"`, or `"3/2"`; prime-field values reduce to least residues.
    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        let t = text.trim();
        let err = |reason: &str| ScalarError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        match self {
            FieldSpec::Rational => {
                let r = BigRational::from_str(t).map_err(|e| err(&e.to_string()))?;
                Ok(Scalar::Rat(r))
            }
            FieldSpec::Prime { p } => {
                let (num_s, den_s) = match t.split_once('/') {
                    Some((a, b)) => (a, Some(b)),
                    None => (t, None),
                };
                let n = BigInt::from_str(num_s).map_err(|e| err(&e.to_string()))?;
                let p_big = BigInt::from(*p);
                let mut v = residue(&n, &p_big, *p);
                if let Some(den_s) = den_s {
                    let d = BigInt::from_str(den_s).map_err(|e| err(&e.to_string()))?;
                    let dv = residue(&d, &p_big, *p);
                    let inv = mod_inv(dv, *p).ok_or_else(|| err("denominator is zero mod p"))?;
                    v = mulmod(v, inv, *p);
                }
                Ok(Scalar::Fp { v, p: *p })
            }
        }
    }
}

fn residue(n: &BigInt, p_big: &BigInt, p: u64) -> u64 {
    use num::ToPrimitive;
    let r = ((n % p_big) + p_big) % p_big;
    r.to_u64().unwrap_or(0) % p
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // extended Euclid
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    Some((((t % p as i128) + p as i128) % p as i128) as u64)
}

/// One exact field element. Rationals are always in lowest terms,
/// prime-field values always least residues.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, p } => *v == 1 % *p,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rational,
            Scalar::Fp { p, .. } => FieldSpec::Prime { p: *p },
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Fp { v: (a + b) % p, p: *p }
            }
            _ => panic!("mixed-field scalar arithmetic"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Fp { v: mulmod(*a, *b, *p), p: *p }
            }
            _ => panic!("mixed-field scalar arithmetic"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp { v, p } => mod_inv(*v, *p).map(|i| Scalar::Fp { v: i, p: *p }),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let inv = other.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self.mul(&inv))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Dense coordinate vector helpers used throughout the kernel.
pub mod vec_ops {
    use super::{FieldSpec, Scalar};

    pub fn zeros(field: FieldSpec, n: usize) -> Vec<Scalar> {
        vec![field.zero(); n]
    }

    pub fn is_zero(v: &[Scalar]) -> bool {
        v.iter().all(Scalar::is_zero)
    }

    pub fn add_assign(dst: &mut [Scalar], src: &[Scalar]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = d.add(s);
        }
    }

    pub fn axpy(dst: &mut [Scalar], c: &Scalar, src: &[Scalar]) {
        if c.is_zero() {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            *d = d.add(&c.mul(s));
        }
    }

    pub fn scale(v: &mut [Scalar], c: &Scalar) {
        for x in v.iter_mut() {
            *x = x.mul(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_reduce() {
        let f = FieldSpec::Rational;
        let x = f.parse("6/4").unwrap();
        assert_eq!(x.to_string(), "3/2");
        let y = f.parse("-2").unwrap();
        assert_eq!(x.mul(&y).to_string(), "-3");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::Prime { p: 7 };
        f.validate().unwrap();
        let x = f.parse("10").unwrap();
        assert_eq!(x.to_string(), "3");
        let inv = x.inv().unwrap();
        assert!(x.mul(&inv).is_one());
        let half = f.parse("1/2").unwrap();
        assert_eq!(half.to_string(), "4");
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(FieldSpec::Prime { p: 9 }.validate().is_err());
        assert!(FieldSpec::Prime { p: 2 }.validate().is_ok());
    }
}
