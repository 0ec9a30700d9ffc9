//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// The coefficient field of a polynomial, formula or proof.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    /// The rationals, with every element kept in lowest terms.
    Rationals,
    /// GF(p) for a prime machine-word modulus.
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec, AlgebraError> {
        if is_prime_u64(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            FieldSpec::Rationals => FieldElem::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => FieldElem::Fp {
                val: (n as i128).rem_euclid(*p as i128) as u64,
                modulus: *p,
            },
        }
    }

    /// Parses `int` or `int/posint` (rationals only) into a field element.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, AlgebraError> {
        match self {
            FieldSpec::Rationals => {
                if let Some((num, den)) = s.split_once('/') {
                    let n = BigInt::from_str(num.trim())
                        .map_err(|_| AlgebraError::BadConstant(s.to_string()))?;
                    let d = BigInt::from_str(den.trim())
                        .map_err(|_| AlgebraError::BadConstant(s.to_string()))?;
                    if d.is_zero() || d.is_negative() {
                        return Err(AlgebraError::BadConstant(s.to_string()));
                    }
                    Ok(FieldElem::Rat(BigRational::new(n, d)))
                } else {
                    let n = BigInt::from_str(s.trim())
                        .map_err(|_| AlgebraError::BadConstant(s.to_string()))?;
                    Ok(FieldElem::Rat(BigRational::from(n)))
                }
            }
            FieldSpec::Prime(p) => {
                if s.contains('/') {
                    return Err(AlgebraError::BadConstant(s.to_string()));
                }
                let n = i128::from_str(s.trim())
                    .map_err(|_| AlgebraError::BadConstant(s.to_string()))?;
                Ok(FieldElem::Fp {
                    val: n.rem_euclid(*p as i128) as u64,
                    modulus: *p,
                })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF {p}"),
        }
    }
}

/// An element of ℚ or of GF(p). Elements carry their field so that
/// mismatches are detectable at the operation level.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FieldElem {
    Rat(BigRational),
    Fp { val: u64, modulus: u64 },
}

impl FieldElem {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldElem::Rat(_) => FieldSpec::Rationals,
            FieldElem::Fp { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Fp { val, .. } => *val == 1,
        }
    }

    /// Panics on field mismatch; public polynomial operations validate
    /// fields before any coefficient arithmetic runs.
    pub fn add(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Fp { val: a, modulus: p }, FieldElem::Fp { val: b, modulus: q }) => {
                assert_eq!(p, q, "field mismatch");
                FieldElem::Fp {
                    val: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Fp { val: a, modulus: p }, FieldElem::Fp { val: b, modulus: q }) => {
                assert_eq!(p, q, "field mismatch");
                FieldElem::Fp {
                    val: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Fp { val, modulus } => FieldElem::Fp {
                val: if *val == 0 { 0 } else { modulus - val },
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Rat(a) => FieldElem::Rat(a.recip()),
            FieldElem::Fp { val, modulus } => FieldElem::Fp {
                val: pow_mod(*val, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the usual 7-witness set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(5));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(FieldSpec::prime(6).is_err());
    }

    #[test]
    fn rational_normal_form() {
        let q = FieldSpec::Rationals;
        let half = q.parse_elem("2/4").unwrap();
        assert_eq!(half.to_string(), "1/2");
        let neg = q.parse_elem("-3/6").unwrap();
        assert_eq!(neg.to_string(), "-1/2");
        assert!(q.parse_elem("1/0").is_err());
        assert!(q.parse_elem("1/-2").is_err());
    }

    #[test]
    fn gf5_wraparound() {
        let f = FieldSpec::prime(5).unwrap();
        let two = f.from_i64(2);
        let three = f.from_i64(3);
        assert!(two.add(&three).is_zero());
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert_eq!(two.mul(&three), f.from_i64(1));
        assert_eq!(three.inv().unwrap(), two);
    }
}
