//! Exact scalar arithmetic over the rationals and over prime fields GF(p).
//!
//! Every other module works through [`Field`] and [`FieldElem`]; no
//! floating-point arithmetic appears anywhere in this crate. Rational values
//! use arbitrary-precision integers so that row reduction can never overflow;
//! modular values are canonical residues under a prime below 2^31.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Largest admissible prime characteristic (exclusive bound keeps `u64`
/// products of two residues well below overflow).
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// Errors from the scalar layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("characteristic {0} is neither zero nor prime")]
    CompositeCharacteristic(u64),
    #[error("characteristic {0} exceeds the supported bound 2^31")]
    CharacteristicTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// A base field: the rationals (characteristic 0) or GF(p) for a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    characteristic: u64,
}

impl Field {
    /// The field of rational numbers.
    pub fn rationals() -> Field {
        Field { characteristic: 0 }
    }

    /// Builds a field descriptor from a characteristic: 0 for the rationals,
    /// otherwise a prime p < 2^31.
    pub fn new(characteristic: u64) -> Result<Field, ScalarError> {
        if characteristic == 0 {
            return Ok(Field::rationals());
        }
        if characteristic >= MAX_CHARACTERISTIC {
            return Err(ScalarError::CharacteristicTooLarge(characteristic));
        }
        if !is_prime(characteristic) {
            return Err(ScalarError::CompositeCharacteristic(characteristic));
        }
        Ok(Field { characteristic })
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        if self.characteristic == 0 {
            FieldElem::Rational(BigRational::from_integer(BigInt::from(n)))
        } else {
            let p = self.characteristic as i64;
            FieldElem::Modular {
                value: n.rem_euclid(p) as u64,
                modulus: self.characteristic,
            }
        }
    }

    /// Builds num/den in this field; over GF(p) the denominator is inverted.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElem, ScalarError> {
        self.from_big_ratio(&BigInt::from(num), &BigInt::from(den))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        if self.characteristic == 0 {
            FieldElem::Rational(BigRational::from_integer(n.clone()))
        } else {
            use num_integer::Integer;
            let p = BigInt::from(self.characteristic);
            let residue = n.mod_floor(&p);
            let (_, digits) = residue.to_u64_digits();
            FieldElem::Modular {
                value: digits.first().copied().unwrap_or(0),
                modulus: self.characteristic,
            }
        }
    }

    pub fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.characteristic == 0 {
            Ok(FieldElem::Rational(BigRational::new(
                num.clone(),
                den.clone(),
            )))
        } else {
            let d = self.from_bigint(den);
            Ok(self.from_bigint(num).mul(&d.inv()?))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.characteristic == 0 {
            write!(f, "Q")
        } else {
            write!(f, "GF({})", self.characteristic)
        }
    }
}

/// An exact field element: a reduced fraction over Q, or a canonical residue
/// in [0, p) over GF(p). Elements carry their field, so mixed-field use is
/// detectable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rational(_) => Field::rationals(),
            FieldElem::Modular { modulus, .. } => Field {
                characteristic: *modulus,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_one(),
            FieldElem::Modular { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (
                FieldElem::Modular { value: a, modulus },
                FieldElem::Modular {
                    value: b,
                    modulus: m2,
                },
            ) => {
                check_same_modulus(*modulus, *m2);
                FieldElem::Modular {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => mixed_scalar_panic(),
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rational(a) => FieldElem::Rational(-a),
            FieldElem::Modular { value, modulus } => FieldElem::Modular {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (
                FieldElem::Modular { value: a, modulus },
                FieldElem::Modular {
                    value: b,
                    modulus: m2,
                },
            ) => {
                check_same_modulus(*modulus, *m2);
                FieldElem::Modular {
                    value: (a * b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => mixed_scalar_panic(),
        }
    }

    /// Multiplicative inverse; the one partial field operation.
    pub fn inv(&self) -> Result<FieldElem, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rational(a) => FieldElem::Rational(a.recip()),
            FieldElem::Modular { value, modulus } => FieldElem::Modular {
                // Fermat: a^(p-2) = a^(-1) for prime p.
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut exp: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// A size proxy used for pivot selection over Q: total bit length of
    /// numerator and denominator. Modular values all score alike.
    pub fn pivot_size(&self) -> u64 {
        match self {
            FieldElem::Rational(r) => r.numer().bits() + r.denom().bits(),
            FieldElem::Modular { .. } => 1,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

/// True when the rational value is negative (used only for display layout).
pub(crate) fn is_display_negative(x: &FieldElem) -> bool {
    match x {
        FieldElem::Rational(r) => r.is_negative(),
        FieldElem::Modular { .. } => false,
    }
}

fn check_same_modulus(a: u64, b: u64) {
    if a != b {
        panic!("scalar arithmetic across GF({a}) and GF({b})");
    }
}

fn mixed_scalar_panic() -> ! {
    panic!("scalar arithmetic across Q and GF(p)")
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    // modulus < 2^31, so products of residues fit in u64.
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let mut d = 5;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}
