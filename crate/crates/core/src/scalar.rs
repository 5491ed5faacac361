//! Exact field arithmetic: arbitrary-precision rationals and GF(p).
//!
//! Every scalar carries its field tag, is stored in canonical form (reduced
//! fraction with positive denominator, or residue in `[0, p)`), and compares
//! equal exactly when the representations coincide. All operations are pure.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Identifies the field scalars live in.
///
/// Prime-field moduli are validated at construction: `2 <= p < 2^31` and
/// prime (deterministic trial division, cheap at that size; rank and
/// nullspace computations genuinely require a field).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rationals,
    PrimeField(u32),
}

impl FieldTag {
    pub fn rationals() -> Self {
        FieldTag::Rationals
    }

    pub fn prime_field(p: u32) -> Result<Self> {
        if !(2..1u32 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(u64::from(p)));
        }
        Ok(FieldTag::PrimeField(p))
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            FieldTag::Rationals => None,
            FieldTag::PrimeField(p) => Some(*p),
        }
    }

    /// Parses the textual tag: `"q"` for the rationals, `"gf:<p>"` for GF(p).
    pub fn parse(s: &str) -> Result<Self> {
        if s == "q" {
            return Ok(FieldTag::Rationals);
        }
        if let Some(num) = s.strip_prefix("gf:") {
            let p: u64 = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad field tag {s:?}")))?;
            let p = u32::try_from(p).map_err(|_| Error::InvalidModulus(p))?;
            return FieldTag::prime_field(p);
        }
        Err(Error::Parse(format!(
            "bad field tag {s:?} (expected \"q\" or \"gf:<p>\")"
        )))
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "q"),
            FieldTag::PrimeField(p) => write!(f, "gf:{p}"),
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    let n = u64::from(n);
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element in canonical form.
///
/// Rationals are reduced fractions with positive denominator (`Ratio`
/// maintains that on every operation); prime-field elements are residues in
/// `[0, p)` with the modulus carried alongside, so mixed-field arithmetic is
/// detected rather than silently wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rational(_) => FieldTag::Rationals,
            Scalar::Residue { modulus, .. } => FieldTag::PrimeField(*modulus),
        }
    }

    pub fn zero(field: FieldTag) -> Self {
        Scalar::from_integer(field, 0)
    }

    pub fn one(field: FieldTag) -> Self {
        Scalar::from_integer(field, 1)
    }

    pub fn from_integer(field: FieldTag, n: i64) -> Self {
        match field {
            FieldTag::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldTag::PrimeField(p) => Scalar::Residue {
                value: n.rem_euclid(i64::from(p)) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(field: FieldTag, n: &BigInt) -> Self {
        match field {
            FieldTag::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldTag::PrimeField(p) => Scalar::Residue {
                value: residue_from_bigint(n, p),
                modulus: p,
            },
        }
    }

    /// Reduced fraction `numerator/denominator` over the rationals.
    pub fn rational(numerator: i64, denominator: i64) -> Result<Self> {
        Scalar::rational_big(BigInt::from(numerator), BigInt::from(denominator))
    }

    /// Canonicalizes an arbitrary-precision fraction: gcd-reduced, positive
    /// denominator, `0` normalized to `0/1`.
    pub fn rational_big(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Scalar::Rational(BigRational::new(numerator, denominator)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    fn check_same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().to_string(),
                other.field().to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Scalar::Residue { value: x, modulus }, Scalar::Residue { value: y, .. }) => {
                Scalar::Residue {
                    value: (x + y) % u64::from(*modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!("field tags already matched"),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x - y),
            (Scalar::Residue { value: x, modulus }, Scalar::Residue { value: y, .. }) => {
                let p = u64::from(*modulus);
                Scalar::Residue {
                    value: (x + p - y) % p,
                    modulus: *modulus,
                }
            }
            _ => unreachable!("field tags already matched"),
        })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Scalar::Residue { value: x, modulus }, Scalar::Residue { value: y, .. }) => {
                // modulus < 2^31, so the product fits in u64
                Scalar::Residue {
                    value: (x * y) % u64::from(*modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!("field tags already matched"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::Residue { value, modulus } => {
                let p = u64::from(*modulus);
                Scalar::Residue {
                    value: (p - value) % p,
                    modulus: *modulus,
                }
            }
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(x) => Scalar::Rational(x.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: mod_inverse(*value, u64::from(*modulus)),
                modulus: *modulus,
            },
        })
    }

    /// Parses the textual scalar format for `field`: `"p/q"` or `"p"` over
    /// the rationals, decimal residues over prime fields (signed input is
    /// reduced into `[0, p)`).
    pub fn parse(field: FieldTag, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match field {
            FieldTag::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (parse_bigint(n)?, parse_bigint(d)?),
                    None => (parse_bigint(s)?, BigInt::one()),
                };
                Scalar::rational_big(num, den)
            }
            FieldTag::PrimeField(p) => {
                let n = parse_bigint(s)?;
                Ok(Scalar::Residue {
                    value: residue_from_bigint(&n, p),
                    modulus: p,
                })
            }
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn residue_from_bigint(n: &BigInt, p: u32) -> u64 {
    let p_big = BigInt::from(p);
    let mut r = n % &p_big;
    if r.is_negative() {
        r += &p_big;
    }
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Inverse of `a` mod `p` by extended Euclid; caller guarantees `a != 0`.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (i128::from(a), i128::from(p));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "modulus must be prime and a nonzero");
    old_s.rem_euclid(i128::from(p)) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldTag {
        FieldTag::Rationals
    }

    fn gf(p: u32) -> FieldTag {
        FieldTag::prime_field(p).unwrap()
    }

    #[test]
    fn rational_normalization() {
        assert_eq!(
            Scalar::rational(2, 4).unwrap(),
            Scalar::rational(1, 2).unwrap()
        );
        assert_eq!(
            Scalar::rational(3, -6).unwrap(),
            Scalar::rational(-1, 2).unwrap()
        );
        assert_eq!(
            Scalar::rational(0, 7).unwrap(),
            Scalar::from_integer(q(), 0)
        );
        assert_eq!(Scalar::rational(1, 1).unwrap().to_string(), "1");
        assert_eq!(Scalar::rational(-1, 2).unwrap().to_string(), "-1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(Scalar::rational(3, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn canonical_form_is_scale_invariant() {
        for k in [-7i64, -2, 1, 3, 11] {
            assert_eq!(
                Scalar::rational(5, 8).unwrap(),
                Scalar::rational(5 * k, 8 * k).unwrap()
            );
        }
    }

    #[test]
    fn field_arithmetic_examples() {
        let half = Scalar::rational(1, 2).unwrap();
        let third = Scalar::rational(1, 3).unwrap();
        assert_eq!(half.add(&third).unwrap(), Scalar::rational(5, 6).unwrap());

        let three = Scalar::from_integer(gf(5), 3);
        let four = Scalar::from_integer(gf(5), 4);
        assert_eq!(three.mul(&four).unwrap(), Scalar::from_integer(gf(5), 2));

        for x in [half, three, Scalar::from_integer(gf(7), 6)] {
            assert!(x.sub(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn field_mismatch_detected() {
        let a = Scalar::from_integer(gf(5), 1);
        let b = Scalar::from_integer(gf(7), 1);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(_, _))));
        let c = Scalar::rational(1, 2).unwrap();
        assert!(matches!(a.mul(&c), Err(Error::FieldMismatch(_, _))));
    }

    #[test]
    fn inverses() {
        assert_eq!(
            Scalar::from_integer(gf(7), 3).inverse().unwrap(),
            Scalar::from_integer(gf(7), 5)
        );
        assert_eq!(
            Scalar::rational(-2, 3).unwrap().inverse().unwrap(),
            Scalar::rational(-3, 2).unwrap()
        );
        for f in [q(), gf(5)] {
            assert_eq!(Scalar::one(f).inverse().unwrap(), Scalar::one(f));
            assert_eq!(Scalar::zero(f).inverse(), Err(Error::DivisionByZero));
        }
    }

    #[test]
    fn modulus_validation() {
        assert!(FieldTag::prime_field(2).is_ok());
        assert!(FieldTag::prime_field(2_147_483_647).is_ok()); // largest prime < 2^31
        for bad in [0u32, 1, 4, 9, 100, 1 << 31] {
            assert_eq!(
                FieldTag::prime_field(bad),
                Err(Error::InvalidModulus(u64::from(bad)))
            );
        }
    }

    #[test]
    fn tag_and_scalar_text_round_trip() {
        assert_eq!(FieldTag::parse("q").unwrap(), q());
        assert_eq!(FieldTag::parse("gf:11").unwrap(), gf(11));
        assert_eq!(gf(11).to_string(), "gf:11");
        assert!(FieldTag::parse("gf:6").is_err());
        assert!(FieldTag::parse("r").is_err());

        let x = Scalar::parse(q(), "-7/21").unwrap();
        assert_eq!(x, Scalar::rational(-1, 3).unwrap());
        assert_eq!(Scalar::parse(q(), &x.to_string()).unwrap(), x);

        let y = Scalar::parse(gf(5), "-1").unwrap();
        assert_eq!(y, Scalar::from_integer(gf(5), 4));
        assert!(Scalar::parse(q(), "1/0").is_err());
        assert!(Scalar::parse(q(), "abc").is_err());
    }
}
