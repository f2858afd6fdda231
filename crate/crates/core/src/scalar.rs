//! Exact scalars: big rationals and the quadratic extension `Q(sqrt n)`.
//!
//! An [`ExactScalar`] is `rat + rad * sqrt(radicand)`. A zero radical part
//! always carries radicand 0, and a perfect-square radicand is folded into
//! the rational part, so structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Formats a rational as `"num/den"`, always with an explicit denominator.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"a"`, `"-a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(num))
        }
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `n^e` as a rational.
pub fn pow_int(n: usize, e: usize) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(n), e))
}

/// serde adapter for `BigRational` fields as `"num/den"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// serde adapter for `Vec<BigRational>`.
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    rat: BigRational,
    rad: BigRational,
    radicand: u64,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(rat: BigRational) -> Self {
        ExactScalar {
            rat,
            rad: BigRational::zero(),
            radicand: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(int(v))
    }

    /// `rat + rad * sqrt(radicand)`, normalized.
    pub fn new(rat: BigRational, rad: BigRational, radicand: u64) -> Self {
        let mut s = ExactScalar { rat, rad, radicand };
        s.normalize();
        s
    }

    /// `c * sqrt(n)`.
    pub fn sqrt_of(n: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), n)
    }

    fn normalize(&mut self) {
        if self.rad.is_zero() || self.radicand == 0 {
            self.rad = BigRational::zero();
            self.radicand = 0;
            return;
        }
        let root = self.radicand.sqrt();
        if root * root == self.radicand {
            let folded = &self.rad * BigRational::from_integer(BigInt::from(root));
            self.rat = &self.rat + folded;
            self.rad = BigRational::zero();
            self.radicand = 0;
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.rad
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 0
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rat.clone())
    }

    fn common_radicand(&self, other: &Self) -> Result<u64> {
        match (self.radicand, other.radicand) {
            (0, r) | (r, 0) => Ok(r),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::RadicandMismatch { left: a, right: b }),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let r = self.common_radicand(other)?;
        Ok(Self::new(&self.rat + &other.rat, &self.rad + &other.rad, r))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let r = self.common_radicand(other)?;
        let n = BigRational::from_integer(BigInt::from(r));
        let rat = &self.rat * &other.rat + &self.rad * &other.rad * n;
        let rad = &self.rat * &other.rad + &self.rad * &other.rat;
        Ok(Self::new(rat, rad, r))
    }

    /// `a - b sqrt(n)`.
    pub fn conjugate(&self) -> Self {
        ExactScalar {
            rat: self.rat.clone(),
            rad: -&self.rad,
            radicand: self.radicand,
        }
    }

    /// `a^2 - n b^2`, always rational.
    pub fn norm(&self) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(self.radicand));
        &self.rat * &self.rat - &self.rad * &self.rad * n
    }

    pub fn inverse(&self) -> Result<Self> {
        let norm = self.norm();
        if norm.is_zero() {
            return Err(Error::Singular);
        }
        let c = self.conjugate();
        Ok(Self::new(&c.rat / &norm, &c.rad / &norm, c.radicand))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(&self.rat * q, &self.rad * q, self.radicand)
    }

    /// Sign of the real number `a + b sqrt(n)`.
    pub fn signum(&self) -> Ordering {
        let sa = self.rat.cmp(&BigRational::zero());
        let sb = self.rad.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let n = BigRational::from_integer(BigInt::from(self.radicand));
        let a2 = &self.rat * &self.rat;
        let nb2 = &self.rad * &self.rad * n;
        match a2.cmp(&nb2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.signum() != Ordering::Less
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            rat: -&self.rat,
            rad: -&self.rad,
            radicand: self.radicand,
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

// The operator forms panic on radicand mixing; use the `checked_*` methods
// when operands may come from different extensions.
macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).expect("radicand mismatch")
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$checked(&rhs).expect("radicand mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", format_rational(&self.rat))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                format_rational(&self.rat),
                format_rational(&self.rad),
                self.radicand
            )
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_rational() {
            return s.serialize_str(&format_rational(&self.rat));
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("rat", &format_rational(&self.rat))?;
        map.serialize_entry("rad", &format_rational(&self.rad))?;
        map.serialize_entry("sqrt", &self.radicand)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Plain(String),
            Radical { rat: String, rad: String, sqrt: u64 },
        }
        match Repr::deserialize(d)? {
            Repr::Plain(s) => parse_rational(&s)
                .map(ExactScalar::from_rational)
                .map_err(de::Error::custom),
            Repr::Radical { rat, rad, sqrt } => {
                let rat = parse_rational(&rat).map_err(de::Error::custom)?;
                let rad = parse_rational(&rad).map_err(de::Error::custom)?;
                Ok(ExactScalar::new(rat, rad, sqrt))
            }
        }
    }
}

/// Absolute value of a rational, for residual reporting.
pub fn abs(q: &BigRational) -> BigRational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_square_radicand_folds() {
        let s = ExactScalar::new(int(1), int(3), 4);
        assert!(s.is_rational());
        assert_eq!(s.to_rational(), Some(int(7)));
    }

    #[test]
    fn radicand_mixing_is_an_error() {
        let a = ExactScalar::sqrt_of(2);
        let b = ExactScalar::sqrt_of(3);
        assert_eq!(
            a.checked_add(&b),
            Err(Error::RadicandMismatch { left: 2, right: 3 })
        );
        // rationals combine with anything
        assert!(a.checked_add(&ExactScalar::from_int(5)).is_ok());
    }

    #[test]
    fn sqrt_squared_is_rational() {
        let r = ExactScalar::sqrt_of(5);
        assert_eq!(&r * &r, ExactScalar::from_int(5));
        let inv = r.inverse().unwrap();
        assert_eq!(&r * &inv, ExactScalar::one());
    }

    #[test]
    fn signum_of_mixed_terms() {
        // 1 - sqrt(2) < 0, 2 - sqrt(3) > 0
        assert_eq!(ExactScalar::new(int(1), int(-1), 2).signum(), Ordering::Less);
        assert_eq!(ExactScalar::new(int(2), int(-1), 3).signum(), Ordering::Greater);
        assert_eq!(ExactScalar::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rational(2, 4)), "1/2");
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(parse_rational("-6/4").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn serde_forms() {
        let q = ExactScalar::from_rational(rational(1, 6));
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"1/6\"");
        let r = ExactScalar::new(rational(1, 2), rational(-1, 3), 3);
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, r#"{"rat":"1/2","rad":"-1/3","sqrt":3}"#);
        let back: ExactScalar = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
    }

    proptest::proptest! {
        #[test]
        fn conjugate_product_is_rational(a in -50i64..50, b in -50i64..50, d in 1i64..20, n in 2u64..30) {
            let s = ExactScalar::new(rational(a, d), rational(b, d + 1), n);
            let p = &s * &s.conjugate();
            proptest::prop_assert!(p.is_rational());
            proptest::prop_assert_eq!(p.to_rational().unwrap(), s.norm());
        }
    }
}
