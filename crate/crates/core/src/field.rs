//! Scalar fields: exact rationals, prime fields and double-precision reals.
//!
//! Every [`Scalar`] knows which field it lives in. Arithmetic between scalars
//! of different fields is a logic error; public entry points validate fields
//! before doing arithmetic, so the operator impls panic on a mismatch.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The field an algebra is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldJson", into = "FieldJson")]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
    Real,
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
}

impl TryFrom<FieldJson> for FieldDescriptor {
    type Error = Error;

    fn try_from(json: FieldJson) -> Result<Self> {
        match (json.kind.as_str(), json.p) {
            ("rational", _) => Ok(FieldDescriptor::Rational),
            ("real", _) => Ok(FieldDescriptor::Real),
            ("prime", Some(p)) => FieldDescriptor::prime(p),
            ("prime", None) => Err(Error::InvalidField("prime field without modulus".into())),
            (other, _) => Err(Error::InvalidField(format!("unknown field kind {other:?}"))),
        }
    }
}

impl From<FieldDescriptor> for FieldJson {
    fn from(field: FieldDescriptor) -> Self {
        match field {
            FieldDescriptor::Rational => FieldJson {
                kind: "rational".into(),
                p: None,
            },
            FieldDescriptor::Prime(p) => FieldJson {
                kind: "prime".into(),
                p: Some(p),
            },
            FieldDescriptor::Real => FieldJson {
                kind: "real".into(),
                p: None,
            },
        }
    }
}

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldDescriptor {
    /// The prime field F_p; rejects composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidField(format!("modulus {p} exceeds 32 bits")));
        }
        Ok(FieldDescriptor::Prime(p))
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, FieldDescriptor::Real)
    }

    pub fn is_prime(self) -> bool {
        matches!(self, FieldDescriptor::Prime(_))
    }

    /// Parses the CLI spelling: `rational`, `real`, `prime:<p>` or `f<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "rational" | "q" => Ok(FieldDescriptor::Rational),
            "real" | "r" => Ok(FieldDescriptor::Real),
            _ => {
                let digits = lower
                    .strip_prefix("prime:")
                    .or_else(|| lower.strip_prefix("prime"))
                    .or_else(|| lower.strip_prefix('f'))
                    .ok_or_else(|| Error::InvalidField(format!("unknown field {s:?}")))?;
                let p: u64 = digits
                    .trim_start_matches([':', '='])
                    .parse()
                    .map_err(|_| Error::InvalidField(format!("bad modulus in {s:?}")))?;
                FieldDescriptor::prime(p)
            }
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "F_{p}"),
            FieldDescriptor::Real => write!(f, "R"),
        }
    }
}

/// A field element tagged with its field.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
    Real(f64),
}

fn mod_reduce(value: &BigInt, p: u64) -> u64 {
    let r = value.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
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

/// Multiplicative inverse in F_p via Fermat; `a` must be nonzero mod p.
pub fn mod_inverse(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    mod_pow(a, p - 2, p)
}

impl Scalar {
    pub fn zero(field: FieldDescriptor) -> Self {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldDescriptor, v: i64) -> Self {
        match field {
            FieldDescriptor::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            FieldDescriptor::Prime(p) => Scalar::Prime {
                residue: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
            FieldDescriptor::Real => Scalar::Real(v as f64),
        }
    }

    /// Maps an exact rational into `field`. Fails over F_p when the
    /// denominator is divisible by p.
    pub fn from_rational(field: FieldDescriptor, q: &BigRational) -> Result<Self> {
        match field {
            FieldDescriptor::Rational => Ok(Scalar::Rational(q.clone())),
            FieldDescriptor::Prime(p) => {
                let num = mod_reduce(q.numer(), p);
                let den = mod_reduce(q.denom(), p);
                if den == 0 {
                    return Err(Error::Parse(format!(
                        "denominator of {q} is not invertible modulo {p}"
                    )));
                }
                let residue = ((num as u128 * mod_inverse(den, p) as u128) % p as u128) as u64;
                Ok(Scalar::Prime { residue, modulus: p })
            }
            FieldDescriptor::Real => Ok(Scalar::Real(q.to_f64().unwrap_or(f64::NAN))),
        }
    }

    /// Parses an integer, fraction (`-3/7`) or decimal (`0.25`, `1e-3`).
    pub fn parse(field: FieldDescriptor, s: &str) -> Result<Self> {
        let s = s.trim();
        if field == FieldDescriptor::Real && !s.contains('/') {
            let v = f64::from_str(s).map_err(|_| Error::Parse(format!("bad real {s:?}")))?;
            return Ok(Scalar::Real(v));
        }
        let q = parse_rational(s)?;
        Scalar::from_rational(field, &q)
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Rational(_) => FieldDescriptor::Rational,
            Scalar::Prime { modulus, .. } => FieldDescriptor::Prime(*modulus),
            Scalar::Real(_) => FieldDescriptor::Real,
        }
    }

    /// Exact zero test. Reals compare against 0.0 exactly; use
    /// [`Scalar::abs_f64`] with a tolerance where floating noise matters.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
            Scalar::Real(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { residue, .. } => *residue == 1,
            Scalar::Real(x) => *x == 1.0,
        }
    }

    /// Sign test for ordered fields; `None` over F_p.
    pub fn is_negative(&self) -> Option<bool> {
        match self {
            Scalar::Rational(q) => Some(q.is_negative()),
            Scalar::Prime { .. } => None,
            Scalar::Real(x) => Some(*x < 0.0),
        }
    }

    /// Real value for ordered fields; `None` over F_p.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rational(q) => q.to_f64(),
            Scalar::Prime { .. } => None,
            Scalar::Real(x) => Some(*x),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            Scalar::Prime { residue, .. } => *residue as f64,
            other => other.to_f64().map(f64::abs).unwrap_or(f64::NAN),
        }
    }

    /// Larger of the numerator and denominator bit lengths; 0 outside ℚ.
    pub fn bit_len(&self) -> u64 {
        match self {
            Scalar::Rational(q) => q.numer().bits().max(q.denom().bits()),
            _ => 0,
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("inverse of zero".into()));
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: mod_inverse(*residue, *modulus),
                modulus: *modulus,
            },
            Scalar::Real(x) => Scalar::Real(1.0 / x),
        })
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        acc
    }

    fn mismatch(a: &Scalar, b: &Scalar) -> ! {
        panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
    }
}

/// Parses an exact rational from integer, fraction or decimal notation.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&format_rational(q)),
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
            // Rust's float Display is the shortest string that round-trips.
            Scalar::Real(x) => write!(f, "{x}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime { residue: a, modulus },
                Scalar::Prime {
                    residue: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Prime {
                residue: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a + b),
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime { residue: a, modulus },
                Scalar::Prime {
                    residue: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Prime {
                residue: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a * b),
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: (*modulus - residue) % modulus,
                modulus: *modulus,
            },
            Scalar::Real(a) => Scalar::Real(-a),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

/// Convenience constructor for `num/den` in ℚ.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<u64> = (0..40).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(FieldDescriptor::prime(9).is_err());
        assert!(FieldDescriptor::prime(1).is_err());
    }

    #[test]
    fn rationals_stay_normalized() {
        let q = Scalar::parse(FieldDescriptor::Rational, "6/-4").unwrap();
        match q {
            Scalar::Rational(r) => {
                assert_eq!(r.numer(), &BigInt::from(-3));
                assert_eq!(r.denom(), &BigInt::from(2));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn decimal_and_exponent_parsing() {
        assert_eq!(parse_rational("0.25").unwrap(), rational(1, 4));
        assert_eq!(parse_rational("-1.5e1").unwrap(), rational(-15, 1));
        assert_eq!(parse_rational("2e-2").unwrap(), rational(1, 50));
        assert_eq!(parse_rational(".5").unwrap(), rational(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn prime_field_reduces_and_inverts() {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let x = Scalar::parse(f7, "-1").unwrap();
        assert_eq!(x, Scalar::Prime { residue: 6, modulus: 7 });
        let half = Scalar::parse(f7, "1/2").unwrap();
        assert_eq!(&half * &Scalar::from_i64(f7, 2), Scalar::one(f7));
        assert!(Scalar::parse(f7, "1/7").is_err());
        assert_eq!(Scalar::from_i64(f7, 3).inv().unwrap(), Scalar::from_i64(f7, 5));
    }

    #[test]
    fn real_display_round_trips() {
        for v in [1.0 / 3.0, 1e-300, -2.5, 123456789.125] {
            let s = Scalar::Real(v).to_string();
            assert_eq!(Scalar::parse(FieldDescriptor::Real, &s).unwrap(), Scalar::Real(v));
        }
    }

    #[test]
    fn field_descriptor_json_schema() {
        let json = serde_json::to_string(&FieldDescriptor::Prime(5)).unwrap();
        assert_eq!(json, r#"{"kind":"prime","p":5}"#);
        let back: FieldDescriptor = serde_json::from_str(r#"{"kind":"rational"}"#).unwrap();
        assert_eq!(back, FieldDescriptor::Rational);
        assert!(serde_json::from_str::<FieldDescriptor>(r#"{"kind":"prime","p":4}"#).is_err());
    }

    #[test]
    fn cli_field_spelling() {
        assert_eq!(FieldDescriptor::parse("rational").unwrap(), FieldDescriptor::Rational);
        assert_eq!(FieldDescriptor::parse("prime:2").unwrap(), FieldDescriptor::Prime(2));
        assert_eq!(FieldDescriptor::parse("F13").unwrap(), FieldDescriptor::Prime(13));
        assert!(FieldDescriptor::parse("complex").is_err());
    }

    #[test]
    fn scalar_power() {
        let q = Scalar::Rational(rational(-2, 3));
        assert_eq!(q.pow(3), Scalar::Rational(rational(-8, 27)));
        assert_eq!(q.pow(0), Scalar::one(FieldDescriptor::Rational));
    }
}
