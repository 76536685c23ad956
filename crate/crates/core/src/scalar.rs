//! Exact-or-float scalar arithmetic.
//!
//! Regime boundaries (q = 2(2p+α)/(2+α), q = 18/7, …) are the substance of the
//! classification module, so rational inputs must be classified exactly: a
//! `Scalar` is either an exact `i128` ratio or an `f64`. Arithmetic stays
//! rational as long as both operands are rational and nothing overflows;
//! otherwise it falls through to floating point. Comparisons between exact
//! rationals are exact; any comparison involving a float uses the documented
//! boundary tolerance [`CMP_EPS`].

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Comparison tolerance for boundary decisions on the floating-point path.
pub const CMP_EPS: f64 = 1e-12;

type Rat = Ratio<i128>;

#[derive(Clone, Copy, Debug)]
pub enum Scalar {
    Rational(Rat),
    Float(f64),
}

impl Scalar {
    pub fn int(n: i128) -> Self {
        Scalar::Rational(Rat::from_integer(n))
    }

    pub fn ratio(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(Rat::new(num, den))
    }

    pub fn float(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => x,
        }
    }

    pub fn is_rational(self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn is_finite(self) -> bool {
        match self {
            Scalar::Rational(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    fn bin(
        self,
        other: Scalar,
        f: impl Fn(Rat, Rat) -> Option<Rat>,
        g: impl Fn(f64, f64) -> f64,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => match f(a, b) {
                Some(r) => Scalar::Rational(r),
                None => Scalar::Float(g(self.to_f64(), other.to_f64())),
            },
            _ => Scalar::Float(g(self.to_f64(), other.to_f64())),
        }
    }

    pub fn add(self, o: Scalar) -> Scalar {
        self.bin(o, |a, b| a.checked_add(&b), |a, b| a + b)
    }

    pub fn sub(self, o: Scalar) -> Scalar {
        self.bin(o, |a, b| a.checked_sub(&b), |a, b| a - b)
    }

    pub fn mul(self, o: Scalar) -> Scalar {
        self.bin(o, |a, b| a.checked_mul(&b), |a, b| a * b)
    }

    pub fn div(self, o: Scalar) -> Scalar {
        self.bin(
            o,
            |a, b| if b.is_zero() { None } else { a.checked_div(&b) },
            |a, b| a / b,
        )
    }

    pub fn recip(self) -> Scalar {
        Scalar::int(1).div(self)
    }

    pub fn is_zero(self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() <= CMP_EPS,
        }
    }

    /// Three-way comparison: exact when both sides are rational, otherwise
    /// within [`CMP_EPS`] relative to max(1, |a|, |b|).
    pub fn cmp3(self, other: Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(&b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let scale = 1f64.max(a.abs()).max(b.abs());
                if (a - b).abs() <= CMP_EPS * scale {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn eq3(self, o: Scalar) -> bool {
        self.cmp3(o) == Ordering::Equal
    }
    pub fn lt3(self, o: Scalar) -> bool {
        self.cmp3(o) == Ordering::Less
    }
    pub fn le3(self, o: Scalar) -> bool {
        self.cmp3(o) != Ordering::Greater
    }
    pub fn gt3(self, o: Scalar) -> bool {
        self.cmp3(o) == Ordering::Greater
    }
    pub fn ge3(self, o: Scalar) -> bool {
        self.cmp3(o) != Ordering::Less
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Parses `"3"`, `"18/7"`, `"2.8"` (decimals are exact rationals) and
/// `"1e-3"`; anything else that parses as `f64` becomes a float scalar.
impl FromStr for Scalar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: i128 = num
                .trim()
                .parse()
                .map_err(|_| format!("bad fraction `{s}`"))?;
            let d: i128 = den
                .trim()
                .parse()
                .map_err(|_| format!("bad fraction `{s}`"))?;
            if d == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            return Ok(Scalar::ratio(n, d));
        }
        if let Some(r) = parse_decimal(s) {
            return Ok(Scalar::Rational(r));
        }
        s.parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| format!("bad number `{s}`"))
    }
}

/// Exact rational value of a plain decimal literal like `-2.80` or `3e2`.
fn parse_decimal(s: &str) -> Option<Rat> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mant.strip_prefix('-') {
        Some(rest) => (-1i128, rest),
        None => (1i128, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut numer: i128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        numer = numer
            .checked_mul(10)?
            .checked_add((c as u8 - b'0') as i128)?;
    }
    numer *= sign;
    let shift = exp - frac_part.len() as i32;
    let mut r = Rat::from_integer(numer);
    let ten = Rat::from_integer(10);
    for _ in 0..shift.abs() {
        r = if shift >= 0 {
            r.checked_mul(&ten)?
        } else {
            r.checked_div(&ten)?
        };
    }
    Some(r)
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

impl Scalar {
    /// Sign of the scalar under the same tolerance rules as [`cmp3`](Self::cmp3).
    pub fn signum3(self) -> i32 {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Float(x) => {
                if x.abs() <= CMP_EPS {
                    0
                } else if x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}
