//! Exact arithmetic: rationals and capacities that may be infinite.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Formats as `p/q` in lowest terms, including `n/1` for integers.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(text).ok().map(Rational::from_integer),
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc = C(n, i), so acc * (n - i) is divisible by i + 1
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i + 1) as u128,
            None => return u128::MAX,
        }
    }
    acc
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A nonnegative exact rational or `INF`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

impl Capacity {
    pub fn finite(value: Rational) -> Self {
        Capacity::Finite(value)
    }

    pub fn from_int(value: i64) -> Self {
        Capacity::Finite(int(value))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Capacity::Finite(v) => Some(v),
            Capacity::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Capacity::Finite(v) if v.is_negative())
    }

    /// The integer value when finite and integral.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Capacity::Finite(v) if v.is_integer() => Some(v.to_integer()),
            _ => None,
        }
    }
}

impl PartialOrd for Capacity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Capacity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Capacity::Infinite, Capacity::Infinite) => Ordering::Equal,
            (Capacity::Infinite, _) => Ordering::Greater,
            (_, Capacity::Infinite) => Ordering::Less,
            (Capacity::Finite(a), Capacity::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Capacity {
    type Output = Capacity;

    fn add(self, rhs: Capacity) -> Capacity {
        match (self, rhs) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a + b),
            _ => Capacity::Infinite,
        }
    }
}

impl From<Rational> for Capacity {
    fn from(value: Rational) -> Self {
        Capacity::Finite(value)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Infinite => f.write_str("INF"),
            Capacity::Finite(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Capacity::Finite(v) => write!(f, "{}/{}", v.numer(), v.denom()),
        }
    }
}

impl FromStr for Capacity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Capacity::Infinite);
        }
        parse_rational(s)
            .map(Capacity::Finite)
            .ok_or_else(|| format!("bad capacity {s:?}"))
    }
}
