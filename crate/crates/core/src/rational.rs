//! Exact rational helpers shared by every solver in the crate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `-p` or `p/q`. A zero denominator is an error rather than a panic.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid rational `{s}`"))?;
    let den: BigInt = match den {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| format!("invalid rational `{s}`"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn all_positive(values: &[Rational]) -> bool {
    values.iter().all(|v| v.is_positive())
}

/// A cost that may be `+∞`, used for cyclic plays and the `w^c` vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtCost {
    Finite(Rational),
    Infinite,
}

impl ExtCost {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtCost::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtCost::Finite(r) => Some(r),
            ExtCost::Infinite => None,
        }
    }
}

impl PartialOrd for ExtCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtCost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtCost::Finite(a), ExtCost::Finite(b)) => a.cmp(b),
            (ExtCost::Finite(_), ExtCost::Infinite) => Ordering::Less,
            (ExtCost::Infinite, ExtCost::Finite(_)) => Ordering::Greater,
            (ExtCost::Infinite, ExtCost::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCost::Finite(r) => f.write_str(&format_rational(r)),
            ExtCost::Infinite => f.write_str("INF"),
        }
    }
}
