//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"7"`, `"-3"` or `"p/q"`; the result is always reduced.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `"p/q"` in lowest terms, or just `"p"` for integers.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales all values by the common denominator, giving integers with the same ratios.
pub fn to_integers(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let lcm = common_denominator(values);
    let ints = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    (ints, lcm)
}

pub fn to_i64(v: &BigInt) -> Option<i64> {
    i64::try_from(v).ok()
}

pub fn abs_sum_fits_i64(values: &[BigInt]) -> bool {
    let total: BigInt = values.iter().map(|v| v.abs()).sum();
    total < BigInt::from(i64::MAX / 4)
}
