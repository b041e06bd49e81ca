//! Closed-form upper bounds for the covering numbers, compared against the
//! explicit constructions.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{CoverError, Result};
use crate::rational::Rational;

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

/// `(n+1) n^(n-1) - (n-1)(n-2)^(n-1)`.
pub fn lassak_bound(n: usize) -> Result<BigInt> {
    if n < 2 {
        return Err(CoverError::InvalidArgument(format!("n = {n} is too small")));
    }
    let e = (n - 1) as u32;
    Ok(big(n + 1) * Pow::pow(big(n), e) - big(n - 1) * Pow::pow(big(n - 2), e))
}

/// Size of the explicit skeleton covers: 96 in dimension four and
/// `2n(n-1)(n-2)^(n-2) + 2n + 1` above.
pub fn paper_bound(n: usize) -> Result<BigInt> {
    if n < 4 {
        return Err(CoverError::InvalidArgument(format!(
            "the constructions need n >= 4, got {n}"
        )));
    }
    if n == 4 {
        return Ok(big(96));
    }
    let cover = big(2 * n * (n - 1)) * Pow::pow(big(n - 2), (n - 2) as u32);
    Ok(cover + big(2 * n + 1))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * big(n - i) / big(i + 1);
    }
    acc
}

/// Rigorous enclosure of `ln x` for `x > 0`, from `terms` terms of
/// `2 atanh((x-1)/(x+1))` plus a geometric tail bound.
pub fn ln_enclosure(x: &Rational, terms: usize) -> Result<(Rational, Rational)> {
    if !x.is_positive() {
        return Err(CoverError::InvalidArgument(format!("ln of {x}")));
    }
    let one = Rational::one();
    let y = (x - &one) / (x + &one);
    let negate = y.is_negative();
    let y = y.abs();
    let y2 = &y * &y;
    let mut pow = y.clone();
    let mut sum = Rational::zero();
    for k in 0..terms {
        sum += &(&pow / Rational::from_int(2 * k as i64 + 1));
        pow = &pow * &y2;
    }
    // remaining terms are at most pow/(2K+1) * (1 + y^2 + y^4 + ...)
    let tail = &pow / (Rational::from_int(2 * terms as i64 + 1) * (&one - &y2));
    let two = Rational::from_int(2);
    let lo = &two * &sum;
    let hi = &two * (sum + tail);
    Ok(if negate { (-hi, -lo) } else { (lo, hi) })
}

/// `floor(C(2n,n) n (ln n + ln ln n + 5))`, with the logarithms enclosed exactly
/// and refined until the floor is determined.
pub fn rogers_bound(n: usize) -> Result<BigInt> {
    if n < 2 {
        return Err(CoverError::InvalidArgument(format!("n = {n} is too small")));
    }
    let scale = Rational::from_big(binomial(2 * n, n) * big(n), BigInt::one())?;
    let x = Rational::from_int(n as i64);
    let five = Rational::from_int(5);
    let mut terms = 16;
    for _ in 0..12 {
        let (l_lo, l_hi) = ln_enclosure(&x, terms)?;
        let (ll_lo, _) = ln_enclosure(&l_lo, terms)?;
        let (_, ll_hi) = ln_enclosure(&l_hi, terms)?;
        let lo = &scale * (l_lo + ll_lo + &five);
        let hi = &scale * (l_hi + ll_hi + &five);
        if lo.floor() == hi.floor() {
            return Ok(lo.floor());
        }
        terms *= 2;
    }
    Err(CoverError::Precondition(format!(
        "could not resolve the floor for n = {n}"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsRow {
    pub n: usize,
    pub paper: BigInt,
    pub lassak: BigInt,
    pub rogers: BigInt,
}

impl BoundsRow {
    pub fn new(n: usize) -> Result<Self> {
        Ok(BoundsRow {
            n,
            paper: paper_bound(n)?,
            lassak: lassak_bound(n)?,
            rogers: rogers_bound(n)?,
        })
    }

    /// Whether the explicit construction beats both classical bounds.
    pub fn improves(&self) -> bool {
        self.paper < self.lassak && self.paper < self.rogers
    }
}

pub fn bounds_table(ns: impl IntoIterator<Item = usize>) -> Result<Vec<BoundsRow>> {
    ns.into_iter().map(BoundsRow::new).collect()
}
