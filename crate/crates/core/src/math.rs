//! Exact rationals, the branching bracket and the float helpers `no_std`
//! needs from libm.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational used for curvature and isoperimetric ratios.
pub type Rational = Ratio<i128>;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `a/b` as a rational. Panics on `b == 0`.
pub fn ratio(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// `max(0, r)`.
pub fn clamp_nonnegative(r: Rational) -> Rational {
    if r < Rational::zero() {
        Rational::zero()
    } else {
        r
    }
}

/// `[c·n^γ]`: the smallest integer strictly bigger than `c·n^γ`.
///
/// Computed exactly for rational `c` and `γ`: with `c = a/b`, `γ = p/q`, the
/// floor `m` is the largest integer with `(m·b)^q ≤ a^q·n^p`, and the bracket
/// is `m + 1` (so integer arguments are pushed up by one).
pub fn bracket(c: &Ratio<u64>, n: u64, gamma: &Ratio<u64>) -> Result<u64> {
    let (a, b) = (*c.numer(), *c.denom());
    let (p, q) = (*gamma.numer(), *gamma.denom());
    if q > 64 || p > 256 {
        return Err(Error::InvalidParameter(alloc::format!(
            "exponent {p}/{q} is too fine for exact bracket evaluation"
        )));
    }
    let (p, q) = (p as u32, q as u32);
    let target = BigUint::from(a).pow(q) * BigUint::from(n).pow(p);
    let fits = |m: u64| -> bool { (BigUint::from(m) * BigUint::from(b)).pow(q) <= target };

    let estimate = (a as f64 / b as f64) * libm::pow(n as f64, p as f64 / q as f64);
    let mut m = if estimate.is_finite() && estimate < 1.8e19 {
        estimate as u64
    } else {
        return Err(Error::Overflow("bracket [c n^gamma]"));
    };
    while m > 0 && !fits(m) {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m.checked_add(1).ok_or(Error::Overflow("bracket [c n^gamma]"))
}

/// Parse `"3"`, `"1/2"` or a finite decimal like `"0.25"` into an exact
/// nonnegative rational.
pub fn parse_ratio(s: &str) -> Option<Ratio<u64>> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().ok()?;
        let d: u64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() && int.is_empty() {
            return None;
        }
        let digits = frac.len() as u32;
        if digits > 18 {
            return None;
        }
        let scale = 10u64.checked_pow(digits)?;
        let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let numer = int.checked_mul(scale)?.checked_add(frac)?;
        return Some(Ratio::new(numer, scale));
    }
    s.parse::<u64>().ok().map(Ratio::from_integer)
}

/// Convert a `u64` ratio into the crate's signed rational.
pub fn widen(r: &Ratio<u64>) -> Rational {
    Rational::new(*r.numer() as i128, *r.denom() as i128)
}
