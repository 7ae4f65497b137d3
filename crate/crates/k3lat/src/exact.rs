//! Exact integer/rational square-root helpers.
//!
//! Everything here is float-free: bounds on `sqrt` expressions are computed
//! through integer square roots and verified with exact rational predicates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative integer");
    n.sqrt()
}

/// Floor of `sqrt(r)` for a non-negative rational `r`.
///
/// Uses `sqrt(p/q) = sqrt(p*q)/q`, so the floor is `isqrt(p*q) div q`.
pub fn floor_sqrt_rational(r: &BigRational) -> BigInt {
    assert!(!r.is_negative(), "floor_sqrt_rational of negative rational");
    let pq = r.numer() * r.denom();
    isqrt(&pq).div_floor(r.denom())
}

/// Exact predicate: `x <= sqrt(r)` with `r >= 0`.
pub fn leq_sqrt(x: &BigRational, r: &BigRational) -> bool {
    debug_assert!(!r.is_negative());
    if x.is_negative() || x.is_zero() {
        return true;
    }
    x * x <= *r
}

/// Largest integer `t` with `t <= shift + sqrt(rad)`, `rad >= 0`.
pub fn floor_shift_plus_sqrt(shift: &BigRational, rad: &BigRational) -> BigInt {
    assert!(!rad.is_negative());
    // Start from an upper estimate and walk down; the estimate is off by at
    // most a couple of units.
    let mut t = shift.floor().to_integer() + floor_sqrt_rational(rad) + BigInt::from(2);
    while !leq_sqrt(&(BigRational::from(t.clone()) - shift), rad) {
        t -= BigInt::one();
    }
    t
}

/// Smallest integer `t` with `t >= shift - sqrt(rad)`, `rad >= 0`.
pub fn ceil_shift_minus_sqrt(shift: &BigRational, rad: &BigRational) -> BigInt {
    -floor_shift_plus_sqrt(&-shift, rad)
}

/// Exact rational square root, if one exists.
pub fn sqrt_exact(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sn = isqrt(r.numer());
    let sd = isqrt(r.denom());
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Renders `r` as a decimal string with `places` digits after the point,
/// rounded half away from zero, exactly.
pub fn decimal_string(r: &BigRational, places: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let scale = BigInt::from(10u8).pow(places);
    // round(a * scale) = floor(a * scale + 1/2)
    let scaled = &a * BigRational::from(scale.clone()) + BigRational::new(BigInt::one(), BigInt::from(2));
    let m = scaled.floor().to_integer();
    let (int_part, frac_part) = m.div_rem(&scale);
    format!(
        "{}{}.{:0width$}",
        sign,
        int_part,
        frac_part,
        width = places as usize
    )
}

/// Decimal rendering of `sqrt(rad)` (with `rad >= 0`) to `places` digits,
/// rounded to nearest, computed without floating point.
pub fn sqrt_decimal_string(rad: &BigRational, places: u32) -> String {
    assert!(!rad.is_negative());
    let scale = BigInt::from(10u8).pow(places);
    let scale_rat = BigRational::from(scale.clone());
    // x = sqrt(rad) * scale; m = floor(x), then round by comparing (m + 1/2)^2
    // with x^2 exactly.
    let x_sq = rad * &scale_rat * &scale_rat;
    let mut m = floor_sqrt_rational(&x_sq);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let m_half = BigRational::from(m.clone()) + half;
    if &m_half * &m_half < x_sq {
        m += BigInt::one();
    }
    let (int_part, frac_part) = m.div_rem(&scale);
    format!("{}.{:0width$}", int_part, frac_part, width = places as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn isqrt_basics() {
        assert_eq!(isqrt(&BigInt::from(0)), BigInt::from(0));
        assert_eq!(isqrt(&BigInt::from(99)), BigInt::from(9));
        assert_eq!(isqrt(&BigInt::from(100)), BigInt::from(10));
    }

    #[test]
    fn floor_sqrt_rational_basics() {
        assert_eq!(floor_sqrt_rational(&rat(2, 1)), BigInt::from(1));
        assert_eq!(floor_sqrt_rational(&rat(1, 4)), BigInt::from(0));
        assert_eq!(floor_sqrt_rational(&rat(9, 4)), BigInt::from(1));
        assert_eq!(floor_sqrt_rational(&rat(25, 4)), BigInt::from(2));
    }

    #[test]
    fn shifted_bounds() {
        // floor(1/2 + sqrt(2)) = 1
        assert_eq!(floor_shift_plus_sqrt(&rat(1, 2), &rat(2, 1)), BigInt::from(1));
        // floor(3 + sqrt(9/4)) = floor(4.5) = 4
        assert_eq!(floor_shift_plus_sqrt(&rat(3, 1), &rat(9, 4)), BigInt::from(4));
        // ceil(1/2 - sqrt(2)) = ceil(-0.914...) = 0
        assert_eq!(ceil_shift_minus_sqrt(&rat(1, 2), &rat(2, 1)), BigInt::from(0));
        // ceil(-3 - ...) handled through negation
        assert_eq!(ceil_shift_minus_sqrt(&rat(-3, 1), &rat(1, 1)), BigInt::from(-4));
    }

    #[test]
    fn sqrt_exact_detects_squares() {
        assert_eq!(sqrt_exact(&rat(1, 4)), Some(rat(1, 2)));
        assert_eq!(sqrt_exact(&rat(9, 1)), Some(rat(3, 1)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        assert_eq!(sqrt_exact(&rat(-1, 1)), None);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 2), 3), "0.500");
        assert_eq!(decimal_string(&rat(-1, 3), 6), "-0.333333");
        assert_eq!(decimal_string(&rat(2, 3), 3), "0.667");
        assert_eq!(sqrt_decimal_string(&rat(2, 1), 6), "1.414214");
        assert_eq!(sqrt_decimal_string(&rat(1, 4), 3), "0.500");
    }
}
