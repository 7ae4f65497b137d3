//! Brill–Noether numbers, the singular Brill–Noether invariant, the
//! hyperelliptic-existence bound, and the slope bounds, all exact.
//!
//! Irrational Seshadri bounds are carried as exact radicands; comparisons
//! against rationals square both sides. Decimal renderings exist for display
//! only.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{decimal_string, isqrt, sqrt_decimal_string, sqrt_exact};
use crate::scalar::Scalar;

/// Classical Brill–Noether number `ρ(g, r, d) = g − (r+1)(g − d + r)`.
pub fn rho(g: i64, r: i64, d: i64) -> BigInt {
    let (g, r, d) = (BigInt::from(g), BigInt::from(r), BigInt::from(d));
    &g - (&r + 1) * (&g - &d + &r)
}

/// Symbolic `ρ`, closed under the scalar ring.
pub fn rho_scalar(g: &Scalar, r: &Scalar, d: &Scalar) -> Scalar {
    g - &(&(r + &Scalar::one()) * &(&(g - d) + r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoSingReport {
    pub p_a: i64,
    pub r: i64,
    pub d: i64,
    pub g: i64,
    pub rho: BigInt,
    pub rho_sing: BigInt,
    /// `rho_sing < 0`: the partial normalization carries no such series.
    pub nonexistence_triggered: bool,
}

/// `ρ_sing(p_a, r, d, g) = ρ(g, r, d) + p_a − g`, with the nonexistence
/// reading attached. Requires `0 <= g <= p_a`.
pub fn rho_sing(p_a: i64, r: i64, d: i64, g: i64) -> Result<RhoSingReport> {
    if g < 0 || g > p_a {
        return Err(Error::Precondition(format!(
            "rho_sing requires 0 <= g <= p_a, got g = {g}, p_a = {p_a}"
        )));
    }
    let rho_v = rho(g, r, d);
    let rho_sing_v = &rho_v + BigInt::from(p_a) - BigInt::from(g);
    let triggered = rho_sing_v.is_negative();
    Ok(RhoSingReport {
        p_a,
        r,
        d,
        g,
        rho: rho_v,
        rho_sing: rho_sing_v,
        nonexistence_triggered: triggered,
    })
}

/// Symbolic `ρ_sing`.
pub fn rho_sing_scalar(p_a: &Scalar, r: &Scalar, d: &Scalar, g: &Scalar) -> Scalar {
    &rho_scalar(g, r, d) + &(p_a - g)
}

/// Admissible geometric genera for the hyperelliptic existence question:
/// `3 <= p_g <= (p_a+2)/2`. Empty below `p_a = 4`.
pub fn hep_range(p_a: i64) -> Option<(i64, i64)> {
    let hi = (p_a + 2).div_euclid(2);
    if hi < 3 {
        None
    } else {
        Some((3, hi))
    }
}

/// The slope bound a positive answer at maximal `p_g` would give:
/// `4/(p_a+4)` for even `p_a`, `4/(p_a+3)` for odd. Requires `p_a >= 4`.
pub fn hep_bound(p_a: i64) -> Result<BigRational> {
    if hep_range(p_a).is_none() {
        return Err(Error::Precondition(format!(
            "hyperelliptic range is empty for p_a = {p_a}"
        )));
    }
    let den = if p_a % 2 == 0 { p_a + 4 } else { p_a + 3 };
    Ok(BigRational::new(BigInt::from(4), BigInt::from(den)))
}

/// An exact bound value: a rational, or the square root of a rational
/// radicand. Perfect-square radicands simplify to the rational form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigRational),
    Sqrt { radicand: BigRational },
}

impl BoundValue {
    pub fn sqrt_of(radicand: BigRational) -> Self {
        match sqrt_exact(&radicand) {
            Some(r) => BoundValue::Exact(r),
            None => BoundValue::Sqrt { radicand },
        }
    }

    /// Exact comparison against a rational; square roots are compared by
    /// squaring (all quantities here are non-negative).
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self {
            BoundValue::Exact(v) => v.cmp(r),
            BoundValue::Sqrt { radicand } => {
                if r.is_negative() {
                    return Ordering::Greater;
                }
                radicand.cmp(&(r * r))
            }
        }
    }

    /// Exact comparison between bound values.
    pub fn cmp_value(&self, other: &BoundValue) -> Ordering {
        match (self, other) {
            (BoundValue::Exact(a), _) => other.cmp_rational(a).reverse(),
            (_, BoundValue::Exact(b)) => self.cmp_rational(b),
            (BoundValue::Sqrt { radicand: a }, BoundValue::Sqrt { radicand: b }) => a.cmp(b),
        }
    }

    pub fn decimal(&self, places: u32) -> String {
        match self {
            BoundValue::Exact(v) => decimal_string(v, places),
            BoundValue::Sqrt { radicand } => sqrt_decimal_string(radicand, places),
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{}", Scalar::from_rational(v.clone())),
            BoundValue::Sqrt { radicand } => {
                write!(f, "sqrt({})", Scalar::from_rational(radicand.clone()))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeshadriBounds {
    /// Upper bound on the slope: `sqrt(2/(p_a−1))` in general; the known
    /// exact value `ε(H)/(p_a−1) = 1` on quartics (`p_a = 3`).
    pub upper: BoundValue,
    /// Strict lower bound on what Seshadri methods can give:
    /// `(⌊sqrt(2p_a−2)⌋ − 1)/(p_a−1)`.
    pub lower: BigRational,
    /// True when the upper bound is the hard-coded quartic value ε(H) = 2.
    pub quartic_exact: bool,
}

/// Seshadri-derived slope bounds. Requires `p_a >= 2`. The Seshadri constant
/// itself is not computed; on quartics the known value ε(H) = 2 is used.
pub fn seshadri_bounds(p_a: i64) -> Result<SeshadriBounds> {
    if p_a < 2 {
        return Err(Error::Precondition(format!(
            "seshadri bounds require p_a >= 2, got {p_a}"
        )));
    }
    let pm1 = BigInt::from(p_a - 1);
    let lower = BigRational::new(
        isqrt(&BigInt::from(2 * p_a - 2)) - BigInt::one(),
        pm1.clone(),
    );
    if p_a == 3 {
        return Ok(SeshadriBounds {
            upper: BoundValue::Exact(BigRational::one()),
            lower,
            quartic_exact: true,
        });
    }
    let radicand = BigRational::new(BigInt::from(2), pm1);
    Ok(SeshadriBounds {
        upper: BoundValue::sqrt_of(radicand),
        lower,
        quartic_exact: false,
    })
}

/// Largest admissible `k` for an integral class `Y − k·P1_Delta`:
/// `(p_a+4)/4`. Requires `p_a >= 2`.
pub fn thm_eff_bound(p_a: i64) -> Result<BigRational> {
    if p_a < 2 {
        return Err(Error::Precondition(format!(
            "integral-class bound requires p_a >= 2, got {p_a}"
        )));
    }
    Ok(BigRational::new(BigInt::from(p_a + 4), BigInt::from(4)))
}

#[derive(Debug, Clone)]
pub struct SlopeBoundReport {
    pub p_a: i64,
    pub seshadri_sqrt: BoundValue,
    pub seshadri_floor_lower: BigRational,
    pub hep: Option<BigRational>,
    /// `1/2` for `p_a >= 4`: the genus-3 family bound.
    pub genus3: Option<BigRational>,
    pub thm_eff_k_max: BigRational,
    /// `2/(2n−9)` when the degree matches the plane family.
    pub family_n: Option<BigRational>,
    /// `1/d` when the degree matches the ruled family.
    pub family_d: Option<BigRational>,
    /// Ordering facts asserted by the construction, each with its truth.
    pub comparisons: Vec<(String, bool)>,
}

/// Assembles every applicable slope bound at `p_a`, with the family bounds
/// when the matching parameter is supplied, and the exact ordering facts
/// between them.
pub fn compare_bounds(p_a: i64, n: Option<i64>, d: Option<i64>) -> Result<SlopeBoundReport> {
    if let Some(n) = n {
        if n < 6 {
            return Err(Error::Precondition(format!(
                "plane family requires n >= 6, got {n}"
            )));
        }
        if p_a != n * n - 9 * n + 20 {
            return Err(Error::Precondition(format!(
                "inconsistent (p_a, n): expected p_a = n^2-9n+20 = {}, got {p_a}",
                n * n - 9 * n + 20
            )));
        }
    }
    if let Some(d) = d {
        if d < 2 {
            return Err(Error::Precondition(format!(
                "ruled family requires d >= 2, got {d}"
            )));
        }
        if p_a != d * d {
            return Err(Error::Precondition(format!(
                "inconsistent (p_a, d): expected p_a = d^2 = {}, got {p_a}",
                d * d
            )));
        }
    }
    let ses = seshadri_bounds(p_a)?;
    let hep = hep_bound(p_a).ok();
    let genus3 = if p_a >= 4 {
        Some(BigRational::new(BigInt::one(), BigInt::from(2)))
    } else {
        None
    };
    let family_n = n.map(|n| BigRational::new(BigInt::from(2), BigInt::from(2 * n - 9)));
    let family_d = d.map(|d| BigRational::new(BigInt::one(), BigInt::from(d)));

    let mut comparisons = Vec::new();
    if let Some(f) = &family_n {
        comparisons.push((
            "family_n < seshadri_sqrt".into(),
            ses.upper.cmp_rational(f) == Ordering::Greater,
        ));
    }
    if let Some(f) = &family_d {
        comparisons.push((
            "family_d < seshadri_sqrt".into(),
            ses.upper.cmp_rational(f) == Ordering::Greater,
        ));
    }
    if let (Some(h), Some(g3)) = (&hep, &genus3) {
        comparisons.push(("hep <= genus3".into(), h <= g3));
    }
    if let Some(g3) = &genus3 {
        if p_a >= 11 {
            // for large genus the universal genus-3 bound beats the Seshadri
            // square root: 1/4 > 2/(p_a-1) iff p_a > 9
            comparisons.push((
                "genus3 < seshadri_sqrt".into(),
                ses.upper.cmp_rational(g3) == Ordering::Greater,
            ));
        }
    }

    Ok(SlopeBoundReport {
        p_a,
        seshadri_sqrt: ses.upper,
        seshadri_floor_lower: ses.lower,
        hep,
        genus3,
        thm_eff_k_max: thm_eff_bound(p_a)?,
        family_n,
        family_d,
        comparisons,
    })
}

/// Number of markings of `delta` nodes on a curve with `delta + t` nodes:
/// the binomial coefficient `C(delta + t, delta)`.
pub fn marking_count(delta: u64, t: u64) -> BigInt {
    let n = delta + t;
    let k = delta.min(t);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn rho_examples() {
        // rho(g, 1, 2) = 2 - g
        for g in 0..20 {
            assert_eq!(rho(g, 1, 2), BigInt::from(2 - g));
        }
        assert_eq!(rho(4, 1, 3), BigInt::zero());
        // direct substitution at g = 0
        assert_eq!(rho(0, 2, 5), BigInt::from(-(3 * (0 - 5 + 2))));
    }

    #[test]
    fn rho_sing_examples() {
        // boundary case g = (p_a+2)/2 at p_a = 4: rho_sing = 0, not triggered
        let rep = rho_sing(4, 1, 2, 3).unwrap();
        assert_eq!(rep.rho, BigInt::from(-1));
        assert_eq!(rep.rho_sing, BigInt::zero());
        assert!(!rep.nonexistence_triggered);
        // plane family numeric spot: n = 7 -> rho_sing = 0
        let rep = rho_sing(7 * 7 - 63 + 20, 1, 2, 2 * 7 - 10).unwrap();
        assert_eq!(rep.rho_sing, BigInt::from(7 * (7 - 13) + 42));
        // ruled family: d = 5 -> 9
        let rep = rho_sing(25, 1, 2, 9).unwrap();
        assert_eq!(rep.rho_sing, BigInt::from(9));
        // g out of range
        assert!(rho_sing(4, 1, 2, 5).is_err());
    }

    #[test]
    fn rho_sing_equivalence_degree_two() {
        // rho_sing(p_a,1,2,g) < 0  iff  g > (p_a+2)/2, exhaustively
        for p_a in 2..=60i64 {
            for g in 2..=p_a {
                let rep = rho_sing(p_a, 1, 2, g).unwrap();
                assert_eq!(rep.nonexistence_triggered, 2 * g > p_a + 2);
            }
        }
    }

    #[test]
    fn rho_sing_symbolic_identities() {
        let one = Scalar::one();
        let two = Scalar::from_int(2);
        // plane family: rho_sing(n²-9n+20, 1, 2, 2n-10) = n² - 13n + 42
        let pa = Scalar::poly_i64("n", &[20, -9, 1]);
        let g = Scalar::poly_i64("n", &[-10, 2]);
        let got = rho_sing_scalar(&pa, &one, &two, &g);
        assert_eq!(got, Scalar::poly_i64("n", &[42, -13, 1]));
        // ruled family: rho_sing(d², 1, 2, 2d-1) = d² - 4d + 4
        let pa = Scalar::poly_i64("d", &[0, 0, 1]);
        let g = Scalar::poly_i64("d", &[-1, 2]);
        let got = rho_sing_scalar(&pa, &one, &two, &g);
        assert_eq!(got, Scalar::poly_i64("d", &[4, -4, 1]));
        // conic family: rho_sing(4n²-36n+77, 1, 2, 4n-19) = 4n² - 44n + 117
        let pa = Scalar::poly_i64("n", &[77, -36, 4]);
        let g = Scalar::poly_i64("n", &[-19, 4]);
        let got = rho_sing_scalar(&pa, &one, &two, &g);
        assert_eq!(got, Scalar::poly_i64("n", &[117, -44, 4]));
    }

    #[test]
    fn hep_examples() {
        assert_eq!(hep_range(6), Some((3, 4)));
        assert_eq!(hep_bound(6).unwrap(), rat(2, 5));
        assert_eq!(hep_range(4), Some((3, 3)));
        assert_eq!(hep_bound(4).unwrap(), rat(1, 2));
        assert_eq!(hep_bound(5).unwrap(), rat(1, 2));
        assert_eq!(hep_range(3), None);
        assert!(hep_bound(3).is_err());
        // hep <= 1/2 for all p_a >= 4
        for p_a in 4..=200 {
            assert!(hep_bound(p_a).unwrap() <= rat(1, 2));
        }
    }

    #[test]
    fn seshadri_examples() {
        // quartic: exact upper bound 1
        let b = seshadri_bounds(3).unwrap();
        assert_eq!(b.upper, BoundValue::Exact(rat(1, 1)));
        assert!(b.quartic_exact);
        // p_a = 2: radicand 2
        let b = seshadri_bounds(2).unwrap();
        assert_eq!(b.upper, BoundValue::Sqrt { radicand: rat(2, 1) });
        // p_a = 51: lower = 9/50
        let b = seshadri_bounds(51).unwrap();
        assert_eq!(b.lower, rat(9, 50));
        // perfect-square radicand simplifies: p_a = 9 -> sqrt(1/4) = 1/2
        let b = seshadri_bounds(9).unwrap();
        assert_eq!(b.upper, BoundValue::Exact(rat(1, 2)));
    }

    #[test]
    fn exact_surd_comparison() {
        // 2/3 < sqrt(2): squared comparison, no floats
        let s = BoundValue::Sqrt { radicand: rat(2, 1) };
        assert_eq!(s.cmp_rational(&rat(2, 3)), Ordering::Greater);
        assert_eq!(s.cmp_rational(&rat(3, 2)), Ordering::Less);
        assert_eq!(
            BoundValue::Sqrt { radicand: rat(1, 4) }.cmp_rational(&rat(1, 2)),
            Ordering::Equal
        );
        assert_eq!(s.cmp_rational(&rat(-1, 1)), Ordering::Greater);
        assert_eq!(s.decimal(6), "1.414214");
    }

    #[test]
    fn thm_eff_examples() {
        assert_eq!(thm_eff_bound(4).unwrap(), rat(2, 1));
        assert_eq!(thm_eff_bound(2).unwrap(), rat(3, 2));
        // genus-3 class has k = 2 <= (p_a+4)/4 for p_a >= 4
        for p_a in 4..=60 {
            assert!(rat(2, 1) <= thm_eff_bound(p_a).unwrap());
        }
    }

    #[test]
    fn compare_bounds_examples() {
        // n = 6: p_a = 2, family bound 2/3, boundary case without hep/genus3
        let rep = compare_bounds(2, Some(6), None).unwrap();
        assert_eq!(rep.family_n, Some(rat(2, 3)));
        assert!(rep.hep.is_none());
        assert!(rep.genus3.is_none());
        assert!(rep.comparisons.iter().all(|(_, ok)| *ok));
        // d = 3: p_a = 9, family 1/3 < seshadri upper 1/2
        let rep = compare_bounds(9, None, Some(3)).unwrap();
        assert_eq!(rep.family_d, Some(rat(1, 3)));
        assert_eq!(rep.seshadri_sqrt, BoundValue::Exact(rat(1, 2)));
        assert!(rep.comparisons.iter().all(|(_, ok)| *ok));
        // inconsistent parameters rejected
        assert!(compare_bounds(10, Some(6), None).is_err());
        assert!(compare_bounds(10, None, Some(3)).is_err());
    }

    #[test]
    fn marking_count_examples() {
        assert_eq!(marking_count(2, 1), BigInt::from(3));
        assert_eq!(marking_count(0, 5), BigInt::one());
        assert_eq!(marking_count(3, 2), BigInt::from(10));
    }
}
