//! Exact scalars: rationals, or univariate polynomials with rational
//! coefficients in one formal parameter.
//!
//! A polynomial scalar is kept canonical (no trailing zero coefficients) and
//! collapses to the rational variant when its degree drops to zero, so
//! structural equality is semantic equality. Arithmetic (+, −, ×) is closed
//! and exact; there is no division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Poly(Poly),
}

/// Dense univariate polynomial, degree >= 1, leading coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    var: String,
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from(BigInt::from(n)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    /// The monomial `var`.
    pub fn parameter(var: &str) -> Self {
        Scalar::Poly(Poly {
            var: var.to_string(),
            coeffs: vec![BigRational::zero(), BigRational::one()],
        })
    }

    /// Polynomial from ascending coefficients; normalizes to canonical form.
    pub fn poly(var: &str, coeffs: Vec<BigRational>) -> Self {
        normalize(var, coeffs)
    }

    pub fn poly_i64(var: &str, coeffs: &[i64]) -> Self {
        normalize(
            var,
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Poly(_) => None,
        }
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        self.as_rational()
            .cloned()
            .ok_or_else(|| Error::PolynomialEntries {
                context: "a rational value is required here".into(),
            })
    }

    /// The formal parameter, if this scalar is a polynomial.
    pub fn parameter_name(&self) -> Option<&str> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Poly(p) => Some(&p.var),
        }
    }

    /// Substitutes `value` for the formal parameter; rationals are unchanged.
    pub fn evaluate(&self, value: &BigRational) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone()),
            Scalar::Poly(p) => {
                // Horner
                let mut acc = BigRational::zero();
                for c in p.coeffs.iter().rev() {
                    acc = acc * value + c;
                }
                Scalar::Rational(acc)
            }
        }
    }

}

fn normalize(var: &str, mut coeffs: Vec<BigRational>) -> Scalar {
    while coeffs.len() > 1 && coeffs.last().map(Zero::is_zero).unwrap_or(false) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        Scalar::Rational(coeffs.pop().unwrap_or_else(BigRational::zero))
    } else {
        Scalar::Poly(Poly {
            var: var.to_string(),
            coeffs,
        })
    }
}

fn common_var<'a>(a: &'a Scalar, b: &'a Scalar) -> Option<&'a str> {
    match (a.parameter_name(), b.parameter_name()) {
        (Some(x), Some(y)) => {
            assert!(
                x == y,
                "scalar arithmetic mixes two formal parameters: `{x}` and `{y}`"
            );
            Some(x)
        }
        (Some(x), None) => Some(x),
        (None, Some(y)) => Some(y),
        (None, None) => None,
    }
}

fn as_coeffs(s: &Scalar) -> Vec<BigRational> {
    match s {
        Scalar::Rational(r) => vec![r.clone()],
        Scalar::Poly(p) => p.coeffs.clone(),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let var = common_var(self, rhs).unwrap().to_string();
                let (a, b) = (as_coeffs(self), as_coeffs(rhs));
                let n = a.len().max(b.len());
                let mut out = vec![BigRational::zero(); n];
                for (i, c) in a.into_iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in b.into_iter().enumerate() {
                    out[i] += c;
                }
                normalize(&var, out)
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Poly(p) => Scalar::Poly(Poly {
                var: p.var.clone(),
                coeffs: p.coeffs.iter().map(|c| -c).collect(),
            }),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => {
                if self.is_zero() || rhs.is_zero() {
                    return Scalar::zero();
                }
                let var = common_var(self, rhs).unwrap().to_string();
                let (a, b) = (as_coeffs(self), as_coeffs(rhs));
                let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
                for (i, ca) in a.iter().enumerate() {
                    for (j, cb) in b.iter().enumerate() {
                        out[i + j] += ca * cb;
                    }
                }
                normalize(&var, out)
            }
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form. Rationals render as `p` or `p/q`; polynomials as
/// ascending nonzero terms `c`, `c*x`, `c*x^k` joined with explicit signs,
/// e.g. `38 - 18*n + 2*n^2`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Poly(p) => {
                let mut first = true;
                for (k, c) in p.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mag = fmt_rational(&c.abs());
                    if first {
                        if c.is_negative() {
                            write!(f, "-")?;
                        }
                        first = false;
                    } else if c.is_negative() {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    match k {
                        0 => write!(f, "{mag}")?,
                        1 => write!(f, "{}*{}", mag, p.var)?,
                        _ => write!(f, "{}*{}^{}", mag, p.var, k)?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parses the canonical scalar grammar.
///
/// Accepts integers and fractions (`-5/2`), and polynomial terms
/// `c`, `c*x`, `c*x^k` (also bare `x`, `x^k`, `-x`) joined by `+`/`-`.
/// When `allowed_var` is `None` any polynomial term is rejected; otherwise the
/// variable must match.
pub fn parse_scalar(input: &str, allowed_var: Option<&str>) -> Result<Scalar> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::Parse {
            what: "scalar".into(),
            detail: "empty string".into(),
        });
    }
    let err = |detail: String| Error::Parse {
        what: "scalar".into(),
        detail,
    };

    // Split into signed terms at top level.
    let bytes = s.as_bytes();
    let mut terms: Vec<(i32, &str)> = Vec::new();
    let mut sign = 1i32;
    let mut start = 0usize;
    let mut i = 0usize;
    // leading sign
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign = if bytes[0] == b'-' { -1 } else { 1 };
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && i > start {
            terms.push((sign, s[start..i].trim()));
            sign = if c == b'-' { -1 } else { 1 };
            start = i + 1;
        }
        i += 1;
    }
    terms.push((sign, s[start..].trim()));

    let mut acc = Scalar::zero();
    for (sgn, term) in terms {
        if term.is_empty() {
            return Err(err(format!("dangling sign in `{s}`")));
        }
        let (coeff_str, var_part) = match term.find('*') {
            Some(p) => (term[..p].trim(), Some(term[p + 1..].trim())),
            None => {
                // either a bare number or a bare variable power
                if term.chars().next().unwrap().is_ascii_alphabetic() {
                    ("1", Some(term))
                } else {
                    (term, None)
                }
            }
        };
        let coeff: BigRational = parse_ratio(coeff_str)
            .ok_or_else(|| err(format!("bad coefficient `{coeff_str}` in `{s}`")))?;
        let coeff = if sgn < 0 { -coeff } else { coeff };
        let term_scalar = match var_part {
            None => Scalar::Rational(coeff),
            Some(vp) => {
                let (var, pow) = match vp.find('^') {
                    Some(p) => {
                        let pow: usize = vp[p + 1..].trim().parse().map_err(|_| {
                            err(format!("bad exponent in `{vp}`"))
                        })?;
                        (vp[..p].trim(), pow)
                    }
                    None => (vp, 1usize),
                };
                if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err(format!("bad variable `{var}`")));
                }
                match allowed_var {
                    Some(av) if av == var => {}
                    Some(av) => {
                        return Err(err(format!(
                            "unknown variable `{var}` (lattice parameter is `{av}`)"
                        )))
                    }
                    None => {
                        return Err(err(format!(
                            "polynomial term `{term}` in a lattice with no parameter"
                        )))
                    }
                }
                let mut coeffs = vec![BigRational::zero(); pow + 1];
                coeffs[pow] = coeff;
                normalize(var, coeffs)
            }
        };
        acc = &acc + &term_scalar;
    }
    Ok(acc)
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.find('/') {
        Some(p) => {
            let num: BigInt = s[..p].trim().parse().ok()?;
            let den: BigInt = s[p + 1..].trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(BigRational::from(num))
        }
    }
}

/// Parses a plain rational (`p` or `p/q`).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    parse_ratio(s).ok_or_else(|| Error::Parse {
        what: "rational".into(),
        detail: format!("`{s}` is not `p` or `p/q`"),
    })
}
