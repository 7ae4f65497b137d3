//! The Beauville–Bogomolov lattice of the Hilbert square, curve/divisor
//! duality, class and slope formulas for rational curves, and the quartic
//! involution.
//!
//! The extension adds one basis class `e` orthogonal to the base lattice,
//! with `q(e) = -2`; the exceptional divisor is `2e`. Half-integer
//! coordinates are first-class: integrality of `2w` is what the geometry
//! guarantees, not integrality of `w`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{pair, square, DivisorClass, PicardLattice};
use crate::scalar::Scalar;

pub const EXCEPTIONAL_NAME: &str = "e";

#[derive(Debug, Clone)]
pub struct HilbertSquareLattice {
    base: Arc<PicardLattice>,
    extended: Arc<PicardLattice>,
}

/// Builds the rank+1 lattice `Pic(S) ⊕ Z e` with `e` orthogonal to the base
/// and `q(e) = -2`.
pub fn extend(pic: &Arc<PicardLattice>) -> Result<HilbertSquareLattice> {
    if pic.basis_names().iter().any(|n| n == EXCEPTIONAL_NAME) {
        return Err(Error::InvalidLattice(format!(
            "base lattice already has a class named `{EXCEPTIONAL_NAME}`"
        )));
    }
    let rank = pic.rank();
    let mut names: Vec<String> = pic.basis_names().to_vec();
    names.push(EXCEPTIONAL_NAME.to_string());
    let mut gram = vec![vec![Scalar::zero(); rank + 1]; rank + 1];
    for i in 0..rank {
        for j in 0..rank {
            gram[i][j] = pic.gram()[i][j].clone();
        }
    }
    gram[rank][rank] = Scalar::from_int(-2);
    let extended = PicardLattice::new(names, gram, pic.parameter().map(str::to_string))?;
    Ok(HilbertSquareLattice {
        base: Arc::clone(pic),
        extended,
    })
}

impl HilbertSquareLattice {
    pub fn base(&self) -> &Arc<PicardLattice> {
        &self.base
    }

    pub fn extended(&self) -> &Arc<PicardLattice> {
        &self.extended
    }

    /// The exceptional half-class `e`.
    pub fn exceptional(&self) -> DivisorClass {
        self.extended
            .basis_class(self.base.rank())
            .expect("last basis class exists")
    }

    /// A base divisor class viewed on the extended lattice.
    pub fn embed(&self, d: &DivisorClass) -> Result<DivisorClass> {
        if d.lattice() != &self.base {
            return Err(Error::LatticeMismatch);
        }
        let mut coords = d.coords().to_vec();
        coords.push(Scalar::zero());
        self.extended.class(coords)
    }

    /// Solves `gram · coords = pairings` exactly: the unique rational class
    /// `w` with `q(w, b_i) = pairings[i]` for every basis class.
    pub fn dual_divisor_class(&self, pairings: &[BigRational]) -> Result<DivisorClass> {
        dual_class_on(&self.extended, pairings)
    }
}

/// Solves `gram · x = pairings` on any lattice with rational entries.
pub fn dual_class_on(
    lattice: &Arc<PicardLattice>,
    pairings: &[BigRational],
) -> Result<DivisorClass> {
    let rank = lattice.rank();
    if pairings.len() != rank {
        return Err(Error::CoordinateLength {
            expected: rank,
            got: pairings.len(),
        });
    }
    let gram = lattice.rational_gram()?;
    // Gaussian elimination with exact pivots.
    let mut aug: Vec<Vec<BigRational>> = (0..rank)
        .map(|i| {
            let mut row = gram[i].clone();
            row.push(pairings[i].clone());
            row
        })
        .collect();
    for col in 0..rank {
        let Some(p) = (col..rank).find(|&i| !aug[i][col].is_zero()) else {
            return Err(Error::Internal(
                "degenerate Gram matrix in duality solve".into(),
            ));
        };
        aug.swap(col, p);
        let inv = aug[col][col].clone();
        for e in aug[col][col..].iter_mut() {
            *e = &*e / &inv;
        }
        for i in 0..rank {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in col..=rank {
                    let upd = &f * &aug[col][j];
                    aug[i][j] -= upd;
                }
            }
        }
    }
    let coords = (0..rank)
        .map(|i| Scalar::from_rational(aug[i][rank].clone()))
        .collect();
    lattice.class(coords)
}

/// A curve class `aY - b·P1_Delta` in the Picard-rank-1 presentation, with
/// the arithmetic genus of the generating polarization attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    /// Coefficient of Y.
    pub a: BigRational,
    /// Subtracted coefficient of the exceptional ruling class, so the curve
    /// is `aY - b·P1_Delta` when `b > 0`.
    pub b: BigRational,
    /// Arithmetic genus of the polarization H (>= 2).
    pub p_a: i64,
}

impl CurveClass {
    pub fn new(a: BigRational, b: BigRational, p_a: i64) -> Result<Self> {
        if p_a < 2 {
            return Err(Error::Precondition(format!(
                "curve classes require p_a >= 2, got {p_a}"
            )));
        }
        Ok(CurveClass { a, b, p_a })
    }

    /// Pairings against (H, e): `(a(2p_a - 2), 2b)`.
    pub fn pairings(&self) -> (BigRational, BigRational) {
        let deg = &self.a * BigRational::from(BigInt::from(2 * self.p_a - 2));
        let with_e = &self.b * BigRational::from(BigInt::from(2));
        (deg, with_e)
    }

    pub fn to_expr(&self) -> String {
        let a = Scalar::from_rational(self.a.clone());
        let b = Scalar::from_rational(self.b.clone());
        let lead = if a == Scalar::one() {
            "Y".to_string()
        } else {
            format!("{a}*Y")
        };
        if self.b.is_zero() {
            lead
        } else if self.b.is_negative() {
            let nb = -&b;
            if nb == Scalar::one() {
                format!("{lead} + P1_Delta")
            } else {
                format!("{lead} + {nb}*P1_Delta")
            }
        } else if b == Scalar::one() {
            format!("{lead} - P1_Delta")
        } else {
            format!("{lead} - {b}*P1_Delta")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Finite(BigRational),
    Infinite,
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{}", Scalar::from_rational(r.clone())),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

/// `a/b` when `b > 0`; infinite when `b <= 0` (the class does not approach
/// the exceptional boundary). Requires `a > 0`.
pub fn slope(x: &CurveClass) -> Result<Slope> {
    if !x.a.is_positive() {
        return Err(Error::Precondition(format!(
            "slope requires a > 0, got a = {}",
            x.a
        )));
    }
    if x.b.is_positive() {
        Ok(Slope::Finite(&x.a / &x.b))
    } else {
        Ok(Slope::Infinite)
    }
}

/// The class of the rational curve attached to a curve in `|mH|` whose
/// minimal partial desingularization carrying the degree-2 pencil has
/// arithmetic genus `g0`: `(mY - ((g0+1)/2) P1_Delta, mH - ((g0+1)/2) e)`.
pub fn rational_curve_class(
    m: i64,
    g0: i64,
    p_a: i64,
) -> Result<(CurveClass, DivisorClass)> {
    if m < 1 {
        return Err(Error::Precondition(format!("m must be >= 1, got {m}")));
    }
    if g0 < 0 {
        return Err(Error::Precondition(format!("g0 must be >= 0, got {g0}")));
    }
    let b = BigRational::new(BigInt::from(g0 + 1), BigInt::from(2));
    let curve = CurveClass::new(BigRational::from(BigInt::from(m)), b.clone(), p_a)?;
    let base = rank_one_polarization(p_a)?;
    let hilb = extend(&base)?;
    let h = hilb.embed(&base.basis_class(0)?)?;
    let e = hilb.exceptional();
    let w = h
        .scaled(&Scalar::from_int(m))
        .checked_sub(&e.scaled(&Scalar::from_rational(b)))?;
    Ok((curve, w))
}

/// The rank-1 lattice `ZH` with `H² = 2 p_a - 2`.
pub fn rank_one_polarization(p_a: i64) -> Result<Arc<PicardLattice>> {
    if p_a < 2 {
        return Err(Error::Precondition(format!(
            "polarization genus must be >= 2, got {p_a}"
        )));
    }
    PicardLattice::from_int_gram(&["H"], &[&[2 * p_a - 2]])
}

/// `q(R_C) = 2m²(p_a − 1) − (g0+1)²/2`, exactly.
pub fn q_of_curve(m: i64, g0: i64, p_a: i64) -> BigRational {
    let m = BigRational::from(BigInt::from(m));
    let t = BigRational::from(BigInt::from(g0 + 1));
    BigRational::from(BigInt::from(2 * (p_a - 1))) * &m * &m
        - &t * &t / BigRational::from(BigInt::from(2))
}

/// Symbolic version of the square formula, closed under the scalar ring.
pub fn q_of_curve_scalar(m: &Scalar, g0: &Scalar, p_a: &Scalar) -> Scalar {
    let two = Scalar::from_int(2);
    let one = Scalar::one();
    let half = Scalar::from_ratio(1, 2);
    let t = g0 + &one;
    &(&(&two * &(p_a - &one)) * &(m * m)) - &(&half * &(&t * &t))
}

/// The involution induced on cohomology by the quartic construction:
/// `v ↦ q(G - e, v)·(G - e) - v`. Requires `q(G) = 4` and `G` supported on
/// the base lattice. An isometric involution; exact on symbolic lattices.
pub fn quartic_involution(v: &DivisorClass, g: &DivisorClass) -> Result<DivisorClass> {
    if !v.same_lattice(g) {
        return Err(Error::LatticeMismatch);
    }
    let gsq = square(g);
    if gsq != Scalar::from_int(4) {
        return Err(Error::Precondition(format!(
            "involution requires q(G) = 4, got {gsq}"
        )));
    }
    let rank = g.lattice().rank();
    if g.lattice().basis_names()[rank - 1] != EXCEPTIONAL_NAME
        || !g.coords()[rank - 1].is_zero()
    {
        return Err(Error::Precondition(
            "involution pivot must be a base-lattice class on the extended lattice".into(),
        ));
    }
    let e = g.lattice().basis_class(rank - 1)?;
    let axis = g.checked_sub(&e)?;
    let c = pair(&axis, v)?;
    axis.scaled(&c).checked_sub(v)
}

/// `g0 = X·e − 1` for a curve class with `X·e >= 1`.
pub fn g0_from_intersection(x_dot_e: i64) -> Result<i64> {
    if x_dot_e < 1 {
        return Err(Error::Precondition(format!(
            "X·e must be >= 1, got {x_dot_e}"
        )));
    }
    Ok(x_dot_e - 1)
}

/// `g0 = mult − 1` for point-type classes (the curve acquires the pencil
/// from a point of multiplicity `mult`).
pub fn g0_from_multiplicity(mult: i64) -> Result<i64> {
    if mult < 1 {
        return Err(Error::Precondition(format!(
            "multiplicity must be >= 1, got {mult}"
        )));
    }
    Ok(mult - 1)
}
