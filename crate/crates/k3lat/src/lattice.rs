//! Picard lattices: symmetric bilinear forms with exact scalar entries,
//! divisor classes over them, pairings, signatures, evaluation.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{parse_scalar, Scalar};

/// Sylvester signature `(n_plus, n_minus, n_zero)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_hyperbolic(&self, rank: usize) -> bool {
        self.plus == 1 && self.zero == 0 && self.minus + 1 == rank
    }

    pub fn is_negative_definite(&self, rank: usize) -> bool {
        self.plus == 0 && self.zero == 0 && self.minus == rank
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.plus, self.minus, self.zero)
    }
}

/// A lattice presented by a symmetric Gram matrix over exact scalars, with
/// named basis elements and at most one formal parameter.
#[derive(Debug)]
pub struct PicardLattice {
    rank: usize,
    gram: Vec<Vec<Scalar>>,
    basis_names: Vec<String>,
    parameter: Option<String>,
    signature_cache: OnceLock<Signature>,
}

impl PartialEq for PicardLattice {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.basis_names == other.basis_names
            && self.parameter == other.parameter
            && self.gram == other.gram
    }
}
impl Eq for PicardLattice {}

impl PicardLattice {
    pub fn new(
        basis_names: Vec<String>,
        gram: Vec<Vec<Scalar>>,
        parameter: Option<String>,
    ) -> Result<Arc<Self>> {
        let rank = basis_names.len();
        if rank == 0 {
            return Err(Error::InvalidLattice("rank must be positive".into()));
        }
        if gram.len() != rank || gram.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidLattice(format!(
                "gram must be {rank}x{rank}"
            )));
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!(
                        "gram is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        for (i, name) in basis_names.iter().enumerate() {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidLattice(format!("bad basis name `{name}`")));
            }
            if basis_names[..i].contains(name) {
                return Err(Error::InvalidLattice(format!(
                    "duplicate basis name `{name}`"
                )));
            }
        }
        for row in &gram {
            for entry in row {
                if let Some(var) = entry.parameter_name() {
                    match &parameter {
                        Some(p) if p == var => {}
                        Some(p) => {
                            return Err(Error::InvalidLattice(format!(
                                "gram entry uses variable `{var}` but the lattice parameter is `{p}`"
                            )))
                        }
                        None => {
                            return Err(Error::InvalidLattice(format!(
                                "gram entry uses variable `{var}` but no parameter is declared"
                            )))
                        }
                    }
                }
            }
        }
        Ok(Arc::new(PicardLattice {
            rank,
            gram,
            basis_names,
            parameter,
            signature_cache: OnceLock::new(),
        }))
    }

    /// Convenience constructor for integer Gram matrices.
    pub fn from_int_gram(names: &[&str], gram: &[&[i64]]) -> Result<Arc<Self>> {
        let g = gram
            .iter()
            .map(|row| row.iter().map(|&e| Scalar::from_int(e)).collect())
            .collect();
        Self::new(names.iter().map(|s| s.to_string()).collect(), g, None)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<Scalar>] {
        &self.gram
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn parameter(&self) -> Option<&str> {
        self.parameter.as_deref()
    }

    pub fn is_rational(&self) -> bool {
        self.gram.iter().flatten().all(Scalar::is_rational)
    }

    /// Gram matrix as rationals; errors if any entry is polynomial.
    pub fn rational_gram(&self) -> Result<Vec<Vec<BigRational>>> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.as_rational().cloned().ok_or(Error::PolynomialEntries {
                            context: "Gram matrix has symbolic entries".into(),
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact Sylvester signature; cached. Errors on polynomial entries.
    pub fn signature(&self) -> Result<Signature> {
        if let Some(sig) = self.signature_cache.get() {
            return Ok(*sig);
        }
        let gram = self.rational_gram()?;
        let sig = sylvester_signature(gram);
        Ok(*self.signature_cache.get_or_init(|| sig))
    }

    /// Determinant of the Gram matrix (cofactor expansion; exact, works for
    /// polynomial entries).
    pub fn determinant(&self) -> Scalar {
        determinant(&self.gram)
    }

    /// Substitutes a value for the formal parameter everywhere.
    pub fn evaluate(self: &Arc<Self>, value: &BigRational) -> Arc<Self> {
        if self.parameter.is_none() {
            return Arc::clone(self);
        }
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(value)).collect())
            .collect();
        Arc::new(PicardLattice {
            rank: self.rank,
            gram,
            basis_names: self.basis_names.clone(),
            parameter: None,
            signature_cache: OnceLock::new(),
        })
    }

    pub fn class(self: &Arc<Self>, coords: Vec<Scalar>) -> Result<DivisorClass> {
        if coords.len() != self.rank {
            return Err(Error::CoordinateLength {
                expected: self.rank,
                got: coords.len(),
            });
        }
        for c in &coords {
            if let Some(var) = c.parameter_name() {
                if self.parameter.as_deref() != Some(var) {
                    return Err(Error::Parse {
                        what: "class".into(),
                        detail: format!("coordinate uses variable `{var}`"),
                    });
                }
            }
        }
        Ok(DivisorClass {
            lattice: Arc::clone(self),
            coords,
        })
    }

    pub fn class_from_int(self: &Arc<Self>, coords: &[i64]) -> Result<DivisorClass> {
        self.class(coords.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn zero_class(self: &Arc<Self>) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(self),
            coords: vec![Scalar::zero(); self.rank],
        }
    }

    pub fn basis_class(self: &Arc<Self>, index: usize) -> Result<DivisorClass> {
        if index >= self.rank {
            return Err(Error::Precondition(format!(
                "basis index {index} out of range for rank {}",
                self.rank
            )));
        }
        let mut coords = vec![Scalar::zero(); self.rank];
        coords[index] = Scalar::one();
        Ok(DivisorClass {
            lattice: Arc::clone(self),
            coords,
        })
    }

    /// Parses a linear combination of basis classes, e.g. `2F - 3e`,
    /// `(n-3)*G - F`, `H - 3/2*e`, or a bare coordinate tuple `1,0,-2`.
    pub fn class_from_expr(self: &Arc<Self>, expr: &str) -> Result<DivisorClass> {
        let s = expr.trim();
        if s.contains(',') {
            let coords = s
                .split(',')
                .map(|t| parse_scalar(t.trim(), self.parameter()))
                .collect::<Result<Vec<_>>>()?;
            return self.class(coords);
        }
        let mut coords = vec![Scalar::zero(); self.rank];
        for (sign, term) in split_signed_terms(s)? {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse {
                    what: "class expression".into(),
                    detail: format!("dangling sign in `{s}`"),
                });
            }
            // term = [coeff *] NAME or [numeric coeff] NAME; polynomial
            // coefficients must be parenthesized and use `*`.
            let (coeff_str, name) = match term.rfind('*') {
                Some(p) => (term[..p].trim(), term[p + 1..].trim()),
                None => match term.find(|c: char| c.is_ascii_alphabetic()) {
                    Some(0) => ("1", term),
                    Some(p) => (term[..p].trim(), term[p..].trim()),
                    None => {
                        return Err(Error::Parse {
                            what: "class expression".into(),
                            detail: format!("term `{term}` names no basis class"),
                        })
                    }
                },
            };
            let idx = self
                .basis_names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse {
                    what: "class expression".into(),
                    detail: format!("unknown basis class `{name}`"),
                })?;
            let raw = coeff_str
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .unwrap_or(coeff_str);
            let mut coeff = parse_scalar(raw, self.parameter())?;
            if sign < 0 {
                coeff = -coeff;
            }
            coords[idx] = &coords[idx] + &coeff;
        }
        self.class(coords)
    }

    fn pair_raw(&self, v: &[Scalar], w: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.rank {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if w[j].is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                acc = &acc + &(&(&v[i] * &self.gram[i][j]) * &w[j]);
            }
        }
        acc
    }
}

/// Splits `a + b - c` into signed top-level terms, respecting parentheses.
fn split_signed_terms(s: &str) -> Result<Vec<(i32, String)>> {
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse {
            what: "expression".into(),
            detail: "empty string".into(),
        });
    }
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1i32;
    let mut start = 0usize;
    let mut i = 0usize;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign = if bytes[0] == b'-' { -1 } else { 1 };
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start => {
                terms.push((sign, s[start..i].to_string()));
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(Error::Parse {
            what: "expression".into(),
            detail: format!("unbalanced parentheses in `{s}`"),
        });
    }
    terms.push((sign, s[start..].to_string()));
    Ok(terms)
}

/// A divisor class: coordinates over the basis of its owning lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    lattice: Arc<PicardLattice>,
    coords: Vec<Scalar>,
}

impl DivisorClass {
    pub fn lattice(&self) -> &Arc<PicardLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn same_lattice(&self, other: &DivisorClass) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        if !self.same_lattice(other) {
            return Err(Error::LatticeMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coords,
        })
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.checked_add(&other.negated())
    }

    pub fn negated(&self) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scaled(&self, k: &Scalar) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// True when every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.coords
            .iter()
            .all(|c| matches!(c.as_rational(), Some(r) if r.denom().is_one()))
    }

    /// True when every doubled coordinate is an integer (half-integer classes
    /// on the extended lattice).
    pub fn is_half_integral(&self) -> bool {
        let two = Scalar::from_int(2);
        self.coords
            .iter()
            .all(|c| matches!((c * &two).as_rational(), Some(r) if r.denom().is_one()))
    }

    pub fn evaluate(&self, value: &BigRational) -> DivisorClass {
        DivisorClass {
            lattice: self.lattice.evaluate(value),
            coords: self.coords.iter().map(|c| c.evaluate(value)).collect(),
        }
    }

    /// Rational coordinates; errors if any coordinate is polynomial.
    pub fn rational_coords(&self) -> Result<Vec<BigRational>> {
        self.coords
            .iter()
            .map(|c| {
                c.as_rational().cloned().ok_or(Error::PolynomialEntries {
                    context: "class has symbolic coordinates".into(),
                })
            })
            .collect()
    }

    /// Renders the class as a combination of named basis classes,
    /// e.g. `H - 2*e` or `(-2)*F + (2*n - 6)*G`.
    pub fn to_expr(&self) -> String {
        let names = self.lattice.basis_names();
        let mut out = String::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c.as_rational() {
                Some(r) => (r.is_negative(), Scalar::from_rational(r.abs())),
                None => (false, c.clone()),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let is_unit = mag == Scalar::one();
            if is_unit {
                out.push_str(&names[i]);
            } else if mag.is_rational() {
                out.push_str(&format!("{}*{}", mag, names[i]));
            } else {
                out.push_str(&format!("({})*{}", mag, names[i]));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The bilinear pairing `v^T · gram · w`; exact. Errors on lattice mismatch.
pub fn pair(v: &DivisorClass, w: &DivisorClass) -> Result<Scalar> {
    if !v.same_lattice(w) {
        return Err(Error::LatticeMismatch);
    }
    Ok(v.lattice.pair_raw(&v.coords, &w.coords))
}

/// `square(v) = pair(v, v)`.
pub fn square(v: &DivisorClass) -> Scalar {
    v.lattice.pair_raw(&v.coords, &v.coords)
}

/// Exact Sylvester signature by symmetric Gaussian elimination with
/// symmetric pivot swaps. A block with all-zero diagonal is opened up by the
/// congruence v_i <- v_i + v_j, which exposes a nonzero diagonal entry and
/// yields the (+1, -1) pair of the hyperbolic plane.
pub fn sylvester_signature(mut m: Vec<Vec<BigRational>>) -> Signature {
    let n = m.len();
    let mut plus = 0usize;
    let mut minus = 0usize;
    let mut zero = 0usize;
    let mut k = 0usize;
    while k < n {
        // prefer a nonzero diagonal pivot
        let pivot = (k..n).find(|&i| !m[i][i].is_zero());
        if let Some(p) = pivot {
            if p != k {
                m.swap(p, k);
                for row in m.iter_mut() {
                    row.swap(p, k);
                }
            }
            let d = m[k][k].clone();
            if d.is_positive() {
                plus += 1;
            } else {
                minus += 1;
            }
            for i in (k + 1)..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let f = &m[i][k] / &d;
                for j in k..n {
                    let upd = &m[k][j] * &f;
                    m[i][j] -= upd;
                }
            }
            // mirror the elimination onto the columns to keep symmetry
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    m[j][i] = m[i][j].clone();
                }
                m[i][k] = BigRational::zero();
                m[k][i] = BigRational::zero();
            }
            k += 1;
        } else {
            // all diagonal entries vanish; look for an off-diagonal entry
            let mut found = None;
            'outer: for i in k..n {
                for j in (i + 1)..n {
                    if !m[i][j].is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            match found {
                Some((i, j)) => {
                    // v_i <- v_i + v_j makes m[i][i] = 2 m[i][j] != 0
                    for col in 0..n {
                        let add = m[j][col].clone();
                        m[i][col] += add;
                    }
                    for row in 0..n {
                        let add = m[row][j].clone();
                        m[row][i] += add;
                    }
                }
                None => {
                    zero += n - k;
                    break;
                }
            }
        }
    }
    Signature { plus, minus, zero }
}

fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    match n {
        0 => Scalar::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut det = Scalar::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Scalar>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &determinant(&minor);
                if col % 2 == 0 {
                    det = &det + &term;
                } else {
                    det = &det - &term;
                }
            }
            det
        }
    }
}
