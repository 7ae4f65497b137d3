//! Bounded enumeration of lattice classes with prescribed square and degree
//! constraints.
//!
//! The kernel enumerates integer points of a positive definite rational
//! quadratic form below a radius, with a rational shift, by recursive
//! interval slicing. All bounds are exact: interval endpoints come from
//! integer square roots plus rational predicates, never floats.
//!
//! `enumerate_classes` reduces a hyperbolic-lattice query to shifted
//! short-vector problems: for each pairing value k against a positive-square
//! pivot N, solutions live in the coset {Γ·N = k}, and their projections to
//! N^⊥ form a negative definite problem with square target
//! `square_target − k²/N²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ceil_shift_minus_sqrt, floor_shift_plus_sqrt};
use crate::lattice::{pair, square, DivisorClass};
use crate::scalar::Scalar;

/// Comparison relation for degree constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn holds(&self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }

    pub fn parse(s: &str) -> Result<Rel> {
        Ok(match s {
            "<" => Rel::Lt,
            "<=" => Rel::Le,
            "=" | "==" => Rel::Eq,
            ">=" => Rel::Ge,
            ">" => Rel::Gt,
            other => {
                return Err(Error::Parse {
                    what: "relation".into(),
                    detail: format!("`{other}` is not one of <, <=, =, >=, >"),
                })
            }
        })
    }
}

impl std::fmt::Display for Rel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DegreeConstraint {
    pub class: DivisorClass,
    pub rel: Rel,
    pub value: BigRational,
}

/// Pairing window against a fixed positive-square class: the Hodge-index
/// pivot that makes the query finite.
#[derive(Debug, Clone)]
pub struct DegreeWindow {
    pub positive_class: DivisorClass,
    pub lo: BigInt,
    pub hi: BigInt,
}

#[derive(Debug, Clone)]
pub struct ClassQuery {
    pub square_target: BigRational,
    pub constraints: Vec<DegreeConstraint>,
    pub window: DegreeWindow,
}

#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub solutions: Vec<DivisorClass>,
    pub complete: bool,
    pub completeness_note: String,
}

/// Positive definite form in completed-square shape:
/// `P(x) = Σ_i d_i (x_i + Σ_{j>i} u[i][j] x_j)^2`.
struct LdlForm {
    dim: usize,
    d: Vec<BigRational>,
    u: Vec<Vec<BigRational>>,
}

/// Quadratic completion of a symmetric positive definite rational matrix;
/// `None` when the matrix is not positive definite.
fn ldl_positive_definite(p: &[Vec<BigRational>]) -> Option<LdlForm> {
    let n = p.len();
    let mut a: Vec<Vec<BigRational>> = p.to_vec();
    let mut d = Vec::with_capacity(n);
    let mut u = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let di = a[i][i].clone();
        if !di.is_positive() {
            return None;
        }
        for j in (i + 1)..n {
            u[i][j] = &a[i][j] / &di;
        }
        for k in (i + 1)..n {
            for l in (i + 1)..n {
                let upd = &di * &u[i][k] * &u[i][l];
                a[k][l] -= upd;
            }
        }
        d.push(di);
    }
    Some(LdlForm { dim: n, d, u })
}

/// All integer vectors `y` with `rmin <= P(shift + y) <= rmax`, in the order
/// produced by the recursion (callers sort as needed).
fn enumerate_shifted(
    form: &LdlForm,
    shift: &[BigRational],
    rmin: &BigRational,
    rmax: &BigRational,
) -> Vec<Vec<BigInt>> {
    let n = form.dim;
    let mut out = Vec::new();
    if rmax.is_negative() {
        return out;
    }
    if n == 0 {
        if !rmin.is_positive() {
            out.push(Vec::new());
        }
        return out;
    }
    // w[i] = shift[i] + y[i], fixed from the last index down.
    let mut w = vec![BigRational::zero(); n];
    let mut y = vec![BigInt::zero(); n];

    fn recurse(
        form: &LdlForm,
        shift: &[BigRational],
        rmin: &BigRational,
        rmax: &BigRational,
        level: usize,
        acc: &BigRational,
        w: &mut [BigRational],
        y: &mut [BigInt],
        out: &mut Vec<Vec<BigInt>>,
    ) {
        let i = level;
        // sigma_i = sum_{j>i} u[i][j] w[j]
        let mut sigma = BigRational::zero();
        for j in (i + 1)..form.dim {
            if !form.u[i][j].is_zero() {
                sigma += &form.u[i][j] * &w[j];
            }
        }
        // d_i (w_i + sigma)^2 <= rmax - acc
        let budget = rmax - acc;
        if budget.is_negative() {
            return;
        }
        let rad = &budget / &form.d[i];
        let center = -(&sigma) - &shift[i];
        let lo = ceil_shift_minus_sqrt(&center, &rad);
        let hi = floor_shift_plus_sqrt(&center, &rad);
        let mut yi = lo;
        while yi <= hi {
            let wi = BigRational::from(yi.clone()) + &shift[i];
            let term = {
                let s = &wi + &sigma;
                &form.d[i] * &s * &s
            };
            let new_acc = acc + &term;
            w[i] = wi;
            y[i] = yi.clone();
            if i == 0 {
                if &new_acc >= rmin && &new_acc <= rmax {
                    out.push(y.to_vec());
                }
            } else {
                recurse(form, shift, rmin, rmax, i - 1, &new_acc, w, y, out);
            }
            yi += BigInt::one();
        }
    }

    recurse(
        form,
        shift,
        rmin,
        rmax,
        n - 1,
        &BigRational::zero(),
        &mut w,
        &mut y,
        &mut out,
    );
    out
}

/// All integer vectors `v` with `square_lo <= v^T G v <= square_hi` for a
/// negative definite rational Gram matrix `G`, in lexicographic order.
/// Includes the zero vector iff 0 lies in the range.
pub fn short_vectors(
    negdef_gram: &[Vec<BigRational>],
    square_lo: &BigRational,
    square_hi: &BigRational,
) -> Result<Vec<Vec<BigInt>>> {
    let n = negdef_gram.len();
    if negdef_gram.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("gram matrix must be square".into()));
    }
    let sig = crate::lattice::sylvester_signature(negdef_gram.to_vec());
    if !sig.is_negative_definite(n) {
        return Err(Error::NotNegativeDefinite);
    }
    let p: Vec<Vec<BigRational>> = negdef_gram
        .iter()
        .map(|row| row.iter().map(|e| -e).collect())
        .collect();
    let form = ldl_positive_definite(&p).ok_or(Error::NotNegativeDefinite)?;
    // lo <= Q(v) <= hi with Q = -P: P(v) in [-hi, -lo]
    let rmin = -square_hi;
    let rmax = -square_lo;
    let shift = vec![BigRational::zero(); n];
    let mut vs = enumerate_shifted(&form, &shift, &rmin.max(BigRational::zero()), &rmax);
    vs.sort();
    Ok(vs)
}

/// Unimodular column reduction of the linear form `a`: returns
/// `(g, u, kernel)` with `a·u = g = gcd(a) > 0` and `kernel` an integer basis
/// of `{x : a·x = 0}`.
fn linear_form_reduction(a: &[BigInt]) -> (BigInt, Vec<BigInt>, Vec<Vec<BigInt>>) {
    let r = a.len();
    let mut vals = a.to_vec();
    // columns of the evolving unimodular matrix
    let mut cols: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let mut c = vec![BigInt::zero(); r];
            c[i] = BigInt::one();
            c
        })
        .collect();
    loop {
        let nz: Vec<usize> = (0..r).filter(|&i| !vals[i].is_zero()).collect();
        assert!(!nz.is_empty(), "linear form is identically zero");
        if nz.len() == 1 {
            let p = nz[0];
            if vals[p].is_negative() {
                vals[p] = -vals[p].clone();
                for e in cols[p].iter_mut() {
                    *e = -e.clone();
                }
            }
            let g = vals[p].clone();
            let u = cols[p].clone();
            let kernel = (0..r).filter(|&i| i != p).map(|i| cols[i].clone()).collect();
            return (g, u, kernel);
        }
        let p = *nz
            .iter()
            .min_by_key(|&&i| vals[i].abs())
            .expect("nonempty");
        for &i in &nz {
            if i == p {
                continue;
            }
            let q = &vals[i] / &vals[p]; // truncated division: |rem| < |vals[p]|
            if !q.is_zero() {
                vals[i] = &vals[i] - &q * &vals[p];
                for row in 0..r {
                    let upd = &q * &cols[p][row];
                    cols[i][row] -= upd;
                }
            } else {
                // |vals[i]| < |vals[p]| cannot happen for the minimum pivot,
                // but equal magnitudes give q = ±1 handled above; q = 0 only
                // if vals[i] = 0, excluded.
                unreachable!("zero quotient for nonzero entry");
            }
        }
    }
}

/// Exact solve of `B z = c` where the columns of `B` are integer vectors
/// spanning (over Q) the space containing `c`. Panics on inconsistency,
/// which cannot occur for well-formed callers.
fn solve_in_span(b_cols: &[Vec<BigInt>], c: &[BigRational]) -> Vec<BigRational> {
    let rows = c.len();
    let m = b_cols.len();
    if m == 0 {
        assert!(c.iter().all(Zero::is_zero), "inconsistent empty system");
        return Vec::new();
    }
    // augmented matrix rows x (m + 1)
    let mut aug: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = b_cols
                .iter()
                .map(|col| BigRational::from(col[i].clone()))
                .collect();
            row.push(c[i].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(m);
    let mut prow = 0usize;
    for col in 0..m {
        let Some(p) = (prow..rows).find(|&i| !aug[i][col].is_zero()) else {
            panic!("kernel basis columns are linearly dependent");
        };
        aug.swap(prow, p);
        let inv = aug[prow][col].clone();
        for e in aug[prow][col..].iter_mut() {
            *e = &*e / &inv;
        }
        for i in 0..rows {
            if i != prow && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in col..=m {
                    let upd = &f * &aug[prow][j];
                    aug[i][j] -= upd;
                }
            }
        }
        pivot_rows.push(prow);
        prow += 1;
    }
    // consistency of the remaining rows
    for row in aug.iter().skip(prow) {
        assert!(row[m].is_zero(), "shift vector is not in the span");
    }
    (0..m).map(|i| aug[pivot_rows[i]][m].clone()).collect()
}

/// Enumerates all lattice classes Γ with `square(Γ) = square_target` and
/// `Γ·N = k` for each k in the window, filtered through the degree
/// constraints. The lattice must be hyperbolic (signature `(1, rank−1, 0)`)
/// and the window pivot must have positive square; the per-k solution sets
/// are then finite and provably exhausted.
pub fn enumerate_classes(query: &ClassQuery) -> Result<EnumerationResult> {
    let n_class = &query.window.positive_class;
    let lattice = n_class.lattice().clone();
    if !lattice.is_rational() {
        return Err(Error::PolynomialEntries {
            context: "enumeration requires a numeric lattice".into(),
        });
    }
    let rank = lattice.rank();
    let sig = lattice.signature()?;
    if !sig.is_hyperbolic(rank) {
        return Err(Error::NotHyperbolic {
            got: sig.to_string(),
        });
    }
    for dc in &query.constraints {
        if !dc.class.same_lattice(n_class) {
            return Err(Error::LatticeMismatch);
        }
    }
    if query.window.lo > query.window.hi {
        return Err(Error::Precondition(
            "degree window must have lo <= hi".into(),
        ));
    }
    let q_n = square(n_class).to_rational()?;
    if !q_n.is_positive() {
        return Err(Error::NonPositivePivot {
            got: q_n.to_string(),
        });
    }
    let gram = lattice.rational_gram()?;
    let n_coords = n_class.rational_coords()?;

    // Integer linear form for Γ·N: a[i] = e_i · N, cleared of denominators.
    let a_rat: Vec<BigRational> = (0..rank)
        .map(|i| {
            let mut acc = BigRational::zero();
            for j in 0..rank {
                acc += &gram[i][j] * &n_coords[j];
            }
            acc
        })
        .collect();
    let mut denom_lcm = BigInt::one();
    for v in &a_rat {
        denom_lcm = denom_lcm.lcm(v.denom());
    }
    let a_int: Vec<BigInt> = a_rat
        .iter()
        .map(|v| (v * BigRational::from(denom_lcm.clone())).to_integer())
        .collect();

    let (g, u_part, kernel) = linear_form_reduction(&a_int);

    // Gram of N^⊥ ∩ L in the kernel basis; negative definite by Hodge index.
    let m = kernel.len();
    let mut gram0 = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut acc = BigRational::zero();
            for x in 0..rank {
                for y in 0..rank {
                    if kernel[i][x].is_zero() || kernel[j][y].is_zero() {
                        continue;
                    }
                    acc += BigRational::from(kernel[i][x].clone())
                        * &gram[x][y]
                        * BigRational::from(kernel[j][y].clone());
                }
            }
            gram0[i][j] = acc;
        }
    }
    let p0: Vec<Vec<BigRational>> = gram0
        .iter()
        .map(|row| row.iter().map(|e| -e).collect())
        .collect();
    let form = ldl_positive_definite(&p0).ok_or_else(|| {
        Error::Internal("orthogonal complement of the pivot is not negative definite".into())
    })?;

    let mut solutions: Vec<DivisorClass> = Vec::new();
    let mut k = query.window.lo.clone();
    while k <= query.window.hi {
        // Γ·N = k  ⟺  a_int · x = k * denom_lcm
        let rhs = &k * &denom_lcm;
        let (quot, rem) = rhs.div_rem(&g);
        if rem.is_zero() {
            let v_k: Vec<BigInt> = u_part.iter().map(|e| e * &quot).collect();
            // shift c = v_k − (k/q_n) N  ∈ N^⊥ ⊗ Q, in kernel coordinates
            let k_over_q = BigRational::from(k.clone()) / &q_n;
            let c_amb: Vec<BigRational> = (0..rank)
                .map(|i| BigRational::from(v_k[i].clone()) - &k_over_q * &n_coords[i])
                .collect();
            let z = solve_in_span(&kernel, &c_amb);
            // Q⊥(c + y) = square_target − k²/q_n; P = −Q⊥
            let rtarget = BigRational::from(&k * &k) / &q_n - &query.square_target;
            if !rtarget.is_negative() {
                for y in enumerate_shifted(&form, &z, &rtarget, &rtarget) {
                    let coords: Vec<BigInt> = (0..rank)
                        .map(|i| {
                            let mut acc = v_k[i].clone();
                            for (bcol, yi) in kernel.iter().zip(&y) {
                                acc += &bcol[i] * yi;
                            }
                            acc
                        })
                        .collect();
                    let class = lattice
                        .class(
                            coords
                                .into_iter()
                                .map(|c| Scalar::from_rational(BigRational::from(c)))
                                .collect(),
                        )
                        .expect("coords have lattice rank");
                    let ok = query.constraints.iter().all(|dc| {
                        let p = pair(&class, &dc.class)
                            .expect("same lattice")
                            .to_rational()
                            .expect("rational lattice");
                        dc.rel.holds(&p, &dc.value)
                    });
                    if ok {
                        solutions.push(class);
                    }
                }
            }
        }
        k += BigInt::one();
    }
    solutions.sort_by(|a, b| {
        let ar = a.rational_coords().expect("rational");
        let br = b.rational_coords().expect("rational");
        ar.cmp(&br)
    });
    let note = format!(
        "all classes with square {} and pairing against {} in [{}, {}] are enumerated; \
         solutions outside this window are not claimed absent",
        query.square_target,
        n_class.to_expr(),
        query.window.lo,
        query.window.hi
    );
    Ok(EnumerationResult {
        solutions,
        complete: true,
        completeness_note: note,
    })
}

/// Exact upper bound on t = Γ·N over real classes Γ with
/// `Γ² = square_target`, `Γ·a_class ≤ c`, `t ≥ 0`, derived by Cauchy–Schwarz
/// in N^⊥. Returns the floor as an integer window top:
/// `Some(hi)` (with `hi = -1` meaning the window is empty), or `None` when no
/// finite bound exists (the constraint cone contains the pivot direction).
pub fn derived_window_hi(
    n_class: &DivisorClass,
    a_class: &DivisorClass,
    c: &BigRational,
    square_target: &BigRational,
) -> Result<Option<BigInt>> {
    if !n_class.same_lattice(a_class) {
        return Err(Error::LatticeMismatch);
    }
    let q = square(n_class).to_rational()?;
    if !q.is_positive() {
        return Err(Error::NonPositivePivot { got: q.to_string() });
    }
    let u = pair(n_class, a_class)?.to_rational()?;
    let a = square(a_class).to_rational()?;
    let s = square_target;
    let w = &u * &u / &q - &a;
    if w.is_negative() {
        return Err(Error::Internal(
            "pivot complement is not negative definite".into(),
        ));
    }
    if w.is_zero() {
        // a_class is proportional to the pivot: Γ·A = (u/q) t exactly.
        if u.is_positive() {
            let bound = c * &q / &u;
            return Ok(Some(bound.floor().to_integer()));
        }
        return Ok(None);
    }
    if a.is_positive() {
        // a t² − 2uc t + q(c² + s·w) ≤ 0, upward parabola
        let disc = &q * &w * (c * c - &a * s);
        if disc.is_negative() {
            // squared regime empty; unsquared regime needs t·u ≤ c·q
            if !c.is_negative() && u.is_positive() {
                let bound = c * &q / &u;
                return Ok(Some(bound.floor().to_integer()));
            }
            return Ok(Some(BigInt::from(-1)));
        }
        let shift = &u * c / &a;
        let rad = disc / (&a * &a);
        return Ok(Some(floor_shift_plus_sqrt(&shift, &rad)));
    }
    if a.is_zero() {
        if c.is_negative() {
            // linear: t ≤ q(c² + s·w) / (2uc)
            let bound = &q * (c * c + s * &w) / (BigRational::from(BigInt::from(2)) * &u * c);
            return Ok(Some(bound.floor().to_integer()));
        }
        return Ok(None);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::PicardLattice;
    use std::sync::Arc;

    fn rat(p: i64) -> BigRational {
        BigRational::from(BigInt::from(p))
    }

    fn gram_rat(entries: &[&[i64]]) -> Vec<Vec<BigRational>> {
        entries
            .iter()
            .map(|row| row.iter().map(|&e| rat(e)).collect())
            .collect()
    }

    #[test]
    fn short_vectors_rank1() {
        // gram [[-2]], range [-2,-2] -> ±generator
        let vs = short_vectors(&gram_rat(&[&[-2]]), &rat(-2), &rat(-2)).unwrap();
        assert_eq!(vs, vec![vec![BigInt::from(-1)], vec![BigInt::from(1)]]);
    }

    #[test]
    fn short_vectors_a2_roots() {
        // A2(-1) has 6 roots
        let vs = short_vectors(&gram_rat(&[&[-2, 1], &[1, -2]]), &rat(-2), &rat(-2)).unwrap();
        assert_eq!(vs.len(), 6);
        // even form takes no odd values
        let vs = short_vectors(&gram_rat(&[&[-2, 1], &[1, -2]]), &rat(-1), &rat(-1)).unwrap();
        assert!(vs.is_empty());
    }

    #[test]
    fn short_vectors_includes_zero_iff_in_range() {
        let g = gram_rat(&[&[-2, 1], &[1, -2]]);
        let with = short_vectors(&g, &rat(-2), &rat(0)).unwrap();
        assert!(with.contains(&vec![BigInt::zero(), BigInt::zero()]));
        let without = short_vectors(&g, &rat(-2), &rat(-1)).unwrap();
        assert!(!without.contains(&vec![BigInt::zero(), BigInt::zero()]));
    }

    #[test]
    fn short_vectors_rejects_indefinite() {
        assert!(matches!(
            short_vectors(&gram_rat(&[&[2, 0], &[0, -2]]), &rat(-2), &rat(-2)),
            Err(Error::NotNegativeDefinite)
        ));
    }

    fn prop62(n: i64) -> Arc<PicardLattice> {
        PicardLattice::from_int_gram(&["F", "G"], &[&[2, n], &[n, 4]]).unwrap()
    }

    fn prop53(d: i64, k: i64) -> Arc<PicardLattice> {
        PicardLattice::from_int_gram(&["E", "F", "R"], &[&[0, d, k], &[d, 0, k], &[k, k, -2]])
            .unwrap()
    }

    #[test]
    fn no_low_degree_roots_on_plane_family() {
        // Γ² = -2, Γ·G = 1 has no solutions at n = 6
        let lat = prop62(6);
        let g = lat.basis_class(1).unwrap();
        let res = enumerate_classes(&ClassQuery {
            square_target: rat(-2),
            constraints: vec![],
            window: DegreeWindow {
                positive_class: g.clone(),
                lo: BigInt::from(1),
                hi: BigInt::from(1),
            },
        })
        .unwrap();
        assert!(res.solutions.is_empty());
        assert!(res.complete);
        // Γ² = 0 with Γ·G in [1,2] also empty
        let res = enumerate_classes(&ClassQuery {
            square_target: rat(0),
            constraints: vec![],
            window: DegreeWindow {
                positive_class: g,
                lo: BigInt::from(1),
                hi: BigInt::from(2),
            },
        })
        .unwrap();
        assert!(res.solutions.is_empty());
    }

    #[test]
    fn root_window_finds_r_exactly() {
        // R·H0 = 2k-2 = 0 at (2,1); querying roots with pairing 0 and R-degree
        // filters picks out R itself.
        let lat = prop53(2, 1);
        let h0 = lat.class_from_int(&[1, 1, 1]).unwrap();
        let e = lat.basis_class(0).unwrap();
        let res = enumerate_classes(&ClassQuery {
            square_target: rat(-2),
            constraints: vec![DegreeConstraint {
                class: e,
                rel: Rel::Ge,
                value: rat(0),
            }],
            window: DegreeWindow {
                positive_class: h0,
                lo: BigInt::zero(),
                hi: BigInt::zero(),
            },
        })
        .unwrap();
        let r = lat.class_from_int(&[0, 0, 1]).unwrap();
        assert_eq!(res.solutions, vec![r]);
    }

    #[test]
    fn known_root_is_found_in_its_slice() {
        // E+F+3R is a root with H0-degree 6 at (2,1)
        let lat = prop53(2, 1);
        let h0 = lat.class_from_int(&[1, 1, 1]).unwrap();
        let res = enumerate_classes(&ClassQuery {
            square_target: rat(-2),
            constraints: vec![],
            window: DegreeWindow {
                positive_class: h0,
                lo: BigInt::from(6),
                hi: BigInt::from(6),
            },
        })
        .unwrap();
        let gamma = lat.class_from_int(&[1, 1, 3]).unwrap();
        assert!(res.solutions.contains(&gamma));
    }

    #[test]
    fn derived_window_plane_family() {
        // N = G, A = F, c = 0, s = -2: bound = sqrt(n² - 8); floor at n=6 is 5
        let lat = prop62(6);
        let g = lat.basis_class(1).unwrap();
        let f = lat.basis_class(0).unwrap();
        let hi = derived_window_hi(&g, &f, &rat(0), &rat(-2)).unwrap().unwrap();
        assert_eq!(hi, BigInt::from(5)); // floor(sqrt(28))
    }

    #[test]
    fn derived_window_rank3() {
        // N = H0, A = E, c = -1, s = -2 at (2,1): bound = (2u²-q)/(2u) = 2
        let lat = prop53(2, 1);
        let h0 = lat.class_from_int(&[1, 1, 1]).unwrap();
        let e = lat.basis_class(0).unwrap();
        let hi = derived_window_hi(&h0, &e, &rat(-1), &rat(-2)).unwrap().unwrap();
        assert_eq!(hi, BigInt::from(2));
    }

    #[test]
    fn derived_window_unbounded_cases() {
        // A with negative square gives no finite window
        let lat = prop53(2, 1);
        let h0 = lat.class_from_int(&[1, 1, 1]).unwrap();
        let r = lat.class_from_int(&[0, 0, 1]).unwrap();
        assert_eq!(derived_window_hi(&h0, &r, &rat(-1), &rat(-2)).unwrap(), None);
        // isotropic A with c = 0 likewise
        let e = lat.basis_class(0).unwrap();
        assert_eq!(derived_window_hi(&h0, &e, &rat(0), &rat(-2)).unwrap(), None);
    }

    #[test]
    fn rank1_lattice_slices() {
        // rank-1 lattice [4]: Γ = x·H, Γ² = 4x², window Γ·H = 4x in [0,8]
        let lat = PicardLattice::from_int_gram(&["H"], &[&[4]]).unwrap();
        let h = lat.basis_class(0).unwrap();
        let res = enumerate_classes(&ClassQuery {
            square_target: rat(4),
            constraints: vec![],
            window: DegreeWindow {
                positive_class: h.clone(),
                lo: BigInt::zero(),
                hi: BigInt::from(8),
            },
        })
        .unwrap();
        assert_eq!(res.solutions, vec![h.lattice().class_from_int(&[1]).unwrap()]);
    }

    #[test]
    fn window_precondition() {
        let lat = prop62(6);
        let g = lat.basis_class(1).unwrap();
        let res = enumerate_classes(&ClassQuery {
            square_target: rat(0),
            constraints: vec![],
            window: DegreeWindow {
                positive_class: g,
                lo: BigInt::from(2),
                hi: BigInt::from(1),
            },
        });
        assert!(res.is_err());
    }

    #[test]
    fn non_hyperbolic_rejected() {
        let lat = PicardLattice::from_int_gram(&["a", "b"], &[&[2, 0], &[0, 2]]).unwrap();
        let a = lat.basis_class(0).unwrap();
        let res = enumerate_classes(&ClassQuery {
            square_target: rat(-2),
            constraints: vec![],
            window: DegreeWindow {
                positive_class: a,
                lo: BigInt::zero(),
                hi: BigInt::one(),
            },
        });
        assert!(matches!(res, Err(Error::NotHyperbolic { .. })));
    }
}
