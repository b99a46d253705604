//! Basis matrices `M^k(j)`.
//!
//! On span `j` the `k+1` active basis functions, as polynomials in the
//! normalized parameter `u`, are
//!
//! ```text
//! [B_{j-k,k}(u) … B_{j,k}(u)] = [1 u … u^k] · M^k(j)
//! ```
//!
//! Row `r` holds the coefficients of `u^r`; column `c` belongs to basis function
//! `B_{j-k+c,k}` (equivalently, control point `P_{j-k+c}`).
//!
//! Raising the degree multiplies every column polynomial by a linear factor in
//! `u`, which in matrix form is
//!
//! ```text
//! M^k = [M^{k-1}; 0ᵀ] · A + [0ᵀ; M^{k-1}] · B
//! ```
//!
//! with bidiagonal `k × (k+1)` factors built from the span's `d` coefficients:
//! row `c` of `A` is `(1 - d_i^0, d_i^0)` and row `c` of `B` is `(-d_i^1, d_i^1)`
//! at columns `c, c+1`, where `i = j-k+1+c`.

use crate::error::{Error, Result};
use crate::knots::{KnotVector, SpanIndex};
use crate::polytoeplitz::PowerPoly;
use crate::scalar::{Rational, Scalar};

/// Largest degree accepted by the matrix constructors.
pub const MAX_DEGREE: usize = 30;

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree, cap: MAX_DEGREE });
    }
    Ok(())
}

fn check_square<T>(entries: &[Vec<T>]) -> Result<()> {
    let n = entries.len();
    if n == 0 || entries.iter().any(|row| row.len() != n) {
        return Err(Error::Size("basis matrix must be square and non-empty".into()));
    }
    Ok(())
}

/// Power-basis coefficients of the active basis functions on one span.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix<T> {
    degree: usize,
    entries: Vec<Vec<T>>,
    span: Option<SpanIndex>,
}

impl<T: Scalar> BasisMatrix<T> {
    /// Wraps a `(k+1) × (k+1)` table, rows indexed by power of `u`.
    pub fn from_entries(entries: Vec<Vec<T>>, span: Option<SpanIndex>) -> Result<Self> {
        check_square(&entries)?;
        Ok(Self { degree: entries.len() - 1, entries, span })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Span the matrix was built for; `None` for the span-independent uniform matrix.
    pub fn span(&self) -> Option<SpanIndex> {
        self.span
    }

    pub fn entries(&self) -> &[Vec<T>] {
        &self.entries
    }

    pub fn entry(&self, power: usize, column: usize) -> &T {
        &self.entries[power][column]
    }

    /// Column `c` as a polynomial in `u`.
    pub fn column(&self, c: usize) -> PowerPoly<T> {
        PowerPoly::new(self.entries.iter().map(|row| row[c].clone()).collect()).expect("non-empty")
    }

    /// `Σ_c M[r][c]` for each row; `(1, 0, …, 0)` for a valid basis matrix.
    pub fn row_sums(&self) -> Vec<T> {
        self.entries
            .iter()
            .map(|row| row.iter().fold(T::zero(), |acc, x| acc + x.clone()))
            .collect()
    }

    /// `[1 u … u^k] · M`.
    pub fn basis_row(&self, u: &T) -> Vec<T> {
        weighted_rows(&self.entries, u, 0)
    }

    /// `d^order/du^order` of [`Self::basis_row`].
    pub fn derivative_row(&self, u: &T, order: usize) -> Vec<T> {
        weighted_rows(&self.entries, u, order)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BasisMatrix<U> {
        BasisMatrix {
            degree: self.degree,
            entries: self.entries.iter().map(|row| row.iter().map(&f).collect()).collect(),
            span: self.span,
        }
    }
}

impl BasisMatrix<Rational> {
    /// Rounds every entry to `U` (typically `f64`).
    pub fn to_scalar<U: Scalar>(&self) -> BasisMatrix<U> {
        self.map(U::from_rational)
    }
}

/// `Σ_r (d^order/du^order u^r) · rows[r]`, each column evaluated by Horner's rule.
fn weighted_rows<T: Scalar>(rows: &[Vec<T>], u: &T, order: usize) -> Vec<T> {
    let width = rows.first().map_or(0, Vec::len);
    (0..width)
        .map(|c| {
            rows.iter().enumerate().skip(order).rev().fold(T::zero(), |acc, (r, row)| {
                // falling factorial r (r-1) … (r-order+1)
                let scale = (r - order + 1..=r).fold(T::one(), |f, i| f * T::from_int(i as i64));
                acc * u.clone() + scale * row[c].clone()
            })
        })
        .collect()
}

/// Constant basis matrix of the uniform B-spline of degree `k`.
///
/// Built with the uniform specialization of the degree-raising step, where
/// `A[r][r] = r+1`, `A[r][r+1] = k-1-r`, `B[r][r] = -1`, `B[r][r+1] = 1` and the
/// sum is scaled by `1/k`.
pub fn uniform_basis_matrix<T: Scalar>(degree: usize) -> Result<BasisMatrix<T>> {
    check_degree(degree)?;
    let mut m = vec![vec![T::one()]];
    for k in 1..=degree {
        let kk = k as i64;
        let a = |r: usize| (T::from_int(r as i64 + 1), T::from_int(kk - 1 - r as i64));
        let b = |_: usize| (-T::one(), T::one());
        m = raise_degree(&m, a, b);
        let inv = T::one() / T::from_int(kk);
        for row in &mut m {
            for x in row.iter_mut() {
                *x = x.clone() * inv.clone();
            }
        }
    }
    BasisMatrix::from_entries(m, None)
}

/// One degree-raising step `[M; 0ᵀ]·A + [0ᵀ; M]·B`.
///
/// `a(c)` and `b(c)` give the two non-zero entries `(X[c][c], X[c][c+1])` of row
/// `c` of each bidiagonal factor.
fn raise_degree<T: Scalar>(
    m: &[Vec<T>],
    a: impl Fn(usize) -> (T, T),
    b: impl Fn(usize) -> (T, T),
) -> Vec<Vec<T>> {
    let n = m.len();
    let a: Vec<_> = (0..n).map(a).collect();
    let b: Vec<_> = (0..n).map(b).collect();
    let mut out = vec![vec![T::zero(); n + 1]; n + 1];
    for (c, ((a_diag, a_next), (b_diag, b_next))) in a.iter().zip(&b).enumerate() {
        for row in 0..=n {
            let mut upper = out[row][c].clone();
            let mut right = out[row][c + 1].clone();
            if row < n {
                let v = &m[row][c];
                upper = upper + v.clone() * a_diag.clone();
                right = right + v.clone() * a_next.clone();
            }
            if row > 0 {
                let v = &m[row - 1][c];
                upper = upper + v.clone() * b_diag.clone();
                right = right + v.clone() * b_next.clone();
            }
            out[row][c] = upper;
            out[row][c + 1] = right;
        }
    }
    out
}

/// Basis matrix `M^k(j)` for an arbitrary knot vector.
///
/// Starts from `M^0(j) = [1]` and raises the degree with the span's local
/// `d^0, d^1` coefficients at each level. Over `Rational` knots the result is
/// exact.
pub fn general_basis_matrix<T: Scalar>(
    kv: &KnotVector<T>,
    degree: usize,
    span: SpanIndex,
) -> Result<BasisMatrix<T>> {
    check_degree(degree)?;
    let span = kv.checked_span(degree, span.index())?;
    let j = span.index();
    let mut m = vec![vec![T::one()]];
    for r in 1..=degree {
        let coeffs = kv.local_coefficients(r, span)?;
        let first = j + 1 - r;
        let a = |c: usize| {
            let d0 = coeffs.d0(first + c).clone();
            (T::one() - d0.clone(), d0)
        };
        let b = |c: usize| {
            let d1 = coeffs.d1(first + c).clone();
            (-d1.clone(), d1)
        };
        m = raise_degree(&m, a, b);
    }
    BasisMatrix::from_entries(m, Some(span))
}

/// Same matrix as [`general_basis_matrix`], assembled column by column with
/// Toeplitz polynomial products and both the `d` and `h` coefficients:
/// `N_{i,r} = (d_i^0 + u d_i^1) N_{i,r-1} + (h_i^0 + u h_i^1) N_{i+1,r-1}`.
pub fn general_basis_matrix_by_products<T: Scalar>(
    kv: &KnotVector<T>,
    degree: usize,
    span: SpanIndex,
) -> Result<BasisMatrix<T>> {
    check_degree(degree)?;
    let span = kv.checked_span(degree, span.index())?;
    let j = span.index();
    // columns[s] holds N_{j-r+s, r}; functions outside j-r..=j vanish on the span
    let mut columns = vec![PowerPoly::one()];
    for r in 1..=degree {
        let coeffs = kv.local_coefficients(r, span)?;
        let lower = |s: usize| -> Option<&PowerPoly<T>> {
            // N_{j-r+s, r-1} lives at index s-1 of the previous level
            s.checked_sub(1).and_then(|p| columns.get(p))
        };
        let next = (0..=r)
            .map(|s| {
                let i = j - r + s;
                let mut acc = PowerPoly::zero();
                if let Some(own) = lower(s) {
                    let factor = PowerPoly::new(vec![coeffs.d0(i).clone(), coeffs.d1(i).clone()])?;
                    acc = add(&acc, &factor.mul_toeplitz(own));
                }
                if let Some(succ) = lower(s + 1) {
                    let factor = PowerPoly::new(vec![coeffs.h0(i).clone(), coeffs.h1(i).clone()])?;
                    acc = add(&acc, &factor.mul_toeplitz(succ));
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        columns = next;
    }
    let entries = (0..=degree)
        .map(|power| columns.iter().map(|col| col.coeff(power)).collect())
        .collect();
    BasisMatrix::from_entries(entries, Some(span))
}

fn add<T: Scalar>(a: &PowerPoly<T>, b: &PowerPoly<T>) -> PowerPoly<T> {
    let n = a.coeffs().len().max(b.coeffs().len());
    PowerPoly::new((0..n).map(|p| a.coeff(p) + b.coeff(p)).collect()).expect("non-empty")
}

/// `[1 u … u^k] · M`.
pub fn basis_row<T: Scalar>(m: &BasisMatrix<T>, u: &T) -> Vec<T> {
    m.basis_row(u)
}

/// Matrix of the cumulative form: column `c` is `Σ_{s=c}^{k}` column `s` of the
/// source basis matrix.
///
/// Column 0 multiplies the first local control point, column `c ≥ 1` the
/// difference `P_c - P_{c-1}` of consecutive local points.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeBasisMatrix<T> {
    degree: usize,
    entries: Vec<Vec<T>>,
    span: Option<SpanIndex>,
}

impl<T: Scalar> CumulativeBasisMatrix<T> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn span(&self) -> Option<SpanIndex> {
        self.span
    }

    pub fn entries(&self) -> &[Vec<T>] {
        &self.entries
    }

    pub fn entry(&self, power: usize, column: usize) -> &T {
        &self.entries[power][column]
    }

    /// `λ_c(u)` as a polynomial.
    pub fn column(&self, c: usize) -> PowerPoly<T> {
        PowerPoly::new(self.entries.iter().map(|row| row[c].clone()).collect()).expect("non-empty")
    }

    /// Weights `λ_c(u) = Σ_r u^r C[r][c]` for `u ∈ [0, 1]`.
    pub fn lambda_weights(&self, u: &T) -> Result<Vec<T>> {
        if !u.is_finite() || *u < T::zero() || *u > T::one() {
            return Err(Error::Domain(format!("u = {u} outside [0, 1]")));
        }
        Ok(self.lambda_weights_unbounded(u))
    }

    /// [`Self::lambda_weights`] without the range check, for extrapolation.
    pub fn lambda_weights_unbounded(&self, u: &T) -> Vec<T> {
        weighted_rows(&self.entries, u, 0)
    }

    pub fn derivative_weights(&self, u: &T, order: usize) -> Vec<T> {
        weighted_rows(&self.entries, u, order)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CumulativeBasisMatrix<U> {
        CumulativeBasisMatrix {
            degree: self.degree,
            entries: self.entries.iter().map(|row| row.iter().map(&f).collect()).collect(),
            span: self.span,
        }
    }
}

impl CumulativeBasisMatrix<Rational> {
    pub fn to_scalar<U: Scalar>(&self) -> CumulativeBasisMatrix<U> {
        self.map(U::from_rational)
    }
}

pub fn cumulative_matrix<T: Scalar>(m: &BasisMatrix<T>) -> CumulativeBasisMatrix<T> {
    let entries = m
        .entries
        .iter()
        .map(|row| {
            let mut acc = T::zero();
            let mut suffix: Vec<T> = row
                .iter()
                .rev()
                .map(|x| {
                    acc = acc.clone() + x.clone();
                    acc.clone()
                })
                .collect();
            suffix.reverse();
            suffix
        })
        .collect();
    CumulativeBasisMatrix { degree: m.degree, entries, span: m.span }
}

pub fn lambda_weights<T: Scalar>(cm: &CumulativeBasisMatrix<T>, u: &T) -> Result<Vec<T>> {
    cm.lambda_weights(u)
}
