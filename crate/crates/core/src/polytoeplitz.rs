//! Power-basis polynomials and lower-triangular Toeplitz matrices.
//!
//! Multiplying by a fixed polynomial `g` is linear in the coefficients of the
//! other factor, and the matrix of that map is lower-triangular Toeplitz with
//! `g`'s coefficients running down each column:
//!
//! ```text
//! g = c0 + c1 x + c2 x^2, rows = 4
//!
//! | c0  0  0  0 |
//! | c1 c0  0  0 |
//! | c2 c1 c0  0 |
//! |  0 c2 c1 c0 |
//! ```

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense polynomial `a_0 + a_1 x + ... + a_n x^n`.
///
/// Trailing zero coefficients are trimmed on construction, so `degree()` is the
/// true degree; the zero polynomial is stored as `[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Size("polynomial needs at least one coefficient".into()));
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(T::is_zero) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![T::zero()] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![T::one()] }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Coefficient of `x^power`, zero past the degree.
    pub fn coeff(&self, power: usize) -> T {
        self.coeffs.get(power).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Product by direct convolution of the coefficient lists.
    pub fn mul_direct(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                out[a + b] = out[a + b].clone() + x.clone() * y.clone();
            }
        }
        Self::new(out).expect("non-empty")
    }

    /// Product computed as `T(self) · [other; 0…]` with `T(self)` the
    /// lower-triangular Toeplitz matrix of `self`.
    pub fn mul_toeplitz(&self, other: &Self) -> Self {
        let rows = self.degree() + other.degree() + 1;
        let t = ToeplitzLT::from_poly(self.clone(), rows).expect("rows cover the generator");
        Self::new(t.apply(&other.coeffs).expect("column fits")).expect("non-empty")
    }
}

impl<T: Scalar> Mul for &PowerPoly<T> {
    type Output = PowerPoly<T>;

    fn mul(self, rhs: Self) -> PowerPoly<T> {
        self.mul_direct(rhs)
    }
}

/// Lower-triangular Toeplitz matrix generated by a polynomial:
/// `T[r][c] = a_{r-c}` for `0 <= r - c <= deg`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzLT<T> {
    rows: usize,
    generator: PowerPoly<T>,
}

impl<T: Scalar> ToeplitzLT<T> {
    pub fn from_poly(generator: PowerPoly<T>, rows: usize) -> Result<Self> {
        if rows < generator.degree() + 1 {
            return Err(Error::Size(format!(
                "{rows} rows cannot hold a degree-{} generator",
                generator.degree()
            )));
        }
        Ok(Self { rows, generator })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn generator(&self) -> &PowerPoly<T> {
        &self.generator
    }

    pub fn entry(&self, r: usize, c: usize) -> T {
        if r < c || r >= self.rows || c >= self.rows {
            return T::zero();
        }
        self.generator.coeff(r - c)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|r| (0..self.rows).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    /// Matrix-vector product; `column` is zero-padded to `rows`.
    pub fn apply(&self, column: &[T]) -> Result<Vec<T>> {
        if column.len() > self.rows {
            return Err(Error::Size(format!(
                "column of length {} exceeds {} rows",
                column.len(),
                self.rows
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                column
                    .iter()
                    .enumerate()
                    .take(r + 1)
                    .fold(T::zero(), |acc, (c, v)| acc + self.entry(r, c) * v.clone())
            })
            .collect())
    }
}

pub fn toeplitz_from_poly<T: Scalar>(p: &PowerPoly<T>, rows: usize) -> Result<ToeplitzLT<T>> {
    ToeplitzLT::from_poly(p.clone(), rows)
}

pub fn poly_mul<T: Scalar>(g: &PowerPoly<T>, q: &PowerPoly<T>) -> PowerPoly<T> {
    g.mul_direct(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> PowerPoly<Rational> {
        PowerPoly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect()).unwrap()
    }

    fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let n = a.len();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).fold(Rational::from_integer(0.into()), |s, t| s + &a[r][t] * &b[t][c]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn empty_is_rejected() {
        assert!(matches!(PowerPoly::<f64>::new(vec![]), Err(Error::Size(_))));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(poly(&[0, 0]).coeffs().len(), 1);
        assert!(poly(&[0, 0]).is_zero());
    }

    #[test]
    fn six_row_toeplitz_of_quadratic() {
        let t = toeplitz_from_poly(&poly(&[2, 3, 5]), 6).unwrap();
        let dense = t.to_dense();
        let expected = [
            [2, 0, 0, 0, 0, 0],
            [3, 2, 0, 0, 0, 0],
            [5, 3, 2, 0, 0, 0],
            [0, 5, 3, 2, 0, 0],
            [0, 0, 5, 3, 2, 0],
            [0, 0, 0, 5, 3, 2],
        ];
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(dense[r][c], Rational::from_integer(expected[r][c].into()));
            }
        }
    }

    #[test]
    fn identity_and_shift() {
        let id = toeplitz_from_poly(&poly(&[1]), 3).unwrap().to_dense();
        let shift = toeplitz_from_poly(&poly(&[0, 1]), 3).unwrap().to_dense();
        for r in 0..3 {
            for c in 0..3 {
                let one = |b: bool| Rational::from_integer((b as i64).into());
                assert_eq!(id[r][c], one(r == c));
                assert_eq!(shift[r][c], one(r == c + 1));
            }
        }
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(toeplitz_from_poly(&poly(&[1, 2, 3]), 2), Err(Error::Size(_))));
        let t = toeplitz_from_poly(&poly(&[1, 2]), 2).unwrap();
        assert!(t.apply(&vec![Rational::from_integer(1.into()); 3]).is_err());
    }

    #[test]
    fn product_examples() {
        assert_eq!(poly_mul(&poly(&[1, 1]), &poly(&[1, -1])), poly(&[1, 0, -1]));
        assert_eq!(poly_mul(&poly(&[0]), &poly(&[4, 5, 6])), poly(&[0]));
        assert_eq!(poly(&[0]).mul_toeplitz(&poly(&[4, 5, 6])), poly(&[0]));

        let g = poly(&[2, 3, 5]);
        let q = poly(&[7, 11, 13, 17]);
        let f = poly_mul(&g, &q);
        assert_eq!(f.degree(), 5);
        assert_eq!(f, g.mul_toeplitz(&q));
        // the rectangular 6x4 Toeplitz form from the same generator
        let t = toeplitz_from_poly(&g, 6).unwrap();
        assert_eq!(t.apply(q.coeffs()).unwrap(), f.coeffs().to_vec());
    }

    #[test]
    fn float_polynomials_work_too() {
        let p = PowerPoly::new(vec![1.0, -2.0, 1.0]).unwrap();
        assert_eq!(p.eval(&3.0), 4.0);
        assert_eq!((&p * &PowerPoly::new(vec![0.5]).unwrap()).coeffs(), &[0.5, -1.0, 0.5]);
    }

    fn arb_poly() -> impl Strategy<Value = PowerPoly<Rational>> {
        prop::collection::vec((-50i64..50, 1i64..20), 1..9).prop_map(|c| {
            PowerPoly::new(c.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn product_commutes_and_routes_agree(g in arb_poly(), q in arb_poly()) {
            let direct = poly_mul(&g, &q);
            prop_assert_eq!(&direct, &poly_mul(&q, &g));
            prop_assert_eq!(&direct, &g.mul_toeplitz(&q));
            if !g.is_zero() && !q.is_zero() {
                prop_assert_eq!(direct.degree(), g.degree() + q.degree());
            }
        }

        #[test]
        fn toeplitz_products_compose(g in arb_poly(), q in arb_poly(), extra in 0usize..3) {
            let n = g.degree() + q.degree() + 1 + extra;
            let tg = toeplitz_from_poly(&g, n).unwrap().to_dense();
            let tq = toeplitz_from_poly(&q, n).unwrap().to_dense();
            let product = matmul(&tg, &tq);
            let f = poly_mul(&g, &q);
            for (r, row) in product.iter().enumerate() {
                prop_assert_eq!(&row[0], &f.coeff(r));
            }
        }

        #[test]
        fn eval_is_multiplicative(g in arb_poly(), q in arb_poly(), n in -5i64..5, d in 1i64..5) {
            let x = Rational::new(n.into(), d.into());
            prop_assert_eq!(poly_mul(&g, &q).eval(&x), g.eval(&x) * q.eval(&x));
        }
    }
}
