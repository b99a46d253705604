//! Knot vectors, span lookup and the per-span parameter normalization.
//!
//! A degree-`k` spline over `M` knots `τ_0..τ_{M-1}` is evaluable on
//! `[τ_k, τ_{M-k-1}]`. Spans are half-open `[τ_j, τ_{j+1})`, except that the
//! right end of the evaluable domain belongs to the last non-degenerate span.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Non-decreasing sequence of parameter values.
///
/// The scalar type doubles as the storage tag: `KnotVector<Rational>` is exact,
/// `KnotVector<f64>` is floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector<T> {
    values: Vec<T>,
    delta: Option<T>,
}

/// Index `j` of the knot interval `[τ_j, τ_{j+1}]` a parameter falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanIndex(pub usize);

impl SpanIndex {
    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for SpanIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<T: Scalar> KnotVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidKnots(format!(
                "need at least 2 knots, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidKnots(format!("knot {pos} is not finite")));
        }
        if let Some(pos) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnots(format!(
                "knots must be non-decreasing: τ_{} = {} > τ_{} = {}",
                pos,
                values[pos],
                pos + 1,
                values[pos + 1]
            )));
        }
        let delta = uniform_spacing(&values);
        Ok(Self { values, delta })
    }

    /// `count` knots `start, start + delta, ...`.
    pub fn uniform(start: T, delta: T, count: usize) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::InvalidKnots(format!(
                "uniform spacing must be positive, got {delta}"
            )));
        }
        let values = (0..count)
            .map(|i| start.clone() + delta.clone() * T::from_int(i as i64))
            .collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        self.delta.is_some()
    }

    /// Common knot spacing `Δτ` when the vector is uniform.
    pub fn delta(&self) -> Option<&T> {
        self.delta.as_ref()
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<KnotVector<U>> {
        let values = self.values.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        KnotVector::new(values)
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if self.values.len() < 2 * degree + 2 {
            return Err(Error::InvalidKnots(format!(
                "degree {degree} needs at least {} knots, got {}",
                2 * degree + 2,
                self.values.len()
            )));
        }
        Ok(())
    }

    /// Evaluable domain `[τ_k, τ_{M-k-1}]`.
    pub fn domain(&self, degree: usize) -> Result<(T, T)> {
        self.check_degree(degree)?;
        let m = self.values.len();
        Ok((self.values[degree].clone(), self.values[m - degree - 1].clone()))
    }

    /// Non-degenerate spans of the evaluable domain, in order.
    pub fn spans(&self, degree: usize) -> impl Iterator<Item = SpanIndex> + '_ {
        let upper = if self.values.len() >= 2 * degree + 2 {
            self.values.len() - degree - 1
        } else {
            degree
        };
        (degree..upper)
            .filter(move |&j| self.values[j] < self.values[j + 1])
            .map(SpanIndex)
    }

    /// Validates `j` as a non-degenerate span of the evaluable domain.
    pub fn checked_span(&self, degree: usize, j: usize) -> Result<SpanIndex> {
        self.check_degree(degree)?;
        let max = self.values.len() - degree - 2;
        if j < degree || j > max {
            return Err(Error::Index { index: j, max });
        }
        if self.values[j] >= self.values[j + 1] {
            return Err(Error::DegenerateSpan(j));
        }
        Ok(SpanIndex(j))
    }

    /// Span containing `tau` for a degree-`degree` spline.
    pub fn find_span(&self, degree: usize, tau: &T) -> Result<SpanIndex> {
        let (lo, hi) = self.domain(degree)?;
        if !tau.is_finite() || *tau < lo || *tau > hi {
            return Err(Error::Domain(format!(
                "tau outside evaluable domain [{lo}, {hi}]: {tau}"
            )));
        }
        let m = self.values.len();
        if *tau == hi {
            return (degree..=m - degree - 2)
                .rev()
                .find(|&j| self.values[j] < self.values[j + 1])
                .map(SpanIndex)
                .ok_or_else(|| {
                    Error::Domain(format!("tau outside evaluable domain: [{lo}, {hi}] is empty"))
                });
        }
        // tau < hi, so the last knot <= tau sits at or before m - degree - 2.
        let j = self.values.partition_point(|v| v <= tau) - 1;
        Ok(SpanIndex(j))
    }

    /// Maps `tau` to `u = (τ - τ_j) / (τ_{j+1} - τ_j)`.
    pub fn normalize(&self, span: SpanIndex, tau: &T) -> Result<T> {
        let j = span.0;
        if j + 1 >= self.values.len() {
            return Err(Error::Index { index: j, max: self.values.len() - 2 });
        }
        let width = self.values[j + 1].clone() - self.values[j].clone();
        if width.is_zero() {
            return Err(Error::DegenerateSpan(j));
        }
        Ok((tau.clone() - self.values[j].clone()) / width)
    }

    /// Width `τ_{j+1} - τ_j` of a span.
    pub fn span_width(&self, span: SpanIndex) -> T {
        self.values[span.0 + 1].clone() - self.values[span.0].clone()
    }

    /// Coefficients `d_i^0, d_i^1, h_i^0, h_i^1` for `i = j-k ..= j`.
    pub fn local_coefficients(&self, degree: usize, span: SpanIndex) -> Result<LocalCoefficients<T>> {
        let j = span.0;
        if j < degree || j + degree + 1 >= self.values.len() {
            return Err(Error::Index {
                index: j,
                max: self.values.len().saturating_sub(degree + 2),
            });
        }
        let t = &self.values;
        let first = j - degree;
        let width = t[j + 1].clone() - t[j].clone();
        let mut d0 = Vec::with_capacity(degree + 1);
        let mut d1 = Vec::with_capacity(degree + 1);
        let mut h0 = Vec::with_capacity(degree + 1);
        let mut h1 = Vec::with_capacity(degree + 1);
        for i in first..=j {
            let left = t[i + degree].clone() - t[i].clone();
            let right = t[i + degree + 1].clone() - t[i + 1].clone();
            d0.push(ratio(t[j].clone() - t[i].clone(), &left));
            d1.push(ratio(width.clone(), &left));
            h0.push(ratio(t[i + degree + 1].clone() - t[j].clone(), &right));
            h1.push(-ratio(width.clone(), &right));
        }
        Ok(LocalCoefficients { degree, span, first, d0, d1, h0, h1 })
    }
}

/// Division with `x/0 = 0`.
fn ratio<T: Scalar>(num: T, den: &T) -> T {
    if den.is_zero() {
        T::zero()
    } else {
        num / den.clone()
    }
}

fn uniform_spacing<T: Scalar>(values: &[T]) -> Option<T> {
    let delta = values[1].clone() - values[0].clone();
    if !delta.is_positive() {
        return None;
    }
    values
        .windows(2)
        .all(|w| (w[1].clone() - w[0].clone()).spacing_eq(&delta, &delta))
        .then_some(delta)
}

/// Per-span coefficients of the normalized Cox-de Boor recursion at one degree.
///
/// `B_{i,k}(u) = (d_i^0 + u d_i^1) B_{i,k-1}(u) + (h_i^0 + u h_i^1) B_{i+1,k-1}(u)`
#[derive(Debug, Clone, PartialEq)]
pub struct LocalCoefficients<T> {
    pub degree: usize,
    pub span: SpanIndex,
    first: usize,
    d0: Vec<T>,
    d1: Vec<T>,
    h0: Vec<T>,
    h1: Vec<T>,
}

impl<T: Scalar> LocalCoefficients<T> {
    /// Global index range `j-k ..= j` covered by the table.
    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.first + self.degree
    }

    fn slot(&self, i: usize) -> usize {
        assert!(
            self.indices().contains(&i),
            "basis index {i} outside {:?}",
            self.indices()
        );
        i - self.first
    }

    pub fn d0(&self, i: usize) -> &T {
        &self.d0[self.slot(i)]
    }

    pub fn d1(&self, i: usize) -> &T {
        &self.d1[self.slot(i)]
    }

    pub fn h0(&self, i: usize) -> &T {
        &self.h0[self.slot(i)]
    }

    pub fn h1(&self, i: usize) -> &T {
        &self.h1[self.slot(i)]
    }
}
