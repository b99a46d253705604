//! Direct Cox-de Boor recursion over an arbitrary knot vector.
//!
//! This is the reference evaluation the matrix routines are tested against,
//! so it stays as literal as possible: degree-0 indicators raised one degree
//! at a time, with any `x/0` term taken as zero.
//!
//! Degree-0 indicators use half-open intervals `[τ_i, τ_{i+1})`; the last
//! non-degenerate interval is also closed on the right when its end is the
//! final knot, so that partition of unity holds at the end of clamped vectors.

use crate::error::{Error, Result};
use crate::knots::KnotVector;
use crate::scalar::Scalar;

fn last_nondegenerate<T: Scalar>(t: &[T]) -> Option<usize> {
    (0..t.len() - 1).rev().find(|&i| t[i] < t[i + 1])
}

fn indicator<T: Scalar>(t: &[T], i: usize, tau: &T, closing: Option<usize>) -> T {
    let inside = (t[i] <= *tau && *tau < t[i + 1])
        || (closing == Some(i) && *tau == t[t.len() - 1]);
    if inside {
        T::one()
    } else {
        T::zero()
    }
}

fn weight<T: Scalar>(num: T, den: T) -> T {
    if den.is_zero() {
        T::zero()
    } else {
        num / den
    }
}

/// Raises `level` (degree-`from` values of `B_{first+s}`) by one degree in place.
fn raise<T: Scalar>(t: &[T], first: usize, degree: usize, tau: &T, level: &mut Vec<T>) {
    for s in 0..level.len() - 1 {
        let i = first + s;
        let left = weight(tau.clone() - t[i].clone(), t[i + degree].clone() - t[i].clone());
        let right = weight(
            t[i + degree + 1].clone() - tau.clone(),
            t[i + degree + 1].clone() - t[i + 1].clone(),
        );
        level[s] = left * level[s].clone() + right * level[s + 1].clone();
    }
    level.pop();
}

fn check_tau<T: Scalar>(tau: &T) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("tau outside evaluable domain: {tau} is not finite")))
    }
}

/// Degree-0 basis function `B_{i,0}(τ)`.
pub fn basis0<T: Scalar>(kv: &KnotVector<T>, i: usize, tau: &T) -> Result<T> {
    let t = kv.values();
    if i + 2 > t.len() {
        return Err(Error::Index { index: i, max: t.len() - 2 });
    }
    check_tau(tau)?;
    Ok(indicator(t, i, tau, last_nondegenerate(t)))
}

/// `B_{i,k}(τ)`, using an `O(k²)` triangular table local to this call.
pub fn basis<T: Scalar>(kv: &KnotVector<T>, i: usize, degree: usize, tau: &T) -> Result<T> {
    let t = kv.values();
    if i + degree + 2 > t.len() {
        return Err(Error::Index {
            index: i,
            max: t.len().saturating_sub(degree + 2),
        });
    }
    check_tau(tau)?;
    let closing = last_nondegenerate(t);
    let mut level: Vec<T> = (i..=i + degree).map(|s| indicator(t, s, tau, closing)).collect();
    for r in 1..=degree {
        raise(t, i, r, tau, &mut level);
    }
    Ok(level.pop().expect("one value left"))
}

/// All `B_{i,k}(τ)` for `i = 0 ..= M-k-2`.
pub fn basis_all<T: Scalar>(kv: &KnotVector<T>, degree: usize, tau: &T) -> Result<Vec<T>> {
    let t = kv.values();
    if degree + 2 > t.len() {
        return Err(Error::Index { index: 0, max: 0 });
    }
    check_tau(tau)?;
    let closing = last_nondegenerate(t);
    let mut level: Vec<T> = (0..t.len() - 1).map(|s| indicator(t, s, tau, closing)).collect();
    for r in 1..=degree {
        raise(t, 0, r, tau, &mut level);
    }
    Ok(level)
}

/// Cumulative basis `B̃_{i,k}(τ) = Σ_{s >= i} B_{s,k}(τ)`.
pub fn cumulative_basis<T: Scalar>(kv: &KnotVector<T>, i: usize, degree: usize, tau: &T) -> Result<T> {
    let all = basis_all(kv, degree, tau)?;
    if i >= all.len() {
        return Err(Error::Index { index: i, max: all.len() - 1 });
    }
    Ok(all[i..].iter().fold(T::zero(), |acc, b| acc + b.clone()))
}
