//! Randomized self-check: basis matrices against the Cox-de Boor recursion and
//! the three curve evaluation paths against each other.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basismatrix::{general_basis_matrix, uniform_basis_matrix, BasisMatrix, MAX_DEGREE};
use crate::coxdeboor;
use crate::error::{Error, Result};
use crate::knots::{KnotVector, SpanIndex};
use crate::scalar::Rational;
use crate::SplineCurve;

/// Largest accepted relative disagreement between evaluation paths.
pub const CHECK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotLayout {
    /// Equally spaced knots.
    Uniform,
    /// End knots repeated `k+1` times, random interior knots.
    Clamped,
    /// Random positive gaps.
    Irregular,
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub degree_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// Perturbs the uniform matrix before checking it (negative control).
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReport {
    pub degree: usize,
    /// Row sums `(1, 0, …, 0)`, `k!`-integrality, and agreement with the
    /// general construction on uniform knots, all exact.
    pub structure_ok: bool,
    pub basis_error: f64,
    pub curve_error: f64,
}

impl DegreeReport {
    pub fn passed(&self) -> bool {
        self.structure_ok && self.basis_error <= CHECK_TOLERANCE && self.curve_error <= CHECK_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub degrees: Vec<DegreeReport>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(DegreeReport::passed)
    }
}

/// `max |a - b| / scale`, where `scale` is clamped away from zero.
pub fn relative_gap(a: &[f64], b: &[f64], scale: f64) -> f64 {
    let gap = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    gap / scale.max(f64::MIN_POSITIVE)
}

/// Largest absolute coordinate over all control points.
pub fn control_scale(curve: &SplineCurve<f64>) -> f64 {
    curve.points().iter().flatten().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn random_curve(
    rng: &mut impl Rng,
    degree: usize,
    dim: usize,
    layout: KnotLayout,
) -> Result<SplineCurve<f64>> {
    let n = degree + 1 + rng.random_range(0..4);
    let m = n + degree + 1;
    let knots: Vec<f64> = match layout {
        KnotLayout::Uniform => {
            let start = rng.random_range(-5.0..5.0);
            let delta = rng.random_range(0.1..3.0);
            (0..m).map(|i| start + delta * i as f64).collect()
        }
        KnotLayout::Clamped => {
            let mut inner: Vec<f64> = (0..m - 2 * (degree + 1))
                .map(|_| rng.random_range(0.02..0.98))
                .collect();
            inner.sort_by(f64::total_cmp);
            std::iter::repeat_n(0.0, degree + 1)
                .chain(inner)
                .chain(std::iter::repeat_n(1.0, degree + 1))
                .collect()
        }
        KnotLayout::Irregular => {
            let mut acc = rng.random_range(-5.0..5.0);
            (0..m)
                .map(|_| {
                    acc += rng.random_range(0.05..2.0);
                    acc
                })
                .collect()
        }
    };
    let points = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect())
        .collect();
    SplineCurve::from_float_knots(degree, &knots, points)
}

fn structure_ok(m: &BasisMatrix<Rational>, degree: usize) -> Result<bool> {
    let sums = m.row_sums();
    let unit = sums[0].is_one() && sums[1..].iter().all(Zero::is_zero);
    let factorial = (1..=degree as i64).fold(Rational::one(), |acc, f| acc * Rational::from_integer(f.into()));
    let integral = m.entries().iter().flatten().all(|x| (x * &factorial).is_integer());
    let kv = KnotVector::uniform(Rational::zero(), Rational::one(), 2 * degree + 2)?;
    let general = general_basis_matrix(&kv, degree, SpanIndex(degree))?;
    Ok(unit && integral && general.entries() == m.entries())
}

fn check_degree(degree: usize, config: &CheckConfig, rng: &mut ChaCha8Rng) -> Result<DegreeReport> {
    let mut exact = uniform_basis_matrix::<Rational>(degree)?;
    if config.inject_fault {
        let mut entries = exact.entries().to_vec();
        entries[0][0] += Rational::new(1.into(), 1000.into());
        exact = BasisMatrix::from_entries(entries, None)?;
    }
    let structure_ok = structure_ok(&exact, degree)?;

    let m = exact.to_scalar::<f64>();
    let kv = KnotVector::uniform(0.0, 1.0, 2 * degree + 2)?;
    let mut basis_error = 0.0f64;
    for _ in 0..config.trials {
        let u: f64 = rng.random();
        let oracle = coxdeboor::basis_all(&kv, degree, &(degree as f64 + u))?;
        let scale = oracle.iter().cloned().fold(0.0, f64::max);
        basis_error = basis_error.max(relative_gap(&m.basis_row(&u), &oracle, scale));
    }

    let layouts = [KnotLayout::Uniform, KnotLayout::Clamped, KnotLayout::Irregular];
    let mut curve_error = 0.0f64;
    for t in 0..config.trials {
        let dim = rng.random_range(1..=3);
        let curve = random_curve(rng, degree, dim, layouts[t % layouts.len()])?;
        let (lo, hi) = curve.domain();
        let tau = rng.random_range(lo..=hi);
        let a = curve.eval_coxdeboor(&tau)?;
        let b = curve.eval_matrix(&tau)?;
        let c = curve.eval_cumulative(&tau)?;
        let scale = control_scale(&curve);
        curve_error = curve_error
            .max(relative_gap(&a, &b, scale))
            .max(relative_gap(&a, &c, scale))
            .max(relative_gap(&b, &c, scale));
    }

    Ok(DegreeReport { degree, structure_ok, basis_error, curve_error })
}

pub fn run_check(config: &CheckConfig) -> Result<CheckReport> {
    if config.degree_max > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree: config.degree_max, cap: MAX_DEGREE });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let degrees = (0..=config.degree_max)
        .map(|k| check_degree(k, config, &mut rng))
        .collect::<Result<_>>()?;
    Ok(CheckReport { degrees })
}
