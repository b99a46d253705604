//! B-spline curves in `R^d` with three interchangeable evaluation paths.
//!
//! * [`SplineCurve::eval_coxdeboor`] sums the full Cox-de Boor basis.
//! * [`SplineCurve::eval_matrix`] uses the span's basis matrix on the `k+1`
//!   local control points.
//! * [`SplineCurve::eval_cumulative`] uses the cumulative matrix: the first
//!   local point plus `λ`-weighted differences of consecutive local points.
//!
//! Knots are kept as exact rationals; the per-span matrices are built exactly
//! once at construction and rounded to the point scalar type.

use crate::basismatrix::{
    cumulative_matrix, general_basis_matrix, uniform_basis_matrix, BasisMatrix,
    CumulativeBasisMatrix, MAX_DEGREE,
};
use crate::coxdeboor;
use crate::error::{Error, Result};
use crate::knots::{KnotVector, SpanIndex};
use crate::scalar::{rational_from_f64, Rational, Scalar};

#[derive(Debug, Clone)]
struct SpanMatrices<F> {
    basis: BasisMatrix<F>,
    cumulative: CumulativeBasisMatrix<F>,
}

/// Degree-`k` spline with `N` control points over `M = N + k + 1` knots.
#[derive(Debug, Clone)]
pub struct SplineCurve<F> {
    degree: usize,
    knots: KnotVector<Rational>,
    float_knots: KnotVector<F>,
    points: Vec<Vec<F>>,
    // indexed by span j; None for spans outside the domain or of zero length
    matrices: Vec<Option<SpanMatrices<F>>>,
}

impl<F: Scalar> SplineCurve<F> {
    pub fn new(degree: usize, knots: KnotVector<Rational>, points: Vec<Vec<F>>) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge { degree, cap: MAX_DEGREE });
        }
        let n = points.len();
        if n < degree + 1 {
            return Err(Error::InvalidCurve(format!(
                "degree {degree} needs at least {} control points, got {n}",
                degree + 1
            )));
        }
        if knots.len() != n + degree + 1 {
            return Err(Error::InvalidCurve(format!(
                "{n} control points of degree {degree} need {} knots, got {}",
                n + degree + 1,
                knots.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidCurve("control points must have dimension >= 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidCurve(format!(
                    "control point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if !p.iter().all(Scalar::is_finite) {
                return Err(Error::InvalidCurve(format!("control point {i} is not finite")));
            }
        }
        let (lo, hi) = knots.domain(degree)?;
        if lo >= hi {
            return Err(Error::InvalidCurve(format!("evaluable domain [{lo}, {hi}] is empty")));
        }

        let float_knots = knots.map(|x| Ok(F::from_rational(x)))?;
        let uniform = if knots.is_uniform() {
            Some(uniform_basis_matrix::<Rational>(degree)?)
        } else {
            None
        };
        let mut matrices = vec![None; knots.len() - 1];
        for span in knots.spans(degree) {
            let exact = match &uniform {
                Some(m) => m.clone(),
                None => general_basis_matrix(&knots, degree, span)?,
            };
            let cumulative = cumulative_matrix(&exact).to_scalar();
            matrices[span.index()] = Some(SpanMatrices { basis: exact.to_scalar(), cumulative });
        }
        Ok(Self { degree, knots, float_knots, points, matrices })
    }

    /// Builds a curve from floating-point knots, taken at their exact binary value.
    pub fn from_float_knots(degree: usize, knots: &[F], points: Vec<Vec<F>>) -> Result<Self> {
        let exact = knots
            .iter()
            .map(|x| rational_from_f64(x.to_f64()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, KnotVector::new(exact)?, points)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &KnotVector<Rational> {
        &self.knots
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }

    /// Evaluable parameter range `[τ_k, τ_{M-k-1}]`.
    pub fn domain(&self) -> (F, F) {
        self.float_knots.domain(self.degree).expect("validated at construction")
    }

    /// Locates `tau` and returns `(span, u)`.
    pub fn locate(&self, tau: &F) -> Result<(SpanIndex, F)> {
        let span = self.float_knots.find_span(self.degree, tau)?;
        let u = self.float_knots.normalize(span, tau)?;
        Ok((span, u))
    }

    fn span_matrices(&self, span: SpanIndex) -> &SpanMatrices<F> {
        self.matrices[span.index()]
            .as_ref()
            .expect("find_span returns a non-degenerate span")
    }

    fn local_points(&self, span: SpanIndex) -> &[Vec<F>] {
        let j = span.index();
        &self.points[j - self.degree..=j]
    }

    fn combine<'a>(&self, weights: &[F], points: impl IntoIterator<Item = &'a Vec<F>>) -> Vec<F> {
        let mut out = vec![F::zero(); self.dimension()];
        for (w, p) in weights.iter().zip(points) {
            for (o, x) in out.iter_mut().zip(p) {
                *o = o.clone() + w.clone() * x.clone();
            }
        }
        out
    }

    /// `Σ_i B_{i,k}(τ) P_i` with the recursive basis.
    pub fn eval_coxdeboor(&self, tau: &F) -> Result<Vec<F>> {
        self.float_knots.find_span(self.degree, tau)?;
        let weights = coxdeboor::basis_all(&self.float_knots, self.degree, tau)?;
        Ok(self.combine(&weights, &self.points))
    }

    /// `[1 u … u^k] · M^k(j) · [P_{j-k} … P_j]ᵀ`.
    pub fn eval_matrix(&self, tau: &F) -> Result<Vec<F>> {
        let (span, u) = self.locate(tau)?;
        let row = self.span_matrices(span).basis.basis_row(&u);
        Ok(self.combine(&row, self.local_points(span)))
    }

    /// `P_{j-k} + Σ_{c=1}^{k} λ_c(u) (P_{j-k+c} - P_{j-k+c-1})`.
    pub fn eval_cumulative(&self, tau: &F) -> Result<Vec<F>> {
        let (span, u) = self.locate(tau)?;
        let lambda = self.span_matrices(span).cumulative.lambda_weights_unbounded(&u);
        let local = self.local_points(span);
        let mut out = local[0].clone();
        for (c, w) in lambda.iter().enumerate().skip(1) {
            for ((o, cur), prev) in out.iter_mut().zip(&local[c]).zip(&local[c - 1]) {
                *o = o.clone() + w.clone() * (cur.clone() - prev.clone());
            }
        }
        Ok(out)
    }

    /// `order`-th derivative with respect to `τ`.
    pub fn eval_derivative(&self, tau: &F, order: usize) -> Result<Vec<F>> {
        if order == 0 {
            return Err(Error::InvalidArgument("derivative order must be >= 1".into()));
        }
        let (span, u) = self.locate(tau)?;
        if order > self.degree {
            return Ok(vec![F::zero(); self.dimension()]);
        }
        let row = self.span_matrices(span).basis.derivative_row(&u, order);
        let inv_width = F::one() / self.float_knots.span_width(span);
        let chain = (0..order).fold(F::one(), |acc, _| acc * inv_width.clone());
        let mut out = self.combine(&row, self.local_points(span));
        for x in &mut out {
            *x = x.clone() * chain.clone();
        }
        Ok(out)
    }

    /// `n` equally spaced samples over the domain, both ends included.
    pub fn sample(&self, n: usize) -> Result<Vec<(F, Vec<F>)>> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
        }
        let (lo, hi) = self.domain();
        let steps = F::from_int(n as i64 - 1);
        (0..n)
            .map(|i| {
                let tau = if i == n - 1 {
                    hi.clone()
                } else {
                    lo.clone() + (hi.clone() - lo.clone()) * F::from_int(i as i64) / steps.clone()
                };
                let point = self.eval_matrix(&tau)?;
                Ok((tau, point))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line_cubic() -> SplineCurve<f64> {
        SplineCurve::from_float_knots(
            3,
            &[0., 1., 2., 3., 4., 5., 6., 7.],
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
        )
        .unwrap()
    }

    fn random_curve(rng: &mut ChaCha8Rng, k: usize, dim: usize, clamped: bool) -> SplineCurve<f64> {
        let n = k + 1 + rng.random_range(0..5);
        let m = n + k + 1;
        let knots: Vec<f64> = if clamped {
            let inner = m - 2 * (k + 1);
            let mut cuts: Vec<f64> = (0..inner).map(|_| rng.random_range(0.05..0.95)).collect();
            cuts.sort_by(f64::total_cmp);
            std::iter::repeat_n(0.0, k + 1).chain(cuts).chain(std::iter::repeat_n(1.0, k + 1)).collect()
        } else {
            let mut acc = 0.0;
            (0..m).map(|_| { acc += rng.random_range(0.2..2.0); acc }).collect()
        };
        let points = (0..n).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        SplineCurve::from_float_knots(k, &knots, points).unwrap()
    }

    #[test]
    fn cubic_line_values_by_every_path() {
        let c = line_cubic();
        for (tau, expected) in [(3.5, 1.5), (3.0, 1.0), (4.0, 2.0)] {
            assert!((c.eval_coxdeboor(&tau).unwrap()[0] - expected).abs() < 1e-15);
            assert!((c.eval_matrix(&tau).unwrap()[0] - expected).abs() < 1e-15);
            assert!((c.eval_cumulative(&tau).unwrap()[0] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_curve() {
        let p = vec![0.25, -3.0];
        let c = SplineCurve::from_float_knots(2, &[0., 0.5, 1.5, 2., 4., 5., 6.], vec![p.clone(); 4]).unwrap();
        let (lo, hi) = c.domain();
        for s in 0..=10 {
            let tau = lo + (hi - lo) * s as f64 / 10.0;
            for got in [c.eval_coxdeboor(&tau), c.eval_matrix(&tau), c.eval_cumulative(&tau)] {
                let got = got.unwrap();
                assert!(got.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-14));
            }
            assert!(c.eval_derivative(&tau, 1).unwrap().iter().all(|x| x.abs() < 1e-12));
        }
        assert!(c.sample(5).unwrap().iter().all(|(_, pt)| pt.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-14)));
    }

    #[test]
    fn derivative_of_line_is_one() {
        let c = line_cubic();
        for tau in [3.0, 3.25, 3.5, 3.9, 4.0] {
            assert!((c.eval_derivative(&tau, 1).unwrap()[0] - 1.0).abs() < 1e-13);
            assert_eq!(c.eval_derivative(&tau, 4).unwrap(), vec![0.0]);
        }
        let h = 1e-5;
        let fd = (c.eval_matrix(&(3.5 + h)).unwrap()[0] - c.eval_matrix(&(3.5 - h)).unwrap()[0]) / (2.0 * h);
        assert!((fd - 1.0).abs() < 1e-9);
        assert!(matches!(c.eval_derivative(&3.5, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn derivative_uses_span_width() {
        // quadratic on stretched non-uniform knots, compared with central differences
        let c = SplineCurve::from_float_knots(
            2,
            &[0., 0., 0., 0.3, 1.7, 2.0, 2.0, 2.0],
            vec![vec![0.0, 1.0], vec![2.0, -1.0], vec![1.0, 3.0], vec![4.0, 0.5], vec![-1.0, 2.0]],
        )
        .unwrap();
        let h = 1e-6;
        for tau in [0.1, 0.9, 1.2, 1.9] {
            let d: Vec<f64> = c.eval_derivative(&tau, 1).unwrap();
            let d2: Vec<f64> = c.eval_derivative(&tau, 2).unwrap();
            let plus = c.eval_matrix(&(tau + h)).unwrap();
            let minus = c.eval_matrix(&(tau - h)).unwrap();
            let mid = c.eval_matrix(&tau).unwrap();
            for a in 0..2 {
                assert!((d[a] - (plus[a] - minus[a]) / (2.0 * h)).abs() < 1e-6);
                let second = (plus[a] - 2.0 * mid[a] + minus[a]) / (h * h);
                assert!((d2[a] - second).abs() < 1e-2 * d2[a].abs().max(1.0));
            }
        }
    }

    #[test]
    fn sample_examples() {
        let c = line_cubic();
        let two = c.sample(2).unwrap();
        assert_eq!(two, vec![(3.0, vec![1.0]), (4.0, vec![2.0])]);
        let three = c.sample(3).unwrap();
        assert_eq!(three[1], (3.5, vec![1.5]));
        assert!(matches!(c.sample(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn domain_errors() {
        let c = line_cubic();
        for tau in [2.999, 4.001, f64::NAN, f64::INFINITY] {
            assert!(matches!(c.eval_coxdeboor(&tau), Err(Error::Domain(_))));
            assert!(matches!(c.eval_matrix(&tau), Err(Error::Domain(_))));
            assert!(matches!(c.eval_cumulative(&tau), Err(Error::Domain(_))));
            assert!(matches!(c.eval_derivative(&tau, 1), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn construction_errors() {
        let k = [0., 1., 2., 3., 4., 5., 6., 7.];
        assert!(matches!(
            SplineCurve::from_float_knots(3, &k, vec![vec![0.0]; 3]),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            SplineCurve::from_float_knots(2, &k, vec![vec![0.0]; 4]),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            SplineCurve::from_float_knots(3, &k, vec![vec![0.0], vec![0.0, 1.0], vec![0.0], vec![0.0]]),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            SplineCurve::from_float_knots(3, &k, vec![vec![f64::NAN]; 4]),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            SplineCurve::from_float_knots(1, &[0., 1., 1., 2.], vec![vec![0.0]; 2]),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn convex_hull_in_one_and_two_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let k = rng.random_range(1..5);
            let dim = rng.random_range(1..3);
            let clamped = rng.random_bool(0.5);
            let c = random_curve(&mut rng, k, dim, clamped);
            let (lo, hi) = c.domain();
            let tau = rng.random_range(lo..=hi);
            let (span, _) = c.locate(&tau).unwrap();
            let p = c.eval_matrix(&tau).unwrap();
            let local = c.local_points(span);
            if dim == 1 {
                let min = local.iter().map(|q| q[0]).fold(f64::INFINITY, f64::min);
                let max = local.iter().map(|q| q[0]).fold(f64::NEG_INFINITY, f64::max);
                assert!(p[0] >= min - 1e-9 && p[0] <= max + 1e-9);
            } else {
                assert!(in_hull_2d(&p, local, 1e-9));
            }
        }
    }

    /// Andrew's monotone chain, then a signed-distance test against each edge.
    fn in_hull_2d(p: &[f64], pts: &[Vec<f64>], slack: f64) -> bool {
        let mut v: Vec<(f64, f64)> = pts.iter().map(|q| (q[0], q[1])).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 { Box::new(v.iter()) } else { Box::new(v.iter().rev()) };
            for &pt in iter {
                while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0.0 {
                    hull.pop();
                }
                hull.push(pt);
            }
            hull.pop();
        }
        let q = (p[0], p[1]);
        if hull.len() < 3 {
            // degenerate hull: distance to the segment
            let (a, b) = (v[0], v[v.len() - 1]);
            let len2 = (b.0 - a.0).powi(2) + (b.1 - a.1).powi(2);
            let t = if len2 == 0.0 { 0.0 } else { (((q.0 - a.0) * (b.0 - a.0) + (q.1 - a.1) * (b.1 - a.1)) / len2).clamp(0.0, 1.0) };
            let d = ((a.0 + t * (b.0 - a.0) - q.0).powi(2) + (a.1 + t * (b.1 - a.1) - q.1).powi(2)).sqrt();
            return d <= slack;
        }
        (0..hull.len()).all(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % hull.len()];
            let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
            cross(a, b, q) / len >= -slack
        })
    }

    #[test]
    fn linear_precision() {
        for k in 1..=6 {
            let n = k + 6;
            let knots: Vec<f64> = (0..n + k + 1).map(|i| 0.5 * i as f64).collect();
            let points = (0..n).map(|i| vec![i as f64]).collect();
            let c = SplineCurve::from_float_knots(k, &knots, points).unwrap();
            let samples = c.sample(101).unwrap();
            let (xs, ys): (Vec<f64>, Vec<f64>) = samples.iter().map(|(t, p)| (*t, p[0])).unzip();
            let mean_x = xs.iter().sum::<f64>() / xs.len() as f64;
            let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
            let slope = sxy / sxx;
            let resid = xs.iter().zip(&ys).map(|(x, y)| (y - mean_y - slope * (x - mean_x)).abs()).fold(0.0, f64::max);
            assert!(resid <= 1e-9, "k={k} residual {resid}");
        }
    }

    #[test]
    fn evaluates_in_f32() {
        let c = SplineCurve::<f32>::from_float_knots(
            3,
            &[0., 1., 2., 3., 4., 5., 6., 7.],
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
        )
        .unwrap();
        assert!((c.eval_matrix(&3.5f32).unwrap()[0] - 1.5).abs() < 1e-6);
        assert!((c.eval_cumulative(&3.5f32).unwrap()[0] - 1.5).abs() < 1e-6);
    }

    #[test]
    fn evaluates_exactly_in_rationals() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let knots = KnotVector::new((0..8).map(|i| q(i, 1)).collect()).unwrap();
        let c = SplineCurve::<Rational>::new(3, knots, vec![vec![q(0, 1)], vec![q(1, 1)], vec![q(5, 1)], vec![q(3, 1)]]).unwrap();
        for n in 0..=12 {
            let tau = q(3, 1) + q(n, 12);
            let a = c.eval_coxdeboor(&tau).unwrap();
            assert_eq!(a, c.eval_matrix(&tau).unwrap());
            assert_eq!(a, c.eval_cumulative(&tau).unwrap());
        }
    }

    #[test]
    fn curves_are_shareable_across_threads() {
        let c = std::sync::Arc::new(line_cubic());
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let c = c.clone();
                std::thread::spawn(move || c.eval_matrix(&(3.0 + t as f64 / 4.0)).unwrap()[0])
            })
            .collect();
        let got: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert_eq!(got, vec![1.0, 1.25, 1.5, 1.75]);
    }
}
