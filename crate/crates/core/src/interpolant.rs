//! h-spline interpolation with polynomial augmentation.
//!
//! The interpolant is `s(x) = p(x) + sum_j c_j h(x - x_j)` with `p` of degree
//! `<= m - 1`, subject to `sum_j c_j q(x_j) = 0` for every such `q`. Fitting
//! solves the saddle-point system
//!
//! ```text
//! [ A   P ] [c]   [f]
//! [ P^T 0 ] [d] = [0]
//! ```
//!
//! The polynomial block uses monomials in centered, scaled coordinates
//! `u = (x - shift) / scale` so that its columns stay of order one.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::linalg::SymmetricIndefinite;
use crate::polyinterp::{monomial, MonomialBasis};
use crate::simplex::Simplex;

/// Above this condition estimate the fit switches to a least-squares solve.
pub const LEAST_SQUARES_CONDITION: f64 = 1e12;

/// Relative singular value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Iterative refinement steps after the initial solve; a step is kept only
/// if it lowers the residual.
const REFINEMENT_STEPS: usize = 3;

/// Pairwise distinct points in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    n: usize,
    points: Vec<Vec<f64>>,
}

impl CenterSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::InsufficientData("empty center set".into()))?;
        if n == 0 {
            return Err(Error::InvalidParameter("zero-dimensional centers".into()));
        }
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("non-finite center coordinate".into()));
            }
        }
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                if a == b {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate center {a:?}"
                    )));
                }
            }
        }
        Ok(Self { n, points })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn normalization(&self) -> (Vec<f64>, f64) {
        let inv = 1.0 / self.points.len() as f64;
        let mut shift = vec![0.0; self.n];
        for p in &self.points {
            for (s, x) in shift.iter_mut().zip(p) {
                *s += x * inv;
            }
        }
        let scale = self
            .points
            .iter()
            .map(|p| crate::kernel::distance(p, &shift))
            .fold(0.0, f64::max);
        (shift, if scale > 0.0 { scale } else { 1.0 })
    }
}

fn scaled(x: &[f64], shift: &[f64], scale: f64) -> Vec<f64> {
    x.iter().zip(shift).map(|(a, s)| (a - s) / scale).collect()
}

fn collocation(points: &[Vec<f64>], basis: &MonomialBasis, shift: &[f64], scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(points.len(), basis.len(), |i, j| {
        monomial(&basis.exponents()[j], &scaled(&points[i], shift, scale))
    })
}

fn kernel_matrix(params: &KernelParams, points: &[Vec<f64>]) -> DMatrix<f64> {
    let n = points.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = params.kernel_between(&points[i], &points[j]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Outcome of a polynomial unisolvency test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnisolvencyReport {
    pub unisolvent: bool,
    pub rank: usize,
    pub required: usize,
    pub condition: f64,
}

/// Whether the centers determine polynomials of total degree `<= degree`.
pub fn unisolvency_check(centers: &CenterSet, degree: usize) -> UnisolvencyReport {
    let basis = MonomialBasis::new(centers.dim(), degree);
    let (shift, scale) = centers.normalization();
    let p = collocation(centers.points(), &basis, &shift, scale);
    let sv = p.singular_values();
    let max = sv.max();
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * max).count();
    let min = if sv.is_empty() { 0.0 } else { sv.min() };
    let required = basis.len();
    UnisolvencyReport {
        unisolvent: rank == required && centers.len() >= required,
        rank,
        required,
        condition: if min > 0.0 { max / min } else { f64::INFINITY },
    }
}

/// How the saddle-point system was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveMethod {
    SymmetricIndefinite,
    LeastSquares,
}

/// A fitted h-spline interpolant.
#[derive(Debug, Clone)]
pub struct HSpline {
    params: KernelParams,
    centers: CenterSet,
    kernel_coeffs: Vec<f64>,
    poly_coeffs: Vec<f64>,
    poly_basis: MonomialBasis,
    shift: Vec<f64>,
    scale: f64,
    condition: f64,
    method: SolveMethod,
}

impl HSpline {
    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn centers(&self) -> &CenterSet {
        &self.centers
    }

    pub fn kernel_coeffs(&self) -> &[f64] {
        &self.kernel_coeffs
    }

    /// Coefficients of the graded-lex monomials in `(x - shift) / scale`.
    pub fn poly_coeffs(&self) -> &[f64] {
        &self.poly_coeffs
    }

    pub fn poly_basis(&self) -> &MonomialBasis {
        &self.poly_basis
    }

    pub fn poly_normalization(&self) -> (&[f64], f64) {
        (&self.shift, self.scale)
    }

    /// 2-norm condition estimate of the saddle-point matrix.
    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    pub fn method(&self) -> SolveMethod {
        self.method
    }

    /// Polynomial part `p(x)`.
    pub fn poly_value(&self, x: &[f64]) -> f64 {
        let u = scaled(x, &self.shift, self.scale);
        self.poly_basis
            .exponents()
            .iter()
            .zip(&self.poly_coeffs)
            .map(|(a, d)| d * monomial(a, &u))
            .sum()
    }

    /// `s(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.centers.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.centers.dim(),
                got: x.len(),
            });
        }
        let kernel: f64 = self
            .kernel_coeffs
            .iter()
            .zip(self.centers.points())
            .map(|(c, y)| c * self.params.kernel_between(x, y))
            .sum();
        Ok(self.poly_value(x) + kernel)
    }

    /// `sqrt(c^T A c)` for this spline's kernel coefficients.
    pub fn native_seminorm(&self) -> Result<f64> {
        native_seminorm(&self.params, &self.centers, &self.kernel_coeffs)
    }
}

/// `[[A, P], [P^T, 0]]` with `P` in normalized coordinates.
fn saddle_matrix(
    params: &KernelParams,
    centers: &CenterSet,
) -> (DMatrix<f64>, MonomialBasis, Vec<f64>, f64) {
    let n_pts = centers.len();
    let basis = MonomialBasis::new(centers.dim(), params.order() - 1);
    let (shift, scale) = centers.normalization();
    let p = collocation(centers.points(), &basis, &shift, scale);
    let a = kernel_matrix(params, centers.points());
    let q = basis.len();
    let mut system = DMatrix::zeros(n_pts + q, n_pts + q);
    system.view_mut((0, 0), (n_pts, n_pts)).copy_from(&a);
    system.view_mut((0, n_pts), (n_pts, q)).copy_from(&p);
    system.view_mut((n_pts, 0), (q, n_pts)).copy_from(&p.transpose());
    (system, basis, shift, scale)
}

fn svd_condition(sv: &DVector<f64>) -> f64 {
    let smin = sv.min();
    if smin > 0.0 {
        sv.max() / smin
    } else {
        f64::INFINITY
    }
}

/// 2-norm condition estimate of the interpolation matrix, as reported by [`fit`].
pub fn saddle_condition(params: &KernelParams, centers: &CenterSet) -> Result<f64> {
    if centers.dim() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            got: centers.dim(),
        });
    }
    let (system, ..) = saddle_matrix(params, centers);
    Ok(svd_condition(&system.singular_values()))
}

/// Solves for the interpolant of `values` at `centers`.
pub fn fit(params: &KernelParams, centers: &CenterSet, values: &[f64]) -> Result<HSpline> {
    let n_pts = centers.len();
    if values.len() != n_pts {
        return Err(Error::DimensionMismatch {
            expected: n_pts,
            got: values.len(),
        });
    }
    if centers.dim() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            got: centers.dim(),
        });
    }
    let degree = params.order() - 1;
    let report = unisolvency_check(centers, degree);
    if !report.unisolvent {
        return Err(Error::NotUnisolvent {
            degree,
            rank: report.rank,
            required: report.required,
        });
    }
    let (system, basis, shift, scale) = saddle_matrix(params, centers);
    let q = basis.len();
    let size = n_pts + q;
    let mut rhs = DVector::zeros(size);
    for (r, v) in rhs.iter_mut().zip(values) {
        *r = *v;
    }

    let svd = system.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let condition = svd_condition(&svd.singular_values);
    if !smax.is_finite() {
        return Err(Error::Singular {
            condition,
            context: "non-finite entries in the interpolation matrix".into(),
        });
    }

    let bk;
    let method = if condition <= LEAST_SQUARES_CONDITION {
        bk = Some(SymmetricIndefinite::new(&system)?);
        SolveMethod::SymmetricIndefinite
    } else {
        bk = None;
        SolveMethod::LeastSquares
    };
    let eps = f64::EPSILON * size as f64 * smax;
    let solve = |b: &DVector<f64>| -> Result<DVector<f64>> {
        match &bk {
            Some(f) => Ok(f.solve(b)),
            None => svd.solve(b, eps).map_err(|e| Error::Singular {
                condition,
                context: e.to_string(),
            }),
        }
    };
    let mut sol = solve(&rhs)?;
    let mut residual = &rhs - &system * &sol;
    for _ in 0..REFINEMENT_STEPS {
        let candidate = &sol + solve(&residual)?;
        let r = &rhs - &system * &candidate;
        if !(r.norm() < residual.norm()) {
            break;
        }
        sol = candidate;
        residual = r;
    }
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular {
            condition,
            context: "non-finite interpolation coefficients".into(),
        });
    }
    Ok(HSpline {
        params: *params,
        centers: centers.clone(),
        kernel_coeffs: sol.rows(0, n_pts).iter().copied().collect(),
        poly_coeffs: sol.rows(n_pts, q).iter().copied().collect(),
        poly_basis: basis,
        shift,
        scale,
        condition,
        method,
    })
}

/// Largest moment `|sum_j c_j q(y_j)|` over monomials `q` of degree `<= m - 1`
/// in normalized coordinates.
pub fn moment_residual(params: &KernelParams, centers: &CenterSet, coeffs: &[f64]) -> f64 {
    let basis = MonomialBasis::new(centers.dim(), params.order() - 1);
    let (shift, scale) = centers.normalization();
    let p = collocation(centers.points(), &basis, &shift, scale);
    let c = DVector::from_column_slice(coeffs);
    (p.transpose() * c).amax()
}

/// `sqrt(c^T A c)`, the native-space seminorm of `sum_j c_j h(. - y_j)`.
pub fn native_seminorm(params: &KernelParams, centers: &CenterSet, coeffs: &[f64]) -> Result<f64> {
    if coeffs.len() != centers.len() {
        return Err(Error::DimensionMismatch {
            expected: centers.len(),
            got: coeffs.len(),
        });
    }
    let c = DVector::from_column_slice(coeffs);
    let norm = c.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let residual = moment_residual(params, centers, coeffs);
    let tolerance = 1e-8 * norm;
    if residual > tolerance {
        return Err(Error::MomentViolation {
            residual,
            tolerance,
        });
    }
    let a = kernel_matrix(params, centers.points());
    let form = c.dot(&(&a * &c));
    if form < -1e-10 * norm * norm {
        return Err(Error::NegativeQuadraticForm(form));
    }
    Ok(form.max(0.0).sqrt())
}

/// The quadratic form `c^T A c` without checks.
pub fn quadratic_form(params: &KernelParams, points: &[Vec<f64>], coeffs: &[f64]) -> f64 {
    let a = kernel_matrix(params, points);
    let c = DVector::from_column_slice(coeffs);
    c.dot(&(&a * &c))
}

/// Projects `coeffs` onto the subspace satisfying the moment conditions.
pub fn project_to_moment_free(params: &KernelParams, centers: &CenterSet, coeffs: &[f64]) -> Vec<f64> {
    let basis = MonomialBasis::new(centers.dim(), params.order() - 1);
    let (shift, scale) = centers.normalization();
    let p = collocation(centers.points(), &basis, &shift, scale);
    let svd = p.svd(true, false);
    let smax = svd.singular_values.max();
    let u = svd.u.expect("left singular vectors requested");
    let range: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] > RANK_TOL * smax)
        .collect();
    if range.len() >= centers.len() {
        // P^T has a trivial kernel
        return vec![0.0; centers.len()];
    }
    let q = u.select_columns(&range);
    let c = DVector::from_column_slice(coeffs);
    let mut out = &c - &q * (q.transpose() * &c);
    // second pass removes the rounding left by the first
    out -= &q * (q.transpose() * &out);
    out.iter().copied().collect()
}

/// A function `f = sum_j c_j h(. - y_j) + p` of the native space.
#[derive(Debug, Clone, PartialEq)]
pub struct NativeFunction {
    params: KernelParams,
    sources: Vec<Vec<f64>>,
    coeffs: Vec<f64>,
    poly_exponents: Vec<Vec<usize>>,
    poly_coeffs: Vec<f64>,
    seminorm: f64,
    seed: u64,
}

impl NativeFunction {
    pub fn sources(&self) -> &[Vec<f64>] {
        &self.sources
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Polynomial part as `(exponent, coefficient)` pairs in raw coordinates.
    pub fn poly_terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.poly_exponents
            .iter()
            .map(|e| e.as_slice())
            .zip(self.poly_coeffs.iter().copied())
    }

    /// `sqrt(c^T A c)` of the kernel part.
    pub fn seminorm(&self) -> f64 {
        self.seminorm
    }

    /// Seed that produced the accepted draw.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let params = &self.params;
        let kernel: f64 = self
            .coeffs
            .iter()
            .zip(&self.sources)
            .map(|(c, y)| c * params.kernel_between(x, y))
            .sum();
        let poly: f64 = self.poly_terms().map(|(a, d)| d * monomial(a, x)).sum();
        kernel + poly
    }
}

const SYNTH_ATTEMPTS: u64 = 10;

/// Draws a random native-space function with sources in `domain`.
///
/// Sources are uniform in the simplex, kernel coefficients are standard normal
/// projected onto the moment-free subspace, and the polynomial part has
/// standard normal coefficients. The generator is `ChaCha8Rng::seed_from_u64`;
/// a degenerate draw is retried with seed `seed + attempt * 0x9E37_79B9_7F4A_7C15`.
pub fn synth_native_function(
    params: &KernelParams,
    seed: u64,
    source_count: usize,
    domain: &Simplex,
) -> Result<NativeFunction> {
    let n = params.n();
    if domain.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: domain.dim(),
        });
    }
    let poly_basis = MonomialBasis::new(n, params.order() - 1);
    if source_count < poly_basis.len() + 1 {
        return Err(Error::InvalidParameter(format!(
            "source_count must be >= {}, got {source_count}",
            poly_basis.len() + 1
        )));
    }
    for attempt in 0..SYNTH_ATTEMPTS {
        let s = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let sources: Vec<Vec<f64>> = (0..source_count)
            .map(|_| {
                let mut w: Vec<f64> = (0..=n)
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let t: f64 = w.iter().sum();
                w.iter_mut().for_each(|v| *v /= t);
                domain.point_from_barycentric(&w)
            })
            .collect();
        let raw: Vec<f64> = (0..source_count).map(|_| rng.sample(StandardNormal)).collect();
        let poly_coeffs: Vec<f64> = (0..poly_basis.len()).map(|_| rng.sample(StandardNormal)).collect();
        let Ok(centers) = CenterSet::new(sources.clone()) else {
            continue;
        };
        if !unisolvency_check(&centers, params.order() - 1).unisolvent {
            continue;
        }
        let coeffs = project_to_moment_free(params, &centers, &raw);
        let raw_norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let norm = coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-6 * raw_norm) {
            continue;
        }
        let seminorm = native_seminorm(params, &centers, &coeffs)?;
        return Ok(NativeFunction {
            params: *params,
            sources,
            coeffs,
            poly_exponents: poly_basis.exponents().to_vec(),
            poly_coeffs,
            seminorm,
            seed: s,
        });
    }
    Err(Error::InvalidParameter(format!(
        "no admissible native function after {SYNTH_ATTEMPTS} draws from seed {seed}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{equally_spaced_nodes, regular_simplex};

    fn triangle_centers(k: usize, diam: f64) -> CenterSet {
        let s = regular_simplex(2, diam).unwrap();
        CenterSet::new(equally_spaced_nodes(&s, k).unwrap().nodes().to_vec()).unwrap()
    }

    #[test]
    fn center_set_validation() {
        assert!(CenterSet::new(vec![]).is_err());
        assert!(CenterSet::new(vec![vec![0.0, 1.0], vec![0.0, 1.0]]).is_err());
        assert!(CenterSet::new(vec![vec![0.0, 1.0], vec![0.0]]).is_err());
    }

    #[test]
    fn unisolvency_examples() {
        let tri = CenterSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(unisolvency_check(&tri, 1).unisolvent);
        let line = CenterSet::new((0..4).map(|i| vec![i as f64, 2.0 * i as f64]).collect()).unwrap();
        let r = unisolvency_check(&line, 1);
        assert!(!r.unisolvent);
        assert_eq!(r.rank, 2);
        assert!(unisolvency_check(&triangle_centers(2, 1.0), 2).unisolvent);
        assert!(!unisolvency_check(&tri, 2).unisolvent);
    }

    #[test]
    fn fit_rejects_bad_input() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let line = CenterSet::new((0..4).map(|i| vec![i as f64, 2.0 * i as f64]).collect()).unwrap();
        assert!(matches!(
            fit(&p, &line, &[1.0; 4]),
            Err(Error::NotUnisolvent { .. })
        ));
        let c = triangle_centers(2, 1.0);
        assert!(fit(&p, &c, &[1.0; 3]).is_err());
        let spline = fit(&p, &c, &[1.0; 6]).unwrap();
        assert!(spline.evaluate(&[0.0]).is_err());
    }

    #[test]
    fn zero_data_gives_zero_spline() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let spline = fit(&p, &triangle_centers(3, 1.0), &[0.0; 10]).unwrap();
        assert!(spline.kernel_coeffs().iter().all(|&c| c == 0.0));
        assert!(spline.poly_coeffs().iter().all(|&c| c == 0.0));
        assert_eq!(spline.evaluate(&[0.3, 0.2]).unwrap(), 0.0);
    }

    #[test]
    fn interpolates_data_and_reproduces_linear() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let c = triangle_centers(2, 1.0);
        let f = |x: &[f64]| 1.5 * x[0] - 0.25;
        let values: Vec<f64> = c.points().iter().map(|x| f(x)).collect();
        let spline = fit(&p, &c, &values).unwrap();
        assert!(spline.kernel_coeffs().iter().all(|v| v.abs() <= 1e-8));
        for (x, v) in c.points().iter().zip(&values) {
            assert!((spline.evaluate(x).unwrap() - v).abs() <= 1e-8);
        }
        let x = [0.31, 0.17];
        assert!((spline.evaluate(&x).unwrap() - f(&x)).abs() <= 1e-8);

        let wavy: Vec<f64> = c.points().iter().map(|x| (3.0 * x[0]).sin() + x[1] * x[1]).collect();
        let spline = fit(&p, &c, &wavy).unwrap();
        for (x, v) in c.points().iter().zip(&wavy) {
            assert!((spline.evaluate(x).unwrap() - v).abs() <= 1e-8 * (1.0 + 1.0));
        }
        assert!(moment_residual(&p, &c, spline.kernel_coeffs()) < 1e-10);
    }

    #[test]
    fn seminorm_matches_dense_quadratic_form() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let c = triangle_centers(2, 1.0);
        assert_eq!(native_seminorm(&p, &c, &[0.0; 6]).unwrap(), 0.0);
        let coeffs = project_to_moment_free(&p, &c, &[0.3, -1.1, 0.7, 0.2, 0.9, -0.4]);
        let v = native_seminorm(&p, &c, &coeffs).unwrap();
        // independent oracle: explicit double sum
        let pts = c.points();
        let mut form = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                let r = ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt();
                let s = r * r + 1.0;
                form += coeffs[i] * coeffs[j] * s * 0.5 * s.ln();
            }
        }
        assert!((v - form.sqrt()).abs() <= 1e-12 * form.sqrt());
        let scaled: Vec<f64> = coeffs.iter().map(|x| -3.0 * x).collect();
        assert!((native_seminorm(&p, &c, &scaled).unwrap() - 3.0 * v).abs() <= 1e-12 * v);
        assert!(matches!(
            native_seminorm(&p, &c, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(Error::MomentViolation { .. })
        ));
    }

    #[test]
    fn synth_is_deterministic_and_moment_free() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let dom = regular_simplex(2, 0.5).unwrap();
        let a = synth_native_function(&p, 42, 12, &dom).unwrap();
        let b = synth_native_function(&p, 42, 12, &dom).unwrap();
        assert_eq!(a, b);
        let bits_a: Vec<u64> = a.coeffs().iter().map(|v| v.to_bits()).collect();
        let bits_b: Vec<u64> = b.coeffs().iter().map(|v| v.to_bits()).collect();
        assert_eq!(bits_a, bits_b);
        for alpha in MonomialBasis::new(2, 1).exponents() {
            let m: f64 = a.coeffs().iter().zip(a.sources()).map(|(c, y)| c * monomial(alpha, y)).sum();
            assert!(m.abs() < 1e-10);
        }
        assert!(a.sources().iter().all(|y| dom.contains(y).unwrap()));
        assert!(synth_native_function(&p, 1, 3, &dom).is_err());
    }

    #[test]
    fn native_function_reproduced_at_its_sources() {
        for &(lambda, c) in &[(2usize, 1.0f64), (4, 0.5)] {
            let p = KernelParams::new(2, lambda, c).unwrap();
            let dom = regular_simplex(2, 1.0).unwrap();
            let f = synth_native_function(&p, 7, 15, &dom).unwrap();
            let centers = CenterSet::new(f.sources().to_vec()).unwrap();
            let values: Vec<f64> = f.sources().iter().map(|y| f.eval(y)).collect();
            let spline = fit(&p, &centers, &values).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..50 {
                let x = [rng.random_range(-0.2..1.2), rng.random_range(-0.2..1.0)];
                assert!((spline.evaluate(&x).unwrap() - f.eval(&x)).abs() <= 1e-7);
            }
            let s = spline.native_seminorm().unwrap();
            assert!((s - f.seminorm()).abs() <= 1e-6 * f.seminorm());
        }
    }
}
