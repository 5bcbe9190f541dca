//! Explicit constants of the exponential error bound
//!
//! ```text
//! |f(x) - s(x)| <= c1 * sqrt(delta) * omega'^(1/delta) * ||f||_h,   0 < delta <= delta0
//! ```
//!
//! and of the older bound `c1 * omega^(1/delta) * ||f||_h` it improves on.
//! Anything that can overflow (`e^(2 n gamma_n)`, `rho^k k!`, `omega^(1/delta)`)
//! is carried in log domain.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::kernel::{unit_ball_volume, KernelParams};

/// Which of the three regimes of `n - lambda` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentCase {
    /// `n - lambda > 3`
    A,
    /// `n - lambda <= 1`
    B,
    /// `1 < n - lambda <= 3`
    C,
}

impl MomentCase {
    pub fn label(&self) -> &'static str {
        match self {
            MomentCase::A => "a",
            MomentCase::B => "b",
            MomentCase::C => "c",
        }
    }
}

/// `rho` and `Delta_0` bounding the moments of the kernel's spectral measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentConstants {
    pub case_label: MomentCase,
    pub s: u64,
    pub rho: f64,
    pub delta0_const: f64,
}

fn ceil_half(a: i64) -> i64 {
    -((-a).div_euclid(2))
}

fn check_parities(n: usize, lambda: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) || lambda < 2 || !lambda.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "n and lambda must be even integers >= 2, got n={n}, lambda={lambda}"
        )));
    }
    Ok(())
}

/// Product of the integers in `lo..=hi`; one when the range is empty.
fn range_product(lo: u64, hi: u64) -> f64 {
    (lo..=hi).map(|j| j as f64).product()
}

pub fn moment_constants(n: usize, lambda: usize) -> Result<MomentConstants> {
    check_parities(n, lambda)?;
    let m = 1 + lambda as u64 / 2;
    let d = n as i64 - lambda as i64;
    let shift = ceil_half(d - 3);
    Ok(if d > 3 {
        let s = shift as u64;
        let rho = 1.0 + s as f64 / (2 * m + 3) as f64;
        let delta0 = range_product(2 * m + 3, 2 * m + 2 + s) / rho.powi((2 * m + 2) as i32);
        MomentConstants {
            case_label: MomentCase::A,
            s,
            rho,
            delta0_const: delta0,
        }
    } else if d <= 1 {
        let s = (-shift) as u64;
        MomentConstants {
            case_label: MomentCase::B,
            s,
            rho: 1.0,
            delta0_const: 1.0 / range_product(2 * m + 3 - s, 2 * m + 2),
        }
    } else {
        MomentConstants {
            case_label: MomentCase::C,
            s: 0,
            rho: 1.0,
            delta0_const: 1.0,
        }
    })
}

/// `ln Gamma(k' + 1) <= ln Delta_0 + k ln rho + ln Gamma(k + 1)` with
/// `k' = k + (n - lambda - 3) / 2`, valid for `k >= 2m + 2`.
pub fn moment_inequality_check(n: usize, lambda: usize, k: u64) -> Result<bool> {
    let mc = moment_constants(n, lambda)?;
    let m = 1 + lambda as u64 / 2;
    if k < 2 * m + 2 {
        return Err(Error::OutOfRange(format!(
            "moment inequality needs k >= 2m + 2 = {}, got {k}",
            2 * m + 2
        )));
    }
    let kf = k as f64;
    let k_prime = kf + (n as f64 - lambda as f64 - 3.0) / 2.0;
    let lhs = ln_gamma(k_prime + 1.0);
    let rhs = mc.delta0_const.ln() + kf * mc.rho.ln() + ln_gamma(kf + 1.0);
    Ok(lhs <= rhs)
}

/// Log of the moment bound `l sqrt(pi/2) n alpha_n c^(lambda-k) Delta_0 rho^k k!`.
pub fn ln_moment_bound(params: &KernelParams, k: u64) -> Result<f64> {
    let mc = moment_constants(params.n(), params.lambda())?;
    let n = params.n() as f64;
    let kf = k as f64;
    Ok(params.l_const().ln()
        + 0.5 * (std::f64::consts::PI / 2.0).ln()
        + (n * unit_ball_volume(params.n())).ln()
        + (params.lambda() as f64 - kf) * params.c().ln()
        + mc.delta0_const.ln()
        + kf * mc.rho.ln()
        + ln_gamma(kf + 1.0))
}

/// Numerical moment `int |xi|^k dmu(xi)` and its ratio to the closed-form bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentIntegral {
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
}

const QUAD_REL_TOL: f64 = 1e-6;
const QUAD_MAX_PANELS: usize = 1 << 20;

fn simpson<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, panels: usize) -> Result<f64> {
    let h = (b - a) / panels as f64;
    let mut sum = f(a)? + f(b)?;
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h)?;
    }
    Ok(sum * h / 3.0)
}

/// Composite Simpson quadrature on `[a, b]`, doubling panels until the
/// relative change drops below `1e-6`.
pub fn integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64) -> Result<f64> {
    let mut panels = 64;
    let mut prev = simpson(&f, a, b, panels)?;
    let mut change = f64::INFINITY;
    while panels < QUAD_MAX_PANELS {
        panels *= 2;
        let cur = simpson(&f, a, b, panels)?;
        change = (cur - prev).abs() / cur.abs().max(f64::MIN_POSITIVE);
        prev = cur;
        if change < QUAD_REL_TOL && panels >= 256 {
            return Ok(cur);
        }
    }
    Err(Error::QuadratureFailed(change))
}

/// `n alpha_n int_0^inf r^(k+n-1) h^(r) dr` by quadrature, with the ratio to
/// the closed-form moment bound. Diagnostic only.
pub fn moment_integral_numeric(params: &KernelParams, k: u64) -> Result<MomentIntegral> {
    let m = params.order() as u64;
    if k < 2 * m + 2 {
        return Err(Error::OutOfRange(format!(
            "moment integral needs k >= 2m + 2 = {}, got {k}",
            2 * m + 2
        )));
    }
    let n = params.n();
    let nu = params.bessel_order() as f64;
    // in u = c r the integrand is u^(mu - 1) K_nu(u), concentrated below mu + O(sqrt(mu))
    let mu = k as f64 - params.lambda() as f64 + nu;
    let upper = (mu + 60.0 + 10.0 * mu.sqrt()) / params.c();
    let power = (k + n as u64 - 1) as i32;
    let integrand = |r: f64| -> Result<f64> {
        if r == 0.0 {
            return Ok(0.0);
        }
        Ok(r.powi(power) * params.fourier_density(r)?)
    };
    let radial = integrate(integrand, 0.0, upper)?;
    let value = n as f64 * unit_ball_volume(n) * radial;
    let bound = ln_moment_bound(params, k)?.exp();
    Ok(MomentIntegral {
        value,
        bound,
        ratio: value / bound,
    })
}

/// `ln` of the bound on `c_k = (int |xi|^(2k) / (k!)^2 dmu)^(1/2)`.
pub fn ln_c_k_bound(params: &KernelParams, k: u64) -> Result<f64> {
    let m = params.order() as u64;
    if k <= m {
        return Err(Error::OutOfRange(format!("c_k bound needs k > m = {m}, got {k}")));
    }
    let mc = moment_constants(params.n(), params.lambda())?;
    let n = params.n() as f64;
    let kf = k as f64;
    Ok(0.5 * params.l_const().ln()
        + 0.25 * (std::f64::consts::PI / 2.0).ln()
        + 0.5 * (n * unit_ball_volume(params.n())).ln()
        + (params.lambda() as f64 / 2.0 - kf) * params.c().ln()
        + 0.5 * mc.delta0_const.ln()
        + kf * (2.0 * mc.rho).ln())
}

/// `sqrt(l) (pi/2)^(1/4) sqrt(n alpha_n) c^(lambda/2) c^(-k) sqrt(Delta_0) (2 rho)^k`.
pub fn c_k_bound(params: &KernelParams, k: u64) -> Result<f64> {
    Ok(ln_c_k_bound(params, k)?.exp())
}

/// Constants of the `sqrt(delta) omega'^(1/delta)` bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewBoundConstants {
    pub n: usize,
    pub lambda: usize,
    pub m: usize,
    pub c: f64,
    pub l_const: f64,
    pub b0: f64,
    pub moments: MomentConstants,
    pub rho_prime: f64,
    #[serde(rename = "C")]
    pub c_const: f64,
    pub delta_max: f64,
    pub omega_prime: f64,
    pub c1: f64,
}

fn check_b0(b0: f64) -> Result<()> {
    if !(b0 > 0.0) || !b0.is_finite() {
        return Err(Error::InvalidParameter(format!("b0 must be positive, got {b0}")));
    }
    Ok(())
}

pub fn new_constants(params: &KernelParams, b0: f64) -> Result<NewBoundConstants> {
    check_b0(b0)?;
    let moments = moment_constants(params.n(), params.lambda())?;
    let m = params.order();
    let rho_prime = moments.rho / params.c();
    let c_const = (8.0 * rho_prime).max(2.0 / (3.0 * b0));
    let delta_max = 1.0 / (3.0 * c_const * (m as f64 + 1.0));
    let omega_prime = ((2.0f64 / 3.0).ln() / (3.0 * c_const)).exp();
    let n = params.n() as f64;
    let c1 = params.l_const().sqrt()
        * (std::f64::consts::PI / 2.0).powf(0.25)
        * (n * unit_ball_volume(params.n())).sqrt()
        * params.c().powf(params.lambda() as f64 / 2.0)
        * moments.delta0_const.sqrt()
        * (3.0 * c_const).sqrt()
        / (16.0 * std::f64::consts::PI).sqrt();
    Ok(NewBoundConstants {
        n: params.n(),
        lambda: params.lambda(),
        m,
        c: params.c(),
        l_const: params.l_const(),
        b0,
        moments,
        rho_prime,
        c_const,
        delta_max,
        omega_prime,
        c1,
    })
}

impl NewBoundConstants {
    /// `log10(1 - omega')`.
    pub fn log10_one_minus_omega_prime(&self) -> f64 {
        (-self.omega_prime.ln().exp_m1()).log10()
    }
}

/// Checks `0 < delta <= delta0`, allowing for rounding in the upper end.
pub fn check_delta(consts: &NewBoundConstants, delta: f64) -> Result<()> {
    if !(delta > 0.0) || delta > consts.delta_max * (1.0 + 1e-12) {
        return Err(Error::OutOfRange(format!(
            "delta must lie in (0, {}], got {delta}",
            consts.delta_max
        )));
    }
    Ok(())
}

/// `c1 sqrt(delta) omega'^(1/delta) fnorm`.
pub fn error_bound(consts: &NewBoundConstants, delta: f64, fnorm: f64) -> Result<f64> {
    check_delta(consts, delta)?;
    if !(fnorm >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "seminorm must be nonnegative, got {fnorm}"
        )));
    }
    if fnorm == 0.0 {
        return Ok(0.0);
    }
    let ln = consts.c1.ln() + 0.5 * delta.ln() + consts.omega_prime.ln() / delta + fnorm.ln();
    Ok(ln.exp())
}

/// Smallest `k` with `3 C delta k >= 1`; then `1 <= 3 C delta k <= 2`.
pub fn admissible_k(c_const: f64, delta: f64) -> Result<usize> {
    let step = 3.0 * c_const * delta;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::OutOfRange(format!(
            "3 C delta must be positive, got {step}"
        )));
    }
    let mut k = (1.0 / step).ceil().max(1.0);
    // absorb rounding in 1/step, e.g. 1/(3 * 8 / 72) = 3.0000000000000004
    if k > 1.0 && (k - 1.0) * step >= 1.0 - 1e-12 {
        k -= 1.0;
    }
    let product = step * k;
    if !(1.0 - 1e-12..=2.0 + 1e-12).contains(&product) {
        return Err(Error::OutOfRange(format!(
            "no integer k with 1 <= 3 C delta k <= 2 (3 C delta = {step})"
        )));
    }
    Ok(k as usize)
}

/// `gamma_1 = 2`, `gamma_n = 2n (1 + gamma_(n-1))`.
pub fn gamma_seq(n: usize) -> f64 {
    assert!(n >= 1, "gamma_seq is defined for n >= 1");
    (2..=n).fold(2.0, |g, j| 2.0 * j as f64 * (1.0 + g))
}

/// `ln gamma_n`, finite for every `n`.
pub fn ln_gamma_seq(n: usize) -> f64 {
    assert!(n >= 1, "gamma_seq is defined for n >= 1");
    (2..=n).fold(2f64.ln(), |lg, j| {
        (2.0 * j as f64).ln() + lg + (-lg).exp().ln_1p()
    })
}

/// Constants of the older `omega^(1/delta)` bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OldBoundConstants {
    pub gamma_n: f64,
    pub ln_gamma_n: f64,
    /// `ln C_old`; `C_old` itself overflows already for small `n`.
    pub ln_c_old: f64,
    pub c_old: f64,
    /// `omega` in double precision; rounds to 1 when `1 - omega < 2^-53`.
    pub omega: f64,
    pub ln_one_minus_omega: f64,
    pub c1_old: f64,
}

impl OldBoundConstants {
    pub fn log10_one_minus_omega(&self) -> f64 {
        self.ln_one_minus_omega / std::f64::consts::LN_10
    }
}

pub fn old_constants(params: &KernelParams, b0: f64) -> Result<OldBoundConstants> {
    check_b0(b0)?;
    let moments = moment_constants(params.n(), params.lambda())?;
    let n = params.n();
    let nf = n as f64;
    let ln_gamma_n = ln_gamma_seq(n);
    let gamma_n = gamma_seq(n);
    let rho_prime = moments.rho / params.c();
    let ln_first = (2.0 * rho_prime * nf.sqrt()).ln() + 2.0 * nf * ln_gamma_n.exp();
    let ln_c_old = ln_first.max((2.0 / (3.0 * b0)).ln());
    // omega = exp(-x), x = ln(3/2) / (3 C_old gamma_n)
    let ln_x = 1.5f64.ln().ln() - 3f64.ln() - ln_c_old - ln_gamma_n;
    let x = ln_x.exp();
    let ln_one_minus_omega = if ln_x < -30.0 {
        ln_x - 0.5 * x
    } else {
        (-(-x).exp_m1()).ln()
    };
    let c1_old = params.l_const().sqrt()
        * (std::f64::consts::PI / 2.0).powf(0.25)
        * (nf * unit_ball_volume(n)).sqrt()
        * params.c().powf(params.lambda() as f64 / 2.0)
        * moments.delta0_const.sqrt();
    Ok(OldBoundConstants {
        gamma_n,
        ln_gamma_n,
        ln_c_old,
        c_old: ln_c_old.exp(),
        omega: (-x).exp(),
        ln_one_minus_omega,
        c1_old,
    })
}

/// How `lambda` is chosen per dimension in [`compare_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaPolicy {
    /// Keep the base `lambda` for every `n`.
    Fixed,
    /// `lambda = max(2, n - 2)`, which keeps `n - lambda <= 3` and `rho = 1`.
    Track,
}

/// One row of the old-versus-new comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub n: usize,
    pub lambda: usize,
    pub case: MomentCase,
    pub rho: f64,
    pub delta0_const: f64,
    #[serde(rename = "C")]
    pub c_const: f64,
    pub delta_max: f64,
    pub omega_prime: f64,
    pub log10_one_minus_omega_prime: f64,
    pub log10_one_minus_omega: f64,
    #[serde(skip)]
    pub log10_gamma_n: f64,
}

pub fn compare_bounds(
    params_base: &KernelParams,
    b0: f64,
    n_values: &[usize],
    policy: LambdaPolicy,
) -> Result<Vec<CompareRow>> {
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let lambda = match policy {
                LambdaPolicy::Fixed => params_base.lambda(),
                LambdaPolicy::Track => n.saturating_sub(2).max(2),
            };
            let p = KernelParams::with_fourier_constant(n, lambda, params_base.c(), params_base.l_const())?;
            let new = new_constants(&p, b0)?;
            let old = old_constants(&p, b0)?;
            Ok(CompareRow {
                n,
                lambda,
                case: new.moments.case_label,
                rho: new.moments.rho,
                delta0_const: new.moments.delta0_const,
                c_const: new.c_const,
                delta_max: new.delta_max,
                omega_prime: new.omega_prime,
                log10_one_minus_omega_prime: new.log10_one_minus_omega_prime(),
                log10_one_minus_omega: old.log10_one_minus_omega(),
                log10_gamma_n: old.ln_gamma_n / std::f64::consts::LN_10,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn ln_fact(k: u64) -> f64 {
        (2..=k).map(|j| (j as f64).ln()).sum()
    }

    // Gamma(j + 1/2) = (2j)! sqrt(pi) / (4^j j!)
    fn ln_gamma_half(j: u64) -> f64 {
        ln_fact(2 * j) + 0.5 * PI.ln() - j as f64 * 4f64.ln() - ln_fact(j)
    }

    #[test]
    fn moment_constant_examples() {
        let c = moment_constants(4, 2).unwrap();
        assert_eq!(c.case_label, MomentCase::C);
        assert_eq!((c.rho, c.delta0_const), (1.0, 1.0));

        let b = moment_constants(2, 2).unwrap();
        assert_eq!(b.case_label, MomentCase::B);
        assert_eq!(b.s, 1);
        assert_eq!(b.rho, 1.0);
        assert_relative_eq!(b.delta0_const, 1.0 / 6.0, max_relative = 1e-15);

        // rational oracle: 56 / (9/7)^6 = 56 * 7^6 / 9^6
        let a = moment_constants(8, 2).unwrap();
        assert_eq!(a.case_label, MomentCase::A);
        assert_eq!(a.s, 2);
        assert_relative_eq!(a.rho, 9.0 / 7.0, max_relative = 1e-15);
        let exact = 56.0 * 117_649.0 / 531_441.0;
        assert_relative_eq!(a.delta0_const, exact, max_relative = 1e-14);
        assert_relative_eq!(a.delta0_const, 12.397_131_572_460_536, max_relative = 1e-12);

        assert!(moment_constants(3, 2).is_err());
        assert!(moment_constants(2, 0).is_err());
    }

    #[test]
    fn case_boundaries() {
        for n in (2..=20).step_by(2) {
            for lambda in (2..=20).step_by(2) {
                let mc = moment_constants(n, lambda).unwrap();
                let d = n as i64 - lambda as i64;
                let want = if d > 3 {
                    MomentCase::A
                } else if d <= 1 {
                    MomentCase::B
                } else {
                    MomentCase::C
                };
                assert_eq!(mc.case_label, want);
                if mc.case_label != MomentCase::A {
                    assert_eq!(mc.rho, 1.0);
                }
                assert!(mc.rho >= 1.0 && mc.delta0_const > 0.0);
            }
        }
        // with s = 0 both product ranges are empty
        assert_eq!(range_product(7, 6), 1.0);
    }

    #[test]
    fn moment_inequality_examples() {
        // Gamma(5.5) = 52.3428 <= 720 / 6
        assert_relative_eq!(ln_gamma(5.5), ln_gamma_half(5), max_relative = 1e-13);
        assert!(ln_gamma_half(5).exp() < 120.0);
        assert!(moment_inequality_check(2, 2, 6).unwrap());
        assert!(moment_inequality_check(4, 2, 6).unwrap());
        assert!(moment_inequality_check(10, 2, 8).unwrap());
        assert!(matches!(
            moment_inequality_check(2, 2, 5),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn moment_inequality_against_exact_oracle() {
        // k' is always a half-integer; compare with exact half-integer Gamma
        for n in (2..=10).step_by(2) {
            for lambda in (2..=8).step_by(2) {
                let mc = moment_constants(n, lambda).unwrap();
                let m = 1 + lambda as u64 / 2;
                for k in 2 * m + 2..=2 * m + 60 {
                    let twice = 2 * k as i64 + n as i64 - lambda as i64 - 3 + 2;
                    // k' + 1 = twice / 2 = j + 1/2
                    let j = ((twice - 1) / 2) as u64;
                    let lhs = ln_gamma_half(j);
                    let rhs = mc.delta0_const.ln() + k as f64 * mc.rho.ln() + ln_fact(k);
                    assert!(lhs <= rhs);
                    assert!(moment_inequality_check(n, lambda, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn moment_integral_matches_closed_form() {
        // int_0^inf u^(mu-1) K_nu(u) du = 2^(mu-2) Gamma((mu-nu)/2) Gamma((mu+nu)/2)
        let closed = |p: &KernelParams, k: u64| {
            let nu = p.bessel_order() as f64;
            let mu = k as f64 - p.lambda() as f64 + nu;
            let n = p.n() as f64;
            p.l_const()
                * n
                * unit_ball_volume(p.n())
                * p.c().powf(p.lambda() as f64 - k as f64)
                * ((mu - 2.0) * 2f64.ln() + ln_gamma((mu - nu) / 2.0) + ln_gamma((mu + nu) / 2.0)).exp()
        };
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let r = moment_integral_numeric(&p, 6).unwrap();
        assert!(r.value > 0.0);
        assert_relative_eq!(r.value, closed(&p, 6), max_relative = 1e-5);
        assert_relative_eq!(r.ratio, r.value / r.bound, max_relative = 1e-15);
        for &(n, lambda, c, k) in &[(4usize, 2usize, 0.5f64, 9u64), (2, 4, 2.0, 8), (6, 2, 1.0, 12)] {
            let p = KernelParams::new(n, lambda, c).unwrap();
            let r = moment_integral_numeric(&p, k).unwrap();
            assert_relative_eq!(r.value, closed(&p, k), max_relative = 1e-5);
        }
        let p2 = KernelParams::with_fourier_constant(2, 2, 1.0, 2.0).unwrap();
        let r2 = moment_integral_numeric(&p2, 6).unwrap();
        assert_relative_eq!(r2.value, 2.0 * r.value, max_relative = 1e-12);
        assert_relative_eq!(r2.ratio, r.ratio, max_relative = 1e-12);
        assert!(moment_integral_numeric(&p, 5).is_err());
    }

    #[test]
    fn c_k_bound_examples() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let direct = (PI / 2.0).powf(0.25) * (2.0 * PI).sqrt() * (1.0f64 / 6.0).sqrt() * 64.0;
        assert_relative_eq!(c_k_bound(&p, 6).unwrap(), direct, max_relative = 1e-13);
        assert_relative_eq!(c_k_bound(&p, 6).unwrap(), 73.320_303_200_909_17, max_relative = 1e-12);
        let p2 = KernelParams::new(2, 2, 2.0).unwrap();
        // k = lambda + 1 = 3 > m: factor c^(lambda/2 - k) = 2^(-2)
        assert_relative_eq!(
            c_k_bound(&p2, 3).unwrap() / c_k_bound(&p, 3).unwrap(),
            0.25,
            max_relative = 1e-13
        );
        assert!(c_k_bound(&p, 2).is_err());
    }

    #[test]
    fn c_k_bound_versus_quadrature_is_reported() {
        // diagnostic: sqrt(int |xi|^(2k) dmu) / k! against the bound
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        for k in 3..=8u64 {
            let moment = moment_integral_numeric(&p, 2 * k).unwrap();
            let ratio = moment.value.sqrt() / (ln_fact(k).exp() * c_k_bound(&p, k).unwrap());
            assert!(ratio.is_finite() && ratio > 0.0);
        }
    }

    #[test]
    fn new_constants_example() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let k = new_constants(&p, 1.0).unwrap();
        assert_eq!(k.rho_prime, 1.0);
        assert_eq!(k.c_const, 8.0);
        assert_relative_eq!(k.delta_max, 1.0 / 72.0, max_relative = 1e-15);
        assert_relative_eq!(k.omega_prime, (2.0f64 / 3.0).powf(1.0 / 24.0), max_relative = 1e-15);
        assert_relative_eq!(k.omega_prime.ln(), -0.016_894_379_504_506_8, max_relative = 1e-12);
        let c1 = (PI / 2.0).powf(0.25) * (2.0 * PI).sqrt() * (1.0f64 / 6.0).sqrt() * 24f64.sqrt()
            / (16.0 * PI).sqrt();
        assert_relative_eq!(k.c1, c1, max_relative = 1e-14);
        assert_relative_eq!(k.delta_max * 3.0 * k.c_const * (k.m as f64 + 1.0), 1.0, max_relative = 1e-15);

        let far = new_constants(&p, 1e9).unwrap();
        assert_eq!(far.c_const, 8.0);
        let small_b0 = new_constants(&p, 0.01).unwrap();
        assert_relative_eq!(small_b0.c_const, 2.0 / 0.03, max_relative = 1e-15);
        assert!(new_constants(&p, 0.0).is_err());
    }

    #[test]
    fn omega_prime_in_unit_interval_and_monotone() {
        for n in (2..=10).step_by(2) {
            for lambda in (2..=10).step_by(2) {
                for &c in &[0.5, 1.0, 2.0] {
                    let p = KernelParams::new(n, lambda, c).unwrap();
                    let mut prev_c = f64::INFINITY;
                    for &b0 in &[0.5, 1.0, 2.0] {
                        let k = new_constants(&p, b0).unwrap();
                        assert!(k.omega_prime > 0.0 && k.omega_prime < 1.0);
                        assert!(k.c_const <= prev_c);
                        prev_c = k.c_const;
                    }
                }
            }
        }
        // omega' nonincreasing in C: larger rho' (smaller c) gives larger C and omega'
        let p1 = new_constants(&KernelParams::new(2, 2, 1.0).unwrap(), 1.0).unwrap();
        let p2 = new_constants(&KernelParams::new(2, 2, 0.5).unwrap(), 1.0).unwrap();
        assert!(p2.c_const > p1.c_const && p2.omega_prime > p1.omega_prime);
    }

    #[test]
    fn error_bound_examples() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let k = new_constants(&p, 1.0).unwrap();
        assert_eq!(error_bound(&k, k.delta_max, 0.0).unwrap(), 0.0);
        let want = k.c1 * (8.0 / 27.0) / 72f64.sqrt();
        assert_relative_eq!(error_bound(&k, 1.0 / 72.0, 1.0).unwrap(), want, max_relative = 1e-13);
        assert!(error_bound(&k, 0.02, 1.0).is_err());
        assert!(error_bound(&k, 0.0, 1.0).is_err());
        assert!(error_bound(&k, 0.01, -1.0).is_err());
        // log-domain versus direct evaluation
        for i in 1..=50 {
            let d = k.delta_max * i as f64 / 50.0;
            let direct = k.c1 * d.sqrt() * k.omega_prime.powf(1.0 / d) * 2.5;
            assert_relative_eq!(error_bound(&k, d, 2.5).unwrap(), direct, max_relative = 1e-12);
        }
        // decreasing as delta shrinks once the exponential term dominates
        let mut prev = f64::INFINITY;
        for i in (1..=100).rev() {
            let d = k.delta_max * i as f64 / 100.0;
            let v = error_bound(&k, d, 1.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn admissible_k_examples() {
        assert_eq!(admissible_k(8.0, 1.0 / 72.0).unwrap(), 3);
        assert_eq!(admissible_k(8.0, 1.0 / 240.0).unwrap(), 10);
        for i in 1..200 {
            let delta = (1.0 / 72.0) * (1.0 - i as f64 / 200.0);
            let k = admissible_k(8.0, delta).unwrap();
            let prod = 3.0 * 8.0 * delta * k as f64;
            assert!((1.0 - 1e-12..=2.0 + 1e-12).contains(&prod));
            assert!(delta * k as f64 <= 2.0 / 24.0 + 1e-15);
        }
        assert!(admissible_k(8.0, 0.0).is_err());
        assert!(admissible_k(8.0, 1.0).is_err());
    }

    #[test]
    fn gamma_sequence() {
        let want = [2.0, 12.0, 78.0, 632.0, 6330.0, 75972.0];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(gamma_seq(i + 1), *w);
            assert_relative_eq!(ln_gamma_seq(i + 1), w.ln(), max_relative = 1e-14);
        }
        assert!(ln_gamma_seq(400).is_finite());
    }

    #[test]
    fn old_constants_example() {
        let p = KernelParams::new(2, 2, 1.0).unwrap();
        let o = old_constants(&p, 1.0).unwrap();
        assert_eq!(o.gamma_n, 12.0);
        assert_relative_eq!(o.ln_c_old, (2.0 * 2f64.sqrt()).ln() + 48.0, max_relative = 1e-15);
        // 1 - omega = ln(3/2) / (3 * C_old * 12) to first order
        let lin = 1.5f64.ln() / (36.0 * o.ln_c_old.exp());
        assert_relative_eq!(o.ln_one_minus_omega.exp(), lin, max_relative = 1e-12);
        assert_relative_eq!(o.log10_one_minus_omega(), -23.246_029_138, epsilon = 1e-8);
        assert!(o.omega > 0.0 && o.omega <= 1.0);
        let k = new_constants(&p, 1.0).unwrap();
        assert_relative_eq!(o.c1_old * (3.0 * k.c_const).sqrt() / (16.0 * PI).sqrt(), k.c1, max_relative = 1e-14);
    }

    #[test]
    fn old_c_dominates_new() {
        for n in (2..=10).step_by(2) {
            for lambda in (2..=8).step_by(2) {
                for &b0 in &[0.5, 1.0, 2.0] {
                    let p = KernelParams::new(n, lambda, 1.0).unwrap();
                    let o = old_constants(&p, b0).unwrap();
                    let k = new_constants(&p, b0).unwrap();
                    assert!(o.ln_c_old >= k.c_const.ln());
                    assert!(o.ln_one_minus_omega < k.log10_one_minus_omega_prime() * std::f64::consts::LN_10);
                }
            }
        }
    }

    #[test]
    fn comparison_rows() {
        let base = KernelParams::new(2, 2, 1.0).unwrap();
        let rows = compare_bounds(&base, 1.0, &[6, 2, 4], LambdaPolicy::Track).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert_eq!(rows.iter().map(|r| r.lambda).collect::<Vec<_>>(), vec![2, 2, 4]);
        for r in &rows {
            assert_eq!(r.omega_prime, rows[0].omega_prime);
            assert!(r.log10_one_minus_omega < r.log10_one_minus_omega_prime);
        }
        assert_relative_eq!(rows[0].omega_prime, 0.983_247_530_242_037_5, max_relative = 1e-14);
        let fixed = compare_bounds(&base, 1.0, &[2, 4, 6, 8, 10], LambdaPolicy::Fixed).unwrap();
        assert!(fixed.iter().all(|r| r.lambda == 2));
        // n = 8, 10 fall into case (a) with rho > 1, so omega' grows with n
        assert!(fixed[4].omega_prime > fixed[0].omega_prime);
    }
}
