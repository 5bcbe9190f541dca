//! The shifted surface spline kernel
//!
//! ```text
//! h(x) = (-1)^m (|x|^2 + c^2)^(lambda/2) * 1/2 * ln(|x|^2 + c^2),   m = 1 + lambda/2
//! ```
//!
//! for even dimension `n` and even `lambda`, together with its generalized
//! Fourier transform `l * |t|^(-lambda-n) * (c|t|)^nu K_nu(c|t|)`, `nu = (n+lambda)/2`.

mod bessel;

pub use bessel::bessel_k_int;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// Parameters of a shifted surface spline kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    n: usize,
    lambda: usize,
    c: f64,
    l_const: f64,
}

impl KernelParams {
    /// Builds validated parameters with the Fourier constant `l(lambda, n) = 1`.
    pub fn new(n: usize, lambda: usize, c: f64) -> Result<Self> {
        Self::with_fourier_constant(n, lambda, c, 1.0)
    }

    pub fn with_fourier_constant(n: usize, lambda: usize, c: f64, l_const: f64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "dimension n must be an even integer >= 2, got {n}"
            )));
        }
        if lambda < 2 || !lambda.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be an even integer >= 2, got {lambda}"
            )));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shift c must be positive and finite, got {c}"
            )));
        }
        if !(l_const > 0.0) || !l_const.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Fourier constant must be positive and finite, got {l_const}"
            )));
        }
        Ok(Self {
            n,
            lambda,
            c,
            l_const,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn l_const(&self) -> f64 {
        self.l_const
    }

    /// Order of conditional positive definiteness, `m = 1 + lambda/2`.
    pub fn order(&self) -> usize {
        1 + self.lambda / 2
    }

    /// Order of the Bessel function in the Fourier transform, `(n + lambda)/2`.
    pub fn bessel_order(&self) -> u32 {
        ((self.n + self.lambda) / 2) as u32
    }

    /// Kernel value at radius `r = |x|`.
    pub fn kernel_value(&self, r: f64) -> f64 {
        let s = r * r + self.c * self.c;
        let sign = if self.order().is_multiple_of(2) { 1.0 } else { -1.0 };
        // near s = 1 the logarithm is small; form s - 1 without cancelling against 1
        let ln = if (0.5..2.0).contains(&s) {
            ((self.c - 1.0) * (self.c + 1.0) + r * r).ln_1p()
        } else {
            s.ln()
        };
        sign * s.powi((self.lambda / 2) as i32) * 0.5 * ln
    }

    /// Kernel value at the difference `x - y` of two points.
    pub fn kernel_between(&self, x: &[f64], y: &[f64]) -> f64 {
        self.kernel_value(distance(x, y))
    }

    /// Radial Fourier density `h^(t)` at frequency magnitude `rho_freq > 0`.
    pub fn fourier_density(&self, rho_freq: f64) -> Result<f64> {
        if !(rho_freq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "frequency magnitude must be positive, got {rho_freq}"
            )));
        }
        let nu = self.bessel_order();
        let t = self.c * rho_freq;
        let k = bessel_k_int(nu, t)?;
        let log_scale = -((self.lambda + self.n) as f64) * rho_freq.ln() + nu as f64 * t.ln();
        let v = self.l_const * log_scale.exp() * k;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(format!(
                "Fourier density at frequency {rho_freq:e}"
            )))
        }
    }
}

/// Free-function form of [`KernelParams::order`].
pub fn order(params: &KernelParams) -> usize {
    params.order()
}

/// Free-function form of [`KernelParams::kernel_value`].
pub fn kernel_value(params: &KernelParams, r: f64) -> f64 {
    params.kernel_value(r)
}

/// Free-function form of [`KernelParams::fourier_density`].
pub fn fourier_density(params: &KernelParams, rho_freq: f64) -> Result<f64> {
    params.fourier_density(rho_freq)
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma(half + 1.0)
}

/// Checks `sqrt((2k)!) / k! <= 2^k` in log domain.
pub fn sqrt_factorial_inequality_check(k: u64) -> bool {
    let kf = k as f64;
    0.5 * ln_gamma(2.0 * kf + 1.0) - ln_gamma(kf + 1.0) <= kf * std::f64::consts::LN_2
}

pub(crate) fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
