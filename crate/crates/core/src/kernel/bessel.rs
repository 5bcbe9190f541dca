//! Modified Bessel functions of the second kind for integer order.
//!
//! `K_0` and `K_1` come from the power series below `t = 2` and from Steed's
//! continued fraction (CF2, Thompson-Barnett form) above it; higher orders use
//! the upward recurrence, which is stable for `K`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_CUTOVER: f64 = 2.0;
const MAX_ITER: usize = 10_000;

/// `K_nu(t)` for integer `nu >= 0` and `t > 0`.
pub fn bessel_k_int(nu: u32, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Bessel K argument must be positive and finite, got {t}"
        )));
    }
    let (k0, k1) = k0_k1(t);
    if nu == 0 {
        return finite_or_overflow(k0, nu, t);
    }
    let mut prev = k0;
    let mut cur = k1;
    for j in 1..nu {
        let next = prev + (2.0 * j as f64 / t) * cur;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            break;
        }
    }
    finite_or_overflow(cur, nu, t)
}

fn finite_or_overflow(v: f64, nu: u32, t: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("K_{nu}({t:e})")))
    }
}

/// Returns `(K_0(t), K_1(t))`.
pub(crate) fn k0_k1(t: f64) -> (f64, f64) {
    if t <= SERIES_CUTOVER {
        k0_k1_series(t)
    } else {
        k0_k1_continued_fraction(t)
    }
}

fn k0_k1_series(t: f64) -> (f64, f64) {
    let half = 0.5 * t;
    let log_half = half.ln();
    let q = half * half;

    // K_0 = -ln(t/2) I_0 + sum psi(k+1) q^k / (k!)^2
    // K_1 = 1/t + ln(t/2) I_1 - (t/4) sum (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
    let mut term0 = 1.0; // q^k / (k!)^2
    let mut term1 = 1.0; // q^k / (k! (k+1)!)
    let mut psi_k1 = -EULER_GAMMA; // psi(k+1)
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    let mut sum0 = 0.0;
    let mut sum1 = 0.0;
    for k in 0..MAX_ITER {
        let psi_k2 = psi_k1 + 1.0 / (k as f64 + 1.0);
        i0 += term0;
        i1 += term1;
        sum0 += psi_k1 * term0;
        sum1 += (psi_k1 + psi_k2) * term1;
        let kf = k as f64 + 1.0;
        term0 *= q / (kf * kf);
        term1 *= q / (kf * (kf + 1.0));
        psi_k1 = psi_k2;
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1 {
            break;
        }
    }
    let i1 = half * i1;
    let k0 = -log_half * i0 + sum0;
    let k1 = 1.0 / t + log_half * i1 - 0.5 * half * sum1;
    (k0, k1)
}

fn k0_k1_continued_fraction(t: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + t);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (std::f64::consts::PI / (2.0 * t)).sqrt() * (-t).exp() / s;
    let k1 = k0 * (t + 0.5 - h) / t;
    (k0, k1)
}
