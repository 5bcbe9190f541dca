//! Extended-precision fit and evaluation for convergence experiments.
//!
//! With the shift `c` far larger than the simplex, the double precision fit
//! stops resolving errors below roughly `1e-13` although the interpolation
//! error keeps falling. This path assembles and solves the same saddle system,
//! and evaluates target and spline, in binary floating point with a chosen
//! significand width. Inputs are the same `f64` nodes and target coefficients,
//! so the two paths differ only in rounding.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interpolant::NativeFunction;
use crate::kernel::KernelParams;
use crate::polyinterp::MonomialBasis;

pub const MIN_BITS: usize = 64;
pub const MAX_BITS: usize = 4096;

type Hp = FBig<HalfEven, 2>;

pub fn check_bits(bits: usize) -> Result<()> {
    if !(MIN_BITS..=MAX_BITS).contains(&bits) {
        return Err(Error::InvalidParameter(format!(
            "precision_bits must lie in [{MIN_BITS}, {MAX_BITS}], got {bits}"
        )));
    }
    Ok(())
}

/// The kernel `(-1)^m (t + c^2)^(lambda/2) ln(t + c^2) / 2` as a function of `t = r^2`.
struct Kernel {
    bits: usize,
    negate: bool,
    half_lambda: usize,
    c2: Hp,
    inv_c2: Hp,
    ln_c2: Hp,
    half: Hp,
}

impl Kernel {
    fn new(params: &KernelParams, bits: usize) -> Self {
        let lift = |v: f64| lift(v, bits);
        let c = lift(params.c());
        let c2 = &c * &c;
        Self {
            bits,
            negate: params.order() % 2 == 1,
            half_lambda: params.lambda() / 2,
            inv_c2: lift(1.0) / &c2,
            ln_c2: c2.ln(),
            c2,
            half: lift(0.5),
        }
    }

    fn lift(&self, v: f64) -> Hp {
        lift(v, self.bits)
    }

    fn zero(&self) -> Hp {
        self.lift(0.0)
    }

    fn between(&self, x: &[Hp], y: &[Hp]) -> Hp {
        let mut t = self.zero();
        for (a, b) in x.iter().zip(y) {
            let d = a - b;
            t += &d * &d;
        }
        self.radial(&t)
    }

    fn radial(&self, t: &Hp) -> Hp {
        let s = &self.c2 + t;
        // ln(c^2 + t) = ln(c^2) + ln(1 + t / c^2) keeps full relative accuracy for small t
        let ln = &self.ln_c2 + (t * &self.inv_c2).ln_1p();
        let mut v = &ln * &self.half;
        for _ in 0..self.half_lambda {
            v = &v * &s;
        }
        if self.negate {
            -v
        } else {
            v
        }
    }
}

fn lift(v: f64, bits: usize) -> Hp {
    Hp::try_from(v)
        .expect("finite input")
        .with_precision(bits)
        .value()
}

fn monomial(kernel: &Kernel, exps: &[usize], x: &[Hp]) -> Hp {
    let mut v = kernel.lift(1.0);
    for (&e, xi) in exps.iter().zip(x) {
        for _ in 0..e {
            v = &v * xi;
        }
    }
    v
}

fn lift_points(points: &[Vec<f64>], bits: usize) -> Vec<Vec<Hp>> {
    points
        .iter()
        .map(|p| p.iter().map(|&v| lift(v, bits)).collect())
        .collect()
}

/// Gaussian elimination with partial pivoting, in place.
fn solve_dense(mut a: Vec<Vec<Hp>>, mut b: Vec<Hp>) -> Result<Vec<Hp>> {
    let n = b.len();
    let mag = |v: &Hp| v.to_f64().value().abs();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| mag(&a[i][k]).total_cmp(&mag(&a[j][k])))
            .expect("nonempty range");
        if mag(&a[p][k]) == 0.0 {
            return Err(Error::Singular {
                condition: f64::INFINITY,
                context: format!("zero pivot in column {k} of the extended-precision solve"),
            });
        }
        a.swap(k, p);
        b.swap(k, p);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for (off, row) in rest.iter_mut().enumerate() {
            if mag(&row[k]) == 0.0 {
                continue;
            }
            let f = &row[k] / &pivot_row[k];
            for j in (k + 1)..n {
                row[j] -= &f * &pivot_row[j];
            }
            let bk = &f * &b[k];
            b[k + 1 + off] -= bk;
        }
    }
    let mut x: Vec<Hp> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for (j, xj) in ((i + 1)..n).zip(x.iter().rev()) {
            s -= &a[i][j] * xj;
        }
        x.push(s / &a[i][i]);
    }
    x.reverse();
    Ok(x)
}

/// Largest `|f - s|` over `samples`, where `s` interpolates `target` at `nodes`,
/// computed with `bits`-bit significands.
pub fn max_interpolation_error(
    params: &KernelParams,
    target: &NativeFunction,
    nodes: &[Vec<f64>],
    samples: &[Vec<f64>],
    bits: usize,
) -> Result<f64> {
    check_bits(bits)?;
    let kernel = Kernel::new(params, bits);
    let sources = lift_points(target.sources(), bits);
    let coeffs: Vec<Hp> = target.coeffs().iter().map(|&v| kernel.lift(v)).collect();
    let poly: Vec<(Vec<usize>, Hp)> = target
        .poly_terms()
        .map(|(a, d)| (a.to_vec(), kernel.lift(d)))
        .collect();
    let f = |x: &[Hp]| -> Hp {
        let mut v = kernel.zero();
        for (c, y) in coeffs.iter().zip(&sources) {
            v += c * &kernel.between(x, y);
        }
        for (a, d) in &poly {
            v += d * &monomial(&kernel, a, x);
        }
        v
    };

    let basis = MonomialBasis::new(params.n(), params.order() - 1);
    let centers = lift_points(nodes, bits);
    let (np, q) = (centers.len(), basis.len());
    let mut a = vec![vec![kernel.zero(); np + q]; np + q];
    for i in 0..np {
        for j in 0..=i {
            let v = kernel.between(&centers[i], &centers[j]);
            a[j][i] = v.clone();
            a[i][j] = v;
        }
        for (j, e) in basis.exponents().iter().enumerate() {
            let v = monomial(&kernel, e, &centers[i]);
            a[np + j][i] = v.clone();
            a[i][np + j] = v;
        }
    }
    let mut rhs: Vec<Hp> = centers.iter().map(|x| f(x)).collect();
    rhs.resize(np + q, kernel.zero());
    let sol = solve_dense(a, rhs)?;

    let samples = lift_points(samples, bits);
    let err = samples
        .par_iter()
        .map(|x| {
            let mut s = kernel.zero();
            for (c, y) in sol.iter().zip(&centers) {
                s += c * &kernel.between(x, y);
            }
            for (d, e) in sol[np..].iter().zip(basis.exponents()) {
                s += d * &monomial(&kernel, e, x);
            }
            (f(x) - s).to_f64().value().abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(err)
}
