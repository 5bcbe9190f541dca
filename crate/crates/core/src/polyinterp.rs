//! Lagrange interpolation at equally spaced simplex nodes.
//!
//! Cardinal functions are obtained from one LU factorization of the
//! transposed Vandermonde matrix. The matrix is assembled in reference
//! coordinates (the trailing barycentric coordinates of the simplex) so its
//! conditioning does not depend on where the simplex sits or how large it is.

use nalgebra::{DMatrix, DVector, LU};

use crate::error::{Error, Result};
use crate::simplex::{compositions, equally_spaced_nodes, NodeSet, Simplex};

/// Cardinal solves above this condition estimate are refused.
const MAX_VANDERMONDE_CONDITION: f64 = 1e13;

/// Monomials of total degree `<= k` in `n` variables, graded lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    k: usize,
    exponents: Vec<Vec<usize>>,
}

impl MonomialBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let exponents = (0..=k).flat_map(|d| compositions(d, n)).collect();
        Self { n, k, exponents }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn exponents(&self) -> &[Vec<usize>] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Values of every basis monomial at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.exponents.iter().map(|a| monomial(a, x)).collect()
    }
}

pub(crate) fn monomial(alpha: &[usize], x: &[f64]) -> f64 {
    alpha
        .iter()
        .zip(x)
        .map(|(&a, &xi)| xi.powi(a as i32))
        .product()
}

/// Collocation matrix: entry `(i, j)` is monomial `j` at node `i`.
pub fn vandermonde(nodes: &[Vec<f64>], basis: &MonomialBasis) -> DMatrix<f64> {
    DMatrix::from_fn(nodes.len(), basis.len(), |i, j| {
        monomial(&basis.exponents[j], &nodes[i])
    })
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Lagrange interpolation on a [`NodeSet`], with the Vandermonde factorization cached.
#[derive(Debug, Clone)]
pub struct LagrangeInterpolator {
    node_set: NodeSet,
    basis: MonomialBasis,
    lu_transposed: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    condition: f64,
}

impl LagrangeInterpolator {
    pub fn new(node_set: NodeSet) -> Result<Self> {
        let simplex = node_set.simplex();
        let n = simplex.dim();
        let basis = MonomialBasis::new(n, node_set.degree());
        let reference: Vec<Vec<f64>> = node_set
            .nodes()
            .iter()
            .map(|y| reference_coordinates(simplex, y))
            .collect::<Result<_>>()?;
        let v = vandermonde(&reference, &basis);
        let condition = condition_number(&v);
        if !(condition < MAX_VANDERMONDE_CONDITION) {
            return Err(Error::Singular {
                condition,
                context: format!(
                    "Vandermonde matrix for degree {} nodes in dimension {n}",
                    node_set.degree()
                ),
            });
        }
        let lu_transposed = v.transpose().lu();
        Ok(Self {
            node_set,
            basis,
            lu_transposed,
            condition,
        })
    }

    pub fn node_set(&self) -> &NodeSet {
        &self.node_set
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `(l_1(x), ..., l_N(x))`.
    pub fn cardinal_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        let r = reference_coordinates(self.node_set.simplex(), x)?;
        let rhs = DVector::from_vec(self.basis.evaluate(&r));
        let sol = self.lu_transposed.solve(&rhs).ok_or_else(|| Error::Singular {
            condition: self.condition,
            context: "cardinal function solve".into(),
        })?;
        Ok(sol.iter().copied().collect())
    }

    /// `sum_i |l_i(x)|`.
    pub fn lebesgue_function(&self, x: &[f64]) -> Result<f64> {
        Ok(self.cardinal_values(x)?.iter().map(|l| l.abs()).sum())
    }

    /// Discrete measure on the nodes reproducing evaluation at `x` on `P_k^n`.
    pub fn norming_measure(&self, x: &[f64]) -> Result<NormingMeasure> {
        let b = self.node_set.simplex().barycentric_coordinates(x)?;
        let min = b.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -crate::simplex::CONTAINMENT_TOL {
            return Err(Error::OutsideSimplex(min));
        }
        let weights = self.cardinal_values(x)?;
        Ok(NormingMeasure {
            support: self.node_set.nodes().to_vec(),
            degree: self.node_set.degree(),
            weights,
            anchor: x.to_vec(),
        })
    }
}

fn reference_coordinates(s: &Simplex, x: &[f64]) -> Result<Vec<f64>> {
    let mut b = s.barycentric_coordinates(x)?;
    b.remove(0);
    Ok(b)
}

/// Signed point measure `sigma = sum_j z_j delta_{y_j}` with `int p dsigma = p(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormingMeasure {
    support: Vec<Vec<f64>>,
    degree: usize,
    weights: Vec<f64>,
    anchor: Vec<f64>,
}

impl NormingMeasure {
    pub fn support(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    /// Degree of the polynomial space the measure reproduces.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|z| z.abs()).sum()
    }

    /// `sum_j z_j g(y_j)`.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        self.weights
            .iter()
            .zip(&self.support)
            .map(|(z, y)| z * g(y))
            .sum()
    }

    /// Largest relative reproduction residual over all monomials of degree `<= k`.
    pub fn reproduction_residual(&self) -> f64 {
        let basis = MonomialBasis::new(self.anchor.len(), self.degree);
        basis
            .exponents()
            .iter()
            .map(|alpha| {
                let want = monomial(alpha, &self.anchor);
                let got = self.integrate(|y| monomial(alpha, y));
                (got - want).abs() / want.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// Free-function form of [`LagrangeInterpolator::cardinal_values`].
pub fn cardinal_values(node_set: &NodeSet, x: &[f64]) -> Result<Vec<f64>> {
    LagrangeInterpolator::new(node_set.clone())?.cardinal_values(x)
}

/// Free-function form of [`LagrangeInterpolator::lebesgue_function`].
pub fn lebesgue_function(node_set: &NodeSet, x: &[f64]) -> Result<f64> {
    LagrangeInterpolator::new(node_set.clone())?.lebesgue_function(x)
}

/// Free-function form of [`LagrangeInterpolator::norming_measure`].
pub fn norming_measure(node_set: &NodeSet, x: &[f64]) -> Result<NormingMeasure> {
    LagrangeInterpolator::new(node_set.clone())?.norming_measure(x)
}

/// Largest Lebesgue function value over the equally spaced sample grid of
/// degree `resolution`; a lower estimate of the Lebesgue constant.
pub fn lebesgue_max_estimate(s: &Simplex, k: usize, resolution: usize) -> Result<f64> {
    if resolution < k {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} must be >= degree {k}"
        )));
    }
    let interp = LagrangeInterpolator::new(equally_spaced_nodes(s, k)?)?;
    let grid = equally_spaced_nodes(s, resolution)?;
    let mut best: f64 = 0.0;
    for x in grid.nodes() {
        best = best.max(interp.lebesgue_function(x)?);
    }
    Ok(best)
}
