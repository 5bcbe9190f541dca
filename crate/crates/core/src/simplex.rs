//! Simplices in `R^n`, barycentric coordinates and equally spaced lattice nodes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Minimum barycentric coordinate accepted for containment.
pub const CONTAINMENT_TOL: f64 = 1e-10;

const DEGENERACY_TOL: f64 = 1e-12;

/// A nondegenerate n-simplex given by its `n + 1` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
    // inverse of the edge matrix (v_i - v_0), used for barycentric solves
    edge_inverse: DMatrix<f64>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::InvalidParameter(
                "a simplex needs at least two vertices".into(),
            ));
        }
        for v in &vertices {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("non-finite vertex coordinate".into()));
            }
        }
        let edges = DMatrix::from_fn(n, n, |i, j| vertices[j + 1][i] - vertices[0][i]);
        let scale: f64 = edges
            .column_iter()
            .map(|col| col.norm())
            .product::<f64>();
        let det = edges.determinant();
        let rel = if scale > 0.0 { det.abs() / scale } else { 0.0 };
        if !(rel > DEGENERACY_TOL) {
            return Err(Error::DegenerateSimplex(rel));
        }
        let edge_inverse = edges
            .try_inverse()
            .ok_or(Error::DegenerateSimplex(rel))?;
        Ok(Self {
            vertices,
            edge_inverse,
        })
    }

    /// Spatial dimension `n`.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Maximum pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(crate::kernel::distance(a, b));
            }
        }
        d
    }

    /// Barycentric coordinates `(l_0, ..., l_n)` of `x`; they sum to one.
    pub fn barycentric_coordinates(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let rhs = DVector::from_fn(n, |i, _| x[i] - self.vertices[0][i]);
        let tail = &self.edge_inverse * rhs;
        let mut out = Vec::with_capacity(n + 1);
        out.push(1.0 - tail.sum());
        out.extend(tail.iter().copied());
        Ok(out)
    }

    /// Point with the given barycentric coordinates.
    pub fn point_from_barycentric(&self, bary: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut x = vec![0.0; n];
        for (w, v) in bary.iter().zip(&self.vertices) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += w * vi;
            }
        }
        x
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        let b = self.barycentric_coordinates(x)?;
        Ok(b.iter().all(|&l| l >= -CONTAINMENT_TOL))
    }

    /// Image of the simplex under `x -> scale * x + shift`.
    pub fn affine_image(&self, scale: f64, shift: &[f64]) -> Result<Simplex> {
        Simplex::new(
            self.vertices
                .iter()
                .map(|v| v.iter().zip(shift).map(|(a, s)| scale * a + s).collect())
                .collect(),
        )
    }

    /// Centroid of the vertices.
    pub fn centroid(&self) -> Vec<f64> {
        let w = 1.0 / self.vertices.len() as f64;
        self.point_from_barycentric(&vec![w; self.vertices.len()])
    }
}

/// Free-function form of [`Simplex::barycentric_coordinates`].
pub fn barycentric_coordinates(s: &Simplex, x: &[f64]) -> Result<Vec<f64>> {
    s.barycentric_coordinates(x)
}

/// Free-function form of [`Simplex::diameter`].
pub fn diameter(s: &Simplex) -> f64 {
    s.diameter()
}

/// Regular n-simplex with every edge of length `diam`, first vertex at the origin.
///
/// The remaining vertices are the rows of the Cholesky factor of the Gram
/// matrix `diam^2 * (I + 11^T) / 2`.
pub fn regular_simplex(n: usize, diam: f64) -> Result<Simplex> {
    if n == 0 {
        return Err(Error::InvalidParameter("simplex dimension must be >= 1".into()));
    }
    if !(diam > 0.0) || !diam.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "diameter must be positive, got {diam}"
        )));
    }
    let d2 = diam * diam;
    let gram = DMatrix::from_fn(n, n, |i, j| if i == j { d2 } else { 0.5 * d2 });
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("regular simplex Gram matrix".into()))?;
    let l = chol.l();
    let mut vertices = vec![vec![0.0; n]];
    for i in 0..n {
        vertices.push((0..n).map(|j| l[(i, j)]).collect());
    }
    Simplex::new(vertices)
}

/// Composition of a degree `k` into `n + 1` nonnegative parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarycentricIndex {
    parts: Vec<usize>,
}

impl BarycentricIndex {
    pub fn new(parts: Vec<usize>) -> Self {
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// Equally spaced nodes of degree `k` on a simplex.
#[derive(Debug, Clone)]
pub struct NodeSet {
    simplex: Simplex,
    degree: usize,
    nodes: Vec<Vec<f64>>,
    indices: Vec<BarycentricIndex>,
}

impl NodeSet {
    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn indices(&self) -> &[BarycentricIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// All compositions of `k` into `parts` nonnegative integers, in
/// reverse-lexicographic order: `(k, 0, ..., 0)` first, `(0, ..., 0, k)` last.
pub fn compositions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        return out;
    }
    rec(k, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Equally spaced nodes of degree `k`: barycentric coordinates `k_i / k`.
pub fn equally_spaced_nodes(s: &Simplex, k: usize) -> Result<NodeSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("node degree must be >= 1".into()));
    }
    let n = s.dim();
    let kf = k as f64;
    let mut nodes = Vec::new();
    let mut indices = Vec::new();
    for parts in compositions(k, n + 1) {
        let bary: Vec<f64> = parts.iter().map(|&p| p as f64 / kf).collect();
        nodes.push(s.point_from_barycentric(&bary));
        indices.push(BarycentricIndex::new(parts));
    }
    Ok(NodeSet {
        simplex: s.clone(),
        degree: k,
        nodes,
        indices,
    })
}

/// `binom(a, b)` as a float; exact for the sizes used here.
pub fn binomial(a: usize, b: usize) -> f64 {
    if b > a {
        return 0.0;
    }
    let b = b.min(a - b);
    let mut r = 1.0;
    for i in 0..b {
        r = r * (a - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_triangle() -> Simplex {
        Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn vertex_and_centroid_coordinates() {
        let s = regular_simplex(3, 1.5).unwrap();
        for (i, v) in s.vertices().iter().enumerate() {
            let b = s.barycentric_coordinates(v).unwrap();
            for (j, &l) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((l - want).abs() < 1e-12);
            }
        }
        let b = s.barycentric_coordinates(&s.centroid()).unwrap();
        assert!(b.iter().all(|&l| (l - 0.25).abs() < 1e-12));
    }

    #[test]
    fn random_points_recombine() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let verts: Vec<Vec<f64>> = (0..4)
                .map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect())
                .collect();
            let Ok(s) = Simplex::new(verts) else { continue };
            let mut w: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= total);
            let x = s.point_from_barycentric(&w);
            let b = s.barycentric_coordinates(&x).unwrap();
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let back = s.point_from_barycentric(&b);
            for (a, c) in back.iter().zip(&x) {
                assert!((a - c).abs() < 1e-12);
            }
            assert!(s.contains(&x).unwrap());
        }
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let err = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert!(matches!(err, Err(Error::DegenerateSimplex(_))));
        assert!(Simplex::new(vec![vec![0.0, 0.0], vec![1.0]]).is_err());
    }

    #[test]
    fn node_counts() {
        let tri = unit_triangle();
        assert_eq!(equally_spaced_nodes(&tri, 2).unwrap().len(), 6);
        let seg = Simplex::new(vec![vec![0.0], vec![1.0]]).unwrap();
        let ns = equally_spaced_nodes(&seg, 2).unwrap();
        let mut xs: Vec<f64> = ns.nodes().iter().map(|p| p[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);
        let tet = regular_simplex(3, 1.0).unwrap();
        let ns = equally_spaced_nodes(&tet, 4).unwrap();
        assert_eq!(ns.len(), 35);
        assert!(ns.indices().iter().all(|i| i.degree() == 4));
        for n in 1..=4 {
            for k in 1..=7 {
                let s = regular_simplex(n, 1.0).unwrap();
                assert_eq!(equally_spaced_nodes(&s, k).unwrap().len() as f64, binomial(n + k, n));
            }
        }
        assert!(equally_spaced_nodes(&tri, 0).is_err());
    }

    #[test]
    fn enumeration_order_is_reverse_lex() {
        let c = compositions(2, 3);
        assert_eq!(
            c,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
    }

    #[test]
    fn nodes_recover_their_barycentric_parts() {
        let s = Simplex::new(vec![
            vec![0.1, -0.3, 0.2],
            vec![1.4, 0.0, 0.1],
            vec![0.2, 1.1, -0.2],
            vec![0.3, 0.2, 0.9],
        ])
        .unwrap();
        let ns = equally_spaced_nodes(&s, 5).unwrap();
        for (x, idx) in ns.nodes().iter().zip(ns.indices()) {
            let b = s.barycentric_coordinates(x).unwrap();
            for (l, &p) in b.iter().zip(idx.parts()) {
                assert!((l - p as f64 / 5.0).abs() < 1e-12);
            }
            assert!(s.contains(x).unwrap());
        }
    }

    #[test]
    fn regular_simplex_edges() {
        let s = regular_simplex(1, 1.0).unwrap();
        assert_eq!(s.vertices(), &[vec![0.0], vec![1.0]]);
        for &(n, d) in &[(2usize, 1.0f64), (4, 2.0), (6, 0.3)] {
            let s = regular_simplex(n, d).unwrap();
            let v = s.vertices();
            assert_eq!(v[0], vec![0.0; n]);
            for i in 0..=n {
                for j in i + 1..=n {
                    assert!((crate::kernel::distance(&v[i], &v[j]) - d).abs() < 1e-12);
                }
            }
            assert!((s.diameter() - d).abs() < 1e-12);
        }
    }

    #[test]
    fn diameter_examples() {
        assert!((diameter(&regular_simplex(2, 1.0).unwrap()) - 1.0).abs() < 1e-15);
        assert!((unit_triangle().diameter() - 2f64.sqrt()).abs() < 1e-15);
        let scaled = unit_triangle().affine_image(3.0, &[1.0, -2.0]).unwrap();
        assert!((scaled.diameter() - 3.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn nodes_are_affine_equivariant(scale in 0.1f64..5.0, tx in -3.0f64..3.0, ty in -3.0f64..3.0, k in 1usize..7) {
            let s = unit_triangle();
            let t = s.affine_image(scale, &[tx, ty]).unwrap();
            let a = equally_spaced_nodes(&s, k).unwrap();
            let b = equally_spaced_nodes(&t, k).unwrap();
            for (p, q) in a.nodes().iter().zip(b.nodes()) {
                prop_assert!((scale * p[0] + tx - q[0]).abs() < 1e-12);
                prop_assert!((scale * p[1] + ty - q[1]).abs() < 1e-12);
            }
        }
    }
}
