//! Origin-symmetric convex bodies in `R^n`: polytopes given by vertices
//! and/or facets, and exact Euclidean balls.
//!
//! A stored vector `v` always stands for the pair `±v`. A vertex list
//! describes `conv{±v_i}` and a facet list describes `{x : |a_i · x| <= 1}`.
//! Whichever representation is missing is never enumerated: support values
//! of facet-only bodies and radial values of vertex-only bodies come from a
//! small linear program over the polar.

mod bounds;
mod john;
mod sample;
mod section;

pub use bounds::{
    beta_bound, exact_reference, remark_bound, santalo_check, verify_main, BoundReport, ReferenceBody,
};
pub use john::john_normalize;
pub use sample::{mahler_product, volume_radial_mc, Estimate, MahlerEstimate, SphereSample};
pub use section::{section_discrepancy, section_plane, section_polygon, Frame};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::lp::{max_over_slabs, SlabLp};

/// Vectors of a common dimension stored back to back.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * rows.len());
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    fn flat(&self) -> &[f64] {
        &self.data
    }

    /// `max_i |r_i · u|`.
    #[inline]
    fn max_abs_dot(&self, u: &[f64]) -> f64 {
        self.rows().map(|r| dot(r, u).abs()).fold(0.0, f64::max)
    }

    fn map(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let data = self.rows().flat_map(f).collect();
        Self { dim: self.dim, data }
    }

    fn rank(&self) -> usize {
        let m = DMatrix::from_row_slice(self.len(), self.dim, &self.data);
        let scale = m.norm().max(1e-300);
        m.svd(false, false).rank(1e-10 * scale)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Ball(f64),
    Polytope { vertices: Option<PointSet>, facets: Option<PointSet> },
}

/// Origin-symmetric convex body in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyND {
    dim: usize,
    shape: Shape,
}

impl BodyND {
    fn check_dim(dim: usize) -> Result<()> {
        if !(2..=16).contains(&dim) {
            return Err(Error::InvalidParameter(format!("dimension {dim} outside 2..=16")));
        }
        Ok(())
    }

    fn check_set(dim: usize, set: &PointSet, what: &str) -> Result<()> {
        if set.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateBody(format!("non-finite {what} coordinate")));
        }
        if set.rows().any(|r| norm(r) == 0.0) {
            return Err(Error::DegenerateBody(format!("zero {what} vector")));
        }
        if set.len() < dim || set.rank() < dim {
            return Err(Error::DegenerateBody(format!("{what} vectors do not span R^{dim}")));
        }
        Ok(())
    }

    /// `conv{±v_i}`.
    pub fn from_vertices(dim: usize, vertices: &[Vec<f64>]) -> Result<Self> {
        Self::check_dim(dim)?;
        let v = PointSet::new(dim, vertices)?;
        Self::check_set(dim, &v, "vertex")?;
        Ok(Self { dim, shape: Shape::Polytope { vertices: Some(v), facets: None } })
    }

    /// `{x : |a_i · x| <= 1}`.
    pub fn from_facets(dim: usize, facets: &[Vec<f64>]) -> Result<Self> {
        Self::check_dim(dim)?;
        let f = PointSet::new(dim, facets)?;
        Self::check_set(dim, &f, "facet")?;
        Ok(Self { dim, shape: Shape::Polytope { vertices: None, facets: Some(f) } })
    }

    /// Both descriptions of the same polytope; every vertex must satisfy
    /// every facet inequality and touch at least one.
    pub fn from_both(dim: usize, vertices: &[Vec<f64>], facets: &[Vec<f64>]) -> Result<Self> {
        Self::check_dim(dim)?;
        let v = PointSet::new(dim, vertices)?;
        let f = PointSet::new(dim, facets)?;
        Self::check_set(dim, &v, "vertex")?;
        Self::check_set(dim, &f, "facet")?;
        for r in v.rows() {
            let m = f.max_abs_dot(r);
            if (m - 1.0).abs() > 1e-9 {
                return Err(Error::DegenerateBody(format!(
                    "vertex/facet lists disagree (max |a·v| = {m})"
                )));
            }
        }
        Ok(Self { dim, shape: Shape::Polytope { vertices: Some(v), facets: Some(f) } })
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::check_dim(dim)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("ball radius {radius}")));
        }
        Ok(Self { dim, shape: Shape::Ball(radius) })
    }

    /// `[-1, 1]^dim` with both representations.
    pub fn cube(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        let facets: Vec<Vec<f64>> = (0..dim).map(|i| unit(dim, i)).collect();
        let vertices: Vec<Vec<f64>> = (0..1usize << (dim - 1))
            .map(|mask| (0..dim).map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect();
        Self::from_both(dim, &vertices, &facets)
    }

    /// Cross-polytope `{x : Σ|x_i| <= 1}` with both representations.
    pub fn cross_polytope(dim: usize) -> Result<Self> {
        Ok(Self::cube(dim)?.polar())
    }

    /// `conv{±v_i}` for `pairs` random directions with radii in `[0.7, 1.3]`.
    pub fn random_polytope(dim: usize, pairs: usize, seed: u64) -> Result<Self> {
        Self::check_dim(dim)?;
        if pairs < dim {
            return Err(Error::InvalidParameter(format!("need >= {dim} vertex pairs")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vertices: Vec<Vec<f64>> = (0..pairs)
            .map(|_| {
                let g = random_unit(dim, &mut rng);
                let r = rng.gen_range(0.7..1.3);
                g.into_iter().map(|x| r * x).collect()
            })
            .collect();
        Self::from_vertices(dim, &vertices)
    }

    /// Facet-only polytope circumscribed about the unit ball: `count`
    /// random tangent slabs plus the coordinate slabs (so it is bounded).
    pub fn random_tangent_polytope(dim: usize, count: usize, seed: u64) -> Result<Self> {
        Self::check_dim(dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut facets: Vec<Vec<f64>> = (0..dim).map(|i| unit(dim, i)).collect();
        facets.extend((0..count).map(|_| random_unit(dim, &mut rng)));
        Self::from_facets(dim, &facets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_ball(&self) -> Option<f64> {
        match self.shape {
            Shape::Ball(r) => Some(r),
            Shape::Polytope { .. } => None,
        }
    }

    pub fn vertices(&self) -> Option<&PointSet> {
        match &self.shape {
            Shape::Polytope { vertices, .. } => vertices.as_ref(),
            Shape::Ball(_) => None,
        }
    }

    pub fn facets(&self) -> Option<&PointSet> {
        match &self.shape {
            Shape::Polytope { facets, .. } => facets.as_ref(),
            Shape::Ball(_) => None,
        }
    }

    /// Polar body: vertices and facets trade places.
    pub fn polar(&self) -> Self {
        let shape = match &self.shape {
            Shape::Ball(r) => Shape::Ball(1.0 / r),
            Shape::Polytope { vertices, facets } => {
                Shape::Polytope { vertices: facets.clone(), facets: vertices.clone() }
            }
        };
        Self { dim: self.dim, shape }
    }

    fn check_direction(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.len() });
        }
        Ok(())
    }

    /// Support function `h(u) = max_{x ∈ K} x · u`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_direction(u)?;
        match &self.shape {
            Shape::Ball(r) => Ok(r * norm(u)),
            Shape::Polytope { vertices: Some(v), .. } => Ok(v.max_abs_dot(u)),
            Shape::Polytope { vertices: None, facets: Some(f) } => match max_over_slabs(u, f.flat()) {
                SlabLp::Optimal(h) => Ok(h),
                SlabLp::Unbounded => Err(Error::UnboundedBody(u.to_vec())),
            },
            Shape::Polytope { vertices: None, facets: None } => unreachable!("validated at construction"),
        }
    }

    /// Radial function `x(u) = max{r : r u ∈ K}` for a unit `u`.
    pub fn radial(&self, u: &[f64]) -> Result<f64> {
        self.check_direction(u)?;
        let gauge = match &self.shape {
            Shape::Ball(r) => norm(u) / r,
            Shape::Polytope { facets: Some(f), .. } => f.max_abs_dot(u),
            Shape::Polytope { facets: None, vertices: Some(v) } => match max_over_slabs(u, v.flat()) {
                SlabLp::Optimal(h) => h,
                SlabLp::Unbounded => 0.0,
            },
            Shape::Polytope { vertices: None, facets: None } => unreachable!("validated at construction"),
        };
        if gauge > 0.0 {
            Ok(1.0 / gauge)
        } else {
            Err(Error::UnboundedBody(u.to_vec()))
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let shape = match &self.shape {
            Shape::Ball(r) => Shape::Ball(r * c),
            Shape::Polytope { vertices, facets } => Shape::Polytope {
                vertices: vertices.as_ref().map(|v| v.map(|r| r.iter().map(|x| x * c).collect())),
                facets: facets.as_ref().map(|f| f.map(|r| r.iter().map(|x| x / c).collect())),
            },
        };
        Self { dim: self.dim, shape }
    }

    /// Image `T K` under an invertible linear map. Balls only accept
    /// orthogonal maps.
    pub fn transformed(&self, t: &DMatrix<f64>) -> Result<Self> {
        if t.nrows() != self.dim || t.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: t.nrows() });
        }
        let inv_t = t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidParameter("singular linear map".into()))?
            .transpose();
        let apply = |m: &DMatrix<f64>, set: &PointSet| {
            set.map(|r| (m * nalgebra::DVector::from_column_slice(r)).iter().copied().collect())
        };
        let shape = match &self.shape {
            Shape::Ball(r) => {
                let gram = t.transpose() * t;
                if (gram - DMatrix::identity(self.dim, self.dim)).amax() > 1e-12 {
                    return Err(Error::InvalidParameter("a ball only maps to a ball under rotations".into()));
                }
                Shape::Ball(*r)
            }
            Shape::Polytope { vertices, facets } => Shape::Polytope {
                vertices: vertices.as_ref().map(|v| apply(t, v)),
                facets: facets.as_ref().map(|f| apply(&inv_t, f)),
            },
        };
        Ok(Self { dim: self.dim, shape })
    }

    /// Largest centered ball inside, when facets are known.
    pub fn inradius(&self) -> Option<f64> {
        match &self.shape {
            Shape::Ball(r) => Some(*r),
            Shape::Polytope { facets, .. } => {
                facets.as_ref().map(|f| f.rows().map(|a| 1.0 / norm(a)).fold(f64::INFINITY, f64::min))
            }
        }
    }

    /// Smallest centered ball outside, when vertices are known.
    pub fn circumradius(&self) -> Option<f64> {
        match &self.shape {
            Shape::Ball(r) => Some(*r),
            Shape::Polytope { vertices, .. } => vertices.as_ref().map(|v| v.rows().map(norm).fold(0.0, f64::max)),
        }
    }
}

pub(crate) fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

pub(crate) fn random_unit(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&g);
        if n > 1e-8 {
            return g.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Haar-random orthogonal matrix.
pub fn random_rotation(dim: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| StandardNormal.sample(&mut rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let signs = DMatrix::from_diagonal(&r.diagonal().map(|x| if x < 0.0 { -1.0 } else { 1.0 }));
    q * signs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_and_cross_polytope() {
        let cube = BodyND::cube(4).unwrap();
        let cross = cube.polar();
        assert_eq!(cross.vertices().unwrap().len(), 4);
        assert_eq!(cross, BodyND::cross_polytope(4).unwrap());
        assert!((cube.radial(&unit(4, 0)).unwrap() - 1.0).abs() < 1e-15);
        let diag = [0.5; 4];
        assert!((cube.radial(&diag).unwrap() - 2.0).abs() < 1e-15);
        assert!((cross.support(&diag).unwrap() - 0.5).abs() < 1e-15);
        assert!((cube.support(&diag).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn facet_only_cube_matches_vertex_only_cross_polytope() {
        let cube = BodyND::from_facets(4, &(0..4).map(|i| unit(4, i)).collect::<Vec<_>>()).unwrap();
        let cross = cube.polar();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let u = random_unit(4, &mut rng);
            let l1: f64 = u.iter().map(|x| x.abs()).sum();
            let linf = u.iter().map(|x| x.abs()).fold(0.0, f64::max);
            assert!((cube.support(&u).unwrap() - l1).abs() < 1e-12);
            assert!((cross.radial(&u).unwrap() - 1.0 / l1).abs() < 1e-12);
            assert!((cube.radial(&u).unwrap() - 1.0 / linf).abs() < 1e-12);
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            assert_eq!(cube.radial(&u).unwrap(), cube.radial(&neg).unwrap());
        }
    }

    #[test]
    fn radial_support_duality() {
        let k = BodyND::random_polytope(4, 9, 3).unwrap();
        let p = k.polar();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300 {
            let u = random_unit(4, &mut rng);
            let a = k.radial(&u).unwrap() * p.support(&u).unwrap();
            let b = p.radial(&u).unwrap() * k.support(&u).unwrap();
            assert!((a - 1.0).abs() < 1e-10 && (b - 1.0).abs() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn polar_involution_on_support() {
        let k = BodyND::random_polytope(5, 12, 21).unwrap();
        let kk = k.polar().polar();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let u = random_unit(5, &mut rng);
            assert!((k.support(&u).unwrap() - kk.support(&u).unwrap()).abs() < 1e-10);
        }
        let b = BodyND::ball(4, 2.5).unwrap().polar();
        assert!((b.support(&unit(4, 2)).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn invalid_bodies() {
        assert!(BodyND::from_facets(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).is_err());
        assert!(matches!(
            BodyND::from_vertices(3, &[vec![1.0, 0.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(BodyND::ball(3, -1.0).is_err());
        assert!(BodyND::from_both(2, &[vec![2.0, 0.0], vec![0.0, 1.0]], &[vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn linear_maps_act_on_both_representations() {
        let cube = BodyND::cube(3).unwrap();
        let t = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.3, 1.0, 0.0, 0.0, 0.0, 0.5]);
        let tk = cube.transformed(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let u = random_unit(3, &mut rng);
            // h_{TK}(u) = h_K(Tᵀu).
            let tu: Vec<f64> = (t.transpose() * nalgebra::DVector::from_column_slice(&u)).iter().copied().collect();
            assert!((tk.support(&u).unwrap() - cube.support(&tu).unwrap()).abs() < 1e-12);
        }
        assert!(BodyND::ball(3, 1.0).unwrap().transformed(&t).is_err());
        let q = random_rotation(3, 1);
        assert!(BodyND::ball(3, 1.0).unwrap().transformed(&q).is_ok());
    }
}
