//! Origin-symmetric convex polygons: construction, polar duality,
//! radial and support functions, shell membership, Steiner symmetrization
//! and random generation inside a shell.
//!
//! A polygon stores its vertices counterclockwise together with the facet
//! vectors `a_i` of its edges, so that edge `i` (from vertex `i` to vertex
//! `i + 1`) lies on the line `a_i · x = 1`. Polar duality swaps the two lists.

use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `t`.
    #[inline]
    pub fn from_angle(t: T) -> Self {
        Self::new(t.cos(), t.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2π)`.
    #[inline]
    pub fn angle(self) -> T {
        let a = self.y.atan2(self.x);
        if a < T::zero() {
            a + T::TAU()
        } else {
            a
        }
    }

    #[inline]
    pub fn rotated(self, phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Vec2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

/// Annulus `B(0, r_inner) ⊆ P ⊆ B(0, r_outer)` constraining admissible bodies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellConstraint<T> {
    pub r_inner: T,
    pub r_outer: T,
}

impl<T: Scalar> ShellConstraint<T> {
    pub fn new(r_inner: T, r_outer: T) -> Result<Self> {
        if !(r_inner > T::zero() && r_inner <= r_outer && r_outer.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shell radii must satisfy 0 < r_inner <= r_outer, got ({r_inner}, {r_outer})"
            )));
        }
        Ok(Self { r_inner, r_outer })
    }

    /// The shell `B(0,1) ⊆ P ⊆ B(0, √(n+1))` attached to exponent `n`.
    pub fn for_exponent(n: u32) -> Self {
        Self {
            r_inner: T::one(),
            r_outer: T::lit(f64::from(n + 1).sqrt()),
        }
    }
}

/// Origin-symmetric convex polygon with `2m` strictly convex vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPolygon2<T> {
    vertices: Vec<Vec2<T>>,
    facets: Vec<Vec2<T>>,
}

impl<T: Scalar> SymmetricPolygon2<T> {
    /// Symmetrized convex hull of `points ∪ (-points)`.
    ///
    /// Near-collinear vertices (turn sine below the predicate tolerance) are
    /// merged; the result is ordered counterclockwise starting from the
    /// vertex of smallest polar angle, with `v[i + m] = -v[i]` exactly.
    pub fn from_points(points: &[Vec2<T>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateBody("no points".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateBody("non-finite coordinate".into()));
        }
        let mut all: Vec<Vec2<T>> = points.iter().flat_map(|&p| [p, -p]).collect();
        let hull = convex_hull(&mut all);
        if hull.len() < 4 || hull.len() % 2 != 0 {
            return Err(Error::DegenerateBody(format!(
                "symmetric hull has {} vertices",
                hull.len()
            )));
        }
        let m = hull.len() / 2;
        let start = (0..hull.len())
            .min_by(|&i, &j| hull[i].angle().partial_cmp(&hull[j].angle()).unwrap())
            .expect("nonempty hull");
        let half: Vec<Vec2<T>> = (0..m).map(|k| hull[(start + k) % hull.len()]).collect();
        let opposite = hull[(start + m) % hull.len()];
        let scale = half.iter().map(|v| v.norm()).fold(T::zero(), T::max);
        if (opposite + half[0]).norm() > T::REPORT_TOL * scale {
            return Err(Error::DegenerateBody("hull is not origin symmetric".into()));
        }
        Self::from_half(half)
    }

    /// Builds from the first half of a CCW symmetric vertex list (angles
    /// increasing within a half turn). The other half is implied.
    fn from_half(half: Vec<Vec2<T>>) -> Result<Self> {
        let mut vertices = half.clone();
        vertices.extend(half.iter().map(|&v| -v));
        let n = vertices.len();
        let mut facets = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let e = b - a;
            if e.cross(vertices[(i + 2) % n] - b) <= T::zero() {
                return Err(Error::DegenerateBody("vertices not in strictly convex position".into()));
            }
            let normal = Vec2::new(e.y, -e.x);
            let offset = normal.dot(a);
            if offset <= T::zero() {
                return Err(Error::DegenerateBody("origin is not interior".into()));
            }
            facets.push(normal * (T::one() / offset));
        }
        let area = polygon_area(&vertices);
        if !(area > T::zero()) {
            return Err(Error::DegenerateBody("empty interior".into()));
        }
        Ok(Self { vertices, facets })
    }

    /// Regular `2m`-gon with the given circumradius, first vertex at angle `phase`.
    pub fn regular(vertex_count: usize, circumradius: T, phase: T) -> Result<Self> {
        if vertex_count < 4 || vertex_count % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "regular symmetric polygon needs an even vertex count >= 4, got {vertex_count}"
            )));
        }
        let step = T::TAU() / T::lit(vertex_count as f64);
        let half = (0..vertex_count / 2)
            .map(|k| Vec2::from_angle(phase + step * T::lit(k as f64)) * circumradius)
            .collect::<Vec<_>>();
        Self::from_points(&half)
    }

    /// Regular polygon whose inscribed circle has radius `inradius`; its edge
    /// normals sit at angles `k·2π/N`.
    pub fn regular_with_inradius(vertex_count: usize, inradius: T) -> Result<Self> {
        let half_step = T::PI() / T::lit(vertex_count as f64);
        Self::regular(vertex_count, inradius / half_step.cos(), half_step)
    }

    /// The square with vertices `(±1, ±1)`.
    pub fn square() -> Self {
        Self::from_points(&[Vec2::new(T::one(), T::one()), Vec2::new(-T::one(), T::one())])
            .expect("square is valid")
    }

    /// The diamond with vertices `(±1, 0), (0, ±1)`.
    pub fn diamond() -> Self {
        Self::from_points(&[Vec2::new(T::one(), T::zero()), Vec2::new(T::zero(), T::one())])
            .expect("diamond is valid")
    }

    pub fn vertices(&self) -> &[Vec2<T>] {
        &self.vertices
    }

    /// First half of the vertex list; the rest is its negation.
    pub fn half_vertices(&self) -> &[Vec2<T>] {
        &self.vertices[..self.vertices.len() / 2]
    }

    /// Facet vectors: edge `i` lies on `a_i · x = 1`.
    pub fn facets(&self) -> &[Vec2<T>] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Polar body: the facet vectors become the vertices.
    pub fn polar(&self) -> Self {
        let n = self.vertices.len();
        Self {
            vertices: self.facets.clone(),
            // Edge between facet vertices a_i and a_{i+1} is dual to v_{i+1}.
            facets: (0..n).map(|i| self.vertices[(i + 1) % n]).collect(),
        }
    }

    /// Radial function ρ(t) = max{r : r(cos t, sin t) ∈ P}.
    pub fn radial(&self, t: T) -> T {
        let u = Vec2::from_angle(t);
        T::one() / self.facets.iter().map(|a| a.dot(u)).fold(T::neg_infinity(), T::max)
    }

    /// Support function h(t) = max_v v · (cos t, sin t).
    pub fn support(&self, t: T) -> T {
        let u = Vec2::from_angle(t);
        self.vertices.iter().map(|v| v.dot(u)).fold(T::neg_infinity(), T::max)
    }

    /// Radius of the largest centered disk inside P.
    pub fn inradius(&self) -> T {
        self.facets.iter().map(|a| T::one() / a.norm()).fold(T::infinity(), T::min)
    }

    /// Radius of the smallest centered disk containing P.
    pub fn circumradius(&self) -> T {
        self.vertices.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// Whether `B(0, r_inner) ⊆ P ⊆ B(0, r_outer)` up to the predicate tolerance.
    pub fn contains_shell(&self, shell: &ShellConstraint<T>) -> bool {
        self.inradius() >= shell.r_inner - T::GEOM_EPS
            && self.circumradius() <= shell.r_outer + T::GEOM_EPS
    }

    /// Whether `p` lies in P (boundary included, with tolerance).
    pub fn contains_point(&self, p: Vec2<T>) -> bool {
        self.facets.iter().all(|a| a.dot(p) <= T::one() + T::GEOM_EPS)
    }

    pub fn area(&self) -> T {
        polygon_area(&self.vertices)
    }

    pub fn scaled(&self, c: T) -> Self {
        assert!(c > T::zero(), "scale factor must be positive");
        Self {
            vertices: self.vertices.iter().map(|&v| v * c).collect(),
            facets: self.facets.iter().map(|&a| a * (T::one() / c)).collect(),
        }
    }

    pub fn rotated(&self, phi: T) -> Self {
        let pts: Vec<_> = self.half_vertices().iter().map(|v| v.rotated(phi)).collect();
        Self::from_points(&pts).expect("rotation preserves validity")
    }

    /// Image under the reflection `(x, y) -> (x, -y)` (or `(-x, y)` when `vertical`).
    pub fn reflected(&self, vertical: bool) -> Self {
        let pts: Vec<_> = self
            .half_vertices()
            .iter()
            .map(|v| if vertical { Vec2::new(-v.x, v.y) } else { Vec2::new(v.x, -v.y) })
            .collect();
        Self::from_points(&pts).expect("reflection preserves validity")
    }

    /// Steiner symmetral about the line through the origin at `axis_angle`.
    ///
    /// Chords perpendicular to the axis keep their length and are recentred
    /// on the axis. The chord-length function is piecewise linear with
    /// breakpoints at the vertex abscissae, so the symmetral is exact.
    pub fn steiner_symmetrize(&self, axis_angle: T) -> Self {
        let local: Vec<Vec2<T>> = self.vertices.iter().map(|v| v.rotated(-axis_angle)).collect();
        let mut xs: Vec<T> = local.iter().map(|v| v.x).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        let n = local.len();
        let mut points = Vec::with_capacity(2 * xs.len());
        for &x in &xs {
            let mut lo = T::infinity();
            let mut hi = T::neg_infinity();
            for i in 0..n {
                let (a, b) = (local[i], local[(i + 1) % n]);
                let (xmin, xmax) = if a.x <= b.x { (a.x, b.x) } else { (b.x, a.x) };
                if x < xmin || x > xmax {
                    continue;
                }
                if xmax - xmin <= T::zero() {
                    lo = lo.min(a.y.min(b.y));
                    hi = hi.max(a.y.max(b.y));
                } else {
                    let s = (x - a.x) / (b.x - a.x);
                    let y = a.y + s * (b.y - a.y);
                    lo = lo.min(y);
                    hi = hi.max(y);
                }
            }
            let half = (hi - lo) * T::lit(0.5);
            points.push(Vec2::new(x, half));
            points.push(Vec2::new(x, -half));
        }
        let rotated: Vec<_> = points.into_iter().map(|p| p.rotated(axis_angle)).collect();
        Self::from_points(&rotated).expect("Steiner symmetral of a convex body is convex")
    }

    /// Steiner symmetrization about the x-axis, then about the y-axis.
    pub fn unconditionalize(&self) -> Self {
        self.steiner_symmetrize(T::zero())
            .steiner_symmetrize(T::FRAC_PI_2())
    }

    /// Largest Hausdorff-type defect between P and its reflections in the axes.
    pub fn unconditional_defect(&self) -> T {
        let a = vertex_set_distance(self, &self.reflected(false));
        let b = vertex_set_distance(self, &self.reflected(true));
        a.max(b)
    }

    /// Random body in the shell: samples `m` facet directions and support
    /// values, takes the intersection of the slabs, and rescales so the
    /// inradius equals `shell.r_inner`. Retries until exactly `m` vertex
    /// pairs are extreme and the outer radius is respected.
    pub fn random_in_shell(m: usize, shell: &ShellConstraint<T>, seed: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("need m >= 2 vertex pairs, got {m}")));
        }
        const ATTEMPTS: usize = 2000;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ratio = (shell.r_outer / shell.r_inner).as_f64();
        for _ in 0..ATTEMPTS {
            let spread = rng.gen_range(0.0..(ratio - 1.0).max(0.0) + 1e-9);
            let step = std::f64::consts::PI / m as f64;
            let dual: Vec<Vec2<T>> = (0..m)
                .map(|i| {
                    let phi = (i as f64 + rng.gen_range(0.15..0.85)) * step;
                    let h = 1.0 + spread * rng.gen::<f64>();
                    Vec2::from_angle(T::lit(phi)) * T::lit(1.0 / h)
                })
                .collect();
            let Ok(dual) = Self::from_points(&dual) else { continue };
            if dual.len() != 2 * m {
                continue;
            }
            let body = dual.polar();
            let body = body.scaled(shell.r_inner / body.inradius());
            if body.contains_shell(shell) {
                return Ok(body);
            }
        }
        Err(Error::GenerationFailed { attempts: ATTEMPTS })
    }
}

/// Symmetric Hausdorff distance between the vertex sets of two polygons.
pub fn vertex_set_distance<T: Scalar>(p: &SymmetricPolygon2<T>, q: &SymmetricPolygon2<T>) -> T {
    let one_way = |a: &[Vec2<T>], b: &[Vec2<T>]| {
        a.iter()
            .map(|u| b.iter().map(|w| (*u - *w).norm()).fold(T::infinity(), T::min))
            .fold(T::zero(), T::max)
    };
    one_way(p.vertices(), q.vertices()).max(one_way(q.vertices(), p.vertices()))
}

fn polygon_area<T: Scalar>(v: &[Vec2<T>]) -> T {
    let n = v.len();
    let twice = (0..n).fold(T::zero(), |acc, i| acc + v[i].cross(v[(i + 1) % n]));
    twice * T::lit(0.5)
}

/// Monotone-chain hull, counterclockwise, without collinear vertices.
fn convex_hull<T: Scalar>(pts: &mut [Vec2<T>]) -> Vec<Vec2<T>> {
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    let turns_left = |o: Vec2<T>, a: Vec2<T>, b: Vec2<T>| {
        let (u, w) = (a - o, b - o);
        u.cross(w) > T::GEOM_EPS * u.norm() * w.norm()
    };
    let mut hull: Vec<Vec2<T>> = Vec::with_capacity(pts.len() + 1);
    for &p in pts.iter() {
        while hull.len() >= 2 && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}
