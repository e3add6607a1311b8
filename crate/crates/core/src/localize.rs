//! Cutting the sphere `S²` by hemispheres that halve two integrals at once,
//! shrinking regions to thin pancakes, and evaluating needle integrals.
//!
//! Integrals over regions use a fixed icosahedral grid. A region is an
//! intersection of open hemispheres, and each grid node enters with the
//! product of its soft hemisphere masks: the fraction of a disk of the
//! node's cell area that lies on the kept side. Complementary hemispheres
//! have masks summing to one, so cutting conserves mass exactly on the grid
//! and the halving map is continuously differentiable in the cut normal.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::bodynd::BodyND;
use crate::error::{Error, Result};
use crate::measure2d::{ConeInterval, NeedleDensity};
use crate::tol::HALVING_TOL;

/// Point or direction in `R³`.
pub type Vec3 = [f64; 3];

/// Default grid refinement level (40962 nodes).
pub const DEFAULT_LEVEL: u32 = 6;
/// Pancakes thinner than this can be turned into needles.
pub const NEEDLE_WIDTH: f64 = 0.05;

fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize3(a: Vec3) -> Option<Vec3> {
    let n = dot3(&a, &a).sqrt();
    (n > 1e-300 && n.is_finite()).then(|| [a[0] / n, a[1] / n, a[2] / n])
}

fn combine(a: f64, u: &Vec3, b: f64, v: &Vec3) -> Vec3 {
    [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]]
}

/// Great-circle distance between unit vectors.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    let c = dot3(a, b);
    let s = cross3(a, b);
    dot3(&s, &s).sqrt().atan2(c)
}

/// Two unit vectors completing `x` to an orthonormal basis.
fn tangent_basis(x: &Vec3) -> (Vec3, Vec3) {
    let seed = if x[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize3(cross3(x, &seed)).expect("seed is not parallel to x");
    (e1, cross3(x, &e1))
}

/// Fraction of a disk whose center sits at signed distance `s` radii from
/// a line that lies on the positive side.
#[inline]
fn disk_fraction(s: f64) -> f64 {
    if s >= 1.0 {
        1.0
    } else if s <= -1.0 {
        0.0
    } else {
        1.0 - (s.acos() - s * (1.0 - s * s).sqrt()) / PI
    }
}

/// Subdivided icosahedron with cell weights normalized to total one.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    /// Angular radius of a disk with the node's cell area.
    radii: Vec<f64>,
    triangles: Vec<[usize; 3]>,
}

fn spherical_triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    // Van Oosterom-Strackee.
    let num = dot3(a, &cross3(b, c)).abs();
    let den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
    2.0 * num.atan2(den)
}

impl SphereGrid {
    /// Icosahedron refined `level` times by edge bisection:
    /// `10·4^level + 2` nodes.
    pub fn icosphere(level: u32) -> Self {
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        let raw = [
            [-1.0, g, 0.0],
            [1.0, g, 0.0],
            [-1.0, -g, 0.0],
            [1.0, -g, 0.0],
            [0.0, -1.0, g],
            [0.0, 1.0, g],
            [0.0, -1.0, -g],
            [0.0, 1.0, -g],
            [g, 0.0, -1.0],
            [g, 0.0, 1.0],
            [-g, 0.0, -1.0],
            [-g, 0.0, 1.0],
        ];
        let mut nodes: Vec<Vec3> = raw.iter().map(|p| normalize3(*p).expect("nonzero")).collect();
        let mut triangles: Vec<[usize; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..level {
            let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
            let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<Vec3>| {
                let key = (a.min(b), a.max(b));
                *mid.entry(key).or_insert_with(|| {
                    let m = normalize3(combine(1.0, &nodes[a], 1.0, &nodes[b])).expect("distinct nodes");
                    nodes.push(m);
                    nodes.len() - 1
                })
            };
            let mut next = Vec::with_capacity(triangles.len() * 4);
            for &[a, b, c] in &triangles {
                let ab = midpoint(a, b, &mut nodes);
                let bc = midpoint(b, c, &mut nodes);
                let ca = midpoint(c, a, &mut nodes);
                next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            triangles = next;
        }
        let mut weights = vec![0.0; nodes.len()];
        for t in &triangles {
            let area = spherical_triangle_area(&nodes[t[0]], &nodes[t[1]], &nodes[t[2]]);
            for &i in t {
                weights[i] += area / 3.0;
            }
        }
        let radii = weights.iter().map(|w| (w / PI).sqrt()).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self { nodes, weights, radii, triangles }
    }

    /// Shared grid for `level`, built on first use.
    pub fn cached(level: u32) -> Result<&'static SphereGrid> {
        static GRIDS: [OnceLock<SphereGrid>; 9] = [const { OnceLock::new() }; 9];
        let slot = GRIDS
            .get(level as usize)
            .ok_or_else(|| Error::InvalidParameter(format!("grid level {level} above 8")))?;
        Ok(slot.get_or_init(|| SphereGrid::icosphere(level)))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    /// Normalized cell weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Soft membership of node `i` in the open hemisphere centered at `x`.
    #[inline]
    pub fn mask(&self, i: usize, x: &Vec3) -> f64 {
        disk_fraction(dot3(x, &self.nodes[i]) / self.radii[i])
    }

    /// `G` at every node.
    pub fn sample<G: Fn(&Vec3) -> f64 + Sync>(&self, g: G) -> Vec<f64> {
        self.nodes.par_iter().map(|u| g(u)).collect()
    }
}

/// Upper-half sum `Σ w_i v_i` over nodes with `z > 0`; the equator is a
/// mirror plane of the grid and its nodes count half.
fn upper_half_sum(grid: &SphereGrid, values: &[f64]) -> f64 {
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let z = grid.nodes[i][2];
            let m = if z.abs() <= 1e-14 { 0.5 } else if z > 0.0 { 1.0 } else { 0.0 };
            m * grid.weights[i] * values[i]
        })
        .sum()
}

/// `∫_{x^∨} G dμ` for the normalized spherical measure `μ`, on the grid of
/// the given level (at least 1) rotated so that `x` is its pole. The sharp
/// equator makes the error scale with the squared mesh width, so sums on
/// this level and the next coarser one are combined by Richardson
/// extrapolation.
pub fn hemisphere_integral<G: Fn(&Vec3) -> f64 + Sync>(g: G, x: &Vec3, level: u32) -> Result<f64> {
    if level == 0 {
        return Err(Error::InvalidParameter("hemisphere quadrature needs level >= 1".into()));
    }
    let x = normalize3(*x).ok_or_else(|| Error::InvalidParameter("zero hemisphere center".into()))?;
    let (e1, e2) = tangent_basis(&x);
    let fine = SphereGrid::cached(level)?;
    let coarse = SphereGrid::cached(level - 1)?;
    // Refinement appends nodes, so the coarse nodes lead the fine list.
    let values = fine.sample(|u| g(&combine(1.0, &combine(u[0], &e1, u[1], &e2), u[2], &x)));
    let f = upper_half_sum(fine, &values);
    let c = upper_half_sum(coarse, &values[..coarse.len()]);
    Ok(f + (f - c) / 3.0)
}

/// Intersection of `S²` with open hemispheres `{u : x_i · u > 0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalRegion {
    pub cuts: Vec<Vec3>,
}

impl SphericalRegion {
    pub fn sphere() -> Self {
        Self { cuts: Vec::new() }
    }

    pub fn hemisphere(x: Vec3) -> Result<Self> {
        Self::sphere().cut(x)
    }

    /// The region intersected with `x^∨`; fails if the result is empty on
    /// the default grid.
    pub fn cut(&self, x: Vec3) -> Result<Self> {
        let x = normalize3(x).ok_or_else(|| Error::InvalidParameter("zero cut normal".into()))?;
        let mut cuts = self.cuts.clone();
        cuts.push(x);
        let r = Self { cuts };
        r.interior_point(SphereGrid::cached(DEFAULT_LEVEL)?)?;
        Ok(r)
    }

    pub fn contains(&self, u: &Vec3) -> bool {
        self.cuts.iter().all(|x| dot3(x, u) > 0.0)
    }

    /// Soft membership of node `i`.
    pub fn mask(&self, grid: &SphereGrid, i: usize) -> f64 {
        self.cuts.iter().map(|x| grid.mask(i, x)).product()
    }

    /// Grid node deepest inside the region.
    pub fn interior_point(&self, grid: &SphereGrid) -> Result<Vec3> {
        grid.nodes
            .iter()
            .filter(|u| self.contains(u))
            .map(|u| (self.cuts.iter().map(|x| dot3(x, u)).fold(1.0, f64::min), u))
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, u)| *u)
            .ok_or_else(|| Error::DegenerateBody("spherical region has no interior grid node".into()))
    }

    /// `∫_R G dμ` on the grid.
    pub fn integral<G: Fn(&Vec3) -> f64 + Sync>(&self, g: G, grid: &SphereGrid) -> f64 {
        (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let m = self.mask(grid, i);
                if m == 0.0 {
                    0.0
                } else {
                    grid.weights[i] * m * g(&grid.nodes[i])
                }
            })
            .sum()
    }
}

/// Restriction of two sampled functions to a region: nodes with positive
/// mask and their weighted values.
struct Restricted<'a> {
    grid: &'a SphereGrid,
    nodes: Vec<usize>,
    g1: Vec<f64>,
    g2: Vec<f64>,
    mass: [f64; 2],
}

impl<'a> Restricted<'a> {
    fn new(grid: &'a SphereGrid, region: &SphericalRegion, v1: &[f64], v2: &[f64]) -> Self {
        let (mut nodes, mut g1, mut g2) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..grid.len() {
            let m = region.mask(grid, i);
            if m > 0.0 {
                nodes.push(i);
                g1.push(grid.weights[i] * m * v1[i]);
                g2.push(grid.weights[i] * m * v2[i]);
            }
        }
        let mass = [g1.iter().sum(), g2.iter().sum()];
        Self { grid, nodes, g1, g2, mass }
    }

    /// Masses of both functions on `x^∨ ∩ R`.
    fn upper(&self, x: &Vec3) -> [f64; 2] {
        let mut s = [0.0, 0.0];
        for (j, &i) in self.nodes.iter().enumerate() {
            let f = self.grid.mask(i, x);
            s[0] += f * self.g1[j];
            s[1] += f * self.g2[j];
        }
        s
    }

    /// Excess of the `x^∨` side over half the region mass; odd in `x`.
    fn imbalance(&self, x: &Vec3) -> [f64; 2] {
        let u = self.upper(x);
        [u[0] - 0.5 * self.mass[0], u[1] - 0.5 * self.mass[1]]
    }

    fn residual(&self, x: &Vec3) -> f64 {
        let d = self.imbalance(x);
        d[0].abs().max(d[1].abs())
    }
}

/// Which cut normals the halving search may use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub enum CutPolicy {
    /// Any direction on `S²`.
    #[default]
    Free,
    /// Normals on the great circle orthogonal to the given pole. This
    /// leaves one parameter for two conditions, so halving can fail.
    GreatCircle(Vec3),
}

/// Damped Gauss-Newton on the tangent plane at the current point.
fn refine(r: &Restricted, mut x: Vec3, policy: &CutPolicy) -> (Vec3, f64) {
    let mut res = r.imbalance(&x);
    let mut lambda = 1e-3;
    for _ in 0..60 {
        let score = res[0].abs().max(res[1].abs());
        if score < 1e-14 {
            break;
        }
        let dirs: Vec<Vec3> = match policy {
            CutPolicy::Free => {
                let (a, b) = tangent_basis(&x);
                vec![a, b]
            }
            CutPolicy::GreatCircle(pole) => match normalize3(cross3(pole, &x)) {
                Some(t) => vec![t],
                None => break,
            },
        };
        let h = 1e-6;
        let jac: Vec<[f64; 2]> = dirs
            .iter()
            .map(|d| {
                let xp = normalize3(combine(1.0, &x, h, d)).expect("unit step");
                let xm = normalize3(combine(1.0, &x, -h, d)).expect("unit step");
                let (p, m) = (r.imbalance(&xp), r.imbalance(&xm));
                [(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)]
            })
            .collect();
        // Normal equations (JᵀJ + λ diag) δ = -Jᵀ res.
        let p = jac.len();
        let mut a = [[0.0; 2]; 2];
        let mut g = [0.0; 2];
        for i in 0..p {
            for j in 0..p {
                a[i][j] = jac[i][0] * jac[j][0] + jac[i][1] * jac[j][1];
            }
            g[i] = -(jac[i][0] * res[0] + jac[i][1] * res[1]);
        }
        let scale = (a[0][0] + a[1][1]).max(1e-300);
        let mut improved = false;
        for _ in 0..12 {
            let mut m = a;
            for (i, row) in m.iter_mut().enumerate().take(p) {
                row[i] += lambda * scale;
            }
            let step: Vec<f64> = if p == 1 {
                vec![g[0] / m[0][0]]
            } else {
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                vec![(g[0] * m[1][1] - g[1] * m[0][1]) / det, (m[0][0] * g[1] - m[1][0] * g[0]) / det]
            };
            let mut cand = x;
            for (d, s) in dirs.iter().zip(&step) {
                cand = combine(1.0, &cand, *s, d);
            }
            let Some(cand) = normalize3(cand) else { break };
            let cres = r.imbalance(&cand);
            if cres[0].abs().max(cres[1].abs()) < score {
                x = cand;
                res = cres;
                lambda = (lambda * 0.1).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (x, res[0].abs().max(res[1].abs()))
}

/// Flips `x` so its first nonzero coordinate is positive.
fn canonical(x: Vec3) -> Vec3 {
    let first = x.iter().copied().find(|v| v.abs() > 1e-12).unwrap_or(1.0);
    if first < 0.0 {
        [-x[0], -x[1], -x[2]]
    } else {
        x
    }
}

/// Winding number of the planar loop through `pts` around the origin.
fn winding(pts: &[[f64; 2]]) -> i32 {
    let mut total = 0.0;
    for k in 0..pts.len() {
        let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
        let cross = a[0] * b[1] - a[1] * b[0];
        let dotp = a[0] * b[0] + a[1] * b[1];
        total += cross.atan2(dotp);
    }
    (total / (2.0 * PI)).round() as i32
}

fn halving_in(r: &Restricted, policy: &CutPolicy) -> Result<Vec3> {
    if !(r.mass[0] > 0.0 && r.mass[1] > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "region integrals must be positive, got {:?}",
            r.mass
        )));
    }
    let mut starts: Vec<Vec3> = Vec::new();
    match policy {
        CutPolicy::Free => {
            // Triangles of a coarse mesh around which the imbalance winds
            // contain a zero; their centroids seed the refinement.
            let coarse = SphereGrid::cached(2)?;
            let values: Vec<[f64; 2]> = coarse.nodes.par_iter().map(|x| r.imbalance(x)).collect();
            let mut ranked: Vec<(f64, Vec3)> = Vec::new();
            for t in &coarse.triangles {
                let loop_vals = [values[t[0]], values[t[1]], values[t[2]]];
                let c = normalize3(combine(
                    1.0,
                    &combine(1.0, &coarse.nodes[t[0]], 1.0, &coarse.nodes[t[1]]),
                    1.0,
                    &coarse.nodes[t[2]],
                ))
                .expect("triangle centroid");
                if winding(&loop_vals) != 0 {
                    ranked.push((r.residual(&c), c));
                }
            }
            for (i, x) in coarse.nodes.iter().enumerate() {
                ranked.push((values[i][0].abs().max(values[i][1].abs()), *x));
            }
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
            starts.extend(ranked.into_iter().take(6).map(|(_, x)| x));
        }
        CutPolicy::GreatCircle(pole) => {
            let pole = normalize3(*pole).ok_or_else(|| Error::InvalidParameter("zero pole".into()))?;
            let (a, b) = tangent_basis(&pole);
            let mut ranked: Vec<(f64, Vec3)> = (0..180)
                .map(|j| {
                    let phi = PI * j as f64 / 180.0;
                    let x = combine(phi.cos(), &a, phi.sin(), &b);
                    (r.residual(&x), x)
                })
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
            starts.extend(ranked.into_iter().take(4).map(|(_, x)| x));
        }
    }
    let mut best: Option<(f64, Vec3)> = None;
    for s in starts {
        let (x, res) = refine(r, s, policy);
        let x = canonical(x);
        let better = match &best {
            None => true,
            Some((b, bx)) => res < *b || (res == *b && x.partial_cmp(bx) == Some(std::cmp::Ordering::Less)),
        };
        if better {
            best = Some((res, x));
        }
    }
    let (res, x) = best.expect("at least one start");
    if res > HALVING_TOL {
        return Err(Error::HalvingFailed { residual: res });
    }
    Ok(x)
}

/// Hemisphere `x^∨` splitting both `∫_R G_i` into equal halves up to
/// [`HALVING_TOL`].
pub fn find_halving_hemisphere<G1, G2>(
    g1: G1,
    g2: G2,
    region: &SphericalRegion,
    policy: &CutPolicy,
    grid: &SphereGrid,
) -> Result<Vec3>
where
    G1: Fn(&Vec3) -> f64 + Sync,
    G2: Fn(&Vec3) -> f64 + Sync,
{
    let (v1, v2) = (grid.sample(g1), grid.sample(g2));
    halving_in(&Restricted::new(grid, region, &v1, &v2), policy)
}

/// Leaf of the cutting tree with its two masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Leaf {
    pub region: SphericalRegion,
    pub masses: [f64; 2],
}

/// Halving failure with the leaves of the last completed level.
#[derive(Debug, Clone, PartialEq)]
pub struct CutFailure {
    pub error: Error,
    pub partial: Vec<Leaf>,
}

impl From<CutFailure> for Error {
    fn from(f: CutFailure) -> Self {
        f.error
    }
}

/// `steps` rounds of simultaneous halving, keeping both sides each time:
/// `2^steps` leaves in depth-first order.
pub fn cut_iterate<G1, G2>(
    g1: G1,
    g2: G2,
    steps: u32,
    policy: &CutPolicy,
    grid: &SphereGrid,
) -> std::result::Result<Vec<Leaf>, CutFailure>
where
    G1: Fn(&Vec3) -> f64 + Sync,
    G2: Fn(&Vec3) -> f64 + Sync,
{
    let (v1, v2) = (grid.sample(g1), grid.sample(g2));
    let leaf = |region: SphericalRegion| {
        let r = Restricted::new(grid, &region, &v1, &v2);
        Leaf { region, masses: r.mass }
    };
    let mut leaves = vec![leaf(SphericalRegion::sphere())];
    for _ in 0..steps {
        let next: Result<Vec<[Leaf; 2]>> = leaves
            .par_iter()
            .map(|l| {
                let r = Restricted::new(grid, &l.region, &v1, &v2);
                let x = halving_in(&r, policy)?;
                let mut halves = [x, [-x[0], -x[1], -x[2]]].map(|y| {
                    let mut cuts = l.region.cuts.clone();
                    cuts.push(y);
                    leaf(SphericalRegion { cuts })
                });
                // Exact conservation on the grid; share rounding symmetrically.
                let drift = [0, 1].map(|k| l.masses[k] - halves[0].masses[k] - halves[1].masses[k]);
                for h in halves.iter_mut() {
                    for k in 0..2 {
                        h.masses[k] += 0.5 * drift[k];
                    }
                }
                Ok(halves)
            })
            .collect();
        match next {
            Ok(pairs) => leaves = pairs.into_iter().flatten().collect(),
            Err(error) => return Err(CutFailure { error, partial: leaves }),
        }
    }
    Ok(leaves)
}

/// Cutting functions built from a body `K ⊂ R³`: with `F₁ = x_K³/3` and
/// `F₂ = x_{K°}³/3`, `G₁ = c - F₁` and `G₂ = a - c F₂` where
/// `c = offset · ∫F₁` and `a = offset · c · ∫F₂`. For `offset > 1` both
/// have positive integrals while `G₁` may change sign.
#[derive(Debug, Clone)]
pub struct BodyFunctions {
    body: BodyND,
    polar: BodyND,
    pub c: f64,
    pub a: f64,
}

impl BodyFunctions {
    pub fn new(k: &BodyND, offset: f64, grid: &SphereGrid) -> Result<Self> {
        if k.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: k.dim() });
        }
        if !(offset > 1.0 && offset.is_finite()) {
            return Err(Error::InvalidParameter(format!("offset {offset} must exceed 1")));
        }
        let polar = k.polar();
        let mean = |b: &BodyND| -> Result<f64> {
            let vals = grid.nodes.iter().map(|u| Ok(b.radial(u)?.powi(3) / 3.0)).collect::<Result<Vec<f64>>>()?;
            Ok(vals.iter().zip(&grid.weights).map(|(v, w)| v * w).sum())
        };
        let c = offset * mean(k)?;
        let a = offset * c * mean(&polar)?;
        Ok(Self { body: k.clone(), polar, c, a })
    }

    pub fn g1(&self, u: &Vec3) -> f64 {
        self.c - self.body.radial(u).expect("unit direction in R³").powi(3) / 3.0
    }

    pub fn g2(&self, u: &Vec3) -> f64 {
        self.a - self.c * self.polar.radial(u).expect("unit direction in R³").powi(3) / 3.0
    }
}

/// Geodesic segment between two unit vectors at distance `< π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
}

impl Arc {
    pub fn new(start: Vec<f64>, end: Vec<f64>) -> Result<Self> {
        if start.len() != end.len() {
            return Err(Error::DimensionMismatch { expected: start.len(), got: end.len() });
        }
        for p in [&start, &end] {
            let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (n - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!("arc endpoint has norm {n}")));
            }
        }
        let a = Self { start, end };
        if a.direction().is_none() {
            return Err(Error::InvalidParameter("arc endpoints coincide or are antipodal".into()));
        }
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.start.len()
    }

    pub fn length(&self) -> f64 {
        let c: f64 = self.start.iter().zip(&self.end).map(|(a, b)| a * b).sum();
        let s = self.direction().map_or(0.0, |(_, s)| s);
        s.atan2(c)
    }

    /// Unit tangent at `start` pointing toward `end`, and `sin(length)`.
    fn direction(&self) -> Option<(Vec<f64>, f64)> {
        let c: f64 = self.start.iter().zip(&self.end).map(|(a, b)| a * b).sum();
        let t: Vec<f64> = self.end.iter().zip(&self.start).map(|(b, a)| b - c * a).collect();
        let n = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 1e-12).then(|| (t.iter().map(|x| x / n).collect(), n))
    }

    /// Point at arclength `t` from `start`.
    pub fn point(&self, t: f64) -> Vec<f64> {
        let (dir, _) = self.direction().expect("validated arc");
        self.start.iter().zip(&dir).map(|(a, d)| t.cos() * a + t.sin() * d).collect()
    }
}

fn as_vec3(v: &[f64]) -> Vec3 {
    [v[0], v[1], v[2]]
}

/// Distance from `u` to an arc on `S²`.
fn distance_to_arc(u: &Vec3, arc: &Arc) -> (f64, Vec3) {
    let a = as_vec3(&arc.start);
    let (dir, _) = arc.direction().expect("validated arc");
    let d = as_vec3(&dir);
    let len = arc.length();
    let t = dot3(u, &d).atan2(dot3(u, &a));
    let foot = if (0.0..=len).contains(&t) {
        combine(t.cos(), &a, t.sin(), &d)
    } else {
        let e = as_vec3(&arc.end);
        if angle_between(u, &a) <= angle_between(u, &e) {
            a
        } else {
            e
        }
    };
    (angle_between(u, &foot), foot)
}

/// Thin region around an axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pancake {
    pub region: SphericalRegion,
    pub axis: Arc,
    pub width: f64,
}

/// Pancake with the distances to the target after each cut.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisCutTrace {
    pub pancake: Pancake,
    /// Distance from the target to the region before any cut, then after each.
    pub widths: Vec<f64>,
}

fn region_width(region: &SphericalRegion, grid: &SphereGrid, target: &Arc) -> (f64, Vec3, Vec3) {
    grid.nodes
        .par_iter()
        .filter(|u| region.contains(u))
        .map(|u| {
            let (d, foot) = distance_to_arc(u, target);
            (d, *u, foot)
        })
        .reduce(|| (0.0, [0.0; 3], [0.0; 3]), |a, b| if b.0 > a.0 { b } else { a })
}

/// Repeatedly cuts `region` by hemispheres whose boundary circle crosses
/// the geodesic from the target to the farthest region point orthogonally,
/// a quarter of the way out, keeping the side that contains the target.
/// Stops after `steps` cuts or once the width is below [`NEEDLE_WIDTH`].
pub fn axis_cut_sequence(region: &SphericalRegion, target: &Arc, steps: usize, grid: &SphereGrid) -> Result<AxisCutTrace> {
    if target.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: target.dim() });
    }
    region.interior_point(grid)?;
    let mut region = region.clone();
    let (mut width, mut far, mut foot) = region_width(&region, grid, target);
    let mut widths = vec![width];
    for _ in 0..steps {
        if width < NEEDLE_WIDTH {
            break;
        }
        // Geodesic from `foot` toward `far`; the kept side contains `foot`.
        let Some(t) = normalize3(combine(1.0, &far, -dot3(&far, &foot), &foot)) else { break };
        let s0 = 0.25 * width;
        let keep = combine(s0.sin(), &foot, -s0.cos(), &t);
        region.cuts.push(normalize3(keep).expect("unit combination"));
        (width, far, foot) = region_width(&region, grid, target);
        widths.push(width);
    }
    let pancake = fit_pancake(region, target, grid)?;
    Ok(AxisCutTrace { pancake, widths })
}

/// Axis: the part of the target's great circle covered by projections of
/// region nodes.
fn fit_pancake(region: SphericalRegion, target: &Arc, grid: &SphereGrid) -> Result<Pancake> {
    let a = as_vec3(&target.start);
    let (dir, _) = target.direction().expect("validated arc");
    let d = as_vec3(&dir);
    let pole = cross3(&a, &d);
    let inside: Vec<&Vec3> = grid.nodes.iter().filter(|u| region.contains(u)).collect();
    if inside.is_empty() {
        return Err(Error::DegenerateBody("pancake region has no grid nodes".into()));
    }
    let mid = 0.5 * target.length();
    let angles: Vec<f64> = inside
        .iter()
        .map(|u| {
            let t = dot3(u, &d).atan2(dot3(u, &a));
            mid + (t - mid + PI).rem_euclid(2.0 * PI) - PI
        })
        .collect();
    let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hi = hi.max(lo + 1e-9);
    let axis = Arc::new(
        combine(lo.cos(), &a, lo.sin(), &d).to_vec(),
        combine(hi.cos(), &a, hi.sin(), &d).to_vec(),
    )?;
    let width = inside
        .iter()
        .zip(&angles)
        .map(|(u, _)| dot3(u, &pole).abs().min(1.0).asin().max(distance_to_arc(u, &axis).0))
        .fold(0.0, f64::max);
    Ok(Pancake { region, axis, width })
}

/// Geodesic segment carrying the probability density `C cos^k(t - t0)`,
/// `t` the arclength from the start.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalNeedle {
    pub arc: Arc,
    pub density: NeedleDensity,
}

impl SphericalNeedle {
    pub fn new(arc: Arc, k: u32, t0: f64) -> Result<Self> {
        let density = NeedleDensity::new(k, t0, ConeInterval::new(0.0, arc.length())?)?;
        Ok(Self { arc, density })
    }

    /// `∫ f dν` over the needle.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.density.integrate(|t| f(&self.arc.point(t)))
    }
}

/// Needle on the pancake axis whose density peaks at the projection of the
/// region's centroid.
pub fn extract_needle(p: &Pancake, k: u32, grid: &SphereGrid) -> Result<SphericalNeedle> {
    if !(p.width < NEEDLE_WIDTH) {
        return Err(Error::PancakeTooThick(p.width));
    }
    let mut c = [0.0; 3];
    for i in 0..grid.len() {
        let m = p.region.mask(grid, i) * grid.weights[i];
        if m > 0.0 {
            c = combine(1.0, &c, m, &grid.nodes[i]);
        }
    }
    let a = as_vec3(&p.axis.start);
    let (dir, _) = p.axis.direction().expect("validated arc");
    let t0 = dot3(&c, &as_vec3(&dir)).atan2(dot3(&c, &a));
    SphericalNeedle::new(p.axis.clone(), k, t0)
}

/// The two needle integrals of `x_K^n / n` and `x_{K°}^n / n` and their product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeedleProduct {
    pub left: f64,
    pub right: f64,
    pub product: f64,
}

pub fn needle_product(k: &BodyND, needle: &SphericalNeedle) -> Result<NeedleProduct> {
    let n = k.dim();
    if needle.arc.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: needle.arc.dim() });
    }
    let polar = k.polar();
    let mut failure = None;
    let mut integral = |body: &BodyND| {
        needle.integrate(|u| match body.radial(u) {
            Ok(r) => r.powi(n as i32) / n as f64,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        })
    };
    let left = integral(k);
    let right = integral(&polar);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(NeedleProduct { left, right, product: left * right })
}
