//! Planar moment inequalities for unconditional bodies, the anisotropic
//! measure product and its behaviour under symmetrization, and the closing
//! chain of sphere-area constants.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry2d::{ShellConstraint, Vec2};
use crate::measure2d::{full_measure, AnisotropicMeasure2};
use crate::quadrature::{integrate_adaptive, integrate_smooth};
use crate::special::{cos_power_half_period, factorial, gamma, sphere_area};
use crate::tol::REPORT_TOL;
use crate::Polygon;

/// Positive exponents `(m₁, m₂)` of the weight `x^{m₁-1} y^{m₂-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentVector {
    m: [f64; 2],
}

impl MomentVector {
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        if !(m1 > 0.0 && m2 > 0.0 && m1.is_finite() && m2.is_finite()) {
            return Err(Error::InvalidParameter(format!("moments must be positive, got ({m1}, {m2})")));
        }
        Ok(Self { m: [m1, m2] })
    }

    pub fn values(&self) -> [f64; 2] {
        self.m
    }

    fn integer_exponents(&self) -> Option<[u32; 2]> {
        let e = self.m.map(|m| m - 1.0);
        e.iter().all(|x| x.fract() == 0.0 && *x < 64.0).then(|| e.map(|x| x as u32))
    }
}

/// Tolerance of the unconditional-symmetry test.
pub const UNCONDITIONAL_TOL: f64 = 1e-9;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `∫_T x^a y^b` over the triangle `conv{0, p, q}` via `(s, t) ↦ s p + t q`
/// and `∫_{s,t≥0, s+t≤1} s^α t^β = α! β! / (α+β+2)!`.
fn triangle_monomial(p: Vec2<f64>, q: Vec2<f64>, a: u32, b: u32) -> f64 {
    let jac = p.cross(q).abs();
    let deg = a + b;
    let mut total = 0.0;
    for i in 0..=a {
        for j in 0..=b {
            let coef = binomial(a, i)
                * binomial(b, j)
                * p.x.powi(i as i32)
                * q.x.powi((a - i) as i32)
                * p.y.powi(j as i32)
                * q.y.powi((b - j) as i32);
            if coef == 0.0 {
                continue;
            }
            let (alpha, beta) = ((i + j) as usize, (deg - i - j) as usize);
            total += coef * factorial(alpha) * factorial(beta) / factorial(alpha + beta + 2);
        }
    }
    jac * total
}

/// Boundary of `P ∩ [0,∞)²` from the x-axis intercept to the y-axis one.
fn quadrant_boundary(p: &Polygon) -> Vec<Vec2<f64>> {
    let mut pts = vec![Vec2::new(p.radial(0.0), 0.0)];
    let mut inner: Vec<Vec2<f64>> = p
        .vertices()
        .iter()
        .copied()
        .filter(|v| v.x > 1e-14 && v.y > 1e-14)
        .collect();
    inner.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
    pts.extend(inner);
    pts.push(Vec2::new(0.0, p.radial(FRAC_PI_2)));
    pts
}

/// `∫_{P₊} x^{m₁-1} y^{m₂-1} dx dy`. Integer exponents use exact monomial
/// integrals over a fan of triangles from the origin; other exponents use
/// the polar form `∫ cos^a sin^b ρ^{a+b+2} / (a+b+2) dt` with the endpoint
/// singularities removed by power substitutions.
pub fn quadrant_moment(p: &Polygon, m: &MomentVector) -> f64 {
    if let Some([a, b]) = m.integer_exponents() {
        let pts = quadrant_boundary(p);
        return pts.windows(2).map(|w| triangle_monomial(w[0], w[1], a, b)).sum();
    }
    let [m1, m2] = m.m;
    let (a, b) = (m1 - 1.0, m2 - 1.0);
    let deg = a + b + 2.0;
    let f = |t: f64| t.cos().powf(a) * t.sin().powf(b) * p.radial(t).powf(deg) / deg;
    let mid = FRAC_PI_2 / 2.0;
    // t = mid·s^{1/m₂} near 0 and t = π/2 - mid·s^{1/m₁} near π/2.
    let low = integrate_adaptive(0.0, 1.0, 1e-15, 1e-13, |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let t = mid * s.powf(1.0 / m2);
        let dt = mid * s.powf(1.0 / m2 - 1.0) / m2;
        f(t) * dt
    });
    let high = integrate_adaptive(0.0, 1.0, 1e-15, 1e-13, |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let t = FRAC_PI_2 - mid * s.powf(1.0 / m1);
        let dt = mid * s.powf(1.0 / m1 - 1.0) / m1;
        f(t) * dt
    });
    low + high
}

/// Outcome of the Saint-Raymond moment comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaintRaymondReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `Γ(m₁)Γ(m₂) / (m₁ m₂ Γ(m₁+m₂+1))`: the value attained by the square and
/// its polar.
pub fn saint_raymond_rhs(m: &MomentVector) -> f64 {
    let [m1, m2] = m.m;
    gamma(m1) / m1 * gamma(m2) / m2 / gamma(m1 + m2 + 1.0)
}

/// `∫_{P₊} w ∫_{P°₊} w >= Γ(m₁)Γ(m₂) / (m₁ m₂ Γ(m₁+m₂+1))` for the weight
/// `w = x^{m₁-1} y^{m₂-1}` and an unconditional `P`.
pub fn saint_raymond_check(p: &Polygon, m: &MomentVector) -> Result<SaintRaymondReport> {
    let defect = p.unconditional_defect();
    if defect > UNCONDITIONAL_TOL {
        return Err(Error::NotUnconditional(defect));
    }
    let lhs = quadrant_moment(p, m) * quadrant_moment(&p.polar(), m);
    let rhs = saint_raymond_rhs(m);
    Ok(SaintRaymondReport { lhs, rhs, pass: lhs >= rhs - REPORT_TOL })
}

fn check_exponent(n: u32) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("exponent n = {n} must be >= 4")));
    }
    Ok(())
}

fn mu(n: u32) -> AnisotropicMeasure2 {
    AnisotropicMeasure2::new(n, 0.0).expect("n >= 1")
}

/// `μ(P) μ(P°)` against `1/n`, for the unrotated measure of exponent `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FradReport {
    pub product: f64,
    pub bound: f64,
    /// `product - bound`; negative values are reported, not treated as errors.
    pub margin: f64,
}

pub fn frad_explore(p: &Polygon, n: u32) -> Result<FradReport> {
    check_exponent(n)?;
    let m = mu(n);
    let product = full_measure(p, &m) * full_measure(&p.polar(), &m);
    let bound = 1.0 / f64::from(n);
    Ok(FradReport { product, bound, margin: product - bound })
}

/// Measures of `P`, its unconditional symmetral `U(P)` and their polars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShadowReport {
    pub mu2_p: f64,
    pub mu2_u: f64,
    pub mu2_polar_p: f64,
    pub mu2_polar_u: f64,
    /// Sign of `μ(P°) - μ(U(P)°)`, zero within tolerance.
    pub sign: i8,
    /// `μ(P) >= μ(U(P))` within tolerance.
    pub forward_holds: bool,
}

pub fn shadow_probe(p: &Polygon, n: u32) -> Result<ShadowReport> {
    check_exponent(n)?;
    let m = mu(n);
    let u = p.unconditionalize();
    let (mu2_p, mu2_u) = (full_measure(p, &m), full_measure(&u, &m));
    let (mu2_polar_p, mu2_polar_u) = (full_measure(&p.polar(), &m), full_measure(&u.polar(), &m));
    let diff = mu2_polar_p - mu2_polar_u;
    let tol = REPORT_TOL * mu2_polar_p.abs().max(1.0);
    let sign = if diff > tol {
        1
    } else if diff < -tol {
        -1
    } else {
        0
    };
    Ok(ShadowReport {
        mu2_p,
        mu2_u,
        mu2_polar_p,
        mu2_polar_u,
        sign,
        forward_holds: mu2_p >= mu2_u - REPORT_TOL * mu2_p.abs().max(1.0),
    })
}

/// One row of a batch report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BatchRow {
    pub seed: u64,
    pub product: f64,
    pub bound: f64,
    pub margin: f64,
    pub sign: i8,
}

/// Random shell bodies `B(0,1) ⊆ P ⊆ B(0, √(n+1))` with 3 to 8 vertex pairs,
/// seeded by `seed + i`.
fn batch_bodies(n: u32, count: usize, seed: u64) -> Result<Vec<(u64, Polygon)>> {
    let shell = ShellConstraint::for_exponent(n);
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let m = 3 + (s % 6) as usize;
            Polygon::random_in_shell(m, &shell, s).map(|p| (s, p))
        })
        .collect()
}

/// [`frad_explore`] over random shell bodies together with the sign of the
/// polar comparison from [`shadow_probe`].
pub fn inequality_batch(n: u32, count: usize, seed: u64) -> Result<Vec<BatchRow>> {
    check_exponent(n)?;
    batch_bodies(n, count, seed)?
        .into_par_iter()
        .map(|(s, p)| {
            let f = frad_explore(&p, n)?;
            let sh = shadow_probe(&p, n)?;
            Ok(BatchRow { seed: s, product: f.product, bound: f.bound, margin: f.margin, sign: sh.sign })
        })
        .collect()
}

/// Sign counts of a batch of [`shadow_probe`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct ShadowTally {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
    /// Bodies for which `μ(P) >= μ(U(P))` failed.
    pub forward_failures: usize,
}

pub fn shadow_batch(n: u32, count: usize, seed: u64) -> Result<ShadowTally> {
    check_exponent(n)?;
    let reports: Vec<ShadowReport> = batch_bodies(n, count, seed)?
        .into_par_iter()
        .map(|(_, p)| shadow_probe(&p, n))
        .collect::<Result<_>>()?;
    let mut t = ShadowTally::default();
    for r in reports {
        match r.sign {
            1 => t.positive += 1,
            0 => t.zero += 1,
            _ => t.negative += 1,
        }
        if !r.forward_holds {
            t.forward_failures += 1;
        }
    }
    Ok(t)
}

/// Pass counts of [`saint_raymond_check`] on random unconditional bodies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaintRaymondTally {
    pub checks: usize,
    pub passed: usize,
    /// Smallest `lhs / rhs` seen.
    pub worst_ratio: f64,
}

/// Unconditional symmetrals of random shell bodies with 3 to 8 vertex
/// pairs, each checked for every moment vector in `moments`.
pub fn saint_raymond_batch(count: usize, seed: u64, moments: &[MomentVector]) -> Result<SaintRaymondTally> {
    let reports: Vec<SaintRaymondReport> = batch_bodies(4, count, seed)?
        .into_par_iter()
        .map(|(_, p)| {
            let u = p.unconditionalize();
            moments.iter().map(|m| saint_raymond_check(&u, m)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(SaintRaymondTally {
        checks: reports.len(),
        passed: reports.iter().filter(|r| r.pass).count(),
        worst_ratio: reports.iter().map(|r| r.lhs / r.rhs).fold(f64::INFINITY, f64::min),
    })
}

/// The chain `|S^{n-1}|² / ((n-1) C(n)²) = |S^{n-2}|² / (n-1)
/// = 4π^{n-1} / ((n-1) Γ((n-1)/2)²)` compared with `4^n / n!`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosingChainReport {
    pub n: u32,
    /// `∫_{-π/2}^{π/2} cos^{n-2} t dt` by quadrature.
    pub c_n: f64,
    /// The same by `√π Γ((n-1)/2) / Γ(n/2)`.
    pub c_n_closed: f64,
    /// `|S^{n-1}|² / ((n-1) C(n)²)`.
    pub chain_value: f64,
    /// `|S^{n-2}|² / (n-1)`.
    pub via_lower_sphere: f64,
    /// `4π^{n-1} / ((n-1) Γ((n-1)/2)²)`.
    pub closed_form: f64,
    pub mahler_conjecture_value: f64,
    pub pass: bool,
}

pub fn closing_chain(n: u32) -> Result<ClosingChainReport> {
    check_exponent(n)?;
    let nf = f64::from(n);
    let k = n as i32 - 2;
    let c_n = integrate_smooth(-FRAC_PI_2, FRAC_PI_2, |t| t.cos().powi(k));
    let c_n_closed = cos_power_half_period(f64::from(n - 2));
    let chain_value = sphere_area(n as usize).powi(2) / ((nf - 1.0) * c_n * c_n);
    let via_lower_sphere = sphere_area(n as usize - 1).powi(2) / (nf - 1.0);
    let closed_form = 4.0 * PI.powi(n as i32 - 1) / ((nf - 1.0) * gamma((nf - 1.0) / 2.0).powi(2));
    let mahler_conjecture_value = 4f64.powi(n as i32) / factorial(n as usize);
    let agree = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol * b.abs();
    let pass = agree(c_n, c_n_closed, 1e-12)
        && agree(chain_value, closed_form, 1e-10)
        && agree(via_lower_sphere, closed_form, 1e-10)
        && chain_value > mahler_conjecture_value;
    Ok(ClosingChainReport {
        n,
        c_n,
        c_n_closed,
        chain_value,
        via_lower_sphere,
        closed_form,
        mahler_conjecture_value,
        pass,
    })
}
