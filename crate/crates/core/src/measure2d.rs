//! Anisotropic planar measures `μ = r^n |cos(t + θ)|^{n-1} dr dt` evaluated on
//! cones over angular intervals, spherical-needle densities on arcs, and the
//! sin^k-concavity chord test.
//!
//! In Cartesian terms the density is `|p · e|^{n-1} dA` where
//! `e = (cos θ, -sin θ)` is the direction in which the angular weight peaks;
//! the axes are body-fixed in the sense that `θ` rotates the weight, never
//! the body.
//!
//! Sector integrals are computed by Gauss-Legendre quadrature on pieces cut
//! at the polygon vertex angles and the zeros of `cos(t + θ)`, so every
//! piece carries a smooth integrand `g(t) ρ(t)^{n+1} / (n+1)` with
//! `ρ(t) = 1 / (a_k · u(t))` for the active facet `a_k`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry2d::Vec2;
use crate::quadrature::{integrate_adaptive, integrate_smooth};
use crate::Polygon;

/// The measure with polar density `r^n |cos(t + θ)|^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropicMeasure2 {
    exponent_n: u32,
    theta: f64,
}

impl AnisotropicMeasure2 {
    /// `theta` is reduced into `[0, π)`; the weight is π-periodic.
    pub fn new(exponent_n: u32, theta: f64) -> Result<Self> {
        if exponent_n < 1 {
            return Err(Error::InvalidParameter("measure exponent must be >= 1".into()));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite rotation {theta}")));
        }
        Ok(Self { exponent_n, theta: theta.rem_euclid(PI) })
    }

    pub fn exponent_n(&self) -> u32 {
        self.exponent_n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Angular weight `g(θ, t) = |cos(t + θ)|^{n-1}`.
    #[inline]
    pub fn density(&self, t: f64) -> f64 {
        (t + self.theta).cos().abs().powi(self.exponent_n as i32 - 1)
    }

    /// Zeros of `cos(t + θ)` strictly inside `(a, b)`.
    fn zeros_in(&self, a: f64, b: f64) -> impl Iterator<Item = f64> {
        let first = FRAC_PI_2 - self.theta;
        let k0 = ((a - first) / PI).floor() as i64;
        (k0..)
            .map(move |k| first + k as f64 * PI)
            .skip_while(move |&z| z <= a)
            .take_while(move |&z| z < b)
    }
}

/// Angular interval `[start, start + length]` with `0 < length <= π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeInterval {
    start: f64,
    length: f64,
}

impl ConeInterval {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(start.is_finite() && length.is_finite()) {
            return Err(Error::InvalidParameter("non-finite interval".into()));
        }
        if length <= 0.0 {
            return Err(Error::DegenerateInterval(length));
        }
        if length > PI + 1e-12 {
            return Err(Error::InvalidParameter(format!("interval length {length} exceeds π")));
        }
        Ok(Self { start, length: length.min(PI) })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn end(&self) -> f64 {
        self.start + self.length
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self { start: self.start + by, length: self.length }
    }
}

/// `∫_I |cos(t + θ)|^{n-1} dt`.
pub fn g_integral(measure: &AnisotropicMeasure2, interval: &ConeInterval) -> f64 {
    let (a, b) = (interval.start(), interval.end());
    let mut breaks = vec![a];
    breaks.extend(measure.zeros_in(a, b));
    breaks.push(b);
    breaks.windows(2).map(|w| integrate_smooth(w[0], w[1], |t| measure.density(t))).sum()
}

/// Index of the facet active on the ray at angle `t`.
#[inline]
fn active_facet(p: &Polygon, t: f64) -> Vec2<f64> {
    let u = Vec2::from_angle(t);
    *p.facets()
        .iter()
        .max_by(|a, b| a.dot(u).total_cmp(&b.dot(u)))
        .expect("polygon has facets")
}

/// Vertex angles of `p` inside `(a, b)`, over all windings.
fn vertex_angles_in(p: &Polygon, a: f64, b: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for v in p.vertices() {
        let phi = v.angle();
        let mut t = phi + ((a - phi) / TAU).floor() * TAU;
        while t <= a {
            t += TAU;
        }
        while t < b {
            out.push(t);
            t += TAU;
        }
    }
    out
}

fn sector_breaks(p: &Polygon, measure: &AnisotropicMeasure2, a: f64, b: f64) -> Vec<f64> {
    let mut breaks = vertex_angles_in(p, a, b);
    breaks.extend(measure.zeros_in(a, b));
    breaks.push(a);
    breaks.push(b);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

#[inline]
fn sector_integrand(measure: &AnisotropicMeasure2, facet: Vec2<f64>, t: f64) -> f64 {
    let n = measure.exponent_n as i32;
    let rho = 1.0 / facet.dot(Vec2::from_angle(t));
    measure.density(t) * rho.powi(n + 1) / f64::from(n + 1)
}

/// `μ_θ(C(I) ∩ P) = ∫_I g(θ, t) ρ_P(t)^{n+1} / (n+1) dt`.
pub fn sector_measure(p: &Polygon, measure: &AnisotropicMeasure2, interval: &ConeInterval) -> f64 {
    let breaks = sector_breaks(p, measure, interval.start(), interval.end());
    breaks
        .windows(2)
        .map(|w| {
            let facet = active_facet(p, 0.5 * (w[0] + w[1]));
            integrate_smooth(w[0], w[1], |t| sector_integrand(measure, facet, t))
        })
        .sum()
}

/// Measure of the whole body: twice the measure of a half-turn sector.
pub fn full_measure(p: &Polygon, measure: &AnisotropicMeasure2) -> f64 {
    let half = ConeInterval::new(0.0, PI).expect("half turn is valid");
    2.0 * sector_measure(p, measure, &half)
}

/// Memoized cumulative sector integrals for one (body, measure) pair.
///
/// Pieces cover two full turns `[0, 4π]`, so any interval starting in
/// `[0, 2π)` with length at most `2π` is answered with one partial-piece
/// quadrature at each end plus a difference of stored cumulative sums.
/// Without a body the table integrates the bare angular weight.
#[derive(Debug, Clone)]
pub struct SectorTable {
    measure: AnisotropicMeasure2,
    breaks: Vec<f64>,
    facets: Vec<Option<Vec2<f64>>>,
    cumulative: Vec<f64>,
}

impl SectorTable {
    pub fn for_body(p: &Polygon, measure: &AnisotropicMeasure2) -> Self {
        let breaks = sector_breaks(p, measure, 0.0, 2.0 * TAU);
        let facets = breaks
            .windows(2)
            .map(|w| Some(active_facet(p, 0.5 * (w[0] + w[1]))))
            .collect();
        Self::assemble(*measure, breaks, facets)
    }

    pub fn for_weight(measure: &AnisotropicMeasure2) -> Self {
        let mut breaks = vec![0.0];
        breaks.extend(measure.zeros_in(0.0, 2.0 * TAU));
        breaks.push(2.0 * TAU);
        let facets = vec![None; breaks.len() - 1];
        Self::assemble(*measure, breaks, facets)
    }

    fn assemble(measure: AnisotropicMeasure2, breaks: Vec<f64>, facets: Vec<Option<Vec2<f64>>>) -> Self {
        let mut table = Self { measure, breaks, facets, cumulative: Vec::new() };
        let mut acc = 0.0;
        table.cumulative.push(0.0);
        for k in 0..table.facets.len() {
            acc += table.piece_integral(k, table.breaks[k], table.breaks[k + 1]);
            table.cumulative.push(acc);
        }
        table
    }

    #[inline]
    fn piece_integral(&self, k: usize, a: f64, b: f64) -> f64 {
        match self.facets[k] {
            Some(facet) => integrate_smooth(a, b, |t| sector_integrand(&self.measure, facet, t)),
            None => integrate_smooth(a, b, |t| self.measure.density(t)),
        }
    }

    #[inline]
    fn piece_of(&self, t: f64) -> usize {
        let idx = self.breaks.partition_point(|&b| b <= t);
        idx.clamp(1, self.facets.len()) - 1
    }

    /// Integral over `[0, t]` for `t` in `[0, 4π]`.
    pub fn cumulative(&self, t: f64) -> f64 {
        let k = self.piece_of(t);
        self.cumulative[k] + self.piece_integral(k, self.breaks[k], t)
    }

    /// Integral over `[start, start + length]`.
    pub fn integral(&self, start: f64, length: f64) -> f64 {
        debug_assert!((0.0..=TAU + 1e-12).contains(&length));
        let a = start.rem_euclid(TAU);
        let b = a + length;
        let (ka, kb) = (self.piece_of(a), self.piece_of(b));
        if ka == kb {
            return self.piece_integral(ka, a, b);
        }
        self.piece_integral(ka, a, self.breaks[ka + 1])
            + (self.cumulative[kb] - self.cumulative[ka + 1])
            + self.piece_integral(kb, self.breaks[kb], b)
    }

    pub fn interval(&self, interval: &ConeInterval) -> f64 {
        self.integral(interval.start(), interval.length())
    }
}

/// Probability density `C cos^k(t - t0)` on an arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeedleDensity {
    pub k: u32,
    pub t0: f64,
    pub interval: ConeInterval,
    pub norm_constant: f64,
}

impl NeedleDensity {
    /// Normalizes `cos^k(t - t0)` on `interval`. For `k > 0` the interval must
    /// stay inside the positivity window `[t0 - π/2, t0 + π/2]`.
    pub fn new(k: u32, t0: f64, interval: ConeInterval) -> Result<Self> {
        if k > 0 {
            let offset = (interval.start() - t0 + PI).rem_euclid(TAU) - PI;
            if offset < -FRAC_PI_2 - 1e-12 || offset + interval.length() > FRAC_PI_2 + 1e-12 {
                return Err(Error::InvalidNeedle(format!(
                    "interval [{}, {}] leaves the positivity window of cos(t - {t0})",
                    interval.start(),
                    interval.end()
                )));
            }
        }
        let mass = integrate_smooth(interval.start(), interval.end(), |t| (t - t0).cos().powi(k as i32));
        if !(mass > 0.0) {
            return Err(Error::InvalidNeedle("density has no mass".into()));
        }
        Ok(Self { k, t0, interval, norm_constant: 1.0 / mass })
    }

    #[inline]
    pub fn density(&self, t: f64) -> f64 {
        self.norm_constant * (t - self.t0).cos().max(0.0).powi(self.k as i32)
    }

    /// `∫ f dν`; `f` may have isolated kinks.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        integrate_adaptive(self.interval.start(), self.interval.end(), 1e-15, 1e-13, |t| {
            f(t) * self.density(t)
        })
    }
}

/// `∫ f(t) C cos^k(t - t0) dt` over the needle's arc.
pub fn needle_integral<F: FnMut(f64) -> f64>(f: F, needle: &NeedleDensity) -> f64 {
    needle.integrate(f)
}

/// Outcome of the sin^k-concavity chord test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityReport {
    pub pass: bool,
    /// Largest value of `rhs - lhs` over the tested triples (≤ 0 means slack).
    pub worst_violation: f64,
    /// `(x1, x2, α)` attaining the worst violation.
    pub worst_triple: (f64, f64, f64),
}

/// Slack allowed by [`sin_k_concave_check`].
pub const CONCAVITY_SLACK: f64 = 1e-9;

/// Tests `f^{1/k}(αx₁ + (1-α)x₂) ≥ [sin(αd) f(x₁)^{1/k} + sin((1-α)d) f(x₂)^{1/k}] / sin d`
/// with `d = |x₂ - x₁|`, for `α ∈ {1/4, 1/2, 3/4}` and every pair of grid
/// points whose index gap is a multiple of 4 (so every interior point of the
/// triple is itself a grid point; no interpolation enters the test).
///
/// `samples` are values of `f` on the uniform grid over `[a, b]`.
pub fn sin_k_concave_check(samples: &[f64], a: f64, b: f64, k: u32) -> Result<ConcavityReport> {
    if samples.len() < 64 {
        return Err(Error::InvalidParameter(format!("need >= 64 samples, got {}", samples.len())));
    }
    if !(b > a && b - a < PI) {
        return Err(Error::InvalidParameter("interval length must lie in (0, π)".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("exponent k must be >= 1".into()));
    }
    if samples.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidParameter("samples must be nonnegative".into()));
    }
    let h = (b - a) / (samples.len() - 1) as f64;
    let root: Vec<f64> = samples.iter().map(|v| v.powf(1.0 / f64::from(k))).collect();
    let mut worst = ConcavityReport {
        pass: true,
        worst_violation: f64::NEG_INFINITY,
        worst_triple: (a, a, 0.5),
    };
    let n = samples.len();
    for i in 0..n {
        for j in (i + 4..n).step_by(4) {
            let d = (j - i) as f64 * h;
            let sd = d.sin();
            for (q, alpha) in [(3usize, 0.25f64), (2, 0.5), (1, 0.75)] {
                // α x_i + (1 - α) x_j sits q quarters of the way from i to j.
                let m = i + q * (j - i) / 4;
                let rhs = ((alpha * d).sin() * root[i] + ((1.0 - alpha) * d).sin() * root[j]) / sd;
                let gap = rhs - root[m];
                if gap > worst.worst_violation {
                    worst.worst_violation = gap;
                    worst.worst_triple = (a + i as f64 * h, a + j as f64 * h, alpha);
                }
            }
        }
    }
    worst.pass = worst.worst_violation <= CONCAVITY_SLACK;
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::cos_power_half_period;
    use std::f64::consts::FRAC_PI_4;

    fn mu(n: u32, theta: f64) -> AnisotropicMeasure2 {
        AnisotropicMeasure2::new(n, theta).unwrap()
    }

    fn iv(a: f64, l: f64) -> ConeInterval {
        ConeInterval::new(a, l).unwrap()
    }

    #[test]
    fn density_values() {
        assert!((mu(3, 0.0).density(0.0) - 1.0).abs() < 1e-15);
        assert!(mu(3, 0.0).density(FRAC_PI_2).abs() < 1e-15);
        assert!(mu(4, FRAC_PI_4).density(FRAC_PI_4).abs() < 1e-15);
        // Maximum at t = -θ mod π.
        let m = mu(5, 1.1);
        assert!((m.density(-1.1 + PI) - 1.0).abs() < 1e-14);
        assert!((m.theta() - 1.1).abs() < 1e-15);
        assert!((mu(5, 1.1 + 3.0 * PI).theta() - 1.1).abs() < 1e-12);
    }

    #[test]
    fn weight_integrals() {
        assert!((g_integral(&mu(2, 0.0), &iv(-FRAC_PI_2, PI)) - 2.0).abs() < 1e-13);
        assert!((g_integral(&mu(3, 0.0), &iv(-FRAC_PI_2, PI)) - FRAC_PI_2).abs() < 1e-13);
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 2..8u32 {
            let exact = cos_power_half_period(f64::from(n - 1));
            for _ in 0..20 {
                let (a, th) = (next() * 10.0 - 5.0, next() * PI);
                let v = g_integral(&mu(n, th), &iv(a, PI));
                assert!((v - exact).abs() < 1e-10 * exact, "n={n} a={a} θ={th}");
            }
        }
    }

    #[test]
    fn interval_validation() {
        assert!(matches!(ConeInterval::new(0.0, 0.0), Err(Error::DegenerateInterval(_))));
        assert!(ConeInterval::new(0.0, 4.0).is_err());
        assert!(AnisotropicMeasure2::new(0, 0.0).is_err());
    }

    #[test]
    fn square_sector_closed_form() {
        // On [0, π/4] the square's radial function is 1/cos t, so the
        // integrand is cos²t / (4 cos⁴t) with antiderivative tan(t)/4.
        let sq = Polygon::square();
        let v = sector_measure(&sq, &mu(3, 0.0), &iv(0.0, FRAC_PI_4));
        assert!((v - 0.25).abs() < 1e-13);
        // On [π/4, π/2] the region is 0 ≤ x ≤ y ≤ 1 with weight x², giving
        // 1/12. The weight is invariant under the reflections x ↦ -x and
        // y ↦ -y only, so the square splits into four copies of each sector.
        let upper = sector_measure(&sq, &mu(3, 0.0), &iv(FRAC_PI_4, FRAC_PI_4));
        assert!((upper - 1.0 / 12.0).abs() < 1e-13);
        assert!((full_measure(&sq, &mu(3, 0.0)) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn disk_sector_is_weight_over_n_plus_one() {
        let disk = Polygon::regular_with_inradius(4096, 1.0).unwrap();
        let m = mu(3, 0.4);
        let i = iv(0.3, 1.7);
        let expected = g_integral(&m, &i) / 4.0;
        assert!((sector_measure(&disk, &m, &i) - expected).abs() < 1e-6);
        let full = full_measure(&disk, &mu(3, 0.0));
        assert!((full - PI / 4.0).abs() < 1e-6);
        let c = 1.7;
        let scaled = sector_measure(&disk.scaled(c), &m, &i);
        assert!((scaled - c.powi(4) * sector_measure(&disk, &m, &i)).abs() < 1e-12);
    }

    #[test]
    fn table_matches_direct_quadrature() {
        let shell = crate::geometry2d::ShellConstraint::for_exponent(4);
        let p = Polygon::random_in_shell(5, &shell, 17).unwrap();
        let m = mu(4, 0.77);
        let table = SectorTable::for_body(&p, &m);
        let weight = SectorTable::for_weight(&m);
        for (a, l) in [(0.0, 0.001), (0.3, 1.2), (5.9, PI), (6.2, 0.5), (-1.0, 2.0), (3.0, 1e-3)] {
            let i = iv(a, l);
            let direct = sector_measure(&p, &m, &i);
            assert!((table.interval(&i) - direct).abs() < 1e-12 * direct.max(1e-3), "{a} {l}");
            let g = g_integral(&m, &i);
            assert!((weight.interval(&i) - g).abs() < 1e-12 * g.max(1e-3));
        }
    }

    #[test]
    fn needle_normalization() {
        let n0 = NeedleDensity::new(0, 0.3, iv(1.0, 2.5)).unwrap();
        assert!((n0.norm_constant - 1.0 / 2.5).abs() < 1e-14);
        let n1 = NeedleDensity::new(1, 0.0, iv(-FRAC_PI_2, PI)).unwrap();
        assert!((n1.norm_constant - 0.5).abs() < 1e-14);
        let n2 = NeedleDensity::new(2, 0.0, iv(-FRAC_PI_2, PI)).unwrap();
        assert!((n2.norm_constant - 2.0 / PI).abs() < 1e-14);
        assert!((n2.integrate(|_| 1.0) - 1.0).abs() < 1e-12);
        assert!(matches!(
            NeedleDensity::new(1, 0.0, iv(0.0, 2.0)),
            Err(Error::InvalidNeedle(_))
        ));
    }

    #[test]
    fn needle_integrals() {
        let n1 = NeedleDensity::new(1, 0.0, iv(-FRAC_PI_2, PI)).unwrap();
        assert!((needle_integral(|_| 3.5, &n1) - 3.5).abs() < 1e-12);
        assert!((needle_integral(f64::cos, &n1) - PI / 4.0).abs() < 1e-12);
        let shifted = NeedleDensity::new(3, 1.0, iv(0.2, 1.6)).unwrap();
        assert!(needle_integral(|t| (t - 1.0).sin(), &shifted).abs() < 1e-10);
    }

    fn grid(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn sin_affine_functions_pass_with_equality() {
        for k in 1..5u32 {
            let (a, b) = (-1.2, 1.0);
            let s = grid(a, b, 129, |t| (t - 0.1).cos().powi(k as i32));
            let r = sin_k_concave_check(&s, a, b, k).unwrap();
            assert!(r.pass);
            assert!(r.worst_violation.abs() < 1e-9);
            let mut rev = s.clone();
            rev.reverse();
            let r = sin_k_concave_check(&rev, a, b, k).unwrap();
            assert!(r.pass && r.worst_violation.abs() < 1e-9);
        }
    }

    #[test]
    fn constants_are_not_sin_concave() {
        // sin(αd) + sin((1-α)d) > sin d for 0 < d < π, so the chord bound
        // strictly exceeds 1 for f ≡ 1.
        let s = vec![1.0; 65];
        let r = sin_k_concave_check(&s, -1.0, 1.0, 1).unwrap();
        assert!(!r.pass);
        let (x1, x2, alpha) = r.worst_triple;
        let d: f64 = x2 - x1;
        let expected = ((alpha * d).sin() + ((1.0 - alpha) * d).sin()) / d.sin() - 1.0;
        assert!((r.worst_violation - expected).abs() < 1e-14);
    }

    #[test]
    fn convex_kink_fails_at_the_kink() {
        let (a, b) = (-1.0, 1.0);
        let s = grid(a, b, 65, |t| 1.0 + if t > 0.0 { 3.0 * t } else { 0.0 });
        let r = sin_k_concave_check(&s, a, b, 1).unwrap();
        assert!(!r.pass);
        // Brute force over the same triples agrees.
        let h = 2.0 / 64.0;
        let mut best = f64::MIN;
        for i in 0..65 {
            for j in (i + 4..65).step_by(4) {
                for q in 1..4 {
                    let alpha = 1.0 - q as f64 / 4.0;
                    let d = (j - i) as f64 * h;
                    let m = i + q * (j - i) / 4;
                    let rhs = ((alpha * d).sin() * s[i] + ((1.0 - alpha) * d).sin() * s[j]) / d.sin();
                    best = best.max(rhs - s[m]);
                }
            }
        }
        assert!((best - r.worst_violation).abs() < 1e-14);
        assert!(sin_k_concave_check(&s[..10], a, b, 1).is_err());
    }
}
