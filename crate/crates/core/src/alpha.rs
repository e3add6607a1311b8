//! The max-min ratio of sector measures of a body and its polar.
//!
//! For a shell body `S` the ratio
//! `α(n, θ, I, S) = μ_θ(C(I) ∩ S) μ_θ(C(I) ∩ S°) / (∫_I g)²`
//! is minimized over intervals, maximized over the weight rotation `θ`, and
//! finally minimized over bodies. The same tower restricted to intervals
//! `[0, φ]` gives `α₁`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry2d::{ShellConstraint, Vec2};
use crate::measure2d::{g_integral, sector_measure, AnisotropicMeasure2, ConeInterval, SectorTable};
use crate::tol::{ANGULAR_RESOLUTION, ELL_MIN};
use crate::Polygon;

/// One value of the ratio with its three ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaEvaluation {
    pub n: u32,
    pub theta: f64,
    pub interval: ConeInterval,
    pub value: f64,
    pub numerator_left: f64,
    pub numerator_right: f64,
    pub denominator: f64,
}

/// Resolution of the interval and rotation searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TowerConfig {
    /// Number of θ grid points on `[0, π)` before golden-section refinement.
    pub theta_grid: usize,
    /// Interval grid size: starts `iπ/G` and lengths `jπ/G` plus `ell_min`.
    pub interval_grid: usize,
    /// Grid minima refined by coordinate descent.
    pub refine_starts: usize,
    pub angular_resolution: f64,
    pub ell_min: f64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        Self {
            theta_grid: 128,
            interval_grid: 64,
            refine_starts: 3,
            angular_resolution: ANGULAR_RESOLUTION,
            ell_min: ELL_MIN,
        }
    }
}

impl TowerConfig {
    fn validate(&self) -> Result<()> {
        if self.theta_grid < 3 || self.interval_grid < 4 || self.refine_starts == 0 {
            return Err(Error::InvalidParameter("tower grids too small".into()));
        }
        if !(self.ell_min > 0.0 && self.ell_min < PI) {
            return Err(Error::InvalidParameter(format!("ell_min {} outside (0, π)", self.ell_min)));
        }
        if !(self.angular_resolution > 0.0) {
            return Err(Error::InvalidParameter("angular resolution must be positive".into()));
        }
        Ok(())
    }
}

fn check_exponent(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("exponent n must be >= 2, got {n}")));
    }
    Ok(())
}

fn check_shell(n: u32, s: &Polygon) -> Result<()> {
    check_exponent(n)?;
    let shell = ShellConstraint::for_exponent(n);
    if !s.contains_shell(&shell) {
        return Err(Error::OutOfClass(format!(
            "inradius {} / circumradius {} outside shell (1, {})",
            s.inradius(),
            s.circumradius(),
            shell.r_outer
        )));
    }
    Ok(())
}

/// Evaluates the ratio by direct quadrature.
pub fn alpha_term(n: u32, theta: f64, interval: &ConeInterval, s: &Polygon) -> Result<AlphaEvaluation> {
    check_shell(n, s)?;
    let measure = AnisotropicMeasure2::new(n, theta)?;
    let numerator_left = sector_measure(s, &measure, interval);
    let numerator_right = sector_measure(&s.polar(), &measure, interval);
    let denominator = g_integral(&measure, interval);
    Ok(AlphaEvaluation {
        n,
        theta: measure.theta(),
        interval: *interval,
        value: numerator_left * numerator_right / (denominator * denominator),
        numerator_left,
        numerator_right,
        denominator,
    })
}

/// Limit of the ratio as the interval shrinks to the direction `t`:
/// `ρ_S(t)^{n+1} ρ_{S°}(t)^{n+1} / (n+1)²`, independent of `θ`.
pub fn limit_point_value(n: u32, _theta: f64, t: f64, s: &Polygon) -> Result<f64> {
    check_shell(n, s)?;
    let e = n as i32 + 1;
    let prod = (s.radial(t) * s.polar().radial(t)).powi(e);
    Ok(prod / f64::from(e * e))
}

/// `1 / ((n+1)² (n+1)^{(n+1)/2})`, a lower bound for the ratio on shell bodies.
pub fn lemma_floor(n: u32) -> f64 {
    let m = f64::from(n + 1);
    1.0 / (m * m * m.powf(0.5 * m))
}

/// Memoized sector tables for one rotation `θ`.
struct Slice {
    theta: f64,
    body: SectorTable,
    polar: SectorTable,
    weight: SectorTable,
}

impl Slice {
    fn new(n: u32, theta: f64, s: &Polygon, polar: &Polygon) -> Self {
        let measure = AnisotropicMeasure2::new(n, theta).expect("validated exponent");
        Self {
            theta: measure.theta(),
            body: SectorTable::for_body(s, &measure),
            polar: SectorTable::for_body(polar, &measure),
            weight: SectorTable::for_weight(&measure),
        }
    }

    fn eval(&self, a: f64, l: f64) -> f64 {
        let d = self.weight.integral(a, l);
        self.body.integral(a, l) * self.polar.integral(a, l) / (d * d)
    }
}

/// Inner minima at one rotation.
#[derive(Debug, Clone, Copy)]
struct Inner {
    theta: f64,
    start: f64,
    length: f64,
    value: f64,
    phi: f64,
    value1: f64,
}

fn ratio(x: [f64; 3], y: [f64; 3]) -> f64 {
    let d = y[2] - x[2];
    let v = (y[0] - x[0]) * (y[1] - x[1]) / (d * d);
    if v.is_finite() && d > 0.0 {
        v
    } else {
        f64::INFINITY
    }
}

/// Compass search on `(a, ℓ)` with halving steps and greedy expansion along
/// successful directions; `a` is taken mod π.
fn descend(slice: &Slice, cfg: &TowerConfig, a: f64, l: f64, v: f64, step: f64, fix_start: bool) -> (f64, f64, f64) {
    const FREE: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (-1.0, -1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
    ];
    const ANCHORED: [(f64, f64); 2] = [(0.0, 1.0), (0.0, -1.0)];
    let moves: &[(f64, f64)] = if fix_start { &ANCHORED } else { &FREE };
    let mut x = (a, l, v);
    let try_move = |x: (f64, f64, f64), d: (f64, f64), h: f64| {
        let na = (x.0 + d.0 * h).rem_euclid(PI);
        let nl = (x.1 + d.1 * h).clamp(cfg.ell_min, PI);
        if nl == x.1 && d.0 == 0.0 {
            return None;
        }
        let nv = slice.eval(na, nl);
        (nv < x.2).then_some((na, nl, nv))
    };
    let mut h = step;
    while h > cfg.angular_resolution {
        let mut moved = false;
        for &d in moves {
            let mut s = h;
            while let Some(next) = try_move(x, d, s) {
                x = next;
                moved = true;
                s *= 2.0;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    x
}

fn inner(slice: &Slice, cfg: &TowerConfig) -> Inner {
    let g = cfg.interval_grid;
    let h = PI / g as f64;
    let cum: Vec<[f64; 3]> = (0..=2 * g)
        .map(|k| {
            let t = k as f64 * h;
            [slice.body.cumulative(t), slice.polar.cumulative(t), slice.weight.cumulative(t)]
        })
        .collect();

    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(g * (g + 1));
    let mut line: Vec<(f64, f64)> = Vec::with_capacity(g + 1);
    for i in 0..g {
        let a = i as f64 * h;
        let v = slice.eval(a, cfg.ell_min);
        grid.push((v, a, cfg.ell_min));
        if i == 0 {
            line.push((v, cfg.ell_min));
        }
        for j in 1..=g {
            let l = j as f64 * h;
            if l < cfg.ell_min {
                continue;
            }
            let v = ratio(cum[i], cum[i + j]);
            grid.push((v, a, l));
            if i == 0 {
                line.push((v, l));
            }
        }
    }

    // Intervals anchored at 0.
    let &(_, phi0) = line.iter().min_by(|x, y| x.0.total_cmp(&y.0)).expect("nonempty line");
    let (_, phi, value1) = descend(slice, cfg, 0.0, phi0, slice.eval(0.0, phi0), h, true);

    // Free intervals: distinct grid minima plus the best anchored interval.
    grid.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut starts: Vec<(f64, f64)> = Vec::new();
    for &(_, a, l) in &grid {
        if starts.len() == cfg.refine_starts {
            break;
        }
        let near = starts.iter().any(|&(sa, sl)| {
            let da = (a - sa).rem_euclid(PI);
            da.min(PI - da) <= 2.0 * h && (l - sl).abs() <= 2.0 * h
        });
        if !near {
            starts.push((a, l));
        }
    }
    let mut best = (0.0, phi, value1);
    for (a, l) in starts {
        let cand = descend(slice, cfg, a, l, slice.eval(a, l), h, false);
        if cand.2 < best.2 {
            best = cand;
        }
    }
    let anchored = descend(slice, cfg, 0.0, phi, value1, h, false);
    if anchored.2 < best.2 {
        best = anchored;
    }
    Inner { theta: slice.theta, start: best.0, length: best.1, value: best.2, phi, value1 }
}

/// Golden-section maximization of `f` on `[lo, hi]`; every probe is passed to `record`.
fn golden_max<F: FnMut(f64) -> f64>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
}

/// Both towers evaluated on a shared rotation grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TowerResult {
    /// Witness for `max_θ min_I`.
    pub alpha: AlphaEvaluation,
    /// Witness for `max_θ min_φ` over intervals `[0, φ]`.
    pub alpha1: AlphaEvaluation,
    /// Number of rotations at which the inner problems were solved.
    pub rotations: usize,
}

/// Computes `α(n, S)` and `α₁(n, S)` together.
///
/// At each rotation the free-interval search is seeded with the best
/// anchored interval, so the inner minima satisfy `α ≤ α₁` pointwise, and
/// `α₁` is maximized over a superset of the rotations used for `α`.
pub fn alpha_tower(n: u32, s: &Polygon, cfg: &TowerConfig) -> Result<TowerResult> {
    check_shell(n, s)?;
    cfg.validate()?;
    let polar = s.polar();
    let solve = |theta: f64| inner(&Slice::new(n, theta, s, &polar), cfg);

    let step = PI / cfg.theta_grid as f64;
    let mut probes: Vec<Inner> = (0..cfg.theta_grid)
        .into_par_iter()
        .map(|k| solve(k as f64 * step))
        .collect();

    let argmax = |probes: &[Inner], key: fn(&Inner) -> f64| {
        probes.iter().copied().max_by(|x, y| key(x).total_cmp(&key(y))).expect("nonempty")
    };
    for key in [(|p: &Inner| p.value) as fn(&Inner) -> f64, |p: &Inner| p.value1] {
        let centre = argmax(&probes, key).theta;
        let mut refined = Vec::new();
        golden_max(centre - step, centre + step, cfg.angular_resolution, |t| {
            let r = solve(t);
            refined.push(r);
            key(&r)
        });
        probes.extend(refined);
    }

    let a = argmax(&probes, |p| p.value);
    let a1 = argmax(&probes, |p| p.value1);
    let alpha = alpha_term(n, a.theta, &ConeInterval::new(a.start, a.length)?, s)?;
    let alpha1 = alpha_term(n, a1.theta, &ConeInterval::new(0.0, a1.phi)?, s)?;
    Ok(TowerResult { alpha, alpha1, rotations: probes.len() })
}

/// `min_I α(n, θ, I, S)` with its witness interval.
pub fn min_over_intervals(n: u32, theta: f64, s: &Polygon, cfg: &TowerConfig) -> Result<(ConeInterval, f64)> {
    check_shell(n, s)?;
    cfg.validate()?;
    let r = inner(&Slice::new(n, theta, s, &s.polar()), cfg);
    let interval = ConeInterval::new(r.start, r.length)?;
    Ok((interval, alpha_term(n, theta, &interval, s)?.value))
}

/// `α(n, S) = max_θ min_I α(n, θ, I, S)`, returned as `(θ, I, value)`.
pub fn alpha_n_s(n: u32, s: &Polygon, cfg: &TowerConfig) -> Result<(f64, ConeInterval, f64)> {
    let r = alpha_tower(n, s, cfg)?;
    Ok((r.alpha.theta, r.alpha.interval, r.alpha.value))
}

/// `α₁(n, S) = max_θ min_φ α(n, θ, [0, φ], S)`.
pub fn alpha1_n_s(n: u32, s: &Polygon, cfg: &TowerConfig) -> Result<f64> {
    Ok(alpha_tower(n, s, cfg)?.alpha1.value)
}

/// Body-search configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: u32,
    pub vertex_pairs: Vec<usize>,
    pub restarts: usize,
    /// Maximum number of tower evaluations.
    pub budget: usize,
    pub seed: u64,
    #[serde(default = "default_ell_min")]
    pub ell_min: f64,
    /// Tower resolution used for every body; defaults to a coarse grid.
    #[serde(default = "SearchConfig::default_tower")]
    pub tower: TowerConfig,
}

fn default_ell_min() -> f64 {
    ELL_MIN
}

impl SearchConfig {
    pub fn default_tower() -> TowerConfig {
        TowerConfig { theta_grid: 24, interval_grid: 24, refine_starts: 2, angular_resolution: 1e-5, ell_min: ELL_MIN }
    }
}

/// Best body found by the search. `alpha_hat` estimates `α(n)` from above:
/// it is the tower value of one admissible body.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSearchResult {
    pub n: u32,
    pub alpha_hat: f64,
    pub argmin_body: Polygon,
    pub argmax_theta: f64,
    pub argmin_interval: ConeInterval,
    /// `(evaluation index, best value so far)` at every improvement.
    pub search_trace: Vec<(usize, f64)>,
}

/// Returns the polygon spanned by `points` moved into the shell, if possible.
fn project_to_shell(points: &[Vec2<f64>], shell: &ShellConstraint<f64>) -> Option<Polygon> {
    let mut p = Polygon::from_points(points).ok()?;
    for _ in 0..20 {
        p = p.scaled(shell.r_inner / p.inradius());
        if p.contains_shell(shell) {
            return Some(p);
        }
        let clipped: Vec<Vec2<f64>> = p
            .half_vertices()
            .iter()
            .map(|&v| v * (shell.r_outer / v.norm()).min(1.0))
            .collect();
        p = Polygon::from_points(&clipped).ok()?;
    }
    None
}

/// Circle stand-in: regular 256-gon with inradius 1.
pub fn circle_body() -> Polygon {
    Polygon::regular_with_inradius(256, 1.0).expect("regular polygon")
}

/// Minimizes the tower value over shell bodies by random restarts and
/// vertex-coordinate descent. The circle is always included as a candidate.
pub fn alpha_search(cfg: &SearchConfig) -> Result<AlphaSearchResult> {
    check_exponent(cfg.n)?;
    if cfg.vertex_pairs.is_empty() || cfg.vertex_pairs.iter().any(|&m| m < 2) {
        return Err(Error::InvalidParameter("vertex_pairs must be nonempty with entries >= 2".into()));
    }
    let tower = TowerConfig { ell_min: cfg.ell_min, ..cfg.tower };
    tower.validate()?;
    if cfg.budget == 0 {
        return Err(Error::SearchFailed("zero evaluation budget".into()));
    }
    let n = cfg.n;
    let shell = ShellConstraint::for_exponent(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut evals = 0usize;
    let evaluate = |p: &Polygon, evals: &mut usize| {
        *evals += 1;
        alpha_tower(n, p, &tower).ok()
    };

    let circle = circle_body();
    let mut best_body = circle.clone();
    let mut best = evaluate(&circle, &mut evals)
        .ok_or_else(|| Error::SearchFailed("circle evaluation failed".into()))?;
    let mut trace = vec![(evals, best.alpha.value)];

    for r in 0..cfg.restarts {
        if evals >= cfg.budget {
            break;
        }
        let m = cfg.vertex_pairs[r % cfg.vertex_pairs.len()];
        let Ok(mut body) = Polygon::random_in_shell(m, &shell, rng.gen()) else { continue };
        let Some(mut current) = evaluate(&body, &mut evals) else { continue };
        let mut step = 0.1;
        while step >= 1e-3 && evals < cfg.budget {
            let mut moved = false;
            let half = body.half_vertices().to_vec();
            'sweep: for i in 0..half.len() {
                for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
                    if evals >= cfg.budget {
                        break 'sweep;
                    }
                    let mut pts = body.half_vertices().to_vec();
                    if i >= pts.len() {
                        break 'sweep;
                    }
                    pts[i] = pts[i] + Vec2::new(dx * step, dy * step);
                    let Some(cand) = project_to_shell(&pts, &shell) else { continue };
                    let Some(eval) = evaluate(&cand, &mut evals) else { continue };
                    if eval.alpha.value < current.alpha.value - 1e-12 {
                        body = cand;
                        current = eval;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if current.alpha.value < best.alpha.value {
            best = current;
            best_body = body;
            trace.push((evals, best.alpha.value));
        }
    }

    Ok(AlphaSearchResult {
        n,
        alpha_hat: best.alpha.value,
        argmin_body: best_body,
        argmax_theta: best.alpha.theta,
        argmin_interval: best.alpha.interval,
        search_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn small() -> TowerConfig {
        TowerConfig { theta_grid: 12, interval_grid: 16, refine_starts: 2, angular_resolution: 1e-6, ell_min: ELL_MIN }
    }

    #[test]
    fn floor_values() {
        assert_eq!(lemma_floor(3), 1.0 / 256.0);
        assert!((lemma_floor(4) - 1.0 / (25.0 * 5f64.powf(2.5))).abs() < 1e-18);
        assert!((lemma_floor(4) - 7.1554e-4).abs() < 1e-7);
        for n in 2..30 {
            assert!(lemma_floor(n + 1) < lemma_floor(n));
        }
    }

    #[test]
    fn circle_ratio_is_flat() {
        let c = circle_body();
        for n in 4..7u32 {
            let target = 1.0 / f64::from((n + 1) * (n + 1));
            for (th, a, l) in [(0.0, 0.0, 1.0), (0.7, 2.0, 0.01), (2.9, -1.0, PI)] {
                let e = alpha_term(n, th, &ConeInterval::new(a, l).unwrap(), &c).unwrap();
                assert!((e.value - target).abs() < 1e-5, "n={n}: {}", e.value);
                assert!((e.value - e.numerator_left * e.numerator_right / e.denominator.powi(2)).abs() < 1e-15);
            }
            assert!((limit_point_value(n, 0.0, 0.4, &c).unwrap() - target).abs() < 1e-5);
        }
    }

    #[test]
    fn square_limit_point() {
        let sq = Polygon::square();
        assert!((limit_point_value(4, 0.0, 0.0, &sq).unwrap() - 0.04).abs() < 1e-15);
        let near = alpha_term(4, 0.3, &ConeInterval::new(0.2 - 5e-4, 1e-3).unwrap(), &sq).unwrap();
        let lim = limit_point_value(4, 0.3, 0.2, &sq).unwrap();
        assert!((near.value - lim).abs() < 1e-4 * lim);
    }

    #[test]
    fn shell_violations_are_rejected() {
        let big = Polygon::square().scaled(2.0);
        let i = ConeInterval::new(0.0, 1.0).unwrap();
        assert!(matches!(alpha_term(4, 0.0, &i, &big), Err(Error::OutOfClass(_))));
        assert!(matches!(alpha_term(4, 0.0, &i, &Polygon::diamond()), Err(Error::OutOfClass(_))));
    }

    #[test]
    fn pi_shift_invariance() {
        let shell = ShellConstraint::for_exponent(5);
        let p = Polygon::random_in_shell(4, &shell, 3).unwrap();
        let i = ConeInterval::new(0.4, 1.3).unwrap();
        let a = alpha_term(5, 0.9, &i, &p).unwrap().value;
        let b = alpha_term(5, 0.9, &i.shifted(PI), &p).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn inner_min_beats_random_probes() {
        let shell = ShellConstraint::for_exponent(4);
        let p = Polygon::random_in_shell(3, &shell, 11).unwrap();
        let cfg = TowerConfig { interval_grid: 32, ..small() };
        let (iv, v) = min_over_intervals(4, 0.6, &p, &cfg).unwrap();
        assert!((alpha_term(4, 0.6, &iv, &p).unwrap().value - v).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let i = ConeInterval::new(rng.gen_range(0.0..PI), rng.gen_range(ELL_MIN..PI)).unwrap();
            assert!(v <= alpha_term(4, 0.6, &i, &p).unwrap().value + 1e-12);
        }
    }

    #[test]
    fn tower_ordering_and_floor() {
        let shell = ShellConstraint::for_exponent(4);
        let p = Polygon::random_in_shell(3, &shell, 2).unwrap();
        let r = alpha_tower(4, &p, &small()).unwrap();
        assert!(r.alpha1.value >= r.alpha.value - 1e-9);
        assert!(r.alpha.value >= lemma_floor(4));
        assert_eq!(r.alpha1.interval.start(), 0.0);
        let again = alpha_tower(4, &p, &small()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn square_tower_is_within_bracket() {
        let r = alpha_tower(4, &Polygon::square(), &small()).unwrap();
        assert!(r.alpha.value >= lemma_floor(4) && r.alpha.value <= 0.04 + 1e-12);
        // The limit at t = 0 caps the free minimum at every θ.
        let (_, v) = min_over_intervals(4, FRAC_PI_4, &Polygon::square(), &small()).unwrap();
        assert!(v <= 0.04 + 1e-6);
    }

    #[test]
    fn search_is_deterministic_and_bracketed() {
        let cfg = SearchConfig {
            n: 4,
            vertex_pairs: vec![2, 3],
            restarts: 2,
            budget: 12,
            seed: 9,
            ell_min: ELL_MIN,
            tower: TowerConfig { theta_grid: 6, interval_grid: 8, refine_starts: 1, angular_resolution: 1e-4, ell_min: ELL_MIN },
        };
        let a = alpha_search(&cfg).unwrap();
        let b = alpha_search(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.alpha_hat >= lemma_floor(4));
        assert!(a.alpha_hat <= 1.0 / 25.0 + 1e-5);
        let re = alpha_term(4, a.argmax_theta, &a.argmin_interval, &a.argmin_body).unwrap();
        assert!((re.value - a.alpha_hat).abs() < 1e-8);
        assert!(a.search_trace.windows(2).all(|w| w[1].1 <= w[0].1));
        let zero = SearchConfig { budget: 0, ..cfg };
        assert!(matches!(alpha_search(&zero), Err(Error::SearchFailed(_))));
    }
}
