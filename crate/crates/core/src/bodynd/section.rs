//! Two-dimensional planes on which the projection of `K°` coincides with
//! its section.
//!
//! For `w` in a plane `L`, the projection `P_L K°` has support value
//! `h_{K°}(w) = 1 / x_K(w)`, while the section `K° ∩ L` is traced by its
//! radial function inside `L`. Since the section is contained in the
//! projection, their Hausdorff distance is `max_w h_proj(w) - h_sec(w)`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{dot, norm, random_unit, unit, BodyND};
use crate::error::{Error, Result};
use crate::geometry2d::Vec2;
use crate::Polygon;

/// Orthonormal pair spanning a plane in `R^n`.
pub type Frame = [Vec<f64>; 2];

const ANGLES: usize = 360;
const TOLERANCE: f64 = 1e-3;

fn in_plane(frame: &Frame, t: f64) -> Vec<f64> {
    let (c, s) = (t.cos(), t.sin());
    frame[0].iter().zip(&frame[1]).map(|(a, b)| c * a + s * b).collect()
}

/// Hausdorff distance between `P_L K°` and `K° ∩ L`, both sampled on
/// `ANGLES` directions of `L`.
pub fn section_discrepancy(k: &BodyND, frame: &Frame) -> Result<f64> {
    let polar = k.polar();
    let mut pts = Vec::with_capacity(ANGLES);
    let mut proj = Vec::with_capacity(ANGLES);
    for j in 0..ANGLES {
        let t = 2.0 * PI * j as f64 / ANGLES as f64;
        let w = in_plane(frame, t);
        proj.push(1.0 / k.radial(&w)?);
        pts.push(Vec2::from_angle(t) * polar.radial(&w)?);
    }
    let mut worst: f64 = 0.0;
    for (j, h) in proj.iter().enumerate() {
        let w = Vec2::from_angle(2.0 * PI * j as f64 / ANGLES as f64);
        let sec = pts.iter().map(|p| p.dot(w)).fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(h - sec);
    }
    Ok(worst)
}

fn orthonormalize(a: &[f64], b: &[f64]) -> Option<Frame> {
    let na = norm(a);
    if na < 1e-12 {
        return None;
    }
    let e0: Vec<f64> = a.iter().map(|x| x / na).collect();
    let p = dot(b, &e0);
    let r: Vec<f64> = b.iter().zip(&e0).map(|(x, y)| x - p * y).collect();
    let nr = norm(&r);
    if nr < 1e-12 {
        return None;
    }
    Some([e0, r.iter().map(|x| x / nr).collect()])
}

/// Searches for a plane whose projection and section of `K°` agree within
/// `10⁻³`: all coordinate planes, then 64 random frames, then descent by
/// small rotations of the best frame toward coordinate directions.
pub fn section_plane(k: &BodyND) -> Result<Frame> {
    let n = k.dim();
    if n < 3 {
        return Err(Error::InvalidParameter("section planes need dimension >= 3".into()));
    }
    let mut best: Option<(f64, Frame)> = None;
    let consider = |frame: Frame, best: &mut Option<(f64, Frame)>| -> Result<bool> {
        let d = section_discrepancy(k, &frame)?;
        if best.as_ref().map_or(true, |(b, _)| d < *b) {
            *best = Some((d, frame));
        }
        Ok(d <= TOLERANCE)
    };
    for i in 0..n {
        for j in i + 1..n {
            if consider([unit(n, i), unit(n, j)], &mut best)? {
                return Ok(best.expect("just set").1);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec7);
    for _ in 0..64 {
        let Some(frame) = orthonormalize(&random_unit(n, &mut rng), &random_unit(n, &mut rng)) else { continue };
        if consider(frame, &mut best)? {
            return Ok(best.expect("just set").1);
        }
    }
    let (mut score, mut frame) = best.expect("coordinate planes were scored");
    let mut step = 0.2;
    while step > 1e-4 {
        let mut moved = false;
        for which in 0..2 {
            for axis in 0..n {
                for sign in [1.0, -1.0] {
                    let mut a = frame[0].clone();
                    let mut b = frame[1].clone();
                    let target = if which == 0 { &mut a } else { &mut b };
                    target[axis] += sign * step;
                    let Some(cand) = orthonormalize(&a, &b) else { continue };
                    let d = section_discrepancy(k, &cand)?;
                    if d < score {
                        score = d;
                        frame = cand;
                        moved = true;
                        if score <= TOLERANCE {
                            return Ok(frame);
                        }
                    }
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Err(Error::PlaneSearchFailed { best: score, frame })
}

/// Polygon `K ∩ L` in frame coordinates, from `count` radial samples.
pub fn section_polygon(k: &BodyND, frame: &Frame, count: usize) -> Result<Polygon> {
    let half = (count / 2).max(2);
    let pts = (0..half)
        .map(|j| {
            let t = PI * j as f64 / half as f64;
            Ok(Vec2::from_angle(t) * k.radial(&in_plane(frame, t))?)
        })
        .collect::<Result<Vec<_>>>()?;
    Polygon::from_points(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::{alpha_tower, TowerConfig};
    use crate::bodynd::john_normalize;

    #[test]
    fn ball_frames_have_no_discrepancy() {
        let ball = BodyND::ball(5, 1.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let frame = orthonormalize(&random_unit(5, &mut rng), &random_unit(5, &mut rng)).unwrap();
        assert!(section_discrepancy(&ball, &frame).unwrap() < 1e-6);
    }

    #[test]
    fn cube_coordinate_plane() {
        let cube = BodyND::cube(4).unwrap();
        let frame = [unit(4, 0), unit(4, 1)];
        assert!(section_discrepancy(&cube, &frame).unwrap() < 1e-12);
        let found = section_plane(&cube).unwrap();
        assert_eq!(found, frame);
        // A generic plane through the cube does not qualify.
        let tilted = orthonormalize(&[1.0, 0.3, 0.2, 0.0], &[0.0, 1.0, 0.5, 0.4]).unwrap();
        assert!(section_discrepancy(&cube, &tilted).unwrap() > 1e-3);
    }

    #[test]
    fn section_feeds_the_planar_tower() {
        let k = john_normalize(&BodyND::cube(4).unwrap()).unwrap();
        let frame = section_plane(&k).unwrap();
        let s = section_polygon(&k, &frame, 720).unwrap();
        let s = s.scaled(1.0 / s.inradius());
        let cfg = TowerConfig { theta_grid: 6, interval_grid: 8, refine_starts: 1, ..TowerConfig::default() };
        let r = alpha_tower(3, &s, &cfg).unwrap();
        assert!(r.alpha.value > 0.0);
    }
}
