//! Linear normalization placing a body between `B(0, 1)` and `B(0, √n)`.
//!
//! Facet data: the John ellipsoid of `K` is the polar of the minimum-volume
//! ellipsoid enclosing the facet vectors `±a_i`. Vertex data only: the
//! minimum-volume enclosing ellipsoid of `±v_i` is mapped to `√n B`, which
//! places `K` in the same shell. Both ellipsoids come from coordinate
//! ascent on the weights of the D-optimal design problem.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{BodyND, PointSet, SphereSample};
use crate::error::{Error, Result};

/// Relative slack of the enclosing ellipsoid at termination.
const DESIGN_TOL: f64 = 1e-7;

/// Weighted second moment `Q = Σ u_i p_i p_iᵀ` of the D-optimal design on
/// `points`, with `max_i p_iᵀ Q⁻¹ p_i <= d (1 + DESIGN_TOL)`.
fn optimal_design(points: &PointSet) -> Result<(DMatrix<f64>, f64)> {
    let d = points.dim;
    let m = points.len();
    let p: Vec<DVector<f64>> = points.rows().map(DVector::from_column_slice).collect();
    let mut u = vec![1.0 / m as f64; m];
    let moment = |u: &[f64]| {
        let mut q = DMatrix::zeros(d, d);
        for (w, x) in u.iter().zip(&p) {
            q += *w * x * x.transpose();
        }
        q
    };
    let fail = || Error::NormalizationFailed("design moment matrix is singular".into());
    let mut q = moment(&u);
    let mut qinv = q.clone().try_inverse().ok_or_else(fail)?;
    let df = d as f64;
    for iter in 0..200_000 {
        if iter % 256 == 255 {
            q = moment(&u);
            qinv = q.clone().try_inverse().ok_or_else(fail)?;
        }
        let kappa: Vec<f64> = p.iter().map(|x| x.dot(&(&qinv * x))).collect();
        let (jp, kp) = kappa
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        let (jm, km) = kappa
            .iter()
            .copied()
            .enumerate()
            .filter(|&(i, _)| u[i] > 0.0)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty support");
        let up = kp / df - 1.0;
        if up <= DESIGN_TOL {
            return Ok((q, kp / df));
        }
        let (j, k) = if up >= 1.0 - km / df { (jp, kp) } else { (jm, km) };
        let mut beta = (k - df) / (df * (k - 1.0));
        if j == jm && j != jp {
            beta = beta.max(-u[j] / (1.0 - u[j]));
        }
        if beta == 0.0 || !beta.is_finite() {
            return Ok((q, kp / df));
        }
        for w in u.iter_mut() {
            *w *= 1.0 - beta;
        }
        u[j] += beta;
        u[j] = u[j].max(0.0);
        // Sherman-Morrison for ((1-β)Q + β x xᵀ)⁻¹.
        let x = &p[j];
        let r = beta / (1.0 - beta);
        let qx = &qinv * x;
        qinv = (&qinv - (r / (1.0 + r * k)) * &qx * qx.transpose()) / (1.0 - beta);
        q = (1.0 - beta) * q + beta * x * x.transpose();
    }
    Err(Error::NormalizationFailed("design iteration did not converge".into()))
}

fn sym_power(q: &DMatrix<f64>, power: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(q.clone());
    let vals = eig.eigenvalues.map(|l| l.powf(power));
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

/// Maps `K` linearly so that `B(0, 1) ⊆ K' ⊆ B(0, √n (1 + 10⁻³))`.
///
/// The inner inclusion is exact when facets are known (inradius is then
/// computed from the facets) and the outer one is exact when vertices are
/// known; a missing side is checked on 20 000 sampled directions.
pub fn john_normalize(k: &BodyND) -> Result<BodyND> {
    let n = k.dim();
    if k.is_ball().is_some() {
        return BodyND::ball(n, 1.0);
    }
    let nf = n as f64;
    let body = if let Some(f) = k.facets() {
        let (q, slack) = optimal_design(f)?;
        let t = sym_power(&(nf * q), 0.5) * slack.sqrt();
        k.transformed(&t)?
    } else {
        let v = k.vertices().expect("polytope has a representation");
        let (q, slack) = optimal_design(v)?;
        let t = sym_power(&q, -0.5) / slack.sqrt();
        let moved = k.transformed(&t)?;
        let sample = SphereSample::quasi_random(n, 20_000, 0x5eed)?;
        let inner = (0..sample.pairs())
            .map(|i| moved.support(sample.representative(i)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if inner < 1.0 {
            moved.scaled(1.0 / inner)
        } else {
            moved
        }
    };

    let outer_limit = nf.sqrt() * (1.0 + 1e-3);
    let outer = match body.circumradius() {
        Some(r) => r,
        None => {
            let sample = SphereSample::quasi_random(n, 20_000, 0x5eed)?;
            (0..sample.pairs())
                .map(|i| body.radial(sample.representative(i)))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max)
        }
    };
    if let Some(r) = body.inradius() {
        if r < 1.0 - 1e-12 {
            return Err(Error::NormalizationFailed(format!("inradius {r} below 1")));
        }
    }
    if outer > outer_limit {
        return Err(Error::NormalizationFailed(format!("outer radius {outer} exceeds {outer_limit}")));
    }
    Ok(body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodynd::{mahler_product, random_rotation};

    #[test]
    fn cube_is_fixed() {
        let cube = BodyND::cube(4).unwrap();
        let j = john_normalize(&cube).unwrap();
        for (a, b) in j.facets().unwrap().rows().zip(cube.facets().unwrap().rows()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn stretched_cube_returns_to_the_shell() {
        let stretch = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 0.5, 2.0]));
        let t = random_rotation(4, 3) * stretch;
        let k = BodyND::cube(4).unwrap().transformed(&t).unwrap();
        let j = john_normalize(&k).unwrap();
        assert!(j.inradius().unwrap() >= 1.0 - 1e-12);
        assert!(j.circumradius().unwrap() <= 2.0 * (1.0 + 1e-3));
        let s = SphereSample::quasi_random(4, 40_000, 1).unwrap();
        let a = mahler_product(&k, &s).unwrap().product;
        let b = mahler_product(&j, &s).unwrap().product;
        assert!((a.value - b.value).abs() <= 3.0 * (a.std_error.powi(2) + b.std_error.powi(2)).sqrt());
    }

    #[test]
    fn vertex_only_bodies_land_in_the_shell() {
        let k = BodyND::random_polytope(4, 10, 8).unwrap();
        let j = john_normalize(&k).unwrap();
        assert!(j.circumradius().unwrap() <= 2.0 * (1.0 + 1e-3));
        let facet_only = BodyND::from_facets(3, &k_facets()).unwrap();
        let jf = john_normalize(&facet_only).unwrap();
        assert!(jf.inradius().unwrap() >= 1.0 - 1e-12);
    }

    fn k_facets() -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.2, 0.0], vec![0.0, 3.0, 0.1], vec![0.3, 0.0, 0.5], vec![1.0, 1.0, 1.0]]
    }
}
