//! Reference Mahler volumes and the lower/upper bound checks.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;

use super::{mahler_product, BodyND, SphereSample};
use crate::error::{Error, Result};
use crate::special::{ball_volume, factorial, gamma, sphere_area};
use crate::tol::MC_SIGMAS;

/// Bodies with a closed-form Mahler volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceBody {
    Cube,
    CrossPolytope,
    Ball,
}

impl FromStr for ReferenceBody {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube" => Ok(Self::Cube),
            "cross_polytope" | "cross-polytope" | "cross" => Ok(Self::CrossPolytope),
            "ball" => Ok(Self::Ball),
            other => Err(Error::UnknownReference(other.to_string())),
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension {n} < 2")));
    }
    Ok(())
}

/// `4^n / n!` for the cube and cross-polytope, `vol(B_n)²` for the ball.
pub fn exact_reference(body: ReferenceBody, n: usize) -> Result<f64> {
    check_dim(n)?;
    Ok(match body {
        ReferenceBody::Cube | ReferenceBody::CrossPolytope => 4f64.powi(n as i32) / factorial(n),
        ReferenceBody::Ball => ball_volume(n).powi(2),
    })
}

/// `α · |S^{n-1}|² = α (2π^{n/2} / Γ(n/2))²`.
pub fn beta_bound(n: usize, alpha_value: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha_value > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha value {alpha_value} must be positive")));
    }
    Ok(alpha_value * sphere_area(n).powi(2))
}

/// Closed form `4π^n / (n^{(n+4)/2} Γ(n/2)²)`.
pub fn remark_bound(n: usize) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    Ok(4.0 * PI.powi(n as i32) / (nf.powf((nf + 4.0) / 2.0) * gamma(nf / 2.0).powi(2)))
}

/// Comparison of a Mahler volume estimate with a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub product: f64,
    pub std_error: f64,
    pub bound: f64,
    /// Signed distance to the bound, positive on the admissible side.
    pub margin: f64,
    pub pass: bool,
}

/// Lower bound check: `vol(K) vol(K°) >= β(n)` up to three standard errors.
pub fn verify_main(k: &BodyND, alpha_estimate: f64, sample: &SphereSample) -> Result<BoundReport> {
    let bound = beta_bound(k.dim(), alpha_estimate)?;
    let est = mahler_product(k, sample)?.product;
    Ok(BoundReport {
        product: est.value,
        std_error: est.std_error,
        bound,
        margin: est.value - bound,
        pass: est.value >= bound - MC_SIGMAS * est.std_error,
    })
}

/// Upper bound check: `vol(K) vol(K°) <= vol(B_n)²` up to three standard errors.
pub fn santalo_check(k: &BodyND, sample: &SphereSample) -> Result<BoundReport> {
    let bound = exact_reference(ReferenceBody::Ball, k.dim())?;
    let est = mahler_product(k, sample)?.product;
    Ok(BoundReport {
        product: est.value,
        std_error: est.std_error,
        bound,
        margin: bound - est.value,
        pass: est.value <= bound + MC_SIGMAS * est.std_error + 1e-12 * bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::lemma_floor;

    #[test]
    fn reference_values() {
        assert!((exact_reference(ReferenceBody::Cube, 4).unwrap() - 32.0 / 3.0).abs() < 1e-13);
        assert!((exact_reference(ReferenceBody::Ball, 4).unwrap() - PI.powi(4) / 4.0).abs() < 1e-12);
        for n in 2..=10 {
            assert!(exact_reference(ReferenceBody::Ball, n).unwrap() >= exact_reference(ReferenceBody::Cube, n).unwrap());
        }
        assert!(matches!("simplex".parse::<ReferenceBody>(), Err(Error::UnknownReference(_))));
        assert_eq!("cross".parse::<ReferenceBody>().unwrap(), ReferenceBody::CrossPolytope);
    }

    #[test]
    fn bound_chain_at_four() {
        let target = PI.powi(4) / 64.0;
        assert!((beta_bound(4, lemma_floor(3)).unwrap() - target).abs() < 1e-13);
        assert!((remark_bound(4).unwrap() - target).abs() < 1e-13);
        assert!((beta_bound(4, 1.0).unwrap() - 4.0 * PI.powi(4)).abs() < 1e-11);
        let b = beta_bound(5, 0.3).unwrap();
        assert!((beta_bound(5, 0.6).unwrap() - 2.0 * b).abs() < 1e-12 * b);
    }

    #[test]
    fn remark_bound_is_the_floor_at_index_n_minus_one() {
        for n in 4..=10 {
            let nf = n as f64;
            let floor = 1.0 / (nf * nf * nf.powf(nf / 2.0));
            let via_beta = beta_bound(n, floor).unwrap();
            let direct = remark_bound(n).unwrap();
            assert!((via_beta - direct).abs() < 1e-12 * direct);
            assert!((floor - lemma_floor(n as u32 - 1)).abs() < 1e-15 * floor);
            assert!(direct < exact_reference(ReferenceBody::Cube, n).unwrap());
        }
        // 4π⁵ / (5^{4.5} Γ(5/2)²) with Γ(5/2) = 3√π/4.
        let g = 0.75 * PI.sqrt();
        let expected = 4.0 * PI.powi(5) / (5f64.powf(4.5) * g * g);
        assert!((remark_bound(5).unwrap() - expected).abs() < 1e-13);
        assert!((remark_bound(5).unwrap() - 0.4957).abs() < 1e-4);
    }
}
