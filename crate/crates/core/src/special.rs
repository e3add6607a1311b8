//! Closed forms built from the Gamma function.

use std::f64::consts::PI;

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Surface area of the unit sphere S^{n-1} in R^n: 2π^{n/2}/Γ(n/2).
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// Volume of the unit ball in R^n: π^{n/2}/Γ(n/2 + 1).
pub fn ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    PI.powf(h) / gamma(h + 1.0)
}

/// ∫_{-π/2}^{π/2} cos(t)^k dt = √π Γ((k+1)/2) / Γ(k/2 + 1).
pub fn cos_power_half_period(k: f64) -> f64 {
    PI.sqrt() * (ln_gamma((k + 1.0) / 2.0) - ln_gamma(k / 2.0 + 1.0)).exp()
}

/// n! as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_dimensional_values() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((ball_volume(4) - PI * PI / 2.0).abs() < 1e-13);
        assert!((cos_power_half_period(1.0) - 2.0).abs() < 1e-13);
        assert!((cos_power_half_period(2.0) - PI / 2.0).abs() < 1e-13);
    }
}
