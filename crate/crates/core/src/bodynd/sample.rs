//! Volumes from radial functions: `vol(K) = |S^{n-1}| · mean_u x(u)^n / n`
//! over a quasi-random, antithetic sample of the sphere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{norm, BodyND};
use crate::error::{Error, Result};
use crate::quadrature::CompensatedSum;
use crate::special::sphere_area;

/// Antithetic point set on `S^{dim-1}`: every stored `u` stands for the
/// pair `{u, -u}`, each direction carrying weight `1 / len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSample {
    dim: usize,
    half: Vec<f64>,
}

/// Positive root of `x^{d+1} = x + 1`.
fn generalized_golden_ratio(d: usize) -> f64 {
    let mut x = 1.5f64;
    for _ in 0..60 {
        let f = x.powi(d as i32 + 1) - x - 1.0;
        let df = (d as f64 + 1.0) * x.powi(d as i32) - 1.0;
        x -= f / df;
    }
    x
}

impl SphereSample {
    /// `count` directions (rounded up to even) from a randomly shifted
    /// Kronecker sequence pushed through the inverse normal CDF.
    pub fn quasi_random(dim: usize, count: usize, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("sphere dimension {dim}")));
        }
        if count < 2 {
            return Err(Error::InvalidParameter("need at least one antithetic pair".into()));
        }
        let pairs = count.div_ceil(2);
        let phi = generalized_golden_ratio(dim);
        let alpha: Vec<f64> = (1..=dim).map(|j| phi.powi(-(j as i32))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        let mut half = vec![0.0; pairs * dim];
        half.par_chunks_mut(dim).enumerate().for_each(|(i, u)| {
            for j in 0..dim {
                let p = (shift[j] + (i + 1) as f64 * alpha[j]).fract().clamp(1e-15, 1.0 - 1e-15);
                u[j] = normal.inverse_cdf(p);
            }
            let n = norm(u);
            u.iter_mut().for_each(|x| *x /= n);
        });
        Ok(Self { dim, half })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of directions, counting both members of each pair.
    pub fn len(&self) -> usize {
        2 * self.pairs()
    }

    pub fn is_empty(&self) -> bool {
        self.half.is_empty()
    }

    pub fn pairs(&self) -> usize {
        self.half.len() / self.dim
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    /// Representative `u` of the `i`-th pair.
    pub fn representative(&self, i: usize) -> &[f64] {
        &self.half[i * self.dim..(i + 1) * self.dim]
    }

    /// All directions, `u` followed by `-u` for each pair.
    pub fn directions(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.half
            .chunks_exact(self.dim)
            .flat_map(|u| [u.to_vec(), u.iter().map(|x| -x).collect()])
    }

    /// Means of the `K` components of `f` over the pairs, and the
    /// covariance matrix of those means. Chunks are fixed and combined in
    /// order, so the result does not depend on the thread count.
    pub(crate) fn moments<const K: usize, F>(&self, f: F) -> Result<([f64; K], [[f64; K]; K])>
    where
        F: Fn(&[f64]) -> Result<[f64; K]> + Sync,
    {
        const CHUNK: usize = 4096;
        type Acc<const K: usize> = ([CompensatedSum; K], [[CompensatedSum; K]; K]);
        let zero = || -> Acc<K> {
            (std::array::from_fn(|_| CompensatedSum::default()), std::array::from_fn(|_| std::array::from_fn(|_| CompensatedSum::default())))
        };
        // Shifting by the first value keeps the variance exact for constant data.
        let shift = f(self.representative(0))?;
        let partial: Vec<Result<Acc<K>>> = self
            .half
            .par_chunks(CHUNK * self.dim)
            .map(|chunk| {
                let mut acc = zero();
                for u in chunk.chunks_exact(self.dim) {
                    let raw = f(u)?;
                    let v: [f64; K] = std::array::from_fn(|a| raw[a] - shift[a]);
                    for a in 0..K {
                        acc.0[a].add(v[a]);
                        for b in 0..K {
                            acc.1[a][b].add(v[a] * v[b]);
                        }
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut total = zero();
        for p in partial {
            let p = p?;
            for a in 0..K {
                total.0[a].add(p.0[a].value());
                for b in 0..K {
                    total.1[a][b].add(p.1[a][b].value());
                }
            }
        }
        let m = self.pairs() as f64;
        let centered: [f64; K] = std::array::from_fn(|a| total.0[a].value() / m);
        let cov = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let c = total.1[a][b].value() / m - centered[a] * centered[b];
                c / (m - 1.0).max(1.0)
            })
        });
        let mean = std::array::from_fn(|a| centered[a] + shift[a]);
        Ok((mean, cov))
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Whether `target` lies within `sigmas` standard errors, allowing for
    /// rounding when the error estimate vanishes.
    pub fn covers(&self, target: f64, sigmas: f64) -> bool {
        (self.value - target).abs() <= sigmas * self.std_error + 1e-12 * target.abs().max(1.0)
    }
}

fn check_sample(k: &BodyND, sample: &SphereSample) -> Result<()> {
    if k.dim() != sample.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: sample.dim() });
    }
    Ok(())
}

/// `vol(K)` as `|S^{n-1}| · mean x(u)^n / n`. `x(-u) = x(u)` by symmetry,
/// so each pair contributes one evaluation.
pub fn volume_radial_mc(k: &BodyND, sample: &SphereSample) -> Result<Estimate> {
    check_sample(k, sample)?;
    let n = k.dim();
    let area = sphere_area(n);
    let (mean, cov) = sample.moments(|u| Ok([k.radial(u)?.powi(n as i32) / n as f64]))?;
    Ok(Estimate { value: area * mean[0], std_error: area * cov[0][0].max(0.0).sqrt() })
}

/// Mahler volume estimate with the two factor volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MahlerEstimate {
    pub product: Estimate,
    pub volume: Estimate,
    pub polar_volume: Estimate,
}

/// `vol(K) vol(K°)` from one shared sample; the standard error follows the
/// delta method including the covariance of the two factors.
pub fn mahler_product(k: &BodyND, sample: &SphereSample) -> Result<MahlerEstimate> {
    check_sample(k, sample)?;
    let n = k.dim();
    let area = sphere_area(n);
    let polar = k.polar();
    let inv_n = 1.0 / n as f64;
    let ([a, b], cov) = sample.moments(|u| {
        Ok([k.radial(u)?.powi(n as i32) * inv_n, polar.radial(u)?.powi(n as i32) * inv_n])
    })?;
    let (va, vb, cab) = (cov[0][0].max(0.0), cov[1][1].max(0.0), cov[0][1]);
    let var = (b * b * va + a * a * vb + 2.0 * a * b * cab).max(0.0);
    Ok(MahlerEstimate {
        product: Estimate { value: area * area * a * b, std_error: area * area * var.sqrt() },
        volume: Estimate { value: area * a, std_error: area * va.sqrt() },
        polar_volume: Estimate { value: area * b, std_error: area * vb.sqrt() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ball_volume;

    #[test]
    fn directions_are_unit_and_antithetic() {
        let s = SphereSample::quasi_random(5, 1001, 3).unwrap();
        assert_eq!(s.len(), 1002);
        let all: Vec<Vec<f64>> = s.directions().collect();
        assert_eq!(all.len(), 1002);
        for pair in all.chunks(2) {
            assert!((norm(&pair[0]) - 1.0).abs() < 1e-12);
            assert!(pair[0].iter().zip(&pair[1]).all(|(a, b)| a == &-b));
        }
        assert!((s.weight() * s.len() as f64 - 1.0).abs() < 1e-15);
        assert_eq!(s, SphereSample::quasi_random(5, 1001, 3).unwrap());
    }

    #[test]
    fn sample_mean_of_coordinate_square() {
        // E[u_1²] = 1/n on the sphere.
        let s = SphereSample::quasi_random(4, 20000, 1).unwrap();
        let (mean, cov) = s.moments(|u| Ok([u[0] * u[0]])).unwrap();
        assert!((mean[0] - 0.25).abs() < 3.0 * cov[0][0].sqrt() + 1e-4);
    }

    #[test]
    fn cube_volume_and_scaling() {
        let s = SphereSample::quasi_random(4, 40000, 7).unwrap();
        let cube = BodyND::cube(4).unwrap();
        let v = volume_radial_mc(&cube, &s).unwrap();
        assert!(v.covers(16.0, 3.0), "{v:?}");
        let v2 = volume_radial_mc(&cube.scaled(1.5), &s).unwrap();
        assert!((v2.value - 1.5f64.powi(4) * v.value).abs() < 1e-12 * v2.value);
    }

    #[test]
    fn ball_is_exact() {
        let s = SphereSample::quasi_random(4, 1000, 7).unwrap();
        let m = mahler_product(&BodyND::ball(4, 1.0).unwrap(), &s).unwrap();
        assert!((m.product.value - ball_volume(4).powi(2)).abs() < 1e-12);
        assert!(m.product.std_error < 1e-12);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let s = SphereSample::quasi_random(4, 30000, 2).unwrap();
        let k = BodyND::random_polytope(4, 8, 5).unwrap();
        let a = mahler_product(&k, &s).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| mahler_product(&k, &s).unwrap());
        assert_eq!(a, b);
    }
}
