//! Seeded Gaussian-mixture point clouds.
//!
//! The stream is fixed bit for bit so that any implementation can reproduce
//! it:
//!
//! * generator: xoshiro256** seeded from the 64-bit seed through SplitMix64
//!   (`Xoshiro256StarStar::seed_from_u64`);
//! * uniform draw: `u = ((x >> 11) + 1) * 2^-53`, which lies in `(0, 1]`;
//! * normals: Box-Muller on consecutive uniforms `u1, u2`, giving
//!   `r cos(2 pi u2)` then `r sin(2 pi u2)` with `r = sqrt(-2 ln u1)`; both
//!   are consumed, in that order;
//! * coordinates are drawn component by component, sample by sample,
//!   dimension by dimension.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::domain::PointCloud;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureConfig {
    pub means: Vec<Vec<f64>>,
    /// Per-axis variance shared by every component.
    pub covariance_diagonal: Vec<f64>,
    pub samples_per_component: usize,
    pub seed: u64,
}

pub const FOUR_CLUSTER_SAMPLES: usize = 20;
pub const TEN_CLUSTER_SAMPLES: usize = 10;

/// Four planar components with variance 0.8 per axis.
pub fn four_cluster_config(samples_per_component: usize, seed: u64) -> MixtureConfig {
    let h = 5.0 * 3f64.sqrt() / 2.0;
    MixtureConfig {
        means: vec![vec![0.0, 5.0], vec![-h, -2.5], vec![h, -2.5], vec![8.0, 2.0]],
        covariance_diagonal: vec![0.8, 0.8],
        samples_per_component,
        seed,
    }
}

/// Ten planar components with variance 0.2 per axis.
pub fn ten_cluster_config(samples_per_component: usize, seed: u64) -> MixtureConfig {
    let means = [
        (-2.5, -12.5),
        (5.0, -10.0),
        (0.0, -5.0),
        (-4.5, -5.0),
        (-5.0, 0.0),
        (-6.0, 5.0),
        (-1.5, 2.5),
        (3.5, -1.0),
        (7.5, -2.5),
        (10.0, 2.5),
    ];
    MixtureConfig {
        means: means.iter().map(|&(x, y)| vec![x, y]).collect(),
        covariance_diagonal: vec![0.2, 0.2],
        samples_per_component,
        seed,
    }
}

impl MixtureConfig {
    pub fn validate(&self) -> Result<()> {
        let d = self.covariance_diagonal.len();
        if self.means.is_empty() {
            return Err(Error::EmptyInput("mixture means"));
        }
        if d == 0 {
            return Err(Error::EmptyInput("covariance diagonal"));
        }
        if let Some(m) = self.means.iter().find(|m| m.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: m.len(),
            });
        }
        if self.covariance_diagonal.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("variances must be positive".into()));
        }
        if self.samples_per_component == 0 {
            return Err(Error::InvalidParameter("samples per component must be >= 1".into()));
        }
        if self.means.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mixture means"));
        }
        Ok(())
    }
}

/// Standard normal stream as described in the module docs.
pub struct NormalStream {
    rng: Xoshiro256StarStar,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * angle.sin());
        r * angle.cos()
    }
}

/// Draws `samples_per_component` points around every mean, labelled by
/// component.
pub fn sample_gaussian_mixture(cfg: &MixtureConfig) -> Result<PointCloud> {
    cfg.validate()?;
    let mut normals = NormalStream::new(cfg.seed);
    let sd: Vec<f64> = cfg.covariance_diagonal.iter().map(|v| v.sqrt()).collect();
    let total = cfg.means.len() * cfg.samples_per_component;
    let mut points = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for (k, mean) in cfg.means.iter().enumerate() {
        for _ in 0..cfg.samples_per_component {
            let p = mean
                .iter()
                .zip(&sd)
                .map(|(m, s)| m + s * normals.next_normal())
                .collect();
            points.push(p);
            labels.push(k);
        }
    }
    PointCloud::with_labels(points, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configs_match_the_experiments() {
        let four = four_cluster_config(20, 1);
        assert_eq!(four.means.len(), 4);
        assert_eq!(four.means[0], vec![0.0, 5.0]);
        assert_eq!(four.covariance_diagonal, vec![0.8, 0.8]);
        let ten = ten_cluster_config(10, 1);
        assert_eq!(ten.means.len(), 10);
        assert_eq!(ten.means[9], vec![10.0, 2.5]);
        assert_eq!(ten.covariance_diagonal, vec![0.2, 0.2]);
    }

    #[test]
    fn same_seed_same_cloud() {
        let cfg = four_cluster_config(5, 42);
        let a = sample_gaussian_mixture(&cfg).unwrap();
        let b = sample_gaussian_mixture(&cfg).unwrap();
        assert_eq!(a, b);
        let c = sample_gaussian_mixture(&four_cluster_config(5, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn labels_count_per_component() {
        let cloud = sample_gaussian_mixture(&ten_cluster_config(3, 7)).unwrap();
        let labels = cloud.labels().unwrap();
        for k in 0..10 {
            assert_eq!(labels.iter().filter(|&&l| l == k).count(), 3);
        }
    }

    #[test]
    fn tiny_variance_stays_at_the_mean() {
        let cfg = MixtureConfig {
            covariance_diagonal: vec![1e-12, 1e-12],
            ..four_cluster_config(10, 3)
        };
        let cloud = sample_gaussian_mixture(&cfg).unwrap();
        for (p, &l) in cloud.points().iter().zip(cloud.labels().unwrap()) {
            for (x, m) in p.iter().zip(&cfg.means[l]) {
                assert!((x - m).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn first_uniform_is_reproducible() {
        // xoshiro256** after SplitMix64 seeding from 0
        let mut rng = Xoshiro256StarStar::seed_from_u64(0);
        let x = rng.next_u64();
        let mut s = NormalStream::new(0);
        assert_eq!(s.uniform(), ((x >> 11) + 1) as f64 / 9007199254740992.0);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = four_cluster_config(0, 1);
        assert!(sample_gaussian_mixture(&cfg).is_err());
        cfg.samples_per_component = 1;
        cfg.covariance_diagonal = vec![0.0, 1.0];
        assert!(sample_gaussian_mixture(&cfg).is_err());
        cfg.covariance_diagonal = vec![1.0];
        assert!(sample_gaussian_mixture(&cfg).is_err());
    }
}
