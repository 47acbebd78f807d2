use std::f64::consts::PI;

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::learner::LearnerNet;
use crate::rng::rng_from_seed;

/// Data-independent initializers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Baseline {
    Zero,
    Pi,
    /// i.i.d. `U[−απ, απ]`.
    ReducedUniform { alpha: f64 },
    /// i.i.d. `N(0, γ²)` with `γ² = 1 / (4 S (L + 2))`, where `S` counts the
    /// non-identity Paulis of the observable and `L` is the layer count.
    Gaussian { s: usize, layers: usize },
}

impl Baseline {
    pub const DEFAULT_ALPHA: f64 = 0.05;

    pub fn name(&self) -> &'static str {
        match self {
            Baseline::Zero => "zero",
            Baseline::Pi => "pi",
            Baseline::ReducedUniform { .. } => "uniform",
            Baseline::Gaussian { .. } => "gaussian",
        }
    }
}

/// `γ² = 1 / (4 S (L + 2))`.
pub fn gaussian_variance(s: usize, layers: usize) -> Result<f64> {
    let denom = 4 * s * (layers + 2);
    if denom == 0 {
        return Err(Error::Config("gaussian baseline needs S ≥ 1".into()));
    }
    Ok(1.0 / denom as f64)
}

pub fn baseline_init(kind: &Baseline, num_params: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    match *kind {
        Baseline::Zero => Ok(vec![0.0; num_params]),
        Baseline::Pi => Ok(vec![PI; num_params]),
        Baseline::ReducedUniform { alpha } => {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::Config(format!("uniform baseline needs α > 0, got {alpha}")));
            }
            let bound = alpha * PI;
            Ok((0..num_params).map(|_| rng.random_range(-bound..=bound)).collect())
        }
        Baseline::Gaussian { s, layers } => {
            let std = gaussian_variance(s, layers)?.sqrt();
            let normal = Normal::new(0.0, std).map_err(|e| Error::Config(e.to_string()))?;
            Ok((0..num_params).map(|_| normal.sample(&mut rng)).collect())
        }
    }
}

/// `θ₀ = h_W(φ)`.
pub fn learner_init(net: &LearnerNet, phi: &[f64]) -> Result<Vec<f64>> {
    net.forward(phi)
}

/// Any source of initial circuit parameters.
#[derive(Debug, Clone, Copy)]
pub enum Initializer<'a> {
    QMaml(&'a LearnerNet),
    Baseline(Baseline),
}

impl Initializer<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Initializer::QMaml(_) => "qmaml",
            Initializer::Baseline(b) => b.name(),
        }
    }

    /// Parameters for a task; `seed` only affects random baselines.
    pub fn theta(&self, phi: &[f64], num_params: usize, seed: u64) -> Result<Vec<f64>> {
        match self {
            Initializer::QMaml(net) => {
                if net.output_dim() != num_params {
                    return Err(Error::dim("learner output size", num_params, net.output_dim()));
                }
                learner_init(net, phi)
            }
            Initializer::Baseline(b) => baseline_init(b, num_params, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_values() {
        assert_eq!(gaussian_variance(2, 20).unwrap(), 1.0 / 176.0);
        assert_eq!(gaussian_variance(10, 7).unwrap(), 1.0 / 360.0);
        assert_eq!(gaussian_variance(14, 7).unwrap(), 1.0 / 504.0);
        assert!(gaussian_variance(0, 3).is_err());
    }

    #[test]
    fn constant_baselines() {
        assert_eq!(baseline_init(&Baseline::Zero, 5, 1).unwrap(), vec![0.0; 5]);
        assert_eq!(baseline_init(&Baseline::Pi, 2, 1).unwrap(), vec![PI; 2]);
    }

    #[test]
    fn uniform_bounds_and_seeding() {
        let b = Baseline::ReducedUniform { alpha: 0.05 };
        let a = baseline_init(&b, 1000, 9).unwrap();
        assert!(a.iter().all(|x| x.abs() <= 0.05 * PI));
        assert_eq!(a, baseline_init(&b, 1000, 9).unwrap());
        assert_ne!(a, baseline_init(&b, 1000, 10).unwrap());
    }

    #[test]
    fn learner_init_forwards() {
        let net = LearnerNet::standard(3, 4, 2).unwrap();
        let phi = [0.1, -0.4, 2.0];
        assert_eq!(learner_init(&net, &phi).unwrap(), net.forward(&phi).unwrap());
        assert_eq!(learner_init(&net, &phi).unwrap(), learner_init(&net, &phi).unwrap());
        assert!(matches!(learner_init(&net, &[1.0]), Err(Error::Dimension { .. })));
    }
}
