use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simulator::{AnsatzCircuit, GradientMethod};

use super::{l2, task_seed, Initializer, MetaTask};

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterStatistics {
    pub initializer: String,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    /// `(lo, hi, count)` per bin.
    pub histogram: Vec<(f64, f64, usize)>,
}

/// Mean, variance and a histogram on `[lo, hi]` for each named parameter set.
/// Values outside the range are counted in the nearest edge bin.
pub fn parameter_statistics(
    sets: &[(String, Vec<f64>)],
    bins: usize,
    range: Option<(f64, f64)>,
) -> Result<Vec<ParameterStatistics>> {
    let (lo, hi) = range.unwrap_or((-PI, PI));
    if bins == 0 || lo.is_nan() || hi.is_nan() || hi <= lo {
        return Err(Error::Config(format!("invalid histogram: {bins} bins on [{lo}, {hi}]")));
    }
    let width = (hi - lo) / bins as f64;
    sets.iter()
        .map(|(name, values)| {
            if values.is_empty() {
                return Err(Error::Length(format!("no parameters for initializer \"{name}\"")));
            }
            let count = values.len() as f64;
            let mean = values.iter().sum::<f64>() / count;
            let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count;
            let mut counts = vec![0usize; bins];
            for v in values {
                let idx = ((v - lo) / width).floor();
                counts[(idx.max(0.0) as usize).min(bins - 1)] += 1;
            }
            Ok(ParameterStatistics {
                initializer: name.clone(),
                mean,
                variance,
                histogram: counts
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (lo + i as f64 * width, lo + (i + 1) as f64 * width, c))
                    .collect(),
            })
        })
        .collect()
}

pub fn write_statistics_csv(stats: &[ParameterStatistics]) -> String {
    let mut out = String::from("initializer,mean,variance,bin_lo,bin_hi,count\n");
    for s in stats {
        for (lo, hi, c) in &s.histogram {
            writeln!(out, "{},{:.15e},{:.15e},{:.15e},{:.15e},{}", s.initializer, s.mean, s.variance, lo, hi, c)
                .unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientNormSweep {
    pub per_task: Vec<f64>,
    pub mean: f64,
}

/// `‖∇_θ l‖₂` at each task's initial parameters.
///
/// The mean is taken over the sorted norms, so it is exactly invariant under
/// reordering of the tasks.
pub fn gradient_norm_sweep(
    init: &Initializer<'_>,
    tasks: &[MetaTask],
    circuit: &AnsatzCircuit,
    method: GradientMethod,
    seed: u64,
) -> Result<GradientNormSweep> {
    if tasks.is_empty() {
        return Err(Error::Length("gradient-norm sweep needs at least one task".into()));
    }
    let per_task: Vec<f64> = tasks
        .par_iter()
        .enumerate()
        .map(|(i, task)| {
            let theta = init.theta(&task.phi, circuit.num_params(), task_seed(seed, i))?;
            Ok(l2(&task.objective.cost_and_gradient(circuit, &theta, method)?.1))
        })
        .collect::<Result<_>>()?;
    let mut sorted = per_task.clone();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    Ok(GradientNormSweep { per_task, mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta::{baseline_init, gaussian_variance, Baseline, Objective};
    use crate::hamiltonian::PauliHamiltonian;
    use crate::simulator::Gate;

    #[test]
    fn zero_set_statistics() {
        let s = parameter_statistics(&[("zero".into(), vec![0.0; 10])], 4, None).unwrap();
        assert_eq!(s[0].mean, 0.0);
        assert_eq!(s[0].variance, 0.0);
        assert_eq!(s[0].histogram.iter().map(|b| b.2).sum::<usize>(), 10);
        assert_eq!(s[0].histogram[2].2, 10);
    }

    #[test]
    fn sample_variances() {
        let g = baseline_init(&Baseline::Gaussian { s: 2, layers: 20 }, 100_000, 11).unwrap();
        let u = baseline_init(&Baseline::ReducedUniform { alpha: 0.05 }, 100_000, 12).unwrap();
        let s = parameter_statistics(&[("gaussian".into(), g), ("uniform".into(), u)], 20, None).unwrap();
        let target = gaussian_variance(2, 20).unwrap();
        assert!((s[0].variance / target - 1.0).abs() < 0.05);
        let uniform = (0.05 * PI).powi(2) / 3.0;
        assert!((s[1].variance / uniform - 1.0).abs() < 0.05);
        let csv = write_statistics_csv(&s);
        assert_eq!(csv.lines().count(), 41);
    }

    #[test]
    fn stationary_sweep_is_zero() {
        let c = AnsatzCircuit::new(1, vec![Gate::Ry { qubit: 0, slot: 0 }]).unwrap();
        let h = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
        let tasks = vec![MetaTask::new(vec![0.0], Objective::Energy(h)).unwrap()];
        let sweep = gradient_norm_sweep(&Initializer::Baseline(Baseline::Zero), &tasks, &c, GradientMethod::Adjoint, 0)
            .unwrap();
        assert!(sweep.mean <= 1e-8);
    }
}
