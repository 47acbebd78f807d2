//! Distribution embedding: target generators, the KL objective and the
//! gate-budget comparison with amplitude embedding.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, LogNormal};

use crate::error::{Error, Result};
use crate::rng::{derive_indexed, rng_from_seed};
use crate::simulator::{
    adjoint_gradient, build_simplified_two_design, gate_count, measure_distribution, mottonen_gate_count,
    AnsatzCircuit,
};

/// Floor applied to circuit probabilities before taking logarithms.
pub const KL_FLOOR: f64 = 1e-12;

pub const DEFAULT_MU_GRID: [f64; 11] = [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0];
pub const DEFAULT_SIGMA_GRID: [f64; 7] = [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    LogNormal { mu: f64, sigma: f64 },
    RandomCircuit { seed: u64 },
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetDistribution {
    pub p: Vec<f64>,
    pub provenance: Provenance,
}

impl TargetDistribution {
    pub fn qubits(&self) -> usize {
        self.p.len().trailing_zeros() as usize
    }
}

/// How a log-normal density is placed on the basis states `k = 0..2ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Discretization {
    /// Density evaluated at `x = k + 1`.
    #[default]
    Pointwise,
    /// Probability mass of `[k + 0.5, k + 1.5)`.
    BinIntegrated,
}

fn lognormal_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x.ln() - mu) / sigma;
    (-0.5 * z * z).exp() / (x * sigma * (2.0 * std::f64::consts::PI).sqrt())
}

fn normalize(mut p: Vec<f64>) -> Result<Vec<f64>> {
    let total: f64 = p.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Domain(format!("cannot normalize a vector summing to {total}")));
    }
    p.iter_mut().for_each(|x| *x /= total);
    Ok(p)
}

/// One normalized target per `(μ, σ)` pair, μ-major.
pub fn lognormal_targets(
    n: usize,
    mus: &[f64],
    sigmas: &[f64],
    discretization: Discretization,
) -> Result<Vec<TargetDistribution>> {
    if mus.is_empty() || sigmas.is_empty() {
        return Err(Error::Config("log-normal grids must be nonempty".into()));
    }
    if n == 0 || n > 24 {
        return Err(Error::InvalidSystem(format!("unsupported qubit count {n}")));
    }
    let dim = 1usize << n;
    let mut out = Vec::with_capacity(mus.len() * sigmas.len());
    for &mu in mus {
        for &sigma in sigmas {
            if !(sigma.is_finite() && sigma > 0.0 && mu.is_finite()) {
                return Err(Error::Config(format!("invalid log-normal parameters μ={mu}, σ={sigma}")));
            }
            let raw: Vec<f64> = match discretization {
                Discretization::Pointwise => (0..dim).map(|k| lognormal_pdf(k as f64 + 1.0, mu, sigma)).collect(),
                Discretization::BinIntegrated => {
                    let d = LogNormal::new(mu, sigma).map_err(|e| Error::Config(e.to_string()))?;
                    (0..dim)
                        .map(|k| d.cdf(k as f64 + 1.5) - d.cdf(k as f64 + 0.5))
                        .collect()
                }
            };
            out.push(TargetDistribution {
                p: normalize(raw)?,
                provenance: Provenance::LogNormal { mu, sigma },
            });
        }
    }
    Ok(out)
}

/// Measurement distributions of a simplified two-design with angles drawn
/// from `U[−π, π)`; sample `i` uses the sub-seed `derive(seed, i)`.
pub fn random_circuit_targets(n: usize, count: usize, layers: usize, seed: u64) -> Result<Vec<TargetDistribution>> {
    let circuit = build_simplified_two_design(n, layers)?;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let sub = derive_indexed(seed, "random-circuit-target", i);
            let mut rng = rng_from_seed(sub);
            let pi = std::f64::consts::PI;
            let theta: Vec<f64> = (0..circuit.num_params()).map(|_| rng.random_range(-pi..pi)).collect();
            Ok(TargetDistribution {
                p: measure_distribution(&circuit, &theta)?,
                provenance: Provenance::RandomCircuit { seed: sub },
            })
        })
        .collect()
}

fn check_probabilities(p: &[f64], what: &str) -> Result<()> {
    if let Some(x) = p.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::Domain(format!("{what} has an invalid entry {x}")));
    }
    Ok(())
}

/// `KL(p ‖ q) = Σ p_k log(p_k / max(q_k, 1e−12))`.
pub fn kl_cost(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::dim("KL divergence", p.len(), q.len()));
    }
    check_probabilities(p, "target distribution")?;
    check_probabilities(q, "circuit distribution")?;
    Ok(p.iter()
        .zip(q)
        .filter(|(pk, _)| **pk > 0.0)
        .map(|(pk, qk)| pk * (pk / qk.max(KL_FLOOR)).ln())
        .sum())
}

/// KL of the circuit's measurement distribution and its gradient.
///
/// With `q_k = |ψ_k|²` the co-state is `λ_k = −(p_k / q_k) ψ_k`; floored
/// entries contribute no gradient.
pub fn kl_cost_and_gradient(circuit: &AnsatzCircuit, theta: &[f64], p: &[f64]) -> Result<(f64, Vec<f64>)> {
    if p.len() != 1usize << circuit.n() {
        return Err(Error::dim("target distribution", 1usize << circuit.n(), p.len()));
    }
    check_probabilities(p, "target distribution")?;
    adjoint_gradient(circuit, theta, |psi| {
        let amps = psi.amplitudes();
        let q: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
        let cost = kl_cost(p, &q)?;
        let costate = amps
            .iter()
            .zip(p.iter().zip(&q))
            .map(|(a, (&pk, &qk))| {
                if qk >= KL_FLOOR {
                    a * (-pk / qk)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((cost, costate))
    })
}

pub fn kl_gradient(circuit: &AnsatzCircuit, theta: &[f64], p: &[f64]) -> Result<Vec<f64>> {
    Ok(kl_cost_and_gradient(circuit, theta, p)?.1)
}

/// Gate counts per register size: Möttönen amplitude embedding against
/// simplified two-designs of each requested depth.
#[derive(Debug, Clone, PartialEq)]
pub struct GateBudgetRow {
    pub n: usize,
    pub amplitude_embedding: u64,
    pub ansatz: Vec<(usize, usize)>,
}

pub fn gate_budget_report(ns: &[usize], layers: &[usize]) -> Result<Vec<GateBudgetRow>> {
    ns.iter()
        .map(|&n| {
            let ansatz = layers
                .iter()
                .map(|&l| Ok((l, gate_count(&build_simplified_two_design(n, l)?))))
                .collect::<Result<Vec<_>>>()?;
            Ok(GateBudgetRow {
                n,
                amplitude_embedding: mottonen_gate_count(n),
                ansatz,
            })
        })
        .collect()
}

/// CSV with one row per register size.
pub fn write_gate_budget_csv(rows: &[GateBudgetRow]) -> String {
    let mut out = String::from("qubits,amplitude_embedding");
    if let Some(first) = rows.first() {
        for (l, _) in &first.ansatz {
            write!(out, ",qmaml_{l}_layers").unwrap();
        }
    }
    out.push('\n');
    for r in rows {
        write!(out, "{},{}", r.n, r.amplitude_embedding).unwrap();
        for (_, c) in &r.ansatz {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Target file: qubit count, then `2ⁿ` probabilities, one per line.
pub fn write_target(p: &[f64]) -> String {
    let mut out = format!("{}\n", p.len().trailing_zeros());
    for x in p {
        writeln!(out, "{x:.16e}").unwrap();
    }
    out
}

pub fn save_target(p: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_target(p)).map_err(|e| Error::io(path, e))
}

pub fn parse_target(text: &str) -> Result<Vec<f64>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty target file".into(),
    })?;
    let n: usize = first.trim().parse().map_err(|_| Error::Parse {
        line: 1,
        message: format!("expected qubit count, found \"{}\"", first.trim()),
    })?;
    if n > 24 {
        return Err(Error::InvalidSystem(format!("unsupported qubit count {n}")));
    }
    let p = lines
        .map(|(i, l)| {
            l.trim().parse::<f64>().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("invalid probability \"{}\"", l.trim()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if p.len() != 1 << n {
        return Err(Error::Format(format!("expected {} probabilities, found {}", 1usize << n, p.len())));
    }
    check_probabilities(&p, "target distribution")?;
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("probabilities sum to {total}")));
    }
    Ok(p)
}

pub fn load_target(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_target(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_size() {
        let t = lognormal_targets(4, &DEFAULT_MU_GRID, &DEFAULT_SIGMA_GRID, Discretization::Pointwise).unwrap();
        assert_eq!(t.len(), 77);
        for d in &t {
            assert!((d.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(d.p.iter().all(|&x| x >= 0.0));
        }
        let b = lognormal_targets(3, &[1.0], &[0.5], Discretization::BinIntegrated).unwrap();
        assert!((b[0].p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lognormal_mode_matches_direct_density() {
        let t = &lognormal_targets(4, &[0.5], &[0.5], Discretization::Pointwise).unwrap()[0];
        // direct density evaluation, written out independently
        let dens = |x: f64| {
            let s = 0.5f64;
            (-(x.ln() - 0.5).powi(2) / (2.0 * s * s)).exp() / (x * s * (2.0 * std::f64::consts::PI).sqrt())
        };
        let oracle = (0..16)
            .max_by(|&a, &b| dens(a as f64 + 1.0).total_cmp(&dens(b as f64 + 1.0)))
            .unwrap();
        let argmax = (0..16).max_by(|&a, &b| t.p[a].total_cmp(&t.p[b])).unwrap();
        assert_eq!(argmax, oracle);
        assert!(argmax <= 2);
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(lognormal_targets(2, &[], &[1.0], Discretization::Pointwise).is_err());
    }

    #[test]
    fn kl_closed_forms() {
        let p = [0.2, 0.3, 0.5];
        assert_eq!(kl_cost(&p, &p).unwrap(), 0.0);
        assert!((kl_cost(&[1.0, 0.0], &[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(kl_cost(&[1.5, -0.5], &[0.5, 0.5]), Err(Error::Domain(_))));
        // vanishing circuit probability is floored, not infinite
        assert!((kl_cost(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - (1e12f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn random_targets_reproducible() {
        let a = random_circuit_targets(3, 6, 5, 42).unwrap();
        let b = random_circuit_targets(3, 6, 5, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].p, a[1].p);
        for t in &a {
            assert!((t.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_angles_give_point_mass() {
        let c = build_simplified_two_design(3, 5).unwrap();
        let p = measure_distribution(&c, &vec![0.0; c.num_params()]).unwrap();
        assert_eq!(p[0], 1.0);
        assert!(p[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gate_budget_cells() {
        let rows = gate_budget_report(&[7, 6, 4], &[2, 4]).unwrap();
        assert_eq!(rows[0].amplitude_embedding, 253);
        assert_eq!(rows[1].ansatz[1], (4, 66));
        assert_eq!(rows[2].ansatz[0], (2, 22));
        let csv = write_gate_budget_csv(&rows);
        assert!(csv.starts_with("qubits,amplitude_embedding,qmaml_2_layers,qmaml_4_layers\n"));
    }

    #[test]
    fn target_file_round_trip() {
        let p = vec![0.1, 0.2, 0.3, 0.4];
        assert_eq!(parse_target(&write_target(&p)).unwrap(), p);
        assert!(parse_target("2\n0.5\n0.5\n").is_err());
        assert!(parse_target("1\n0.5\nx\n").is_err());
    }
}
