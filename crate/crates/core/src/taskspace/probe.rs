//! Sampling probe comparing distances in coupling space with overlaps in
//! Hamiltonian space around a centre task.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};

use super::{hamiltonian_overlap, parameter_distance, ParameterDistance};
use crate::error::{Error, Result};
use crate::hamiltonian::heisenberg_xyz;
use crate::rng::component_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampler {
    /// Each coupling i.i.d. `U(lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    /// Each coupling i.i.d. `N(mean, std²)`.
    Normal { mean: f64, std: f64 },
    /// Every sample equals the centre (degenerate probe).
    Centre,
}

impl Sampler {
    /// `U(−3, 5)`
    pub fn uniform() -> Self {
        Sampler::Uniform { lo: -3.0, hi: 5.0 }
    }

    /// `N(1, 1)`
    pub fn normal() -> Self {
        Sampler::Normal { mean: 1.0, std: 1.0 }
    }

    fn draw(&self, rng: &mut impl Rng, centre: [f64; 3]) -> Result<[f64; 3]> {
        Ok(match *self {
            Sampler::Uniform { lo, hi } => {
                let d = Uniform::new(lo, hi).map_err(|e| Error::Config(e.to_string()))?;
                [0, 1, 2].map(|_| d.sample(rng))
            }
            Sampler::Normal { mean, std } => {
                let d = Normal::new(mean, std).map_err(|e| Error::Config(e.to_string()))?;
                [0, 1, 2].map(|_| d.sample(rng))
            }
            Sampler::Centre => centre,
        })
    }
}

impl FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Sampler::uniform()),
            "normal" => Ok(Sampler::normal()),
            "centre" | "center" => Ok(Sampler::Centre),
            other => Err(Error::Config(format!("unknown sampler \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Defined(f64),
    /// Fewer than two samples, or a constant series.
    Degenerate,
}

impl Correlation {
    pub fn value(&self) -> Option<f64> {
        match self {
            Correlation::Defined(r) => Some(*r),
            Correlation::Degenerate => None,
        }
    }
}

impl std::fmt::Display for Correlation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Correlation::Defined(r) => write!(f, "{r:.6}"),
            Correlation::Degenerate => f.write_str("degenerate"),
        }
    }
}

/// Pearson correlation coefficient of two equal-length series.
pub fn pearson(x: &[f64], y: &[f64]) -> Correlation {
    let n = x.len().min(y.len());
    if n < 2 {
        return Correlation::Degenerate;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x[..n].iter().zip(&y[..n]) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Correlation::Degenerate;
    }
    Correlation::Defined(sxy / (sxx.sqrt() * syy.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub couplings: [f64; 3],
    pub d_phi_sum: f64,
    pub d_phi_l2: f64,
    /// Normalized Hilbert–Schmidt overlap with the centre.
    pub d_h_norm: f64,
    /// Raw `Re Tr(H_c† H)`.
    pub d_h_raw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub rows: Vec<ProbeRow>,
    /// Pearson(l2 distance, 1 − normalized overlap).
    pub correlation: Correlation,
    /// Pearson(signed-sum distance, raw overlap).
    pub verbatim_correlation: Correlation,
}

/// Samples `count` coupling triples, builds their `n`-site Heisenberg chains
/// and records both parameter distances and both overlaps against the centre.
pub fn continuity_probe(centre: [f64; 3], sampler: Sampler, count: usize, seed: u64, n: usize) -> Result<ProbeResult> {
    let h_centre = heisenberg_xyz(n, centre, 0.0)?;
    let mut rng = component_rng(seed, "continuity-probe");
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let j = sampler.draw(&mut rng, centre)?;
        let h = heisenberg_xyz(n, j, 0.0)?;
        let overlap = hamiltonian_overlap(&h_centre, &h)?;
        let d_h_norm = overlap
            .normalized
            .ok_or_else(|| Error::Normalization(format!("sampled couplings {j:?} give a zero Hamiltonian")))?;
        rows.push(ProbeRow {
            couplings: j,
            d_phi_sum: parameter_distance(&j, &centre, ParameterDistance::PaperSum)?,
            d_phi_l2: parameter_distance(&j, &centre, ParameterDistance::L2)?,
            d_h_norm,
            d_h_raw: overlap.raw,
        });
    }
    let l2: Vec<f64> = rows.iter().map(|r| r.d_phi_l2).collect();
    let dissimilarity: Vec<f64> = rows.iter().map(|r| 1.0 - r.d_h_norm).collect();
    let sums: Vec<f64> = rows.iter().map(|r| r.d_phi_sum).collect();
    let raws: Vec<f64> = rows.iter().map(|r| r.d_h_raw).collect();
    Ok(ProbeResult {
        correlation: pearson(&l2, &dissimilarity),
        verbatim_correlation: pearson(&sums, &raws),
        rows,
    })
}

/// Scatter CSV with header `d_phi_sum,d_phi_l2,d_H_norm`.
pub fn write_probe_csv(result: &ProbeResult) -> String {
    let mut out = String::from("d_phi_sum,d_phi_l2,d_H_norm\n");
    for r in &result.rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", r.d_phi_sum, r.d_phi_l2, r.d_h_norm).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_samples() {
        let r = continuity_probe([1.0, 1.0, 1.0], Sampler::Centre, 5, 0, 3).unwrap();
        for row in &r.rows {
            assert_eq!(row.d_phi_sum, 0.0);
            assert_eq!(row.d_phi_l2, 0.0);
            assert!((row.d_h_norm - 1.0).abs() < 1e-15);
        }
        assert_eq!(r.correlation, Correlation::Degenerate);
    }

    #[test]
    fn single_sample_is_degenerate() {
        let r = continuity_probe([1.0, 1.0, 1.0], Sampler::normal(), 1, 3, 2).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.correlation, Correlation::Degenerate);
    }

    #[test]
    fn pearson_basics() {
        let r = pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).value().unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        let r = pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).value().unwrap();
        assert!((r + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Correlation::Degenerate);
    }

    #[test]
    fn verbatim_forms_are_linear_for_heisenberg() {
        // raw overlap is 2ⁿ(n−1)·ΣJ and the signed sum is ΣJ − 3
        let r = continuity_probe([1.0, 1.0, 1.0], Sampler::uniform(), 50, 2, 3).unwrap();
        let v = r.verbatim_correlation.value().unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn csv_shape() {
        let r = continuity_probe([1.0, 1.0, 1.0], Sampler::normal(), 4, 3, 2).unwrap();
        let csv = write_probe_csv(&r);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "d_phi_sum,d_phi_l2,d_H_norm");
        assert_eq!(lines.len(), 5);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
    }
}
