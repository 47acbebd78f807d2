//! Task vectors `φ`, task sets and the distances between tasks.

mod manifest;
mod probe;

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::{heisenberg_xyz, load_hamiltonian, PauliHamiltonian};
use crate::rng::component_rng;

pub use manifest::{load_manifest, parse_manifest, save_manifest, write_manifest, MANIFEST_HEADER};
pub use probe::{continuity_probe, pearson, write_probe_csv, Correlation, ProbeResult, ProbeRow, Sampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskKind {
    /// `φ = [Jx, Jy, Jz]` of a Heisenberg XYZ chain.
    HeisenbergJ,
    /// `φ` = Pauli coefficients of a molecular Hamiltonian, zero padded.
    MoleculeC,
    /// `φ` = the target probability vector itself.
    DistributionTarget,
}

impl TaskKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TaskKind::HeisenbergJ => "heisenberg-J",
            TaskKind::MoleculeC => "molecule-C",
            TaskKind::DistributionTarget => "distribution-target",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg-J" => Ok(TaskKind::HeisenbergJ),
            "molecule-C" => Ok(TaskKind::MoleculeC),
            "distribution-target" => Ok(TaskKind::DistributionTarget),
            other => Err(Error::Config(format!("unknown task kind \"{other}\""))),
        }
    }
}

/// What a task vector stands for.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskPayload {
    Hamiltonian(PauliHamiltonian),
    Distribution(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskVector {
    pub phi: Vec<f64>,
    pub kind: TaskKind,
    pub payload: TaskPayload,
    /// File the payload was read from, if any.
    pub source: Option<PathBuf>,
}

impl TaskVector {
    pub fn heisenberg(n: usize, j: [f64; 3]) -> Result<Self> {
        Ok(TaskVector {
            phi: j.to_vec(),
            kind: TaskKind::HeisenbergJ,
            payload: TaskPayload::Hamiltonian(heisenberg_xyz(n, j, 0.0)?),
            source: None,
        })
    }

    pub fn distribution(p: Vec<f64>) -> Result<Self> {
        check_distribution(&p)?;
        Ok(TaskVector {
            phi: p.clone(),
            kind: TaskKind::DistributionTarget,
            payload: TaskPayload::Distribution(p),
            source: None,
        })
    }

    pub fn hamiltonian(&self) -> Option<&PauliHamiltonian> {
        match &self.payload {
            TaskPayload::Hamiltonian(h) => Some(h),
            TaskPayload::Distribution(_) => None,
        }
    }

    pub fn distribution_target(&self) -> Option<&[f64]> {
        match &self.payload {
            TaskPayload::Distribution(p) => Some(p),
            TaskPayload::Hamiltonian(_) => None,
        }
    }

    /// Qubit count of the underlying problem.
    pub fn qubits(&self) -> usize {
        match &self.payload {
            TaskPayload::Hamiltonian(h) => h.n(),
            TaskPayload::Distribution(p) => p.len().trailing_zeros() as usize,
        }
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() || !p.len().is_power_of_two() {
        return Err(Error::Length(format!(
            "distribution length {} is not a power of two",
            p.len()
        )));
    }
    if p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::Domain("distribution has negative or non-finite entries".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("distribution sums to {total}, not 1")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

/// A homogeneous collection of tasks with train/test tags and free-form
/// generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSet {
    kind: TaskKind,
    n: usize,
    tasks: Vec<TaskVector>,
    splits: Vec<Split>,
    metadata: Vec<(String, String)>,
}

impl TaskSet {
    pub fn new(
        kind: TaskKind,
        n: usize,
        tasks: Vec<TaskVector>,
        splits: Vec<Split>,
        metadata: Vec<(String, String)>,
    ) -> Result<Self> {
        if tasks.is_empty() {
            return Err(Error::Config("a task set needs at least one task".into()));
        }
        if splits.len() != tasks.len() {
            return Err(Error::dim("task split tags", tasks.len(), splits.len()));
        }
        let phi_len = tasks[0].phi.len();
        for (i, t) in tasks.iter().enumerate() {
            if t.kind != kind {
                return Err(Error::Config(format!("task {i} is {} in a {kind} set", t.kind)));
            }
            if t.phi.len() != phi_len {
                return Err(Error::dim(format!("task {i} vector"), phi_len, t.phi.len()));
            }
            if t.qubits() != n {
                return Err(Error::dim(format!("task {i} qubits"), n, t.qubits()));
            }
            match kind {
                TaskKind::HeisenbergJ if phi_len != 3 => {
                    return Err(Error::dim("heisenberg task vector", 3, phi_len))
                }
                TaskKind::DistributionTarget => {
                    if phi_len != 1 << n {
                        return Err(Error::dim("distribution task vector", 1 << n, phi_len));
                    }
                    check_distribution(&t.phi)?;
                }
                _ => {}
            }
        }
        let set = TaskSet {
            kind,
            n,
            tasks,
            splits,
            metadata,
        };
        set.check_disjoint()?;
        Ok(set)
    }

    /// All tasks tagged as training tasks.
    pub fn all_train(kind: TaskKind, n: usize, tasks: Vec<TaskVector>, metadata: Vec<(String, String)>) -> Result<Self> {
        let splits = vec![Split::Train; tasks.len()];
        Self::new(kind, n, tasks, splits, metadata)
    }

    fn check_disjoint(&self) -> Result<()> {
        let key = |t: &TaskVector| t.phi.iter().map(|x| x.to_bits()).collect::<Vec<u64>>();
        let train: std::collections::HashSet<Vec<u64>> = self
            .iter_split(Split::Train)
            .map(|(_, t)| key(t))
            .collect();
        if let Some((i, _)) = self.iter_split(Split::Test).find(|(_, t)| train.contains(&key(t))) {
            return Err(Error::Config(format!(
                "test task {i} duplicates a training task"
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> TaskKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn phi_len(&self) -> usize {
        self.tasks[0].phi.len()
    }

    pub fn tasks(&self) -> &[TaskVector] {
        &self.tasks
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn iter_split(&self, split: Split) -> impl Iterator<Item = (usize, &TaskVector)> {
        self.tasks
            .iter()
            .zip(&self.splits)
            .enumerate()
            .filter(move |(_, (_, s))| **s == split)
            .map(|(i, (t, _))| (i, t))
    }

    pub fn train(&self) -> Vec<&TaskVector> {
        self.iter_split(Split::Train).map(|(_, t)| t).collect()
    }

    pub fn test(&self) -> Vec<&TaskVector> {
        self.iter_split(Split::Test).map(|(_, t)| t).collect()
    }

    /// Re-tags a seeded random subset of `test_count` tasks as test tasks.
    pub fn with_holdout(mut self, test_count: usize, seed: u64) -> Result<Self> {
        if test_count >= self.tasks.len() {
            return Err(Error::Config(format!(
                "cannot hold out {test_count} of {} tasks",
                self.tasks.len()
            )));
        }
        let mut order: Vec<usize> = (0..self.tasks.len()).collect();
        order.shuffle(&mut component_rng(seed, "holdout"));
        self.splits = vec![Split::Train; self.tasks.len()];
        for &i in &order[..test_count] {
            self.splits[i] = Split::Test;
        }
        self.check_disjoint()?;
        Ok(self)
    }

    /// Holds out `round(fraction · len)` tasks.
    pub fn with_holdout_fraction(self, fraction: f64, seed: u64) -> Result<Self> {
        let count = (fraction * self.tasks.len() as f64).round() as usize;
        self.with_holdout(count, seed)
    }
}

/// Uniform lattice sampling of Heisenberg couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergSampling {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub seed: u64,
}

impl HeisenbergSampling {
    /// Range `[−3, 3]` on a 0.1 lattice.
    pub fn new(n: usize, seed: u64) -> Self {
        HeisenbergSampling {
            n,
            lo: -3.0,
            hi: 3.0,
            step: 0.1,
            seed,
        }
    }

    fn lattice(&self) -> Result<Vec<f64>> {
        if self.step.is_nan() || self.step <= 0.0 || self.lo.is_nan() || self.hi.is_nan() || self.hi < self.lo {
            return Err(Error::Config(format!(
                "invalid lattice [{}, {}] step {}",
                self.lo, self.hi, self.step
            )));
        }
        let k = (self.hi - self.lo) / self.step;
        if (k - k.round()).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "step {} does not divide [{}, {}]",
                self.step, self.lo, self.hi
            )));
        }
        Ok((0..=k.round() as usize)
            .map(|i| ((self.lo + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }

    fn metadata(&self, extra: &[(&str, String)]) -> Vec<(String, String)> {
        let mut m = vec![
            ("generator".to_string(), "heisenberg-lattice".to_string()),
            ("range".to_string(), format!("{},{}", self.lo, self.hi)),
            ("step".to_string(), self.step.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("field".to_string(), "0".to_string()),
        ];
        m.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
        m
    }
}

/// `count` Heisenberg tasks with every coupling drawn uniformly from the
/// lattice `{lo, lo+step, …, hi}`; duplicates are allowed. All tasks are
/// tagged as training tasks.
pub fn sample_heisenberg_tasks(spec: &HeisenbergSampling, count: usize) -> Result<TaskSet> {
    if count == 0 {
        return Err(Error::Config("task count must be at least 1".into()));
    }
    let lattice = spec.lattice()?;
    let mut rng = component_rng(spec.seed, "heisenberg-tasks");
    let tasks = (0..count)
        .map(|_| {
            let j = [0, 1, 2].map(|_| lattice[rng.random_range(0..lattice.len())]);
            TaskVector::heisenberg(spec.n, j)
        })
        .collect::<Result<Vec<_>>>()?;
    TaskSet::all_train(TaskKind::HeisenbergJ, spec.n, tasks, spec.metadata(&[]))
}

/// `train` training tasks followed by `test` held-out tasks whose couplings
/// differ from every training task.
pub fn sample_heisenberg_split(spec: &HeisenbergSampling, train: usize, test: usize) -> Result<TaskSet> {
    let base = sample_heisenberg_tasks(spec, train)?;
    let lattice = spec.lattice()?;
    if test > lattice.len().pow(3).saturating_sub(train) {
        return Err(Error::Config("lattice too small for a disjoint test split".into()));
    }
    let seen: std::collections::HashSet<[u64; 3]> = base
        .tasks()
        .iter()
        .map(|t| [t.phi[0].to_bits(), t.phi[1].to_bits(), t.phi[2].to_bits()])
        .collect();
    let mut rng = component_rng(spec.seed, "heisenberg-test-tasks");
    let mut held: Vec<TaskVector> = Vec::with_capacity(test);
    let mut held_keys = std::collections::HashSet::new();
    while held.len() < test {
        let j = [0, 1, 2].map(|_| lattice[rng.random_range(0..lattice.len())]);
        let key = j.map(f64::to_bits);
        if seen.contains(&key) || !held_keys.insert(key) {
            continue;
        }
        held.push(TaskVector::heisenberg(spec.n, j)?);
    }
    let mut tasks = base.tasks;
    let mut splits = vec![Split::Train; tasks.len()];
    tasks.extend(held);
    splits.resize(tasks.len(), Split::Test);
    let meta = spec.metadata(&[("train", train.to_string()), ("test", test.to_string())]);
    TaskSet::new(TaskKind::HeisenbergJ, spec.n, tasks, splits, meta)
}

/// Coefficient-vector tasks from Hamiltonian files, right-padded with zeros
/// to the longest file (or to `max_len`).
pub fn molecule_tasks_from_files<P: AsRef<Path>>(paths: &[P], max_len: Option<usize>) -> Result<TaskSet> {
    if paths.is_empty() {
        return Err(Error::Config("no Hamiltonian files given".into()));
    }
    let hams = paths
        .iter()
        .map(load_hamiltonian)
        .collect::<Result<Vec<_>>>()?;
    molecule_tasks(
        hams.into_iter()
            .zip(paths.iter().map(|p| Some(p.as_ref().to_path_buf())))
            .collect(),
        max_len,
    )
}

/// Coefficient-vector tasks from in-memory Hamiltonians.
pub fn molecule_tasks(hams: Vec<(PauliHamiltonian, Option<PathBuf>)>, max_len: Option<usize>) -> Result<TaskSet> {
    let n = hams
        .first()
        .map(|(h, _)| h.n())
        .ok_or_else(|| Error::Config("no Hamiltonians given".into()))?;
    let longest = hams.iter().map(|(h, _)| h.len()).max().unwrap_or(0);
    let width = match max_len {
        Some(m) if longest > m => {
            let (h, src) = hams.iter().find(|(h, _)| h.len() > m).expect("longest exceeds");
            return Err(Error::Length(format!(
                "{} has {} terms, more than the declared maximum {m}",
                src.as_ref().map_or("hamiltonian".into(), |p| p.display().to_string()),
                h.len()
            )));
        }
        Some(m) => m,
        None => longest,
    };
    let tasks = hams
        .into_iter()
        .enumerate()
        .map(|(i, (h, source))| {
            if h.n() != n {
                return Err(Error::dim(format!("molecule task {i} qubits"), n, h.n()));
            }
            let mut phi = h.coefficients();
            phi.resize(width, 0.0);
            Ok(TaskVector {
                phi,
                kind: TaskKind::MoleculeC,
                payload: TaskPayload::Hamiltonian(h),
                source,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = vec![
        ("generator".to_string(), "molecule-files".to_string()),
        ("max_len".to_string(), width.to_string()),
    ];
    TaskSet::all_train(TaskKind::MoleculeC, n, tasks, meta)
}

/// Hilbert–Schmidt overlap between two Pauli Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianOverlap {
    /// `Re Tr(H1† H2)`.
    pub raw: f64,
    /// `raw / (‖H1‖_HS ‖H2‖_HS)`, absent when either operator is zero.
    pub normalized: Option<f64>,
}

/// Overlap computed term by term from `Tr(P_a† P_b) = 2ⁿ δ_ab`.
pub fn hamiltonian_overlap(a: &PauliHamiltonian, b: &PauliHamiltonian) -> Result<HamiltonianOverlap> {
    if a.n() != b.n() {
        return Err(Error::dim("hamiltonian distance qubits", a.n(), b.n()));
    }
    let lookup: HashMap<_, f64> = b.terms().iter().map(|(c, p)| (*p, *c)).collect();
    let cross: f64 = a
        .terms()
        .iter()
        .filter_map(|(c, p)| lookup.get(p).map(|d| c * d))
        .sum();
    let na: f64 = a.terms().iter().map(|(c, _)| c * c).sum::<f64>().sqrt();
    let nb: f64 = b.terms().iter().map(|(c, _)| c * c).sum::<f64>().sqrt();
    let scale = (a.n() as f64).exp2();
    let normalized = (na > 0.0 && nb > 0.0).then(|| (cross / (na * nb)).clamp(-1.0, 1.0));
    Ok(HamiltonianOverlap {
        raw: scale * cross,
        normalized,
    })
}

/// Normalized Hilbert–Schmidt overlap in `[−1, 1]`.
pub fn hamiltonian_distance(a: &PauliHamiltonian, b: &PauliHamiltonian) -> Result<f64> {
    hamiltonian_overlap(a, b)?
        .normalized
        .ok_or_else(|| Error::Normalization("overlap with the zero Hamiltonian".into()))
}

/// Unnormalized `Re Tr(H1† H2)`.
pub fn hamiltonian_distance_raw(a: &PauliHamiltonian, b: &PauliHamiltonian) -> Result<f64> {
    Ok(hamiltonian_overlap(a, b)?.raw)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterDistance {
    /// `Σ (φ1 − φ2)`, signed; not a metric.
    PaperSum,
    /// Euclidean norm of `φ1 − φ2`.
    L2,
}

pub fn parameter_distance(a: &[f64], b: &[f64], variant: ParameterDistance) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::dim("parameter distance", a.len(), b.len()));
    }
    let diffs = a.iter().zip(b).map(|(x, y)| x - y);
    Ok(match variant {
        ParameterDistance::PaperSum => diffs.sum(),
        ParameterDistance::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64) -> HeisenbergSampling {
        HeisenbergSampling::new(3, seed)
    }

    #[test]
    fn lattice_samples() {
        let set = sample_heisenberg_tasks(&spec(5), 16).unwrap();
        assert_eq!(set.len(), 16);
        for t in set.tasks() {
            for &j in &t.phi {
                assert!((-3.0..=3.0).contains(&j));
                assert!((j * 10.0 - (j * 10.0).round()).abs() < 1e-9, "{j}");
            }
        }
    }

    #[test]
    fn two_point_lattice() {
        let mut s = spec(1);
        s.step = 6.0;
        let set = sample_heisenberg_tasks(&s, 50).unwrap();
        assert!(set.tasks().iter().flat_map(|t| &t.phi).all(|&j| j == -3.0 || j == 3.0));
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(
            sample_heisenberg_tasks(&spec(9), 20).unwrap(),
            sample_heisenberg_tasks(&spec(9), 20).unwrap()
        );
        assert_ne!(
            sample_heisenberg_tasks(&spec(9), 20).unwrap(),
            sample_heisenberg_tasks(&spec(10), 20).unwrap()
        );
    }

    #[test]
    fn rejects_bad_lattice() {
        let mut s = spec(1);
        s.step = 0.7;
        assert!(sample_heisenberg_tasks(&s, 3).is_err());
        assert!(sample_heisenberg_tasks(&spec(1), 0).is_err());
    }

    #[test]
    fn split_is_disjoint() {
        let set = sample_heisenberg_split(&spec(3), 40, 8).unwrap();
        assert_eq!((set.train().len(), set.test().len()), (40, 8));
        for t in set.test() {
            assert!(set.train().iter().all(|u| u.phi != t.phi));
        }
    }

    #[test]
    fn padding_to_longest() {
        let a = PauliHamiltonian::from_labels(2, &[(0.1, "ZI"), (0.2, "IZ"), (0.3, "XX")]).unwrap();
        let b = PauliHamiltonian::from_labels(
            2,
            &[(1.0, "II"), (0.5, "ZZ"), (0.25, "XX"), (0.125, "YY"), (-1.0, "ZI")],
        )
        .unwrap();
        let set = molecule_tasks(vec![(a.clone(), None), (b, None)], None).unwrap();
        assert_eq!(set.phi_len(), 5);
        assert_eq!(set.tasks()[0].phi, vec![0.1, 0.2, 0.3, 0.0, 0.0]);
        assert_eq!(set.tasks()[0].hamiltonian(), Some(&a));
        assert!(matches!(
            molecule_tasks(vec![(a.clone(), None)], Some(2)),
            Err(Error::Length(_))
        ));
        let single = molecule_tasks(vec![(a, None)], None).unwrap();
        assert_eq!(single.tasks()[0].phi, vec![0.1, 0.2, 0.3]);
    }

    #[test]
    fn holdout_fraction() {
        let hams: Vec<_> = (0..60)
            .map(|i| (PauliHamiltonian::from_labels(2, &[(1.0 + i as f64, "ZZ")]).unwrap(), None))
            .collect();
        let set = molecule_tasks(hams, None).unwrap().with_holdout_fraction(0.1, 4).unwrap();
        assert_eq!(set.test().len(), 6);
        assert_eq!(set.train().len(), 54);
    }

    #[test]
    fn overlap_examples() {
        let h = heisenberg_xyz(2, [1.0, 1.0, 1.0], 0.0).unwrap();
        assert!((hamiltonian_distance(&h, &h).unwrap() - 1.0).abs() < 1e-15);
        let x = PauliHamiltonian::from_labels(1, &[(1.0, "X")]).unwrap();
        let z = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
        assert_eq!(hamiltonian_distance(&x, &z).unwrap(), 0.0);
        let g = heisenberg_xyz(2, [1.0, 1.0, 0.0], 0.0).unwrap();
        assert!((hamiltonian_distance(&h, &g).unwrap() - 2.0 / 6f64.sqrt()).abs() < 1e-12);
        assert_eq!(hamiltonian_distance_raw(&h, &g).unwrap(), 8.0);
    }

    #[test]
    fn zero_hamiltonian_normalization() {
        let zero = PauliHamiltonian::from_terms(1, []).unwrap();
        let z = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
        assert!(matches!(hamiltonian_distance(&zero, &z), Err(Error::Normalization(_))));
        assert_eq!(hamiltonian_distance_raw(&zero, &z).unwrap(), 0.0);
    }

    #[test]
    fn parameter_distances() {
        use ParameterDistance::*;
        let a = [1.0, 2.0, 3.0];
        assert_eq!(parameter_distance(&a, &a, PaperSum).unwrap(), 0.0);
        assert_eq!(parameter_distance(&a, &a, L2).unwrap(), 0.0);
        assert_eq!(parameter_distance(&a, &[0.0; 3], PaperSum).unwrap(), 6.0);
        assert_eq!(parameter_distance(&[1.0, 0.0], &[0.0, 1.0], PaperSum).unwrap(), 0.0);
        assert_eq!(parameter_distance(&[1.0, 0.0], &[0.0, 1.0], L2).unwrap(), 2f64.sqrt());
        assert!(parameter_distance(&a, &[0.0; 2], L2).is_err());
    }

    #[test]
    fn task_set_invariants() {
        let t = TaskVector::heisenberg(2, [1.0, 0.0, 0.0]).unwrap();
        assert!(TaskSet::all_train(TaskKind::HeisenbergJ, 2, vec![], vec![]).is_err());
        assert!(TaskSet::all_train(TaskKind::MoleculeC, 2, vec![t.clone()], vec![]).is_err());
        assert!(TaskSet::all_train(TaskKind::HeisenbergJ, 3, vec![t.clone()], vec![]).is_err());
        let dup = TaskSet::new(
            TaskKind::HeisenbergJ,
            2,
            vec![t.clone(), t],
            vec![Split::Train, Split::Test],
            vec![],
        );
        assert!(dup.is_err());
        assert!(TaskVector::distribution(vec![0.5, 0.6]).is_err());
        assert!(TaskVector::distribution(vec![0.5, 0.25, 0.25]).is_err());
    }
}
