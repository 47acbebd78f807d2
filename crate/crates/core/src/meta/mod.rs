//! Pre-training of the learner across tasks, per-task adaptation of the
//! circuit, baseline initializers and diagnostics.
//!
//! Both phases minimize: the learner's weights follow `−∇_W Σ_i l_i(h_W(φ_i))`
//! and adaptation follows `−∇_θ l(θ)`, each through Adam.

mod baseline;
mod diagnostics;

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::embed::kl_cost_and_gradient;
use crate::error::{Error, Result};
use crate::hamiltonian::{ground_energy, PauliHamiltonian};
use crate::learner::{AdamState, LearnerGrads, LearnerNet};
use crate::rng::component_rng;
use crate::simulator::{energy_and_gradient_with, expectation, measure_distribution, AnsatzCircuit, GradientMethod};
use crate::taskspace::{TaskPayload, TaskSet, TaskVector};

pub use baseline::{baseline_init, gaussian_variance, learner_init, Baseline, Initializer};
pub use diagnostics::{
    gradient_norm_sweep, parameter_statistics, write_statistics_csv, GradientNormSweep, ParameterStatistics,
};

/// Which learner snapshot `pretrain` returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    #[default]
    Last,
    /// The snapshot with the lowest mean train cost among all evaluations.
    MinLoss,
}

impl std::str::FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last" => Ok(Selection::Last),
            "min-loss" => Ok(Selection::MinLoss),
            other => Err(Error::Config(format!("unknown checkpoint selection \"{other}\""))),
        }
    }
}

impl std::fmt::Display for Selection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Selection::Last => "last",
            Selection::MinLoss => "min-loss",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PretrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub batch_size: usize,
    pub seed: u64,
    pub method: GradientMethod,
    pub selection: Selection,
    pub record_wall_clock: bool,
}

impl Default for PretrainConfig {
    fn default() -> Self {
        PretrainConfig {
            epochs: 30,
            lr: 1e-3,
            batch_size: 16,
            seed: 0,
            method: GradientMethod::Adjoint,
            selection: Selection::Last,
            record_wall_clock: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    pub iterations: usize,
    pub lr: f64,
    pub seed: u64,
    pub method: GradientMethod,
    /// Record every `stride`-th step; step 0 and the final step are always kept.
    pub stride: usize,
    /// Fill `wall_ms` with elapsed time. Off by default so that outputs are
    /// byte-reproducible.
    pub record_wall_clock: bool,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        AdaptConfig {
            iterations: 2000,
            lr: 1e-3,
            seed: 0,
            method: GradientMethod::Adjoint,
            stride: 1,
            record_wall_clock: false,
        }
    }
}

/// What a circuit is optimized against.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `⟨ψ(θ)|H|ψ(θ)⟩`.
    Energy(PauliHamiltonian),
    /// `KL(p ‖ |ψ(θ)|²)`.
    Kl(Vec<f64>),
}

impl Objective {
    pub fn cost(&self, circuit: &AnsatzCircuit, theta: &[f64]) -> Result<f64> {
        match self {
            Objective::Energy(h) => expectation(circuit, theta, h),
            Objective::Kl(p) => crate::embed::kl_cost(p, &measure_distribution(circuit, theta)?),
        }
    }

    pub fn cost_and_gradient(
        &self,
        circuit: &AnsatzCircuit,
        theta: &[f64],
        method: GradientMethod,
    ) -> Result<(f64, Vec<f64>)> {
        match self {
            Objective::Energy(h) => energy_and_gradient_with(circuit, theta, h, method),
            Objective::Kl(p) => match method {
                GradientMethod::Adjoint => kl_cost_and_gradient(circuit, theta, p),
                GradientMethod::ParameterShift => Err(Error::Method(
                    "parameter shift applies to expectation values, not to the KL cost".into(),
                )),
            },
        }
    }

    /// Lowest attainable cost: the ground energy, or zero for KL.
    pub fn reference(&self) -> Result<f64> {
        match self {
            Objective::Energy(h) => ground_energy(h),
            Objective::Kl(_) => Ok(0.0),
        }
    }
}

/// A task ready for optimization: its learner input, objective and the
/// reference value used for gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaTask {
    pub phi: Vec<f64>,
    pub objective: Objective,
    pub reference: f64,
}

impl MetaTask {
    pub fn new(phi: Vec<f64>, objective: Objective) -> Result<Self> {
        let reference = objective.reference()?;
        Ok(MetaTask {
            phi,
            objective,
            reference,
        })
    }

    pub fn with_reference(phi: Vec<f64>, objective: Objective, reference: f64) -> Self {
        MetaTask {
            phi,
            objective,
            reference,
        }
    }

    pub fn from_task(task: &TaskVector) -> Result<Self> {
        let objective = match &task.payload {
            TaskPayload::Hamiltonian(h) => Objective::Energy(h.clone()),
            TaskPayload::Distribution(p) => Objective::Kl(p.clone()),
        };
        MetaTask::new(task.phi.clone(), objective)
    }

    pub fn gap(&self, cost: f64) -> f64 {
        cost - self.reference
    }
}

/// Converts tasks in parallel, computing reference energies.
pub fn meta_tasks(tasks: &[&TaskVector]) -> Result<Vec<MetaTask>> {
    tasks.par_iter().map(|t| MetaTask::from_task(t)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub step: usize,
    pub cost: f64,
    pub gap: f64,
    pub grad_norm: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryRecord {
    pub rows: Vec<TrajectoryRow>,
}

impl TrajectoryRecord {
    pub fn steps(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.step).collect()
    }

    pub fn at_step(&self, step: usize) -> Option<&TrajectoryRow> {
        self.rows.iter().find(|r| r.step == step)
    }

    pub fn last(&self) -> Option<&TrajectoryRow> {
        self.rows.last()
    }

    fn push(&mut self, row: TrajectoryRow) -> Result<()> {
        if let Some(prev) = self.rows.last() {
            debug_assert!(row.step > prev.step);
        }
        if ![row.cost, row.gap, row.grad_norm].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite(format!("trajectory entry at step {} is not finite", row.step)));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,cost,gap,grad_norm,wall_ms\n");
        for r in &self.rows {
            writeln!(out, "{},{:.15e},{:.15e},{:.15e},{:.3}", r.step, r.cost, r.gap, r.grad_norm, r.wall_ms).unwrap();
        }
        out
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_shapes(net: &LearnerNet, circuit: &AnsatzCircuit, tasks: &[MetaTask]) -> Result<()> {
    if net.output_dim() != circuit.num_params() {
        return Err(Error::dim("learner output size", circuit.num_params(), net.output_dim()));
    }
    for t in tasks {
        if t.phi.len() != net.input_dim() {
            return Err(Error::dim("task vector", net.input_dim(), t.phi.len()));
        }
    }
    Ok(())
}

/// Per-task cost and `θ`-gradient at `θ = h_W(φ)`.
fn evaluate(
    net: &LearnerNet,
    circuit: &AnsatzCircuit,
    task: &MetaTask,
    method: GradientMethod,
) -> Result<(Vec<f64>, f64, Vec<f64>)> {
    let theta = net.forward(&task.phi)?;
    let (cost, grad) = task.objective.cost_and_gradient(circuit, &theta, method)?;
    if !cost.is_finite() {
        return Err(Error::NonFinite(format!("cost {cost} for task φ = {:?}", task.phi)));
    }
    Ok((theta, cost, grad))
}

/// Summed cost and the gradient of `Σ_i l_i(h_W(φ_i))` with respect to `W`.
///
/// Tasks are evaluated in parallel; contributions are accumulated in task
/// order so the result does not depend on scheduling.
pub fn batch_gradient(
    net: &LearnerNet,
    circuit: &AnsatzCircuit,
    tasks: &[&MetaTask],
    method: GradientMethod,
) -> Result<(f64, LearnerGrads)> {
    let parts: Vec<(f64, LearnerGrads)> = tasks
        .par_iter()
        .map(|task| {
            let (_, cost, grad) = evaluate(net, circuit, task, method)?;
            Ok((cost, net.backward(&task.phi, &grad)?))
        })
        .collect::<Result<_>>()?;
    let mut total = LearnerGrads::zeros_like(net);
    let mut cost = 0.0;
    for (c, g) in &parts {
        cost += c;
        total.add_assign(g);
    }
    Ok((cost, total))
}

/// Mean cost, mean gap and mean `θ`-gradient norm over `tasks`.
fn evaluate_set(
    net: &LearnerNet,
    circuit: &AnsatzCircuit,
    tasks: &[MetaTask],
    method: GradientMethod,
) -> Result<(f64, f64, f64)> {
    let parts: Vec<(f64, f64, f64)> = tasks
        .par_iter()
        .map(|task| {
            let (_, cost, grad) = evaluate(net, circuit, task, method)?;
            Ok((cost, task.gap(cost), l2(&grad)))
        })
        .collect::<Result<_>>()?;
    let count = parts.len() as f64;
    let (c, g, n) = parts
        .iter()
        .fold((0.0, 0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2 + p.2));
    Ok((c / count, g / count, n / count))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PretrainOutcome {
    pub net: LearnerNet,
    /// One row per evaluation of the full train set: before each epoch and
    /// after the last one. `step` is the number of completed epochs.
    pub record: TrajectoryRecord,
    pub updates: usize,
    /// Epoch count at which the returned snapshot was taken.
    pub selected_epoch: usize,
}

/// Meta-trains `net` on the train split of `tasks`.
pub fn pretrain(tasks: &TaskSet, circuit: &AnsatzCircuit, net: LearnerNet, cfg: &PretrainConfig) -> Result<PretrainOutcome> {
    let train = meta_tasks(&tasks.train())?;
    pretrain_tasks(&train, circuit, net, cfg)
}

/// Meta-training on prepared tasks.
///
/// Each epoch shuffles the tasks, splits them into batches of
/// `cfg.batch_size` and applies one Adam update per batch with the
/// batch-summed gradient.
pub fn pretrain_tasks(
    tasks: &[MetaTask],
    circuit: &AnsatzCircuit,
    mut net: LearnerNet,
    cfg: &PretrainConfig,
) -> Result<PretrainOutcome> {
    if cfg.epochs == 0 {
        return Err(Error::Config("epochs must be at least 1".into()));
    }
    if cfg.batch_size == 0 || cfg.batch_size > tasks.len() {
        return Err(Error::Config(format!(
            "batch size {} must lie in [1, {}]",
            cfg.batch_size,
            tasks.len()
        )));
    }
    check_shapes(&net, circuit, tasks)?;

    let start = Instant::now();
    let elapsed = |on: bool| if on { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let mut rng = component_rng(cfg.seed, "pretrain/shuffle");
    let mut adam = AdamState::for_tensors(cfg.lr, &net.tensors());
    let mut record = TrajectoryRecord::default();
    let mut order: Vec<usize> = (0..tasks.len()).collect();
    let mut best: Option<(f64, usize, LearnerNet)> = None;
    let mut updates = 0;

    for epoch in 0..=cfg.epochs {
        let (cost, gap, grad_norm) = evaluate_set(&net, circuit, tasks, cfg.method)?;
        record.push(TrajectoryRow {
            step: epoch,
            cost,
            gap,
            grad_norm,
            wall_ms: elapsed(cfg.record_wall_clock),
        })?;
        if cfg.selection == Selection::MinLoss && best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, epoch, net.clone()));
        }
        if epoch == cfg.epochs {
            break;
        }
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<&MetaTask> = chunk.iter().map(|&i| &tasks[i]).collect();
            let (_, grads) = batch_gradient(&net, circuit, &batch, cfg.method)?;
            net.apply_gradients(&mut adam, &grads)?;
            updates += 1;
        }
    }

    let (net, selected_epoch) = match best {
        Some((_, epoch, snapshot)) => (snapshot, epoch),
        None => (net, cfg.epochs),
    };
    Ok(PretrainOutcome {
        net,
        record,
        updates,
        selected_epoch,
    })
}

/// Adam descent on one task's circuit from `theta0`; the learner is not involved.
pub fn adapt(
    task: &MetaTask,
    circuit: &AnsatzCircuit,
    theta0: &[f64],
    cfg: &AdaptConfig,
) -> Result<(Vec<f64>, TrajectoryRecord)> {
    circuit.check_params(theta0)?;
    if cfg.stride == 0 {
        return Err(Error::Config("record stride must be at least 1".into()));
    }
    let start = Instant::now();
    let mut theta = theta0.to_vec();
    let mut adam = AdamState::new(cfg.lr, &[theta.len()]);
    let mut record = TrajectoryRecord::default();
    for step in 0..=cfg.iterations {
        let (cost, grad) = task.objective.cost_and_gradient(circuit, &theta, cfg.method)?;
        if step % cfg.stride == 0 || step == cfg.iterations {
            record.push(TrajectoryRow {
                step,
                cost,
                gap: task.gap(cost),
                grad_norm: l2(&grad),
                wall_ms: if cfg.record_wall_clock {
                    start.elapsed().as_secs_f64() * 1e3
                } else {
                    0.0
                },
            })?;
        } else if !cost.is_finite() {
            return Err(Error::NonFinite(format!("cost {cost} at adaptation step {step}")));
        }
        if step < cfg.iterations {
            adam.step_vec(&mut theta, &grad)?;
        }
    }
    Ok((theta, record))
}

/// Adapts every task from every initializer. Task `i` uses the same
/// initializer seed across initializers, so random baselines are comparable.
///
/// Returns one list of records per initializer, in task order.
pub fn compare_initializers(
    tasks: &[MetaTask],
    circuit: &AnsatzCircuit,
    initializers: &[Initializer<'_>],
    cfg: &AdaptConfig,
) -> Result<Vec<Vec<TrajectoryRecord>>> {
    initializers
        .iter()
        .map(|init| {
            tasks
                .par_iter()
                .enumerate()
                .map(|(i, task)| {
                    let theta0 = init.theta(&task.phi, circuit.num_params(), task_seed(cfg.seed, i))?;
                    Ok(adapt(task, circuit, &theta0, cfg)?.1)
                })
                .collect()
        })
        .collect()
}

/// Initializer seed of the `index`-th task.
pub fn task_seed(seed: u64, index: usize) -> u64 {
    crate::rng::derive_indexed(seed, "init", index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::heisenberg_xyz;
    use crate::learner::{Activation, OutputScaling};
    use crate::simulator::{build_xyz_ansatz, Gate};

    fn ry_task() -> (AnsatzCircuit, MetaTask) {
        let c = AnsatzCircuit::new(1, vec![Gate::Ry { qubit: 0, slot: 0 }]).unwrap();
        let h = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
        (c, MetaTask::new(vec![1.0], Objective::Energy(h)).unwrap())
    }

    #[test]
    fn adapt_reaches_analytic_minimum() {
        let (c, task) = ry_task();
        assert_eq!(task.reference, -1.0);
        let cfg = AdaptConfig {
            lr: 0.01,
            ..AdaptConfig::default()
        };
        let (theta, rec) = adapt(&task, &c, &[0.1], &cfg).unwrap();
        assert!(rec.last().unwrap().cost < -0.999, "{:?}", rec.last());
        assert!((rec.rows[0].cost - 0.1f64.cos()).abs() < 1e-12);
        assert!((rec.rows[0].gap - (0.1f64.cos() + 1.0)).abs() < 1e-12);
        assert!((theta[0].abs() - std::f64::consts::PI).abs() < 0.05);
    }

    #[test]
    fn adapt_default_rate_moves_about_alpha_per_step() {
        let (c, task) = ry_task();
        let cfg = AdaptConfig::default();
        let (_, near) = adapt(&task, &c, &[2.5], &cfg).unwrap();
        assert!(near.last().unwrap().cost < -0.999);
        // from θ₀ = 0.1 the minimum at π is out of reach of 2000 steps of size ~α
        let (_, far) = adapt(&task, &c, &[0.1], &cfg).unwrap();
        assert!(far.last().unwrap().cost > -0.9);
    }

    #[test]
    fn adapt_stationary_point() {
        let c = AnsatzCircuit::new(1, vec![Gate::Ry { qubit: 0, slot: 0 }]).unwrap();
        let h = PauliHamiltonian::from_labels(1, &[(-1.0, "Z")]).unwrap();
        let task = MetaTask::new(vec![1.0], Objective::Energy(h)).unwrap();
        let cfg = AdaptConfig {
            iterations: 10,
            ..AdaptConfig::default()
        };
        let (theta, rec) = adapt(&task, &c, &[0.0], &cfg).unwrap();
        assert!(theta[0].abs() < 1e-6);
        assert!(rec.rows.iter().all(|r| r.grad_norm < 1e-12));

        // rounding leaves a 1e-16 gradient at π that Adam rescales, but the
        // cost stays at the minimum
        let (c, task) = ry_task();
        let (_, rec) = adapt(&task, &c, &[std::f64::consts::PI], &cfg).unwrap();
        assert!(rec.rows.iter().all(|r| r.gap < 1e-6));
    }

    #[test]
    fn adapt_record_grid() {
        let (c, task) = ry_task();
        let cfg = AdaptConfig {
            iterations: 25,
            stride: 10,
            ..AdaptConfig::default()
        };
        let (_, rec) = adapt(&task, &c, &[0.3], &cfg).unwrap();
        assert_eq!(rec.steps(), vec![0, 10, 20, 25]);
        assert!(rec.to_csv().starts_with("step,cost,gap,grad_norm,wall_ms\n0,"));
    }

    fn small_setup() -> (AnsatzCircuit, Vec<MetaTask>, LearnerNet) {
        let c = build_xyz_ansatz(2, 2).unwrap();
        let task = MetaTask::new(vec![1.0, 1.0, 1.0], Objective::Energy(heisenberg_xyz(2, [1.0; 3], 0.0).unwrap())).unwrap();
        let net = LearnerNet::random(&[3, 16, 16, c.num_params()], Activation::LeakyRelu, OutputScaling::TanhPi, 3).unwrap();
        (c, vec![task], net)
    }

    #[test]
    fn pretrain_descends_single_task() {
        let c = build_xyz_ansatz(3, 2).unwrap();
        let j = [1.0, -0.5, 0.3];
        let task = MetaTask::new(j.to_vec(), Objective::Energy(heisenberg_xyz(3, j, 0.0).unwrap())).unwrap();
        let net = LearnerNet::random(&[3, 16, 16, c.num_params()], Activation::LeakyRelu, OutputScaling::TanhPi, 3).unwrap();
        let cfg = PretrainConfig {
            batch_size: 1,
            seed: 5,
            ..PretrainConfig::default()
        };
        let out = pretrain_tasks(&[task], &c, net, &cfg).unwrap();
        assert_eq!(out.record.rows.len(), 31);
        assert_eq!(out.updates, 30);
        let first = out.record.rows[0].gap;
        let last = out.record.last().unwrap().gap;
        assert!(last < first, "{first} -> {last}");
    }

    #[test]
    fn isotropic_two_site_gap_vanishes() {
        // every state the xyz ansatz reaches from |00⟩ lies in the ground triplet
        let (c, tasks, net) = small_setup();
        assert!((tasks[0].reference + 1.0).abs() < 1e-12);
        let cfg = PretrainConfig {
            batch_size: 1,
            ..PretrainConfig::default()
        };
        let out = pretrain_tasks(&tasks, &c, net, &cfg).unwrap();
        assert!(out.record.rows.iter().all(|r| r.gap.abs() < 1e-12));
    }

    #[test]
    fn pretrain_update_bookkeeping() {
        let c = build_xyz_ansatz(2, 1).unwrap();
        let tasks: Vec<MetaTask> = [[1.0, 0.5, 0.2], [0.3, -1.0, 2.0], [-0.5, 0.0, 1.0]]
            .iter()
            .map(|j| MetaTask::new(j.to_vec(), Objective::Energy(heisenberg_xyz(2, *j, 0.0).unwrap())).unwrap())
            .collect();
        let net = LearnerNet::random(&[3, 8, 8, c.num_params()], Activation::LeakyRelu, OutputScaling::TanhPi, 1).unwrap();
        let whole = PretrainConfig {
            epochs: 1,
            batch_size: 3,
            ..PretrainConfig::default()
        };
        assert_eq!(pretrain_tasks(&tasks, &c, net.clone(), &whole).unwrap().updates, 1);
        let halves = PretrainConfig { batch_size: 2, ..whole.clone() };
        assert_eq!(pretrain_tasks(&tasks, &c, net.clone(), &halves).unwrap().updates, 2);
        let too_big = PretrainConfig { batch_size: 4, ..whole };
        assert!(matches!(pretrain_tasks(&tasks, &c, net, &too_big), Err(Error::Config(_))));
    }

    #[test]
    fn pretrain_is_deterministic_and_selects_min_loss() {
        let (c, tasks, net) = small_setup();
        let cfg = PretrainConfig {
            epochs: 5,
            batch_size: 1,
            lr: 0.05,
            selection: Selection::MinLoss,
            ..PretrainConfig::default()
        };
        let a = pretrain_tasks(&tasks, &c, net.clone(), &cfg).unwrap();
        let b = pretrain_tasks(&tasks, &c, net, &cfg).unwrap();
        assert_eq!(a.record.to_csv(), b.record.to_csv());
        let min = a.record.rows.iter().map(|r| r.cost).fold(f64::INFINITY, f64::min);
        assert_eq!(a.record.rows[a.selected_epoch].cost, min);
    }

    #[test]
    fn pretrain_rejects_shape_mismatch() {
        let (c, tasks, _) = small_setup();
        let net = LearnerNet::random(&[3, 4, 4, 2], Activation::LeakyRelu, OutputScaling::TanhPi, 0).unwrap();
        let cfg = PretrainConfig { batch_size: 1, ..PretrainConfig::default() };
        assert!(matches!(pretrain_tasks(&tasks, &c, net, &cfg), Err(Error::Dimension { .. })));
    }

    #[test]
    fn kl_objective_refuses_parameter_shift() {
        let (c, _) = ry_task();
        let obj = Objective::Kl(vec![0.5, 0.5]);
        assert!(matches!(
            obj.cost_and_gradient(&c, &[0.2], GradientMethod::ParameterShift),
            Err(Error::Method(_))
        ));
    }
}
