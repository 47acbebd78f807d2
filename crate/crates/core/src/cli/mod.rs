//! The `qmaml` command-line front end.
//!
//! Every command resolves a [`RunConfig`] from an optional `--config` file
//! overlaid with flags (flags win), creates a run directory under the output
//! root (`--out`, else `$QMAML_OUT`, else `./runs`) and writes its outputs
//! together with `config.txt`, the resolved configuration.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;

use crate::embed::{
    gate_budget_report, lognormal_targets, random_circuit_targets, write_gate_budget_csv, write_target, Provenance,
    DEFAULT_MU_GRID, DEFAULT_SIGMA_GRID,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    eigensolve_dense, eigensolve_lanczos, load_hamiltonian, LanczosOptions, DENSE_MAX_QUBITS,
};
use crate::learner::{load_checkpoint, save_checkpoint, LearnerNet};
use crate::meta::{
    compare_initializers, gradient_norm_sweep, meta_tasks, parameter_statistics, pretrain_tasks, task_seed,
    write_statistics_csv, Initializer, MetaTask, TrajectoryRecord, TrajectoryRow,
};
use crate::rng::{component_rng, derive_seed};
use crate::simulator::{build_ansatz, AnsatzCircuit};
use crate::taskspace::{
    continuity_probe, load_manifest, molecule_tasks_from_files, sample_heisenberg_split, save_manifest,
    write_probe_csv, HeisenbergSampling, Sampler, Split, TaskKind, TaskSet, TaskVector,
};

pub use config::{Experiment, RunConfig, Settings, INITIALIZERS, KEYS};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "QMAML_OUT";

#[derive(Debug, Parser)]
#[command(name = "qmaml", version, about = "Meta-learned initialization of variational quantum circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a task set (manifest plus any target files).
    GenTasks(GenTasksArgs),
    /// Meta-train the learner.
    Pretrain(RunArgs),
    /// Adapt held-out tasks from each requested initializer.
    Adapt(RunArgs),
    /// Pre-train on random-circuit distributions, then adapt log-normal targets.
    Embed(RunArgs),
    /// Lowest eigenvalues of a Hamiltonian file.
    Eigensolve(EigensolveArgs),
    /// Diagnostics.
    Diag(DiagArgs),
    /// Gate counts of amplitude embedding against simplified two-designs.
    Gatecount(GatecountArgs),
}

/// Flags shared by every experiment command. Each maps onto one config key.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Config file of key=value lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output root for run directories.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exact run directory, bypassing the timestamped default.
    #[arg(long)]
    pub run_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub experiment: Option<String>,
    /// Qubit count.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub ansatz: Option<String>,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub train: Option<usize>,
    #[arg(long)]
    pub test: Option<usize>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Comma-separated Hamiltonian files (molecule experiments).
    #[arg(long)]
    pub hamiltonians: Option<String>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Comma-separated initializers: qmaml, zero, pi, uniform, gaussian.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub uniform_alpha: Option<f64>,
    #[arg(long)]
    pub gaussian_s: Option<usize>,
    #[arg(long)]
    pub gaussian_layers: Option<usize>,
    /// pointwise | bin-integrated
    #[arg(long)]
    pub discretization: Option<String>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub pretrain_lr: Option<f64>,
    #[arg(long)]
    pub batch: Option<usize>,
    /// last | min-loss
    #[arg(long)]
    pub selection: Option<String>,
    /// adjoint | parameter-shift
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub adapt_lr: Option<f64>,
    #[arg(long)]
    pub stride: Option<usize>,
    /// Record elapsed time in `wall_ms` (outputs are then not reproducible).
    #[arg(long)]
    pub wall_clock: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Heisenberg,
    Molecule,
    EmbedLognormal,
    EmbedRandom,
}

#[derive(Debug, Args)]
pub struct GenTasksArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Number of training tasks (random targets for embed-random).
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Args)]
pub struct EigensolveArgs {
    #[arg(long)]
    pub file: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
    pub solver: SolverChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub run_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagArgs {
    #[command(subcommand)]
    pub which: Diag,
}

#[derive(Debug, Subcommand)]
pub enum Diag {
    /// Parameter distance against Hamiltonian distance around a centre task.
    Continuity(ContinuityArgs),
    /// Gradient norm at initialization per initializer.
    GradNorm(RunArgs),
    /// Statistics of initial parameters per initializer.
    ParamStats(ParamStatsArgs),
}

#[derive(Debug, Args)]
pub struct ContinuityArgs {
    /// Centre couplings `Jx,Jy,Jz`.
    #[arg(long, default_value = "1,1,1")]
    pub centre: String,
    /// normal | uniform | centre
    #[arg(long, default_value = "normal")]
    pub sampler: String,
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ParamStatsArgs {
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct GatecountArgs {
    /// Qubit range `lo..hi` (inclusive) or a comma list.
    #[arg(long, default_value = "4..9")]
    pub n: String,
    /// Comma-separated layer counts.
    #[arg(long, default_value = "2,4")]
    pub layers: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub run_dir: Option<PathBuf>,
}

/// Parses arguments, runs the command and maps the outcome to an exit code:
/// 0 on success, 2 for usage and configuration errors, 1 otherwise.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenTasks(a) => cmd_gen_tasks(&a),
        Command::Pretrain(a) => cmd_pretrain(&a),
        Command::Adapt(a) => cmd_adapt(&a),
        Command::Embed(a) => cmd_embed(&a),
        Command::Eigensolve(a) => cmd_eigensolve(&a),
        Command::Diag(d) => match d.which {
            Diag::Continuity(a) => cmd_continuity(&a),
            Diag::GradNorm(a) => cmd_grad_norm(&a),
            Diag::ParamStats(a) => cmd_param_stats(&a),
        },
        Command::Gatecount(a) => cmd_gatecount(&a),
    }
}

impl RunArgs {
    fn settings(&self) -> Result<Settings> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let mut put = |k: &str, v: Option<String>| -> Result<()> {
            if let Some(v) = v {
                flags.set(k, v)?;
            }
            Ok(())
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        put("experiment", self.experiment.clone())?;
        put("qubits", self.n.map(|v| v.to_string()))?;
        put("ansatz", self.ansatz.clone())?;
        put("layers", self.layers.map(|v| v.to_string()))?;
        put("seed", self.seed.map(|v| v.to_string()))?;
        put("train", self.train.map(|v| v.to_string()))?;
        put("test", self.test.map(|v| v.to_string()))?;
        put("manifest", path(&self.manifest))?;
        put("hamiltonians", self.hamiltonians.clone())?;
        put("checkpoint", path(&self.checkpoint))?;
        put("init", self.init.clone())?;
        put("uniform_alpha", self.uniform_alpha.map(|v| v.to_string()))?;
        put("gaussian_s", self.gaussian_s.map(|v| v.to_string()))?;
        put("gaussian_layers", self.gaussian_layers.map(|v| v.to_string()))?;
        put("discretization", self.discretization.clone())?;
        put("epochs", self.epochs.map(|v| v.to_string()))?;
        put("pretrain_lr", self.pretrain_lr.map(|v| v.to_string()))?;
        put("batch", self.batch.map(|v| v.to_string()))?;
        put("selection", self.selection.clone())?;
        put("method", self.method.clone())?;
        put("iterations", self.iterations.map(|v| v.to_string()))?;
        put("adapt_lr", self.adapt_lr.map(|v| v.to_string()))?;
        put("stride", self.stride.map(|v| v.to_string()))?;
        put("wall_clock", self.wall_clock.then(|| "true".to_string()))?;
        s.merge(&flags);
        Ok(s)
    }

    fn resolve(&self) -> Result<RunConfig> {
        if let Some(threads) = self.threads {
            // the global pool can only be configured once per process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
        RunConfig::resolve(&self.settings()?)
    }
}

/// Output directory of one command invocation.
struct RunDir {
    path: PathBuf,
}

impl RunDir {
    fn create(command: &str, seed: u64, out: Option<&Path>, exact: Option<&Path>) -> Result<Self> {
        let path = match exact {
            Some(p) => p.to_path_buf(),
            None => {
                let root = out
                    .map(Path::to_path_buf)
                    .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from("runs"));
                let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                let base = root.join(format!("{command}-{stamp}-s{seed}"));
                let mut candidate = base.clone();
                let mut k = 1;
                while candidate.exists() {
                    candidate = PathBuf::from(format!("{}-{k}", base.display()));
                    k += 1;
                }
                candidate
            }
        };
        fs::create_dir_all(&path).map_err(|e| Error::io(&path, e))?;
        Ok(RunDir { path })
    }

    fn for_run(command: &str, args: &RunArgs, cfg: &RunConfig) -> Result<Self> {
        let dir = RunDir::create(command, cfg.seed, args.out.as_deref(), args.run_dir.as_deref())?;
        let mut echo = format!(
            "# qmaml {}\n# command: {command}\n# threads: {}\n",
            env!("CARGO_PKG_VERSION"),
            rayon::current_num_threads()
        );
        echo.push_str(&cfg.to_text());
        dir.write("config.txt", &echo)?;
        Ok(dir)
    }

    fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    fn write(&self, name: &str, contents: &str) -> Result<()> {
        let path = self.file(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))
    }
}

fn lognormal_pool(cfg: &RunConfig) -> Result<Vec<TaskVector>> {
    lognormal_targets(cfg.qubits, &DEFAULT_MU_GRID, &DEFAULT_SIGMA_GRID, cfg.discretization)?
        .into_iter()
        .map(|t| TaskVector::distribution(t.p))
        .collect()
}

/// `count` log-normal targets drawn without replacement from the default grid.
fn sampled_lognormal(cfg: &RunConfig, count: usize) -> Result<Vec<TaskVector>> {
    let pool = lognormal_pool(cfg)?;
    if count > pool.len() {
        return Err(Error::Config(format!("only {} log-normal targets exist", pool.len())));
    }
    let mut rng = component_rng(cfg.seed, "lognormal-test");
    let mut picked = sample(&mut rng, pool.len(), count).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| pool[i].clone()).collect())
}

/// The configured task set: read from the manifest or generated from the seed.
fn task_set(cfg: &RunConfig) -> Result<TaskSet> {
    let set = if let Some(m) = &cfg.manifest {
        load_manifest(m)?
    } else {
        match cfg.experiment {
            Experiment::Heisenberg => {
                sample_heisenberg_split(&HeisenbergSampling::new(cfg.qubits, cfg.seed), cfg.train, cfg.test)?
            }
            Experiment::Molecule => {
                if cfg.hamiltonians.is_empty() {
                    return Err(Error::Config("molecule experiments need a manifest or Hamiltonian files".into()));
                }
                molecule_tasks_from_files(&cfg.hamiltonians, None)?.with_holdout(cfg.test, cfg.seed)?
            }
            Experiment::Embed => {
                let mut tasks: Vec<TaskVector> =
                    random_circuit_targets(cfg.qubits, cfg.train, 5, derive_seed(cfg.seed, "random-targets"))?
                        .into_iter()
                        .map(|t| TaskVector::distribution(t.p))
                        .collect::<Result<_>>()?;
                let mut splits = vec![Split::Train; tasks.len()];
                let test = sampled_lognormal(cfg, cfg.test)?;
                splits.extend(std::iter::repeat_n(Split::Test, test.len()));
                tasks.extend(test);
                let meta = vec![
                    ("generator".to_string(), "random-circuit+lognormal".to_string()),
                    ("seed".to_string(), cfg.seed.to_string()),
                ];
                TaskSet::new(TaskKind::DistributionTarget, cfg.qubits, tasks, splits, meta)?
            }
        }
    };
    if set.n() != cfg.qubits {
        return Err(Error::Config(format!(
            "task set has {} qubits but the run is configured for {}",
            set.n(),
            cfg.qubits
        )));
    }
    Ok(set)
}

fn circuit(cfg: &RunConfig) -> Result<AnsatzCircuit> {
    build_ansatz(cfg.ansatz, cfg.qubits, cfg.layers)
}

fn check_net(net: &LearnerNet, set: &TaskSet, circuit: &AnsatzCircuit) -> Result<()> {
    if net.input_dim() != set.phi_len() {
        return Err(Error::dim("checkpoint input size vs task vector length", set.phi_len(), net.input_dim()));
    }
    if net.output_dim() != circuit.num_params() {
        return Err(Error::dim(
            "checkpoint output size vs circuit parameter count",
            circuit.num_params(),
            net.output_dim(),
        ));
    }
    Ok(())
}

fn cmd_gen_tasks(a: &GenTasksArgs) -> Result<()> {
    let mut settings = a.run.settings()?;
    let experiment = match a.kind {
        GenKind::Heisenberg => "heisenberg",
        GenKind::Molecule => "molecule",
        GenKind::EmbedLognormal | GenKind::EmbedRandom => "embed",
    };
    settings.set("experiment", experiment)?;
    if let Some(count) = a.count {
        settings.set("train", count.to_string())?;
    }
    if a.run.test.is_none() && settings.get("test").is_none() {
        settings.set("test", "0")?;
    }
    let cfg = RunConfig::resolve(&settings)?;
    let dir = RunDir::for_run("gen-tasks", &a.run, &cfg)?;
    let set = match a.kind {
        GenKind::Heisenberg => {
            let spec = HeisenbergSampling::new(cfg.qubits, cfg.seed);
            sample_heisenberg_split(&spec, cfg.train, cfg.test)?
        }
        GenKind::Molecule => {
            if cfg.hamiltonians.is_empty() {
                return Err(Error::Config("--hamiltonians is required for molecule task sets".into()));
            }
            let set = molecule_tasks_from_files(&cfg.hamiltonians, None)?;
            if cfg.test > 0 {
                set.with_holdout(cfg.test, cfg.seed)?
            } else {
                set
            }
        }
        GenKind::EmbedLognormal => {
            let targets = lognormal_targets(cfg.qubits, &DEFAULT_MU_GRID, &DEFAULT_SIGMA_GRID, cfg.discretization)?;
            for t in &targets {
                if let Provenance::LogNormal { mu, sigma } = t.provenance {
                    dir.write(&format!("targets/lognormal_mu{mu}_sigma{sigma}.txt"), &write_target(&t.p))?;
                }
            }
            let tasks = targets.into_iter().map(|t| TaskVector::distribution(t.p)).collect::<Result<_>>()?;
            TaskSet::all_train(TaskKind::DistributionTarget, cfg.qubits, tasks, vec![
                ("generator".into(), "lognormal-grid".into()),
            ])?
        }
        GenKind::EmbedRandom => {
            let targets = random_circuit_targets(cfg.qubits, cfg.train, 5, derive_seed(cfg.seed, "random-targets"))?;
            for (i, t) in targets.iter().enumerate() {
                dir.write(&format!("targets/random_{i:05}.txt"), &write_target(&t.p))?;
            }
            let tasks = targets.into_iter().map(|t| TaskVector::distribution(t.p)).collect::<Result<_>>()?;
            TaskSet::all_train(TaskKind::DistributionTarget, cfg.qubits, tasks, vec![
                ("generator".into(), "random-circuit".into()),
                ("seed".into(), cfg.seed.to_string()),
            ])?
        }
    };
    let manifest = dir.file("tasks.manifest");
    save_manifest(&set, &manifest)?;
    println!("{} tasks ({} train, {} test) -> {}", set.len(), set.train().len(), set.test().len(), manifest.display());
    Ok(())
}

struct Pretrained {
    net: LearnerNet,
    set: TaskSet,
    circuit: AnsatzCircuit,
}

fn pretrain_into(cfg: &RunConfig, dir: &RunDir) -> Result<Pretrained> {
    let set = task_set(cfg)?;
    let circuit = circuit(cfg)?;
    let net = LearnerNet::standard(set.phi_len(), circuit.num_params(), derive_seed(cfg.seed, "learner"))?;
    let train = meta_tasks(&set.train())?;
    let out = pretrain_tasks(&train, &circuit, net, &cfg.pretrain)?;
    dir.write("pretrain.csv", &out.record.to_csv())?;
    save_checkpoint(&out.net, dir.file("learner.ckpt"))?;
    save_manifest(&set, dir.file("tasks.manifest"))?;
    let last = out.record.last().expect("at least one evaluation");
    println!(
        "pretrained {} epochs ({} updates), selected epoch {}: mean cost {:.6}, mean gap {:.6}",
        cfg.pretrain.epochs, out.updates, out.selected_epoch, last.cost, last.gap
    );
    Ok(Pretrained {
        net: out.net,
        set,
        circuit,
    })
}

fn cmd_pretrain(a: &RunArgs) -> Result<()> {
    let cfg = a.resolve()?;
    let dir = RunDir::for_run("pretrain", a, &cfg)?;
    pretrain_into(&cfg, &dir)?;
    println!("{}", dir.path.display());
    Ok(())
}

/// The initializers named in the config; `qmaml` needs a learner.
fn initializers<'a>(cfg: &RunConfig, net: Option<&'a LearnerNet>) -> Result<Vec<Initializer<'a>>> {
    cfg.initializers
        .iter()
        .map(|name| match cfg.baseline(name) {
            Some(b) => Ok(Initializer::Baseline(b)),
            None => net
                .map(Initializer::QMaml)
                .ok_or_else(|| Error::Config("the qmaml initializer needs --checkpoint".into())),
        })
        .collect()
}

fn load_learner(cfg: &RunConfig) -> Result<Option<LearnerNet>> {
    cfg.checkpoint.as_ref().map(load_checkpoint).transpose()
}

/// Held-out tasks, or every task when the set has no test split.
fn evaluation_tasks(set: &TaskSet) -> Result<Vec<MetaTask>> {
    let test = set.test();
    if test.is_empty() {
        meta_tasks(&set.train())
    } else {
        meta_tasks(&test)
    }
}

/// Step-wise mean over tasks sharing one step grid.
fn mean_record(records: &[TrajectoryRecord]) -> TrajectoryRecord {
    let count = records.len() as f64;
    let rows = records[0]
        .rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let sum = |f: fn(&TrajectoryRow) -> f64| records.iter().map(|rec| f(&rec.rows[k])).sum::<f64>() / count;
            TrajectoryRow {
                step: r.step,
                cost: sum(|x| x.cost),
                gap: sum(|x| x.gap),
                grad_norm: sum(|x| x.grad_norm),
                wall_ms: sum(|x| x.wall_ms),
            }
        })
        .collect();
    TrajectoryRecord { rows }
}

fn adapt_into(cfg: &RunConfig, dir: &RunDir, set: &TaskSet, circuit: &AnsatzCircuit, net: Option<&LearnerNet>) -> Result<()> {
    let tasks = evaluation_tasks(set)?;
    let inits = initializers(cfg, net)?;
    let results = compare_initializers(&tasks, circuit, &inits, &cfg.adapt)?;
    let mut summary = String::from("initializer,task,initial_gap,final_gap\n");
    for (init, records) in inits.iter().zip(&results) {
        let name = init.name();
        for (i, rec) in records.iter().enumerate() {
            dir.write(&format!("adapt/{name}_task{i:03}.csv"), &rec.to_csv())?;
            let (first, last) = (rec.rows[0].gap, rec.last().expect("nonempty").gap);
            writeln!(summary, "{name},{i},{first:.15e},{last:.15e}").unwrap();
        }
        let mean = mean_record(records);
        dir.write(&format!("adapt_{name}.csv"), &mean.to_csv())?;
        let (first, last) = (mean.rows[0].gap, mean.last().expect("nonempty").gap);
        println!("{name:>9}: mean gap {first:.6} -> {last:.6} over {} tasks", tasks.len());
    }
    dir.write("adapt_summary.csv", &summary)
}

fn cmd_adapt(a: &RunArgs) -> Result<()> {
    let cfg = a.resolve()?;
    let set = task_set(&cfg)?;
    let circuit = circuit(&cfg)?;
    let net = load_learner(&cfg)?;
    if let Some(net) = &net {
        check_net(net, &set, &circuit)?;
    }
    let dir = RunDir::for_run("adapt", a, &cfg)?;
    adapt_into(&cfg, &dir, &set, &circuit, net.as_ref())?;
    println!("{}", dir.path.display());
    Ok(())
}

fn cmd_embed(a: &RunArgs) -> Result<()> {
    let mut settings = a.settings()?;
    settings.set("experiment", "embed")?;
    if settings.get("test").is_none() {
        settings.set("test", "16")?;
    }
    if let Some(t) = a.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let cfg = RunConfig::resolve(&settings)?;
    let dir = RunDir::for_run("embed", a, &cfg)?;
    let p = pretrain_into(&cfg, &dir)?;
    adapt_into(&cfg, &dir, &p.set, &p.circuit, Some(&p.net))?;
    println!("{}", dir.path.display());
    Ok(())
}

/// Rounds away representation noise below `1e−12` for display.
fn display_value(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn cmd_eigensolve(a: &EigensolveArgs) -> Result<()> {
    let h = load_hamiltonian(&a.file)?;
    if a.k == 0 || a.k > h.dim() {
        return Err(Error::Config(format!("k must lie in [1, {}]", h.dim())));
    }
    let dense = match a.solver {
        SolverChoice::Dense => true,
        SolverChoice::Lanczos => false,
        SolverChoice::Auto => h.n() <= DENSE_MAX_QUBITS.min(10),
    };
    let values = if dense {
        eigensolve_dense(&h)?.eigenvalues
    } else {
        eigensolve_lanczos(
            &h,
            LanczosOptions {
                k: a.k,
                seed: a.seed,
                ..LanczosOptions::default()
            },
        )?
        .eigenvalues
    };
    let dir = RunDir::create("eigensolve", a.seed, a.out.as_deref(), a.run_dir.as_deref())?;
    let mut csv = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().take(a.k).enumerate() {
        println!("{:?}", display_value(*v));
        writeln!(csv, "{i},{v:.16e}").unwrap();
    }
    dir.write(
        "config.txt",
        &format!(
            "# qmaml {}\n# command: eigensolve\nfile={}\nk={}\nsolver={}\nseed={}\n",
            env!("CARGO_PKG_VERSION"),
            a.file.display(),
            a.k,
            if dense { "dense" } else { "lanczos" },
            a.seed
        ),
    )?;
    dir.write("eigenvalues.csv", &csv)
}

fn parse_triple(s: &str) -> Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Config(format!("invalid number \"{x}\" in \"{s}\""))))
        .collect::<Result<_>>()?;
    v.try_into()
        .map_err(|_| Error::Config(format!("expected three comma-separated values, found \"{s}\"")))
}

fn cmd_continuity(a: &ContinuityArgs) -> Result<()> {
    let mut settings = a.run.settings()?;
    if settings.get("qubits").is_none() {
        settings.set("qubits", "4")?;
    }
    let cfg = RunConfig::resolve(&settings)?;
    let centre = parse_triple(&a.centre)?;
    let sampler: Sampler = a.sampler.parse()?;
    let dir = RunDir::for_run("continuity", &a.run, &cfg)?;
    let result = continuity_probe(centre, sampler, a.count, cfg.seed, cfg.qubits)?;
    dir.write("probe.csv", &write_probe_csv(&result))?;
    let show = |c: crate::taskspace::Correlation| c.value().map_or("undefined".to_string(), |v| format!("{v:.6}"));
    let report = format!(
        "pearson(l2 distance, 1 - normalized overlap) = {}\npearson(signed-sum distance, raw overlap) = {}\n",
        show(result.correlation),
        show(result.verbatim_correlation)
    );
    dir.write("correlation.txt", &report)?;
    print!("{report}");
    println!("{}", dir.path.display());
    Ok(())
}

type DiagSetup = (RunConfig, RunDir, Vec<MetaTask>, AnsatzCircuit, Option<LearnerNet>);

fn diag_setup(a: &RunArgs, command: &str) -> Result<DiagSetup> {
    let cfg = a.resolve()?;
    let set = task_set(&cfg)?;
    let circuit = circuit(&cfg)?;
    let net = load_learner(&cfg)?;
    if let Some(net) = &net {
        check_net(net, &set, &circuit)?;
    }
    let tasks = evaluation_tasks(&set)?;
    let dir = RunDir::for_run(command, a, &cfg)?;
    Ok((cfg, dir, tasks, circuit, net))
}

fn cmd_grad_norm(a: &RunArgs) -> Result<()> {
    let (cfg, dir, tasks, circuit, net) = diag_setup(a, "grad-norm")?;
    let mut csv = String::from("initializer,task,grad_norm\n");
    for init in initializers(&cfg, net.as_ref())? {
        let sweep = gradient_norm_sweep(&init, &tasks, &circuit, cfg.adapt.method, cfg.adapt.seed)?;
        for (i, g) in sweep.per_task.iter().enumerate() {
            writeln!(csv, "{},{i},{g:.15e}", init.name()).unwrap();
        }
        writeln!(csv, "{},mean,{:.15e}", init.name(), sweep.mean).unwrap();
        println!("{:>9}: mean gradient norm {:.6e}", init.name(), sweep.mean);
    }
    dir.write("grad_norm.csv", &csv)?;
    println!("{}", dir.path.display());
    Ok(())
}

fn cmd_param_stats(a: &ParamStatsArgs) -> Result<()> {
    let (cfg, dir, tasks, circuit, net) = diag_setup(&a.run, "param-stats")?;
    let mut sets = Vec::new();
    for init in initializers(&cfg, net.as_ref())? {
        let mut values = Vec::with_capacity(tasks.len() * circuit.num_params());
        for (i, task) in tasks.iter().enumerate() {
            values.extend(init.theta(&task.phi, circuit.num_params(), task_seed(cfg.adapt.seed, i))?);
        }
        sets.push((init.name().to_string(), values));
    }
    let stats = parameter_statistics(&sets, a.bins, None)?;
    for s in &stats {
        println!("{:>9}: mean {:.6}, variance {:.6}", s.initializer, s.mean, s.variance);
    }
    dir.write("param_stats.csv", &write_statistics_csv(&stats))?;
    println!("{}", dir.path.display());
    Ok(())
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("invalid list or range \"{s}\""));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn cmd_gatecount(a: &GatecountArgs) -> Result<()> {
    let ns = parse_usize_list(&a.n)?;
    let layers = parse_usize_list(&a.layers)?;
    let csv = write_gate_budget_csv(&gate_budget_report(&ns, &layers)?);
    let dir = RunDir::create("gatecount", 0, a.out.as_deref(), a.run_dir.as_deref())?;
    dir.write(
        "config.txt",
        &format!(
            "# qmaml {}\n# command: gatecount\nn={}\nlayers={}\n",
            env!("CARGO_PKG_VERSION"),
            a.n,
            a.layers
        ),
    )?;
    dir.write("gatecount.csv", &csv)?;
    print!("{csv}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_usize_list("4..9").unwrap(), vec![4, 5, 6, 7, 8, 9]);
        assert_eq!(parse_usize_list("2,4").unwrap(), vec![2, 4]);
        assert!(parse_usize_list("9..4").is_err());
        assert_eq!(parse_triple("1, 1,1").unwrap(), [1.0; 3]);
        assert!(parse_triple("1,1").is_err());
    }

    #[test]
    fn display_rounding() {
        assert_eq!(format!("{:?}", display_value(-0.9999999999999998)), "-1.0");
        assert_eq!(format!("{:?}", display_value(-1e-17)), "0.0");
    }

    #[test]
    fn cli_parses() {
        let cli = Cli::try_parse_from(["qmaml", "adapt", "--n", "4", "--init", "qmaml,zero"]).unwrap();
        assert!(matches!(cli.command, Command::Adapt(RunArgs { n: Some(4), .. })));
        assert!(Cli::try_parse_from(["qmaml", "gen-tasks", "--n", "4"]).is_err());
    }
}
