//! Task-set manifests.
//!
//! ```text
//! QMAML-TASKSET v1
//! kind=heisenberg-J
//! n=6
//! phi_len=3
//! seed=7
//! ...other key=value metadata...
//! task train -1.0 2.3 0.4
//! task test 0.1 0.2 0.3 @ hamiltonians/task_0007.txt
//! ```
//!
//! `@ path` points at the task's Hamiltonian file, relative to the manifest.
//! Heisenberg tasks without a file are rebuilt from their couplings and
//! distribution tasks from `φ` itself.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Split, TaskKind, TaskPayload, TaskSet, TaskVector};
use crate::error::{Error, Result};
use crate::hamiltonian::{heisenberg_xyz, load_hamiltonian};

pub const MANIFEST_HEADER: &str = "QMAML-TASKSET v1";

/// Renders the manifest. Task sources are written relative to `base` when
/// possible.
pub fn write_manifest(set: &TaskSet, base: Option<&Path>) -> String {
    let mut out = format!("{MANIFEST_HEADER}\n");
    writeln!(out, "kind={}", set.kind()).unwrap();
    writeln!(out, "n={}", set.n()).unwrap();
    writeln!(out, "phi_len={}", set.phi_len()).unwrap();
    for (k, v) in set.metadata() {
        if !matches!(k.as_str(), "kind" | "n" | "phi_len") {
            writeln!(out, "{k}={v}").unwrap();
        }
    }
    for (task, split) in set.tasks().iter().zip(set.splits()) {
        write!(out, "task {}", split.as_str()).unwrap();
        for x in &task.phi {
            write!(out, " {x:.16e}").unwrap();
        }
        if let Some(src) = &task.source {
            let shown = base
                .and_then(|b| src.strip_prefix(b).ok())
                .unwrap_or(src);
            write!(out, " @ {}", shown.display()).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn save_manifest(set: &TaskSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = write_manifest(set, path.parent());
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<TaskSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(&text, path.parent())
}

pub fn parse_manifest(text: &str, base: Option<&Path>) -> Result<TaskSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    match lines.next() {
        Some((_, h)) if h.trim() == MANIFEST_HEADER => {}
        Some((_, h)) => {
            return Err(Error::Version {
                expected: MANIFEST_HEADER.into(),
                found: h.trim().into(),
            })
        }
        None => return Err(Error::Format("empty manifest".into())),
    }
    let mut metadata: Vec<(String, String)> = Vec::new();
    let mut rows: Vec<(usize, Split, Vec<f64>, Option<PathBuf>)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        if let Some(rest) = line.strip_prefix("task ") {
            let (values, source) = match rest.split_once(" @ ") {
                Some((v, s)) => (v, Some(s.trim())),
                None => (rest, None),
            };
            let mut fields = values.split_whitespace();
            let split = match fields.next() {
                Some("train") => Split::Train,
                Some("test") => Split::Test,
                other => return Err(err(format!("unknown split {:?}", other.unwrap_or("")))),
            };
            let phi = fields
                .map(|f| f.parse::<f64>().map_err(|_| err(format!("invalid value \"{f}\""))))
                .collect::<Result<Vec<_>>>()?;
            let source = source.map(|s| match base {
                Some(b) if Path::new(s).is_relative() => b.join(s),
                _ => PathBuf::from(s),
            });
            rows.push((line_no, split, phi, source));
        } else if let Some((k, v)) = line.split_once('=') {
            metadata.push((k.trim().to_string(), v.trim().to_string()));
        } else {
            return Err(err(format!("unrecognized line \"{line}\"")));
        }
    }
    let get = |key: &str| -> Result<&str> {
        metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Format(format!("manifest is missing `{key}`")))
    };
    let kind: TaskKind = get("kind")?.parse()?;
    let n: usize = get("n")?
        .parse()
        .map_err(|_| Error::Format("manifest `n` is not an integer".into()))?;
    let phi_len: usize = get("phi_len")?
        .parse()
        .map_err(|_| Error::Format("manifest `phi_len` is not an integer".into()))?;
    let field: f64 = metadata
        .iter()
        .find(|(k, _)| k == "field")
        .map(|(_, v)| v.parse().unwrap_or(0.0))
        .unwrap_or(0.0);

    let mut tasks = Vec::with_capacity(rows.len());
    let mut splits = Vec::with_capacity(rows.len());
    for (line, split, phi, source) in rows {
        if phi.len() != phi_len {
            return Err(Error::Parse {
                line,
                message: format!("expected {phi_len} values, found {}", phi.len()),
            });
        }
        let payload = match (kind, &source) {
            (TaskKind::DistributionTarget, _) => TaskPayload::Distribution(phi.clone()),
            (_, Some(path)) => {
                let h = load_hamiltonian(path)?;
                if kind == TaskKind::MoleculeC {
                    let mut c = h.coefficients();
                    c.resize(phi_len.max(c.len()), 0.0);
                    if c != phi {
                        return Err(Error::Parse {
                            line,
                            message: format!("{} does not match its task vector", path.display()),
                        });
                    }
                }
                TaskPayload::Hamiltonian(h)
            }
            (TaskKind::HeisenbergJ, None) => {
                TaskPayload::Hamiltonian(heisenberg_xyz(n, [phi[0], phi[1], phi[2]], field)?)
            }
            (TaskKind::MoleculeC, None) => {
                return Err(Error::Parse {
                    line,
                    message: "molecule task without a Hamiltonian file".into(),
                })
            }
        };
        tasks.push(TaskVector {
            phi,
            kind,
            payload,
            source,
        });
        splits.push(split);
    }
    metadata.retain(|(k, _)| !matches!(k.as_str(), "kind" | "n" | "phi_len"));
    TaskSet::new(kind, n, tasks, splits, metadata)
}
