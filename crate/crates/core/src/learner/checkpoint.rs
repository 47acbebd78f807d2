//! Versioned text checkpoints.
//!
//! ```text
//! QMAML-LEARNER v1
//! layers 3 256 256 45
//! hidden leaky-relu
//! output tanh-pi
//! w0 256x3 <768 values>
//! b0 256 <256 values>
//! ...
//! ```
//!
//! Values are row-major with 17 significant digits, which round-trips every
//! `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Dense, LearnerNet};
use crate::error::{Error, Result};

pub const CHECKPOINT_HEADER: &str = "QMAML-LEARNER v1";
const MAGIC: &str = "QMAML-LEARNER";

pub fn write_checkpoint(net: &LearnerNet) -> String {
    let mut out = String::new();
    writeln!(out, "{CHECKPOINT_HEADER}").unwrap();
    let sizes: Vec<String> = net.sizes().iter().map(usize::to_string).collect();
    writeln!(out, "layers {}", sizes.join(" ")).unwrap();
    writeln!(out, "hidden {}", net.hidden()).unwrap();
    writeln!(out, "output {}", net.output_scaling()).unwrap();
    for (i, layer) in net.layers().iter().enumerate() {
        write!(out, "w{i} {}x{}", layer.outputs, layer.inputs).unwrap();
        for w in &layer.weight {
            write!(out, " {w:.16e}").unwrap();
        }
        out.push('\n');
        write!(out, "b{i} {}", layer.outputs).unwrap();
        for b in &layer.bias {
            write!(out, " {b:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn save_checkpoint(net: &LearnerNet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_checkpoint(net)).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<LearnerNet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_checkpoint(&text)
}

fn keyed<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, Vec<&'a str>)> {
    let (idx, line) = line.ok_or_else(|| Error::Format(format!("checkpoint ends before `{key}`")))?;
    let mut fields = line.split_whitespace();
    match fields.next() {
        Some(k) if k == key => Ok((idx + 1, fields.collect())),
        other => Err(Error::Parse {
            line: idx + 1,
            message: format!("expected `{key}`, found `{}`", other.unwrap_or("")),
        }),
    }
}

fn parse_values(line_no: usize, fields: &[&str], expected: usize) -> Result<Vec<f64>> {
    if fields.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {expected} values, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid value \"{f}\""),
            })
        })
        .collect()
}

pub fn parse_checkpoint(text: &str) -> Result<LearnerNet> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Format("empty checkpoint".into()))?;
    let header = header.trim();
    if header != CHECKPOINT_HEADER {
        let found = header.strip_prefix(MAGIC).map(str::trim).unwrap_or(header);
        return Err(Error::Version {
            expected: CHECKPOINT_HEADER.into(),
            found: found.into(),
        });
    }
    let (line_no, size_fields) = keyed(lines.next(), "layers")?;
    let sizes = size_fields
        .iter()
        .map(|s| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid layer size \"{s}\""),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if sizes.len() < 2 {
        return Err(Error::Parse {
            line: line_no,
            message: "need at least two layer sizes".into(),
        });
    }
    let (_, hidden) = keyed(lines.next(), "hidden")?;
    let hidden = hidden.first().copied().unwrap_or("").parse()?;
    let (_, output) = keyed(lines.next(), "output")?;
    let output = output.first().copied().unwrap_or("").parse()?;

    let mut layers = Vec::with_capacity(sizes.len() - 1);
    for (i, w) in sizes.windows(2).enumerate() {
        let (inputs, outputs) = (w[0], w[1]);
        let (ln, fields) = keyed(lines.next(), &format!("w{i}"))?;
        let shape = format!("{outputs}x{inputs}");
        if fields.first() != Some(&shape.as_str()) {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected shape {shape}, found {}", fields.first().unwrap_or(&"")),
            });
        }
        let weight = parse_values(ln, &fields[1..], inputs * outputs)?;
        let (ln, fields) = keyed(lines.next(), &format!("b{i}"))?;
        if fields.first() != Some(&outputs.to_string().as_str()) {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected shape {outputs}"),
            });
        }
        let bias = parse_values(ln, &fields[1..], outputs)?;
        layers.push(Dense {
            inputs,
            outputs,
            weight,
            bias,
        });
    }
    if let Some((idx, _)) = lines.next() {
        return Err(Error::Parse {
            line: idx + 1,
            message: "trailing content after the last tensor".into(),
        });
    }
    LearnerNet::from_layers(layers, hidden, output)
}
