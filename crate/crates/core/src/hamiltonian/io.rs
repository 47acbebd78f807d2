//! Plain-text Hamiltonian files.
//!
//! ```text
//! # comment
//! 2
//! -1.0 XX
//! 0.5 ZI
//! ```
//!
//! The first non-empty line holds the qubit count; every further non-empty
//! line is `<coefficient> <pauli-string>`. `#` starts a comment anywhere on a
//! line. Coefficients are written with 17 significant digits so that a
//! save/load round trip is bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{PauliHamiltonian, PauliString};
use crate::error::{Error, Result};

pub fn parse_hamiltonian(text: &str) -> Result<PauliHamiltonian> {
    let mut n: Option<usize> = None;
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let Some(qubits) = n else {
            let q = line
                .parse::<usize>()
                .map_err(|_| parse_err(format!("expected qubit count, found \"{line}\"")))?;
            if q == 0 || q > super::MAX_QUBITS {
                return Err(parse_err(format!("qubit count {q} out of range")));
            }
            n = Some(q);
            continue;
        };
        let mut fields = line.split_whitespace();
        let (Some(c), Some(s), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(format!(
                "expected `<coefficient> <pauli-string>`, found \"{line}\""
            )));
        };
        let coeff: f64 = c
            .parse()
            .map_err(|_| parse_err(format!("invalid coefficient \"{c}\"")))?;
        if !coeff.is_finite() {
            return Err(parse_err(format!("non-finite coefficient \"{c}\"")));
        }
        if let Some(bad) = s.chars().find(|ch| !matches!(ch, 'I' | 'X' | 'Y' | 'Z')) {
            return Err(parse_err(format!(
                "invalid Pauli character '{bad}' in \"{s}\""
            )));
        }
        if s.chars().count() != qubits {
            return Err(Error::Format(format!(
                "line {line_no}: pauli string \"{s}\" has length {} but the file declares {qubits} qubits",
                s.chars().count()
            )));
        }
        let p: PauliString = s.parse()?;
        terms.push((coeff, p));
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "missing qubit count".into(),
    })?;
    PauliHamiltonian::from_terms(n, terms)
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<PauliHamiltonian> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_hamiltonian(&text)
}

/// Canonical text form.
pub fn write_hamiltonian(h: &PauliHamiltonian) -> String {
    let mut out = format!("{}\n", h.n());
    for (c, p) in h.terms() {
        writeln!(out, "{c:.16e} {p}").unwrap();
    }
    out
}

pub fn save_hamiltonian(h: &PauliHamiltonian, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_hamiltonian(h)).map_err(|e| Error::io(path, e))
}
