//! Pauli-string Hamiltonians: construction, ingestion, fermion mapping and
//! exact solvers.

mod eigen;
mod fermion;
mod io;
mod pauli;

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use eigen::{
    eigensolve_dense, eigensolve_lanczos, ground_energy, EigenDecomposition, LanczosOptions,
    DENSE_MAX_QUBITS,
};
pub use fermion::{jordan_wigner, FermionTerm, Ladder};
pub use io::{load_hamiltonian, parse_hamiltonian, save_hamiltonian, write_hamiltonian};
pub use pauli::{Pauli, PauliString, MAX_QUBITS};

/// Coefficients below this magnitude are dropped after simplification.
pub const COEFF_EPS: f64 = 1e-12;

/// Amplitude count above which matvec/expectation fan out over rayon.
const PAR_THRESHOLD: usize = 1 << 14;

/// Real-weighted sum of Pauli strings on `n` qubits.
///
/// Terms are kept in first-occurrence order with duplicates merged, so the
/// term list is canonical for a given input sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliHamiltonian {
    /// Builds a Hamiltonian, merging duplicate strings and dropping
    /// coefficients with magnitude below [`COEFF_EPS`].
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidSystem(format!(
                "qubit count must be in 1..={MAX_QUBITS}, got {n}"
            )));
        }
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        let mut merged: Vec<(f64, PauliString)> = Vec::new();
        for (c, p) in terms {
            if !c.is_finite() {
                return Err(Error::NonFinite(format!("coefficient of {p} is {c}")));
            }
            if p.n() != n {
                return Err(Error::Format(format!(
                    "pauli string {p} has length {} but the system has {n} qubits",
                    p.n()
                )));
            }
            match index.get(&p) {
                Some(&i) => merged[i].0 += c,
                None => {
                    index.insert(p, merged.len());
                    merged.push((c, p));
                }
            }
        }
        merged.retain(|(c, _)| c.abs() >= COEFF_EPS);
        Ok(PauliHamiltonian { n, terms: merged })
    }

    /// Convenience constructor from `(coefficient, "XYZ…")` pairs.
    pub fn from_labels(n: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|&(c, s)| Ok((c, s.parse::<PauliString>()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, parsed)
    }

    /// `c · I` on `n` qubits.
    pub fn identity(n: usize, c: f64) -> Result<Self> {
        Self::from_terms(n, [(c, PauliString::identity(n)?)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|(c, _)| *c).collect()
    }

    /// Largest Pauli weight among the terms.
    pub fn max_weight(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.weight()).max().unwrap_or(0)
    }

    /// `Σ|c|`, an upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::dim("hamiltonian state length", self.dim(), len));
        }
        Ok(())
    }

    /// Matrix-free `out = H ψ`.
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        self.check_len(psi.len())?;
        self.check_len(out.len())?;
        let row = |b: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, p) in &self.terms {
                let src = b ^ p.x_mask() as usize;
                acc += p.basis_phase(src) * psi[src] * *c;
            }
            acc
        };
        if psi.len() >= PAR_THRESHOLD {
            out.par_iter_mut().enumerate().for_each(|(b, o)| *o = row(b));
        } else {
            out.iter_mut().enumerate().for_each(|(b, o)| *o = row(b));
        }
        Ok(())
    }

    pub fn apply(&self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        self.apply_into(psi, &mut out)?;
        Ok(out)
    }

    /// Complex `⟨ψ|H|ψ⟩`; the imaginary part vanishes up to rounding.
    pub fn expectation_complex(&self, psi: &[Complex64]) -> Result<Complex64> {
        self.check_len(psi.len())?;
        let term = |(c, p): &(f64, PauliString)| -> Complex64 {
            let x = p.x_mask() as usize;
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, a) in psi.iter().enumerate() {
                acc += psi[b ^ x].conj() * p.basis_phase(b) * a;
            }
            acc * *c
        };
        let total = if psi.len() >= PAR_THRESHOLD {
            self.terms.par_iter().map(term).collect::<Vec<_>>().into_iter().sum()
        } else {
            self.terms.iter().map(term).sum()
        };
        Ok(total)
    }

    /// `⟨ψ|H|ψ⟩` for a normalized state.
    pub fn expectation(&self, psi: &[Complex64]) -> Result<f64> {
        Ok(self.expectation_complex(psi)?.re)
    }

    /// Dense `2ⁿ × 2ⁿ` realization.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (c, p) in &self.terms {
            let x = p.x_mask() as usize;
            for b in 0..dim {
                m[(b ^ x, b)] += p.basis_phase(b) * *c;
            }
        }
        m
    }

    /// Hamiltonian with the term list permuted; used to check order invariance.
    pub fn with_term_order(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.terms.len() {
            return Err(Error::dim("term permutation", self.terms.len(), order.len()));
        }
        Self::from_terms(self.n, order.iter().map(|&i| self.terms[i]))
    }
}

impl fmt::Display for PauliHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{p}")?;
        }
        Ok(())
    }
}

/// Open-chain Heisenberg XYZ model
/// `-Σ_{k<n-1} (Jx X_k X_{k+1} + Jy Y_k Y_{k+1} + Jz Z_k Z_{k+1} + h Z_k)`.
///
/// Terms are emitted bond by bond (XX, YY, ZZ, then the field on the bond's
/// first site). Zero couplings produce no term.
pub fn heisenberg_xyz(n: usize, j: [f64; 3], h: f64) -> Result<PauliHamiltonian> {
    if n < 2 {
        return Err(Error::InvalidSystem(format!(
            "Heisenberg chain needs at least 2 qubits, got {n}"
        )));
    }
    let mut terms = Vec::with_capacity(4 * (n - 1));
    for k in 0..n - 1 {
        for (coupling, p) in j.iter().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
            terms.push((-coupling, PauliString::from_factors(n, &[(k, p), (k + 1, p)])?));
        }
        if h != 0.0 {
            terms.push((-h, PauliString::single(n, k, Pauli::Z)?));
        }
    }
    PauliHamiltonian::from_terms(n, terms)
}
