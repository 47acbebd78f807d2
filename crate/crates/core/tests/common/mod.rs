//! Dense reference implementations built from Kronecker products, written
//! independently of the library's bit-mask kernels.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use qmaml::hamiltonian::PauliHamiltonian;
use qmaml::simulator::{AnsatzCircuit, Gate};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli_matrix(p: char) -> DMatrix<C> {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        'I' => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        'X' => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        'Y' => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        other => panic!("not a Pauli: {other}"),
    }
}

pub fn kron(a: &DMatrix<C>, b: &DMatrix<C>) -> DMatrix<C> {
    a.kronecker(b)
}

/// Character `k` of the label acts on qubit `k`, the least significant bit
/// of the basis index, so the Kronecker product runs from the last character.
pub fn dense_pauli(label: &str) -> DMatrix<C> {
    label
        .chars()
        .rev()
        .map(pauli_matrix)
        .reduce(|acc, m| kron(&acc, &m))
        .expect("nonempty label")
}

pub fn dense_hamiltonian(n: usize, terms: &[(f64, String)]) -> DMatrix<C> {
    let mut h = DMatrix::zeros(1 << n, 1 << n);
    for (coef, label) in terms {
        h += dense_pauli(label) * c(*coef, 0.0);
    }
    h
}

pub fn labels_of(h: &PauliHamiltonian) -> Vec<(f64, String)> {
    h.terms().iter().map(|(c, p)| (*c, p.to_string())).collect()
}

/// `u` acting on `qubit` of an `n`-qubit register.
pub fn embed(n: usize, qubit: usize, u: &DMatrix<C>) -> DMatrix<C> {
    let mut m = DMatrix::identity(1, 1);
    for q in (0..n).rev() {
        let factor = if q == qubit { u.clone() } else { DMatrix::identity(2, 2) };
        m = kron(&m, &factor);
    }
    m
}

fn rot(p: &DMatrix<C>, theta: f64) -> DMatrix<C> {
    let dim = p.nrows();
    DMatrix::<C>::identity(dim, dim) * c((theta / 2.0).cos(), 0.0) - p * c(0.0, (theta / 2.0).sin())
}

pub fn gate_unitary(n: usize, gate: &Gate, theta: &[f64]) -> DMatrix<C> {
    let single = |q: usize, p: char, t: f64| rot(&embed(n, q, &pauli_matrix(p)), t);
    let pair = |[a, b]: [usize; 2], p: char, t: f64| {
        rot(&(embed(n, a, &pauli_matrix(p)) * embed(n, b, &pauli_matrix(p))), t)
    };
    let proj = |q: usize, bit: usize| {
        let mut m = DMatrix::zeros(2, 2);
        m[(bit, bit)] = c(1.0, 0.0);
        embed(n, q, &m)
    };
    match *gate {
        Gate::Rx { qubit, slot } => single(qubit, 'X', theta[slot]),
        Gate::Ry { qubit, slot } => single(qubit, 'Y', theta[slot]),
        Gate::Rz { qubit, slot } => single(qubit, 'Z', theta[slot]),
        Gate::Rot { qubit, slots: [a, b, g] } => {
            single(qubit, 'Z', theta[g]) * single(qubit, 'Y', theta[b]) * single(qubit, 'Z', theta[a])
        }
        Gate::IsingXX { qubits, slot } => pair(qubits, 'X', theta[slot]),
        Gate::IsingYY { qubits, slot } => pair(qubits, 'Y', theta[slot]),
        Gate::IsingZZ { qubits, slot } => pair(qubits, 'Z', theta[slot]),
        Gate::Cnot { control, target } => proj(control, 0) + proj(control, 1) * embed(n, target, &pauli_matrix('X')),
        Gate::Cz { qubits: [a, b] } => {
            DMatrix::identity(1 << n, 1 << n) - proj(a, 1) * proj(b, 1) * c(2.0, 0.0)
        }
    }
}

pub fn dense_state(circuit: &AnsatzCircuit, theta: &[f64]) -> DVector<C> {
    let n = circuit.n();
    let mut psi = DVector::zeros(1 << n);
    psi[0] = c(1.0, 0.0);
    for g in circuit.gates() {
        psi = gate_unitary(n, g, theta) * psi;
    }
    psi
}

pub fn dense_expectation(circuit: &AnsatzCircuit, theta: &[f64], h: &DMatrix<C>) -> f64 {
    let psi = dense_state(circuit, theta);
    (psi.adjoint() * h * &psi)[(0, 0)].re
}

/// Random Hamiltonian with `terms` distinct random non-identity strings and
/// coefficients uniform in `[−1, 1]`.
pub fn random_hamiltonian(n: usize, terms: usize, rng: &mut impl Rng) -> PauliHamiltonian {
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < terms {
        let label: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
        if label.chars().any(|ch| ch != 'I') {
            seen.insert(label);
        }
    }
    let owned: Vec<(f64, String)> = seen.into_iter().map(|l| (rng.random_range(-1.0..1.0), l)).collect();
    let borrowed: Vec<(f64, &str)> = owned.iter().map(|(c, l)| (*c, l.as_str())).collect();
    PauliHamiltonian::from_labels(n, &borrowed).unwrap()
}

pub fn random_angles(count: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..count)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}

/// Central differences with step `h`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let plus = f(&y);
            y[i] = x[i] - h;
            let minus = f(&y);
            y[i] = x[i];
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

/// `|a − b| ≤ max(rel · max(|a|, |b|), abs)`.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= (rel * a.abs().max(b.abs())).max(abs)
}

pub fn max_abs_diff(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
