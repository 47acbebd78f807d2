//! Statevector simulation of parameterized circuits.

mod circuit;
mod state;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;

pub use circuit::{
    build_ansatz, build_simplified_two_design, build_strongly_entangling, build_xyz_ansatz,
    default_entangling_range, gate_count, mottonen_gate_count, AnsatzCircuit, AnsatzFamily, Gate,
};
use circuit::Op;
pub use state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientMethod {
    /// One forward and one backward sweep.
    #[default]
    Adjoint,
    /// Two shifted evaluations per parameter, shift ±π/2.
    ParameterShift,
}

impl std::str::FromStr for GradientMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjoint" => Ok(GradientMethod::Adjoint),
            "parameter-shift" | "shift" => Ok(GradientMethod::ParameterShift),
            other => Err(Error::Config(format!("unknown gradient method \"{other}\""))),
        }
    }
}

impl std::fmt::Display for GradientMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GradientMethod::Adjoint => "adjoint",
            GradientMethod::ParameterShift => "parameter-shift",
        })
    }
}

fn apply_op(state: &mut StateVector, op: &Op, theta: &[f64], inverse: bool) {
    match *op {
        Op::Rotation { generator, slot } => {
            let angle = if inverse { -theta[slot] } else { theta[slot] };
            state.rotate(&generator, angle);
        }
        Op::Cnot { control, target } => state.cnot(control, target),
        Op::Cz { a, b } => state.cz(a, b),
    }
}

/// `g(θ)|initial⟩`, starting from `|0…0⟩` when `initial` is `None`.
pub fn run(circuit: &AnsatzCircuit, theta: &[f64], initial: Option<&StateVector>) -> Result<StateVector> {
    circuit.check_params(theta)?;
    let mut state = match initial {
        Some(s) if s.n() != circuit.n() => {
            return Err(Error::dim("initial state qubits", circuit.n(), s.n()))
        }
        Some(s) => s.clone(),
        None => StateVector::zero(circuit.n()),
    };
    for op in circuit.ops() {
        apply_op(&mut state, op, theta, false);
    }
    Ok(state)
}

fn check_observable(circuit: &AnsatzCircuit, h: &PauliHamiltonian) -> Result<()> {
    if circuit.n() != h.n() {
        return Err(Error::dim("hamiltonian qubits", circuit.n(), h.n()));
    }
    Ok(())
}

/// `⟨ψ(θ)|H|ψ(θ)⟩`
pub fn expectation(circuit: &AnsatzCircuit, theta: &[f64], h: &PauliHamiltonian) -> Result<f64> {
    check_observable(circuit, h)?;
    let psi = run(circuit, theta, None)?;
    h.expectation(psi.amplitudes())
}

/// Squared amplitude moduli of `g(θ)|0⟩`.
pub fn measure_distribution(circuit: &AnsatzCircuit, theta: &[f64]) -> Result<Vec<f64>> {
    Ok(run(circuit, theta, None)?.probabilities())
}

/// Reverse-mode gradient of a cost `C(ψ)` of the final state.
///
/// `cost_and_costate` receives `ψ(θ)` and returns `C` together with the
/// co-state `λ = ∂C/∂ψ*` (for `C = ⟨ψ|H|ψ⟩` that is `H|ψ⟩`). With
/// `U_j = exp(−iθ_j/2 · G_j)` the derivative is `dC/dθ_j = Im⟨λ_j|G_j|ψ_j⟩`.
pub fn adjoint_gradient<F>(circuit: &AnsatzCircuit, theta: &[f64], cost_and_costate: F) -> Result<(f64, Vec<f64>)>
where
    F: FnOnce(&StateVector) -> Result<(f64, Vec<Complex64>)>,
{
    let mut phi = run(circuit, theta, None)?;
    let (cost, lambda) = cost_and_costate(&phi)?;
    let mut lambda = StateVector::from_amplitudes(lambda)?;
    if lambda.n() != phi.n() {
        return Err(Error::dim("co-state qubits", phi.n(), lambda.n()));
    }
    let mut grad = vec![0.0; circuit.num_params()];
    for op in circuit.ops().iter().rev() {
        if let Op::Rotation { generator, slot } = op {
            let g_phi = phi.apply_pauli(generator);
            grad[*slot] = lambda.inner(&g_phi).im;
        }
        apply_op(&mut phi, op, theta, true);
        apply_op(&mut lambda, op, theta, true);
    }
    Ok((cost, grad))
}

/// Energy and its adjoint gradient in one sweep.
pub fn energy_and_gradient(circuit: &AnsatzCircuit, theta: &[f64], h: &PauliHamiltonian) -> Result<(f64, Vec<f64>)> {
    check_observable(circuit, h)?;
    adjoint_gradient(circuit, theta, |psi| {
        let h_psi = h.apply(psi.amplitudes())?;
        let e: Complex64 = psi
            .amplitudes()
            .iter()
            .zip(&h_psi)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok((e.re, h_psi))
    })
}

fn parameter_shift(circuit: &AnsatzCircuit, theta: &[f64], h: &PauliHamiltonian) -> Result<Vec<f64>> {
    let shift = std::f64::consts::FRAC_PI_2;
    let mut shifted = theta.to_vec();
    (0..theta.len())
        .map(|j| {
            shifted[j] = theta[j] + shift;
            let plus = expectation(circuit, &shifted, h)?;
            shifted[j] = theta[j] - shift;
            let minus = expectation(circuit, &shifted, h)?;
            shifted[j] = theta[j];
            Ok((plus - minus) / 2.0)
        })
        .collect()
}

/// `∇_θ ⟨ψ(θ)|H|ψ(θ)⟩`.
pub fn gradient(
    circuit: &AnsatzCircuit,
    theta: &[f64],
    h: &PauliHamiltonian,
    method: GradientMethod,
) -> Result<Vec<f64>> {
    check_observable(circuit, h)?;
    circuit.check_params(theta)?;
    match method {
        GradientMethod::Adjoint => Ok(energy_and_gradient(circuit, theta, h)?.1),
        GradientMethod::ParameterShift => parameter_shift(circuit, theta, h),
    }
}

/// Energy and gradient with the chosen method.
pub fn energy_and_gradient_with(
    circuit: &AnsatzCircuit,
    theta: &[f64],
    h: &PauliHamiltonian,
    method: GradientMethod,
) -> Result<(f64, Vec<f64>)> {
    match method {
        GradientMethod::Adjoint => energy_and_gradient(circuit, theta, h),
        GradientMethod::ParameterShift => {
            let e = expectation(circuit, theta, h)?;
            Ok((e, parameter_shift(circuit, theta, h)?))
        }
    }
}
