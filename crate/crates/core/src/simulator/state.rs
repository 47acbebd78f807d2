use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliString;

/// Amplitudes of an `n`-qubit pure state; basis index bit `k` is qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Length(format!(
                "state length {len} is not a power of two"
            )));
        }
        Ok(StateVector {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `exp(−iθ/2 · P)` for a Pauli string `P`.
    pub(crate) fn rotate(&mut self, p: &PauliString, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        let x = p.x_mask() as usize;
        let minus_i_sin = Complex64::new(0.0, -s);
        if x == 0 {
            for (b, a) in self.amps.iter_mut().enumerate() {
                *a *= c + minus_i_sin * p.basis_phase(b);
            }
            return;
        }
        let low = x & x.wrapping_neg();
        for b in 0..self.amps.len() {
            if b & low != 0 {
                continue;
            }
            let partner = b ^ x;
            let a0 = self.amps[b];
            let a1 = self.amps[partner];
            // P|partner⟩ = phase(partner)|b⟩ and P|b⟩ = phase(b)|partner⟩
            self.amps[b] = a0 * c + minus_i_sin * p.basis_phase(partner) * a1;
            self.amps[partner] = a1 * c + minus_i_sin * p.basis_phase(b) * a0;
        }
    }

    pub(crate) fn cnot(&mut self, control: usize, target: usize) {
        let cm = 1usize << control;
        let tm = 1usize << target;
        for b in 0..self.amps.len() {
            if b & cm != 0 && b & tm == 0 {
                self.amps.swap(b, b | tm);
            }
        }
    }

    pub(crate) fn cz(&mut self, a: usize, b: usize) {
        let m = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m == m {
                *amp = -*amp;
            }
        }
    }

    /// Applies a Pauli string (no rotation).
    pub(crate) fn apply_pauli(&self, p: &PauliString) -> StateVector {
        let x = p.x_mask() as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            out[b ^ x] = p.basis_phase(b) * a;
        }
        StateVector { n: self.n, amps: out }
    }
}
