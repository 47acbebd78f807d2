//! Jordan-Wigner mapping of fermionic ladder-operator products onto Pauli
//! strings.
//!
//! Mode `p` maps to qubit `p`:
//!
//! ```text
//! c_p† ↦ Z_0 ⋯ Z_{p-1} (X_p − iY_p)/2
//! c_p  ↦ Z_0 ⋯ Z_{p-1} (X_p + iY_p)/2
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{PauliHamiltonian, PauliString, COEFF_EPS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// `coefficient · Π factors`, factors multiplied left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coefficient: f64,
    pub factors: Vec<(usize, Ladder)>,
}

impl FermionTerm {
    pub fn new(coefficient: f64, factors: Vec<(usize, Ladder)>) -> Self {
        FermionTerm {
            coefficient,
            factors,
        }
    }

    pub fn identity(coefficient: f64) -> Self {
        Self::new(coefficient, Vec::new())
    }

    /// `h · c_p† c_q`
    pub fn one_body(h: f64, p: usize, q: usize) -> Self {
        Self::new(h, vec![(p, Ladder::Create), (q, Ladder::Annihilate)])
    }

    /// `h · c_p† c_q† c_r c_s`
    pub fn two_body(h: f64, p: usize, q: usize, r: usize, s: usize) -> Self {
        Self::new(
            h,
            vec![
                (p, Ladder::Create),
                (q, Ladder::Create),
                (r, Ladder::Annihilate),
                (s, Ladder::Annihilate),
            ],
        )
    }
}

type PauliSum = BTreeMap<PauliString, Complex64>;

fn ladder_image(n: usize, mode: usize, kind: Ladder) -> Result<[(Complex64, PauliString); 2]> {
    let parity = (1u64 << mode) - 1;
    let bit = 1u64 << mode;
    let x_part = PauliString::new(n, bit, parity)?;
    let y_part = PauliString::new(n, bit, parity | bit)?;
    let y_coeff = match kind {
        Ladder::Create => Complex64::new(0.0, -0.5),
        Ladder::Annihilate => Complex64::new(0.0, 0.5),
    };
    Ok([(Complex64::new(0.5, 0.0), x_part), (y_coeff, y_part)])
}

fn multiply_right(sum: &PauliSum, factor: &[(Complex64, PauliString); 2]) -> Result<PauliSum> {
    let mut out = PauliSum::new();
    for (p, c) in sum {
        for (fc, fp) in factor {
            let (phase, r) = p.multiply(fp)?;
            *out.entry(r).or_default() += c * fc * phase;
        }
    }
    out.retain(|_, c| c.norm() >= COEFF_EPS);
    Ok(out)
}

/// Maps a Hermitian combination of fermionic terms on `n` modes to qubits.
///
/// The caller must supply conjugate partners for non-Hermitian terms; any
/// surviving coefficient with an imaginary part of at least `1e-12` is
/// reported as an algebra error.
pub fn jordan_wigner(terms: &[FermionTerm], n: usize) -> Result<PauliHamiltonian> {
    if n == 0 || n > super::MAX_QUBITS {
        return Err(Error::InvalidSystem(format!(
            "mode count must be in 1..={}, got {n}",
            super::MAX_QUBITS
        )));
    }
    let identity = PauliString::identity(n)?;
    let mut total = PauliSum::new();
    for term in terms {
        let mut acc = PauliSum::from([(identity, Complex64::new(term.coefficient, 0.0))]);
        for &(mode, kind) in &term.factors {
            if mode >= n {
                return Err(Error::InvalidSystem(format!(
                    "mode index {mode} out of range for {n} modes"
                )));
            }
            acc = multiply_right(&acc, &ladder_image(n, mode, kind)?)?;
        }
        for (p, c) in acc {
            *total.entry(p).or_default() += c;
        }
    }

    let mut real_terms: Vec<(f64, PauliString)> = Vec::with_capacity(total.len());
    for (p, c) in total {
        if c.im.abs() >= COEFF_EPS {
            return Err(Error::Algebra(format!(
                "term {p} has imaginary coefficient {:e}; the fermionic input is not Hermitian \
                 (supply the conjugate of every non-Hermitian term)",
                c.im
            )));
        }
        real_terms.push((c.re, p));
    }
    PauliHamiltonian::from_terms(n, real_terms)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn coeff(h: &PauliHamiltonian, label: &str) -> f64 {
        let p: PauliString = label.parse().unwrap();
        h.terms()
            .iter()
            .find(|(_, q)| *q == p)
            .map(|(c, _)| *c)
            .unwrap_or(0.0)
    }

    #[test]
    fn number_operator() {
        let h = jordan_wigner(&[FermionTerm::one_body(1.0, 0, 0)], 1).unwrap();
        assert_eq!(h.len(), 2);
        assert!((coeff(&h, "I") - 0.5).abs() < 1e-15);
        assert!((coeff(&h, "Z") + 0.5).abs() < 1e-15);
    }

    #[test]
    fn hopping_pair() {
        let terms = [FermionTerm::one_body(1.0, 0, 1), FermionTerm::one_body(1.0, 1, 0)];
        let h = jordan_wigner(&terms, 2).unwrap();
        assert_eq!(h.len(), 2);
        assert!((coeff(&h, "XX") - 0.5).abs() < 1e-15);
        assert!((coeff(&h, "YY") - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_term() {
        let h = jordan_wigner(&[FermionTerm::identity(2.0)], 2).unwrap();
        assert_eq!(h.terms(), &[(2.0, "II".parse().unwrap())]);
    }

    #[test]
    fn lone_hopping_is_rejected() {
        let err = jordan_wigner(&[FermionTerm::one_body(1.0, 0, 1)], 2).unwrap_err();
        assert!(matches!(err, Error::Algebra(_)), "{err}");
    }

    #[test]
    fn mode_out_of_range() {
        assert!(matches!(
            jordan_wigner(&[FermionTerm::one_body(1.0, 0, 3)], 2),
            Err(Error::InvalidSystem(_))
        ));
    }

    #[test]
    fn pauli_exclusion() {
        let t = FermionTerm::new(1.0, vec![(0, Ladder::Create), (0, Ladder::Create)]);
        let h = jordan_wigner(&[t], 1).unwrap();
        assert!(h.is_empty());
    }
}
