use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register a [`PauliString`] can address (one bit per qubit in a `u64`).
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Tensor product of single-qubit Paulis over `n` qubits, stored in the
/// symplectic (x, z) form. Bit `k` of each mask refers to qubit `k`, which is
/// also bit `k` of a computational-basis index and character `k` of the
/// textual form (`"ZI"` is `Z` on qubit 0).
///
/// A Y factor is stored as x=z=1; the operator is `i^{|x&z|} X^x Z^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `i^k` for `k` taken mod 4.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub fn new(n: usize, x: u64, z: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidSystem(format!(
                "qubit count must be in 1..={MAX_QUBITS}, got {n}"
            )));
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::InvalidSystem(format!(
                "pauli masks address qubits beyond n={n}"
            )));
        }
        Ok(PauliString { n, x, z })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0, 0)
    }

    /// Single non-identity factor `p` on qubit `q`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        Self::from_factors(n, &[(q, p)])
    }

    pub fn from_factors(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(q, p) in factors {
            if q >= n {
                return Err(Error::InvalidSystem(format!(
                    "qubit {q} out of range for n={n}"
                )));
            }
            let (xb, zb) = p.bits();
            let bit = 1u64 << q;
            x = (x & !bit) | if xb { bit } else { 0 };
            z = (z & !bit) | if zb { bit } else { 0 };
        }
        Self::new(n, x, z)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        let xb = self.x >> q & 1 == 1;
        let zb = self.z >> q & 1 == 1;
        match (xb, zb) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// `i^{#Y}`, the constant part of the basis phase.
    pub(crate) fn y_phase(&self) -> Complex64 {
        i_pow((self.x & self.z).count_ones())
    }

    /// Phase `c` with `P|b⟩ = c |b ⊕ x⟩`.
    #[inline]
    pub fn basis_phase(&self, b: usize) -> Complex64 {
        let sign = ((b as u64) & self.z).count_ones() & 1;
        let p = self.y_phase();
        if sign == 1 {
            -p
        } else {
            p
        }
    }

    /// Product `self · other = phase · result`.
    pub fn multiply(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        if self.n != other.n {
            return Err(Error::dim("pauli product", self.n, other.n));
        }
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // i^{a}X^{x1}Z^{z1} · i^{b}X^{x2}Z^{z2} = i^{a+b}(-1)^{|z1&x2|} X^{x}Z^{z}
        let a = (self.x & self.z).count_ones();
        let b = (other.x & other.z).count_ones();
        let swap = 2 * (self.z & other.x).count_ones();
        let c = (x & z).count_ones();
        let k = (a + b + swap + 4 * 64 - c) % 4;
        Ok((i_pow(k), PauliString { n: self.n, x, z }))
    }

    /// Whether the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::with_capacity(s.len());
        for (q, c) in s.chars().enumerate() {
            let p = Pauli::from_char(c).ok_or_else(|| {
                Error::Format(format!(
                    "invalid Pauli character '{c}' at position {q} in \"{s}\""
                ))
            })?;
            factors.push((q, p));
        }
        Self::from_factors(factors.len(), &factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = ps("XIYZ");
        assert_eq!(p.to_string(), "XIYZ");
        assert_eq!(p.n(), 4);
        assert_eq!(p.weight(), 3);
        assert_eq!(p.get(2), Pauli::Y);
        assert!(ps("III").is_identity());
    }

    #[test]
    fn bad_character_is_named() {
        let err = "XB".parse::<PauliString>().unwrap_err();
        assert!(err.to_string().contains("'B'"), "{err}");
    }

    #[test]
    fn single_qubit_products() {
        let i = Complex64::new(0.0, 1.0);
        let cases = [
            ("X", "Y", i, "Z"),
            ("Y", "Z", i, "X"),
            ("Z", "X", i, "Y"),
            ("Y", "X", -i, "Z"),
            ("Z", "Y", -i, "X"),
            ("X", "Z", -i, "Y"),
            ("X", "X", Complex64::new(1.0, 0.0), "I"),
            ("Y", "Y", Complex64::new(1.0, 0.0), "I"),
        ];
        for (a, b, phase, c) in cases {
            let (ph, r) = ps(a).multiply(&ps(b)).unwrap();
            assert_eq!(ph, phase, "{a}{b}");
            assert_eq!(r, ps(c));
        }
    }

    #[test]
    fn basis_phase_matches_pauli_action() {
        let y = ps("Y");
        // Y|0> = i|1>, Y|1> = -i|0>
        assert_eq!(y.basis_phase(0), Complex64::new(0.0, 1.0));
        assert_eq!(y.basis_phase(1), Complex64::new(0.0, -1.0));
        let z = ps("IZ");
        assert_eq!(z.basis_phase(0b10), Complex64::new(-1.0, 0.0));
        assert_eq!(z.basis_phase(0b01), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn commutation() {
        assert!(ps("XX").commutes_with(&ps("YY")));
        assert!(!ps("XI").commutes_with(&ps("ZI")));
    }
}
