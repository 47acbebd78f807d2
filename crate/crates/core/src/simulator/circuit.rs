use std::fmt;

use crate::error::{Error, Result};
use crate::hamiltonian::{Pauli, PauliString};

/// A circuit element. Parameterized gates carry the index of the entry of
/// θ that drives them.
///
/// Rotations follow `R_P(θ) = exp(−iθ/2 · P)`; the Ising gates use the same
/// convention with `P = A⊗A`. `Rot(α, β, γ) = RZ(γ)·RY(β)·RZ(α)`, i.e. RZ(α)
/// acts on the state first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Rx { qubit: usize, slot: usize },
    Ry { qubit: usize, slot: usize },
    Rz { qubit: usize, slot: usize },
    Rot { qubit: usize, slots: [usize; 3] },
    IsingXX { qubits: [usize; 2], slot: usize },
    IsingYY { qubits: [usize; 2], slot: usize },
    IsingZZ { qubits: [usize; 2], slot: usize },
    Cnot { control: usize, target: usize },
    Cz { qubits: [usize; 2] },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => vec![qubit],
            Gate::Rot { qubit, .. } => vec![qubit],
            Gate::IsingXX { qubits, .. } | Gate::IsingYY { qubits, .. } | Gate::IsingZZ { qubits, .. } => {
                qubits.to_vec()
            }
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz { qubits } => qubits.to_vec(),
        }
    }

    pub fn slots(&self) -> Vec<usize> {
        match *self {
            Gate::Rx { slot, .. }
            | Gate::Ry { slot, .. }
            | Gate::Rz { slot, .. }
            | Gate::IsingXX { slot, .. }
            | Gate::IsingYY { slot, .. }
            | Gate::IsingZZ { slot, .. } => vec![slot],
            Gate::Rot { slots, .. } => slots.to_vec(),
            Gate::Cnot { .. } | Gate::Cz { .. } => Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rx { .. } => "RX",
            Gate::Ry { .. } => "RY",
            Gate::Rz { .. } => "RZ",
            Gate::Rot { .. } => "Rot",
            Gate::IsingXX { .. } => "IsingXX",
            Gate::IsingYY { .. } => "IsingYY",
            Gate::IsingZZ { .. } => "IsingZZ",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz { .. } => "CZ",
        }
    }
}

/// Elementary step of a compiled circuit: every parameterized gate becomes one
/// or more Pauli rotations, each driven by a single slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Op {
    Rotation { generator: PauliString, slot: usize },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzFamily {
    XyzBlocks,
    StronglyEntangling,
    SimplifiedTwoDesign,
    Custom,
}

impl AnsatzFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnsatzFamily::XyzBlocks => "xyz-blocks",
            AnsatzFamily::StronglyEntangling => "strongly-entangling",
            AnsatzFamily::SimplifiedTwoDesign => "simplified-two-design",
            AnsatzFamily::Custom => "custom",
        }
    }
}

impl fmt::Display for AnsatzFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AnsatzFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xyz-blocks" | "xyz" => Ok(AnsatzFamily::XyzBlocks),
            "strongly-entangling" | "sel" => Ok(AnsatzFamily::StronglyEntangling),
            "simplified-two-design" | "std" => Ok(AnsatzFamily::SimplifiedTwoDesign),
            "custom" => Ok(AnsatzFamily::Custom),
            other => Err(Error::Config(format!("unknown ansatz family \"{other}\""))),
        }
    }
}

/// Ordered gate list over `n` qubits using parameter slots `0..num_params`,
/// each exactly once. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzCircuit {
    n: usize,
    gates: Vec<Gate>,
    num_params: usize,
    family: AnsatzFamily,
    ops: Vec<Op>,
}

impl AnsatzCircuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        Self::with_family(n, gates, AnsatzFamily::Custom)
    }

    pub fn with_family(n: usize, gates: Vec<Gate>, family: AnsatzFamily) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::InvalidSystem(format!(
                "circuit width must be in 1..=30, got {n}"
            )));
        }
        let mut used: Vec<bool> = Vec::new();
        for (i, gate) in gates.iter().enumerate() {
            let qubits = gate.qubits();
            if qubits.iter().any(|&q| q >= n) {
                return Err(Error::InvalidSystem(format!(
                    "gate {i} ({}) addresses a qubit outside 0..{n}",
                    gate.name()
                )));
            }
            if qubits.len() == 2 && qubits[0] == qubits[1] {
                return Err(Error::InvalidSystem(format!(
                    "gate {i} ({}) acts twice on qubit {}",
                    gate.name(),
                    qubits[0]
                )));
            }
            for s in gate.slots() {
                if s >= used.len() {
                    used.resize(s + 1, false);
                }
                if used[s] {
                    return Err(Error::InvalidSystem(format!("parameter slot {s} used twice")));
                }
                used[s] = true;
            }
        }
        if let Some(s) = used.iter().position(|u| !u) {
            return Err(Error::InvalidSystem(format!("parameter slot {s} unused")));
        }
        let ops = compile(n, &gates)?;
        Ok(AnsatzCircuit {
            n,
            num_params: used.len(),
            gates,
            family,
            ops,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn family(&self) -> AnsatzFamily {
        self.family
    }

    pub(crate) fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub(crate) fn check_params(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.num_params {
            return Err(Error::dim("circuit parameters", self.num_params, theta.len()));
        }
        Ok(())
    }
}

fn compile(n: usize, gates: &[Gate]) -> Result<Vec<Op>> {
    let single = |q: usize, p: Pauli| PauliString::single(n, q, p);
    let pair = |[a, b]: [usize; 2], p: Pauli| PauliString::from_factors(n, &[(a, p), (b, p)]);
    let mut ops = Vec::with_capacity(gates.len());
    for gate in gates {
        match *gate {
            Gate::Rx { qubit, slot } => ops.push(Op::Rotation { generator: single(qubit, Pauli::X)?, slot }),
            Gate::Ry { qubit, slot } => ops.push(Op::Rotation { generator: single(qubit, Pauli::Y)?, slot }),
            Gate::Rz { qubit, slot } => ops.push(Op::Rotation { generator: single(qubit, Pauli::Z)?, slot }),
            Gate::Rot { qubit, slots } => {
                ops.push(Op::Rotation { generator: single(qubit, Pauli::Z)?, slot: slots[0] });
                ops.push(Op::Rotation { generator: single(qubit, Pauli::Y)?, slot: slots[1] });
                ops.push(Op::Rotation { generator: single(qubit, Pauli::Z)?, slot: slots[2] });
            }
            Gate::IsingXX { qubits, slot } => ops.push(Op::Rotation { generator: pair(qubits, Pauli::X)?, slot }),
            Gate::IsingYY { qubits, slot } => ops.push(Op::Rotation { generator: pair(qubits, Pauli::Y)?, slot }),
            Gate::IsingZZ { qubits, slot } => ops.push(Op::Rotation { generator: pair(qubits, Pauli::Z)?, slot }),
            Gate::Cnot { control, target } => ops.push(Op::Cnot { control, target }),
            Gate::Cz { qubits: [a, b] } => ops.push(Op::Cz { a, b }),
        }
    }
    Ok(ops)
}

fn require_width(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSystem(format!("{what} needs at least 2 qubits, got {n}")));
    }
    Ok(())
}

/// Blocks of IsingXX, IsingYY, IsingZZ on every nearest-neighbour bond.
///
/// Within a block the bonds are visited in ascending order and each bond gets
/// its XX, YY and ZZ gate before the next bond starts. `P = 3(n−1)L`.
pub fn build_xyz_ansatz(n: usize, layers: usize) -> Result<AnsatzCircuit> {
    require_width(n, "xyz ansatz")?;
    if layers == 0 {
        return Err(Error::Config("layer count must be at least 1".into()));
    }
    let mut gates = Vec::with_capacity(3 * (n - 1) * layers);
    let mut slot = 0;
    for _ in 0..layers {
        for k in 0..n - 1 {
            let qubits = [k, k + 1];
            gates.push(Gate::IsingXX { qubits, slot });
            gates.push(Gate::IsingYY { qubits, slot: slot + 1 });
            gates.push(Gate::IsingZZ { qubits, slot: slot + 2 });
            slot += 3;
        }
    }
    AnsatzCircuit::with_family(n, gates, AnsatzFamily::XyzBlocks)
}

/// Default CNOT offset of layer `l`: cycles through `1..n`.
pub fn default_entangling_range(layer: usize, n: usize) -> usize {
    layer % (n - 1) + 1
}

/// Layers of `Rot` on every qubit followed by a CNOT ring `k → (k + r) mod n`.
/// `ranges` overrides the per-layer offsets `r`. `P = 3nL`.
pub fn build_strongly_entangling(n: usize, layers: usize, ranges: Option<&[usize]>) -> Result<AnsatzCircuit> {
    require_width(n, "strongly entangling ansatz")?;
    if layers == 0 {
        return Err(Error::Config("layer count must be at least 1".into()));
    }
    if let Some(r) = ranges {
        if r.len() != layers {
            return Err(Error::dim("entangling ranges", layers, r.len()));
        }
        if let Some(bad) = r.iter().find(|&&x| x == 0 || x % n == 0) {
            return Err(Error::Config(format!("entangling range {bad} maps a qubit onto itself")));
        }
    }
    let mut gates = Vec::with_capacity(2 * n * layers);
    for l in 0..layers {
        for q in 0..n {
            let base = 3 * (l * n + q);
            gates.push(Gate::Rot { qubit: q, slots: [base, base + 1, base + 2] });
        }
        let r = ranges.map_or_else(|| default_entangling_range(l, n), |r| r[l]);
        for q in 0..n {
            gates.push(Gate::Cnot { control: q, target: (q + r) % n });
        }
    }
    AnsatzCircuit::with_family(n, gates, AnsatzFamily::StronglyEntangling)
}

/// RY on every qubit, then per layer a CZ+RY+RY brick on the even pairs
/// `(0,1),(2,3),…` followed by the odd pairs `(1,2),(3,4),…`.
///
/// Gate count `n + 3(n−1)L`, `P = n + 2(n−1)L`.
pub fn build_simplified_two_design(n: usize, layers: usize) -> Result<AnsatzCircuit> {
    require_width(n, "simplified two-design")?;
    let mut gates = Vec::with_capacity(n + 3 * (n - 1) * layers);
    let mut slot = 0;
    for q in 0..n {
        gates.push(Gate::Ry { qubit: q, slot });
        slot += 1;
    }
    for _ in 0..layers {
        for start in [0, 1] {
            for a in (start..n - 1).step_by(2) {
                gates.push(Gate::Cz { qubits: [a, a + 1] });
                gates.push(Gate::Ry { qubit: a, slot });
                gates.push(Gate::Ry { qubit: a + 1, slot: slot + 1 });
                slot += 2;
            }
        }
    }
    AnsatzCircuit::with_family(n, gates, AnsatzFamily::SimplifiedTwoDesign)
}

/// Builds a circuit from its family tag.
pub fn build_ansatz(family: AnsatzFamily, n: usize, layers: usize) -> Result<AnsatzCircuit> {
    match family {
        AnsatzFamily::XyzBlocks => build_xyz_ansatz(n, layers),
        AnsatzFamily::StronglyEntangling => build_strongly_entangling(n, layers, None),
        AnsatzFamily::SimplifiedTwoDesign => build_simplified_two_design(n, layers),
        AnsatzFamily::Custom => Err(Error::Config("custom circuits have no builder".into())),
    }
}

/// Number of gate entries; `Rot` counts once.
pub fn gate_count(circuit: &AnsatzCircuit) -> usize {
    circuit.gates().len()
}

/// Gates used by Möttönen amplitude embedding on `n` qubits: `2^{n+1} − 3`.
pub fn mottonen_gate_count(n: usize) -> u64 {
    (1u64 << (n + 1)) - 3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xyz_counts() {
        let c = build_xyz_ansatz(2, 1).unwrap();
        assert_eq!((c.num_params(), gate_count(&c)), (3, 3));
        let big = build_xyz_ansatz(12, 20).unwrap();
        assert_eq!(big.num_params(), 660);
        let c = build_xyz_ansatz(3, 2).unwrap();
        assert_eq!(gate_count(&c), 12);
        let names: Vec<_> = c.gates()[..6].iter().map(|g| (g.name(), g.qubits())).collect();
        assert_eq!(
            names,
            vec![
                ("IsingXX", vec![0, 1]),
                ("IsingYY", vec![0, 1]),
                ("IsingZZ", vec![0, 1]),
                ("IsingXX", vec![1, 2]),
                ("IsingYY", vec![1, 2]),
                ("IsingZZ", vec![1, 2]),
            ]
        );
    }

    #[test]
    fn strongly_entangling_counts() {
        let c = build_strongly_entangling(2, 1, None).unwrap();
        assert_eq!(c.num_params(), 6);
        assert_eq!(c.gates().iter().filter(|g| matches!(g, Gate::Rot { .. })).count(), 2);
        assert_eq!(c.gates().iter().filter(|g| matches!(g, Gate::Cnot { .. })).count(), 2);
        assert_eq!(build_strongly_entangling(10, 7, None).unwrap().num_params(), 210);
    }

    #[test]
    fn strongly_entangling_ring() {
        let c = build_strongly_entangling(4, 1, Some(&[1])).unwrap();
        let pairs: Vec<_> = c
            .gates()
            .iter()
            .filter_map(|g| match *g {
                Gate::Cnot { control, target } => Some((control, target)),
                _ => None,
            })
            .collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        let c = build_strongly_entangling(4, 3, None).unwrap();
        let first_cnot_targets: Vec<_> = c
            .gates()
            .iter()
            .filter_map(|g| match *g {
                Gate::Cnot { control: 0, target } => Some(target),
                _ => None,
            })
            .collect();
        assert_eq!(first_cnot_targets, vec![1, 2, 3]);
    }

    #[test]
    fn simplified_two_design_counts() {
        for (n, l, gates) in [(4, 2, 22), (9, 4, 105), (5, 2, 29), (6, 2, 36), (8, 4, 92)] {
            let c = build_simplified_two_design(n, l).unwrap();
            assert_eq!(gate_count(&c), gates, "n={n} L={l}");
            assert_eq!(c.num_params(), n + 2 * (n - 1) * l);
        }
    }

    #[test]
    fn mottonen_formula() {
        assert_eq!(mottonen_gate_count(4), 29);
        assert_eq!(mottonen_gate_count(9), 1021);
        assert_eq!(mottonen_gate_count(1), 1);
    }

    #[test]
    fn empty_circuit() {
        let c = AnsatzCircuit::new(1, vec![]).unwrap();
        assert_eq!((gate_count(&c), c.num_params()), (0, 0));
    }

    #[test]
    fn validation() {
        assert!(build_xyz_ansatz(1, 1).is_err());
        assert!(build_xyz_ansatz(3, 0).is_err());
        let dup = vec![Gate::Rx { qubit: 0, slot: 0 }, Gate::Ry { qubit: 0, slot: 0 }];
        assert!(AnsatzCircuit::new(1, dup).is_err());
        let gap = vec![Gate::Rx { qubit: 0, slot: 1 }];
        assert!(AnsatzCircuit::new(1, gap).is_err());
        let same = vec![Gate::Cz { qubits: [1, 1] }];
        assert!(AnsatzCircuit::new(2, same).is_err());
        let out = vec![Gate::Cnot { control: 0, target: 2 }];
        assert!(AnsatzCircuit::new(2, out).is_err());
    }
}
