//! Circuit ingestion: Clifford+T gate lists parsed from a QASM subset, and
//! the logical statistics extracted from them or loaded from proxy documents.

mod proxy;
mod qasm;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use proxy::{load_proxy_profile, load_proxy_profile_str};
pub use qasm::{parse_qasm, to_qasm};

/// Default index distance above which a CNOT counts as remote.
pub const DEFAULT_REMOTE_CUTOFF: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    T,
    Tdg,
    S,
    Sdg,
    H,
    X,
    Z,
    Cnot,
    Cz,
    /// Z rotation by the given angle in radians.
    Rz(f64),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz => 2,
            _ => 1,
        }
    }

    pub fn is_t_like(&self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    pub(crate) fn qasm_name(&self) -> &'static str {
        match self {
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::Cnot => "cx",
            GateKind::Cz => "cz",
            GateKind::Rz(_) => "rz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operands {
    One(usize),
    Two(usize, usize),
}

impl Operands {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Operands::One(a) => (a, None),
            Operands::Two(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub operands: Operands,
}

impl Gate {
    pub fn one(kind: GateKind, q: usize) -> Self {
        Gate {
            kind,
            operands: Operands::One(q),
        }
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Gate {
            kind,
            operands: Operands::Two(a, b),
        }
    }
}

/// A validated Clifford+T(+Rz) gate sequence over a flat qubit index space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateList {
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(qubit_count: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut list = GateList {
            qubit_count,
            gates: Vec::with_capacity(gates.len()),
        };
        for g in gates {
            list.push(g)?;
        }
        Ok(list)
    }

    pub fn empty(qubit_count: usize) -> Self {
        GateList {
            qubit_count,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        check_gate(&gate, self.qubit_count)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_t_like()).count()
    }

    pub(crate) fn from_validated(qubit_count: usize, gates: Vec<Gate>) -> Self {
        GateList { qubit_count, gates }
    }
}

fn check_gate(gate: &Gate, qubit_count: usize) -> Result<()> {
    let arity_ok = matches!(
        (gate.kind.arity(), gate.operands),
        (1, Operands::One(_)) | (2, Operands::Two(_, _))
    );
    if !arity_ok {
        return Err(Error::InvalidGateList(format!(
            "{} takes {} operand(s)",
            gate.kind.qasm_name(),
            gate.kind.arity()
        )));
    }
    if let GateKind::Rz(a) = gate.kind {
        if !a.is_finite() {
            return Err(Error::InvalidGateList("non-finite rz angle".into()));
        }
    }
    for q in gate.operands.iter() {
        if q >= qubit_count {
            return Err(Error::InvalidGateList(format!(
                "operand {q} out of range for {qubit_count} qubits"
            )));
        }
    }
    if let Operands::Two(a, b) = gate.operands {
        if a == b {
            return Err(Error::InvalidGateList(format!(
                "two-qubit gate on identical operands {a}"
            )));
        }
    }
    Ok(())
}

/// Logical statistics of one algorithm instance.
///
/// Counts are per block encoding; `block_encodings` is the repetition count
/// (1 for documents that carry pre-multiplied totals, `None` when the
/// repetitions come from the algorithm's 1-norm instead).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalCircuitProfile {
    pub label: String,
    pub algorithm_logical_qubits: u64,
    pub t_per_block_encoding: u64,
    pub block_encodings: Option<u64>,
    pub two_qubit_per_block: u64,
    pub remote_cnot_per_block: u64,
    pub distinct_pair_count: u64,
    pub rotation_count_per_block: u64,
    /// Keys that were absent from the source document and defaulted to zero.
    pub defaulted: Vec<String>,
}

impl LogicalCircuitProfile {
    pub fn validate(&self) -> Result<()> {
        if self.remote_cnot_per_block > self.two_qubit_per_block {
            return Err(Error::invalid(format!(
                "profile `{}`: remote CNOTs ({}) exceed two-qubit gates ({})",
                self.label, self.remote_cnot_per_block, self.two_qubit_per_block
            )));
        }
        let q = self.algorithm_logical_qubits as u128;
        let max_pairs = q * q.saturating_sub(1) / 2;
        if self.distinct_pair_count as u128 > max_pairs {
            return Err(Error::invalid(format!(
                "profile `{}`: {} distinct pairs exceed {} possible on {} qubits",
                self.label, self.distinct_pair_count, max_pairs, q
            )));
        }
        if self.block_encodings == Some(0) {
            return Err(Error::invalid(format!(
                "profile `{}`: block_encodings must be positive",
                self.label
            )));
        }
        Ok(())
    }

    /// T count including repetitions, when the repetition count is known.
    pub fn t_total(&self) -> Option<u128> {
        self.block_encodings
            .map(|b| self.t_per_block_encoding as u128 * b as u128)
    }
}

/// Extract logical statistics from a gate list.
///
/// A CNOT is remote when its operand indices differ by more than
/// `remote_cutoff`. Every statistic is a multiset function of the gates.
pub fn extract_profile(
    g: &GateList,
    remote_cutoff: usize,
    label: impl Into<String>,
) -> LogicalCircuitProfile {
    let mut t = 0u64;
    let mut rotations = 0u64;
    let mut two_qubit = 0u64;
    let mut remote = 0u64;
    let mut pairs = BTreeSet::new();
    for gate in g.gates() {
        match (gate.kind, gate.operands) {
            (GateKind::T | GateKind::Tdg, _) => t += 1,
            (GateKind::Rz(_), _) => rotations += 1,
            (kind @ (GateKind::Cnot | GateKind::Cz), Operands::Two(a, b)) => {
                two_qubit += 1;
                if kind == GateKind::Cnot && a.abs_diff(b) > remote_cutoff {
                    remote += 1;
                }
                pairs.insert((a.min(b), a.max(b)));
            }
            _ => {}
        }
    }
    LogicalCircuitProfile {
        label: label.into(),
        algorithm_logical_qubits: g.qubit_count() as u64,
        t_per_block_encoding: t,
        block_encodings: None,
        two_qubit_per_block: two_qubit,
        remote_cnot_per_block: remote,
        distinct_pair_count: pairs.len() as u64,
        rotation_count_per_block: rotations,
        defaulted: Vec::new(),
    }
}

/// JSON shape of a profile document.
#[derive(Serialize, Deserialize)]
struct ProfileDocument {
    label: String,
    qubits: u64,
    t_per_block: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    block_encodings: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_total: Option<u128>,
    two_qubit_per_block: u64,
    remote_cnot_per_block: u64,
    distinct_pairs: u64,
    rotations_per_block: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    defaulted: Vec<String>,
}

impl Serialize for LogicalCircuitProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileDocument {
            label: self.label.clone(),
            qubits: self.algorithm_logical_qubits,
            t_per_block: self.t_per_block_encoding,
            block_encodings: self.block_encodings,
            t_total: self.t_total(),
            two_qubit_per_block: self.two_qubit_per_block,
            remote_cnot_per_block: self.remote_cnot_per_block,
            distinct_pairs: self.distinct_pair_count,
            rotations_per_block: self.rotation_count_per_block,
            defaulted: self.defaulted.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogicalCircuitProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        load_proxy_profile(&value).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile_of(src: &str) -> LogicalCircuitProfile {
        let g = parse_qasm(src).unwrap();
        extract_profile(&g, DEFAULT_REMOTE_CUTOFF, "t")
    }

    #[test]
    fn remote_cnot_definition() {
        let p = profile_of("qreg q[8]; cx q[0],q[7];");
        assert_eq!((p.two_qubit_per_block, p.remote_cnot_per_block), (1, 1));
        let p = profile_of("qreg q[8]; cx q[2],q[5];");
        assert_eq!((p.two_qubit_per_block, p.remote_cnot_per_block), (1, 0));
        // exactly 4 apart is local
        let p = profile_of("qreg q[8]; cx q[1],q[5];");
        assert_eq!(p.remote_cnot_per_block, 0);
    }

    #[test]
    fn cz_is_two_qubit_but_never_remote() {
        let p = profile_of("qreg q[10]; cz q[0],q[9]; cz q[9],q[0];");
        assert_eq!(p.two_qubit_per_block, 2);
        assert_eq!(p.remote_cnot_per_block, 0);
        assert_eq!(p.distinct_pair_count, 1);
    }

    #[test]
    fn counts_t_and_rotations() {
        let p = profile_of("qreg q[2]; t q[0]; tdg q[1]; rz(pi/8) q[0]; s q[0]; h q[1];");
        assert_eq!(p.t_per_block_encoding, 2);
        assert_eq!(p.rotation_count_per_block, 1);
        assert_eq!(p.two_qubit_per_block, 0);
    }

    #[test]
    fn remote_cutoff_is_configurable() {
        let g = parse_qasm("qreg q[8]; cx q[0],q[3];").unwrap();
        assert_eq!(extract_profile(&g, 2, "").remote_cnot_per_block, 1);
        assert_eq!(extract_profile(&g, 3, "").remote_cnot_per_block, 0);
    }

    #[test]
    fn gate_list_rejects_invalid_gates() {
        assert!(GateList::new(2, vec![Gate::one(GateKind::T, 2)]).is_err());
        assert!(GateList::new(2, vec![Gate::two(GateKind::Cnot, 1, 1)]).is_err());
        assert!(GateList::new(2, vec![Gate::one(GateKind::Cnot, 1)]).is_err());
        assert!(GateList::new(2, vec![Gate::one(GateKind::Rz(f64::NAN), 0)]).is_err());
    }

    #[test]
    fn profile_validation() {
        let mut p = profile_of("qreg q[3]; cx q[0],q[2];");
        p.validate().unwrap();
        p.remote_cnot_per_block = 2;
        assert!(p.validate().is_err());
        p.remote_cnot_per_block = 0;
        p.distinct_pair_count = 4;
        assert!(p.validate().is_err());
    }
}
