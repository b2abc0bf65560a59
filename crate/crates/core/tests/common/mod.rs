//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::Rng;

use ftqc_core::profile::{Gate, GateKind, GateList, Operands};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

/// Dense unitary of a gate list; qubit `k` is bit `k` of the basis index.
pub fn unitary(g: &GateList) -> Vec<Vec<Complex64>> {
    let dim = 1usize << g.qubit_count();
    (0..dim)
        .map(|col| {
            let mut state = vec![Complex64::new(0.0, 0.0); dim];
            state[col] = Complex64::new(1.0, 0.0);
            for gate in g.gates() {
                apply(&mut state, gate);
            }
            state
        })
        .collect()
}

fn apply(state: &mut [Complex64], gate: &Gate) {
    let phase = |theta: f64| Complex64::from_polar(1.0, theta);
    let quarter = std::f64::consts::FRAC_PI_4;
    match (gate.kind, gate.operands) {
        (GateKind::H, Operands::One(q)) => {
            let m = 1 << q;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..state.len() {
                if i & m == 0 {
                    let (a, b) = (state[i], state[i | m]);
                    state[i] = (a + b) * s;
                    state[i | m] = (a - b) * s;
                }
            }
        }
        (GateKind::X, Operands::One(q)) => {
            let m = 1 << q;
            for i in 0..state.len() {
                if i & m == 0 {
                    state.swap(i, i | m);
                }
            }
        }
        (kind, Operands::One(q)) => {
            let (lo, hi) = match kind {
                GateKind::T => (Complex64::new(1.0, 0.0), phase(quarter)),
                GateKind::Tdg => (Complex64::new(1.0, 0.0), phase(-quarter)),
                GateKind::S => (Complex64::new(1.0, 0.0), phase(2.0 * quarter)),
                GateKind::Sdg => (Complex64::new(1.0, 0.0), phase(-2.0 * quarter)),
                GateKind::Z => (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)),
                GateKind::Rz(t) => (phase(-t / 2.0), phase(t / 2.0)),
                k => panic!("unexpected single-qubit gate {k:?}"),
            };
            let m = 1 << q;
            for (i, amp) in state.iter_mut().enumerate() {
                *amp *= if i & m == 0 { lo } else { hi };
            }
        }
        (GateKind::Cnot, Operands::Two(c, t)) => {
            let (mc, mt) = (1 << c, 1 << t);
            for i in 0..state.len() {
                if i & mc != 0 && i & mt == 0 {
                    state.swap(i, i | mt);
                }
            }
        }
        (GateKind::Cz, Operands::Two(a, b)) => {
            let m = (1 << a) | (1 << b);
            for (i, amp) in state.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
        (k, o) => panic!("unexpected gate {k:?} on {o:?}"),
    }
}

/// Max elementwise distance after aligning global phase on the largest entry.
pub fn phase_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let (mut best, mut at) = (0.0, (0, 0));
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.norm() > best {
                best = v.norm();
                at = (i, j);
            }
        }
    }
    let (x, y) = (a[at.0][at.1], b[at.0][at.1]);
    if y.norm() < 1e-12 {
        return f64::INFINITY;
    }
    let align = x / y;
    let align = align / align.norm();
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(move |(p, q)| (p - q * align).norm()))
        .fold(0.0, f64::max)
}

/// Random circuit biased towards cancellable neighbours.
pub fn random_circuit(rng: &mut impl Rng, qubits: usize, max_len: usize) -> GateList {
    let len = rng.gen_range(0..=max_len);
    let mut gates: Vec<Gate> = Vec::with_capacity(len);
    while gates.len() < len {
        if !gates.is_empty() && rng.gen_bool(0.3) {
            let prev = gates[rng.gen_range(0..gates.len())];
            gates.push(prev);
            continue;
        }
        let pick = rng.gen_range(0..11);
        let q = rng.gen_range(0..qubits);
        let gate = match pick {
            0 => Gate::one(GateKind::T, q),
            1 => Gate::one(GateKind::Tdg, q),
            2 => Gate::one(GateKind::S, q),
            3 => Gate::one(GateKind::Sdg, q),
            4 => Gate::one(GateKind::Z, q),
            5 => Gate::one(GateKind::H, q),
            6 => Gate::one(GateKind::X, q),
            7 => Gate::one(GateKind::Rz(rng.gen_range(-3.0..3.0)), q),
            _ => {
                let mut t = rng.gen_range(0..qubits - 1);
                if t >= q {
                    t += 1;
                }
                let kind = if pick == 10 {
                    GateKind::Cz
                } else {
                    GateKind::Cnot
                };
                Gate::two(kind, q, t)
            }
        };
        gates.push(gate);
    }
    GateList::new(qubits, gates).expect("valid circuit")
}

/// Tallies kept by the program generator, independent of the parser.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Tally {
    pub qubits: u64,
    pub t: u64,
    pub two_qubit: u64,
    pub remote: u64,
    pub rotations: u64,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl Tally {
    fn two(&mut self, cnot: bool, a: usize, b: usize) {
        self.two_qubit += 1;
        if cnot && a.abs_diff(b) > 4 {
            self.remote += 1;
        }
        self.pairs.insert((a.min(b), a.max(b)));
    }
}

/// Random OpenQASM 2 program using registers, broadcasts, comments,
/// barriers, classical registers and a user gate definition.
pub fn random_program(rng: &mut impl Rng) -> (String, Tally) {
    let mut src = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let mut tally = Tally::default();
    let regs: Vec<(String, usize, usize)> = {
        let mut offset = 0;
        (0..rng.gen_range(1..=3))
            .map(|i| {
                let size = rng.gen_range(1..=6);
                let r = (format!("r{i}"), offset, size);
                offset += size;
                r
            })
            .collect()
    };
    for (name, _, size) in &regs {
        writeln!(src, "qreg {name}[{size}];").unwrap();
    }
    tally.qubits = regs.iter().map(|r| r.2 as u64).sum();
    if rng.gen_bool(0.5) {
        writeln!(src, "creg c[{}];", tally.qubits).unwrap();
    }
    let with_def = rng.gen_bool(0.5);
    if with_def {
        src.push_str("gate tcx a, b { t a; cx a, b; tdg b; }\n");
    }
    let total = tally.qubits as usize;
    let flat = |rng: &mut dyn rand::RngCore| {
        let (name, off, size) = &regs[rng.gen_range(0..regs.len())];
        let i = rng.gen_range(0..*size);
        (format!("{name}[{i}]"), off + i)
    };
    for _ in 0..rng.gen_range(0..40) {
        match rng.gen_range(0..10) {
            0 => src.push_str("// filler comment\n"),
            1 => {
                let (name, _, _) = &regs[rng.gen_range(0..regs.len())];
                writeln!(src, "barrier {name};").unwrap();
            }
            2 => {
                let (name, _, size) = &regs[rng.gen_range(0..regs.len())];
                let g = ["t", "tdg", "h", "s"][rng.gen_range(0..4)];
                writeln!(src, "{g} {name};").unwrap();
                if g.starts_with('t') {
                    tally.t += *size as u64;
                }
            }
            3 => {
                let (text, _) = flat(rng);
                writeln!(src, "rz(pi/{}) {text};", rng.gen_range(1..9)).unwrap();
                tally.rotations += 1;
            }
            4..=6 if total >= 2 => {
                let (ta, a) = flat(rng);
                let (tb, b) = flat(rng);
                if a == b {
                    continue;
                }
                let cnot = rng.gen_bool(0.7);
                writeln!(src, "{}  {ta} , {tb};", if cnot { "cx" } else { "cz" }).unwrap();
                tally.two(cnot, a, b);
            }
            7 if with_def && total >= 2 => {
                let (ta, a) = flat(rng);
                let (tb, b) = flat(rng);
                if a == b {
                    continue;
                }
                writeln!(src, "tcx {ta}, {tb};").unwrap();
                tally.t += 2;
                tally.two(true, a, b);
            }
            _ => {
                let (text, _) = flat(rng);
                let g = ["t", "tdg", "x", "z", "sdg"][rng.gen_range(0..5)];
                writeln!(src, "{g} {text};").unwrap();
                if g.starts_with('t') {
                    tally.t += 1;
                }
            }
        }
    }
    (src, tally)
}
