use crate::profile::{Gate, GateKind, GateList, Operands};

/// Diagonal phase gates as multiples of pi/4.
fn phase_units(kind: GateKind) -> Option<u8> {
    match kind {
        GateKind::T => Some(1),
        GateKind::S => Some(2),
        GateKind::Z => Some(4),
        GateKind::Sdg => Some(6),
        GateKind::Tdg => Some(7),
        _ => None,
    }
}

fn phase_gate(units: u8) -> Option<GateKind> {
    match units {
        1 => Some(GateKind::T),
        2 => Some(GateKind::S),
        4 => Some(GateKind::Z),
        6 => Some(GateKind::Sdg),
        7 => Some(GateKind::Tdg),
        _ => None,
    }
}

enum Rewrite {
    Cancel,
    Fuse(GateKind),
    Keep,
}

fn rewrite_single(prev: GateKind, next: GateKind) -> Rewrite {
    if let (Some(a), Some(b)) = (phase_units(prev), phase_units(next)) {
        let sum = (a + b) % 8;
        return match sum {
            0 => Rewrite::Cancel,
            _ => phase_gate(sum).map_or(Rewrite::Keep, Rewrite::Fuse),
        };
    }
    match (prev, next) {
        (GateKind::H, GateKind::H) | (GateKind::X, GateKind::X) => Rewrite::Cancel,
        _ => Rewrite::Keep,
    }
}

fn cancels_two(prev: &Gate, next: &Gate) -> bool {
    match (prev.kind, prev.operands, next.kind, next.operands) {
        (GateKind::Cnot, Operands::Two(a, b), GateKind::Cnot, Operands::Two(c, d)) => {
            a == c && b == d
        }
        (GateKind::Cz, Operands::Two(a, b), GateKind::Cz, Operands::Two(c, d)) => {
            (a == c && b == d) || (a == d && b == c)
        }
        _ => false,
    }
}

struct Pass {
    out: Vec<Option<Gate>>,
    /// Live output indices per qubit, most recent last.
    stacks: Vec<Vec<usize>>,
}

impl Pass {
    fn top(&self, q: usize) -> Option<usize> {
        self.stacks[q].last().copied()
    }

    fn remove(&mut self, idx: usize) {
        let gate = self.out[idx].take().expect("live gate");
        for q in gate.operands.iter() {
            let popped = self.stacks[q].pop();
            debug_assert_eq!(popped, Some(idx));
        }
    }

    fn append(&mut self, gate: Gate) {
        let idx = self.out.len();
        for q in gate.operands.iter() {
            self.stacks[q].push(idx);
        }
        self.out.push(Some(gate));
    }

    fn feed(&mut self, gate: Gate) {
        match gate.operands {
            Operands::One(q) => {
                if let Some(idx) = self.top(q) {
                    let prev = self.out[idx].expect("live gate");
                    if let Operands::One(_) = prev.operands {
                        match rewrite_single(prev.kind, gate.kind) {
                            Rewrite::Cancel => return self.remove(idx),
                            Rewrite::Fuse(kind) => {
                                self.remove(idx);
                                return self.feed(Gate::one(kind, q));
                            }
                            Rewrite::Keep => {}
                        }
                    }
                }
                self.append(gate);
            }
            Operands::Two(a, b) => {
                if let (Some(i), Some(j)) = (self.top(a), self.top(b)) {
                    if i == j && cancels_two(&self.out[i].expect("live gate"), &gate) {
                        return self.remove(i);
                    }
                }
                self.append(gate);
            }
        }
    }
}

/// Remove adjacent inverse pairs and fuse adjacent diagonal phase gates.
///
/// Rewrites only look at the most recent surviving gate on each qubit, so
/// nothing commutes through a CNOT. Fused results are re-examined against
/// the gate they now follow, which makes the pass idempotent. Every rewrite
/// is exact, including global phase.
pub fn peephole_cancel(g: &GateList) -> GateList {
    let mut pass = Pass {
        out: Vec::with_capacity(g.len()),
        stacks: vec![Vec::new(); g.qubit_count()],
    };
    for &gate in g.gates() {
        pass.feed(gate);
    }
    let gates = pass.out.into_iter().flatten().collect();
    GateList::from_validated(g.qubit_count(), gates)
}
