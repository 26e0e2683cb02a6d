//! Ordered gate lists over a qudit register, with per-category tallies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::linalg::CMatrix;
use crate::state::{controlled_blocks, ControlMode, Statevector};

/// What a gate counts as in resource tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GateCategory {
    SingleQudit,
    ControlledPhase,
    Swap,
    OtherTwoQudit,
    /// Controlled power of the system unitary; `weight` is the number of base
    /// applications it stands for.
    ControlledUnitary {
        weight: u64,
    },
    /// Uniformly controlled rotation; `slots` is the number of clock values it
    /// multiplexes over.
    UniformRotation {
        slots: u64,
    },
    /// Controlled register swap used by the overlap test.
    ControlledSwap,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateTally {
    pub single_qudit: usize,
    pub controlled_phase: usize,
    pub swap: usize,
    pub other_two_qudit: usize,
    pub controlled_unitary: usize,
    pub controlled_unitary_weight: u64,
    pub uniform_rotations: usize,
    pub rotation_slots: u64,
    pub controlled_swap: usize,
}

impl GateTally {
    pub fn two_qudit(&self) -> usize {
        self.controlled_phase + self.swap + self.other_two_qudit
    }

    fn record(&mut self, category: GateCategory) {
        match category {
            GateCategory::SingleQudit => self.single_qudit += 1,
            GateCategory::ControlledPhase => self.controlled_phase += 1,
            GateCategory::Swap => self.swap += 1,
            GateCategory::OtherTwoQudit => self.other_two_qudit += 1,
            GateCategory::ControlledUnitary { weight } => {
                self.controlled_unitary += 1;
                self.controlled_unitary_weight += weight;
            }
            GateCategory::UniformRotation { slots } => {
                self.uniform_rotations += 1;
                self.rotation_slots += slots;
            }
            GateCategory::ControlledSwap => self.controlled_swap += 1,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Operation {
    Gate {
        gate: GateSpec,
        targets: Vec<usize>,
    },
    /// `blocks[v]` acts on `targets` when `controls` read `v` (`None` = identity).
    Multiplexed {
        label: String,
        controls: Vec<usize>,
        targets: Vec<usize>,
        blocks: Vec<Option<CMatrix>>,
    },
}

impl Operation {
    fn wires(&self) -> Vec<usize> {
        match self {
            Operation::Gate { targets, .. } => targets.clone(),
            Operation::Multiplexed {
                controls, targets, ..
            } => controls.iter().chain(targets).copied().collect(),
        }
    }

    fn adjoint(&self) -> Self {
        match self {
            Operation::Gate { gate, targets } => Operation::Gate {
                gate: gate.adjoint(),
                targets: targets.clone(),
            },
            Operation::Multiplexed {
                label,
                controls,
                targets,
                blocks,
            } => Operation::Multiplexed {
                label: format!("{label}†"),
                controls: controls.clone(),
                targets: targets.clone(),
                blocks: blocks
                    .iter()
                    .map(|b| b.as_ref().map(|m| m.adjoint()))
                    .collect(),
            },
        }
    }

    fn remap(&self, wire_map: &[usize]) -> Self {
        let map = |ws: &[usize]| ws.iter().map(|&w| wire_map[w]).collect::<Vec<_>>();
        match self {
            Operation::Gate { gate, targets } => Operation::Gate {
                gate: gate.clone(),
                targets: map(targets),
            },
            Operation::Multiplexed {
                label,
                controls,
                targets,
                blocks,
            } => Operation::Multiplexed {
                label: label.clone(),
                controls: map(controls),
                targets: map(targets),
                blocks: blocks.clone(),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instruction {
    pub op: Operation,
    pub category: GateCategory,
}

#[derive(Debug, Clone)]
pub struct Circuit {
    dim: usize,
    n_qudits: usize,
    instructions: Vec<Instruction>,
    tally: GateTally,
}

impl Circuit {
    pub fn new(dim: usize, n_qudits: usize) -> Self {
        Self {
            dim,
            n_qudits,
            instructions: Vec::new(),
            tally: GateTally::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qudits(&self) -> usize {
        self.n_qudits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn tally(&self) -> &GateTally {
        &self.tally
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    fn check_wires(&self, wires: &[usize]) -> Result<()> {
        for (k, &w) in wires.iter().enumerate() {
            if w >= self.n_qudits {
                return Err(Error::Configuration(format!(
                    "wire {w} out of range for a {}-qudit circuit",
                    self.n_qudits
                )));
            }
            if wires[..k].contains(&w) {
                return Err(Error::Configuration(format!("wire {w} used twice")));
            }
        }
        Ok(())
    }

    pub fn push(&mut self, instruction: Instruction) -> Result<()> {
        self.check_wires(&instruction.op.wires())?;
        if let Operation::Gate { gate, targets } = &instruction.op {
            if gate.dim() != self.dim || gate.arity() != targets.len() {
                return Err(Error::Configuration(format!(
                    "gate '{}' does not fit {} targets of dimension {}",
                    gate.label(),
                    targets.len(),
                    self.dim
                )));
            }
        }
        self.tally.record(instruction.category);
        self.instructions.push(instruction);
        Ok(())
    }

    /// Appends a gate, inferring its tally category from its arity and label.
    pub fn gate(&mut self, gate: GateSpec, targets: &[usize]) -> Result<()> {
        let category = match (gate.arity(), gate.label()) {
            (1, _) => GateCategory::SingleQudit,
            (2, l) if l.starts_with("CP") => GateCategory::ControlledPhase,
            (2, l) if l.starts_with("SWAP") => GateCategory::Swap,
            _ => GateCategory::OtherTwoQudit,
        };
        self.push(Instruction {
            op: Operation::Gate {
                gate,
                targets: targets.to_vec(),
            },
            category,
        })
    }

    /// Appends a single-control gate in power or select mode.
    pub fn controlled(
        &mut self,
        gate: &GateSpec,
        control: usize,
        targets: &[usize],
        mode: ControlMode,
        category: GateCategory,
    ) -> Result<()> {
        let blocks = controlled_blocks(gate.matrix(), self.dim, mode)?;
        self.multiplexed(gate.label(), &[control], targets, blocks, category)
    }

    pub fn multiplexed(
        &mut self,
        label: &str,
        controls: &[usize],
        targets: &[usize],
        blocks: Vec<Option<CMatrix>>,
        category: GateCategory,
    ) -> Result<()> {
        let expected = self.dim.pow(controls.len() as u32);
        if blocks.len() != expected {
            return Err(Error::Configuration(format!(
                "'{label}' needs {expected} blocks, got {}",
                blocks.len()
            )));
        }
        self.push(Instruction {
            op: Operation::Multiplexed {
                label: label.to_string(),
                controls: controls.to_vec(),
                targets: targets.to_vec(),
                blocks,
            },
            category,
        })
    }

    /// Appends every instruction of `other`, sending its wire `w` to `wire_map[w]`.
    pub fn append(&mut self, other: &Circuit, wire_map: &[usize]) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::Configuration(format!(
                "cannot append a dimension-{} circuit to a dimension-{} circuit",
                other.dim, self.dim
            )));
        }
        if wire_map.len() != other.n_qudits {
            return Err(Error::Configuration(format!(
                "wire map has {} entries for a {}-qudit circuit",
                wire_map.len(),
                other.n_qudits
            )));
        }
        for inst in &other.instructions {
            self.push(Instruction {
                op: inst.op.remap(wire_map),
                category: inst.category,
            })?;
        }
        Ok(())
    }

    /// The adjoint circuit: reversed order, every operation conjugate-transposed.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            dim: self.dim,
            n_qudits: self.n_qudits,
            instructions: self
                .instructions
                .iter()
                .rev()
                .map(|inst| Instruction {
                    op: inst.op.adjoint(),
                    category: inst.category,
                })
                .collect(),
            tally: self.tally,
        }
    }

    pub fn execute(&self, state: &Statevector) -> Result<Statevector> {
        let mut out = state.clone();
        self.execute_mut(&mut out)?;
        Ok(out)
    }

    pub fn execute_mut(&self, state: &mut Statevector) -> Result<()> {
        if state.dim() != self.dim || state.n_qudits() != self.n_qudits {
            return Err(Error::Configuration(format!(
                "circuit on {} qudits (d={}) cannot run on a register of {} qudits (d={})",
                self.n_qudits,
                self.dim,
                state.n_qudits(),
                state.dim()
            )));
        }
        for inst in &self.instructions {
            match &inst.op {
                Operation::Gate { gate, targets } => state.apply_gate_mut(gate, targets)?,
                Operation::Multiplexed {
                    controls,
                    targets,
                    blocks,
                    ..
                } => state.apply_multiplexed_mut(controls, targets, blocks)?,
            }
        }
        Ok(())
    }

    /// Dense unitary of the whole circuit, column `j` = image of basis state `j`.
    /// Intended for small registers.
    pub fn unitary(&self) -> Result<CMatrix> {
        let size = self.dim.pow(self.n_qudits as u32);
        let mut m = CMatrix::zeros(size, size);
        for j in 0..size {
            let out = self.execute(&Statevector::basis_state(self.dim, self.n_qudits, j)?)?;
            for (i, a) in out.amplitudes().iter().enumerate() {
                m[(i, j)] = *a;
            }
        }
        Ok(m)
    }
}
