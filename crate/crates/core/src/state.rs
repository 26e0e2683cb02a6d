//! Dense statevectors over registers of equal-dimension qudits.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::kernel;

/// Norm and unitarity tolerance for gate application.
pub const NORM_TOL: f64 = 1e-10;
/// Normalization tolerance for freshly constructed states.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// How a single control qudit drives a controlled gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlMode {
    /// Control digit `j` applies the `j`-th matrix power of the gate.
    Power,
    /// The gate fires only when the control digit equals `m`.
    Select(usize),
}

/// A computational basis label: base-`d` digits, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisIndex {
    dim: usize,
    digits: Vec<usize>,
    value: usize,
}

impl BasisIndex {
    pub fn from_value(dim: usize, n_qudits: usize, value: usize) -> Result<Self> {
        check_dim(dim)?;
        let size = register_size(dim, n_qudits)?;
        if value >= size {
            return Err(Error::Domain(format!(
                "basis index {value} out of range for {n_qudits} qudits of dimension {dim}"
            )));
        }
        let mut digits = vec![0; n_qudits];
        let mut rem = value;
        for slot in digits.iter_mut().rev() {
            *slot = rem % dim;
            rem /= dim;
        }
        Ok(Self { dim, digits, value })
    }

    pub fn from_digits(dim: usize, digits: &[usize]) -> Result<Self> {
        check_dim(dim)?;
        let mut value = 0usize;
        for &d in digits {
            if d >= dim {
                return Err(Error::Domain(format!("digit {d} not valid in base {dim}")));
            }
            value = value * dim + d;
        }
        Ok(Self {
            dim,
            digits: digits.to_vec(),
            value,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn value(&self) -> usize {
        self.value
    }
}

/// Dense amplitude vector of `n_qudits` qudits, each of dimension `dim`.
///
/// Amplitude `i` belongs to the basis state whose base-`dim` digits (qudit 0
/// first) spell `i`. Operations return new states; the `_mut` variants update
/// an exclusively owned buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    dim: usize,
    n_qudits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Domain(format!(
            "qudit dimension must be >= 2, got {dim}"
        )));
    }
    Ok(())
}

fn register_size(dim: usize, n_qudits: usize) -> Result<usize> {
    dim.checked_pow(n_qudits as u32).ok_or_else(|| {
        Error::Domain(format!(
            "register of {n_qudits} qudits of dimension {dim} is too large"
        ))
    })
}

impl Statevector {
    /// The all-zero basis state `|0...0>`.
    pub fn zero(dim: usize, n_qudits: usize) -> Result<Self> {
        Self::basis_state(dim, n_qudits, 0)
    }

    pub fn basis_state(dim: usize, n_qudits: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        let size = register_size(dim, n_qudits)?;
        if index >= size {
            return Err(Error::Domain(format!(
                "basis index {index} out of range [0, {size})"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            dim,
            n_qudits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes without normalizing them.
    pub fn from_amplitudes(
        dim: usize,
        n_qudits: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        check_dim(dim)?;
        let size = register_size(dim, n_qudits)?;
        if amplitudes.len() != size {
            return Err(Error::Domain(format!(
                "expected {size} amplitudes for {n_qudits} qudits of dimension {dim}, got {}",
                amplitudes.len()
            )));
        }
        Ok(Self {
            dim,
            n_qudits,
            amplitudes,
        })
    }

    /// Amplitude-encodes `vec` on the fewest qudits that hold it, zero padding
    /// the tail. Returns the state and the norm of the input vector.
    pub fn amplitude_encode(dim: usize, vec: &[Complex64]) -> Result<(Self, f64)> {
        check_dim(dim)?;
        if vec.is_empty() {
            return Err(Error::Domain("cannot encode an empty vector".into()));
        }
        let norm = vec.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain(
                "cannot encode a zero or non-finite vector".into(),
            ));
        }
        let n_qudits = qudits_for_length(dim, vec.len());
        let size = register_size(dim, n_qudits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
        for (slot, a) in amplitudes.iter_mut().zip(vec) {
            *slot = a / norm;
        }
        Ok((
            Self {
                dim,
                n_qudits,
                amplitudes,
            },
            norm,
        ))
    }

    pub fn amplitude_encode_real(dim: usize, vec: &[f64]) -> Result<(Self, f64)> {
        let complex: Vec<Complex64> = vec.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::amplitude_encode(dim, &complex)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qudits(&self) -> usize {
        self.n_qudits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, index: &BasisIndex) -> Complex64 {
        self.amplitudes[index.value()]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(Self {
            dim: self.dim,
            n_qudits: self.n_qudits,
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    /// `self ⊗ other`, with `self` on the more significant qudits.
    pub fn tensor(&self, other: &Statevector) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Configuration(format!(
                "cannot tensor dimension {} with dimension {}",
                self.dim, other.dim
            )));
        }
        let mut amplitudes = Vec::with_capacity(self.len() * other.len());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Self::from_amplitudes(self.dim, self.n_qudits + other.n_qudits, amplitudes)
    }

    fn check_wires(&self, wires: &[usize]) -> Result<()> {
        for (k, &w) in wires.iter().enumerate() {
            if w >= self.n_qudits {
                return Err(Error::Configuration(format!(
                    "qudit {w} out of range for a {}-qudit register",
                    self.n_qudits
                )));
            }
            if wires[..k].contains(&w) {
                return Err(Error::Configuration(format!("qudit {w} used twice")));
            }
        }
        Ok(())
    }

    fn check_gate(&self, gate: &GateSpec, n_targets: usize) -> Result<()> {
        if gate.dim() != self.dim {
            return Err(Error::Configuration(format!(
                "gate '{}' has dimension {} but the register has dimension {}",
                gate.label(),
                gate.dim(),
                self.dim
            )));
        }
        if gate.arity() != n_targets {
            return Err(Error::Configuration(format!(
                "gate '{}' acts on {} qudits but {} targets were given",
                gate.label(),
                gate.arity(),
                n_targets
            )));
        }
        Ok(())
    }

    pub fn apply_gate(&self, gate: &GateSpec, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_gate_mut(gate, targets)?;
        Ok(out)
    }

    pub fn apply_gate_mut(&mut self, gate: &GateSpec, targets: &[usize]) -> Result<()> {
        self.check_gate(gate, targets.len())?;
        self.check_wires(targets)?;
        self.amplitudes = kernel::apply_multiplexed(
            &self.amplitudes,
            self.dim,
            self.n_qudits,
            &[],
            targets,
            &[Some(gate.matrix().clone())],
        );
        Ok(())
    }

    /// Applies `gate` on `targets` conditioned on one control qudit.
    pub fn apply_controlled(
        &self,
        gate: &GateSpec,
        control: usize,
        targets: &[usize],
        mode: ControlMode,
    ) -> Result<Self> {
        let mut out = self.clone();
        out.apply_controlled_mut(gate, control, targets, mode)?;
        Ok(out)
    }

    pub fn apply_controlled_mut(
        &mut self,
        gate: &GateSpec,
        control: usize,
        targets: &[usize],
        mode: ControlMode,
    ) -> Result<()> {
        self.check_gate(gate, targets.len())?;
        let mut wires = vec![control];
        wires.extend_from_slice(targets);
        self.check_wires(&wires)?;
        let blocks = controlled_blocks(gate.matrix(), self.dim, mode)?;
        self.apply_multiplexed_mut(&[control], targets, &blocks)
    }

    /// Applies `blocks[v]` to `targets` whenever the controls read value `v`.
    pub fn apply_multiplexed_mut(
        &mut self,
        controls: &[usize],
        targets: &[usize],
        blocks: &[Option<DMatrix<Complex64>>],
    ) -> Result<()> {
        let mut wires = controls.to_vec();
        wires.extend_from_slice(targets);
        self.check_wires(&wires)?;
        let expected_blocks = self.dim.pow(controls.len() as u32);
        if blocks.len() != expected_blocks {
            return Err(Error::Configuration(format!(
                "{} control qudits need {expected_blocks} blocks, got {}",
                controls.len(),
                blocks.len()
            )));
        }
        let local = self.dim.pow(targets.len() as u32);
        if let Some(bad) = blocks
            .iter()
            .flatten()
            .find(|m| m.nrows() != local || m.ncols() != local)
        {
            return Err(Error::Configuration(format!(
                "block of shape {}x{} does not act on {} target qudits",
                bad.nrows(),
                bad.ncols(),
                targets.len()
            )));
        }
        self.amplitudes = kernel::apply_multiplexed(
            &self.amplitudes,
            self.dim,
            self.n_qudits,
            controls,
            targets,
            blocks,
        );
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Statevector) -> Result<Complex64> {
        if self.dim != other.dim || self.n_qudits != other.n_qudits {
            return Err(Error::Domain(format!(
                "inner product of mismatched registers ({} x d={}) and ({} x d={})",
                self.n_qudits, self.dim, other.n_qudits, other.dim
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Born probabilities of every outcome of one qudit.
    pub fn outcome_probabilities(&self, qudit: usize) -> Result<Vec<f64>> {
        self.check_wires(&[qudit])?;
        let stride = kernel::strides(self.dim, self.n_qudits)[qudit];
        Ok(kernel::marginal(&self.amplitudes, self.dim, stride))
    }

    /// Projects `qudit` onto `outcome`, returning the Born probability and the
    /// renormalized post-measurement state (the qudit stays in the register).
    pub fn project_and_renormalize(&self, qudit: usize, outcome: usize) -> Result<(f64, Self)> {
        self.check_wires(&[qudit])?;
        if outcome >= self.dim {
            return Err(Error::Domain(format!(
                "outcome {outcome} invalid for dimension {}",
                self.dim
            )));
        }
        let stride = kernel::strides(self.dim, self.n_qudits)[qudit];
        let mut amplitudes = self.amplitudes.clone();
        let mut prob = 0.0;
        for (i, a) in amplitudes.iter_mut().enumerate() {
            if (i / stride) % self.dim == outcome {
                prob += a.norm_sqr();
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        if prob <= f64::EPSILON * f64::EPSILON {
            return Err(Error::PostSelectionImpossible { qudit, outcome });
        }
        let scale = prob.sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= scale);
        Ok((
            prob,
            Self {
                dim: self.dim,
                n_qudits: self.n_qudits,
                amplitudes,
            },
        ))
    }

    /// Unnormalized amplitudes of the sub-register `keep` (a contiguous run
    /// of qudits) with every other qudit fixed to the digits in `fixed`.
    pub(crate) fn slice_register(
        &self,
        keep: std::ops::Range<usize>,
        fixed: &[(usize, usize)],
    ) -> Vec<Complex64> {
        let stride = kernel::strides(self.dim, self.n_qudits);
        let mut base = 0;
        for &(q, digit) in fixed {
            base += digit * stride[q];
        }
        let width = keep.len();
        let size = self.dim.pow(width as u32);
        (0..size)
            .map(|local| {
                let mut rem = local;
                let mut idx = base;
                for q in keep.clone().rev() {
                    idx += (rem % self.dim) * stride[q];
                    rem /= self.dim;
                }
                self.amplitudes[idx]
            })
            .collect()
    }
}

/// Expands a single-control gate into per-control-value blocks.
pub(crate) fn controlled_blocks(
    matrix: &DMatrix<Complex64>,
    dim: usize,
    mode: ControlMode,
) -> Result<Vec<Option<DMatrix<Complex64>>>> {
    match mode {
        ControlMode::Power => {
            let mut blocks = Vec::with_capacity(dim);
            blocks.push(None);
            let mut power = matrix.clone();
            for j in 1..dim {
                if j > 1 {
                    power = &power * matrix;
                }
                blocks.push(Some(power.clone()));
            }
            Ok(blocks)
        }
        ControlMode::Select(m) => {
            if m >= dim {
                return Err(Error::Configuration(format!(
                    "select value {m} invalid for dimension {dim}"
                )));
            }
            Ok((0..dim).map(|j| (j == m).then(|| matrix.clone())).collect())
        }
    }
}

/// Smallest `m >= 1` with `dim^m >= len`.
pub fn qudits_for_length(dim: usize, len: usize) -> usize {
    let mut m = 1;
    let mut cap = dim;
    while cap < len {
        cap *= dim;
        m += 1;
    }
    m
}
