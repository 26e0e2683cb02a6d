//! Base-`d` quantum Fourier transform and phase estimation circuits.
//!
//! Wire layout for phase estimation: clock qudits on wires `0..n_r` (wire 0
//! is the most significant clock digit), system register on the wires after
//! them.

use serde::Serialize;

use crate::circuit::{Circuit, GateCategory};
use crate::error::{Error, Result};
use crate::gates::{self, GateSpec};
use crate::linalg::{self, CMatrix};
use crate::state::{ControlMode, Statevector, NORM_TOL};

/// QFT on `n` qudits: unitary entry `(k, j) = ω^{jk}/d^{n/2}`, `ω = e^{2πi/d^n}`.
///
/// Digit `q` gets a Hadamard followed by `CP_l` from every less significant
/// digit, then digits are reversed with `⌊n/2⌋` swaps.
pub fn build_qft(dim: usize, n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Domain("QFT needs at least one qudit".into()));
    }
    let mut c = Circuit::new(dim, n);
    for target in 0..n {
        c.gate(gates::h_gate(dim), &[target])?;
        for control in target + 1..n {
            let l = (control - target + 1) as u32;
            c.gate(gates::controlled_phase(dim, l), &[control, target])?;
        }
    }
    for q in 0..n / 2 {
        c.gate(gates::swap_gate(dim), &[q, n - 1 - q])?;
    }
    Ok(c)
}

pub fn build_iqft(dim: usize, n: usize) -> Result<Circuit> {
    Ok(build_qft(dim, n)?.inverse())
}

/// Phase estimation of `u` (a unitary on the system register) with `n_r`
/// clock qudits. Clock digit of weight `d^k` (wire `n_r-1-k`) drives a
/// power-mode controlled `U^{d^k}`.
pub fn build_qpe(u: &GateSpec, n_r: usize, dim: usize) -> Result<Circuit> {
    if u.dim() != dim {
        return Err(Error::Configuration(format!(
            "unitary has dimension {} but QPE runs in dimension {dim}",
            u.dim()
        )));
    }
    if n_r == 0 {
        return Err(Error::Domain("QPE needs at least one clock qudit".into()));
    }
    let m = u.arity();
    let mut c = Circuit::new(dim, n_r + m);
    for q in 0..n_r {
        c.gate(gates::h_gate(dim), &[q])?;
    }
    let system: Vec<usize> = (n_r..n_r + m).collect();
    let mut power = u.matrix().clone();
    for k in 0..n_r {
        if k > 0 {
            power = linalg::matrix_power(&power, dim as u64);
        }
        let gate = GateSpec::new(dim, m, power.clone(), format!("{}^{}^{k}", u.label(), dim))?;
        let weight = (dim as u64).pow(k as u32);
        c.controlled(
            &gate,
            n_r - 1 - k,
            &system,
            ControlMode::Power,
            GateCategory::ControlledUnitary { weight },
        )?;
    }
    let clock: Vec<usize> = (0..n_r).collect();
    c.append(&build_iqft(dim, n_r)?, &clock)?;
    Ok(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct QpeResult {
    #[serde(skip)]
    pub state: Statevector,
    pub n_r: usize,
    /// Probability of each clock value `v`, i.e. phase estimate `v / d^n_r`.
    pub clock_distribution: Vec<f64>,
    pub resolution: f64,
}

impl QpeResult {
    /// Clock value with the largest probability.
    pub fn mode(&self) -> usize {
        self.clock_distribution
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(v, _)| v)
            .unwrap_or(0)
    }

    /// Reduced density matrix of the system register.
    pub fn system_density(&self) -> CMatrix {
        let clock_size = self.clock_distribution.len();
        let sys_size = self.state.len() / clock_size;
        let amps = self.state.amplitudes();
        let mut rho = CMatrix::zeros(sys_size, sys_size);
        for v in 0..clock_size {
            let block = &amps[v * sys_size..(v + 1) * sys_size];
            for i in 0..sys_size {
                for j in 0..sys_size {
                    rho[(i, j)] += block[i] * block[j].conj();
                }
            }
        }
        rho
    }
}

/// Runs phase estimation on `|0...0>_clock ⊗ system_state`.
pub fn run_qpe(
    system_state: &Statevector,
    u: &GateSpec,
    n_r: usize,
    dim: usize,
) -> Result<QpeResult> {
    if system_state.dim() != dim || system_state.n_qudits() != u.arity() {
        return Err(Error::Configuration(format!(
            "system state of {} qudits (d={}) does not match a {}-qudit unitary (d={dim})",
            system_state.n_qudits(),
            system_state.dim(),
            u.arity()
        )));
    }
    let circuit = build_qpe(u, n_r, dim)?;
    let input = Statevector::zero(dim, n_r)?.tensor(system_state)?;
    let state = circuit.execute(&input)?;
    let sys_size = system_state.len();
    let clock_size = dim.pow(n_r as u32);
    let clock_distribution: Vec<f64> = state
        .amplitudes()
        .chunks(sys_size)
        .map(|block| block.iter().map(|a| a.norm_sqr()).sum())
        .collect();
    debug_assert_eq!(clock_distribution.len(), clock_size);
    let total: f64 = clock_distribution.iter().sum();
    if (total - 1.0).abs() > 1e3 * NORM_TOL {
        return Err(Error::InternalConsistency(format!(
            "QPE clock distribution sums to {total}"
        )));
    }
    Ok(QpeResult {
        state,
        n_r,
        clock_distribution,
        resolution: 1.0 / clock_size as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_entry;
    use num_complex::Complex64;

    #[test]
    fn single_digit_qft_is_hadamard() {
        let c = build_qft(3, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert!(max_abs_entry(&(c.unitary().unwrap() - gates::h_gate(3).matrix())) < 1e-12);
        let ic = build_iqft(3, 1).unwrap();
        assert_eq!(ic.instructions().len(), 1);
        assert!(
            max_abs_entry(&(ic.unitary().unwrap() - gates::h_gate(3).matrix().adjoint())) < 1e-12
        );
    }

    #[test]
    fn qft_of_zero_is_uniform() {
        let c = build_qft(3, 2).unwrap();
        let out = c.execute(&Statevector::zero(3, 2).unwrap()).unwrap();
        for a in out.amplitudes() {
            assert!((a - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gate_counts() {
        for n in 1..=6 {
            let t = *build_qft(3, n).unwrap().tally();
            assert_eq!(t.controlled_phase, n * (n - 1) / 2);
            assert_eq!(t.swap, n / 2);
            assert_eq!(t.single_qudit, n);
        }
    }

    #[test]
    fn qpe_on_clock_gate() {
        let z = gates::z_gate(3);
        let one = Statevector::basis_state(3, 1, 1).unwrap();
        let r = run_qpe(&one, &z, 1, 3).unwrap();
        assert!((r.clock_distribution[1] - 1.0).abs() < 1e-9);

        let zero = Statevector::zero(3, 1).unwrap();
        let r = run_qpe(&zero, &z, 2, 3).unwrap();
        assert!((r.clock_distribution[0] - 1.0).abs() < 1e-9);
        assert_eq!(r.mode(), 0);

        let id = GateSpec::new(3, 1, CMatrix::identity(3, 3), "I").unwrap();
        let h = zero.apply_gate(&gates::h_gate(3), &[0]).unwrap();
        let r = run_qpe(&h, &id, 2, 3).unwrap();
        assert!((r.clock_distribution[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn qpe_controlled_weights() {
        let z = gates::z_gate(2);
        for n_r in 1..=5 {
            let c = build_qpe(&z, n_r, 2).unwrap();
            assert_eq!(c.tally().controlled_unitary_weight, (1u64 << n_r) - 1);
            assert_eq!(c.tally().controlled_unitary, n_r);
        }
    }

    #[test]
    fn qpe_rejects_mismatch() {
        let z = gates::z_gate(3);
        let s = Statevector::zero(2, 1).unwrap();
        assert!(run_qpe(&s, &z, 2, 3).is_err());
        assert!(build_qpe(&z, 0, 3).is_err());
        assert!(build_qft(3, 0).is_err());
    }
}
