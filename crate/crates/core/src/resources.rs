//! Closed-form register sizes and gate counts for HHL in dimension `d`.
//!
//! Register sizes are reported both as the real-valued logarithms and as the
//! integer ceilings a physical register needs.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

fn pow_u128(base: usize, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(u32::try_from(exp).ok()?)
}

/// Smallest `n ≥ 0` with `d^n ≥ target`.
fn ceil_log(target: u128, d: usize) -> usize {
    let mut n = 0;
    let mut acc: u128 = 1;
    while acc < target {
        acc = acc.saturating_mul(d as u128);
        n += 1;
    }
    n
}

/// `p log_d 10`.
pub fn clock_qudits_real(p: u32, d: usize) -> f64 {
    p as f64 * 10f64.ln() / (d as f64).ln()
}

/// `⌈p log_d 10⌉`, evaluated as the smallest `n` with `d^n ≥ 10^p`.
pub fn clock_qudits(p: u32, d: usize) -> usize {
    match 10u128.checked_pow(p) {
        Some(target) => ceil_log(target, d),
        None => clock_qudits_real(p, d).ceil() as usize,
    }
}

/// `log_d N`.
pub fn state_qudits_real(n: u128, d: usize) -> f64 {
    (n as f64).ln() / (d as f64).ln()
}

/// `⌈log_d N⌉`, at least 1.
pub fn state_qudits(n: u128, d: usize) -> usize {
    ceil_log(n, d).max(1)
}

/// Singles and doubles bound `N_s⁴`.
pub fn lcc_vector_length(n_s: u64) -> u128 {
    (n_s as u128).pow(4)
}

/// `Σ_{k<n_r} d^k = (d^n_r - 1)/(d - 1)`, saturating.
pub fn qpe_cu_applications(n_r: usize, d: usize) -> u128 {
    pow_u128(d, n_r).map_or(u128::MAX, |p| (p - 1) / (d as u128 - 1))
}

/// Controlled phases plus digit-reversal swaps, `n(n-1)/2 + ⌊n/2⌋`.
pub fn iqft_two_qudit_count(n_r: usize) -> usize {
    n_r * n_r.saturating_sub(1) / 2 + n_r / 2
}

/// `(n² - 1)/2` as a real; equals [`iqft_two_qudit_count`] for odd `n`.
pub fn iqft_two_qudit_formula(n_r: usize) -> f64 {
    ((n_r * n_r) as f64 - 1.0) / 2.0
}

/// One rotation per clock value, `d^n_r`, saturating.
pub fn ucr_rotation_count(n_r: usize, d: usize) -> u128 {
    pow_u128(d, n_r).unwrap_or(u128::MAX)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceEstimate {
    pub d: usize,
    pub p: u32,
    pub n: u128,
    pub n_s: Option<u64>,
    pub n_r: usize,
    pub n_r_real: f64,
    pub m: usize,
    pub m_real: f64,
    pub ancilla: usize,
    pub total: usize,
    pub cu_applications: u128,
    pub iqft_two_qudit: usize,
    pub iqft_formula: f64,
    pub ucr_rotations: u128,
    /// `(d²)^m`, the order of magnitude of a state-register unitary decomposition.
    pub decomposition_scale: f64,
}

impl ResourceEstimate {
    pub fn new(p: u32, n: u128, d: usize) -> Self {
        let n_r = clock_qudits(p, d);
        let m = state_qudits(n, d);
        ResourceEstimate {
            d,
            p,
            n,
            n_s: None,
            n_r,
            n_r_real: clock_qudits_real(p, d),
            m,
            m_real: state_qudits_real(n, d),
            ancilla: 1,
            total: n_r + m + 1,
            cu_applications: qpe_cu_applications(n_r, d),
            iqft_two_qudit: iqft_two_qudit_count(n_r),
            iqft_formula: iqft_two_qudit_formula(n_r),
            ucr_rotations: ucr_rotation_count(n_r, d),
            decomposition_scale: ((d * d) as f64).powi(m as i32),
        }
    }

    pub fn for_spin_orbitals(p: u32, n_s: u64, d: usize) -> Self {
        ResourceEstimate {
            n_s: Some(n_s),
            ..Self::new(p, lcc_vector_length(n_s), d)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    #[serde(flatten)]
    pub estimate: ResourceEstimate,
    /// Qubit total minus this row's total at the same `p` and `N`.
    pub total_difference: i64,
}

/// Every `(p, N_s, d)` combination, in that nesting order.
pub fn compare_table(p_list: &[u32], ns_list: &[u64], dims: &[usize]) -> Result<Vec<CompareRow>> {
    if p_list.is_empty() || ns_list.is_empty() || dims.is_empty() {
        return Err(Error::Configuration(
            "comparison needs nonempty p, N_s and d lists".into(),
        ));
    }
    if let Some(p) = p_list.iter().find(|&&p| p == 0) {
        return Err(Error::Configuration(format!(
            "precision p must be at least 1, got {p}"
        )));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Configuration(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    if let Some(n_s) = ns_list.iter().find(|&&n| n < 1) {
        return Err(Error::Configuration(format!(
            "N_s must be positive, got {n_s}"
        )));
    }
    let mut rows = Vec::with_capacity(p_list.len() * ns_list.len() * dims.len());
    for &p in p_list {
        for &n_s in ns_list {
            let qubit_total = ResourceEstimate::for_spin_orbitals(p, n_s, 2).total as i64;
            for &d in dims {
                let estimate = ResourceEstimate::for_spin_orbitals(p, n_s, d);
                let total_difference = qubit_total - estimate.total as i64;
                rows.push(CompareRow {
                    estimate,
                    total_difference,
                });
            }
        }
    }
    Ok(rows)
}

/// State-register sizes for `N_s` spin orbitals in binary and ternary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateRegisterRow {
    pub n_s: u64,
    pub n: u128,
    pub qubit_size: u128,
    pub m_b: usize,
    pub qutrit_size: u128,
    pub m_t: usize,
}

impl StateRegisterRow {
    pub fn new(n_s: u64) -> Self {
        let n = lcc_vector_length(n_s);
        let m_b = state_qudits(n, 2);
        let m_t = state_qudits(n, 3);
        StateRegisterRow {
            n_s,
            n,
            qubit_size: 1u128 << m_b,
            m_b,
            qutrit_size: 3u128.pow(m_t as u32),
            m_t,
        }
    }
}

pub const STATE_REGISTER_HEADER: &str = "N_s,N_s^4,2^m_b,m_b,3^m_t,m_t";

/// Even `N_s` from 2 to 20.
pub fn state_register_table() -> Vec<StateRegisterRow> {
    (1..=10).map(|k| StateRegisterRow::new(2 * k)).collect()
}

pub fn state_register_csv(rows: &[StateRegisterRow]) -> String {
    let mut out = String::from(STATE_REGISTER_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n_s, r.n, r.qubit_size, r.m_b, r.qutrit_size, r.m_t
        );
    }
    out
}
