//! HHL linear-system solver in qudit dimension `d`.
//!
//! Register layout (most significant first): `n_r` clock qudits, `m` state
//! qudits holding the amplitude-encoded right-hand side, one ancilla. The
//! pipeline is QPE of `e^{iAt}`, a uniformly controlled rotation of the
//! ancilla, inverse QPE, and post-selection of the ancilla success level
//! together with the clock returning to `|0...0>`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, GateCategory, GateTally};
use crate::error::{Error, Result};
use crate::gates::{self, rotation_matrix};
use crate::linalg::{self, CMatrix, HermitianSpectrum};
use crate::qft::build_qpe;
use crate::state::{qudits_for_length, Statevector};

/// What the controlled rotation does at clock values whose grid eigenvalue
/// lies below the inversion constant (`C / λ_grid(v) > 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InversionPolicy {
    /// Rotate fully onto the success level (`θ = π`).
    Clamp,
    /// Refuse to build the rotation.
    Reject,
}

/// Free parameters of one HHL run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HhlConfig {
    pub dim: usize,
    pub n_r: usize,
    /// Evolution time: eigenvalue `λ` is written to the clock as phase `λt/2π`.
    pub t: f64,
    /// Inversion constant, in the units of `A`'s eigenvalues.
    pub c: f64,
    /// Truncate `C` (as a phase) to `n_r` base-`d` digits before use.
    pub c_expansion: bool,
    /// Ancilla starts in level `.0` and success is level `.1`.
    pub rotation_plane: (usize, usize),
    pub inversion: InversionPolicy,
}

impl HhlConfig {
    pub fn new(dim: usize, n_r: usize, t: f64, c: f64) -> Result<Self> {
        let config = Self {
            dim,
            n_r,
            t,
            c,
            c_expansion: false,
            rotation_plane: (0, 1),
            inversion: InversionPolicy::Clamp,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_c_expansion(mut self, on: bool) -> Self {
        self.c_expansion = on;
        self
    }

    pub fn with_rotation_plane(mut self, from: usize, to: usize) -> Result<Self> {
        self.rotation_plane = (from, to);
        self.validate()?;
        Ok(self)
    }

    pub fn with_inversion(mut self, policy: InversionPolicy) -> Self {
        self.inversion = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Configuration(format!("dimension {} < 2", self.dim)));
        }
        if self.n_r == 0 {
            return Err(Error::Configuration("n_r must be at least 1".into()));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Configuration(format!(
                "t must be positive, got {}",
                self.t
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Configuration(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        let (i, j) = self.rotation_plane;
        if i == j || i >= self.dim || j >= self.dim {
            return Err(Error::Configuration(format!(
                "rotation plane ({i}, {j}) invalid for dimension {}",
                self.dim
            )));
        }
        Ok(())
    }

    pub fn clock_size(&self) -> usize {
        self.dim.pow(self.n_r as u32)
    }

    /// `C` on the eigenphase scale, `C t / 2π`.
    pub fn c_phase(&self) -> f64 {
        self.c * self.t / (2.0 * PI)
    }

    /// Eigenvalue represented by clock value `v`: `2π v / (d^n_r t)`.
    pub fn grid_eigenvalue(&self, v: usize) -> f64 {
        2.0 * PI * v as f64 / (self.clock_size() as f64 * self.t)
    }

    /// The inversion constant actually used by the rotation.
    pub fn effective_c(&self) -> Result<f64> {
        if !self.c_expansion {
            return Ok(self.c);
        }
        let truncated = expand_constant(self.c_phase(), self.dim, self.n_r)?;
        if truncated == 0.0 {
            return Err(Error::Configuration(format!(
                "C = {} truncates to zero at {} base-{} digits",
                self.c, self.n_r, self.dim
            )));
        }
        Ok(truncated * 2.0 * PI / self.t)
    }
}

/// `floor(c · base^digits) / base^digits`.
pub fn expand_constant(c: f64, base: usize, digits: usize) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("constant {c} not in (0, 1)")));
    }
    if base < 2 || digits == 0 {
        return Err(Error::Domain(format!(
            "need base >= 2 and at least one digit (base {base}, digits {digits})"
        )));
    }
    let scale = (base as f64).powi(digits as i32);
    let scaled = c * scale;
    let nearest = scaled.round();
    // representation error must not knock an exact digit string down by one
    let count = if (scaled - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        scaled.floor()
    };
    Ok(count / scale)
}

/// Rotation angle for every clock value; `None` at `v = 0` (identity).
pub fn ucr_angles(config: &HhlConfig) -> Result<Vec<Option<f64>>> {
    config.validate()?;
    let c_eff = config.effective_c()?;
    (0..config.clock_size())
        .map(|v| {
            if v == 0 {
                return Ok(None);
            }
            let lambda = config.grid_eigenvalue(v);
            let ratio = c_eff / lambda;
            if ratio > 1.0 + 1e-12 && config.inversion == InversionPolicy::Reject {
                return Err(Error::InversionConstantTooLarge {
                    c: c_eff,
                    lambda,
                    value: v,
                });
            }
            Ok(Some(2.0 * ratio.min(1.0).asin()))
        })
        .collect()
}

/// Uniformly controlled rotation on `n_r` clock wires (`0..n_r`) and one
/// ancilla wire (`n_r`): `Σ_v |v><v| ⊗ R_ij(θ_v)`.
pub fn build_ucr(dim: usize, n_r: usize, config: &HhlConfig) -> Result<Circuit> {
    if config.dim != dim || config.n_r != n_r {
        return Err(Error::Configuration(format!(
            "config is for d={}, n_r={} but UCR requested for d={dim}, n_r={n_r}",
            config.dim, config.n_r
        )));
    }
    let (i, j) = config.rotation_plane;
    let blocks: Vec<Option<CMatrix>> = ucr_angles(config)?
        .into_iter()
        .map(|theta| theta.map(|th| rotation_matrix(dim, i, j, th)))
        .collect();
    let mut c = Circuit::new(dim, n_r + 1);
    let controls: Vec<usize> = (0..n_r).collect();
    let slots = blocks.len() as u64;
    c.multiplexed(
        "UCR",
        &controls,
        &[n_r],
        blocks,
        GateCategory::UniformRotation { slots },
    )?;
    Ok(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct HhlSolution {
    /// Normalized solution state on the state register (padded length `d^m`).
    #[serde(skip)]
    pub x_tilde: Statevector,
    /// Classical estimate of `A⁻¹b` (original length).
    pub x_vector: Vec<Complex64>,
    /// Probability of the ancilla success level with the clock back at zero.
    pub p_success: f64,
    /// Marginal probability of the ancilla success level.
    pub p_ancilla: f64,
    /// `|<b|x̃>|`.
    pub overlap: f64,
    pub b_norm: f64,
    pub c_eff: f64,
    pub config: HhlConfig,
    pub tally: GateTally,
}

impl HhlSolution {
    /// Ancilla-success weight left on non-zero clock values.
    pub fn clock_residual(&self) -> f64 {
        (self.p_ancilla - self.p_success).max(0.0)
    }

    /// Norm of the solution for the normalized right-hand side, `√p / C`.
    pub fn normalized_solution_norm(&self) -> f64 {
        self.p_success.sqrt() / self.c_eff
    }

    /// `b† x_vector` with the unnormalized right-hand side.
    pub fn b_dot_x(&self, b: &[Complex64]) -> Complex64 {
        b.iter()
            .zip(&self.x_vector)
            .map(|(bi, xi)| bi.conj() * xi)
            .sum()
    }
}

fn check_spectrum(spectrum: &HermitianSpectrum, t: f64) -> Result<()> {
    if spectrum.min() <= 0.0 {
        return Err(Error::Domain(format!(
            "matrix is not positive definite (smallest eigenvalue {})",
            spectrum.min()
        )));
    }
    for &l in &spectrum.eigenvalues {
        let phase = l * t / (2.0 * PI);
        if !(phase > 0.0 && phase < 1.0) {
            return Err(Error::EigenphaseOutOfRange {
                eigenvalue: l,
                phase,
                t,
            });
        }
    }
    Ok(())
}

/// Builds the full HHL circuit on `n_r + m + 1` wires for a padded unitary.
fn build_hhl_circuit(u: &CMatrix, config: &HhlConfig, m: usize) -> Result<Circuit> {
    let (dim, n_r) = (config.dim, config.n_r);
    let ancilla = n_r + m;
    let u_gate = gates::unitary_gate(dim, u.clone(), "U")?;
    let qpe = build_qpe(&u_gate, n_r, dim)?;
    let ucr = build_ucr(dim, n_r, config)?;

    let mut c = Circuit::new(dim, n_r + m + 1);
    let qpe_wires: Vec<usize> = (0..n_r + m).collect();
    let mut ucr_wires: Vec<usize> = (0..n_r).collect();
    ucr_wires.push(ancilla);
    c.append(&qpe, &qpe_wires)?;
    c.append(&ucr, &ucr_wires)?;
    c.append(&qpe.inverse(), &qpe_wires)?;
    Ok(c)
}

/// Solves `A x = b` for Hermitian positive-definite `A`.
pub fn hhl_solve(a: &CMatrix, b: &[Complex64], config: &HhlConfig) -> Result<HhlSolution> {
    config.validate()?;
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::Configuration(format!(
            "matrix is {n}x{} but right-hand side has length {}",
            a.ncols(),
            b.len()
        )));
    }
    let spectrum = HermitianSpectrum::new(a)?;
    check_spectrum(&spectrum, config.t)?;
    let c_eff = config.effective_c()?;

    let dim = config.dim;
    let n_r = config.n_r;
    let (b_state, b_norm) = Statevector::amplitude_encode(dim, b)?;
    let m = qudits_for_length(dim, n);
    let size = b_state.len();

    // padded directions carry no amplitude of b; give them the top eigenvalue
    let mut u =
        CMatrix::identity(size, size) * Complex64::from_polar(1.0, spectrum.max() * config.t);
    u.view_mut((0, 0), (n, n))
        .copy_from(&gates::evolution_from_spectrum(&spectrum, config.t));

    let circuit = build_hhl_circuit(&u, config, m)?;

    let (from, to) = config.rotation_plane;
    let ancilla = Statevector::basis_state(dim, 1, from)?;
    let input = Statevector::zero(dim, n_r)?
        .tensor(&b_state)?
        .tensor(&ancilla)?;
    let output = circuit.execute(&input)?;

    let ancilla_wire = n_r + m;
    let p_ancilla = output.outcome_probabilities(ancilla_wire)?[to];
    let mut fixed: Vec<(usize, usize)> = (0..n_r).map(|q| (q, 0)).collect();
    fixed.push((ancilla_wire, to));
    let x_amps = output.slice_register(n_r..n_r + m, &fixed);
    let p_success: f64 = x_amps.iter().map(|a| a.norm_sqr()).sum();
    if p_success <= 1e-300 {
        return Err(Error::PostSelectionImpossible {
            qudit: ancilla_wire,
            outcome: to,
        });
    }
    let scale = p_success.sqrt();
    let x_tilde = Statevector::from_amplitudes(dim, m, x_amps.iter().map(|a| a / scale).collect())?;
    let x_vector: Vec<Complex64> = x_amps[..n].iter().map(|a| a * (b_norm / c_eff)).collect();
    let overlap = b_state.inner_product(&x_tilde)?.norm().min(1.0);

    Ok(HhlSolution {
        x_tilde,
        x_vector,
        p_success,
        p_ancilla,
        overlap,
        b_norm,
        c_eff,
        config: config.clone(),
        tally: *circuit.tally(),
    })
}

/// Real-valued convenience wrapper around [`hhl_solve`].
pub fn hhl_solve_real(a: &DMatrix<f64>, b: &[f64], config: &HhlConfig) -> Result<HhlSolution> {
    let bc: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    hhl_solve(&linalg::real_to_complex(a), &bc, config)
}

/// Default parameters: `t = 2π g / λ_max` with `g = (d^n_r - 1)/d^n_r`, so the
/// largest eigenvalue lands on the top clock value, and `C = λ_min`
/// (equivalently `C t/2π = λ_min g/λ_max` on the phase scale).
pub fn choose_defaults(a: &CMatrix, dim: usize, n_r: usize) -> Result<HhlConfig> {
    let spectrum = HermitianSpectrum::new(a)?;
    if spectrum.min() <= 0.0 {
        return Err(Error::Domain(format!(
            "matrix is not positive definite (smallest eigenvalue {})",
            spectrum.min()
        )));
    }
    let grid = dim.checked_pow(n_r as u32).ok_or_else(|| {
        Error::Configuration(format!("clock register d={dim}, n_r={n_r} too large"))
    })? as f64;
    let g = (grid - 1.0) / grid;
    let t = 2.0 * PI * g / spectrum.max();
    HhlConfig::new(dim, n_r, t, spectrum.min())
}
