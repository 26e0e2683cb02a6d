//! Gate constructors for qudits of arbitrary dimension `d`.
//!
//! Every gate follows the `ω_d = e^{2πi/d}` pattern so that the `d = 3` case
//! reproduces the standard qutrit matrices entrywise and `d = 2` reduces to
//! the familiar qubit gates.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianSpectrum};
use crate::state::NORM_TOL;

/// A unitary acting on `arity` qudits of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    dim: usize,
    arity: usize,
    matrix: CMatrix,
    label: String,
}

impl GateSpec {
    /// Validates shape and unitarity (within 1e-10).
    pub fn new(
        dim: usize,
        arity: usize,
        matrix: CMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        if dim < 2 {
            return Err(Error::Domain(format!(
                "qudit dimension must be >= 2, got {dim}"
            )));
        }
        let size = dim.pow(arity as u32);
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(Error::Configuration(format!(
                "gate '{label}' on {arity} qudits of dimension {dim} needs a {size}x{size} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = linalg::unitarity_defect(&matrix);
        if defect > NORM_TOL {
            return Err(Error::Domain(format!(
                "gate '{label}' is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(Self {
            dim,
            arity,
            matrix,
            label,
        })
    }

    // Constructors below build matrices that are unitary by construction.
    fn trusted(dim: usize, arity: usize, matrix: CMatrix, label: String) -> Self {
        debug_assert!(linalg::is_unitary(&matrix, NORM_TOL), "{label} not unitary");
        Self {
            dim,
            arity,
            matrix,
            label,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn adjoint(&self) -> Self {
        let label = match self.label.strip_suffix('†') {
            Some(base) => base.to_string(),
            None => format!("{}†", self.label),
        };
        Self::trusted(self.dim, self.arity, self.matrix.adjoint(), label)
    }

    /// `G^k`.
    pub fn pow(&self, k: u64) -> Self {
        Self::trusted(
            self.dim,
            self.arity,
            linalg::matrix_power(&self.matrix, k),
            format!("{}^{k}", self.label),
        )
    }
}

fn omega(dim: usize, power: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * power / dim as f64)
}

/// Cyclic increment `|k> -> |k+1 mod d>`.
pub fn x_gate(dim: usize) -> GateSpec {
    let mut m = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        m[((k + 1) % dim, k)] = Complex64::new(1.0, 0.0);
    }
    GateSpec::trusted(dim, 1, m, "X".into())
}

/// Clock gate `diag(ω^k)`.
pub fn z_gate(dim: usize) -> GateSpec {
    let diag = (0..dim).map(|k| omega(dim, k as f64));
    GateSpec::trusted(dim, 1, diagonal(diag), "Z".into())
}

/// Generalized Hadamard, entry `(j, k) = ω^{jk}/√d`. Not self-inverse for `d > 2`.
pub fn h_gate(dim: usize) -> GateSpec {
    let norm = 1.0 / (dim as f64).sqrt();
    let m = CMatrix::from_fn(dim, dim, |j, k| omega(dim, ((j * k) % dim) as f64) * norm);
    GateSpec::trusted(dim, 1, m, "H".into())
}

/// `P_l = diag(e^{2πik/d^l})`.
pub fn phase_gate(dim: usize, l: u32) -> GateSpec {
    let denom = (dim as f64).powi(l as i32);
    let diag = (0..dim).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / denom));
    GateSpec::trusted(dim, 1, diagonal(diag), format!("P{l}"))
}

/// Real rotation in the plane of levels `i` and `j`: column `i` picks up
/// `+sin(θ/2)` on row `j`, column `j` picks up `-sin(θ/2)` on row `i`.
pub fn planar_rotation(dim: usize, i: usize, j: usize, theta: f64) -> Result<GateSpec> {
    if i == j || i >= dim || j >= dim {
        return Err(Error::Configuration(format!(
            "rotation plane ({i}, {j}) invalid for dimension {dim}"
        )));
    }
    Ok(GateSpec::trusted(
        dim,
        1,
        rotation_matrix(dim, i, j, theta),
        format!("R{i}{j}({theta})"),
    ))
}

pub(crate) fn rotation_matrix(dim: usize, i: usize, j: usize, theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let mut m = CMatrix::identity(dim, dim);
    m[(i, i)] = Complex64::new(c, 0.0);
    m[(j, j)] = Complex64::new(c, 0.0);
    m[(j, i)] = Complex64::new(s, 0.0);
    m[(i, j)] = Complex64::new(-s, 0.0);
    m
}

/// Two-qudit `CP_l`: control digit `j` applies `P_l^j` to the target.
/// The control is the more significant qudit of the pair.
pub fn controlled_phase(dim: usize, l: u32) -> GateSpec {
    let denom = (dim as f64).powi(l as i32);
    let diag = (0..dim * dim).map(|idx| {
        let (j, k) = (idx / dim, idx % dim);
        Complex64::from_polar(1.0, 2.0 * PI * (j * k) as f64 / denom)
    });
    GateSpec::trusted(dim, 2, diagonal(diag), format!("CP{l}"))
}

/// Two-qudit `CX` (SUM): `|j,k> -> |j, j+k mod d>`.
pub fn controlled_x(dim: usize) -> GateSpec {
    let mut m = CMatrix::zeros(dim * dim, dim * dim);
    for j in 0..dim {
        for k in 0..dim {
            m[(j * dim + (j + k) % dim, j * dim + k)] = Complex64::new(1.0, 0.0);
        }
    }
    GateSpec::trusted(dim, 2, m, "CX".into())
}

/// Exchanges two qudits.
pub fn swap_gate(dim: usize) -> GateSpec {
    let mut m = CMatrix::zeros(dim * dim, dim * dim);
    for j in 0..dim {
        for k in 0..dim {
            m[(k * dim + j, j * dim + k)] = Complex64::new(1.0, 0.0);
        }
    }
    GateSpec::trusted(dim, 2, m, "SWAP".into())
}

/// `e^{iAt}` for Hermitian `A` via eigendecomposition.
pub fn hermitian_evolution(a: &CMatrix, t: f64) -> Result<CMatrix> {
    let spectrum = HermitianSpectrum::new(a)?;
    Ok(evolution_from_spectrum(&spectrum, t))
}

pub fn evolution_from_spectrum(spectrum: &HermitianSpectrum, t: f64) -> CMatrix {
    spectrum.map(|l| Complex64::from_polar(1.0, l * t))
}

/// Wraps a unitary on `m` system qudits as a gate.
pub fn unitary_gate(dim: usize, matrix: CMatrix, label: impl Into<String>) -> Result<GateSpec> {
    let n = matrix.nrows();
    let mut arity = 0;
    let mut size = 1;
    while size < n {
        size *= dim;
        arity += 1;
    }
    if size != n {
        return Err(Error::Configuration(format!(
            "a {n}x{n} matrix is not a register operator for dimension {dim}"
        )));
    }
    GateSpec::new(dim, arity, matrix, label)
}

fn diagonal(entries: impl Iterator<Item = Complex64>) -> CMatrix {
    let v: Vec<Complex64> = entries.collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}
