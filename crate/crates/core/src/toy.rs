//! Built-in 3x3 test systems and their reference results.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::hhl::{self, HhlConfig};
use crate::linalg::{self, HermitianSpectrum};

/// Which built-in system to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToySystem {
    /// `diag(0.2, 0.5, 0.8)` with `b = (1,1,1)/√3`.
    Diagonal,
    /// Dense symmetric matrix with `b = (0,1,0)`.
    NonDiagonal,
}

/// A published reference row: clock size, `|<b|x>|` and percentage difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub n_r: usize,
    pub b_dot_x: f64,
    pub pfd_percent: f64,
}

impl ToySystem {
    pub fn matrix(self) -> DMatrix<f64> {
        match self {
            ToySystem::Diagonal => {
                DMatrix::from_row_slice(3, 3, &[0.2, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.8])
            }
            ToySystem::NonDiagonal => {
                DMatrix::from_row_slice(3, 3, &[0.5, 0.1, 0.2, 0.1, 0.6, 0.1, 0.2, 0.1, 0.7])
            }
        }
    }

    pub fn rhs(self) -> Vec<f64> {
        match self {
            ToySystem::Diagonal => vec![1.0 / 3f64.sqrt(); 3],
            ToySystem::NonDiagonal => vec![0.0, 1.0, 0.0],
        }
    }

    /// Clock sizes reported for this system.
    pub fn default_clock_sizes(self) -> Vec<usize> {
        self.reference().iter().map(|r| r.n_r).collect()
    }

    /// Qutrit results reported for `t = 2π`, `C = λ_min`.
    pub fn reference(self) -> &'static [ReferenceRow] {
        match self {
            ToySystem::Diagonal => &DIAGONAL_REFERENCE,
            ToySystem::NonDiagonal => &NONDIAGONAL_REFERENCE,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ToySystem::Diagonal => "diag",
            ToySystem::NonDiagonal => "nondiag",
        }
    }
}

const DIAGONAL_REFERENCE: [ReferenceRow; 4] = [
    ReferenceRow {
        n_r: 3,
        b_dot_x: 2.1051,
        pfd_percent: 23.42,
    },
    ReferenceRow {
        n_r: 4,
        b_dot_x: 2.5555,
        pfd_percent: 7.09,
    },
    ReferenceRow {
        n_r: 5,
        b_dot_x: 2.6056,
        pfd_percent: 5.25,
    },
    ReferenceRow {
        n_r: 6,
        b_dot_x: 2.7036,
        pfd_percent: 1.69,
    },
];

const NONDIAGONAL_REFERENCE: [ReferenceRow; 4] = [
    ReferenceRow {
        n_r: 2,
        b_dot_x: 1.69272,
        pfd_percent: 2.80,
    },
    ReferenceRow {
        n_r: 3,
        b_dot_x: 1.70506,
        pfd_percent: 2.10,
    },
    ReferenceRow {
        n_r: 4,
        b_dot_x: 1.72855,
        pfd_percent: 0.75,
    },
    ReferenceRow {
        n_r: 5,
        b_dot_x: 1.73218,
        pfd_percent: 0.54,
    },
];

/// One toy solve next to its classical baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToyReport {
    pub system: &'static str,
    pub dim: usize,
    pub n_r: usize,
    pub t: f64,
    pub c: f64,
    pub c_expansion: bool,
    /// Real parts of the HHL solution vector.
    pub x: Vec<f64>,
    pub x_classical: Vec<f64>,
    pub b_dot_x: f64,
    pub b_dot_x_classical: f64,
    pub pfd_percent: f64,
    pub p_success: f64,
}

impl ToySystem {
    /// `t = 2π` and `C = λ_min(A)`, the setting of the reference rows.
    pub fn reference_config(self, dim: usize, n_r: usize) -> Result<HhlConfig> {
        let spectrum = HermitianSpectrum::new(&linalg::real_to_complex(&self.matrix()))?;
        HhlConfig::new(dim, n_r, 2.0 * PI, spectrum.min())
    }

    pub fn run(self, config: &HhlConfig) -> Result<ToyReport> {
        let a = self.matrix();
        let b = self.rhs();
        let sol = hhl::hhl_solve_real(&a, &b, config)?;
        let x: Vec<f64> = sol.x_vector.iter().map(|z| z.re).collect();
        let x_classical = a
            .clone()
            .lu()
            .solve(&nalgebra::DVector::from_column_slice(&b))
            .expect("built-in systems are nonsingular");
        let dot = |v: &[f64]| b.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        let b_dot_x = dot(&x);
        let b_dot_x_classical = dot(x_classical.as_slice());
        Ok(ToyReport {
            system: self.name(),
            dim: config.dim,
            n_r: config.n_r,
            t: config.t,
            c: config.c,
            c_expansion: config.c_expansion,
            x,
            x_classical: x_classical.as_slice().to_vec(),
            b_dot_x,
            b_dot_x_classical,
            pfd_percent: pfd_percent(b_dot_x, b_dot_x_classical),
            p_success: sol.p_success,
        })
    }
}

/// Percentage fraction difference `100 |value - reference| / |reference|`.
pub fn pfd_percent(value: f64, reference: f64) -> f64 {
    100.0 * (value - reference).abs() / reference.abs()
}

impl std::str::FromStr for ToySystem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "diag" | "diagonal" => Ok(ToySystem::Diagonal),
            "nondiag" | "non-diagonal" => Ok(ToySystem::NonDiagonal),
            other => Err(format!(
                "unknown toy system '{other}' (expected diag or nondiag)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_pfd_matches_its_own_arithmetic() {
        // the diagonal table's PFD column is relative to b†A⁻¹b = 2.75
        for row in ToySystem::Diagonal.reference() {
            assert!((pfd_percent(row.b_dot_x, 2.75) - row.pfd_percent).abs() < 0.05);
        }
    }

    #[test]
    fn classical_baselines() {
        let cfg = ToySystem::Diagonal.reference_config(3, 3).unwrap();
        assert!((cfg.c - 0.2).abs() < 1e-12);
        let r = ToySystem::Diagonal.run(&cfg).unwrap();
        assert!((r.b_dot_x_classical - 2.75).abs() < 1e-12);
        let cfg = ToySystem::NonDiagonal.reference_config(3, 2).unwrap();
        let r = ToySystem::NonDiagonal.run(&cfg).unwrap();
        assert!((r.b_dot_x_classical - 0.31 / 0.178).abs() < 1e-12);
    }

    #[test]
    fn parse_names() {
        assert_eq!("diag".parse::<ToySystem>().unwrap(), ToySystem::Diagonal);
        assert_eq!(
            "nondiag".parse::<ToySystem>().unwrap(),
            ToySystem::NonDiagonal
        );
        assert!("other".parse::<ToySystem>().is_err());
    }
}
