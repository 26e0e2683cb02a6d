//! Linearized coupled-cluster correlation energies from CI Hamiltonians.
//!
//! A CI matrix `H` in the basis `{Φ₀, χ₁, …, χ_M}` gives the amplitude system
//! `A t = b` with `A = H[1:,1:] - H₀₀ I` and `b = -H[1:,0]`. The correlation
//! energy is `E_corr = -b†A⁻¹b`; the HHL estimate is `-k |<b|x̃>|` with
//! `k = ‖x‖ ‖b‖²`, where `‖x‖` is the solution norm for the normalized `b`.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates;
use crate::hhl::{self, HhlConfig, HhlSolution};
use crate::linalg;
use crate::state::Statevector;
use crate::textio;

/// Symmetry tolerance when ingesting a CI matrix.
pub const INGEST_SYMMETRY_TOL: f64 = 1e-8;
/// Allowed disagreement between the two correlation-energy formulas.
pub const ENERGY_CROSSCHECK_TOL: f64 = 1e-8;

/// Mixing angles for the one-qutrit right-hand side, bond lengths 1.20..1.60 Bohr.
pub const REFERENCE_ISOMETRY_ANGLES: [(f64, f64); 9] = [
    (1.20, 1.0296),
    (1.25, 1.0074),
    (1.30, 0.9845),
    (1.35, 0.9615),
    (1.40, 0.9383),
    (1.45, 0.9152),
    (1.50, 0.8920),
    (1.55, 0.8690),
    (1.60, 0.8465),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CiHamiltonian {
    /// Where the matrix came from, usually a file name.
    pub source: String,
    /// Bond length in Bohr.
    pub r: f64,
    /// Real symmetric `(M+1)×(M+1)` CI matrix in Hartree.
    pub matrix: DMatrix<f64>,
    /// Reference energy, when it differs from `H₀₀`.
    pub e_hf: Option<f64>,
}

impl CiHamiltonian {
    /// Validates shape and symmetry, then symmetrizes exactly.
    pub fn new(
        source: impl Into<String>,
        r: f64,
        matrix: DMatrix<f64>,
        e_hf: Option<f64>,
    ) -> Result<Self> {
        let source = source.into();
        if !matrix.is_square() || matrix.nrows() < 2 {
            return Err(Error::Ingestion(format!(
                "{source}: CI matrix must be square with at least 2 rows, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.transpose()).abs().max();
        if asym > INGEST_SYMMETRY_TOL {
            return Err(Error::Ingestion(format!(
                "{source}: CI matrix is not symmetric (max |H - Hᵀ| = {asym:e})"
            )));
        }
        let matrix = (&matrix + matrix.transpose()) * 0.5;
        Ok(CiHamiltonian {
            source,
            r,
            matrix,
            e_hf,
        })
    }

    /// Number of excited determinants `M`.
    pub fn excitations(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// Reference energy: the `ehf` header if present, otherwise `H₀₀`.
    pub fn reference_energy(&self) -> f64 {
        self.e_hf.unwrap_or(self.matrix[(0, 0)])
    }

    /// `λ_min(H) - H₀₀`.
    pub fn cisd_correlation(&self) -> f64 {
        let lmin = self.matrix.clone().symmetric_eigen().eigenvalues.min();
        lmin - self.matrix[(0, 0)]
    }
}

pub fn parse_ci_hamiltonian(text: &str, source: &str) -> Result<CiHamiltonian> {
    let parsed = textio::parse_matrix(text, source, &["R", "ehf"])?;
    let r = *parsed.headers.get("R").ok_or_else(|| Error::Parse {
        source_name: source.to_string(),
        line: 2,
        message: "missing 'R <bohr>' header".into(),
    })?;
    CiHamiltonian::new(source, r, parsed.matrix, parsed.headers.get("ehf").copied())
}

pub fn load_ci_hamiltonian(path: &Path) -> Result<CiHamiltonian> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_ci_hamiltonian(&text, &path.display().to_string())
}

/// Loads every regular file in a directory, sorted by name. Each file gets its
/// own result so one corrupt file does not hide the rest.
pub fn load_ci_directory(dir: &Path) -> Result<Vec<(PathBuf, Result<CiHamiltonian>)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    if paths.is_empty() {
        return Err(Error::Configuration(format!(
            "{} contains no CI Hamiltonian files",
            dir.display()
        )));
    }
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let h = load_ci_hamiltonian(&p);
            (p, h)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LccSystem {
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
    pub b_norm: f64,
    pub provenance: String,
    pub r: f64,
    pub e_hf: f64,
}

impl LccSystem {
    /// Direct solve of `A x = b`.
    pub fn classical_solution(&self) -> Result<Vec<f64>> {
        let chol = self.a.clone().cholesky().ok_or_else(|| {
            Error::Domain(format!("{}: A is not positive definite", self.provenance))
        })?;
        Ok(chol
            .solve(&DVector::from_column_slice(&self.b))
            .as_slice()
            .to_vec())
    }

    /// `-b†A⁻¹b`.
    pub fn classical_correlation_energy(&self) -> Result<f64> {
        let x = self.classical_solution()?;
        Ok(-self.b.iter().zip(&x).map(|(b, x)| b * x).sum::<f64>())
    }
}

/// Slices `H` into `A`, `b` with the reference-energy shift applied.
pub fn build_lcc_system(h: &CiHamiltonian) -> Result<LccSystem> {
    build_lcc_system_with(h, true)
}

/// As [`build_lcc_system`]; `shift = false` keeps the raw principal sub-matrix.
pub fn build_lcc_system_with(h: &CiHamiltonian, shift: bool) -> Result<LccSystem> {
    let m = h.excitations();
    let h00 = h.matrix[(0, 0)];
    let mut a = h.matrix.view((1, 1), (m, m)).into_owned();
    if shift {
        for i in 0..m {
            a[(i, i)] -= h00;
        }
    }
    let b: Vec<f64> = (1..=m).map(|i| -h.matrix[(i, 0)]).collect();
    let b_norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if b_norm == 0.0 {
        return Err(Error::Domain(format!(
            "{}: reference row is zero, no correlation to compute",
            h.source
        )));
    }
    let lmin = a.clone().symmetric_eigen().eigenvalues.min();
    if lmin <= 0.0 {
        return Err(Error::Domain(format!(
            "{}: amplitude matrix is not positive definite (λ_min = {lmin:e})",
            h.source
        )));
    }
    let sys = LccSystem {
        a,
        b,
        b_norm,
        provenance: h.source.clone(),
        r: h.r,
        e_hf: h.reference_energy(),
    };
    let energy = sys.classical_correlation_energy()?;
    if energy >= 0.0 {
        return Err(Error::InternalConsistency(format!(
            "{}: b†A⁻¹b = {} is not positive",
            h.source, -energy
        )));
    }
    Ok(sys)
}

/// `R₀₂(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|2⟩` on one qutrit.
pub fn isometry_prep(theta: f64) -> Statevector {
    let rot = gates::planar_rotation(3, 0, 2, theta).expect("levels 0 and 2 exist for d = 3");
    Statevector::zero(3, 1)
        .and_then(|s| s.apply_gate(&rot, &[0]))
        .expect("one-qutrit gate on one qutrit")
}

/// Angle with `isometry_prep(θ) ∝ (|b₀|, 0, |b₁|)`, signs dropped.
pub fn isometry_angle(b: &[f64]) -> Result<f64> {
    match b {
        [b0, b1] if *b0 != 0.0 || *b1 != 0.0 => Ok(2.0 * b1.abs().atan2(b0.abs())),
        _ => Err(Error::Domain(format!(
            "isometry needs a nonzero two-component vector, got {} components",
            b.len()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyResult {
    pub r: f64,
    pub e_hf: f64,
    pub e_corr: f64,
    pub e_total: f64,
    /// `‖x‖ ‖b‖²` with `‖x‖` the normalized-`b` solution norm.
    pub k: f64,
    /// `|<b|x̃>|`.
    pub overlap: f64,
    pub p_success: f64,
    pub dim: usize,
    pub n_r: usize,
    pub t: f64,
    pub c: f64,
    pub c_expansion: bool,
}

/// Both correlation-energy forms, cross-checked.
pub fn correlation_energy(sys: &LccSystem, sol: &HhlSolution) -> Result<EnergyResult> {
    let k = sol.normalized_solution_norm() * sys.b_norm * sys.b_norm;
    let from_overlap = -k * sol.overlap;
    let from_vector = -sys
        .b
        .iter()
        .zip(&sol.x_vector)
        .map(|(b, x)| b * x.re)
        .sum::<f64>();
    if (from_overlap - from_vector).abs() > ENERGY_CROSSCHECK_TOL {
        return Err(Error::InternalConsistency(format!(
            "{}: -k|<b|x>| = {from_overlap} but -b†x = {from_vector}",
            sys.provenance
        )));
    }
    let cfg = &sol.config;
    Ok(EnergyResult {
        r: sys.r,
        e_hf: sys.e_hf,
        e_corr: from_overlap,
        e_total: sys.e_hf + from_overlap,
        k,
        overlap: sol.overlap,
        p_success: sol.p_success,
        dim: cfg.dim,
        n_r: cfg.n_r,
        t: cfg.t,
        c: cfg.c,
        c_expansion: cfg.c_expansion,
    })
}

/// HHL settings shared by a sweep. `t` and `c` default per geometry to
/// [`hhl::choose_defaults`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub dim: usize,
    pub n_r: usize,
    pub t: Option<f64>,
    pub c: Option<f64>,
    pub c_expansion: bool,
    pub shift: bool,
}

impl SweepConfig {
    pub fn new(dim: usize, n_r: usize) -> Self {
        SweepConfig {
            dim,
            n_r,
            t: None,
            c: None,
            c_expansion: false,
            shift: true,
        }
    }

    pub fn resolve(&self, a: &DMatrix<f64>) -> Result<HhlConfig> {
        let defaults = hhl::choose_defaults(&linalg::real_to_complex(a), self.dim, self.n_r)?;
        HhlConfig::new(
            self.dim,
            self.n_r,
            self.t.unwrap_or(defaults.t),
            self.c.unwrap_or(defaults.c),
        )
        .map(|c| c.with_c_expansion(self.c_expansion))
    }
}

/// One geometry of a sweep: HHL energies plus classical benchmarks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    pub source: String,
    pub r: f64,
    pub e_hf: f64,
    pub cisd_corr: f64,
    pub lccsd_corr: f64,
    pub hhl: EnergyResult,
}

pub fn solve_geometry(h: &CiHamiltonian, config: &SweepConfig) -> Result<GeometryReport> {
    let sys = build_lcc_system_with(h, config.shift)?;
    let hhl_config = config.resolve(&sys.a)?;
    let sol = hhl::hhl_solve_real(&sys.a, &sys.b, &hhl_config)?;
    let hhl = correlation_energy(&sys, &sol)?;
    Ok(GeometryReport {
        source: h.source.clone(),
        r: h.r,
        e_hf: sys.e_hf,
        cisd_corr: h.cisd_correlation(),
        lccsd_corr: sys.classical_correlation_energy()?,
        hhl,
    })
}

/// Solves every geometry in parallel; results keep input order.
pub fn pec_sweep(
    hamiltonians: &[CiHamiltonian],
    config: &SweepConfig,
) -> Vec<Result<GeometryReport>> {
    hamiltonians
        .par_iter()
        .map(|h| solve_geometry(h, config))
        .collect()
}
