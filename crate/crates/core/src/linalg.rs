//! Small dense linear-algebra helpers shared by the gate library and the solver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for Hermiticity, scaled by the largest entry when it exceeds 1.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;

pub fn real_to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation of `m†m` from the identity.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let prod = m.adjoint() * m;
    let id = CMatrix::identity(m.nrows(), m.ncols());
    max_abs_entry(&(prod - id))
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && unitarity_defect(m) <= tol
}

/// Returns `(A + A†)/2` after checking `A` is Hermitian within tolerance.
pub fn symmetrize_hermitian(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::Domain(format!(
            "matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let defect = max_abs_entry(&(a - a.adjoint()));
    let scale = max_abs_entry(a).max(1.0);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian (max |A - A†| = {defect:.3e})"
        )));
    }
    Ok((a + a.adjoint()).scale(0.5))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl HermitianSpectrum {
    pub fn new(a: &CMatrix) -> Result<Self> {
        let sym = symmetrize_hermitian(a)?;
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = CMatrix::from_columns(
            &order
                .iter()
                .map(|&i| eig.eigenvectors.column(i).into_owned())
                .collect::<Vec<_>>(),
        );
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let diag = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| f(l)),
        );
        let v = &self.eigenvectors;
        v * CMatrix::from_diagonal(&diag) * v.adjoint()
    }
}

/// `m^k` by binary exponentiation.
pub fn matrix_power(m: &CMatrix, mut k: u64) -> CMatrix {
    let mut result = CMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Direct solve of a Hermitian positive-definite system, used as the
/// classical baseline.
pub fn solve_hermitian(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let rhs = DVector::from_column_slice(b);
    let lu = a.clone().lu();
    lu.solve(&rhs)
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| Error::Domain("matrix is singular".into()))
}
