use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::dense::DenseState;
use crate::error::{Error, Result};

/// Eigenvalues at or below this are treated as exactly zero in `Q(s)`.
pub const KERNEL_THRESHOLD: f64 = 1e-13;

/// Largest total weight of negative eigenvalues clamped away before an
/// instance is rejected.
const CLAMP_TOL: f64 = 1e-10;

fn eigen(m: &DMatrix<C64>) -> Result<SymmetricEigen<C64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))
}

fn same_basis(a: &DenseState, b: &DenseState) -> Result<()> {
    if a.basis != b.basis {
        return Err(Error::Domain(
            "states are expressed in different bases".into(),
        ));
    }
    Ok(())
}

/// Clamps negative eigenvalues to zero, rejecting the state if that moves
/// the trace by more than the clamping tolerance.
fn clamped(values: &[f64]) -> Result<Vec<f64>> {
    let lost: f64 = values.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    if lost > CLAMP_TOL {
        return Err(Error::Numerical(format!(
            "clamping negative eigenvalues changes the trace by {lost:e}"
        )));
    }
    Ok(values.iter().map(|&v| v.max(0.0)).collect())
}

/// `1/2 - ||π0 ρ0 - π1 ρ1||_1 / 2` from the full spectrum.
pub fn trace_norm_pe(rho0: &DenseState, rho1: &DenseState, prior0: f64) -> Result<f64> {
    same_basis(rho0, rho1)?;
    if !(0.0..=1.0).contains(&prior0) {
        return Err(Error::Domain(format!("prior {prior0} outside [0, 1]")));
    }
    let x = rho0.matrix.map(|z| z * prior0) - rho1.matrix.map(|z| z * (1.0 - prior0));
    let e = eigen(&x)?;
    let norm: f64 = e.eigenvalues.iter().map(|v| v.abs()).sum();
    Ok((0.5 - 0.5 * norm).max(0.0))
}

/// `√ρ` by spectral decomposition, with eigenvalues at or below
/// [`KERNEL_THRESHOLD`] set to zero.
fn sqrt_psd(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let e = eigen(m)?;
    let vals = clamped(e.eigenvalues.as_slice())?;
    let u = &e.eigenvectors;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter()
            .map(|&v| C64::new(if v > KERNEL_THRESHOLD { v.sqrt() } else { 0.0 }, 0.0)),
    ));
    Ok(u * d * u.adjoint())
}

/// `(Tr sqrt(√ρ0 ρ1 √ρ0))²`.
///
/// The trace is evaluated as the sum of singular values of `√ρ0 √ρ1`, which
/// is the same number but avoids taking square roots of rounding-level
/// eigenvalues of the product.
pub fn uhlmann_fidelity(rho0: &DenseState, rho1: &DenseState) -> Result<f64> {
    same_basis(rho0, rho1)?;
    let a = sqrt_psd(&rho0.matrix)? * sqrt_psd(&rho1.matrix)?;
    let svd = a
        .try_svd(false, false, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("singular value decomposition did not converge".into()))?;
    let root: f64 = svd.singular_values.iter().sum();
    Ok((root * root).min(1.0))
}

/// `Tr[ρ0^s ρ1^(1-s)]`, with `0^0 = 0` on each kernel so that `Q(0)` and
/// `Q(1)` are support overlaps.
pub fn q_of_s_dense(rho0: &DenseState, rho1: &DenseState, s: f64) -> Result<f64> {
    same_basis(rho0, rho1)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    let a = eigen(&rho0.matrix)?;
    let b = eigen(&rho1.matrix)?;
    let la = clamped(a.eigenvalues.as_slice())?;
    let lb = clamped(b.eigenvalues.as_slice())?;
    let overlap = a.eigenvectors.adjoint() * &b.eigenvectors;
    let mut total = 0.0;
    for (i, &x) in la.iter().enumerate() {
        if x <= KERNEL_THRESHOLD {
            continue;
        }
        let xs = x.powf(s);
        for (j, &y) in lb.iter().enumerate() {
            if y <= KERNEL_THRESHOLD {
                continue;
            }
            total += xs * y.powf(1.0 - s) * overlap[(i, j)].norm_sqr();
        }
    }
    Ok(total)
}
