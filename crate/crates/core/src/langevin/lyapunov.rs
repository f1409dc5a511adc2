use nalgebra::{DMatrix, DVector};

use super::sde::LinearSDE;
use crate::error::{Error, Result};

/// Solves `A Σ + Σ Aᵀ + C = 0` for symmetric `Σ` by vectorisation,
/// `(I ⊗ A + A ⊗ I) vec Σ = -vec C`. Meant for the small systems used
/// here (dimension ≤ 6).
pub fn solve_lyapunov(a: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let k = eye.kronecker(a) + a.kronecker(&eye);
    let rhs = DVector::from_iterator(n * n, c.iter().map(|v| -v));
    let lu = k.lu();
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("Lyapunov operator is singular".into()))?;
    let sigma = DMatrix::from_column_slice(n, n, x.as_slice());
    Ok((&sigma + sigma.transpose()) * 0.5)
}

/// Stationary covariance of the SDE.
pub fn stationary_covariance_lyapunov(sde: &LinearSDE) -> Result<DMatrix<f64>> {
    solve_lyapunov(&sde.drift, &sde.diffusion())
}
