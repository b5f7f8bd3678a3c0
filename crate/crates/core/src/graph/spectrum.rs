//! Dense generalized eigenproblem `E x = λ M x` and kernel analysis.

use nalgebra::{DMatrix, SymmetricEigen};

use super::fem::{DiscretizedForm, GraphFunction};
use crate::error::{Error, Result};

/// Leading eigenpairs, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub values: Vec<f64>,
    /// Mass-orthonormal eigenvectors as columns.
    pub vectors: DMatrix<f64>,
    /// `|E x - λ M x|` per pair.
    pub residuals: Vec<f64>,
    /// Problem size; when `values.len() == dof` the spectrum is complete.
    pub dof: usize,
}

impl SpectrumResult {
    pub fn eigenfunction(&self, j: usize) -> GraphFunction {
        GraphFunction { values: self.vectors.column(j).into_owned() }
    }
}

/// Top `k` eigenpairs via Cholesky reduction `C = L^{-1} E L^{-T}`.
pub fn spectrum(form: &DiscretizedForm, k: usize) -> Result<SpectrumResult> {
    let n = form.dof();
    let chol = form
        .mass
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let y =
        l.solve_lower_triangular(&form.e).ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let k = k.min(n);
    let lt = l.transpose();
    let mut vectors = DMatrix::zeros(n, k);
    let mut values = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (col, &i) in order.iter().take(k).enumerate() {
        let x = lt
            .solve_upper_triangular(&eig.eigenvectors.column(i).into_owned())
            .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
        // Rayleigh quotient: second-order accurate in the eigenvector error.
        let lambda = form.e_value(&x, &x) / form.mass_value(&x, &x);
        residuals.push((&form.e * &x - &form.mass * &x * lambda).norm());
        vectors.set_column(col, &x);
        values.push(lambda);
    }
    Ok(SpectrumResult { values, vectors, residuals, dof: n })
}

/// The numerically null eigenspace compared with the linear functions.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    pub tau: f64,
    /// Indices of eigenvalues in `(-τ, τ)`.
    pub indices: Vec<usize>,
    pub dimension: usize,
    /// Sine of the largest principal angle between the numerical kernel and
    /// the span of the coordinate functions (1 when dimensions differ).
    pub principal_angle_residual: f64,
    /// Largest relative mass-norm distance of a coordinate function from the kernel.
    pub coordinate_residual: f64,
}

pub fn kernel_analysis(spec: &SpectrumResult, form: &DiscretizedForm, tau: f64) -> Result<KernelReport> {
    let indices: Vec<usize> = spec.values.iter().enumerate().filter(|(_, v)| v.abs() < tau).map(|(i, _)| i).collect();
    if spec.values.len() < spec.dof && spec.values.last().is_some_and(|&v| v > -tau) {
        return Err(Error::InsufficientSpectrum(format!(
            "{} eigenvalues computed, the last ({}) lies above -tau = {}",
            spec.values.len(),
            spec.values.last().unwrap(),
            -tau
        )));
    }
    let q = DMatrix::from_columns(&indices.iter().map(|&i| spec.vectors.column(i)).collect::<Vec<_>>());
    let x = DMatrix::from_columns(&(0..3).map(|i| GraphFunction::coordinate(form, i).values).collect::<Vec<_>>());
    let mx = &form.mass * &x;
    // Coefficients of each coordinate function in the mass-orthonormal kernel basis.
    let proj = q.transpose() * &mx;
    let mut coordinate_residual: f64 = 0.0;
    for i in 0..3 {
        let xi = x.column(i);
        let norm2 = xi.dot(&mx.column(i));
        let captured = proj.column(i).norm_squared();
        coordinate_residual = coordinate_residual.max(((norm2 - captured).max(0.0) / norm2).sqrt());
    }
    let principal_angle_residual = if indices.len() == 3 {
        // Mass-orthonormalize X through the Cholesky factor of its Gram matrix.
        let gram = x.transpose() * &mx;
        let r = gram.cholesky().ok_or_else(|| Error::NumericalFailure("coordinate functions are dependent".into()))?;
        let rinv = r.l().transpose().try_inverse().expect("triangular factor of an SPD matrix");
        let cosines = (&proj * rinv).singular_values();
        let cmin = cosines.iter().copied().fold(f64::INFINITY, f64::min).min(1.0);
        (1.0 - cmin * cmin).max(0.0).sqrt()
    } else {
        1.0
    };
    Ok(KernelReport { tau, dimension: indices.len(), indices, principal_angle_residual, coordinate_residual })
}
