//! Numerical kernels shared by every other module.

mod contour;
mod dense;
mod lu;
mod matrix;
mod roots;
mod tridiag;
mod winding;

pub use contour::{contour_integral_mean, ClosedContour};
pub use dense::eigs_dense;
pub use lu::{det, inverse, null_vector, Lu};
pub use matrix::{
    directed_distance, hausdorff_distance, norm2, normalize_phase, ComplexMatrix,
    TridiagonalMatrix,
};
pub use roots::{order_by_modulus, polynomial_roots, quadratic_roots};
pub use tridiag::{eigs_tridiagonal, solve_tridiagonal};
pub use winding::winding_number;

use crate::C64;

/// Eigenvalues with optional unit-norm eigenvectors stored as matrix columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub vectors: Option<ComplexMatrix>,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Option<Vec<C64>> {
        self.vectors.as_ref().map(|v| v.column(i))
    }

    /// Index of the eigenvalue closest to `target`.
    pub fn nearest(&self, target: C64) -> Option<usize> {
        (0..self.values.len())
            .min_by(|&i, &j| (self.values[i] - target).norm().total_cmp(&(self.values[j] - target).norm()))
    }

    /// Sorts pairs by real part, then imaginary part.
    pub(crate) fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&i, &j| {
            let (a, b) = (self.values[i], self.values[j]);
            a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
        });
        self.values = idx.iter().map(|&i| self.values[i]).collect();
        if let Some(v) = &self.vectors {
            let n = v.rows();
            self.vectors = Some(ComplexMatrix::from_fn(n, idx.len(), |r, c| v[(r, idx[c])]));
        }
    }
}

pub(crate) const EPS: f64 = f64::EPSILON;
