//! Wrappers over the LAPACK-backed dense kernels used by the solvers.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2, OwnedRepr};
use ndarray_linalg::solve::LUFactorized;
use ndarray_linalg::{Eigh, FactorizeInto, Solve, UPLO};
use std::sync::Once;

extern "C" {
    fn openblas_set_num_threads(n: i32);
}

static BLAS_INIT: Once = Once::new();

/// Kernels run single-threaded inside one call; concurrency lives at the
/// caller level (rayon across targets and seeds). OpenBLAS's threaded
/// LAPACK path also needs more stack than 2 MiB worker threads provide.
fn ensure_single_threaded_blas() {
    BLAS_INIT.call_once(|| unsafe { openblas_set_num_threads(1) });
}

/// LU factorization (partial pivoting) of a dense square system, reusable
/// across right-hand sides.
pub(crate) struct LuSystem {
    factors: LUFactorized<OwnedRepr<f64>>,
}

impl LuSystem {
    pub fn new(a: Array2<f64>) -> Result<Self> {
        ensure_single_threaded_blas();
        let factors = a
            .factorize_into()
            .map_err(|e| Error::SolverFailure(format!("LU factorization failed: {e}")))?;
        Ok(LuSystem { factors })
    }

    pub fn solve(&self, b: &Array1<f64>) -> Result<Array1<f64>> {
        self.factors
            .solve(b)
            .map_err(|e| Error::SolverFailure(format!("LU solve failed: {e}")))
    }
}

/// Full symmetric eigendecomposition, eigenvalues descending. Each
/// eigenvector's sign is fixed so its largest-magnitude entry is positive.
pub(crate) fn eigh_descending(a: Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    ensure_single_threaded_blas();
    let n = a.nrows();
    let (vals, vecs) = a
        .eigh(UPLO::Lower)
        .map_err(|e| Error::SolverFailure(format!("symmetric eigendecomposition failed: {e}")))?;
    // LAPACK returns ascending order
    let mut values = Vec::with_capacity(n);
    let mut vectors = Array2::zeros((n, n));
    for k in 0..n {
        let src = n - 1 - k;
        values.push(vals[src]);
        let col = vecs.column(src);
        let mut extreme = 0usize;
        for i in 0..n {
            if col[i].abs() > col[extreme].abs() {
                extreme = i;
            }
        }
        let sign = if col[extreme] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[[i, k]] = sign * col[i];
        }
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn lu_solves_small_system() {
        let a = array![[2.0, 1.0], [1.0, 3.0]];
        let lu = LuSystem::new(a).unwrap();
        let x = lu.solve(&array![1.0, 2.0]).unwrap();
        assert!((x[0] - 0.2).abs() < 1e-14);
        assert!((x[1] - 0.6).abs() < 1e-14);
    }

    #[test]
    fn eigh_orders_descending_and_fixes_sign() {
        let a = array![[1.0, 0.0], [0.0, 3.0]];
        let (vals, vecs) = eigh_descending(a).unwrap();
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!(vecs[[1, 0]] > 0.0);
        assert!(vecs[[0, 1]] > 0.0);
    }
}
