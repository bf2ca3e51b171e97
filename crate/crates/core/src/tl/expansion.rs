//! Sector assembly by tensor expansion: `M = G^{-1} K` with the Gram matrix
//! `G_ab = <v_a, v_b>` and `K_ab = <v_a, H v_b>`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::basis::{expand_to_tensor_with_limit, ArcDiagram, TensorVector};
use crate::chain::SpinChainSpec;
use crate::error::{Error, Result};
use crate::oracle::ProductSpace;

/// Relative size below which solved entries are rounding noise.
pub(super) const DROP_TOLERANCE: f64 = 1e-11;

pub(super) fn assemble(chain: &SpinChainSpec, basis: &[ArcDiagram], limit: usize) -> Result<DMatrix<f64>> {
    let space = ProductSpace::for_chain(chain, limit)?;
    let h = space.hamiltonian(chain);
    let vectors: Vec<TensorVector> = basis
        .iter()
        .map(|d| expand_to_tensor_with_limit(d, chain, limit))
        .collect::<Result<_>>()?;
    let images: Vec<Vec<f64>> = vectors.iter().map(|v| h.matvec(&v.to_dense())).collect();
    let n = basis.len();
    let mut g = DMatrix::zeros(n, n);
    let mut k = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if b <= a {
                let v = vectors[a].dot(&vectors[b]);
                g[(a, b)] = v;
                g[(b, a)] = v;
            }
            k[(a, b)] = vectors[a].amplitudes.iter().map(|(&i, &x)| x * images[b][i]).sum();
        }
    }
    solve_spd(&g, &k)
}

/// `G^{-1} K` by Cholesky with one step of iterative refinement.
pub(crate) fn solve_spd(g: &DMatrix<f64>, k: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InconsistentDiagram("Gram matrix is not positive definite".into()))?;
    let mut x = chol.solve(k);
    let residual = k - g * &x;
    x += chol.solve(&residual);
    Ok(x)
}
