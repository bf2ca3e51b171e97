//! Minimum eigenvalues of matrices with real spectrum and the comparison of
//! two matrices with non-positive off-diagonal entries.
//!
//! If `A` is `m x m`, `B` is `n x n` with `n >= m`, both have non-positive
//! off-diagonal entries and `b_ij <= a_ij` on the leading `m x m` block, then
//! `E(B) <= E(A)`. The inequality is strict when `B` is irreducible and either
//! `n > m` or one of the entry inequalities is strict.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{general_eigenvalues_real, is_symmetric, symmetric_eigenvalues, tridiagonal_eigenvalue};
use crate::tl::SparseSectorMatrix;
use crate::verdict::{ComparisonVerdict, Condition, Location, VerdictStatus, Witness};

/// Largest dimension solved with a dense eigendecomposition.
pub const DENSE_EIGEN_LIMIT: usize = 2000;
/// Iteration cap of the shifted power iteration.
pub const POWER_MAX_ITERATIONS: usize = 100_000;
/// Convergence tolerance of the shifted power iteration.
pub const POWER_TOLERANCE: f64 = 1e-10;
/// Absolute slack on eigenvalue comparisons.
pub const STRICT_TOLERANCE: f64 = 1e-10;
/// Slack on the entrywise hypotheses of [`pf_compare`].
pub const ENTRY_TOLERANCE: f64 = 1e-12;

/// How a minimum eigenvalue was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenRoute {
    /// Sturm bisection on a symmetrizable tridiagonal matrix.
    Tridiagonal,
    Dense,
    PowerIteration,
}

/// A square real matrix the eigenvalue routines can work on.
pub trait RealMatrix {
    fn dim(&self) -> usize;
    fn entries(&self) -> Vec<(usize, usize, f64)>;
    fn to_dense(&self) -> DMatrix<f64>;
    fn matvec(&self, x: &[f64]) -> Vec<f64>;
}

impl RealMatrix for DMatrix<f64> {
    fn dim(&self) -> usize {
        assert_eq!(self.nrows(), self.ncols(), "matrix is not square");
        self.nrows()
    }

    fn entries(&self) -> Vec<(usize, usize, f64)> {
        let n = self.nrows();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, self[(r, c)]))
            .filter(|t| t.2 != 0.0)
            .collect()
    }

    fn to_dense(&self) -> DMatrix<f64> {
        self.clone()
    }

    fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (self * nalgebra::DVector::from_column_slice(x)).iter().copied().collect()
    }
}

impl RealMatrix for SparseSectorMatrix {
    fn dim(&self) -> usize {
        SparseSectorMatrix::dim(self)
    }

    fn entries(&self) -> Vec<(usize, usize, f64)> {
        self.triplets().to_vec()
    }

    fn to_dense(&self) -> DMatrix<f64> {
        SparseSectorMatrix::to_dense(self)
    }

    fn matvec(&self, x: &[f64]) -> Vec<f64> {
        SparseSectorMatrix::matvec(self, x)
    }
}

/// The smallest eigenvalue of a matrix with real spectrum.
pub fn min_eigenvalue<M: RealMatrix + ?Sized>(m: &M) -> Result<f64> {
    min_eigenvalue_with_route(m).map(|(e, _)| e)
}

/// Like [`min_eigenvalue`], also reporting the route taken: Sturm bisection
/// for symmetrizable tridiagonal matrices, a dense solve up to
/// [`DENSE_EIGEN_LIMIT`], shifted power iteration beyond.
pub fn min_eigenvalue_with_route<M: RealMatrix + ?Sized>(m: &M) -> Result<(f64, EigenRoute)> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix has no eigenvalues".into()));
    }
    let entries = m.entries();
    if let Some((diag, off)) = symmetrized_tridiagonal(n, &entries) {
        return Ok((tridiagonal_eigenvalue(&diag, &off, 0), EigenRoute::Tridiagonal));
    }
    if n <= DENSE_EIGEN_LIMIT {
        return Ok((dense_eigenvalues(m.to_dense())[0], EigenRoute::Dense));
    }
    power_iteration_min_eigenvalue(m).map(|e| (e, EigenRoute::PowerIteration))
}

/// All eigenvalues (real parts) in ascending order.
pub fn eigenvalues<M: RealMatrix + ?Sized>(m: &M) -> Vec<f64> {
    let n = m.dim();
    if let Some((diag, off)) = symmetrized_tridiagonal(n, &m.entries()) {
        return (0..n).map(|k| tridiagonal_eigenvalue(&diag, &off, k)).collect();
    }
    dense_eigenvalues(m.to_dense())
}

fn dense_eigenvalues(d: DMatrix<f64>) -> Vec<f64> {
    if is_symmetric(&d, 0.0) {
        symmetric_eigenvalues(d)
    } else {
        general_eigenvalues_real(d)
    }
}

/// Diagonal and off-diagonal of the symmetric matrix similar to a
/// tridiagonal `m` with `m_{i,i+1} m_{i+1,i} >= 0` (and both zero or both
/// non-zero), or `None` when `m` is not of that form.
fn symmetrized_tridiagonal(n: usize, entries: &[(usize, usize, f64)]) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n.saturating_sub(1)];
    let mut lower = vec![0.0; n.saturating_sub(1)];
    for &(r, c, v) in entries {
        match r as isize - c as isize {
            0 => diag[r] = v,
            -1 => upper[r] = v,
            1 => lower[c] = v,
            _ => return None,
        }
    }
    let mut off = Vec::with_capacity(upper.len());
    for (u, l) in upper.into_iter().zip(lower) {
        let p = u * l;
        if p < 0.0 || ((u == 0.0) != (l == 0.0)) {
            return None;
        }
        off.push(-libm::sqrt(p));
    }
    Some((diag, off))
}

/// Minimum eigenvalue of `m` from the dominant eigenvalue of `c I - m`,
/// `c = max diagonal + 1`.
///
/// For non-positive off-diagonal entries `c I - m` is entrywise
/// non-negative, and the Collatz-Wielandt quotients of a positive iterate
/// bracket its spectral radius; iteration stops when the bracket (or the
/// residual) falls below [`POWER_TOLERANCE`] relative to the radius. The
/// start vector is all ones, with one restart from a seeded random positive
/// vector if the cap is reached.
pub fn power_iteration_min_eigenvalue<M: RealMatrix + ?Sized>(m: &M) -> Result<f64> {
    let n = m.dim();
    let entries = m.entries();
    let c = max_diagonal(n, &entries) + 1.0;
    let shifted = |x: &[f64]| -> Vec<f64> {
        let y = m.matvec(x);
        x.iter().zip(y).map(|(xi, yi)| c * xi - yi).collect()
    };
    let run = |mut x: Vec<f64>| -> Option<f64> {
        normalize(&mut x);
        for _ in 0..POWER_MAX_ITERATIONS {
            let y = shifted(&x);
            let rho: f64 = crate::linalg::dot(&x, &y);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let mut positive = true;
            for (xi, yi) in x.iter().zip(&y) {
                if *xi > 0.0 {
                    let q = yi / xi;
                    lo = lo.min(q);
                    hi = hi.max(q);
                } else {
                    positive = false;
                }
            }
            let residual = crate::linalg::norm(&x.iter().zip(&y).map(|(xi, yi)| yi - rho * xi).collect::<Vec<_>>());
            let scale = rho.abs().max(1.0);
            if positive && hi - lo <= POWER_TOLERANCE * scale {
                return Some(c - 0.5 * (lo + hi));
            }
            if residual <= POWER_TOLERANCE * scale {
                return Some(c - rho);
            }
            x = y;
            if normalize(&mut x) == 0.0 {
                return Some(c);
            }
        }
        None
    };
    if let Some(e) = run(vec![1.0; n]) {
        return Ok(e);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = (0..n).map(|_| 0.5 + (rng.next_u32() as f64) / (u32::MAX as f64)).collect();
    run(start).ok_or(Error::NoConvergence { iterations: POWER_MAX_ITERATIONS })
}

/// Largest diagonal entry, counting missing entries as zero.
fn max_diagonal(n: usize, entries: &[(usize, usize, f64)]) -> f64 {
    let mut diag = vec![0.0; n];
    for &(r, c, v) in entries {
        if r == c {
            diag[r] = v;
        }
    }
    diag.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn normalize(x: &mut [f64]) -> f64 {
    let nrm = crate::linalg::norm(x);
    if nrm > 0.0 {
        x.iter_mut().for_each(|v| *v /= nrm);
    }
    nrm
}

/// Shift `c` and power `p` with `(c I - B)^p` entrywise positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrreducibilityCertificate {
    pub shift: f64,
    pub power: usize,
    pub attained: bool,
}

/// With `c = max diagonal + 1` the diagonal of `c I - B` is positive, so
/// `(c I - B)^p` is entrywise positive exactly when every index reaches
/// every other along at most `p` positive entries. `p` is the largest such
/// distance (at least 1); `attained` is false when some index is unreachable.
pub fn irreducibility_certificate<M: RealMatrix + ?Sized>(b: &M) -> IrreducibilityCertificate {
    let n = b.dim();
    let entries = b.entries();
    let shift = (max_diagonal(n, &entries) + 1.0).max(0.0);
    let mut adj = vec![Vec::new(); n];
    for &(r, c, v) in &entries {
        if r != c && v < 0.0 {
            adj[r].push(c);
        }
    }
    let mut power = 1;
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        match dist.iter().max() {
            Some(&usize::MAX) => return IrreducibilityCertificate { shift, power: n.max(1), attained: false },
            Some(&d) => power = power.max(d),
            None => {}
        }
    }
    IrreducibilityCertificate { shift, power, attained: true }
}

/// Checks the comparison hypotheses for `a` (smaller) and `b` (larger) and
/// compares their minimum eigenvalues.
pub fn pf_compare<A: RealMatrix + ?Sized, B: RealMatrix + ?Sized>(a: &A, b: &B) -> ComparisonVerdict {
    let (m, n) = (a.dim(), b.dim());
    let mut failed = Vec::new();
    let fail = |condition, row, col, value| Witness { location: Location::Precondition { condition, row, col }, value };
    if n < m {
        failed.push(fail(Condition::DimensionOrder, m, n, n as f64 - m as f64));
    }
    for (r, c, v) in a.entries() {
        if r != c && v > ENTRY_TOLERANCE {
            failed.push(fail(Condition::OffDiagonalSmall, r, c, v));
        }
    }
    for (r, c, v) in b.entries() {
        if r != c && v > ENTRY_TOLERANCE {
            failed.push(fail(Condition::OffDiagonalLarge, r, c, v));
        }
    }
    let (ad, bd) = (a.to_dense(), b.to_dense());
    let mut strict_entry = false;
    if n >= m {
        for i in 0..m {
            for j in 0..m {
                let diff = bd[(i, j)] - ad[(i, j)];
                if diff > ENTRY_TOLERANCE {
                    failed.push(fail(Condition::Domination, i, j, diff));
                } else if diff < -ENTRY_TOLERANCE {
                    strict_entry = true;
                }
            }
        }
    }
    let (e_small, e_large) = match (min_eigenvalue(a), min_eigenvalue(b)) {
        (Ok(x), Ok(y)) => (x, y),
        _ => {
            let mut v = ComparisonVerdict::new(VerdictStatus::PreconditionFailed);
            v.witnesses = failed;
            return v;
        }
    };
    if !failed.is_empty() {
        return ComparisonVerdict {
            status: VerdictStatus::PreconditionFailed,
            witnesses: failed,
            e_small: Some(e_small),
            e_large: Some(e_large),
        };
    }
    let strict_hypotheses = n > m || strict_entry;
    let certified = irreducibility_certificate(b).attained;
    let gap = e_large - e_small;
    let status = if strict_hypotheses && certified && gap < -STRICT_TOLERANCE {
        VerdictStatus::HoldsStrict
    } else if gap <= STRICT_TOLERANCE {
        VerdictStatus::HoldsNonStrict
    } else {
        VerdictStatus::Violated
    };
    let witnesses = if status == VerdictStatus::HoldsStrict {
        Vec::new()
    } else {
        vec![Witness { location: Location::Eigenvalues, value: gap }]
    };
    ComparisonVerdict { status, witnesses, e_small: Some(e_small), e_large: Some(e_large) }
}

#[cfg(test)]
mod tests;
