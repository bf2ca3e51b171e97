//! Ground truth for small chains: the full tensor-product Hamiltonian, the
//! total-spin operators, sector projectors and sector minimum energies.
//!
//! The complex dense operators follow the textbook construction
//! (`S^x`, `S^y`, `S^z` Kronecker products) and are meant for chains of a
//! few hundred states. The sector energies and the increment relations run
//! on real sparse operators blocked by total `S^3`, which reach the default
//! dense limit of 4096 states in seconds.

mod space;

pub use space::{bond_matrix, spin_dot, ProductSpace, SiteOperators};

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::chain::{SpinChainSpec, StepKind};
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::linalg::{symmetric_eigenvalues, CsrMatrix};
use crate::spectra::{EnergyEntry, EnergyTable, SolveMethod};

pub type CMatrix = DMatrix<Complex64>;

/// Standard spin-`s` matrices in the `|s, m>` basis, `m = s, ..., -s`.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub s: HalfInteger,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
}

pub fn spin_matrices(s: HalfInteger) -> SpinMatrices {
    let ops = SiteOperators::new(s);
    let plus = ops.plus.map(|v| Complex64::new(v, 0.0));
    let minus = ops.minus.map(|v| Complex64::new(v, 0.0));
    let sx = (&plus + &minus) * Complex64::new(0.5, 0.0);
    // S^y = (S^+ - S^-) / 2i
    let sy = (&plus - &minus) * Complex64::new(0.0, -0.5);
    let sz = ops.z.map(|v| Complex64::new(v, 0.0));
    SpinMatrices { s, sx, sy, sz }
}

/// A dense complex operator on the full tensor space.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: CMatrix,
}

impl DenseOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

fn check_dim(chain: &SpinChainSpec, limit: usize) -> Result<usize> {
    let dim = chain.hilbert_dim().unwrap_or(usize::MAX);
    if dim > limit {
        return Err(Error::DimensionTooLarge { dim, limit });
    }
    Ok(dim)
}

fn cidentity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `op` placed on sites `first..first + k` of the chain, identities elsewhere.
fn embed(chain: &SpinChainSpec, first: usize, op: &CMatrix) -> CMatrix {
    let left: usize = chain.spins()[..first].iter().map(|s| s.multiplet_size()).product();
    let covered = {
        let mut n = 1;
        let mut x = first;
        while n < op.nrows() {
            n *= chain.spins()[x].multiplet_size();
            x += 1;
        }
        x
    };
    let right: usize = chain.spins()[covered..].iter().map(|s| s.multiplet_size()).product();
    cidentity(left).kronecker(op).kronecker(&cidentity(right))
}

fn components(m: &SpinMatrices) -> [&CMatrix; 3] {
    [&m.sx, &m.sy, &m.sz]
}

/// The chain Hamiltonian as a dense complex matrix.
pub fn hamiltonian_dense(chain: &SpinChainSpec, limit: usize) -> Result<DenseOperator> {
    let dim = check_dim(chain, limit)?;
    let mut h = CMatrix::zeros(dim, dim);
    for (x, &j) in chain.couplings().iter().enumerate() {
        let (s1, s2) = (chain.spins()[x], chain.spins()[x + 1]);
        let (a, b) = (spin_matrices(s1), spin_matrices(s2));
        let dot = components(&a)
            .iter()
            .zip(components(&b))
            .fold(CMatrix::zeros(a.sx.nrows() * b.sx.nrows(), a.sx.nrows() * b.sx.nrows()), |acc, (p, q)| {
                acc + p.kronecker(q)
            });
        let id = cidentity(dot.nrows());
        let bond = match chain.model() {
            crate::chain::ModelKind::Heisenberg => {
                (&dot * Complex64::new(1.0 / (s1.value() * s2.value()), 0.0) - &id) * Complex64::new(-j, 0.0)
            }
            crate::chain::ModelKind::BilinearBiquadratic { t } => {
                let sq = &dot * &dot;
                ((&id - &dot) + (&id - sq) * Complex64::new(t, 0.0)) * Complex64::new(j, 0.0)
            }
        };
        h += embed(chain, x, &bond);
    }
    Ok(DenseOperator { matrix: h })
}

fn total_component(chain: &SpinChainSpec, pick: impl Fn(&SpinMatrices) -> &CMatrix) -> CMatrix {
    let dim: usize = chain.spins().iter().map(|s| s.multiplet_size()).product();
    chain
        .spins()
        .iter()
        .enumerate()
        .fold(CMatrix::zeros(dim, dim), |acc, (x, s)| acc + embed(chain, x, pick(&spin_matrices(*s))))
}

/// `(sum_x S_x) . (sum_x S_x)`.
pub fn casimir_total(chain: &SpinChainSpec, limit: usize) -> Result<DenseOperator> {
    check_dim(chain, limit)?;
    let sx = total_component(chain, |m| &m.sx);
    let sy = total_component(chain, |m| &m.sy);
    let sz = total_component(chain, |m| &m.sz);
    Ok(DenseOperator { matrix: &sx * &sx + &sy * &sy + &sz * &sz })
}

/// Total `S^+`, `S^-` and `S^3`.
pub fn ladder_operators(
    chain: &SpinChainSpec,
    limit: usize,
) -> Result<(DenseOperator, DenseOperator, DenseOperator)> {
    check_dim(chain, limit)?;
    let sx = total_component(chain, |m| &m.sx);
    let sy = total_component(chain, |m| &m.sy);
    let sz = total_component(chain, |m| &m.sz);
    let i = Complex64::new(0.0, 1.0);
    let plus = &sx + &sy * i;
    let minus = &sx - &sy * i;
    Ok((DenseOperator { matrix: plus }, DenseOperator { matrix: minus }, DenseOperator { matrix: sz }))
}

/// Orthogonal projector onto the total-spin-`spin` subspace.
#[derive(Debug, Clone)]
pub struct SectorProjector {
    pub spin: HalfInteger,
    pub projector: DenseOperator,
}

/// Built as the Lagrange polynomial in the Casimir that is 1 on `S(S+1)` and
/// 0 on every other admissible eigenvalue.
pub fn sector_projector(chain: &SpinChainSpec, spin: HalfInteger, limit: usize) -> Result<SectorProjector> {
    check_dim(chain, limit)?;
    if !chain.is_admissible(spin) {
        return Err(Error::NotAdmissible(spin));
    }
    let c = casimir_total(chain, limit)?.matrix;
    let id = cidentity(c.nrows());
    let target = spin.casimir();
    let p = chain
        .admissible_spins()
        .into_iter()
        .filter(|s| *s != spin)
        .fold(id.clone(), |acc, other| {
            let e = other.casimir();
            acc * ((&c - &id * Complex64::new(e, 0.0)) * Complex64::new(1.0 / (target - e), 0.0))
        });
    Ok(SectorProjector { spin, projector: DenseOperator { matrix: p } })
}

/// Eigenvalues of `H` on the highest-weight vectors of one total spin, each
/// multiplet counted once.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpectrum {
    pub spin: HalfInteger,
    pub eigenvalues: Vec<f64>,
}

/// Highest-weight spectrum of every admissible spin, descending in spin.
///
/// For each spin `S` the `S^3 = S` block is restricted to the kernel of the
/// total `S^+` (equivalently the Casimir eigenspace `S(S+1)` of that block)
/// and `H` is diagonalized there.
pub fn highest_weight_spectrum(chain: &SpinChainSpec, limit: usize) -> Result<Vec<SectorSpectrum>> {
    let space = ProductSpace::for_chain(chain, limit)?;
    let h = space.hamiltonian(chain);
    let raising = space.raising();
    chain
        .admissible_spins()
        .into_iter()
        .map(|spin| sector_in(&space, &h, &raising, chain, spin))
        .collect()
}

/// Highest-weight spectrum of one total spin.
pub fn highest_weight_sector(chain: &SpinChainSpec, spin: HalfInteger, limit: usize) -> Result<SectorSpectrum> {
    if !chain.is_admissible(spin) {
        return Err(Error::NotAdmissible(spin));
    }
    let space = ProductSpace::for_chain(chain, limit)?;
    let h = space.hamiltonian(chain);
    sector_in(&space, &h, &space.raising(), chain, spin)
}

fn sector_in(
    space: &ProductSpace,
    h: &CsrMatrix,
    raising: &CsrMatrix,
    chain: &SpinChainSpec,
    spin: HalfInteger,
) -> Result<SectorSpectrum> {
    let q = highest_weight_frame(space, raising, spin);
    let expected = chain.multiplicity(spin) as usize;
    if q.ncols() != expected {
        return Err(Error::DimensionMismatch { expected, found: q.ncols() });
    }
    let block = space.magnetization_block(spin);
    let reduced = q.transpose() * h.dense_block(&block, &block) * &q;
    let sym = (&reduced + reduced.transpose()) * 0.5;
    Ok(SectorSpectrum { spin, eigenvalues: symmetric_eigenvalues(sym) })
}

/// Orthonormal basis (columns) of highest-weight vectors with `S^3 = spin`,
/// expressed on `space.magnetization_block(spin)`.
pub fn highest_weight_frame(space: &ProductSpace, raising: &CsrMatrix, spin: HalfInteger) -> DMatrix<f64> {
    let block = space.magnetization_block(spin);
    let upper = space.magnetization_block(spin + HalfInteger::ONE);
    if upper.is_empty() {
        return DMatrix::identity(block.len(), block.len());
    }
    let a = raising.dense_block(&upper, &block);
    // a^T a = C - S(S+1) on this block; its spectrum is {S'(S'+1) - S(S+1)},
    // separated from 0 by at least 2S + 2.
    let eig = (a.transpose() * &a).symmetric_eigen();
    let keep: Vec<usize> = (0..block.len()).filter(|&i| eig.eigenvalues[i] < 0.5).collect();
    DMatrix::from_fn(block.len(), keep.len(), |r, c| eig.eigenvectors[(r, keep[c])])
}

/// Minimum energy per admissible total spin by dense diagonalization.
///
/// The `dimension` of each entry is the size of the full total-spin sector,
/// `d(S) (2S + 1)`.
pub fn min_energy_per_sector_dense(chain: &SpinChainSpec, limit: usize) -> Result<EnergyTable> {
    let entries = highest_weight_spectrum(chain, limit)?
        .into_iter()
        .map(|sector| EnergyEntry {
            spin: sector.spin,
            dimension: sector.eigenvalues.len() * sector.spin.multiplet_size(),
            energy: sector.eigenvalues[0],
            method: SolveMethod::Dense,
        })
        .collect();
    Ok(EnergyTable { entries })
}

fn check_step(prev: &SpinChainSpec, next: &SpinChainSpec, kind: StepKind) -> Result<()> {
    let (p, n) = (prev.spins(), next.spins());
    let ok = match kind {
        StepKind::CaseI => n.len() == p.len() + 1 && n[..p.len()] == *p && n[p.len()] == HalfInteger::HALF,
        StepKind::CaseII => {
            n.len() == p.len()
                && n[..p.len() - 1] == p[..p.len() - 1]
                && n[p.len() - 1] == p[p.len() - 1] + HalfInteger::HALF
        }
        StepKind::Initial => false,
    };
    if !ok || next.couplings()[..prev.couplings().len()] != *prev.couplings() {
        return Err(Error::InvalidStep(alloc::format!("chains are not related by {kind:?}")));
    }
    Ok(())
}

/// `H_k (x) I` on the space of `prev` with a spin-1/2 appended.
fn extend_by_half(h: &CsrMatrix) -> CsrMatrix {
    let n = h.nrows();
    CsrMatrix::from_triplets(
        2 * n,
        2 * n,
        h.triplets().flat_map(|(r, c, v)| [(2 * r, 2 * c, v), (2 * r + 1, 2 * c + 1, v)]),
    )
}

/// Smallest eigenvalue of `H_{k+1} - H_k (x) I` for a step that appends a
/// spin-1/2, computed block by block in total `S^3`.
pub fn case_one_min_eigenvalue(prev: &SpinChainSpec, next: &SpinChainSpec, limit: usize) -> Result<f64> {
    check_step(prev, next, StepKind::CaseI)?;
    let small = ProductSpace::for_chain(prev, limit)?;
    let large = ProductSpace::for_chain(next, limit)?;
    let diff = large
        .hamiltonian(next)
        .add_scaled(&extend_by_half(&small.hamiltonian(prev)), -1.0);
    let top = next.max_total_spin();
    let mut min = f64::INFINITY;
    let mut m = top;
    while m >= HalfInteger::ZERO - top {
        let block = large.magnetization_block(m);
        if !block.is_empty() {
            let ev = symmetric_eigenvalues(diff.dense_block(&block, &block));
            min = min.min(ev[0]);
        }
        m = m - HalfInteger::ONE;
    }
    Ok(min)
}

/// The map from (chain `prev`) (x) spin-1/2 onto `next`, where the last site of
/// `next` is the spin `s + 1/2` multiplet of `s (x) 1/2`.
pub fn increment_projector(prev: &SpinChainSpec, next: &SpinChainSpec, limit: usize) -> Result<CsrMatrix> {
    check_step(prev, next, StepKind::CaseII)?;
    let mut ext_spins = prev.spins().to_vec();
    ext_spins.push(HalfInteger::HALF);
    let ext = ProductSpace::new(&ext_spins, 2 * limit)?;
    let large = ProductSpace::for_chain(next, limit)?;
    let last = prev.len() - 1;
    let two_s_plus_one = prev.spins()[last].multiplet_size() as f64;
    let mut triplets = Vec::with_capacity(ext.dim());
    for e in 0..ext.dim() {
        let mut downs: Vec<usize> = (0..ext_spins.len()).map(|x| ext.digit(e, x)).collect();
        let b = downs.pop().unwrap();
        let k = downs[last] + b;
        downs[last] = k;
        // Clebsch-Gordan <s, m - mb; 1/2, mb | s + 1/2, m> with m = s + 1/2 - k
        let w = if b == 0 {
            libm::sqrt((two_s_plus_one - k as f64) / two_s_plus_one)
        } else {
            libm::sqrt(k as f64 / two_s_plus_one)
        };
        if w != 0.0 {
            triplets.push((large.index_of(&downs), e, w));
        }
    }
    Ok(CsrMatrix::from_triplets(large.dim(), ext.dim(), triplets))
}

/// Frobenius norm of `H_{k+1} - P_k (H_k (x) I) P_k^*` for a step that raises
/// the last spin by 1/2.
pub fn case_two_residual(prev: &SpinChainSpec, next: &SpinChainSpec, limit: usize) -> Result<f64> {
    let p = increment_projector(prev, next, limit)?;
    let small = ProductSpace::for_chain(prev, limit)?;
    let large = ProductSpace::for_chain(next, limit)?;
    let compressed = p.matmul(&extend_by_half(&small.hamiltonian(prev))).matmul(&p.transpose());
    Ok(large.hamiltonian(next).add_scaled(&compressed, -1.0).frobenius_norm())
}
