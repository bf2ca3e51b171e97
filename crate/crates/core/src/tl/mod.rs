//! Sector Hamiltonians in the arc-diagram basis.
//!
//! Three assembly paths produce the same matrix `M` defined by
//! `H v_a = sum_b M_{ba} v_b`, where `v_a` is the expanded diagram `a`:
//!
//! * [`AssemblyPath::TemperleyLieb`]: nearest-neighbour cup-cap rules on
//!   spin-1/2 strands (all-spin-1/2 Heisenberg chains).
//! * [`AssemblyPath::Bracket`]: every site block is a symmetric tensor, i.e. a
//!   binary form; diagrams are products of brackets `[xy]` and up-forms
//!   `u_x`, a bond acts as `[xy] Omega_xy` (Cayley's Omega process), and the
//!   result is straightened back onto non-crossing, non-spanning diagrams
//!   (any Heisenberg chain).
//! * [`AssemblyPath::Expansion`]: expand every diagram into the tensor basis,
//!   apply the dense bond operators and solve the Gram system (any model,
//!   dense limit only).
//!
//! Every bond of `-J [S_x.S_y / (s_x s_y) - 1]` equals
//! `(2J / (n_x n_y)) sum_{a in x, b in y} U_ab` on the symmetric blocks, with
//! `n_x = 2 s_x` strands and `U = 1 - swap` the cup-cap generator (`U^2 = 2U`).

mod bracket;
mod expansion;
pub mod jones_wenzl;
mod temperley_lieb;

pub use jones_wenzl::{jones_wenzl, jones_wenzl_reduce, JonesWenzlReduction, TlDiagram, TlElement};
pub use temperley_lieb::{apply_bond, DiagramWeight};

use alloc::vec::Vec;

use hashbrown::HashMap;
use nalgebra::DMatrix;

use crate::basis::{enumerate_hw_basis, ArcDiagram};
use crate::chain::{ModelKind, SpinChainSpec};
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::verdict::{ComparisonVerdict, Location, VerdictStatus, Witness};
use crate::DEFAULT_DENSE_LIMIT;

/// Bumped whenever the meaning of the assembled matrix entries changes;
/// part of the on-disk cache key.
pub const NORMALIZATION_VERSION: u32 = 1;

/// Off-diagonal entries above this count as positive.
pub const OFFDIAG_TOLERANCE: f64 = 1e-12;

/// Slack allowed when comparing embedded matrix entries.
pub const EMBED_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssemblyPath {
    /// Temperley-Lieb rules for all-spin-1/2 Heisenberg chains, tensor
    /// expansion for other chains within the dense limit, and the bracket
    /// engine for larger Heisenberg chains.
    Auto,
    TemperleyLieb,
    Bracket,
    Expansion,
}

/// The coefficient matrix of `H` in the arc basis of one sector, as
/// triplets sorted by column and then row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSectorMatrix {
    dim: usize,
    sector: HalfInteger,
    fingerprint: u64,
    triplets: Vec<(usize, usize, f64)>,
}

impl SparseSectorMatrix {
    /// Duplicate positions are summed and exact zeros dropped.
    pub fn new(
        dim: usize,
        sector: HalfInteger,
        fingerprint: u64,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut t: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        if let Some(&(r, c, _)) = t.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::InvalidArgument(alloc::format!(
                "entry ({r}, {c}) outside a {dim}x{dim} matrix"
            )));
        }
        t.sort_unstable_by_key(|e| (e.1, e.0));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| t.2 != 0.0);
        Ok(Self { dim, sector, fingerprint, triplets: merged })
    }

    /// Entries with `|m_ij| <= drop * max(1, max |m|)` are treated as zero.
    pub fn from_dense(m: &DMatrix<f64>, sector: HalfInteger, fingerprint: u64, drop: f64) -> Self {
        let scale = m.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let triplets = (0..m.ncols())
            .flat_map(|c| (0..m.nrows()).map(move |r| (r, c)))
            .map(|(r, c)| (r, c, m[(r, c)]))
            .filter(|t| t.2.abs() > drop * scale)
            .collect();
        Self { dim: m.nrows(), sector, fingerprint, triplets }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sector(&self) -> HalfInteger {
        self.sector
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn triplets(&self) -> &[(usize, usize, f64)] {
        &self.triplets
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match self.triplets.binary_search_by(|t| (t.1, t.0).cmp(&(col, row))) {
            Ok(k) => self.triplets[k].2,
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = alloc::vec![0.0; self.dim];
        for &(r, c, v) in &self.triplets {
            if r == c {
                d[r] = v;
            }
        }
        d
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = alloc::vec![0.0; self.dim];
        for &(r, c, v) in &self.triplets {
            y[r] += v * x[c];
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.triplets {
            m[(r, c)] = v;
        }
        m
    }
}

/// The sector matrix of `chain` at total spin `spin` by the automatic path.
pub fn sector_hamiltonian(chain: &SpinChainSpec, spin: HalfInteger) -> Result<SparseSectorMatrix> {
    sector_hamiltonian_with(chain, spin, AssemblyPath::Auto, DEFAULT_DENSE_LIMIT)
}

pub fn sector_hamiltonian_with(
    chain: &SpinChainSpec,
    spin: HalfInteger,
    path: AssemblyPath,
    dense_limit: usize,
) -> Result<SparseSectorMatrix> {
    let basis = enumerate_hw_basis(chain, spin)?;
    assemble(chain, spin, &basis, path, dense_limit)
}

/// Assembles the sector matrix on a basis previously obtained from
/// [`enumerate_hw_basis`].
pub fn assemble(
    chain: &SpinChainSpec,
    spin: HalfInteger,
    basis: &[ArcDiagram],
    path: AssemblyPath,
    dense_limit: usize,
) -> Result<SparseSectorMatrix> {
    let path = resolve_path(chain, path, dense_limit);
    let triplets = match path {
        AssemblyPath::TemperleyLieb => temperley_lieb::assemble(chain, basis)?,
        AssemblyPath::Bracket => bracket::assemble(chain, basis)?,
        AssemblyPath::Expansion => {
            let m = expansion::assemble(chain, basis, dense_limit)?;
            return Ok(SparseSectorMatrix::from_dense(&m, spin, chain.fingerprint(), expansion::DROP_TOLERANCE));
        }
        AssemblyPath::Auto => unreachable!("resolved above"),
    };
    SparseSectorMatrix::new(basis.len(), spin, chain.fingerprint(), triplets)
}

/// The concrete path [`AssemblyPath::Auto`] stands for on this chain.
pub fn resolve_path(chain: &SpinChainSpec, path: AssemblyPath, dense_limit: usize) -> AssemblyPath {
    if path != AssemblyPath::Auto {
        return path;
    }
    let heisenberg = chain.model() == ModelKind::Heisenberg;
    let within = chain.hilbert_dim().is_some_and(|d| d <= dense_limit);
    if heisenberg && chain.is_all_spin_half() {
        AssemblyPath::TemperleyLieb
    } else if within || !heisenberg {
        AssemblyPath::Expansion
    } else {
        AssemblyPath::Bracket
    }
}

/// Holds iff every off-diagonal entry is at most [`OFFDIAG_TOLERANCE`].
pub fn offdiag_nonpositive_check(m: &SparseSectorMatrix) -> ComparisonVerdict {
    let witnesses: Vec<Witness> = m
        .triplets()
        .iter()
        .filter(|(r, c, v)| r != c && *v > OFFDIAG_TOLERANCE)
        .map(|&(row, col, value)| Witness { location: Location::Entry { row, col }, value })
        .collect();
    let status = if witnesses.is_empty() { VerdictStatus::HoldsStrict } else { VerdictStatus::Violated };
    ComparisonVerdict { status, witnesses, e_small: None, e_large: None }
}

/// Checks `large[e(i), e(j)] <= small[i, j]` for the embedding `e`.
///
/// Violations make the verdict [`VerdictStatus::Violated`]; otherwise it is
/// strict when at least one entry decreases and non-strict when all compared
/// entries are equal. Each strict decrease is listed as a witness with the
/// (negative) difference.
pub fn compare_embedded(
    small: &SparseSectorMatrix,
    large: &SparseSectorMatrix,
    embedding: &[usize],
) -> Result<ComparisonVerdict> {
    if embedding.len() != small.dim() || large.dim() < small.dim() {
        return Err(Error::DimensionMismatch { expected: small.dim(), found: embedding.len() });
    }
    let mut seen = alloc::vec![false; large.dim()];
    for &e in embedding {
        if e >= large.dim() || core::mem::replace(&mut seen[e], true) {
            return Err(Error::InvalidArgument(alloc::format!("embedding is not injective into 0..{}", large.dim())));
        }
    }
    let mut violations = Vec::new();
    let mut decreases = Vec::new();
    let n = small.dim();
    for i in 0..n {
        for j in 0..n {
            let diff = large.get(embedding[i], embedding[j]) - small.get(i, j);
            let w = Witness { location: Location::Entry { row: i, col: j }, value: diff };
            if diff > EMBED_TOLERANCE {
                violations.push(w);
            } else if diff < -EMBED_TOLERANCE {
                decreases.push(w);
            }
        }
    }
    let (status, witnesses) = if !violations.is_empty() {
        (VerdictStatus::Violated, violations)
    } else if !decreases.is_empty() {
        (VerdictStatus::HoldsStrict, decreases)
    } else {
        (VerdictStatus::HoldsNonStrict, Vec::new())
    };
    Ok(ComparisonVerdict { status, witnesses, e_small: None, e_large: None })
}

/// Position of every basis diagram, keyed by the diagram itself.
pub(crate) fn basis_index(basis: &[ArcDiagram]) -> HashMap<&ArcDiagram, usize> {
    basis.iter().enumerate().map(|(i, d)| (d, i)).collect()
}

#[cfg(test)]
mod tests;
