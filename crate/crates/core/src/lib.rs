//! Spectral toolkit for open ferromagnetic Heisenberg chains with arbitrary
//! site spins.
//!
//! The crate builds the highest-weight arc-diagram basis of every total-spin
//! sector, assembles the sector Hamiltonian in that basis, and certifies that
//! the minimum energy per total spin is strictly decreasing in the spin.
//! A dense tensor-product engine ([`oracle`]) provides ground truth for small
//! chains.
//!
//! The crate is `no_std` (it needs `alloc`). IO, file formats and the command
//! line live in the `foel` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod chain;
mod error;
mod fingerprint;
pub mod half;
pub mod linalg;
pub mod oracle;
pub mod pf;
pub mod spectra;
pub mod tl;
pub mod verdict;

pub use basis::{
    embed_next, enumerate_hw_basis, expand_to_tensor, gram_matrix, pair_arcs, Arrow, ArcDiagram,
    OrderedIsingConfig, TensorVector,
};
pub use chain::{IncrementStep, ModelKind, SpinChainSpec, StepKind};
pub use error::{Error, Result};
pub use half::HalfInteger;
pub use pf::{irreducibility_certificate, min_eigenvalue, pf_compare, IrreducibilityCertificate};
pub use spectra::{EnergyEntry, EnergyTable, FoelReport, MethodChoice, SolveMethod};
pub use tl::{sector_hamiltonian, AssemblyPath, SparseSectorMatrix};
pub use verdict::{ComparisonVerdict, Location, VerdictStatus, Witness};

/// Default bound on the tensor-product dimension accepted by the dense oracle.
pub const DEFAULT_DENSE_LIMIT: usize = 4096;
