//! Structured outcomes of the comparison checks.

use alloc::vec::Vec;
use core::fmt;

use crate::chain::StepKind;
use crate::half::HalfInteger;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    HoldsStrict,
    HoldsNonStrict,
    Violated,
    PreconditionFailed,
}

impl VerdictStatus {
    pub fn holds(self) -> bool {
        matches!(self, Self::HoldsStrict | Self::HoldsNonStrict)
    }

    /// The weaker of two statuses: a failure dominates a non-strict outcome,
    /// which dominates a strict one.
    pub fn combine(self, other: Self) -> Self {
        fn rank(s: VerdictStatus) -> u8 {
            match s {
                VerdictStatus::HoldsStrict => 0,
                VerdictStatus::HoldsNonStrict => 1,
                VerdictStatus::PreconditionFailed => 2,
                VerdictStatus::Violated => 3,
            }
        }
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::HoldsStrict => "holds-strict",
            Self::HoldsNonStrict => "holds-non-strict",
            Self::Violated => "violated",
            Self::PreconditionFailed => "precondition-failed",
        }
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which hypothesis of the matrix comparison a witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// The larger matrix has fewer rows than the smaller one.
    DimensionOrder,
    /// A positive off-diagonal entry in the smaller matrix.
    OffDiagonalSmall,
    /// A positive off-diagonal entry in the larger matrix.
    OffDiagonalLarge,
    /// An entry of the larger matrix exceeds the corresponding entry of the smaller.
    Domination,
}

/// Where a witness was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    /// A matrix entry, 0-based.
    Entry { row: usize, col: usize },
    /// A failed precondition, with the offending entry when there is one.
    Precondition { condition: Condition, row: usize, col: usize },
    /// The operator relation of one increment step (index into the build sequence).
    Step { step: usize, kind: StepKind },
    /// The energy comparison of one increment step at spin `spin` of the smaller chain.
    StepSector { step: usize, spin: HalfInteger },
    /// Adjacent total spins of an energy table, `lower < higher`.
    SpinPair { lower: HalfInteger, higher: HalfInteger },
    /// Depth `n` below the maximal spin, for chain extensions.
    Depth { n: HalfInteger },
    /// The two minimum eigenvalues.
    Eigenvalues,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Entry { row, col } => write!(f, "entry ({row}, {col})"),
            Self::Precondition { condition, row, col } => {
                write!(f, "{condition:?} at ({row}, {col})")
            }
            Self::Step { step, kind } => write!(f, "step {step} ({kind:?})"),
            Self::StepSector { step, spin } => write!(f, "step {step}, S = {spin}"),
            Self::SpinPair { lower, higher } => write!(f, "S = {lower} vs S = {higher}"),
            Self::Depth { n } => write!(f, "n = {n}"),
            Self::Eigenvalues => f.write_str("minimum eigenvalues"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub location: Location,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVerdict {
    pub status: VerdictStatus,
    pub witnesses: Vec<Witness>,
    /// Minimum eigenvalue (or energy) on the smaller side, when the check compares energies.
    pub e_small: Option<f64>,
    pub e_large: Option<f64>,
}

impl ComparisonVerdict {
    pub fn new(status: VerdictStatus) -> Self {
        Self { status, witnesses: Vec::new(), e_small: None, e_large: None }
    }

    /// Classifies `e_large < e_small` with absolute tolerance `tol`.
    pub fn from_energies(e_small: f64, e_large: f64, tol: f64, location: Location) -> Self {
        let status = if e_large < e_small - tol {
            VerdictStatus::HoldsStrict
        } else if e_large <= e_small + tol {
            VerdictStatus::HoldsNonStrict
        } else {
            VerdictStatus::Violated
        };
        let witnesses = if status == VerdictStatus::HoldsStrict {
            Vec::new()
        } else {
            alloc::vec![Witness { location, value: e_large - e_small }]
        };
        Self { status, witnesses, e_small: Some(e_small), e_large: Some(e_large) }
    }

    pub fn with_witness(mut self, location: Location, value: f64) -> Self {
        self.witnesses.push(Witness { location, value });
        self
    }
}
