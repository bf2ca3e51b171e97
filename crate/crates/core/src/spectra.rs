//! Minimum energies per total spin and the checks built on them: strict
//! ordering of the sector minima, the increment relations along the build
//! sequence, monotonicity under chain extension, the spectral gap and
//! complete low-energy spectra from the top sectors.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::basis::{embedding_indices, enumerate_hw_basis};
use crate::chain::{ModelKind, SpinChainSpec, StepKind};
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::oracle;
use crate::pf::{self, EigenRoute};
use crate::tl::{self, AssemblyPath, SparseSectorMatrix};
use crate::verdict::{ComparisonVerdict, Location, VerdictStatus, Witness};
use crate::DEFAULT_DENSE_LIMIT;

/// Absolute tolerance of the ordering check on adjacent sector minima.
pub const FOEL_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance of strict energy decreases along increments and extensions.
pub const STRICT_TOLERANCE: f64 = 1e-10;
/// Bound on the operator residuals of the increment relations.
pub const OPERATOR_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    /// Dense diagonalization on the tensor-product space.
    Dense,
    /// Dense or tridiagonal solve of the sector matrix.
    Sector,
    /// Shifted power iteration on the sector matrix.
    PowerIteration,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Dense => "dense",
            Self::Sector => "sector",
            Self::PowerIteration => "power-iteration",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MethodChoice {
    /// Dense within the dense limit, sector matrices beyond it.
    #[default]
    Auto,
    Dense,
    Sector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: MethodChoice,
    pub dense_limit: usize,
    pub assembly: AssemblyPath,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { method: MethodChoice::Auto, dense_limit: DEFAULT_DENSE_LIMIT, assembly: AssemblyPath::Auto }
    }
}

impl SolverOptions {
    pub fn with_method(method: MethodChoice) -> Self {
        Self { method, ..Self::default() }
    }

    /// Whether sector minima of `chain` come from the dense oracle.
    pub fn uses_dense(&self, chain: &SpinChainSpec) -> Result<bool> {
        let dim = chain.hilbert_dim();
        let within = dim.is_some_and(|d| d <= self.dense_limit);
        match self.method {
            MethodChoice::Auto => Ok(within),
            MethodChoice::Sector => Ok(false),
            MethodChoice::Dense if within => Ok(true),
            MethodChoice::Dense => {
                Err(Error::DimensionTooLarge { dim: dim.unwrap_or(usize::MAX), limit: self.dense_limit })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEntry {
    pub spin: HalfInteger,
    /// `d(S) (2S + 1)` for [`SolveMethod::Dense`], `d(S)` for sector solves.
    pub dimension: usize,
    pub energy: f64,
    pub method: SolveMethod,
}

/// Sector minima in descending order of total spin.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyTable {
    pub entries: Vec<EnergyEntry>,
}

impl EnergyTable {
    pub fn get(&self, spin: HalfInteger) -> Option<&EnergyEntry> {
        self.entries.iter().find(|e| e.spin == spin)
    }

    pub fn energy(&self, spin: HalfInteger) -> Option<f64> {
        self.get(spin).map(|e| e.energy)
    }
}

/// The first adjacent pair of total spins that is not strictly ordered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoelViolation {
    pub lower: HalfInteger,
    pub higher: HalfInteger,
    pub e_lower: f64,
    pub e_higher: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoelReport {
    pub table: EnergyTable,
    pub status: VerdictStatus,
    pub first_violation: Option<FoelViolation>,
}

/// Full highest-weight spectrum of one sector with its table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSolution {
    pub entry: EnergyEntry,
    pub eigenvalues: Vec<f64>,
}

fn sector_matrix(chain: &SpinChainSpec, spin: HalfInteger, opts: &SolverOptions) -> Result<SparseSectorMatrix> {
    tl::sector_hamiltonian_with(chain, spin, opts.assembly, opts.dense_limit)
}

/// Minimum energy of the spin-`spin` sector.
pub fn min_energy_sector(chain: &SpinChainSpec, spin: HalfInteger, opts: &SolverOptions) -> Result<EnergyEntry> {
    if !chain.is_admissible(spin) {
        return Err(Error::NotAdmissible(spin));
    }
    if opts.uses_dense(chain)? {
        let sector = oracle::highest_weight_sector(chain, spin, opts.dense_limit)?;
        return Ok(dense_entry(&sector));
    }
    entry_from_matrix(&sector_matrix(chain, spin, opts)?)
}

/// Table entry of an assembled sector matrix.
pub fn entry_from_matrix(m: &SparseSectorMatrix) -> Result<EnergyEntry> {
    let (energy, route) = pf::min_eigenvalue_with_route(m)?;
    Ok(EnergyEntry { spin: m.sector(), dimension: m.dim(), energy, method: route_method(route) })
}

/// Full spectrum of an assembled sector matrix, ascending.
pub fn spectrum_from_matrix(m: &SparseSectorMatrix) -> SectorSolution {
    let eigenvalues = pf::eigenvalues(m);
    let entry = EnergyEntry { spin: m.sector(), dimension: m.dim(), energy: eigenvalues[0], method: SolveMethod::Sector };
    SectorSolution { entry, eigenvalues }
}

/// Every highest-weight eigenvalue of the spin-`spin` sector, ascending.
pub fn sector_spectrum(chain: &SpinChainSpec, spin: HalfInteger, opts: &SolverOptions) -> Result<SectorSolution> {
    if !chain.is_admissible(spin) {
        return Err(Error::NotAdmissible(spin));
    }
    if opts.uses_dense(chain)? {
        let sector = oracle::highest_weight_sector(chain, spin, opts.dense_limit)?;
        return Ok(SectorSolution { entry: dense_entry(&sector), eigenvalues: sector.eigenvalues });
    }
    Ok(spectrum_from_matrix(&sector_matrix(chain, spin, opts)?))
}

fn dense_entry(sector: &oracle::SectorSpectrum) -> EnergyEntry {
    EnergyEntry {
        spin: sector.spin,
        dimension: sector.eigenvalues.len() * sector.spin.multiplet_size(),
        energy: sector.eigenvalues[0],
        method: SolveMethod::Dense,
    }
}

fn route_method(route: EigenRoute) -> SolveMethod {
    match route {
        EigenRoute::PowerIteration => SolveMethod::PowerIteration,
        EigenRoute::Tridiagonal | EigenRoute::Dense => SolveMethod::Sector,
    }
}

/// Minimum energy of every admissible spin.
pub fn energy_table(chain: &SpinChainSpec, opts: &SolverOptions) -> Result<EnergyTable> {
    if opts.uses_dense(chain)? {
        return oracle::min_energy_per_sector_dense(chain, opts.dense_limit);
    }
    let entries = chain
        .admissible_spins()
        .into_iter()
        .map(|s| min_energy_sector(chain, s, opts))
        .collect::<Result<_>>()?;
    Ok(EnergyTable { entries })
}

/// Classifies a table: strictly decreasing energy with increasing spin on
/// every adjacent pair, within [`FOEL_TOLERANCE`].
pub fn classify_table(table: EnergyTable) -> FoelReport {
    let mut status = VerdictStatus::HoldsStrict;
    let mut first_violation = None;
    for pair in table.entries.windows(2) {
        let (higher, lower) = (&pair[0], &pair[1]);
        let diff = lower.energy - higher.energy;
        let here = if diff > FOEL_TOLERANCE {
            VerdictStatus::HoldsStrict
        } else if diff >= -FOEL_TOLERANCE {
            VerdictStatus::HoldsNonStrict
        } else {
            VerdictStatus::Violated
        };
        if here != VerdictStatus::HoldsStrict && first_violation.is_none() {
            first_violation = Some(FoelViolation {
                lower: lower.spin,
                higher: higher.spin,
                e_lower: lower.energy,
                e_higher: higher.energy,
            });
        }
        status = status.combine(here);
    }
    FoelReport { table, status, first_violation }
}

/// Computes the energy table and checks that the minimum energy strictly
/// decreases as the total spin grows.
pub fn foel_check(chain: &SpinChainSpec, opts: &SolverOptions) -> Result<FoelReport> {
    Ok(classify_table(energy_table(chain, opts)?))
}

fn require_heisenberg(chain: &SpinChainSpec) -> Result<()> {
    match chain.model() {
        ModelKind::Heisenberg => Ok(()),
        ModelKind::BilinearBiquadratic { .. } => {
            Err(Error::InvalidArgument("increment relations are stated for the Heisenberg bond".into()))
        }
    }
}

/// Checks both relations of every increment step of the build sequence.
///
/// For each step `k -> k+1` the result holds one operator verdict (the
/// smallest eigenvalue of `H_{k+1} - H_k (x) I` for appended sites, the
/// Frobenius residual of `H_{k+1} - P (H_k (x) I) P^*` for grown sites) with
/// its value as witness, followed by one energy verdict
/// `E(H_{k+1}, S + 1/2) < E(H_k, S)` per admissible `S` of `H_k` below its
/// maximal spin. At the maximal spin both energies vanish, so that line is
/// not compared.
pub fn increment_relations_check(chain: &SpinChainSpec, opts: &SolverOptions) -> Result<Vec<ComparisonVerdict>> {
    require_heisenberg(chain)?;
    let steps = chain.build_sequence();
    let tables = steps
        .iter()
        .map(|s| energy_table(&s.resulting_chain, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for k in 1..steps.len() {
        let (prev, next) = (&steps[k - 1].resulting_chain, &steps[k].resulting_chain);
        let kind = steps[k].kind;
        let (value, ok) = match kind {
            StepKind::CaseI => {
                let e = oracle::case_one_min_eigenvalue(prev, next, opts.dense_limit)?;
                (e, e >= -OPERATOR_TOLERANCE)
            }
            StepKind::CaseII => {
                let r = oracle::case_two_residual(prev, next, opts.dense_limit)?;
                (r, r < OPERATOR_TOLERANCE)
            }
            StepKind::Initial => unreachable!("only the first element is initial"),
        };
        let status = if ok { VerdictStatus::HoldsStrict } else { VerdictStatus::Violated };
        out.push(ComparisonVerdict::new(status).with_witness(Location::Step { step: k, kind }, value));
        let top = prev.max_total_spin();
        for entry in tables[k - 1].entries.iter().filter(|e| e.spin < top) {
            let e_next = tables[k].energy(entry.spin + HalfInteger::HALF).ok_or(Error::NotAdmissible(entry.spin))?;
            out.push(ComparisonVerdict::from_energies(
                entry.energy,
                e_next,
                STRICT_TOLERANCE,
                Location::StepSector { step: k, spin: entry.spin },
            ));
        }
    }
    Ok(out)
}

/// Matrix-level comparison of one increment step at one spin.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    pub step: usize,
    pub kind: StepKind,
    /// Spin of the smaller chain; the larger chain is compared at `spin + 1/2`.
    pub spin: HalfInteger,
    /// Off-diagonal signs of the larger sector matrix.
    pub sign_structure: ComparisonVerdict,
    /// Entrywise domination of the embedded block.
    pub entries: ComparisonVerdict,
    /// Minimum eigenvalue comparison of the two sector matrices.
    pub spectra: ComparisonVerdict,
}

/// For every increment step and every admissible spin of the smaller chain:
/// assembles both sector matrices, embeds the smaller basis into the larger
/// one, and compares entries and minimum eigenvalues.
pub fn embedding_checks(chain: &SpinChainSpec, opts: &SolverOptions) -> Result<Vec<EmbeddingReport>> {
    require_heisenberg(chain)?;
    let steps = chain.build_sequence();
    let mut out = Vec::new();
    for k in 1..steps.len() {
        let (prev, next) = (&steps[k - 1].resulting_chain, &steps[k].resulting_chain);
        for spin in prev.admissible_spins() {
            let small_basis = enumerate_hw_basis(prev, spin)?;
            let large_spin = spin + HalfInteger::HALF;
            let large_basis = enumerate_hw_basis(next, large_spin)?;
            let small = tl::assemble(prev, spin, &small_basis, opts.assembly, opts.dense_limit)?;
            let large = tl::assemble(next, large_spin, &large_basis, opts.assembly, opts.dense_limit)?;
            let embedding = embedding_indices(&small_basis, &large_basis, &steps[k])?;
            let entries = tl::compare_embedded(&small, &large, &embedding)?;
            let reordered = leading_block_first(&large.to_dense(), &embedding);
            out.push(EmbeddingReport {
                step: k,
                kind: steps[k].kind,
                spin,
                sign_structure: tl::offdiag_nonpositive_check(&large),
                entries,
                spectra: pf::pf_compare(&small, &reordered),
            });
        }
    }
    Ok(out)
}

/// `m` with the rows and columns listed in `first` moved to the front, in
/// that order, followed by the others in their original order.
fn leading_block_first(m: &DMatrix<f64>, first: &[usize]) -> DMatrix<f64> {
    let mut order = first.to_vec();
    order.extend((0..m.nrows()).filter(|i| !first.contains(i)));
    DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(order[r], order[c])])
}

/// Compares `E(H, S_max - n)` with `E(H', S'_max - n)` for a chain `H'` that
/// extends `chain` by sites at one end, for every integer `n >= 1` with both
/// spins admissible. The extension must be strictly lower.
pub fn extension_mono_check(
    chain: &SpinChainSpec,
    extension: &SpinChainSpec,
    opts: &SolverOptions,
) -> Result<Vec<ComparisonVerdict>> {
    let (l, m) = (chain.len(), extension.len());
    let right = m > l
        && extension.spins()[..l] == *chain.spins()
        && extension.couplings()[..l - 1] == *chain.couplings();
    let left = m > l
        && extension.spins()[m - l..] == *chain.spins()
        && extension.couplings()[m - l..] == *chain.couplings();
    if !(right || left) || chain.model() != extension.model() {
        return Err(Error::InvalidExtension(
            "the extension must add sites at one end and keep the chain's spins, couplings and model".into(),
        ));
    }
    let small = energy_table(chain, opts)?;
    let large = energy_table(extension, opts)?;
    let (top, top_ext) = (chain.max_total_spin(), extension.max_total_spin());
    let mut out = Vec::new();
    let mut n = HalfInteger::ONE;
    while n <= top {
        if let (Some(e), Some(e_ext)) = (small.energy(top - n), large.energy(top_ext - n)) {
            out.push(ComparisonVerdict::from_energies(e, e_ext, STRICT_TOLERANCE, Location::Depth { n }));
        }
        n = n + HalfInteger::ONE;
    }
    Ok(out)
}

/// `E(H, S_max - 1)`, the energy of the lowest excitation above the ground multiplet.
pub fn spectral_gap(chain: &SpinChainSpec, opts: &SolverOptions) -> Result<f64> {
    let spin = chain.max_total_spin() - HalfInteger::ONE;
    if spin.is_negative() || !chain.is_admissible(spin) {
        return Err(Error::NotAdmissible(spin));
    }
    Ok(min_energy_sector(chain, spin, opts)?.energy)
}

/// Every highest-weight eigenvalue below `e_max`, found by diagonalizing the
/// sectors from the maximal spin downwards and stopping at the first sector
/// whose minimum is at least `e_max`.
pub fn eigenvalues_below(
    chain: &SpinChainSpec,
    e_max: f64,
    opts: &SolverOptions,
) -> Result<Vec<(HalfInteger, f64)>> {
    if e_max.is_nan() || e_max <= 0.0 {
        return Err(Error::InvalidArgument(alloc::format!("energy bound {e_max} must be positive")));
    }
    let mut out = Vec::new();
    for spin in chain.admissible_spins() {
        let sector = sector_spectrum(chain, spin, opts)?;
        if sector.entry.energy >= e_max {
            break;
        }
        out.extend(sector.eigenvalues.into_iter().filter(|e| *e < e_max).map(|e| (spin, e)));
    }
    Ok(out)
}

/// Ordering check of the spin-1 bilinear-biquadratic chain of length `len`
/// for each biquadratic coefficient.
pub fn biquadratic_sweep(len: usize, t_values: &[f64], opts: &SolverOptions) -> Result<Vec<(f64, FoelReport)>> {
    if len < 2 {
        return Err(Error::InvalidArgument("the sweep needs at least two sites".into()));
    }
    t_values
        .iter()
        .map(|&t| {
            let chain = SpinChainSpec::bilinear_biquadratic(len, t)?;
            Ok((t, foel_check(&chain, opts)?))
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| libm::log(*x)).collect();
    let ly: Vec<f64> = ys.iter().map(|y| libm::log(*y)).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Witnesses of every verdict that does not hold, flattened.
pub fn failures(verdicts: &[ComparisonVerdict]) -> Vec<Witness> {
    verdicts
        .iter()
        .filter(|v| !v.status.holds())
        .flat_map(|v| v.witnesses.iter().copied())
        .collect()
}
