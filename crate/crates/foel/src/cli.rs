//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 success (or a strict verdict), 2 error, 3 a verdict that
//! holds only with equality somewhere, 4 a violated verdict.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use foel_core::spectra::{self, SectorSolution, SolverOptions};
use foel_core::{
    enumerate_hw_basis, tl, EnergyEntry, EnergyTable, HalfInteger, MethodChoice, SparseSectorMatrix,
    SpinChainSpec, VerdictStatus,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::cache::SectorCache;
use crate::chain_file::{read_chain, ChainFileError, ChainSpecFile};
use crate::report::{csv_energy, table_csv, table_rows, FoelJson, RunReport, TableRow, VerdictJson};

#[derive(Debug, Parser)]
#[command(name = "foel", version, about = "Sector minima and energy ordering of ferromagnetic spin chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ChainArgs {
    /// Chain specification (JSON).
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Reuse assembled sector matrices from FOEL_CACHE_DIR (default `.foel-cache`).
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub cache: Switch,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum energy of every (or one) total-spin sector.
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        /// `all` or a total spin such as `3/2`.
        #[arg(long, default_value = "all")]
        sector: String,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Checks that the sector minima strictly decrease with the total spin.
    Foel {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Energy of the lowest excitation, the minimum at spin S_max - 1.
    Gap {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Every highest-weight eigenvalue below an energy.
    Below {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        energy: f64,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Compares sector minima of a chain with a longer chain extending it.
    /// Without `--extension`, every proper prefix is compared with the chain.
    Mono {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        extension: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Arc-diagram basis of one sector, one diagram per line.
    Basis {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        sector: String,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        out: Output,
    },
    /// Ordering verdicts of the spin-1 bilinear-biquadratic chain over a grid of t.
    SweepT {
        #[arg(long = "L")]
        len: usize,
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Dense,
    Sector,
}

impl From<Method> for MethodChoice {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => MethodChoice::Auto,
            Method::Dense => MethodChoice::Dense,
            Method::Sector => MethodChoice::Sector,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Text,
}

/// A failed invocation, printed to stderr as JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self { kind, message: message.into(), file: None, line: None, column: None, field: None }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self }).to_string()
    }
}

impl From<foel_core::Error> for CliError {
    fn from(e: foel_core::Error) -> Self {
        use foel_core::Error as E;
        let kind = match &e {
            E::InvalidChain(_) => "invalid-chain",
            E::DimensionTooLarge { .. } => "dimension-too-large",
            E::NotAdmissible(_) => "not-admissible",
            E::InconsistentDiagram(_) => "inconsistent-diagram",
            E::InvalidStep(_) => "invalid-step",
            E::UnsupportedSpin(_) => "unsupported-spin",
            E::DimensionMismatch { .. } => "dimension-mismatch",
            E::NoConvergence { .. } => "no-convergence",
            E::InvalidExtension(_) => "invalid-extension",
            E::InvalidArgument(_) => "invalid-argument",
        };
        Self::new(kind, e.to_string())
    }
}

impl From<ChainFileError> for CliError {
    fn from(e: ChainFileError) -> Self {
        Self {
            kind: "chain-file",
            message: e.message,
            file: e.source_name,
            line: e.line,
            column: e.column,
            field: e.field,
        }
    }
}

/// What a successful command prints and how the process exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: RunReport,
    pub rendered: String,
    pub exit_code: i32,
}

pub fn exit_code(status: VerdictStatus) -> i32 {
    match status {
        VerdictStatus::HoldsStrict => 0,
        VerdictStatus::HoldsNonStrict => 3,
        VerdictStatus::Violated => 4,
        VerdictStatus::PreconditionFailed => 2,
    }
}

/// Sector solves with the matrices optionally served from a disk cache.
/// Within the dense limit under `auto` (or with `dense`) the tensor-product
/// oracle answers and the cache is not involved.
pub struct Solver {
    pub opts: SolverOptions,
    pub cache: Option<SectorCache>,
}

impl Solver {
    pub fn new(method: Method, cache: Switch) -> Self {
        Self {
            opts: SolverOptions::with_method(method.into()),
            cache: (cache == Switch::On).then(SectorCache::from_env),
        }
    }

    fn matrix(&self, chain: &SpinChainSpec, spin: HalfInteger) -> foel_core::Result<SparseSectorMatrix> {
        if !chain.is_admissible(spin) {
            return Err(foel_core::Error::NotAdmissible(spin));
        }
        let assemble = || tl::sector_hamiltonian_with(chain, spin, self.opts.assembly, self.opts.dense_limit);
        match &self.cache {
            Some(cache) => cache.get_or_insert(chain, spin, assemble).map(|(m, _)| m),
            None => assemble(),
        }
    }

    pub fn entry(&self, chain: &SpinChainSpec, spin: HalfInteger) -> foel_core::Result<EnergyEntry> {
        if self.opts.uses_dense(chain)? {
            return spectra::min_energy_sector(chain, spin, &self.opts);
        }
        spectra::entry_from_matrix(&self.matrix(chain, spin)?)
    }

    pub fn spectrum(&self, chain: &SpinChainSpec, spin: HalfInteger) -> foel_core::Result<SectorSolution> {
        if self.opts.uses_dense(chain)? {
            return spectra::sector_spectrum(chain, spin, &self.opts);
        }
        if !chain.is_admissible(spin) {
            return Err(foel_core::Error::NotAdmissible(spin));
        }
        Ok(spectra::spectrum_from_matrix(&self.matrix(chain, spin)?))
    }

    /// Sector minima in descending spin; sectors are solved in parallel.
    pub fn table(&self, chain: &SpinChainSpec) -> foel_core::Result<EnergyTable> {
        if self.opts.uses_dense(chain)? {
            return spectra::energy_table(chain, &self.opts);
        }
        let entries =
            chain.admissible_spins().par_iter().map(|&s| self.entry(chain, s)).collect::<foel_core::Result<_>>()?;
        Ok(EnergyTable { entries })
    }

    /// Highest-weight eigenvalues below `e_max`, scanning sectors downward
    /// from the maximal spin. Each sector is solved together with the next
    /// one, which is discarded when the scan stops.
    pub fn below(&self, chain: &SpinChainSpec, e_max: f64) -> foel_core::Result<(Vec<(HalfInteger, f64)>, usize)> {
        if e_max.is_nan() || e_max <= 0.0 {
            return Err(foel_core::Error::InvalidArgument(format!("energy bound {e_max} must be positive")));
        }
        let spins = chain.admissible_spins();
        let mut out = Vec::new();
        let mut ahead: Option<SectorSolution> = None;
        for k in 0..spins.len() {
            let (current, next) = match ahead.take() {
                Some(s) => (Ok(s), spins.get(k + 1).map(|&n| self.spectrum(chain, n))),
                None => rayon::join(
                    || self.spectrum(chain, spins[k]),
                    || spins.get(k + 1).map(|&n| self.spectrum(chain, n)),
                ),
            };
            let current = current?;
            if current.entry.energy >= e_max {
                return Ok((out, k + 1));
            }
            out.extend(current.eigenvalues.iter().filter(|e| **e < e_max).map(|&e| (current.entry.spin, e)));
            ahead = next.transpose()?;
        }
        Ok((out, spins.len()))
    }
}

fn parse_sector(text: &str) -> Result<HalfInteger, CliError> {
    text.parse::<HalfInteger>()
        .map_err(|e| CliError::new("invalid-argument", format!("sector {text:?}: {e}")))
}

fn render_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).unwrap_or_default()
}

fn finish(report: RunReport, out: Output, csv: impl FnOnce() -> Option<String>, code: i32) -> Result<Outcome, CliError> {
    let rendered = match out {
        Output::Json => render_json(&report),
        Output::Csv | Output::Text => {
            csv().ok_or_else(|| CliError::new("invalid-argument", "this command has no tabular output; use --out json"))?
        }
    };
    Ok(Outcome { report, rendered, exit_code: code })
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut outcome = dispatch(cli.command)?;
    outcome.report.timings.total_ms = start.elapsed().as_secs_f64() * 1e3;
    if outcome.rendered.starts_with('{') {
        outcome.rendered = render_json(&outcome.report);
    }
    Ok(outcome)
}

fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Spectrum { chain: args, sector, out } => {
            let chain = read_chain(&args.chain)?;
            let solver = Solver::new(args.method, args.cache);
            let table = if sector == "all" {
                solver.table(&chain)?
            } else {
                EnergyTable { entries: vec![solver.entry(&chain, parse_sector(&sector)?)?] }
            };
            let rows = table_rows(&table);
            let report = RunReport::new(
                "spectrum",
                Some(&chain),
                json!({ "chain": ChainSpecFile::from_chain(&chain), "table": rows }),
            );
            finish(report, out, || Some(table_csv(&rows)), 0)
        }
        Command::Foel { chain: args, out } => {
            let chain = read_chain(&args.chain)?;
            let solver = Solver::new(args.method, args.cache);
            let foel = spectra::classify_table(solver.table(&chain)?);
            let body = FoelJson::new(&chain, &foel);
            let rows = body.table.clone();
            let report = RunReport::new("foel", Some(&chain), serde_json::to_value(&body).unwrap_or_default());
            finish(report, out, || Some(table_csv(&rows)), exit_code(foel.status))
        }
        Command::Gap { chain: args, out } => {
            let chain = read_chain(&args.chain)?;
            let solver = Solver::new(args.method, args.cache);
            let spin = chain.max_total_spin() - HalfInteger::ONE;
            if spin.is_negative() || !chain.is_admissible(spin) {
                return Err(foel_core::Error::NotAdmissible(spin).into());
            }
            let entry = solver.entry(&chain, spin)?;
            let row = TableRow::from(&entry);
            let report = RunReport::new("gap", Some(&chain), json!({ "gap": entry.energy, "sector": row }));
            finish(report, out, || Some(table_csv(&[row])), 0)
        }
        Command::Below { chain: args, energy, out } => {
            let chain = read_chain(&args.chain)?;
            let solver = Solver::new(args.method, args.cache);
            let (found, scanned) = solver.below(&chain, energy)?;
            let list: Vec<_> = found.iter().map(|(s, e)| json!({ "S_doubled": s.doubled(), "energy": e })).collect();
            let csv = || {
                let mut s = String::from("S_doubled,energy\n");
                for (spin, e) in &found {
                    s.push_str(&format!("{},{}\n", spin.doubled(), csv_energy(*e)));
                }
                Some(s)
            };
            let report = RunReport::new(
                "below",
                Some(&chain),
                json!({ "e_max": energy, "sectors_scanned": scanned, "eigenvalues": list }),
            );
            finish(report, out, csv, 0)
        }
        Command::Mono { chain: args, extension, out } => {
            let chain = read_chain(&args.chain)?;
            let solver = Solver::new(args.method, args.cache);
            let pairs: Vec<(SpinChainSpec, SpinChainSpec)> = match extension {
                Some(path) => vec![(chain.clone(), read_chain(&path)?)],
                None => (1..chain.len()).map(|l| Ok((prefix(&chain, l)?, chain.clone()))).collect::<Result<_, CliError>>()?,
            };
            let mut status = VerdictStatus::HoldsStrict;
            let mut comparisons = Vec::new();
            for (small, large) in &pairs {
                for v in spectra::extension_mono_check(small, large, &solver.opts)? {
                    status = status.combine(v.status);
                    comparisons.push(json!({ "sites": [small.len(), large.len()], "verdict": VerdictJson::from(&v) }));
                }
            }
            let report = RunReport::new(
                "mono",
                Some(&chain),
                json!({ "status": status.as_str(), "comparisons": comparisons }),
            );
            finish(report, out, || None, exit_code(status))
        }
        Command::Basis { chain: path, sector, out } => {
            let chain = read_chain(&path)?;
            let spin = parse_sector(&sector)?;
            let lines: Vec<String> = enumerate_hw_basis(&chain, spin)?.iter().map(|d| d.to_string()).collect();
            let text = lines.iter().fold(String::new(), |s, l| s + l + "\n");
            let report = RunReport::new(
                "basis",
                Some(&chain),
                json!({ "S_doubled": spin.doubled(), "count": lines.len(), "diagrams": lines }),
            );
            finish(report, out, || Some(text), 0)
        }
        Command::SweepT { len, t_min, t_max, steps, method, out } => {
            if steps == 0 || !(t_min.is_finite() && t_max.is_finite()) {
                return Err(CliError::new("invalid-argument", "--steps must be positive and the range finite"));
            }
            let ts: Vec<f64> = (0..steps)
                .map(|i| if steps == 1 { t_min } else { t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64 })
                .collect();
            let opts = SolverOptions::with_method(method.into());
            let results = spectra::biquadratic_sweep(len, &ts, &opts)?;
            let points: Vec<_> = results
                .iter()
                .map(|(t, r)| json!({ "t": t, "status": r.status.as_str(), "table": table_rows(&r.table) }))
                .collect();
            let csv = || {
                let mut s = String::from("t,status,S_doubled,energy\n");
                for (t, r) in &results {
                    for e in &r.table.entries {
                        s.push_str(&format!("{t},{},{},{}\n", r.status, e.spin.doubled(), csv_energy(e.energy)));
                    }
                }
                Some(s)
            };
            let report = RunReport::new("sweep-t", None, json!({ "L": len, "points": points }));
            finish(report, out, csv, 0)
        }
    }
}

/// The first `len` sites of `chain`.
fn prefix(chain: &SpinChainSpec, len: usize) -> Result<SpinChainSpec, CliError> {
    Ok(SpinChainSpec::new(chain.spins()[..len].to_vec(), chain.couplings()[..len - 1].to_vec(), chain.model())?)
}
