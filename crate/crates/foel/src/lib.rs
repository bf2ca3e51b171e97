//! File formats, the sector-matrix cache and the command line of the `foel`
//! tool. The computations live in [`foel_core`].

pub mod cache;
pub mod chain_file;
pub mod cli;
pub mod report;

pub use cache::SectorCache;
pub use chain_file::{parse_chain, read_chain, ChainFileError, ChainSpecFile};
pub use report::RunReport;
