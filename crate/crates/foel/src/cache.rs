//! On-disk cache of assembled sector matrices.
//!
//! One text file per (chain, sector): a header line `dim nnz sector_doubled`
//! followed by one `row col value` line per stored entry, 0-based, values
//! with 17 significant digits so they reload bit-identically. Files are
//! written to a temporary name and renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use foel_core::tl::NORMALIZATION_VERSION;
use foel_core::{HalfInteger, ModelKind, SparseSectorMatrix, SpinChainSpec};
use sha2::{Digest, Sha256};

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "FOEL_CACHE_DIR";
/// Cache directory used when [`CACHE_DIR_ENV`] is unset, relative to the working directory.
pub const DEFAULT_CACHE_DIR: &str = ".foel-cache";

#[derive(Debug)]
pub enum CacheError {
    Io(io::Error),
    /// A cache file exists but does not parse; `line` is 1-based.
    Corrupt { path: PathBuf, line: usize, message: String },
}

impl std::fmt::Display for CacheError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Io(e) => write!(f, "cache io: {e}"),
            Self::Corrupt { path, line, message } => write!(f, "{}:{line}: {message}", path.display()),
        }
    }
}

impl std::error::Error for CacheError {}

impl From<io::Error> for CacheError {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

/// Hex digest of spins, couplings, model, sector and the basis
/// normalization version. Any change to one of them gives a new key.
pub fn cache_key(chain: &SpinChainSpec, sector: HalfInteger) -> String {
    let mut h = Sha256::new();
    h.update(b"foel-sector\0");
    h.update(NORMALIZATION_VERSION.to_le_bytes());
    h.update((chain.len() as u64).to_le_bytes());
    for s in chain.spins() {
        h.update(s.doubled().to_le_bytes());
    }
    for j in chain.couplings() {
        h.update(j.to_bits().to_le_bytes());
    }
    match chain.model() {
        ModelKind::Heisenberg => h.update([0u8]),
        ModelKind::BilinearBiquadratic { t } => {
            h.update([1u8]);
            h.update(t.to_bits().to_le_bytes());
        }
    }
    h.update(sector.doubled().to_le_bytes());
    h.finalize()[..16].iter().fold(String::with_capacity(32), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone)]
pub struct SectorCache {
    dir: PathBuf,
}

impl SectorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// The directory named by `FOEL_CACHE_DIR`, or `.foel-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_DIR_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, chain: &SpinChainSpec, sector: HalfInteger) -> PathBuf {
        self.dir.join(format!("{}.sector", cache_key(chain, sector)))
    }

    pub fn load(&self, chain: &SpinChainSpec, sector: HalfInteger) -> Result<Option<SparseSectorMatrix>, CacheError> {
        let path = self.path_for(chain, sector);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let m = parse_sector_matrix(&text, chain.fingerprint())
            .map_err(|(line, message)| CacheError::Corrupt { path, line, message })?;
        if m.sector() != sector {
            return Err(CacheError::Corrupt {
                path: self.path_for(chain, sector),
                line: 1,
                message: format!("stored sector {} differs from the requested {sector}", m.sector()),
            });
        }
        Ok(Some(m))
    }

    pub fn store(&self, chain: &SpinChainSpec, m: &SparseSectorMatrix) -> Result<PathBuf, CacheError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(chain, m.sector());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(format_sector_matrix(m).as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| CacheError::Io(e.error))?;
        Ok(path)
    }

    /// The cached matrix, or the one `assemble` builds, which is then stored.
    /// Unreadable cache files are rebuilt and overwritten.
    pub fn get_or_insert<E>(
        &self,
        chain: &SpinChainSpec,
        sector: HalfInteger,
        assemble: impl FnOnce() -> Result<SparseSectorMatrix, E>,
    ) -> Result<(SparseSectorMatrix, bool), E> {
        if let Ok(Some(m)) = self.load(chain, sector) {
            return Ok((m, true));
        }
        let m = assemble()?;
        // a cache that cannot be written only costs a rebuild next time
        let _ = self.store(chain, &m);
        Ok((m, false))
    }
}

pub fn format_sector_matrix(m: &SparseSectorMatrix) -> String {
    let mut out = String::with_capacity(32 * (m.nnz() + 1));
    let _ = writeln!(out, "{} {} {}", m.dim(), m.nnz(), m.sector().doubled());
    for &(r, c, v) in m.triplets() {
        let _ = writeln!(out, "{r} {c} {v:.16e}");
    }
    out
}

/// Parses [`format_sector_matrix`] output. Errors carry a 1-based line.
pub fn parse_sector_matrix(text: &str, fingerprint: u64) -> Result<SparseSectorMatrix, (usize, String)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or((1, "empty file".to_string()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [dim, nnz, sector] = fields[..] else {
        return Err((1, format!("expected `dim nnz sector_doubled`, got {header:?}")));
    };
    let dim: usize = dim.parse().map_err(|_| (1, format!("bad dimension {dim:?}")))?;
    let nnz: usize = nnz.parse().map_err(|_| (1, format!("bad entry count {nnz:?}")))?;
    let sector: i64 = sector.parse().map_err(|_| (1, format!("bad sector {sector:?}")))?;
    let mut triplets = Vec::with_capacity(nnz);
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let [r, c, v] = f[..] else {
            return Err((n, format!("expected `row col value`, got {line:?}")));
        };
        let r: usize = r.parse().map_err(|_| (n, format!("bad row {r:?}")))?;
        let c: usize = c.parse().map_err(|_| (n, format!("bad column {c:?}")))?;
        let v: f64 = v.parse().map_err(|_| (n, format!("bad value {v:?}")))?;
        if r >= dim || c >= dim {
            return Err((n, format!("entry ({r}, {c}) outside a {dim}x{dim} matrix")));
        }
        triplets.push((r, c, v));
    }
    if triplets.len() != nnz {
        return Err((1, format!("header announces {nnz} entries, file has {}", triplets.len())));
    }
    SparseSectorMatrix::new(dim, HalfInteger::from_doubled(sector), fingerprint, triplets)
        .map_err(|e| (1, e.to_string()))
}
