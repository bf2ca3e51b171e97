//! The arc-diagram basis of highest-weight vectors.
//!
//! A site of spin `s` is a block of `2s` spin-1/2 strands. A basis state of
//! the site is labelled by how many of its strands point down, with all down
//! strands drawn before the up strands. Pairing each down strand with the
//! nearest free up strand on its left gives a non-crossing arc diagram; the
//! configurations that leave no down strand unpaired are the highest-weight
//! vectors of spin `max_total_spin - #arcs`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
use nalgebra::DMatrix;

use crate::chain::{IncrementStep, SpinChainSpec, StepKind};
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::oracle::ProductSpace;
use crate::DEFAULT_DENSE_LIMIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Up,
    Down,
}

impl Arrow {
    pub fn symbol(self) -> char {
        match self {
            Arrow::Up => '↑',
            Arrow::Down => '↓',
        }
    }
}

/// Down counts per site; within each block the down strands precede the up strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedIsingConfig {
    block_sizes: Vec<usize>,
    downs: Vec<usize>,
}

impl OrderedIsingConfig {
    pub fn new(chain: &SpinChainSpec, downs: Vec<usize>) -> Result<Self> {
        let sizes = chain.spins().iter().map(|s| s.doubled() as usize).collect();
        Self::from_block_sizes(sizes, downs)
    }

    pub fn from_block_sizes(block_sizes: Vec<usize>, downs: Vec<usize>) -> Result<Self> {
        if block_sizes.len() != downs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} sites but {} down counts",
                block_sizes.len(),
                downs.len()
            )));
        }
        if let Some(x) = (0..downs.len()).find(|&x| downs[x] > block_sizes[x] || block_sizes[x] == 0) {
            return Err(Error::InvalidArgument(format!(
                "site {x} has {} strands and {} downs",
                block_sizes[x], downs[x]
            )));
        }
        Ok(Self { block_sizes, downs })
    }

    pub fn downs_per_site(&self) -> &[usize] {
        &self.downs
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// Total `S^3`: half the number of up strands minus half the number of down strands.
    pub fn magnetization(&self) -> HalfInteger {
        let strands: usize = self.block_sizes.iter().sum();
        let downs: usize = self.downs.iter().sum();
        HalfInteger::from_doubled(strands as i64 - 2 * downs as i64)
    }

    /// Strand-level arrows, block by block.
    pub fn arrows(&self) -> Vec<Arrow> {
        self.block_sizes
            .iter()
            .zip(&self.downs)
            .flat_map(|(&n, &k)| (0..n).map(move |i| if i < k { Arrow::Down } else { Arrow::Up }))
            .collect()
    }
}

/// Block structure shared by all diagrams of one chain.
#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Layout {
    sizes: Vec<usize>,
    starts: Vec<usize>,
}

impl Layout {
    fn new(sizes: Vec<usize>) -> Self {
        let mut starts = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for &n in &sizes {
            starts.push(at);
            at += n;
        }
        Self { sizes, starts }
    }

    fn strand_count(&self) -> usize {
        self.starts.last().map_or(0, |s| s + self.sizes[self.sizes.len() - 1])
    }

    fn site_of(&self, strand: usize) -> usize {
        self.starts.partition_point(|&s| s <= strand) - 1
    }
}

const UP: u32 = u32::MAX;
const DOWN: u32 = u32::MAX - 1;

/// Non-crossing arcs over the strands of a chain plus labelled unpaired strands.
///
/// Strand indices are 0-based. `links[i]` is the partner of strand `i`, or a
/// sentinel for an unpaired up or down strand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcDiagram {
    layout: Arc<Layout>,
    links: Vec<u32>,
}

impl ArcDiagram {
    /// Builds a diagram from explicit arcs and up/down labels for every
    /// strand not covered by an arc. Fails if the result violates the
    /// structural invariants.
    pub fn from_parts(
        block_sizes: Vec<usize>,
        arcs: &[(usize, usize)],
        unpaired: &[(usize, Arrow)],
    ) -> Result<Self> {
        let layout = Arc::new(Layout::new(block_sizes));
        let n = layout.strand_count();
        let mut links = vec![u32::MAX - 2; n];
        let mut set = |i: usize, v: u32| -> Result<()> {
            if i >= n || links[i] != u32::MAX - 2 {
                return Err(Error::InconsistentDiagram(format!("strand {i} is out of range or used twice")));
            }
            links[i] = v;
            Ok(())
        };
        for &(i, j) in arcs {
            set(i, j as u32)?;
            set(j, i as u32)?;
        }
        for &(i, a) in unpaired {
            set(i, if a == Arrow::Up { UP } else { DOWN })?;
        }
        if let Some(i) = links.iter().position(|&l| l == u32::MAX - 2) {
            return Err(Error::InconsistentDiagram(format!("strand {i} is neither paired nor labelled")));
        }
        let d = Self { layout, links };
        d.validate()?;
        Ok(d)
    }

    pub fn strand_count(&self) -> usize {
        self.links.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.layout.sizes
    }

    /// `(start_strand, length)` of every site block.
    pub fn site_blocks(&self) -> Vec<(usize, usize)> {
        self.layout.starts.iter().copied().zip(self.layout.sizes.iter().copied()).collect()
    }

    pub fn site_of(&self, strand: usize) -> usize {
        self.layout.site_of(strand)
    }

    pub fn partner(&self, strand: usize) -> Option<usize> {
        match self.links[strand] {
            UP | DOWN => None,
            j => Some(j as usize),
        }
    }

    /// Arrow of an unpaired strand, `None` for paired strands.
    pub fn arrow(&self, strand: usize) -> Option<Arrow> {
        match self.links[strand] {
            UP => Some(Arrow::Up),
            DOWN => Some(Arrow::Down),
            _ => None,
        }
    }

    /// Arcs `(i, j)` with `i < j`, ordered by left endpoint.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.links.len())
            .filter_map(|i| self.partner(i).filter(|&j| j > i).map(|j| (i, j)))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.links.iter().filter(|&&l| l != UP && l != DOWN).count() / 2
    }

    pub fn unpaired(&self) -> Vec<(usize, Arrow)> {
        (0..self.links.len()).filter_map(|i| self.arrow(i).map(|a| (i, a))).collect()
    }

    /// Total spin `max_total_spin - #arcs`.
    pub fn spin(&self) -> HalfInteger {
        HalfInteger::from_doubled((self.links.len() - 2 * self.arc_count()) as i64)
    }

    pub fn magnetization(&self) -> HalfInteger {
        let up = self.links.iter().filter(|&&l| l == UP).count() as i64;
        let down = self.links.iter().filter(|&&l| l == DOWN).count() as i64;
        HalfInteger::from_doubled(up - down)
    }

    pub fn is_highest_weight(&self) -> bool {
        !self.links.contains(&DOWN)
    }

    /// Number of down strands per site: right ends of arcs and unpaired downs.
    pub fn downs_per_site(&self) -> Vec<usize> {
        let mut downs = vec![0; self.layout.sizes.len()];
        for i in 0..self.links.len() {
            let is_down = match self.links[i] {
                UP => false,
                DOWN => true,
                j => (j as usize) < i,
            };
            if is_down {
                downs[self.site_of(i)] += 1;
            }
        }
        downs
    }

    pub fn config(&self) -> OrderedIsingConfig {
        OrderedIsingConfig { block_sizes: self.layout.sizes.clone(), downs: self.downs_per_site() }
    }

    /// Checks non-crossing, non-spanning and down-before-up within blocks.
    pub fn validate(&self) -> Result<()> {
        let n = self.links.len();
        let arcs = self.arcs();
        let bad = |msg: alloc::string::String| Err(Error::InconsistentDiagram(msg));
        for &(i, j) in &arcs {
            if self.partner(j) != Some(i) {
                return bad(format!("strand {j} does not point back to {i}"));
            }
            if self.site_of(i) == self.site_of(j) {
                return bad(format!("arc ({i}, {j}) lies inside one block"));
            }
            // every strand strictly inside an arc is paired inside the same arc
            for u in i + 1..j {
                match self.partner(u) {
                    None => return bad(format!("arc ({i}, {j}) spans unpaired strand {u}")),
                    Some(v) if v < i || v > j => {
                        return bad(format!("arcs ({i}, {j}) and ({}, {}) cross", u.min(v), u.max(v)))
                    }
                    _ => {}
                }
            }
        }
        let mut last_down = false;
        for i in 0..n {
            if self.layout.starts.binary_search(&i).is_ok() {
                last_down = true;
            }
            let down = match self.links[i] {
                UP => false,
                DOWN => true,
                j => (j as usize) < i,
            };
            if down && !last_down {
                return bad(format!("down strand {i} follows an up strand in its block"));
            }
            last_down = down;
        }
        let unpaired = self.unpaired();
        if unpaired
            .windows(2)
            .any(|w| w[0].1 == Arrow::Up && w[1].1 == Arrow::Down)
        {
            return bad("an unpaired down strand follows an unpaired up strand".into());
        }
        Ok(())
    }

    fn layout_matches(&self, chain: &SpinChainSpec) -> Result<()> {
        let ok = self.layout.sizes.len() == chain.len()
            && self.layout.sizes.iter().zip(chain.spins()).all(|(&n, s)| n as i64 == s.doubled());
        if ok {
            Ok(())
        } else {
            Err(Error::InconsistentDiagram("diagram blocks do not match the chain's spins".into()))
        }
    }
}

/// One line of the basis dump: `S=<S> arcs=(i,j)... unpaired=u↑ ...`, 1-based.
impl fmt::Display for ArcDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S={} arcs=", self.spin())?;
        for (i, j) in self.arcs() {
            write!(f, "({},{})", i + 1, j + 1)?;
        }
        f.write_str(" unpaired=")?;
        for (k, (i, a)) in self.unpaired().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", i + 1, a.symbol())?;
        }
        Ok(())
    }
}

/// Pairs every down strand with the nearest free up strand on its left.
pub fn pair_arcs(config: &OrderedIsingConfig) -> ArcDiagram {
    let layout = Arc::new(Layout::new(config.block_sizes.clone()));
    let arrows = config.arrows();
    let mut links = vec![UP; arrows.len()];
    let mut open: Vec<usize> = Vec::new();
    for (i, a) in arrows.into_iter().enumerate() {
        match a {
            Arrow::Up => open.push(i),
            Arrow::Down => match open.pop() {
                Some(j) => {
                    links[i] = j as u32;
                    links[j] = i as u32;
                }
                None => links[i] = DOWN,
            },
        }
    }
    ArcDiagram { layout, links }
}

/// All highest-weight diagrams of total spin `spin`, ordered lexicographically
/// by their down counts per site.
pub fn enumerate_hw_basis(chain: &SpinChainSpec, spin: HalfInteger) -> Result<Vec<ArcDiagram>> {
    if !chain.is_admissible(spin) {
        return Err(Error::NotAdmissible(spin));
    }
    let sizes: Vec<usize> = chain.spins().iter().map(|s| s.doubled() as usize).collect();
    let total_downs = ((chain.max_total_spin() - spin).doubled() / 2) as usize;
    let mut suffix = vec![0usize; sizes.len() + 1];
    for x in (0..sizes.len()).rev() {
        suffix[x] = suffix[x + 1] + sizes[x];
    }
    let layout = Arc::new(Layout::new(sizes.clone()));
    let mut out = Vec::new();
    let mut downs = vec![0usize; sizes.len()];
    descend(&sizes, &suffix, 0, 0, total_downs, &mut downs, &mut |d| {
        let config = OrderedIsingConfig { block_sizes: sizes.clone(), downs: d.to_vec() };
        let mut diagram = pair_arcs(&config);
        diagram.layout = layout.clone();
        out.push(diagram);
    });
    Ok(out)
}

/// Depth-first search over down counts: `open` free up strands lie to the
/// left of site `x` and `remaining` downs are still to be placed.
fn descend(
    sizes: &[usize],
    suffix: &[usize],
    x: usize,
    open: usize,
    remaining: usize,
    downs: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        downs[x..].iter_mut().for_each(|k| *k = 0);
        emit(downs);
        return;
    }
    // each remaining down needs a distinct up strand to its left
    if x == sizes.len() || 2 * remaining > open + suffix[x] {
        return;
    }
    for k in 0..=sizes[x].min(open).min(remaining) {
        downs[x] = k;
        descend(sizes, suffix, x + 1, open - k + sizes[x] - k, remaining - k, downs, emit);
    }
}

/// A vector in the tensor-product basis of a chain, stored sparsely.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TensorVector {
    pub dim: usize,
    pub amplitudes: BTreeMap<usize, f64>,
}

impl TensorVector {
    pub fn dot(&self, other: &Self) -> f64 {
        let (small, large) = if self.amplitudes.len() <= other.amplitudes.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .amplitudes
            .iter()
            .filter_map(|(i, a)| large.amplitudes.get(i).map(|b| a * b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for (&i, &a) in &self.amplitudes {
            v[i] = a;
        }
        v
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Expands a diagram into the tensor-product basis of `chain`.
///
/// Each arc `(i, j)` becomes `|↑_i ↓_j> - |↓_i ↑_j>`; the unpaired strands
/// carry the symmetric combination of their down count. Symmetrizing a
/// block with `k` down strands and `n` strands maps each strand pattern to
/// `|s, s-k> / sqrt(C(n, k))`, which keeps the map SU(2)-equivariant.
pub fn expand_to_tensor(diagram: &ArcDiagram, chain: &SpinChainSpec) -> Result<TensorVector> {
    expand_to_tensor_with_limit(diagram, chain, DEFAULT_DENSE_LIMIT)
}

pub fn expand_to_tensor_with_limit(
    diagram: &ArcDiagram,
    chain: &SpinChainSpec,
    limit: usize,
) -> Result<TensorVector> {
    diagram.layout_matches(chain)?;
    diagram.validate()?;
    let space = ProductSpace::for_chain(chain, limit)?;
    let sites = chain.len();
    let site_of: Vec<usize> = (0..diagram.strand_count()).map(|i| diagram.site_of(i)).collect();

    // States are down-count vectors; start from the unpaired strands.
    let unpaired = diagram.unpaired();
    let want_down = unpaired.iter().filter(|(_, a)| *a == Arrow::Down).count();
    let mut partial: BTreeMap<(Vec<usize>, usize), f64> = BTreeMap::new();
    partial.insert((vec![0; sites], 0), 1.0);
    for &(i, _) in &unpaired {
        let mut next = BTreeMap::new();
        for ((k, used), c) in partial {
            if used < want_down {
                let mut kd = k.clone();
                kd[site_of[i]] += 1;
                *next.entry((kd, used + 1)).or_insert(0.0) += c;
            }
            *next.entry((k, used)).or_insert(0.0) += c;
        }
        partial = next;
    }
    let mut states: BTreeMap<Vec<usize>, f64> = partial
        .into_iter()
        .filter(|((_, used), _)| *used == want_down)
        .map(|((k, _), c)| (k, c))
        .collect();
    for (i, j) in diagram.arcs() {
        let mut next: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (k, c) in states {
            // ↑_i ↓_j with +1, ↓_i ↑_j with -1
            let mut down_j = k.clone();
            down_j[site_of[j]] += 1;
            *next.entry(down_j).or_insert(0.0) += c;
            let mut down_i = k;
            down_i[site_of[i]] += 1;
            *next.entry(down_i).or_insert(0.0) -= c;
        }
        states = next;
    }
    let mut amplitudes = BTreeMap::new();
    for (k, c) in states {
        if c == 0.0 {
            continue;
        }
        let norm: f64 = k
            .iter()
            .zip(diagram.block_sizes())
            .map(|(&kx, &n)| binomial(n, kx))
            .product();
        amplitudes.insert(space.index_of(&k), c / libm::sqrt(norm));
    }
    if amplitudes.is_empty() {
        return Err(Error::InconsistentDiagram("diagram expands to the zero vector".into()));
    }
    Ok(TensorVector { dim: space.dim(), amplitudes })
}

/// Inner products of the expanded diagrams.
pub fn gram_matrix(diagrams: &[ArcDiagram], chain: &SpinChainSpec) -> Result<DMatrix<f64>> {
    gram_matrix_with_limit(diagrams, chain, DEFAULT_DENSE_LIMIT)
}

pub fn gram_matrix_with_limit(
    diagrams: &[ArcDiagram],
    chain: &SpinChainSpec,
    limit: usize,
) -> Result<DMatrix<f64>> {
    let vectors = diagrams
        .iter()
        .map(|d| expand_to_tensor_with_limit(d, chain, limit))
        .collect::<Result<Vec<_>>>()?;
    if let Some(d) = diagrams.iter().find(|d| d.spin() != diagrams[0].spin()) {
        return Err(Error::InconsistentDiagram(format!(
            "diagrams of spin {} and {} in one Gram matrix",
            diagrams[0].spin(),
            d.spin()
        )));
    }
    let n = vectors.len();
    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..=a {
            let v = vectors[a].dot(&vectors[b]);
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    Ok(g)
}

/// The image of a diagram of the chain before `step` in the chain after it.
pub fn embed_next(diagram: &ArcDiagram, step: &IncrementStep) -> Result<ArcDiagram> {
    let mut sizes = diagram.layout.sizes.clone();
    let mut links = diagram.links.clone();
    match step.kind {
        StepKind::Initial => {
            return Err(Error::InvalidStep("the initial element is not an increment".into()))
        }
        StepKind::CaseI => sizes.push(1),
        StepKind::CaseII => *sizes.last_mut().expect("diagram has a site") += 1,
    }
    // the new strand is the last one; the last block has no right-going arcs
    links.push(UP);
    let expected: Vec<usize> = step.resulting_chain.spins().iter().map(|s| s.doubled() as usize).collect();
    if sizes != expected {
        return Err(Error::InvalidStep(format!(
            "a {:?} step from blocks {:?} does not give the chain's blocks {:?}",
            step.kind, diagram.layout.sizes, expected
        )));
    }
    Ok(ArcDiagram { layout: Arc::new(Layout::new(sizes)), links })
}

/// Positions of the embedded small basis inside the large basis.
pub fn embedding_indices(
    small: &[ArcDiagram],
    large: &[ArcDiagram],
    step: &IncrementStep,
) -> Result<Vec<usize>> {
    let index: HashMap<&[u32], usize> = large.iter().enumerate().map(|(i, d)| (&d.links[..], i)).collect();
    small
        .iter()
        .map(|d| {
            let image = embed_next(d, step)?;
            index.get(&image.links[..]).copied().ok_or_else(|| {
                Error::InvalidStep(format!("embedded diagram {image} is not in the larger basis"))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
