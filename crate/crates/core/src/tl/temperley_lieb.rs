//! Cup-cap rules for nearest-neighbour bonds of spin-1/2 strands.
//!
//! With `h` the generator that caps strands `x, x+1` and cups them again:
//! two unpaired up strands are annihilated, an arc `(x, x+1)` closes into a
//! loop of weight 2, and every other configuration reconnects the two outer
//! ends into one arc (or moves the unpaired up strand) with weight -1.

use alloc::vec::Vec;

use crate::basis::{ArcDiagram, Arrow};
use crate::chain::SpinChainSpec;
use crate::error::{Error, Result};
use crate::half::HalfInteger;

use super::basis_index;

/// One term of an operator applied to a diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramWeight {
    pub diagram: ArcDiagram,
    pub weight: f64,
}

/// `h_{x,x+1}` applied to a highest-weight diagram of an all-spin-1/2 chain
/// (`x` is a 0-based site index). The bond term of `H` is `2 J_x h`.
pub fn apply_bond(diagram: &ArcDiagram, x: usize, chain: &SpinChainSpec) -> Result<Vec<DiagramWeight>> {
    if let Some(s) = chain.spins().iter().find(|s| **s != HalfInteger::HALF) {
        return Err(Error::UnsupportedSpin(*s));
    }
    if diagram.strand_count() != chain.len() {
        return Err(Error::InconsistentDiagram("diagram does not match the chain".into()));
    }
    if x + 1 >= chain.len() {
        return Err(Error::InvalidArgument(alloc::format!("no bond ({x}, {}) in a chain of {} sites", x + 1, chain.len())));
    }
    if !diagram.is_highest_weight() {
        return Err(Error::InconsistentDiagram("bond rules need a highest-weight diagram".into()));
    }
    Ok(bond_image(diagram, x).into_iter().collect())
}

/// The single diagram `h_{x,x+1}` maps a highest-weight diagram to, if any.
fn bond_image(diagram: &ArcDiagram, x: usize) -> Option<DiagramWeight> {
    let (p, q) = (diagram.partner(x), diagram.partner(x + 1));
    if p == Some(x + 1) {
        return Some(DiagramWeight { diagram: diagram.clone(), weight: 2.0 });
    }
    if p.is_none() && q.is_none() {
        return None;
    }
    let mut arcs: Vec<(usize, usize)> = diagram
        .arcs()
        .into_iter()
        .filter(|&(i, j)| i != x && i != x + 1 && j != x && j != x + 1)
        .collect();
    let mut ups: Vec<usize> = diagram
        .unpaired()
        .into_iter()
        .filter(|&(i, _)| i != x && i != x + 1)
        .map(|(i, _)| i)
        .collect();
    arcs.push((x, x + 1));
    match (p, q) {
        (Some(a), Some(b)) => arcs.push((a.min(b), a.max(b))),
        (Some(a), None) | (None, Some(a)) => ups.push(a),
        (None, None) => unreachable!(),
    }
    let unpaired: Vec<(usize, Arrow)> = ups.into_iter().map(|i| (i, Arrow::Up)).collect();
    let image = ArcDiagram::from_parts(diagram.block_sizes().to_vec(), &arcs, &unpaired)
        .expect("cup-cap image of a non-crossing diagram is non-crossing");
    Some(DiagramWeight { diagram: image, weight: -1.0 })
}

pub(super) fn assemble(chain: &SpinChainSpec, basis: &[ArcDiagram]) -> Result<Vec<(usize, usize, f64)>> {
    if let Some(s) = chain.spins().iter().find(|s| **s != HalfInteger::HALF) {
        return Err(Error::UnsupportedSpin(*s));
    }
    if chain.model() != crate::chain::ModelKind::Heisenberg {
        return Err(Error::InvalidArgument("cup-cap rules only describe the Heisenberg bond".into()));
    }
    let index = basis_index(basis);
    let mut triplets = Vec::new();
    for (col, d) in basis.iter().enumerate() {
        for (x, &j) in chain.couplings().iter().enumerate() {
            // two unpaired up strands give nothing; skip before building anything
            if d.partner(x).is_none() && d.partner(x + 1).is_none() {
                continue;
            }
            if let Some(term) = bond_image(d, x) {
                let row = *index.get(&term.diagram).ok_or_else(|| {
                    Error::InconsistentDiagram(alloc::format!("bond image {} is not a basis diagram", term.diagram))
                })?;
                triplets.push((row, col, 2.0 * j * term.weight));
            }
        }
    }
    Ok(triplets)
}
