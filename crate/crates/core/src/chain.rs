//! Problem instances: open chains of half-integer spins with positive
//! couplings, their admissible total spins, and the incremental sequence of
//! chains that grows a single spin-1/2 into a given chain.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fingerprint::Fnv64;
use crate::half::HalfInteger;

/// The nearest-neighbour interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// `-J [ S_x.S_{x+1} / (s_x s_{x+1}) - 1 ]` per bond.
    Heisenberg,
    /// `J [ (1 - S_x.S_{x+1}) + t (1 - (S_x.S_{x+1})^2) ]` per bond, spin-1 sites only.
    BilinearBiquadratic { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinChainSpec {
    spins: Vec<HalfInteger>,
    couplings: Vec<f64>,
    model: ModelKind,
}

impl SpinChainSpec {
    pub fn new(spins: Vec<HalfInteger>, couplings: Vec<f64>, model: ModelKind) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::InvalidChain("a chain needs at least one site".into()));
        }
        if let Some((x, s)) = spins.iter().enumerate().find(|(_, s)| s.doubled() < 1) {
            return Err(Error::InvalidChain(format!(
                "site {x} has spin {s}; every site needs spin at least 1/2"
            )));
        }
        if couplings.len() + 1 != spins.len() {
            return Err(Error::InvalidChain(format!(
                "{} sites need {} couplings, got {}",
                spins.len(),
                spins.len() - 1,
                couplings.len()
            )));
        }
        if let Some((x, j)) = couplings
            .iter()
            .enumerate()
            .find(|(_, j)| !(j.is_finite() && **j > 0.0))
        {
            return Err(Error::InvalidChain(format!(
                "coupling {x} is {j}; couplings must be positive and finite"
            )));
        }
        if let ModelKind::BilinearBiquadratic { t } = model {
            if !t.is_finite() {
                return Err(Error::InvalidChain(format!("biquadratic coefficient {t} is not finite")));
            }
            if spins.iter().any(|s| *s != HalfInteger::ONE) {
                return Err(Error::InvalidChain(
                    "the bilinear-biquadratic model requires spin 1 on every site".into(),
                ));
            }
        }
        Ok(Self { spins, couplings, model })
    }

    pub fn heisenberg(spins: Vec<HalfInteger>, couplings: Vec<f64>) -> Result<Self> {
        Self::new(spins, couplings, ModelKind::Heisenberg)
    }

    /// Heisenberg chain of `len` equal spins with equal couplings.
    pub fn uniform(spin: HalfInteger, len: usize, coupling: f64) -> Result<Self> {
        Self::heisenberg(
            alloc::vec![spin; len],
            alloc::vec![coupling; len.saturating_sub(1)],
        )
    }

    /// Spin-1 chain of length `len` with the bilinear-biquadratic bond and unit couplings.
    pub fn bilinear_biquadratic(len: usize, t: f64) -> Result<Self> {
        Self::new(
            alloc::vec![HalfInteger::ONE; len],
            alloc::vec![1.0; len.saturating_sub(1)],
            ModelKind::BilinearBiquadratic { t },
        )
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[HalfInteger] {
        &self.spins
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn is_all_spin_half(&self) -> bool {
        self.spins.iter().all(|s| *s == HalfInteger::HALF)
    }

    /// Number of spin-1/2 strands, `2 * max_total_spin`.
    pub fn strand_count(&self) -> usize {
        self.spins.iter().map(|s| s.doubled() as usize).sum()
    }

    /// `prod_x (2 s_x + 1)`, or `None` on overflow.
    pub fn hilbert_dim(&self) -> Option<usize> {
        self.spins
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.multiplet_size()))
    }

    /// Largest admissible total spin, `sum_x s_x`.
    pub fn max_total_spin(&self) -> HalfInteger {
        self.spins.iter().copied().sum()
    }

    /// Multiplicity of the spin-`spin` representation (the dimension of its
    /// highest-weight space), by left-to-right Clebsch-Gordan reduction.
    ///
    /// Intermediate spins that can no longer reach `spin` are dropped, so
    /// sectors near the maximal spin stay cheap on long chains. Counts
    /// saturate at `u128::MAX`.
    pub fn multiplicity(&self, spin: HalfInteger) -> u128 {
        if spin.is_negative() || spin > self.max_total_spin() {
            return 0;
        }
        let target = spin.doubled();
        let mut remaining: i64 = self.spins.iter().map(|s| s.doubled()).sum();
        let mut counts: BTreeMap<i64, u128> = BTreeMap::new();
        counts.insert(0, 1);
        for s in &self.spins {
            let s = s.doubled();
            remaining -= s;
            let mut next = BTreeMap::new();
            for (&j, &c) in &counts {
                let mut k = (j - s).abs();
                while k <= j + s {
                    if (k - target).abs() <= remaining {
                        let e = next.entry(k).or_insert(0u128);
                        *e = e.saturating_add(c);
                    }
                    k += 2;
                }
            }
            counts = next;
        }
        counts.get(&target).copied().unwrap_or(0)
    }

    pub fn is_admissible(&self, spin: HalfInteger) -> bool {
        self.multiplicity(spin) > 0
    }

    /// All admissible total spins in descending order.
    pub fn admissible_spins(&self) -> Vec<HalfInteger> {
        let mut counts: BTreeMap<i64, u128> = BTreeMap::new();
        counts.insert(0, 1);
        for s in &self.spins {
            let s = s.doubled();
            let mut next = BTreeMap::new();
            for (&j, &c) in &counts {
                let mut k = (j - s).abs();
                while k <= j + s {
                    let e = next.entry(k).or_insert(0u128);
                    *e = e.saturating_add(c);
                    k += 2;
                }
            }
            counts = next;
        }
        counts
            .into_iter()
            .rev()
            .filter(|(_, c)| *c > 0)
            .map(|(j, _)| HalfInteger::from_doubled(j))
            .collect()
    }

    /// The sequence of chains grown from a single spin-1/2 by appending a
    /// spin-1/2 site ([`StepKind::CaseI`]) or raising the last site by 1/2
    /// ([`StepKind::CaseII`]). Each site is appended and then grown to its
    /// final magnitude before the next site is appended. Bonds carry the
    /// final chain's couplings from the moment they exist.
    ///
    /// The first element is the single spin-1/2 ([`StepKind::Initial`]); the
    /// sequence has `2 * max_total_spin` elements and ends at `self`.
    /// Intermediate chains always use the Heisenberg bond.
    pub fn build_sequence(&self) -> Vec<IncrementStep> {
        let mut steps = Vec::with_capacity(self.strand_count());
        let mut spins: Vec<HalfInteger> = Vec::new();
        for (x, target) in self.spins.iter().enumerate() {
            for grown in 1..=target.doubled() {
                let kind = if x == 0 && grown == 1 {
                    spins.push(HalfInteger::HALF);
                    StepKind::Initial
                } else if grown == 1 {
                    spins.push(HalfInteger::HALF);
                    StepKind::CaseI
                } else {
                    *spins.last_mut().expect("site present") = HalfInteger::from_doubled(grown);
                    StepKind::CaseII
                };
                let couplings = self.couplings[..spins.len() - 1].to_vec();
                let chain = SpinChainSpec {
                    spins: spins.clone(),
                    couplings,
                    model: ModelKind::Heisenberg,
                };
                steps.push(IncrementStep { kind, resulting_chain: chain });
            }
        }
        if let Some(last) = steps.last_mut() {
            last.resulting_chain = self.clone();
        }
        steps
    }

    /// Stable 64-bit hash of spins, couplings and model.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv64::new();
        h.u64(self.spins.len() as u64);
        for s in &self.spins {
            h.u64(s.doubled() as u64);
        }
        for j in &self.couplings {
            h.u64(j.to_bits());
        }
        match self.model {
            ModelKind::Heisenberg => h.u64(0),
            ModelKind::BilinearBiquadratic { t } => h.u64(1).u64(t.to_bits()),
        };
        h.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// The single spin-1/2 the sequence starts from.
    Initial,
    /// A spin-1/2 site appended at the right end.
    CaseI,
    /// The last site's magnitude raised by 1/2.
    CaseII,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncrementStep {
    pub kind: StepKind,
    pub resulting_chain: SpinChainSpec,
}
