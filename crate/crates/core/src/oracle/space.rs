//! The tensor-product space of a chain and real sparse operators on it.
//!
//! Site states are `|s, m>` with `m = s, s-1, ..., -s`; the local index is
//! the number of down arrows `k = s - m`. Site 0 is the most significant
//! digit, so appending a site at the right end is `A -> A (x) I`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::chain::{ModelKind, SpinChainSpec};
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::linalg::CsrMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    spins: Vec<HalfInteger>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl ProductSpace {
    pub fn new(spins: &[HalfInteger], limit: usize) -> Result<Self> {
        let dims: Vec<usize> = spins.iter().map(|s| s.multiplet_size()).collect();
        let dim = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        if dim > limit {
            return Err(Error::DimensionTooLarge { dim, limit });
        }
        let mut strides = alloc::vec![1usize; dims.len()];
        for x in (0..dims.len().saturating_sub(1)).rev() {
            strides[x] = strides[x + 1] * dims[x + 1];
        }
        Ok(Self { spins: spins.to_vec(), dims, strides, dim })
    }

    pub fn for_chain(chain: &SpinChainSpec, limit: usize) -> Result<Self> {
        Self::new(chain.spins(), limit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spins(&self) -> &[HalfInteger] {
        &self.spins
    }

    /// Down count at site `x` of basis state `index`.
    pub fn digit(&self, index: usize, x: usize) -> usize {
        (index / self.strides[x]) % self.dims[x]
    }

    pub fn index_of(&self, downs: &[usize]) -> usize {
        downs.iter().zip(&self.strides).map(|(k, s)| k * s).sum()
    }

    pub fn magnetization(&self, index: usize) -> HalfInteger {
        let doubled: i64 = (0..self.spins.len())
            .map(|x| self.spins[x].doubled() - 2 * self.digit(index, x) as i64)
            .sum();
        HalfInteger::from_doubled(doubled)
    }

    /// Basis states with total `S^3` eigenvalue `m`, in increasing index order.
    pub fn magnetization_block(&self, m: HalfInteger) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.magnetization(i) == m).collect()
    }

    /// `local` acting on site `x`.
    pub fn embed_one_site(&self, x: usize, local: &DMatrix<f64>) -> CsrMatrix {
        let d = self.dims[x];
        assert_eq!(local.shape(), (d, d));
        let mut triplets = Vec::new();
        for col in 0..self.dim {
            let k = self.digit(col, x);
            let base = col - k * self.strides[x];
            for r in 0..d {
                let v = local[(r, k)];
                if v != 0.0 {
                    triplets.push((base + r * self.strides[x], col, v));
                }
            }
        }
        CsrMatrix::from_triplets(self.dim, self.dim, triplets)
    }

    /// `local` acting on sites `x, x+1`; `local` is indexed `k_x * d_{x+1} + k_{x+1}`.
    pub fn embed_two_site(&self, x: usize, local: &DMatrix<f64>) -> CsrMatrix {
        let (d1, d2) = (self.dims[x], self.dims[x + 1]);
        assert_eq!(local.shape(), (d1 * d2, d1 * d2));
        let mut triplets = Vec::new();
        for col in 0..self.dim {
            let (k1, k2) = (self.digit(col, x), self.digit(col, x + 1));
            let base = col - k1 * self.strides[x] - k2 * self.strides[x + 1];
            let lc = k1 * d2 + k2;
            for lr in 0..d1 * d2 {
                let v = local[(lr, lc)];
                if v != 0.0 {
                    let row = base + (lr / d2) * self.strides[x] + (lr % d2) * self.strides[x + 1];
                    triplets.push((row, col, v));
                }
            }
        }
        CsrMatrix::from_triplets(self.dim, self.dim, triplets)
    }

    fn total(&self, pick: impl Fn(&SiteOperators) -> &DMatrix<f64>) -> CsrMatrix {
        let mut acc = CsrMatrix::from_triplets(self.dim, self.dim, core::iter::empty());
        for (x, s) in self.spins.iter().enumerate() {
            let ops = SiteOperators::new(*s);
            acc = acc.add_scaled(&self.embed_one_site(x, pick(&ops)), 1.0);
        }
        acc
    }

    pub fn raising(&self) -> CsrMatrix {
        self.total(|o| &o.plus)
    }

    pub fn lowering(&self) -> CsrMatrix {
        self.total(|o| &o.minus)
    }

    pub fn sz(&self) -> CsrMatrix {
        self.total(|o| &o.z)
    }

    /// Total-spin Casimir `S^- S^+ + S^z (S^z + 1)`.
    pub fn casimir(&self) -> CsrMatrix {
        let sz = self.sz();
        let sz_shift = sz.add_scaled(&CsrMatrix::identity(self.dim), 1.0);
        self.lowering()
            .matmul(&self.raising())
            .add_scaled(&sz.matmul(&sz_shift), 1.0)
    }

    /// The chain Hamiltonian; the chain's spins must be this space's spins.
    pub fn hamiltonian(&self, chain: &SpinChainSpec) -> CsrMatrix {
        assert_eq!(chain.spins(), &self.spins[..], "chain does not match the space");
        let mut acc = CsrMatrix::from_triplets(self.dim, self.dim, core::iter::empty());
        for (x, &j) in chain.couplings().iter().enumerate() {
            let bond = bond_matrix(self.spins[x], self.spins[x + 1], chain.model(), j);
            acc = acc.add_scaled(&self.embed_two_site(x, &bond), 1.0);
        }
        acc
    }
}

/// Real single-site spin operators in the `k = s - m` ordering.
#[derive(Debug, Clone)]
pub struct SiteOperators {
    pub plus: DMatrix<f64>,
    pub minus: DMatrix<f64>,
    pub z: DMatrix<f64>,
}

impl SiteOperators {
    pub fn new(s: HalfInteger) -> Self {
        let d = s.multiplet_size();
        let sv = s.value();
        let mut plus = DMatrix::zeros(d, d);
        let mut z = DMatrix::zeros(d, d);
        for k in 0..d {
            let m = sv - k as f64;
            z[(k, k)] = m;
            if k > 0 {
                // S+ |s, m> = sqrt(s(s+1) - m(m+1)) |s, m+1>
                plus[(k - 1, k)] = libm::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
            }
        }
        let minus = plus.transpose();
        Self { plus, minus, z }
    }
}

/// `S_1 . S_2` on two sites, indexed `k_1 * d_2 + k_2`.
pub fn spin_dot(s1: HalfInteger, s2: HalfInteger) -> DMatrix<f64> {
    let a = SiteOperators::new(s1);
    let b = SiteOperators::new(s2);
    a.z.kronecker(&b.z) + (a.plus.kronecker(&b.minus) + a.minus.kronecker(&b.plus)) * 0.5
}

/// Two-site bond term of `model` with coupling `j`.
pub fn bond_matrix(s1: HalfInteger, s2: HalfInteger, model: ModelKind, j: f64) -> DMatrix<f64> {
    let dot = spin_dot(s1, s2);
    let id = DMatrix::<f64>::identity(dot.nrows(), dot.ncols());
    match model {
        ModelKind::Heisenberg => (&dot / (s1.value() * s2.value()) - &id) * (-j),
        ModelKind::BilinearBiquadratic { t } => {
            let sq = &dot * &dot;
            ((&id - &dot) + (&id - sq) * t) * j
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigenvalues;

    fn h(d: i64) -> HalfInteger {
        HalfInteger::from_doubled(d)
    }

    #[test]
    fn digits_roundtrip() {
        let sp = ProductSpace::new(&[h(1), h(2), h(3)], 4096).unwrap();
        assert_eq!(sp.dim(), 24);
        for i in 0..sp.dim() {
            let d: Vec<usize> = (0..3).map(|x| sp.digit(i, x)).collect();
            assert_eq!(sp.index_of(&d), i);
        }
        assert_eq!(sp.magnetization(0), h(6));
        assert_eq!(sp.magnetization(23), h(-6));
    }

    #[test]
    fn dense_limit_is_enforced() {
        assert_eq!(
            ProductSpace::new(&[h(1); 13], 4096).unwrap_err(),
            Error::DimensionTooLarge { dim: 8192, limit: 4096 }
        );
    }

    #[test]
    fn two_site_bond_spectra() {
        let ev = symmetric_eigenvalues(bond_matrix(h(1), h(1), ModelKind::Heisenberg, 1.0));
        let want = [0.0, 0.0, 0.0, 4.0];
        ev.iter().zip(want).for_each(|(a, b)| assert!((a - b).abs() < 1e-12));
        let ev = symmetric_eigenvalues(bond_matrix(h(2), h(2), ModelKind::Heisenberg, 1.0));
        let want = [0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0, 2.0, 3.0];
        ev.iter().zip(want).for_each(|(a, b)| assert!((a - b).abs() < 1e-12));
    }

    #[test]
    fn casimir_of_three_doublets() {
        let sp = ProductSpace::new(&[h(1); 3], 4096).unwrap();
        let ev = symmetric_eigenvalues(sp.casimir().to_dense());
        let want = [0.75, 0.75, 0.75, 0.75, 3.75, 3.75, 3.75, 3.75];
        ev.iter().zip(want).for_each(|(a, b)| assert!((a - b).abs() < 1e-12));
    }
}
