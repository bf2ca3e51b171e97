//! The Temperley-Lieb diagram algebra on `n` strands at loop weight 2 and
//! the symmetrizers (Jones-Wenzl projectors) built in it.
//!
//! A diagram is a planar perfect matching of `2n` boundary points: bottom
//! points `0..n` and top points `n..2n`, both read left to right. The
//! product `a * b` stacks `a` on top of `b`; every closed loop contributes a
//! factor 2. With `U_i` the cup-cap on strands `i, i+1`, the projectors obey
//!
//! `P_{k+1} = P_k (x) 1 - (k / (k+1)) (P_k (x) 1) U_k (P_k (x) 1)`.
//!
//! (Writing the turn-back term with `-U` in place of `U` turns the minus sign
//! into a plus; both conventions describe the same projector.)

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TlDiagram {
    n: usize,
    links: Vec<usize>,
}

impl TlDiagram {
    pub fn identity(n: usize) -> Self {
        let links = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        Self { n, links }
    }

    /// Cup-cap on strands `i, i+1`.
    pub fn cup_cap(n: usize, i: usize) -> Self {
        assert!(i + 1 < n, "no strands {i}, {} among {n}", i + 1);
        let mut d = Self::identity(n);
        d.links[i] = i + 1;
        d.links[i + 1] = i;
        d.links[n + i] = n + i + 1;
        d.links[n + i + 1] = n + i;
        d
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    /// Partner of boundary point `p`.
    pub fn partner(&self, p: usize) -> usize {
        self.links[p]
    }

    /// `self` stacked on top of `below`, with the number of closed loops.
    ///
    /// The top points of `below` are glued to the bottom points of `self`;
    /// the result keeps the bottom of `below` and the top of `self`.
    pub fn compose(&self, below: &Self) -> (Self, usize) {
        assert_eq!(self.n, below.n);
        let n = self.n;
        let mut links = vec![usize::MAX; 2 * n];
        let mut glued_seen = vec![false; n];
        for start in 0..2 * n {
            if links[start] != usize::MAX {
                continue;
            }
            // follow links, crossing the glued line, until an outer point
            let (mut in_below, mut p) = (start < n, start);
            let end = loop {
                let q = if in_below { below.links[p] } else { self.links[p] };
                if in_below && q >= n {
                    glued_seen[q - n] = true;
                    in_below = false;
                    p = q - n;
                } else if !in_below && q < n {
                    glued_seen[q] = true;
                    in_below = true;
                    p = q + n;
                } else {
                    break q;
                }
            };
            links[start] = end;
            links[end] = start;
        }
        // glued points not reached from the boundary lie on closed loops
        let mut loops = 0;
        for m in 0..n {
            if glued_seen[m] {
                continue;
            }
            loops += 1;
            let mut p = m;
            loop {
                glued_seen[p] = true;
                let q = self.links[p];
                glued_seen[q] = true;
                let r = below.links[q + n] - n;
                if r == m {
                    break;
                }
                p = r;
            }
        }
        (Self { n, links }, loops)
    }

    /// Action on `(C^2)^{(x) n}` with `U = |s><s|`, `s = |↑↓> - |↓↑>`; basis
    /// index bit `n - 1 - i` set means strand `i` points down.
    ///
    /// Cups and caps contract with the symmetric form `|↑↓> + |↓↑>`, which
    /// gives loop weight 2 and consistent zigzags; flipping the sign of `↓` on
    /// odd strands then turns that form into the singlet. Cups join strands of
    /// opposite parity and through-strands keep parity, so the flip is a
    /// global conjugation.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        let dim = 1usize << n;
        let bit = |state: usize, i: usize| (state >> (n - 1 - i)) & 1;
        let gauge = |state: usize| {
            let odd_downs = (0..n).filter(|&i| i % 2 == 1 && bit(state, i) == 1).count();
            if odd_downs % 2 == 0 { 1.0 } else { -1.0 }
        };
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            for row in 0..dim {
                // bottom points read `col`, top points read `row`
                let val = |pt: usize| if pt < n { bit(col, pt) } else { bit(row, pt - n) };
                let connected = (0..2 * n).all(|p| {
                    let q = self.links[p];
                    let through = (p < n) != (q < n);
                    (val(p) == val(q)) == through
                });
                if connected {
                    m[(row, col)] = gauge(row) * gauge(col);
                }
            }
        }
        m
    }
}

/// A linear combination of diagrams on a fixed number of strands.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TlElement {
    pub terms: BTreeMap<TlDiagram, f64>,
}

impl TlElement {
    pub fn from_diagram(d: TlDiagram) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(d, 1.0);
        Self { terms }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(TlDiagram::identity(n))
    }

    pub fn mul(&self, below: &Self) -> Self {
        let mut terms: BTreeMap<TlDiagram, f64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &below.terms {
                let (d, loops) = a.compose(b);
                *terms.entry(d).or_insert(0.0) += ca * cb * libm::pow(2.0, loops as f64);
            }
        }
        terms.retain(|_, c| c.abs() > 1e-14);
        Self { terms }
    }

    pub fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            *terms.entry(d.clone()).or_insert(0.0) += factor * c;
        }
        terms.retain(|_, c| c.abs() > 1e-14);
        Self { terms }
    }

    /// Closes every strand on the right (Markov trace at loop weight 2).
    pub fn markov_trace(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| {
                // closing point i with point n + i: count the loops of the closure
                let n = d.n;
                let mut seen = vec![false; 2 * n];
                let mut loops = 0;
                for start in 0..2 * n {
                    if seen[start] {
                        continue;
                    }
                    loops += 1;
                    let mut p = start;
                    loop {
                        seen[p] = true;
                        let q = d.links[p];
                        seen[q] = true;
                        let r = if q < n { q + n } else { q - n };
                        if r == start {
                            break;
                        }
                        p = r;
                    }
                }
                c * libm::pow(2.0, loops as f64)
            })
            .sum()
    }

    pub fn to_matrix(&self, n: usize) -> DMatrix<f64> {
        let dim = 1usize << n;
        self.terms.iter().fold(DMatrix::zeros(dim, dim), |acc, (d, c)| acc + d.to_matrix() * *c)
    }
}

/// The Jones-Wenzl projector on `n` strands.
pub fn jones_wenzl(n: usize) -> TlElement {
    assert!(n >= 1);
    let mut p = TlElement::identity(n);
    // p holds P_k on the first k strands, the identity on the rest
    for k in 1..n {
        let r = jones_wenzl_reduce_in(&p, k, n);
        p = r.identity_term.add_scaled(&r.turn_back, -r.coefficient);
    }
    p
}

/// The two terms of one projector recursion step.
#[derive(Debug, Clone, PartialEq)]
pub struct JonesWenzlReduction {
    /// `P_k (x) 1`.
    pub identity_term: TlElement,
    /// `(P_k (x) 1) U_k (P_k (x) 1)`.
    pub turn_back: TlElement,
    /// `k / (k + 1)`.
    pub coefficient: f64,
}

/// `P_{k+1}` in terms of `P_k` on `k + 1` strands:
/// `P_{k+1} = identity_term - coefficient * turn_back`.
pub fn jones_wenzl_reduce(k: usize) -> JonesWenzlReduction {
    assert!(k >= 1);
    let base = if k == 1 { TlElement::identity(2) } else { embed(&jones_wenzl(k), k + 1) };
    jones_wenzl_reduce_in(&base, k, k + 1)
}

fn jones_wenzl_reduce_in(p: &TlElement, k: usize, n: usize) -> JonesWenzlReduction {
    let u = TlElement::from_diagram(TlDiagram::cup_cap(n, k - 1));
    let turn_back = p.mul(&u).mul(p);
    JonesWenzlReduction { identity_term: p.clone(), turn_back, coefficient: k as f64 / (k as f64 + 1.0) }
}

/// An element on `k` strands extended by through-strands to `n` strands.
fn embed(e: &TlElement, n: usize) -> TlElement {
    let mut terms = BTreeMap::new();
    for (d, c) in &e.terms {
        let k = d.n;
        let map = |p: usize| if p < k { p } else { p - k + n };
        let mut links: Vec<usize> = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        for p in 0..2 * k {
            links[map(p)] = map(d.links[p]);
        }
        terms.insert(TlDiagram { n, links }, *c);
    }
    TlElement { terms }
}
