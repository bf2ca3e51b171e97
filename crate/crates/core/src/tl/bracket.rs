//! General-spin sector assembly on binary forms.
//!
//! A site of spin `s` carries the symmetric power of degree `2s` of the
//! doublet, i.e. binary forms of that degree in `(u_x, v_x)`. A
//! highest-weight diagram is the product of one bracket
//! `[xy] = u_x v_y - v_x u_y` per arc between sites `x < y` and one `u_x` per
//! unpaired up strand at `x`. The bond sum `sum_{a in x, b in y} U_ab` acts as
//! `[xy] Omega_xy` with `Omega_xy = d^2/du_x dv_y - d^2/dv_x du_y`.
//!
//! Products of brackets are brought back to basis form with two integer
//! identities: for sites `A < B < C < D`,
//! `[AC][BD] = [AB][CD] + [AD][BC]` removes crossings, and for `I < U < J`,
//! `[IJ] u_U = [UJ] u_I + [IU] u_J` removes arcs spanning an up strand.
//! `[AA] = 0` removes arcs inside one block.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::basis::ArcDiagram;
use crate::chain::{ModelKind, SpinChainSpec};
use crate::error::{Error, Result};

/// A product of brackets and up-forms: site-level arcs `(a, b)` with
/// `a < b`, sorted and repeated by multiplicity, plus up counts per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Form {
    arcs: Vec<(u32, u32)>,
    ups: Vec<u32>,
}

impl Form {
    fn of_diagram(d: &ArcDiagram) -> Self {
        let mut arcs: Vec<(u32, u32)> = d
            .arcs()
            .into_iter()
            .map(|(i, j)| (d.site_of(i) as u32, d.site_of(j) as u32))
            .collect();
        arcs.sort_unstable();
        let mut ups = alloc::vec![0u32; d.block_sizes().len()];
        for (i, _) in d.unpaired() {
            ups[d.site_of(i)] += 1;
        }
        Self { arcs, ups }
    }

    fn without_arc(&self, arc: (u32, u32)) -> Self {
        let mut f = self.clone();
        let k = f.arcs.binary_search(&arc).expect("arc present");
        f.arcs.remove(k);
        f
    }

    fn with_arc(mut self, arc: (u32, u32)) -> Self {
        let k = self.arcs.binary_search(&arc).unwrap_or_else(|k| k);
        self.arcs.insert(k, arc);
        self
    }
}

/// A linear factor seen from one site: a bracket to site `other` with
/// orientation `sign` (+1 when this site is the left end), or an up-form.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Leg {
    Arc { other: u32, sign: i64 },
    Up,
}

/// A bracket `[a b]` in oriented form, or zero when `a == b`.
fn oriented(a: u32, b: u32) -> Option<((u32, u32), i64)> {
    match a.cmp(&b) {
        core::cmp::Ordering::Less => Some(((a, b), 1)),
        core::cmp::Ordering::Greater => Some(((b, a), -1)),
        core::cmp::Ordering::Equal => None,
    }
}

/// `[xy] Omega_xy f` as a list of integer-weighted forms, `y = x + 1`.
/// A run of identical factors touching one site: the leg, the factor's arc
/// (`None` for an up factor) and the run length.
type LegGroup = (Leg, Option<(u32, u32)>, i64);

fn bond_action(f: &Form, x: u32) -> Vec<(i64, Form)> {
    let y = x + 1;
    let mut out = Vec::new();
    let mut legs_x: Vec<LegGroup> = Vec::new();
    let mut legs_y: Vec<LegGroup> = Vec::new();
    let push = |legs: &mut Vec<LegGroup>, leg, arc| match legs.last_mut() {
        Some(last) if last.1 == arc && arc.is_some() => last.2 += 1,
        _ => legs.push((leg, arc, 1)),
    };
    for &(a, b) in &f.arcs {
        if a == x || b == x {
            let other = if a == x { b } else { a };
            push(&mut legs_x, Leg::Arc { other, sign: if a == x { 1 } else { -1 } }, Some((a, b)));
        }
        if a == y || b == y {
            let other = if a == y { b } else { a };
            push(&mut legs_y, Leg::Arc { other, sign: if a == y { 1 } else { -1 } }, Some((a, b)));
        }
    }
    let (ux, uy) = (f.ups[x as usize] as i64, f.ups[y as usize] as i64);
    if ux > 0 {
        legs_x.push((Leg::Up, None, ux));
    }
    if uy > 0 {
        legs_y.push((Leg::Up, None, uy));
    }

    // Omega on a single [xy] factor gives 2; [xy] restores it.
    let m = f.arcs.iter().filter(|&&a| a == (x, y)).count() as i64;
    if m > 0 {
        out.push((2 * m, f.clone()));
    }

    for &(lx, ax, cx) in &legs_x {
        for &(ly, ay, cy) in &legs_y {
            let pairs = if ax.is_some() && ax == ay { cx * (cx - 1) } else { cx * cy };
            if pairs == 0 {
                continue;
            }
            // contraction d/du_x(l_i) d/dv_y(l_j) - d/dv_x(l_i) d/du_y(l_j)
            let (new_arc, new_up, sign) = match (lx, ly) {
                (Leg::Arc { other: c, sign: s }, Leg::Arc { other: d, sign: t }) => match oriented(c, d) {
                    Some((arc, o)) => (Some(arc), None, s * t * o),
                    None => continue,
                },
                (Leg::Arc { other: c, sign: s }, Leg::Up) => (None, Some(c), s),
                (Leg::Up, Leg::Arc { other: d, sign: t }) => (None, Some(d), -t),
                (Leg::Up, Leg::Up) => continue,
            };
            let mut g = f.clone();
            match ax {
                Some(arc) => g = g.without_arc(arc),
                None => g.ups[x as usize] -= 1,
            }
            match ay {
                Some(arc) => g = g.without_arc(arc),
                None => g.ups[y as usize] -= 1,
            }
            if let Some(arc) = new_arc {
                g = g.with_arc(arc);
            }
            if let Some(site) = new_up {
                g.ups[site as usize] += 1;
            }
            out.push((pairs * sign, g.with_arc((x, y))));
        }
    }
    out
}

/// Rewrites forms as integer combinations of basis forms, with memoization.
struct Straightener<'a> {
    index: &'a HashMap<Form, usize>,
    memo: HashMap<Form, Vec<(usize, i64)>>,
}

impl Straightener<'_> {
    fn reduce(&mut self, f: &Form) -> Result<Vec<(usize, i64)>> {
        if let Some(&i) = self.index.get(f) {
            return Ok(alloc::vec![(i, 1)]);
        }
        if let Some(r) = self.memo.get(f) {
            return Ok(r.clone());
        }
        let (g1, g2) = match rewrite(f) {
            Some(pair) => pair,
            None => {
                return Err(Error::InconsistentDiagram(alloc::format!(
                    "reduced form {f:?} is not a basis diagram"
                )))
            }
        };
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for g in [g1, g2] {
            for (i, c) in self.reduce(&g)? {
                *acc.entry(i).or_insert(0) += c;
            }
        }
        let r: Vec<(usize, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        self.memo.insert(f.clone(), r.clone());
        Ok(r)
    }
}

/// One crossing or spanning rewrite step, or `None` for a reduced form.
///
/// Each step keeps the total arc length or shortens it, and when it keeps it
/// the sum of squared lengths grows, so repeated rewriting terminates.
fn rewrite(f: &Form) -> Option<(Form, Form)> {
    for (k, &(a, c)) in f.arcs.iter().enumerate() {
        for &(b, d) in &f.arcs[k + 1..] {
            if a < b && b < c && c < d {
                let rest = f.without_arc((a, c)).without_arc((b, d));
                return Some((
                    rest.clone().with_arc((a, b)).with_arc((c, d)),
                    rest.with_arc((a, d)).with_arc((b, c)),
                ));
            }
        }
    }
    for &(i, j) in &f.arcs {
        if let Some(u) = (i + 1..j).find(|&u| f.ups[u as usize] > 0) {
            let mut rest = f.without_arc((i, j));
            rest.ups[u as usize] -= 1;
            let mut g1 = rest.clone().with_arc((u, j));
            g1.ups[i as usize] += 1;
            let mut g2 = rest.with_arc((i, u));
            g2.ups[j as usize] += 1;
            return Some((g1, g2));
        }
    }
    None
}

pub(super) fn assemble(chain: &SpinChainSpec, basis: &[ArcDiagram]) -> Result<Vec<(usize, usize, f64)>> {
    if chain.model() != ModelKind::Heisenberg {
        return Err(Error::InvalidArgument("the bracket engine only describes the Heisenberg bond".into()));
    }
    let forms: Vec<Form> = basis.iter().map(Form::of_diagram).collect();
    let index: HashMap<Form, usize> = forms.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let mut st = Straightener { index: &index, memo: HashMap::new() };
    let strands: Vec<f64> = chain.spins().iter().map(|s| s.doubled() as f64).collect();
    let mut triplets = Vec::new();
    for (col, f) in forms.iter().enumerate() {
        for (x, &j) in chain.couplings().iter().enumerate() {
            let mut column: BTreeMap<usize, i64> = BTreeMap::new();
            for (c, g) in bond_action(f, x as u32) {
                for (row, k) in st.reduce(&g)? {
                    *column.entry(row).or_insert(0) += c * k;
                }
            }
            let scale = 2.0 * j / (strands[x] * strands[x + 1]);
            triplets.extend(column.into_iter().filter(|(_, k)| *k != 0).map(|(row, k)| (row, col, scale * k as f64)));
        }
    }
    Ok(triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(arcs: &[(u32, u32)], ups: &[u32]) -> Form {
        let mut arcs = arcs.to_vec();
        arcs.sort_unstable();
        Form { arcs, ups: ups.to_vec() }
    }

    #[test]
    fn singlet_of_two_doublets_is_an_eigenform() {
        let f = form(&[(0, 1)], &[0, 0]);
        assert_eq!(bond_action(&f, 0), alloc::vec![(2, f)]);
    }

    #[test]
    fn spin_one_pair_diagonal_is_m_times_m_plus_one() {
        // [01]^2 for two spin-1 sites: 2m + m(m-1) = 6
        let f = form(&[(0, 1), (0, 1)], &[0, 0]);
        let total: i64 = bond_action(&f, 0).into_iter().filter(|(_, g)| *g == f).map(|(c, _)| c).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn up_form_moves_along_an_arc() {
        // u_0 [12]: the bond (0,1) gives -[01] u_2
        let f = form(&[(1, 2)], &[1, 0, 0]);
        assert_eq!(bond_action(&f, 0), alloc::vec![(-1, form(&[(0, 1)], &[0, 0, 1]))]);
    }

    #[test]
    fn rewrites_remove_crossings_and_spans() {
        let crossing = form(&[(0, 2), (1, 3)], &[0; 4]);
        let (a, b) = rewrite(&crossing).unwrap();
        assert_eq!(a, form(&[(0, 1), (2, 3)], &[0; 4]));
        assert_eq!(b, form(&[(0, 3), (1, 2)], &[0; 4]));
        let span = form(&[(0, 2)], &[0, 1, 0]);
        let (a, b) = rewrite(&span).unwrap();
        assert_eq!(a, form(&[(1, 2)], &[1, 0, 0]));
        assert_eq!(b, form(&[(0, 1)], &[0, 0, 1]));
        assert_eq!(rewrite(&form(&[(0, 3), (1, 2)], &[0; 4])), None);
    }
}
