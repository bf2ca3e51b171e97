use super::*;
use crate::basis::{embedding_indices, Arrow};
use crate::chain::StepKind;
use crate::oracle;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT: usize = DEFAULT_DENSE_LIMIT;

fn h(d: i64) -> HalfInteger {
    HalfInteger::from_doubled(d)
}

fn chain(doubled: &[i64], couplings: &[f64]) -> SpinChainSpec {
    SpinChainSpec::heisenberg(doubled.iter().map(|&d| h(d)).collect(), couplings.to_vec()).unwrap()
}

fn uniform(doubled: &[i64]) -> SpinChainSpec {
    chain(doubled, &vec![1.0; doubled.len() - 1])
}

fn dense(rows: usize, v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, rows, v)
}

fn sparse(rows: usize, v: &[f64]) -> SparseSectorMatrix {
    SparseSectorMatrix::from_dense(&dense(rows, v), HalfInteger::ZERO, 0, 0.0)
}

fn random_chain(rng: &mut ChaCha8Rng, max_len: usize, max_doubled: i64, max_dim: usize) -> SpinChainSpec {
    loop {
        let len = rng.random_range(1..=max_len);
        let spins: Vec<HalfInteger> = (0..len).map(|_| h(rng.random_range(1..=max_doubled))).collect();
        let js: Vec<f64> = (1..len).map(|_| rng.random_range(0.05..2.0)).collect();
        let c = SpinChainSpec::heisenberg(spins, js).unwrap();
        if c.hilbert_dim().is_some_and(|d| d <= max_dim) {
            return c;
        }
    }
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

#[test]
fn golden_sector_matrices() {
    let m = sector_hamiltonian(&uniform(&[1, 1]), HalfInteger::ZERO).unwrap();
    assert_eq!(m.to_dense(), dense(1, &[4.0]));
    let m = sector_hamiltonian(&uniform(&[1, 1, 1]), HalfInteger::HALF).unwrap();
    assert_eq!(m.to_dense(), dense(2, &[4.0, -2.0, -2.0, 4.0]));
    let m = sector_hamiltonian(&uniform(&[1, 2]), HalfInteger::HALF).unwrap();
    assert!(max_diff(&m.to_dense(), &dense(1, &[3.0])) < 1e-12);
    for c in [uniform(&[1, 1, 1, 1]), uniform(&[2, 3]), chain(&[3, 1, 2], &[0.3, 1.1])] {
        let m = sector_hamiltonian(&c, c.max_total_spin()).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(m.get(0, 0).abs() < 1e-12);
    }
}

#[test]
fn sparse_matrix_bookkeeping() {
    let m = SparseSectorMatrix::new(2, HalfInteger::HALF, 7, vec![(1, 0, -1.0), (0, 0, 2.0), (1, 0, -1.0), (0, 1, 0.0)])
        .unwrap();
    assert_eq!(m.triplets(), &[(0, 0, 2.0), (1, 0, -2.0)]);
    assert_eq!(m.nnz(), 2);
    assert_eq!(m.get(1, 1), 0.0);
    assert_eq!(m.diagonal(), vec![2.0, 0.0]);
    assert_eq!(m.matvec(&[1.0, 1.0]), vec![2.0, -2.0]);
    assert_eq!((m.sector(), m.fingerprint()), (HalfInteger::HALF, 7));
    assert!(SparseSectorMatrix::new(2, HalfInteger::ZERO, 0, vec![(2, 0, 1.0)]).is_err());
}

#[test]
fn resolved_paths() {
    assert_eq!(resolve_path(&uniform(&[1; 20]), AssemblyPath::Auto, LIMIT), AssemblyPath::TemperleyLieb);
    assert_eq!(resolve_path(&uniform(&[2, 2]), AssemblyPath::Auto, LIMIT), AssemblyPath::Expansion);
    assert_eq!(resolve_path(&uniform(&[2; 9]), AssemblyPath::Auto, LIMIT), AssemblyPath::Bracket);
    let bb = SpinChainSpec::bilinear_biquadratic(3, 0.2).unwrap();
    assert_eq!(resolve_path(&bb, AssemblyPath::Auto, LIMIT), AssemblyPath::Expansion);
    assert_eq!(resolve_path(&bb, AssemblyPath::Bracket, LIMIT), AssemblyPath::Bracket);
    assert!(sector_hamiltonian_with(&bb, HalfInteger::ONE, AssemblyPath::Bracket, LIMIT).is_err());
    assert!(sector_hamiltonian_with(&uniform(&[2, 2]), HalfInteger::ONE, AssemblyPath::TemperleyLieb, LIMIT).is_err());
}

#[test]
fn apply_bond_examples() {
    let pair = uniform(&[1, 1]);
    let singlet = &enumerate_hw_basis(&pair, HalfInteger::ZERO).unwrap()[0];
    assert_eq!(apply_bond(singlet, 0, &pair).unwrap(), vec![DiagramWeight { diagram: singlet.clone(), weight: 2.0 }]);
    let top = &enumerate_hw_basis(&pair, HalfInteger::ONE).unwrap()[0];
    assert!(apply_bond(top, 0, &pair).unwrap().is_empty());

    let three = uniform(&[1, 1, 1]);
    let left = ArcDiagram::from_parts(vec![1; 3], &[(0, 1)], &[(2, Arrow::Up)]).unwrap();
    let right = ArcDiagram::from_parts(vec![1; 3], &[(1, 2)], &[(0, Arrow::Up)]).unwrap();
    assert_eq!(apply_bond(&left, 1, &three).unwrap(), vec![DiagramWeight { diagram: right.clone(), weight: -1.0 }]);
    assert_eq!(apply_bond(&right, 0, &three).unwrap(), vec![DiagramWeight { diagram: left, weight: -1.0 }]);

    // two arcs reconnect into a nested pair
    let four = uniform(&[1; 4]);
    let side = ArcDiagram::from_parts(vec![1; 4], &[(0, 1), (2, 3)], &[]).unwrap();
    let nested = ArcDiagram::from_parts(vec![1; 4], &[(0, 3), (1, 2)], &[]).unwrap();
    assert_eq!(apply_bond(&side, 1, &four).unwrap(), vec![DiagramWeight { diagram: nested, weight: -1.0 }]);

    assert_eq!(apply_bond(&left_of(&uniform(&[1, 2])), 0, &uniform(&[1, 2])), Err(Error::UnsupportedSpin(h(2))));
    assert!(apply_bond(singlet, 1, &pair).is_err());
}

fn left_of(c: &SpinChainSpec) -> ArcDiagram {
    enumerate_hw_basis(c, c.max_total_spin()).unwrap().remove(0)
}

#[test]
fn temperley_lieb_rules_match_the_tensor_action() {
    // 2 h = 1 - swap on the expanded vectors, strand by strand
    let c = uniform(&[1; 6]);
    let space = oracle::ProductSpace::for_chain(&c, LIMIT).unwrap();
    for s in c.admissible_spins() {
        for d in enumerate_hw_basis(&c, s).unwrap() {
            let v = crate::basis::expand_to_tensor(&d, &c).unwrap().to_dense();
            for x in 0..5 {
                let bond = space.embed_two_site(x, &oracle::bond_matrix(h(1), h(1), c.model(), 1.0));
                let lhs = bond.matvec(&v);
                let mut rhs = vec![0.0; v.len()];
                for term in apply_bond(&d, x, &c).unwrap() {
                    let w = crate::basis::expand_to_tensor(&term.diagram, &c).unwrap().to_dense();
                    rhs.iter_mut().zip(w).for_each(|(r, wi)| *r += 2.0 * term.weight * wi);
                }
                assert!(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).abs() < 1e-12), "{d} bond {x}");
            }
        }
    }
}

#[test]
fn temperley_lieb_and_expansion_agree_up_to_ten_sites() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for len in 2..=10 {
        let js: Vec<f64> = (1..len).map(|_| rng.random_range(0.1..2.0)).collect();
        let c = chain(&vec![1; len], &js);
        for s in c.admissible_spins() {
            let tl = sector_hamiltonian_with(&c, s, AssemblyPath::TemperleyLieb, LIMIT).unwrap();
            let ex = sector_hamiltonian_with(&c, s, AssemblyPath::Expansion, LIMIT).unwrap();
            assert!(max_diff(&tl.to_dense(), &ex.to_dense()) < 1e-10, "L={len} S={s}");
            // one off-diagonal entry per bond and column at most
            for col in 0..tl.dim() {
                let off = tl.triplets().iter().filter(|t| t.1 == col && t.0 != col).count();
                assert!(off < len);
            }
        }
    }
}

#[test]
fn bracket_and_expansion_agree_on_general_spins() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let c = random_chain(&mut rng, 5, 4, 1500);
        for s in c.admissible_spins() {
            let br = sector_hamiltonian_with(&c, s, AssemblyPath::Bracket, LIMIT).unwrap();
            let ex = sector_hamiltonian_with(&c, s, AssemblyPath::Expansion, LIMIT).unwrap();
            assert!(max_diff(&br.to_dense(), &ex.to_dense()) < 1e-10, "{c:?} S={s}");
        }
    }
}

#[test]
fn sector_spectra_match_the_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..25 {
        let c = random_chain(&mut rng, 6, 3, 1000);
        let spectra = oracle::highest_weight_spectrum(&c, LIMIT).unwrap();
        for sector in spectra {
            for path in [AssemblyPath::Auto, AssemblyPath::Bracket] {
                let m = sector_hamiltonian_with(&c, sector.spin, path, LIMIT).unwrap();
                let mut ev = crate::pf::eigenvalues(&m);
                ev.sort_by(f64::total_cmp);
                assert_eq!(ev.len(), sector.eigenvalues.len());
                for (a, b) in ev.iter().zip(&sector.eigenvalues) {
                    assert!((a - b).abs() < 1e-8, "{c:?} S={}", sector.spin);
                }
                assert_eq!(offdiag_nonpositive_check(&m).status, VerdictStatus::HoldsStrict);
            }
        }
    }
}

#[test]
fn biquadratic_sectors_use_the_expansion_path() {
    for t in [0.0, 0.2, 1.0 / 3.0, 0.5] {
        let c = SpinChainSpec::bilinear_biquadratic(3, t).unwrap();
        for sector in oracle::highest_weight_spectrum(&c, LIMIT).unwrap() {
            let m = sector_hamiltonian(&c, sector.spin).unwrap();
            let ev = crate::pf::eigenvalues(&m);
            for (a, b) in ev.iter().zip(&sector.eigenvalues) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn offdiag_check_examples() {
    assert_eq!(offdiag_nonpositive_check(&sparse(2, &[4.0, -2.0, -2.0, 4.0])).status, VerdictStatus::HoldsStrict);
    assert_eq!(offdiag_nonpositive_check(&sparse(1, &[0.0])).status, VerdictStatus::HoldsStrict);
    let v = offdiag_nonpositive_check(&sparse(2, &[1.0, 0.5, 0.0, 1.0]));
    assert_eq!(v.status, VerdictStatus::Violated);
    assert_eq!(v.witnesses, vec![Witness { location: Location::Entry { row: 0, col: 1 }, value: 0.5 }]);
}

fn step_matrices(
    small_chain: &SpinChainSpec,
    large_chain: &SpinChainSpec,
    kind: StepKind,
    spin: HalfInteger,
) -> (SparseSectorMatrix, SparseSectorMatrix, Vec<usize>) {
    let step = crate::chain::IncrementStep { kind, resulting_chain: large_chain.clone() };
    let sb = enumerate_hw_basis(small_chain, spin).unwrap();
    let lb = enumerate_hw_basis(large_chain, spin + HalfInteger::HALF).unwrap();
    let small = sector_hamiltonian(small_chain, spin).unwrap();
    let large = sector_hamiltonian(large_chain, spin + HalfInteger::HALF).unwrap();
    (small, large, embedding_indices(&sb, &lb, &step).unwrap())
}

#[test]
fn compare_embedded_examples() {
    let pair = uniform(&[1, 1]);
    let (s, l, e) = step_matrices(&pair, &uniform(&[1, 1, 1]), StepKind::CaseI, HalfInteger::ZERO);
    // the singlet on sites 1, 2 is the second diagram of the larger basis
    assert_eq!(e, vec![1]);
    let v = compare_embedded(&s, &l, &e).unwrap();
    assert_eq!(v.status, VerdictStatus::HoldsNonStrict);

    let (s, l, e) = step_matrices(&pair, &uniform(&[1, 2]), StepKind::CaseII, HalfInteger::ZERO);
    let v = compare_embedded(&s, &l, &e).unwrap();
    assert_eq!(v.status, VerdictStatus::HoldsStrict);
    assert_eq!(v.witnesses.len(), 1);
    assert!((v.witnesses[0].value + 1.0).abs() < 1e-12);

    let zero = sparse(1, &[0.0]);
    assert_eq!(compare_embedded(&zero, &zero, &[0]).unwrap().status, VerdictStatus::HoldsNonStrict);
    assert_eq!(
        compare_embedded(&zero, &zero, &[0, 0]).unwrap_err(),
        Error::DimensionMismatch { expected: 1, found: 2 }
    );
    let big = sparse(2, &[1.0, 0.0, 0.0, 1.0]);
    assert!(compare_embedded(&big, &big, &[1, 1]).is_err());
    let v = compare_embedded(&sparse(1, &[0.5]), &big, &[1]).unwrap();
    assert_eq!(v.status, VerdictStatus::Violated);
}

#[test]
fn embedded_entries_never_grow_along_build_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..15 {
        let c = random_chain(&mut rng, 4, 3, 400);
        let steps = c.build_sequence();
        for k in 1..steps.len() {
            let (prev, next) = (&steps[k - 1].resulting_chain, &steps[k].resulting_chain);
            for s in prev.admissible_spins() {
                let (small, large, e) = step_matrices(prev, next, steps[k].kind, s);
                let v = compare_embedded(&small, &large, &e).unwrap();
                assert!(v.status.holds(), "{c:?} step {k} S={s}: {v:?}");
            }
        }
    }
}

#[test]
fn bracket_path_reaches_beyond_the_dense_limit() {
    let c = uniform(&[2; 9]);
    let s = c.max_total_spin() - HalfInteger::ONE;
    let m = sector_hamiltonian(&c, s).unwrap();
    assert_eq!(m.dim(), 8);
    assert_eq!(offdiag_nonpositive_check(&m).status, VerdictStatus::HoldsStrict);
    // spin-1 magnon band: 2 (1 - cos k) per unit coupling after the bond normalization
    let e = crate::pf::min_eigenvalue(&m).unwrap();
    let want = 2.0 * (1.0 - libm::cos(core::f64::consts::PI / 9.0));
    assert!((e - want).abs() < 1e-10, "{e} vs {want}");
}
