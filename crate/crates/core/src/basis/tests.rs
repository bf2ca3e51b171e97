use super::*;
use crate::chain::StepKind;
use alloc::string::ToString;
use proptest::prelude::*;

fn h(d: i64) -> HalfInteger {
    HalfInteger::from_doubled(d)
}

fn uniform(doubled: &[i64]) -> SpinChainSpec {
    let n = doubled.len();
    SpinChainSpec::heisenberg(doubled.iter().map(|&d| h(d)).collect(), vec![1.0; n - 1]).unwrap()
}

fn halves(n: usize) -> SpinChainSpec {
    uniform(&vec![1; n])
}

fn config_of(arrows: &str) -> OrderedIsingConfig {
    let downs: Vec<usize> = arrows.chars().map(|c| usize::from(c == '↓')).collect();
    OrderedIsingConfig::from_block_sizes(vec![1; downs.len()], downs).unwrap()
}

type Pairing = (Vec<(usize, usize)>, Vec<(usize, Arrow)>);

/// The pairing rule executed literally: repeatedly take the leftmost
/// unpaired down strand with an unpaired up strand on its left and join it
/// to the rightmost such up strand.
fn literal_pairing(arrows: &[Arrow]) -> Pairing {
    let n = arrows.len();
    let mut paired = vec![false; n];
    let mut arcs = Vec::new();
    loop {
        let found = (0..n).find_map(|j| {
            if paired[j] || arrows[j] != Arrow::Down {
                return None;
            }
            (0..j).rev().find(|&i| !paired[i] && arrows[i] == Arrow::Up).map(|i| (i, j))
        });
        match found {
            Some((i, j)) => {
                paired[i] = true;
                paired[j] = true;
                arcs.push((i, j));
            }
            None => break,
        }
    }
    arcs.sort_unstable();
    let unpaired = (0..n).filter(|&i| !paired[i]).map(|i| (i, arrows[i])).collect();
    (arcs, unpaired)
}

fn raise_norm(d: &ArcDiagram, chain: &SpinChainSpec) -> f64 {
    let space = ProductSpace::for_chain(chain, DEFAULT_DENSE_LIMIT).unwrap();
    let v = expand_to_tensor(d, chain).unwrap().to_dense();
    crate::linalg::norm(&space.raising().matvec(&v))
}

#[test]
fn pairing_examples() {
    let d = pair_arcs(&config_of("↑↓↓↑"));
    assert_eq!(d.arcs(), vec![(0, 1)]);
    assert_eq!(d.unpaired(), vec![(2, Arrow::Down), (3, Arrow::Up)]);
    assert_eq!(d.spin(), HalfInteger::ONE);
    assert_eq!(d.magnetization(), HalfInteger::ZERO);
    assert!(!d.is_highest_weight());

    let up = pair_arcs(&config_of("↑↑↑"));
    assert!(up.arcs().is_empty());
    assert_eq!(up.spin(), h(3));
    assert_eq!(up.magnetization(), h(3));

    let singlet = pair_arcs(&config_of("↑↓"));
    assert_eq!(singlet.arcs(), vec![(0, 1)]);
    assert_eq!(singlet.spin(), HalfInteger::ZERO);
}

#[test]
fn unpaired_pattern_is_an_eigenvector_of_casimir_and_sz() {
    let chain = halves(4);
    let d = pair_arcs(&config_of("↑↓↓↑"));
    let space = ProductSpace::for_chain(&chain, 64).unwrap();
    let v = expand_to_tensor(&d, &chain).unwrap().to_dense();
    for (op, eig) in [(space.casimir(), 2.0), (space.sz(), 0.0)] {
        let w = op.matvec(&v);
        let err: f64 = w.iter().zip(&v).map(|(a, b)| (a - eig * b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }
}

#[test]
fn dump_format_is_one_based() {
    let d = pair_arcs(&config_of("↑↓↓↑"));
    assert_eq!(d.to_string(), "S=1 arcs=(1,2) unpaired=3↓ 4↑");
    let chain = uniform(&[1, 2]);
    let basis = enumerate_hw_basis(&chain, HalfInteger::HALF).unwrap();
    assert_eq!(basis[0].to_string(), "S=1/2 arcs=(1,2) unpaired=3↑");
}

#[test]
fn configs_validate_their_bounds() {
    let chain = uniform(&[1, 2]);
    assert!(OrderedIsingConfig::new(&chain, vec![1, 2]).is_ok());
    assert!(OrderedIsingConfig::new(&chain, vec![2, 0]).is_err());
    assert!(OrderedIsingConfig::new(&chain, vec![0]).is_err());
    let c = OrderedIsingConfig::new(&chain, vec![1, 1]).unwrap();
    assert_eq!(c.magnetization(), HalfInteger::HALF - HalfInteger::ONE);
    assert_eq!(c.arrows(), vec![Arrow::Down, Arrow::Down, Arrow::Up]);
}

#[test]
fn from_parts_rejects_broken_diagrams() {
    let up = |i| (i, Arrow::Up);
    assert!(ArcDiagram::from_parts(vec![1; 4], &[(0, 2), (1, 3)], &[]).is_err());
    assert!(ArcDiagram::from_parts(vec![1; 3], &[(0, 2)], &[up(1)]).is_err());
    assert!(ArcDiagram::from_parts(vec![2, 1], &[(0, 1)], &[up(2)]).is_err());
    assert!(ArcDiagram::from_parts(vec![1; 2], &[], &[up(0), (1, Arrow::Down)]).is_err());
    assert!(ArcDiagram::from_parts(vec![1; 2], &[], &[up(0)]).is_err());
    let ok = ArcDiagram::from_parts(vec![1; 4], &[(0, 3), (1, 2)], &[]).unwrap();
    assert_eq!(ok.downs_per_site(), vec![0, 0, 1, 1]);
    assert_eq!(pair_arcs(&ok.config()), ok);
}

#[test]
fn enumeration_examples() {
    let three = enumerate_hw_basis(&halves(3), HalfInteger::HALF).unwrap();
    let arcs: Vec<_> = three.iter().map(|d| d.arcs()).collect();
    assert_eq!(arcs, vec![vec![(1, 2)], vec![(0, 1)]]);
    assert_eq!(three[0].unpaired(), vec![(0, Arrow::Up)]);
    assert_eq!(three[1].unpaired(), vec![(2, Arrow::Up)]);

    let four = enumerate_hw_basis(&halves(4), HalfInteger::ZERO).unwrap();
    let arcs: Vec<_> = four.iter().map(|d| d.arcs()).collect();
    assert_eq!(arcs, vec![vec![(0, 3), (1, 2)], vec![(0, 1), (2, 3)]]);

    for chain in [halves(5), uniform(&[3, 2, 1])] {
        let top = enumerate_hw_basis(&chain, chain.max_total_spin()).unwrap();
        assert_eq!(top.len(), 1);
        assert!(top[0].arcs().is_empty());
    }
    assert_eq!(enumerate_hw_basis(&halves(4), HalfInteger::HALF), Err(Error::NotAdmissible(HalfInteger::HALF)));
}

#[test]
fn enumeration_is_lexicographic_on_down_counts() {
    let chain = uniform(&[2, 3, 1, 2]);
    for s in chain.admissible_spins() {
        let configs: Vec<Vec<usize>> =
            enumerate_hw_basis(&chain, s).unwrap().iter().map(|d| d.downs_per_site()).collect();
        assert!(configs.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn enumeration_matches_brute_force_filtering() {
    // all down-count vectors with the right total whose pairing leaves no unpaired down
    let chain = uniform(&[2, 1, 3, 2]);
    let sizes: Vec<usize> = chain.spins().iter().map(|s| s.doubled() as usize).collect();
    for s in chain.admissible_spins() {
        let total = ((chain.max_total_spin() - s).doubled() / 2) as usize;
        let combos: usize = sizes.iter().map(|n| n + 1).product();
        let mut want = Vec::new();
        for code in 0..combos {
            // mixed-radix digits, site 0 most significant, so codes run lexicographically
            let mut rest = code;
            let mut downs = vec![0usize; sizes.len()];
            for x in (0..sizes.len()).rev() {
                downs[x] = rest % (sizes[x] + 1);
                rest /= sizes[x] + 1;
            }
            if downs.iter().sum::<usize>() != total {
                continue;
            }
            let d = pair_arcs(&OrderedIsingConfig::from_block_sizes(sizes.clone(), downs.clone()).unwrap());
            if d.is_highest_weight() {
                want.push(downs);
            }
        }
        let got: Vec<Vec<usize>> = enumerate_hw_basis(&chain, s).unwrap().iter().map(|d| d.downs_per_site()).collect();
        assert_eq!(got, want, "S = {s}");
    }
}

#[test]
fn counts_and_highest_weight_property() {
    for spins in [&[1, 1, 1, 1, 1, 1][..], &[2, 2, 2], &[3, 1, 2], &[1, 3, 3, 1], &[4, 2]] {
        let chain = uniform(spins);
        let space = ProductSpace::for_chain(&chain, DEFAULT_DENSE_LIMIT).unwrap();
        for s in chain.admissible_spins() {
            let basis = enumerate_hw_basis(&chain, s).unwrap();
            assert_eq!(basis.len() as u128, chain.multiplicity(s));
            for d in &basis {
                d.validate().unwrap();
                assert_eq!(d.spin(), s);
                let v = expand_to_tensor(d, &chain).unwrap().to_dense();
                assert!(crate::linalg::norm(&space.raising().matvec(&v)) < 1e-10);
                let w = space.sz().matvec(&v);
                assert!(w.iter().zip(&v).all(|(a, b)| (a - s.value() * b).abs() < 1e-10));
                let c = space.casimir().matvec(&v);
                assert!(c.iter().zip(&v).all(|(a, b)| (a - s.casimir() * b).abs() < 1e-8));
            }
            let g = gram_matrix(&basis, &chain).unwrap();
            assert!(crate::linalg::symmetric_eigenvalues(g)[0] > 1e-10);
        }
    }
}

#[test]
fn expansion_examples() {
    let pair = halves(2);
    let singlet = &enumerate_hw_basis(&pair, HalfInteger::ZERO).unwrap()[0];
    let v = expand_to_tensor(singlet, &pair).unwrap();
    // site 0 is the most significant digit and ↑ is digit 0
    assert_eq!(v.amplitudes.into_iter().collect::<Vec<_>>(), vec![(1, 1.0), (2, -1.0)]);

    let spin_one = uniform(&[2]);
    let d = ArcDiagram::from_parts(vec![2], &[], &[(0, Arrow::Down), (1, Arrow::Up)]).unwrap();
    let v = expand_to_tensor(&d, &spin_one).unwrap();
    assert_eq!(v.amplitudes.keys().copied().collect::<Vec<_>>(), vec![1]);
    assert!(v.amplitudes[&1] > 0.0);

    let three = halves(3);
    let d = ArcDiagram::from_parts(vec![1; 3], &[(0, 1)], &[(2, Arrow::Up)]).unwrap();
    let v = expand_to_tensor(&d, &three).unwrap();
    assert_eq!(v.amplitudes.into_iter().collect::<Vec<_>>(), vec![(2, 1.0), (4, -1.0)]);
    assert!(raise_norm(&d, &three) < 1e-15);
}

#[test]
fn expansion_rejects_mismatched_chains() {
    let d = ArcDiagram::from_parts(vec![1; 3], &[(0, 1)], &[(2, Arrow::Up)]).unwrap();
    assert!(matches!(expand_to_tensor(&d, &halves(4)), Err(Error::InconsistentDiagram(_))));
    assert!(matches!(expand_to_tensor(&d, &uniform(&[1, 2])), Err(Error::InconsistentDiagram(_))));
    assert!(matches!(expand_to_tensor_with_limit(&d, &halves(3), 4), Err(Error::DimensionTooLarge { .. })));
}

#[test]
fn spin_one_singlet_is_the_two_site_singlet() {
    // [01]^2 on two spin-1 sites: |1,-1>|1,1>... with alternating signs
    let chain = uniform(&[2, 2]);
    let basis = enumerate_hw_basis(&chain, HalfInteger::ZERO).unwrap();
    assert_eq!(basis.len(), 1);
    let v = expand_to_tensor(&basis[0], &chain).unwrap();
    let space = ProductSpace::for_chain(&chain, 9).unwrap();
    let a = |k0, k1| v.amplitudes.get(&space.index_of(&[k0, k1])).copied().unwrap_or(0.0);
    assert!((a(0, 2) - a(2, 0)).abs() < 1e-12);
    assert!((a(1, 1) + a(0, 2)).abs() < 1e-12);
    assert!(a(0, 2).abs() > 0.5);
}

#[test]
fn gram_examples() {
    let pair = halves(2);
    let b = enumerate_hw_basis(&pair, HalfInteger::ZERO).unwrap();
    assert_eq!(gram_matrix(&b, &pair).unwrap(), DMatrix::from_element(1, 1, 2.0));

    let three = halves(3);
    let b = enumerate_hw_basis(&three, HalfInteger::HALF).unwrap();
    assert_eq!(gram_matrix(&b, &three).unwrap(), DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]));

    let chain = uniform(&[3, 2, 1]);
    let top = enumerate_hw_basis(&chain, chain.max_total_spin()).unwrap();
    assert_eq!(gram_matrix(&top, &chain).unwrap(), DMatrix::from_element(1, 1, 1.0));

    let mixed = [b[0].clone(), enumerate_hw_basis(&three, h(3)).unwrap()[0].clone()];
    assert!(gram_matrix(&mixed, &three).is_err());
}

#[test]
fn embed_examples() {
    let singlet = &enumerate_hw_basis(&halves(2), HalfInteger::ZERO).unwrap()[0];
    let step_one = IncrementStep { kind: StepKind::CaseI, resulting_chain: halves(3) };
    let e = embed_next(singlet, &step_one).unwrap();
    assert_eq!(e, ArcDiagram::from_parts(vec![1; 3], &[(0, 1)], &[(2, Arrow::Up)]).unwrap());

    let step_two = IncrementStep { kind: StepKind::CaseII, resulting_chain: uniform(&[1, 2]) };
    let e = embed_next(singlet, &step_two).unwrap();
    assert_eq!(e.block_sizes(), &[1, 2]);
    assert_eq!(e.arcs(), vec![(0, 1)]);
    assert_eq!(e.unpaired(), vec![(2, Arrow::Up)]);
    assert_eq!(e.spin(), HalfInteger::HALF);

    let top = &enumerate_hw_basis(&halves(2), HalfInteger::ONE).unwrap()[0];
    for step in [&step_one, &step_two] {
        let e = embed_next(top, step).unwrap();
        assert!(e.arcs().is_empty() && e.is_highest_weight());
        assert_eq!(e.strand_count(), 3);
    }

    let initial = IncrementStep { kind: StepKind::Initial, resulting_chain: halves(1) };
    assert!(matches!(embed_next(singlet, &initial), Err(Error::InvalidStep(_))));
    let wrong = IncrementStep { kind: StepKind::CaseII, resulting_chain: halves(3) };
    assert!(matches!(embed_next(singlet, &wrong), Err(Error::InvalidStep(_))));
}

#[test]
fn embedding_is_injective_into_the_larger_basis() {
    let chain = uniform(&[2, 1, 3, 1]);
    let steps = chain.build_sequence();
    for k in 1..steps.len() {
        let (prev, next) = (&steps[k - 1].resulting_chain, &steps[k].resulting_chain);
        for s in prev.admissible_spins() {
            let small = enumerate_hw_basis(prev, s).unwrap();
            let large = enumerate_hw_basis(next, s + HalfInteger::HALF).unwrap();
            let idx = embedding_indices(&small, &large, &steps[k]).unwrap();
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), idx.len());
            for (d, &i) in small.iter().zip(&idx) {
                let e = embed_next(d, &steps[k]).unwrap();
                e.validate().unwrap();
                assert_eq!(e, large[i]);
                assert_eq!(e.arc_count(), d.arc_count());
            }
        }
    }
}

fn arrows_strategy() -> impl Strategy<Value = Vec<Arrow>> {
    prop::collection::vec(prop_oneof![Just(Arrow::Up), Just(Arrow::Down)], 1..14)
}

fn blocks_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    prop::collection::vec(1usize..4, 1..6).prop_flat_map(|sizes| {
        let downs: Vec<_> = sizes.iter().map(|&n| 0..=n).collect();
        (Just(sizes), downs)
    })
}

proptest! {
    #[test]
    fn stack_pairing_matches_the_literal_rule(arrows in arrows_strategy()) {
        let downs: Vec<usize> = arrows.iter().map(|a| usize::from(*a == Arrow::Down)).collect();
        let d = pair_arcs(&OrderedIsingConfig::from_block_sizes(vec![1; arrows.len()], downs).unwrap());
        let (arcs, unpaired) = literal_pairing(&arrows);
        prop_assert_eq!(d.arcs(), arcs);
        prop_assert_eq!(d.unpaired(), unpaired);
        prop_assert!(d.validate().is_ok());
    }

    #[test]
    fn block_pairing_is_valid_and_round_trips((sizes, downs) in blocks_strategy()) {
        let config = OrderedIsingConfig::from_block_sizes(sizes, downs).unwrap();
        let d = pair_arcs(&config);
        prop_assert!(d.validate().is_ok());
        let (arcs, unpaired) = literal_pairing(&config.arrows());
        prop_assert_eq!(d.arcs(), arcs);
        prop_assert_eq!(d.unpaired(), unpaired);
        prop_assert_eq!(d.config(), config.clone());
        prop_assert_eq!(d.magnetization(), config.magnetization());
    }
}
