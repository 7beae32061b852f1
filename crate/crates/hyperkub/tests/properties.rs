use proptest::prelude::*;

use hyperkub::classify::{class_of, dependent_group};
use hyperkub::group::{binom_vanishing, coset_label, perm_compose, perm_sign, Perm, RotationGroupKind};
use hyperkub::invariants::invariant_vector;
use hyperkub::orientation::{orientation_permutation, transition_alpha};
use hyperkub::puzzle::{expand_layer_move, seeded_moves, Move, PuzzleParams, State};

const MATRIX: [(usize, usize); 8] = [(3, 2), (3, 3), (3, 4), (3, 5), (3, 7), (4, 2), (4, 3), (5, 3)];

fn params(n: usize, k: usize) -> PuzzleParams {
    PuzzleParams::new(n, k).unwrap()
}

fn matrix_point() -> impl Strategy<Value = PuzzleParams> {
    prop::sample::select(MATRIX.to_vec()).prop_map(|(n, k)| params(n, k))
}

fn perm(m: usize) -> impl Strategy<Value = Perm> {
    Just((0..m).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::from_images(&v).unwrap())
}

fn scrambled(p: PuzzleParams, len: usize, seed: u64) -> State {
    State::solved(p).unwrap().apply_sequence(&seeded_moves(p, len, seed)).unwrap()
}

fn groups() -> Vec<RotationGroupKind> {
    let mut out = vec![RotationGroupKind::alternating(3), RotationGroupKind::alternating(4)];
    out.extend((2..=4).map(RotationGroupKind::symmetric));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative((a, b, c) in (1usize..7).prop_flat_map(|m| (perm(m), perm(m), perm(m)))) {
        let ab_c = perm_compose(&perm_compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = perm_compose(&a, &perm_compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(perm_sign(&perm_compose(&a, &b).unwrap()), perm_sign(&a) * perm_sign(&b));
    }

    #[test]
    fn coset_label_is_constant_on_cosets(gi in 0usize..5, x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>()) {
        let group = groups()[gi];
        let elements = group.elements();
        let commutant: Vec<Perm> = elements.iter().filter(|q| group.commutant_contains(q)).cloned().collect();
        let g = x.get(&elements);
        let q = y.get(&commutant);
        prop_assert_eq!(coset_label(group, &g.then_after(q)).unwrap(), coset_label(group, g).unwrap());
    }

    #[test]
    fn binomial_recurrence(n in 2i64..60, s in 1i64..59) {
        prop_assume!(s < n);
        prop_assert_eq!(binom_vanishing(n, s), binom_vanishing(n - 1, s - 1) + binom_vanishing(n - 1, s));
    }

    #[test]
    fn moves_have_order_four(p in matrix_point(), seed in any::<u64>()) {
        let s = scrambled(p, 30, seed);
        let mv = seeded_moves(p, 1, seed ^ 0x5555).moves()[0];
        let mut t = s.clone();
        for _ in 0..4 {
            t = t.apply_move(&mv).unwrap();
        }
        prop_assert_eq!(t.slots(), s.slots());
        prop_assert!(s.apply_move(&mv).unwrap().validate().is_empty());
    }

    #[test]
    fn parallel_layers_commute(p in matrix_point(), seed in any::<u64>(), i in 0usize..3, j in 0usize..3, a in 0u8..8, b in 0u8..8) {
        prop_assume!(i != j);
        let k = p.k as u8;
        let slice_a = vec![a % k; p.n - 2];
        let mut slice_b = slice_a.clone();
        slice_b[0] = b % k;
        let x = Move::new(p, i, j, &slice_a).unwrap();
        let y = Move::new(p, i, j, &slice_b).unwrap();
        let s = scrambled(p, 20, seed);
        let xy = s.apply_move(&x).unwrap().apply_move(&y).unwrap();
        let yx = s.apply_move(&y).unwrap().apply_move(&x).unwrap();
        prop_assert_eq!(xy.slots(), yx.slots());
    }

    #[test]
    fn expanded_layer_moves_commute(p in matrix_point(), seed in any::<u64>(), pin in 0u8..8) {
        let n = p.n;
        let free: Vec<usize> = (0..n - 1).collect();
        let seq = expand_layer_move(p, &free, &[(n - 1, pin % p.k as u8)], 0, 1).unwrap();
        let s = scrambled(p, 20, seed);
        let forward = s.apply_sequence(&seq).unwrap();
        let backward = s.apply_sequence(&seq.moves().iter().rev().copied().collect()).unwrap();
        prop_assert_eq!(forward.slots(), backward.slots());
    }

    #[test]
    fn quarter_turn_four_cycle(p in matrix_point(), idx in any::<prop::sample::Index>(), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let g = hyperkub::puzzle::Geometry::shared(p).unwrap();
        let x = idx.index(g.len()) as u32;
        let pos = g.position(x).to_vec();
        let k1 = (p.k - 1) as u8;
        let (l, r) = (pos[i], pos[j]);
        let want = [(l, r), (k1 - r, l), (k1 - l, k1 - r), (r, k1 - l)];
        let mut at = x;
        for &(wi, wj) in &want {
            let q = g.position(at);
            prop_assert_eq!((q[i], q[j]), (wi, wj));
            for a in (0..p.n).filter(|&a| a != i && a != j) {
                prop_assert_eq!(q[a], pos[a]);
            }
            at = g.transport(at, i, j);
        }
        prop_assert_eq!(at, x);
    }

    #[test]
    fn class_is_kept_by_transport(p in matrix_point(), idx in any::<prop::sample::Index>(), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let g = hyperkub::puzzle::Geometry::shared(p).unwrap();
        let x = idx.index(g.len()) as u32;
        let y = g.transport(x, i, j);
        prop_assert_eq!(class_of(p, g.position(x)).unwrap(), class_of(p, g.position(y)).unwrap());
    }

    #[test]
    fn invariants_are_conserved(p in matrix_point(), seed in any::<u64>(), len in 1usize..200) {
        let base = invariant_vector(&State::solved(p).unwrap()).unwrap();
        let s = scrambled(p, len, seed);
        prop_assert!(s.validate().is_empty());
        prop_assert_eq!(invariant_vector(&s).unwrap(), base);
    }

    #[test]
    fn orientation_lies_in_dependent_group(p in matrix_point(), seed in any::<u64>()) {
        let s = scrambled(p, 60, seed);
        let g = s.geometry();
        for (ci, c) in g.classes().iter().enumerate().filter(|(_, c)| c.id.m >= 2) {
            let atlas = g.atlas(ci);
            let group = dependent_group(p, &c.id);
            for &x in &c.members {
                prop_assert!(group.contains(&orientation_permutation(&atlas, &s, x).unwrap()));
            }
        }
    }

    #[test]
    fn transition_law(p in matrix_point(), seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let s = scrambled(p, 40, seed);
        let g = s.geometry().clone();
        let mv = seeded_moves(p, 1, seed.wrapping_add(1)).moves()[0];
        let mut pairs = Vec::new();
        g.layer_map(&mv, &mut pairs);
        let displaced: Vec<(u32, u32)> =
            pairs.into_iter().filter(|&(a, b)| a != b && g.class(g.class_index(a)).id.m >= 2).collect();
        prop_assume!(!displaced.is_empty());
        let (from, to) = *pick.get(&displaced);
        let atlas = g.atlas(g.class_index(from));
        let t = s.apply_move(&mv).unwrap();
        let before = orientation_permutation(&atlas, &s, from).unwrap();
        let after = orientation_permutation(&atlas, &t, to).unwrap();
        let alpha = transition_alpha(&atlas, &g, &mv, from).unwrap();
        prop_assert_eq!(after, before.then_after(&alpha));
    }
}
