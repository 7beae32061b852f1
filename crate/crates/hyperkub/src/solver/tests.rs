use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::kit::{changed, ClassKit};
use super::*;
use crate::puzzle::{corner_twist_rotation, random_moves, ReassemblyEdit};

fn params(n: usize, k: usize) -> PuzzleParams {
    PuzzleParams::new(n, k).unwrap()
}

#[test]
fn conjugate_of_empty() {
    let p = params(3, 3);
    let q = MoveSeq::parse(p, "t(1,2)[1]").unwrap();
    assert_eq!(conjugate(&MoveSeq::new(), &q), q);
}

#[test]
fn kits_cycle_every_class() {
    for (n, k) in [(3, 2), (3, 3), (3, 4), (3, 5), (3, 6), (4, 2), (4, 3)] {
        let p = params(n, k);
        let geom = Geometry::shared(p).unwrap();
        let solved = State::solved_for(&geom);
        for ci in 0..geom.classes().len() {
            if geom.class(ci).frame {
                continue;
            }
            let kit = ClassKit::shared(&geom, ci).unwrap();
            let len = kit.members.len();
            for (a, b, c) in [(0, 1, 2), (len - 1, 0, len / 2), (1, len - 1, len - 2)] {
                let seq = kit.cycle(a, b, c).unwrap();
                let s = solved.apply_sequence(&seq).unwrap();
                let diff = changed(&solved, &s);
                let mut want = vec![kit.members[a], kit.members[b], kit.members[c]];
                want.sort();
                assert_eq!(diff, want, "{p} class {}", geom.class(ci).id);
                assert_eq!(s.cubie_at(kit.members[b]).home, kit.members[a]);
                assert_eq!(s.cubie_at(kit.members[c]).home, kit.members[b]);
            }
        }
    }
}

#[test]
fn corner_pair_twist() {
    let p = params(3, 3);
    let s = State::solved(p).unwrap();
    let z = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
    let seq = orient_pair(&s, &[0, 0, 0], &[2, 2, 2], &z).unwrap();
    let t = s.apply_sequence(&seq).unwrap();
    let mut diff = t.colored_diff(&s).unwrap();
    diff.sort();
    let geom = s.geometry();
    let mut want = vec![geom.index_of(&[0, 0, 0]).unwrap(), geom.index_of(&[2, 2, 2]).unwrap()];
    want.sort();
    assert_eq!(diff, want);
    let atlas = geom.atlas(geom.class_index(want[0]));
    let idx = geom.index_of(&[0, 0, 0]).unwrap();
    assert_eq!(orientation_permutation(&atlas, &t, idx).unwrap(), z);
    assert!(orient_pair(&s, &[0, 0, 0], &[2, 2, 2], &Perm::from_cycles(3, &[&[1, 2]]).unwrap()).is_err());
}

#[test]
fn commutant_rules() {
    let s = State::solved(params(3, 3)).unwrap();
    let z = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
    assert!(matches!(orient_by_commutant(&s, &[0, 0, 0], &z), Err(Error::NotInCommutant(_))));
    assert!(orient_by_commutant(&s, &[0, 0, 0], &Perm::identity(3)).unwrap().is_empty());
    let s4 = State::solved(params(4, 3)).unwrap();
    let z = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
    let seq = orient_by_commutant(&s4, &[0, 0, 0, 1], &z).unwrap();
    let t = s4.apply_sequence(&seq).unwrap();
    let idx = s4.geometry().index_of(&[0, 0, 0, 1]).unwrap();
    assert_eq!(t.colored_diff(&s4).unwrap(), vec![idx]);
}

#[test]
fn parity_fixes() {
    let p = params(3, 3);
    let s = State::solved(p).unwrap();
    let fix = tune_parity(&s, &ClassId::new(2, vec![1])).unwrap();
    assert_eq!(fix.moves.len(), 1);
    let t = s.apply_sequence(&fix.moves).unwrap();
    let geom = s.geometry();
    let frame = geom.classes().iter().position(|c| c.frame).unwrap();
    for &x in &geom.class(frame).members {
        assert_eq!(t.cubie_at(x).home, x);
    }
    let wings = tune_parity(&State::solved(params(3, 7)).unwrap(), &ClassId::new(2, vec![1])).unwrap();
    assert_eq!(wings.moves.len(), 1);
    let centers = tune_parity(&State::solved(params(3, 7)).unwrap(), &ClassId::new(1, vec![1, 1])).unwrap();
    assert!(centers.relabel && centers.moves.is_empty());
}

#[test]
fn even_permutation_of_wings() {
    let p = params(3, 7);
    let s = State::solved(p).unwrap();
    let id = ClassId::new(2, vec![1]);
    let geom = s.geometry();
    let len = geom.class(geom.class_by_id(&id).unwrap()).members.len();
    let mut images: Vec<usize> = (0..len).collect();
    images.rotate_left(3);
    images.swap(0, 1);
    let target = Perm::from_images(&images).unwrap();
    let target =
        if target.is_even() { target } else { Perm::from_images(&(0..len).rev().collect::<Vec<_>>()).unwrap() };
    assert!(target.is_even());
    let seq = permute_class_even(&s, &id, &target).unwrap();
    let t = s.apply_sequence(&seq).unwrap();
    let members = &geom.class(geom.class_by_id(&id).unwrap()).members;
    for (u, &x) in members.iter().enumerate() {
        assert_eq!(t.cubie_at(members[target.apply(u)]).home, x);
    }
    let odd = Perm::from_cycles(len, &[&[1, 2]]).unwrap();
    assert!(matches!(permute_class_even(&s, &id, &odd), Err(Error::OddTarget)));
}

#[test]
fn frame_stage_matches_rotation() {
    let p = params(4, 3);
    let s = State::solved(p).unwrap();
    let scrambled = s.apply_sequence(&random_moves(p, 40, &mut ChaCha8Rng::seed_from_u64(3))).unwrap();
    let geom = s.geometry();
    let fc = geom.classes().iter().position(|c| c.frame).unwrap();
    let h = frame_rotation(geom, fc, &scrambled, &s).unwrap();
    let fixed = scrambled.apply_sequence(&rotation_moves(p, &h)).unwrap();
    for &x in &geom.class(fc).members {
        assert_eq!(fixed.cubie_at(x).home, x);
    }
}

#[test]
fn solve_identity_is_empty() {
    let s = State::solved(params(3, 3)).unwrap();
    assert!(solve(&s, &s).unwrap().is_empty());
}

#[test]
fn solve_rejects_twisted_corner() {
    let p = params(3, 3);
    let s = State::solved(p).unwrap();
    let idx = s.geometry().index_of(&[0, 0, 0]).unwrap();
    let rotation = corner_twist_rotation(s.geometry(), idx).unwrap();
    let t = s.apply_reassembly_edit(&ReassemblyEdit::TwistInPlace { position: vec![0, 0, 0], rotation }).unwrap();
    match solve(&s, &t) {
        Err(Error::IncompatibleInvariants(d)) => assert_eq!(d, vec!["O(3,[])".to_string()]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn solves_scrambles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, k) in [(3, 2), (3, 3), (3, 4), (3, 5), (3, 6), (3, 7), (4, 2), (4, 3), (4, 4), (5, 3)] {
        let p = params(n, k);
        let solved = State::solved(p).unwrap();
        for _ in 0..3 {
            let scrambled = solved.apply_sequence(&random_moves(p, 200, &mut rng)).unwrap();
            let plan = solve(&scrambled, &solved).unwrap_or_else(|e| panic!("{p}: {e}"));
            assert!(scrambled.apply_sequence(&plan.moves()).unwrap().colored_equal(&solved).unwrap());
            let back = solve(&solved, &scrambled).unwrap();
            assert!(solved.apply_sequence(&back.moves()).unwrap().colored_equal(&scrambled).unwrap());
        }
    }
}

#[test]
fn central_parity_keeps_lower_classes() {
    let p = params(4, 3);
    let s = State::solved(p).unwrap();
    let geom = s.geometry();
    for m in 2..4 {
        let id = ClassId::new(m, vec![1; 4 - m]);
        let fix = tune_parity(&s, &id).unwrap();
        let t = s.apply_sequence(&fix.moves).unwrap();
        for c in geom.classes().iter().filter(|c| c.central && c.id.m < m) {
            for &x in &c.members {
                assert_eq!(t.colors_at(x), s.colors_at(x));
            }
        }
        let ci = geom.class_by_id(&id).unwrap();
        let moved = geom.class(ci).members.iter().filter(|&&x| t.cubie_at(x).home != x).count();
        assert_eq!(moved % 4, 0);
        assert!(moved > 0);
    }
}

#[test]
#[ignore]
fn timing() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, k) in [(3, 3), (3, 5), (4, 2), (4, 3), (3, 7), (5, 3)] {
        let p = params(n, k);
        let solved = State::solved(p).unwrap();
        let t0 = std::time::Instant::now();
        let _ = solve(&solved.apply_sequence(&random_moves(p, 200, &mut rng)).unwrap(), &solved).unwrap();
        let first = t0.elapsed();
        let t1 = std::time::Instant::now();
        let mut lens = Vec::new();
        for _ in 0..5 {
            let plan = solve(&solved.apply_sequence(&random_moves(p, 200, &mut rng)).unwrap(), &solved).unwrap();
            lens.push(plan.len());
        }
        eprintln!("{p}: first {first:?}, then {:?} per solve, lengths {lens:?}", t1.elapsed() / 5);
    }
}

#[test]
fn reassembly_pairs_and_edge_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut edge_parity = 0;
    for (n, k) in [(3, 5), (3, 6), (4, 4)] {
        let p = params(n, k);
        for _ in 0..6 {
            let a = crate::oracle::random_reassembly(p, &mut rng).unwrap();
            let b = a.apply_sequence(&random_moves(p, 120, &mut rng)).unwrap();
            let plan = solve(&a, &b).unwrap_or_else(|e| panic!("{p}: {e}"));
            assert!(a.apply_sequence(&plan.moves()).unwrap().colored_equal(&b).unwrap());
            edge_parity += plan.stages.iter().filter(|(s, _)| *s == Stage::EdgeParity).count();
        }
    }
    for k in [5, 7] {
        let p = params(3, k);
        let solved = State::solved(p).unwrap();
        for _ in 0..6 {
            let plan = solve(&solved.apply_sequence(&random_moves(p, 201, &mut rng)).unwrap(), &solved).unwrap();
            edge_parity += plan.stages.iter().filter(|(s, _)| *s == Stage::EdgeParity).count();
        }
    }
    assert!(edge_parity > 0);
}
