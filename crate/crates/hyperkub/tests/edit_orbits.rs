//! Distinct invariant vectors reachable from solved by reassembly edits,
//! against the state count.

use std::collections::{BTreeMap, VecDeque};

use hyperkub::census::count_states_census;
use hyperkub::invariants::invariant_vector;
use hyperkub::oracle::rotations;
use hyperkub::puzzle::{PuzzleParams, ReassemblyEdit, State};

fn edits(state: &State) -> Vec<ReassemblyEdit> {
    let g = state.geometry();
    let rots = rotations(g.params().n);
    let mut out = Vec::new();
    for idx in 0..g.len() as u32 {
        let facets: Vec<_> = g.facets(idx).collect();
        for r in &rots {
            if !r.is_identity() && facets.iter().all(|f| facets.contains(&r.apply(*f))) {
                out.push(ReassemblyEdit::TwistInPlace { position: g.position(idx).to_vec(), rotation: *r });
            }
        }
    }
    for c in g.classes() {
        let first = g.position(c.members[0]);
        for &x in &c.members[1..] {
            out.push(ReassemblyEdit::transported_swap(g, first, g.position(x)).unwrap());
        }
    }
    out
}

fn distinct_vectors(n: usize, k: usize) -> usize {
    let solved = State::solved(PuzzleParams::new(n, k).unwrap()).unwrap();
    let moves = edits(&solved);
    let mut seen = BTreeMap::new();
    seen.insert(format!("{:?}", invariant_vector(&solved).unwrap()), ());
    let mut queue = VecDeque::from([solved]);
    while let Some(s) = queue.pop_front() {
        for e in &moves {
            let t = s.apply_reassembly_edit(e).unwrap();
            let key = format!("{:?}", invariant_vector(&t).unwrap());
            if seen.insert(key, ()).is_none() {
                queue.push_back(t);
            }
        }
    }
    seen.len()
}

#[test]
fn edit_orbits_match_counts() {
    for (n, k) in [(3, 2), (4, 2), (3, 3)] {
        let s = count_states_census(n, k).unwrap().s.to_string();
        assert_eq!(distinct_vectors(n, k).to_string(), s, "({n},{k})");
    }
}
