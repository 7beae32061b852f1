//! The complete invariant system and the reachability test built on it.
//!
//! Every component is a function of the colored appearance alone: frame and
//! central invariants only involve unique cubies, and orientation data uses
//! color-numbered `φ`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::classify::{has_cluster_invariant, ClassId, ClusterId};
use crate::error::{Error, Result};
use crate::group::{coset_label, parity_sign, CosetLabel, LabelKind, Perm};
use crate::orientation::color_orientation_permutation;
use crate::puzzle::{Geometry, Position, State};

/// The pairing of frame cubies by opposite positions, as sorted pairs of
/// home positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FramePairing {
    pub pairs: Vec<(Position, Position)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantVector {
    pub b1: Option<FramePairing>,
    pub b2: Option<i8>,
    pub c: Option<i8>,
    pub o: BTreeMap<ClassId, CosetLabel>,
    pub cl: BTreeMap<ClusterId, u32>,
}

fn id_string(pos: &[u8]) -> String {
    pos.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

impl InvariantVector {
    /// Names of the components that differ.
    pub fn differences(&self, other: &InvariantVector) -> Vec<String> {
        let mut out = Vec::new();
        if self.b1 != other.b1 {
            out.push("B1".to_string());
        }
        if self.b2 != other.b2 {
            out.push("B2".to_string());
        }
        if self.c != other.c {
            out.push("C".to_string());
        }
        for (class, label) in &self.o {
            if other.o.get(class) != Some(label) {
                out.push(format!("O{class}"));
            }
        }
        for (cluster, count) in &self.cl {
            if other.cl.get(cluster) != Some(count) {
                out.push(format!("Cl{cluster}"));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        if let Some(b1) = &self.b1 {
            let pairs: Vec<Value> = b1.pairs.iter().map(|(a, b)| json!([id_string(a), id_string(b)])).collect();
            root.insert("b1".into(), Value::Array(pairs));
        }
        if let Some(b2) = self.b2 {
            root.insert("b2".into(), json!(b2));
        }
        if let Some(c) = self.c {
            root.insert("c".into(), json!(c));
        }
        let o: Map<String, Value> = self.o.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
        root.insert("o".into(), Value::Object(o));
        let cl: Map<String, Value> = self.cl.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        root.insert("cl".into(), Value::Object(cl));
        Value::Object(root)
    }
}

fn frame_class(geom: &Geometry) -> Result<usize> {
    if geom.params().k % 2 == 0 {
        return Err(Error::EvenK);
    }
    Ok(geom.classes().iter().position(|c| c.frame).expect("odd k has a frame"))
}

/// Slot `2a + side` of a frame position with boundary axis `a`.
fn frame_slot(geom: &Geometry, idx: u32) -> usize {
    let f = geom.facets(idx).next().expect("frame cubie has a facet");
    2 * f.axis as usize + usize::from(f.positive)
}

/// `B1` and `B2`. `σ_c` and `σ_p` are measured against the arrangement that
/// places the pairs, ordered by their smaller member, on axes `1..n` with the
/// smaller member on the low side; for the solved pairing that is the solved
/// state itself.
pub fn frame_invariants(state: &State) -> Result<(FramePairing, i8)> {
    let geom = state.geometry();
    let fc = frame_class(geom)?;
    let n = geom.params().n;
    let mut cur = vec![0usize; 2 * n];
    let mut home_of_slot = vec![0u32; 2 * n];
    for &idx in &geom.class(fc).members {
        let home = state.cubie_at(idx).home;
        cur[frame_slot(geom, idx)] = frame_slot(geom, home);
        home_of_slot[frame_slot(geom, home)] = home;
    }
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .map(|a| {
            let (x, y) = (cur[2 * a], cur[2 * a + 1]);
            (x.min(y), x.max(y))
        })
        .collect();
    pairs.sort_unstable();

    let mut ref_slot = vec![0usize; 2 * n];
    for (i, &(lo, hi)) in pairs.iter().enumerate() {
        ref_slot[lo] = 2 * i;
        ref_slot[hi] = 2 * i + 1;
    }
    let mut sigma_c = vec![0usize; 2 * n];
    for (slot, &cubie) in cur.iter().enumerate() {
        sigma_c[ref_slot[cubie]] = slot;
    }
    let sigma_p: Vec<usize> = (0..n).map(|i| sigma_c[2 * i] / 2).collect();
    let b2 = parity_sign(&sigma_c) * parity_sign(&sigma_p);

    let pos = |slot: usize| geom.position(home_of_slot[slot]).to_vec();
    let mut named: Vec<(Position, Position)> = pairs.iter().map(|&(lo, hi)| (pos(lo), pos(hi))).collect();
    named.sort();
    Ok((FramePairing { pairs: named }, b2))
}

fn local_sign(geom: &Geometry, state: &State, ci: usize) -> i8 {
    let members = &geom.class(ci).members;
    let local = |idx: u32| members.binary_search(&idx).expect("class member");
    let mut images = vec![0usize; members.len()];
    for (t, &idx) in members.iter().enumerate() {
        images[local(state.cubie_at(idx).home)] = t;
    }
    parity_sign(&images)
}

/// Product of the position-permutation signs of all central classes.
pub fn central_sign(state: &State) -> Result<i8> {
    let geom = state.geometry();
    frame_class(geom)?;
    Ok((0..geom.classes().len()).filter(|&ci| geom.class(ci).central).map(|ci| local_sign(geom, state, ci)).product())
}

/// Label of one cubie's color-numbered `φ`; odd permutations in `A_3`/`A_4`
/// classes are first multiplied on the left by the transposition `(1 2)`.
fn cubie_label(group: crate::group::RotationGroupKind, phi: &Perm) -> Result<CosetLabel> {
    if group.quotient_kind() == LabelKind::Z3 && !phi.is_even() {
        let tau = Perm::from_cycles(phi.degree(), &[&[1, 2]])?;
        return coset_label(group, &tau.then_after(phi));
    }
    coset_label(group, phi)
}

fn orientation_label(state: &State, ci: usize) -> Result<CosetLabel> {
    let geom = state.geometry();
    let info = geom.class(ci);
    let kind = info.group.quotient_kind();
    if info.id.m < 2 || kind == LabelKind::Trivial {
        return Err(Error::NoInvariant(info.id.to_string()));
    }
    let atlas = geom.atlas(ci);
    let mut acc = CosetLabel::zero(kind);
    for &idx in &info.members {
        let phi = color_orientation_permutation(&atlas, state, idx)?;
        acc = acc + cubie_label(info.group, &phi)?;
    }
    Ok(acc)
}

pub fn orientation_invariant(state: &State, class: &ClassId) -> Result<CosetLabel> {
    let geom = state.geometry();
    let ci = geom.class_by_id(class).ok_or_else(|| Error::NoInvariant(class.to_string()))?;
    orientation_label(state, ci)
}

/// Simplified-orientation counts of every cluster of class `ci`.
fn cluster_counts(state: &State, ci: usize) -> Result<BTreeMap<u32, u32>> {
    let geom = state.geometry();
    let info = geom.class(ci);
    let atlas = geom.atlas(ci);
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &idx in &info.members {
        counts.entry(geom.cluster_rep(idx)).or_insert(0);
    }
    for &idx in &info.members {
        let phi = color_orientation_permutation(&atlas, state, idx)?;
        if phi.is_even() {
            *counts.get_mut(&geom.cluster_rep(state.cubie_at(idx).home)).expect("cluster") += 1;
        }
    }
    Ok(counts)
}

pub fn cluster_invariant(state: &State, cluster: &ClusterId) -> Result<u32> {
    let geom = state.geometry();
    let params = geom.params();
    if !has_cluster_invariant(params, &cluster.class) {
        return Err(Error::NotAlternatingCluster(cluster.to_string()));
    }
    let ci = geom.class_by_id(&cluster.class).ok_or_else(|| Error::NotAlternatingCluster(cluster.to_string()))?;
    let rep = geom
        .class(ci)
        .members
        .iter()
        .copied()
        .find(|&idx| &geom.cluster_id(idx) == cluster)
        .ok_or_else(|| Error::NotAlternatingCluster(cluster.to_string()))?;
    Ok(cluster_counts(state, ci)?[&geom.cluster_rep(rep)])
}

pub fn invariant_vector(state: &State) -> Result<InvariantVector> {
    let geom = state.geometry();
    let params = geom.params();
    let (b1, b2, c) = if params.k % 2 == 1 {
        let (pairing, b2) = frame_invariants(state)?;
        (Some(pairing), Some(b2), Some(central_sign(state)?))
    } else {
        (None, None, None)
    };
    let mut o = BTreeMap::new();
    let mut cl = BTreeMap::new();
    for (ci, info) in geom.classes().iter().enumerate() {
        if info.id.m >= 2 && info.group.quotient_kind() != LabelKind::Trivial {
            o.insert(info.id.clone(), orientation_label(state, ci)?);
        }
        if has_cluster_invariant(params, &info.id) {
            for (rep, count) in cluster_counts(state, ci)? {
                cl.insert(geom.cluster_id(rep), count);
            }
        }
    }
    Ok(InvariantVector { b1, b2, c, o, cl })
}

/// True iff `b` can be reached from `a` by moves.
pub fn reachable(a: &State, b: &State) -> Result<bool> {
    a.same_params(b)?;
    for s in [a, b] {
        let problems = s.validate();
        if !problems.is_empty() {
            return Err(Error::InvalidReassembly(problems));
        }
    }
    Ok(invariant_vector(a)? == invariant_vector(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::{corner_twist_rotation, Move, PuzzleParams, ReassemblyEdit};

    fn params(n: usize, k: usize) -> PuzzleParams {
        PuzzleParams::new(n, k).unwrap()
    }

    #[test]
    fn solved_frame() {
        let s = State::solved(params(3, 3)).unwrap();
        let (pairing, b2) = frame_invariants(&s).unwrap();
        assert_eq!(b2, 1);
        assert_eq!(pairing.pairs.len(), 3);
        assert_eq!(pairing.pairs[0], (vec![0, 1, 1], vec![2, 1, 1]));
        assert_eq!(central_sign(&s).unwrap(), 1);
        assert!(matches!(frame_invariants(&State::solved(params(3, 4)).unwrap()), Err(Error::EvenK)));
    }

    #[test]
    fn middle_slice_keeps_b2() {
        let p = params(3, 3);
        let s = State::solved(p).unwrap();
        let t = s.apply_move(&Move::new(p, 0, 1, &[1]).unwrap()).unwrap();
        let (pairing, b2) = frame_invariants(&t).unwrap();
        assert_eq!(b2, 1);
        assert_eq!(pairing, frame_invariants(&s).unwrap().0);
    }

    #[test]
    fn face_turn_keeps_c() {
        let p = params(3, 3);
        let t = State::solved(p).unwrap().apply_move(&Move::new(p, 0, 1, &[0]).unwrap()).unwrap();
        assert_eq!(central_sign(&t).unwrap(), 1);
    }

    #[test]
    fn in_pair_swap_flips_b2() {
        let p = params(3, 3);
        let s = State::solved(p).unwrap();
        let edit = ReassemblyEdit::transported_swap(s.geometry(), &[0, 1, 1], &[2, 1, 1]).unwrap();
        let t = s.apply_reassembly_edit(&edit).unwrap();
        let (pairing, b2) = frame_invariants(&t).unwrap();
        assert_eq!(b2, -1);
        assert_eq!(pairing, frame_invariants(&s).unwrap().0);
    }

    #[test]
    fn central_edge_swap_flips_c() {
        let p = params(3, 3);
        let s = State::solved(p).unwrap();
        let edit = ReassemblyEdit::transported_swap(s.geometry(), &[0, 0, 1], &[0, 1, 0]).unwrap();
        let t = s.apply_reassembly_edit(&edit).unwrap();
        assert_eq!(central_sign(&t).unwrap(), -1);
    }

    #[test]
    fn corner_twist_shifts_o() {
        let p = params(3, 3);
        let s = State::solved(p).unwrap();
        let g = s.geometry().clone();
        let idx = g.index_of(&[0, 0, 0]).unwrap();
        let r = corner_twist_rotation(&g, idx).unwrap();
        let t =
            s.apply_reassembly_edit(&ReassemblyEdit::TwistInPlace { position: vec![0, 0, 0], rotation: r }).unwrap();
        let corners = ClassId::new(3, vec![]);
        assert_eq!(orientation_invariant(&s, &corners).unwrap().value, 0);
        assert_ne!(orientation_invariant(&t, &corners).unwrap().value, 0);
        assert_eq!(invariant_vector(&s).unwrap().differences(&invariant_vector(&t).unwrap()), vec!["O(3,[])"]);
        assert!(!reachable(&s, &t).unwrap());
        assert!(reachable(&s, &s).unwrap());
    }

    #[test]
    fn wing_pair_baseline() {
        // the two wings of one edge always carry opposite bits
        let p = params(3, 7);
        let s = State::solved(p).unwrap();
        let g = s.geometry();
        let cluster = g.cluster_id(g.index_of(&[0, 6, 1]).unwrap());
        assert_eq!(cluster_invariant(&s, &cluster).unwrap(), 1);
        assert!(orientation_invariant(&s, &ClassId::new(2, vec![1])).is_err());
    }

    #[test]
    fn reachable_rejects_mismatch() {
        let a = State::solved(params(3, 3)).unwrap();
        let b = State::solved(params(3, 4)).unwrap();
        assert!(matches!(reachable(&a, &b), Err(Error::ParamsMismatch(..))));
    }

    #[test]
    fn json_shape() {
        let s = State::solved(params(3, 3)).unwrap();
        let v = invariant_vector(&s).unwrap().to_json();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["b1", "b2", "c", "cl", "o"]);
        assert_eq!(v["o"]["(3,[])"], "Z3:0");
        assert_eq!(v["o"]["(2,[1])"], "Z2:0");
    }
}
