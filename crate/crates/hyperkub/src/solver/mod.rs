//! Constructive solving: careful 3-cycles and pair twists built from
//! commutators, parity tuning, and the staged algorithm that turns one
//! state into any other state with the same invariants.

mod kit;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::classify::{has_cluster_invariant, ClassId};
use crate::error::{Error, Result};
use crate::group::{Perm, SignedAxis, SignedPerm};
use crate::invariants::invariant_vector;
use crate::orientation::{color_orientation_permutation, orientation_permutation, simplified_orientation};
use crate::puzzle::{expand_layer_move, Geometry, Move, MoveSeq, PuzzleParams, State};

use kit::{all_words, check_in_group, word_for, ClassKit};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Stage {
    Frame,
    CentralParity,
    EdgeParity,
    Placement,
    ClusterOrient,
    Orient,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Move sequences per stage, in application order.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct SolvePlan {
    pub stages: Vec<(Stage, MoveSeq)>,
}

impl SolvePlan {
    fn push(&mut self, stage: Stage, seq: MoveSeq) {
        match self.stages.last_mut() {
            Some((s, q)) if *s == stage => q.extend(&seq),
            _ => self.stages.push((stage, seq)),
        }
    }

    /// All stages concatenated.
    pub fn moves(&self) -> MoveSeq {
        let mut out = MoveSeq::new();
        for (_, q) in &self.stages {
            out.extend(q);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.stages.iter().map(|(_, q)| q.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Move count per stage.
    pub fn stage_lengths(&self) -> Vec<(Stage, usize)> {
        self.stages.iter().map(|(s, q)| (*s, q.len())).collect()
    }
}

/// `p · q · p⁻¹`.
pub fn conjugate(p: &MoveSeq, q: &MoveSeq) -> MoveSeq {
    p.clone().then(q).then(&p.undo())
}

fn class_index(geom: &Geometry, class: &ClassId) -> Result<usize> {
    geom.class_by_id(class).ok_or_else(|| Error::ClassMismatch(format!("no class {class} in {}", geom.params())))
}

fn local_of(kit: &ClassKit, geom: &Geometry, pos: &[u8]) -> Result<usize> {
    let idx = geom.index_of_checked(pos)?;
    kit.local(idx).ok_or_else(|| Error::ClassMismatch(format!("{pos:?} is not in class {}", geom.class(kit.ci).id)))
}

/// Careful 3-cycle moving the cubie at `a` to `b`, `b` to `c`, `c` to `a`.
pub fn three_cycle(state: &State, class: &ClassId, a: &[u8], b: &[u8], c: &[u8]) -> Result<MoveSeq> {
    let geom = state.geometry();
    let ci = class_index(geom, class)?;
    if geom.class(ci).frame {
        return Err(Error::FrameClass);
    }
    let kit = ClassKit::shared(geom, ci)?;
    let (la, lb, lc) = (local_of(&kit, geom, a)?, local_of(&kit, geom, b)?, local_of(&kit, geom, c)?);
    if la == lb || lb == lc || la == lc {
        return Err(Error::ClassMismatch("3-cycle needs three distinct positions".into()));
    }
    kit.cycle(la, lb, lc)
}

/// Realizes `target` (on the class members in ascending order: the cubie at
/// member `t` goes to member `target(t)`) as a product of 3-cycles.
pub fn permute_class_even(state: &State, class: &ClassId, target: &Perm) -> Result<MoveSeq> {
    let geom = state.geometry();
    let ci = class_index(geom, class)?;
    if geom.class(ci).frame {
        return Err(Error::FrameClass);
    }
    let len = geom.class(ci).members.len();
    if target.degree() != len {
        return Err(Error::DegreeMismatch(target.degree(), len));
    }
    if !target.is_even() {
        return Err(Error::OddTarget);
    }
    if target.is_identity() {
        return Ok(MoveSeq::new());
    }
    let kit = ClassKit::shared(geom, ci)?;
    let mut scratch = state.clone();
    permute_greedy(&kit, &target.images(), &mut scratch)
}

/// Left-to-right greedy 3-cycle decomposition of an even `dest`, applied
/// to `state` as it goes.
fn permute_greedy(kit: &ClassKit, dest: &[usize], state: &mut State) -> Result<MoveSeq> {
    let len = dest.len();
    let mut at: Vec<usize> = (0..len).collect();
    let mut pos_of: Vec<usize> = (0..len).collect();
    let mut inv = vec![0usize; len];
    for (u, &d) in dest.iter().enumerate() {
        inv[d] = u;
    }
    let mut out = MoveSeq::new();
    for p in 0..len {
        if dest[at[p]] == p {
            continue;
        }
        let q = pos_of[inv[p]];
        let r = if q != len - 1 { len - 1 } else { len - 2 };
        if r <= p {
            return Err(Error::OddTarget);
        }
        let seq = kit.cycle(q, p, r)?;
        state.apply_sequence_mut(&seq)?;
        out.extend(&seq);
        let (cp, cq, cr) = (at[p], at[q], at[r]);
        at[p] = cq;
        at[r] = cp;
        at[q] = cr;
        pos_of[cq] = p;
        pos_of[cp] = r;
        pos_of[cr] = q;
    }
    Ok(out)
}

/// How an odd class permutation is made even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityFix {
    pub moves: MoveSeq,
    /// True when two identical cubies are swapped in the bookkeeping
    /// instead of moving anything.
    pub relabel: bool,
}

/// External turn of the `t`-layer with free axes `0..t`, other axes at 0.
fn external_turn(params: PuzzleParams, t: usize) -> MoveSeq {
    let free: Vec<usize> = (0..t).collect();
    let fixed: Vec<(usize, u8)> = (t..params.n).map(|a| (a, 0)).collect();
    expand_layer_move(params, &free, &fixed, 0, 1).expect("valid partition")
}

/// Quarter turn of plane `(0,1)` with axis 2 at `j` and later axes at 0.
fn edge_turn(params: PuzzleParams, j: u8) -> MoveSeq {
    let mut slice = vec![0u8; params.n - 2];
    slice[0] = j;
    MoveSeq::from(vec![Move::new(params, 0, 1, &slice).expect("in range")])
}

/// The parity fix for a class: a layer turn that odd-permutes it, or a
/// relabeling of identical cubies.
pub fn tune_parity(state: &State, class: &ClassId) -> Result<ParityFix> {
    let geom = state.geometry();
    let ci = class_index(geom, class)?;
    let info = geom.class(ci);
    let params = geom.params();
    if info.frame {
        return Err(Error::FrameClass);
    }
    let m = info.id.m;
    if info.central {
        let t = (params.n - m + 1).max(2);
        return Ok(ParityFix { moves: external_turn(params, t), relabel: false });
    }
    if has_cluster_invariant(params, &info.id) && m == params.n - 1 {
        return Ok(ParityFix { moves: edge_turn(params, info.id.chars[0]), relabel: false });
    }
    Ok(ParityFix { moves: MoveSeq::new(), relabel: true })
}

fn effect_at(kit: &ClassKit, seq: &MoveSeq, pos: u32) -> Result<Perm> {
    let solved = State::solved_for(&kit.geom);
    let s = solved.apply_sequence(seq)?;
    orientation_permutation(&kit.geom.atlas(kit.ci), &s, pos)
}

fn orient_kit_for(state: &State, pos: &[u8]) -> Result<(std::sync::Arc<ClassKit>, usize)> {
    let geom = state.geometry();
    let idx = geom.index_of_checked(pos)?;
    let ci = geom.class_index(idx);
    let info = geom.class(ci);
    if info.id.m < 2 || info.group.is_trivial() {
        return Err(Error::NoOrientation(info.id.to_string()));
    }
    let kit = ClassKit::shared(geom, ci)?;
    let l = kit.local(idx).expect("member");
    Ok((kit, l))
}

/// Right factor `γ` with `φ ∘ γ = z ∘ φ`.
fn right_factor(kit: &ClassKit, state: &State, local: usize, z: &Perm) -> Result<Perm> {
    let phi = color_orientation_permutation(&kit.geom.atlas(kit.ci), state, kit.members[local])?;
    Ok(phi.inverse().then_after(z).then_after(&phi))
}

/// Pair twists at `(x, y)` composing to `γ` at `x`.
fn twist_word(kit: &ClassKit, x: usize, y: usize, gamma: &Perm) -> Result<MoveSeq> {
    if gamma.is_identity() {
        return Ok(MoveSeq::new());
    }
    let seqs = kit.pair_twists(x, y)?;
    let effects = seqs.iter().map(|s| effect_at(kit, s, kit.members[x])).collect::<Result<Vec<_>>>()?;
    let word = word_for(&effects, gamma).ok_or_else(|| Error::Solver(format!("twist {gamma} not generated")))?;
    let mut out = MoveSeq::new();
    for gi in word {
        out.extend(&seqs[gi]);
    }
    Ok(out)
}

/// Changes the orientation of the cubie at `a` to `z ∘ φ`, touching only
/// the cubies at `a` and `b`.
pub fn orient_pair(state: &State, a: &[u8], b: &[u8], z: &Perm) -> Result<MoveSeq> {
    let (kit, la) = orient_kit_for(state, a)?;
    let lb = local_of(&kit, state.geometry(), b)?;
    check_in_group(state.geometry().class(kit.ci).group, z)?;
    if z.is_identity() {
        return Ok(MoveSeq::new());
    }
    let gamma = right_factor(&kit, state, la, z)?;
    twist_word(&kit, la, lb, &gamma)
}

/// Sequence with effect `γ ∈ [G, G]` at `x` and no other change, built from
/// commutators of pair twists through two helper positions.
fn commutant_word(kit: &ClassKit, x: usize, gamma: &Perm) -> Result<MoveSeq> {
    if gamma.is_identity() {
        return Ok(MoveSeq::new());
    }
    let helpers: Vec<usize> = (0..kit.members.len()).filter(|&l| l != x).take(2).collect();
    let m = gamma.degree();
    let mut tables = Vec::new();
    for &h in &helpers {
        let seqs = kit.pair_twists(h, x)?;
        let effects = seqs.iter().map(|s| effect_at(kit, s, kit.members[x])).collect::<Result<Vec<_>>>()?;
        tables.push((seqs, all_words(&effects, m)));
    }
    let (sa, wa) = &tables[0];
    let (sb, wb) = &tables[1];
    let mut gens: Vec<Perm> = Vec::new();
    let mut pairs: Vec<(&Vec<usize>, &Vec<usize>)> = Vec::new();
    let mut seen: HashMap<Perm, usize> = HashMap::new();
    let mut entries: Vec<_> = wa.iter().flat_map(|a| wb.iter().map(move |b| (a, b))).collect();
    entries.sort_by_key(|((_, x), (_, y))| x.len() + y.len());
    for ((g, xw), (h, yw)) in entries {
        let c = g.then_after(h).then_after(&g.inverse()).then_after(&h.inverse());
        if c.is_identity() || seen.contains_key(&c) {
            continue;
        }
        seen.insert(c.clone(), gens.len());
        gens.push(c);
        pairs.push((xw, yw));
    }
    let word = word_for(&gens, gamma).ok_or_else(|| Error::Solver(format!("{gamma} not reached by commutators")))?;
    let build = |seqs: &Vec<MoveSeq>, w: &Vec<usize>| {
        let mut s = MoveSeq::new();
        for &gi in w {
            s.extend(&seqs[gi]);
        }
        s
    };
    let mut out = MoveSeq::new();
    for ci in word {
        let (xw, yw) = pairs[ci];
        let (x, y) = (build(sa, xw), build(sb, yw));
        out.extend(&x.clone().then(&y).then(&x.undo()).then(&y.undo()));
    }
    Ok(out)
}

/// Changes the orientation of the cubie at `pos` to `z ∘ φ` for `z` in the
/// commutant of the class group; no other cubie changes.
pub fn orient_by_commutant(state: &State, pos: &[u8], z: &Perm) -> Result<MoveSeq> {
    let (kit, l) = orient_kit_for(state, pos)?;
    let group = state.geometry().class(kit.ci).group;
    if !group.commutant_contains(z) {
        return Err(Error::NotInCommutant(z.to_string()));
    }
    if z.is_identity() {
        return Ok(MoveSeq::new());
    }
    let gamma = right_factor(&kit, state, l, z)?;
    commutant_word(&kit, l, &gamma)
}

/// Working state of a solve.
struct Run<'a> {
    w: State,
    t: &'a State,
    plan: SolvePlan,
}

impl Run<'_> {
    fn apply(&mut self, stage: Stage, seq: MoveSeq) -> Result<()> {
        if seq.is_empty() {
            return Ok(());
        }
        self.w.apply_sequence_mut(&seq)?;
        self.plan.push(stage, seq);
        Ok(())
    }
}

fn frame_axis(geom: &Geometry, idx: u32) -> SignedAxis {
    geom.facets(idx).next().expect("frame cubie has a facet")
}

/// Rotation carrying the frame of `w` onto the frame of `t`.
fn frame_rotation(geom: &Geometry, ci: usize, w: &State, t: &State) -> Result<SignedPerm> {
    let n = geom.params().n;
    let where_t = t.locate();
    let mut image = vec![SignedAxis::new(0, true); 2 * n];
    for &idx in &geom.class(ci).members {
        let d = frame_axis(geom, idx);
        let to = frame_axis(geom, where_t[w.cubie_at(idx).home as usize]);
        image[2 * d.axis as usize + usize::from(d.positive)] = to;
    }
    let mut perm = vec![0usize; n];
    let mut signs = vec![1i8; n];
    for a in 0..n {
        let (neg, pos) = (image[2 * a], image[2 * a + 1]);
        if neg != -pos {
            return Err(Error::Solver("frame is not a rotation of the target frame".into()));
        }
        perm[a] = pos.axis as usize;
        signs[a] = if pos.positive { 1 } else { -1 };
    }
    let h = SignedPerm::new(&perm, &signs)?;
    if h.det() != 1 {
        return Err(Error::Solver("frame differs by a reflection".into()));
    }
    Ok(h)
}

/// Central slice turns whose composite rotation is `h`.
fn rotation_moves(params: PuzzleParams, h: &SignedPerm) -> MoveSeq {
    let n = params.n;
    let center = vec![params.center().expect("odd k"); n];
    let mut m = *h;
    let mut lefts: Vec<(usize, usize)> = Vec::new();
    let mut left = |m: &mut SignedPerm, i: usize, j: usize| {
        *m = SignedPerm::quarter_turn(n, i, j).compose(m);
        lefts.push((i, j));
    };
    for a in 0..n - 1 {
        let v = m.apply(SignedAxis::new(a, true));
        if v.axis as usize != a {
            left(&mut m, v.axis as usize, a);
        }
        if !m.apply(SignedAxis::new(a, true)).positive {
            left(&mut m, a, a + 1);
            left(&mut m, a, a + 1);
        }
    }
    debug_assert!(m.is_identity());
    lefts.iter().rev().map(|&(i, j)| Move::through(params, j, i, &center)).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Key {
    Home,
    Cluster,
    ClusterOr,
}

fn key_of(geom: &Geometry, ci: usize, s: &State, pos: u32, key: Key) -> Result<(u32, u8)> {
    let home = s.cubie_at(pos).home;
    Ok(match key {
        Key::Home => (home, 0),
        Key::Cluster => (geom.cluster_rep(home), 0),
        Key::ClusterOr => (geom.cluster_rep(home), simplified_orientation(&geom.atlas(ci), s, pos)?),
    })
}

/// Destination of every cubie of the class (local indices), even when
/// possible. The flag is false when the permutation is odd and no two
/// cubies share a key.
fn assignment(kit: &ClassKit, w: &State, t: &State, key: Key) -> Result<(Vec<usize>, bool)> {
    let geom = &kit.geom;
    let len = kit.members.len();
    let want = kit.members.iter().map(|&p| key_of(geom, kit.ci, t, p, key)).collect::<Result<Vec<_>>>()?;
    let have = kit.members.iter().map(|&p| key_of(geom, kit.ci, w, p, key)).collect::<Result<Vec<_>>>()?;
    let mut dest = vec![usize::MAX; len];
    let mut pool: HashMap<(u32, u8), Vec<usize>> = HashMap::new();
    for x in 0..len {
        if have[x] == want[x] {
            dest[x] = x;
        } else {
            pool.entry(want[x]).or_default().push(x);
        }
    }
    for u in 0..len {
        if dest[u] == usize::MAX {
            dest[u] = pool
                .get_mut(&have[u])
                .and_then(Vec::pop)
                .ok_or_else(|| Error::Solver(format!("class {}: cubie sets differ", geom.class(kit.ci).id)))?;
        }
    }
    let even = Perm::from_images(&dest)?.is_even();
    if even {
        return Ok((dest, true));
    }
    let mut first: HashMap<(u32, u8), usize> = HashMap::new();
    for (u, &h) in have.iter().enumerate().take(len) {
        if let Some(&v) = first.get(&h) {
            dest.swap(u, v);
            return Ok((dest, true));
        }
        first.insert(h, u);
    }
    Ok((dest, false))
}

fn place(run: &mut Run<'_>, kit: &ClassKit, key: Key, stage: Stage) -> Result<()> {
    let (dest, even) = assignment(kit, &run.w, run.t, key)?;
    if !even {
        return Err(Error::Solver(format!("class {} has odd parity", kit.geom.class(kit.ci).id)));
    }
    let mut scratch = run.w.clone();
    let seq = permute_greedy(kit, &dest, &mut scratch)?;
    run.apply(stage, seq)
}

fn orient(run: &mut Run<'_>, kit: &ClassKit) -> Result<()> {
    let atlas = kit.geom.atlas(kit.ci);
    let len = kit.members.len();
    let sink = len - 1;
    let defect = |w: &State, l: usize| -> Result<Perm> {
        let p = kit.members[l];
        let a = color_orientation_permutation(&atlas, w, p)?;
        let b = color_orientation_permutation(&atlas, run.t, p)?;
        Ok(a.inverse().then_after(&b))
    };
    for x in 0..sink {
        let gamma = defect(&run.w, x)?;
        let seq = twist_word(kit, x, sink, &gamma)?;
        run.apply(Stage::Orient, seq)?;
    }
    let r = defect(&run.w, sink)?;
    let group = kit.geom.class(kit.ci).group;
    if !group.commutant_contains(&r) {
        return Err(Error::Solver(format!("class {}: residual twist {r} outside the commutant", atlas.class())));
    }
    let seq = commutant_word(kit, sink, &r)?;
    run.apply(Stage::Orient, seq)
}

/// Moves turning `source` into a state colored-equal to `target`.
pub fn solve(source: &State, target: &State) -> Result<SolvePlan> {
    source.same_params(target)?;
    for s in [source, target] {
        let problems = s.validate();
        if !problems.is_empty() {
            return Err(Error::InvalidReassembly(problems));
        }
    }
    let diffs = invariant_vector(source)?.differences(&invariant_vector(target)?);
    if !diffs.is_empty() {
        return Err(Error::IncompatibleInvariants(diffs));
    }
    let geom = source.geometry().clone();
    let params = geom.params();
    let mut run = Run { w: source.clone(), t: target, plan: SolvePlan::default() };

    if let Some(fc) = geom.classes().iter().position(|c| c.frame) {
        let h = frame_rotation(&geom, fc, &run.w, target)?;
        run.apply(Stage::Frame, rotation_moves(params, &h))?;
    }

    let mut central: Vec<usize> =
        (0..geom.classes().len()).filter(|&ci| geom.class(ci).central && !geom.class(ci).frame).collect();
    central.sort_by_key(|&ci| geom.class(ci).id.m);
    for ci in central {
        let kit = ClassKit::shared(&geom, ci)?;
        let (_, even) = assignment(&kit, &run.w, target, Key::Home)?;
        if !even {
            let fix = tune_parity(&run.w, &geom.class(ci).id)?;
            run.apply(Stage::CentralParity, fix.moves)?;
        }
        place(&mut run, &kit, Key::Home, Stage::Placement)?;
    }

    let others: Vec<usize> = (0..geom.classes().len()).filter(|&ci| !geom.class(ci).central).collect();
    for &ci in &others {
        let id = &geom.class(ci).id;
        if has_cluster_invariant(params, id) && id.m == params.n - 1 {
            let kit = ClassKit::shared(&geom, ci)?;
            let (_, even) = assignment(&kit, &run.w, target, Key::ClusterOr)?;
            if !even {
                run.apply(Stage::EdgeParity, edge_turn(params, id.chars[0]))?;
            }
        }
    }
    for &ci in &others {
        if !has_cluster_invariant(params, &geom.class(ci).id) {
            place(&mut run, &*ClassKit::shared(&geom, ci)?, Key::Cluster, Stage::Placement)?;
        }
    }
    for &ci in &others {
        if has_cluster_invariant(params, &geom.class(ci).id) {
            place(&mut run, &*ClassKit::shared(&geom, ci)?, Key::ClusterOr, Stage::ClusterOrient)?;
        }
    }
    for ci in 0..geom.classes().len() {
        let info = geom.class(ci);
        if info.id.m >= 2 && !info.group.is_trivial() {
            orient(&mut run, &*ClassKit::shared(&geom, ci)?)?;
        }
    }

    let replay = source.apply_sequence(&run.plan.moves())?;
    if !replay.colored_equal(target)? {
        return Err(Error::Solver("plan does not reach the target".into()));
    }
    Ok(run.plan)
}

#[cfg(test)]
mod tests;
