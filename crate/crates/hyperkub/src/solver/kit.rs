//! Per-class building blocks: a base 3-cycle found as a commutator, pair
//! transports, and a library of pair twists.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::group::{Perm, RotationGroupKind};
use crate::orientation::orientation_permutation;
use crate::puzzle::{Geometry, Move, MoveSeq, PuzzleParams, State};

const NONE: u32 = u32::MAX;

/// Every atomic quarter turn, both directions.
pub(crate) fn all_moves(params: PuzzleParams) -> Vec<Move> {
    let (n, k) = (params.n, params.k);
    let mut out = Vec::new();
    let mut slice = vec![0u8; n - 2];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for mut code in 0..k.pow(n as u32 - 2) {
                for s in slice.iter_mut().rev() {
                    *s = (code % k) as u8;
                    code /= k;
                }
                out.push(Move::new(params, i, j, &slice).expect("in range"));
            }
        }
    }
    out
}

/// Positions whose cubie or pose differs.
pub(crate) fn changed(a: &State, b: &State) -> Vec<u32> {
    a.slots().iter().zip(b.slots()).enumerate().filter(|(_, (x, y))| x != y).map(|(i, _)| i as u32).collect()
}

fn single_common(a: &[u32], b: &[u32]) -> Option<u32> {
    let (mut i, mut j, mut found) = (0, 0, None);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if found.is_some() {
                    return None;
                }
                found = Some(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    found
}

fn power(seq: &MoveSeq, e: usize) -> MoveSeq {
    let mut out = MoveSeq::new();
    for _ in 0..e {
        out.extend(seq);
    }
    out
}

fn commutator(a: &MoveSeq, b: &MoveSeq) -> MoveSeq {
    a.clone().then(b).then(&a.undo()).then(&b.undo())
}

/// Breadth-first tree over ordered pairs of class positions.
struct PairTree {
    len: usize,
    parent: Vec<u32>,
    via: Vec<u32>,
}

impl PairTree {
    fn build(len: usize, root: (usize, usize), images: &[Vec<u16>], allowed: &[usize]) -> PairTree {
        let mut parent = vec![NONE; len * len];
        let mut via = vec![NONE; len * len];
        let r = root.0 * len + root.1;
        parent[r] = r as u32;
        let mut queue = VecDeque::from([r]);
        while let Some(s) = queue.pop_front() {
            let (a, b) = (s / len, s % len);
            for &mi in allowed {
                let img = &images[mi];
                let t = img[a] as usize * len + img[b] as usize;
                if parent[t] == NONE {
                    parent[t] = s as u32;
                    via[t] = mi as u32;
                    queue.push_back(t);
                }
            }
        }
        PairTree { len, parent, via }
    }

    /// Moves carrying the root pair onto `(a, b)`.
    fn path(&self, moves: &[Move], a: usize, b: usize) -> Option<MoveSeq> {
        let mut s = a * self.len + b;
        if self.parent[s] == NONE {
            return None;
        }
        let mut rev = Vec::new();
        while self.parent[s] as usize != s {
            rev.push(moves[self.via[s] as usize]);
            s = self.parent[s] as usize;
        }
        rev.reverse();
        Some(rev.into())
    }
}

/// Tools for one class: careful 3-cycles and, for classes with a
/// nontrivial rotation group, pair twists.
pub(crate) struct ClassKit {
    pub geom: Arc<Geometry>,
    pub ci: usize,
    pub members: Vec<u32>,
    local: HashMap<u32, usize>,
    moves: Vec<Move>,
    images: Vec<Vec<u16>>,
    p0: usize,
    w0: MoveSeq,
    fixed: PairTree,
    reach: PairTree,
    orient: OnceLock<std::result::Result<Arc<OrientKit>, String>>,
}

pub(crate) struct OrientKit {
    twists: Vec<MoveSeq>,
    free: PairTree,
}

type KitCache = Mutex<HashMap<(PuzzleParams, usize), Arc<ClassKit>>>;

fn cache() -> &'static KitCache {
    static CACHE: OnceLock<KitCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl ClassKit {
    /// Cached kit for class `ci`.
    pub fn shared(geom: &Arc<Geometry>, ci: usize) -> Result<Arc<ClassKit>> {
        let key = (geom.params(), ci);
        if let Some(k) = cache().lock().expect("kit cache").get(&key) {
            return Ok(k.clone());
        }
        let kit = Arc::new(ClassKit::build(geom, ci)?);
        Ok(cache().lock().expect("kit cache").entry(key).or_insert(kit).clone())
    }

    fn build(geom: &Arc<Geometry>, ci: usize) -> Result<ClassKit> {
        let info = geom.class(ci);
        if info.frame {
            return Err(Error::FrameClass);
        }
        let members = info.members.clone();
        if members.len() < 3 {
            return Err(Error::Solver(format!("class {} has fewer than three positions", info.id)));
        }
        let local: HashMap<u32, usize> = members.iter().enumerate().map(|(l, &p)| (p, l)).collect();
        let moves = all_moves(geom.params());
        let images: Vec<Vec<u16>> = moves
            .iter()
            .map(|mv| {
                members
                    .iter()
                    .map(|&p| {
                        let to = if mv.contains(geom.position(p)) { geom.transport(p, mv.i(), mv.j()) } else { p };
                        local[&to] as u16
                    })
                    .collect()
            })
            .collect();
        let solved = State::solved_for(geom);
        let w0 = base_cycle(geom, ci, &moves, &solved)
            .ok_or_else(|| Error::Solver(format!("no base 3-cycle for class {}", info.id)))?;
        let after = solved.apply_sequence(&w0)?;
        let diff = changed(&solved, &after);
        let p0 = local[&diff[0]];
        let where_is = after.locate();
        let p1 = local[&where_is[members[p0] as usize]];
        let p2 = local[&where_is[members[p1] as usize]];
        let allowed: Vec<usize> = (0..moves.len()).filter(|&mi| images[mi][p0] as usize == p0).collect();
        let fixed = PairTree::build(members.len(), (p1, p2), &images, &allowed);
        let all: Vec<usize> = (0..moves.len()).collect();
        let reach = PairTree::build(members.len(), (p0, p0), &images, &all);
        Ok(ClassKit {
            geom: geom.clone(),
            ci,
            members,
            local,
            moves,
            images,
            p0,
            w0,
            fixed,
            reach,
            orient: OnceLock::new(),
        })
    }

    pub fn local(&self, pos: u32) -> Option<usize> {
        self.local.get(&pos).copied()
    }

    /// 3-cycle `p0 → x → y → p0` on local indices.
    fn cycle_from_p0(&self, x: usize, y: usize) -> Option<MoveSeq> {
        if let Some(t) = self.fixed.path(&self.moves, x, y) {
            return Some(t.undo().then(&self.w0).then(&t));
        }
        let t = self.fixed.path(&self.moves, y, x)?;
        Some(t.undo().then(&self.w0.undo()).then(&t))
    }

    /// Careful 3-cycle moving the cubie at `a` to `b`, `b` to `c` and `c` to
    /// `a` (local indices); every other position keeps its cubie and pose.
    pub fn cycle(&self, a: usize, b: usize, c: usize) -> Result<MoveSeq> {
        let p = self.p0;
        let fail = || Error::Solver(format!("class {}: no transport for a 3-cycle", self.geom.class(self.ci).id));
        let seq = if a == p {
            self.cycle_from_p0(b, c)
        } else if b == p {
            self.cycle_from_p0(c, a)
        } else if c == p {
            self.cycle_from_p0(a, b)
        } else {
            // carry `a` onto `p0`, cycle there, carry back
            let u = self.reach.path(&self.moves, a, a).ok_or_else(fail)?.undo();
            let (ub, uc) = (self.carry(b, &u), self.carry(c, &u));
            self.cycle_from_p0(ub, uc).map(|w| u.clone().then(&w).then(&u.undo()))
        };
        seq.ok_or_else(fail)
    }

    /// Where the cubie at local `l` ends up after `seq`.
    fn carry(&self, l: usize, seq: &MoveSeq) -> usize {
        let mut p = self.members[l];
        for mv in seq {
            if mv.contains(self.geom.position(p)) {
                p = self.geom.transport(p, mv.i(), mv.j());
            }
        }
        self.local[&p]
    }

    pub fn orient_kit(&self) -> Result<Arc<OrientKit>> {
        self.orient
            .get_or_init(|| self.build_orient().map(Arc::new).map_err(|e| e.to_string()))
            .clone()
            .map_err(Error::Solver)
    }

    fn build_orient(&self) -> Result<OrientKit> {
        let info = self.geom.class(self.ci);
        let group = info.group;
        if info.id.m < 2 || group.is_trivial() {
            return Err(Error::NoOrientation(info.id.to_string()));
        }
        let atlas = self.geom.atlas(self.ci);
        let solved = State::solved_for(&self.geom);
        let p0 = self.members[self.p0];
        let eval = |seq: &MoveSeq| -> Option<(Perm, Vec<u32>)> {
            let s = solved.apply_sequence(seq).ok()?;
            if s.cubie_at(p0).home != p0 {
                return None;
            }
            let gamma = orientation_permutation(&atlas, &s, p0).ok()?;
            (!gamma.is_identity()).then(|| (gamma, changed(&solved, &s)))
        };
        let through: Vec<usize> =
            (0..self.moves.len()).filter(|&mi| self.moves[mi].contains(self.geom.position(p0))).collect();
        let mut cands: Vec<(MoveSeq, Perm, Vec<u32>)> = Vec::new();
        for &xi in &through {
            let x = MoveSeq::from(vec![self.moves[xi]]);
            for e in 1..=2 {
                if let Some((g, s)) = eval(&power(&x, e)) {
                    cands.push((power(&x, e), g, s));
                }
            }
        }
        for &xi in &through {
            let x = MoveSeq::from(vec![self.moves[xi]]);
            for y in &self.moves {
                let c = commutator(&x, &MoveSeq::from(vec![*y]));
                for e in 1..=6 {
                    let seq = power(&c, e);
                    let s = solved.apply_sequence(&seq)?;
                    if s.cubie_at(p0).home == p0 {
                        if let Some((g, supp)) = eval(&seq) {
                            cands.push((seq, g, supp));
                        }
                        break;
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = crate::orientation::axis_pairs(self.geom.params().n);
        let depth = if self.geom.params().n <= 4 { 4 } else { 3 };
        let mut stack: Vec<(Vec<Move>, u32)> = vec![(Vec::new(), p0)];
        while let Some((path, at)) = stack.pop() {
            if !path.is_empty() && at == p0 {
                let seq = MoveSeq::from(path.clone());
                if let Some((g, supp)) = eval(&seq) {
                    cands.push((seq, g, supp));
                }
                continue;
            }
            if path.len() == depth {
                continue;
            }
            for &(i, j) in &pairs {
                let mv = self.geom.move_through(at, i, j);
                if path.last().is_some_and(|l| *l == mv.inverse()) {
                    continue;
                }
                let mut next = path.clone();
                next.push(mv);
                stack.push((next, self.geom.transport(at, i, j)));
            }
        }
        cands.sort_by_key(|c| c.0.len());
        let len = self.members.len();
        let mut chosen = None;
        'pairs: for u in 0..len {
            for v in 0..len {
                if u == v || u == self.p0 || v == self.p0 {
                    continue;
                }
                let (pu, pv) = (self.members[u], self.members[v]);
                let mut gens: Vec<Perm> = Vec::new();
                let mut picked = Vec::new();
                let mut span: HashSet<Perm> = HashSet::from([Perm::identity(info.id.m)]);
                for (idx, (_, g, supp)) in cands.iter().enumerate() {
                    if span.contains(g) || supp.binary_search(&pu).is_ok() || supp.binary_search(&pv).is_ok() {
                        continue;
                    }
                    gens.push(g.clone());
                    picked.push(idx);
                    span = closure(&gens, info.id.m);
                    if span.len() as u64 == group.order() {
                        chosen = Some((u, v, picked));
                        break 'pairs;
                    }
                }
            }
        }
        let (u, v, picked) = chosen.ok_or_else(|| Error::Solver(format!("no twist library for class {}", info.id)))?;
        let q = self.cycle_from_p0(u, v).ok_or_else(|| Error::Solver("no 3-cycle for the twist library".into()))?;
        let mut twists = Vec::new();
        let mut partner = None;
        for idx in picked {
            let s = &cands[idx].0;
            let t = s.clone().then(&q).then(&s.undo()).then(&q.undo());
            let diff = changed(&solved, &solved.apply_sequence(&t)?);
            let other: Vec<u32> = diff.iter().copied().filter(|&x| x != p0).collect();
            if diff.len() != 2 || other.len() != 1 || partner.is_some_and(|p| p != other[0]) {
                return Err(Error::Solver(format!("twist for class {} is not a pair twist", info.id)));
            }
            partner = Some(other[0]);
            twists.push(t);
        }
        let partner = self.local[&partner.expect("at least one twist")];
        let all: Vec<usize> = (0..self.moves.len()).collect();
        let free = PairTree::build(len, (self.p0, partner), &self.images, &all);
        Ok(OrientKit { twists, free })
    }

    /// Sequences that twist only the cubies at local `x` and `y`, one per
    /// library twist.
    pub fn pair_twists(&self, x: usize, y: usize) -> Result<Vec<MoveSeq>> {
        let ok = self.orient_kit()?;
        if x == y {
            return Err(Error::ClassMismatch("pair twist needs two positions".into()));
        }
        let t = ok.free.path(&self.moves, x, y).ok_or_else(|| Error::Solver("pair not reachable".into()))?;
        let back = t.undo();
        Ok(ok.twists.iter().map(|tw| back.clone().then(tw).then(&t)).collect())
    }
}

/// The subgroup generated by `gens`.
pub(crate) fn closure(gens: &[Perm], m: usize) -> HashSet<Perm> {
    let id = Perm::identity(m);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then_after(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Shortest word `g_{i1} ∘ g_{i2} ∘ …` equal to `target`.
pub(crate) fn word_for(gens: &[Perm], target: &Perm) -> Option<Vec<usize>> {
    let id = Perm::identity(target.degree());
    let mut parent: HashMap<Perm, Option<(Perm, usize)>> = HashMap::from([(id.clone(), None)]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        if &p == target {
            let mut word = Vec::new();
            let mut cur = p;
            while let Some(Some((prev, gi))) = parent.get(&cur).cloned() {
                word.push(gi);
                cur = prev;
            }
            word.reverse();
            return Some(word);
        }
        for (gi, g) in gens.iter().enumerate() {
            let q = p.then_after(g);
            if !parent.contains_key(&q) {
                parent.insert(q.clone(), Some((p.clone(), gi)));
                queue.push_back(q);
            }
        }
    }
    None
}

/// Shortest words for every element of the generated subgroup.
pub(crate) fn all_words(gens: &[Perm], m: usize) -> HashMap<Perm, Vec<usize>> {
    let id = Perm::identity(m);
    let mut out: HashMap<Perm, Vec<usize>> = HashMap::from([(id.clone(), Vec::new())]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        let w = out[&p].clone();
        for (gi, g) in gens.iter().enumerate() {
            let q = p.then_after(g);
            if !out.contains_key(&q) {
                let mut w2 = w.clone();
                w2.push(gi);
                out.insert(q.clone(), w2);
                queue.push_back(q);
            }
        }
    }
    out
}

/// Searches for `[A, B]` whose supports meet in one position of the class
/// and whose effect is a 3-cycle of that class.
fn base_cycle(geom: &Geometry, ci: usize, moves: &[Move], solved: &State) -> Option<MoveSeq> {
    let info = geom.class(ci);
    let support = |seq: &MoveSeq| changed(solved, &solved.apply_sequence(seq).expect("valid moves"));
    let canon = geom.position(info.canonical).to_vec();
    let bs: Vec<(Move, Vec<u32>)> = moves
        .iter()
        .filter(|m| m.i() < m.j() && m.contains(&canon))
        .map(|m| (*m, support(&MoveSeq::from(vec![*m]))))
        .collect();
    let is_cycle = |w: &MoveSeq| {
        let s = solved.apply_sequence(w).expect("valid moves");
        let diff = changed(solved, &s);
        diff.len() == 3
            && diff
                .iter()
                .all(|&x| geom.class_index(x) == ci && s.cubie_at(x).home != x && diff.contains(&s.cubie_at(x).home))
    };
    let try_a = |a: &MoveSeq| {
        let sa = support(a);
        for (b, sb) in &bs {
            match single_common(&sa, sb) {
                Some(x) if geom.class_index(x) == ci => {}
                _ => continue,
            }
            let bq = MoveSeq::from(vec![*b]);
            let w = commutator(a, &bq);
            if is_cycle(&w) {
                return Some(w);
            }
        }
        None
    };
    let single: Vec<MoveSeq> = moves.iter().map(|m| MoveSeq::from(vec![*m])).collect();
    for a in &single {
        if let Some(w) = try_a(a) {
            return Some(w);
        }
    }
    for x in &single {
        for y in &single {
            if x.moves()[0].i() > x.moves()[0].j() && y.moves()[0].i() > y.moves()[0].j() {
                continue;
            }
            let conj = x.clone().then(y).then(&x.undo());
            if let Some(w) = try_a(&conj) {
                return Some(w);
            }
        }
    }
    for x in &single {
        for y in &single {
            if let Some(w) = try_a(&commutator(x, y)) {
                return Some(w);
            }
        }
    }
    None
}

/// Group membership helper for orientation targets.
pub(crate) fn check_in_group(group: RotationGroupKind, p: &Perm) -> Result<()> {
    if group.contains(p) {
        Ok(())
    } else {
        Err(Error::NotInGroup { group: group.to_string(), perm: p.to_string() })
    }
}
