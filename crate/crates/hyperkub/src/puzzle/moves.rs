use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{SignedPerm, MAX_DIM};

use super::PuzzleParams;

/// A quarter turn of one 2-layer: positions whose coordinates off the
/// plane `(i, j)` equal the slice turn so that `e_i → e_j`, `e_j → -e_i`.
///
/// Axes are zero-based here; the text notation is one-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Move {
    n: u8,
    i: u8,
    j: u8,
    /// Slice index per axis; entries for `i` and `j` are zero.
    coords: [u8; MAX_DIM],
}

impl Move {
    /// `slice` lists the indices of the other `n - 2` axes in ascending order.
    pub fn new(params: PuzzleParams, i: usize, j: usize, slice: &[u8]) -> Result<Move> {
        let n = params.n;
        if i >= n || j >= n || i == j {
            return Err(Error::MalformedMove(format!("axes ({}, {}) invalid for n={n}", i + 1, j + 1)));
        }
        if slice.len() != n - 2 {
            return Err(Error::MalformedMove(format!("slice needs {} entries, got {}", n - 2, slice.len())));
        }
        if slice.iter().any(|&v| v as usize >= params.k) {
            return Err(Error::MalformedMove(format!("slice {slice:?} out of range for k={}", params.k)));
        }
        let mut coords = [0u8; MAX_DIM];
        let mut it = slice.iter();
        for (a, c) in coords.iter_mut().enumerate().take(n) {
            if a != i && a != j {
                *c = *it.next().expect("length checked");
            }
        }
        Ok(Move { n: n as u8, i: i as u8, j: j as u8, coords })
    }

    /// The move in plane `(i, j)` whose layer contains `pos`.
    pub fn through(params: PuzzleParams, i: usize, j: usize, pos: &[u8]) -> Move {
        let mut coords = [0u8; MAX_DIM];
        coords[..params.n].copy_from_slice(pos);
        coords[i] = 0;
        coords[j] = 0;
        Move { n: params.n as u8, i: i as u8, j: j as u8, coords }
    }

    pub fn i(&self) -> usize {
        self.i as usize
    }

    pub fn j(&self) -> usize {
        self.j as usize
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn coord(&self, axis: usize) -> u8 {
        self.coords[axis]
    }

    pub fn slice(&self) -> Vec<u8> {
        (0..self.dim()).filter(|&a| a != self.i() && a != self.j()).map(|a| self.coords[a]).collect()
    }

    /// Same layer, opposite direction.
    pub fn inverse(&self) -> Move {
        Move { i: self.j, j: self.i, ..*self }
    }

    pub fn contains(&self, pos: &[u8]) -> bool {
        (0..self.dim()).all(|a| a == self.i() || a == self.j() || pos[a] == self.coords[a])
    }

    pub fn rotation(&self) -> SignedPerm {
        SignedPerm::quarter_turn(self.dim(), self.i(), self.j())
    }

    /// Layer identity (plane with sorted axes, slice) and the number of
    /// quarter turns this move makes in the sorted orientation.
    fn layer_key(&self) -> (LayerKey, u8) {
        if self.i < self.j {
            ((self.i, self.j, self.coords), 1)
        } else {
            ((self.j, self.i, self.coords), 3)
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slice: Vec<String> = self.slice().iter().map(|v| v.to_string()).collect();
        write!(f, "t({},{})[{}]", self.i + 1, self.j + 1, slice.join(","))
    }
}

/// Plane with sorted axes and the slice coordinates.
type LayerKey = (u8, u8, [u8; MAX_DIM]);

/// An ordered sequence of moves.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct MoveSeq {
    moves: Vec<Move>,
}

impl From<Vec<Move>> for MoveSeq {
    fn from(moves: Vec<Move>) -> Self {
        MoveSeq { moves }
    }
}

impl FromIterator<Move> for MoveSeq {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        MoveSeq { moves: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a MoveSeq {
    type Item = &'a Move;
    type IntoIter = std::slice::Iter<'a, Move>;
    fn into_iter(self) -> Self::IntoIter {
        self.moves.iter()
    }
}

impl MoveSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, m: Move) {
        self.moves.push(m);
    }

    pub fn extend(&mut self, other: &MoveSeq) {
        self.moves.extend_from_slice(&other.moves);
    }

    pub fn then(mut self, other: &MoveSeq) -> MoveSeq {
        self.extend(other);
        self
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Move> {
        self.moves.iter()
    }

    /// Inverse using opposite-direction moves (same effect as
    /// [`invert_sequence`], a third of the length).
    pub fn undo(&self) -> MoveSeq {
        self.moves.iter().rev().map(Move::inverse).collect()
    }

    /// Merges adjacent turns of the same layer and drops full turns.
    pub fn simplified(&self) -> MoveSeq {
        // (layer key, quarter turns mod 4, representative move)
        let mut stack: Vec<(LayerKey, u8, Move)> = Vec::new();
        for m in &self.moves {
            let (key, q) = m.layer_key();
            match stack.last_mut() {
                Some((k, count, _)) if *k == key => {
                    *count = (*count + q) % 4;
                    if *count == 0 {
                        stack.pop();
                    }
                }
                _ => {
                    let canon = if m.i < m.j { *m } else { m.inverse() };
                    stack.push((key, q, canon));
                }
            }
        }
        let mut out = MoveSeq::new();
        for (_, count, canon) in stack {
            match count {
                1 => out.push(canon),
                2 => {
                    out.push(canon);
                    out.push(canon);
                }
                3 => out.push(canon.inverse()),
                _ => {}
            }
        }
        out
    }

    /// Whitespace-separated text notation; runs of one move are written
    /// with `^2` or `'`.
    pub fn to_notation(&self) -> String {
        let mut tokens = Vec::new();
        let mut t = 0;
        while t < self.moves.len() {
            let m = self.moves[t];
            let mut run = 1;
            while t + run < self.moves.len() && self.moves[t + run] == m {
                run += 1;
            }
            t += run;
            // full turns are the identity
            match run % 4 {
                1 => tokens.push(m.to_string()),
                2 => tokens.push(format!("{m}^2")),
                3 => tokens.push(format!("{m}'")),
                _ => {}
            }
        }
        tokens.join(" ")
    }

    pub fn parse(params: PuzzleParams, text: &str) -> Result<MoveSeq> {
        let mut out = MoveSeq::new();
        for token in text.split_whitespace() {
            let (body, reps) = if let Some(b) = token.strip_suffix('\'') {
                (b, 3)
            } else if let Some((b, e)) = token.split_once('^') {
                let e: usize = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {token}")))?;
                (b, e % 4)
            } else {
                (token, 1)
            };
            let m = parse_move(params, body)?;
            for _ in 0..reps {
                out.push(m);
            }
        }
        Ok(out)
    }
}

fn parse_move(params: PuzzleParams, body: &str) -> Result<Move> {
    let bad = || Error::Parse(format!("expected t(i,j)[v,..], got {body:?}"));
    let rest = body.strip_prefix("t(").ok_or_else(bad)?;
    let (axes, rest) = rest.split_once(")[").ok_or_else(bad)?;
    let slice = rest.strip_suffix(']').ok_or_else(bad)?;
    let (i, j) = axes.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    let slice: Vec<u8> = if slice.trim().is_empty() {
        Vec::new()
    } else {
        slice.split(',').map(|v| v.trim().parse::<u8>().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if i == 0 || j == 0 {
        return Err(bad());
    }
    Move::new(params, i - 1, j - 1, &slice)
}

/// Reversed sequence with every move repeated three times.
pub fn invert_sequence(q: &MoveSeq) -> MoveSeq {
    let mut out = MoveSeq::new();
    for m in q.moves.iter().rev() {
        for _ in 0..3 {
            out.push(*m);
        }
    }
    out
}

/// The `k^(t-2)` commuting atomic moves that rotate the `t`-layer with
/// free axes `free` and the remaining axes pinned by `fixed`.
pub fn expand_layer_move(
    params: PuzzleParams,
    free: &[usize],
    fixed: &[(usize, u8)],
    i: usize,
    j: usize,
) -> Result<MoveSeq> {
    let n = params.n;
    let mut seen = vec![false; n];
    for &a in free.iter().chain(fixed.iter().map(|(a, _)| a)) {
        if a >= n || seen[a] {
            return Err(Error::MalformedMove(format!("axis {} repeated or out of range", a + 1)));
        }
        seen[a] = true;
    }
    if seen.iter().any(|s| !s) || !free.contains(&i) || !free.contains(&j) || i == j {
        return Err(Error::MalformedMove("inconsistent axis partition".into()));
    }
    let others: Vec<usize> = free.iter().copied().filter(|&a| a != i && a != j).collect();
    let mut coords = vec![0u8; n];
    for &(a, v) in fixed {
        if v as usize >= params.k {
            return Err(Error::MalformedMove(format!("index {v} out of range")));
        }
        coords[a] = v;
    }
    let total = params.k.pow(others.len() as u32);
    let mut out = MoveSeq::new();
    for mut code in 0..total {
        for &a in others.iter().rev() {
            coords[a] = (code % params.k) as u8;
            code /= params.k;
        }
        out.push(Move::through(params, i, j, &coords));
    }
    Ok(out)
}

/// `len` random quarter turns from a seeded generator.
pub fn seeded_moves(params: PuzzleParams, len: usize, seed: u64) -> MoveSeq {
    use rand::SeedableRng;
    random_moves(params, len, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
}

/// `len` uniformly random quarter turns.
pub fn random_moves<R: Rng>(params: PuzzleParams, len: usize, rng: &mut R) -> MoveSeq {
    let n = params.n;
    let mut coords = vec![0u8; n];
    (0..len)
        .map(|_| {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            for c in coords.iter_mut() {
                *c = rng.gen_range(0..params.k) as u8;
            }
            Move::through(params, i, j, &coords)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, k: usize) -> PuzzleParams {
        PuzzleParams::new(n, k).unwrap()
    }

    #[test]
    fn notation_round_trip() {
        let params = p(4, 3);
        let m = Move::new(params, 0, 2, &[1, 2]).unwrap();
        assert_eq!(m.to_string(), "t(1,3)[1,2]");
        let seq = MoveSeq::from(vec![m, m, m.inverse(), m, m, m]);
        let text = seq.to_notation();
        assert_eq!(text, "t(1,3)[1,2]^2 t(3,1)[1,2] t(1,3)[1,2]'");
        assert_eq!(MoveSeq::parse(params, &text).unwrap(), seq);
        assert!(MoveSeq::parse(params, "t(1,1)[0,0]").is_err());
        assert!(MoveSeq::parse(params, "t(1,2)[0]").is_err());
        assert!(MoveSeq::parse(params, "u(1,2)[0,0]").is_err());
    }

    #[test]
    fn inversions() {
        let params = p(3, 3);
        let m = Move::new(params, 0, 1, &[0]).unwrap();
        assert!(invert_sequence(&MoveSeq::new()).is_empty());
        assert_eq!(invert_sequence(&MoveSeq::from(vec![m])), MoveSeq::from(vec![m, m, m]));
    }

    #[test]
    fn simplify_merges() {
        let params = p(3, 3);
        let m = Move::new(params, 0, 1, &[0]).unwrap();
        let other = Move::new(params, 1, 2, &[0]).unwrap();
        let seq = MoveSeq::from(vec![m, m, other, other.inverse(), m, m]);
        assert!(seq.simplified().is_empty());
        let seq = MoveSeq::from(vec![m, m, m]);
        assert_eq!(seq.simplified(), MoveSeq::from(vec![m.inverse()]));
    }

    #[test]
    fn layer_expansion_sizes() {
        let params = p(4, 3);
        let seq = expand_layer_move(params, &[0, 1, 2], &[(3, 0)], 0, 1).unwrap();
        assert_eq!(seq.len(), 3);
        let single = expand_layer_move(p(3, 3), &[0, 1], &[(2, 0)], 0, 1).unwrap();
        assert_eq!(single.len(), 1);
        assert!(expand_layer_move(params, &[0, 1], &[(3, 0)], 0, 1).is_err());
    }
}
