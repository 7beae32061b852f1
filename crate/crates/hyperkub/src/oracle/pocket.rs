//! Exhaustive search of the `(3,2)` cube.
//!
//! Assemblies are taken modulo whole-cube rotation by fixing corner 0 at
//! the origin with the identity pose; a whole-cube rotation is a pair of
//! parallel layer turns, so this does not merge orbits. The remaining seven
//! corners are encoded as a position permutation and, per corner, the axis
//! carrying its home axis-0 facet. That axis fixes the pose, because the
//! facets of a corner are all three axes and the pose has determinant 1.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::{SignedAxis, SignedPerm};
use crate::invariants::reachable;
use crate::puzzle::{random_moves, PuzzleParams, State};

use super::random_reassembly;

const CORNERS: usize = 7;
const ORIENTS: u32 = 2187;
const PERMS: u32 = 5040;

/// Assemblies with corner 0 fixed: `7! · 3^7`.
pub const POCKET_TOTAL: u32 = PERMS * ORIENTS;

/// Corner positions `x·4 + y·2 + z`; slots `1..8` hold corners `1..8`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Pocket {
    pos: [u8; CORNERS],
    axis: [u8; CORNERS],
}

fn rank(pos: &[u8; CORNERS]) -> u32 {
    let mut r = 0u32;
    for a in 0..CORNERS {
        let smaller = pos[a + 1..].iter().filter(|&&b| b < pos[a]).count() as u32;
        r = r * (CORNERS - a) as u32 + smaller;
    }
    r
}

fn unrank(mut r: u32) -> [u8; CORNERS] {
    let mut digits = [0u32; CORNERS];
    for a in (0..CORNERS).rev() {
        let base = (CORNERS - a) as u32;
        digits[a] = r % base;
        r /= base;
    }
    let mut free: Vec<u8> = (1..=CORNERS as u8).collect();
    let mut out = [0u8; CORNERS];
    for a in 0..CORNERS {
        out[a] = free.remove(digits[a] as usize);
    }
    out
}

impl Pocket {
    fn solved() -> Self {
        Pocket { pos: [1, 2, 3, 4, 5, 6, 7], axis: [0; CORNERS] }
    }

    fn encode(&self) -> u32 {
        let ori = self.axis.iter().rev().fold(0u32, |acc, &a| acc * 3 + a as u32);
        rank(&self.pos) * ORIENTS + ori
    }

    fn decode(idx: u32) -> Self {
        let mut ori = idx % ORIENTS;
        let mut axis = [0u8; CORNERS];
        for a in axis.iter_mut() {
            *a = (ori % 3) as u8;
            ori /= 3;
        }
        Pocket { pos: unrank(idx / ORIENTS), axis }
    }

    /// Quarter turn in plane `(i, j)` of the layer away from the origin.
    fn turn(&self, i: usize, j: usize) -> Self {
        let t = 3 - i - j;
        let mut out = *self;
        for c in 0..CORNERS {
            let p = self.pos[c];
            let bit = |a: usize| (p >> (2 - a)) & 1;
            if bit(t) == 0 {
                continue;
            }
            let mut q = [bit(0), bit(1), bit(2)];
            q[i] = 1 - bit(j);
            q[j] = bit(i);
            out.pos[c] = q[0] << 2 | q[1] << 1 | q[2];
            let a = self.axis[c] as usize;
            out.axis[c] = if a == i {
                j as u8
            } else if a == j {
                i as u8
            } else {
                a as u8
            };
        }
        out
    }
}

const TURNS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];

/// Orbits of the full search.
#[derive(Clone, Debug)]
pub struct PocketReport {
    pub orbit_sizes: Vec<u64>,
    pub depths: Vec<u32>,
    pub total: u64,
    labels: Vec<u8>,
}

impl PocketReport {
    /// Orbit number (from 0) of an encoded assembly.
    pub fn orbit_of(&self, idx: u32) -> usize {
        self.labels[idx as usize] as usize - 1
    }
}

fn needed_bytes() -> u64 {
    let total = POCKET_TOTAL as u64;
    total + total / 8 + 2 * total
}

fn bfs_from(seed: u32, label: u8, labels: &mut [u8], visited: &[AtomicU64], exec: Exec) -> (u64, u32) {
    let claim = |idx: u32| {
        let bit = 1u64 << (idx % 64);
        visited[(idx / 64) as usize].fetch_or(bit, Ordering::Relaxed) & bit == 0
    };
    claim(seed);
    labels[seed as usize] = label;
    let mut frontier = vec![seed];
    let mut size = 1u64;
    let mut depth = 0;
    loop {
        let mut next = exec.flat_map_chunks(&frontier, 1 << 12, |chunk| {
            let mut out = Vec::new();
            for &x in chunk {
                let s = Pocket::decode(x);
                for &(i, j) in &TURNS {
                    let y = s.turn(i, j).encode();
                    if claim(y) {
                        out.push(y);
                    }
                }
            }
            out
        });
        if next.is_empty() {
            return (size, depth);
        }
        next.sort_unstable();
        for &y in &next {
            labels[y as usize] = label;
        }
        size += next.len() as u64;
        depth += 1;
        frontier = next;
    }
}

/// Labels every assembly with its orbit: first the solved orbit, then the
/// orbit of corner 1 twisted in place, then whatever remains.
pub fn full_state_bfs(exec: Exec, mem_cap: u64) -> Result<PocketReport> {
    let needed = needed_bytes();
    if needed > mem_cap {
        return Err(Error::MemoryCap { cap: mem_cap, needed });
    }
    let total = POCKET_TOTAL as usize;
    let mut labels = vec![0u8; total];
    let visited: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let mut twisted = Pocket::solved();
    twisted.axis[0] = 1;
    let mut seeds = [Pocket::solved().encode(), twisted.encode()].into_iter();
    let mut orbit_sizes = Vec::new();
    let mut depths = Vec::new();
    let mut scan = 0usize;
    loop {
        let seed = match seeds.next() {
            Some(s) if labels[s as usize] != 0 => continue,
            Some(s) => s,
            None => {
                while scan < total && labels[scan] != 0 {
                    scan += 1;
                }
                if scan == total {
                    break;
                }
                scan as u32
            }
        };
        let (size, depth) = bfs_from(seed, orbit_sizes.len() as u8 + 1, &mut labels, &visited, exec);
        orbit_sizes.push(size);
        depths.push(depth);
    }
    Ok(PocketReport { orbit_sizes, depths, total: total as u64, labels })
}

fn corner_code(pos: &[u8]) -> u8 {
    pos[0] << 2 | pos[1] << 1 | pos[2]
}

/// Encodes a `(3,2)` state after rotating corner 0 back to the origin.
pub fn pocket_index(state: &State) -> Result<u32> {
    let p = state.params();
    if p != PuzzleParams::new(3, 2)? {
        return Err(Error::Unsupported(format!("exhaustive search needs (3,2), got {p}")));
    }
    let geom = state.geometry();
    let locate = |home: u8| {
        (0..geom.len() as u32)
            .find(|&i| corner_code(geom.position(state.cubie_at(i).home)) == home)
            .expect("all corners")
    };
    let w: SignedPerm = state.cubie_at(locate(0)).pose.inverse();
    let rotate = |pos: &[u8]| {
        let mut q = [0u8; 3];
        for (b, &x) in pos.iter().enumerate() {
            let v = w.apply(SignedAxis::new(b, true));
            let flipped = if v.positive { x } else { 1 - x };
            q[v.axis as usize] = flipped;
        }
        corner_code(&q)
    };
    let mut s = Pocket::solved();
    for idx in 0..geom.len() as u32 {
        let c = state.cubie_at(idx);
        let home = corner_code(geom.position(c.home));
        let at = rotate(geom.position(idx));
        if home == 0 {
            debug_assert_eq!(at, 0);
            continue;
        }
        let pose = w.compose(&c.pose);
        s.pos[home as usize - 1] = at;
        s.axis[home as usize - 1] = pose.apply(SignedAxis::new(0, true)).axis;
    }
    Ok(s.encode())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub samples: usize,
    pub same_orbit: usize,
    pub agreements: usize,
    pub mismatches: Vec<String>,
}

/// Compares `reachable` with orbit membership on random pairs; even samples
/// pair a reassembly with a scramble of itself, odd samples pair two
/// independent reassemblies.
pub fn verify_completeness_small(report: &PocketReport, samples: usize, seed: u64) -> Result<VerifyReport> {
    let params = PuzzleParams::new(3, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = VerifyReport { samples, same_orbit: 0, agreements: 0, mismatches: Vec::new() };
    for t in 0..samples {
        let a = random_reassembly(params, &mut rng)?;
        let b = if t % 2 == 0 {
            a.apply_sequence(&random_moves(params, 60, &mut rng))?
        } else {
            random_reassembly(params, &mut rng)?
        };
        let by_search = report.orbit_of(pocket_index(&a)?) == report.orbit_of(pocket_index(&b)?);
        let by_invariants = reachable(&a, &b)?;
        out.same_orbit += usize::from(by_search);
        if by_search == by_invariants {
            out.agreements += 1;
        } else {
            out.mismatches.push(format!("sample {t}: search {by_search}, invariants {by_invariants}"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::Move;

    #[test]
    fn rank_round_trip() {
        for r in [0, 1, 77, 5039] {
            assert_eq!(rank(&unrank(r)), r);
        }
        let s = Pocket { pos: [3, 1, 2, 7, 6, 5, 4], axis: [0, 1, 2, 0, 1, 2, 2] };
        assert_eq!(Pocket::decode(s.encode()), s);
    }

    #[test]
    fn turns_have_order_four() {
        let s = Pocket::solved();
        for &(i, j) in &TURNS {
            let mut t = s;
            for _ in 0..4 {
                t = t.turn(i, j);
            }
            assert_eq!(t, s);
            assert_ne!(s.turn(i, j), s);
        }
    }

    #[test]
    fn index_ignores_whole_cube_rotation() {
        let p = PuzzleParams::new(3, 2).unwrap();
        let s = State::solved(p).unwrap();
        let both = s
            .apply_move(&Move::new(p, 0, 1, &[0]).unwrap())
            .unwrap()
            .apply_move(&Move::new(p, 0, 1, &[1]).unwrap())
            .unwrap();
        assert_eq!(pocket_index(&both).unwrap(), pocket_index(&s).unwrap());
        let one = s.apply_move(&Move::new(p, 0, 1, &[0]).unwrap()).unwrap();
        let other = s.apply_move(&Move::new(p, 1, 0, &[1]).unwrap()).unwrap();
        assert_eq!(pocket_index(&one).unwrap(), pocket_index(&other).unwrap());
    }

    #[test]
    fn full_search_has_three_orbits() {
        let r = full_state_bfs(Exec::default(), super::super::DEFAULT_MEM_CAP).unwrap();
        assert_eq!(r.orbit_sizes, vec![3_674_160; 3]);
        assert_eq!(r.total, 11_022_480);
        let v = verify_completeness_small(&r, 20, 1).unwrap();
        assert!(v.mismatches.is_empty(), "{:?}", v.mismatches);
        assert!(v.same_orbit >= 10);
    }

    #[test]
    fn memory_cap_is_checked() {
        assert!(matches!(full_state_bfs(Exec::Sequential, 1 << 20), Err(Error::MemoryCap { .. })));
    }
}
