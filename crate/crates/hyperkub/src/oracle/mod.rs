//! Brute-force ground truth: position orbits, pose groups and the full state
//! space of the `(3,2)` cube. These searches work on raw coordinates and
//! poses and do not use the class or orientation machinery they check.

mod pocket;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::classify::{canonical_position, ClassId};
use crate::error::{Error, Result};
use crate::group::{Perm, SignedAxis, SignedPerm};
use crate::puzzle::{Cubie, Geometry, Position, PuzzleParams, State};

pub use pocket::{full_state_bfs, pocket_index, verify_completeness_small, PocketReport, VerifyReport, POCKET_TOTAL};

/// Default memory cap for the oracle searches (4 GiB).
pub const DEFAULT_MEM_CAP: u64 = 4 << 30;

/// One orbit of a breadth-first search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub seed: String,
    pub size: u64,
    pub depth: u32,
    /// Members, ascending; empty when the search only counts.
    pub members: Vec<Position>,
}

impl OrbitReport {
    pub fn contains(&self, pos: &[u8]) -> bool {
        self.members.binary_search_by(|p| p.as_slice().cmp(pos)).is_ok()
    }
}

fn is_external(params: PuzzleParams, pos: &[u8]) -> bool {
    pos.iter().any(|&p| p == 0 || p as usize == params.k - 1)
}

/// Where the quarter turn in plane `(i, j)` carries a position.
fn turn(params: PuzzleParams, pos: &[u8], i: usize, j: usize) -> Position {
    let mut out = pos.to_vec();
    out[i] = params.opposite(pos[j]);
    out[j] = pos[i];
    out
}

/// All positions reachable from `start` by quarter turns of layers through it.
pub fn cubie_orbit_bfs(params: PuzzleParams, start: &[u8]) -> Result<OrbitReport> {
    if start.len() != params.n || start.iter().any(|&p| p as usize >= params.k) || !is_external(params, start) {
        return Err(Error::InteriorPosition(start.to_vec()));
    }
    let n = params.n;
    let mut depth_of: HashMap<Position, u32> = HashMap::from([(start.to_vec(), 0)]);
    let mut queue = VecDeque::from([start.to_vec()]);
    let mut depth = 0;
    while let Some(x) = queue.pop_front() {
        let d = depth_of[&x];
        depth = depth.max(d);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let y = turn(params, &x, i, j);
                if !depth_of.contains_key(&y) {
                    depth_of.insert(y.clone(), d + 1);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut members: Vec<Position> = depth_of.into_keys().collect();
    members.sort();
    Ok(OrbitReport { seed: format!("{start:?}"), size: members.len() as u64, depth, members })
}

fn external_positions(params: PuzzleParams) -> Result<Vec<Position>> {
    let cells = params.cell_count().ok_or_else(|| Error::Unsupported(format!("{params} is too large")))?;
    let mut out = Vec::new();
    for idx in 0..cells {
        let mut rest = idx;
        let mut pos = vec![0u8; params.n];
        for a in (0..params.n).rev() {
            pos[a] = (rest % params.k) as u8;
            rest /= params.k;
        }
        if is_external(params, &pos) {
            out.push(pos);
        }
    }
    Ok(out)
}

/// Partition of all external positions into transport orbits, each orbit
/// sorted, orbits ordered by their smallest member.
pub fn position_partition(params: PuzzleParams) -> Result<Vec<Vec<Position>>> {
    let all = external_positions(params)?;
    let mut seen: HashSet<Position> = HashSet::with_capacity(all.len());
    let mut orbits = Vec::new();
    for p in &all {
        if seen.contains(p) {
            continue;
        }
        let orbit = cubie_orbit_bfs(params, p)?;
        seen.extend(orbit.members.iter().cloned());
        orbits.push(orbit.members);
    }
    Ok(orbits)
}

/// Orientation-face permutations seen at the canonical position of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoseGroupReport {
    pub class: ClassId,
    /// Number of distinct poses of the canonical cubie back at its position.
    pub stabilizer_poses: usize,
    /// Distinct induced permutations of the `m` facets, as 0-based images.
    pub face_perms: BTreeSet<Vec<usize>>,
    pub visited: usize,
}

impl PoseGroupReport {
    pub fn order(&self) -> usize {
        self.face_perms.len()
    }

    pub fn perms(&self) -> Vec<Perm> {
        self.face_perms.iter().map(|p| Perm::from_images(p).expect("facet bijection")).collect()
    }
}

fn facet_normals(params: PuzzleParams, pos: &[u8]) -> Vec<SignedAxis> {
    pos.iter()
        .enumerate()
        .filter(|(_, &p)| p == 0 || p as usize == params.k - 1)
        .map(|(a, &p)| SignedAxis::new(a, p != 0))
        .collect()
}

/// Breadth-first search over (position, pose) pairs of one cubie, starting
/// at the canonical position with the identity pose.
pub fn pose_group_bfs(params: PuzzleParams, class: &ClassId) -> Result<PoseGroupReport> {
    if class.m < 2 {
        return Err(Error::NoOrientation(class.to_string()));
    }
    let n = params.n;
    let p = canonical_position(params, class);
    let facets = facet_normals(params, &p);
    let start = (p.clone(), SignedPerm::identity(n));
    let mut seen: HashSet<(Position, SignedPerm)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut at_home = Vec::new();
    while let Some((x, r)) = queue.pop_front() {
        if x == p {
            at_home.push(r);
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let next = (turn(params, &x, i, j), SignedPerm::quarter_turn(n, i, j).compose(&r));
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let face_perms = at_home
        .iter()
        .map(|r| {
            facets.iter().map(|&f| facets.iter().position(|&g| g == r.apply(f)).expect("pose keeps facets")).collect()
        })
        .collect();
    Ok(PoseGroupReport { class: class.clone(), stabilizer_poses: at_home.len(), face_perms, visited: seen.len() })
}

/// Every rotation of `n`-space as a signed permutation with determinant 1.
pub fn rotations(n: usize) -> Vec<SignedPerm> {
    let mut out = Vec::new();
    for p in Perm::all(n) {
        let perm = p.images();
        for mask in 0..1u32 << n {
            let signs: Vec<i8> = (0..n).map(|a| if mask >> a & 1 == 1 { -1 } else { 1 }).collect();
            let r = SignedPerm::new(&perm, &signs).expect("valid signed permutation");
            if r.det() == 1 {
                out.push(r);
            }
        }
    }
    out
}

/// A uniformly random class-preserving reassembly of the solved cube.
pub fn random_reassembly<R: Rng>(params: PuzzleParams, rng: &mut R) -> Result<State> {
    let geom = Geometry::shared(params)?;
    let rots = rotations(params.n);
    let mut slots = vec![Cubie { home: 0, pose: SignedPerm::identity(params.n) }; geom.len()];
    let mut cache: BTreeMap<(Vec<SignedAxis>, Vec<SignedAxis>), Vec<SignedPerm>> = BTreeMap::new();
    for class in geom.classes() {
        let mut homes = class.members.clone();
        homes.shuffle(rng);
        for (&pos, &home) in class.members.iter().zip(&homes) {
            let from: Vec<SignedAxis> = geom.facets(home).collect();
            let to: Vec<SignedAxis> = geom.facets(pos).collect();
            let options = cache.entry((from.clone(), to.clone())).or_insert_with(|| {
                rots.iter().copied().filter(|r| from.iter().all(|&f| to.contains(&r.apply(f)))).collect()
            });
            let pose = *options.choose(rng).expect("some rotation maps the facets");
            slots[pos as usize] = Cubie { home, pose };
        }
    }
    State::from_slots(geom, slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{class_of, dependent_group};

    fn params(n: usize, k: usize) -> PuzzleParams {
        PuzzleParams::new(n, k).unwrap()
    }

    #[test]
    fn special_orbit_is_one_half() {
        let p = params(3, 6);
        let orbit = cubie_orbit_bfs(p, &[0, 1, 2]).unwrap();
        assert_eq!(orbit.size, 24);
        assert!(!orbit.contains(&[5, 1, 2]));
        let p = params(3, 5);
        let orbit = cubie_orbit_bfs(p, &[0, 1, 2]).unwrap();
        assert_eq!(orbit.size, 24);
        assert!(orbit.contains(&[4, 1, 2]));
        assert_eq!(cubie_orbit_bfs(params(3, 3), &[0, 0, 0]).unwrap().size, 8);
        assert!(cubie_orbit_bfs(params(3, 3), &[1, 1, 1]).is_err());
    }

    #[test]
    fn partition_matches_classes() {
        for (n, k) in [(3, 3), (3, 6), (4, 4)] {
            let p = params(n, k);
            for orbit in position_partition(p).unwrap() {
                let id = class_of(p, &orbit[0]).unwrap();
                assert!(orbit.iter().all(|x| class_of(p, x).unwrap() == id));
                let geom = Geometry::shared(p).unwrap();
                assert_eq!(geom.class(geom.class_by_id(&id).unwrap()).members.len(), orbit.len());
            }
        }
    }

    #[test]
    fn corner_group_is_a3() {
        let p = params(3, 3);
        let id = ClassId::new(3, vec![]);
        let r = pose_group_bfs(p, &id).unwrap();
        assert_eq!(r.order(), 3);
        let mut expected: Vec<Perm> = dependent_group(p, &id).elements();
        expected.sort();
        let mut got = r.perms();
        got.sort();
        assert_eq!(got, expected);
        assert!(pose_group_bfs(p, &ClassId::new(1, vec![1, 1])).is_err());
    }

    #[test]
    fn rotation_count() {
        assert_eq!(rotations(3).len(), 24);
        assert_eq!(rotations(4).len(), 192);
    }

    #[test]
    fn reassembly_is_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let s = random_reassembly(params(3, 4), &mut rng).unwrap();
        assert!(s.validate().is_empty());
    }
}
