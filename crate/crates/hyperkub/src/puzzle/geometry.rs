use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::classify::{self, ClassId, ClusterId};
use crate::error::{Error, Result};
use crate::group::{RotationGroupKind, SignedAxis, MAX_DIM};
use crate::orientation::{self, ReferenceAtlas};

use super::{Move, Position, PuzzleParams, MAX_CELLS};

const NONE: u32 = u32::MAX;

/// One class of external positions.
#[derive(Debug)]
pub struct ClassInfo {
    pub id: ClassId,
    /// Position indices, ascending.
    pub members: Vec<u32>,
    pub central: bool,
    pub frame: bool,
    pub group: RotationGroupKind,
    /// Index of the canonical position (or its `q = -1` counterpart).
    pub canonical: u32,
}

/// Precomputed tables for one `(n, k)`: external positions, their classes
/// and clusters, and lazily built reference atlases.
pub struct Geometry {
    params: PuzzleParams,
    stride: [usize; MAX_DIM],
    positions: Vec<Position>,
    lookup: Vec<u32>,
    class_index: Vec<u16>,
    classes: Vec<ClassInfo>,
    cluster_rep: Vec<u32>,
    atlases: Vec<OnceLock<Arc<ReferenceAtlas>>>,
}

impl std::fmt::Debug for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Geometry{}", self.params)
    }
}

fn cache() -> &'static Mutex<HashMap<PuzzleParams, Arc<Geometry>>> {
    static CACHE: OnceLock<Mutex<HashMap<PuzzleParams, Arc<Geometry>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Geometry {
    /// Shared, cached geometry for `params`.
    pub fn shared(params: PuzzleParams) -> Result<Arc<Geometry>> {
        if let Some(g) = cache().lock().expect("geometry cache").get(&params) {
            return Ok(g.clone());
        }
        let g = Arc::new(Geometry::build(params)?);
        let mut map = cache().lock().expect("geometry cache");
        Ok(map.entry(params).or_insert(g).clone())
    }

    fn build(params: PuzzleParams) -> Result<Geometry> {
        let (n, k) = (params.n, params.k);
        let cells = params
            .cell_count()
            .filter(|&c| c <= MAX_CELLS)
            .ok_or_else(|| Error::InvalidParams(format!("{params} has too many cells")))?;
        let mut stride = [0usize; MAX_DIM];
        let mut s = 1;
        for a in (0..n).rev() {
            stride[a] = s;
            s *= k;
        }
        let mut lookup = vec![NONE; cells];
        let mut positions = Vec::new();
        let mut coords = vec![0u8; n];
        for (raw, slot) in lookup.iter_mut().enumerate() {
            let mut r = raw;
            for a in (0..n).rev() {
                coords[a] = (r % k) as u8;
                r /= k;
            }
            if coords.iter().any(|&p| classify::is_boundary(params, p)) {
                *slot = positions.len() as u32;
                positions.push(coords.clone());
            }
        }

        let mut by_class: BTreeMap<ClassId, Vec<u32>> = BTreeMap::new();
        for (idx, pos) in positions.iter().enumerate() {
            by_class.entry(classify::class_of(params, pos)?).or_default().push(idx as u32);
        }
        let mut class_index = vec![0u16; positions.len()];
        let mut classes = Vec::with_capacity(by_class.len());
        for (ci, (id, members)) in by_class.into_iter().enumerate() {
            for &p in &members {
                class_index[p as usize] = ci as u16;
            }
            let canon = classify::canonical_position(params, &id);
            let canonical = lookup[raw_of(&stride, &canon)];
            classes.push(ClassInfo {
                central: classify::is_central(params, &id),
                frame: classify::is_frame(params, &id),
                group: classify::dependent_group(params, &id),
                canonical,
                id,
                members,
            });
        }

        let mut reps: HashMap<ClusterId, u32> = HashMap::new();
        let mut cluster_rep = vec![0u32; positions.len()];
        for (idx, pos) in positions.iter().enumerate() {
            let cid = classify::cluster_of(params, pos)?;
            cluster_rep[idx] = *reps.entry(cid).or_insert(idx as u32);
        }

        let atlases = (0..classes.len()).map(|_| OnceLock::new()).collect();
        Ok(Geometry { params, stride, positions, lookup, class_index, classes, cluster_rep, atlases })
    }

    pub fn params(&self) -> PuzzleParams {
        self.params
    }

    /// Number of external positions.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, idx: u32) -> &[u8] {
        &self.positions[idx as usize]
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn index_of(&self, pos: &[u8]) -> Option<u32> {
        if pos.len() != self.params.n || pos.iter().any(|&p| p as usize >= self.params.k) {
            return None;
        }
        let idx = self.lookup[raw_of(&self.stride, pos)];
        (idx != NONE).then_some(idx)
    }

    pub fn index_of_checked(&self, pos: &[u8]) -> Result<u32> {
        self.index_of(pos).ok_or_else(|| Error::InteriorPosition(pos.to_vec()))
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn class_index(&self, idx: u32) -> usize {
        self.class_index[idx as usize] as usize
    }

    pub fn class(&self, ci: usize) -> &ClassInfo {
        &self.classes[ci]
    }

    pub fn class_by_id(&self, id: &ClassId) -> Option<usize> {
        self.classes.iter().position(|c| &c.id == id)
    }

    /// The lexicographically smallest home in this position's cluster.
    pub fn cluster_rep(&self, idx: u32) -> u32 {
        self.cluster_rep[idx as usize]
    }

    pub fn cluster_id(&self, idx: u32) -> ClusterId {
        classify::cluster_of(self.params, self.position(idx)).expect("external position")
    }

    /// Outward facet normals of a position, ordered by axis.
    pub fn facets(&self, idx: u32) -> impl Iterator<Item = SignedAxis> + '_ {
        let k = self.params.k;
        self.position(idx)
            .iter()
            .enumerate()
            .filter(move |(_, &p)| p == 0 || p as usize == k - 1)
            .map(|(a, &p)| SignedAxis::new(a, p != 0))
    }

    /// `(from, to)` index pairs for every external cubie in the move's layer.
    pub fn layer_map(&self, mv: &Move, out: &mut Vec<(u32, u32)>) {
        out.clear();
        let k = self.params.k;
        let (i, j) = (mv.i(), mv.j());
        let mut base = 0;
        for a in 0..self.params.n {
            if a != i && a != j {
                base += mv.coord(a) as usize * self.stride[a];
            }
        }
        for a in 0..k {
            for b in 0..k {
                let from = self.lookup[base + a * self.stride[i] + b * self.stride[j]];
                if from == NONE {
                    continue;
                }
                let to = self.lookup[base + (k - 1 - b) * self.stride[i] + a * self.stride[j]];
                out.push((from, to));
            }
        }
    }

    /// Image of a single position under the quarter turn in plane `(i, j)`
    /// through that position.
    pub fn transport(&self, idx: u32, i: usize, j: usize) -> u32 {
        let pos = self.position(idx);
        let k = self.params.k;
        let (pi, pj) = (pos[i] as usize, pos[j] as usize);
        let raw = raw_of(&self.stride, pos) - pi * self.stride[i] - pj * self.stride[j]
            + (k - 1 - pj) * self.stride[i]
            + pi * self.stride[j];
        self.lookup[raw]
    }

    /// The move in plane `(i, j)` whose layer contains the position.
    pub fn move_through(&self, idx: u32, i: usize, j: usize) -> Move {
        Move::through(self.params, i, j, self.position(idx))
    }

    /// Reference atlas of class `ci`, built on first use.
    pub fn atlas(&self, ci: usize) -> Arc<ReferenceAtlas> {
        self.atlases[ci].get_or_init(|| Arc::new(orientation::transport_atlas(self, ci))).clone()
    }
}

fn raw_of(stride: &[usize; MAX_DIM], pos: &[u8]) -> usize {
    pos.iter().enumerate().map(|(a, &p)| p as usize * stride[a]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn external_counts() {
        for (n, k, count) in [(3, 3, 26), (4, 2, 16), (3, 7, 218), (3, 2, 8), (5, 3, 242)] {
            let g = Geometry::shared(PuzzleParams::new(n, k).unwrap()).unwrap();
            assert_eq!(g.len(), count, "({n},{k})");
        }
    }

    #[test]
    fn class_partition_covers_positions() {
        let g = Geometry::shared(PuzzleParams::new(3, 6).unwrap()).unwrap();
        let total: usize = g.classes().iter().map(|c| c.members.len()).sum();
        assert_eq!(total, g.len());
        let special: Vec<_> = g.classes().iter().filter(|c| c.id.q.is_some()).collect();
        assert_eq!(special.len(), 2);
        assert!(special.iter().all(|c| c.members.len() == 24));
    }

    #[test]
    fn canonical_index_belongs_to_class() {
        let g = Geometry::shared(PuzzleParams::new(4, 8).unwrap()).unwrap();
        for (ci, c) in g.classes().iter().enumerate() {
            assert_eq!(g.class_index(c.canonical), ci);
        }
    }
}
