//! Reference poses, orientation permutations `φ`, move transitions `α` and
//! the simplified orientation bit of cluster members.
//!
//! Orientation face `l` of a class is the facet `-e_l` at the canonical
//! position `(0,…,0, j_1,…)`. A pose `M` of the canonical cubie permutes
//! these facets; `face_perm(M)` records `l ↦ l'` where `M(-e_l) = -e_{l'}`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::classify::ClassId;
use crate::error::{Error, Result};
use crate::group::{Perm, SignedAxis, SignedPerm};
use crate::puzzle::{Geometry, Move, PuzzleParams, State};

/// First-visit transport poses from the canonical position to every
/// position of one class.
#[derive(Debug, Clone)]
pub struct ReferenceAtlas {
    class: ClassId,
    class_index: usize,
    m: usize,
    root: u32,
    poses: HashMap<u32, SignedPerm>,
}

impl ReferenceAtlas {
    pub fn class(&self) -> &ClassId {
        &self.class
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    /// Number of orientation faces.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn get(&self, idx: u32) -> Option<&SignedPerm> {
        self.poses.get(&idx)
    }

    /// Reference pose `A_x`. Panics outside the class.
    pub fn pose(&self, idx: u32) -> SignedPerm {
        self.poses[&idx]
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    /// Positions covered, ascending.
    pub fn domain(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.poses.keys().copied().collect();
        d.sort_unstable();
        d
    }
}

/// Ordered axis pairs `(i, j)`, `i != j`, lexicographic.
pub fn axis_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// BFS transport atlas for any class (orientation itself needs `m >= 2`).
pub(crate) fn transport_atlas(geom: &Geometry, ci: usize) -> ReferenceAtlas {
    let info = geom.class(ci);
    let n = geom.params().n;
    let root = info.canonical;
    let mut poses = HashMap::with_capacity(info.members.len());
    poses.insert(root, SignedPerm::identity(n));
    let mut queue = VecDeque::from([root]);
    let pairs = axis_pairs(n);
    while let Some(x) = queue.pop_front() {
        let ax = poses[&x];
        for &(i, j) in &pairs {
            let y = geom.transport(x, i, j);
            if y == x || poses.contains_key(&y) {
                continue;
            }
            poses.insert(y, SignedPerm::quarter_turn(n, i, j).compose(&ax));
            queue.push_back(y);
        }
    }
    ReferenceAtlas { class: info.id.clone(), class_index: ci, m: info.id.m, root, poses }
}

pub fn build_reference_atlas(params: PuzzleParams, class: &ClassId) -> Result<Arc<ReferenceAtlas>> {
    if class.m < 2 {
        return Err(Error::NoOrientation(class.to_string()));
    }
    let geom = Geometry::shared(params)?;
    let ci = geom.class_by_id(class).ok_or_else(|| Error::ClassMismatch(format!("no class {class} in {params}")))?;
    Ok(geom.atlas(ci))
}

/// Permutation of the canonical orientation faces induced by `M`.
pub fn face_perm(m: usize, mat: &SignedPerm) -> Perm {
    let images: Vec<usize> = (0..m)
        .map(|l| {
            let v = mat.apply(SignedAxis::new(l, false));
            debug_assert!(!v.positive && (v.axis as usize) < m, "pose does not fix the canonical facets");
            v.axis as usize
        })
        .collect();
    Perm::from_images(&images).expect("facet bijection")
}

fn check_member(atlas: &ReferenceAtlas, state: &State, idx: u32) -> Result<()> {
    if atlas.m < 2 {
        return Err(Error::NoOrientation(atlas.class.to_string()));
    }
    let g = state.geometry();
    if idx as usize >= g.len() || g.class_index(idx) != atlas.class_index || atlas.get(idx).is_none() {
        return Err(Error::ClassMismatch(format!("position not in class {}", atlas.class)));
    }
    Ok(())
}

fn phi_against(atlas: &ReferenceAtlas, state: &State, idx: u32, label: u32) -> Perm {
    let r = state.cubie_at(idx).pose;
    let mat = atlas.pose(label).inverse().compose(&r.inverse()).compose(&atlas.pose(idx));
    face_perm(atlas.m, &mat)
}

/// `φ` of the cubie at `idx`, with faces numbered through its own home.
pub fn orientation_permutation(atlas: &ReferenceAtlas, state: &State, idx: u32) -> Result<Perm> {
    check_member(atlas, state, idx)?;
    Ok(phi_against(atlas, state, idx, state.cubie_at(idx).home))
}

/// `φ` with faces numbered through the cluster's smallest home, so that
/// identically colored cubies get identical numbering.
pub fn color_orientation_permutation(atlas: &ReferenceAtlas, state: &State, idx: u32) -> Result<Perm> {
    check_member(atlas, state, idx)?;
    let label = state.geometry().cluster_rep(state.cubie_at(idx).home);
    Ok(phi_against(atlas, state, idx, label))
}

/// `α` for a cubie carried by `mv` from `idx`: `φ' = φ ∘ α`.
pub fn transition_alpha(atlas: &ReferenceAtlas, geom: &Geometry, mv: &Move, idx: u32) -> Result<Perm> {
    let pos = geom.position(idx);
    if !mv.contains(pos) {
        return Err(Error::PositionNotDisplaced(pos.to_vec()));
    }
    let to = geom.transport(idx, mv.i(), mv.j());
    if to == idx {
        return Err(Error::PositionNotDisplaced(pos.to_vec()));
    }
    if atlas.m < 2 || atlas.get(idx).is_none() {
        return Err(Error::ClassMismatch(format!("position not in class {}", atlas.class)));
    }
    let mat = atlas.pose(idx).inverse().compose(&mv.rotation().inverse()).compose(&atlas.pose(to));
    Ok(face_perm(atlas.m, &mat))
}

/// 1 iff the color-numbered `φ` is even.
pub fn simplified_orientation(atlas: &ReferenceAtlas, state: &State, idx: u32) -> Result<u8> {
    let p = state.params();
    if !crate::classify::has_cluster_invariant(p, &atlas.class) {
        return Err(Error::NotAlternatingCluster(atlas.class.to_string()));
    }
    Ok(u8::from(color_orientation_permutation(atlas, state, idx)?.is_even()))
}
