use crate::error::{Error, Result};
use crate::group::{SignedAxis, SignedPerm};

use super::{Geometry, Position, State};

/// A physical disassembly step: twist one cubie in place, or exchange two
/// cubies, composing extra rotations onto their poses.
#[derive(Clone, Debug, PartialEq)]
pub enum ReassemblyEdit {
    TwistInPlace {
        position: Position,
        rotation: SignedPerm,
    },
    /// The cubie at `a` moves to `b` with pose `adjust_a ∘ pose`, and the
    /// cubie at `b` moves to `a` with pose `adjust_b ∘ pose`.
    SwapCubies {
        a: Position,
        b: Position,
        adjust_a: SignedPerm,
        adjust_b: SignedPerm,
    },
}

impl ReassemblyEdit {
    /// Exchange two cubies of one class, each carried along its reference
    /// transport so that neither one's orientation relative to the atlas
    /// changes.
    pub fn transported_swap(geom: &Geometry, a: &[u8], b: &[u8]) -> Result<ReassemblyEdit> {
        let ia = geom.index_of_checked(a)?;
        let ib = geom.index_of_checked(b)?;
        Ok(ReassemblyEdit::SwapCubies {
            a: a.to_vec(),
            b: b.to_vec(),
            adjust_a: transport_pose(geom, ia, ib)?,
            adjust_b: transport_pose(geom, ib, ia)?,
        })
    }
}

impl State {
    pub fn apply_reassembly_edit(&self, edit: &ReassemblyEdit) -> Result<State> {
        let geom = self.geometry().clone();
        let mut slots = self.slots().to_vec();
        match edit {
            ReassemblyEdit::TwistInPlace { position, rotation } => {
                let i = geom.index_of_checked(position)? as usize;
                slots[i].pose = rotation.compose(&slots[i].pose);
            }
            ReassemblyEdit::SwapCubies { a, b, adjust_a, adjust_b } => {
                let ia = geom.index_of_checked(a)? as usize;
                let ib = geom.index_of_checked(b)? as usize;
                if ia == ib {
                    return Err(Error::InvalidReassembly(vec!["swap of a position with itself".into()]));
                }
                let (ca, cb) = (slots[ia], slots[ib]);
                slots[ib] = super::Cubie { home: ca.home, pose: adjust_a.compose(&ca.pose) };
                slots[ia] = super::Cubie { home: cb.home, pose: adjust_b.compose(&cb.pose) };
            }
        }
        State::from_slots(geom, slots)
    }
}

/// `A_to ∘ A_from⁻¹` for two positions of one class.
pub fn transport_pose(geom: &Geometry, from: u32, to: u32) -> Result<SignedPerm> {
    let ci = geom.class_index(from);
    if geom.class_index(to) != ci {
        return Err(Error::ClassMismatch(format!("{:?} and {:?}", geom.position(from), geom.position(to))));
    }
    let atlas = geom.atlas(ci);
    Ok(atlas.pose(to).compose(&atlas.pose(from).inverse()))
}

fn interior_axis(geom: &Geometry, idx: u32) -> Option<usize> {
    let k = geom.params().k;
    geom.position(idx).iter().position(|&p| p != 0 && p as usize != k - 1)
}

/// A rotation exchanging the first two facet normals of a position while
/// reversing one interior axis (to keep the determinant +1). Needs
/// `2 <= m < n`.
pub fn facet_swap_rotation(geom: &Geometry, idx: u32) -> Option<SignedPerm> {
    let facets: Vec<SignedAxis> = geom.facets(idx).collect();
    let c = interior_axis(geom, idx)?;
    if facets.len() < 2 {
        return None;
    }
    let n = geom.params().n;
    let (d1, d2) = (facets[0], facets[1]);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut signs = vec![1i8; n];
    let rel = if d1.positive == d2.positive { 1 } else { -1 };
    perm[d1.axis as usize] = d2.axis as usize;
    perm[d2.axis as usize] = d1.axis as usize;
    signs[d1.axis as usize] = rel;
    signs[d2.axis as usize] = rel;
    signs[c] = -1;
    SignedPerm::new(&perm, &signs).ok()
}

/// A rotation cycling the first three facet normals of a position
/// (`d1 → d2 → d3 → d1`). Needs `m >= 3`.
pub fn corner_twist_rotation(geom: &Geometry, idx: u32) -> Option<SignedPerm> {
    let facets: Vec<SignedAxis> = geom.facets(idx).collect();
    if facets.len() < 3 {
        return None;
    }
    let n = geom.params().n;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut signs = vec![1i8; n];
    for t in 0..3 {
        let (from, to) = (facets[t], facets[(t + 1) % 3]);
        perm[from.axis as usize] = to.axis as usize;
        signs[from.axis as usize] = if from.positive == to.positive { 1 } else { -1 };
    }
    SignedPerm::new(&perm, &signs).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::PuzzleParams;

    #[test]
    fn corner_twist_is_valid_but_visible() {
        let p = PuzzleParams::new(3, 3).unwrap();
        let s = State::solved(p).unwrap();
        let g = s.geometry().clone();
        let idx = g.index_of(&[0, 0, 0]).unwrap();
        let r = corner_twist_rotation(&g, idx).unwrap();
        assert_eq!(r.det(), 1);
        let t =
            s.apply_reassembly_edit(&ReassemblyEdit::TwistInPlace { position: vec![0, 0, 0], rotation: r }).unwrap();
        assert!(!t.colored_equal(&s).unwrap());
    }

    #[test]
    fn edge_cannot_sit_at_a_corner() {
        let p = PuzzleParams::new(3, 3).unwrap();
        let s = State::solved(p).unwrap();
        let id = SignedPerm::identity(3);
        let edit = ReassemblyEdit::SwapCubies { a: vec![0, 0, 1], b: vec![0, 0, 0], adjust_a: id, adjust_b: id };
        assert!(matches!(s.apply_reassembly_edit(&edit), Err(Error::InvalidReassembly(_))));
    }

    #[test]
    fn frame_pair_swap_is_valid() {
        let p = PuzzleParams::new(3, 3).unwrap();
        let s = State::solved(p).unwrap();
        let edit = ReassemblyEdit::transported_swap(s.geometry(), &[0, 1, 1], &[2, 1, 1]).unwrap();
        let t = s.apply_reassembly_edit(&edit).unwrap();
        assert!(t.validate().is_empty());
    }

    #[test]
    fn facet_swap_has_det_one() {
        let p = PuzzleParams::new(3, 7).unwrap();
        let g = Geometry::shared(p).unwrap();
        let idx = g.index_of(&[0, 6, 1]).unwrap();
        let r = facet_swap_rotation(&g, idx).unwrap();
        assert_eq!(r.det(), 1);
        let f: Vec<SignedAxis> = g.facets(idx).collect();
        assert_eq!(r.apply(f[0]), f[1]);
        assert_eq!(r.apply(f[1]), f[0]);
    }
}
