use std::cell::RefCell;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{SignedAxis, SignedPerm};

use super::{Geometry, Move, MoveSeq, PuzzleParams};

/// An external cubie: its home position index (also its identity) and its
/// pose relative to home.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Cubie {
    pub home: u32,
    pub pose: SignedPerm,
}

/// Occupancy of every external position.
#[derive(Clone)]
pub struct State {
    geom: Arc<Geometry>,
    slots: Vec<Cubie>,
}

impl std::fmt::Debug for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "State{}[{} cubies]", self.geom.params(), self.slots.len())
    }
}

impl PartialEq for State {
    /// Exact equality: same cubies at the same places with the same poses.
    fn eq(&self, other: &Self) -> bool {
        self.geom.params() == other.geom.params() && self.slots == other.slots
    }
}

thread_local! {
    static LAYER: RefCell<Vec<(u32, u32)>> = const { RefCell::new(Vec::new()) };
    static MOVED: RefCell<Vec<(u32, Cubie)>> = const { RefCell::new(Vec::new()) };
}

impl State {
    pub fn solved(params: PuzzleParams) -> Result<State> {
        let geom = Geometry::shared(params)?;
        Ok(Self::solved_for(&geom))
    }

    pub fn solved_for(geom: &Arc<Geometry>) -> State {
        let id = SignedPerm::identity(geom.params().n);
        let slots = (0..geom.len() as u32).map(|home| Cubie { home, pose: id }).collect();
        State { geom: geom.clone(), slots }
    }

    /// Builds a state from slot contents and validates it.
    pub fn from_slots(geom: Arc<Geometry>, slots: Vec<Cubie>) -> Result<State> {
        let s = State { geom, slots };
        let problems = s.validate();
        if problems.is_empty() {
            Ok(s)
        } else {
            Err(Error::InvalidReassembly(problems))
        }
    }

    pub fn params(&self) -> PuzzleParams {
        self.geom.params()
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geom
    }

    pub fn slots(&self) -> &[Cubie] {
        &self.slots
    }

    pub fn cubie_at(&self, idx: u32) -> &Cubie {
        &self.slots[idx as usize]
    }

    /// Current position index of every cubie, indexed by home.
    pub fn locate(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.slots.len()];
        for (pos, c) in self.slots.iter().enumerate() {
            out[c.home as usize] = pos as u32;
        }
        out
    }

    fn check_move(&self, m: &Move) -> Result<()> {
        let p = self.params();
        if m.dim() != p.n || (0..p.n).any(|a| m.coord(a) as usize >= p.k) {
            return Err(Error::MalformedMove(format!("{m} does not fit {p}")));
        }
        Ok(())
    }

    pub fn apply_move_mut(&mut self, m: &Move) -> Result<()> {
        self.check_move(m)?;
        let g = m.rotation();
        LAYER.with(|layer| {
            MOVED.with(|moved| {
                let mut layer = layer.borrow_mut();
                let mut moved = moved.borrow_mut();
                self.geom.layer_map(m, &mut layer);
                moved.clear();
                for &(from, to) in layer.iter() {
                    let c = self.slots[from as usize];
                    moved.push((to, Cubie { home: c.home, pose: g.compose(&c.pose) }));
                }
                for &(to, c) in moved.iter() {
                    self.slots[to as usize] = c;
                }
            })
        });
        Ok(())
    }

    pub fn apply_move(&self, m: &Move) -> Result<State> {
        let mut s = self.clone();
        s.apply_move_mut(m)?;
        Ok(s)
    }

    pub fn apply_sequence_mut(&mut self, q: &MoveSeq) -> Result<()> {
        for m in q {
            self.apply_move_mut(m)?;
        }
        Ok(())
    }

    pub fn apply_sequence(&self, q: &MoveSeq) -> Result<State> {
        let mut s = self.clone();
        s.apply_sequence_mut(q)?;
        Ok(s)
    }

    /// Colors on the facets of a position, in facet order. The color of a
    /// facet is the big-cube facet its cubie face sat on at home, which is
    /// `R⁻¹(d)` for world normal `d`.
    pub fn colors_at(&self, idx: u32) -> Vec<SignedAxis> {
        let inv = self.slots[idx as usize].pose.inverse();
        self.geom.facets(idx).map(|d| inv.apply(d)).collect()
    }

    fn colors_match(&self, other: &State, idx: u32) -> bool {
        let a = self.slots[idx as usize].pose.inverse();
        let b = other.slots[idx as usize].pose.inverse();
        self.geom.facets(idx).all(|d| a.apply(d) == b.apply(d))
    }

    /// Equality of the colored appearance; cubie identities may differ.
    pub fn colored_equal(&self, other: &State) -> Result<bool> {
        self.same_params(other)?;
        Ok((0..self.slots.len() as u32).all(|i| self.colors_match(other, i)))
    }

    /// Positions whose colored appearance differs.
    pub fn colored_diff(&self, other: &State) -> Result<Vec<u32>> {
        self.same_params(other)?;
        Ok((0..self.slots.len() as u32).filter(|&i| !self.colors_match(other, i)).collect())
    }

    pub fn same_params(&self, other: &State) -> Result<()> {
        let (a, b) = (self.params(), other.params());
        if a != b {
            return Err(Error::ParamsMismatch(a.n, a.k, b.n, b.k));
        }
        Ok(())
    }

    /// Every geometric problem with the state; empty when valid.
    pub fn validate(&self) -> Vec<String> {
        let g = &self.geom;
        let mut problems = Vec::new();
        if self.slots.len() != g.len() {
            problems.push(format!("expected {} cubies, found {}", g.len(), self.slots.len()));
            return problems;
        }
        let mut seen = vec![false; g.len()];
        for (pos, c) in self.slots.iter().enumerate() {
            let pos = pos as u32;
            let here = g.position(pos);
            if c.home as usize >= g.len() {
                problems.push(format!("cubie at {here:?} has unknown home"));
                continue;
            }
            if std::mem::replace(&mut seen[c.home as usize], true) {
                problems.push(format!("cubie {:?} appears twice", g.position(c.home)));
            }
            if c.pose.dim() != g.params().n {
                problems.push(format!("pose at {here:?} has wrong dimension"));
                continue;
            }
            if c.pose.det() != 1 {
                problems.push(format!("reflection pose at {here:?}"));
            }
            if g.class_index(c.home) != g.class_index(pos) {
                problems.push(format!(
                    "cubie {:?} of class {} placed at {here:?} of class {}",
                    g.position(c.home),
                    g.class(g.class_index(c.home)).id,
                    g.class(g.class_index(pos)).id
                ));
                continue;
            }
            let slot_facets: Vec<SignedAxis> = g.facets(pos).collect();
            if g.facets(c.home).any(|f| !slot_facets.contains(&c.pose.apply(f))) {
                problems.push(format!("pose at {here:?} does not map facets onto facets"));
            }
        }
        problems
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, k: usize) -> PuzzleParams {
        PuzzleParams::new(n, k).unwrap()
    }

    #[test]
    fn single_move_substitution() {
        let p = params(3, 3);
        let s = State::solved(p).unwrap();
        let m = Move::new(p, 0, 1, &[0]).unwrap();
        let t = s.apply_move(&m).unwrap();
        let g = s.geometry();
        let from = g.index_of(&[0, 1, 0]).unwrap();
        let to = g.index_of(&[1, 0, 0]).unwrap();
        assert_eq!(t.cubie_at(to).home, from);
        // axis center of the plane stays put
        let center = g.index_of(&[1, 1, 0]).unwrap();
        assert_eq!(t.cubie_at(center).home, center);
        assert!(t.validate().is_empty());
    }

    #[test]
    fn order_four() {
        let p = params(4, 3);
        let s = State::solved(p).unwrap();
        let m = Move::new(p, 1, 3, &[2, 1]).unwrap();
        let mut t = s.clone();
        for _ in 0..4 {
            t.apply_move_mut(&m).unwrap();
        }
        assert_eq!(t, s);
    }

    #[test]
    fn reflection_is_rejected() {
        let p = params(3, 3);
        let s = State::solved(p).unwrap();
        let mut slots = s.slots().to_vec();
        slots[0].pose = SignedPerm::new(&[0, 1, 2], &[1, 1, -1]).unwrap();
        let err = State::from_slots(s.geometry().clone(), slots).unwrap_err();
        assert!(err.to_string().contains("reflection pose"));
    }

    #[test]
    fn mismatched_params_are_rejected() {
        let a = State::solved(params(3, 3)).unwrap();
        let b = State::solved(params(3, 4)).unwrap();
        assert!(a.colored_equal(&b).is_err());
        let m = Move::new(params(3, 4), 0, 1, &[3]).unwrap();
        assert!(a.apply_move(&m).is_err());
    }
}
