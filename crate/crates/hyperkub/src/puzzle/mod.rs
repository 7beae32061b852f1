//! Puzzle state, the layer-rotation operator, move sequences and
//! reassembly edits.

mod edit;
mod geometry;
mod io;
mod moves;
mod state;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::MAX_DIM;

pub use edit::{corner_twist_rotation, facet_swap_rotation, transport_pose, ReassemblyEdit};
pub use geometry::{ClassInfo, Geometry};
pub use io::{state_from_json, state_to_json, StateFile};
pub use moves::{expand_layer_move, invert_sequence, random_moves, seeded_moves, Move, MoveSeq};
pub use state::{Cubie, State};

/// Interval indices, one per axis.
pub type Position = Vec<u8>;

/// Largest `k^n` table the geometry will allocate.
pub const MAX_CELLS: usize = 1 << 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PuzzleParams {
    pub n: usize,
    pub k: usize,
}

impl PuzzleParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if !(3..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidParams(format!("n={n} must be in 3..={MAX_DIM}")));
        }
        if !(2..=255).contains(&k) {
            return Err(Error::InvalidParams(format!("k={k} must be in 2..=255")));
        }
        Ok(PuzzleParams { n, k })
    }

    /// `k - 1 - p`.
    #[inline]
    pub fn opposite(&self, p: u8) -> u8 {
        (self.k - 1) as u8 - p
    }

    pub fn opposite_index(&self, p: usize) -> Result<usize> {
        if p >= self.k {
            return Err(Error::InteriorPosition(vec![p as u8]));
        }
        Ok(self.k - 1 - p)
    }

    /// `M = {0..k-1}`.
    pub fn full_range(&self) -> std::ops::Range<usize> {
        0..self.k
    }

    /// `F = M \ {0, k-1}`.
    pub fn interior_range(&self) -> std::ops::Range<usize> {
        1..self.k - 1
    }

    /// `L = {1..⌊(k-1)/2⌋}`.
    pub fn char_range(&self) -> std::ops::RangeInclusive<usize> {
        1..=(self.k - 1) / 2
    }

    /// The central interval index, for odd `k`.
    pub fn center(&self) -> Option<u8> {
        (self.k % 2 == 1).then(|| ((self.k - 1) / 2) as u8)
    }

    pub fn cell_count(&self) -> Option<usize> {
        self.k.checked_pow(self.n as u32)
    }
}

impl fmt::Display for PuzzleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.k)
    }
}
