//! Classes of positions, clusters of identically colored cubies, and the
//! rotation groups attached to each class.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{binomial, parity_sign, RotationGroupKind, SignedAxis};
use crate::puzzle::{Position, PuzzleParams};
use num_traits::ToPrimitive;

pub use crate::group::Family;

/// Names a class: `m` boundary coordinates, the sorted characteristics of
/// the interior ones, and the sign `q` for the two halves of a special class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ClassId {
    pub m: usize,
    pub chars: Vec<u8>,
    pub q: Option<i8>,
}

impl ClassId {
    pub fn new(m: usize, chars: Vec<u8>) -> Self {
        ClassId { m, chars, q: None }
    }

    pub fn with_q(mut self, q: i8) -> Self {
        self.q = Some(q);
        self
    }

    /// Same class with `q` dropped, i.e. the union of both halves.
    pub fn unsigned(&self) -> ClassId {
        ClassId { m: self.m, chars: self.chars.clone(), q: None }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chars: Vec<String> = self.chars.iter().map(|c| c.to_string()).collect();
        write!(f, "({},[{}]", self.m, chars.join(","))?;
        if let Some(q) = self.q {
            write!(f, ",q={}", if q > 0 { "+1" } else { "-1" })?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for ClassId {
    type Err = Error;

    /// Parses the display form, e.g. `(2,[1])` or `(1,[1,2],q=-1)`; the
    /// outer parentheses are optional.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad class {text:?}"));
        let t = text.trim();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        let (m, rest) = t.split_once(',').ok_or_else(bad)?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let rest = rest.trim().strip_prefix('[').ok_or_else(bad)?;
        let (chars, tail) = rest.split_once(']').ok_or_else(bad)?;
        let chars = chars
            .split(',')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(|c| c.parse::<u8>().map_err(|_| bad()))
            .collect::<Result<Vec<u8>>>()?;
        let mut id = ClassId::new(m, chars);
        let tail = tail.trim();
        if !tail.is_empty() {
            let q = tail.strip_prefix(',').and_then(|x| x.trim().strip_prefix("q=")).ok_or_else(bad)?;
            id = id.with_q(match q.trim() {
                "+1" | "1" => 1,
                "-1" => -1,
                _ => return Err(bad()),
            });
        }
        Ok(id)
    }
}

/// A set of identically colored cubies: the class plus the side taken on
/// each boundary axis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ClusterId {
    pub class: ClassId,
    pub vslots: Vec<SignedAxis>,
}

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slots: Vec<String> = self.vslots.iter().map(|s| s.to_string()).collect();
        write!(f, "{}{{{}}}", self.class, slots.join(","))
    }
}

pub fn is_boundary(params: PuzzleParams, p: u8) -> bool {
    p == 0 || p as usize == params.k - 1
}

/// `m` and the sorted characteristics `min(p, k-1-p)` of interior coordinates.
pub fn characteristics_of(params: PuzzleParams, pos: &[u8]) -> Result<(usize, Vec<u8>)> {
    check_position(params, pos)?;
    let mut m = 0;
    let mut chars = Vec::with_capacity(params.n);
    for &p in pos {
        if is_boundary(params, p) {
            m += 1;
        } else {
            chars.push(p.min(params.opposite(p)));
        }
    }
    chars.sort_unstable();
    Ok((m, chars))
}

fn check_position(params: PuzzleParams, pos: &[u8]) -> Result<()> {
    if pos.len() != params.n || pos.iter().any(|&p| p as usize >= params.k) {
        return Err(Error::InteriorPosition(pos.to_vec()));
    }
    Ok(())
}

/// Strictly increasing characteristics, all below the center.
pub fn is_strict_below_center(params: PuzzleParams, chars: &[u8]) -> bool {
    chars.windows(2).all(|w| w[0] < w[1]) && chars.iter().all(|&c| 2 * (c as usize) < params.k - 1)
}

pub fn is_special(params: PuzzleParams, m: usize, chars: &[u8]) -> bool {
    m == 1 && is_strict_below_center(params, chars)
}

/// Sign of a position inside a special class: the parity of the sorting
/// permutation of coordinate families times `(-1)^(opposite variants)`.
fn special_sign(params: PuzzleParams, pos: &[u8]) -> i8 {
    let mut keyed: Vec<(u8, usize)> = Vec::with_capacity(pos.len());
    let mut variants = 0;
    for (axis, &p) in pos.iter().enumerate() {
        if is_boundary(params, p) {
            keyed.push((0, axis));
            variants += usize::from(p != 0);
        } else {
            let c = p.min(params.opposite(p));
            keyed.push((c, axis));
            variants += usize::from(p != c);
        }
    }
    keyed.sort_unstable();
    let order: Vec<usize> = keyed.iter().map(|&(_, a)| a).collect();
    let sign = parity_sign(&order);
    if variants % 2 == 0 {
        sign
    } else {
        -sign
    }
}

pub fn class_of(params: PuzzleParams, pos: &[u8]) -> Result<ClassId> {
    let (m, chars) = characteristics_of(params, pos)?;
    if m == 0 {
        return Err(Error::InteriorPosition(pos.to_vec()));
    }
    let special = is_special(params, m, &chars);
    let mut id = ClassId::new(m, chars);
    if special {
        id.q = Some(special_sign(params, pos));
    }
    Ok(id)
}

/// `(0,…,0, j_1,…,j_{n-m})`; the `q = -1` half of a special class is
/// represented by the same point with its first coordinate opposite.
pub fn canonical_position(params: PuzzleParams, class: &ClassId) -> Position {
    let mut pos = vec![0u8; class.m];
    pos.extend_from_slice(&class.chars);
    if class.q == Some(-1) {
        pos[0] = (params.k - 1) as u8;
    }
    pos
}

/// Central classes: every characteristic equals the center (vacuous for
/// corners). Their cubies are unique.
pub fn is_central(params: PuzzleParams, class: &ClassId) -> bool {
    class.chars.iter().all(|&c| 2 * c as usize == params.k - 1)
}

pub fn is_frame(params: PuzzleParams, class: &ClassId) -> bool {
    class.m == 1 && params.k % 2 == 1 && is_central(params, class)
}

/// Nontrivial alternating cluster classes carry the cluster invariant.
pub fn has_cluster_invariant(params: PuzzleParams, class: &ClassId) -> bool {
    class.m >= 2 && class.m < params.n && is_strict_below_center(params, &class.chars)
}

pub fn cluster_of(params: PuzzleParams, home: &[u8]) -> Result<ClusterId> {
    let class = class_of(params, home)?;
    let vslots = home
        .iter()
        .enumerate()
        .filter(|(_, &p)| is_boundary(params, p))
        .map(|(a, &p)| SignedAxis::new(a, p != 0))
        .collect();
    Ok(ClusterId { class, vslots })
}

/// Group of orientation-face permutations realizable by moves that return
/// a cubie of this class to its position.
pub fn dependent_group(params: PuzzleParams, class: &ClassId) -> RotationGroupKind {
    let m = class.m;
    if m == 1 {
        return RotationGroupKind::symmetric(1);
    }
    if m == params.n || is_strict_below_center(params, &class.chars) {
        RotationGroupKind::alternating(m)
    } else {
        RotationGroupKind::symmetric(m)
    }
}

/// Group of orientation-face permutations realizable by free rotations.
pub fn independent_group(n: usize, m: usize) -> RotationGroupKind {
    if m == n {
        RotationGroupKind::alternating(m)
    } else {
        RotationGroupKind::symmetric(m)
    }
}

/// Number of `t`-dimensional faces of a cubie with `m` boundary coordinates.
pub fn face_count(m: usize, n: usize, t: usize) -> u64 {
    if t > n {
        return 0;
    }
    binomial(m as u64, (n - t) as u64).to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_id_parses_display_form() {
        for id in [ClassId::new(3, vec![]), ClassId::new(2, vec![1, 3]), ClassId::new(1, vec![1, 2]).with_q(-1)] {
            assert_eq!(id.to_string().parse::<ClassId>().unwrap(), id);
        }
        assert_eq!("2,[1]".parse::<ClassId>().unwrap(), ClassId::new(2, vec![1]));
        assert!("(2,1)".parse::<ClassId>().is_err());
    }

    fn p(n: usize, k: usize) -> PuzzleParams {
        PuzzleParams::new(n, k).unwrap()
    }

    #[test]
    fn characteristics() {
        assert_eq!(characteristics_of(p(3, 7), &[0, 1, 5]).unwrap(), (1, vec![1, 1]));
        assert_eq!(characteristics_of(p(3, 7), &[0, 2, 6]).unwrap(), (2, vec![2]));
        assert_eq!(characteristics_of(p(3, 7), &[0, 0, 0]).unwrap(), (3, vec![]));
    }

    #[test]
    fn special_signs() {
        let k7 = p(3, 7);
        assert_eq!(class_of(k7, &[0, 1, 2]).unwrap(), ClassId::new(1, vec![1, 2]).with_q(1));
        assert_eq!(class_of(k7, &[6, 1, 2]).unwrap(), ClassId::new(1, vec![1, 2]).with_q(-1));
        assert_eq!(class_of(k7, &[6, 5, 2]).unwrap(), ClassId::new(1, vec![1, 2]).with_q(1));
        // k < 2n: no split
        assert_eq!(class_of(p(3, 5), &[0, 1, 2]).unwrap().q, None);
        assert!(class_of(k7, &[1, 2, 3]).is_err());
    }

    #[test]
    fn canonical_positions() {
        assert_eq!(canonical_position(p(3, 3), &ClassId::new(3, vec![])), vec![0, 0, 0]);
        assert_eq!(canonical_position(p(3, 7), &ClassId::new(1, vec![1, 1])), vec![0, 1, 1]);
        assert_eq!(canonical_position(p(3, 7), &ClassId::new(2, vec![3])), vec![0, 0, 3]);
    }

    #[test]
    fn clusters() {
        let k7 = p(3, 7);
        assert_eq!(cluster_of(k7, &[0, 6, 1]).unwrap(), cluster_of(k7, &[0, 6, 5]).unwrap());
        assert_ne!(cluster_of(k7, &[0, 6, 1]).unwrap(), cluster_of(k7, &[6, 0, 1]).unwrap());
        let c = class_of(p(3, 3), &[0, 0, 1]).unwrap();
        assert!(is_central(p(3, 3), &c));
    }

    #[test]
    fn groups() {
        assert_eq!(dependent_group(p(3, 3), &ClassId::new(3, vec![])), RotationGroupKind::alternating(3));
        assert_eq!(dependent_group(p(3, 7), &ClassId::new(2, vec![3])), RotationGroupKind::symmetric(2));
        assert_eq!(dependent_group(p(4, 7), &ClassId::new(2, vec![1, 1])), RotationGroupKind::symmetric(2));
        assert_eq!(dependent_group(p(3, 7), &ClassId::new(2, vec![1])), RotationGroupKind::alternating(2));
        assert_eq!(independent_group(3, 3), RotationGroupKind::alternating(3));
        assert_eq!(independent_group(4, 2), RotationGroupKind::symmetric(2));
        assert_eq!(independent_group(5, 5), RotationGroupKind::alternating(5));
    }

    #[test]
    fn faces() {
        assert_eq!(face_count(3, 3, 2), 3);
        assert_eq!(face_count(1, 5, 4), 1);
        assert_eq!(face_count(2, 5, 2), 0);
    }
}
