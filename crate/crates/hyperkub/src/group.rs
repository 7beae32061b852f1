//! Permutations, signed permutations and the small quotient groups used by
//! the orientation invariant.
//!
//! Points are stored zero-based. Text output (cycle notation, state files)
//! converts to one-based numbering.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension. Poses are stored inline up to this size.
pub const MAX_DIM: usize = 8;

/// A permutation of `{0, .., m-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u16>,
}

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm { img: (0..m as u16).collect() }
    }

    /// Builds a permutation from zero-based images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in images {
            if x >= m || seen[x] {
                return Err(Error::NotAPermutation(images.to_vec()));
            }
            seen[x] = true;
        }
        Ok(Perm { img: images.iter().map(|&x| x as u16).collect() })
    }

    /// Builds a permutation from one-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::NotAPermutation(images.to_vec()));
        }
        let zero: Vec<usize> = images.iter().map(|&x| x - 1).collect();
        Self::from_images(&zero)
    }

    /// Builds a permutation of degree `m` from one-based disjoint cycles.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut img: Vec<usize> = (0..m).collect();
        for cycle in cycles {
            for (t, &x) in cycle.iter().enumerate() {
                let y = cycle[(t + 1) % cycle.len()];
                if x == 0 || x > m || y == 0 || y > m {
                    return Err(Error::NotAPermutation(cycle.to_vec()));
                }
                img[x - 1] = y - 1;
            }
        }
        Self::from_images(&img)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.img.iter().map(|&x| x as usize).collect()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.img.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other` first. Panics on degree mismatch; use
    /// [`perm_compose`] for the checked form.
    pub fn then_after(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm { img: other.img.iter().map(|&x| self.img[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Perm { img: inv }
    }

    pub fn sign(&self) -> i8 {
        parity_sign(&self.images())
    }

    pub fn is_even(&self) -> bool {
        self.sign() == 1
    }

    /// Disjoint cycles of length at least two, one-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// All permutations of degree `m` in lexicographic image order.
    pub fn all(m: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..m).collect();
        loop {
            out.push(Perm::from_images(&cur).expect("valid"));
            // next lexicographic permutation
            let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Sign of an arbitrary permutation given by zero-based images.
pub fn parity_sign(images: &[usize]) -> i8 {
    let mut seen = vec![false; images.len()];
    let mut transpositions = 0usize;
    for s in 0..images.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = images[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn perm_sign(p: &Perm) -> i8 {
    p.sign()
}

/// `a ∘ b`, applying `b` first.
pub fn perm_compose(a: &Perm, b: &Perm) -> Result<Perm> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(a.then_after(b))
}

/// A signed coordinate axis, i.e. one of the vectors `±e_axis`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SignedAxis {
    pub axis: u8,
    /// `true` for `+e_axis`.
    pub positive: bool,
}

impl SignedAxis {
    pub fn new(axis: usize, positive: bool) -> Self {
        SignedAxis { axis: axis as u8, positive }
    }
}

impl std::ops::Neg for SignedAxis {
    type Output = SignedAxis;

    fn neg(self) -> SignedAxis {
        SignedAxis { axis: self.axis, positive: !self.positive }
    }
}

impl fmt::Display for SignedAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.axis + 1)
    }
}

/// A signed permutation matrix: `R e_a = signs[a] · e_{perm[a]}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    n: u8,
    perm: [u8; MAX_DIM],
    signs: [i8; MAX_DIM],
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        let mut perm = [0u8; MAX_DIM];
        for (a, p) in perm.iter_mut().enumerate() {
            *p = a as u8;
        }
        SignedPerm { n: n as u8, perm, signs: [1; MAX_DIM] }
    }

    /// Zero-based axis images and their signs.
    pub fn new(perm: &[usize], signs: &[i8]) -> Result<Self> {
        let n = perm.len();
        if n > MAX_DIM || signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::MalformedPose(format!("perm {perm:?} signs {signs:?}")));
        }
        Perm::from_images(perm)?;
        let mut out = SignedPerm::identity(n);
        for a in 0..n {
            out.perm[a] = perm[a] as u8;
            out.signs[a] = signs[a];
        }
        Ok(out)
    }

    /// The rotation taking `e_i` to `e_j` and `e_j` to `-e_i`.
    pub fn quarter_turn(n: usize, i: usize, j: usize) -> Self {
        let mut r = SignedPerm::identity(n);
        r.perm[i] = j as u8;
        r.perm[j] = i as u8;
        r.signs[j] = -1;
        r
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn perm(&self) -> Vec<usize> {
        self.perm[..self.dim()].iter().map(|&x| x as usize).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.signs[..self.dim()].to_vec()
    }

    #[inline]
    pub fn apply(&self, v: SignedAxis) -> SignedAxis {
        let a = v.axis as usize;
        let s = self.signs[a] > 0;
        SignedAxis { axis: self.perm[a], positive: s == v.positive }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for a in 0..self.dim() {
            let b = other.perm[a] as usize;
            out.perm[a] = self.perm[b];
            out.signs[a] = self.signs[b] * other.signs[a];
        }
        out
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut out = *self;
        for a in 0..self.dim() {
            let b = self.perm[a] as usize;
            out.perm[b] = a as u8;
            out.signs[b] = self.signs[a];
        }
        out
    }

    pub fn det(&self) -> i8 {
        let sign: i8 = self.signs[..self.dim()].iter().product();
        sign * parity_sign(&self.perm())
    }

    pub fn is_identity(&self) -> bool {
        *self == SignedPerm::identity(self.dim())
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|a| {
                let s = if self.signs[a] > 0 { '+' } else { '-' };
                format!("{}{}", s, self.perm[a] + 1)
            })
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// `A_m` or `S_m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    A,
    S,
}

/// A dependent or independent rotation group, named by family and degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RotationGroupKind {
    pub family: Family,
    pub degree: usize,
}

impl RotationGroupKind {
    pub fn alternating(m: usize) -> Self {
        RotationGroupKind { family: Family::A, degree: m }
    }

    pub fn symmetric(m: usize) -> Self {
        RotationGroupKind { family: Family::S, degree: m }
    }

    pub fn order(&self) -> u64 {
        let f: u64 = (1..=self.degree as u64).product();
        match self.family {
            Family::S => f,
            Family::A if self.degree >= 2 => f / 2,
            Family::A => 1,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.degree && (self.family == Family::S || p.is_even())
    }

    pub fn elements(&self) -> Vec<Perm> {
        Perm::all(self.degree).into_iter().filter(|p| self.contains(p)).collect()
    }

    /// Kind of the abelianization `G / [G, G]`.
    pub fn quotient_kind(&self) -> LabelKind {
        match (self.family, self.degree) {
            (Family::S, m) if m >= 2 => LabelKind::Z2,
            (Family::A, 3) | (Family::A, 4) => LabelKind::Z3,
            _ => LabelKind::Trivial,
        }
    }

    /// Membership in the commutant `[G, G]`.
    pub fn commutant_contains(&self, p: &Perm) -> bool {
        self.contains(p) && coset_label(*self, p).map(|l| l.value == 0).unwrap_or(false)
    }
}

impl fmt::Display for RotationGroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::A => 'A',
            Family::S => 'S',
        };
        write!(f, "{}{}", fam, self.degree)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelKind {
    Trivial,
    Z2,
    Z3,
}

/// An element of `Ḡ_rot / Q`, written additively.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetLabel {
    pub kind: LabelKind,
    pub value: u8,
}

impl CosetLabel {
    pub fn zero(kind: LabelKind) -> Self {
        CosetLabel { kind, value: 0 }
    }

    pub fn modulus(&self) -> u8 {
        match self.kind {
            LabelKind::Trivial => 1,
            LabelKind::Z2 => 2,
            LabelKind::Z3 => 3,
        }
    }
}

impl std::ops::Add for CosetLabel {
    type Output = CosetLabel;

    fn add(self, other: CosetLabel) -> CosetLabel {
        debug_assert_eq!(self.kind, other.kind);
        CosetLabel { kind: self.kind, value: (self.value + other.value) % self.modulus() }
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LabelKind::Trivial => write!(f, "1:0"),
            LabelKind::Z2 => write!(f, "Z2:{}", self.value),
            LabelKind::Z3 => write!(f, "Z3:{}", self.value),
        }
    }
}

fn a3_label(images: &[usize]) -> u8 {
    match images {
        [0, 1, 2] => 0,
        [1, 2, 0] => 1,
        [2, 0, 1] => 2,
        _ => unreachable!("not in A3: {images:?}"),
    }
}

/// Pair partitions of {0,1,2,3}, ordered {01|23}, {02|13}, {03|12}.
fn pair_partition_index(a: usize, b: usize) -> usize {
    let other = if a == 0 {
        b
    } else if b == 0 {
        a
    } else {
        6 - a - b
    };
    // `other` is the partner of point 0
    other - 1
}

/// Labels `p` in the abelianization of `group`.
pub fn coset_label(group: RotationGroupKind, p: &Perm) -> Result<CosetLabel> {
    if !group.contains(p) {
        return Err(Error::NotInGroup { group: group.to_string(), perm: p.to_string() });
    }
    let kind = group.quotient_kind();
    let value = match (kind, group.degree) {
        (LabelKind::Trivial, _) => 0,
        (LabelKind::Z2, _) => u8::from(!p.is_even()),
        (LabelKind::Z3, 3) => a3_label(&p.images()),
        (LabelKind::Z3, 4) => {
            let pairs = [(0, 1), (0, 2), (0, 3)];
            let mut induced = [0usize; 3];
            for (idx, &(a, b)) in pairs.iter().enumerate() {
                induced[idx] = pair_partition_index(p.apply(a), p.apply(b));
            }
            a3_label(&induced)
        }
        _ => unreachable!(),
    };
    Ok(CosetLabel { kind, value })
}

/// Standard binomial coefficient.
pub fn binomial(n: u64, s: u64) -> BigUint {
    if s > n {
        return BigUint::zero();
    }
    let s = s.min(n - s);
    let mut acc = BigUint::one();
    for t in 0..s {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// Binomial with the convention that it vanishes for `n <= 0`, `s < 0` or `s > n`.
pub fn binom_vanishing(n: i64, s: i64) -> BigUint {
    if n <= 0 || s < 0 || s > n {
        return BigUint::zero();
    }
    binomial(n as u64, s as u64)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, x| acc * x)
}
