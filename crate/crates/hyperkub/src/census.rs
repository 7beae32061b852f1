//! Exact counts of pairwise unreachable states: the closed forms as printed
//! and a count assembled class by class from the classification.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::classify::{class_of, dependent_group, has_cluster_invariant, is_special, ClassId};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::{binom_vanishing, binomial, factorial, LabelKind, RotationGroupKind};
use crate::puzzle::PuzzleParams;

/// Upper bound on the number of classes the census path will enumerate.
pub const MAX_CENSUS_CLASSES: u64 = 5_000_000;

/// Upper bound on the size of a computed count.
pub const MAX_RESULT_BITS: u64 = 1 << 28;

/// Itemized tallies behind a count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountComponents {
    /// Classes contributing a factor 3.
    pub n_alt: u64,
    /// Classes contributing a factor 2.
    pub m_sym: u64,
    /// Nontrivial alternating clusters by number of interior coordinates.
    pub l: BTreeMap<usize, BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub k: usize,
    pub bc: BigUint,
    pub oa: BigUint,
    pub os: BigUint,
    pub cl: BigUint,
    pub s: BigUint,
    pub components: CountComponents,
}

impl CountReport {
    fn assemble(n: usize, k: usize, bc: BigUint, components: CountComponents, cl: BigUint) -> Self {
        let oa = BigUint::from(3u8).pow(components.n_alt as u32);
        let os = BigUint::from(2u8).pow(components.m_sym as u32);
        let s = &bc * &oa * &os * &cl;
        CountReport { n, k, bc, oa, os, cl, s, components }
    }

    pub fn to_json(&self) -> Value {
        let l: serde_json::Map<String, Value> =
            self.components.l.iter().map(|(m, v)| (m.to_string(), json!(v.to_string()))).collect();
        json!({
            "n": self.n,
            "k": self.k,
            "bc": self.bc.to_string(),
            "oa": self.oa.to_string(),
            "os": self.os.to_string(),
            "cl": self.cl.to_string(),
            "s": self.s.to_string(),
            "components": { "N": self.components.n_alt, "M": self.components.m_sym, "L": l },
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("S({},{})\n", self.n, self.k);
        for (name, v) in [("BC", &self.bc), ("OA", &self.oa), ("OS", &self.os), ("Cl", &self.cl), ("S", &self.s)] {
            out.push_str(&format!("  {name:<3} {v}\n"));
        }
        out.push_str(&format!("  N   {}\n  M   {}\n", self.components.n_alt, self.components.m_sym));
        for (m, v) in &self.components.l {
            out.push_str(&format!("  L({m}) {v}\n"));
        }
        out
    }
}

/// `(2n)! / (2^n n!)`, the number of ways to split `2n` objects into pairs.
pub fn pairing_count(n: usize) -> BigUint {
    factorial(2 * n as u64) / (BigUint::from(2u8).pow(n as u32) * factorial(n as u64))
}

fn frame_count(n: usize, k: usize) -> BigUint {
    if k % 2 == 0 {
        BigUint::one()
    } else {
        pairing_count(n) * 4u8
    }
}

/// The closed forms exactly as printed, with the vanishing binomial
/// convention.
pub fn count_components_literal(n: usize, k: usize) -> Result<CountReport> {
    PuzzleParams::new(n, k)?;
    let (ni, h, f) = (n as i64, (k / 2) as i64, ((k - 1) / 2) as i64);
    let bc = if k % 2 == 0 {
        BigUint::one()
    } else {
        factorial(2 * n as u64) / (BigUint::from(2u8).pow(n as u32 - 2) * factorial(n as u64))
    };
    let c = u64::from(n == 3 || n == 4);
    let n_alt = binom_vanishing(h - 1, ni - 3) + binom_vanishing(h - 1, ni - 4) + c;
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for m in 1..=ni - 2 {
        plus += binom_vanishing(f + m - 1, f - 1);
        minus += binom_vanishing(h - 1, m);
    }
    let m_sym = if plus >= minus { plus - minus } else { BigUint::zero() };
    let mut cl = BigUint::one();
    let mut l = BTreeMap::new();
    for m in 1..=n.saturating_sub(2) {
        let lm =
            binom_vanishing(h - 1, m as i64) * binomial(n as u64, m as u64) * BigUint::from(2u8).pow((n - m) as u32);
        let base = factorial(m as u64) * BigUint::from(2u8).pow(m as u32) + 1u8;
        let exp = lm.to_u64().filter(|&e| e.saturating_mul(base.bits()) <= MAX_RESULT_BITS);
        cl *= base.pow(exp.ok_or_else(|| Error::Unsupported("count too large to print".into()))? as u32);
        l.insert(m, lm);
    }
    let to_u64 = |v: BigUint| v.to_u64().ok_or_else(|| Error::Unsupported("exponent too large".into()));
    let components = CountComponents { n_alt: to_u64(n_alt)?, m_sym: to_u64(m_sym)?, l };
    Ok(CountReport::assemble(n, k, bc, components, cl))
}

/// One row of the class census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRow {
    pub id: ClassId,
    pub size: u128,
    pub group: RotationGroupKind,
    pub cluster_count: u128,
    pub cluster_size: u128,
    pub special_split: bool,
}

fn fact_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn class_size(n: usize, k: usize, m: usize, chars: &[u8]) -> u128 {
    let mut size = binomial(n as u64, m as u64).to_u128().expect("small") << m;
    let mut arrangements = fact_u128(n - m);
    for run in chars.chunk_by(|a, b| a == b) {
        arrangements /= fact_u128(run.len());
    }
    size *= arrangements;
    for &c in chars {
        if 2 * c as usize != k - 1 {
            size *= 2;
        }
    }
    size
}

/// Number of classes without enumerating them.
pub fn class_count(n: usize, k: usize) -> u128 {
    let f = ((k - 1) / 2) as u64;
    (1..=n)
        .map(|m| {
            let t = (n - m) as u64;
            if t == 0 {
                1
            } else if f == 0 {
                0
            } else {
                binomial(f + t - 1, t).to_u128().unwrap_or(u128::MAX)
            }
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

fn chains(len: usize, max: u8, out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().copied().unwrap_or(1);
    for c in start..=max {
        cur.push(c);
        chains(len, max, out, cur);
        cur.pop();
    }
}

/// All classes, from characteristic chains; special classes appear as
/// their two halves.
pub fn census_classes(n: usize, k: usize) -> Result<Vec<ClassRow>> {
    let params = PuzzleParams::new(n, k)?;
    if class_count(n, k) > MAX_CENSUS_CLASSES as u128 {
        return Err(Error::Unsupported(format!("{params} has too many classes to enumerate")));
    }
    let f = ((k - 1) / 2) as u8;
    let mut rows = Vec::new();
    for m in 1..=n {
        let mut all = Vec::new();
        chains(n - m, f, &mut all, &mut Vec::new());
        for chars in all {
            let size = class_size(n, k, m, &chars);
            let cluster_count = binomial(n as u64, m as u64).to_u128().expect("small") << m;
            let special = is_special(params, m, &chars);
            let ids = if special {
                vec![ClassId::new(m, chars.clone()).with_q(-1), ClassId::new(m, chars).with_q(1)]
            } else {
                vec![ClassId::new(m, chars)]
            };
            let part = size / ids.len() as u128;
            for id in ids {
                rows.push(ClassRow {
                    group: dependent_group(params, &id),
                    size: part,
                    cluster_count,
                    cluster_size: part / cluster_count,
                    special_split: special,
                    id,
                });
            }
        }
    }
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(rows)
}

/// Class sizes by classifying every position of the cube.
pub fn class_sizes_by_enumeration(params: PuzzleParams, exec: Exec) -> Result<BTreeMap<ClassId, u128>> {
    let cells = params.cell_count().ok_or_else(|| Error::Unsupported(format!("{params} is too large")))?;
    let (n, k) = (params.n, params.k);
    let chunk = k.pow(2.min(n as u32));
    let chunks = cells.div_ceil(chunk);
    let partial = exec.map_range(chunks, |c| {
        let mut local: BTreeMap<ClassId, u128> = BTreeMap::new();
        let mut pos = vec![0u8; n];
        for idx in c * chunk..((c + 1) * chunk).min(cells) {
            let mut rest = idx;
            for a in (0..n).rev() {
                pos[a] = (rest % k) as u8;
                rest /= k;
            }
            if let Ok(id) = class_of(params, &pos) {
                *local.entry(id).or_insert(0) += 1;
            }
        }
        local
    });
    let mut total = BTreeMap::new();
    for local in partial {
        for (id, c) in local {
            *total.entry(id).or_insert(0) += c;
        }
    }
    Ok(total)
}

/// Count assembled from the class census: `BC`, a factor 3 per class with
/// quotient `Z3`, a factor 2 per class with quotient `Z2`, and `size + 1`
/// per nontrivial alternating cluster.
pub fn count_states_census(n: usize, k: usize) -> Result<CountReport> {
    let params = PuzzleParams::new(n, k)?;
    let rows = census_classes(n, k)?;
    let mut n_alt = 0;
    let mut m_sym = 0;
    let mut l: BTreeMap<usize, BigUint> = (1..=n.saturating_sub(2)).map(|m| (m, BigUint::zero())).collect();
    let mut cl = BigUint::one();
    for row in &rows {
        if row.id.m >= 2 {
            match row.group.quotient_kind() {
                LabelKind::Z3 => n_alt += 1,
                LabelKind::Z2 => m_sym += 1,
                LabelKind::Trivial => {}
            }
        }
        if has_cluster_invariant(params, &row.id) {
            *l.entry(n - row.id.m).or_default() += BigUint::from(row.cluster_count);
            cl *= BigUint::from(row.cluster_size + 1).pow(row.cluster_count as u32);
        }
    }
    let components = CountComponents { n_alt, m_sym, l };
    Ok(CountReport::assemble(n, k, frame_count(n, k), components, cl))
}
