//! Prime integer relations over ±1-signed integers.
//!
//! A sign sequence `s_1..s_L` paired with integers `a_1..a_L` self-organizes
//! into a dyadic hierarchy: a level-`l` node covers an aligned block of `2^l`
//! positions on which the signed power sums `Σ s_i·a_i^k` vanish for every
//! `k < l`. The process climbs one level at a time and stops at the first
//! level where some block fails. All arithmetic is exact.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered ±1 element states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignSequence(Vec<i8>);

impl SignSequence {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::invalid("sign sequence must be non-empty"));
        }
        if let Some(pos) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid(format!(
                "sign at position {pos} is {}, expected +1 or -1",
                signs[pos]
            )));
        }
        Ok(SignSequence(signs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// The sequence with every sign flipped.
    pub fn negated(&self) -> Self {
        SignSequence(self.0.iter().map(|s| -s).collect())
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignSequence {
    type Err = Error;

    /// Parses strings such as `"+--+"` (whitespace ignored).
    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::invalid(format!("unexpected sign character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SignSequence::new(signs)
    }
}

/// Integers `a_i` attached to the sign positions. Entries are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerAssignment(Vec<i64>);

impl IntegerAssignment {
    pub fn new(integers: Vec<i64>) -> Result<Self> {
        if integers.is_empty() {
            return Err(Error::invalid("integer assignment must be non-empty"));
        }
        let mut sorted = integers.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("integer {} assigned twice", w[0])));
        }
        Ok(IntegerAssignment(integers))
    }

    /// The default assignment `a_i = L + 1 - i`, i.e. `L, L-1, ..., 1`.
    pub fn descending(len: usize) -> Self {
        IntegerAssignment((1..=len as i64).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

/// Prouhet-Thue-Morse signs: entry `i` (1-based) is `+1` iff `i-1` has even
/// binary weight.
pub fn ptm_sequence(length: usize) -> Result<SignSequence> {
    if length == 0 {
        return Err(Error::invalid("PTM length must be positive"));
    }
    Ok(SignSequence((0..length).map(ptm_sign).collect()))
}

/// PTM symbol at 0-based position `index`.
pub fn ptm_sign(index: usize) -> i8 {
    if index.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Σ_{i∈block} s_i·a_i^k`, exactly.
pub fn power_sum(signs: &SignSequence, ints: &IntegerAssignment, k: u32, block: Range<usize>) -> Result<BigInt> {
    check_block(signs, ints, &block)?;
    Ok(signed_power_sum(&signs.0[block.clone()], &ints.0[block], k))
}

fn check_block(signs: &SignSequence, ints: &IntegerAssignment, block: &Range<usize>) -> Result<()> {
    if signs.len() != ints.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} signs, {} integers",
            signs.len(),
            ints.len()
        )));
    }
    if block.start > block.end || block.end > signs.len() {
        return Err(Error::invalid(format!(
            "block {}..{} out of range for length {}",
            block.start,
            block.end,
            signs.len()
        )));
    }
    Ok(())
}

fn signed_power_sum(signs: &[i8], ints: &[i64], k: u32) -> BigInt {
    signs.iter().zip(ints).fold(BigInt::zero(), |acc, (&s, &a)| {
        let term = num_traits::pow(BigInt::from(a), k as usize);
        if s > 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// All signed power sums of orders `0..orders` on one block, sharing powers.
fn power_sums_upto(signs: &[i8], ints: &[i64], orders: usize) -> Vec<BigInt> {
    let mut sums = vec![BigInt::zero(); orders];
    for (&s, &a) in signs.iter().zip(ints) {
        let base = BigInt::from(a);
        let mut pow = BigInt::one();
        for sum in sums.iter_mut() {
            if s > 0 {
                *sum += &pow;
            } else {
                *sum -= &pow;
            }
            pow *= &base;
        }
    }
    sums
}

/// One relation: an aligned block of `2^level` positions whose signed power
/// sums of orders `0..level` all vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationNode {
    pub level: usize,
    pub block: Range<usize>,
    /// Entry `k` is the order-`k` signed power sum over the block.
    pub power_sums: Vec<BigInt>,
    pub is_prime: bool,
}

/// Why the process could not reach the level above the structural level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blockage {
    /// `2^level` blocks do not tile the sequence.
    Incomplete { level: usize },
    /// A block at `level` has a nonzero sum of the given order.
    NonzeroSum {
        level: usize,
        block: Range<usize>,
        order: usize,
        value: BigInt,
    },
}

impl Blockage {
    pub fn level(&self) -> usize {
        match self {
            Blockage::Incomplete { level } | Blockage::NonzeroSum { level, .. } => *level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hierarchy {
    pub signs: SignSequence,
    pub integers: IntegerAssignment,
    /// `levels[l - 1]` holds the level-`l` nodes in block order.
    pub levels: Vec<Vec<RelationNode>>,
    pub structural_level: usize,
}

impl Hierarchy {
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn nodes(&self, level: usize) -> &[RelationNode] {
        match level {
            0 => &[],
            l => self.levels.get(l - 1).map(Vec::as_slice).unwrap_or(&[]),
        }
    }

    /// Signed power sums of order `structural_level` over each top block.
    ///
    /// These are the sums that would also have to vanish for the top blocks
    /// to count as relations one order higher. For PTM-16 over `16..1` the
    /// single entry is the nonzero order-4 sum.
    pub fn next_order_sums(&self) -> Vec<BigInt> {
        let size = 1usize << self.structural_level;
        let order = self.structural_level as u32;
        (0..self.len() / size)
            .map(|b| {
                let r = b * size..(b + 1) * size;
                signed_power_sum(&self.signs.0[r.clone()], &self.integers.0[r], order)
            })
            .collect()
    }

    /// How the climb to `structural_level + 1` fails.
    pub fn blockage(&self) -> Blockage {
        find_blockage(&self.signs, &self.integers, self.structural_level + 1)
            .expect("structural level is maximal for a built hierarchy")
    }
}

/// Returns `None` when every aligned `2^level` block satisfies all sums of
/// orders `0..level`; otherwise the first failure.
fn find_blockage(signs: &SignSequence, ints: &IntegerAssignment, level: usize) -> Option<Blockage> {
    let len = signs.len();
    let size = match 1usize.checked_shl(level as u32) {
        Some(s) if s <= len && len.is_multiple_of(s) => s,
        _ => return Some(Blockage::Incomplete { level }),
    };
    for lo in (0..len).step_by(size) {
        let r = lo..lo + size;
        let sums = power_sums_upto(&signs.0[r.clone()], &ints.0[r.clone()], level);
        if let Some((order, value)) = sums.into_iter().enumerate().find(|(_, v)| !v.is_zero()) {
            return Some(Blockage::NonzeroSum {
                level,
                block: r,
                order,
                value,
            });
        }
    }
    None
}

/// Order-`(l-1)` sum vanishes on the block but on neither half.
pub fn is_prime_relation(node: &RelationNode, signs: &SignSequence, ints: &IntegerAssignment) -> bool {
    let block = &node.block;
    if node.level == 0
        || block.end > signs.len()
        || block.end > ints.len()
        || block.end - block.start != 1usize << node.level
    {
        return false;
    }
    let order = (node.level - 1) as u32;
    let mid = block.start + (block.end - block.start) / 2;
    let sum = |r: Range<usize>| signed_power_sum(&signs.0[r.clone()], &ints.0[r], order);
    sum(block.clone()).is_zero() && !sum(block.start..mid).is_zero() && !sum(mid..block.end).is_zero()
}

fn make_node(signs: &SignSequence, ints: &IntegerAssignment, level: usize, block: Range<usize>) -> RelationNode {
    let power_sums = power_sums_upto(&signs.0[block.clone()], &ints.0[block.clone()], level);
    let mut node = RelationNode {
        level,
        block,
        power_sums,
        is_prime: false,
    };
    node.is_prime = is_prime_relation(&node, signs, ints);
    node
}

/// Climbs levels `1, 2, ...` while every aligned block qualifies.
pub fn build_hierarchy(signs: &SignSequence, ints: &IntegerAssignment) -> Result<Hierarchy> {
    if signs.len() != ints.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} signs, {} integers",
            signs.len(),
            ints.len()
        )));
    }
    let mut levels = Vec::new();
    let mut level = 1;
    while find_blockage(signs, ints, level).is_none() {
        let size = 1usize << level;
        let nodes = (0..signs.len())
            .step_by(size)
            .map(|lo| make_node(signs, ints, level, lo..lo + size))
            .collect();
        levels.push(nodes);
        level += 1;
    }
    Ok(Hierarchy {
        signs: signs.clone(),
        integers: ints.clone(),
        structural_level: levels.len(),
        levels,
    })
}

/// Result of rechecking one node from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCheck {
    pub level: usize,
    pub block: Range<usize>,
    pub recomputed: Vec<BigInt>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub nodes: Vec<NodeCheck>,
    /// Every level `1..=structural_level` is fully covered, and no nodes
    /// exist above it.
    pub coverage_ok: bool,
    /// `None` if level `structural_level + 1` is in fact reachable.
    pub blockage: Option<Blockage>,
    pub next_order_sums: Vec<BigInt>,
}

impl VerificationReport {
    pub fn failed_nodes(&self) -> impl Iterator<Item = &NodeCheck> {
        self.nodes.iter().filter(|n| !n.passed)
    }

    pub fn passed(&self) -> bool {
        self.coverage_ok && self.blockage.is_some() && self.nodes.iter().all(|n| n.passed)
    }
}

/// Recomputes every node directly and checks the structural level is maximal.
/// Corrupted nodes are reported, never raised.
pub fn verify_hierarchy(h: &Hierarchy) -> VerificationReport {
    let len = h.signs.len().min(h.integers.len());
    let lengths_match = h.signs.len() == h.integers.len();

    let mut nodes = Vec::new();
    for (idx, level_nodes) in h.levels.iter().enumerate() {
        for node in level_nodes {
            let b = &node.block;
            let shape_ok = node.level == idx + 1
                && b.end <= len
                && b.start < b.end
                && b.end - b.start == 1usize << node.level
                && b.start % (1usize << node.level) == 0;
            let recomputed = if shape_ok {
                (0..node.level as u32)
                    .map(|k| signed_power_sum(&h.signs.0[b.clone()], &h.integers.0[b.clone()], k))
                    .collect()
            } else {
                Vec::new()
            };
            let passed = shape_ok
                && recomputed.len() == node.power_sums.len()
                && recomputed.iter().zip(&node.power_sums).all(|(r, s)| r == s)
                && recomputed.iter().all(Zero::is_zero);
            nodes.push(NodeCheck {
                level: node.level,
                block: b.clone(),
                recomputed,
                passed,
            });
        }
    }

    let coverage_ok = lengths_match
        && h.levels.len() == h.structural_level
        && h.levels.iter().enumerate().all(|(idx, level_nodes)| {
            let size = 1usize << (idx + 1);
            len.is_multiple_of(size)
                && level_nodes.len() == len / size
                && level_nodes
                    .iter()
                    .enumerate()
                    .all(|(j, n)| n.block == (j * size..(j + 1) * size))
        });

    let blockage = if lengths_match {
        find_blockage(&h.signs, &h.integers, h.structural_level + 1)
    } else {
        None
    };
    let next_order_sums = if coverage_ok { h.next_order_sums() } else { Vec::new() };

    VerificationReport {
        nodes,
        coverage_ok,
        blockage,
        next_order_sums,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct LevelJson {
    level: usize,
    blocks: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct HierarchyJson {
    signs: Vec<i8>,
    integers: Vec<i64>,
    levels: Vec<LevelJson>,
    structural_level: usize,
}

impl Hierarchy {
    pub fn to_json(&self) -> String {
        let doc = HierarchyJson {
            signs: self.signs.0.clone(),
            integers: self.integers.0.clone(),
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(idx, nodes)| LevelJson {
                    level: idx + 1,
                    blocks: nodes.iter().map(|n| [n.block.start, n.block.end]).collect(),
                })
                .collect(),
            structural_level: self.structural_level,
        };
        serde_json::to_string(&doc).expect("hierarchy serializes")
    }

    /// Reads a hierarchy document. Node power sums are computed from the
    /// stored data and the declared structure is kept as-is, so
    /// [`verify_hierarchy`] can judge a hand-edited file.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HierarchyJson = serde_json::from_str(text)?;
        let signs = SignSequence::new(doc.signs)?;
        let integers = IntegerAssignment::new(doc.integers)?;
        if signs.len() != integers.len() {
            return Err(Error::format("signs and integers differ in length"));
        }
        let mut levels = Vec::with_capacity(doc.levels.len());
        for (idx, lvl) in doc.levels.iter().enumerate() {
            if lvl.level != idx + 1 {
                return Err(Error::format(format!(
                    "levels must be listed in order 1, 2, ...; found {} at position {}",
                    lvl.level,
                    idx + 1
                )));
            }
            let nodes = lvl
                .blocks
                .iter()
                .map(|&[lo, hi]| {
                    if lo >= hi || hi > signs.len() {
                        return Err(Error::format(format!("block [{lo}, {hi}] out of range")));
                    }
                    let mut node = RelationNode {
                        level: lvl.level,
                        block: lo..hi,
                        power_sums: (0..lvl.level as u32)
                            .map(|k| signed_power_sum(&signs.0[lo..hi], &integers.0[lo..hi], k))
                            .collect(),
                        is_prime: false,
                    };
                    node.is_prime = is_prime_relation(&node, &signs, &integers);
                    Ok(node)
                })
                .collect::<Result<Vec<_>>>()?;
            levels.push(nodes);
        }
        Ok(Hierarchy {
            signs,
            integers,
            levels,
            structural_level: doc.structural_level,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> SignSequence {
        s.parse().unwrap()
    }

    #[test]
    fn ptm_prefixes() {
        assert_eq!(ptm_sequence(8).unwrap().to_string(), "+--+-++-");
        assert_eq!(ptm_sequence(1).unwrap().to_string(), "+");
        assert_eq!(ptm_sequence(16).unwrap().to_string(), "+--+-++--++-+--+");
        assert!(matches!(ptm_sequence(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn ptm16_integer_states() {
        let s = ptm_sequence(16).unwrap();
        let a = IntegerAssignment::descending(16);
        let positive: Vec<i64> = s
            .as_slice()
            .iter()
            .zip(a.as_slice())
            .filter(|(s, _)| **s > 0)
            .map(|(_, a)| *a)
            .collect();
        assert_eq!(positive, vec![16, 13, 11, 10, 7, 6, 4, 1]);
    }

    #[test]
    fn single_term_power_sum() {
        let s = seq("+");
        let a = IntegerAssignment::new(vec![5]).unwrap();
        assert_eq!(power_sum(&s, &a, 2, 0..1).unwrap(), BigInt::from(25));
        assert_eq!(power_sum(&s, &a, 0, 0..1).unwrap(), BigInt::from(1));
    }

    #[test]
    fn out_of_range_block() {
        let s = ptm_sequence(4).unwrap();
        let a = IntegerAssignment::descending(4);
        assert!(matches!(power_sum(&s, &a, 1, 2..5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn constant_signs_stay_at_level_zero() {
        let h = build_hierarchy(&seq("++"), &IntegerAssignment::new(vec![2, 1]).unwrap()).unwrap();
        assert_eq!(h.structural_level, 0);
        match h.blockage() {
            Blockage::NonzeroSum {
                level, order, value, ..
            } => {
                assert_eq!((level, order), (1, 0));
                assert_eq!(value, BigInt::from(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let r = build_hierarchy(&seq("+-"), &IntegerAssignment::descending(3));
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn duplicate_integers_rejected() {
        assert!(IntegerAssignment::new(vec![3, 1, 3]).is_err());
    }

    #[test]
    fn bad_sign_rejected() {
        assert!(SignSequence::new(vec![1, 0, -1]).is_err());
        assert!("+x-".parse::<SignSequence>().is_err());
    }

    #[test]
    fn primality_examples() {
        let s = ptm_sequence(16).unwrap();
        let a = IntegerAssignment::descending(16);
        let pair = make_node(&s, &a, 1, 0..2);
        assert!(is_prime_relation(&pair, &s, &a));
        let quad = make_node(&s, &a, 2, 0..4);
        assert!(is_prime_relation(&quad, &s, &a));

        let s4 = ptm_sequence(4).unwrap();
        let a4 = IntegerAssignment::descending(4);
        let low = make_node(&s4, &a4, 2, 0..4);
        assert!(is_prime_relation(&low, &s4, &a4));
    }

    #[test]
    fn composite_when_halves_already_vanish() {
        // (+ + - -) over (3 -3 5 -5): orders 0 and 1 vanish on the block, and
        // order 1 also vanishes on each half, so it splits into two relations.
        let s = seq("++--");
        let a = IntegerAssignment::new(vec![3, -3, 5, -5]).unwrap();
        let node = make_node(&s, &a, 2, 0..4);
        assert!(node.power_sums.iter().all(Zero::is_zero));
        assert!(!node.is_prime);

        // (+ - - +) over (1 2 3 4): order-1 halves are -1 and +1.
        let s = seq("+--+");
        let a = IntegerAssignment::new(vec![1, 2, 3, 4]).unwrap();
        assert!(make_node(&s, &a, 2, 0..4).is_prime);
    }

    #[test]
    fn non_power_of_two_length() {
        // 12 = 4 * 3: level 2 tiles, level 3 does not.
        let s = ptm_sequence(4).unwrap();
        let tiled: Vec<i8> = s.as_slice().iter().cycle().take(12).copied().collect();
        let s = SignSequence::new(tiled).unwrap();
        let h = build_hierarchy(&s, &IntegerAssignment::descending(12)).unwrap();
        assert_eq!(h.structural_level, 2);
        assert_eq!(h.nodes(2).len(), 3);
        assert_eq!(h.blockage(), Blockage::Incomplete { level: 3 });
        assert!(verify_hierarchy(&h).passed());
    }

    #[test]
    fn json_roundtrip_preserves_structure() {
        let h = build_hierarchy(&ptm_sequence(16).unwrap(), &IntegerAssignment::descending(16)).unwrap();
        let back = Hierarchy::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn json_with_false_claim_fails_verification() {
        let text = r#"{"signs":[1,1],"integers":[2,1],"levels":[{"level":1,"blocks":[[0,2]]}],"structural_level":1}"#;
        let h = Hierarchy::from_json(text).unwrap();
        let report = verify_hierarchy(&h);
        assert!(!report.passed());
        assert_eq!(report.failed_nodes().count(), 1);
    }
}
