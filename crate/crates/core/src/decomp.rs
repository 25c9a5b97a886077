//! Partitions, the block-equivalence relation on repetition-free tuples, and
//! congruence verification.
//!
//! A partition splits the universe into a base `A` and disjoint parts. Two
//! repetition-free tuples avoiding `A` are equivalent when their coordinates
//! fall into parts with the same index pattern and the matching blocks have
//! equal types over `A`. The partition is a congruence when equivalent tuples
//! always carry equal full types over `A`; component partitions satisfy this
//! at every length, which is what the all-lengths certificate records.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::enumerate::{falling_count, repfree_tuples};
use crate::error::{Error, Result};
use crate::exec::map_vec;
use crate::gaifman::components_over;
use crate::qftype::{qf_type, DeltaSpec, QfType};
use crate::structure::Structure;

/// Default cap on the number of tuples any single verification may touch.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A base set plus disjoint non-empty parts covering the rest of a universe
/// of the recorded size. Parts are kept sorted by least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    size: usize,
    base: BTreeSet<usize>,
    parts: Vec<BTreeSet<usize>>,
    /// Element id -> part index, `None` for base elements.
    part_of: Vec<Option<usize>>,
}

impl Partition {
    pub fn new(
        size: usize,
        base: BTreeSet<usize>,
        mut parts: Vec<BTreeSet<usize>>,
    ) -> Result<Partition> {
        let invalid = |reason: String| Error::InvalidPartition { reason };
        if parts.iter().any(BTreeSet::is_empty) {
            return Err(invalid("empty part".to_string()));
        }
        parts.sort_by_key(|p| *p.iter().next().expect("non-empty part"));
        let mut part_of = vec![None; size];
        for &b in &base {
            if b >= size {
                return Err(invalid(format!("base element {b} out of range")));
            }
        }
        for (idx, part) in parts.iter().enumerate() {
            for &e in part {
                if e >= size {
                    return Err(invalid(format!("element {e} out of range")));
                }
                if base.contains(&e) {
                    return Err(invalid(format!("element {e} in both base and a part")));
                }
                if part_of[e].is_some() {
                    return Err(invalid(format!("element {e} in two parts")));
                }
                part_of[e] = Some(idx);
            }
        }
        for (e, assigned) in part_of.iter().enumerate() {
            if assigned.is_none() && !base.contains(&e) {
                return Err(invalid(format!("element {e} not covered")));
            }
        }
        Ok(Partition {
            size,
            base,
            parts,
            part_of,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn base(&self) -> &BTreeSet<usize> {
        &self.base
    }

    pub fn parts(&self) -> &[BTreeSet<usize>] {
        &self.parts
    }

    pub fn part_of(&self, element: usize) -> Option<usize> {
        self.part_of.get(element).copied().flatten()
    }

    /// Elements outside the base, ascending.
    pub fn non_base(&self) -> Vec<usize> {
        (0..self.size).filter(|e| !self.base.contains(e)).collect()
    }
}

/// The size budget of a decomposition: base and every part at most `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KBudget {
    pub k: usize,
}

impl KBudget {
    pub fn new(k: usize) -> Result<KBudget> {
        if k == 0 {
            return Err(Error::BadParameter {
                reason: "k must be positive".to_string(),
            });
        }
        Ok(KBudget { k })
    }
}

/// Does the partition respect the size budget?
pub fn satisfies_budget(part: &Partition, k: KBudget) -> bool {
    part.base.len() <= k.k && part.parts.iter().all(|p| p.len() <= k.k)
}

/// Canonical key of the block equivalence: the grouping of coordinate
/// indices by containing part (blocks ordered by least index) together with
/// each block's type over the base. Part identity itself is not recorded, so
/// equal keys mean the tuples can be matched part-for-part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimKey {
    pub index_partition: Vec<Vec<usize>>,
    pub block_types: Vec<QfType>,
}

/// Compute the [`SimKey`] of a repetition-free tuple avoiding the base.
pub fn sim_key(
    s: &Structure,
    part: &Partition,
    tuple: &[usize],
    delta: &DeltaSpec,
) -> Result<SimKey> {
    let mut seen = BTreeSet::new();
    let mut by_part: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &e) in tuple.iter().enumerate() {
        if e >= part.size {
            return Err(Error::OutOfRange {
                element: e,
                size: part.size,
            });
        }
        if !seen.insert(e) {
            return Err(Error::RepeatedElement { element: e });
        }
        match part.part_of(e) {
            Some(p) => by_part.entry(p).or_default().push(i),
            None => return Err(Error::ElementInBase { element: e }),
        }
    }
    let mut blocks: Vec<Vec<usize>> = by_part.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    let block_types = blocks
        .iter()
        .map(|block| {
            let sub: Vec<usize> = block.iter().map(|&i| tuple[i]).collect();
            qf_type(s, &sub, &part.base, delta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimKey {
        index_partition: blocks,
        block_types,
    })
}

/// Are two tuples block-equivalent under the partition?
pub fn sim_equivalent(
    s: &Structure,
    part: &Partition,
    left: &[usize],
    right: &[usize],
    delta: &DeltaSpec,
) -> Result<bool> {
    Ok(sim_key(s, part, left, delta)? == sim_key(s, part, right, delta)?)
}

/// How far a congruence verdict is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateLevel {
    /// The parts are exactly the Gaifman components over the base, so the
    /// congruence extends to tuples of every length.
    AllLengths,
    /// Verified exhaustively up to the recorded maximum length only.
    UpToN,
}

/// A pair of equivalent tuples whose full types over the base disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Canonical form of the least atom distinguishing the two types.
    pub atom: String,
}

/// Outcome of congruence verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceVerdict {
    pub holds: bool,
    pub checked_max_len: usize,
    pub certificate_level: CertificateLevel,
    pub counterexample: Option<Counterexample>,
}

impl fmt::Display for CongruenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "holds: {}", self.holds)?;
        writeln!(f, "checked_max_len: {}", self.checked_max_len)?;
        match self.certificate_level {
            CertificateLevel::AllLengths => writeln!(f, "certificate_level: all-lengths")?,
            CertificateLevel::UpToN => {
                writeln!(f, "certificate_level: up-to-{}", self.checked_max_len)?
            }
        }
        match &self.counterexample {
            None => write!(f, "counterexample: none"),
            Some(cx) => write!(
                f,
                "counterexample: c=({}) d=({}) atom={}",
                cx.left.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                cx.right.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                cx.atom
            ),
        }
    }
}

fn check_partition_matches(s: &Structure, part: &Partition) -> Result<()> {
    if part.size != s.size() {
        return Err(Error::InvalidPartition {
            reason: format!(
                "partition covers universe of size {}, structure has size {}",
                part.size,
                s.size()
            ),
        });
    }
    Ok(())
}

fn check_tuple_budget(domain: usize, max_len: usize, budget: u64) -> Result<()> {
    let total: u128 = (1..=max_len).map(|len| falling_count(domain, len)).sum();
    if total > budget as u128 {
        return Err(Error::CensusTooLarge {
            tuples: total.min(u64::MAX as u128) as u64,
            budget,
        });
    }
    Ok(())
}

fn distinguishing_atom(left: &QfType, right: &QfType) -> String {
    left.atoms()
        .symmetric_difference(right.atoms())
        .next()
        .map(ToString::to_string)
        .unwrap_or_else(|| "(equality pattern)".to_string())
}

fn certificate_for(s: &Structure, part: &Partition) -> CertificateLevel {
    match components_over(s, &part.base) {
        Ok(comps) if comps == part.parts => CertificateLevel::AllLengths,
        _ => CertificateLevel::UpToN,
    }
}

fn congruence_impl(
    s: &Structure,
    part: &Partition,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
    par: bool,
) -> Result<CongruenceVerdict> {
    check_partition_matches(s, part)?;
    let domain = part.non_base();
    check_tuple_budget(domain.len(), max_len, budget)?;
    let mut counterexample = None;
    'lengths: for len in 1..=max_len {
        let tuples = repfree_tuples(&domain, len);
        let keyed: Vec<(SimKey, QfType)> = map_vec(par, &tuples, |tuple| {
            let key = sim_key(s, part, tuple, delta).expect("tuple drawn from parts");
            let full = qf_type(s, tuple, &part.base, delta).expect("validated inputs");
            (key, full)
        });
        // First occurrence per key, plus the first later mismatch against it.
        let mut groups: HashMap<&SimKey, (usize, Option<usize>)> = HashMap::new();
        for (j, (key, ty)) in keyed.iter().enumerate() {
            match groups.get_mut(key) {
                None => {
                    groups.insert(key, (j, None));
                }
                Some((first, mismatch)) => {
                    if mismatch.is_none() && keyed[*first].1 != *ty {
                        *mismatch = Some(j);
                    }
                }
            }
        }
        // The canonical counterexample has the lexicographically least first
        // tuple among the violated groups.
        let violated = groups
            .values()
            .filter_map(|&(first, mismatch)| mismatch.map(|m| (first, m)))
            .min_by(|a, b| tuples[a.0].cmp(&tuples[b.0]));
        if let Some((first, mismatch)) = violated {
            counterexample = Some(Counterexample {
                left: tuples[first].clone(),
                right: tuples[mismatch].clone(),
                atom: distinguishing_atom(&keyed[first].1, &keyed[mismatch].1),
            });
            break 'lengths;
        }
    }
    let holds = counterexample.is_none();
    let certificate_level = if holds {
        certificate_for(s, part)
    } else {
        CertificateLevel::UpToN
    };
    Ok(CongruenceVerdict {
        holds,
        checked_max_len: max_len,
        certificate_level,
        counterexample,
    })
}

/// Verify the congruence property for every repetition-free tuple length up
/// to `max_len`, grouping tuples by [`SimKey`].
pub fn is_congruence(
    s: &Structure,
    part: &Partition,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
) -> Result<CongruenceVerdict> {
    congruence_impl(s, part, max_len, delta, budget, true)
}

/// Sequential variant of [`is_congruence`]; same result, used by benchmarks.
pub fn is_congruence_sequential(
    s: &Structure,
    part: &Partition,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
) -> Result<CongruenceVerdict> {
    congruence_impl(s, part, max_len, delta, budget, false)
}

/// Reference oracle: a literal double loop over all tuple pairs, comparing
/// keys and full types pair by pair. Quadratic in the tuple count.
pub fn naive_is_congruence(
    s: &Structure,
    part: &Partition,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
) -> Result<CongruenceVerdict> {
    check_partition_matches(s, part)?;
    let domain = part.non_base();
    check_tuple_budget(domain.len(), max_len, budget)?;
    for len in 1..=max_len {
        let tuples = repfree_tuples(&domain, len);
        let keyed: Vec<(SimKey, QfType)> = tuples
            .iter()
            .map(|tuple| {
                let key = sim_key(s, part, tuple, delta).expect("tuple drawn from parts");
                let full = qf_type(s, tuple, &part.base, delta).expect("validated inputs");
                (key, full)
            })
            .collect();
        for i in 0..keyed.len() {
            for j in i + 1..keyed.len() {
                if keyed[i].0 == keyed[j].0 && keyed[i].1 != keyed[j].1 {
                    return Ok(CongruenceVerdict {
                        holds: false,
                        checked_max_len: max_len,
                        certificate_level: CertificateLevel::UpToN,
                        counterexample: Some(Counterexample {
                            left: tuples[i].clone(),
                            right: tuples[j].clone(),
                            atom: distinguishing_atom(&keyed[i].1, &keyed[j].1),
                        }),
                    });
                }
            }
        }
    }
    Ok(CongruenceVerdict {
        holds: true,
        checked_max_len: max_len,
        certificate_level: CertificateLevel::UpToN,
        counterexample: None,
    })
}

/// The partition whose parts are the Gaifman components over `base`.
pub fn component_partition(s: &Structure, base: &BTreeSet<usize>) -> Result<Partition> {
    let parts = components_over(s, base)?;
    Partition::new(s.size(), base.clone(), parts)
}

/// Per relation, the maximum number of tuples sharing one element in one
/// argument slot. A degree-1 relation relates each element to at most one
/// tuple per slot.
pub fn ma_degree(s: &Structure) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for (name, _) in s.signature().relations() {
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for tuple in s.relation(name).into_iter().flatten() {
            for (slot, &e) in tuple.iter().enumerate() {
                *counts.entry((e, slot)).or_insert(0) += 1;
            }
        }
        out.insert(name.clone(), counts.values().copied().max().unwrap_or(0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, FamilyParams};

    fn set(elems: &[usize]) -> BTreeSet<usize> {
        elems.iter().copied().collect()
    }

    fn split_partition_eq24() -> (Structure, Partition) {
        // equivalence(2,4): classes {0..3} and {4..7}; parts split the classes.
        let s = generate(FamilyParams::Equivalence { m: 2, s: 4 }).unwrap();
        let part = Partition::new(
            8,
            BTreeSet::new(),
            vec![set(&[0, 1, 4, 5]), set(&[2, 3, 6, 7])],
        )
        .unwrap();
        (s, part)
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(4, set(&[0]), vec![set(&[1, 2]), set(&[3])]).is_ok());
        assert!(Partition::new(4, set(&[0]), vec![set(&[1])]).is_err());
        assert!(Partition::new(4, set(&[0]), vec![set(&[0, 1]), set(&[2, 3])]).is_err());
        assert!(Partition::new(4, set(&[0]), vec![set(&[1, 2]), set(&[2, 3])]).is_err());
        assert!(Partition::new(2, BTreeSet::new(), vec![set(&[0]), set(&[5])]).is_err());
    }

    #[test]
    fn sim_key_cross_part_pair() {
        let (s, part) = split_partition_eq24();
        let delta = DeltaSpec::full(s.signature());
        let key = sim_key(&s, &part, &[0, 2], &delta).unwrap();
        assert_eq!(key.index_partition, vec![vec![0], vec![1]]);
        assert_eq!(key.block_types[0], key.block_types[1]);
    }

    #[test]
    fn sim_key_same_part_pair() {
        let (s, part) = split_partition_eq24();
        let delta = DeltaSpec::full(s.signature());
        let key = sim_key(&s, &part, &[0, 1], &delta).unwrap();
        assert_eq!(key.index_partition, vec![vec![0, 1]]);
        assert_eq!(key.block_types.len(), 1);
    }

    #[test]
    fn sim_key_rejects_repeats_and_base() {
        let (s, part) = split_partition_eq24();
        let delta = DeltaSpec::full(s.signature());
        assert!(matches!(
            sim_key(&s, &part, &[0, 0], &delta),
            Err(Error::RepeatedElement { element: 0 })
        ));
        let based = Partition::new(8, set(&[0]), vec![set(&[1, 2, 3]), set(&[4, 5, 6, 7])]).unwrap();
        assert!(matches!(
            sim_key(&s, &based, &[0, 1], &delta),
            Err(Error::ElementInBase { element: 0 })
        ));
    }

    #[test]
    fn sim_equivalent_examples() {
        let (s, part) = split_partition_eq24();
        let delta = DeltaSpec::full(s.signature());
        assert!(sim_equivalent(&s, &part, &[0, 2], &[0, 6], &delta).unwrap());
        assert!(!sim_equivalent(&s, &part, &[0, 2], &[0, 1], &delta).unwrap());
        assert!(sim_equivalent(&s, &part, &[0, 2], &[0, 2], &delta).unwrap());
    }

    #[test]
    fn class_splitting_partition_fails_with_canonical_counterexample() {
        let (s, part) = split_partition_eq24();
        let delta = DeltaSpec::full(s.signature());
        let verdict = is_congruence(&s, &part, 2, &delta, DEFAULT_BUDGET).unwrap();
        assert!(!verdict.holds);
        let cx = verdict.counterexample.unwrap();
        assert_eq!(cx.left, vec![0, 2]);
        assert_eq!(cx.right, vec![0, 6]);
        assert_eq!(cx.atom, "E(V0,V1)");
    }

    #[test]
    fn vacuous_partition_holds() {
        let s = generate(FamilyParams::Path { n: 4 }).unwrap();
        let part = Partition::new(4, set(&[0, 1, 2, 3]), vec![]).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let verdict = is_congruence(&s, &part, 3, &delta, DEFAULT_BUDGET).unwrap();
        assert!(verdict.holds);
        let naive = naive_is_congruence(&s, &part, 3, &delta, DEFAULT_BUDGET).unwrap();
        assert!(naive.holds);
    }

    #[test]
    fn complete_graph_any_partition_is_congruence_up_to_n() {
        let s = generate(FamilyParams::Complete { n: 5 }).unwrap();
        let part =
            Partition::new(5, BTreeSet::new(), vec![set(&[0, 1]), set(&[2, 3]), set(&[4])]).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let verdict = is_congruence(&s, &part, 4, &delta, DEFAULT_BUDGET).unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.certificate_level, CertificateLevel::UpToN);
    }

    #[test]
    fn component_partition_examples() {
        let path5 = generate(FamilyParams::Path { n: 5 }).unwrap();
        let part = component_partition(&path5, &set(&[2])).unwrap();
        assert_eq!(part.parts(), &[set(&[0, 1]), set(&[3, 4])]);

        let mated = generate(FamilyParams::MatedPairs { m: 3 }).unwrap();
        let part = component_partition(&mated, &BTreeSet::new()).unwrap();
        assert_eq!(part.parts().len(), 3);
        assert!(part.parts().iter().all(|p| p.len() == 2));

        let eq = generate(FamilyParams::Equivalence { m: 3, s: 2 }).unwrap();
        let part = component_partition(&eq, &set(&[0, 2, 4])).unwrap();
        assert_eq!(part.parts(), &[set(&[1]), set(&[3]), set(&[5])]);
    }

    #[test]
    fn component_partition_is_congruence_with_all_lengths_certificate() {
        let s = generate(FamilyParams::Equivalence { m: 2, s: 4 }).unwrap();
        let part = component_partition(&s, &set(&[0])).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let verdict = is_congruence(&s, &part, 3, &delta, DEFAULT_BUDGET).unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.certificate_level, CertificateLevel::AllLengths);
        let naive = naive_is_congruence(&s, &part, 3, &delta, DEFAULT_BUDGET).unwrap();
        assert!(naive.holds);
    }

    #[test]
    fn budget_examples() {
        let path9 = generate(FamilyParams::Path { n: 9 }).unwrap();
        let part = component_partition(&path9, &set(&[2, 5])).unwrap();
        assert!(satisfies_budget(&part, KBudget::new(3).unwrap()));
        assert!(!satisfies_budget(&part, KBudget::new(2).unwrap()));
        let full = Partition::new(9, (0..9).collect(), vec![]).unwrap();
        assert!(satisfies_budget(&full, KBudget::new(9).unwrap()));
    }

    #[test]
    fn tuple_budget_guard() {
        let s = generate(FamilyParams::Complete { n: 6 }).unwrap();
        let part = component_partition(&s, &BTreeSet::new()).unwrap();
        let delta = DeltaSpec::full(s.signature());
        assert!(matches!(
            is_congruence(&s, &part, 3, &delta, 10),
            Err(Error::CensusTooLarge { .. })
        ));
    }

    #[test]
    fn degree_diagnostic() {
        let mated = generate(FamilyParams::MatedPairs { m: 4 }).unwrap();
        assert_eq!(ma_degree(&mated)["R"], 1);
        let eq = generate(FamilyParams::Equivalence { m: 2, s: 3 }).unwrap();
        assert_eq!(ma_degree(&eq)["E"], 3);
        let complete = generate(FamilyParams::Complete { n: 5 }).unwrap();
        assert_eq!(ma_degree(&complete)["E"], 4);
    }
}
