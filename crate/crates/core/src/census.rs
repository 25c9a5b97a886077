//! Realized-type census over a base set, stratified by tuple length.
//!
//! For each length up to a requested maximum, the census counts distinct
//! types among all tuples drawn from `universe - base`, and separately among
//! repetition-free tuples. A hard tuple budget guards against blowup; lengths
//! beyond the budget are refused, never extrapolated.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::decomp::{sim_key, Partition, SimKey};
use crate::enumerate::{all_tuples, falling_count, power_count, repfree_tuples};
use crate::error::{Error, Result};
use crate::exec::map_vec;
use crate::qftype::{qf_type, DeltaSpec, QfType};
use crate::structure::{Signature, Structure};

pub use crate::decomp::DEFAULT_BUDGET;

/// Distinct-type counts at one tuple length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthCounts {
    pub count_all: u64,
    pub count_repfree: u64,
}

/// Census result: per-length distinct-type counts over a fixed base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub base: BTreeSet<usize>,
    pub delta: DeltaSpec,
    pub max_length: usize,
    pub per_length: BTreeMap<usize, LengthCounts>,
}

impl CensusReport {
    pub fn count_all(&self, len: usize) -> u64 {
        self.per_length.get(&len).map_or(0, |c| c.count_all)
    }

    pub fn count_repfree(&self, len: usize) -> u64 {
        self.per_length.get(&len).map_or(0, |c| c.count_repfree)
    }

    /// CSV serialization: header `len,count_all,count_repfree`, rows by
    /// ascending length.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("len,count_all,count_repfree\n");
        for (len, counts) in &self.per_length {
            out.push_str(&format!(
                "{},{},{}\n",
                len, counts.count_all, counts.count_repfree
            ));
        }
        out
    }
}

fn census_impl(
    s: &Structure,
    base: &BTreeSet<usize>,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
    par: bool,
) -> Result<CensusReport> {
    if max_len == 0 {
        return Err(Error::BadParameter {
            reason: "max_len must be >= 1".to_string(),
        });
    }
    s.check_base(base)?;
    let domain: Vec<usize> = s.universe().filter(|e| !base.contains(e)).collect();
    let tuples = power_count(domain.len(), max_len);
    if tuples > budget as u128 {
        return Err(Error::CensusTooLarge {
            tuples: tuples.min(u64::MAX as u128) as u64,
            budget,
        });
    }
    let mut per_length = BTreeMap::new();
    for len in 1..=max_len {
        let tuples = all_tuples(&domain, len);
        let types: Vec<QfType> = map_vec(par, &tuples, |tuple| {
            qf_type(s, tuple, base, delta).expect("validated inputs")
        });
        let mut all: HashSet<&QfType> = HashSet::new();
        let mut repfree: HashSet<&QfType> = HashSet::new();
        for (tuple, ty) in tuples.iter().zip(&types) {
            all.insert(ty);
            let distinct = tuple.iter().collect::<BTreeSet<_>>().len() == tuple.len();
            if distinct {
                repfree.insert(ty);
            }
        }
        per_length.insert(
            len,
            LengthCounts {
                count_all: all.len() as u64,
                count_repfree: repfree.len() as u64,
            },
        );
    }
    Ok(CensusReport {
        base: base.clone(),
        delta: delta.clone(),
        max_length: max_len,
        per_length,
    })
}

/// Count distinct types realized by tuples from `universe - base`, for every
/// length `1..=max_len`, both with and without repeated entries.
pub fn census(
    s: &Structure,
    base: &BTreeSet<usize>,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
) -> Result<CensusReport> {
    census_impl(s, base, max_len, delta, budget, true)
}

/// Sequential variant of [`census`]; identical result, used by benchmarks.
pub fn census_sequential(
    s: &Structure,
    base: &BTreeSet<usize>,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
) -> Result<CensusReport> {
    census_impl(s, base, max_len, delta, budget, false)
}

/// Census over the extended base `A ∪ ⋃_{j∈J} B_j` of a partition.
pub fn census_extended_base(
    s: &Structure,
    part: &Partition,
    part_indices: &BTreeSet<usize>,
    max_len: usize,
    delta: &DeltaSpec,
    budget: u64,
) -> Result<CensusReport> {
    let mut base = part.base().clone();
    for &j in part_indices {
        let block = part.parts().get(j).ok_or(Error::UnknownPart {
            index: j,
            parts: part.parts().len(),
        })?;
        base.extend(block.iter().copied());
    }
    census(s, &base, max_len, delta, budget)
}

/// Number of distinct [`SimKey`] classes of repetition-free tuples drawn
/// from parts outside `avoid`, per length `1..=max_len`.
pub fn count_sim_classes(
    s: &Structure,
    part: &Partition,
    max_len: usize,
    delta: &DeltaSpec,
    avoid: &BTreeSet<usize>,
    budget: u64,
) -> Result<BTreeMap<usize, u64>> {
    if max_len == 0 {
        return Err(Error::BadParameter {
            reason: "max_len must be >= 1".to_string(),
        });
    }
    for &j in avoid {
        if j >= part.parts().len() {
            return Err(Error::UnknownPart {
                index: j,
                parts: part.parts().len(),
            });
        }
    }
    let domain: Vec<usize> = (0..part.size())
        .filter(|&e| part.part_of(e).is_some_and(|p| !avoid.contains(&p)))
        .collect();
    let total: u128 = (1..=max_len)
        .map(|len| falling_count(domain.len(), len))
        .sum();
    if total > budget as u128 {
        return Err(Error::CensusTooLarge {
            tuples: total.min(u64::MAX as u128) as u64,
            budget,
        });
    }
    let mut out = BTreeMap::new();
    for len in 1..=max_len {
        let tuples = repfree_tuples(&domain, len);
        let keys: Vec<SimKey> = map_vec(true, &tuples, |tuple| {
            sim_key(s, part, tuple, delta).expect("tuple drawn from parts")
        });
        let distinct: HashSet<&SimKey> = keys.iter().collect();
        out.insert(len, distinct.len() as u64);
    }
    Ok(out)
}

/// Expand a structure with fresh unary predicates `U1..Uu` interpreted by
/// the given element sets. On a name collision the fresh name is suffixed
/// with `_` until unique.
pub fn expand_with_unary(s: &Structure, colorings: &[BTreeSet<usize>]) -> Result<Structure> {
    for coloring in colorings {
        s.check_base(coloring)?;
    }
    let mut names: Vec<String> = s.signature().names().map(str::to_string).collect();
    let mut decls: Vec<(String, usize)> = s
        .signature()
        .relations()
        .iter()
        .map(|(n, a)| (n.clone(), *a))
        .collect();
    let mut relations: BTreeMap<String, Vec<Vec<usize>>> = s
        .signature()
        .relations()
        .iter()
        .map(|(n, _)| {
            (
                n.clone(),
                s.relation(n).into_iter().flatten().cloned().collect(),
            )
        })
        .collect();
    for (i, coloring) in colorings.iter().enumerate() {
        let mut name = format!("U{}", i + 1);
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name.clone());
        decls.push((name.clone(), 1));
        relations.insert(name, coloring.iter().map(|&e| vec![e]).collect());
    }
    Ok(Structure::new(Signature::new(decls)?, s.size(), relations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::component_partition;
    use crate::generate::{generate, FamilyParams};

    fn set(elems: &[usize]) -> BTreeSet<usize> {
        elems.iter().copied().collect()
    }

    #[test]
    fn mated_pairs_census_over_transversal() {
        let s = generate(FamilyParams::MatedPairs { m: 3 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let report = census(&s, &set(&[0, 1, 2]), 1, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.count_repfree(1), 3);
    }

    #[test]
    fn two_class_census_over_empty_base() {
        let s = generate(FamilyParams::TwoClass { s: 3 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let report = census(&s, &BTreeSet::new(), 2, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.count_all(1), 1);
        assert_eq!(report.count_repfree(2), 2);
    }

    #[test]
    fn unary_cube_realizes_all_patterns() {
        let s = generate(FamilyParams::UnaryCube { u: 3 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let report = census(&s, &BTreeSet::new(), 1, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.count_all(1), 8);
    }

    #[test]
    fn census_budget_guard() {
        let s = generate(FamilyParams::Complete { n: 10 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        assert!(matches!(
            census(&s, &BTreeSet::new(), 4, &delta, 100),
            Err(Error::CensusTooLarge { .. })
        ));
    }

    #[test]
    fn delta_monotonicity_on_unary_cube() {
        let s = generate(FamilyParams::UnaryCube { u: 3 }).unwrap();
        let small = DeltaSpec::from_names(s.signature(), ["P1"]).unwrap();
        let large = DeltaSpec::from_names(s.signature(), ["P1", "P2"]).unwrap();
        let full = DeltaSpec::full(s.signature());
        let empty = BTreeSet::new();
        let r_small = census(&s, &empty, 2, &small, DEFAULT_BUDGET).unwrap();
        let r_large = census(&s, &empty, 2, &large, DEFAULT_BUDGET).unwrap();
        let r_full = census(&s, &empty, 2, &full, DEFAULT_BUDGET).unwrap();
        for len in 1..=2 {
            assert!(r_small.count_all(len) <= r_large.count_all(len));
            assert!(r_large.count_all(len) <= r_full.count_all(len));
            assert!(r_small.count_repfree(len) <= r_large.count_repfree(len));
            assert!(r_large.count_repfree(len) <= r_full.count_repfree(len));
        }
    }

    #[test]
    fn extended_base_reduces_to_plain_census() {
        let s = generate(FamilyParams::Equivalence { m: 3, s: 2 }).unwrap();
        let part = component_partition(&s, &BTreeSet::new()).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let ext = census_extended_base(&s, &part, &BTreeSet::new(), 2, &delta, DEFAULT_BUDGET)
            .unwrap();
        let plain = census(&s, &BTreeSet::new(), 2, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(ext, plain);
    }

    #[test]
    fn extended_base_with_all_parts_counts_nothing() {
        let s = generate(FamilyParams::Equivalence { m: 3, s: 2 }).unwrap();
        let part = component_partition(&s, &BTreeSet::new()).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let all: BTreeSet<usize> = (0..part.parts().len()).collect();
        let report = census_extended_base(&s, &part, &all, 2, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.count_all(1), 0);
        assert_eq!(report.count_all(2), 0);
    }

    #[test]
    fn extended_base_one_class_of_three() {
        // Remaining classes carry no atoms into the extended base, so they
        // are indistinguishable: a single length-1 type.
        let s = generate(FamilyParams::Equivalence { m: 3, s: 2 }).unwrap();
        let part = component_partition(&s, &BTreeSet::new()).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let report =
            census_extended_base(&s, &part, &set(&[0]), 1, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.count_repfree(1), 1);
    }

    #[test]
    fn sim_class_counts_on_equivalence() {
        let s = generate(FamilyParams::Equivalence { m: 3, s: 2 }).unwrap();
        let part = component_partition(&s, &BTreeSet::new()).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let counts =
            count_sim_classes(&s, &part, 2, &delta, &BTreeSet::new(), DEFAULT_BUDGET).unwrap();
        assert_eq!(counts[&1], 1);
        assert_eq!(counts[&2], 2);
    }

    #[test]
    fn sim_class_counts_zero_when_nothing_remains() {
        let s = generate(FamilyParams::Path { n: 3 }).unwrap();
        let part = Partition::new(3, set(&[0, 1, 2]), vec![]).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let counts =
            count_sim_classes(&s, &part, 2, &delta, &BTreeSet::new(), DEFAULT_BUDGET).unwrap();
        assert_eq!(counts[&1], 0);
        assert_eq!(counts[&2], 0);
    }

    #[test]
    fn unary_expansion_separates_colored_elements() {
        let s = generate(FamilyParams::MatedPairs { m: 2 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let before = census(&s, &BTreeSet::new(), 1, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(before.count_all(1), 1);
        let expanded = expand_with_unary(&s, &[set(&[0, 1])]).unwrap();
        let delta_plus = DeltaSpec::full(expanded.signature());
        let after = census(&expanded, &BTreeSet::new(), 1, &delta_plus, DEFAULT_BUDGET).unwrap();
        assert_eq!(after.count_all(1), 2);
    }

    #[test]
    fn empty_coloring_list_is_identity() {
        let s = generate(FamilyParams::Path { n: 4 }).unwrap();
        let expanded = expand_with_unary(&s, &[]).unwrap();
        assert_eq!(s, expanded);
    }

    #[test]
    fn unary_expansion_bound() {
        let s = generate(FamilyParams::MatedPairs { m: 3 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let colorings = [set(&[0, 2, 4]), set(&[1, 2])];
        let expanded = expand_with_unary(&s, &colorings).unwrap();
        let delta_plus = DeltaSpec::full(expanded.signature());
        let empty = BTreeSet::new();
        let before = census(&s, &empty, 2, &delta, DEFAULT_BUDGET).unwrap();
        let after = census(&expanded, &empty, 2, &delta_plus, DEFAULT_BUDGET).unwrap();
        let u = colorings.len() as u32;
        for len in 1..=2usize {
            let factor = 2u64.pow(u * len as u32);
            assert!(after.count_all(len) <= before.count_all(len) * factor);
            assert!(after.count_repfree(len) <= before.count_repfree(len) * factor);
        }
    }

    #[test]
    fn unary_expansion_resolves_name_collisions() {
        let s = generate(FamilyParams::UnaryCube { u: 2 }).unwrap();
        let expanded = expand_with_unary(&s, &[set(&[0])]).unwrap();
        assert!(expanded.signature().contains("U1"));
        let again = expand_with_unary(&expanded, &[set(&[1])]).unwrap();
        assert!(again.signature().contains("U1_"));
    }

    #[test]
    fn csv_shape() {
        let s = generate(FamilyParams::Path { n: 3 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let report = census(&s, &BTreeSet::new(), 2, &delta, DEFAULT_BUDGET).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("len,count_all,count_repfree"));
        assert!(lines.next().unwrap().starts_with("1,"));
        assert!(lines.next().unwrap().starts_with("2,"));
    }

    #[test]
    fn parallel_and_sequential_census_agree() {
        let s = generate(FamilyParams::Equivalence { m: 2, s: 3 }).unwrap();
        let delta = DeltaSpec::full(s.signature());
        let base = set(&[0]);
        let par = census(&s, &base, 3, &delta, DEFAULT_BUDGET).unwrap();
        let seq = census_sequential(&s, &base, 3, &delta, DEFAULT_BUDGET).unwrap();
        assert_eq!(par, seq);
    }
}
