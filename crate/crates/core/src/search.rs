//! Search for decompositions within a size budget.
//!
//! The `components` method looks for a base `A` with `|A| <= k` whose Gaifman
//! components all have size at most `k` (the vertex-integrity objective),
//! branching on the vertices of an oversized component and deepening the
//! allowed base size so the returned base is as small as possible. It is
//! sound but incomplete: only component partitions are considered.
//!
//! The `exhaustive` method enumerates every base of size at most `k` and
//! every partition of the remainder into parts of size at most `k`
//! (restricted-growth-string order), returning the first that verifies as a
//! congruence up to the requested length. It is complete at that length but
//! only feasible for small structures.

use std::collections::{BTreeSet, HashSet};
use std::str::FromStr;

use itertools::Itertools;

use crate::decomp::{
    component_partition, is_congruence, CongruenceVerdict, KBudget, Partition, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::gaifman::{gaifman, GaifmanGraph};
use crate::qftype::DeltaSpec;
use crate::structure::Structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Components,
    Exhaustive,
}

impl FromStr for SearchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<SearchMethod> {
        match s {
            "components" => Ok(SearchMethod::Components),
            "exhaustive" => Ok(SearchMethod::Exhaustive),
            other => Err(Error::BadParameter {
                reason: format!("unknown method `{other}`"),
            }),
        }
    }
}

/// Knobs for [`find_decomposition`].
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Verification length for the returned partition (and for candidate
    /// filtering in the exhaustive method).
    pub max_len: usize,
    /// Restrict the search to partitions with an empty base.
    pub empty_base: bool,
    /// Largest structure size the exhaustive method accepts.
    pub exhaustive_limit: usize,
    /// Tuple budget forwarded to congruence verification.
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            max_len: 3,
            empty_base: false,
            exhaustive_limit: 10,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Depth-first branch on the vertices of the first oversized component.
/// Returns the first base (in branching order) of size at most `depth_limit`
/// leaving only components of size at most `k`.
fn branch(
    graph: &GaifmanGraph,
    k: usize,
    depth_limit: usize,
    base: &mut BTreeSet<usize>,
    visited: &mut HashSet<Vec<usize>>,
) -> Option<BTreeSet<usize>> {
    let key: Vec<usize> = base.iter().copied().collect();
    if !visited.insert(key) {
        return None;
    }
    let comps = graph.components_over(base);
    let oversized = comps.iter().find(|c| c.len() > k);
    let Some(oversized) = oversized else {
        return Some(base.clone());
    };
    if base.len() >= depth_limit {
        return None;
    }
    // Any valid base within the depth limit must hit this component.
    let candidates: Vec<usize> = oversized.iter().copied().collect();
    for v in candidates {
        base.insert(v);
        if let Some(found) = branch(graph, k, depth_limit, base, visited) {
            base.remove(&v);
            return Some(found);
        }
        base.remove(&v);
    }
    None
}

fn find_by_components(
    s: &Structure,
    k: KBudget,
    delta: &DeltaSpec,
    config: &SearchConfig,
) -> Result<Option<(Partition, CongruenceVerdict)>> {
    let graph = gaifman(s);
    let base = if config.empty_base {
        let empty = BTreeSet::new();
        if graph.components_over(&empty).iter().all(|c| c.len() <= k.k) {
            Some(empty)
        } else {
            None
        }
    } else {
        // Iterative deepening on |A| keeps the returned base minimal.
        (0..=k.k).find_map(|depth| {
            let mut visited = HashSet::new();
            branch(&graph, k.k, depth, &mut BTreeSet::new(), &mut visited)
        })
    };
    let Some(base) = base else {
        return Ok(None);
    };
    let part = component_partition(s, &base)?;
    let verdict = is_congruence(s, &part, config.max_len, delta, config.budget)?;
    Ok(Some((part, verdict)))
}

/// All set partitions of `elems` in restricted-growth-string order, filtered
/// to parts of size at most `max_part`.
fn set_partitions(elems: &[usize], max_part: usize) -> Vec<Vec<BTreeSet<usize>>> {
    fn recurse(
        elems: &[usize],
        max_part: usize,
        pos: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<BTreeSet<usize>>>,
    ) {
        if pos == elems.len() {
            out.push(
                blocks
                    .iter()
                    .map(|b| b.iter().copied().collect())
                    .collect(),
            );
            return;
        }
        for i in 0..=blocks.len() {
            if i < blocks.len() {
                if blocks[i].len() >= max_part {
                    continue;
                }
                blocks[i].push(elems[pos]);
                recurse(elems, max_part, pos + 1, blocks, out);
                blocks[i].pop();
            } else {
                blocks.push(vec![elems[pos]]);
                recurse(elems, max_part, pos + 1, blocks, out);
                blocks.pop();
            }
        }
    }
    let mut out = Vec::new();
    recurse(elems, max_part, 0, &mut Vec::new(), &mut out);
    out
}

fn find_by_exhaustion(
    s: &Structure,
    k: KBudget,
    delta: &DeltaSpec,
    config: &SearchConfig,
) -> Result<Option<(Partition, CongruenceVerdict)>> {
    if s.size() > config.exhaustive_limit {
        return Err(Error::ExhaustiveTooLarge {
            size: s.size(),
            limit: config.exhaustive_limit,
        });
    }
    let universe: Vec<usize> = s.universe().collect();
    let base_sizes: Vec<usize> = if config.empty_base {
        vec![0]
    } else {
        (0..=k.k.min(s.size())).collect()
    };
    for base_size in base_sizes {
        for base in universe.iter().copied().combinations(base_size) {
            let base: BTreeSet<usize> = base.into_iter().collect();
            let rest: Vec<usize> = universe
                .iter()
                .copied()
                .filter(|e| !base.contains(e))
                .collect();
            for parts in set_partitions(&rest, k.k) {
                let part = Partition::new(s.size(), base.clone(), parts)?;
                let verdict = is_congruence(s, &part, config.max_len, delta, config.budget)?;
                if verdict.holds {
                    return Ok(Some((part, verdict)));
                }
            }
        }
    }
    Ok(None)
}

/// Search for a partition within the size budget that is a congruence.
/// Returns `None` when the chosen method finds nothing.
pub fn find_decomposition(
    s: &Structure,
    k: KBudget,
    method: SearchMethod,
    delta: &DeltaSpec,
    config: &SearchConfig,
) -> Result<Option<(Partition, CongruenceVerdict)>> {
    match method {
        SearchMethod::Components => find_by_components(s, k, delta, config),
        SearchMethod::Exhaustive => find_by_exhaustion(s, k, delta, config),
    }
}
