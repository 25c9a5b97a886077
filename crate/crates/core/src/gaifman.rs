//! Gaifman graph of a structure and connected components over a base.
//!
//! Two elements are adjacent when some relation tuple contains both. The
//! components of `universe - base` are the natural carrier for component
//! decompositions: a relation tuple avoiding the base can never meet two
//! distinct components.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::structure::Structure;

/// Symmetric irreflexive adjacency over element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaifmanGraph {
    size: usize,
    adjacency: Vec<BTreeSet<usize>>,
}

impl GaifmanGraph {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    /// Edges as ordered pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (a, nbrs) in self.adjacency.iter().enumerate() {
            for &b in nbrs.iter().filter(|&&b| b > a) {
                out.insert((a, b));
            }
        }
        out
    }

    /// Connected components of the graph restricted to `universe - base`,
    /// sorted by least element.
    pub fn components_over(&self, base: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.size];
        for &b in base {
            seen[b] = true;
        }
        let mut components = Vec::new();
        for start in 0..self.size {
            if seen[start] {
                continue;
            }
            let mut component = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                component.insert(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            components.push(component);
        }
        components
    }
}

/// Build the Gaifman graph of a structure.
pub fn gaifman(s: &Structure) -> GaifmanGraph {
    let mut adjacency = vec![BTreeSet::new(); s.size()];
    for (name, _) in s.signature().relations() {
        for tuple in s.relation(name).into_iter().flatten() {
            for (i, &a) in tuple.iter().enumerate() {
                for &b in &tuple[i + 1..] {
                    if a != b {
                        adjacency[a].insert(b);
                        adjacency[b].insert(a);
                    }
                }
            }
        }
    }
    GaifmanGraph {
        size: s.size(),
        adjacency,
    }
}

/// Components of `universe - base` in the Gaifman graph of `s`.
pub fn components_over(s: &Structure, base: &BTreeSet<usize>) -> Result<Vec<BTreeSet<usize>>> {
    s.check_base(base)?;
    Ok(gaifman(s).components_over(base))
}
