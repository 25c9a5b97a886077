//! Generators for the example families used throughout the experiments.
//!
//! Each generator produces a fully valid structure. Graph families use a
//! single symmetric binary relation `E`; mated pairs use `R`; the unary cube
//! uses predicates `P1..Pu`.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

/// The structure families the toolkit can generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyParams {
    /// `2m` elements; element `i < m` is `R`-related exactly to `m + i`.
    MatedPairs { m: usize },
    /// `m` blocks of `s` consecutive elements; `E` is the full equivalence
    /// relation with those blocks as classes (reflexive pairs included).
    Equivalence { m: usize, s: usize },
    /// `Equivalence` with exactly two classes of size `s`.
    TwoClass { s: usize },
    /// `2^u` elements; element `i` satisfies `Pj` iff bit `j-1` of `i` is set.
    UnaryCube { u: usize },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    /// `n` vertices, element 0 the center joined to every other element.
    Star { n: usize },
}

impl FamilyParams {
    pub fn family_name(&self) -> &'static str {
        match self {
            FamilyParams::MatedPairs { .. } => "mated-pairs",
            FamilyParams::Equivalence { .. } => "equivalence",
            FamilyParams::TwoClass { .. } => "two-class",
            FamilyParams::UnaryCube { .. } => "unary-cube",
            FamilyParams::Path { .. } => "path",
            FamilyParams::Cycle { .. } => "cycle",
            FamilyParams::Complete { .. } => "complete",
            FamilyParams::Star { .. } => "star",
        }
    }
}

/// Maximum exponent accepted by the unary cube (keeps the universe below 2^20).
pub const MAX_CUBE_BITS: usize = 20;

fn require(cond: bool, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::BadParameter {
            reason: reason.to_string(),
        })
    }
}

/// Symmetric irreflexive edge relation from a list of undirected edges.
fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let sig = Signature::new([("E", 2)]).expect("fixed signature");
    let mut tuples = Vec::new();
    for &(a, b) in edges {
        tuples.push(vec![a, b]);
        tuples.push(vec![b, a]);
    }
    tuples.sort();
    tuples.dedup();
    let mut rels = BTreeMap::new();
    rels.insert("E".to_string(), tuples);
    Structure::new(sig, n, rels)
}

/// Build the structure described by `p`.
pub fn generate(p: FamilyParams) -> Result<Structure> {
    match p {
        FamilyParams::MatedPairs { m } => {
            require(m >= 1, "mated-pairs requires m >= 1")?;
            let sig = Signature::new([("R", 2)])?;
            let mut tuples = Vec::new();
            for i in 0..m {
                tuples.push(vec![i, m + i]);
                tuples.push(vec![m + i, i]);
            }
            tuples.sort();
            let mut rels = BTreeMap::new();
            rels.insert("R".to_string(), tuples);
            Ok(Structure::new(sig, 2 * m, rels))
        }
        FamilyParams::Equivalence { m, s } => {
            require(m >= 1 && s >= 1, "equivalence requires m, s >= 1")?;
            let sig = Signature::new([("E", 2)])?;
            let mut tuples = Vec::new();
            for block in 0..m {
                let lo = block * s;
                for a in lo..lo + s {
                    for b in lo..lo + s {
                        tuples.push(vec![a, b]);
                    }
                }
            }
            tuples.sort();
            let mut rels = BTreeMap::new();
            rels.insert("E".to_string(), tuples);
            Ok(Structure::new(sig, m * s, rels))
        }
        FamilyParams::TwoClass { s } => generate(FamilyParams::Equivalence { m: 2, s }),
        FamilyParams::UnaryCube { u } => {
            require(u >= 1, "unary-cube requires u >= 1")?;
            require(u <= MAX_CUBE_BITS, "unary-cube exponent too large")?;
            let sig = Signature::new((1..=u).map(|j| (format!("P{j}"), 1)))?;
            let size = 1usize << u;
            let mut rels = BTreeMap::new();
            for j in 1..=u {
                let tuples: Vec<Vec<usize>> = (0..size)
                    .filter(|i| i >> (j - 1) & 1 == 1)
                    .map(|i| vec![i])
                    .collect();
                rels.insert(format!("P{j}"), tuples);
            }
            Ok(Structure::new(sig, size, rels))
        }
        FamilyParams::Path { n } => {
            require(n >= 1, "path requires n >= 1")?;
            let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
            Ok(graph(n, &edges))
        }
        FamilyParams::Cycle { n } => {
            require(n >= 3, "cycle requires n >= 3")?;
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Ok(graph(n, &edges))
        }
        FamilyParams::Complete { n } => {
            require(n >= 1, "complete requires n >= 1")?;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    edges.push((a, b));
                }
            }
            Ok(graph(n, &edges))
        }
        FamilyParams::Star { n } => {
            require(n >= 1, "star requires n >= 1")?;
            let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
            Ok(graph(n, &edges))
        }
    }
}

/// Family name as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    MatedPairs,
    Equivalence,
    TwoClass,
    UnaryCube,
    Path,
    Cycle,
    Complete,
    Star,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "mated-pairs" => Ok(Family::MatedPairs),
            "equivalence" => Ok(Family::Equivalence),
            "two-class" => Ok(Family::TwoClass),
            "unary-cube" => Ok(Family::UnaryCube),
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            "star" => Ok(Family::Star),
            other => Err(Error::BadParameter {
                reason: format!("unknown family `{other}`"),
            }),
        }
    }
}
