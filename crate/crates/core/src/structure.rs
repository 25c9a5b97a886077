//! Finite relational structures over a declared signature.
//!
//! The universe of a structure of size `n` is the id range `0..n`. Relations
//! are stored both as raw tuple lists (so that [`Structure::validate`] can
//! report duplicates) and as a sorted set index used by all semantic
//! operations. Structures are immutable once built and safe to share across
//! threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A finite relational signature: an ordered list of relation symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    relations: Vec<(String, usize)>,
}

impl Signature {
    /// Build a signature, rejecting duplicate or empty names and zero arities.
    pub fn new<I, S>(relations: I) -> Result<Signature>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let relations: Vec<(String, usize)> =
            relations.into_iter().map(|(n, a)| (n.into(), a)).collect();
        let mut seen = BTreeSet::new();
        for (name, arity) in &relations {
            if name.is_empty() {
                return Err(Error::DuplicateRelation {
                    name: String::new(),
                });
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateRelation { name: name.clone() });
            }
            if *arity == 0 {
                return Err(Error::BadArity {
                    name: name.clone(),
                    arity: *arity,
                });
            }
        }
        Ok(Signature { relations })
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arity(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.relations.iter().map(|(n, _)| n.as_str())
    }
}

/// A finite L-structure: universe `0..size` plus interpreted relations.
#[derive(Debug, Clone)]
pub struct Structure {
    name: Option<String>,
    signature: Signature,
    size: usize,
    /// Tuples as supplied at construction time, per relation.
    raw: BTreeMap<String, Vec<Vec<usize>>>,
    /// Sorted, deduplicated index; the semantic view of each relation.
    index: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

impl Structure {
    /// Assemble a structure from raw tuple lists. No invariant checking is
    /// performed here; use [`Structure::validate`] or load through
    /// [`crate::io::load_structure`], which rejects invalid input.
    pub fn new(
        signature: Signature,
        size: usize,
        relations: BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Structure {
        let mut raw = relations;
        for (name, _) in signature.relations() {
            raw.entry(name.clone()).or_default();
        }
        let index = raw
            .iter()
            .map(|(name, tuples)| (name.clone(), tuples.iter().cloned().collect()))
            .collect();
        Structure {
            name: None,
            signature,
            size,
            raw,
            index,
        }
    }

    /// Attach an optional display name (carried through file round trips,
    /// ignored by all semantic operations and by equality).
    pub fn with_name(mut self, name: Option<String>) -> Structure {
        self.name = name;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Element ids of the universe, ascending.
    pub fn universe(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }

    /// The sorted deduplicated tuple set of a relation.
    pub fn relation(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.index.get(name)
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> bool {
        self.index
            .get(name)
            .is_some_and(|set| set.contains(tuple))
    }

    /// Check every structure invariant, returning all violations found.
    /// An empty list means the structure is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (name, tuples) in &self.raw {
            let Some(arity) = self.signature.arity(name) else {
                out.push(Violation::UnknownRelation { name: name.clone() });
                continue;
            };
            let mut seen: BTreeSet<&[usize]> = BTreeSet::new();
            for tuple in tuples {
                if tuple.len() != arity {
                    out.push(Violation::ArityMismatch {
                        relation: name.clone(),
                        tuple: tuple.clone(),
                        expected: arity,
                    });
                    continue;
                }
                for &e in tuple {
                    if e >= self.size {
                        out.push(Violation::OutOfRange {
                            relation: name.clone(),
                            tuple: tuple.clone(),
                            element: e,
                        });
                    }
                }
                if !seen.insert(tuple.as_slice()) {
                    out.push(Violation::DuplicateTuple {
                        relation: name.clone(),
                        tuple: tuple.clone(),
                    });
                }
            }
        }
        out
    }

    /// Check that every element of `base` is in range.
    pub fn check_base(&self, base: &BTreeSet<usize>) -> Result<()> {
        for &b in base {
            if b >= self.size {
                return Err(Error::OutOfRange {
                    element: b,
                    size: self.size,
                });
            }
        }
        Ok(())
    }
}

impl PartialEq for Structure {
    fn eq(&self, other: &Structure) -> bool {
        self.signature == other.signature && self.size == other.size && self.index == other.index
    }
}

impl Eq for Structure {}

/// A single invariant violation reported by [`Structure::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownRelation {
        name: String,
    },
    ArityMismatch {
        relation: String,
        tuple: Vec<usize>,
        expected: usize,
    },
    OutOfRange {
        relation: String,
        tuple: Vec<usize>,
        element: usize,
    },
    DuplicateTuple {
        relation: String,
        tuple: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownRelation { name } => {
                write!(f, "relation `{name}` not declared in signature")
            }
            Violation::ArityMismatch {
                relation,
                tuple,
                expected,
            } => write!(
                f,
                "relation `{relation}`: tuple {tuple:?} does not match arity {expected}"
            ),
            Violation::OutOfRange {
                relation,
                tuple,
                element,
            } => write!(
                f,
                "relation `{relation}`: tuple {tuple:?} has out-of-range element {element}"
            ),
            Violation::DuplicateTuple { relation, tuple } => {
                write!(f, "relation `{relation}`: duplicate tuple {tuple:?}")
            }
        }
    }
}
