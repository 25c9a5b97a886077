//! Canonical quantifier-free types of tuples over a base set.
//!
//! The type of a tuple records its equality pattern, which coordinates name
//! base elements, and every mixed relational atom (arguments drawn from the
//! tuple's variables and the base, at least one variable slot) that holds in
//! the structure. Atoms whose arguments are all base elements are constant
//! over a fixed base and are excluded from the record.
//!
//! Two computation routes exist: [`qf_type`] abstracts the ground tuples of
//! each relation, while [`naive_qf_type`] evaluates every candidate mixed
//! atom directly. They must produce structurally identical results and serve
//! as mutual oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

/// A reduct of the signature selecting which relations contribute atoms.
/// Equality atoms are always included. The full sub-signature is the
/// canonical quantifier-free setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSpec {
    included: BTreeSet<String>,
}

impl DeltaSpec {
    /// All relations of the signature.
    pub fn full(sig: &Signature) -> DeltaSpec {
        DeltaSpec {
            included: sig.names().map(str::to_string).collect(),
        }
    }

    /// A reduct naming a subset of the signature's relations.
    pub fn from_names<I, S>(sig: &Signature, names: I) -> Result<DeltaSpec>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut included = BTreeSet::new();
        for name in names {
            let name = name.into();
            if !sig.contains(&name) {
                return Err(Error::UnknownRelation { name });
            }
            included.insert(name);
        }
        Ok(DeltaSpec { included })
    }

    pub fn includes(&self, name: &str) -> bool {
        self.included.contains(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.included.iter().map(String::as_str)
    }

    pub fn is_subset_of(&self, other: &DeltaSpec) -> bool {
        self.included.is_subset(&other.included)
    }
}

/// One argument position of a mixed atom: a tuple coordinate or a base element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Var(usize),
    Base(usize),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Var(i) => write!(f, "V{i}"),
            Slot::Base(b) => write!(f, "{b}"),
        }
    }
}

/// A relational atom with mixed arguments; at least one slot is a variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<Slot>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.relation, self.args.iter().format(","))
    }
}

/// Canonical quantifier-free type of a tuple over a base set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QfType {
    length: usize,
    /// `eq[i]` is the least coordinate holding the same element as coordinate `i`.
    eq: Vec<usize>,
    /// Coordinates whose element lies in the base, mapped to that element.
    links: BTreeMap<usize, usize>,
    atoms: BTreeSet<Atom>,
}

impl QfType {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn eq_classes(&self) -> &[usize] {
        &self.eq
    }

    pub fn base_links(&self) -> &BTreeMap<usize, usize> {
        &self.links
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    /// Stable single-line form `eq=...|links=...|atoms=...` used in golden
    /// tests and CLI output. Equality blocks are listed by least coordinate.
    pub fn canonical_string(&self) -> String {
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &rep) in self.eq.iter().enumerate() {
            blocks.entry(rep).or_default().push(i);
        }
        let eq = blocks
            .values()
            .map(|block| block.iter().format(","))
            .format(";");
        let links = self
            .links
            .iter()
            .map(|(i, b)| format!("{i}:{b}"))
            .format(";");
        let atoms = self.atoms.iter().format(";");
        format!("eq={eq}|links={links}|atoms={atoms}")
    }

    /// Type of the permuted tuple `t'` with `t'[i] = t[perm[i]]`, derived
    /// from this type without re-evaluating the structure.
    pub fn permuted(&self, perm: &[usize]) -> QfType {
        assert_eq!(perm.len(), self.length, "permutation length mismatch");
        let mut inv = vec![0usize; self.length];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut eq = vec![0usize; self.length];
        for new in 0..self.length {
            let class = self.eq[perm[new]];
            eq[new] = (0..=new).find(|&j| self.eq[perm[j]] == class).unwrap();
        }
        let links = self
            .links
            .iter()
            .map(|(&old, &b)| (inv[old], b))
            .collect();
        let atoms = self
            .atoms
            .iter()
            .map(|atom| Atom {
                relation: atom.relation.clone(),
                args: atom
                    .args
                    .iter()
                    .map(|slot| match slot {
                        Slot::Var(old) => Slot::Var(inv[*old]),
                        Slot::Base(b) => Slot::Base(*b),
                    })
                    .collect(),
            })
            .collect();
        QfType {
            length: self.length,
            eq,
            links,
            atoms,
        }
    }
}

fn check_inputs(s: &Structure, tuple: &[usize], base: &BTreeSet<usize>) -> Result<()> {
    for &e in tuple {
        if e >= s.size() {
            return Err(Error::OutOfRange {
                element: e,
                size: s.size(),
            });
        }
    }
    s.check_base(base)
}

fn equality_pattern(tuple: &[usize], base: &BTreeSet<usize>) -> (Vec<usize>, BTreeMap<usize, usize>) {
    let eq = tuple
        .iter()
        .enumerate()
        .map(|(i, &e)| tuple[..=i].iter().position(|&x| x == e).unwrap())
        .collect();
    let links = tuple
        .iter()
        .enumerate()
        .filter(|(_, e)| base.contains(e))
        .map(|(i, &e)| (i, e))
        .collect();
    (eq, links)
}

/// Compute the canonical quantifier-free type of `tuple` over `base`,
/// restricted to the relations in `delta`. The tuple may intersect the base.
pub fn qf_type(
    s: &Structure,
    tuple: &[usize],
    base: &BTreeSet<usize>,
    delta: &DeltaSpec,
) -> Result<QfType> {
    check_inputs(s, tuple, base)?;
    let (eq, links) = equality_pattern(tuple, base);
    let mut atoms = BTreeSet::new();
    for (name, _) in s.signature().relations() {
        if !delta.includes(name) {
            continue;
        }
        for ground in s.relation(name).into_iter().flatten() {
            // Abstract each ground tuple: every position may be read as any
            // matching variable or, when the element is in the base, as that
            // base element. A position with no reading kills the atom.
            let options: Vec<Vec<Slot>> = ground
                .iter()
                .map(|&e| {
                    let mut opts: Vec<Slot> = tuple
                        .iter()
                        .enumerate()
                        .filter(|(_, &t)| t == e)
                        .map(|(i, _)| Slot::Var(i))
                        .collect();
                    if base.contains(&e) {
                        opts.push(Slot::Base(e));
                    }
                    opts
                })
                .collect();
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            for args in options.into_iter().multi_cartesian_product() {
                if args.iter().any(|slot| matches!(slot, Slot::Var(_))) {
                    atoms.insert(Atom {
                        relation: name.clone(),
                        args,
                    });
                }
            }
        }
    }
    Ok(QfType {
        length: tuple.len(),
        eq,
        links,
        atoms,
    })
}

/// Reference oracle for [`qf_type`]: enumerate every candidate mixed atom over
/// the variables and the base and evaluate it directly, with no abstraction
/// or pruning.
pub fn naive_qf_type(
    s: &Structure,
    tuple: &[usize],
    base: &BTreeSet<usize>,
    delta: &DeltaSpec,
) -> Result<QfType> {
    check_inputs(s, tuple, base)?;
    let (eq, links) = equality_pattern(tuple, base);
    let slots: Vec<Slot> = (0..tuple.len())
        .map(Slot::Var)
        .chain(base.iter().map(|&b| Slot::Base(b)))
        .collect();
    let mut atoms = BTreeSet::new();
    for (name, arity) in s.signature().relations() {
        if !delta.includes(name) {
            continue;
        }
        for args in (0..*arity)
            .map(|_| slots.iter().copied())
            .multi_cartesian_product()
        {
            if !args.iter().any(|slot| matches!(slot, Slot::Var(_))) {
                continue;
            }
            let ground: Vec<usize> = args
                .iter()
                .map(|slot| match slot {
                    Slot::Var(i) => tuple[*i],
                    Slot::Base(b) => *b,
                })
                .collect();
            if s.holds(name, &ground) {
                atoms.insert(Atom {
                    relation: name.clone(),
                    args,
                });
            }
        }
    }
    Ok(QfType {
        length: tuple.len(),
        eq,
        links,
        atoms,
    })
}
