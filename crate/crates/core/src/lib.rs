//! Toolkit for finite relational structures: quantifier-free types over
//! base sets, realized-type censuses, block congruences, and bounded
//! decompositions.
//!
//! The central objects are [`Structure`] (a finite universe with interpreted
//! relations), [`QfType`] (the canonical atomic type of a tuple over a base
//! set, restricted by a [`DeltaSpec`] reduct), and [`Partition`] (a base set
//! plus disjoint parts). On top of these the crate offers:
//!
//! - [`census`]: count distinct realized types per tuple length;
//! - [`is_congruence`]: verify that block-equivalent tuples carry equal
//!   types, with canonical counterexamples on failure;
//! - [`component_partition`]: the partition induced by Gaifman components
//!   over a base, which is a congruence at every length;
//! - [`find_decomposition`]: search for partitions within a size budget,
//!   either through components (vertex-integrity style) or exhaustively.
//!
//! Components are computed over the Gaifman graph as a finite stand-in for
//! algebraic-closure components; base sets are arbitrary subsets, not
//! elementary submodels, and experiments contrast base choices explicitly.
//!
//! Tuple-heavy operations run data-parallel under the `parallel` feature
//! (enabled by default); `*_sequential` variants always run single-threaded
//! and produce identical results.

mod census;
mod decomp;
mod enumerate;
mod error;
mod exec;
mod gaifman;
mod generate;
mod io;
mod qftype;
mod search;
mod structure;

pub use census::{
    census, census_extended_base, census_sequential, count_sim_classes, expand_with_unary,
    CensusReport, LengthCounts, DEFAULT_BUDGET,
};
pub use decomp::{
    component_partition, is_congruence, is_congruence_sequential, ma_degree, naive_is_congruence,
    satisfies_budget, sim_equivalent, sim_key, CertificateLevel, CongruenceVerdict,
    Counterexample, KBudget, Partition, SimKey,
};
pub use error::{Error, Result};
pub use gaifman::{components_over, gaifman, GaifmanGraph};
pub use generate::{generate, Family, FamilyParams, MAX_CUBE_BITS};
pub use io::{
    load_partition, load_structure, load_structure_unchecked, partition_from_str,
    partition_to_string, save_partition, save_structure, structure_from_str,
    structure_from_str_unchecked, structure_to_string,
};
pub use qftype::{naive_qf_type, qf_type, Atom, DeltaSpec, QfType, Slot};
pub use search::{find_decomposition, SearchConfig, SearchMethod};
pub use structure::{Signature, Structure, Violation};
