//! Shared helpers for the integration and acceptance suites: seeded random
//! structures and bases.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use relkit::{Signature, Structure};

/// A random sparse structure with one or two binary relations and
/// optionally one ternary relation, universe size in `1..=max_size`.
pub fn random_structure(rng: &mut ChaCha8Rng, max_size: usize) -> Structure {
    let size = rng.gen_range(1..=max_size);
    let mut decls: Vec<(String, usize)> = Vec::new();
    let binary = rng.gen_range(1..=2usize);
    for i in 0..binary {
        decls.push((format!("R{}", i + 1), 2));
    }
    if rng.gen_bool(0.5) {
        decls.push(("T".to_string(), 3));
    }
    let mut relations = BTreeMap::new();
    for (name, arity) in &decls {
        let count = rng.gen_range(0..=2 * size);
        let mut tuples = BTreeSet::new();
        for _ in 0..count {
            let tuple: Vec<usize> = (0..*arity).map(|_| rng.gen_range(0..size)).collect();
            tuples.insert(tuple);
        }
        relations.insert(name.clone(), tuples.into_iter().collect());
    }
    let sig = Signature::new(decls).expect("fresh names");
    Structure::new(sig, size, relations)
}

/// A random base of at most `max_base` elements.
pub fn random_base(rng: &mut ChaCha8Rng, size: usize, max_base: usize) -> BTreeSet<usize> {
    let want = rng.gen_range(0..=max_base.min(size));
    let mut base = BTreeSet::new();
    while base.len() < want {
        base.insert(rng.gen_range(0..size));
    }
    base
}
