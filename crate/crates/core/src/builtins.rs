//! Registry of named corpus objects so the CLI and the acceptance suite
//! need no fixture files.

use crate::constructions::{rep_ring, vec_ring};
use crate::factorization::deligne_product;
use crate::group::FiniteGroup;
use crate::ring::{small, FusionRing};

/// Builtin groups addressable by name: `C2`..`C12`, `S3`..`S5`, `D3`..`D6`
/// (dihedral of order 2n), `Q8`.
pub fn group(name: &str) -> Option<FiniteGroup> {
    if let Some(n) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=12).contains(&n) {
            return Some(FiniteGroup::cyclic(n));
        }
    }
    if let Some(n) = name.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
        if (2..=5).contains(&n) {
            return FiniteGroup::symmetric(n).ok();
        }
    }
    if let Some(n) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
        if (2..=6).contains(&n) {
            return Some(FiniteGroup::dihedral(n));
        }
    }
    if name == "Q8" {
        return Some(FiniteGroup::quaternion8());
    }
    None
}

/// Builtin rings: `ising`, `fibonacci` (alias `fib`), `trivial`,
/// `vec<GROUP>` (e.g. `vecS3`), `rep<GROUP>` (e.g. `repS3`),
/// `deligneC2C3`, `fibfib`.
pub fn ring(name: &str) -> Option<FusionRing> {
    match name {
        "ising" | "Ising" => return Some(small::ising()),
        "fibonacci" | "fib" | "Fibonacci" => return Some(small::fibonacci()),
        "trivial" | "vec" => return Some(small::trivial()),
        "deligneC2C3" => {
            let r1 = vec_ring(&FiniteGroup::cyclic(2));
            let r2 = vec_ring(&FiniteGroup::cyclic(3));
            return deligne_product(&r1, &r2).ok();
        }
        "fibfib" => {
            let fib = small::fibonacci();
            return deligne_product(&fib, &fib).ok();
        }
        _ => {}
    }
    if let Some(g) = name.strip_prefix("vec").and_then(group) {
        return Some(vec_ring(&g));
    }
    if let Some(g) = name.strip_prefix("rep").and_then(group) {
        return rep_ring(&g).ok();
    }
    None
}

/// Names of all builtin rings, used by corpus-wide suites.
pub fn corpus_ring_names() -> Vec<&'static str> {
    vec![
        "vecC2", "vecC3", "vecC4", "vecC5", "vecC6", "vecC7", "vecC8", "vecS3", "vecS4", "vecD4",
        "vecQ8", "repS3", "repD4", "repQ8", "ising", "fibonacci", "deligneC2C3", "fibfib",
    ]
}

/// Names of all builtin groups used by corpus-wide suites.
pub fn corpus_group_names() -> Vec<&'static str> {
    vec![
        "C2", "C3", "C4", "C5", "C6", "C7", "C8", "S3", "S4", "D4", "Q8",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_corpus_rings_resolve() {
        for name in corpus_ring_names() {
            assert!(ring(name).is_some(), "missing builtin ring {name}");
        }
    }

    #[test]
    fn all_corpus_groups_resolve() {
        for name in corpus_group_names() {
            assert!(group(name).is_some(), "missing builtin group {name}");
        }
    }

    #[test]
    fn vec_d4_is_dihedral_order_8() {
        assert_eq!(ring("vecD4").unwrap().rank(), 8);
    }
}
