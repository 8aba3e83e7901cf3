//! Based rings with nonnegative integer structure constants, a unit basis
//! element and a duality involution (fusion rings at the Grothendieck level).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Structure-constant multiplicity.
pub type Mult = u64;

/// Raw, unvalidated ring description as read from a file or built in code.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawRing {
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    /// Entries `(i, j, k, N)` meaning the multiplicity of `k` in `i * j`;
    /// omitted triples are zero.
    pub tensor: Vec<(usize, usize, usize, Mult)>,
    /// Which basis index is the unit; defaults to 0.
    #[serde(default)]
    pub unit: usize,
}

/// A validated fusion ring. Immutable after construction; the unit is
/// always basis index 0 (the validator reorders the basis if needed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionRing {
    labels: Vec<String>,
    dual: Vec<usize>,
    tensor: BTreeMap<(usize, usize, usize), Mult>,
}

/// One violated axiom with witness indices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("unit axiom violated at (i={0}, j={1}, k={2})")]
    UnitAxiom(usize, usize, usize),
    #[error("duality violated at (i={0}, j={1}): N_ij^unit = {2}")]
    Duality(usize, usize, Mult),
    #[error("dual is not an involution fixing the unit (index {0})")]
    DualNotInvolution(usize),
    #[error("associativity violated at (i={0}, j={1}, k={2}, l={3})")]
    Associativity(usize, usize, usize, usize),
    #[error("Frobenius reciprocity violated at (i={0}, j={1}, k={2})")]
    Reciprocity(usize, usize, usize),
    #[error("ring is not transitive: index {0} unreachable from the unit")]
    NotTransitive(usize),
}

#[derive(Debug, Clone, Error)]
pub enum RingError {
    #[error("malformed ring description: {0}")]
    Malformed(String),
    #[error("ring axioms violated: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("basis index {0} out of range (rank {1})")]
    IndexOutOfRange(usize, usize),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl FusionRing {
    /// Validate a raw description, reporting every violated axiom.
    ///
    /// On success the basis is canonicalized so the unit sits at index 0.
    pub fn validate(raw: &RawRing) -> Result<FusionRing, RingError> {
        let rank = raw.labels.len();
        if rank == 0 {
            return Err(RingError::Malformed("rank must be positive".into()));
        }
        if raw.dual.len() != rank {
            return Err(RingError::Malformed(format!(
                "dual has length {}, expected {}",
                raw.dual.len(),
                rank
            )));
        }
        if raw.unit >= rank {
            return Err(RingError::Malformed(format!(
                "unit index {} out of range",
                raw.unit
            )));
        }
        for &(i, j, k, _) in &raw.tensor {
            if i >= rank || j >= rank || k >= rank {
                return Err(RingError::Malformed(format!(
                    "tensor entry ({i},{j},{k}) out of range"
                )));
            }
        }
        for &d in &raw.dual {
            if d >= rank {
                return Err(RingError::Malformed("dual index out of range".into()));
            }
        }

        // Canonicalize: swap the designated unit with index 0.
        let perm: Vec<usize> = (0..rank)
            .map(|i| {
                if i == raw.unit {
                    0
                } else if i == 0 {
                    raw.unit
                } else {
                    i
                }
            })
            .collect();
        let inv = perm.clone(); // a transposition is its own inverse

        let labels: Vec<String> = (0..rank).map(|i| raw.labels[inv[i]].clone()).collect();
        let dual: Vec<usize> = (0..rank).map(|i| perm[raw.dual[inv[i]]]).collect();
        let mut tensor = BTreeMap::new();
        for &(i, j, k, n) in &raw.tensor {
            if n == 0 {
                continue;
            }
            let key = (perm[i], perm[j], perm[k]);
            let slot = tensor.entry(key).or_insert(0u64);
            if *slot != 0 && *slot != n {
                return Err(RingError::Malformed(format!(
                    "conflicting multiplicities for tensor entry {key:?}"
                )));
            }
            *slot = n;
        }

        let ring = FusionRing {
            labels,
            dual,
            tensor,
        };
        let violations = ring.check_axioms();
        if violations.is_empty() {
            Ok(ring)
        } else {
            Err(RingError::Invalid(violations))
        }
    }

    fn check_axioms(&self) -> Vec<Violation> {
        let r = self.rank();
        let mut out = Vec::new();

        // dual involution fixing unit
        if self.dual[0] != 0 {
            out.push(Violation::DualNotInvolution(0));
        }
        for i in 0..r {
            if self.dual[self.dual[i]] != i {
                out.push(Violation::DualNotInvolution(i));
            }
        }

        // unit axiom
        for j in 0..r {
            for k in 0..r {
                let expect = if j == k { 1 } else { 0 };
                if self.n(0, j, k) != expect {
                    out.push(Violation::UnitAxiom(0, j, k));
                }
                if self.n(j, 0, k) != expect {
                    out.push(Violation::UnitAxiom(j, 0, k));
                }
            }
        }

        // duality axiom: N_ij^unit = [j == i*]
        for i in 0..r {
            for j in 0..r {
                let got = self.n(i, j, 0);
                let expect = if j == self.dual[i] { 1 } else { 0 };
                if got != expect {
                    out.push(Violation::Duality(i, j, got));
                }
            }
        }

        // Frobenius reciprocity: N_ij^k = N_{i*,k}^j = N_{k,j*}^i
        'rec: for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let n = self.n(i, j, k);
                    if n != self.n(self.dual[i], k, j) || n != self.n(k, self.dual[j], i) {
                        out.push(Violation::Reciprocity(i, j, k));
                        if out.len() > 64 {
                            break 'rec;
                        }
                    }
                }
            }
        }

        // associativity
        'assoc: for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let lhs: u128 = (0..r)
                            .map(|m| self.n(i, j, m) as u128 * self.n(m, k, l) as u128)
                            .sum();
                        let rhs: u128 = (0..r)
                            .map(|m| self.n(j, k, m) as u128 * self.n(i, m, l) as u128)
                            .sum();
                        if lhs != rhs {
                            out.push(Violation::Associativity(i, j, k, l));
                            if out.len() > 64 {
                                break 'assoc;
                            }
                        }
                    }
                }
            }
        }

        // transitivity: the digraph j -> k with some N_ij^k > 0 must be
        // strongly connected; by duality reachability from the unit suffices
        // in both directions, checked separately.
        let mut fwd = vec![false; r];
        let mut bwd = vec![false; r];
        reach(r, &mut fwd, |j, k| (0..r).any(|i| self.n(i, j, k) > 0));
        reach(r, &mut bwd, |j, k| (0..r).any(|i| self.n(i, k, j) > 0));
        for v in 0..r {
            if !fwd[v] || !bwd[v] {
                out.push(Violation::NotTransitive(v));
            }
        }

        out
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    /// Structure constant `N_{ij}^k`.
    pub fn n(&self, i: usize, j: usize, k: usize) -> Mult {
        *self.tensor.get(&(i, j, k)).unwrap_or(&0)
    }

    /// Sparse tensor entries in sorted coordinate order.
    pub fn tensor_entries(&self) -> impl Iterator<Item = ((usize, usize, usize), Mult)> + '_ {
        self.tensor.iter().map(|(&k, &v)| (k, v))
    }

    /// Left multiplication matrix `N_i` with `(N_i)_{jk} = N_{ij}^k`.
    pub fn fusion_matrix(&self, i: usize) -> Result<Vec<Vec<Mult>>, RingError> {
        let r = self.rank();
        if i >= r {
            return Err(RingError::IndexOutOfRange(i, r));
        }
        Ok((0..r)
            .map(|j| (0..r).map(|k| self.n(i, j, k)).collect())
            .collect())
    }

    /// Support of the product `i * j`: indices `k` with `N_{ij}^k > 0`.
    pub fn product_summands(&self, i: usize, j: usize) -> Vec<(usize, Mult)> {
        (0..self.rank())
            .filter_map(|k| {
                let n = self.n(i, j, k);
                (n > 0).then_some((k, n))
            })
            .collect()
    }
}

impl fmt::Display for FusionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FusionRing(rank {}, {:?})", self.rank(), self.labels)
    }
}

fn reach<F: Fn(usize, usize) -> bool>(r: usize, seen: &mut [bool], edge: F) {
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(j) = stack.pop() {
        for k in 0..r {
            if !seen[k] && edge(j, k) {
                seen[k] = true;
                stack.push(k);
            }
        }
    }
}

/// Convenience constructors used throughout the test corpus.
pub mod small {
    use super::*;

    /// The rank-1 trivial ring (Vec).
    pub fn trivial() -> FusionRing {
        FusionRing::validate(&RawRing {
            labels: vec!["1".into()],
            dual: vec![0],
            tensor: vec![(0, 0, 0, 1)],
            unit: 0,
        })
        .unwrap()
    }

    /// Ising fusion ring {1, psi, sigma}.
    pub fn ising() -> FusionRing {
        FusionRing::validate(&RawRing {
            labels: vec!["1".into(), "psi".into(), "sigma".into()],
            dual: vec![0, 1, 2],
            tensor: vec![
                (0, 0, 0, 1),
                (0, 1, 1, 1),
                (0, 2, 2, 1),
                (1, 0, 1, 1),
                (2, 0, 2, 1),
                (1, 1, 0, 1),
                (1, 2, 2, 1),
                (2, 1, 2, 1),
                (2, 2, 0, 1),
                (2, 2, 1, 1),
            ],
            unit: 0,
        })
        .unwrap()
    }

    /// Fibonacci fusion ring {1, tau} with tau^2 = 1 + tau.
    pub fn fibonacci() -> FusionRing {
        FusionRing::validate(&RawRing {
            labels: vec!["1".into(), "tau".into()],
            dual: vec![0, 1],
            tensor: vec![
                (0, 0, 0, 1),
                (0, 1, 1, 1),
                (1, 0, 1, 1),
                (1, 1, 0, 1),
                (1, 1, 1, 1),
            ],
            unit: 0,
        })
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_raw() -> RawRing {
        RawRing {
            labels: vec!["e".into(), "g".into()],
            dual: vec![0, 1],
            tensor: vec![(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)],
            unit: 0,
        }
    }

    #[test]
    fn z2_group_ring_is_valid() {
        let r = FusionRing::validate(&z2_raw()).unwrap();
        assert_eq!(r.rank(), 2);
        assert_eq!(r.n(1, 1, 0), 1);
    }

    #[test]
    fn ising_is_valid() {
        let r = small::ising();
        assert_eq!(r.rank(), 3);
        assert_eq!(r.n(2, 2, 0), 1);
        assert_eq!(r.n(2, 2, 1), 1);
    }

    #[test]
    fn broken_ising_reports_witness() {
        // sigma * sigma = 1 only (psi dropped)
        let raw = RawRing {
            labels: vec!["1".into(), "psi".into(), "sigma".into()],
            dual: vec![0, 1, 2],
            tensor: vec![
                (0, 0, 0, 1),
                (0, 1, 1, 1),
                (0, 2, 2, 1),
                (1, 0, 1, 1),
                (2, 0, 2, 1),
                (1, 1, 0, 1),
                (1, 2, 2, 1),
                (2, 1, 2, 1),
                (2, 2, 0, 1),
            ],
            unit: 0,
        };
        match FusionRing::validate(&raw) {
            Err(RingError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(
                    v,
                    Violation::Associativity(..) | Violation::Reciprocity(..)
                )));
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn unit_reordered_to_front() {
        let raw = RawRing {
            labels: vec!["g".into(), "e".into()],
            dual: vec![0, 1],
            tensor: vec![(1, 1, 1, 1), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)],
            unit: 1,
        };
        let r = FusionRing::validate(&raw).unwrap();
        assert_eq!(r.labels()[0], "e");
        assert_eq!(r.n(0, 1, 1), 1);
    }

    #[test]
    fn fusion_matrix_of_unit_is_identity() {
        let r = small::ising();
        let m = r.fusion_matrix(0).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(m[j][k], u64::from(j == k));
            }
        }
    }

    #[test]
    fn fusion_matrix_examples() {
        let z2 = FusionRing::validate(&z2_raw()).unwrap();
        assert_eq!(z2.fusion_matrix(1).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        let ising = small::ising();
        assert_eq!(
            ising.fusion_matrix(2).unwrap(),
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]]
        );
    }

    #[test]
    fn index_out_of_range() {
        let r = small::fibonacci();
        assert!(matches!(
            r.fusion_matrix(5),
            Err(RingError::IndexOutOfRange(5, 2))
        ));
    }
}
