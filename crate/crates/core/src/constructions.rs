//! Concrete fusion-ring and module data built from groups and cocycles:
//! pointed rings Vec(G), representation rings Rep(G), coset modules,
//! group-theoretical simple-object data, and the pointed-classification
//! certificate.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::characters::{character_table, CharacterError};
use crate::cohomology::{restrict, trivialize, Cochain, CohomologyError, Trivialization};
use crate::fp::fp_data;
use crate::group::{FiniteGroup, Subgroup};
use crate::module::{FusionModule, ModuleError, RawModule};
use crate::ring::{FusionRing, RawRing};

#[derive(Debug, Clone, Error)]
pub enum ConstructionError {
    #[error("character method failed after three seeds: {0}")]
    CharacterConvergenceFailure(CharacterError),
    #[error("fusion multiplicity rounding residual too large: {0}")]
    RoundingResidualTooLarge(f64),
    #[error("constructed ring failed validation: {0}")]
    ValidationFailed(String),
    #[error("stabilizer of order {0} too large for the character method")]
    StabilizerTooLarge(usize),
    #[error("global dimension identity failed: sum of fpdim^2 = {0}, |G| = {1}")]
    IdentityFailure(u64, usize),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

pub const REP_RING_ORDER_BOUND: usize = 200;

/// The group ring of G as a fusion ring: rank |G|, `N_{gh}^k = [k = gh]`.
pub fn vec_ring(g: &FiniteGroup) -> FusionRing {
    let n = g.order();
    let labels = match g.labels() {
        Some(l) => l.to_vec(),
        None => (0..n).map(|i| format!("g{i}")).collect(),
    };
    let raw = RawRing {
        labels,
        dual: (0..n).map(|x| g.inv(x)).collect(),
        tensor: (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (a, b, g.mul(a, b), 1))
            .collect(),
        unit: 0,
    };
    FusionRing::validate(&raw).expect("group ring satisfies the axioms")
}

/// The representation ring of G: one basis element per irreducible
/// character, multiplicities from the orthogonality integral, exact
/// post-validation. Deterministic retry seeds `seed, seed+1, seed+2`.
pub fn rep_ring(g: &FiniteGroup) -> Result<FusionRing, ConstructionError> {
    rep_ring_seeded(g, 0)
}

pub fn rep_ring_seeded(g: &FiniteGroup, seed: u64) -> Result<FusionRing, ConstructionError> {
    if g.order() > REP_RING_ORDER_BOUND {
        return Err(ConstructionError::StabilizerTooLarge(g.order()));
    }
    let mut last = None;
    for s in seed..seed + 3 {
        match rep_ring_attempt(g, s) {
            Ok(r) => return Ok(r),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

fn rep_ring_attempt(g: &FiniteGroup, seed: u64) -> Result<FusionRing, ConstructionError> {
    let n = g.order() as f64;
    let ct = character_table(g, seed).map_err(ConstructionError::CharacterConvergenceFailure)?;
    let r = ct.chars.len();
    let sizes: Vec<f64> = ct.classes.iter().map(|c| c.len() as f64).collect();

    // N_ij^k = (1/|G|) sum over classes |C| chi_i chi_j conj(chi_k)
    let mut tensor = Vec::new();
    let mut max_res = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let acc: Complex64 = (0..r)
                    .map(|c| {
                        ct.chars[i][c] * ct.chars[j][c] * ct.chars[k][c].conj()
                            * Complex64::new(sizes[c], 0.0)
                    })
                    .sum();
                let val = acc / Complex64::new(n, 0.0);
                let rounded = val.re.round();
                let res = (val - Complex64::new(rounded, 0.0)).norm();
                max_res = max_res.max(res);
                if res > 1e-6 || rounded < 0.0 {
                    return Err(ConstructionError::RoundingResidualTooLarge(res));
                }
                if rounded > 0.0 {
                    tensor.push((i, j, k, rounded as u64));
                }
            }
        }
    }
    let _ = max_res;

    // dual(i): the character with conjugate values
    let mut dual = vec![usize::MAX; r];
    for i in 0..r {
        dual[i] = (0..r)
            .find(|&j| {
                (0..r).all(|c| (ct.chars[i][c].conj() - ct.chars[j][c]).norm() < 1e-6)
            })
            .ok_or_else(|| {
                ConstructionError::ValidationFailed("no conjugate character found".into())
            })?;
    }

    let raw = RawRing {
        labels: (0..r).map(|i| format!("chi{i}")).collect(),
        dual,
        tensor,
        unit: 0,
    };
    let ring = FusionRing::validate(&raw)
        .map_err(|e| ConstructionError::ValidationFailed(e.to_string()))?;

    // FP dims must be the exact character degrees
    let fp = fp_data::<f64>(&ring, 1e-9)
        .map_err(|e| ConstructionError::ValidationFailed(e.to_string()))?;
    match &fp.integral_dims {
        Some(d) if *d == ct.dims => {}
        _ => {
            return Err(ConstructionError::ValidationFailed(
                "FP dims disagree with character degrees".into(),
            ))
        }
    }
    let total: u64 = ct.dims.iter().map(|d| d * d).sum();
    if total != g.order() as u64 {
        return Err(ConstructionError::IdentityFailure(total, g.order()));
    }
    Ok(ring)
}

/// The coset module `G/L` over `vec_ring(G)`: permutation action tensor,
/// normalized dimensions all `sqrt(|L|)`.
pub fn coset_module(g: &FiniteGroup, l: &Subgroup) -> Result<FusionModule<f64>, ConstructionError> {
    let ring = Arc::new(vec_ring(g));
    let fp = fp_data::<f64>(&ring, 1e-9)
        .map_err(|e| ConstructionError::ValidationFailed(e.to_string()))?;
    let cosets = g.left_cosets(l);
    let mut coset_of = vec![usize::MAX; g.order()];
    for (j, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = j;
        }
    }
    let mut action = Vec::new();
    for x in 0..g.order() {
        for (j, c) in cosets.iter().enumerate() {
            action.push((x, j, coset_of[g.mul(x, c[0])], 1));
        }
    }
    let raw = RawModule {
        mlabels: cosets.iter().map(|c| format!("g{}L", c[0])).collect(),
        action,
    };
    Ok(FusionModule::validate(ring, &raw, &fp, 1e-9)?)
}

/// One simple object of the dual category data: an L-L double coset
/// representative together with a stabilizer irrep dimension.
#[derive(Debug, Clone, Serialize)]
pub struct GTSimple {
    pub coset_rep: usize,
    pub stab_irrep_dim: u64,
    pub fpdim: u64,
}

/// Simple-object dimension data of the untwisted group-theoretical
/// category attached to `(G, L)`: one simple per (double coset, stabilizer
/// irrep), with `fpdim = [L : L^g] * dim`. The exact identity
/// `sum fpdim^2 = |G|` is a hard postcondition.
pub fn gt_simples(g: &FiniteGroup, l: &Subgroup) -> Result<Vec<GTSimple>, ConstructionError> {
    let mut out = Vec::new();
    for (rep, _) in g.double_cosets(l, l) {
        let conj = g.conjugate_subgroup(l, rep);
        let stab = g.intersect(l, &conj);
        let index = (l.elements.len() / stab.elements.len()) as u64;
        let (stab_group, _) = g.subgroup_as_group(&stab);
        let ct = character_table_dims(&stab_group)?;
        for dim in ct {
            out.push(GTSimple {
                coset_rep: rep,
                stab_irrep_dim: dim,
                fpdim: index * dim,
            });
        }
    }
    let total: u64 = out.iter().map(|s| s.fpdim * s.fpdim).sum();
    if total != g.order() as u64 {
        return Err(ConstructionError::IdentityFailure(total, g.order()));
    }
    Ok(out)
}

fn character_table_dims(g: &FiniteGroup) -> Result<Vec<u64>, ConstructionError> {
    if g.order() > REP_RING_ORDER_BOUND {
        return Err(ConstructionError::StabilizerTooLarge(g.order()));
    }
    let mut last = None;
    for s in 0..3 {
        match character_table(g, s) {
            Ok(ct) => return Ok(ct.dims),
            Err(e) => last = Some(e),
        }
    }
    Err(ConstructionError::CharacterConvergenceFailure(last.unwrap()))
}

/// One check of the pointed-classification certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Certificate for the pointed-classification data `(G, omega, G1, G2)`:
/// exact group factorization, triviality of `omega` on `G1`, and agreement
/// of `omega` with the prescribed class on `G2`.
#[derive(Debug, Clone, Serialize)]
pub struct PointedCertificate {
    pub order: usize,
    pub g1_order: usize,
    pub g2_order: usize,
    pub checks: Vec<CheckOutcome>,
    /// Present iff all checks passed.
    pub conclusion: Option<String>,
}

pub fn pointed_classify(
    g: &FiniteGroup,
    omega: &Cochain,
    g1: &Subgroup,
    g2: &Subgroup,
    omega2: Option<&Cochain>,
) -> Result<PointedCertificate, ConstructionError> {
    let mut checks = Vec::new();

    let fact = g.check_factorization(g1, g2);
    checks.push(CheckOutcome {
        name: "exact_factorization".into(),
        passed: fact.exact,
        detail: if fact.exact {
            format!(
                "{} = {} * {} with trivial intersection",
                g.order(),
                g1.elements.len(),
                g2.elements.len()
            )
        } else {
            "pair is not an exact factorization of G".into()
        },
    });

    let (omega_g1, _) = restrict(omega, g1);
    let triv1 = trivialize(&omega_g1)?;
    checks.push(match &triv1 {
        Trivialization::Witness(_) => CheckOutcome {
            name: "omega_trivial_on_g1".into(),
            passed: true,
            detail: "restriction to G1 is a coboundary (witness verified)".into(),
        },
        Trivialization::Nontrivial {
            invariant_factor,
            residue,
            modulus,
            ..
        } => CheckOutcome {
            name: "omega_trivial_on_g1".into(),
            passed: false,
            detail: format!(
                "restriction to G1 is nontrivial: congruence {invariant_factor} y = {residue} (mod {modulus}) unsolvable"
            ),
        },
    });

    let (omega_g2, _) = restrict(omega, g2);
    let check2 = match omega2 {
        Some(w2) => {
            let diff = omega_g2.sub(w2)?;
            match trivialize(&diff)? {
                Trivialization::Witness(_) => CheckOutcome {
                    name: "omega_matches_omega2_on_g2".into(),
                    passed: true,
                    detail: "restriction to G2 agrees with omega2 up to coboundary".into(),
                },
                Trivialization::Nontrivial { .. } => CheckOutcome {
                    name: "omega_matches_omega2_on_g2".into(),
                    passed: false,
                    detail: "restriction to G2 differs from omega2 by a nontrivial class".into(),
                },
            }
        }
        None => {
            let verdict = matches!(trivialize(&omega_g2)?, Trivialization::Witness(_));
            CheckOutcome {
                name: "omega_restriction_on_g2".into(),
                passed: true,
                detail: if verdict {
                    "restriction to G2 is trivial".into()
                } else {
                    "restriction to G2 is a nontrivial class".into()
                },
            }
        }
    };
    checks.push(check2);

    let all_pass = checks.iter().all(|c| c.passed);
    let conclusion = all_pass.then(|| {
        format!(
            "B = C(G, omega, G1, 1) with FPdim(B) = {} = {} * {}",
            g.order(),
            g1.elements.len(),
            g2.elements.len()
        )
    });
    Ok(PointedCertificate {
        order: g.order(),
        g1_order: g1.elements.len(),
        g2_order: g2.elements.len(),
        checks,
        conclusion,
    })
}
