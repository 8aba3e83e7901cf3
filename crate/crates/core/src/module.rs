//! Based modules over a fusion ring, with normalized Frobenius-Perron
//! dimensions of the module basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{FpData, Real};
use crate::ring::{FusionRing, Mult};

/// Raw module description: action entries `(i, j, k, A)` give the
/// multiplicity of module element `k` in `X_i . M_j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawModule {
    pub mlabels: Vec<String>,
    pub action: Vec<(usize, usize, usize, Mult)>,
}

/// A validated indecomposable based module over a fusion ring.
#[derive(Debug, Clone)]
pub struct FusionModule<F> {
    pub base: Arc<FusionRing>,
    pub mlabels: Vec<String>,
    action: BTreeMap<(usize, usize, usize), Mult>,
    /// Normalized so that `sum_j mdims[j]^2 = FPdim(base)`.
    pub mdims: Vec<F>,
}

#[derive(Debug, Clone, Error)]
pub enum ModuleError {
    #[error("malformed module description: {0}")]
    Malformed(String),
    #[error("action axiom violated at (i={0}, i'={1}, j={2}, k={3})")]
    ActionAxiomViolation(usize, usize, usize, usize),
    #[error("unit does not act as identity at (j={0}, k={1})")]
    UnitActionViolation(usize, usize),
    #[error("module is decomposable; components: {0:?}")]
    Decomposable(Vec<Vec<usize>>),
    #[error("eigen-property/normalization failed: residual {0}")]
    NormalizationFailure(f64),
    #[error("mdim iteration did not converge")]
    ConvergenceFailure,
}

impl<F: Real> FusionModule<F> {
    /// Validate action axioms, indecomposability, and compute the
    /// normalized FP dimensions of the module basis.
    pub fn validate(
        ring: Arc<FusionRing>,
        raw: &RawModule,
        fp: &FpData<F>,
        tolerance: F,
    ) -> Result<FusionModule<F>, ModuleError> {
        let r = ring.rank();
        let m = raw.mlabels.len();
        if m == 0 {
            return Err(ModuleError::Malformed("module rank must be positive".into()));
        }
        let mut action = BTreeMap::new();
        for &(i, j, k, a) in &raw.action {
            if i >= r || j >= m || k >= m {
                return Err(ModuleError::Malformed(format!(
                    "action entry ({i},{j},{k}) out of range"
                )));
            }
            if a > 0 {
                action.insert((i, j, k), a);
            }
        }
        let get = |i: usize, j: usize, k: usize| -> Mult {
            *action.get(&(i, j, k)).unwrap_or(&0)
        };

        // unit acts as identity
        for j in 0..m {
            for k in 0..m {
                if get(0, j, k) != u64::from(j == k) {
                    return Err(ModuleError::UnitActionViolation(j, k));
                }
            }
        }

        // associativity of the action
        for i in 0..r {
            for ip in 0..r {
                for j in 0..m {
                    for k in 0..m {
                        let lhs: u128 = (0..r)
                            .map(|x| ring.n(i, ip, x) as u128 * get(x, j, k) as u128)
                            .sum();
                        let rhs: u128 = (0..m)
                            .map(|x| get(ip, j, x) as u128 * get(i, x, k) as u128)
                            .sum();
                        if lhs != rhs {
                            return Err(ModuleError::ActionAxiomViolation(i, ip, j, k));
                        }
                    }
                }
            }
        }

        // indecomposability: connectivity of the action graph
        let components = connected_components(m, |j, k| {
            (0..r).any(|i| get(i, j, k) > 0 || get(i, k, j) > 0)
        });
        if components.len() > 1 {
            return Err(ModuleError::Decomposable(components));
        }

        // mdims: positive eigenvector of I + sum_i A_i, rescaled so that
        // sum_j mdims^2 = ring_dim
        let mut total = vec![vec![F::zero(); m]; m];
        for j in 0..m {
            total[j][j] = F::one();
        }
        for (&(_, j, k), &a) in &action {
            total[j][k] = total[j][k] + F::from_u64(a).unwrap();
        }
        let v = power_vec(&total, m).ok_or(ModuleError::ConvergenceFailure)?;
        let norm2 = v.iter().fold(F::zero(), |a, &x| a + x * x);
        let scale = (fp.ring_dim / norm2).sqrt();
        let mdims: Vec<F> = v.iter().map(|&x| x * scale).collect();

        // eigen-property: sum_k A_ij^k mdims[k] = dims[i] mdims[j]
        let mut max_res = F::zero();
        for i in 0..r {
            for j in 0..m {
                let mut s = F::zero();
                for k in 0..m {
                    let a = get(i, j, k);
                    if a > 0 {
                        s = s + F::from_u64(a).unwrap() * mdims[k];
                    }
                }
                let res = (s - fp.dims[i] * mdims[j]).abs() / (F::one() + fp.dims[i] * mdims[j]);
                max_res = max_res.max(res);
            }
        }
        // regular-element identity: sum_i dims[i] A_ij^k = mdims[j] mdims[k]
        for j in 0..m {
            for k in 0..m {
                let mut s = F::zero();
                for i in 0..r {
                    let a = get(i, j, k);
                    if a > 0 {
                        s = s + F::from_u64(a).unwrap() * fp.dims[i];
                    }
                }
                let res = (s - mdims[j] * mdims[k]).abs() / (F::one() + mdims[j] * mdims[k]);
                max_res = max_res.max(res);
            }
        }
        if max_res > tolerance {
            return Err(ModuleError::NormalizationFailure(
                max_res.to_f64().unwrap_or(f64::NAN),
            ));
        }

        Ok(FusionModule {
            base: ring,
            mlabels: raw.mlabels.clone(),
            action,
            mdims,
        })
    }

    pub fn mrank(&self) -> usize {
        self.mlabels.len()
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> Mult {
        *self.action.get(&(i, j, k)).unwrap_or(&0)
    }

    pub fn action_entries(&self) -> impl Iterator<Item = ((usize, usize, usize), Mult)> + '_ {
        self.action.iter().map(|(&k, &v)| (k, v))
    }

    /// A ring as the regular module over itself.
    pub fn regular(ring: Arc<FusionRing>, fp: &FpData<F>, tolerance: F) -> Result<Self, ModuleError> {
        let raw = RawModule {
            mlabels: ring.labels().to_vec(),
            action: ring
                .tensor_entries()
                .map(|((i, j, k), n)| (i, j, k, n))
                .collect(),
        };
        Self::validate(ring, &raw, fp, tolerance)
    }
}

fn connected_components<E: Fn(usize, usize) -> bool>(m: usize, edge: E) -> Vec<Vec<usize>> {
    let mut seen = vec![false; m];
    let mut comps = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(j) = stack.pop() {
            for k in 0..m {
                if !seen[k] && edge(j, k) {
                    seen[k] = true;
                    comp.push(k);
                    stack.push(k);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

fn power_vec<F: Real>(m: &[Vec<F>], n: usize) -> Option<Vec<F>> {
    let conv = F::from_f64(1e-14)
        .unwrap_or_else(F::epsilon)
        .max(F::epsilon() * F::from_u64(16).unwrap());
    let mut v = vec![F::one(); n];
    for _ in 0..100_000 {
        let mut w = vec![F::zero(); n];
        for j in 0..n {
            for k in 0..n {
                w[k] = w[k] + m[j][k] * v[j];
            }
        }
        let norm = w.iter().fold(F::zero(), |a, &x| a.max(x.abs()));
        for x in w.iter_mut() {
            *x = *x / norm;
        }
        let diff = v
            .iter()
            .zip(&w)
            .fold(F::zero(), |a, (&x, &y)| a.max((x - y).abs()));
        v = w;
        if diff < conv {
            return Some(v);
        }
    }
    None
}
