//! Frobenius-Perron dimension data: the unique positive common eigenvector
//! of the left-multiplication matrices, via shifted power iteration.

use num_traits::{Float, FromPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::ring::FusionRing;

/// Scalar bound for everything FP-numeric in this crate.
pub trait Real: Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static {}
impl<T: Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static> Real for T {}

/// Frobenius-Perron data of a validated fusion ring.
#[derive(Debug, Clone, Serialize)]
pub struct FpData<F> {
    /// FPdim of each basis element, normalized so `dims[unit] = 1`.
    pub dims: Vec<F>,
    /// FPdim of the ring: sum of squared basis dimensions.
    pub ring_dim: F,
    /// Coefficients of the regular element; equal to `dims`.
    pub regular: Vec<F>,
    /// Exact integer dimensions, when certified in integer arithmetic.
    pub integral_dims: Option<Vec<u64>>,
    pub tolerance_used: F,
}

#[derive(Debug, Clone, Error)]
pub enum FpError {
    #[error("power iteration did not converge after {0} iterations")]
    ConvergenceFailure(usize),
    #[error("multiplicativity residual too large: {0}")]
    ResidualTooLarge(f64),
    #[error("tolerance must be positive")]
    BadTolerance,
}

const MAX_ITERATIONS: usize = 100_000;

/// Compute FP dimensions of a validated ring.
///
/// Power iteration runs on `I + sum_i N_i`, which is primitive because the
/// ring is transitive and the shift removes periodicity. Dimensions are
/// read off from the eigenvector normalized at the unit. Near-integer
/// dimensions are certified exactly in integer arithmetic.
pub fn fp_data<F: Real>(ring: &FusionRing, tolerance: F) -> Result<FpData<F>, FpError> {
    if !(tolerance > F::zero()) {
        return Err(FpError::BadTolerance);
    }
    let r = ring.rank();

    // total = I + sum_i N_i as a dense float matrix
    let mut total = vec![vec![F::zero(); r]; r];
    for j in 0..r {
        total[j][j] = F::one();
    }
    for ((i, j, k), n) in ring.tensor_entries() {
        let _ = i;
        total[j][k] = total[j][k] + F::from_u64(n).unwrap();
    }

    let d = power_iteration(&total, r)?;

    // normalize at the unit
    let d0 = d[0];
    let dims: Vec<F> = d.iter().map(|&x| x / d0).collect();

    // residual check: |d_i d_j - sum_k N_ij^k d_k| <= tol * scale
    let mut max_res = F::zero();
    for i in 0..r {
        for j in 0..r {
            let mut prod = F::zero();
            for k in 0..r {
                let n = ring.n(i, j, k);
                if n > 0 {
                    prod = prod + F::from_u64(n).unwrap() * dims[k];
                }
            }
            let res = (dims[i] * dims[j] - prod).abs() / (F::one() + dims[i] * dims[j]);
            if res > max_res {
                max_res = res;
            }
        }
    }
    if max_res > tolerance {
        return Err(FpError::ResidualTooLarge(
            max_res.to_f64().unwrap_or(f64::NAN),
        ));
    }

    // integrality certification
    let mut integral = Some(Vec::with_capacity(r));
    for &x in &dims {
        let rounded = x.round();
        if (x - rounded).abs() <= tolerance * rounded.max(F::one()) {
            if let Some(v) = integral.as_mut() {
                v.push(rounded.to_f64().unwrap() as u64);
            }
        } else {
            integral = None;
            break;
        }
    }
    if let Some(ints) = &integral {
        if !certify_integral(ring, ints) {
            integral = None;
        }
    }

    let dims = match &integral {
        // snap to the certified exact values
        Some(ints) => ints.iter().map(|&m| F::from_u64(m).unwrap()).collect(),
        None => dims,
    };
    let ring_dim = dims.iter().fold(F::zero(), |a, &x| a + x * x);

    Ok(FpData {
        regular: dims.clone(),
        dims,
        ring_dim,
        integral_dims: integral,
        tolerance_used: tolerance,
    })
}

/// The regular element coefficients: the FP dimension vector itself.
pub fn regular_element<F: Real>(fp: &FpData<F>) -> Vec<F> {
    fp.regular.clone()
}

fn power_iteration<F: Real>(m: &[Vec<F>], r: usize) -> Result<Vec<F>, FpError> {
    let conv = F::from_f64(1e-14)
        .unwrap_or_else(F::epsilon)
        .max(F::epsilon() * F::from_u64(16).unwrap());
    let mut v = vec![F::one(); r];
    for _ in 0..MAX_ITERATIONS {
        let mut w = vec![F::zero(); r];
        for j in 0..r {
            let vj = v[j];
            for k in 0..r {
                w[k] = w[k] + m[j][k] * vj;
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
            return Ok(v);
        }
    }
    Err(FpError::ConvergenceFailure(MAX_ITERATIONS))
}

/// Verify `N_i d = d_i d` with exact integers: sum_k N_ij^k m_k == m_i m_j.
fn certify_integral(ring: &FusionRing, m: &[u64]) -> bool {
    let r = ring.rank();
    if m[0] != 1 {
        return false;
    }
    for i in 0..r {
        for j in 0..r {
            let mut s: u128 = 0;
            for k in 0..r {
                s += ring.n(i, j, k) as u128 * m[k] as u128;
            }
            if s != m[i] as u128 * m[j] as u128 {
                return false;
            }
        }
    }
    true
}
