//! Irreducible characters by the class-sum method: the class-multiplication
//! matrices commute, so the common eigenvectors of a random real
//! combination recover the central characters, which normalize to the
//! character table.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::FiniteGroup;

#[derive(Debug, Clone, Error)]
pub enum CharacterError {
    #[error("eigenvalues of the class-sum combination failed to separate")]
    ConvergenceFailure,
    #[error("character normalization produced a non-integral dimension: {0}")]
    NonIntegralDimension(f64),
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    /// Conjugacy classes (sorted by size then minimal element).
    pub classes: Vec<Vec<usize>>,
    /// Element -> class index.
    pub class_map: Vec<usize>,
    /// `chars[p][j]` = value of the p-th irreducible character on class j.
    /// Row 0 is the trivial character; the rest sorted by dimension then
    /// by rounded character values.
    pub chars: Vec<Vec<Complex64>>,
    /// Dimensions `chi_p(e)`, rounded to integers.
    pub dims: Vec<u64>,
}

/// Compute the character table with the given RNG seed for the random
/// class-sum combination.
pub fn character_table(g: &FiniteGroup, seed: u64) -> Result<CharacterTable, CharacterError> {
    let n = g.order();
    let (classes, class_map) = g.class_map();
    let r = classes.len();
    if r == 1 {
        return Ok(CharacterTable {
            classes,
            class_map,
            chars: vec![vec![Complex64::new(1.0, 0.0)]],
            dims: vec![1],
        });
    }

    // class multiplication constants a[i][j][k]:
    // (sum of C_i)(sum of C_j) = sum_k a[i][j][k] (sum of C_k)
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let mut counts = vec![vec![vec![0u64; n]; r]; r];
    for x in 0..n {
        for y in 0..n {
            counts[class_map[x]][class_map[y]][g.mul(x, y)] += 1;
        }
    }
    let a = |i: usize, j: usize, k: usize| counts[i][j][reps[k]];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t: Vec<f64> = (0..r).map(|_| rng.gen_range(0.25..1.0)).collect();
    let mut m = DMatrix::<f64>::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                m[(j, k)] += t[i] * a(i, j, k) as f64;
            }
        }
    }

    let eigenvalues = m.clone().complex_eigenvalues();
    // require pairwise separation, otherwise signal a retry
    for i in 0..r {
        for j in i + 1..r {
            if (eigenvalues[i] - eigenvalues[j]).norm() < 1e-6 {
                return Err(CharacterError::ConvergenceFailure);
            }
        }
    }

    let mc: Vec<Complex64> = m.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut rows: Vec<(u64, Vec<(i64, i64)>, Vec<Complex64>, u64)> = Vec::new();
    for &lambda in eigenvalues.iter() {
        let u = eigenvector(&mc, r, lambda).ok_or(CharacterError::ConvergenceFailure)?;
        // normalize at the identity class (always class 0: size 1, element 0)
        let u0 = u[0];
        if u0.norm() < 1e-9 {
            return Err(CharacterError::ConvergenceFailure);
        }
        let u: Vec<Complex64> = u.iter().map(|&x| x / u0).collect();
        // chi(1) from the second orthogonality normalization
        let s: f64 = u
            .iter()
            .zip(&classes)
            .map(|(x, c)| x.norm_sqr() / c.len() as f64)
            .sum();
        let dim_f = (n as f64 / s).sqrt();
        let dim = dim_f.round();
        if (dim_f - dim).abs() > 1e-6 || dim < 1.0 {
            return Err(CharacterError::NonIntegralDimension(dim_f));
        }
        let chi: Vec<Complex64> = u
            .iter()
            .zip(&classes)
            .map(|(x, c)| x * dim / c.len() as f64)
            .collect();
        // deterministic sort key: dimension, then character values rounded
        let key: Vec<(i64, i64)> = chi
            .iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect();
        let trivial = chi.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        rows.push((if trivial { 0 } else { 1 }, key, chi, dim as u64));
    }
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.3.cmp(&b.3))
            .then_with(|| a.1.cmp(&b.1))
    });
    if rows[0].0 != 0 {
        return Err(CharacterError::ConvergenceFailure);
    }

    // first orthogonality sanity: sum over classes |C| chi_p conj(chi_q)
    for p in 0..r {
        for q in 0..r {
            let ip: Complex64 = (0..r)
                .map(|j| {
                    rows[p].2[j] * rows[q].2[j].conj() * Complex64::new(classes[j].len() as f64, 0.0)
                })
                .sum();
            let expect = if p == q { n as f64 } else { 0.0 };
            if (ip - Complex64::new(expect, 0.0)).norm() > 1e-6 * n as f64 {
                return Err(CharacterError::ConvergenceFailure);
            }
        }
    }

    Ok(CharacterTable {
        classes,
        class_map,
        dims: rows.iter().map(|x| x.3).collect(),
        chars: rows.into_iter().map(|x| x.2).collect(),
    })
}

/// Eigenvector by inverse iteration with complex LU.
fn eigenvector(m: &[Complex64], r: usize, lambda: Complex64) -> Option<Vec<Complex64>> {
    let shift = lambda + Complex64::new(1e-10, 1e-10);
    let mut a = vec![Complex64::new(0.0, 0.0); r * r];
    for i in 0..r {
        for j in 0..r {
            a[i * r + j] = m[j * r + i]; // nalgebra iter is column-major
        }
    }
    for i in 0..r {
        a[i * r + i] -= shift;
    }
    let lu = lu_decompose(&mut a, r)?;
    let mut v: Vec<Complex64> = (0..r)
        .map(|i| Complex64::new(1.0 + (i as f64) * 0.01, 0.0))
        .collect();
    for _ in 0..4 {
        let mut w = v.clone();
        lu_solve(&a, &lu, r, &mut w);
        let norm = w.iter().map(|x| x.norm()).fold(0.0f64, f64::max);
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        for x in w.iter_mut() {
            *x /= norm;
        }
        v = w;
    }
    Some(v)
}

/// In-place LU with partial pivoting; returns the pivot permutation.
fn lu_decompose(a: &mut [Complex64], r: usize) -> Option<Vec<usize>> {
    let mut piv: Vec<usize> = (0..r).collect();
    for k in 0..r {
        let (mut best, mut best_val) = (k, a[piv[k] * r + k].norm());
        for i in k + 1..r {
            let val = a[piv[i] * r + k].norm();
            if val > best_val {
                best = i;
                best_val = val;
            }
        }
        piv.swap(k, best);
        let pk = piv[k];
        let pivot = a[pk * r + k];
        if pivot.norm() < 1e-300 {
            return None;
        }
        for i in k + 1..r {
            let pi = piv[i];
            let factor = a[pi * r + k] / pivot;
            a[pi * r + k] = factor;
            for j in k + 1..r {
                let x = a[pk * r + j];
                a[pi * r + j] -= factor * x;
            }
        }
    }
    Some(piv)
}

fn lu_solve(a: &[Complex64], piv: &[usize], r: usize, b: &mut [Complex64]) {
    let mut y = vec![Complex64::new(0.0, 0.0); r];
    for i in 0..r {
        let mut acc = b[piv[i]];
        for j in 0..i {
            acc -= a[piv[i] * r + j] * y[j];
        }
        y[i] = acc;
    }
    for i in (0..r).rev() {
        let mut acc = y[i];
        for j in i + 1..r {
            acc -= a[piv[i] * r + j] * b[j];
        }
        b[i] = acc / a[piv[i] * r + i];
    }
}
