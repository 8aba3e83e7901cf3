//! Smith normal form over the integers, with enough bookkeeping to solve
//! linear congruences `A x = b (mod m)` and count kernels mod m.

use num_integer::Integer;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// Diagonalization `U A V = S` with `S` diagonal. `U` is not stored; row
/// operations are mirrored onto a right-hand side instead. `V` is kept so
/// solutions can be pulled back.
pub struct Diagonalized {
    /// Diagonal entries of S, length min(rows, cols); zeros trail.
    pub diag: Vec<i128>,
    /// Right transform V (cols x cols).
    pub v: IntMat,
    /// The transformed right-hand side U b, when one was supplied.
    pub rhs: Option<Vec<i128>>,
}

/// Diagonalize by elementary row/column operations, minimal-absolute-value
/// pivoting. Row operations are applied to `rhs` in lockstep.
pub fn diagonalize(a: &IntMat, rhs: Option<&[i128]>) -> Diagonalized {
    let mut s = a.clone();
    let mut v = IntMat::identity(a.cols);
    let mut b: Option<Vec<i128>> = rhs.map(|x| x.to_vec());
    let t_max = a.rows.min(a.cols);

    for t in 0..t_max {
        loop {
            // find pivot: minimal nonzero absolute value in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            let mut best = i128::MAX;
            for i in t..s.rows {
                for j in t..s.cols {
                    let x = s[(i, j)].abs();
                    if x != 0 && x < best {
                        best = x;
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Diagonalized {
                    diag: (0..t_max).map(|i| s[(i, i)]).collect(),
                    v,
                    rhs: b,
                };
            };
            swap_rows(&mut s, b.as_deref_mut(), t, pi);
            swap_cols(&mut s, &mut v, t, pj);

            let p = s[(t, t)];
            // clear column t below/above
            let mut dirty = false;
            for i in 0..s.rows {
                if i == t || s[(i, t)] == 0 {
                    continue;
                }
                let q = div_nearest(s[(i, t)], p);
                if q != 0 {
                    row_axpy(&mut s, b.as_deref_mut(), i, t, -q);
                }
                if s[(i, t)] != 0 {
                    dirty = true;
                }
            }
            // clear row t
            for j in 0..s.cols {
                if j == t || s[(t, j)] == 0 {
                    continue;
                }
                let q = div_nearest(s[(t, j)], p);
                if q != 0 {
                    col_axpy(&mut s, &mut v, j, t, -q);
                }
                if s[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                let col_clear = (0..s.rows).all(|i| i == t || s[(i, t)] == 0);
                let row_clear = (0..s.cols).all(|j| j == t || s[(t, j)] == 0);
                if col_clear && row_clear {
                    break;
                }
            }
        }
    }

    Diagonalized {
        diag: (0..t_max).map(|i| s[(i, i)]).collect(),
        v,
        rhs: b,
    }
}

/// Solve `A x = b (mod m)`; returns a solution reduced into `[0, m)`,
/// or the index and invariant factor of the first failing congruence.
pub fn solve_mod(a: &IntMat, b: &[i128], m: i128) -> Result<Vec<i128>, (usize, i128, i128)> {
    assert_eq!(b.len(), a.rows);
    assert!(m > 0);
    let d = diagonalize(a, Some(b));
    let ub = d.rhs.unwrap();
    let mut y = vec![0i128; a.cols];
    for i in 0..a.rows {
        let s = if i < d.diag.len() { d.diag[i] } else { 0 };
        let c = ub[i].rem_euclid(m);
        if s == 0 {
            if c != 0 {
                return Err((i, 0, c));
            }
            continue;
        }
        let g = s.abs().gcd(&m);
        if c % g != 0 {
            return Err((i, s, c));
        }
        // solve s * y = c (mod m): y = (c/g) * inv(s/g mod m/g) mod m/g
        let mg = m / g;
        let sg = (s / g).rem_euclid(mg);
        let cg = (c / g).rem_euclid(mg);
        let y_i = if mg == 1 {
            0
        } else {
            (cg * mod_inverse(sg, mg).expect("coprime after gcd division")).rem_euclid(mg)
        };
        if i < a.cols {
            y[i] = y_i;
        } else if y_i != 0 {
            return Err((i, s, c));
        }
    }
    // x = V y
    let mut x = vec![0i128; a.cols];
    for i in 0..a.cols {
        let mut acc: i128 = 0;
        for j in 0..a.cols {
            acc += d.v[(i, j)] * y[j];
        }
        x[i] = acc.rem_euclid(m);
    }
    Ok(x)
}

/// Number of solutions of `A x = 0 (mod m)`.
pub fn kernel_count_mod(a: &IntMat, m: i128) -> u128 {
    let d = diagonalize(a, None);
    let mut count: u128 = 1;
    let nonzero = d.diag.iter().filter(|&&s| s != 0).count();
    for &s in d.diag.iter().filter(|&&s| s != 0) {
        count *= s.abs().gcd(&m) as u128;
    }
    let free = a.cols - nonzero;
    count * (m as u128).pow(free as u32)
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let e = i128::extended_gcd(&a.rem_euclid(m), &m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Rounded division, keeps entries small during elimination.
fn div_nearest(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r.abs() > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

fn swap_rows(s: &mut IntMat, b: Option<&mut [i128]>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..s.cols {
        s.data.swap(i * s.cols + c, j * s.cols + c);
    }
    if let Some(b) = b {
        b.swap(i, j);
    }
}

fn swap_cols(s: &mut IntMat, v: &mut IntMat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..s.rows {
        s.data.swap(r * s.cols + i, r * s.cols + j);
    }
    for r in 0..v.rows {
        v.data.swap(r * v.cols + i, r * v.cols + j);
    }
}

/// row_i += q * row_j (on S and the rhs).
fn row_axpy(s: &mut IntMat, b: Option<&mut [i128]>, i: usize, j: usize, q: i128) {
    for c in 0..s.cols {
        let x = s[(j, c)];
        s[(i, c)] += q * x;
    }
    if let Some(b) = b {
        b[i] += q * b[j];
    }
}

/// col_i += q * col_j (on S and V).
fn col_axpy(s: &mut IntMat, v: &mut IntMat, i: usize, j: usize, q: i128) {
    for r in 0..s.rows {
        let x = s[(r, j)];
        s[(r, i)] += q * x;
    }
    for r in 0..v.rows {
        let x = v[(r, j)];
        v[(r, i)] += q * x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, entries: &[i128]) -> IntMat {
        IntMat {
            rows,
            cols,
            data: entries.to_vec(),
        }
    }

    fn check_solution(a: &IntMat, x: &[i128], b: &[i128], m: i128) {
        for i in 0..a.rows {
            let mut acc = 0i128;
            for j in 0..a.cols {
                acc += a[(i, j)] * x[j];
            }
            assert_eq!(acc.rem_euclid(m), b[i].rem_euclid(m));
        }
    }

    #[test]
    fn solve_simple_system() {
        // x + y = 3, x - y = 1 mod 5 -> x = 2, y = 1
        let a = mat(2, 2, &[1, 1, 1, -1]);
        let b = vec![3, 1];
        let x = solve_mod(&a, &b, 5).unwrap();
        check_solution(&a, &x, &b, 5);
    }

    #[test]
    fn unsolvable_congruence() {
        // 2x = 1 mod 4 has no solution
        let a = mat(1, 1, &[2]);
        assert!(solve_mod(&a, &[1], 4).is_err());
        let x = solve_mod(&a, &[2], 4).unwrap();
        check_solution(&a, &x, &[2], 4);
    }

    #[test]
    fn overdetermined_consistent() {
        let a = mat(3, 2, &[1, 0, 0, 1, 1, 1]);
        let b = vec![2, 3, 5];
        let x = solve_mod(&a, &b, 7).unwrap();
        check_solution(&a, &x, &b, 7);
    }

    #[test]
    fn kernel_count_diagonal() {
        // diag(2, 3) mod 6: gcd(2,6)*gcd(3,6) = 2*3 = 6 solutions
        let a = mat(2, 2, &[2, 0, 0, 3]);
        assert_eq!(kernel_count_mod(&a, 6), 6);
    }

    #[test]
    fn kernel_count_with_free_columns() {
        // 1x2 matrix [2 4] mod 4: solutions of 2x + 4y = 0 mod 4:
        // x in {0, 2}, y free -> 2 * 4 = 8
        let a = mat(1, 2, &[2, 4]);
        assert_eq!(kernel_count_mod(&a, 4), 8);
    }

    #[test]
    fn random_small_systems_roundtrip() {
        let mut state = 12345u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let rows = 1 + (next() % 4) as usize;
            let cols = 1 + (next() % 4) as usize;
            let m = [2i128, 3, 4, 6, 12][(next() % 5) as usize];
            let a = IntMat {
                rows,
                cols,
                data: (0..rows * cols)
                    .map(|_| (next() % 7) as i128 - 3)
                    .collect(),
            };
            // build a guaranteed-solvable rhs from a random x
            let x0: Vec<i128> = (0..cols).map(|_| (next() % m as u64) as i128).collect();
            let b: Vec<i128> = (0..rows)
                .map(|i| (0..cols).map(|j| a[(i, j)] * x0[j]).sum())
                .collect();
            let x = solve_mod(&a, &b, m).expect("constructed system must be solvable");
            check_solution(&a, &x, &b, m);
        }
    }
}
