//! Exact cochain arithmetic with values in Q/Z (the additive model of
//! roots of unity): coboundaries in the inhomogeneous bar complex, cocycle
//! checks, restriction, and trivialization via Smith normal form.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteGroup, Subgroup};
use crate::snf::{solve_mod, IntMat};

/// An exact rational in `[0, 1)`, representing `exp(2 pi i value)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Circle(Ratio<i64>);

impl Circle {
    pub fn new(num: i64, den: i64) -> Circle {
        assert!(den != 0, "zero denominator");
        let r = Ratio::new(num, den);
        Circle(r - r.floor())
    }

    pub fn zero() -> Circle {
        Circle(Ratio::new(0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.0.numer() == &0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }
}

impl std::ops::Add for Circle {
    type Output = Circle;
    fn add(self, rhs: Circle) -> Circle {
        let r = self.0 + rhs.0;
        Circle(r - r.floor())
    }
}

impl std::ops::Sub for Circle {
    type Output = Circle;
    fn sub(self, rhs: Circle) -> Circle {
        let r = self.0 - rhs.0;
        Circle(r - r.floor())
    }
}

impl std::ops::Neg for Circle {
    type Output = Circle;
    fn neg(self) -> Circle {
        Circle::zero() - self
    }
}

impl std::fmt::Display for Circle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// A degree-k cochain on a finite group: a dense table `G^k -> Q/Z`.
#[derive(Debug, Clone)]
pub struct Cochain {
    pub group: Arc<FiniteGroup>,
    pub degree: usize,
    values: Vec<Circle>,
}

#[derive(Debug, Clone, Error)]
pub enum CohomologyError {
    #[error("cochain degree {0} unsupported (must be 1..=4)")]
    DegreeUnsupported(usize),
    #[error("input is not a cocycle: d(omega) nonzero at tuple {0:?}")]
    NotACocycle(Vec<usize>),
    #[error("coefficient modulus {0} exceeds the bound {1}")]
    CoefficientOverflow(i64, i64),
    #[error("instance too large: {0} table entries exceed the bound {1}")]
    TooLarge(u128, u128),
    #[error("mismatched groups")]
    GroupMismatch,
}

const MODULUS_BOUND: i64 = 1_000_000;
const BRUTE_BOUND: u128 = 100_000;

/// Outcome of a trivialization attempt.
#[derive(Debug, Clone)]
pub enum Trivialization {
    /// A 2-cochain with `d(psi) = omega`, verified exactly.
    Witness(Cochain),
    /// Certificate of nontriviality: the failing invariant-factor
    /// congruence `(row, invariant_factor, residue, modulus)`.
    Nontrivial {
        row: usize,
        invariant_factor: i128,
        residue: i128,
        modulus: i64,
    },
}

impl Cochain {
    pub fn zero(group: Arc<FiniteGroup>, degree: usize) -> Cochain {
        assert!(degree >= 1);
        let n = group.order();
        Cochain {
            group,
            degree,
            values: vec![Circle::zero(); n.pow(degree as u32)],
        }
    }

    pub fn from_values(
        group: Arc<FiniteGroup>,
        degree: usize,
        values: Vec<Circle>,
    ) -> Result<Cochain, CohomologyError> {
        if degree == 0 || degree > 4 {
            return Err(CohomologyError::DegreeUnsupported(degree));
        }
        let n = group.order();
        assert_eq!(values.len(), n.pow(degree as u32), "table size mismatch");
        Ok(Cochain {
            group,
            degree,
            values,
        })
    }

    fn index(&self, args: &[usize]) -> usize {
        let n = self.group.order();
        args.iter().fold(0usize, |acc, &g| acc * n + g)
    }

    pub fn get(&self, args: &[usize]) -> Circle {
        debug_assert_eq!(args.len(), self.degree);
        self.values[self.index(args)]
    }

    pub fn set(&mut self, args: &[usize], v: Circle) {
        let idx = self.index(args);
        self.values[idx] = v;
    }

    pub fn values(&self) -> &[Circle] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Circle::is_zero)
    }

    /// Zero whenever any argument is the identity.
    pub fn is_normalized(&self) -> bool {
        let n = self.group.order();
        let mut args = vec![0usize; self.degree];
        loop {
            if args.contains(&0) && !self.get(&args).is_zero() {
                return false;
            }
            if !increment(&mut args, n) {
                return true;
            }
        }
    }

    /// Least common multiple of all value denominators.
    pub fn denominator_lcm(&self) -> i64 {
        self.values
            .iter()
            .fold(1i64, |acc, v| acc.lcm(&v.denom()))
    }

    /// Pointwise difference, same group and degree required.
    pub fn sub(&self, other: &Cochain) -> Result<Cochain, CohomologyError> {
        if self.degree != other.degree || self.group.order() != other.group.order() {
            return Err(CohomologyError::GroupMismatch);
        }
        Ok(Cochain {
            group: self.group.clone(),
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }
}

fn increment(args: &mut [usize], n: usize) -> bool {
    for a in args.iter_mut().rev() {
        *a += 1;
        if *a < n {
            return true;
        }
        *a = 0;
    }
    false
}

/// The coboundary operator of the inhomogeneous bar complex:
/// `(df)(g_1,...,g_{k+1}) = f(g_2,...,g_{k+1})
///   + sum_i (-1)^i f(g_1,...,g_i g_{i+1},...,g_{k+1})
///   + (-1)^{k+1} f(g_1,...,g_k)`.
pub fn coboundary(f: &Cochain) -> Result<Cochain, CohomologyError> {
    let k = f.degree;
    if k + 1 > 4 {
        return Err(CohomologyError::DegreeUnsupported(k + 1));
    }
    let g = &f.group;
    let n = g.order();
    let mut out = Cochain::zero(f.group.clone(), k + 1);
    let mut args = vec![0usize; k + 1];
    loop {
        let mut acc = f.get(&args[1..]);
        let mut sign_neg = true; // (-1)^i for i = 1
        for i in 0..k {
            let mut inner: Vec<usize> = Vec::with_capacity(k);
            inner.extend_from_slice(&args[..i]);
            inner.push(g.mul(args[i], args[i + 1]));
            inner.extend_from_slice(&args[i + 2..]);
            let v = f.get(&inner);
            acc = if sign_neg { acc - v } else { acc + v };
            sign_neg = !sign_neg;
        }
        let last = f.get(&args[..k]);
        acc = if sign_neg { acc - last } else { acc + last };
        out.set(&args, acc);
        if !increment(&mut args, n) {
            break;
        }
    }
    // d . d = 0 on every call in debug builds
    #[cfg(debug_assertions)]
    if k + 2 <= 4 {
        debug_assert!(coboundary(&out).map(|dd| dd.is_zero()).unwrap_or(true));
    }
    Ok(out)
}

/// Whether `d(omega) = 0`.
pub fn is_cocycle(omega: &Cochain) -> Result<bool, CohomologyError> {
    Ok(coboundary(omega)?.is_zero())
}

/// The standard 3-cocycle representative on Z/n:
/// `omega(a, b, c) = q * a * floor((b + c) / n) / n  (mod 1)`.
pub fn cyclic_3cocycle(n: usize, q: i64) -> Cochain {
    let group = Arc::new(FiniteGroup::cyclic(n));
    let mut f = Cochain::zero(group, 3);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let carry = ((b + c) / n) as i64;
                f.set(
                    &[a, b, c],
                    Circle::new(q * a as i64 * carry, n as i64),
                );
            }
        }
    }
    f
}

/// Restrict a cochain on G to a subgroup L, reindexed by L's own numbering.
/// Returns the restriction together with L as a standalone group.
pub fn restrict(f: &Cochain, l: &Subgroup) -> (Cochain, FiniteGroup) {
    let (lg, embed) = f.group.subgroup_as_group(l);
    let m = lg.order();
    let lg_arc = Arc::new(lg.clone());
    let mut out = Cochain::zero(lg_arc, f.degree);
    let mut args = vec![0usize; f.degree];
    loop {
        let parent_args: Vec<usize> = args.iter().map(|&x| embed[x]).collect();
        out.set(&args, f.get(&parent_args));
        if !increment(&mut args, m) {
            break;
        }
    }
    (out, lg)
}

/// Try to write a 3-cocycle as `d(psi)` for a 2-cochain `psi`.
///
/// Works over the coefficient group `(1/m) Z / Z` with
/// `m = lcm(denominators, |L|)`; this loses no solvability because
/// `H^3(L, Q/Z)` is annihilated by `|L|`. The integer system
/// `D x = m omega (mod m)` is solved by Smith normal form; a witness is
/// verified exactly, a failure is reported as the failing congruence.
pub fn trivialize(omega: &Cochain) -> Result<Trivialization, CohomologyError> {
    assert_eq!(omega.degree, 3, "trivialize expects a 3-cocycle");
    if let Some(bad) = first_nonzero_tuple(&coboundary(omega)?) {
        return Err(CohomologyError::NotACocycle(bad));
    }
    let g = &omega.group;
    let n = g.order();
    let m = omega.denominator_lcm().lcm(&(n as i64));
    if m > MODULUS_BOUND {
        return Err(CohomologyError::CoefficientOverflow(m, MODULUS_BOUND));
    }

    // unknowns: psi(a, b), a dense n^2 table; rows: d(psi) entries on G^3
    let cols = n * n;
    let rows = n * n * n;
    let mut d = IntMat::zeros(rows, cols);
    let mut b = vec![0i128; rows];
    for g1 in 0..n {
        for g2 in 0..n {
            for g3 in 0..n {
                let row = (g1 * n + g2) * n + g3;
                // dpsi(g1,g2,g3) = psi(g2,g3) - psi(g1 g2, g3)
                //                 + psi(g1, g2 g3) - psi(g1,g2)
                d[(row, g2 * n + g3)] += 1;
                d[(row, g.mul(g1, g2) * n + g3)] -= 1;
                d[(row, g1 * n + g.mul(g2, g3))] += 1;
                d[(row, g1 * n + g2)] -= 1;
                let val = omega.get(&[g1, g2, g3]).ratio() * Ratio::new(m, 1);
                debug_assert!(val.is_integer());
                b[row] = *val.numer() as i128;
            }
        }
    }

    match solve_mod(&d, &b, m as i128) {
        Ok(x) => {
            let mut psi = Cochain::zero(omega.group.clone(), 2);
            for a in 0..n {
                for bb in 0..n {
                    psi.set(&[a, bb], Circle::new(x[a * n + bb] as i64, m));
                }
            }
            // exact verification
            let dpsi = coboundary(&psi)?;
            let diff = dpsi.sub(omega)?;
            assert!(diff.is_zero(), "witness verification failed");
            // renormalize: for a normalized cocycle, shift by the constant
            // psi(e, e) so that psi(e, .) = psi(., e) = 0
            if omega.is_normalized() {
                let c = psi.get(&[0, 0]);
                if !c.is_zero() {
                    for v in psi.values.iter_mut() {
                        *v = *v - c;
                    }
                }
                let dpsi = coboundary(&psi)?;
                assert!(dpsi.sub(omega)?.is_zero());
                assert!(psi.is_normalized(), "renormalization failed");
            }
            Ok(Trivialization::Witness(psi))
        }
        Err((row, s, c)) => Ok(Trivialization::Nontrivial {
            row,
            invariant_factor: s,
            residue: c,
            modulus: m,
        }),
    }
}

fn first_nonzero_tuple(f: &Cochain) -> Option<Vec<usize>> {
    let n = f.group.order();
    let mut args = vec![0usize; f.degree];
    loop {
        if !f.get(&args).is_zero() {
            return Some(args);
        }
        if !increment(&mut args, n) {
            return None;
        }
    }
}

/// Number of degree-k cohomology classes with values in `(1/m) Z / Z`,
/// by exhaustive linear algebra: `|ker d_k| / |im d_{k-1}|` mod m.
pub fn brute_classes(group: &FiniteGroup, degree: usize, m: i64) -> Result<u128, CohomologyError> {
    if degree == 0 || degree + 1 > 4 {
        return Err(CohomologyError::DegreeUnsupported(degree));
    }
    let n = group.order() as u128;
    let entries = n.pow(degree as u32 + 1) * m as u128;
    if entries > BRUTE_BOUND {
        return Err(CohomologyError::TooLarge(entries, BRUTE_BOUND));
    }
    let dk = bar_matrix(group, degree);
    let kernel = crate::snf::kernel_count_mod(&dk, m as i128);
    let image = if degree == 1 {
        // degree-0 cochains are constants with zero coboundary
        1u128
    } else {
        let dprev = bar_matrix(group, degree - 1);
        let cols = dprev.cols as u32;
        let ker_prev = crate::snf::kernel_count_mod(&dprev, m as i128);
        (m as u128).pow(cols) / ker_prev
    };
    Ok(kernel / image)
}

/// Integer matrix of the bar-complex coboundary `C^k -> C^{k+1}`.
fn bar_matrix(group: &FiniteGroup, k: usize) -> IntMat {
    let n = group.order();
    let cols = n.pow(k as u32);
    let rows = n.pow(k as u32 + 1);
    let mut d = IntMat::zeros(rows, cols);
    let mut args = vec![0usize; k + 1];
    let col_index = |a: &[usize]| a.iter().fold(0usize, |acc, &g| acc * n + g);
    let mut row = 0usize;
    loop {
        d[(row, col_index(&args[1..]))] += 1;
        let mut sign: i128 = -1;
        for i in 0..k {
            let mut inner: Vec<usize> = Vec::with_capacity(k);
            inner.extend_from_slice(&args[..i]);
            inner.push(group.mul(args[i], args[i + 1]));
            inner.extend_from_slice(&args[i + 2..]);
            d[(row, col_index(&inner))] += sign;
            sign = -sign;
        }
        d[(row, col_index(&args[..k]))] += sign;
        row += 1;
        if !increment(&mut args, n) {
            break;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn circle_arithmetic_is_exact() {
        let a = Circle::new(1, 3);
        let b = Circle::new(5, 6);
        assert_eq!(a + b, Circle::new(1, 6));
        assert_eq!(a - b, Circle::new(1, 2));
        assert_eq!(-a, Circle::new(2, 3));
        assert_eq!(Circle::new(7, 3), Circle::new(1, 3));
    }

    #[test]
    fn coboundary_of_zero_is_zero() {
        let f = Cochain::zero(c(3), 2);
        assert!(coboundary(&f).unwrap().is_zero());
    }

    #[test]
    fn homomorphism_is_a_cocycle() {
        // f: Z/2 -> Q/Z, f(g) = 1/2
        let mut f = Cochain::zero(c(2), 1);
        f.set(&[1], Circle::new(1, 2));
        assert!(coboundary(&f).unwrap().is_zero());
    }

    #[test]
    fn d_after_d_vanishes_on_s3() {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let mut psi = Cochain::zero(g.clone(), 2);
        // arbitrary exact values
        let mut k = 0i64;
        for a in 0..6 {
            for b in 0..6 {
                psi.set(&[a, b], Circle::new(k, 12));
                k = (k * 5 + 3) % 12;
            }
        }
        let d1 = coboundary(&psi).unwrap();
        assert!(coboundary(&d1).unwrap().is_zero());
    }

    #[test]
    fn cyclic_cocycles_pass_check() {
        for n in 2..=6 {
            for q in 0..n as i64 {
                let w = cyclic_3cocycle(n, q);
                assert!(is_cocycle(&w).unwrap(), "n={n}, q={q}");
            }
        }
    }

    #[test]
    fn cyclic2_entry_value() {
        let w = cyclic_3cocycle(2, 1);
        assert_eq!(w.get(&[1, 1, 1]), Circle::new(1, 2));
        assert!(w.get(&[0, 1, 1]).is_zero());
        assert!(w.get(&[1, 0, 1]).is_zero());
    }

    #[test]
    fn perturbed_cocycle_fails() {
        let mut w = cyclic_3cocycle(3, 1);
        w.set(&[1, 1, 1], w.get(&[1, 1, 1]) + Circle::new(1, 3));
        assert!(!is_cocycle(&w).unwrap());
    }

    #[test]
    fn restriction_commutes_with_coboundary() {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let subs = g.enumerate_subgroups().unwrap();
        let l = subs.iter().find(|s| s.elements.len() == 3).unwrap();
        let mut psi = Cochain::zero(g.clone(), 1);
        for a in 0..6 {
            psi.set(&[a], Circle::new(a as i64, 7));
        }
        let (rf, _) = restrict(&psi, l);
        let (rdf, _) = restrict(&coboundary(&psi).unwrap(), l);
        let drf = coboundary(&rf).unwrap();
        assert!(rdf.sub(&drf).unwrap().is_zero());
    }

    #[test]
    fn restrict_to_trivial_subgroup() {
        let w = cyclic_3cocycle(4, 3);
        let triv = Subgroup { elements: vec![0] };
        let (r, _) = restrict(&w, &triv);
        assert!(r.is_zero());
    }

    #[test]
    fn cyclic4_restriction_parity() {
        let g = FiniteGroup::cyclic(4);
        let l = Subgroup {
            elements: vec![0, 2],
        };
        for q in 0..4 {
            let w = cyclic_3cocycle(4, q);
            let (r, _) = restrict(&w, &l);
            // the only possibly-nonzero entry is at (1,1,1) in L's numbering
            assert_eq!(r.get(&[1, 1, 1]), Circle::new(q, 2));
            let out = trivialize(&r).unwrap();
            match (q % 2 == 0, out) {
                (true, Trivialization::Witness(_)) => {}
                (false, Trivialization::Nontrivial { .. }) => {}
                (parity, _) => panic!("wrong verdict for q={q}, even={parity}"),
            }
        }
    }

    #[test]
    fn trivialize_zero_gives_zero_witness() {
        let w = Cochain::zero(c(3), 3);
        match trivialize(&w).unwrap() {
            Trivialization::Witness(psi) => assert!(psi.is_zero()),
            _ => panic!("zero cochain must trivialize"),
        }
    }

    #[test]
    fn cyclic2_nontrivial_class_with_brute_force_oracle() {
        let w = cyclic_3cocycle(2, 1);
        assert!(matches!(
            trivialize(&w).unwrap(),
            Trivialization::Nontrivial { .. }
        ));
        // exhaustive oracle: no psi with values in (1/2)Z/Z or (1/4)Z/Z
        // has d(psi) = omega
        for m in [2i64, 4] {
            let g = c(2);
            let total = (m as usize).pow(4);
            let mut found = false;
            for code in 0..total {
                let mut psi = Cochain::zero(g.clone(), 2);
                let mut rem = code;
                for a in 0..2 {
                    for b in 0..2 {
                        psi.set(&[a, b], Circle::new((rem % m as usize) as i64, m));
                        rem /= m as usize;
                    }
                }
                if coboundary(&psi).unwrap().sub(&w).unwrap().is_zero() {
                    found = true;
                    break;
                }
            }
            assert!(!found, "m={m}: brute force found a witness");
        }
    }

    #[test]
    fn trivialize_roundtrip_on_random_cochains() {
        let groups: Vec<Arc<FiniteGroup>> = vec![
            Arc::new(FiniteGroup::symmetric(3).unwrap()),
            Arc::new(FiniteGroup::cyclic(4)),
        ];
        let mut state = 99u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for g in groups {
            let n = g.order();
            for _ in 0..10 {
                let mut psi0 = Cochain::zero(g.clone(), 2);
                for a in 0..n {
                    for b in 0..n {
                        psi0.set(&[a, b], Circle::new((next() % 12) as i64, 12));
                    }
                }
                let omega = coboundary(&psi0).unwrap();
                match trivialize(&omega).unwrap() {
                    Trivialization::Witness(psi) => {
                        assert!(coboundary(&psi)
                            .unwrap()
                            .sub(&omega)
                            .unwrap()
                            .is_zero());
                    }
                    _ => panic!("coboundary must trivialize"),
                }
            }
        }
    }

    #[test]
    fn brute_class_counts() {
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(brute_classes(&c2, 3, 4).unwrap(), 2);
        assert_eq!(brute_classes(&c2, 2, 4).unwrap(), 2);
        for n in 2..=5 {
            let cn = FiniteGroup::cyclic(n);
            assert_eq!(brute_classes(&cn, 1, n as i64).unwrap(), n as u128);
        }
    }

    #[test]
    fn trivialize_agrees_with_brute_classes_on_c2() {
        // H^3(C2, (1/2)Z/Z) has 2 classes: zero (trivial) and q=1
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(brute_classes(&c2, 3, 2).unwrap(), 2);
        assert!(matches!(
            trivialize(&cyclic_3cocycle(2, 0)).unwrap(),
            Trivialization::Witness(_)
        ));
        assert!(matches!(
            trivialize(&cyclic_3cocycle(2, 1)).unwrap(),
            Trivialization::Nontrivial { .. }
        ));
    }

    #[test]
    fn distinct_cyclic_classes_non_cohomologous() {
        // on Z/3 and Z/4, differences of distinct representatives do not
        // trivialize
        for n in [3usize, 4] {
            for q1 in 0..n as i64 {
                for q2 in 0..n as i64 {
                    if q1 == q2 {
                        continue;
                    }
                    let diff = cyclic_3cocycle(n, q1)
                        .sub(&cyclic_3cocycle(n, q2))
                        .unwrap();
                    assert!(
                        matches!(
                            trivialize(&diff).unwrap(),
                            Trivialization::Nontrivial { .. }
                        ),
                        "n={n}, q1={q1}, q2={q2} unexpectedly cohomologous"
                    );
                }
            }
        }
    }
}
