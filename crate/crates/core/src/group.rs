//! Finite group arithmetic on explicit multiplication tables: construction
//! from tables or permutation generators, subgroup lattices, conjugacy
//! classes, double cosets, and exact factorizations G = G1 G2.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum GroupError {
    #[error("multiplication table is not closed or not a Latin square at row {0}")]
    NotClosed(usize),
    #[error("associativity violated at triple ({0}, {1}, {2})")]
    AssocViolation(usize, usize, usize),
    #[error("no identity element found")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("group order {0} exceeds the configured bound {1}")]
    TooLarge(usize, usize),
    #[error("subgroup enumeration bound exceeded: order {0} > {1}")]
    OrderBoundExceeded(usize, usize),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub const DEFAULT_MAX_ORDER: usize = 2000;
pub const DEFAULT_SUBGROUP_ORDER_BOUND: usize = 200;

/// A finite group as a multiplication table over `{0..order-1}`,
/// with identity 0. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// A subgroup given by its sorted element set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<usize>,
}

/// Verdict and witness for an ordered pair of subgroups.
#[derive(Debug, Clone, Serialize)]
pub struct GroupFactorization {
    pub g1: Subgroup,
    pub g2: Subgroup,
    pub exact: bool,
    /// `g -> (g1, g2)` when exact.
    pub expression_table: Option<BTreeMap<usize, (usize, usize)>>,
}

impl FiniteGroup {
    /// Validate an explicit multiplication table. The identity is located
    /// and the elements renumbered so it sits at index 0.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Malformed("empty table".into()));
        }
        if n > DEFAULT_MAX_ORDER {
            return Err(GroupError::TooLarge(n, DEFAULT_MAX_ORDER));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(GroupError::NotClosed(i));
            }
        }
        // locate identity
        let id = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        // renumber so identity = 0 (swap 0 and id)
        let perm: Vec<usize> = (0..n)
            .map(|i| {
                if i == id {
                    0
                } else if i == 0 {
                    id
                } else {
                    i
                }
            })
            .collect();
        let mut t = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                t[perm[a]][perm[b]] = perm[table[a][b]];
            }
        }
        Self::finish(t, None)
    }

    fn finish(t: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<FiniteGroup, GroupError> {
        let n = t.len();
        // Latin square rows/columns
        for i in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut row[t[i][j]], true) {
                    return Err(GroupError::NotClosed(i));
                }
                if std::mem::replace(&mut col[t[j][i]], true) {
                    return Err(GroupError::NotClosed(i));
                }
            }
        }
        // associativity: full check up to order 512, sampled above
        if n <= 512 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if t[t[a][b]][c] != t[a][t[b][c]] {
                            return Err(GroupError::AssocViolation(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..10_000 {
                let mut next = || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % n as u64) as usize
                };
                let (a, b, c) = (next(), next(), next());
                if t[t[a][b]][c] != t[a][t[b][c]] {
                    return Err(GroupError::AssocViolation(a, b, c));
                }
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| t[a][b] == 0 && t[b][a] == 0)
                .ok_or(GroupError::NoInverse(a))?;
        }
        Ok(FiniteGroup {
            table: t,
            inverses,
            labels,
        })
    }

    /// Closure of permutation generators on `points` points; identity first,
    /// remaining elements numbered in breadth-first discovery order.
    pub fn from_permutations(points: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        if points == 0 || points > 16 {
            return Err(GroupError::Malformed(
                "permutation degree must be between 1 and 16".into(),
            ));
        }
        for g in gens {
            if g.len() != points {
                return Err(GroupError::Malformed("generator has wrong length".into()));
            }
            let mut seen = vec![false; points];
            for &x in g {
                if x >= points || std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::Malformed("generator is not a permutation".into()));
                }
            }
        }
        let id: Vec<usize> = (0..points).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(id, 0);
        let mut frontier = 0usize;
        while frontier < elems.len() {
            let cur = elems[frontier].clone();
            frontier += 1;
            for g in gens {
                // compose: (cur then g)
                let prod: Vec<usize> = cur.iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= DEFAULT_MAX_ORDER {
                        return Err(GroupError::TooLarge(elems.len() + 1, DEFAULT_MAX_ORDER));
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
        }
        let n = elems.len();
        let mut t = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                // (a*b)(x) = a(b(x)): apply b first, then a
                let prod: Vec<usize> = (0..points).map(|x| elems[a][elems[b][x]]).collect();
                t[a][b] = *index
                    .get(&prod)
                    .ok_or_else(|| GroupError::NotClosed(a))?;
            }
        }
        Self::finish(t, None)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let t = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::finish(t, None).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n` (symmetries of the n-gon).
    pub fn dihedral(n: usize) -> FiniteGroup {
        // elements: 0..n rotations r^i, n..2n reflections s r^i
        let m = 2 * n;
        let mut t = vec![vec![0usize; m]; m];
        for a in 0..m {
            for b in 0..m {
                let (ra, fa) = if a < n { (a, false) } else { (a - n, true) };
                let (rb, fb) = if b < n { (b, false) } else { (b - n, true) };
                // (s^fa r^ra)(s^fb r^rb) = s^(fa+fb) r^(±ra+rb)
                let rot = if fb {
                    (n + rb - ra % n) % n
                } else {
                    (ra + rb) % n
                };
                let flip = fa ^ fb;
                t[a][b] = if flip { n + rot } else { rot };
            }
        }
        Self::finish(t, None).expect("dihedral table is a group")
    }

    /// Symmetric group on `n <= 5` points.
    pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::Malformed("symmetric(n) supports 1 <= n <= 5".into()));
        }
        if n == 1 {
            return Ok(Self::cyclic(1));
        }
        let mut transposition: Vec<usize> = (0..n).collect();
        transposition.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        Self::from_permutations(n, &[transposition, cycle])
    }

    /// Quaternion group of order 8: {1, -1, i, -i, j, -j, k, -k}.
    pub fn quaternion8() -> FiniteGroup {
        // encode q = (sign, axis) with axis in {1, i, j, k}
        let name = |s: usize, a: usize| s * 4 + a; // 0..8
        let mul = |x: usize, y: usize| -> usize {
            let (sx, ax) = (x / 4, x % 4);
            let (sy, ay) = (y / 4, y % 4);
            // axis multiplication table with result sign
            let (s, a) = match (ax, ay) {
                (0, b) => (0, b),
                (b, 0) => (0, b),
                (1, 1) => (1, 0),
                (2, 2) => (1, 0),
                (3, 3) => (1, 0),
                (1, 2) => (0, 3),
                (2, 1) => (1, 3),
                (2, 3) => (0, 1),
                (3, 2) => (1, 1),
                (3, 1) => (0, 2),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            };
            name((sx + sy + s) % 2, a)
        };
        let t = (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect();
        Self::finish(t, None).expect("quaternion table is a group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        if n > DEFAULT_MAX_ORDER {
            return Err(GroupError::TooLarge(n, DEFAULT_MAX_ORDER));
        }
        let code = |x: usize, y: usize| x * nb + y;
        let mut t = vec![vec![0usize; n]; n];
        for x1 in 0..na {
            for y1 in 0..nb {
                for x2 in 0..na {
                    for y2 in 0..nb {
                        t[code(x1, y1)][code(x2, y2)] = code(a.mul(x1, x2), b.mul(y1, y2));
                    }
                }
            }
        }
        Self::finish(t, None)
    }

    /// Semidirect product `A x| B` where `action[b]` is the automorphism of
    /// `A` induced by `b in B` (as a table of images).
    pub fn semidirect(
        a: &FiniteGroup,
        b: &FiniteGroup,
        action: &[Vec<usize>],
    ) -> Result<FiniteGroup, GroupError> {
        let (na, nb) = (a.order(), b.order());
        if action.len() != nb || action.iter().any(|f| f.len() != na) {
            return Err(GroupError::Malformed("action table has wrong shape".into()));
        }
        let n = na * nb;
        if n > DEFAULT_MAX_ORDER {
            return Err(GroupError::TooLarge(n, DEFAULT_MAX_ORDER));
        }
        let code = |x: usize, y: usize| x * nb + y;
        let mut t = vec![vec![0usize; n]; n];
        for x1 in 0..na {
            for y1 in 0..nb {
                for x2 in 0..na {
                    for y2 in 0..nb {
                        // (x1, y1)(x2, y2) = (x1 * y1(x2), y1 y2)
                        t[code(x1, y1)][code(x2, y2)] =
                            code(a.mul(x1, action[y1][x2]), b.mul(y1, y2));
                    }
                }
            }
        }
        Self::finish(t, None)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `seed`.
    pub fn subgroup_generated(&self, seed: &[usize]) -> Subgroup {
        let mut set = BTreeSet::new();
        set.insert(0usize);
        let mut stack: Vec<usize> = seed.to_vec();
        for &s in seed {
            set.insert(s);
        }
        while let Some(x) = stack.pop() {
            let ix = self.inv(x);
            if set.insert(ix) {
                stack.push(ix);
            }
            for &y in set.clone().iter() {
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if set.insert(p) {
                        stack.push(p);
                    }
                }
            }
        }
        // one more closure pass to be safe against the clone-snapshot above
        loop {
            let mut grew = false;
            let elems: Vec<usize> = set.iter().copied().collect();
            for &x in &elems {
                for &y in &elems {
                    if set.insert(self.mul(x, y)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Subgroup {
            elements: set.into_iter().collect(),
        }
    }

    pub fn is_subgroup(&self, s: &Subgroup) -> bool {
        let set: BTreeSet<usize> = s.elements.iter().copied().collect();
        set.contains(&0)
            && s.elements.iter().all(|&x| {
                set.contains(&self.inv(x))
                    && s.elements.iter().all(|&y| set.contains(&self.mul(x, y)))
            })
    }

    /// Complete subgroup list: cyclic subgroups joined to a fixpoint.
    pub fn enumerate_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        self.enumerate_subgroups_bounded(DEFAULT_SUBGROUP_ORDER_BOUND)
    }

    pub fn enumerate_subgroups_bounded(&self, bound: usize) -> Result<Vec<Subgroup>, GroupError> {
        let n = self.order();
        if n > bound {
            return Err(GroupError::OrderBoundExceeded(n, bound));
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![0]);
        for g in 0..n {
            found.insert(self.subgroup_generated(&[g]).elements);
        }
        loop {
            let snapshot: Vec<Vec<usize>> = found.iter().cloned().collect();
            let before = found.len();
            for a in &snapshot {
                for b in &snapshot {
                    let mut seed = a.clone();
                    seed.extend_from_slice(b);
                    found.insert(self.subgroup_generated(&seed).elements);
                }
            }
            if found.len() == before {
                break;
            }
        }
        let mut out: Vec<Subgroup> = found
            .into_iter()
            .map(|elements| Subgroup { elements })
            .collect();
        out.sort_by(|a, b| {
            a.elements
                .len()
                .cmp(&b.elements.len())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        // Lagrange sanity
        for s in &out {
            assert_eq!(n % s.elements.len(), 0, "Lagrange violated");
        }
        Ok(out)
    }

    /// All ordered pairs of subgroups forming an exact factorization,
    /// verified both by the order count and by brute-force uniqueness.
    pub fn exact_factorizations(&self) -> Result<Vec<GroupFactorization>, GroupError> {
        let subs = self.enumerate_subgroups()?;
        let mut out = Vec::new();
        for g1 in &subs {
            for g2 in &subs {
                let fact = self.check_factorization(g1, g2);
                if fact.exact {
                    out.push(fact);
                }
            }
        }
        // symmetry: (G1, G2) exact iff (G2, G1) exact
        for f in &out {
            assert!(
                out.iter().any(|g| g.g1 == f.g2 && g.g2 == f.g1),
                "factorization symmetry violated"
            );
        }
        Ok(out)
    }

    /// Decide a single ordered pair by both criteria; they must agree.
    pub fn check_factorization(&self, g1: &Subgroup, g2: &Subgroup) -> GroupFactorization {
        let n = self.order();
        let s1: BTreeSet<usize> = g1.elements.iter().copied().collect();
        let s2: BTreeSet<usize> = g2.elements.iter().copied().collect();
        let trivial_intersection = s1.intersection(&s2).count() == 1;
        let counts_match = g1.elements.len() * g2.elements.len() == n;
        let exact_by_count = trivial_intersection && counts_match;

        // brute-force unique expression
        let mut table: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut unique = true;
        for &a in &g1.elements {
            for &b in &g2.elements {
                let g = self.mul(a, b);
                if table.insert(g, (a, b)).is_some() {
                    unique = false;
                }
            }
        }
        let exact_by_expression = unique && table.len() == n;
        assert_eq!(
            exact_by_count, exact_by_expression,
            "factorization criteria disagree"
        );
        GroupFactorization {
            g1: g1.clone(),
            g2: g2.clone(),
            exact: exact_by_count,
            expression_table: exact_by_count.then_some(table),
        }
    }

    /// Conjugacy classes, sorted by size then minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut class: BTreeSet<usize> = BTreeSet::new();
            for g in 0..n {
                class.insert(self.conj(g, x));
            }
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect::<Vec<_>>());
        }
        classes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a[0].cmp(&b[0])));
        classes
    }

    /// Map element -> index of its conjugacy class in `conjugacy_classes()`.
    pub fn class_map(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let classes = self.conjugacy_classes();
        let mut map = vec![0usize; self.order()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                map[x] = i;
            }
        }
        (classes, map)
    }

    /// Double cosets `L1 g L2`, each as (minimal representative, elements).
    pub fn double_cosets(&self, l1: &Subgroup, l2: &Subgroup) -> Vec<(usize, Vec<usize>)> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut coset = BTreeSet::new();
            for &a in &l1.elements {
                for &b in &l2.elements {
                    coset.insert(self.mul(self.mul(a, g), b));
                }
            }
            for &x in &coset {
                seen[x] = true;
            }
            let elements: Vec<usize> = coset.into_iter().collect();
            out.push((elements[0], elements));
        }
        out.sort_by_key(|(rep, _)| *rep);
        out
    }

    /// Left cosets `g L`, sorted by minimal representative.
    pub fn left_cosets(&self, l: &Subgroup) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let coset: BTreeSet<usize> = l.elements.iter().map(|&x| self.mul(g, x)).collect();
            for &x in &coset {
                seen[x] = true;
            }
            out.push(coset.into_iter().collect::<Vec<_>>());
        }
        out.sort_by_key(|c| c[0]);
        out
    }

    /// The subgroup `g L g^{-1}`.
    pub fn conjugate_subgroup(&self, l: &Subgroup, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = l.elements.iter().map(|&x| self.conj(g, x)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let sb: BTreeSet<usize> = b.elements.iter().copied().collect();
        Subgroup {
            elements: a
                .elements
                .iter()
                .copied()
                .filter(|x| sb.contains(x))
                .collect(),
        }
    }

    /// The multiplication table of a subgroup as a standalone group, with
    /// the induced numbering (sorted elements; identity stays first),
    /// plus the element map back into the parent.
    pub fn subgroup_as_group(&self, l: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let elems = l.elements.clone();
        let index: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let m = elems.len();
        let mut t = vec![vec![0usize; m]; m];
        for a in 0..m {
            for b in 0..m {
                t[a][b] = index[&self.mul(elems[a], elems[b])];
            }
        }
        let g = Self::finish(t, None).expect("subgroup table is a group");
        (g, elems)
    }
}
