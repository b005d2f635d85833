//! Finite semigroups given by Cayley tables, their automorphisms, and the
//! subset calculus used by the solution theory.
//!
//! Tables are row-major with 0-based element indices; `table[x][y]` is the
//! product `x * y` with `x` the left factor. Enumeration streams tables in
//! lexicographic order of the flattened table, with optional isomorphism
//! collapse to the lexicographically least relabeling.

use std::collections::BTreeSet;

pub const DEFAULT_ORDER_CAP: usize = 4;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("associativity fails first at ({x}, {y}, {z}): ({x}{y}){z} != {x}({y}{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("table entry {value} at row {row}, column {col} is out of range for order {order}")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("order {requested} exceeds the enumeration cap {cap}")]
    LimitExceeded { requested: usize, cap: usize },
    #[error("permutation is not a bijection on {order} elements")]
    NotBijective { order: usize },
    #[error("permutation is not a homomorphism: fails at ({x}, {y})")]
    NotHomomorphism { x: usize, y: usize },
    #[error("element {element} is out of range for order {order}")]
    ElementOutOfRange { element: usize, order: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSemigroup {
    n: usize,
    table: Vec<usize>, // row-major, length n*n
}

impl FiniteSemigroup {
    /// Validates shape, entry range, and associativity. The associativity
    /// error names the first violating triple in lexicographic order.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, AlgebraError> {
        let n = rows.len();
        let mut table = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AlgebraError::NotSquare {
                    row: r,
                    found: row.len(),
                    expected: n,
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(AlgebraError::IndexOutOfRange {
                        row: r,
                        col: c,
                        value: v,
                        order: n,
                    });
                }
                table.push(v);
            }
        }
        let s = FiniteSemigroup { n, table };
        s.check_associativity()?;
        Ok(s)
    }

    pub fn from_flat(n: usize, table: Vec<usize>) -> Result<Self, AlgebraError> {
        let rows: Vec<Vec<usize>> = (0..n).map(|r| table[r * n..(r + 1) * n].to_vec()).collect();
        FiniteSemigroup::from_table(&rows)
    }

    fn check_associativity(&self) -> Result<(), AlgebraError> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Err(AlgebraError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    pub fn flat_table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|r| self.table[r * self.n..(r + 1) * self.n].to_vec())
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Eventual period of `x` under repeated right multiplication by `x`:
    /// the cycle length of the sequence x, x^2, x^3, ... once it loops.
    pub fn element_period(&self, x: usize) -> usize {
        let mut first_seen = vec![usize::MAX; self.n];
        let mut cur = x;
        let mut step = 1usize;
        loop {
            if first_seen[cur] != usize::MAX {
                return step - first_seen[cur];
            }
            first_seen[cur] = step;
            cur = self.mul(cur, x);
            step += 1;
        }
    }
}

fn relabel(n: usize, table: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            out[perm[x] * n + perm[y]] = perm[table[x * n + y]];
        }
    }
    out
}

/// All permutations of 0..n in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Lexicographically least flattened table among all relabelings.
pub fn canonical_form(s: &FiniteSemigroup) -> Vec<usize> {
    let n = s.order();
    permutations(n)
        .iter()
        .map(|p| relabel(n, s.flat_table(), p))
        .min()
        .expect("order is at least 1")
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automorphism {
    perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism {
            perm: (0..n).collect(),
        }
    }

    pub fn new(s: &FiniteSemigroup, perm: Vec<usize>) -> Result<Self, AlgebraError> {
        let n = s.order();
        if perm.len() != n {
            return Err(AlgebraError::NotBijective { order: n });
        }
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n || seen[v] {
                return Err(AlgebraError::NotBijective { order: n });
            }
            seen[v] = true;
        }
        for x in 0..n {
            for y in 0..n {
                if perm[s.mul(x, y)] != s.mul(perm[x], perm[y]) {
                    return Err(AlgebraError::NotHomomorphism { x, y });
                }
            }
        }
        Ok(Automorphism { perm })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self` after `other`: x -> self(other(x)).
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: other.perm.iter().map(|&x| self.perm[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0usize; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            inv[v] = i;
        }
        Automorphism { perm: inv }
    }
}

/// All automorphisms in lexicographic order of the underlying permutation.
/// The identity is always first.
pub fn enumerate_automorphisms(s: &FiniteSemigroup) -> Vec<Automorphism> {
    permutations(s.order())
        .into_iter()
        .filter_map(|p| Automorphism::new(s, p).ok())
        .collect()
}

/// Streams every associative table of order `n` in lexicographic order; with
/// `collapse_isomorphism` only canonical representatives are yielded.
pub fn enumerate_semigroups(
    n: usize,
    collapse_isomorphism: bool,
) -> Result<SemigroupEnumeration, AlgebraError> {
    enumerate_semigroups_capped(n, DEFAULT_ORDER_CAP, collapse_isomorphism)
}

pub fn enumerate_semigroups_capped(
    n: usize,
    cap: usize,
    collapse_isomorphism: bool,
) -> Result<SemigroupEnumeration, AlgebraError> {
    if n == 0 || n > cap {
        return Err(AlgebraError::LimitExceeded { requested: n, cap });
    }
    Ok(SemigroupEnumeration {
        n,
        ncells: n * n,
        collapse: collapse_isomorphism,
        perms: if collapse_isomorphism {
            permutations(n)
        } else {
            Vec::new()
        },
        table: vec![0; n * n],
        candidate: vec![0; n * n],
        pos: 0,
        exhausted: false,
    })
}

#[derive(Debug)]
pub struct SemigroupEnumeration {
    n: usize,
    ncells: usize,
    collapse: bool,
    perms: Vec<Vec<usize>>,
    table: Vec<usize>,
    candidate: Vec<usize>,
    pos: usize,
    exhausted: bool,
}

impl SemigroupEnumeration {
    fn get(&self, x: usize, y: usize) -> Option<usize> {
        let idx = x * self.n + y;
        if idx <= self.pos {
            Some(self.table[idx])
        } else {
            None
        }
    }

    fn triple_ok(&self, x: usize, y: usize, z: usize) -> bool {
        let Some(xy) = self.get(x, y) else { return true };
        let Some(yz) = self.get(y, z) else { return true };
        let Some(l) = self.get(xy, z) else { return true };
        let Some(r) = self.get(x, yz) else { return true };
        l == r
    }

    /// Associativity screen for the cell at `self.pos` (just assigned): only
    /// triples whose evaluation can involve that cell are examined, since all
    /// other fully evaluable triples were screened at earlier depths.
    fn partial_ok(&self) -> bool {
        let n = self.n;
        let a = self.pos / n;
        let b = self.pos % n;
        for z in 0..n {
            if !self.triple_ok(a, b, z) {
                return false;
            }
        }
        for x in 0..n {
            if !self.triple_ok(x, a, b) {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                if let Some(p) = self.get(x, y) {
                    if p == a && !self.triple_ok(x, y, b) {
                        return false;
                    }
                    if p == b && !self.triple_ok(a, x, y) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn is_canonical(&self) -> bool {
        self.perms
            .iter()
            .all(|p| relabel(self.n, &self.table, p) >= self.table)
    }
}

impl Iterator for SemigroupEnumeration {
    type Item = FiniteSemigroup;

    fn next(&mut self) -> Option<FiniteSemigroup> {
        if self.exhausted {
            return None;
        }
        loop {
            if self.pos == self.ncells {
                let keep = !self.collapse || self.is_canonical();
                let out = if keep {
                    Some(FiniteSemigroup {
                        n: self.n,
                        table: self.table.clone(),
                    })
                } else {
                    None
                };
                self.pos -= 1;
                if out.is_some() {
                    return out;
                }
                continue;
            }
            let mut advanced = false;
            while self.candidate[self.pos] < self.n {
                let v = self.candidate[self.pos];
                self.candidate[self.pos] += 1;
                self.table[self.pos] = v;
                if self.partial_ok() {
                    self.pos += 1;
                    if self.pos < self.ncells {
                        self.candidate[self.pos] = 0;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                if self.pos == 0 {
                    self.exhausted = true;
                    return None;
                }
                self.pos -= 1;
            }
        }
    }
}

/// A subset of the elements of a semigroup of known order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementSubset {
    universe: usize,
    members: BTreeSet<usize>,
}

impl ElementSubset {
    pub fn new(
        universe: usize,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, AlgebraError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m >= universe) {
            return Err(AlgebraError::ElementOutOfRange {
                element: bad,
                order: universe,
            });
        }
        Ok(ElementSubset { universe, members })
    }

    pub fn empty(universe: usize) -> Self {
        ElementSubset {
            universe,
            members: BTreeSet::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        ElementSubset {
            universe,
            members: (0..universe).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_sorted_vec(&self) -> Vec<usize> {
        self.members.iter().copied().collect()
    }

    pub fn complement(&self) -> ElementSubset {
        ElementSubset {
            universe: self.universe,
            members: (0..self.universe)
                .filter(|x| !self.members.contains(x))
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &ElementSubset) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn difference(&self, other: &ElementSubset) -> ElementSubset {
        ElementSubset {
            universe: self.universe,
            members: self.members.difference(&other.members).copied().collect(),
        }
    }
}

/// `{ x*y : x, y in t }`.
pub fn product_set(s: &FiniteSemigroup, t: &ElementSubset) -> ElementSubset {
    let mut members = BTreeSet::new();
    for x in t.iter() {
        for y in t.iter() {
            members.insert(s.mul(x, y));
        }
    }
    ElementSubset {
        universe: s.order(),
        members,
    }
}

/// `h(xy) = h(yx)` for all pairs, for any point values admitting equality.
pub fn is_central<V: PartialEq>(s: &FiniteSemigroup, values: &[V]) -> bool {
    let n = s.order();
    assert_eq!(values.len(), n, "value vector length must match the order");
    (0..n).all(|x| (0..n).all(|y| values[s.mul(x, y)] == values[s.mul(y, x)]))
}

/// Central plus `h(xyz) = h(xzy)` for all triples.
pub fn is_abelian<V: PartialEq>(s: &FiniteSemigroup, values: &[V]) -> bool {
    let n = s.order();
    is_central(s, values)
        && (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    values[s.mul(s.mul(x, y), z)] == values[s.mul(s.mul(x, z), y)]
                })
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn null2() -> FiniteSemigroup {
        FiniteSemigroup::from_table(&[vec![0, 0], vec![0, 0]]).unwrap()
    }

    pub(crate) fn c2() -> FiniteSemigroup {
        FiniteSemigroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    pub(crate) fn c3() -> FiniteSemigroup {
        FiniteSemigroup::from_table(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap()
    }

    #[test]
    fn null_table_and_c2_are_valid() {
        assert_eq!(null2().order(), 2);
        assert_eq!(c2().mul(1, 1), 0);
    }

    #[test]
    fn first_lexicographic_violation_is_reported() {
        let err = FiniteSemigroup::from_table(&[vec![0, 0], vec![1, 0]]).unwrap_err();
        assert_eq!(err, AlgebraError::NotAssociative { x: 1, y: 0, z: 1 });
    }

    #[test]
    fn out_of_range_entry_is_reported() {
        let err = FiniteSemigroup::from_table(&[vec![0, 2], vec![1, 0]]).unwrap_err();
        assert_eq!(
            err,
            AlgebraError::IndexOutOfRange {
                row: 0,
                col: 1,
                value: 2,
                order: 2
            }
        );
    }

    /// Brute-force oracle: filter every possible table by re-validation.
    fn brute_force_count(n: usize) -> usize {
        let cells = n * n;
        let mut count = 0usize;
        let total = (n as u64).pow(cells as u32);
        for code in 0..total {
            let mut c = code;
            let mut table = Vec::with_capacity(cells);
            for _ in 0..cells {
                table.push((c % n as u64) as usize);
                c /= n as u64;
            }
            // digits were generated least-significant-first; order does not
            // matter for counting
            if FiniteSemigroup::from_flat(n, table).is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumeration_count_matches_brute_force_filter() {
        assert_eq!(enumerate_semigroups(1, false).unwrap().count(), 1);
        assert_eq!(
            enumerate_semigroups(2, false).unwrap().count(),
            brute_force_count(2)
        );
        assert_eq!(
            enumerate_semigroups(3, false).unwrap().count(),
            brute_force_count(3)
        );
    }

    #[test]
    fn enumeration_is_lexicographic_and_collapse_selects_canonical_representatives() {
        let all: Vec<Vec<usize>> = enumerate_semigroups(2, false)
            .unwrap()
            .map(|s| s.flat_table().to_vec())
            .collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);

        let collapsed: Vec<FiniteSemigroup> = enumerate_semigroups(2, true).unwrap().collect();
        for s in &collapsed {
            assert_eq!(canonical_form(s), s.flat_table().to_vec());
        }
        // every class has exactly one representative
        let mut canon: Vec<Vec<usize>> = enumerate_semigroups(2, false)
            .unwrap()
            .map(|s| canonical_form(&s))
            .collect();
        canon.sort();
        canon.dedup();
        assert_eq!(collapsed.len(), canon.len());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        assert_eq!(
            enumerate_semigroups(9, false).unwrap_err(),
            AlgebraError::LimitExceeded {
                requested: 9,
                cap: DEFAULT_ORDER_CAP
            }
        );
        assert!(enumerate_semigroups_capped(5, 5, true).is_ok());
    }

    #[test]
    fn automorphism_examples() {
        let only_id = enumerate_automorphisms(&null2());
        assert_eq!(only_id.len(), 1);
        assert!(only_id[0].is_identity());

        assert_eq!(enumerate_automorphisms(&c2()).len(), 1);

        let c3_autos = enumerate_automorphisms(&c3());
        let perms: Vec<&[usize]> = c3_autos.iter().map(|a| a.perm()).collect();
        assert_eq!(perms, vec![&[0, 1, 2][..], &[0, 2, 1][..]]);
    }

    #[test]
    fn automorphisms_form_a_group_up_to_order_4() {
        for n in 1..=4 {
            for s in enumerate_semigroups(n, true).unwrap() {
                let autos = enumerate_automorphisms(&s);
                assert!(autos.iter().any(|a| a.is_identity()));
                for a in &autos {
                    assert!(autos.contains(&a.inverse()));
                    for b in &autos {
                        assert!(autos.contains(&a.compose(b)));
                    }
                }
            }
        }
    }

    #[test]
    fn automorphism_rejections() {
        let s = c3();
        assert!(matches!(
            Automorphism::new(&s, vec![0, 0, 1]),
            Err(AlgebraError::NotBijective { .. })
        ));
        assert!(matches!(
            Automorphism::new(&s, vec![1, 0, 2]),
            Err(AlgebraError::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn product_set_example() {
        // monoid {1, p, 0} with p*p = 0: squares of {p, 0} collapse to {0}
        let s =
            FiniteSemigroup::from_table(&[vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]).unwrap();
        let t = ElementSubset::new(3, [1, 2]).unwrap();
        let sq = product_set(&s, &t);
        assert_eq!(sq.as_sorted_vec(), vec![2]);
    }

    #[test]
    fn product_set_is_monotone() {
        for s in enumerate_semigroups(3, true).unwrap() {
            let subsets: Vec<ElementSubset> = (0u32..8)
                .map(|mask| {
                    ElementSubset::new(3, (0..3).filter(|&i| mask >> i & 1 == 1)).unwrap()
                })
                .collect();
            for a in &subsets {
                for b in &subsets {
                    if a.is_subset_of(b) {
                        assert!(product_set(&s, a).is_subset_of(&product_set(&s, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn centrality_witness_from_enumeration() {
        // search order <= 4 for the first noncommutative semigroup; the
        // indicator of a suitable fixed element is then not central
        let mut witnessed = false;
        'outer: for n in 2..=4 {
            for s in enumerate_semigroups(n, true).unwrap() {
                if s.is_commutative() {
                    continue;
                }
                for e in 0..n {
                    let indicator: Vec<u8> = (0..n).map(|i| u8::from(i == e)).collect();
                    if !is_central(&s, &indicator) {
                        witnessed = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(witnessed, "no centrality counterexample found up to order 4");
    }

    #[test]
    fn element_periods() {
        assert_eq!(c3().element_period(1), 3);
        assert_eq!(c2().element_period(1), 2);
        assert_eq!(null2().element_period(1), 1);
        assert_eq!(null2().element_period(0), 1);
    }
}
