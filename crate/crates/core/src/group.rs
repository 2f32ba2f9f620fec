//! Finite groups given by explicit multiplication tables.
//!
//! Elements are dense indices `0..n` with `n <= 64`, so every subset of a
//! group fits in a single `u64` word ([`ElementSet`]).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported group order.
pub const MAX_ORDER: usize = 64;

/// A set of element indices stored as a single-word bitset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementSet(pub u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    /// All indices `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "order {n} exceeds {MAX_ORDER}");
        if n == 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        ElementSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < 64 && (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest index in the set.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Bits {
        Bits(self.0)
    }
}

/// Iterator over the indices of an [`ElementSet`] in increasing order.
#[derive(Clone)]
pub struct Bits(u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Bits {}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = Bits;
    fn into_iter(self) -> Bits {
        self.iter()
    }
}

impl BitOr for ElementSet {
    type Output = ElementSet;
    fn bitor(self, rhs: ElementSet) -> ElementSet {
        ElementSet(self.0 | rhs.0)
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    fn bitand(self, rhs: ElementSet) -> ElementSet {
        ElementSet(self.0 & rhs.0)
    }
}

impl Sub for ElementSet {
    type Output = ElementSet;
    fn sub(self, rhs: ElementSet) -> ElementSet {
        ElementSet(self.0 & !rhs.0)
    }
}

impl Not for ElementSet {
    type Output = ElementSet;
    fn not(self) -> ElementSet {
        ElementSet(!self.0)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A quotient group together with its canonical projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `projection[x]` is the coset index of element `x`.
    pub projection: Vec<usize>,
    pub kernel: ElementSet,
}

/// A finite group stored as a verified multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u8>,
    identity: usize,
    inverses: Vec<u8>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("names", &self.names)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from `table[a][b] = a·b`, verifying the Latin square,
    /// identity, inverse and associativity laws.
    pub fn from_table(table: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n as u64));
        }
        if names.len() != n {
            return Err(Error::InvalidTable(format!("{} names for {} elements", names.len(), n)));
        }
        let distinct: BTreeSet<&str> = names.iter().map(String::as_str).collect();
        if distinct.len() != n || names.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidTable("element names must be distinct and non-empty".into()));
        }
        let full = ElementSet::full(n);
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::IndexOutOfRange { index: bad, order: n });
            }
            if ElementSet::from_indices(row.iter().copied()) != full {
                return Err(Error::InvalidTable(format!("row {a} is not a permutation")));
            }
            flat.extend(row.iter().map(|&x| x as u8));
        }
        for b in 0..n {
            if ElementSet::from_indices((0..n).map(|a| table[a][b])) != full {
                return Err(Error::InvalidTable(format!("column {b} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
            if table[y][x] != identity {
                return Err(Error::InvalidTable(format!("inverse of {x} is one-sided")));
            }
            inverses.push(y as u8);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, table: flat, identity, inverses, names })
    }

    /// Same group with new display names.
    pub fn renamed(&self, names: Vec<String>) -> Result<Self> {
        FiniteGroup::from_table(self.table_rows(), names)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    /// Index of the element with display name `name`.
    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.iter().map(|&x| x as usize).collect()).collect()
    }

    fn check(&self, a: usize) -> Result<()> {
        if a < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: a, order: self.order })
        }
    }

    /// Checks that every index in `s` is an element of the group.
    pub fn check_set(&self, s: ElementSet) -> Result<()> {
        match (s - self.full_set()).min() {
            None => Ok(()),
            Some(i) => Err(Error::IndexOutOfRange { index: i, order: self.order }),
        }
    }

    /// Product `a·b`; panics when an index is out of range.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// Checked product `a·b`.
    pub fn mul(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.op(a, b))
    }

    pub fn inverse(&self, a: usize) -> Result<usize> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.op(acc, a))
    }

    /// Smallest `t >= 1` with `a^t = 1`.
    pub fn element_order(&self, a: usize) -> Result<usize> {
        self.check(a)?;
        Ok(self.order_of(a))
    }

    pub(crate) fn order_of(&self, a: usize) -> usize {
        let mut x = a;
        let mut t = 1;
        while x != self.identity {
            x = self.op(x, a);
            t += 1;
        }
        t
    }

    /// Multiset of element orders as `order -> count`.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut profile = BTreeMap::new();
        for a in 0..self.order {
            *profile.entry(self.order_of(a)).or_insert(0) += 1;
        }
        profile
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).map(|a| self.order_of(a)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: ElementSet) -> ElementSet {
        let gens = gens & self.full_set();
        let mut set = gens | ElementSet::singleton(self.identity);
        let mut frontier = set;
        loop {
            let mut next = set;
            for a in frontier {
                for g in gens {
                    next.insert(self.op(a, g));
                }
            }
            let fresh = next - set;
            if fresh.is_empty() {
                return set;
            }
            set = next;
            frontier = fresh;
        }
    }

    /// True iff `s` contains the identity and is closed under products and inverses.
    pub fn is_subgroup(&self, s: ElementSet) -> bool {
        if !s.is_subset(self.full_set()) || !s.contains(self.identity) {
            return false;
        }
        s.iter().all(|a| s.contains(self.inv(a)) && s.iter().all(|b| s.contains(self.op(a, b))))
    }

    /// True iff the subgroup `s` is invariant under conjugation.
    pub fn is_normal(&self, s: ElementSet) -> Result<bool> {
        if !self.is_subgroup(s) {
            return Err(Error::NotSubgroup);
        }
        Ok((0..self.order).all(|g| self.conjugate_subset(s, g) == s))
    }

    /// `{a s a⁻¹ : s ∈ s}`.
    pub fn conjugate_subset(&self, s: ElementSet, a: usize) -> ElementSet {
        let ai = self.inv(a);
        ElementSet::from_indices(s.iter().map(|x| self.op(self.op(a, x), ai)))
    }

    pub fn center(&self) -> ElementSet {
        ElementSet::from_indices(
            (0..self.order).filter(|&z| (0..self.order).all(|g| self.op(z, g) == self.op(g, z))),
        )
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.op(self.op(a, b), self.op(self.inv(a), self.inv(b)))
    }

    /// Subgroup generated by all commutators `a b a⁻¹ b⁻¹`.
    pub fn derived_subgroup(&self) -> ElementSet {
        let mut comms = ElementSet::EMPTY;
        for a in 0..self.order {
            for b in 0..self.order {
                comms.insert(self.commutator(a, b));
            }
        }
        self.closure(comms)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup() == self.full_set()
    }

    /// Coset group `G/N` for a normal subgroup `N`.
    pub fn quotient(&self, n: ElementSet) -> Result<Quotient> {
        if !self.is_normal(n)? {
            return Err(Error::NotNormal);
        }
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if projection[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            for m in n {
                projection[self.op(x, m)] = c;
            }
            reps.push(x);
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| projection[self.op(a, b)]).collect())
            .collect();
        let names = reps.iter().map(|&r| self.names[r].clone()).collect();
        let group = FiniteGroup::from_table(table, names)?;
        Ok(Quotient { group, projection, kernel: n })
    }

    /// Direct product with componentwise multiplication; `(i, j)` has index `i·|b| + j`.
    pub fn direct_product(&self, b: &FiniteGroup) -> Result<FiniteGroup> {
        let (na, nb) = (self.order, b.order);
        if na * nb > MAX_ORDER {
            return Err(Error::OrderTooLarge((na * nb) as u64));
        }
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| self.op(x / nb, y / nb) * nb + b.op(x % nb, y % nb))
                    .collect()
            })
            .collect();
        let names = (0..na * nb).map(|x| format!("{}.{}", self.names[x / nb], b.names[x % nb])).collect();
        FiniteGroup::from_table(table, names)
    }

    /// Semidirect product `N ⋊ H` where `action` lists, for generators `t` of `H`,
    /// the automorphism of `N` induced by `t` as a permutation of `N`'s indices.
    ///
    /// The action is extended to all of `H` by the homomorphism property and the
    /// extension is verified. `(a, s)` has index `s·|N| + a` and
    /// `(a, s)(b, t) = (a·φ(s)(b), s·t)`.
    pub fn semidirect_product(
        n: &FiniteGroup,
        h: &FiniteGroup,
        action: &[(usize, Vec<usize>)],
    ) -> Result<FiniteGroup> {
        let (nn, nh) = (n.order, h.order);
        if nn * nh > MAX_ORDER {
            return Err(Error::OrderTooLarge((nn * nh) as u64));
        }
        for (t, perm) in action {
            h.check(*t)?;
            if perm.len() != nn || ElementSet::from_indices(perm.iter().copied()) != n.full_set() {
                return Err(Error::InvalidAction(format!("image of {t} is not a permutation")));
            }
            for a in 0..nn {
                for b in 0..nn {
                    if perm[n.op(a, b)] != n.op(perm[a], perm[b]) {
                        return Err(Error::InvalidAction(format!(
                            "image of {t} is not an automorphism"
                        )));
                    }
                }
            }
        }
        let compose = |f: &[usize], g: &[usize]| -> Vec<usize> { g.iter().map(|&x| f[x]).collect() };
        let mut phi: Vec<Option<Vec<usize>>> = vec![None; nh];
        phi[h.identity] = Some((0..nn).collect());
        let mut queue = VecDeque::from([h.identity]);
        while let Some(s) = queue.pop_front() {
            let fs = phi[s].clone().expect("assigned");
            for (t, perm) in action {
                let st = h.op(s, *t);
                let image = compose(&fs, perm);
                match &phi[st] {
                    Some(existing) if *existing != image => {
                        return Err(Error::InvalidAction("action is not a homomorphism".into()));
                    }
                    Some(_) => {}
                    None => {
                        phi[st] = Some(image);
                        queue.push_back(st);
                    }
                }
            }
        }
        let phi: Vec<Vec<usize>> = phi
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidAction("action generators do not generate H".into()))?;
        for s in 0..nh {
            for t in 0..nh {
                if phi[h.op(s, t)] != compose(&phi[s], &phi[t]) {
                    return Err(Error::InvalidAction("action is not a homomorphism".into()));
                }
            }
        }
        let total = nn * nh;
        let table = (0..total)
            .map(|x| {
                let (a, s) = (x % nn, x / nn);
                (0..total)
                    .map(|y| {
                        let (b, t) = (y % nn, y / nn);
                        h.op(s, t) * nn + n.op(a, phi[s][b])
                    })
                    .collect()
            })
            .collect();
        let names = (0..total).map(|x| format!("{}.{}", n.names[x % nn], h.names[x / nn])).collect();
        FiniteGroup::from_table(table, names)
    }

    /// All subgroups generated by at most two elements, sorted by bitmask.
    pub fn two_generated_subgroups(&self) -> Vec<ElementSet> {
        let mut found = BTreeSet::new();
        for a in 0..self.order {
            for b in a..self.order {
                found.insert(self.closure(ElementSet::from_indices([a, b])));
            }
        }
        found.into_iter().collect()
    }

    /// Every subgroup, sorted by bitmask: joins of two-generated subgroups
    /// are added until the family is closed under joins.
    pub fn all_subgroups(&self) -> Vec<ElementSet> {
        let mut found: BTreeSet<ElementSet> = self.two_generated_subgroups().into_iter().collect();
        loop {
            let list: Vec<ElementSet> = found.iter().copied().collect();
            let mut grew = false;
            for (i, &a) in list.iter().enumerate() {
                for &b in &list[i + 1..] {
                    grew |= found.insert(self.closure(a | b));
                }
            }
            if !grew {
                return found.into_iter().collect();
            }
        }
    }

    /// The subgroup `h` as a group in its own right, with the embedding
    /// `embed[i]` of its element `i` (elements keep their relative order).
    pub fn subgroup(&self, h: ElementSet) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(h) {
            return Err(Error::NotSubgroup);
        }
        let embed: Vec<usize> = h.iter().collect();
        let mut index = vec![usize::MAX; self.order];
        for (i, &a) in embed.iter().enumerate() {
            index[a] = i;
        }
        let table = embed
            .iter()
            .map(|&a| embed.iter().map(|&b| index[self.op(a, b)]).collect())
            .collect();
        let names = embed.iter().map(|&a| self.names[a].clone()).collect();
        Ok((FiniteGroup::from_table(table, names)?, embed))
    }

    /// Display names of the elements of `s`.
    pub fn set_names(&self, s: ElementSet) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table, (0..n).map(|i| i.to_string()).collect()).unwrap()
    }

    #[test]
    fn rejects_non_latin_and_non_associative_tables() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            FiniteGroup::from_table(bad, vec!["a".into(), "b".into()]),
            Err(Error::InvalidTable(_))
        ));
        // A Latin square with identity 0 that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names = (0..5).map(|i| i.to_string()).collect();
        assert!(matches!(FiniteGroup::from_table(loop5, names), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn z4_arithmetic() {
        let g = cyclic(4);
        assert_eq!(g.mul(1, 3).unwrap(), 0);
        assert_eq!(g.mul(0, 2).unwrap(), 2);
        assert!(matches!(g.mul(4, 0), Err(Error::IndexOutOfRange { index: 4, order: 4 })));
        assert_eq!(g.element_order(1).unwrap(), 4);
        assert_eq!(g.element_order(2).unwrap(), 2);
    }

    #[test]
    fn closure_and_subgroups_in_z4() {
        let g = cyclic(4);
        assert_eq!(g.closure(ElementSet::singleton(2)), ElementSet::from_indices([0, 2]));
        assert_eq!(g.closure(ElementSet::EMPTY), ElementSet::singleton(0));
        assert!(g.is_subgroup(ElementSet::from_indices([0, 2])));
        assert!(!g.is_subgroup(ElementSet::from_indices([0, 1])));
        assert!(g.is_normal(g.full_set()).unwrap());
        assert_eq!(g.is_normal(ElementSet::from_indices([0, 1])), Err(Error::NotSubgroup));
    }

    #[test]
    fn quotient_of_z4() {
        let g = cyclic(4);
        let q = g.quotient(ElementSet::from_indices([0, 2])).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.projection, vec![0, 1, 0, 1]);
    }

    #[test]
    fn product_of_coprime_cyclics_is_cyclic() {
        let g = cyclic(2).direct_product(&cyclic(3)).unwrap();
        assert_eq!(g.order(), 6);
        assert!((0..6).any(|a| g.element_order(a).unwrap() == 6));
        assert!(cyclic(8).direct_product(&cyclic(9)).is_err());
    }

    #[test]
    fn semidirect_rejects_bad_actions() {
        let z3 = cyclic(3);
        let z2 = cyclic(2);
        // not an automorphism
        assert!(matches!(
            FiniteGroup::semidirect_product(&z3, &z2, &[(1, vec![0, 2, 2])]),
            Err(Error::InvalidAction(_))
        ));
        // x -> 2x has order 2, so it cannot be the image of a generator of Z3
        let z3b = cyclic(3);
        assert!(matches!(
            FiniteGroup::semidirect_product(&cyclic(7), &z3b, &[(1, (0..7).map(|a| (6 * a) % 7).collect())]),
            Err(Error::InvalidAction(_))
        ));
        let trivial = FiniteGroup::semidirect_product(&z3, &z2, &[(1, vec![0, 1, 2])]).unwrap();
        assert!(trivial.is_abelian());
    }

    #[test]
    fn subgroup_enumeration_reaches_three_generated_subgroups() {
        assert_eq!(cyclic(12).all_subgroups().len(), 6);
        let z2 = cyclic(2);
        let e8 = z2.direct_product(&z2).unwrap().direct_product(&z2).unwrap();
        // 1 + 7 + 7 + 1 subgroups; the whole group needs three generators
        let subs = e8.all_subgroups();
        assert_eq!(subs.len(), 16);
        assert!(subs.contains(&e8.full_set()));
        assert!(!e8.two_generated_subgroups().contains(&e8.full_set()));
    }

    #[test]
    fn subgroup_extraction() {
        let z12 = cyclic(12);
        let h = z12.closure(ElementSet::singleton(3));
        let (sub, embed) = z12.subgroup(h).unwrap();
        assert_eq!(sub.order(), 4);
        assert_eq!(embed, vec![0, 3, 6, 9]);
        assert_eq!(sub.element_order(1).unwrap(), 4);
        assert!(matches!(z12.subgroup(ElementSet::from_indices([0, 1])), Err(Error::NotSubgroup)));
    }
}
