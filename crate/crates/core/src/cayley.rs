//! Symmetric subsets, Cayley graphs and the Kronecker lift constructions.
//!
//! Vertices `x, y` of `Cay(G, S)` are adjacent when `x·y⁻¹ ∈ S`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup, Quotient};
use crate::linalg::IntMatrix;

/// An inverse-closed subset of a group that avoids the identity.
///
/// The subset does not own its group; constructors validate it against one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymmetricSubset(ElementSet);

impl SymmetricSubset {
    pub const EMPTY: SymmetricSubset = SymmetricSubset(ElementSet::EMPTY);

    pub fn new(g: &FiniteGroup, bits: ElementSet) -> Result<Self> {
        g.check_set(bits)?;
        if bits.contains(g.identity()) {
            return Err(Error::InvalidSubset("the identity cannot be a connection element".into()));
        }
        if let Some(s) = bits.iter().find(|&s| !bits.contains(g.inv(s))) {
            return Err(Error::NotSymmetric(format!(
                "contains {} but not its inverse {}",
                g.name(s),
                g.name(g.inv(s))
            )));
        }
        Ok(SymmetricSubset(bits))
    }

    /// Wraps bits already known to be symmetric and identity-free.
    pub(crate) fn new_unchecked(bits: ElementSet) -> Self {
        SymmetricSubset(bits)
    }

    /// Parses a subset literal and validates it.
    pub fn parse(g: &FiniteGroup, literal: &str) -> Result<Self> {
        Self::new(g, parse_subset(g, literal)?)
    }

    /// `G ∖ {1}`.
    pub fn all_nonidentity(g: &FiniteGroup) -> Self {
        let mut bits = g.full_set();
        bits.remove(g.identity());
        SymmetricSubset(bits)
    }

    pub fn bits(self) -> ElementSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(self, a: usize) -> bool {
        self.0.contains(a)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.0.iter()
    }

    /// The complementary connection set `G ∖ (S ∪ {1})`.
    pub fn complement(self, g: &FiniteGroup) -> Self {
        SymmetricSubset(Self::all_nonidentity(g).0 - self.0)
    }

    /// `a S a⁻¹`.
    pub fn conjugate(self, g: &FiniteGroup, a: usize) -> Self {
        SymmetricSubset(g.conjugate_subset(self.0, a))
    }

    pub fn hex(self) -> String {
        format!("{:#x}", self.0 .0)
    }
}

impl fmt::Debug for SymmetricSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricSubset({:?})", self.0)
    }
}

/// Parses a subset literal: the empty string, a hexadecimal bitmask such as
/// `0x8E`, or a comma-separated list of element words. A word is either an
/// element name or a product of element names with optional integer powers
/// (`xy2`, `x^2y`).
pub fn parse_subset(g: &FiniteGroup, literal: &str) -> Result<ElementSet> {
    let literal = literal.trim();
    if literal.is_empty() {
        return Ok(ElementSet::EMPTY);
    }
    if let Some(hex) = literal.strip_prefix("0x").or_else(|| literal.strip_prefix("0X")) {
        let bits = u64::from_str_radix(hex, 16)
            .map_err(|e| Error::Parse(format!("bad hex subset `{literal}`: {e}")))?;
        let set = ElementSet(bits);
        g.check_set(set).map_err(|_| {
            Error::InvalidSubset(format!("mask {literal} has bits beyond order {}", g.order()))
        })?;
        return Ok(set);
    }
    let mut set = ElementSet::EMPTY;
    for token in literal.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Parse(format!("empty element in `{literal}`")));
        }
        set.insert(parse_word(g, token)?);
    }
    Ok(set)
}

fn parse_word(g: &FiniteGroup, word: &str) -> Result<usize> {
    if let Some(a) = g.element(word) {
        return Ok(a);
    }
    let mut acc = g.identity();
    let mut rest = word;
    while !rest.is_empty() {
        let (elem, len) = (0..g.order())
            .filter(|&a| rest.starts_with(g.name(a)))
            .map(|a| (a, g.name(a).len()))
            .max_by_key(|&(_, len)| len)
            .ok_or_else(|| Error::Parse(format!("unknown element `{word}`")))?;
        rest = &rest[len..];
        let after_caret = rest.strip_prefix('^');
        let digits_from = after_caret.unwrap_or(rest);
        let digits = digits_from.chars().take_while(char::is_ascii_digit).count();
        if after_caret.is_some() && digits == 0 {
            return Err(Error::Parse(format!("missing exponent in `{word}`")));
        }
        let power = if digits > 0 {
            let e: usize = digits_from[..digits]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{word}`")))?;
            rest = &digits_from[digits..];
            e
        } else {
            1
        };
        acc = g.op(acc, g.pow(elem, power));
    }
    Ok(acc)
}

/// The Cayley graph `Cay(G, S)`.
#[derive(Clone, Copy, Debug)]
pub struct CayleyGraph<'g> {
    group: &'g FiniteGroup,
    subset: SymmetricSubset,
}

impl<'g> CayleyGraph<'g> {
    pub fn new(group: &'g FiniteGroup, subset: SymmetricSubset) -> Self {
        CayleyGraph { group, subset }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn subset(&self) -> SymmetricSubset {
        self.subset
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn degree(&self) -> usize {
        self.subset.len()
    }

    /// Row-major 0/1 adjacency matrix as machine integers.
    pub fn adjacency_i64(&self) -> Vec<i64> {
        let g = self.group;
        let n = g.order();
        let mut a = vec![0i64; n * n];
        for y in 0..n {
            for s in self.subset.iter() {
                // x·y⁻¹ = s  ⟺  x = s·y
                a[g.op(s, y) * n + y] = 1;
            }
        }
        a
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.order();
        IntMatrix::from_i64(n, n, &self.adjacency_i64()).expect("n×n data")
    }

    /// Neighbours of `y`: the vertices `s·y` for `s ∈ S`.
    pub fn neighbors(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.subset.iter().map(move |s| self.group.op(s, y))
    }

    /// Whether `S` generates `G`, i.e. the graph is connected.
    pub fn generates(&self) -> bool {
        self.group.closure(self.subset.bits()) == self.group.full_set()
    }

    /// 2-colourability of a connected Cayley graph.
    pub fn is_bipartite(&self) -> Result<bool> {
        if !self.generates() {
            return Err(Error::Disconnected);
        }
        let n = self.order();
        let mut colour = vec![u8::MAX; n];
        let start = self.group.identity();
        colour[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(y) = queue.pop_front() {
            for x in self.neighbors(y) {
                if colour[x] == u8::MAX {
                    colour[x] = 1 - colour[y];
                    queue.push_back(x);
                } else if colour[x] == colour[y] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Complete multipartite exactly when `G ∖ S` is a subgroup.
    pub fn is_complete_multipartite(&self) -> bool {
        self.group.is_subgroup(self.group.full_set() - self.subset.bits())
    }
}

/// `T = S ∪ (G ∖ H)` for a subgroup `H` and a symmetric `S ⊆ H`.
pub fn lift_from_subgroup(g: &FiniteGroup, h: ElementSet, s: SymmetricSubset) -> Result<SymmetricSubset> {
    if !g.is_subgroup(h) {
        return Err(Error::NotSubgroup);
    }
    if !s.bits().is_subset(h) {
        return Err(Error::InvalidSubset("connection set is not inside the subgroup".into()));
    }
    SymmetricSubset::new(g, s.bits() | (g.full_set() - h))
}

/// `T = ⋃_{sN ∈ S̄} sN` for a normal subgroup `N` and a symmetric subset `S̄`
/// of `G/N` (indexed by the cosets of [`FiniteGroup::quotient`]).
pub fn lift_from_quotient(g: &FiniteGroup, n: ElementSet, sbar: SymmetricSubset) -> Result<SymmetricSubset> {
    let q = g.quotient(n)?;
    SymmetricSubset::new(&q.group, sbar.bits())?;
    let t = (0..g.order()).filter(|&x| sbar.contains(q.projection[x]));
    SymmetricSubset::new(g, ElementSet::from_indices(t))
}

/// `T = π⁻¹(S)` for the projection of a quotient.
pub fn lift_preimage(q: &Quotient, s: SymmetricSubset) -> Result<SymmetricSubset> {
    SymmetricSubset::new(&q.group, s.bits())?;
    let t = q
        .projection
        .iter()
        .enumerate()
        .filter(|&(_, &c)| s.contains(c))
        .map(|(x, _)| x);
    Ok(SymmetricSubset::new_unchecked(ElementSet::from_indices(t)))
}

/// `(S₁ × {1}) ∪ ({1} × S₂)` inside `A × B` (indices as in
/// [`FiniteGroup::direct_product`]); its Cayley graph is the Cartesian
/// product of the two factor graphs.
pub fn union_product_subset(
    a: &FiniteGroup,
    b: &FiniteGroup,
    s1: SymmetricSubset,
    s2: SymmetricSubset,
) -> Result<SymmetricSubset> {
    SymmetricSubset::new(a, s1.bits())?;
    SymmetricSubset::new(b, s2.bits())?;
    let nb = b.order();
    if a.order() * nb > crate::group::MAX_ORDER {
        return Err(Error::OrderTooLarge((a.order() * nb) as u64));
    }
    let left = s1.iter().map(|x| x * nb + b.identity());
    let right = s2.iter().map(|y| a.identity() * nb + y);
    Ok(SymmetricSubset::new_unchecked(ElementSet::from_indices(left.chain(right))))
}
