//! Exact integrality verdicts for Cayley graph spectra.
//!
//! Three independent exact routes are available:
//!
//! * [`Method::ExactRank`]: the multiplicity of each integer candidate `λ`
//!   is `n − rank(A − λI)` by Bareiss elimination; the spectrum is integral
//!   iff these add up to `n` (a symmetric matrix is diagonalizable).
//! * [`Method::CharPoly`]: the exact characteristic polynomial is stripped
//!   of its integer roots; integral iff nothing is left.
//! * [`Method::GroupAlgebra`]: the integer eigenvalues of `A` are among the
//!   roots in `[−k, k]` of its characteristic polynomial modulo a prime; the
//!   graph is integral iff `∏ (S − λ)` over those candidates vanishes in the
//!   integral group ring `Z[G]`, which is the same as the product of the
//!   matrices `A − λI` vanishing because the regular representation is
//!   faithful.
//!
//! Floating point only orders candidates and supplies evidence; it never
//! decides a verdict.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyGraph, SymmetricSubset};
use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::linalg::bareiss;
use crate::linalg::modular::{self, Mersenne31, PrimeField};
use crate::linalg::{char_poly_i64, IntPolynomial};

/// How a verdict is certified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    ExactRank,
    CharPoly,
    GroupAlgebra,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::ExactRank, Method::CharPoly, Method::GroupAlgebra];

    pub fn name(self) -> &'static str {
        match self {
            Method::ExactRank => "exact-rank",
            Method::CharPoly => "char-poly",
            Method::GroupAlgebra => "group-algebra",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}`")))
    }
}

/// Evidence that a spectrum is not integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Total dimension of the integer eigenspaces; strictly below `n`.
    pub integer_eigenspace_total: usize,
    /// Exact multiplicities of the integer eigenvalues that do occur.
    pub integer_multiplicities: BTreeMap<i64, usize>,
    /// Degree of the integer-root-free factor of the characteristic
    /// polynomial, when that polynomial was computed.
    pub remainder_degree: Option<usize>,
    /// Floating-point approximations of the non-integer eigenvalues.
    pub float_evidence: Vec<f64>,
}

/// Outcome of an integrality decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SpectrumVerdict {
    Integral { spectrum: BTreeMap<i64, usize> },
    NonIntegral(Certificate),
}

impl SpectrumVerdict {
    pub fn is_integral(&self) -> bool {
        matches!(self, SpectrumVerdict::Integral { .. })
    }

    pub fn spectrum(&self) -> Option<&BTreeMap<i64, usize>> {
        match self {
            SpectrumVerdict::Integral { spectrum } => Some(spectrum),
            SpectrumVerdict::NonIntegral(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SpectrumVerdict::NonIntegral(c) => Some(c),
            SpectrumVerdict::Integral { .. } => None,
        }
    }
}

/// Eigenvalues of the adjacency matrix in floating point, descending.
pub fn float_spectrum(c: &CayleyGraph) -> Result<Vec<f64>> {
    let n = c.order();
    let a = c.adjacency_i64();
    let m = DMatrix::from_fn(n, n, |i, j| a[i * n + j] as f64);
    let eig = SymmetricEigen::try_new(m, 1e-13, 10_000).ok_or(Error::Indeterminate)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// The float eigenvalues left over after removing, for every integer
/// eigenvalue, as many of the closest approximations as its multiplicity.
fn leftover_evidence(floats: &[f64], mults: &BTreeMap<i64, usize>) -> Vec<f64> {
    let mut rest = floats.to_vec();
    for (&lambda, &m) in mults {
        for _ in 0..m {
            if let Some((idx, _)) = rest
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - lambda as f64).abs().total_cmp(&(b.1 - lambda as f64).abs()))
            {
                rest.remove(idx);
            }
        }
    }
    rest
}

fn mod_roots(cp: &[u64], k: i64) -> Vec<i64> {
    let f = Mersenne31;
    (-k..=k).filter(|&l| modular::eval_mod(f, cp, f.from_i64(l)) == 0).collect()
}

/// Multiplicity of `λ` as a root of a polynomial over the prime field.
fn mod_root_multiplicity(cp: &[u64], lambda: i64) -> usize {
    let f = Mersenne31;
    let r = f.from_i64(lambda);
    let mut p = cp.to_vec();
    let mut m = 0;
    while p.len() > 1 {
        // synthetic division by (x − r)
        let deg = p.len() - 1;
        let mut q = vec![0u64; deg];
        let mut carry = 0u64;
        for i in (1..=deg).rev() {
            carry = f.add(p[i], f.mul(carry, r));
            q[i - 1] = carry;
        }
        if f.add(p[0], f.mul(carry, r)) != 0 {
            break;
        }
        p = q;
        m += 1;
    }
    m
}

fn exact_multiplicity(a: &[i64], n: usize, lambda: i64) -> usize {
    let mut m = a.to_vec();
    for i in 0..n {
        m[i * n + i] -= lambda;
    }
    n - bareiss::rank_i64(&m, n, n)
}

fn non_integral(
    c: &CayleyGraph,
    mults: BTreeMap<i64, usize>,
    remainder_degree: Option<usize>,
) -> SpectrumVerdict {
    let total = mults.values().sum();
    let float_evidence = float_spectrum(c)
        .map(|f| leftover_evidence(&f, &mults))
        .unwrap_or_default();
    SpectrumVerdict::NonIntegral(Certificate {
        integer_eigenspace_total: total,
        integer_multiplicities: mults,
        remainder_degree,
        float_evidence,
    })
}

/// Decides integrality with the default method.
pub fn verdict(c: &CayleyGraph) -> SpectrumVerdict {
    verdict_with(c, Method::default())
}

pub fn verdict_with(c: &CayleyGraph, method: Method) -> SpectrumVerdict {
    match method {
        Method::ExactRank => verdict_rank(c),
        Method::CharPoly => verdict_char_poly(c),
        Method::GroupAlgebra => verdict_group_algebra(c),
    }
}

fn verdict_rank(c: &CayleyGraph) -> SpectrumVerdict {
    let n = c.order();
    let k = c.degree() as i64;
    let a = c.adjacency_i64();
    // λ with nonzero char poly mod p has det(A − λI) ≠ 0, hence multiplicity 0
    let cp = modular::char_poly_mod(Mersenne31, &a, n);
    let mut candidates = mod_roots(&cp, k);
    match float_spectrum(c) {
        Ok(floats) => {
            let estimate = |l: i64| floats.iter().filter(|&&x| (x - l as f64).abs() < 1e-6).count();
            candidates.sort_by_key(|&l| (std::cmp::Reverse(estimate(l)), l.abs(), l));
        }
        Err(_) => candidates.sort_by_key(|&l| (l.abs(), l)),
    }
    let mut mults = BTreeMap::new();
    let mut total = 0;
    for lambda in candidates {
        if total == n {
            break;
        }
        let m = exact_multiplicity(&a, n, lambda);
        if m > 0 {
            mults.insert(lambda, m);
            total += m;
        }
    }
    if total == n {
        SpectrumVerdict::Integral { spectrum: mults }
    } else {
        non_integral(c, mults, None)
    }
}

fn verdict_char_poly(c: &CayleyGraph) -> SpectrumVerdict {
    let n = c.order();
    let k = c.degree() as i64;
    let cp = char_poly_i64(&c.adjacency_i64(), n);
    let (roots, rest) = cp.integer_root_split(-k, k);
    if rest.degree() == Some(0) {
        SpectrumVerdict::Integral { spectrum: roots }
    } else {
        non_integral(c, roots, rest.degree())
    }
}

fn verdict_group_algebra(c: &CayleyGraph) -> SpectrumVerdict {
    let g = c.group();
    let n = c.order();
    let a = c.adjacency_i64();
    let cp = modular::char_poly_mod(Mersenne31, &a, n);
    let roots = mod_roots(&cp, c.degree() as i64);
    if annihilates(g, c.subset().bits(), &roots) {
        // the integer spectrum is {roots}; its multiplicities cannot exceed
        // the modular root multiplicities, and both sum to n
        let spectrum: BTreeMap<i64, usize> = roots
            .iter()
            .map(|&l| (l, mod_root_multiplicity(&cp, l)))
            .filter(|&(_, m)| m > 0)
            .collect();
        debug_assert_eq!(spectrum.values().sum::<usize>(), n);
        SpectrumVerdict::Integral { spectrum }
    } else {
        let mults = roots
            .iter()
            .map(|&l| (l, exact_multiplicity(&a, n, l)))
            .filter(|&(_, m)| m > 0)
            .collect();
        non_integral(c, mults, None)
    }
}

/// Whether `∏_{λ ∈ roots} (S − λ·1)` is zero in `Z[G]`.
pub fn annihilates(g: &FiniteGroup, s: ElementSet, roots: &[i64]) -> bool {
    let k = s.len() as i64;
    let bits: f64 = roots.iter().map(|&l| ((k + l.abs()).max(1) as f64).log2()).sum();
    let elems: Vec<usize> = s.iter().collect();
    if bits < 120.0 {
        annihilates_i128(g, &elems, roots)
    } else {
        annihilates_big(g, &elems, roots)
    }
}

fn annihilates_i128(g: &FiniteGroup, s: &[usize], roots: &[i64]) -> bool {
    let n = g.order();
    let e = g.identity();
    let mut acc = vec![0i128; n];
    acc[e] = 1;
    let mut next = vec![0i128; n];
    for &lambda in roots {
        let lambda = lambda as i128;
        for z in 0..n {
            // (a·S)_z = Σ_{s ∈ S} a_{z·s⁻¹} and S = S⁻¹
            let mut v = -lambda * acc[z];
            for &t in s {
                v += acc[g.op(z, t)];
            }
            next[z] = v;
        }
        std::mem::swap(&mut acc, &mut next);
        if acc.iter().all(|&x| x == 0) {
            return true;
        }
    }
    acc.iter().all(|&x| x == 0)
}

fn annihilates_big(g: &FiniteGroup, s: &[usize], roots: &[i64]) -> bool {
    let n = g.order();
    let mut acc = vec![BigInt::zero(); n];
    acc[g.identity()] = BigInt::from(1);
    for &lambda in roots {
        let next: Vec<BigInt> = (0..n)
            .map(|z| {
                let mut v = &acc[z] * -lambda;
                for &t in s {
                    v += &acc[g.op(z, t)];
                }
                v
            })
            .collect();
        acc = next;
        if acc.iter().all(Zero::is_zero) {
            return true;
        }
    }
    acc.iter().all(Zero::is_zero)
}

/// Reusable exact integrality test for one group, tuned for exhaustive
/// search: modular candidates plus the group-ring annihilation check.
#[derive(Clone)]
pub struct FastCertifier<'g> {
    group: &'g FiniteGroup,
    adjacency: Vec<u64>,
}

impl<'g> FastCertifier<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        let n = group.order();
        FastCertifier {
            group,
            adjacency: vec![0; n * n],
        }
    }

    pub fn is_integral(&mut self, s: ElementSet) -> bool {
        let g = self.group;
        let n = g.order();
        self.adjacency.iter_mut().for_each(|x| *x = 0);
        for y in 0..n {
            for t in s.iter() {
                self.adjacency[g.op(t, y) * n + y] = 1;
            }
        }
        let cp = modular::char_poly_in_place(Mersenne31, &mut self.adjacency, n);
        let roots = mod_roots(&cp, s.len() as i64);
        annihilates(g, s, &roots)
    }
}

/// Outcome of the order-divisibility test for a connected integral graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// The graph is connected, integral and `|S| ≥ 1`.
    pub applies: bool,
    /// The stronger form is claimed: `G` is perfect or `S` has an element of odd order.
    pub strong: bool,
    /// `|G|` divides `2(2|S| − 1)!`.
    pub holds: bool,
    /// `|G|` divides `(2|S| − 1)!`; only meaningful when `strong`.
    pub strong_holds: bool,
}

impl BoundCheck {
    pub fn violated(&self) -> bool {
        self.applies && (!self.holds || (self.strong && !self.strong_holds))
    }
}

fn factorial_mod(m: usize, modulus: usize) -> usize {
    (1..=m).fold(1 % modulus, |acc, i| acc * (i % modulus) % modulus)
}

/// Checks `|G| | 2(2k − 1)!` (and `|G| | (2k − 1)!` when the strong form
/// is claimed) for a connected integral Cayley graph of degree `k`.
pub fn divisibility_bound_check(c: &CayleyGraph, v: &SpectrumVerdict) -> BoundCheck {
    let g = c.group();
    let k = c.degree();
    if k == 0 || !v.is_integral() || !c.generates() {
        return BoundCheck { applies: false, strong: false, holds: true, strong_holds: true };
    }
    let n = g.order();
    let f = factorial_mod(2 * k - 1, n);
    let holds = (2 * f) % n == 0;
    let strong_holds = f == 0;
    let odd = c.subset().iter().any(|s| g.order_of(s) % 2 == 1);
    let strong = odd || g.is_perfect();
    BoundCheck { applies: true, strong, holds, strong_holds }
}

/// Verdicts for a batch of subsets of one group, in input order.
pub fn spectrum_of_subset_list(g: &FiniteGroup, subsets: &[SymmetricSubset]) -> Vec<SpectrumVerdict> {
    subsets
        .par_iter()
        .map(|&s| verdict(&CayleyGraph::new(g, s)))
        .collect()
}

/// Checks the identities every integral spectrum of a `k`-regular Cayley
/// graph must satisfy; returns a description of the first failure.
pub fn check_spectrum_invariants(c: &CayleyGraph, spectrum: &BTreeMap<i64, usize>) -> std::result::Result<(), String> {
    let n = c.order() as i64;
    let k = c.degree() as i64;
    let sum_m: i64 = spectrum.values().map(|&m| m as i64).sum();
    if sum_m != n {
        return Err(format!("multiplicities sum to {sum_m}, expected {n}"));
    }
    let trace: i64 = spectrum.iter().map(|(&l, &m)| l * m as i64).sum();
    if trace != 0 {
        return Err(format!("trace {trace} != 0"));
    }
    let trace2: i64 = spectrum.iter().map(|(&l, &m)| l * l * m as i64).sum();
    if trace2 != n * k {
        return Err(format!("trace of A² is {trace2}, expected {}", n * k));
    }
    if let Some((&l, _)) = spectrum.iter().find(|(&l, _)| l.abs() > k) {
        return Err(format!("eigenvalue {l} exceeds the degree {k}"));
    }
    let components = c.order() / c.group().closure(c.subset().bits()).len();
    let top = spectrum.get(&k).copied().unwrap_or(0);
    if top != components {
        return Err(format!("multiplicity of {k} is {top}, but there are {components} components"));
    }
    Ok(())
}

/// Characteristic polynomial of the adjacency matrix.
pub fn char_poly(c: &CayleyGraph) -> IntPolynomial {
    char_poly_i64(&c.adjacency_i64(), c.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dihedral, elementary_abelian, group, quaternion};

    fn graph<'g>(g: &'g FiniteGroup, lit: &str) -> CayleyGraph<'g> {
        CayleyGraph::new(g, SymmetricSubset::parse(g, lit).unwrap())
    }

    #[test]
    fn q8_example_all_methods() {
        let q8 = quaternion();
        let c = graph(&q8, "i,-i,j,-j,-1");
        let expect = BTreeMap::from([(5, 1), (1, 2), (-1, 4), (-3, 1)]);
        for m in Method::ALL {
            assert_eq!(verdict_with(&c, m).spectrum(), Some(&expect), "{m:?}");
        }
        check_spectrum_invariants(&c, &expect).unwrap();
        assert!(FastCertifier::new(&q8).is_integral(c.subset().bits()));
    }

    #[test]
    fn d4_sqrt2_certificate() {
        let d4 = dihedral(4);
        let c = graph(&d4, "x,xy");
        for m in Method::ALL {
            let v = verdict_with(&c, m);
            let cert = v.certificate().expect("non-integral");
            assert!(cert.integer_eigenspace_total < 8);
            assert_eq!(cert.float_evidence.len(), 8 - cert.integer_eigenspace_total);
            for e in &cert.float_evidence {
                assert!((e.abs() - 2f64.sqrt()).abs() < 1e-9, "{e}");
            }
        }
        let cp = char_poly(&c);
        let (_, rest) = cp.integer_root_split(-2, 2);
        let x2m2 = IntPolynomial::from_i64(&[-2, 0, 1]);
        assert_eq!(rest, x2m2.pow(rest.degree().unwrap() as u32 / 2));
        assert!(!FastCertifier::new(&d4).is_integral(c.subset().bits()));
    }

    #[test]
    fn cube_spectrum() {
        let g = elementary_abelian(2, 3);
        let c = graph(&g, "e1,e2,e3");
        assert_eq!(
            verdict(&c).spectrum(),
            Some(&BTreeMap::from([(3, 1), (1, 3), (-1, 3), (-3, 1)]))
        );
    }

    #[test]
    fn batch_examples() {
        let z4 = group("Z4").unwrap();
        let subsets = [
            SymmetricSubset::EMPTY,
            SymmetricSubset::all_nonidentity(&z4),
        ];
        let v = spectrum_of_subset_list(&z4, &subsets);
        assert_eq!(v[0].spectrum(), Some(&BTreeMap::from([(0, 4)])));
        assert_eq!(v[1].spectrum(), Some(&BTreeMap::from([(3, 1), (-1, 3)])));
    }

    #[test]
    fn bound_examples() {
        let z2 = group("Z2").unwrap();
        let c = graph(&z2, "x");
        let b = divisibility_bound_check(&c, &verdict(&c));
        assert!(b.applies && b.holds && !b.strong);
        let z4 = group("Z4").unwrap();
        let c = graph(&z4, "x2");
        assert!(!divisibility_bound_check(&c, &verdict(&c)).applies);
        let z3 = group("Z3").unwrap();
        let c = graph(&z3, "x,x2");
        let b = divisibility_bound_check(&c, &verdict(&c));
        assert!(b.applies && b.strong && b.strong_holds);
        assert_eq!(factorial_mod(7, 5040), 0);
        assert_eq!(factorial_mod(3, 7), 6);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("fast".parse::<Method>().is_err());
    }
}
