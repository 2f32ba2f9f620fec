//! Explicit matrix representations and the decomposition of Cayley spectra
//! over irreducible representations.
//!
//! For a representation `ρ` and a symmetric subset `S`, `ρ(S) = Σ_{s ∈ S} ρ(s)`.
//! When `ρ_1, …, ρ_t` run over a complete set of irreducible representations
//! of degrees `d_t`, the adjacency spectrum of `Cay(G, S)` is the union of the
//! spectra of the `ρ_t(S)`, each eigenvalue counted `d_t` times.
//!
//! This module is a cross-check in floating point; entries that are Gaussian
//! integers are represented exactly, everything else is compared within a
//! tolerance.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::cayley::{CayleyGraph, SymmetricSubset};
use crate::catalog::permutation_of;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::integrality::{float_spectrum, verdict, SpectrumVerdict};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance for homomorphism and integrality checks.
pub const TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{2πi k / n}`.
pub fn root_of_unity(k: i64, n: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k.rem_euclid(n)) as f64 / n as f64)
}

fn max_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// A representation given by one matrix per group element.
#[derive(Clone, Debug)]
pub struct ExplicitRep {
    pub label: String,
    pub degree: usize,
    images: Vec<CMatrix>,
    /// Every entry is a Gaussian integer, so sums and products are exact.
    pub exact: bool,
}

impl ExplicitRep {
    /// Validates a full list of images as a homomorphism.
    pub fn new(g: &FiniteGroup, label: &str, images: Vec<CMatrix>) -> Result<Self> {
        let degree = images.first().map_or(0, |m| m.nrows());
        if images.len() != g.order() || images.iter().any(|m| m.nrows() != degree || m.ncols() != degree) {
            return Err(Error::InvalidRepresentation(format!(
                "{label}: need {} square images of one size",
                g.order()
            )));
        }
        let exact = images
            .iter()
            .flat_map(|m| m.iter())
            .all(|z| z.re.fract() == 0.0 && z.im.fract() == 0.0);
        let tol = if exact { 0.0 } else { TOL };
        for a in 0..g.order() {
            for b in 0..g.order() {
                let prod = &images[a] * &images[b];
                let d = max_dist(&prod, &images[g.op(a, b)]);
                if d > tol {
                    return Err(Error::InvalidRepresentation(format!(
                        "{label}: ρ({})ρ({}) differs from ρ({}) by {d:e}",
                        g.name(a),
                        g.name(b),
                        g.name(g.op(a, b))
                    )));
                }
            }
        }
        Ok(ExplicitRep { label: label.into(), degree, images, exact })
    }

    /// Extends generator images to the whole group along products
    /// `x ↦ x·t`, then validates the result.
    pub fn from_generators(g: &FiniteGroup, label: &str, gens: &[(usize, CMatrix)]) -> Result<Self> {
        let degree = gens.first().map_or(1, |(_, m)| m.nrows());
        let mut images: Vec<Option<CMatrix>> = vec![None; g.order()];
        images[g.identity()] = Some(CMatrix::identity(degree, degree));
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for (t, m) in gens {
                let y = g.op(x, *t);
                if images[y].is_none() {
                    images[y] = Some(images[x].as_ref().expect("visited") * m);
                    queue.push_back(y);
                }
            }
        }
        let images: Option<Vec<CMatrix>> = images.into_iter().collect();
        let images = images.ok_or_else(|| {
            Error::InvalidRepresentation(format!("{label}: generators do not generate the group"))
        })?;
        Self::new(g, label, images)
    }

    /// The permutation representation `e_i ↦ e_{σ(i)}`.
    pub fn permutation(g: &FiniteGroup, label: &str, perm: impl Fn(usize) -> Vec<usize>) -> Result<Self> {
        let images = (0..g.order())
            .map(|a| {
                let p = perm(a);
                let d = p.len();
                CMatrix::from_fn(d, d, |i, j| if p[j] == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
            })
            .collect();
        Self::new(g, label, images)
    }

    /// Restriction of a permutation representation on `d` points to the
    /// orthogonal complement of the all-ones vector.
    pub fn standard(g: &FiniteGroup, label: &str, perm: impl Fn(usize) -> Vec<usize>) -> Result<Self> {
        let p = Self::permutation(g, label, perm)?;
        let d = p.degree;
        // orthonormal basis of 1^⊥ (Helmert vectors)
        let q = CMatrix::from_fn(d, d - 1, |i, j| {
            let k = (j + 1) as f64;
            let scale = 1.0 / (k * (k + 1.0)).sqrt();
            let v = if i <= j {
                scale
            } else if i == j + 1 {
                -k * scale
            } else {
                0.0
            };
            c(v, 0.0)
        });
        let qt = q.adjoint();
        let images = p.images.iter().map(|m| &qt * m * &q).collect();
        Self::new(g, label, images)
    }

    /// A one-dimensional representation from exponents `a` with
    /// `χ(g) = e^{2πi a(g)/e}`.
    fn character(g: &FiniteGroup, label: &str, exps: &[i64], e: i64) -> Result<Self> {
        let images = (0..g.order())
            .map(|a| {
                let z = root_of_unity(exps[a], e);
                // keep 1, -1, i, -i exact
                let z = if (4 * exps[a].rem_euclid(e)) % e == 0 {
                    c(z.re.round(), z.im.round())
                } else {
                    z
                };
                CMatrix::from_element(1, 1, z)
            })
            .collect();
        Self::new(g, label, images)
    }

    pub fn image(&self, a: usize) -> &CMatrix {
        &self.images[a]
    }

    pub fn character_of(&self, a: usize) -> Complex64 {
        self.images[a].trace()
    }
}

/// `ρ(S) = Σ_{s ∈ S} ρ(s)`.
pub fn rep_sum(r: &ExplicitRep, s: SymmetricSubset) -> CMatrix {
    let mut acc = CMatrix::zeros(r.degree, r.degree);
    for a in s.iter() {
        acc += &r.images[a];
    }
    acc
}

/// Eigenvalues of the Hermitian matrix `ρ(S)`, descending.
pub fn rep_eigenvalues(r: &ExplicitRep, s: SymmetricSubset) -> Result<Vec<f64>> {
    let m = rep_sum(r, s);
    if max_dist(&m, &m.adjoint()) > TOL {
        return Err(Error::InvalidRepresentation(format!("{}: ρ(S) is not Hermitian", r.label)));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(m, 1e-14, 10_000).ok_or(Error::Indeterminate)?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Whether every eigenvalue of `ρ(S)` lies within `tol` of an integer.
/// A failing eigensolver is reported as [`Error::Indeterminate`].
pub fn rep_integral(r: &ExplicitRep, s: SymmetricSubset, tol: f64) -> Result<bool> {
    Ok(rep_eigenvalues(r, s)?.iter().all(|x| (x - x.round()).abs() <= tol))
}

/// A complete set of irreducible representations.
#[derive(Clone, Debug)]
pub struct RepSystem {
    pub reps: Vec<ExplicitRep>,
    order: usize,
}

impl RepSystem {
    /// Checks `Σ d_t² = |G|` and that the characters are orthonormal, which
    /// together make the list a complete set of distinct irreducibles.
    pub fn new(g: &FiniteGroup, reps: Vec<ExplicitRep>) -> Result<Self> {
        let sum: usize = reps.iter().map(|r| r.degree * r.degree).sum();
        if sum != g.order() {
            return Err(Error::IncompleteRepSystem { sum, order: g.order() });
        }
        let n = g.order() as f64;
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let ip: Complex64 = (0..g.order())
                    .map(|x| a.character_of(x) * b.character_of(x).conj())
                    .sum::<Complex64>()
                    / n;
                let want = if i == j { 1.0 } else { 0.0 };
                if (ip - c(want, 0.0)).norm() > 1e-8 {
                    return Err(Error::InvalidRepresentation(format!(
                        "characters of {} and {} have inner product {ip}",
                        a.label, b.label
                    )));
                }
            }
        }
        Ok(RepSystem { reps, order: g.order() })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.reps.iter().map(|r| r.degree).collect()
    }
}

/// All one-dimensional representations, found by assigning roots of unity
/// of order dividing the exponent to a generating set and keeping the
/// assignments that extend to homomorphisms.
pub fn linear_characters(g: &FiniteGroup) -> Result<Vec<ExplicitRep>> {
    let e = g.exponent() as i64;
    let mut gens = Vec::new();
    let mut span = g.closure(crate::group::ElementSet::EMPTY);
    for a in 0..g.order() {
        if !span.contains(a) {
            gens.push(a);
            span = g.closure(span | crate::group::ElementSet::singleton(a));
        }
    }
    let mut found: Vec<Vec<i64>> = Vec::new();
    let combos = (e as u64).pow(gens.len() as u32);
    for code in 0..combos {
        let mut rest = code;
        let assign: Vec<i64> = gens
            .iter()
            .map(|_| {
                let v = (rest % e as u64) as i64;
                rest /= e as u64;
                v
            })
            .collect();
        let mut exps = vec![None; g.order()];
        exps[g.identity()] = Some(0i64);
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for (t, &v) in gens.iter().zip(&assign) {
                let y = g.op(x, *t);
                if exps[y].is_none() {
                    exps[y] = Some((exps[x].expect("visited") + v) % e);
                    queue.push_back(y);
                }
            }
        }
        let exps: Vec<i64> = exps.into_iter().map(|x| x.expect("generated")).collect();
        let hom = (0..g.order())
            .all(|a| (0..g.order()).all(|b| (exps[a] + exps[b]) % e == exps[g.op(a, b)]));
        if hom {
            found.push(exps);
        }
    }
    found
        .iter()
        .enumerate()
        .map(|(i, exps)| ExplicitRep::character(g, &format!("chi{i}"), exps, e))
        .collect()
}

fn diag(a: Complex64, b: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, c(0.0, 0.0), c(0.0, 0.0), b])
}

fn mat2(a: [f64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &a.map(|x| c(x, 0.0)))
}

/// The representation `θ_j` of `D_n` (catalog indexing, `x` a reflection and
/// `y` a rotation): `y ↦ diag(ω^j, ω^{−j})`, `x ↦ [[0,1],[1,0]]`, `ω = e^{2πi/n}`.
pub fn dihedral_theta(g: &FiniteGroup, n: usize, j: i64) -> Result<ExplicitRep> {
    let (x, y) = (n, 1);
    let gens = [
        (x, mat2([0.0, 1.0, 1.0, 0.0])),
        (y, diag(root_of_unity(j, n as i64), root_of_unity(-j, n as i64))),
    ];
    let r = ExplicitRep::from_generators(g, &format!("theta{j}"), &gens)?;
    Ok(snap_gaussian(r))
}

/// Rounds entries that are within rounding error of Gaussian integers, so
/// representations like `θ` for `D_4` become exact.
fn snap_gaussian(r: ExplicitRep) -> ExplicitRep {
    let snapped: Vec<CMatrix> = r
        .images
        .iter()
        .map(|m| m.map(|z| c(z.re.round(), z.im.round())))
        .collect();
    let close = r
        .images
        .iter()
        .zip(&snapped)
        .all(|(a, b)| max_dist(a, b) < 1e-12);
    if close {
        ExplicitRep { images: snapped, exact: true, ..r }
    } else {
        r
    }
}

/// The two-dimensional representation `π` of `Q_8`:
/// `i ↦ diag(i, −i)`, `j ↦ [[0,1],[−1,0]]`.
pub fn quaternion_pi(g: &FiniteGroup) -> Result<ExplicitRep> {
    let i = g.element("i").ok_or_else(|| Error::InvalidRepresentation("no element i".into()))?;
    let j = g.element("j").ok_or_else(|| Error::InvalidRepresentation("no element j".into()))?;
    ExplicitRep::from_generators(
        g,
        "pi",
        &[(i, diag(c(0.0, 1.0), c(0.0, -1.0))), (j, mat2([0.0, 1.0, -1.0, 0.0]))],
    )
}

/// `ρ(a, t^m) = i^m π(a)` on `Q_8 × Z_4`.
pub fn q8xz4_rho(g: &FiniteGroup, q8: &FiniteGroup) -> Result<ExplicitRep> {
    let pi = quaternion_pi(q8)?;
    let images = (0..g.order())
        .map(|x| {
            let (a, m) = (x / 4, x % 4);
            pi.images[a].map(|z| z * root_of_unity(m as i64, 4)).map(|z| c(z.re.round(), z.im.round()))
        })
        .collect();
    ExplicitRep::new(g, "rho", images)
}

/// `ρ(σ, x^j) = ω^j P(σ)` on `S_3 × Z_3` with `P` the permutation matrices.
pub fn s3xz3_rep(g: &FiniteGroup, s3: &FiniteGroup) -> Result<ExplicitRep> {
    let images = (0..g.order())
        .map(|x| {
            let (sigma, j) = (x / 3, x % 3);
            let p = permutation_of(s3, sigma, 3).expect("S3 element");
            CMatrix::from_fn(3, 3, |r, col| {
                if p[col] == r {
                    root_of_unity(j as i64, 3)
                } else {
                    c(0.0, 0.0)
                }
            })
        })
        .collect();
    ExplicitRep::new(g, "omega^j P", images)
}

/// The representation of `E_9` obtained by lifting the permutation
/// representation of `S_3`: `x ↦ I`, `y ↦ P((123))`, `z ↦ P((12))`.
pub fn e9_lifted(g: &FiniteGroup) -> Result<ExplicitRep> {
    let perm = |p: [usize; 3]| CMatrix::from_fn(3, 3, |r, col| c(f64::from(u8::from(p[col] == r)), 0.0));
    let name = |s: &str| g.element(s).ok_or_else(|| Error::InvalidRepresentation(format!("no element {s}")));
    ExplicitRep::from_generators(
        g,
        "lifted P",
        &[
            (name("x")?, CMatrix::identity(3, 3)),
            (name("y")?, perm([1, 2, 0])),
            (name("z")?, perm([1, 0, 2])),
        ],
    )
}

/// Permutation representation of a catalog permutation group on `points` letters.
pub fn natural_permutation(g: &FiniteGroup, points: usize) -> Result<ExplicitRep> {
    ExplicitRep::permutation(g, "P", |a| permutation_of(g, a, points).expect("permutation group"))
}

/// Shipped complete systems: abelian groups, `D_n`, `Q8`, `S3`, `Dic12`, `A4`.
/// `name` is the catalog expression the group was built from.
pub fn rep_system(g: &FiniteGroup, name: &str) -> Result<RepSystem> {
    let mut reps = linear_characters(g)?;
    if g.is_abelian() {
        return RepSystem::new(g, reps);
    }
    let unsupported = || Error::InvalidRepresentation(format!("no representation system shipped for {name}"));
    match name {
        "Q8" => reps.push(quaternion_pi(g)?),
        "S3" => reps.push(ExplicitRep::standard(g, "standard", |a| {
            permutation_of(g, a, 3).expect("S3 element")
        })?),
        "A4" => reps.push(ExplicitRep::standard(g, "standard", |a| {
            permutation_of(g, a, 4).expect("A4 element")
        })?),
        "Dic12" => {
            let x = g.element("x").ok_or_else(unsupported)?;
            let y = g.element("y").ok_or_else(unsupported)?;
            let (s, co) = ((2.0 * PI / 3.0).sin(), (2.0 * PI / 3.0).cos());
            // y² ↦ I: factors through S3
            reps.push(ExplicitRep::from_generators(
                g,
                "via S3",
                &[(x, mat2([co, -s, s, co])), (y, mat2([1.0, 0.0, 0.0, -1.0]))],
            )?);
            // y² ↦ −I
            reps.push(ExplicitRep::from_generators(
                g,
                "faithful",
                &[
                    (x, diag(root_of_unity(1, 3), root_of_unity(-1, 3))),
                    (y, mat2([0.0, 1.0, -1.0, 0.0])),
                ],
            )?);
        }
        _ => {
            let n = name
                .strip_prefix('D')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&n| 2 * n == g.order())
                .ok_or_else(unsupported)?;
            for j in 1..=((n - 1) / 2) as i64 {
                reps.push(dihedral_theta(g, n, j)?);
            }
        }
    }
    RepSystem::new(g, reps)
}

/// The eigenvalue multiset `⊎_t d_t · eig ρ_t(S)`, ascending.
pub fn ds_union(rs: &RepSystem, s: SymmetricSubset) -> Result<Vec<f64>> {
    let mut all = Vec::with_capacity(rs.order);
    for r in &rs.reps {
        for x in rep_eigenvalues(r, s)? {
            all.extend(std::iter::repeat_n(x, r.degree));
        }
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Compares the representation-theoretic multiset with the exact spectrum:
/// integer multiplicities must agree exactly for integral graphs, and the
/// sorted float multisets within `1e−6` otherwise.
pub fn ds_union_check(g: &FiniteGroup, rs: &RepSystem, s: SymmetricSubset) -> Result<bool> {
    if rs.order != g.order() {
        return Err(Error::IncompleteRepSystem { sum: rs.order, order: g.order() });
    }
    let union = ds_union(rs, s)?;
    let c = CayleyGraph::new(g, s);
    match verdict(&c) {
        SpectrumVerdict::Integral { spectrum } => {
            let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
            for x in union {
                let r = x.round();
                if (x - r).abs() > 1e-6 {
                    return Ok(false);
                }
                *counts.entry(r as i64).or_insert(0) += 1;
            }
            Ok(counts == spectrum)
        }
        SpectrumVerdict::NonIntegral(_) => {
            let mut exact = float_spectrum(&c)?;
            exact.sort_by(f64::total_cmp);
            Ok(exact.len() == union.len()
                && exact.iter().zip(&union).all(|(a, b)| (a - b).abs() <= 1e-6))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{group, quaternion};

    fn assert_close(mut got: Vec<f64>, mut want: Vec<f64>) {
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn d4_theta_sum() {
        let d4 = group("D4").unwrap();
        let theta = dihedral_theta(&d4, 4, 1).unwrap();
        assert!(theta.exact);
        let s = SymmetricSubset::parse(&d4, "x,xy").unwrap();
        let m = rep_sum(&theta, s);
        // θ(x) + θ(x)θ(y) = [[0, 1 + ω⁻¹], [1 + ω, 0]]
        let expect = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(m, expect);
        let r2 = 2f64.sqrt();
        assert_close(rep_eigenvalues(&theta, s).unwrap(), vec![r2, -r2]);
    }

    #[test]
    fn q8xz4_witness_matrix() {
        let q8 = quaternion();
        let g = group("Q8xZ4").unwrap();
        let rho = q8xz4_rho(&g, &q8).unwrap();
        assert!(rho.exact);
        let s = SymmetricSubset::parse(&g, "i.x,-i.x3,j.x,-j.x3").unwrap();
        let m = rep_sum(&rho, s);
        let expect = CMatrix::from_row_slice(2, 2, &[c(-2.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(2.0, 0.0)]);
        assert_eq!(m, expect);
        let r = 2.0 * 2f64.sqrt();
        assert_close(rep_eigenvalues(&rho, s).unwrap(), vec![r, -r]);
    }

    #[test]
    fn known_nonintegral_reps() {
        let s3 = group("S3").unwrap();
        let g = group("S3xZ3").unwrap();
        let rep = s3xz3_rep(&g, &s3).unwrap();
        let s = SymmetricSubset::parse(&g, "(12).x,(12).x2,(13).1").unwrap();
        assert!(!rep_integral(&rep, s, TOL).unwrap());
        let r3 = 3f64.sqrt();
        assert_close(rep_eigenvalues(&rep, s).unwrap(), vec![0.0, r3, -r3]);

        let e9 = group("E9").unwrap();
        let rep = e9_lifted(&e9).unwrap();
        let s = SymmetricSubset::parse(&e9, "xz,z,yz").unwrap();
        assert_close(rep_eigenvalues(&rep, s).unwrap(), vec![3.0, r3, -r3]);
    }

    #[test]
    fn trivial_rep_and_empty_set() {
        let g = group("S3").unwrap();
        let chars = linear_characters(&g).unwrap();
        assert_eq!(chars.len(), 2);
        let s = SymmetricSubset::parse(&g, "(12),(123),(132)").unwrap();
        let trivial = chars.iter().find(|r| (0..6).all(|a| r.image(a)[(0, 0)] == c(1.0, 0.0))).unwrap();
        assert!(rep_integral(trivial, s, TOL).unwrap());
        assert_eq!(rep_eigenvalues(trivial, s).unwrap(), vec![3.0]);
        let std = ExplicitRep::standard(&g, "std", |a| permutation_of(&g, a, 3).unwrap()).unwrap();
        assert_eq!(rep_sum(&std, SymmetricSubset::EMPTY), CMatrix::zeros(2, 2));
    }

    #[test]
    fn shipped_systems_are_complete() {
        for name in ["Z1", "Z6", "Z2^2xZ3", "Z4xZ2", "D4", "Q8", "S3", "Dic12", "A4", "D5", "D6"] {
            let g = group(name).unwrap();
            let rs = rep_system(&g, name).unwrap();
            let sum: usize = rs.degrees().iter().map(|d| d * d).sum();
            assert_eq!(sum, g.order(), "{name}");
        }
        let g = group("SL2_3").unwrap();
        assert!(rep_system(&g, "SL2_3").is_err());
        assert!(matches!(
            RepSystem::new(&group("S3").unwrap(), linear_characters(&group("S3").unwrap()).unwrap()),
            Err(Error::IncompleteRepSystem { sum: 2, order: 6 })
        ));
    }

    #[test]
    fn q8_union_example() {
        let g = quaternion();
        let rs = rep_system(&g, "Q8").unwrap();
        let s = SymmetricSubset::parse(&g, "i,-i,j,-j,-1").unwrap();
        assert!(ds_union_check(&g, &rs, s).unwrap());
        let union = ds_union(&rs, s).unwrap();
        assert_close(union, vec![5.0, 1.0, 1.0, -3.0, -1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn bad_generators_are_rejected() {
        let g = group("Z4").unwrap();
        // a rotation of order 3 cannot be the image of an element of order 4
        let (s, co) = ((2.0 * PI / 3.0).sin(), (2.0 * PI / 3.0).cos());
        let r = ExplicitRep::from_generators(&g, "bad", &[(1, mat2([co, -s, s, co]))]);
        assert!(matches!(r, Err(Error::InvalidRepresentation(_))));
    }
}
