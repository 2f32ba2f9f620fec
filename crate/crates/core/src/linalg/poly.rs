//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial with exact integer coefficients in ascending degree order.
/// The coefficient vector is kept trimmed: the zero polynomial has no
/// coefficients and otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPolynomial { coeffs: c }
    }

    /// The linear factor `x − r`.
    pub fn linear(r: i64) -> Self {
        Self::from_i64(&[-r, 1])
    }

    /// `∏ (x − r)^m` over the map entries.
    pub fn from_roots(roots: &BTreeMap<i64, usize>) -> Self {
        let mut p = Self::one();
        for (&r, &m) in roots {
            for _ in 0..m {
                p = p.mul(&Self::linear(r));
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Synthetic division by `x − r`: returns the quotient when `r` is a root.
    pub fn divide_by_root(&self, r: i64) -> Option<Self> {
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        let r = BigInt::from(r);
        let mut q = vec![BigInt::zero(); n];
        let mut carry = BigInt::zero();
        for i in (0..=n).rev() {
            let v = &self.coeffs[i] + &carry * &r;
            if i == 0 {
                return if v.is_zero() { Some(Self::new(q)) } else { None };
            }
            q[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Long division by a monic divisor: `self = q · d + r` with
    /// `deg r < deg d`. Returns `None` when `d` is not monic.
    pub fn div_rem_monic(&self, d: &Self) -> Option<(Self, Self)> {
        if !d.is_monic() {
            return None;
        }
        let dn = d.degree()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dn {
            return Some((Self::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dn];
        for i in (0..q.len()).rev() {
            let c = r[i + dn].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dj;
            }
            q[i] = c;
        }
        r.truncate(dn);
        Some((Self::new(q), Self::new(r)))
    }

    /// Strips every integer root in `lo..=hi` by repeated synthetic division.
    /// Returns root multiplicities and the root-free remainder, so that
    /// `self = remainder · ∏ (x − r)^m`.
    pub fn integer_root_split(&self, lo: i64, hi: i64) -> (BTreeMap<i64, usize>, IntPolynomial) {
        let mut roots = BTreeMap::new();
        let mut rest = self.clone();
        if rest.is_zero() {
            return (roots, rest);
        }
        for r in lo..=hi {
            while let Some(q) = rest.divide_by_root(r) {
                *roots.entry(r).or_insert(0) += 1;
                rest = q;
            }
        }
        (roots, rest)
    }

    /// The polynomial whose roots are those of `self` multiplied by `c`
    /// (monic stays monic): `c^n · p(x / c)`.
    pub fn scale_roots(&self, c: &BigInt) -> Self {
        let Some(n) = self.degree() else {
            return Self::zero();
        };
        let mut pow = BigInt::one();
        let mut out = vec![BigInt::zero(); n + 1];
        for i in (0..=n).rev() {
            out[i] = &self.coeffs[i] * &pow;
            pow *= c;
        }
        Self::new(out)
    }

    /// The polynomial whose roots are those of `self` shifted by `a`: `p(x − a)`.
    pub fn shift_roots(&self, a: i64) -> Self {
        // Horner in the ring of polynomials
        let lin = Self::linear(a);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::new(vec![c.clone()])))
    }

    /// Power sums `P_0 … P_m` of the roots (with multiplicity) of a monic
    /// polynomial, by Newton's identities. `P_0` is the degree.
    pub fn power_sums(&self, m: usize) -> Vec<BigInt> {
        assert!(self.is_monic(), "power sums need a monic polynomial");
        let n = self.degree().expect("monic is nonzero");
        // elementary symmetric e_i = (−1)^i c_{n−i}
        let e: Vec<BigInt> = (0..=n)
            .map(|i| {
                let c = &self.coeffs[n - i];
                if i % 2 == 0 {
                    c.clone()
                } else {
                    -c
                }
            })
            .collect();
        let mut p = vec![BigInt::from(n)];
        for k in 1..=m {
            let mut s = BigInt::zero();
            for i in 1..=k.min(n) {
                let term = if i == k {
                    &e[i] * BigInt::from(k)
                } else {
                    &e[i] * &p[k - i]
                };
                if i % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            p.push(s);
        }
        p
    }

    /// The monic degree-`n` polynomial with the given power sums `P_1 … P_n`
    /// (`sums[0]` is ignored). Inverse of [`IntPolynomial::power_sums`].
    pub fn from_power_sums(n: usize, sums: &[BigInt]) -> Self {
        assert!(sums.len() > n);
        let mut e = vec![BigInt::one()];
        for m in 1..=n {
            let mut s = BigInt::zero();
            for i in 1..=m {
                let term = &e[m - i] * &sums[i];
                if i % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            let (q, r) = s.div_rem(&BigInt::from(m));
            assert!(r.is_zero(), "power sums do not come from an integer polynomial");
            e.push(q);
        }
        let coeffs = (0..=n)
            .map(|j| {
                // coefficient of x^j is (−1)^{n−j} e_{n−j}
                let v = &e[n - j];
                if (n - j) % 2 == 0 {
                    v.clone()
                } else {
                    -v
                }
            })
            .collect();
        Self::new(coeffs)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_split_examples() {
        let p = IntPolynomial::from_roots(&BTreeMap::from([(4, 1), (-1, 1)]))
            .mul(&IntPolynomial::from_i64(&[-4, 1, 1]));
        let (roots, rest) = p.integer_root_split(-4, 4);
        assert_eq!(roots, BTreeMap::from([(4, 1), (-1, 1)]));
        assert_eq!(rest, IntPolynomial::from_i64(&[-4, 1, 1]));

        let (roots, rest) = IntPolynomial::monomial(5).integer_root_split(-1, 1);
        assert_eq!(roots, BTreeMap::from([(0, 5)]));
        assert_eq!(rest, IntPolynomial::one());

        let cube = IntPolynomial::linear(2).pow(3);
        let (roots, rest) = cube.integer_root_split(0, 1);
        assert!(roots.is_empty());
        assert_eq!(rest, cube);
    }

    #[test]
    fn newton_round_trip() {
        let p = IntPolynomial::from_i64(&[-4, 1, 1]).mul(&IntPolynomial::linear(3).pow(2));
        let sums = p.power_sums(4);
        // roots 3,3,(−1±√17)/2: P1 = 6 − 1, P2 = 18 + (1 + 17)/2 + 4 = ...
        assert_eq!(sums[1], BigInt::from(5));
        assert_eq!(sums[2], BigInt::from(18 + 9));
        assert_eq!(IntPolynomial::from_power_sums(4, &sums), p);
    }

    #[test]
    fn root_transforms() {
        let p = IntPolynomial::from_roots(&BTreeMap::from([(1, 2), (-3, 1)]));
        assert_eq!(
            p.scale_roots(&BigInt::from(2)),
            IntPolynomial::from_roots(&BTreeMap::from([(2, 2), (-6, 1)]))
        );
        assert_eq!(
            p.shift_roots(5),
            IntPolynomial::from_roots(&BTreeMap::from([(6, 2), (2, 1)]))
        );
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(IntPolynomial::from_i64(&[-4, 1, 1]).to_string(), "x^2 + x - 4");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(IntPolynomial::from_i64(&[0, -2]).to_string(), "-2x");
    }

    #[test]
    fn monic_long_division() {
        let f = IntPolynomial::from_i64(&[-4, 1, 1]);
        let g = IntPolynomial::from_i64(&[2, -3, 0, 5]);
        let r = IntPolynomial::from_i64(&[7, -1]);
        let p = f.mul(&g).add(&r);
        assert_eq!(p.div_rem_monic(&f), Some((g, r)));
        assert_eq!(f.div_rem_monic(&IntPolynomial::from_i64(&[1, 2])), None);
        let (q, rem) = IntPolynomial::from_i64(&[3]).div_rem_monic(&f).unwrap();
        assert!(q.is_zero());
        assert_eq!(rem, IntPolynomial::from_i64(&[3]));
    }
}
