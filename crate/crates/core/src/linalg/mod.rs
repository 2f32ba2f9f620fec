//! Exact integer matrix algebra.

pub mod bareiss;
pub mod modular;
pub mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use modular::Prime62;
pub use poly::IntPolynomial;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| 1)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let data = (0..rows * cols)
            .map(|k| BigInt::from(f(k / cols, k % cols)))
            .collect();
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| rows[i][j]))
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| data[i * cols + j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Row-major `i64` copy, if every entry fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.data.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: block `(i, j)` is `self[i][j] · other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out.set(i * other.rows + p, j * other.cols + q, a * other.get(p, q));
                    }
                }
            }
        }
        out
    }

    /// `self − λI` for square matrices.
    pub fn shifted(&self, lambda: i64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("shift of a non-square matrix".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.data[i * self.cols + i] -= lambda;
        }
        Ok(out)
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss::eliminate_big_matrix(&self.data, self.rows, self.cols).rank
    }

    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        Ok(bareiss::eliminate_big_matrix(&self.data, self.rows, self.cols)
            .det
            .expect("square"))
    }

    /// `det(xI − A)`, computed modulo enough 62-bit primes to cover the
    /// Hadamard bound on the coefficients and reassembled by CRT.
    pub fn char_poly(&self) -> Result<IntPolynomial> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "characteristic polynomial of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        // |c_{n−j}| ≤ C(n, j) · ∏ max(1, ‖row_i‖) ≤ 2^n · ∏ max(1, ‖row_i‖)
        let mut bound_bits = n as f64;
        for i in 0..n {
            let sq: f64 = (0..n)
                .map(|j| {
                    let l = modular::log2_abs(self.get(i, j));
                    if l.is_finite() {
                        (2.0 * l).exp2()
                    } else {
                        0.0
                    }
                })
                .sum();
            if sq > 1.0 {
                bound_bits += 0.5 * sq.log2();
            }
        }
        // symmetric range needs product > 2·bound; keep a few spare bits
        let needed = bound_bits + 4.0;
        let count = ((needed / 61.0).ceil() as usize).max(1);
        let primes = modular::primes_62(count);
        let product_bits: f64 = primes.iter().map(|&p| (p as f64).log2()).sum();
        assert!(
            product_bits > needed,
            "CRT modulus ({product_bits:.1} bits) below coefficient bound ({needed:.1} bits)"
        );
        let residues: Vec<Vec<u64>> = primes
            .iter()
            .map(|&p| {
                let f = Prime62(p);
                let mut h: Vec<u64> = self.data.iter().map(|x| modular::reduce_big(x, p)).collect();
                modular::char_poly_in_place(f, &mut h, n)
            })
            .collect();
        let coeffs = (0..=n)
            .map(|k| {
                let rs: Vec<u64> = residues.iter().map(|r| r[k]).collect();
                modular::crt_symmetric(&rs, &primes)
            })
            .collect();
        Ok(IntPolynomial::new(coeffs))
    }

    /// Determines whether `∏_{i=−k}^{k} (A − iI) = 0` exactly. For symmetric
    /// `A` with spectral radius at most `k` this holds iff every eigenvalue
    /// is an integer. Entries grow quickly, so only `n ≤ 12` is accepted.
    pub fn annihilator_product_oracle(&self, k: i64) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("oracle needs a square matrix".into()));
        }
        if self.rows > 12 {
            return Err(Error::OracleTooLarge(self.rows));
        }
        let mut acc = Self::identity(self.rows);
        for i in -k..=k {
            acc = acc.matmul(&self.shifted(i)?)?;
            if acc.is_zero() {
                return Ok(true);
            }
        }
        Ok(acc.is_zero())
    }

    /// Evaluates `det(tI − A)` by elimination (independent of `char_poly`).
    pub fn char_poly_at(&self, t: i64) -> Result<BigInt> {
        let m = self.shifted(t)?.scale(&-BigInt::one());
        m.det()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Exact characteristic polynomial of an `i64` matrix (same CRT route).
pub fn char_poly_i64(a: &[i64], n: usize) -> IntPolynomial {
    IntMatrix::from_i64(n, n, a)
        .expect("square data")
        .char_poly()
        .expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn a4_witness() -> IntMatrix {
        IntMatrix::from_rows(&[
            vec![0, 1, 2, 1],
            vec![1, 0, 2, 1],
            vec![2, 2, 0, 0],
            vec![1, 1, 0, 2],
        ])
        .unwrap()
    }

    #[test]
    fn kron_examples() {
        let k = IntMatrix::identity(2).kron(&IntMatrix::ones(2, 2));
        let expect = IntMatrix::from_rows(&[
            vec![1, 1, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 1, 1],
        ])
        .unwrap();
        assert_eq!(k, expect);
        let k = IntMatrix::ones(2, 2).kron(&IntMatrix::identity(2));
        assert_eq!(k.get(0, 2), &BigInt::from(1));
        assert_eq!(k.get(1, 3), &BigInt::from(1));
        assert_eq!(k.get(0, 3), &BigInt::from(0));
    }

    #[test]
    fn dimension_errors() {
        let a = IntMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
        assert!(a.add(&IntMatrix::zeros(3, 2)).is_err());
        assert!(a.char_poly().is_err());
        assert!(IntMatrix::from_rows(&[vec![1], vec![1, 2]]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::ones(4, 4).rank(), 1);
        let k4 = IntMatrix::ones(4, 4).sub(&IntMatrix::identity(4)).unwrap();
        assert_eq!(k4.shifted(3).unwrap().rank(), 3);
        assert_eq!(a4_witness().shifted(4).unwrap().rank(), 3);
    }

    #[test]
    fn char_poly_examples() {
        let two = IntMatrix::identity(2).char_poly().unwrap();
        assert_eq!(two, IntPolynomial::linear(1).pow(2));
        assert_eq!(IntMatrix::zeros(5, 5).char_poly().unwrap(), IntPolynomial::monomial(5));
        let cp = a4_witness().char_poly().unwrap();
        let expect = IntPolynomial::from_roots(&BTreeMap::from([(4, 1), (-1, 1)]))
            .mul(&IntPolynomial::from_i64(&[-4, 1, 1]));
        assert_eq!(cp, expect);
        // independent oracle: cofactor expansion of tI − A
        for t in -2..=2 {
            let m = a4_witness().shifted(t).unwrap().scale(&BigInt::from(-1));
            assert_eq!(cp.eval(&BigInt::from(t)), bareiss::det_cofactor(m.entries(), 4));
        }
    }

    #[test]
    fn char_poly_with_large_entries() {
        let big = 1i64 << 40;
        let a = IntMatrix::from_rows(&[vec![big, 3, -big], vec![3, -7, big], vec![-big, big, 1]])
            .unwrap();
        let cp = a.char_poly().unwrap();
        for t in -2..=2 {
            assert_eq!(cp.eval(&BigInt::from(t)), a.char_poly_at(t).unwrap());
        }
    }

    #[test]
    fn annihilator_examples() {
        let k4 = IntMatrix::ones(4, 4).sub(&IntMatrix::identity(4)).unwrap();
        assert!(k4.annihilator_product_oracle(3).unwrap());
        let c4 = IntMatrix::from_rows(&[
            vec![0, 1, 0, 1],
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 1],
            vec![1, 0, 1, 0],
        ])
        .unwrap();
        assert!(c4.annihilator_product_oracle(2).unwrap());
        assert!(!a4_witness().annihilator_product_oracle(4).unwrap());
        assert_eq!(
            IntMatrix::zeros(13, 13).annihilator_product_oracle(1),
            Err(Error::OracleTooLarge(13))
        );
    }
}
