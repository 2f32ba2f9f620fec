//! Fraction-free (Bareiss) elimination. Every intermediate entry is a minor
//! of the input, so divisions are exact. A checked `i128` pass handles the
//! common small-entry case; on overflow the work restarts over `BigInt`.

use num_bigint::BigInt;
use num_traits::Zero;

/// Result of an elimination: rank and, for square input, the determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub rank: usize,
    pub det: Option<BigInt>,
}

fn eliminate_i128(m: &mut [i128], rows: usize, cols: usize) -> Option<(usize, i128)> {
    let mut prev: i128 = 1;
    let mut r = 0;
    let mut sign: i128 = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
            sign = -sign;
        }
        let piv = m[r * cols + c];
        for i in r + 1..rows {
            let lead = m[i * cols + c];
            for j in c + 1..cols {
                let a = piv.checked_mul(m[i * cols + j])?;
                let b = lead.checked_mul(m[r * cols + j])?;
                let num = a.checked_sub(b)?;
                debug_assert_eq!(num % prev, 0);
                m[i * cols + j] = num / prev;
            }
            m[i * cols + c] = 0;
        }
        prev = piv;
        r += 1;
    }
    Some((r, sign * prev))
}

fn eliminate_big(m: &mut [BigInt], rows: usize, cols: usize) -> (usize, BigInt) {
    let mut prev = BigInt::from(1);
    let mut r = 0;
    let mut negate = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
            negate = !negate;
        }
        let piv = m[r * cols + c].clone();
        for i in r + 1..rows {
            let lead = m[i * cols + c].clone();
            for j in c + 1..cols {
                let num = &piv * &m[i * cols + j] - &lead * &m[r * cols + j];
                m[i * cols + j] = num / &prev;
            }
            m[i * cols + c] = BigInt::zero();
        }
        prev = piv;
        r += 1;
    }
    (r, if negate { -prev } else { prev })
}

fn finish(rows: usize, cols: usize, rank: usize, last_pivot: BigInt) -> Elimination {
    let det = (rows == cols).then(|| {
        if rows == 0 {
            BigInt::from(1)
        } else if rank == rows {
            last_pivot
        } else {
            BigInt::zero()
        }
    });
    Elimination { rank, det }
}

/// Eliminates a row-major integer matrix given with `i64` entries.
pub fn eliminate_i64(a: &[i64], rows: usize, cols: usize) -> Elimination {
    let mut m: Vec<i128> = a.iter().map(|&x| x as i128).collect();
    if let Some((rank, pivot)) = eliminate_i128(&mut m, rows, cols) {
        return finish(rows, cols, rank, BigInt::from(pivot));
    }
    let mut m: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
    let (rank, pivot) = eliminate_big(&mut m, rows, cols);
    finish(rows, cols, rank, pivot)
}

/// Eliminates a row-major matrix of arbitrary-precision entries.
pub fn eliminate_big_matrix(a: &[BigInt], rows: usize, cols: usize) -> Elimination {
    let small = a.iter().all(|x| x.bits() < 62);
    if small {
        let mut m: Vec<i128> = a
            .iter()
            .map(|x| i128::try_from(x).expect("fits in i128"))
            .collect();
        if let Some((rank, pivot)) = eliminate_i128(&mut m, rows, cols) {
            return finish(rows, cols, rank, BigInt::from(pivot));
        }
    }
    let mut m = a.to_vec();
    let (rank, pivot) = eliminate_big(&mut m, rows, cols);
    finish(rows, cols, rank, pivot)
}

/// Exact rank of an `i64` matrix.
pub fn rank_i64(a: &[i64], rows: usize, cols: usize) -> usize {
    eliminate_i64(a, rows, cols).rank
}

/// Determinant by cofactor expansion; exponential, used only as an oracle
/// in tests on tiny matrices.
pub fn det_cofactor(a: &[BigInt], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return a[0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if a[j].is_zero() {
            continue;
        }
        let minor: Vec<BigInt> = (1..n)
            .flat_map(|r| (0..n).filter(move |&c| c != j).map(move |c| (r, c)))
            .map(|(r, c)| a[r * n + c].clone())
            .collect();
        let term = &a[j] * det_cofactor(&minor, n - 1);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(rank_i64(&[1; 16], 4, 4), 1);
        // K4 − 3I
        let mut k4 = vec![1i64; 16];
        for i in 0..4 {
            k4[i * 5] = -3;
        }
        assert_eq!(rank_i64(&k4, 4, 4), 3);
        assert_eq!(rank_i64(&[0, 0, 0, 0, 0, 0], 2, 3), 0);
        assert_eq!(rank_i64(&[1, 2, 3, 2, 4, 6], 2, 3), 1);
        assert_eq!(rank_i64(&[0, 1, 0, 0, 0, 1], 2, 3), 2);
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let a = [3, -1, 4, 1, 5, 9, -2, 6, 5, 3, 5, -8, 9, 7, 9, 3];
        let e = eliminate_i64(&a, 4, 4);
        assert_eq!(e.det, Some(det_cofactor(&big(&a), 4)));
        let singular = [1, 2, 3, 4, 5, 6, 7, 8, 9];
        assert_eq!(eliminate_i64(&singular, 3, 3).det, Some(BigInt::zero()));
    }

    #[test]
    fn big_fallback_agrees() {
        // large entries force the BigInt path
        let huge = 1i64 << 62;
        let a = [huge, huge - 1, huge - 3, huge - 7];
        let e = eliminate_i64(&a, 2, 2);
        assert_eq!(e.det, Some(det_cofactor(&big(&a), 2)));
        assert_eq!(eliminate_big_matrix(&big(&a), 2, 2), e);
    }
}
