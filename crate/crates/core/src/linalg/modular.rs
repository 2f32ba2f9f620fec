//! Word-size modular arithmetic: ranks and characteristic polynomials over
//! prime fields, and Chinese remaindering back to exact integers.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic in a prime field with elements stored as `u64` in `0..p`.
pub trait PrimeField: Copy {
    fn modulus(self) -> u64;
    fn mul(self, a: u64, b: u64) -> u64;

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus() {
            s - self.modulus()
        } else {
            s
        }
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus() - b
        }
    }

    #[inline]
    fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus() - a
        }
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.modulus() - 2)
    }

    #[inline]
    fn from_i64(self, x: i64) -> u64 {
        let p = self.modulus() as i128;
        (x as i128).rem_euclid(p) as u64
    }
}

/// The Mersenne prime `2^31 − 1`; products fit in a `u64` and reduce with shifts.
#[derive(Clone, Copy, Debug, Default)]
pub struct Mersenne31;

impl PrimeField for Mersenne31 {
    #[inline]
    fn modulus(self) -> u64 {
        (1 << 31) - 1
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        const P: u64 = (1 << 31) - 1;
        let x = a * b;
        let x = (x & P) + (x >> 31);
        let x = (x & P) + (x >> 31);
        if x >= P {
            x - P
        } else {
            x
        }
    }
}

/// A prime below `2^62`; products go through `u128`.
#[derive(Clone, Copy, Debug)]
pub struct Prime62(pub u64);

impl PrimeField for Prime62 {
    #[inline]
    fn modulus(self) -> u64 {
        self.0
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, a);
            }
            a = mulm(a, a);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // deterministic witness set for all 64-bit integers
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes below `2^62`, in decreasing order.
pub fn primes_62(count: usize) -> Vec<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let cached = CACHE.get_or_init(|| {
        let mut out = Vec::with_capacity(64);
        let mut c = (1u64 << 62) - 1;
        while out.len() < 64 {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    });
    if count <= cached.len() {
        return cached[..count].to_vec();
    }
    let mut out = cached.clone();
    let mut c = *out.last().expect("non-empty") - 2;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Rank of a row-major `rows × cols` matrix over the field, destroying `m`.
pub fn rank_in_place<F: PrimeField>(f: F, m: &mut [u64], rows: usize, cols: usize) -> usize {
    let mut r = 0;
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
        }
        let inv = f.inv(m[r * cols + c]);
        for i in r + 1..rows {
            let lead = m[i * cols + c];
            if lead == 0 {
                continue;
            }
            let u = f.mul(lead, inv);
            for j in c..cols {
                let v = m[r * cols + j];
                if v != 0 {
                    m[i * cols + j] = f.sub(m[i * cols + j], f.mul(u, v));
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of an integer matrix modulo the field's prime.
pub fn rank_mod<F: PrimeField>(f: F, a: &[i64], rows: usize, cols: usize) -> usize {
    let mut m: Vec<u64> = a.iter().map(|&x| f.from_i64(x)).collect();
    rank_in_place(f, &mut m, rows, cols)
}

/// Characteristic polynomial `det(xI − H)` of an `n × n` matrix over the
/// field, ascending coefficients (monic, length `n + 1`). Reduces to upper
/// Hessenberg form by similarity, then runs the Hessenberg recurrence.
pub fn char_poly_in_place<F: PrimeField>(f: F, h: &mut [u64], n: usize) -> Vec<u64> {
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h[i * n + m - 1] != 0) else {
            continue;
        };
        if piv != m {
            for j in 0..n {
                h.swap(piv * n + j, m * n + j);
            }
            for j in 0..n {
                h.swap(j * n + piv, j * n + m);
            }
        }
        let tinv = f.inv(h[m * n + m - 1]);
        for i in m + 1..n {
            let u = f.mul(h[i * n + m - 1], tinv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let v = h[m * n + j];
                if v != 0 {
                    h[i * n + j] = f.sub(h[i * n + j], f.mul(u, v));
                }
            }
            for j in 0..n {
                let v = h[j * n + i];
                if v != 0 {
                    h[j * n + m] = f.add(h[j * n + m], f.mul(u, v));
                }
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for m in 1..=n {
        let prev = &polys[m - 1];
        let hmm = h[(m - 1) * n + m - 1];
        // (x − h) · p_{m−1}
        let mut next = vec![0u64; m + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.sub(next[i], f.mul(hmm, c));
        }
        let mut t = 1u64;
        for i in 1..m {
            t = f.mul(t, h[(m - i) * n + m - i - 1]);
            if t == 0 {
                break;
            }
            let coef = f.mul(t, h[(m - i - 1) * n + m - 1]);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                next[k] = f.sub(next[k], f.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

pub fn char_poly_mod<F: PrimeField>(f: F, a: &[i64], n: usize) -> Vec<u64> {
    let mut h: Vec<u64> = a.iter().map(|&x| f.from_i64(x)).collect();
    char_poly_in_place(f, &mut h, n)
}

/// Horner evaluation of an ascending-coefficient polynomial at `x`.
pub fn eval_mod<F: PrimeField>(f: F, poly: &[u64], x: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Reconstructs the unique integer in `(−M/2, M/2]` with the given residues,
/// `M` the product of the moduli.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    assert_eq!(residues.len(), primes.len());
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let f = Prime62(p);
        let x_mod = x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
        let m_mod = m.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
        let t = f.mul(f.sub(r % p, x_mod), f.inv(m_mod));
        x += &m * t;
        m *= p;
    }
    let half = &m >> 1u32;
    if x > half {
        x -= &m;
    }
    x
}

/// `x mod p` for an arbitrary-precision integer.
pub fn reduce_big(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced residue fits")
}

/// log2 of `|x|`, `0` for zero (enough precision for bound arithmetic).
pub fn log2_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 60 {
        (x.abs().to_u64().expect("small") as f64).log2()
    } else {
        let shift = bits - 53;
        let top = (x.abs() >> shift).to_u64().expect("53 bits") as f64;
        top.log2() + shift as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_list_is_prime_and_descending() {
        let ps = primes_62(20);
        assert_eq!(ps[0], 4611686018427387847);
        assert_eq!(ps[15], 4611686018427387329);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(is_prime_u64((1 << 31) - 1));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn mersenne_reduction_matches_u128() {
        let f = Mersenne31;
        let p = f.modulus();
        for (a, b) in [(p - 1, p - 1), (12345, 67890), (0, p - 1), (1 << 30, 3)] {
            assert_eq!(f.mul(a, b), ((a as u128 * b as u128) % p as u128) as u64);
        }
    }

    #[test]
    fn crt_recovers_negative_values() {
        let ps = primes_62(3);
        let x: BigInt = -BigInt::from(10).pow(30) + 7;
        let rs: Vec<u64> = ps.iter().map(|&p| reduce_big(&x, p)).collect();
        assert_eq!(crt_symmetric(&rs, &ps), x);
    }

    #[test]
    fn char_poly_mod_of_small_matrix() {
        // [[2,1],[1,2]] has char poly x² − 4x + 3
        let f = Mersenne31;
        let cp = char_poly_mod(f, &[2, 1, 1, 2], 2);
        assert_eq!(cp, vec![3, f.from_i64(-4), 1]);
        assert_eq!(rank_mod(f, &[1, 1, 1, 1], 2, 2), 1);
    }
}
