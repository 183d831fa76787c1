//! Arithmetic in prime fields GF(p) for small p.

use crate::error::{Error, Result};

/// Primes the counting code is tuned for.
pub const SMALL_PRIMES: [u32; 5] = [3, 5, 7, 11, 13];

#[derive(Clone, Debug)]
pub struct Fp {
    p: u32,
    inv: Vec<u32>,
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > 1 << 15 {
            return Err(Error::Invalid(format!("{p} is not a supported prime")));
        }
        let mut inv = vec![0; p as usize];
        for a in 1..p {
            inv[a as usize] = pow(a, p - 2, p);
        }
        Ok(Fp { p, inv })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn reduce(&self, x: i128) -> u32 {
        x.rem_euclid(self.p as i128) as u32
    }

    /// Determinant of a square row-major `n x n` matrix; destroys `m`.
    pub fn det_in_place(&self, m: &mut [u32], n: usize) -> u32 {
        let p = self.p;
        let mut det = 1u32;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| m[i * n + k] != 0) else {
                return 0;
            };
            if piv != k {
                for j in k..n {
                    m.swap(k * n + j, piv * n + j);
                }
                det = self.neg(det);
            }
            let d = m[k * n + k];
            det = det * d % p;
            let dinv = self.inv[d as usize];
            for i in k + 1..n {
                let f = m[i * n + k] * dinv % p;
                if f == 0 {
                    continue;
                }
                let nf = p - f;
                for j in k + 1..n {
                    m[i * n + j] = (m[i * n + j] + nf * m[k * n + j]) % p;
                }
            }
        }
        det
    }
}

fn pow(a: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for p in SMALL_PRIMES {
            let f = Fp::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
        assert!(Fp::new(9).is_err());
    }

    #[test]
    fn determinant_mod_p() {
        let f = Fp::new(7).unwrap();
        // [[1,2],[3,4]] has determinant -2
        let mut m = vec![1, 2, 3, 4];
        assert_eq!(f.det_in_place(&mut m, 2), 5);
        let mut m = vec![0, 1, 1, 0];
        assert_eq!(f.det_in_place(&mut m, 2), 6);
        assert_eq!(f.det_in_place(&mut [], 0), 1);
        assert_eq!(f.reduce(-9), 5);
    }
}
