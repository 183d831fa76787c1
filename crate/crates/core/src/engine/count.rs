//! Point counts of `Y` by eliminating the last `k` coordinates.
//!
//! `psi` is multi-affine, so for a fixed outer point `y` the polynomial
//! `z -> psi(y, z)` is determined by its values at the `2^k` corners of the
//! unit cube. Those come from `2^k` Gram determinants; the remaining
//! `p^k` values are produced by interpolation, which is far cheaper than
//! `p^k` determinants.

use crate::config::{Configuration, GramForm};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::oracle::crt_reconstruct;

/// Default work budget per prime for [`count_y`].
pub const DEFAULT_COUNT_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountConfig {
    pub primes: Vec<u32>,
    /// Largest estimated number of field operations spent on one prime.
    pub budget: u64,
    /// Smallest lcm of the moduli `p - 1` accepted for a reconstruction.
    pub min_modulus: u64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { primes: vec![3, 5, 7, 11, 13], budget: DEFAULT_COUNT_BUDGET, min_modulus: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub value: i64,
    pub residues: Vec<(u32, u64)>,
    pub modulus: u64,
    pub skipped: Vec<u32>,
}

fn projective(p: u64, m: usize) -> u64 {
    if m == 0 {
        0
    } else {
        (p.pow(m as u32) - 1) / (p - 1)
    }
}

/// Outer points and estimated field operations when eliminating `k`
/// coordinates.
fn cost(p: u64, n: usize, r: usize, k: usize) -> (u64, f64) {
    let outer = projective(p, n - k) + 1;
    let grid = (p as f64).powi(k.saturating_sub(2) as i32);
    let work = outer as f64 * ((1u64 << k) as f64 * (r * r * r) as f64 / 3.0 + grid * 4.0);
    (outer, work)
}

/// Largest grid kept in memory, in cells.
const MAX_GRID: f64 = 1e7;

/// Number of eliminated coordinates for the least estimated work.
pub fn choose_k(p: u32, n: usize, r: usize) -> usize {
    (0..=n)
        .filter(|&k| (p as f64).powi(k.saturating_sub(2) as i32) <= MAX_GRID)
        .min_by(|&a, &b| cost(p as u64, n, r, a).1.total_cmp(&cost(p as u64, n, r, b).1))
        .unwrap_or(0)
}

/// `|Y(F_p)|`, or a budget error when the estimated work exceeds `budget`.
pub fn count_y(w: &Configuration, p: u32, budget: u64) -> Result<u64> {
    let n = w.size();
    if n == 0 {
        return Err(Error::Invalid("empty ground set".into()));
    }
    if w.rank() == 0 {
        return Ok(projective(p as u64, n));
    }
    let f = Fp::new(p)?;
    let r = w.rank();
    let k = choose_k(p, n, r);
    let (_, work) = cost(p as u64, n, r, k);
    if work > budget as f64 {
        return Err(Error::Budget { needed: work as u128, budget });
    }
    count_y_with(w, &f, k)
}

/// `|Y(F_p)|` eliminating the last `k` coordinates; `w` must have positive
/// rank and `k <= |E|`.
pub fn count_y_with(w: &Configuration, f: &Fp, k: usize) -> Result<u64> {
    let n = w.size();
    let p = f.p() as u64;
    let gram = w.gram_form(f);
    let m = n - k;
    let mut inner = Inner::new(&gram, m, k);
    let mut y = vec![0u32; m];
    // y = 0 contributes the classes of nonzero z, p - 1 representatives each
    let mut total = inner.nonzero(&y) / (p - 1);
    for lead in 0..m {
        for idx in 0..p.pow((m - lead - 1) as u32) {
            y[..lead].iter_mut().for_each(|v| *v = 0);
            y[lead] = 1;
            let mut rest = idx;
            for v in y[lead + 1..].iter_mut().rev() {
                *v = (rest % p) as u32;
                rest /= p;
            }
            total += inner.nonzero(&y);
        }
    }
    Ok(total)
}

struct Inner<'a> {
    gram: &'a GramForm,
    m: usize,
    k: usize,
    base: Vec<u32>,
    scratch: Vec<u32>,
    corners: Vec<u32>,
    grid: Vec<u32>,
    next: Vec<u32>,
}

impl<'a> Inner<'a> {
    fn new(gram: &'a GramForm, m: usize, k: usize) -> Self {
        let rr = gram.rank() * gram.rank();
        Inner {
            gram,
            m,
            k,
            base: vec![0; rr],
            scratch: vec![0; rr],
            corners: vec![0; 1 << k],
            grid: Vec::new(),
            next: Vec::new(),
        }
    }

    /// `#{z in F_p^k : psi(y, z) != 0}`.
    fn nonzero(&mut self, y: &[u32]) -> u64 {
        let f = self.gram.field();
        let (p, r, m, k) = (f.p(), self.gram.rank(), self.m, self.k);
        self.base.iter_mut().for_each(|v| *v = 0);
        for (e, &w) in y.iter().enumerate() {
            self.gram.accumulate(e, w, &mut self.base);
        }
        for t in 0..1usize << k {
            self.scratch.copy_from_slice(&self.base);
            for i in 0..k {
                if t >> i & 1 == 1 {
                    self.gram.accumulate(m + i, 1, &mut self.scratch);
                }
            }
            self.corners[t] = f.det_in_place(&mut self.scratch, r);
        }
        // corner values -> coefficients of the multi-affine polynomial
        for i in 0..k {
            for t in 0..1usize << k {
                if t >> i & 1 == 1 {
                    self.corners[t] = f.sub(self.corners[t], self.corners[t ^ 1 << i]);
                }
            }
        }
        // expand all but the last two variables: axis of length 2 -> length p
        let keep = k.min(2);
        self.grid.clear();
        self.grid.extend_from_slice(&self.corners);
        let mut done = 1usize; // product of expanded axis lengths
        for i in 0..k - keep {
            let low = done;
            let high = 1usize << (k - i - 1);
            self.next.clear();
            self.next.resize(low * p as usize * high, 0);
            for h in 0..high {
                for l in 0..low {
                    let c0 = self.grid[(h * 2) * low + l];
                    let c1 = self.grid[(h * 2 + 1) * low + l];
                    let mut v = c0;
                    for z in 0..p as usize {
                        self.next[(h * p as usize + z) * low + l] = v;
                        v = f.add(v, c1);
                    }
                }
            }
            std::mem::swap(&mut self.grid, &mut self.next);
            done *= p as usize;
        }
        let g = &self.grid;
        let p = p as u64;
        match keep {
            0 => g.iter().filter(|&&v| v != 0).count() as u64,
            1 => (0..done).map(|l| affine_nonzero(g[l], g[l + done], p)).sum(),
            _ => (0..done).map(|l| bilinear_nonzero(f, g[l], g[l + done], g[l + 2 * done], g[l + 3 * done])).sum(),
        }
    }
}

/// `#{z in F_p : a + b z != 0}`.
fn affine_nonzero(a: u32, b: u32, p: u64) -> u64 {
    if b != 0 {
        p - 1
    } else if a != 0 {
        p
    } else {
        0
    }
}

/// `#{(s, t) in F_p^2 : a + b s + c t + d s t != 0}`.
fn bilinear_nonzero(f: &Fp, a: u32, b: u32, c: u32, d: u32) -> u64 {
    let p = f.p() as u64;
    // for fixed s the value is (a + b s) + (c + d s) t
    let zeros = if d != 0 {
        let s = f.mul(f.neg(c), f.inv(d));
        let rest = f.add(a, f.mul(b, s));
        (p - 1) + if rest == 0 { p } else { 0 }
    } else if c != 0 {
        p
    } else {
        p * (p - affine_nonzero(a, b, p))
    };
    p * p - zeros
}

/// Reconstructs the class from counts over the configured primes, skipping
/// primes over budget. Fails unless the moduli reach `min_modulus`.
pub fn reconstruct(w: &Configuration, cfg: &CountConfig) -> Result<Reconstruction> {
    let mut residues = Vec::new();
    let mut skipped = Vec::new();
    for &p in &cfg.primes {
        match count_y(w, p, cfg.budget) {
            Ok(c) => residues.push((p, c)),
            Err(Error::Budget { .. }) => skipped.push(p),
            Err(e) => return Err(e),
        }
    }
    let moduli: Vec<(u64, i64)> =
        residues.iter().map(|&(p, c)| (p as u64 - 1, (c % (p as u64 - 1)) as i64)).collect();
    let modulus = moduli.iter().fold(1u64, |l, &(m, _)| l / gcd(l, m) * m);
    if modulus < cfg.min_modulus {
        return Err(Error::Budget { needed: cfg.min_modulus as u128, budget: modulus });
    }
    let bound = (modulus as i64 - 1) / 2;
    let value = crt_reconstruct(&moduli, bound)?.ok_or(Error::CrtInconsistent)?;
    Ok(Reconstruction { value, residues, modulus, skipped })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
