//! Point counts of `X`, `Y` and the torus part of `Y` over GF(p).
//!
//! Counting is plain enumeration of projective representatives (first
//! nonzero coordinate equal to one), so it shares no code with the engine's
//! rules. A known class `n` forces `|Y(F_p)| = n mod (p - 1)`; the checks here
//! test that necessary condition and never certify more than it.

use serde::Serialize;

use crate::bits::{ones, Mask};
use crate::config::{ConfigPolynomial, Configuration, GramForm};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::matroid::Matroid;

/// Default limit on the number of evaluations per count.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCounts {
    pub p: u32,
    pub n_projective: u64,
    pub n_x: u64,
    pub n_y: u64,
    pub n_ytorus: u64,
}

/// How point chunks are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub p: u32,
    pub modulus: u64,
    pub observed: i64,
    pub claimed: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratificationReport {
    pub p: u32,
    pub n_y: u64,
    pub torus_sum: u64,
    pub spanning_sets: usize,
    pub n_ytorus: u64,
    pub n_ytorus_dual: u64,
}

pub fn projective_size(p: u32, n: usize) -> u128 {
    let p = p as u128;
    (p.pow(n as u32) - 1) / (p - 1)
}

fn check_budget(p: u32, n: usize, budget: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Invalid("empty ground set".into()));
    }
    let needed = projective_size(p, n);
    if needed > budget as u128 {
        return Err(Error::Budget { needed, budget });
    }
    Ok(needed as u64)
}

/// Counts with the Gram determinant `det(A diag(x) A^T)`. For an incidence
/// configuration that matrix is the reduced weighted Laplacian.
pub fn count_points(w: &Configuration, p: u32, budget: u64, exec: Exec) -> Result<PointCounts> {
    let f = Fp::new(p)?;
    let gram = w.gram_form(&f);
    count_gram(&gram, budget, exec)
}

pub fn count_gram(gram: &GramForm, budget: u64, exec: Exec) -> Result<PointCounts> {
    let n = gram.size();
    let p = gram.field().p();
    let total = check_budget(p, n, budget)?;
    let r = gram.rank();
    let (ny, nt) = run_chunks(total, exec, |start, end| {
        let f = gram.field();
        let mut x = vec![0u32; n];
        let mut prefix = vec![0u32; r * r];
        let mut scratch = vec![0u32; r * r];
        let mut ny = 0u64;
        let mut nt = 0u64;
        // walk points in runs that only differ in the last coordinate
        let mut idx = start;
        while idx < end {
            let lead = decode(idx, n, p, &mut x);
            let run = if lead + 1 < n { (p as u64 - x[n - 1] as u64).min(end - idx) } else { 1 };
            prefix.iter_mut().for_each(|v| *v = 0);
            for (e, &w) in x[..n - 1].iter().enumerate() {
                gram.accumulate(e, w, &mut prefix);
            }
            let torus_prefix = x[..n - 1].iter().all(|&v| v != 0);
            for k in 0..run {
                let last = x[n - 1] + k as u32;
                scratch.copy_from_slice(&prefix);
                gram.accumulate(n - 1, last, &mut scratch);
                if f.det_in_place(&mut scratch, r) != 0 {
                    ny += 1;
                    if torus_prefix && last != 0 {
                        nt += 1;
                    }
                }
            }
            idx += run;
        }
        (ny, nt)
    });
    Ok(finish(p, total, ny, nt))
}

/// Counts by summing the monomials of `poly`; slower, but takes any
/// coefficients.
pub fn count_points_poly(poly: &ConfigPolynomial, p: u32, budget: u64, exec: Exec) -> Result<PointCounts> {
    let f = Fp::new(p)?;
    let n = poly.size();
    let total = check_budget(p, n, budget)?;
    let (ny, nt) = run_chunks(total, exec, |start, end| {
        let mut x = vec![0u32; n];
        let (mut ny, mut nt) = (0, 0);
        for idx in start..end {
            decode(idx, n, p, &mut x);
            if poly.evaluate_mod_p(&x, &f) != 0 {
                ny += 1;
                if x.iter().all(|&v| v != 0) {
                    nt += 1;
                }
            }
        }
        (ny, nt)
    });
    Ok(finish(p, total, ny, nt))
}

fn finish(p: u32, total: u64, ny: u64, nt: u64) -> PointCounts {
    PointCounts { p, n_projective: total, n_x: total - ny, n_y: ny, n_ytorus: nt }
}

/// Writes the representative with index `idx` into `x` and returns the
/// position of its leading one. Representatives are grouped by leading
/// position, and ordered lexicographically inside a group.
fn decode(mut idx: u64, n: usize, p: u32, x: &mut [u32]) -> usize {
    let p64 = p as u64;
    let mut lead = 0;
    let mut block = p64.pow(n as u32 - 1);
    while idx >= block {
        idx -= block;
        lead += 1;
        block /= p64;
    }
    x[..lead].iter_mut().for_each(|v| *v = 0);
    x[lead] = 1;
    for i in (lead + 1..n).rev() {
        x[i] = (idx % p64) as u32;
        idx /= p64;
    }
    lead
}

fn run_chunks<F>(total: u64, exec: Exec, work: F) -> (u64, u64)
where
    F: Fn(u64, u64) -> (u64, u64) + Sync,
{
    let chunks = total.div_ceil(CHUNK);
    let one = |c: u64| work(c * CHUNK, ((c + 1) * CHUNK).min(total));
    match exec {
        Exec::Sequential => (0..chunks).map(one).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1)),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..chunks).into_par_iter().map(one).reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        }
    }
}

pub fn check_congruence(counts: &PointCounts, claimed: i64) -> Congruence {
    let m = counts.p as i64 - 1;
    let observed = (counts.n_y as i64).rem_euclid(m);
    let c = claimed.rem_euclid(m);
    Congruence { p: counts.p, modulus: m as u64, observed, claimed: c, ok: observed == c }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(g, s)` with `g = gcd(a, m)` and `s * a = g mod m`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Combines `n = r_i mod m_i` (moduli need not be coprime) into `r mod L`.
pub fn crt_combine(residues: &[(u64, i64)]) -> Result<(i128, i128)> {
    let mut r: i128 = 0;
    let mut l: i128 = 1;
    for &(m, ri) in residues {
        if m == 0 {
            return Err(Error::Invalid("zero modulus".into()));
        }
        let m = m as i128;
        let ri = (ri as i128).rem_euclid(m);
        let g = gcd(l, m);
        if (ri - r).rem_euclid(g) != 0 {
            return Err(Error::CrtInconsistent);
        }
        let (_, s, _) = ext_gcd(l / g, m / g);
        let step = ((ri - r) / g * s).rem_euclid(m / g);
        r += l * step;
        l = l / g * m;
        r = r.rem_euclid(l);
    }
    Ok((r, l))
}

/// The unique `n` with `|n| <= bound` meeting every residue, if any.
pub fn crt_reconstruct(residues: &[(u64, i64)], bound: i64) -> Result<Option<i64>> {
    let (r, l) = crt_combine(residues)?;
    let b = bound as i128;
    let mut hits = Vec::new();
    let mut n = r - ((r + b) / l) * l;
    while n < -b {
        n += l;
    }
    while n <= b {
        hits.push(n as i64);
        n += l;
    }
    match hits.len() {
        0 => Ok(None),
        1 => Ok(Some(hits[0])),
        _ => Err(Error::CrtAmbiguous(hits)),
    }
}

/// Checks `|Y(W)| = sum over S with cl(S) = E of |Y°(W|S)|` and
/// `|Y°(W)| = |Y°(W^perp)|` exactly.
pub fn check_stratification_counts(w: &Configuration, p: u32, budget: u64) -> Result<StratificationReport> {
    let m: Matroid = w.matroid()?;
    if m.rank() == 0 {
        return Err(Error::Invalid("stratification needs positive rank".into()));
    }
    let exec = Exec::Sequential;
    let whole = count_points(w, p, budget, exec)?;
    let mut torus_sum = 0;
    let mut spanning_sets = 0;
    for s in 1..=m.ground() {
        let s: Mask = s;
        if !m.is_spanning(s) {
            continue;
        }
        spanning_sets += 1;
        torus_sum += if s == m.ground() {
            whole.n_ytorus
        } else {
            count_points(&w.restrict(s)?, p, budget, exec)?.n_ytorus
        };
    }
    if torus_sum != whole.n_y {
        return Err(Error::Identity(format!(
            "p = {p}: |Y| = {} but the torus strata sum to {torus_sum}",
            whole.n_y
        )));
    }
    let dual = count_points(&w.dual()?, p, budget, exec)?;
    if dual.n_ytorus != whole.n_ytorus {
        return Err(Error::Identity(format!(
            "p = {p}: torus parts differ, {} against {} for the dual",
            whole.n_ytorus, dual.n_ytorus
        )));
    }
    Ok(StratificationReport {
        p,
        n_y: whole.n_y,
        torus_sum,
        spanning_sets,
        n_ytorus: whole.n_ytorus,
        n_ytorus_dual: dual.n_ytorus,
    })
}

/// Elements of `s` as labels, for reports.
pub fn mask_labels(m: &Matroid, s: Mask) -> Vec<String> {
    ones(s).map(|i| m.labels()[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build;
    use crate::config::incidence_configuration;

    fn graph_counts(expr: &str, p: u32) -> PointCounts {
        count_points(&incidence_configuration(&build(expr).unwrap()), p, DEFAULT_BUDGET, Exec::default()).unwrap()
    }

    #[test]
    fn small_counts() {
        let c3 = graph_counts("C 3", 3);
        assert_eq!((c3.n_projective, c3.n_x, c3.n_y), (13, 4, 9));
        let k2 = graph_counts("T 1", 5);
        assert_eq!((k2.n_projective, k2.n_x, k2.n_y), (1, 0, 1));
        let b2 = graph_counts("B 2", 3);
        assert_eq!((b2.n_projective, b2.n_x, b2.n_y), (4, 1, 3));
        assert_eq!(b2.n_ytorus, 1);
    }

    #[test]
    fn decode_covers_all_representatives() {
        let (n, p) = (3, 3);
        let mut seen = std::collections::HashSet::new();
        let mut x = vec![0; n];
        for i in 0..projective_size(p, n) as u64 {
            decode(i, n, p, &mut x);
            assert_eq!(x.iter().find(|&&v| v != 0), Some(&1));
            seen.insert(x.clone());
        }
        assert_eq!(seen.len(), 13);
    }

    #[test]
    fn congruences() {
        let c3 = graph_counts("C 3", 3);
        assert!(check_congruence(&c3, 1).ok);
        let c4 = graph_counts("C 4", 5);
        assert_eq!(c4.n_projective, 156);
        assert_eq!(check_congruence(&c4, -1).observed, 3);
        assert!(check_congruence(&c4, c4.n_y as i64).ok);
    }

    #[test]
    fn crt() {
        assert_eq!(crt_reconstruct(&[(2, 1), (4, 3), (6, 5)], 10), Ok(Some(-1)));
        assert_eq!(crt_reconstruct(&[(2, 0), (4, 2)], 3), Err(Error::CrtAmbiguous(vec![-2, 2])));
        assert_eq!(crt_reconstruct(&[(2, 1), (4, 1)], 10), Err(Error::CrtAmbiguous(vec![-7, -3, 1, 5, 9])));
        assert_eq!(crt_reconstruct(&[(2, 1), (4, 2)], 10), Err(Error::CrtInconsistent));
        assert_eq!(crt_reconstruct(&[(12, 5)], 3), Ok(None));
        assert_eq!(crt_reconstruct(&[(2, 0), (4, 0), (6, 4), (10, 6), (12, 4)], 29), Ok(Some(16)));
    }

    #[test]
    fn stratification_small() {
        let w = incidence_configuration(&build("C 3").unwrap());
        let rep = check_stratification_counts(&w, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!((rep.n_y, rep.torus_sum), (9, 9));
        let w = incidence_configuration(&build("B 2").unwrap());
        let rep = check_stratification_counts(&w, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!((rep.n_y, rep.spanning_sets), (3, 3));
    }

    #[test]
    fn polynomial_path_matches_gram_path() {
        let w = incidence_configuration(&build("W 3").unwrap());
        let a = count_points(&w, 3, DEFAULT_BUDGET, Exec::Sequential).unwrap();
        let b = count_points_poly(&w.polynomial().unwrap(), 3, DEFAULT_BUDGET, Exec::Sequential).unwrap();
        assert_eq!(a, b);
    }
}
