//! Exact integer linear algebra with overflow detection.

use crate::error::{Error, Result};

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn det(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = sub(mul(m[i][j], m[k][k])?, mul(m[i][k], m[k][j])?)?;
                m[i][j] = num / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Row-reduces `rows` in place to reduced echelon form with integer rows.
/// Returns the pivot column of each nonzero row, in row order.
fn echelon(rows: &mut Vec<Vec<i128>>, ncols: usize) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        normalize(&mut rows[r]);
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let (a, b) = (rows[r][c], rows[i][c]);
            let pivot = rows[r].clone();
            for (x, &y) in rows[i].iter_mut().zip(&pivot) {
                *x = sub(mul(a, *x)?, mul(b, y)?)?;
            }
            normalize(&mut rows[i]);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Ok(pivots)
}

fn widen(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn narrow(row: &[i128]) -> Result<Vec<i64>> {
    row.iter().map(|&x| i64::try_from(x).map_err(|_| Error::Overflow)).collect()
}

pub fn rank(rows: &[Vec<i64>], ncols: usize) -> Result<usize> {
    let mut m = widen(rows);
    Ok(echelon(&mut m, ncols)?.len())
}

/// Indices of a maximal set of linearly independent rows, chosen greedily.
pub fn independent_rows(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 0;
    for i in 0..rows.len() {
        let trial: Vec<Vec<i64>> = chosen.iter().chain(std::iter::once(&i)).map(|&j| rows[j].clone()).collect();
        let r = rank(&trial, ncols)?;
        if r > current {
            chosen.push(i);
            current = r;
        }
    }
    Ok(chosen)
}

/// Integer basis of the right kernel `{x : A x = 0}`, one vector per free
/// column, each primitive.
pub fn kernel_basis(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<Vec<i64>>> {
    let mut m = widen(rows);
    let pivots = echelon(&mut m, ncols)?;
    let mut scale = 1i128;
    for (j, &pc) in pivots.iter().enumerate() {
        let a = m[j][pc].abs();
        scale = mul(scale / gcd(scale, a), a)?;
    }
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0i128; ncols];
        x[f] = scale;
        for (j, &pc) in pivots.iter().enumerate() {
            x[pc] = -mul(m[j][f], scale / m[j][pc])?;
        }
        normalize(&mut x);
        basis.push(narrow(&x)?);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(vec![]).unwrap(), 1);
        assert_eq!(det(vec![vec![0, 1], vec![1, 0]]).unwrap(), -1);
        let v: Vec<Vec<i128>> = (1..=4).map(|x: i128| (0..4).map(|k| x.pow(k)).collect()).collect();
        // Vandermonde: product of differences 1*2*3*1*2*1
        assert_eq!(det(v).unwrap(), 12);
        assert_eq!(det(vec![vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i128::MAX / 2;
        assert_eq!(det(vec![vec![big, 3], vec![5, big]]), Err(Error::Overflow));
    }

    #[test]
    fn kernel_of_incidence() {
        // triangle incidence without one vertex row
        let rows = vec![vec![-1, 0, 1], vec![1, -1, 0]];
        let k = kernel_basis(&rows, 3).unwrap();
        assert_eq!(k.len(), 1);
        for r in &rows {
            assert_eq!(r.iter().zip(&k[0]).map(|(a, b)| a * b).sum::<i64>(), 0);
        }
        assert_eq!(rank(&rows, 3).unwrap(), 2);
        assert_eq!(independent_rows(&[vec![1, 1], vec![2, 2], vec![0, 1]], 2).unwrap(), vec![0, 2]);
    }
}
