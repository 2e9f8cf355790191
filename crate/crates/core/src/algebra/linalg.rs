//! Dense Gaussian elimination over a [`Field`].

use alloc::vec::Vec;

use super::{AlgebraError, Field, Ring, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(field: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(x, &field.mul(&f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(field, &mut a).len()
}

/// Basis of the right kernel `{x : m·x = 0}`.
pub fn kernel(field: &Field, m: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = alloc::vec![field.zero(); cols];
            v[f] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&a[row][f]);
            }
            v
        })
        .collect()
}

/// One solution of `m·x = b`, or `None` when inconsistent.
pub fn solve(field: &Field, m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut a: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut a);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = alloc::vec![field.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = a[row][cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix.
pub fn inverse(field: &Field, m: &Matrix) -> Result<Matrix, AlgebraError> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(field, &mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(AlgebraError::DivisionByZero);
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(field: &Field, m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                field.add(&acc, &field.mul(a, b))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|x| Field::Rationals.from_i64(*x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let f = Field::Rationals;
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&f, &m), 2);
        let k = kernel(&f, &m, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&f, &m, &k[0]).iter().all(|x| f.is_zero(x)));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::Prime(7);
        let m: Matrix = [[2, 1], [1, 1]]
            .iter()
            .map(|r| r.iter().map(|x| f.from_i64(*x)).collect())
            .collect();
        let inv = inverse(&f, &m).unwrap();
        let e0 = mat_vec(&f, &m, &[inv[0][0].clone(), inv[1][0].clone()]);
        assert_eq!(e0, alloc::vec![f.one(), f.zero()]);
        assert!(inverse(&Field::Rationals, &q(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn inconsistent_system() {
        let f = Field::Rationals;
        let m = q(&[&[1, 1], &[1, 1]]);
        assert!(solve(&f, &m, &[f.one(), f.zero()]).is_none());
        assert!(solve(&f, &m, &[f.one(), f.one()]).is_some());
    }
}
