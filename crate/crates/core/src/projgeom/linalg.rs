//! Dense linear algebra over a [`Field`].

use crate::gf::{Fe, Field};

pub type Matrix = Vec<Vec<Fe>>;

/// Reduced row echelon form with zero rows dropped.
pub fn rref(f: &Field, mut rows: Matrix) -> Matrix {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv_nz(rows[rank][col]);
        for v in rows[rank].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let c = row[col];
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v = f.sub(*v, f.mul(c, p));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

pub fn rank(f: &Field, rows: Matrix) -> usize {
    rref(f, rows).len()
}

/// Pivot column of each row of a matrix in reduced echelon form.
pub fn pivots(rows: &Matrix) -> Vec<usize> {
    rows.iter()
        .map(|r| r.iter().position(|v| !v.is_zero()).expect("echelon rows are nonzero"))
        .collect()
}

/// Basis of `{v : rows . v = 0}` for vectors of length `ncols`.
pub fn nullspace(f: &Field, rows: Matrix, ncols: usize) -> Matrix {
    let r = rref(f, rows);
    let piv = pivots(&r);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (row, &pc) in r.iter().zip(&piv) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }).collect())
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn mat_mul(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).fold(Fe::ZERO, |acc, (&x, brow)| f.add(acc, f.mul(x, brow[j]))))
                .collect()
        })
        .collect()
}

/// `A v` for a column vector `v`.
pub fn mat_vec(f: &Field, a: &Matrix, v: &[Fe]) -> Vec<Fe> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Fe::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y))))
        .collect()
}

pub fn inverse(f: &Field, a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().copied().chain(id).collect())
        .collect();
    let r = rref(f, aug);
    if r.len() < n || pivots(&r).iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `A x = b` for square invertible `A`.
pub fn solve(f: &Field, a: &Matrix, b: &[Fe]) -> Option<Vec<Fe>> {
    inverse(f, a).map(|inv| mat_vec(f, &inv, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let f = Field::prime(5).unwrap();
        let a: Matrix = vec![vec![Fe(1), Fe(2)], vec![Fe(3), Fe(4)]];
        let inv = inverse(&f, &a).unwrap();
        assert_eq!(mat_mul(&f, &a, &inv), identity(2));
        let sing: Matrix = vec![vec![Fe(1), Fe(2)], vec![Fe(2), Fe(4)]];
        assert!(inverse(&f, &sing).is_none());
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let f = Field::prime(3).unwrap();
        let rows: Matrix = vec![vec![Fe(1), Fe(1), Fe(0), Fe(2)], vec![Fe(0), Fe(1), Fe(1), Fe(1)]];
        let ns = nullspace(&f, rows.clone(), 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&f, &rows, v).iter().all(|x| x.is_zero()));
        }
    }
}
