//! Dense linear algebra over a [`Field`]: row reduction, inverses, kernels.

use crate::field::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row-echelon form. Zero rows are dropped; the pivot column of
/// each remaining row is returned alongside.
pub fn rref(field: &Field, mut rows: Matrix) -> (Matrix, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &p) in row[c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                *x = field.sub(*x, field.mul(f, p));
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    rref(field, rows.to_vec()).0.len()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect()).collect()
}

pub fn inverse(field: &Field, m: &[Vec<Elem>]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m.iter().zip(identity(n)).map(|(row, id)| row.iter().copied().chain(id).collect()).collect();
    let (red, pivots) = rref(field, aug);
    if red.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(field: &Field, m: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    m.iter().map(|row| row.iter().zip(v).fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))).collect()
}

pub fn mat_mul(field: &Field, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(Elem::ZERO, |acc, (&x, brow)| field.add(acc, field.mul(x, brow[j]))))
                .collect()
        })
        .collect()
}

/// Basis of `{ v : rows * v = 0 }` in `ncols` unknowns.
pub fn kernel(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Matrix {
    let (red, pivots) = rref(field, rows.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Elem::ZERO; ncols];
            v[f] = Elem::ONE;
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = field.neg(row[f]);
            }
            v
        })
        .collect()
}

pub fn dot(field: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_kernel_over_f3() {
        let f = Field::prime(3).unwrap();
        let e = |v: &[u32]| v.iter().map(|&x| Elem(x)).collect::<Vec<_>>();
        let m = vec![e(&[1, 2, 0]), e(&[0, 1, 1]), e(&[2, 0, 1])];
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(3));
        let sing = vec![e(&[1, 1, 0]), e(&[2, 2, 0]), e(&[0, 0, 1])];
        assert!(inverse(&f, &sing).is_none());
        let k = kernel(&f, &sing, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&f, &sing, &k[0]).iter().all(|x| x.is_zero()));
        assert_eq!(rank(&f, &sing), 2);
    }
}
