//! Dense linear algebra over an exact field.

use std::collections::BTreeMap;

use super::field::{FieldSpec, Scalar};
use super::poly::{Monomial, Poly};

pub type Mat = Vec<Vec<Scalar>>;

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[i][j] - &(&f * &m[r][j]);
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : m v = 0}`.
pub fn kernel(m: &Mat, cols: usize, field: &FieldSpec) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(field); cols];
            v[f] = Scalar::one(field);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = a[row][f].neg();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, if consistent.
pub fn solve(m: &Mat, b: &[Scalar], field: &FieldSpec) -> Option<Vec<Scalar>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Mat = m.iter().zip(b).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(field); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn det(m: &Mat, field: &FieldSpec) -> Scalar {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Scalar::one(field);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Scalar::zero(field) };
        if p != c {
            a.swap(p, c);
            d = d.neg();
        }
        d = &d * &a[c][c];
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let v = &a[i][j] - &(&f * &a[c][j]);
                a[i][j] = v;
            }
        }
    }
    d
}

/// Coefficient vectors of polynomials over a shared monomial index.
pub fn coefficient_matrix(polys: &[Poly], field: &FieldSpec) -> (Mat, Vec<Monomial>) {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let k = index.len();
            index.entry(m.clone()).or_insert(k);
        }
    }
    let mut monos = vec![Vec::new(); index.len()];
    for (m, &k) in &index {
        monos[k] = m.clone();
    }
    let rows = polys
        .iter()
        .map(|p| {
            let mut row = vec![Scalar::zero(field); index.len()];
            for (m, c) in p.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect();
    (rows, monos)
}

/// Whether `f` is a `k`-linear combination of `rows`.
pub fn in_span(f: &Poly, rows: &[Poly], field: &FieldSpec) -> bool {
    let mut all: Vec<Poly> = rows.to_vec();
    all.push(f.clone());
    let (mat, _) = coefficient_matrix(&all, field);
    let base: Mat = mat[..rows.len()].to_vec();
    rank(&base) == rank(&mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| Scalar::from_i64(&FieldSpec::Q, x)).collect()).collect()
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a), 1);
        let k = kernel(&a, 3, &FieldSpec::Q);
        assert_eq!(k.len(), 2);
        for v in k {
            for row in &a {
                let s = row.iter().zip(&v).fold(Scalar::zero(&FieldSpec::Q), |acc, (x, y)| &acc + &(x * y));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn determinant_and_solve() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&a, &FieldSpec::Q), Scalar::from_i64(&FieldSpec::Q, 1));
        let b = vec![Scalar::from_i64(&FieldSpec::Q, 3), Scalar::from_i64(&FieldSpec::Q, 2)];
        let x = solve(&a, &b, &FieldSpec::Q).unwrap();
        assert_eq!(x, vec![Scalar::from_i64(&FieldSpec::Q, 1), Scalar::from_i64(&FieldSpec::Q, 1)]);
    }
}
