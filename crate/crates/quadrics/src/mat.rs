//! Dense exact linear algebra over any [`Field`], used at the small sizes
//! that arise from Gram matrices and spaces of linear forms.

use crate::scalar::Field;

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// column indices in order.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].f_is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::f_one().f_div(&m[r][c]);
        for j in c..cols {
            m[r][j] = m[r][j].f_mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].f_is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = factor.f_mul(&m[r][j]);
                    m[i][j] = m[i][j].f_sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of the right kernel `{v : M v = 0}`; `cols` disambiguates the
/// width when `m` has no rows.
pub fn kernel_basis<F: Field>(m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let mut basis = Vec::new();
    let mut piv_of_col = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        piv_of_col[c] = Some(r);
    }
    for free in 0..cols {
        if piv_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![F::f_zero(); cols];
        v[free] = F::f_one();
        for (c, piv) in piv_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[c] = w[*r][free].f_neg();
            }
        }
        basis.push(v);
    }
    basis
}

/// One solution of `M x = b`, if consistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut aug: Matrix<F> = (0..rows)
        .map(|i| {
            let mut row = m[i].clone();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last().is_some_and(|&c| c == cols) {
        return None;
    }
    let mut x = vec![F::f_zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn invert<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let mut aug: Matrix<F> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            for j in 0..n {
                row.push(if i == j { F::f_one() } else { F::f_zero() });
            }
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some((0..n).map(|i| aug[i][n..].to_vec()).collect())
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::f_zero();
                    for k in 0..inner {
                        acc = acc.f_add(&a[i][k].f_mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Matrix<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            let mut acc = F::f_zero();
            for (x, y) in row.iter().zip(v) {
                acc = acc.f_add(&x.f_mul(y));
            }
            acc
        })
        .collect()
}

pub fn transpose<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    (0..cols).map(|j| (0..rows).map(|i| a[i][j].clone()).collect()).collect()
}

/// Congruence transform `B^T M B` for a symmetric `M`.
pub fn congruence<F: Field>(bt: &Matrix<F>, m: &Matrix<F>) -> Matrix<F> {
    let bm = mat_mul(bt, m);
    mat_mul(&bm, &transpose(bt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rat};

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel_agree_on_dimension() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&a, &k[0]).iter().all(|x| x == &Rat::from_integer(0.into())));
    }

    #[test]
    fn solve_recovers_consistent_systems() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let b = vec![rat_int(4), rat_int(9)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_vec(&a, &x), b);
        let inconsistent = m(&[&[1, 1], &[1, 1]]);
        assert!(solve(&inconsistent, &[rat_int(1), rat_int(2)]).is_none());
    }

    #[test]
    fn invert_round_trips() {
        let a = m(&[&[1, 2], &[3, 5]]);
        let inv = invert(&a).unwrap();
        let prod = mat_mul(&a, &inv);
        assert_eq!(prod, m(&[&[1, 0], &[0, 1]]));
        assert!(invert(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
