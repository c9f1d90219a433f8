//! Small exact linear algebra over `Q`, `Z` and `F_p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

/// Gauss–Jordan solve of `a x = b`; `None` when `a` is singular.
pub fn solve(a: &Matrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

pub fn determinant(a: &Matrix) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - delta;
            }
        }
    }
    det
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigRational> = (0..n)
            .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect();
        cols.push(solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Determinants of the leading principal minors, smallest first.
pub fn leading_minors(a: &Matrix) -> Vec<BigRational> {
    (1..=a.len())
        .map(|k| {
            let sub: Matrix = a[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Sylvester's criterion.
pub fn is_positive_definite(a: &Matrix) -> bool {
    leading_minors(a).iter().all(|d| d > &BigRational::zero())
}

pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Rank of a matrix over `F_p`.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let ncols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in m.iter_mut() {
        r.resize(ncols, 0);
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_inv_u64(m[rank][col], p);
        for c in 0..ncols {
            m[rank][c] = (m[rank][c] as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    let sub = (f as u128 * m[rank][c] as u128 % p as u128) as u64;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn solve_and_det() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(3, 1)]];
        let x = solve(&a, &[rat(3, 1), rat(5, 1)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert_eq!(determinant(&a), rat(5, 1));
        let sing = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert!(solve(&sing, &[rat(0, 1), rat(0, 1)]).is_none());
        assert!(is_positive_definite(&a));
        assert!(!is_positive_definite(&sing));
    }

    #[test]
    fn bareiss_matches_rational() {
        let m: Vec<Vec<i64>> = vec![vec![0, 2, 1], vec![3, -1, 4], vec![5, 9, -2]];
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let q: Matrix = m.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
        assert_eq!(BigRational::from_integer(bareiss_determinant(big)), determinant(&q));
    }

    #[test]
    fn rank_over_fp() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 5]], 7), 2);
        assert_eq!(rank_mod_p(&[vec![3, 6]], 3), 0);
    }
}
