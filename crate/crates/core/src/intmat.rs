//! Exact integer matrix algorithms: fraction-free determinants, Smith
//! normal form with unimodular transforms, rational inverses.
//!
//! Everything here works over `BigInt`/`BigRational`; no floating point.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Determinant via the Bareiss fraction-free algorithm.
pub fn bareiss_det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut prev = Int::one();
    let mut sign = 1i32;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // pivot search below row k
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Leading principal minors, minor k is det of the top-left k×k block.
pub fn leading_minors(m: &[Vec<Int>]) -> Vec<Int> {
    (1..=m.len())
        .map(|k| {
            let sub: Vec<Vec<Int>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            bareiss_det(&sub)
        })
        .collect()
}

/// Smith normal form: returns (u, d, v) with `u * m * v = d`, `u`, `v`
/// unimodular and `d` diagonal with d[0] | d[1] | ... (non-negative).
pub fn smith_normal_form(m: &[Vec<Int>]) -> (Vec<Vec<Int>>, Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let n = m.len();
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut u = identity(n);
    let mut v = identity(n);

    for t in 0..n {
        loop {
            // find pivot: smallest nonzero |entry| in the remaining block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => return (u, a, v), // remaining block zero
            };
            if pi != t {
                a.swap(t, pi);
                u.swap(t, pi);
            }
            if pj != t {
                swap_cols(&mut a, t, pj);
                swap_cols(&mut v, t, pj);
            }
            // clear row t and column t
            let mut dirty = false;
            for i in t + 1..n {
                if !a[i][t].is_zero() {
                    let q = div_round(&a[i][t], &a[t][t]);
                    row_sub(&mut a, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = div_round(&a[t][j], &a[t][t]);
                    col_sub(&mut a, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            if a.iter().skip(t + 1).any(|r| !r[t].is_zero())
                || a[t].iter().skip(t + 1).any(|x| !x.is_zero())
            {
                continue;
            }
            // enforce divisibility: a[t][t] must divide every later entry
            let mut fixed = true;
            'scan: for i in t + 1..n {
                for j in t + 1..n {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        // add row i to row t, restart reduction at t
                        for k in 0..n {
                            let x = a[i][k].clone();
                            a[t][k] += x;
                            let y = u[i][k].clone();
                            u[t][k] += y;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t].is_negative() {
            for k in 0..n {
                a[t][k] = -a[t][k].clone();
                u[t][k] = -u[t][k].clone();
            }
        }
    }
    (u, a, v)
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

fn swap_cols(a: &mut [Vec<Int>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn row_sub(a: &mut [Vec<Int>], i: usize, t: usize, q: &Int) {
    let n = a[0].len();
    for k in 0..n {
        let x = &a[t][k] * q;
        a[i][k] -= x;
    }
}

fn col_sub(a: &mut [Vec<Int>], j: usize, t: usize, q: &Int) {
    for row in a.iter_mut() {
        let x = &row[t] * q;
        row[j] -= x;
    }
}

/// Rounded division, keeps remainders small during SNF reduction.
fn div_round(a: &Int, b: &Int) -> Int {
    let two = int(2);
    let (q, r) = (a / b, a % b);
    if &(r.abs() * &two) > &b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + Int::one()
        } else {
            q - Int::one()
        }
    } else {
        q
    }
}

/// Exact inverse of an integer matrix as a rational matrix.
pub fn rational_inverse(m: &[Vec<Int>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|r| r.iter().map(|x| Rat::from(x.clone())).collect())
        .collect();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let x = &a[col][j] * &f;
                    a[r][j] -= x;
                    let y = &inv[col][j] * &f;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

/// `m * v` for an integer matrix and rational vector.
pub fn mat_vec_rat(m: &[Vec<Int>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(a, b)| Rat::from(a.clone()) * b)
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(bareiss_det(&im(&[&[2]])), int(2));
        assert_eq!(bareiss_det(&im(&[&[2, 1], &[1, 2]])), int(3));
        assert_eq!(bareiss_det(&im(&[&[2, 0], &[0, 4]])), int(8));
        assert_eq!(bareiss_det(&im(&[&[0, 1], &[1, 0]])), int(-1));
    }

    #[test]
    fn snf_diag_and_transforms() {
        let m = im(&[&[2, 0], &[0, 4]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(d[0][0], int(2));
        assert_eq!(d[1][1], int(4));
        // u*m*v == d
        let prod = mat_mul(&mat_mul(&u, &m), &v);
        assert_eq!(prod, d);
        // u, v unimodular
        assert_eq!(bareiss_det(&u).abs(), Int::one());
        assert_eq!(bareiss_det(&v).abs(), Int::one());
    }

    #[test]
    fn snf_divisibility() {
        let m = im(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        let (u, d, v) = smith_normal_form(&m);
        let prod = mat_mul(&mat_mul(&u, &m), &v);
        assert_eq!(prod, d);
        let diag: Vec<Int> = (0..3).map(|i| d[i][i].clone()).collect();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        let det_prod: Int = diag.iter().product();
        assert_eq!(det_prod.abs(), bareiss_det(&m).abs());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = im(&[&[2, 1], &[1, 2]]);
        let inv = rational_inverse(&m).unwrap();
        // m * inv == I
        for i in 0..2 {
            for j in 0..2 {
                let s: Rat = (0..2)
                    .map(|k| Rat::from(m[i][k].clone()) * &inv[k][j])
                    .sum();
                let expect = if i == j { Rat::one() } else { Rat::zero() };
                assert_eq!(s, expect);
            }
        }
    }

    pub fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> Vec<Vec<Int>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }
}
