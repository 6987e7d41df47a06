//! Coefficients `c_{mn}` of the bivariate series
//! `−log( ((1+x)^{1/2} + (1+y)^{1/2}) / 2 )`, which conjugates integer-mode
//! operators into the half-integer sector. Computed by direct composition:
//! binomial square-root series, then the logarithm series, truncated by
//! total degree.

use num::Zero;

use crate::intmat::{Int, Rat};

type Poly2 = Vec<Vec<Rat>>;

fn poly_zero(deg: usize) -> Poly2 {
    vec![vec![Rat::zero(); deg + 1]; deg + 1]
}

fn poly_mul(a: &Poly2, b: &Poly2, deg: usize) -> Poly2 {
    let mut out = poly_zero(deg);
    for (i, row) in a.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() || i + j > deg {
                continue;
            }
            for (k, brow) in b.iter().enumerate() {
                if i + j + k > deg {
                    break;
                }
                for (l, d) in brow.iter().enumerate() {
                    if d.is_zero() || i + k + j + l > deg {
                        continue;
                    }
                    out[i + k][j + l] += c * d;
                }
            }
        }
    }
    out
}

/// `(1+t)^{1/2}` coefficients up to degree `deg`.
fn sqrt_series(deg: usize) -> Vec<Rat> {
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut c = Rat::from(Int::from(1));
    coeffs.push(c.clone());
    for k in 0..deg {
        // binom(1/2, k+1) = binom(1/2, k)·(1/2 − k)/(k+1)
        let num = Rat::new(Int::from(1), Int::from(2)) - Rat::from(Int::from(k as i64));
        c = c * num / Rat::from(Int::from((k + 1) as i64));
        coeffs.push(c.clone());
    }
    coeffs
}

/// Table `c[m][n]` for `m + n ≤ max_deg`; entries above the antidiagonal
/// stay zero.
pub fn delta_coefficients(max_deg: usize) -> Vec<Vec<Rat>> {
    let s = sqrt_series(max_deg);
    // u(x,y) = (s(x)+s(y))/2 − 1, constant term removed.
    let mut u = poly_zero(max_deg);
    let half = Rat::new(Int::from(1), Int::from(2));
    for k in 1..=max_deg {
        u[k][0] = &s[k] * &half;
        u[0][k] = &s[k] * &half;
    }
    // −log(1 + u) = Σ_{k≥1} (−1)^k u^k / k.
    let mut out = poly_zero(max_deg);
    let mut power = u.clone();
    for k in 1..=max_deg {
        let sign = if k % 2 == 1 { -1i64 } else { 1i64 };
        let w = Rat::new(Int::from(sign), Int::from(k as i64));
        for (i, row) in power.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out[i][j] += c * &w;
                }
            }
        }
        if k < max_deg {
            power = poly_mul(&power, &u, max_deg);
        }
    }
    out
}
