//! Gaussian rationals `Q(i)` and small dense matrices over them.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{One, Zero};

use crate::intmat::Rat;

/// `re + im·i` with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gauss {
    pub re: Rat,
    pub im: Rat,
}

impl Gauss {
    pub fn new(re: Rat, im: Rat) -> Self {
        Gauss { re, im }
    }

    pub fn zero() -> Self {
        Gauss {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        Gauss {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Gauss {
            re: r,
            im: Rat::zero(),
        }
    }

    /// `i^k` for `k` mod 4.
    pub fn i_pow(k: u8) -> Self {
        match k % 4 {
            0 => Gauss::one(),
            1 => Gauss::new(Rat::zero(), Rat::one()),
            2 => Gauss::new(-Rat::one(), Rat::zero()),
            _ => Gauss::new(Rat::zero(), -Rat::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|²` as a rational.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(Gauss {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }
}

impl Add for &Gauss {
    type Output = Gauss;
    fn add(self, rhs: &Gauss) -> Gauss {
        Gauss {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Gauss {
    type Output = Gauss;
    fn sub(self, rhs: &Gauss) -> Gauss {
        Gauss {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, rhs: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl AddAssign<&Gauss> for Gauss {
    fn add_assign(&mut self, rhs: &Gauss) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Dense matrix over `Q(i)`, row major.
pub type GMatrix = Vec<Vec<Gauss>>;

pub fn gmat_zero(n: usize, m: usize) -> GMatrix {
    vec![vec![Gauss::zero(); m]; n]
}

pub fn gmat_identity(n: usize) -> GMatrix {
    let mut m = gmat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Gauss::one();
    }
    m
}

pub fn gmat_mul(a: &GMatrix, b: &GMatrix) -> GMatrix {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = gmat_zero(n, m);
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[t][j].is_zero() {
                    let p = &a[i][t] * &b[t][j];
                    out[i][j] += &p;
                }
            }
        }
    }
    out
}

pub fn gmat_scale(a: &GMatrix, s: &Gauss) -> GMatrix {
    a.iter()
        .map(|row| row.iter().map(|x| x * s).collect())
        .collect()
}

pub fn gmat_eq(a: &GMatrix, b: &GMatrix) -> bool {
    a == b
}

/// Rank by Gaussian elimination; exact.
pub fn gmat_rank(a: &GMatrix) -> usize {
    let mut m = a.to_vec();
    let (nrows, ncols) = (m.len(), m[0].len());
    let mut rank = 0;
    for c in 0..ncols {
        let piv = (rank..nrows).find(|&r| !m[r][c].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = m[rank][c].inv().unwrap();
        for j in 0..ncols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..ncols {
                    let s = &m[rank][j] * &f;
                    m[r][j] = &m[r][j] - &s;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::rat;

    #[test]
    fn arithmetic() {
        let i = Gauss::i_pow(1);
        assert_eq!(&i * &i, Gauss::i_pow(2));
        assert_eq!(Gauss::i_pow(3), i.conj());
        let z = Gauss::new(rat(1, 2), rat(-1, 3));
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, Gauss::one());
    }

    #[test]
    fn rank_of_singular() {
        let m = vec![
            vec![Gauss::one(), Gauss::i_pow(1)],
            vec![Gauss::i_pow(3), Gauss::one()],
        ];
        // row2 = -i * row1
        assert_eq!(gmat_rank(&m), 1);
        assert_eq!(gmat_rank(&gmat_identity(3)), 3);
    }
}
