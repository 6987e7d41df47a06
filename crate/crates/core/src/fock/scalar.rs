//! Coefficient ring for the graded computations: `a + b·√2` with `a, b`
//! Gaussian rationals. √2 enters only through the prefactor `2^{−⟨λ,λ⟩}`
//! with `⟨λ,λ⟩ ∈ ½Z`, so this closure suffices and stays exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::gauss::Gauss;
use crate::intmat::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    pub a: Gauss,
    pub b: Gauss,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            a: Gauss::zero(),
            b: Gauss::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            a: Gauss::one(),
            b: Gauss::zero(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar {
            a: Gauss::from_rat(r),
            b: Gauss::zero(),
        }
    }

    pub fn from_gauss(g: Gauss) -> Self {
        Scalar {
            a: g,
            b: Gauss::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `√2^k` for any integer `k` (negative allowed: `√2⁻¹ = √2/2`).
    pub fn sqrt2_pow(k: i64) -> Self {
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let two = Rat::from(Int::from(2));
        let mut p = Rat::from(Int::from(1));
        if half >= 0 {
            for _ in 0..half {
                p *= &two;
            }
        } else {
            for _ in 0..(-half) {
                p /= &two;
            }
        }
        if odd {
            Scalar {
                a: Gauss::zero(),
                b: Gauss::from_rat(p),
            }
        } else {
            Scalar {
                a: Gauss::from_rat(p),
                b: Gauss::zero(),
            }
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        let g = Gauss::from_rat(r.clone());
        Scalar {
            a: &self.a * &g,
            b: &self.b * &g,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let two = Gauss::from_rat(Rat::from(Int::from(2)));
        Scalar {
            a: &(&self.a * &rhs.a) + &(&two * &(&self.b * &rhs.b)),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})√2", self.b)
        } else {
            write!(f, "{}+({})√2", self.a, self.b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_powers() {
        let r = Scalar::sqrt2_pow(2);
        assert_eq!(r, Scalar::from_rat(Rat::from(Int::from(2))));
        // √2 · √2⁻¹ = 1
        let p = &Scalar::sqrt2_pow(1) * &Scalar::sqrt2_pow(-1);
        assert_eq!(p, Scalar::one());
        // (√2⁻¹)² = 1/2
        let h = &Scalar::sqrt2_pow(-1) * &Scalar::sqrt2_pow(-1);
        assert_eq!(
            h,
            Scalar::from_rat(Rat::new(Int::from(1), Int::from(2)))
        );
    }

    #[test]
    fn ring_ops() {
        let x = Scalar {
            a: Gauss::i_pow(1),
            b: Gauss::one(),
        };
        // (i + √2)(i + √2) = −1 + 2 + 2i√2 = 1 + 2i√2
        let sq = &x * &x;
        assert_eq!(sq.a, Gauss::from_rat(Rat::from(Int::from(1))));
        let two_i = &Gauss::from_rat(Rat::from(Int::from(2))) * &Gauss::i_pow(1);
        assert_eq!(sq.b, two_i);
        assert!((&x - &x).is_zero());
    }
}
