//! The bimultiplicative 2-cocycle `ε : L × L → {±1}` behind the central
//! extension of the lattice, together with a randomized identity checker.
//!
//! The section is fixed once and for all: `ε(αᵢ, αⱼ) = (−1)^{⟨αᵢ,αⱼ⟩}` for
//! `i > j` and `+1` for `i ≤ j`, extended bimultiplicatively. Its exponent
//! matrix `B` is lower triangular with `Bᵢⱼ ≡ Gᵢⱼ (mod 2)`, so evaluation
//! reduces coordinates mod 2 first.

use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::LatticeError;
use crate::f2::dot;
use crate::intmat::Int;
use crate::lattice::Lattice;
use crate::report::{CheckResult, Report};

/// Sign-valued cocycle represented by its exponent matrix over F₂.
#[derive(Debug, Clone)]
pub struct BilinearCocycle {
    rank: usize,
    /// Row `i` of the exponent matrix, packed into bits.
    rows: Vec<u64>,
    /// `G mod 2`, used for the commutator identity.
    gram_mod2: Vec<u64>,
}

pub fn build_cocycle(lat: &Lattice) -> BilinearCocycle {
    let d = lat.rank();
    let mut rows = vec![0u64; d];
    let mut gram_mod2 = vec![0u64; d];
    for i in 0..d {
        for j in 0..d {
            if (&lat.gram()[i][j] % 2i32).abs() == Int::from(1) {
                gram_mod2[i] |= 1 << j;
                if i > j {
                    rows[i] |= 1 << j;
                }
            }
        }
    }
    BilinearCocycle {
        rank: d,
        rows,
        gram_mod2,
    }
}

impl BilinearCocycle {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exponent matrix rows over F₂.
    pub fn exponent_rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn gram_mod2(&self) -> &[u64] {
        &self.gram_mod2
    }

    /// `αᵀ B β` over F₂ for already-reduced vectors.
    pub fn exponent_f2(&self, a: u64, b: u64) -> bool {
        let mut acc = false;
        for i in 0..self.rank {
            if a >> i & 1 == 1 {
                acc ^= dot(self.rows[i], b);
            }
        }
        acc
    }

    /// `⟨ā, b̄⟩ mod 2` for reduced vectors, i.e. the commutator exponent.
    pub fn commutator_f2(&self, a: u64, b: u64) -> bool {
        let mut acc = false;
        for i in 0..self.rank {
            if a >> i & 1 == 1 {
                acc ^= dot(self.gram_mod2[i], b);
            }
        }
        acc
    }

    fn reduce(&self, v: &[Int]) -> Result<u64, LatticeError> {
        if v.len() != self.rank {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        let mut out = 0u64;
        for (i, c) in v.iter().enumerate() {
            if (c % 2i32).abs() == Int::from(1) {
                out |= 1 << i;
            }
        }
        Ok(out)
    }

    /// `ε(α, β) ∈ {+1, −1}` for integer-coordinate vectors.
    pub fn eval_epsilon(&self, a: &[Int], b: &[Int]) -> Result<i32, LatticeError> {
        let (ar, br) = (self.reduce(a)?, self.reduce(b)?);
        Ok(if self.exponent_f2(ar, br) { -1 } else { 1 })
    }

    /// `ε` on already-reduced F₂ vectors.
    pub fn eval_epsilon_f2(&self, a: u64, b: u64) -> i32 {
        if self.exponent_f2(a, b) {
            -1
        } else {
            1
        }
    }
}

/// Randomized check of the cocycle identity, the commutator identity and
/// the normalization at zero. Failures are report content, not errors.
pub fn verify_cocycle_identities(
    lat: &Lattice,
    c: &BilinearCocycle,
    trials: u64,
    seed: u64,
) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = lat.rank();
    let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<Int> {
        (0..d).map(|_| Int::from(rng.gen_range(-8i64..=8))).collect()
    };
    let mut report = Report::new();
    let mut cocycle_fail = None;
    let mut commutator_fail = None;
    let mut normalization_fail = None;
    for _ in 0..trials {
        let a = rand_vec(&mut rng);
        let b = rand_vec(&mut rng);
        let g = rand_vec(&mut rng);
        let ab: Vec<Int> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let bg: Vec<Int> = b.iter().zip(&g).map(|(x, y)| x + y).collect();
        // ε(α,β) ε(α+β,γ) = ε(β,γ) ε(α,β+γ)
        let lhs = c.eval_epsilon(&a, &b).unwrap() * c.eval_epsilon(&ab, &g).unwrap();
        let rhs = c.eval_epsilon(&b, &g).unwrap() * c.eval_epsilon(&a, &bg).unwrap();
        if lhs != rhs && cocycle_fail.is_none() {
            cocycle_fail = Some(format!("a={a:?} b={b:?} g={g:?}"));
        }
        // ε(α,β) ε(β,α)⁻¹ = (−1)^{⟨α,β⟩}
        let prod = c.eval_epsilon(&a, &b).unwrap() * c.eval_epsilon(&b, &a).unwrap();
        let pairing: Int = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| &a[i] * &lat.gram()[i][j] * &b[j])
                    .sum::<Int>()
            })
            .sum();
        let expect = if (&pairing % 2i32).abs() == Int::from(1) {
            -1
        } else {
            1
        };
        if prod != expect && commutator_fail.is_none() {
            commutator_fail = Some(format!("a={a:?} b={b:?}"));
        }
        // ε(α, 0) = ε(0, α) = 1
        let zero = vec![Int::from(0); d];
        if (c.eval_epsilon(&a, &zero).unwrap() != 1 || c.eval_epsilon(&zero, &a).unwrap() != 1)
            && normalization_fail.is_none()
        {
            normalization_fail = Some(format!("a={a:?}"));
        }
    }
    report.push(CheckResult::from_option("cocycle identity", cocycle_fail));
    report.push(CheckResult::from_option(
        "commutator identity",
        commutator_fail,
    ));
    report.push(CheckResult::from_option(
        "normalization at zero",
        normalization_fail,
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_lattice_i64;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn exponent_matrix_examples() {
        let l = validate_lattice_i64(&[vec![2]]).unwrap();
        let c = build_cocycle(&l);
        assert_eq!(c.exponent_rows(), &[0]);

        let a2 = validate_lattice_i64(&[vec![2, 1], vec![1, 2]]).unwrap();
        let c = build_cocycle(&a2);
        // B = [[0,0],[1,0]]
        assert_eq!(c.exponent_rows(), &[0b00, 0b01]);

        let sq = validate_lattice_i64(&[vec![2, 0], vec![0, 2]]).unwrap();
        let c = build_cocycle(&sq);
        assert_eq!(c.exponent_rows(), &[0, 0]);
    }

    #[test]
    fn epsilon_values_a2() {
        let a2 = validate_lattice_i64(&[vec![2, 1], vec![1, 2]]).unwrap();
        let c = build_cocycle(&a2);
        assert_eq!(c.eval_epsilon(&iv(&[0, 1]), &iv(&[1, 0])).unwrap(), -1);
        assert_eq!(c.eval_epsilon(&iv(&[1, 0]), &iv(&[0, 1])).unwrap(), 1);
        assert_eq!(c.eval_epsilon(&iv(&[5, -3]), &iv(&[0, 0])).unwrap(), 1);
        assert!(c.eval_epsilon(&iv(&[1]), &iv(&[0, 1])).is_err());
    }

    #[test]
    fn identities_hold_on_random_triples() {
        for rows in [
            vec![vec![2]],
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![2, 0], vec![0, 4]],
        ] {
            let l = validate_lattice_i64(&rows).unwrap();
            let c = build_cocycle(&l);
            let report = verify_cocycle_identities(&l, &c, 500, 7);
            assert!(report.all_pass(), "{report}");
        }
    }

    #[test]
    fn descends_to_l_mod_2l() {
        let a2 = validate_lattice_i64(&[vec![2, 1], vec![1, 2]]).unwrap();
        let c = build_cocycle(&a2);
        let a = iv(&[1, 0]);
        let b = iv(&[1, 1]);
        let shifted = iv(&[1 + 2 * 3, 0 - 2 * 5]);
        assert_eq!(
            c.eval_epsilon(&a, &b).unwrap(),
            c.eval_epsilon(&shifted, &b).unwrap()
        );
    }
}
