//! States of the bosonic Fock spaces attached to a lattice. A monomial is a
//! product of creation modes applied to a ground state: a lattice-coset point
//! `e^μ` (integer modes) or a component of the irreducible module of the
//! finite group (half-integer modes). Modes are stored doubled so both
//! families live in one integer type: even doubled = integer mode, odd
//! doubled = half-integer mode.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::error::FockError;
use crate::intmat::{Int, Rat};
use crate::lattice::{DualVector, Lattice};

use super::scalar::Scalar;

/// Doubled mode index. `-3` means mode `-3/2`, `-2` means mode `-1`.
pub type Mode = i32;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Base {
    /// `e^μ`, `μ` in lattice-basis coordinates. Integer-mode sector.
    Point(DualVector),
    /// Basis component of the finite-group module. Half-integer-mode sector.
    Ground(usize),
}

/// `h_{j₁}(m₁)⋯h_{jₖ}(mₖ)·base` with all `mᵢ < 0`, factors kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub factors: Vec<(Mode, usize)>,
    pub base: Base,
}

impl Monomial {
    pub fn ground(index: usize) -> Self {
        Monomial {
            factors: Vec::new(),
            base: Base::Ground(index),
        }
    }

    pub fn point(mu: DualVector) -> Self {
        Monomial {
            factors: Vec::new(),
            base: Base::Point(mu),
        }
    }

    fn with_factor(&self, m: Mode, dir: usize) -> Monomial {
        let mut factors = self.factors.clone();
        let pos = factors
            .binary_search(&(m, dir))
            .unwrap_or_else(|p| p);
        factors.insert(pos, (m, dir));
        Monomial {
            factors,
            base: self.base.clone(),
        }
    }

    /// Conformal weight. Ground components weigh `rank/16`; coset points
    /// weigh `⟨μ,μ⟩/2`; each mode `−m` adds `m`.
    pub fn weight(&self, lat: &Lattice) -> Rat {
        let mut w = match &self.base {
            Base::Point(mu) => {
                lat.norm(mu).expect("state dimension matches lattice") / Rat::from(Int::from(2))
            }
            Base::Ground(_) => Rat::new(Int::from(lat.rank() as i64), Int::from(16)),
        };
        for (m, _) in &self.factors {
            w += Rat::new(Int::from(-*m as i64), Int::from(2));
        }
        w
    }

    /// Largest annihilation mode (doubled) that can act nontrivially.
    pub fn max_mode(&self) -> Mode {
        self.factors.iter().map(|(m, _)| -m).max().unwrap_or(0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, j) in &self.factors {
            if m % 2 == 0 {
                write!(f, "a{}({})", j, m / 2)?;
            } else {
                write!(f, "a{}({}/2)", j, m)?;
            }
        }
        match &self.base {
            Base::Point(mu) => {
                let cs: Vec<String> = mu.coords.iter().map(|c| c.to_string()).collect();
                write!(f, "e({})", cs.join(","))
            }
            Base::Ground(t) => write!(f, "t{}", t),
        }
    }
}

/// Finite linear combination of monomials with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FockVector(pub BTreeMap<Monomial, Scalar>);

impl FockVector {
    pub fn zero() -> Self {
        FockVector(BTreeMap::new())
    }

    pub fn single(mono: Monomial, coeff: Scalar) -> Self {
        let mut v = FockVector::zero();
        v.add_term(mono, coeff);
        v
    }

    pub fn ground(index: usize) -> Self {
        FockVector::single(Monomial::ground(index), Scalar::one())
    }

    pub fn point(mu: DualVector) -> Self {
        FockVector::single(Monomial::point(mu), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.0.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, s: &Scalar) {
        for (mono, c) in &other.0 {
            self.add_term(mono.clone(), s * c);
        }
    }

    pub fn scale(&self, s: &Scalar) -> FockVector {
        let mut out = FockVector::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> FockVector {
        self.scale(&Scalar::from_rat(r.clone()))
    }

    /// Adjoin a sorted multiset of commuting creation factors to every term.
    pub fn append_factors(&self, extra: &[(Mode, usize)]) -> FockVector {
        if extra.is_empty() {
            return self.clone();
        }
        let mut out = FockVector::zero();
        for (mono, c) in &self.0 {
            let mut factors = Vec::with_capacity(mono.factors.len() + extra.len());
            let (mut i, mut j) = (0, 0);
            while i < mono.factors.len() && j < extra.len() {
                if mono.factors[i] <= extra[j] {
                    factors.push(mono.factors[i]);
                    i += 1;
                } else {
                    factors.push(extra[j]);
                    j += 1;
                }
            }
            factors.extend_from_slice(&mono.factors[i..]);
            factors.extend_from_slice(&extra[j..]);
            out.add_term(
                Monomial {
                    factors,
                    base: mono.base.clone(),
                },
                c.clone(),
            );
        }
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &-&Scalar::one());
        out
    }

    /// The common weight of all terms, or `None` when mixed or zero.
    pub fn homogeneous_weight(&self, lat: &Lattice) -> Option<Rat> {
        let mut wt: Option<Rat> = None;
        for mono in self.0.keys() {
            let w = mono.weight(lat);
            match &wt {
                None => wt = Some(w),
                Some(prev) if *prev == w => {}
                Some(_) => return None,
            }
        }
        wt
    }

    pub fn max_mode(&self) -> Mode {
        self.0.keys().map(|m| m.max_mode()).max().unwrap_or(0)
    }

    /// Largest total mode depth of any term; bounds the exponent drop an
    /// annihilation exponential can produce.
    pub fn mode_sum(&self) -> Rat {
        self.0
            .keys()
            .map(|mono| {
                mono.factors
                    .iter()
                    .map(|(m, _)| Rat::new(Int::from(-*m as i64), Int::from(2)))
                    .sum()
            })
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})·{}", c, mono)?;
        }
        Ok(())
    }
}

/// Apply one Heisenberg mode `α_j(m/2)` (doubled `m`). Commutation rule:
/// `[α_j(m), α_k(n)] = m⟨α_j,α_k⟩δ_{m+n,0}`; `α_j(0)e^μ = ⟨α_j,μ⟩e^μ`;
/// positive modes annihilate ground states.
pub fn heisenberg_apply(
    lat: &Lattice,
    m: Mode,
    dir: usize,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    let mut out = FockVector::zero();
    for (mono, coeff) in &v.0 {
        let parity_ok = match &mono.base {
            Base::Point(_) => m % 2 == 0,
            Base::Ground(_) => m % 2 != 0,
        };
        if !parity_ok {
            return Err(FockError::ModeParityMismatch);
        }
        if m < 0 {
            out.add_term(mono.with_factor(m, dir), coeff.clone());
        } else if m == 0 {
            if let Base::Point(mu) = &mono.base {
                let eig: Rat = lat.gram()[dir]
                    .iter()
                    .zip(&mu.coords)
                    .map(|(g, c)| Rat::from(g.clone()) * c)
                    .sum();
                if !eig.is_zero() {
                    out.add_term(mono.clone(), coeff.scale_rat(&eig));
                }
            }
        } else {
            // Annihilation: contract against each matching creation factor.
            for (pos, (fm, fd)) in mono.factors.iter().enumerate() {
                if *fm == -m {
                    let pairing = Rat::from(lat.gram()[dir][*fd].clone());
                    let bracket = Rat::new(Int::from(m as i64), Int::from(2)) * pairing;
                    if bracket.is_zero() {
                        continue;
                    }
                    let mut factors = mono.factors.clone();
                    factors.remove(pos);
                    out.add_term(
                        Monomial {
                            factors,
                            base: mono.base.clone(),
                        },
                        coeff.scale_rat(&bracket),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// `h(m)` for `h = Σ_j h_j α_j` given by rational coordinates.
pub fn heisenberg_apply_vec(
    lat: &Lattice,
    m: Mode,
    h: &DualVector,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    let mut out = FockVector::zero();
    for (j, hj) in h.coords.iter().enumerate() {
        if hj.is_zero() {
            continue;
        }
        let part = heisenberg_apply(lat, m, j, v)?;
        out.add_scaled(&part.scale_rat(hj), &Scalar::one());
    }
    Ok(out)
}

/// `Σ_{j,k} (G⁻¹)_{jk} α_j(m) α_k(n) v`, the metric contraction used by the
/// degree operators and the half-integer conjugation series.
pub fn pair_apply(
    lat: &Lattice,
    m: Mode,
    n: Mode,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    let d = lat.rank();
    let mut out = FockVector::zero();
    for k in 0..d {
        let inner = heisenberg_apply(lat, n, k, v)?;
        if inner.is_zero() {
            continue;
        }
        for j in 0..d {
            let w = lat.gram_inv()[j][k].clone();
            if w.is_zero() {
                continue;
            }
            let part = heisenberg_apply(lat, m, j, &inner)?;
            out.add_scaled(&part.scale_rat(&w), &Scalar::one());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_lattice_i64;

    fn rank1() -> Lattice {
        validate_lattice_i64(&[vec![2]]).unwrap()
    }

    #[test]
    fn commutator_on_vacuum() {
        // a(1)a(−1)e^0 = ⟨α,α⟩e^0 = 2e^0 for the norm-2 generator.
        let lat = rank1();
        let vac = FockVector::point(DualVector::zero(1));
        let up = heisenberg_apply(&lat, -2, 0, &vac).unwrap();
        let back = heisenberg_apply(&lat, 2, 0, &up).unwrap();
        assert_eq!(back, vac.scale_rat(&Rat::from(Int::from(2))));
    }

    #[test]
    fn zero_mode_eigenvalue() {
        // a(0)e^μ = ⟨α,μ⟩e^μ with μ = α/2: eigenvalue 1.
        let lat = rank1();
        let pt = FockVector::point(DualVector::from_ratios(&[(1, 2)]));
        let z = heisenberg_apply(&lat, 0, 0, &pt).unwrap();
        assert_eq!(z, pt);
    }

    #[test]
    fn twisted_annihilation_and_parity() {
        let lat = rank1();
        let t = FockVector::ground(0);
        // a(1/2)t = 0.
        assert!(heisenberg_apply(&lat, 1, 0, &t).unwrap().is_zero());
        // a(1/2)a(−1/2)t = (1/2)·2·t = t.
        let up = heisenberg_apply(&lat, -1, 0, &t).unwrap();
        let back = heisenberg_apply(&lat, 1, 0, &up).unwrap();
        assert_eq!(back, t);
        // Integer modes are rejected on half-integer states.
        assert!(matches!(
            heisenberg_apply(&lat, 2, 0, &t),
            Err(FockError::ModeParityMismatch)
        ));
    }

    #[test]
    fn repeated_factor_multiplicity() {
        // a(1)a(−1)²e^0 = 2·2·a(−1)e^0.
        let lat = rank1();
        let vac = FockVector::point(DualVector::zero(1));
        let one = heisenberg_apply(&lat, -2, 0, &vac).unwrap();
        let two = heisenberg_apply(&lat, -2, 0, &one).unwrap();
        let back = heisenberg_apply(&lat, 2, 0, &two).unwrap();
        assert_eq!(back, one.scale_rat(&Rat::from(Int::from(4))));
    }

    #[test]
    fn weights() {
        let lat = rank1();
        let t = Monomial::ground(0);
        assert_eq!(t.weight(&lat), Rat::new(Int::from(1), Int::from(16)));
        let m = t.with_factor(-3, 0);
        assert_eq!(m.weight(&lat), Rat::new(Int::from(25), Int::from(16)));
        let p = Monomial::point(DualVector::from_i64(&[1]));
        assert_eq!(p.weight(&lat), Rat::from(Int::from(1)));
    }
}
