//! The finite quotient of the lattice central extension by
//! `K = {a⁻¹θ(a)}`: a 2-group of order `2^{d+1}` whose elements are a
//! sign (exponent of κ) together with an image in `L/2L`, with the
//! product twisted by the cocycle exponent matrix.

use num::Signed;

use crate::cocycle::BilinearCocycle;
use crate::error::{GroupError, LatticeError};
use crate::f2::{self, F2Matrix};
use crate::intmat::{Int, Rat};
use crate::lattice::{DualVector, Lattice};

pub const DEFAULT_RANK_CAP: usize = 10;

/// Element of the quotient group: `κ^sign · e_vec K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub sign: bool,
    pub vec: u64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        sign: false,
        vec: 0,
    };
    pub const KAPPA: GroupElement = GroupElement {
        sign: true,
        vec: 0,
    };
}

/// Center data: a basis of `R/2L` where `R = L ∩ 2L°`.
#[derive(Debug, Clone)]
pub struct CenterData {
    pub radical_basis: Vec<u64>,
    pub center_order: u64,
}

/// Central character with `χ(κ) = −1`; generator values are exponents of
/// `i`, listed in the order of `radical_basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralCharacter {
    pub id: usize,
    pub gen_values: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct QuotientGroup {
    lattice: Lattice,
    cocycle: BilinearCocycle,
    d: usize,
    center: CenterData,
}

pub fn build_quotient_group(
    lat: &Lattice,
    c: &BilinearCocycle,
) -> Result<QuotientGroup, GroupError> {
    build_quotient_group_capped(lat, c, DEFAULT_RANK_CAP)
}

pub fn build_quotient_group_capped(
    lat: &Lattice,
    c: &BilinearCocycle,
    cap: usize,
) -> Result<QuotientGroup, GroupError> {
    let d = lat.rank();
    if d > cap {
        return Err(GroupError::RankTooLarge(d, cap));
    }
    // Radical of the mod-2 Gram form, computed by F2 linear algebra.
    let gram_mod2 = F2Matrix::new(c.gram_mod2().to_vec(), d);
    let radical_basis = gram_mod2.nullspace();
    let center_order = 2u64 << radical_basis.len();
    Ok(QuotientGroup {
        lattice: lat.clone(),
        cocycle: c.clone(),
        d,
        center: CenterData {
            radical_basis,
            center_order,
        },
    })
}

impl QuotientGroup {
    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> u64 {
        2u64 << self.d
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn cocycle(&self) -> &BilinearCocycle {
        &self.cocycle
    }

    pub fn center(&self) -> &CenterData {
        &self.center
    }

    /// Image of the i-th lattice basis vector.
    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement {
            sign: false,
            vec: 1 << i,
        }
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement {
            sign: a.sign ^ b.sign ^ self.cocycle.exponent_f2(a.vec, b.vec),
            vec: a.vec ^ b.vec,
        }
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        // (s,u)(s + q(u), u) = (q(u) + uᵀBu, 0) = identity
        GroupElement {
            sign: a.sign ^ self.cocycle.exponent_f2(a.vec, a.vec),
            vec: a.vec,
        }
    }

    /// Commutator exponent: `[aK, bK] = κ^{⟨ā, b̄⟩}`.
    pub fn commutator_is_kappa(&self, a: GroupElement, b: GroupElement) -> bool {
        self.cocycle.commutator_f2(a.vec, b.vec)
    }

    pub fn is_central(&self, a: GroupElement) -> bool {
        f2::in_span(&self.center.radical_basis, self.d, a.vec)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |code| GroupElement {
            sign: code & 1 == 1,
            vec: code >> 1,
        })
    }

    /// Integer lift of an F₂ vector (entries 0/1).
    pub fn lift(&self, v: u64) -> Vec<Int> {
        (0..self.d)
            .map(|i| Int::from((v >> i & 1) as i64))
            .collect()
    }

    /// `⟨λ, v̄⟩ mod 2` for `λ ∈ L°` and a central `v̄`; the centrality makes
    /// the parity independent of the chosen lift.
    pub fn pairing_parity(&self, lam: &DualVector, v: u64) -> Result<bool, LatticeError> {
        let lift = DualVector::new(
            self.lift(v)
                .into_iter()
                .map(|x| Rat::from(x))
                .collect::<Vec<_>>(),
        );
        let p = self.lattice.inner_product(lam, &lift)?;
        if !p.is_integer() {
            return Err(LatticeError::NotInDualLattice);
        }
        Ok((p.to_integer() % 2i32).abs() == Int::from(1))
    }

    /// `⟨v̄, v̄⟩/2 mod 2` for an integer lift of `v`; well defined on `L/2L`.
    pub fn half_norm_parity(&self, v: u64) -> bool {
        let lift = DualVector::new(self.lift(v).into_iter().map(Rat::from).collect::<Vec<_>>());
        let n = self.lattice.norm(&lift).expect("rank matches");
        let half = (n / Rat::from(Int::from(2))).to_integer();
        (half % 2i32).abs() == Int::from(1)
    }

    /// Evaluates the extension of `values` (i-exponents on the F₂ span
    /// `gens`) at a group element whose vector lies in that span.
    /// Returns the exponent of `i`.
    pub fn eval_on_span(&self, gens: &[u64], values: &[u8], a: GroupElement) -> Option<u8> {
        let combo = f2::solve_in_span(gens, self.d, a.vec)?;
        let mut acc = GroupElement::IDENTITY;
        let mut val: u8 = 0;
        for (i, &g) in gens.iter().enumerate() {
            if combo >> i & 1 == 1 {
                acc = self.mul(acc, GroupElement { sign: false, vec: g });
                val = (val + values[i]) % 4;
            }
        }
        debug_assert_eq!(acc.vec, a.vec);
        // a = κ^{a.sign + acc.sign} · Π gens
        if a.sign ^ acc.sign {
            val = (val + 2) % 4;
        }
        Some(val)
    }

    /// `q(u) = uᵀ B u`: `(0,u)² = κ^{q(u)}`.
    pub fn square_exponent(&self, v: u64) -> bool {
        self.cocycle.exponent_f2(v, v)
    }

    /// Image `e_α K` of a lattice vector; depends only on `α mod 2L`.
    pub fn element_of_lattice_vector(&self, alpha: &[Int]) -> GroupElement {
        let vec = alpha
            .iter()
            .enumerate()
            .filter(|(_, x)| (*x % 2i32).abs() == Int::from(1))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        GroupElement { sign: false, vec }
    }
}

/// All central characters with `χ(κ) = −1`, in lexicographic order over
/// generator values (the `+` choice before the `−` choice).
pub fn enumerate_central_characters(g: &QuotientGroup) -> Vec<CentralCharacter> {
    let r = g.center().radical_basis.len();
    let mut out = Vec::new();
    for code in 0..(1u64 << r) {
        let gen_values: Vec<u8> = (0..r)
            .map(|i| {
                let q = g.square_exponent(g.center().radical_basis[i]);
                let base: u8 = if q { 1 } else { 0 };
                // second choice is the negation, i.e. +2 in the i-exponent
                if code >> (r - 1 - i) & 1 == 1 {
                    (base + 2) % 4
                } else {
                    base
                }
            })
            .collect();
        out.push(CentralCharacter {
            id: out.len(),
            gen_values,
        });
    }
    out
}

impl CentralCharacter {
    /// Value at a central element, as an exponent of `i`.
    pub fn eval(&self, g: &QuotientGroup, a: GroupElement) -> Option<u8> {
        g.eval_on_span(&g.center().radical_basis, &self.gen_values, a)
    }

    /// The twist `χ^{(λ)}(a) = (−1)^{⟨λ, ā⟩} χ(a)`, resolved to one of the
    /// enumerated characters.
    pub fn twist(
        &self,
        g: &QuotientGroup,
        chars: &[CentralCharacter],
        lam: &DualVector,
    ) -> Result<CentralCharacter, LatticeError> {
        if !g.lattice().in_dual(lam)? {
            return Err(LatticeError::NotInDualLattice);
        }
        let new_values: Vec<u8> = g
            .center()
            .radical_basis
            .iter()
            .zip(&self.gen_values)
            .map(|(&v, &val)| {
                let flip = g.pairing_parity(lam, v)?;
                Ok(if flip { (val + 2) % 4 } else { val })
            })
            .collect::<Result<_, LatticeError>>()?;
        Ok(chars
            .iter()
            .find(|c| c.gen_values == new_values)
            .expect("twist stays within the enumerated characters")
            .clone())
    }

    /// Character of the dual module: the complex conjugate. A central
    /// element acting by χ(z) on T acts by χ(z)⁻¹ = χ̄(z) on T'. In the
    /// section convention where e_a squares to κ^{⟨ā,ā⟩/2} this is the
    /// sign rule χ'(a) = (−1)^{⟨ā,ā⟩/2}χ(a); with the strictly lower
    /// triangular cocycle used here the same map is plain conjugation.
    pub fn contragredient(&self, chars: &[CentralCharacter]) -> CentralCharacter {
        let new_values: Vec<u8> = self.gen_values.iter().map(|&val| (4 - val) % 4).collect();
        chars
            .iter()
            .find(|c| c.gen_values == new_values)
            .expect("contragredient stays within the enumerated characters")
            .clone()
    }
}
