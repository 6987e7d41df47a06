//! Explicit matrix models of the irreducible modules on which κ acts as
//! −1, built by induction from a maximal abelian subgroup containing the
//! center. All matrices are monomial over the fourth roots of unity, so
//! group actions stay exact and cheap; dense `Q(i)` matrices appear only
//! for intertwiners and η-maps.

use num::Signed;

use crate::cocycle::BilinearCocycle;
use crate::error::{GroupError, LatticeError};
use crate::f2;
use crate::gauss::{gmat_mul, gmat_rank, gmat_scale, GMatrix, Gauss};
use crate::group::{CentralCharacter, GroupElement, QuotientGroup};
use crate::intmat::{Int, Rat};
use crate::lattice::{DualVector, Lattice};
use crate::report::{CheckResult, Report};

/// Monomial matrix: column `j` carries `i^{scale[j]}` into row `perm[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoMatrix {
    pub perm: Vec<usize>,
    pub scale: Vec<u8>,
}

impl MonoMatrix {
    pub fn identity(n: usize) -> Self {
        MonoMatrix {
            perm: (0..n).collect(),
            scale: vec![0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `self ∘ rhs` as linear maps.
    pub fn mul(&self, rhs: &MonoMatrix) -> MonoMatrix {
        let n = self.dim();
        let mut perm = vec![0usize; n];
        let mut scale = vec![0u8; n];
        for j in 0..n {
            perm[j] = self.perm[rhs.perm[j]];
            scale[j] = (rhs.scale[j] + self.scale[rhs.perm[j]]) % 4;
        }
        MonoMatrix { perm, scale }
    }

    pub fn inv(&self) -> MonoMatrix {
        let n = self.dim();
        let mut perm = vec![0usize; n];
        let mut scale = vec![0u8; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            scale[self.perm[j]] = (4 - self.scale[j]) % 4;
        }
        MonoMatrix { perm, scale }
    }

    /// Multiply by the global scalar `i^k`.
    pub fn scaled(&self, k: u8) -> MonoMatrix {
        MonoMatrix {
            perm: self.perm.clone(),
            scale: self.scale.iter().map(|&s| (s + k) % 4).collect(),
        }
    }

    /// Is this exactly `i^k · Identity`?
    pub fn is_scalar(&self, k: u8) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p == j)
            && self.scale.iter().all(|&s| s == k % 4)
    }

    pub fn trace(&self) -> Gauss {
        let mut t = Gauss::zero();
        for j in 0..self.dim() {
            if self.perm[j] == j {
                t += &Gauss::i_pow(self.scale[j]);
            }
        }
        t
    }

    pub fn to_dense(&self) -> GMatrix {
        let n = self.dim();
        let mut m = crate::gauss::gmat_zero(n, n);
        for j in 0..n {
            m[self.perm[j]][j] = Gauss::i_pow(self.scale[j]);
        }
        m
    }
}

/// Irreducible module for the quotient group with the given central
/// character; basis indexed by cosets of the inducing abelian subgroup.
#[derive(Debug, Clone)]
pub struct SectorRep {
    pub dim: usize,
    pub char_id: usize,
    rho_table: Vec<MonoMatrix>,
}

impl SectorRep {
    fn code(a: GroupElement) -> usize {
        ((a.vec as usize) << 1) | a.sign as usize
    }

    pub fn rho(&self, a: GroupElement) -> &MonoMatrix {
        &self.rho_table[Self::code(a)]
    }

    pub fn rho_dense(&self, a: GroupElement) -> GMatrix {
        self.rho(a).to_dense()
    }
}

/// dim T_χ = √(2^d / |R/2L|), forced by the sum-of-squares count.
pub fn sector_dim(g: &QuotientGroup) -> usize {
    let r = g.center().radical_basis.len();
    1 << ((g.rank() - r) / 2)
}

/// Induction data: a maximal isotropic subspace W ⊇ radical for the mod-2
/// pairing (the abelian subgroup is κ-span of W), character exponents on
/// its basis, and a transversal basis completing W to F₂^d.
fn induction_data(g: &QuotientGroup, chi: &CentralCharacter) -> (Vec<u64>, Vec<u8>, Vec<u64>) {
    let d = g.rank();
    let r = g.center().radical_basis.len();
    let mut w_basis = g.center().radical_basis.clone();
    for v in 1..(1u64 << d) {
        if f2::in_span(&w_basis, d, v) {
            continue;
        }
        if w_basis.iter().all(|&w| !g.commutator_is_kappa(
            GroupElement { sign: false, vec: v },
            GroupElement { sign: false, vec: w },
        )) {
            w_basis.push(v);
        }
    }
    assert_eq!(w_basis.len(), r + (d - r) / 2, "isotropic subspace is maximal");

    // Extension of χ to the abelian subgroup: exponents must match the
    // square relation (0,w)² = κ^{q(w)}, i.e. value parity = q(w).
    let values: Vec<u8> = w_basis
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            if i < r {
                chi.gen_values[i]
            } else if g.square_exponent(w) {
                1
            } else {
                0
            }
        })
        .collect();

    let mut comp = Vec::new();
    for v in 1..(1u64 << d) {
        let mut span = w_basis.clone();
        span.extend_from_slice(&comp);
        if !f2::in_span(&span, d, v) {
            comp.push(v);
        }
    }
    (w_basis, values, comp)
}

pub fn build_sector_rep(g: &QuotientGroup, chi: &CentralCharacter) -> SectorRep {
    let d = g.rank();
    let (w_basis, values, comp) = induction_data(g, chi);
    let dim = 1 << comp.len();
    assert_eq!(dim, sector_dim(g));

    // Transversal: coset index j is the product over set bits of j of the
    // complement basis elements, in ascending bit order.
    let transversal: Vec<GroupElement> = (0..dim)
        .map(|j| {
            let mut acc = GroupElement::IDENTITY;
            for (i, &v) in comp.iter().enumerate() {
                if j >> i & 1 == 1 {
                    acc = g.mul(acc, GroupElement { sign: false, vec: v });
                }
            }
            acc
        })
        .collect();

    let mut combined = w_basis.clone();
    combined.extend_from_slice(&comp);

    let rho_of = |a: GroupElement| -> MonoMatrix {
        let mut perm = vec![0usize; dim];
        let mut scale = vec![0u8; dim];
        for (j, &tj) in transversal.iter().enumerate() {
            let h = g.mul(a, tj);
            let combo = f2::solve_in_span(&combined, d, h.vec).expect("full basis");
            let k = (combo >> w_basis.len()) as usize;
            let rem = g.mul(g.inv(transversal[k]), h);
            perm[j] = k;
            scale[j] = g
                .eval_on_span(&w_basis, &values, rem)
                .expect("remainder lies in the abelian subgroup");
        }
        MonoMatrix { perm, scale }
    };

    let mut rho_table = vec![MonoMatrix::identity(dim); 1 << (d + 1)];
    for a in g.elements() {
        rho_table[SectorRep::code(a)] = rho_of(a);
    }
    let rep = SectorRep {
        dim,
        char_id: chi.id,
        rho_table,
    };
    verify_at_construction(g, chi, &rep);
    rep
}

/// Invariants asserted when a sector is built: κ ↦ −I, the center acts by
/// the character, relations hold, and the character norm certifies
/// irreducibility (Σ_g |tr ρ(g)|² = |G|).
fn verify_at_construction(g: &QuotientGroup, chi: &CentralCharacter, rep: &SectorRep) {
    assert!(rep.rho(GroupElement::IDENTITY).is_scalar(0));
    assert!(rep.rho(GroupElement::KAPPA).is_scalar(2));

    let r = g.center().radical_basis.len();
    for mask in 0..(1u64 << r) {
        for sign in [false, true] {
            let mut z = GroupElement { sign, vec: 0 };
            for i in 0..r {
                if mask >> i & 1 == 1 {
                    z = g.mul(
                        z,
                        GroupElement {
                            sign: false,
                            vec: g.center().radical_basis[i],
                        },
                    );
                }
            }
            let val = chi.eval(g, z).expect("central element");
            assert!(rep.rho(z).is_scalar(val), "center acts by the character");
        }
    }

    // Homomorphism: exhaustive for small groups, decimated above that.
    let els: Vec<GroupElement> = g.elements().collect();
    let stride = if els.len() <= 64 { 1 } else { 7 };
    for (i, &a) in els.iter().enumerate() {
        for &b in els.iter().skip(i % stride).step_by(stride) {
            assert_eq!(
                rep.rho(a).mul(rep.rho(b)),
                *rep.rho(g.mul(a, b)),
                "representation respects the product"
            );
        }
    }

    let mut norm = Rat::from(Int::from(0));
    for &a in &els {
        norm += rep.rho(a).trace().norm_sq();
    }
    assert_eq!(norm, Rat::from(Int::from(els.len() as i64)), "irreducible");
}

fn pairing_parity_int(lat: &Lattice, lam: &DualVector, alpha: &[Int]) -> Result<bool, LatticeError> {
    let v = DualVector::new(alpha.iter().cloned().map(Rat::from).collect::<Vec<_>>());
    let p = lat.inner_product(lam, &v)?;
    if !p.is_integer() {
        return Err(LatticeError::NotInDualLattice);
    }
    Ok((p.to_integer() % 2i32).abs() == Int::from(1))
}

/// Nonzero `f` with `f·ρ_src(σ_λ(a)) = ρ_tgt(a)·f`, where `σ_λ(a) =
/// κ^{⟨λ,ā⟩}a`; computed by averaging elementary matrices over the group.
/// Normalized so the first nonzero entry in row-major order is 1.
pub fn solve_intertwiner(
    g: &QuotientGroup,
    src: &SectorRep,
    tgt: &SectorRep,
    lam: &DualVector,
) -> Result<GMatrix, crate::Error> {
    if !g.lattice().in_dual(lam)? {
        return Err(LatticeError::NotInDualLattice.into());
    }
    assert_eq!(src.dim, tgt.dim);
    let dim = src.dim;
    let parity: Vec<bool> = (0..(1u64 << g.rank()))
        .map(|v| g.pairing_parity(lam, v))
        .collect::<Result<_, _>>()?;

    // For X = E_{pq}, each group element contributes the single entry
    // (ρ_tgt(a) X ρ_src(σ_λ(a))⁻¹)[perm_t[p]][perm_s[q]] = ±i^{…}; the
    // averaged matrix is an intertwiner, and Schur forces all nonzero
    // averages to be proportional.
    let mut best: Option<GMatrix> = None;
    for p in 0..dim {
        for q in 0..dim {
            let mut m = crate::gauss::gmat_zero(dim, dim);
            for a in g.elements() {
                let mt = tgt.rho(a);
                let ms = src.rho(a);
                let mut e = (mt.scale[p] + 4 - ms.scale[q]) % 4;
                if parity[a.vec as usize] {
                    e = (e + 2) % 4;
                }
                m[mt.perm[p]][ms.perm[q]] += &Gauss::i_pow(e);
            }
            if m.iter().flatten().all(Gauss::is_zero) {
                continue;
            }
            match &best {
                None => best = Some(m),
                Some(b) => {
                    if !proportional(b, &m) {
                        return Err(GroupError::NonUniqueSolution.into());
                    }
                }
            }
        }
    }
    let f = best.ok_or(GroupError::NoIntertwiner)?;

    let lead = f
        .iter()
        .flatten()
        .find(|x| !x.is_zero())
        .expect("nonzero matrix")
        .inv()
        .expect("nonzero entry");
    let f = gmat_scale(&f, &lead);

    for i in 0..g.rank() {
        let a = g.generator(i);
        let lhs = gmat_mul(&tgt.rho_dense(a), &f);
        let mut rhs = gmat_mul(&f, &src.rho_dense(a));
        if parity[a.vec as usize] {
            rhs = gmat_scale(&rhs, &Gauss::i_pow(2));
        }
        assert_eq!(lhs, rhs, "intertwining relation on generators");
    }
    assert_eq!(gmat_rank(&f), dim, "intertwiner is invertible");
    Ok(f)
}

fn proportional(a: &GMatrix, b: &GMatrix) -> bool {
    let (i, j) = a
        .iter()
        .enumerate()
        .find_map(|(i, row)| row.iter().position(|x| !x.is_zero()).map(|j| (i, j)))
        .expect("nonzero");
    let ratio = &b[i][j] * &a[i][j].inv().expect("nonzero entry");
    *b == gmat_scale(a, &ratio)
}

/// `η_{λ+α} = (−1)^{⟨α,λ⟩} e_α ∘ f` as a matrix T_χ → T_{χ^{(λ)}}.
pub fn eta_map(
    g: &QuotientGroup,
    tgt: &SectorRep,
    f: &GMatrix,
    lam: &DualVector,
    alpha: &[Int],
) -> Result<GMatrix, crate::Error> {
    let a = g.element_of_lattice_vector(alpha);
    let m = gmat_mul(&tgt.rho_dense(a), f);
    Ok(if pairing_parity_int(g.lattice(), lam, alpha)? {
        gmat_scale(&m, &Gauss::i_pow(2))
    } else {
        m
    })
}

/// Signed permutation action of `e_α` on the group algebra of `L/2L`:
/// `e^ū ↦ ε(α,u)·e^{ᾱ+ū}`.
pub fn group_algebra_matrix(c: &BilinearCocycle, d: usize, alpha_bits: u64) -> MonoMatrix {
    let n = 1usize << d;
    let mut perm = vec![0usize; n];
    let mut scale = vec![0u8; n];
    for (u, p) in perm.iter_mut().enumerate() {
        *p = u ^ alpha_bits as usize;
        scale[u] = if c.exponent_f2(alpha_bits, u as u64) { 2 } else { 0 };
    }
    MonoMatrix { perm, scale }
}

/// On the group algebra of `L/2L`: `e_α e_β = (−1)^{⟨α,β⟩} e_β e_α` for
/// all pairs of classes.
pub fn verify_group_algebra_commutation(c: &BilinearCocycle, d: usize) -> Report {
    let mut rep = Report::new();
    let mut bad = 0usize;
    let total = 1usize << (2 * d);
    for a in 0..(1u64 << d) {
        let ea = group_algebra_matrix(c, d, a);
        for b in 0..(1u64 << d) {
            let eb = group_algebra_matrix(c, d, b);
            let lhs = ea.mul(&eb);
            let rhs = if c.commutator_f2(a, b) {
                eb.mul(&ea).scaled(2)
            } else {
                eb.mul(&ea)
            };
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    rep.push(if bad == 0 {
        CheckResult::pass(format!("group algebra sign commutation ({total} pairs)"))
    } else {
        CheckResult::fail(
            "group algebra sign commutation",
            format!("{bad} of {total} pairs violated"),
        )
    });
    rep
}

/// Matrix identities tying a sector to its λ-twist: the sign commutation
/// of `e_α` past the intertwiner, the two η relations, and invertibility
/// of every η. α, β range over all 0/1 lifts for d ≤ 4, basis vectors
/// above that.
pub fn verify_sector_identities(
    g: &QuotientGroup,
    chars: &[CentralCharacter],
    chi: &CentralCharacter,
    lam: &DualVector,
) -> Result<Report, crate::Error> {
    let d = g.rank();
    let src = build_sector_rep(g, chi);
    let tgt = build_sector_rep(g, &chi.twist(g, chars, lam)?);
    let f = solve_intertwiner(g, &src, &tgt, lam)?;
    let mut rep = Report::new();

    let lifts: Vec<Vec<Int>> = if d <= 4 {
        (0..(1u64 << d))
            .map(|bits| (0..d).map(|i| Int::from((bits >> i & 1) as i64)).collect())
            .collect()
    } else {
        (0..d)
            .map(|i| (0..d).map(|j| Int::from((i == j) as i64)).collect())
            .collect()
    };

    let mut comm_bad = 0usize;
    for alpha in &lifts {
        let a = g.element_of_lattice_vector(alpha);
        let lhs = gmat_mul(&tgt.rho_dense(a), &f);
        let mut rhs = gmat_mul(&f, &src.rho_dense(a));
        if pairing_parity_int(g.lattice(), lam, alpha)? {
            rhs = gmat_scale(&rhs, &Gauss::i_pow(2));
        }
        if lhs != rhs {
            comm_bad += 1;
        }
    }
    rep.push(if comm_bad == 0 {
        CheckResult::pass("intertwiner sign commutation with e_α")
    } else {
        CheckResult::fail(
            "intertwiner sign commutation with e_α",
            format!("{comm_bad} lifts violated"),
        )
    });

    let mut eta_comm_bad = 0usize;
    let mut eta_shift_bad = 0usize;
    let mut eta_rank_bad = 0usize;
    for beta in &lifts {
        let eta = eta_map(g, &tgt, &f, lam, beta)?;
        if gmat_rank(&eta) != src.dim {
            eta_rank_bad += 1;
        }
        for alpha in &lifts {
            let ea_t = tgt.rho_dense(g.element_of_lattice_vector(alpha));
            let ea_s = src.rho_dense(g.element_of_lattice_vector(alpha));
            let lhs = gmat_mul(&ea_t, &eta);

            // e_α η_{λ+β} = (−1)^{⟨α,λ+β⟩} η_{λ+β} e_α
            let ip_ab = pairing_parity_int(g.lattice(), lam, alpha)?
                ^ inner_parity(g.lattice(), alpha, beta);
            let mut comm = gmat_mul(&eta, &ea_s);
            if ip_ab {
                comm = gmat_scale(&comm, &Gauss::i_pow(2));
            }
            if lhs != comm {
                eta_comm_bad += 1;
            }

            // e_α η_{λ+β} = ε(α,β)(−1)^{⟨α,λ⟩} η_{λ+α+β}
            let sum: Vec<Int> = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
            let mut shifted = eta_map(g, &tgt, &f, lam, &sum)?;
            let mut sign = g.cocycle().eval_epsilon(alpha, beta)? < 0;
            sign ^= pairing_parity_int(g.lattice(), lam, alpha)?;
            if sign {
                shifted = gmat_scale(&shifted, &Gauss::i_pow(2));
            }
            if lhs != shifted {
                eta_shift_bad += 1;
            }
        }
    }
    let n = lifts.len() * lifts.len();
    rep.push(if eta_comm_bad == 0 {
        CheckResult::pass(format!("η sign commutation with e_α ({n} pairs)"))
    } else {
        CheckResult::fail(
            "η sign commutation with e_α",
            format!("{eta_comm_bad} of {n} pairs violated"),
        )
    });
    rep.push(if eta_shift_bad == 0 {
        CheckResult::pass(format!("e_α ∘ η composition rule ({n} pairs)"))
    } else {
        CheckResult::fail(
            "e_α ∘ η composition rule",
            format!("{eta_shift_bad} of {n} pairs violated"),
        )
    });
    rep.push(if eta_rank_bad == 0 {
        CheckResult::pass("every η invertible")
    } else {
        CheckResult::fail("every η invertible", format!("{eta_rank_bad} singular"))
    });
    Ok(rep)
}

fn inner_parity(lat: &Lattice, a: &[Int], b: &[Int]) -> bool {
    let av = DualVector::new(a.iter().cloned().map(Rat::from).collect::<Vec<_>>());
    let bv = DualVector::new(b.iter().cloned().map(Rat::from).collect::<Vec<_>>());
    let p = lat.inner_product(&av, &bv).expect("rank matches");
    (p.to_integer() % 2i32).abs() == Int::from(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::build_cocycle;
    use crate::gauss::gmat_identity;
    use crate::group::{build_quotient_group, enumerate_central_characters};
    use crate::lattice::{e8_gram, validate_lattice, validate_lattice_i64};

    fn setup(rows: &[&[i64]]) -> (Lattice, QuotientGroup, Vec<CentralCharacter>) {
        let g: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let l = validate_lattice_i64(&g).unwrap();
        let c = build_cocycle(&l);
        let q = build_quotient_group(&l, &c).unwrap();
        let chars = enumerate_central_characters(&q);
        (l, q, chars)
    }

    #[test]
    fn rank1_sectors_are_one_dimensional() {
        let (_, q, chars) = setup(&[&[2]]);
        assert_eq!(chars.len(), 2);
        for chi in &chars {
            let rep = build_sector_rep(&q, chi);
            assert_eq!(rep.dim, 1);
        }
    }

    #[test]
    fn a2_sector_is_two_dimensional() {
        let (_, q, chars) = setup(&[&[2, 1], &[1, 2]]);
        let rep = build_sector_rep(&q, &chars[0]);
        assert_eq!(rep.dim, 2);
        // generators anticommute in the matrices too
        let (a, b) = (q.generator(0), q.generator(1));
        let ab = rep.rho(a).mul(rep.rho(b));
        let ba = rep.rho(b).mul(rep.rho(a));
        assert_eq!(ab, ba.scaled(2));
    }

    #[test]
    fn e8_sector_is_sixteen_dimensional() {
        let l = validate_lattice(&e8_gram()).unwrap();
        let c = build_cocycle(&l);
        let q = build_quotient_group(&l, &c).unwrap();
        let chars = enumerate_central_characters(&q);
        assert_eq!(chars.len(), 1);
        let rep = build_sector_rep(&q, &chars[0]);
        assert_eq!(rep.dim, 16);
    }

    #[test]
    fn zero_twist_intertwiner_is_identity() {
        let (_, q, chars) = setup(&[&[2, 1], &[1, 2]]);
        let rep = build_sector_rep(&q, &chars[0]);
        let z = DualVector::zero(2);
        let f = solve_intertwiner(&q, &rep, &rep, &z).unwrap();
        assert_eq!(f, gmat_identity(2));
    }

    #[test]
    fn rank1_half_twist_intertwiner() {
        let (_, q, chars) = setup(&[&[2]]);
        let half = DualVector::from_ratios(&[(1, 2)]);
        let src = build_sector_rep(&q, &chars[0]);
        let tgt = build_sector_rep(&q, &chars[0].twist(&q, &chars, &half).unwrap());
        let f = solve_intertwiner(&q, &src, &tgt, &half).unwrap();
        assert_eq!(f, gmat_identity(1));
        // the untwisted target does not intertwine
        assert!(matches!(
            solve_intertwiner(&q, &src, &src, &half),
            Err(crate::Error::Group(GroupError::NoIntertwiner))
        ));
    }

    #[test]
    fn group_algebra_commutation_small() {
        for rows in [vec![vec![2i64]], vec![vec![2, 1], vec![1, 2]]] {
            let l = validate_lattice_i64(&rows).unwrap();
            let c = build_cocycle(&l);
            assert!(verify_group_algebra_commutation(&c, l.rank()).all_pass());
        }
    }

    #[test]
    fn sector_identities_rank1() {
        let (_, q, chars) = setup(&[&[2]]);
        for lam in [DualVector::zero(1), DualVector::from_ratios(&[(1, 2)])] {
            let rep = verify_sector_identities(&q, &chars, &chars[0], &lam).unwrap();
            assert!(rep.all_pass(), "{rep}");
        }
    }

    #[test]
    fn sector_identities_a2() {
        let (_, q, chars) = setup(&[&[2, 1], &[1, 2]]);
        // dual basis vector: pairs integrally with L but lies outside it
        let lam = DualVector::from_ratios(&[(2, 3), (-1, 3)]);
        let rep = verify_sector_identities(&q, &chars, &chars[0], &lam).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn eta_at_zero_is_the_intertwiner() {
        let (_, q, chars) = setup(&[&[2, 1], &[1, 2]]);
        let rep = build_sector_rep(&q, &chars[0]);
        let z = DualVector::zero(2);
        let f = solve_intertwiner(&q, &rep, &rep, &z).unwrap();
        let eta = eta_map(&q, &rep, &f, &z, &[Int::from(0), Int::from(0)]).unwrap();
        assert_eq!(eta, f);
    }
}
