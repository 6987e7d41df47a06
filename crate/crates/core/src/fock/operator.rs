//! Vertex operators between the Fock sectors, evaluated coefficient by
//! coefficient inside an exponent window. All series are maps from the
//! `z`-exponent to an exact state; within the requested window every
//! coefficient is computed exactly (truncation only discards exponents
//! outside the window).

use std::collections::BTreeMap;

use num::{ToPrimitive, Zero};

use crate::cocycle::BilinearCocycle;
use crate::error::FockError;
use crate::gauss::GMatrix;
use crate::intmat::{Int, Rat};
use crate::lattice::{DualVector, Lattice};

use super::scalar::Scalar;
use super::vector::{
    heisenberg_apply, heisenberg_apply_vec, pair_apply, Base, FockVector, Mode, Monomial,
};

/// Exponent window `[lo, hi]` (inclusive) for series extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub lo: Rat,
    pub hi: Rat,
}

impl Window {
    pub fn from_i64(lo: i64, hi: i64) -> Self {
        Window {
            lo: Rat::from(Int::from(lo)),
            hi: Rat::from(Int::from(hi)),
        }
    }

    pub fn contains(&self, e: &Rat) -> bool {
        *e >= self.lo && *e <= self.hi
    }

    pub fn widened(&self, margin: i64) -> Window {
        let m = Rat::from(Int::from(margin));
        Window {
            lo: self.lo.clone() - &m,
            hi: self.hi.clone() + &m,
        }
    }
}

/// Formal series `Σ_e v_e z^e` with finitely many recorded exponents.
pub type OpSeries = BTreeMap<Rat, FockVector>;

pub fn series_add(out: &mut OpSeries, e: Rat, v: &FockVector, s: &Scalar) {
    if v.is_zero() || s.is_zero() {
        return;
    }
    let slot = out.entry(e.clone()).or_default();
    slot.add_scaled(v, s);
    if slot.is_zero() {
        out.remove(&e);
    }
}

pub fn series_coeff<'a>(ser: &'a OpSeries, e: &Rat) -> Option<&'a FockVector> {
    ser.get(e)
}

/// `binom(x, k)` for rational `x`.
fn rat_binom(x: &Rat, k: usize) -> Rat {
    let mut num = Rat::from(Int::from(1));
    for t in 0..k {
        num *= x - Rat::from(Int::from(t as i64));
        num /= Rat::from(Int::from((t + 1) as i64));
    }
    num
}

fn rat_half(doubled: Mode) -> Rat {
    Rat::new(Int::from(doubled as i64), Int::from(2))
}

/// Evaluator for the twisted-sector operators of one lattice. Carries the
/// precomputed coefficients `c_{mn}` of the half-integer mode conjugation
/// series up to a fixed total degree.
type CreatorTable = Vec<(Rat, Vec<(Mode, usize)>, Rat)>;

pub struct TwistedEngine<'a> {
    pub lat: &'a Lattice,
    pub conj: Vec<Vec<Rat>>,
    creator_cache: std::cell::RefCell<Option<(Vec<Rat>, bool, Rat, CreatorTable)>>,
}

impl<'a> TwistedEngine<'a> {
    pub fn new(lat: &'a Lattice, conj: Vec<Vec<Rat>>) -> Self {
        TwistedEngine {
            lat,
            conj,
            creator_cache: std::cell::RefCell::new(None),
        }
    }

    fn conj_degree(&self) -> usize {
        self.conj.len().saturating_sub(1)
    }

    /// `exp(−Σ_{n>0} h(n)/n z^{−n})` over modes of the given doubled parity
    /// (`odd_modes`: half-integer sector). Exact: annihilators terminate.
    fn exp_annihilators(
        &self,
        h: &DualVector,
        odd_modes: bool,
        ser: &OpSeries,
    ) -> Result<OpSeries, FockError> {
        let mut cur = ser.clone();
        let maxmode = cur.values().map(|v| v.max_mode()).max().unwrap_or(0);
        let start: Mode = if odd_modes { 1 } else { 2 };
        let mut nd = start;
        while nd <= maxmode {
            let mut adds: OpSeries = BTreeMap::new();
            for (e, v) in &cur {
                // Repeated application of −h(n)/n, divided by k!.
                let mut term = v.clone();
                let mut k = 1u32;
                loop {
                    let hit = heisenberg_apply_vec(self.lat, nd, h, &term)?;
                    if hit.is_zero() {
                        break;
                    }
                    let coeff = Rat::new(Int::from(-2i64), Int::from(nd as i64))
                        / Rat::from(Int::from(k as i64));
                    term = hit.scale_rat(&coeff);
                    let shift = e - rat_half(nd) * Rat::from(Int::from(k as i64));
                    series_add(&mut adds, shift, &term, &Scalar::one());
                    k += 1;
                }
            }
            for (e, v) in &adds {
                series_add(&mut cur, e.clone(), v, &Scalar::one());
            }
            nd += 2;
        }
        Ok(cur)
    }

    /// `exp(Σ_{n>0} h(−n)/n z^{n})` over modes of the given doubled parity,
    /// keeping only exponents `≤ cap` (later stages never lower exponents).
    fn exp_creators(
        &self,
        h: &DualVector,
        odd_modes: bool,
        ser: &OpSeries,
        cap: &Rat,
    ) -> Result<OpSeries, FockError> {
        let mut out: OpSeries = BTreeMap::new();
        let min_e = match ser.keys().next() {
            Some(e) if e <= cap => e.clone(),
            _ => return Ok(out),
        };
        // Cache the expansion table: calls cluster around one coset point,
        // so quantizing the budget up to the next integer makes most calls
        // hits. Entries past the per-call cap are skipped in sorted order.
        let budget = (cap.clone() - &min_e).ceil();
        let hit = {
            let cache = self.creator_cache.borrow();
            match &*cache {
                Some((hc, parity, bc, _)) => {
                    *hc == h.coords && *parity == odd_modes && *bc >= budget
                }
                None => false,
            }
        };
        if !hit {
            let table = self.creator_table(h, odd_modes, &budget);
            *self.creator_cache.borrow_mut() =
                Some((h.coords.clone(), odd_modes, budget, table));
        }
        let cache = self.creator_cache.borrow();
        let table = &cache.as_ref().expect("just filled").3;
        for (e, v) in ser.iter().filter(|(e, _)| *e <= cap) {
            for (shift, factors, coeff) in table {
                let tot = e.clone() + shift;
                if tot > *cap {
                    break;
                }
                let term = v.append_factors(factors);
                series_add(&mut out, tot, &term, &Scalar::from_rat(coeff.clone()));
            }
        }
        Ok(out)
    }

    /// Expansion of `exp(Σ_{n>0} 2 h(−n)/n z^{n})` as a table of
    /// `(z-shift, creation factors, coefficient)`, sorted by shift so a
    /// caller can stop at its exponent cap. Creators commute, so each term
    /// is a plain multiset with the multiset-exponential coefficient
    /// `Π c_g^{m_g}/m_g!`.
    fn creator_table(
        &self,
        h: &DualVector,
        odd_modes: bool,
        budget: &Rat,
    ) -> Vec<(Rat, Vec<(Mode, usize)>, Rat)> {
        let start: Mode = if odd_modes { 1 } else { 2 };
        let mut gens: Vec<(Mode, usize, Rat)> = Vec::new();
        let mut nd = start;
        while rat_half(nd) <= *budget {
            for (j, hj) in h.coords.iter().enumerate() {
                if !hj.is_zero() {
                    gens.push((
                        nd,
                        j,
                        hj.clone() * Rat::new(Int::from(2), Int::from(nd as i64)),
                    ));
                }
            }
            nd += 2;
        }
        let mut table: Vec<(Rat, Vec<(Mode, usize)>, Rat)> =
            vec![(Rat::zero(), Vec::new(), Rat::from(Int::from(1)))];
        for (nd, dir, c) in &gens {
            let half = rat_half(*nd);
            let prev_len = table.len();
            for t in 0..prev_len {
                let mut shift = table[t].0.clone();
                let mut coeff = table[t].2.clone();
                let mut k: i64 = 0;
                loop {
                    k += 1;
                    shift += &half;
                    if shift > *budget {
                        break;
                    }
                    coeff = coeff * c / Rat::from(Int::from(k));
                    let mut factors = table[t].1.clone();
                    factors.extend(std::iter::repeat((-nd, *dir)).take(k as usize));
                    factors.sort_unstable();
                    table.push((shift.clone(), factors, coeff.clone()));
                }
            }
        }
        table.sort_by(|a, b| a.0.cmp(&b.0));
        table
    }

    /// `e^{Δ_z} v` restricted to a window. Exponents are never positive, so
    /// the window only truncates on the low side.
    pub fn apply_delta(&self, v: &FockVector, win: &Window) -> Result<OpSeries, FockError> {
        Ok(self
            .delta_expansion(v)?
            .into_iter()
            .filter(|(e, _)| win.contains(e))
            .collect())
    }

    /// `e^{Δ_z} v` for an integer-mode state: returns `(exponent, state)`
    /// pairs with nonpositive exponents. `Δ_z` strictly removes creation
    /// factors, so the exponential terminates.
    fn delta_expansion(&self, v: &FockVector) -> Result<Vec<(Rat, FockVector)>, FockError> {
        let maxdeg = (v.max_mode() / 2) as usize;
        assert!(
            2 * maxdeg <= self.conj_degree() || maxdeg == 0,
            "conjugation series truncated below the modes present"
        );
        let mut total: OpSeries = BTreeMap::new();
        series_add(&mut total, Rat::zero(), v, &Scalar::one());
        let mut cur = total.clone();
        let mut k: i64 = 1;
        loop {
            let mut next: OpSeries = BTreeMap::new();
            for (e, vec) in &cur {
                let md = (vec.max_mode() / 2) as usize;
                for m in 0..=md {
                    for n in 0..=md {
                        if m + n == 0 || m + n > self.conj_degree() {
                            continue;
                        }
                        let c = &self.conj[m][n];
                        if c.is_zero() {
                            continue;
                        }
                        let hit =
                            pair_apply(self.lat, 2 * m as Mode, 2 * n as Mode, vec)?;
                        if hit.is_zero() {
                            continue;
                        }
                        let w = c / Rat::from(Int::from(k));
                        series_add(
                            &mut next,
                            e - Rat::from(Int::from((m + n) as i64)),
                            &hit.scale_rat(&w),
                            &Scalar::one(),
                        );
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            for (e, vec) in &next {
                series_add(&mut total, e.clone(), vec, &Scalar::one());
            }
            cur = next;
            k += 1;
        }
        Ok(total.into_iter().collect())
    }

    /// Normal-ordered product of derivative fields and the half-integer
    /// exponential operator of `e^μ`, for one integer-mode monomial,
    /// applied to a half-integer-mode state.
    fn w_op(
        &self,
        factors: &[(Mode, usize)],
        mu: &DualVector,
        w: &FockVector,
        win: &Window,
    ) -> Result<OpSeries, crate::Error> {
        let norm = self.lat.norm(mu)?;
        let two_norm = norm.clone() * Rat::from(Int::from(2));
        if !two_norm.is_integer() {
            return Err(FockError::ScalarNotRepresentable(format!(
                "prefactor 2^(-{}) needs denominators beyond √2",
                norm
            ))
            .into());
        }
        let pref_exp = -norm.clone() / Rat::from(Int::from(2));
        let pref = Scalar::sqrt2_pow(
            -two_norm.to_integer().to_i64().expect("small exponent"),
        );

        // Annihilator mode candidates per factor, bounded by the state.
        // Each factor either annihilates with one of these or joins the
        // commuting creation cloud, which is applied as one series stage
        // per factor after the exponentials (so creation choices multiply
        // series sizes, never branch counts).
        let mut ann_cands: Vec<Vec<(Mode, Rat)>> = Vec::new();
        for (fm, _) in factors {
            let n = -fm / 2;
            let mut list = Vec::new();
            let mut md: Mode = 1;
            while md <= w.max_mode() {
                let b = rat_binom(&(-rat_half(md) - Rat::from(Int::from(1))), (n - 1) as usize);
                if !b.is_zero() {
                    list.push((md, b));
                }
                md += 2;
            }
            ann_cands.push(list);
        }
        let cap = win.hi.clone() - &pref_exp;

        let mut out: OpSeries = BTreeMap::new();
        let mut choice: Vec<Option<(Mode, Rat)>> = Vec::new();
        self.w_op_rec(
            factors, &ann_cands, 0, &mut choice, mu, w, win, &pref_exp, &pref, &cap, &mut out,
        )?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn w_op_rec(
        &self,
        factors: &[(Mode, usize)],
        ann_cands: &[Vec<(Mode, Rat)>],
        idx: usize,
        choice: &mut Vec<Option<(Mode, Rat)>>,
        mu: &DualVector,
        w: &FockVector,
        win: &Window,
        pref_exp: &Rat,
        pref: &Scalar,
        cap: &Rat,
        out: &mut OpSeries,
    ) -> Result<(), crate::Error> {
        if idx < factors.len() {
            choice.push(None);
            self.w_op_rec(
                factors, ann_cands, idx + 1, choice, mu, w, win, pref_exp, pref, cap, out,
            )?;
            choice.pop();
            for (md, binom) in &ann_cands[idx] {
                choice.push(Some((*md, binom.clone())));
                self.w_op_rec(
                    factors, ann_cands, idx + 1, choice, mu, w, win, pref_exp, pref, cap, out,
                )?;
                choice.pop();
            }
            return Ok(());
        }

        // Annihilator assignment fixed: contract the state, fold the mode
        // offsets into the exponent key, and run the annihilation
        // exponential.
        let mut offset = Rat::zero();
        let mut coeff = Rat::from(Int::from(1));
        let mut state = w.clone();
        let mut creators: Vec<(Mode, usize)> = Vec::new();
        for (c, (fm, dir)) in choice.iter().zip(factors) {
            let n = Rat::from(Int::from((-fm / 2) as i64));
            match c {
                Some((md, binom)) => {
                    state = heisenberg_apply(self.lat, *md, *dir, &state)?;
                    if state.is_zero() {
                        return Ok(());
                    }
                    offset += -rat_half(*md) - n;
                    coeff *= binom;
                }
                None => creators.push((*fm, *dir)),
            }
        }
        let mut ser: OpSeries = BTreeMap::new();
        series_add(&mut ser, offset, &state, &Scalar::one());
        ser = self.exp_annihilators(mu, true, &ser)?;

        // One series stage per creation-side factor: the factor's mode sum
        // applied to every accumulated term, pruned against the cap with
        // the best case of the remaining stages (each can lower the
        // exponent by at most n − ½).
        let mut rem_min: Vec<Rat> = vec![Rat::zero(); creators.len() + 1];
        for i in (0..creators.len()).rev() {
            let n = Rat::from(Int::from((-creators[i].0 / 2) as i64));
            rem_min[i] = rem_min[i + 1].clone() + rat_half(1) - n;
        }
        for (i, (fm, dir)) in creators.iter().enumerate() {
            let n = -fm / 2;
            let nr = Rat::from(Int::from(n as i64));
            let mut next: OpSeries = BTreeMap::new();
            for (e, v) in &ser {
                let mut md: Mode = -1;
                loop {
                    let off = rat_half(-md) - &nr;
                    if e.clone() + &off + &rem_min[i + 1] > *cap {
                        break;
                    }
                    let b = rat_binom(&(-rat_half(md) - Rat::from(Int::from(1))), (n - 1) as usize);
                    if !b.is_zero() {
                        let hit = heisenberg_apply(self.lat, md, *dir, v)?;
                        series_add(&mut next, e.clone() + &off, &hit, &Scalar::from_rat(b));
                    }
                    md -= 2;
                }
            }
            ser = next;
            if ser.is_empty() {
                return Ok(());
            }
        }
        ser = self.exp_creators(mu, true, &ser, cap)?;

        let scale = pref.scale_rat(&coeff);
        for (e, v) in &ser {
            let total = pref_exp.clone() + e;
            if win.contains(&total) {
                series_add(out, total, v, &scale);
            }
        }
        Ok(())
    }

    /// Twisted-sector operator of a homogeneous integer-mode state `v`
    /// (single coset point base), applied to a half-integer-mode state.
    pub fn ytw(
        &self,
        v: &FockVector,
        w: &FockVector,
        win: &Window,
    ) -> Result<OpSeries, crate::Error> {
        if v.is_zero() {
            return Ok(BTreeMap::new());
        }
        let mu = base_point(v).ok_or(FockError::InhomogeneousInput)?;
        if v.homogeneous_weight(self.lat).is_none() {
            return Err(FockError::InhomogeneousInput.into());
        }
        let mut out: OpSeries = BTreeMap::new();
        for (shift, vec) in self.delta_expansion(v)? {
            let inner_win = Window {
                lo: win.lo.clone() - &shift,
                hi: win.hi.clone() - &shift,
            };
            for (mono, c) in &vec.0 {
                let part = self.w_op(&mono.factors, &mu, w, &inner_win)?;
                for (e, pv) in &part {
                    series_add(&mut out, e + &shift, pv, c);
                }
            }
        }
        Ok(out)
    }

    /// Exponential operator of a ground point `e^λ` between half-integer
    /// sectors: leading coefficient sits at `z^{−⟨λ,λ⟩/2}` with scalar
    /// `2^{−⟨λ,λ⟩}`.
    pub fn twisted_exponential_coeffs(
        &self,
        lam: &DualVector,
        w: &FockVector,
        win: &Window,
    ) -> Result<OpSeries, crate::Error> {
        let lead = -self.lat.norm(lam)? / Rat::from(Int::from(2));
        if lead > win.hi {
            return Err(FockError::WindowTooSmall.into());
        }
        self.w_op(&[], lam, w, win)
    }

    /// Full sector-changing operator: the mode action of `v` tensored with
    /// the given ground-module map on the half-integer tensor factor.
    pub fn full_twisted_operator(
        &self,
        v: &FockVector,
        eta: &GMatrix,
        w: &FockVector,
        win: &Window,
    ) -> Result<OpSeries, crate::Error> {
        let ser = self.ytw(v, w, win)?;
        let mut out: OpSeries = BTreeMap::new();
        for (e, vec) in &ser {
            series_add(&mut out, e.clone(), &apply_ground_matrix(eta, vec), &Scalar::one());
        }
        Ok(out)
    }

    /// Module vertex operator of `e^α`, `α ∈ L`, between integer-mode
    /// sectors based in the coset of `lam`. Carries the extended 2-cocycle
    /// sign `ε(α,β)(−1)^{⟨α,λ⟩}` on `e^{λ+β}`.
    pub fn untwisted_vertex(
        &self,
        coc: &BilinearCocycle,
        alpha: &[Int],
        lam: &DualVector,
        v: &FockVector,
        win: &Window,
    ) -> Result<OpSeries, crate::Error> {
        let alpha_dual = DualVector::new(
            alpha.iter().map(|a| Rat::from(a.clone())).collect(),
        );
        let mut out: OpSeries = BTreeMap::new();
        for (mono, c) in &v.0 {
            let mu = match &mono.base {
                Base::Point(mu) => mu.clone(),
                Base::Ground(_) => return Err(FockError::InhomogeneousInput.into()),
            };
            let beta = mu.add(&lam.neg());
            let beta_int = beta
                .integer_coords()
                .ok_or(FockError::InhomogeneousInput)?;
            let mut sign = coc.eval_epsilon(alpha, &beta_int)?;
            let al_pairing = self.lat.inner_product(&alpha_dual, lam)?;
            assert!(al_pairing.is_integer(), "integral pairing with the base coset");
            if al_pairing.to_integer().to_i64().expect("small").rem_euclid(2) == 1 {
                sign = -sign;
            }
            let zero_exp = self.lat.inner_product(&alpha_dual, &mu)?;

            let mut shifted_mu = mu.coords.clone();
            for (j, a) in alpha.iter().enumerate() {
                shifted_mu[j] += Rat::from(a.clone());
            }
            let shifted = Monomial {
                factors: mono.factors.clone(),
                base: Base::Point(DualVector::new(shifted_mu)),
            };
            let mut ser: OpSeries = BTreeMap::new();
            series_add(
                &mut ser,
                Rat::zero(),
                &FockVector::single(shifted, Scalar::one()),
                &Scalar::one(),
            );
            ser = self.exp_annihilators(&alpha_dual, false, &ser)?;
            let cap = win.hi.clone() - &zero_exp;
            ser = self.exp_creators(&alpha_dual, false, &ser, &cap)?;

            let mut total_scale = c.clone();
            if sign < 0 {
                total_scale = -&total_scale;
            }
            for (e, pv) in &ser {
                let total = e + &zero_exp;
                if win.contains(&total) {
                    series_add(&mut out, total, pv, &total_scale);
                }
            }
        }
        Ok(out)
    }
}

fn base_point(v: &FockVector) -> Option<DualVector> {
    let mut mu: Option<DualVector> = None;
    for mono in v.0.keys() {
        match &mono.base {
            Base::Point(p) => match &mu {
                None => mu = Some(p.clone()),
                Some(q) if q == p => {}
                Some(_) => return None,
            },
            Base::Ground(_) => return None,
        }
    }
    mu
}

/// Apply a matrix to the ground-module index of every term.
pub fn apply_ground_matrix(m: &GMatrix, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (mono, c) in &v.0 {
        let t = match &mono.base {
            Base::Ground(t) => *t,
            Base::Point(_) => {
                out.add_term(mono.clone(), c.clone());
                continue;
            }
        };
        for (s, row) in m.iter().enumerate() {
            let g = &row[t];
            if g.is_zero() {
                continue;
            }
            let mut mono2 = mono.clone();
            mono2.base = Base::Ground(s);
            out.add_term(mono2, c * &Scalar::from_gauss(g.clone()));
        }
    }
    out
}

/// Translation generator: metric contraction of paired modes `(−1−k, k)`
/// over the parity of each term's sector.
pub fn l_minus1(lat: &Lattice, v: &FockVector) -> Result<FockVector, FockError> {
    let mut out = FockVector::zero();
    for (mono, c) in &v.0 {
        let single = FockVector::single(mono.clone(), c.clone());
        let start: Mode = match &mono.base {
            Base::Point(_) => 0,
            Base::Ground(_) => 1,
        };
        let mut kd = start;
        loop {
            let hit = pair_apply(lat, -kd - 2, kd, &single)?;
            out.add_scaled(&hit, &Scalar::one());
            if kd > mono.max_mode() {
                break;
            }
            kd += 2;
        }
    }
    Ok(out)
}
