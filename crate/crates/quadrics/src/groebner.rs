//! Buchberger's algorithm with explicit work budgets, plus ideal and
//! radical membership built on it.
//!
//! Every routine is exact; when a budget runs out the caller gets a
//! [`CapExceeded`] error, never a wrong answer. Radical membership uses
//! the trick of adjoining `1 - t*f` in a fresh last variable: `f` lies in
//! the radical of the ideal exactly when that saturated ideal is the whole
//! ring, i.e. its Groebner basis contains a nonzero constant.

use crate::poly::{Monomial, MonomialOrder, MultiPoly};
use crate::scalar::Rat;
use num::{One, Zero};
use std::cmp::Ordering;

/// Work limits for basis computations. Exceeding any limit aborts with a
/// distinct error so callers can report "undecided" rather than guess.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Maximum number of S-pairs processed.
    pub max_pairs: usize,
    /// Maximum number of terms live in any single reduction.
    pub max_terms: usize,
    /// Maximum number of basis elements.
    pub max_basis: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 20_000, max_terms: 50_000, max_basis: 400 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CapExceeded {
    #[error("S-pair budget exhausted ({0} pairs processed)")]
    Pairs(usize),
    #[error("term budget exceeded during reduction ({0} live terms)")]
    Terms(usize),
    #[error("basis size budget exceeded ({0} elements)")]
    Basis(usize),
}

/// Polynomial as a list of terms sorted descending in a fixed order.
#[derive(Clone, Debug)]
struct OPoly {
    terms: Vec<(Monomial, Rat)>,
}

impl OPoly {
    fn from_poly(p: &MultiPoly, ord: MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, Rat)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        OPoly { terms }
    }

    fn to_poly(&self, n: usize) -> MultiPoly {
        MultiPoly::from_terms(n, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &Rat {
        &self.terms[0].1
    }

    fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_constant()
    }

    /// `self - c * m * g`, merging two descending term lists.
    fn sub_mul(&self, c: &Rat, m: &Monomial, g: &OPoly, ord: MonomialOrder) -> OPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < g.terms.len() {
            let gm = g.terms[j].0.mul(m);
            match ord.cmp(&self.terms[i].0, &gm) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm, -(c * &g.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = &self.terms[i].1 - c * &g.terms[j].1;
                    if !coeff.is_zero() {
                        out.push((gm, coeff));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (gm, gc) in &g.terms[j..] {
            out.push((gm.mul(m), -(c * gc)));
        }
        OPoly { terms: out }
    }

    /// Rescales so integer coefficients are coprime and the leading
    /// coefficient is positive. Keeps numbers small across reductions.
    fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        use num::Signed;
        let mut denom_lcm = num::BigInt::one();
        for (_, c) in &self.terms {
            denom_lcm = num::Integer::lcm(&denom_lcm, c.denom());
        }
        let mut numer_gcd = num::BigInt::zero();
        for (_, c) in &self.terms {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = num::Integer::gcd(&numer_gcd, &scaled);
        }
        let mut factor = Rat::new(denom_lcm, numer_gcd);
        if (self.lc() * &factor).is_negative() {
            factor = -factor;
        }
        for (_, c) in &mut self.terms {
            *c *= &factor;
        }
    }

    fn make_monic(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let lead = self.lc().clone();
        for (_, c) in &mut self.terms {
            *c /= &lead;
        }
    }
}

/// Fully reduces `p` against `basis`; the remainder has no term divisible
/// by any basis leading monomial.
fn reduce(
    p: &OPoly,
    basis: &[OPoly],
    ord: MonomialOrder,
    max_terms: usize,
) -> Result<OPoly, CapExceeded> {
    let mut work = p.clone();
    let mut remainder: Vec<(Monomial, Rat)> = Vec::new();
    while !work.is_zero() {
        if work.terms.len() + remainder.len() > max_terms {
            return Err(CapExceeded::Terms(work.terms.len() + remainder.len()));
        }
        let lm = work.lm().clone();
        if let Some(g) = basis.iter().find(|g| !g.is_zero() && g.lm().divides(&lm)) {
            let q = lm.quotient(g.lm());
            let c = work.lc() / g.lc();
            work = work.sub_mul(&c, &q, g, ord);
        } else {
            let mut rest = work.terms.split_off(1);
            remainder.append(&mut work.terms);
            std::mem::swap(&mut work.terms, &mut rest);
        }
    }
    Ok(OPoly { terms: remainder })
}

fn s_poly(f: &OPoly, g: &OPoly, ord: MonomialOrder) -> OPoly {
    let l = f.lm().lcm(g.lm());
    let mf = l.quotient(f.lm());
    let mg = l.quotient(g.lm());
    // (1/lc_f) m_f f - (1/lc_g) m_g g; start from the first product.
    let scaled_f = OPoly {
        terms: f.terms.iter().map(|(m, c)| (m.mul(&mf), c / f.lc())).collect(),
    };
    scaled_f.sub_mul(&(Rat::one() / g.lc()), &mg, g, ord)
}

/// Computes the reduced Groebner basis of the ideal generated by `gens`.
///
/// The result is monic, interreduced, and sorted by leading monomial, so
/// equal ideals yield identical bases. An ideal containing a nonzero
/// constant yields the basis `[1]`.
pub fn groebner_basis(
    gens: &[MultiPoly],
    ord: MonomialOrder,
    budget: &Budget,
) -> Result<Vec<MultiPoly>, CapExceeded> {
    let n = gens.first().map_or(0, MultiPoly::n);
    let mut basis: Vec<OPoly> = Vec::new();
    for g in gens {
        assert_eq!(g.n(), n, "generators must share one polynomial ring");
        if !g.is_zero() {
            let mut p = OPoly::from_poly(g, ord);
            p.make_primitive();
            basis.push(p);
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    if basis.iter().any(OPoly::is_unit_constant) {
        return Ok(vec![MultiPoly::one(n)]);
    }

    // Pending S-pairs, kept sorted so the smallest lcm is processed first.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    let mut processed = 0usize;
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let la = basis[pairs[a].0].lm().lcm(basis[pairs[a].1].lm());
                let lb = basis[pairs[b].0].lm().lcm(basis[pairs[b].1].lm());
                ord.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        if basis[i].lm().coprime_with(basis[j].lm()) {
            continue;
        }
        let lij = basis[i].lm().lcm(basis[j].lm());
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lij)
                && !pairs.contains(&pair_key(i, k))
                && !pairs.contains(&pair_key(j, k))
        });
        if chain {
            continue;
        }
        processed += 1;
        if processed > budget.max_pairs {
            return Err(CapExceeded::Pairs(processed));
        }
        let s = s_poly(&basis[i], &basis[j], ord);
        let mut r = reduce(&s, &basis, ord, budget.max_terms)?;
        if r.is_zero() {
            continue;
        }
        r.make_primitive();
        if r.is_unit_constant() {
            return Ok(vec![MultiPoly::one(n)]);
        }
        let t = basis.len();
        if t + 1 > budget.max_basis {
            return Err(CapExceeded::Basis(t + 1));
        }
        for k in 0..t {
            pairs.push((k, t));
        }
        basis.push(r);
    }

    // Interreduction: drop elements whose leading monomial another leading
    // monomial divides, then fully reduce each against the others.
    let mut keep: Vec<OPoly> = Vec::new();
    for i in 0..basis.len() {
        let lm = basis[i].lm();
        let redundant = basis.iter().enumerate().any(|(j, g)| {
            j != i && g.lm().divides(lm) && (g.lm() != lm || j < i)
        });
        if !redundant {
            keep.push(basis[i].clone());
        }
    }
    let mut reduced: Vec<OPoly> = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<OPoly> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let mut r = reduce(&keep[i], &others, ord, budget.max_terms)?;
        if !r.is_zero() {
            r.make_monic();
            reduced.push(r);
        }
    }
    reduced.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    Ok(reduced.iter().map(|p| p.to_poly(n)).collect())
}

fn pair_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Remainder of `f` on division by `basis` (need not be a Groebner basis;
/// the remainder is canonical when it is).
pub fn normal_form(
    f: &MultiPoly,
    basis: &[MultiPoly],
    ord: MonomialOrder,
    max_terms: usize,
) -> Result<MultiPoly, CapExceeded> {
    let obasis: Vec<OPoly> =
        basis.iter().filter(|g| !g.is_zero()).map(|g| OPoly::from_poly(g, ord)).collect();
    let r = reduce(&OPoly::from_poly(f, ord), &obasis, ord, max_terms)?;
    Ok(r.to_poly(f.n()))
}

/// Whether every S-polynomial of the set reduces to zero, i.e. the set is
/// already a Groebner basis in the given order.
pub fn is_groebner_basis(basis: &[MultiPoly], ord: MonomialOrder) -> bool {
    let obasis: Vec<OPoly> =
        basis.iter().filter(|g| !g.is_zero()).map(|g| OPoly::from_poly(g, ord)).collect();
    for i in 0..obasis.len() {
        for j in i + 1..obasis.len() {
            let s = s_poly(&obasis[i], &obasis[j], ord);
            match reduce(&s, &obasis, ord, usize::MAX) {
                Ok(r) if r.is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}

/// Exact ideal membership: `f` lies in the ideal generated by `gens`.
pub fn ideal_member(
    f: &MultiPoly,
    gens: &[MultiPoly],
    ord: MonomialOrder,
    budget: &Budget,
) -> Result<bool, CapExceeded> {
    if f.is_zero() {
        return Ok(true);
    }
    let gb = groebner_basis(gens, ord, budget)?;
    Ok(normal_form(f, &gb, ord, budget.max_terms)?.is_zero())
}

/// Exact radical membership: some power of `f` lies in the ideal
/// generated by `gens`. Decided by adjoining `1 - t*f` in a fresh last
/// variable and testing whether the resulting ideal is the whole ring.
pub fn radical_member(
    f: &MultiPoly,
    gens: &[MultiPoly],
    budget: &Budget,
) -> Result<bool, CapExceeded> {
    radical_member_ordered(f, gens, MonomialOrder::DegRevLex, budget)
}

pub fn radical_member_ordered(
    f: &MultiPoly,
    gens: &[MultiPoly],
    ord: MonomialOrder,
    budget: &Budget,
) -> Result<bool, CapExceeded> {
    if f.is_zero() {
        return Ok(true);
    }
    let n = f.n();
    let mut lifted: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| extend_ring(g, n + 1))
        .collect();
    let t = MultiPoly::var(n + 1, n);
    lifted.push(MultiPoly::one(n + 1).sub(&t.mul(&extend_ring(f, n + 1))));
    let gb = groebner_basis(&lifted, ord, budget)?;
    Ok(gb.len() == 1 && gb[0].is_nonzero_constant())
}

/// Reinterprets `p` in a ring with more variables (appended at the end).
pub fn extend_ring(p: &MultiPoly, n_new: usize) -> MultiPoly {
    assert!(n_new >= p.n());
    MultiPoly::from_terms(
        n_new,
        p.terms().map(|(m, c)| {
            let mut exps = m.exps().to_vec();
            exps.resize(n_new, 0);
            (Monomial::new(exps), c.clone())
        }),
    )
}
