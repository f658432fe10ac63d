//! Sparse multivariate polynomials with exact rational coefficients,
//! monomial orders, and Sylvester resultants.

use crate::scalar::Rat;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Power product of the variables, with cached total degree.
///
/// The derived ordering is graded reverse lexicographic, so a
/// `BTreeMap<Monomial, _>` yields the leading term as its last entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n], deg: 0 }
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; n];
        exps[i] = e;
        Monomial { exps, deg: e }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn is_constant(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, deg: self.deg + other.deg }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Quotient `self / divisor`; caller guarantees divisibility.
    pub fn quotient(&self, divisor: &Self) -> Self {
        let exps = self.exps.iter().zip(&divisor.exps).map(|(a, b)| a - b).collect();
        Monomial { exps, deg: self.deg - divisor.deg }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime_with(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Graded reverse lexicographic comparison (`Greater` means larger monomial).
pub fn cmp_degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.deg.cmp(&b.deg) {
        Ordering::Equal => {
            for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                match x.cmp(y) {
                    Ordering::Equal => {}
                    // Smaller exponent in the last differing variable wins.
                    other => return other.reverse(),
                }
            }
            Ordering::Equal
        }
        other => other,
    }
}

/// Lexicographic comparison with `x0 > x1 > ...`.
pub fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exps.iter().zip(&b.exps) {
        match x.cmp(y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => cmp_degrevlex(a, b),
            MonomialOrder::Lex => cmp_lex(a, b),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_degrevlex(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sparse multivariate polynomial over the rationals. Terms are stored
/// with nonzero coefficients only, keyed canonically, so structural
/// equality is polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        let mut p = MultiPoly::zero(n);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        MultiPoly::constant(n, Rat::one())
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut p = MultiPoly::zero(n);
        p.terms.insert(Monomial::var(n, i, 1), Rat::one());
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MultiPoly::zero(n);
        for (m, c) in terms {
            assert_eq!(m.n(), n, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::deg).max().unwrap_or(0)
    }

    /// The constant term's coefficient.
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Monomial::one(self.n)).cloned().unwrap_or_else(Rat::zero)
    }

    /// True when the polynomial is a nonzero constant.
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_constant()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "arity mismatch");
        let mut out = MultiPoly::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Product with a cap on intermediate term counts; `None` when the cap
    /// is exceeded.
    pub fn mul_capped(&self, other: &Self, max_terms: usize) -> Option<Self> {
        if self.num_terms().saturating_mul(other.num_terms()) > max_terms.saturating_mul(4) {
            return None;
        }
        let out = self.mul(other);
        (out.num_terms() <= max_terms).then_some(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = MultiPoly::one(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Leading term under the given order.
    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Rat)> {
        match order {
            MonomialOrder::DegRevLex => self.terms.iter().next_back(),
            MonomialOrder::Lex => self.terms.iter().max_by(|a, b| cmp_lex(a.0, b.0)),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn exact_divide(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.n, d.n, "arity mismatch");
        assert!(!d.is_zero(), "division by zero polynomial");
        let order = MonomialOrder::DegRevLex;
        let (dm, dc) = d.leading(order).map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut r = self.clone();
        let mut q = MultiPoly::zero(self.n);
        while !r.is_zero() {
            let (rm, rc) = r.leading(order).map(|(m, c)| (m.clone(), c.clone())).unwrap();
            if !dm.divides(&rm) {
                return None;
            }
            let tm = rm.quotient(&dm);
            let tc = rc / &dc;
            let t = MultiPoly::from_terms(self.n, [(tm, tc)]);
            q = q.add(&t);
            r = r.sub(&t.mul(d));
        }
        Some(q)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.n, "point arity mismatch");
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Ring homomorphism sending `x_i` to `images[i]`; all images must share
    /// one arity.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.n, "one image per variable required");
        let out_n = images.first().map_or(0, MultiPoly::n);
        // Memoized powers of each image, built on demand.
        let mut powers: Vec<Vec<MultiPoly>> =
            images.iter().map(|p| vec![MultiPoly::one(out_n), p.clone()]).collect();
        let mut out = MultiPoly::zero(out_n);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(out_n, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Degree in one variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exps()[var]).max().unwrap_or(0)
    }

    /// Coefficients of `self` as a univariate polynomial in `var`, each a
    /// polynomial in the remaining variables (entry `k` multiplies `var^k`).
    pub fn coeffs_in_var(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.n); d + 1];
        for (m, c) in &self.terms {
            let k = m.exps()[var] as usize;
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            out[k].add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Divides by the rational content and fixes the leading sign, giving
    /// coprime integer coefficients with a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = num::BigInt::one();
        for c in self.terms.values() {
            denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
        }
        let mut numer_gcd = num::BigInt::zero();
        for c in self.terms.values() {
            let scaled = c * Rat::from(denom_lcm.clone());
            numer_gcd = num::integer::gcd(numer_gcd, scaled.numer().clone());
        }
        let mut factor = Rat::new(denom_lcm, numer_gcd);
        let lead = self.leading(MonomialOrder::DegRevLex).unwrap().1;
        if (lead * &factor).is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_constant() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Resultant of `f` and `g` with respect to `var`, as the determinant of
/// the Sylvester matrix over the remaining variables.
///
/// Conventions for degenerate degrees: if both degrees in `var` are zero
/// the resultant is 1; if exactly one is zero, say `f`, the result is
/// `f^deg(g)`. Inputs must be nonzero.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: usize) -> MultiPoly {
    assert!(!f.is_zero() && !g.is_zero(), "resultant of zero polynomial");
    let n = f.n();
    let p = f.degree_in(var) as usize;
    let q = g.degree_in(var) as usize;
    if p == 0 && q == 0 {
        return MultiPoly::one(n);
    }
    if p == 0 {
        return f.pow(q as u32);
    }
    if q == 0 {
        return g.pow(p as u32);
    }
    let fc = f.coeffs_in_var(var);
    let gc = g.coeffs_in_var(var);
    let size = p + q;
    // Row i < q holds the coefficients of x^(q-1-i) * f, descending powers.
    let mut sylvester = vec![vec![MultiPoly::zero(n); size]; size];
    for i in 0..q {
        for (k, c) in fc.iter().enumerate() {
            sylvester[i][i + (p - k)] = c.clone();
        }
    }
    for i in 0..p {
        for (k, c) in gc.iter().enumerate() {
            sylvester[q + i][i + (q - k)] = c.clone();
        }
    }
    poly_det(&sylvester)
}

/// Determinant of a small matrix of polynomials by Laplace expansion with
/// memoization on row subsets.
pub(crate) fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let size = m.len();
    let n = m[0][0].n();
    let mut memo: std::collections::HashMap<u64, MultiPoly> = std::collections::HashMap::new();
    fn go(
        m: &[Vec<MultiPoly>],
        rows_mask: u64,
        col: usize,
        n: usize,
        memo: &mut std::collections::HashMap<u64, MultiPoly>,
    ) -> MultiPoly {
        if rows_mask == 0 {
            return MultiPoly::one(n);
        }
        if let Some(hit) = memo.get(&rows_mask) {
            return hit.clone();
        }
        let mut acc = MultiPoly::zero(n);
        let mut pos = 0usize;
        for i in 0..m.len() {
            if rows_mask & (1 << i) == 0 {
                continue;
            }
            if !m[i][col].is_zero() {
                let sub = go(m, rows_mask & !(1 << i), col + 1, n, memo);
                let contrib = m[i][col].mul(&sub);
                acc = if pos % 2 == 1 { acc.sub(&contrib) } else { acc.add(&contrib) };
            }
            pos += 1;
        }
        memo.insert(rows_mask, acc.clone());
        acc
    }
    go(m, (1u64 << size) - 1, 0, n, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn p(n: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            n,
            terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), rat_int(*c))),
        )
    }

    #[test]
    fn degrevlex_orders_by_degree_then_reverse_lex() {
        // x0^2 > x0*x1 > x1^2 > x0 under degrevlex.
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        assert_eq!(cmp_degrevlex(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(cmp_degrevlex(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(cmp_degrevlex(&m(&[0, 2]), &m(&[1, 0])), Ordering::Greater);
        // Standard discriminating example: x0*x2 vs x1^2 in three variables.
        assert_eq!(cmp_degrevlex(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(cmp_lex(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn arithmetic_cancels_terms() {
        let a = p(2, &[(&[2, 0], 1), (&[0, 1], 3)]);
        let b = p(2, &[(&[2, 0], -1), (&[1, 0], 2)]);
        let s = a.add(&b);
        assert_eq!(s, p(2, &[(&[0, 1], 3), (&[1, 0], 2)]));
        let prod = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]).mul(&p(2, &[(&[1, 0], 1), (&[0, 1], -1)]));
        assert_eq!(prod, p(2, &[(&[2, 0], 1), (&[0, 2], -1)]));
    }

    #[test]
    fn exact_division_and_failure() {
        let f = p(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let d = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let q = f.exact_divide(&d).unwrap();
        assert_eq!(q.mul(&d), f);
        assert!(p(2, &[(&[2, 0], 1), (&[0, 0], 1)]).exact_divide(&d).is_none());
    }

    #[test]
    fn substitution_is_a_ring_map() {
        // f(x0, x1) = x0^2 + x1 under x0 -> y0 + y1, x1 -> y0*y1.
        let f = p(2, &[(&[2, 0], 1), (&[0, 1], 1)]);
        let images = vec![
            p(2, &[(&[1, 0], 1), (&[0, 1], 1)]),
            p(2, &[(&[1, 1], 1)]),
        ];
        let g = f.substitute(&images);
        assert_eq!(g, p(2, &[(&[2, 0], 1), (&[1, 1], 3), (&[0, 2], 1)]));
    }

    #[test]
    fn resultant_of_shared_factor_vanishes() {
        // f = (x0 + x1) * x0, g = (x0 + x1) * (x0 - x1) share a factor.
        let f = p(2, &[(&[2, 0], 1), (&[1, 1], 1)]);
        let g = p(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        assert!(resultant(&f, &g, 0).is_zero());
        // Coprime pair has nonzero resultant.
        let h = p(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        assert!(!resultant(&f, &h, 0).is_zero());
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let f = p(2, &[(&[1, 0], -4), (&[0, 1], -6)]).scale(&rat(1, 9));
        let prim = f.primitive_part();
        assert_eq!(prim, p(2, &[(&[1, 0], 2), (&[0, 1], 3)]));
    }
}
