//! Binary forms (homogeneous polynomials in two variables), used for
//! pencils of quadratics: determinants and minors of `lambda*A + mu*B`
//! are binary forms whose roots pick out degenerate pencil members.
//!
//! Root extraction never factors large integers: rational roots are found
//! by Sturm-sequence isolation of the integer roots of an associated monic
//! polynomial, so it stays exact and fast even with huge coefficients.

use crate::poly::MultiPoly;
use crate::scalar::{rat_int, sqrt_as_scalar, Field, Rat, Scalar};
use num::{BigInt, One, Signed, Zero};

/// Homogeneous form of formal degree `coeffs.len() - 1`;
/// `coeffs[k]` multiplies `lambda^(d-k) mu^k`. Leading zeros are allowed
/// and record roots at `(1 : 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm<F> {
    pub coeffs: Vec<F>,
}

impl<F: Field> BinaryForm<F> {
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm { coeffs }
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.f_is_zero())
    }

    pub fn eval(&self, lam: &F, mu: &F) -> F {
        // Horner in lambda with mu powers folded in.
        let d = self.formal_degree();
        let mut acc = F::f_zero();
        for k in 0..=d {
            acc = acc.f_mul(lam).f_add(&self.coeffs[k].f_mul(&mu_pow(mu, k, d)));
        }
        acc
    }

    /// Multiplicity of the root `(1 : 0)`, i.e. the power of `mu` dividing
    /// the form.
    pub fn mu_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.f_is_zero()).count()
    }

    /// Dehomogenization: ascending coefficients in `t = lambda/mu` (with
    /// trailing zeros trimmed) and the extracted power of `mu`.
    fn to_univariate(&self) -> (Vec<F>, usize) {
        let mut u: Vec<F> = self.coeffs.iter().rev().cloned().collect();
        utrim(&mut u);
        let s = self.mu_multiplicity();
        (u, if self.is_zero() { 0 } else { s })
    }

    fn from_univariate(u: &[F], mu_power: usize) -> Self {
        let mut coeffs = vec![F::f_zero(); mu_power];
        coeffs.extend(u.iter().rev().cloned());
        if coeffs.is_empty() {
            coeffs.push(F::f_zero());
        }
        BinaryForm { coeffs }
    }

    /// Greatest common divisor as binary forms, monic in its leading
    /// coefficient. The gcd of two zero forms is zero.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (uf, sf) = self.to_univariate();
        let (ug, sg) = other.to_univariate();
        let h = ugcd(&uf, &ug);
        BinaryForm::from_univariate(&h, sf.min(sg))
    }
}

fn mu_pow<F: Field>(mu: &F, k: usize, _d: usize) -> F {
    let mut acc = F::f_one();
    for _ in 0..k {
        acc = acc.f_mul(mu);
    }
    acc
}

// Univariate helpers over a generic field, ascending coefficients.

fn utrim<F: Field>(v: &mut Vec<F>) {
    while v.last().is_some_and(F::f_is_zero) {
        v.pop();
    }
}

fn udeg<F: Field>(v: &[F]) -> usize {
    debug_assert!(!v.is_empty());
    v.len() - 1
}

fn urem<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    assert!(!b.is_empty());
    let mut r = a.to_vec();
    utrim(&mut r);
    while !r.is_empty() && udeg(&r) >= udeg(b) {
        let shift = udeg(&r) - udeg(b);
        let q = r.last().unwrap().f_div(b.last().unwrap());
        for (i, bc) in b.iter().enumerate() {
            let t = q.f_mul(bc);
            r[i + shift] = r[i + shift].f_sub(&t);
        }
        utrim(&mut r);
    }
    r
}

fn ugcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    utrim(&mut x);
    utrim(&mut y);
    while !y.is_empty() {
        let r = urem(&x, &y);
        x = y;
        y = r;
    }
    // Normalize monic.
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c = c.f_div(&lead);
        }
    }
    x
}

fn ueval_rat(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn uderiv_rat(p: &[Rat]) -> Vec<Rat> {
    if p.len() <= 1 {
        return vec![];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * rat_int(i as i64)).collect()
}

/// Sturm chain of a squarefree rational polynomial.
fn sturm_chain(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut chain = vec![p.to_vec(), uderiv_rat(p)];
    utrim(&mut chain[0]);
    utrim(&mut chain[1]);
    loop {
        let k = chain.len();
        if chain[k - 1].is_empty() {
            chain.pop();
            break;
        }
        let mut r = urem(&chain[k - 2], &chain[k - 1]);
        for c in &mut r {
            *c = -c.clone();
        }
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_variations(chain: &[Vec<Rat>], x: &Rat) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for p in chain {
        let v = ueval_rat(p, x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// All integer roots of a monic integer polynomial (any multiplicity),
/// found by Sturm bisection of the squarefree part. No factoring.
fn integer_roots_monic(q: &[BigInt]) -> Vec<BigInt> {
    let p: Vec<Rat> = q.iter().map(|c| Rat::from(c.clone())).collect();
    let dp = uderiv_rat(&p);
    let g = ugcd(&p, &dp);
    let sf = if udeg(&g) == 0 { p.clone() } else { udiv_exact(&p, &g) };
    let chain = sturm_chain(&sf);
    // Cauchy bound: every root has |s| <= 1 + max |a_k|.
    let bound: BigInt = q
        .iter()
        .take(q.len() - 1)
        .map(BigInt::abs)
        .max()
        .unwrap_or_else(BigInt::zero)
        + 1;
    let mut roots = Vec::new();
    let mut stack: Vec<(BigInt, BigInt)> = vec![(-(&bound) - 1, bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let vlo = sign_variations(&chain, &Rat::from(lo.clone()));
        let vhi = sign_variations(&chain, &Rat::from(hi.clone()));
        if vlo <= vhi {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if ueval_rat(&p, &Rat::from(hi.clone())).is_zero() {
                roots.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi) / 2;
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots
}

/// Exact quotient of rational polynomials (remainder must vanish).
fn udiv_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    utrim(&mut r);
    let mut q = vec![Rat::zero(); r.len().saturating_sub(b.len()) + 1];
    while !r.is_empty() && udeg(&r) >= udeg(b) {
        let shift = udeg(&r) - udeg(b);
        let c = r.last().unwrap() / b.last().unwrap();
        q[shift] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            r[i + shift] -= t;
        }
        utrim(&mut r);
    }
    assert!(r.is_empty(), "division was not exact");
    q
}

/// Distinct rational roots of a rational univariate polynomial,
/// via the monic integer transform `s = lead * t`.
fn rational_roots_univariate(p: &[Rat]) -> Vec<Rat> {
    let mut u = p.to_vec();
    utrim(&mut u);
    if u.len() <= 1 {
        return vec![];
    }
    // Clear denominators to integers.
    let mut denom_lcm = BigInt::one();
    for c in &u {
        denom_lcm = num::Integer::lcm(&denom_lcm, c.denom());
    }
    let ints: Vec<BigInt> = u.iter().map(|c| c.numer() * (&denom_lcm / c.denom())).collect();
    let d = ints.len() - 1;
    let lead = ints[d].clone();
    // q(s) = lead^(d-1) p(s/lead) is monic with integer coefficients:
    // q_k = a_k * lead^(d-1-k) for k < d, q_d = 1.
    let mut q = vec![BigInt::one(); d + 1];
    for k in 0..d {
        q[k] = &ints[k] * pow_big(&lead, d - 1 - k);
    }
    integer_roots_monic(&q)
        .into_iter()
        .map(|s| Rat::new(s, lead.clone()))
        .collect()
}

fn pow_big(b: &BigInt, e: usize) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// Outcome of factoring a rational binary form of degree at most 4 into
/// rational irreducibles.
#[derive(Clone, Debug)]
pub struct RationalSplit {
    /// Projective rational roots `(lambda, mu)` with multiplicities;
    /// includes `(1, 0)` when `mu` divides the form.
    pub roots: Vec<((Rat, Rat), usize)>,
    /// Irreducible rational quadratic factors (roots lie in one quadratic
    /// extension each).
    pub quadratics: Vec<BinaryForm<Rat>>,
    /// A factor of degree 3 or 4 irreducible over the rationals, whose
    /// roots need a field beyond one square root.
    pub deep_factor: Option<BinaryForm<Rat>>,
}

/// Factors a nonzero rational binary form of degree at most 4.
pub fn factor_rational(f: &BinaryForm<Rat>) -> RationalSplit {
    assert!(!f.is_zero(), "cannot factor the zero form");
    assert!(f.formal_degree() <= 4, "factorization implemented through degree 4");
    let mut roots: Vec<((Rat, Rat), usize)> = Vec::new();
    let (mut u, s) = f.to_univariate();
    if s > 0 {
        roots.push(((Rat::one(), Rat::zero()), s));
    }
    for r in rational_roots_univariate(&u) {
        let lin = vec![-r.clone(), Rat::one()]; // t - r
        let mut mult = 0;
        loop {
            let rem = urem(&u, &lin);
            if rem.is_empty() {
                u = udiv_exact(&u, &lin);
                mult += 1;
            } else {
                break;
            }
        }
        debug_assert!(mult > 0);
        roots.push(((r, Rat::one()), mult));
    }
    let mut quadratics = Vec::new();
    let mut deep_factor = None;
    match udeg(&u) {
        0 => {}
        2 => quadratics.push(primitive(&BinaryForm::from_univariate(&u, 0))),
        3 => deep_factor = Some(primitive(&BinaryForm::from_univariate(&u, 0))),
        4 => match split_quartic(&u) {
            Some((q1, q2)) => {
                quadratics.push(primitive(&BinaryForm::from_univariate(&q1, 0)));
                quadratics.push(primitive(&BinaryForm::from_univariate(&q2, 0)));
            }
            None => deep_factor = Some(primitive(&BinaryForm::from_univariate(&u, 0))),
        },
        d => unreachable!("degree {d} remainder after root extraction"),
    }
    RationalSplit { roots, quadratics, deep_factor }
}

/// Splits a rational quartic with no rational roots into two rational
/// quadratics, if possible, via the resolvent cubic.
fn split_quartic(u: &[Rat]) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let a = &u[4];
    // Monic: x^4 + p3 x^3 + p2 x^2 + p1 x + p0.
    let p3 = &u[3] / a;
    let p2 = &u[2] / a;
    let p1 = &u[1] / a;
    let p0 = &u[0] / a;
    // Depress with x = y - p3/4: y^4 + P y^2 + Q y + R.
    let sh = &p3 / rat_int(4);
    let pp = &p2 - rat_int(6) * &sh * &sh;
    let qq = &p1 - rat_int(2) * &p2 * &sh + rat_int(8) * &sh * &sh * &sh;
    let rr = &p0 - &p1 * &sh + &p2 * &sh * &sh - rat_int(3) * &sh * &sh * &sh * &sh;

    let try_split = |v: &Rat, w: &Rat, uu: &Rat| -> Option<(Vec<Rat>, Vec<Rat>)> {
        // Candidate: (y^2 + uu*y + v)(y^2 - uu*y + w); verify then un-depress.
        let f1 = vec![v.clone(), uu.clone(), Rat::one()];
        let f2 = vec![w.clone(), -uu.clone(), Rat::one()];
        let depressed = vec![rr.clone(), qq.clone(), pp.clone(), Rat::zero(), Rat::one()];
        if umul(&f1, &f2) != depressed {
            return None;
        }
        Some((ushift(&f1, &sh), ushift(&f2, &sh)))
    };

    if qq.is_zero() {
        // Biquadratic: either z^2 + P z + R splits rationally, or the form
        // splits as (y^2+ay+b)(y^2-ay+b) with b^2 = R.
        let disc = &pp * &pp - rat_int(4) * &rr;
        if let Some(sq) = crate::scalar::rat_sqrt_exact(&disc) {
            let z1 = (-&pp + &sq) / rat_int(2);
            let z2 = (-&pp - &sq) / rat_int(2);
            if let Some(out) = try_split(&-z1, &-z2, &Rat::zero()) {
                return Some(out);
            }
        }
        if let Some(b) = crate::scalar::rat_sqrt_exact(&rr) {
            for bb in [b.clone(), -b] {
                let a2 = rat_int(2) * &bb - &pp;
                if let Some(av) = crate::scalar::rat_sqrt_exact(&a2) {
                    if let Some(out) = try_split(&bb, &bb, &av) {
                        return Some(out);
                    }
                }
            }
        }
        return None;
    }
    // Resolvent cubic in z = uu^2: z^3 + 2P z^2 + (P^2 - 4R) z - Q^2.
    let res = vec![
        -(&qq * &qq),
        &pp * &pp - rat_int(4) * &rr,
        rat_int(2) * &pp,
        Rat::one(),
    ];
    for z in rational_roots_univariate(&res) {
        if !z.is_positive() {
            continue;
        }
        if let Some(uu) = crate::scalar::rat_sqrt_exact(&z) {
            let wv = &qq / &uu; // w - v
            let wpv = &pp + &z; // w + v
            let v = (&wpv - &wv) / rat_int(2);
            let w = (&wpv + &wv) / rat_int(2);
            if let Some(out) = try_split(&v, &w, &uu) {
                return Some(out);
            }
        }
    }
    None
}

fn umul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Substitutes `y = x + sh` (un-depressing a factor back to the original
/// variable), returning ascending coefficients in `x`.
fn ushift(p: &[Rat], sh: &Rat) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.len()];
    // p(x - sh)? No: factors are in y, original x = y - sh, so y = x + sh.
    for (k, c) in p.iter().enumerate() {
        // c * (x + sh)^k expanded by binomials.
        let mut binom = Rat::one();
        for j in 0..=k {
            // coefficient of x^(k-j): C(k, j) sh^j.
            let mut term = c * &binom;
            for _ in 0..j {
                term *= sh;
            }
            out[k - j] += term;
            binom = binom * rat_int((k - j) as i64) / rat_int((j + 1) as i64);
        }
    }
    out
}

/// Integer-primitive, positive-leading rescaling (canonical up to sign).
pub fn primitive(f: &BinaryForm<Rat>) -> BinaryForm<Rat> {
    let mut denom_lcm = BigInt::one();
    for c in &f.coeffs {
        denom_lcm = num::Integer::lcm(&denom_lcm, c.denom());
    }
    let mut g = BigInt::zero();
    for c in &f.coeffs {
        g = num::Integer::gcd(&g, &(c.numer() * (&denom_lcm / c.denom())));
    }
    if g.is_zero() {
        return f.clone();
    }
    let mut factor = Rat::new(denom_lcm, g);
    if let Some(lead) = f.coeffs.iter().find(|c| !c.is_zero()) {
        if (lead * &factor).is_negative() {
            factor = -factor;
        }
    }
    BinaryForm::new(f.coeffs.iter().map(|c| c * &factor).collect())
}

/// Projective roots of a rational binary quadratic, possibly in one
/// quadratic extension. Always succeeds; repeated roots are repeated.
pub fn quadratic_roots(f: &BinaryForm<Rat>) -> Vec<(Scalar, Scalar)> {
    assert_eq!(f.formal_degree(), 2);
    let c0 = &f.coeffs[0];
    let c1 = &f.coeffs[1];
    let c2 = &f.coeffs[2];
    if c0.is_zero() {
        let mut roots = vec![(Scalar::one(), Scalar::zero())];
        if c1.is_zero() {
            assert!(!c2.is_zero(), "zero form has no roots");
            roots.push((Scalar::one(), Scalar::zero()));
        } else {
            roots.push((Scalar::from_rat(-c2 / c1), Scalar::one()));
        }
        return roots;
    }
    let disc = c1 * c1 - rat_int(4) * c0 * c2;
    let delta = sqrt_as_scalar(&disc);
    let two_c0 = Scalar::from_rat(rat_int(2) * c0);
    let mc1 = Scalar::from_rat(-c1.clone());
    vec![
        (mc1.add(&delta).div(&two_c0), Scalar::one()),
        (mc1.sub(&delta).div(&two_c0), Scalar::one()),
    ]
}

/// Projective roots of a binary quadratic with scalar coefficients, if
/// they lie in `Q(sqrt(ambient_m))` (no new extension is adjoined).
pub fn quadratic_roots_in_field(
    f: &BinaryForm<Scalar>,
    ambient_m: Option<i64>,
) -> Option<Vec<(Scalar, Scalar)>> {
    assert_eq!(f.formal_degree(), 2);
    let c0 = &f.coeffs[0];
    let c1 = &f.coeffs[1];
    let c2 = &f.coeffs[2];
    if c0.is_zero() {
        let mut roots = vec![(Scalar::one(), Scalar::zero())];
        if c1.is_zero() {
            assert!(!c2.is_zero());
            roots.push((Scalar::one(), Scalar::zero()));
        } else {
            roots.push((c2.div(c1).neg(), Scalar::one()));
        }
        return Some(roots);
    }
    let disc = c1.mul(c1).sub(&Scalar::from_int(4).mul(&c0.mul(c2)));
    let delta = crate::scalar::sqrt_in_q_sqrt(&disc, ambient_m)?;
    let two_c0 = Scalar::from_int(2).mul(c0);
    let mc1 = c1.neg();
    Some(vec![
        (mc1.add(&delta).div(&two_c0), Scalar::one()),
        (mc1.sub(&delta).div(&two_c0), Scalar::one()),
    ])
}

/// Root of a scalar linear binary form.
pub fn linear_root(f: &BinaryForm<Scalar>) -> (Scalar, Scalar) {
    assert_eq!(f.formal_degree(), 1);
    if f.coeffs[0].is_zero() {
        (Scalar::one(), Scalar::zero())
    } else {
        (f.coeffs[1].div(&f.coeffs[0]).neg(), Scalar::one())
    }
}

/// Writes `f = c * E^2` with `E` a rational binary form, when possible.
pub fn binary_square_root(f: &BinaryForm<Rat>) -> Option<(Rat, BinaryForm<Rat>)> {
    if f.is_zero() {
        return None;
    }
    let (u, s) = f.to_univariate();
    if s % 2 != 0 || udeg(&u) % 2 != 0 {
        return None;
    }
    let h = udeg(&u) / 2;
    let c = u[udeg(&u)].clone();
    // Formal square root by descending coefficient matching on u / c.
    let mut e = vec![Rat::zero(); h + 1];
    e[h] = Rat::one();
    for k in (0..h).rev() {
        // Coefficient of t^(h+k) in E^2 equals u[h+k]/c.
        let mut acc = Rat::zero();
        for j in k + 1..h {
            if h + k >= j && h + k - j <= h {
                acc += &e[j] * &e[h + k - j];
            }
        }
        e[k] = (&u[h + k] / &c - acc) / rat_int(2);
    }
    let esq: Vec<Rat> = umul(&e, &e).iter().map(|x| x * &c).collect();
    if esq != u {
        return None;
    }
    Some((c, BinaryForm::from_univariate(&e, s / 2)))
}

/// Converts a homogeneous polynomial in two variables to a binary form;
/// `None` for the zero polynomial or an inhomogeneous one.
pub fn from_pencil_poly(p: &MultiPoly) -> Option<BinaryForm<Rat>> {
    assert_eq!(p.n(), 2);
    if p.is_zero() {
        return None;
    }
    let d = p.total_degree() as usize;
    let mut coeffs = vec![Rat::zero(); d + 1];
    for (m, c) in p.terms() {
        if m.deg() as usize != d {
            return None;
        }
        coeffs[m.exps()[1] as usize] = c.clone();
    }
    Some(BinaryForm::new(coeffs))
}
