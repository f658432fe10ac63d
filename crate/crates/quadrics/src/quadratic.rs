//! Quadratic forms over the rationals: symmetric Gram matrices, rank
//! invariants, minimal pair representations, restriction to the zero set
//! of a space of linear forms, and span arithmetic on sets of forms.
//!
//! Conventions: `Q(x) = x^T M x` with `M` symmetric, so the coefficient of
//! `x_i*x_j` (`i != j`) is `2*M[i][j]` and the coefficient of `x_i^2` is
//! `M[i][i]`. The zero form has rank 0 and an empty minimal space.

use crate::linear::{LinearForm, LinearSpace};
use crate::mat::{self, Matrix};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::{rat_int, sqrt_as_scalar, Rat, Scalar};
use num::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    n: usize,
    gram: Matrix<Rat>,
}

impl QuadraticForm {
    /// Builds a form from its Gram matrix; panics if not symmetric.
    pub fn from_gram(gram: Matrix<Rat>) -> Self {
        let n = gram.len();
        for row in &gram {
            assert_eq!(row.len(), n, "Gram matrix must be square");
        }
        for i in 0..n {
            for j in 0..i {
                assert_eq!(gram[i][j], gram[j][i], "Gram matrix must be symmetric");
            }
        }
        QuadraticForm { n, gram }
    }

    pub fn zero(n: usize) -> Self {
        QuadraticForm { n, gram: vec![vec![Rat::zero(); n]; n] }
    }

    /// The monomial `x_i * x_j` (or `x_i^2` when `i == j`).
    pub fn product(n: usize, i: usize, j: usize) -> Self {
        let mut q = QuadraticForm::zero(n);
        if i == j {
            q.gram[i][i] = Rat::one();
        } else {
            let half = Rat::new(1.into(), 2.into());
            q.gram[i][j] = half.clone();
            q.gram[j][i] = half;
        }
        q
    }

    pub fn square(n: usize, i: usize) -> Self {
        QuadraticForm::product(n, i, i)
    }

    /// The product `a * b` of two rational linear forms.
    pub fn mul_linear(a: &LinearForm, b: &LinearForm) -> Self {
        assert_eq!(a.n(), b.n());
        let av = a.rational_coeffs().expect("rational form required");
        let bv = b.rational_coeffs().expect("rational form required");
        let n = av.len();
        let mut gram = vec![vec![Rat::zero(); n]; n];
        let half = Rat::new(1.into(), 2.into());
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = (&av[i] * &bv[j] + &av[j] * &bv[i]) * &half;
            }
        }
        QuadraticForm { n, gram }
    }

    /// The square `l^2` of a rational linear form.
    pub fn square_linear(l: &LinearForm) -> Self {
        QuadraticForm::mul_linear(l, l)
    }

    /// The product `a * b` of two linear forms with possibly irrational
    /// coefficients, when the product itself is rational; conjugate pairs
    /// over one extension qualify. `None` when a coefficient survives.
    pub fn try_mul_linear(a: &LinearForm, b: &LinearForm) -> Option<Self> {
        assert_eq!(a.n(), b.n());
        let n = a.n();
        let half = Scalar::Rational(Rat::new(1.into(), 2.into()));
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let t = a.coeffs()[i]
                    .mul(&b.coeffs()[j])
                    .add(&b.coeffs()[i].mul(&a.coeffs()[j]))
                    .mul(&half);
                gram[i][j] = t.as_rational()?.clone();
            }
        }
        Some(QuadraticForm { n, gram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &Matrix<Rat> {
        &self.gram
    }

    pub fn is_zero(&self) -> bool {
        self.gram.iter().all(|row| row.iter().all(Rat::is_zero))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let gram = self
            .gram
            .iter()
            .zip(&other.gram)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect();
        QuadraticForm { n: self.n, gram }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let gram = self.gram.iter().map(|r| r.iter().map(|a| a * c).collect()).collect();
        QuadraticForm { n: self.n, gram }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.gram[i][j].is_zero() {
                    acc += &self.gram[i][j] * &x[i] * &x[j];
                }
            }
        }
        acc
    }

    /// Polar bilinear form `B(x, y) = (Q(x+y) - Q(x) - Q(y)) / 2`.
    pub fn bilinear(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.gram[i][j].is_zero() {
                    acc += &self.gram[i][j] * &x[i] * &y[j];
                }
            }
        }
        acc
    }

    /// Gram matrix lifted into scalar entries, for extension-field work.
    pub(crate) fn gram_scalar(&self) -> Matrix<Scalar> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|c| Scalar::Rational(c.clone())).collect())
            .collect()
    }

    /// Rank of the Gram matrix.
    pub fn rank(&self) -> usize {
        mat::rank(&self.gram)
    }

    /// Minimal number of products `a_k * b_k` of linear forms summing to
    /// the form over an algebraically closed field: `ceil(rank / 2)`.
    pub fn product_rank(&self) -> usize {
        self.rank().div_ceil(2)
    }

    /// Irreducible over the complex numbers: not a product of two linear
    /// forms, equivalently Gram rank at least 3.
    pub fn is_irreducible(&self) -> bool {
        self.rank() >= 3
    }

    /// The span of the linear forms appearing in any minimal representation:
    /// the row space of the Gram matrix.
    pub fn minimal_space(&self) -> LinearSpace {
        let forms: Vec<LinearForm> =
            self.gram.iter().map(|row| LinearForm::from_rats(row.clone())).collect();
        LinearSpace::span(self.n, &forms)
    }

    /// Restriction to the zero set of `space`: substitutes each pivot
    /// variable of the reduced basis by its expression in the free
    /// variables, embedded back in all `n` variables.
    ///
    /// The space must consist of rational forms.
    pub fn restrict(&self, space: &LinearSpace) -> Self {
        assert_eq!(space.n(), self.n, "arity mismatch");
        assert!(space.is_rational(), "restriction requires a rational space");
        if space.dim() == 0 {
            return self.clone();
        }
        let basis: Vec<Vec<Rat>> =
            space.basis().iter().map(|f| f.rational_coeffs().unwrap()).collect();
        let mut b = basis.clone();
        let pivots = mat::rref(&mut b);
        // sigma(e_j) = e_j - sum_k B[k][j] e_{p_k} for free j; sigma(e_p) = 0.
        let mut sigma = vec![vec![Rat::zero(); self.n]; self.n];
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for j in 0..self.n {
            if pivot_set.contains(&j) {
                continue;
            }
            sigma[j][j] = Rat::one();
            for (k, &p) in pivots.iter().enumerate() {
                sigma[p][j] = -b[k][j].clone();
            }
        }
        // M' = sigma^T M sigma.
        let st = mat::transpose(&sigma);
        let ms = mat::mat_mul(&self.gram, &sigma);
        let gram = mat::mat_mul(&st, &ms);
        QuadraticForm { n: self.n, gram }
    }

    /// Whether `self - other` lies in the ideal generated by `space`, i.e.
    /// the two forms agree on the zero set of the space.
    pub fn congruent_mod(&self, other: &Self, space: &LinearSpace) -> bool {
        self.sub(other).restrict(space).is_zero()
    }

    /// Gram matrix of the restriction to the common zero set of the given
    /// forms, expressed in a kernel basis. Works over extensions.
    pub(crate) fn restricted_gram(&self, forms: &[LinearForm]) -> Matrix<Scalar> {
        let rows: Matrix<Scalar> = forms.iter().map(|f| f.coeffs().to_vec()).collect();
        let kernel = mat::kernel_basis(&rows, self.n);
        let mg = self.gram_scalar();
        let k = kernel.len();
        let mut out = vec![vec![Scalar::zero(); k]; k];
        for i in 0..k {
            let mki = mat::mat_vec(&mg, &kernel[i]);
            for j in 0..k {
                let mut acc = Scalar::zero();
                for (a, b) in kernel[j].iter().zip(&mki) {
                    acc = acc.add(&a.mul(b));
                }
                out[i][j] = acc;
            }
        }
        out
    }

    /// True when the form vanishes identically on the common zero set of
    /// the given (possibly irrational) linear forms.
    pub fn vanishes_on_zero_set(&self, forms: &[LinearForm]) -> bool {
        self.restricted_gram(forms).iter().all(|row| row.iter().all(Scalar::is_zero))
    }

    /// Writes the form as exactly `product_rank` products of linear forms
    /// whose joint span is the minimal space.
    ///
    /// Pairs are rational whenever a rational pairing exists; otherwise a
    /// pair uses one quadratic extension. Distinct pairs may require
    /// distinct extensions (no single extension suffices for, e.g.,
    /// definite forms of rank 4 with non-square discriminant).
    pub fn minimal_representation(&self) -> Vec<(LinearForm, LinearForm)> {
        let mut m = self.gram.clone();
        let n = self.n;
        let mut pairs: Vec<(LinearForm, LinearForm)> = Vec::new();
        // Squares c * (s . x)^2 collected for pairing afterwards.
        let mut squares: Vec<(Rat, Vec<Rat>)> = Vec::new();
        loop {
            if let Some(i) = (0..n).find(|&i| !m[i][i].is_zero()) {
                let c = m[i][i].clone();
                let row = m[i].clone();
                for a in 0..n {
                    for b in 0..n {
                        let t = &row[a] * &row[b] / &c;
                        m[a][b] -= t;
                    }
                }
                squares.push((c.recip(), row));
            } else if let Some((i, j)) = first_offdiag(&m) {
                let two_mij = rat_int(2) * &m[i][j];
                // u, v collect the cross terms with the other variables.
                let mut u = vec![Rat::zero(); n];
                let mut v = vec![Rat::zero(); n];
                for k in 0..n {
                    if k != i && k != j {
                        u[k] = rat_int(2) * &m[i][k];
                        v[k] = rat_int(2) * &m[j][k];
                    }
                }
                // Q = (x_i + v/(2 m_ij)) * (2 m_ij x_j + u) + remainder.
                let mut a = vec![Rat::zero(); n];
                a[i] = Rat::one();
                for k in 0..n {
                    let t = &v[k] / &two_mij;
                    a[k] += t;
                }
                let mut b = u.clone();
                b[j] += &two_mij;
                for p in 0..n {
                    for q in 0..n {
                        let t = (&a[p] * &b[q] + &b[p] * &a[q]) / rat_int(2);
                        m[p][q] -= t;
                    }
                }
                pairs.push((LinearForm::from_rats(a), LinearForm::from_rats(b)));
            } else {
                break;
            }
        }
        pair_up_squares(&mut pairs, squares);
        debug_assert_eq!(pairs.len(), self.product_rank());
        pairs
    }

    /// Factors a form of Gram rank 1 or 2 into two linear forms with
    /// `a * b = Q`, over the rationals or one quadratic extension.
    /// Returns `None` for the zero form and for ranks above 2.
    pub fn factor(&self) -> Option<(LinearForm, LinearForm)> {
        match self.rank() {
            1 | 2 => Some(self.minimal_representation().remove(0)),
            _ => None,
        }
    }

    /// Applies the substitution `x = C y`: returns the form `y -> Q(C y)`.
    pub fn change_of_variables(&self, c: &Matrix<Rat>) -> Self {
        let ct = mat::transpose(c);
        let mc = mat::mat_mul(&self.gram, c);
        let gram = mat::mat_mul(&ct, &mc);
        QuadraticForm::from_gram(gram)
    }

    /// Conversion from a homogeneous degree-2 polynomial (or zero).
    pub fn from_poly(p: &MultiPoly) -> Option<Self> {
        let n = p.n();
        let mut q = QuadraticForm::zero(n);
        for (m, c) in p.terms() {
            if m.deg() != 2 {
                return None;
            }
            let support: Vec<usize> = (0..n).filter(|&i| m.exps()[i] > 0).collect();
            match support.as_slice() {
                [i] => q.gram[*i][*i] = c.clone(),
                [i, j] => {
                    let half = c / rat_int(2);
                    q.gram[*i][*j] = half.clone();
                    q.gram[*j][*i] = half;
                }
                _ => unreachable!("degree-2 monomial touches at most two variables"),
            }
        }
        Some(q)
    }

    pub fn to_poly(&self) -> MultiPoly {
        let n = self.n;
        let mut terms = Vec::new();
        for i in 0..n {
            if !self.gram[i][i].is_zero() {
                terms.push((Monomial::var(n, i, 2), self.gram[i][i].clone()));
            }
            for j in i + 1..n {
                if !self.gram[i][j].is_zero() {
                    let mut exps = vec![0u32; n];
                    exps[i] = 1;
                    exps[j] = 1;
                    terms.push((Monomial::new(exps), rat_int(2) * &self.gram[i][j]));
                }
            }
        }
        MultiPoly::from_terms(n, terms)
    }
}

fn first_offdiag(m: &Matrix<Rat>) -> Option<(usize, usize)> {
    let n = m.len();
    for i in 0..n {
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Signed squarefree class of a nonzero rational, as an i128-ranged key.
fn square_class(c: &Rat) -> num::BigInt {
    let (_, m) = crate::scalar::squarefree_decompose(&(c.numer() * c.denom()));
    m
}

/// Merges collected squares `c_k (s_k . x)^2` into products, preferring
/// rational pairings: `c1 s1^2 + c2 s2^2 = c1 (s1 + mu s2)(s1 - mu s2)`
/// with `mu = sqrt(-c2/c1)`.
fn pair_up_squares(pairs: &mut Vec<(LinearForm, LinearForm)>, squares: Vec<(Rat, Vec<Rat>)>) {
    let mut remaining: Vec<(Rat, Vec<Rat>)> = squares;
    // Rational merges first: classes kappa and -kappa cancel.
    let mut i = 0;
    while i < remaining.len() {
        let target = -square_class(&remaining[i].0);
        if let Some(j) =
            (i + 1..remaining.len()).find(|&j| square_class(&remaining[j].0) == target)
        {
            let (c2, s2) = remaining.remove(j);
            let (c1, s1) = remaining.remove(i);
            pairs.push(merge_squares(c1, s1, c2, s2));
        } else {
            i += 1;
        }
    }
    // Same-class merges share the extension sqrt(-1); what is left gets
    // greedy adjacent pairing, one extension per pair.
    let mut i = 0;
    while i < remaining.len() {
        let cls = square_class(&remaining[i].0);
        if let Some(j) = (i + 1..remaining.len()).find(|&j| square_class(&remaining[j].0) == cls)
        {
            let (c2, s2) = remaining.remove(j);
            let (c1, s1) = remaining.remove(i);
            pairs.push(merge_squares(c1, s1, c2, s2));
        } else {
            i += 1;
        }
    }
    while remaining.len() >= 2 {
        let (c2, s2) = remaining.remove(1);
        let (c1, s1) = remaining.remove(0);
        pairs.push(merge_squares(c1, s1, c2, s2));
    }
    if let Some((c, s)) = remaining.pop() {
        let s_form = LinearForm::from_rats(s);
        pairs.push((s_form.scale(&Scalar::Rational(c)), s_form));
    }
}

fn merge_squares(c1: Rat, s1: Vec<Rat>, c2: Rat, s2: Vec<Rat>) -> (LinearForm, LinearForm) {
    let mu = sqrt_as_scalar(&(-&c2 / &c1));
    let f1 = LinearForm::from_rats(s1);
    let f2 = LinearForm::from_rats(s2);
    let a = f1.add(&f2.scale(&mu)).scale(&Scalar::Rational(c1));
    let b = f1.sub(&f2.scale(&mu));
    (a, b)
}

/// Dimension of the linear span of a set of quadratic forms, viewed as
/// vectors of Gram entries.
pub fn span_dimension(forms: &[QuadraticForm]) -> usize {
    let rows: Matrix<Rat> = forms.iter().map(flatten).collect();
    mat::rank(&rows)
}

/// Coefficients `(alpha, beta)` with `Q = alpha A + beta B`, if they exist.
pub fn in_span(q: &QuadraticForm, a: &QuadraticForm, b: &QuadraticForm) -> Option<(Rat, Rat)> {
    let cols: Matrix<Rat> = {
        let fa = flatten(a);
        let fb = flatten(b);
        fa.into_iter().zip(fb).map(|(x, y)| vec![x, y]).collect()
    };
    mat::solve(&cols, &flatten(q)).map(|v| (v[0].clone(), v[1].clone()))
}

/// True when no two forms in the set are proportional and none is zero.
pub fn pairwise_independent(forms: &[QuadraticForm]) -> bool {
    let flat: Vec<Vec<Rat>> = forms.iter().map(flatten).collect();
    for (i, f) in flat.iter().enumerate() {
        if f.iter().all(Rat::is_zero) {
            return false;
        }
        for g in &flat[i + 1..] {
            let mut rows = vec![f.clone(), g.clone()];
            if mat::rref(&mut rows).len() < 2 {
                return false;
            }
        }
    }
    true
}

/// Two forms are proportional (spanning the same line, both nonzero).
pub fn proportional(a: &QuadraticForm, b: &QuadraticForm) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let mut rows = vec![flatten(a), flatten(b)];
    mat::rref(&mut rows).len() == 1
}

fn flatten(q: &QuadraticForm) -> Vec<Rat> {
    let n = q.n();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            v.push(q.gram()[i][j].clone());
        }
    }
    v
}

/// Joint minimal space of a set of forms: the sum of the row spaces.
pub fn joint_minimal_space(forms: &[QuadraticForm]) -> LinearSpace {
    let n = forms.first().map_or(0, QuadraticForm::n);
    let mut rows: Vec<LinearForm> = Vec::new();
    for q in forms {
        rows.extend(q.gram().iter().map(|r| LinearForm::from_rats(r.clone())));
    }
    LinearSpace::span(n, &rows)
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::ops::Add for &QuadraticForm {
    type Output = QuadraticForm;
    fn add(self, rhs: &QuadraticForm) -> QuadraticForm {
        QuadraticForm::add(self, rhs)
    }
}

impl std::ops::Sub for &QuadraticForm {
    type Output = QuadraticForm;
    fn sub(self, rhs: &QuadraticForm) -> QuadraticForm {
        QuadraticForm::sub(self, rhs)
    }
}

impl std::ops::Neg for &QuadraticForm {
    type Output = QuadraticForm;
    fn neg(self) -> QuadraticForm {
        QuadraticForm::neg(self)
    }
}
