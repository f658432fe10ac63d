//! Linear forms in `n` variables and spaces of linear forms with a
//! canonical reduced-row-echelon basis.

use crate::mat::{self, Matrix};
use crate::scalar::{Rat, Scalar};
use num::Zero;
use std::fmt;

/// A linear form `c_0 x_0 + ... + c_{n-1} x_{n-1}` with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<Scalar>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_rats(coeffs: Vec<Rat>) -> Self {
        LinearForm { coeffs: coeffs.into_iter().map(Scalar::Rational).collect() }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinearForm { coeffs: coeffs.iter().map(|&c| Scalar::from_int(c)).collect() }
    }

    /// The coordinate form `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); n];
        coeffs[i] = Scalar::one();
        LinearForm { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![Scalar::zero(); n] }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    /// Rational coefficient vector, if every coefficient is rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rat>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    /// The single extension discriminant appearing in the coefficients,
    /// if any. Panics if two different extensions appear.
    pub fn ext_m(&self) -> Option<i64> {
        let mut m = None;
        for c in &self.coeffs {
            if let Some(cm) = c.ext_m() {
                match m {
                    None => m = Some(cm),
                    Some(prev) if prev == cm => {}
                    Some(prev) => panic!("mixed quadratic extensions in one form: {prev}, {cm}"),
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LinearForm { coeffs: self.coeffs.iter().map(Scalar::neg).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        LinearForm { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (c, p) in self.coeffs.iter().zip(point) {
            acc = acc.add(&c.mul(p));
        }
        acc
    }

    /// Scales so the first nonzero coefficient is 1; zero forms unchanged.
    /// Proportional forms share one canonical unit, across extensions.
    pub fn canonical_unit(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv()),
        }
    }

    pub fn proportional_to(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.canonical_unit() == other.canonical_unit()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = display_sign(c);
            if first {
                if sign < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == Scalar::one() {
                write!(f, "x{i}")?;
            } else if mag.is_rational() {
                write!(f, "{mag}*x{i}")?;
            } else {
                write!(f, "({mag})*x{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Splits a scalar into a display sign and the corresponding magnitude-like
/// representative (rational part sign decides for extension elements).
fn display_sign(c: &Scalar) -> (i32, Scalar) {
    use num::Signed;
    let negative = match c {
        Scalar::Rational(a) => a.is_negative(),
        Scalar::Ext { a, b, .. } => {
            if a.is_zero() {
                b.is_negative()
            } else {
                a.is_negative()
            }
        }
    };
    if negative {
        (-1, c.neg())
    } else {
        (1, c.clone())
    }
}

/// A space of linear forms, stored as a canonical RREF basis, so equal
/// spaces compare equal structurally.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearSpace {
    n: usize,
    basis: Vec<LinearForm>,
}

impl LinearSpace {
    /// Span of the given forms in `n` variables.
    pub fn span(n: usize, forms: &[LinearForm]) -> Self {
        let mut rows: Matrix<Scalar> = forms
            .iter()
            .map(|f| {
                assert_eq!(f.n(), n, "form arity mismatch");
                f.coeffs().to_vec()
            })
            .collect();
        let pivots = mat::rref(&mut rows);
        let basis = rows
            .into_iter()
            .take(pivots.len())
            .map(LinearForm::new)
            .collect();
        LinearSpace { n, basis }
    }

    pub fn zero(n: usize) -> Self {
        LinearSpace { n, basis: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LinearForm] {
        &self.basis
    }

    pub fn is_rational(&self) -> bool {
        self.basis.iter().all(LinearForm::is_rational)
    }

    pub fn contains(&self, form: &LinearForm) -> bool {
        let mut rows: Matrix<Scalar> =
            self.basis.iter().map(|f| f.coeffs().to_vec()).collect();
        rows.push(form.coeffs().to_vec());
        mat::rank(&rows) == self.dim()
    }

    /// Coordinates of `form` in the basis, if the form lies in the space.
    pub fn coordinates(&self, form: &LinearForm) -> Option<Vec<Scalar>> {
        let cols: Matrix<Scalar> = (0..self.n)
            .map(|j| self.basis.iter().map(|f| f.coeffs()[j].clone()).collect())
            .collect();
        mat::solve(&cols, form.coeffs())
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut forms = self.basis.clone();
        forms.extend(other.basis.clone());
        LinearSpace::span(self.n, &forms)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        // Rows alpha with alpha^T U = beta^T V give intersection vectors;
        // solve [U^T | -V^T] kernel and read off the U-combinations.
        let d1 = self.dim();
        let d2 = other.dim();
        if d1 == 0 || d2 == 0 {
            return LinearSpace::zero(self.n);
        }
        let system: Matrix<Scalar> = (0..self.n)
            .map(|j| {
                let mut row: Vec<Scalar> =
                    self.basis.iter().map(|f| f.coeffs()[j].clone()).collect();
                row.extend(other.basis.iter().map(|f| f.coeffs()[j].neg()));
                row
            })
            .collect();
        let kernel = mat::kernel_basis(&system, d1 + d2);
        let forms: Vec<LinearForm> = kernel
            .iter()
            .map(|v| {
                let mut acc = LinearForm::zero(self.n);
                for (i, f) in self.basis.iter().enumerate() {
                    acc = acc.add(&f.scale(&v[i]));
                }
                acc
            })
            .collect();
        LinearSpace::span(self.n, &forms)
    }

    /// Basis of the point space `{x : f(x) = 0 for all f in the space}`.
    pub fn vanishing_points(&self) -> Vec<Vec<Scalar>> {
        let rows: Matrix<Scalar> = self.basis.iter().map(|f| f.coeffs().to_vec()).collect();
        mat::kernel_basis(&rows, self.n)
    }
}

impl fmt::Debug for LinearSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// True when no two of the forms are proportional (and none is zero).
pub fn pairwise_independent(forms: &[LinearForm]) -> bool {
    for (i, f) in forms.iter().enumerate() {
        if f.is_zero() {
            return false;
        }
        for g in &forms[i + 1..] {
            if f.proportional_to(g) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_reduces_to_canonical_basis() {
        let n = 3;
        let f1 = LinearForm::from_ints(&[1, 1, 0]);
        let f2 = LinearForm::from_ints(&[0, 1, 1]);
        let f3 = LinearForm::from_ints(&[1, 2, 1]); // f1 + f2
        let s = LinearSpace::span(n, &[f1.clone(), f2.clone(), f3.clone()]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&f3));
        assert!(!s.contains(&LinearForm::var(n, 0)));
        let coords = s.coordinates(&f3).unwrap();
        let rebuilt = s.basis()[0].scale(&coords[0]).add(&s.basis()[1].scale(&coords[1]));
        assert_eq!(rebuilt, f3);
    }

    #[test]
    fn intersection_of_spans() {
        let n = 3;
        let a = LinearSpace::span(n, &[LinearForm::var(n, 0), LinearForm::var(n, 1)]);
        let b = LinearSpace::span(
            n,
            &[LinearForm::from_ints(&[1, 1, 0]), LinearForm::var(n, 2)],
        );
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&LinearForm::from_ints(&[2, 2, 0])));
    }

    #[test]
    fn vanishing_points_annihilate_the_space() {
        let n = 4;
        let s = LinearSpace::span(n, &[LinearForm::var(n, 0), LinearForm::from_ints(&[0, 1, -1, 0])]);
        let pts = s.vanishing_points();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            for f in s.basis() {
                assert!(f.eval(p).is_zero());
            }
        }
    }

    #[test]
    fn proportionality_is_canonical() {
        let f = LinearForm::from_ints(&[2, -4, 0]);
        let g = LinearForm::from_ints(&[-1, 2, 0]);
        assert!(f.proportional_to(&g));
        assert!(!f.proportional_to(&LinearForm::var(3, 0)));
        assert_eq!(f.canonical_unit(), g.canonical_unit());
    }
}
