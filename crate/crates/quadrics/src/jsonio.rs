//! JSON encodings for the values the command-line front end exchanges.
//!
//! Every number travels as an exact string, `"num/den"` or `"num"`, so no
//! value ever passes through floating point. Polynomials list
//! exponent-vector/coefficient pairs; quadratic forms accept either a
//! symmetric Gram matrix or a degree-2 polynomial and always print as a
//! Gram matrix; coefficients from a quadratic extension carry their
//! radicand as `{"a", "b", "m"}`.

use crate::linear::LinearForm;
use crate::poly::{Monomial, MultiPoly};
use crate::quadratic::QuadraticForm;
use crate::scalar::{Rat, Scalar};
use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("bad rational literal {0:?}")]
    BadRational(String),
    #[error("gram matrix must be square and symmetric")]
    BadGram,
    #[error("exponent vector has length {got}, expected {n}")]
    BadExponents { n: usize, got: usize },
    #[error("polynomial is not a homogeneous quadratic")]
    NotQuadratic,
}

/// Exact decimal-free rendering, `"num/den"`, or `"num"` for integers.
pub fn rat_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, ParseError> {
    let bad = || ParseError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// A scalar: a bare rational string, or `a + b*sqrt(m)` as an object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Rational(String),
    Ext { a: String, b: String, m: i64 },
}

pub fn scalar_to_json(x: &Scalar) -> ScalarJson {
    match x {
        Scalar::Rational(r) => ScalarJson::Rational(rat_string(r)),
        Scalar::Ext { a, b, m } => {
            ScalarJson::Ext { a: rat_string(a), b: rat_string(b), m: *m }
        }
    }
}

pub fn scalar_from_json(x: &ScalarJson) -> Result<Scalar, ParseError> {
    match x {
        ScalarJson::Rational(s) => Ok(Scalar::from_rat(parse_rat(s)?)),
        ScalarJson::Ext { a, b, m } => Ok(Scalar::ext(parse_rat(a)?, parse_rat(b)?, *m)),
    }
}

/// Sparse polynomial: arity plus `[[exponents], "coefficient"]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<(Vec<u32>, String)>,
}

pub fn poly_to_json(p: &MultiPoly) -> PolyJson {
    PolyJson {
        n: p.n(),
        terms: p.terms().map(|(m, c)| (m.exps().to_vec(), rat_string(c))).collect(),
    }
}

pub fn poly_from_json(p: &PolyJson) -> Result<MultiPoly, ParseError> {
    let mut terms = Vec::with_capacity(p.terms.len());
    for (exps, coeff) in &p.terms {
        if exps.len() != p.n {
            return Err(ParseError::BadExponents { n: p.n, got: exps.len() });
        }
        terms.push((Monomial::new(exps.clone()), parse_rat(coeff)?));
    }
    Ok(MultiPoly::from_terms(p.n, terms))
}

/// A quadratic form, as a symmetric Gram matrix or as a polynomial.
/// Output always uses the Gram shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuadJson {
    Gram { gram: Vec<Vec<String>> },
    Poly(PolyJson),
}

pub fn quad_to_json(q: &QuadraticForm) -> QuadJson {
    QuadJson::Gram {
        gram: q.gram().iter().map(|row| row.iter().map(rat_string).collect()).collect(),
    }
}

pub fn quad_from_json(q: &QuadJson) -> Result<QuadraticForm, ParseError> {
    match q {
        QuadJson::Gram { gram } => {
            let n = gram.len();
            let mut m = vec![vec![Rat::zero(); n]; n];
            for (i, row) in gram.iter().enumerate() {
                if row.len() != n {
                    return Err(ParseError::BadGram);
                }
                for (j, entry) in row.iter().enumerate() {
                    m[i][j] = parse_rat(entry)?;
                }
            }
            for i in 0..n {
                for j in 0..i {
                    if m[i][j] != m[j][i] {
                        return Err(ParseError::BadGram);
                    }
                }
            }
            Ok(QuadraticForm::from_gram(m))
        }
        QuadJson::Poly(p) => {
            QuadraticForm::from_poly(&poly_from_json(p)?).ok_or(ParseError::NotQuadratic)
        }
    }
}

pub fn linear_to_json(f: &LinearForm) -> Vec<ScalarJson> {
    f.coeffs().iter().map(scalar_to_json).collect()
}

pub fn linear_from_json(coeffs: &[ScalarJson]) -> Result<LinearForm, ParseError> {
    Ok(LinearForm::new(coeffs.iter().map(scalar_from_json).collect::<Result<_, _>>()?))
}

/// Input for `classify`: the pair and the family whose products vanish on
/// the pair's common zeros. Extra fields (seeds, expected witnesses from
/// `generate`) are ignored, so generated instances feed straight back in.
#[derive(Debug, Clone, Deserialize)]
pub struct ClassifyInput {
    pub a: QuadJson,
    pub b: QuadJson,
    pub qs: Vec<QuadJson>,
}

/// Input for `radical`: does `f` vanish on the common zeros of `gens`?
#[derive(Debug, Clone, Deserialize)]
pub struct RadicalInput {
    pub f: PolyJson,
    pub gens: Vec<PolyJson>,
}

/// Input for `sg-verify`, discriminated by `kind`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SgInput {
    /// Closure: every pair of forms spans a third member.
    Sg { forms: Vec<Vec<ScalarJson>> },
    /// Fraction of members each form pairs with to span a third.
    Delta { forms: Vec<Vec<ScalarJson>> },
    /// Three-group cross-closure.
    Ek { forms: Vec<Vec<ScalarJson>>, groups: Vec<Vec<usize>> },
    /// Pairwise products of quadratics vanish on common zeros.
    Main { qs: Vec<QuadJson> },
}

/// Input for `dim`: span dimension of a family of quadratics.
#[derive(Debug, Clone, Deserialize)]
pub struct DimInput {
    pub qs: Vec<QuadJson>,
}

/// Input for `pit`: a sum of up to three products of quadratics.
#[derive(Debug, Clone, Deserialize)]
pub struct PitInput {
    pub n: usize,
    pub gates: Vec<Vec<QuadJson>>,
    #[serde(default)]
    pub trials: Option<usize>,
}

/// Planted witness attached to generated instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum ExpectedJson {
    Split { alpha: String, beta: String, factors: Vec<Vec<ScalarJson>> },
    Plane { a: Vec<ScalarJson>, b: Vec<ScalarJson> },
}

/// Output of `generate`; a superset of [`ClassifyInput`], so the file can
/// be passed back to `classify` unchanged.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateOutput {
    pub case: String,
    pub n: usize,
    pub seed: u64,
    pub a: QuadJson,
    pub b: QuadJson,
    pub qs: Vec<QuadJson>,
    pub expected: ExpectedJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "7", "-3", "5/9", "-22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_string(&r), s);
        }
        assert_eq!(parse_rat("4/6").unwrap(), Rat::new(2.into(), 3.into()));
        assert_eq!(rat_string(&parse_rat("4/6").unwrap()), "2/3");
    }

    #[test]
    fn bad_rationals_are_rejected() {
        for s in ["", "x", "1/0", "1.5", "2/2/2"] {
            assert!(parse_rat(s).is_err(), "{s:?} must not parse");
        }
    }

    #[test]
    fn scalars_round_trip_through_json_text() {
        let values = [
            Scalar::from_rat(Rat::new(3.into(), 4.into())),
            Scalar::ext(rat_int(-1) / rat_int(2), rat_int(1) / rat_int(2), -3),
        ];
        for x in &values {
            let text = serde_json::to_string(&scalar_to_json(x)).unwrap();
            let back: ScalarJson = serde_json::from_str(&text).unwrap();
            assert_eq!(&scalar_from_json(&back).unwrap(), x);
        }
    }

    #[test]
    fn polynomials_round_trip() {
        let p = MultiPoly::var(3, 0)
            .mul(&MultiPoly::var(3, 1))
            .add(&MultiPoly::constant(3, Rat::new(1.into(), 2.into())));
        let j = poly_to_json(&p);
        assert_eq!(poly_from_json(&j).unwrap(), p);
        let text = serde_json::to_string(&j).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(poly_from_json(&back).unwrap(), p);
    }

    #[test]
    fn quadratics_parse_from_either_shape() {
        let q = QuadraticForm::product(2, 0, 1);
        let as_gram = quad_to_json(&q);
        let as_poly = QuadJson::Poly(poly_to_json(&q.to_poly()));
        assert_eq!(quad_from_json(&as_gram).unwrap(), q);
        assert_eq!(quad_from_json(&as_poly).unwrap(), q);
    }

    #[test]
    fn asymmetric_and_ragged_grams_are_rejected() {
        let bad = QuadJson::Gram {
            gram: vec![vec!["0".into(), "1".into()], vec!["2".into(), "0".into()]],
        };
        assert_eq!(quad_from_json(&bad), Err(ParseError::BadGram));
        let ragged = QuadJson::Gram { gram: vec![vec!["0".into()], vec!["0".into(), "0".into()]] };
        assert_eq!(quad_from_json(&ragged), Err(ParseError::BadGram));
    }

    #[test]
    fn cubic_polynomials_are_not_quadratics() {
        let cube = QuadJson::Poly(PolyJson { n: 1, terms: vec![(vec![3], "1".into())] });
        assert_eq!(quad_from_json(&cube), Err(ParseError::NotQuadratic));
    }

    #[test]
    fn sg_input_kinds_deserialize() {
        let text = r#"{"kind": "ek", "forms": [["1","0"],["0","1"],["1","1"]],
                       "groups": [[0],[1],[2]]}"#;
        let parsed: SgInput = serde_json::from_str(text).unwrap();
        match parsed {
            SgInput::Ek { forms, groups } => {
                assert_eq!(forms.len(), 3);
                assert_eq!(groups, vec![vec![0], vec![1], vec![2]]);
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }
}
