//! Variable-reducing substitutions: a map sends every form of a chosen
//! space `V` to a rational multiple of one fresh variable `z` and fixes a
//! coordinate complement. Images live in `n + 1` variables with `z` last;
//! nothing is ever silently re-embedded into the source ring.

use crate::linear::{LinearForm, LinearSpace};
use crate::mat::{self, Matrix};
use crate::poly::MultiPoly;
use crate::quadratic::QuadraticForm;
use crate::scalar::Rat;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ring homomorphism determined by `v_i -> alpha_i * z` on a basis of `V`
/// and `u -> u` on the complementary coordinate forms.
///
/// The map is linear on forms and multiplicative on products, so images
/// of polynomials are computed by exact substitution.
#[derive(Debug, Clone)]
pub struct ProjectionMap {
    space: LinearSpace,
    alpha: Vec<Rat>,
    complement: Vec<usize>,
    /// Image of each source coordinate, in n + 1 variables.
    images: Vec<MultiPoly>,
}

impl ProjectionMap {
    /// Builds the map for a rational space and one coefficient per basis
    /// form. The fresh variable is index `n`.
    pub fn new(space: LinearSpace, alpha: Vec<Rat>) -> Self {
        assert_eq!(alpha.len(), space.dim(), "one coefficient per basis form");
        assert!(space.is_rational(), "projection space must be rational");
        let n = space.n();
        let delta = space.dim();
        let basis: Matrix<Rat> = space
            .basis()
            .iter()
            .map(|f| f.rational_coeffs().expect("rational space"))
            .collect();
        // Complement: coordinates at the non-pivot columns of the basis.
        let mut rr = basis.clone();
        let pivots = if delta > 0 { mat::rref(&mut rr) } else { Vec::new() };
        let complement: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        // Columns of the dual change of basis: basis vectors then unit
        // vectors at complement coordinates. Invertible by construction.
        let mut cols: Matrix<Rat> = basis.clone();
        for &c in &complement {
            let mut e = vec![Rat::zero(); n];
            e[c] = Rat::one();
            cols.push(e);
        }
        let col_matrix = mat::transpose(&cols);
        let inv = mat::invert(&col_matrix).expect("basis plus complement is a basis");
        // x_k = sum_i y_i v_i + sum_j y_(delta+j) u_j with y = inv * e_k,
        // i.e. y over columns of inv^T; image substitutes v_i -> alpha_i z.
        let z = MultiPoly::var(n + 1, n);
        let images: Vec<MultiPoly> = (0..n)
            .map(|k| {
                let mut img = MultiPoly::zero(n + 1);
                for i in 0..delta {
                    img = img.add(&z.scale(&(&inv[i][k] * &alpha[i])));
                }
                for (j, &c) in complement.iter().enumerate() {
                    img = img.add(&MultiPoly::var(n + 1, c).scale(&inv[delta + j][k]));
                }
                img
            })
            .collect();
        ProjectionMap { space, alpha, complement, images }
    }

    /// Map with a freshly sampled coefficient vector (see [`sample_alpha`]).
    pub fn sampled(space: LinearSpace, seed: u64) -> Self {
        let alpha = sample_alpha(space.dim(), seed);
        ProjectionMap::new(space, alpha)
    }

    /// Source arity; images live in `n() + 1` variables.
    pub fn n(&self) -> usize {
        self.space.n()
    }

    /// Index of the fresh variable in the image ring.
    pub fn z_index(&self) -> usize {
        self.space.n()
    }

    pub fn space(&self) -> &LinearSpace {
        &self.space
    }

    pub fn alpha(&self) -> &[Rat] {
        &self.alpha
    }

    /// Coordinates fixed by the map.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Image of a rational linear form, in `n + 1` variables.
    pub fn apply_linear(&self, f: &LinearForm) -> MultiPoly {
        assert_eq!(f.n(), self.n(), "arity mismatch");
        let coeffs = f.rational_coeffs().expect("rational form required");
        let mut img = MultiPoly::zero(self.n() + 1);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                img = img.add(&self.images[k].scale(c));
            }
        }
        img
    }

    /// Image of a polynomial, in `n + 1` variables. Multiplicative:
    /// `apply(f * g) = apply(f) * apply(g)` exactly.
    pub fn apply_poly(&self, p: &MultiPoly) -> MultiPoly {
        assert_eq!(p.n(), self.n(), "arity mismatch");
        p.substitute(&self.images)
    }

    /// Image of a quadratic form, in `n + 1` variables.
    pub fn apply_quadratic(&self, q: &QuadraticForm) -> MultiPoly {
        assert_eq!(q.n(), self.n(), "arity mismatch");
        self.apply_poly(&q.to_poly())
    }
}

/// Fixed denominator of sampled coefficients; numerators are uniform in
/// `[1, 2^31]`, so each coordinate ranges over 2^31 values in `(0, 1]`.
/// One random evaluation of a nonzero polynomial of degree `d` vanishes
/// with probability at most `d / 2^31` (Schwartz-Zippel), below `2^-20`
/// per trial for every degree handled here; the library never asserts
/// probability-1 statements, only tests do, with seeds recorded.
const ALPHA_DENOM: u64 = 1 << 31;

/// Seeded coefficient vector for a projection, `delta` rationals in `(0, 1]`.
pub fn sample_alpha(delta: usize, seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..delta)
        .map(|_| Rat::new(rng.gen_range(1..=ALPHA_DENOM).into(), ALPHA_DENOM.into()))
        .collect()
}

/// Re-expresses a polynomial in a wider ring with unchanged variable
/// indices (fresh trailing variables are unused).
pub fn widen(p: &MultiPoly, extra: usize) -> MultiPoly {
    let n = p.n();
    let images: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n + extra, i)).collect();
    p.substitute(&images)
}
