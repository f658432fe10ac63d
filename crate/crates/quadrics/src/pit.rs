//! Zero testing for sums of up to three products of quadratic forms.
//!
//! The deterministic route is exact expansion under a term budget; the
//! randomized route evaluates gate by gate at seeded rational points and
//! is one-sided (a zero polynomial never reports nonzero). For circuits
//! that do expand to zero, every pair of factors taken from the second
//! and third gates certifies the first gate's product in its radical,
//! and a subset of at most four first-gate factors suffices.

use crate::groebner::{radical_member, Budget, CapExceeded};
use crate::mat::{self, Matrix};
use crate::poly::MultiPoly;
use crate::quadratic::{joint_minimal_space, QuadraticForm};
use crate::scalar::Rat;
use crate::structure::{gupta_reduce_with_budget, SubsetError};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A sum of one to three products of nonzero quadratic forms. Scalars are
/// folded into the factors; there are no top-level constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Vec<QuadraticForm>>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Vec<QuadraticForm>>) -> Self {
        assert!((1..=3).contains(&gates.len()), "between one and three gates");
        for gate in &gates {
            assert!(!gate.is_empty(), "every gate needs at least one factor");
            for q in gate {
                assert_eq!(q.n(), n, "factor arity mismatch");
                assert!(!q.is_zero(), "factors must be nonzero");
            }
        }
        Circuit { n, gates }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Vec<QuadraticForm>] {
        &self.gates
    }

    /// Largest factor count over the gates.
    pub fn max_gate_degree(&self) -> usize {
        self.gates.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The computed polynomial, fully expanded, within a live-term budget.
    pub fn expand(&self, max_terms: usize) -> Result<MultiPoly, TermCap> {
        let mut total = MultiPoly::zero(self.n);
        for gate in &self.gates {
            let mut prod = MultiPoly::one(self.n);
            for q in gate {
                prod = prod
                    .mul_capped(&q.to_poly(), max_terms)
                    .ok_or(TermCap { max_terms })?;
            }
            total = total.add(&prod);
            if total.num_terms() > max_terms {
                return Err(TermCap { max_terms });
            }
        }
        Ok(total)
    }

    /// Exact evaluation at a point, gate by gate, without expansion.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for gate in &self.gates {
            let mut prod = Rat::one();
            for q in gate {
                prod *= q.eval(point);
                if prod.is_zero() {
                    break;
                }
            }
            total += prod;
        }
        total
    }
}

/// Expansion abandoned: an intermediate or final polynomial exceeded the
/// term budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("expansion exceeded the budget of {max_terms} terms")]
pub struct TermCap {
    pub max_terms: usize,
}

/// Default expansion budget.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;

/// Decides zeroness by exact expansion under the default term budget.
pub fn expand_zero_test(c: &Circuit) -> Result<bool, TermCap> {
    expand_zero_test_capped(c, DEFAULT_TERM_CAP)
}

/// Decides zeroness by exact expansion under an explicit term budget.
pub fn expand_zero_test_capped(c: &Circuit, max_terms: usize) -> Result<bool, TermCap> {
    Ok(c.expand(max_terms)?.is_zero())
}

/// One-sided randomized verdict: a nonzero evaluation is a proof of
/// nonzeroness; survival of all trials is only consistency with zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SzOutcome {
    ProbablyNonzero { trial: usize, witness: Vec<Rat> },
    ConsistentWithZero { trials: usize },
}

/// Evaluates the circuit at seeded random integer points whose coordinates
/// range over at least `2^20 * (2 d)` values, `2 d` the total degree, so a
/// nonzero circuit survives one trial with probability below `2^-20`.
pub fn schwartz_zippel_test(c: &Circuit, trials: usize, seed: u64) -> SzOutcome {
    assert!(trials >= 1, "at least one trial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = (1u64 << 21) * (c.max_gate_degree().max(1) as u64);
    for trial in 0..trials {
        let point: Vec<Rat> = (0..c.n()).map(|_| rat_u64(rng.gen_range(0..span))).collect();
        if !c.eval(&point).is_zero() {
            return SzOutcome::ProbablyNonzero { trial, witness: point };
        }
    }
    SzOutcome::ConsistentWithZero { trials }
}

fn rat_u64(x: u64) -> Rat {
    Rat::from_integer(x.into())
}

/// Radical membership of the first gate's product against one factor from
/// each of the other gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    /// Factor index in the second gate.
    pub j2: usize,
    /// Factor index in the third gate.
    pub j3: usize,
    /// Oracle verdict for the full first-gate product.
    pub confirmed: bool,
    /// Indices of at most four first-gate factors whose product already
    /// lies in the radical, when one was found within budget.
    pub subset: Option<Vec<usize>>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ReportError {
    #[error("the circuit does not expand to zero")]
    NotZero,
    #[error("the per-pair analysis needs exactly three gates, got {0}")]
    GateCount(usize),
    #[error("expansion pre-check failed: {0}")]
    Expansion(#[from] TermCap),
    #[error("radical oracle exceeded its budget: {0}")]
    Oracle(#[from] CapExceeded),
}

/// For a three-gate circuit that expands to zero, checks for every factor
/// pair `(j2, j3)` from gates two and three that the first gate's product
/// lies in the radical of the pair's ideal, and records a certifying
/// subset of at most four first-gate factors.
pub fn gate_radical_report(c: &Circuit) -> Result<Vec<PairCheck>, ReportError> {
    gate_radical_report_with(c, &Budget::default())
}

/// As [`gate_radical_report`], with an explicit oracle budget.
pub fn gate_radical_report_with(
    c: &Circuit,
    budget: &Budget,
) -> Result<Vec<PairCheck>, ReportError> {
    if c.gates().len() != 3 {
        return Err(ReportError::GateCount(c.gates().len()));
    }
    if !expand_zero_test(c)? {
        return Err(ReportError::NotZero);
    }
    let first = &c.gates()[0];
    let product = first
        .iter()
        .fold(MultiPoly::one(c.n()), |acc, q| acc.mul(&q.to_poly()));
    let mut checks = Vec::new();
    for (j2, q2) in c.gates()[1].iter().enumerate() {
        for (j3, q3) in c.gates()[2].iter().enumerate() {
            let confirmed = radical_member(&product, &[q2.to_poly(), q3.to_poly()], budget)?;
            let subset = if confirmed {
                match gupta_reduce_with_budget(first, q2, q3, budget) {
                    Ok(subset) => Some(subset),
                    Err(SubsetError::Oracle(cap)) => return Err(ReportError::Oracle(cap)),
                    Err(SubsetError::NoSubset) => None,
                }
            } else {
                None
            };
            checks.push(PairCheck { j2, j3, confirmed, subset });
        }
    }
    Ok(checks)
}

/// A circuit re-expressed in the smallest number of variables its factors
/// depend on, with the exact coordinate changes connecting the two rings.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// The circuit over `delta` variables.
    pub circuit: Circuit,
    /// Dimension of the joint minimal space of all factors.
    pub delta: usize,
    /// Invertible matrix with `x = substitution * y`: plugging it into a
    /// source polynomial yields the reduced-ring polynomial (padded with
    /// unused coordinates).
    pub substitution: Matrix<Rat>,
    /// Its inverse, `y = inverse * x`.
    pub inverse: Matrix<Rat>,
}

/// Re-expresses every factor over a basis of the joint minimal space of
/// all factors, so the circuit uses only `delta` variables. Zeroness is
/// preserved in both directions because the change of variables is
/// invertible. When the factors already span everything the change is the
/// identity.
pub fn variable_reduction(c: &Circuit) -> Reduction {
    let n = c.n();
    let all: Vec<QuadraticForm> = c.gates().iter().flatten().cloned().collect();
    let space = joint_minimal_space(&all);
    let delta = space.dim();
    if delta == n {
        let identity: Matrix<Rat> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        return Reduction {
            circuit: c.clone(),
            delta,
            substitution: identity.clone(),
            inverse: identity,
        };
    }
    // Rows: basis of the joint space, completed by coordinate forms at
    // the non-pivot columns.
    let mut rows: Matrix<Rat> = space
        .basis()
        .iter()
        .map(|f| f.rational_coeffs().expect("rational minimal space"))
        .collect();
    let mut rr = rows.clone();
    let pivots = mat::rref(&mut rr);
    for i in (0..n).filter(|i| !pivots.contains(i)) {
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        rows.push(e);
    }
    let inverse = rows;
    let substitution = mat::invert(&inverse).expect("completed basis is invertible");
    let gates = c
        .gates()
        .iter()
        .map(|gate| gate.iter().map(|q| shrink(q, &substitution, delta)).collect())
        .collect();
    Reduction { circuit: Circuit::new(delta, gates), delta, substitution, inverse }
}

/// Applies `x = c * y` to the form and drops the provably unused trailing
/// coordinates.
fn shrink(q: &QuadraticForm, c: &Matrix<Rat>, delta: usize) -> QuadraticForm {
    let moved = q.change_of_variables(c);
    let gram = moved.gram();
    let n = gram.len();
    for i in 0..n {
        for j in 0..n {
            debug_assert!(
                (i < delta && j < delta) || gram[i][j].is_zero(),
                "factor depends on a coordinate outside the joint space"
            );
        }
    }
    let small: Matrix<Rat> =
        (0..delta).map(|i| (0..delta).map(|j| gram[i][j].clone()).collect()).collect();
    QuadraticForm::from_gram(small)
}

/// Seeded random circuit with `gates` products of `d` nonzero quadratics
/// each; generically computes a nonzero polynomial.
pub fn random_circuit(n: usize, gates: usize, d: usize, seed: u64) -> Circuit {
    assert!((1..=3).contains(&gates) && d >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates = (0..gates)
        .map(|_| (0..d).map(|_| random_quadratic(&mut rng, n)).collect())
        .collect();
    Circuit::new(n, gates)
}

/// Seeded three-gate circuit that provably computes zero: the gates share
/// `d - 1` factors and the leading factors cancel, `A + C - (A + C) = 0`.
pub fn random_zero_circuit(n: usize, d: usize, seed: u64) -> Circuit {
    assert!(d >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_quadratic(&mut rng, n);
    let c = loop {
        let c = random_quadratic(&mut rng, n);
        if !a.add(&c).is_zero() {
            break c;
        }
    };
    let shared: Vec<QuadraticForm> = (0..d - 1).map(|_| random_quadratic(&mut rng, n)).collect();
    let gate = |lead: QuadraticForm| -> Vec<QuadraticForm> {
        let mut g = vec![lead];
        g.extend(shared.iter().cloned());
        g
    };
    Circuit::new(n, vec![gate(a.clone()), gate(c.clone()), gate(a.add(&c).neg())])
}

fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> QuadraticForm {
    loop {
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = crate::scalar::rat_int(rng.gen_range(-2..=2));
                gram[i][j] = v.clone();
                gram[j][i] = v;
            }
        }
        let q = QuadraticForm::from_gram(gram);
        if !q.is_zero() {
            return q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::QuadraticForm as QF;
    use crate::scalar::rat_int;

    fn xy(n: usize) -> QF {
        QF::product(n, 0, 1)
    }

    fn zw(n: usize) -> QF {
        QF::product(n, 2, 3)
    }

    #[test]
    fn cancelling_gates_expand_to_zero() {
        let c = Circuit::new(
            4,
            vec![
                vec![xy(4), zw(4)],
                vec![xy(4), zw(4)],
                vec![xy(4).scale(&rat_int(-2)), zw(4)],
            ],
        );
        assert_eq!(expand_zero_test(&c), Ok(true));
    }

    #[test]
    fn monomial_identity_cancels_with_two_gates() {
        let c = Circuit::new(
            4,
            vec![
                vec![xy(4), zw(4)],
                vec![QF::product(4, 0, 2).neg(), QF::product(4, 1, 3)],
            ],
        );
        assert_eq!(expand_zero_test(&c), Ok(true));
    }

    #[test]
    fn single_gate_is_nonzero() {
        let c = Circuit::new(2, vec![vec![QF::square(2, 0), QF::square(2, 1)]]);
        assert_eq!(expand_zero_test(&c), Ok(false));
    }

    #[test]
    #[should_panic(expected = "at least one factor")]
    fn empty_gates_are_rejected() {
        Circuit::new(2, vec![vec![]]);
    }

    #[test]
    fn tiny_term_budget_reports_the_cap() {
        let c = random_circuit(4, 3, 3, 9);
        assert!(matches!(c.expand(5), Err(TermCap { max_terms: 5 })));
    }

    #[test]
    fn random_evaluation_is_one_sided() {
        let zero = Circuit::new(
            4,
            vec![
                vec![xy(4), zw(4)],
                vec![xy(4), zw(4)],
                vec![xy(4).scale(&rat_int(-2)), zw(4)],
            ],
        );
        for seed in [0, 1, 2, 77] {
            assert_eq!(
                schwartz_zippel_test(&zero, 5, seed),
                SzOutcome::ConsistentWithZero { trials: 5 }
            );
        }
        let nonzero = Circuit::new(2, vec![vec![QF::square(2, 0), QF::square(2, 1)]]);
        match schwartz_zippel_test(&nonzero, 10, 42) {
            SzOutcome::ProbablyNonzero { trial, witness } => {
                assert_eq!(trial, 0);
                assert!(!nonzero.eval(&witness).is_zero());
            }
            other => panic!("expected a nonzero witness, got {other:?}"),
        }
    }

    #[test]
    fn zero_circuit_pairs_all_confirm_with_small_subsets() {
        // xy*zw - (1/2) xz*yw - (1/2) xz*yw = 0.
        let half = Rat::new(1.into(), 2.into());
        let kill = QF::product(4, 1, 3).scale(&-half);
        let c = Circuit::new(
            4,
            vec![
                vec![xy(4), zw(4)],
                vec![QF::product(4, 0, 2), kill.clone()],
                vec![QF::product(4, 0, 2), kill],
            ],
        );
        assert_eq!(expand_zero_test(&c), Ok(true));
        let checks = gate_radical_report(&c).unwrap();
        assert_eq!(checks.len(), 4);
        for check in &checks {
            assert!(check.confirmed, "pair ({}, {}) unconfirmed", check.j2, check.j3);
            let subset = check.subset.as_ref().expect("certifying subset");
            assert!(!subset.is_empty() && subset.len() <= 4);
        }
    }

    #[test]
    fn nonzero_circuit_is_rejected_by_the_report() {
        let c = random_circuit(3, 3, 2, 4);
        assert_eq!(expand_zero_test(&c), Ok(false));
        assert!(matches!(gate_radical_report(&c), Err(ReportError::NotZero)));
    }

    #[test]
    fn factors_in_a_plane_reduce_to_two_variables() {
        let n = 10;
        let gates = vec![
            vec![QF::square(n, 0), QF::product(n, 0, 1)],
            vec![QF::square(n, 1), QF::product(n, 0, 1)],
            vec![QF::square(n, 0).add(&QF::square(n, 1)), QF::product(n, 0, 1).neg()],
        ];
        let c = Circuit::new(n, gates);
        let red = variable_reduction(&c);
        assert_eq!(red.delta, 2);
        assert_eq!(red.circuit.n(), 2);
        // x^2 xy + y^2 xy - (x^2 + y^2) xy = 0 before and after.
        assert_eq!(expand_zero_test(&c), Ok(true));
        assert_eq!(expand_zero_test(&red.circuit), Ok(true));
    }

    #[test]
    fn reduction_preserves_zeroness_both_ways() {
        for seed in 0..6 {
            let c = if seed % 2 == 0 {
                random_zero_circuit(5, 2, seed)
            } else {
                random_circuit(5, 3, 2, seed)
            };
            let red = variable_reduction(&c);
            assert_eq!(
                expand_zero_test(&c).unwrap(),
                expand_zero_test(&red.circuit).unwrap(),
                "zeroness must survive the change of variables (seed {seed})"
            );
        }
    }

    #[test]
    fn full_rank_factors_keep_the_identity_change() {
        let c = Circuit::new(
            3,
            vec![vec![QF::square(3, 0).add(&QF::square(3, 1)).add(&QF::square(3, 2))]],
        );
        let red = variable_reduction(&c);
        assert_eq!(red.delta, 3);
        assert_eq!(red.circuit, c);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(red.substitution[i][j], if i == j { Rat::one() } else { Rat::zero() });
            }
        }
    }

    #[test]
    fn planted_zero_circuits_expand_to_zero() {
        for seed in 0..8 {
            let c = random_zero_circuit(4, 3, seed);
            assert_eq!(expand_zero_test(&c), Ok(true), "seed {seed}");
        }
    }
}
