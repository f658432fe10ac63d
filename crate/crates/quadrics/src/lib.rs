//! Exact computational algebra for quadratic forms.
//!
//! Everything here is computed over the rationals or a single quadratic
//! extension `Q(sqrt(m))`; there is no floating point and no unverified
//! numerical step. The crate provides:
//!
//! - symmetric Gram-matrix algebra for quadratic forms: rank, minimal
//!   number of `a*b` pairs, minimal linear spaces, restriction to the
//!   zero set of a space of linear forms ([`quadratic`]);
//! - sparse multivariate polynomial arithmetic, resultants, Buchberger
//!   Groebner bases and exact radical-ideal membership ([`poly`],
//!   [`groebner`]);
//! - pencil analysis for pairs of quadratics: reducible combinations,
//!   common isotropic planes, structural classification and minimal
//!   certifying subsets ([`structure`]);
//! - variable-reducing projection maps that send a space of linear forms
//!   to multiples of a single fresh variable ([`projection`]);
//! - Sylvester-Gallai style incidence checkers for linear forms and for
//!   quadratics under radical-membership conditions ([`sg`]);
//! - an exact polynomial identity testing harness for depth-4 circuits
//!   that sum up to three products of quadratics ([`pit`]).
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example rank_and_representation
//! cargo run --example radical_membership
//! cargo run --example classify_pair
//! cargo run --example generate_instances
//! cargo run --example projection_rank
//! cargo run --example sylvester_gallai
//! cargo run --example main_condition
//! cargo run --example pit_circuit
//! ```
//!
//! The thin `quadrics` binary exposes the same operations as JSON-driven
//! subcommands (`classify`, `radical`, `sg-verify`, `dim`, `pit`,
//! `generate`).

pub mod binary;
pub mod cli;
pub mod groebner;
pub mod jsonio;
pub mod linear;
pub mod mat;
pub mod pit;
pub mod poly;
pub mod projection;
pub mod quadratic;
pub mod scalar;
pub mod sg;
pub mod structure;

pub use linear::{LinearForm, LinearSpace};
pub use poly::{Monomial, MultiPoly};
pub use quadratic::QuadraticForm;
pub use scalar::{Rat, Scalar};
pub use structure::{
    classify, common_isotropic_plane, gupta_reduce, make_instance, reducible_members,
    Instance, PlantedCase, PlantedWitness, ReducibleMembers, ReducibleWitness,
    StructureReport, Undecided,
};
pub use groebner::{radical_member, Budget, CapExceeded};
pub use pit::{
    expand_zero_test, gate_radical_report, schwartz_zippel_test, variable_reduction, Circuit,
    SzOutcome,
};
pub use projection::ProjectionMap;
pub use sg::{
    check_delta_sg, check_ek, check_main_condition, check_sg_linear, make_qo_dominated,
    SGReport, Verdict,
};
