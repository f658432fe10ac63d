//! Zero testing for sums of up to three products of quadratic forms:
//! exact expansion under a term budget, seeded evaluation as a one-sided
//! fallback, per-pair radical certificates for zero circuits, and the
//! change of variables that shrinks a circuit to the variables its
//! factors actually use.

use quadrics::pit::{random_zero_circuit, SzOutcome};
use quadrics::scalar::rat_int;
use quadrics::{
    expand_zero_test, gate_radical_report, schwartz_zippel_test, variable_reduction, Circuit,
    QuadraticForm,
};

fn main() {
    // (xy)(zw) + (xy)(zw) - 2(xy)(zw) expands to zero.
    let xy = QuadraticForm::product(4, 0, 1);
    let zw = QuadraticForm::product(4, 2, 3);
    let zero = Circuit::new(
        4,
        vec![
            vec![xy.clone(), zw.clone()],
            vec![xy.clone(), zw.clone()],
            vec![xy.scale(&rat_int(-2)), zw.clone()],
        ],
    );
    println!("cancelling circuit expands to zero: {}", expand_zero_test(&zero).unwrap());

    // Ten seeded evaluations; a zero circuit survives all of them.
    match schwartz_zippel_test(&zero, 10, 42) {
        SzOutcome::ConsistentWithZero { trials } => {
            println!("{trials} random evaluations all vanished (consistent with zero)");
        }
        SzOutcome::ProbablyNonzero { .. } => unreachable!("the circuit is zero"),
    }

    // A single-gate circuit is nonzero, and one evaluation proves it.
    let nonzero = Circuit::new(2, vec![vec![QuadraticForm::square(2, 0)]]);
    match schwartz_zippel_test(&nonzero, 10, 42) {
        SzOutcome::ProbablyNonzero { trial, .. } => {
            println!("nonzero witness found at trial {trial}");
        }
        SzOutcome::ConsistentWithZero { .. } => unreachable!("x^2 is nonzero"),
    }

    // For a zero three-gate circuit, the first gate's product lies in the
    // radical of every pair of factors drawn from the other two gates,
    // and at most four first-gate factors already witness it.
    println!("\nper-pair radical certificates:");
    for check in gate_radical_report(&zero).unwrap() {
        println!(
            "  pair ({}, {}): confirmed = {}, subset = {:?}",
            check.j2, check.j3, check.confirmed, check.subset
        );
    }

    // Factors living in a plane let the whole circuit shrink to two
    // variables; zeroness is preserved exactly.
    let n = 10;
    let planar = Circuit::new(
        n,
        vec![
            vec![QuadraticForm::square(n, 0), QuadraticForm::product(n, 0, 1)],
            vec![QuadraticForm::square(n, 1), QuadraticForm::product(n, 0, 1)],
            vec![
                QuadraticForm::square(n, 0).add(&QuadraticForm::square(n, 1)),
                QuadraticForm::product(n, 0, 1).neg(),
            ],
        ],
    );
    let red = variable_reduction(&planar);
    println!(
        "\nplane-confined circuit over {n} variables reduces to {} (zero before: {}, after: {})",
        red.delta,
        expand_zero_test(&planar).unwrap(),
        expand_zero_test(&red.circuit).unwrap()
    );

    // Generic factors keep the full variable count: the reduction is the
    // identity when nothing can be dropped.
    let generic = random_zero_circuit(5, 2, 9);
    println!(
        "random zero circuit over 5 variables keeps delta = {}",
        variable_reduction(&generic).delta
    );
}
