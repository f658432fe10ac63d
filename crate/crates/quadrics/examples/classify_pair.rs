//! Structural classification of a pair of quadratics against a family
//! whose product vanishes on the pair's common zeros. Exactly one of
//! three mechanisms explains the containment: a family member inside the
//! pencil's span, a pencil member that splits into linear factors, or a
//! common plane on which both forms vanish.

use quadrics::{classify, make_instance, reducible_members, PlantedCase, QuadraticForm};

fn show(label: &str, a: &QuadraticForm, b: &QuadraticForm, qs: &[QuadraticForm]) {
    println!("{label}");
    let report = classify(a, b, qs, true);
    match &report.case_i {
        Some((k, alpha, beta)) => println!("  case i:   member {k} = ({alpha})*A + ({beta})*B"),
        None => println!("  case i:   none"),
    }
    match &report.case_ii {
        Some(w) => {
            println!("  case ii:  ({})*A + ({})*B splits", w.alpha, w.beta);
            if let Some((c, d)) = &w.factors {
                println!("            = ({c}) * ({d})");
            }
        }
        None => println!("  case ii:  none"),
    }
    match &report.case_iii {
        Some((pa, pb, touching)) => {
            println!("  case iii: both vanish on {{{pa} = 0, {pb} = 0}}");
            if let Some(k) = touching {
                println!("            member {k} vanishes on the same plane");
            }
        }
        None => println!("  case iii: none"),
    }
    if let Some(ok) = report.oracle_confirmed {
        println!("  oracle:   family product in radical(A, B) = {ok}");
    }
    for note in &report.undecided {
        println!("  undecided: {note}");
    }
    println!();
}

fn main() {
    // A planted split-pencil instance: B - A is a product of two linear
    // forms, so a reducible pencil member explains everything.
    let split = make_instance(PlantedCase::SplitPencil, 5, 3).unwrap();
    show("planted split pencil (n = 5, seed 3)", &split.a, &split.b, &split.qs);

    // A planted shared-plane instance: A and B both lie in the ideal
    // (a, b) of a plane, and the family vanishes there too.
    let plane = make_instance(PlantedCase::SharedPlane, 6, 7).unwrap();
    show("planted shared plane (n = 6, seed 7)", &plane.a, &plane.b, &plane.qs);

    // The pencil scan under the hood: every (alpha : beta) where
    // alpha*A + beta*B drops to rank <= 2 is listed with its factors.
    let a = QuadraticForm::product(4, 0, 1).add(&QuadraticForm::product(4, 2, 3));
    let b = QuadraticForm::product(4, 0, 1).sub(&QuadraticForm::product(4, 2, 3));
    let rm = reducible_members(&a, &b);
    println!("pencil of xy + zw and xy - zw: {} split members", rm.witnesses.len());
    for w in &rm.witnesses {
        match &w.factors {
            Some((c, d)) => println!("  ({})*A + ({})*B = ({c}) * ({d})", w.alpha, w.beta),
            None => println!("  ({})*A + ({})*B = 0", w.alpha, w.beta),
        }
    }
}
