//! The pairwise radical condition on families of quadratics: for every
//! pair, the product of all other members must vanish on the pair's
//! common zeros. Families satisfying it are forced into low-dimensional
//! spans, and each passing pair is certified by at most four members.

use quadrics::sg::{check_main_condition, Verdict};
use quadrics::QuadraticForm;

fn label(v: &Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Undetermined => "undetermined",
    }
}

fn main() {
    // Squares of a closed family of linear forms: x^2, y^2, (x+y)^2 and
    // (x-y)^2. Any two of them cut out a single projective point where
    // the remaining squares vanish too.
    let sq = |a: i64, b: i64| {
        let f = quadrics::LinearForm::from_ints(&[a, b]);
        QuadraticForm::square_linear(&f)
    };
    let squares = vec![sq(1, 0), sq(0, 1), sq(1, 1), sq(1, -1)];
    let report = check_main_condition(&squares, true);
    println!("squares family: {}", label(&report.verdict));
    println!("  span dimension {}", report.span_dimension);
    if let Some(subsets) = &report.subsets {
        for ((i, j), subset) in subsets {
            println!("  pair ({i}, {j}) certified by members {subset:?}");
        }
    }

    // One genuinely quadratic member breaks the condition: xw does not
    // vanish everywhere on the zeros of the pair (xy + zw, xy - zw).
    let xy = QuadraticForm::product(4, 0, 1);
    let zw = QuadraticForm::product(4, 2, 3);
    let family = vec![
        xy.add(&zw),
        xy.sub(&zw),
        QuadraticForm::product(4, 0, 3),
        QuadraticForm::product(4, 1, 2),
    ];
    let report = check_main_condition(&family, false);
    println!("\nhyperbolic family: {}", label(&report.verdict));
    for (i, j) in &report.failing_pairs {
        println!("  pair ({i}, {j}) fails");
    }
}
