//! Exact radical-ideal membership: does a polynomial vanish on the whole
//! common zero set of the generators? Decided by a Groebner basis with
//! hard resource caps, so the answer is true, false, or an explicit
//! budget error, never a guess.

use quadrics::poly::MultiPoly;
use quadrics::scalar::rat_int;
use quadrics::{radical_member, Budget, QuadraticForm};

fn main() {
    let budget = Budget::default();

    // x vanishes wherever x^2 does, even though x is not in the ideal (x^2).
    let x = MultiPoly::var(1, 0);
    let x2 = x.mul(&x);
    println!("x in radical(x^2): {}", radical_member(&x, &[x2], &budget).unwrap());

    // x does not vanish on the zero set of y^2 (take the point x=1, y=0).
    let x = MultiPoly::var(2, 0);
    let y = MultiPoly::var(2, 1);
    println!("x in radical(y^2): {}", radical_member(&x, &[y.mul(&y)], &budget).unwrap());

    // A pair of quadratics whose common zeros force a product to vanish:
    // on {A = 0, B = 0} with B = A + ab, one of a, b vanishes, so
    // (A + a*c)(A + b*d) does too. Its two factors individually do not.
    let n = 4;
    let a = QuadraticForm::product(n, 0, 1).add(&QuadraticForm::product(n, 2, 3));
    let lin = |coeffs: &[i64]| quadrics::LinearForm::from_ints(coeffs);
    let (fa, fb, fc, fd) =
        (lin(&[1, 0, 0, 0]), lin(&[0, 1, 0, 0]), lin(&[0, 0, 1, 0]), lin(&[0, 0, 0, 1]));
    let b = a.add(&QuadraticForm::mul_linear(&fa, &fb));
    let q1 = a.add(&QuadraticForm::mul_linear(&fa, &fc));
    let q2 = a.add(&QuadraticForm::mul_linear(&fb, &fd));
    let gens = [a.to_poly(), b.to_poly()];
    let product = q1.to_poly().mul(&q2.to_poly());
    println!(
        "(A + ac)(A + bd) in radical(A, A + ab): {}",
        radical_member(&product, &gens, &budget).unwrap()
    );
    println!(
        "A + ac alone: {}",
        radical_member(&q1.to_poly(), &gens, &budget).unwrap()
    );
    println!(
        "A + bd alone: {}",
        radical_member(&q2.to_poly(), &gens, &budget).unwrap()
    );

    // A starved budget fails loudly instead of guessing.
    let tiny = Budget { max_pairs: 1, ..Budget::default() };
    let dense: MultiPoly = (0..n)
        .map(|i| MultiPoly::var(n, i))
        .fold(MultiPoly::constant(n, rat_int(1)), |acc, v| acc.mul(&v));
    match radical_member(&dense, &gens, &tiny) {
        Ok(answer) => println!("starved oracle still decided: {answer}"),
        Err(cap) => println!("starved oracle refused: {cap}"),
    }
}
