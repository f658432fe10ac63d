//! Rank, minimal product representations, and minimal linear spaces of
//! quadratic forms, all computed exactly over the rationals.

use quadrics::scalar::rat_int;
use quadrics::QuadraticForm;

fn inspect(label: &str, q: &QuadraticForm) {
    println!("{label} = {q}");
    println!("  gram rank          {}", q.rank());
    println!("  product rank       {}", q.product_rank());
    println!("  irreducible        {}", q.is_irreducible());
    let space = q.minimal_space();
    println!("  minimal space dim  {}", space.dim());

    // The representation is exact: re-expanding the pairs returns q.
    // A pair may carry coefficients from one quadratic extension, but
    // the product of each pair is always rational.
    let pairs = q.minimal_representation();
    let mut sum = QuadraticForm::zero(q.n());
    for (a, b) in &pairs {
        match a.ext_m().or(b.ext_m()) {
            Some(m) => println!("  pair ({a}) * ({b})   over Q(sqrt({m}))"),
            None => println!("  pair ({a}) * ({b})"),
        }
        sum = sum.add(&QuadraticForm::try_mul_linear(a, b).expect("pair products are rational"));
    }
    assert_eq!(&sum, q, "representation must re-expand to the form");
    println!("  re-expansion matches");
    println!();
}

fn main() {
    // xy has one product pair and a 2-dimensional minimal space.
    inspect("xy", &QuadraticForm::product(4, 0, 1));

    // xy + zw is the generic rank-4 form: two pairs, irreducible.
    let hyperbolic = QuadraticForm::product(4, 0, 1).add(&QuadraticForm::product(4, 2, 3));
    inspect("xy + zw", &hyperbolic);

    // A square has product rank 1 and a line as minimal space.
    inspect("(x + 2y)^2", &{
        let mut gram = vec![vec![rat_int(0); 3]; 3];
        gram[0][0] = rat_int(1);
        gram[0][1] = rat_int(2);
        gram[1][0] = rat_int(2);
        gram[1][1] = rat_int(4);
        QuadraticForm::from_gram(gram)
    });

    // x^2 + y^2 + z^2 is anisotropic over the rationals: its pairs carry
    // coefficients from a quadratic extension but still re-expand exactly.
    let sum_of_squares = QuadraticForm::square(3, 0)
        .add(&QuadraticForm::square(3, 1))
        .add(&QuadraticForm::square(3, 2));
    inspect("x^2 + y^2 + z^2", &sum_of_squares);
}
