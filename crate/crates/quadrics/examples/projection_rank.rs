//! Projection maps that send every form of a linear space to a multiple
//! of one fresh variable z. Applying such a map is a ring homomorphism,
//! and the image of a quadratic drops at most dim(space) below its rank.

use quadrics::projection::ProjectionMap;
use quadrics::scalar::rat_int;
use quadrics::{LinearForm, LinearSpace, QuadraticForm};

fn main() {
    // Send the plane {x0, x1} to multiples of z: x0 -> 1*z, x1 -> 2*z.
    let space = LinearSpace::span(
        4,
        &[LinearForm::from_ints(&[1, 0, 0, 0]), LinearForm::from_ints(&[0, 1, 0, 0])],
    );
    let t = ProjectionMap::new(space.clone(), vec![rat_int(1), rat_int(2)]);
    println!("T maps the span of x0, x1 onto the line of z (z is variable {})", t.z_index());
    for i in 0..4 {
        let mut unit = vec![0i64; 4];
        unit[i] = 1;
        println!("  x{i} -> {}", t.apply_linear(&LinearForm::from_ints(&unit)));
    }

    // Basis forms land exactly on their assigned multiples.
    let q = QuadraticForm::product(4, 0, 1).add(&QuadraticForm::product(4, 0, 3));
    let image = t.apply_quadratic(&q);
    println!("T(x0*x1 + x0*x3) = {image}");

    // Rank under projection: the product rank of the image never drops
    // more than dim(space) below the product rank of the source.
    let full = QuadraticForm::product(4, 0, 1).add(&QuadraticForm::product(4, 2, 3));
    println!("\nproduct rank of xy + zw = {}", full.product_rank());
    for seed in 0..3 {
        let sampled = ProjectionMap::sampled(space.clone(), seed);
        let moved = QuadraticForm::from_poly(&sampled.apply_quadratic(&full)).unwrap();
        println!(
            "  seed {seed}: image product rank {} (drop at most {})",
            moved.product_rank(),
            space.dim()
        );
        assert!(moved.product_rank() + space.dim() >= full.product_rank());
    }

    // Restriction is the alpha = 0 projection: killing the space outright.
    let zero_alpha = ProjectionMap::new(space.clone(), vec![rat_int(0), rat_int(0)]);
    let restricted = zero_alpha.apply_quadratic(&full);
    println!("\nalpha = 0 restricts: T0(xy + zw) = {restricted}");
}
