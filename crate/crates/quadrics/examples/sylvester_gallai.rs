//! Incidence geometry of linear forms: closure (every pair spans a third
//! member), the robustness fraction delta, the three-group cross-closure,
//! and the low span dimension that closed families are forced into.
//!
//! Over the rationals, closed configurations are nearly collinear; over a
//! quadratic extension the nine inflection points of a cubic curve form a
//! genuinely planar closed family, and this file checks it exactly.

use quadrics::LinearSpace;
use quadrics::scalar::{Rat, Scalar};
use quadrics::sg::{check_delta_sg, check_ek, check_sg_linear};
use quadrics::LinearForm;

fn main() {
    // The triangle family x, y, x + y: every pair spans the third.
    let triangle = vec![
        LinearForm::from_ints(&[1, 0]),
        LinearForm::from_ints(&[0, 1]),
        LinearForm::from_ints(&[1, 1]),
    ];
    println!("triangle closure: {}", check_sg_linear(&triangle));
    println!("triangle delta:   {}", check_delta_sg(&triangle));

    // Three generic coordinate forms span nothing together: delta = 0.
    let generic = vec![
        LinearForm::from_ints(&[1, 0, 0]),
        LinearForm::from_ints(&[0, 1, 0]),
        LinearForm::from_ints(&[0, 0, 1]),
    ];
    println!("generic closure:  {}", check_sg_linear(&generic));
    println!("generic delta:    {}", check_delta_sg(&generic));

    // Nine points over Q(sqrt(-3)): {(0, 1, -w^k), (1, 0, -w^k),
    // (1, -w^k, 0)} for the cube roots of unity w^k. Every pair of points
    // lies on a line through a third one, yet the family spans all of a
    // 3-dimensional space, the extremal case for closed families.
    let omega = |k: usize| -> Scalar {
        let w = Scalar::ext(Rat::new((-1).into(), 2.into()), Rat::new(1.into(), 2.into()), -3);
        match k % 3 {
            0 => Scalar::one(),
            1 => w,
            _ => w.mul(&w),
        }
    };
    let mut nine = Vec::new();
    for k in 0..3 {
        nine.push(LinearForm::new(vec![Scalar::zero(), Scalar::one(), omega(k).neg()]));
    }
    for k in 0..3 {
        nine.push(LinearForm::new(vec![Scalar::one(), Scalar::zero(), omega(k).neg()]));
    }
    for k in 0..3 {
        nine.push(LinearForm::new(vec![Scalar::one(), omega(k).neg(), Scalar::zero()]));
    }
    println!("\nnine-point family over Q(sqrt(-3)):");
    println!("  closure:        {}", check_sg_linear(&nine));
    println!("  delta:          {}", check_delta_sg(&nine));
    println!("  span dimension: {}", LinearSpace::span(3, &nine).dim());

    // The same nine points split by which coordinate vanishes: pairs from
    // two groups always span a member of the third group.
    let (t1, t2, t3) = (&nine[0..3], &nine[3..6], &nine[6..9]);
    println!("  cross-closure:  {}", check_ek(t1, t2, t3));
}
