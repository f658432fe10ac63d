//! End-to-end acceptance gate. Each criterion exercises one pillar of the
//! crate against an independent oracle or a hand-checked value and prints
//! exactly one pass/fail line with its runtime and budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num::Zero;
use quadrics::groebner::{radical_member, Budget};
use quadrics::linear::LinearSpace;
use quadrics::pit::{random_circuit, random_zero_circuit, Circuit};
use quadrics::poly::{resultant, MultiPoly};
use quadrics::projection::ProjectionMap;
use quadrics::scalar::{rat_int, Rat, Scalar};
use quadrics::sg::{check_delta_sg, check_ek, check_main_condition, Verdict};
use quadrics::structure::{classify, gupta_reduce, make_instance_with, PlantedCase};
use quadrics::{
    expand_zero_test, gate_radical_report, schwartz_zippel_test, LinearForm, QuadraticForm,
    SzOutcome,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Result<String, String>)> = vec![
        ("worked-example radical memberships", Some(Duration::from_secs(1)), c01_worked_example),
        ("20 planted shared-plane instances classify as case iii", Some(Duration::from_secs(60)), c02_case_iii),
        ("20 planted split-pencil instances classify as case ii", Some(Duration::from_secs(60)), c03_case_ii),
        ("100 oracle-confirmed instances all fall into a case", None, c04_completeness),
        ("200 projection trials respect the rank bound", Some(Duration::from_secs(10)), c05_projection),
        ("200 resultant pairs detect common factors exactly", Some(Duration::from_secs(30)), c06_resultant),
        ("incidence bounds hold and hand-counted deltas match", Some(Duration::from_secs(5)), c07_incidence),
        ("10 six-member families reduce to subsets of size <= 4", Some(Duration::from_secs(120)), c08_gupta),
        ("main-condition checker on the two worked families", Some(Duration::from_secs(10)), c09_main_condition),
        ("50 circuits: expansion, evaluation and reports agree", Some(Duration::from_secs(120)), c10_pit),
        ("200-trial structural suite for quadratic forms", Some(Duration::from_secs(20)), c11_structural),
    ];

    let mut failures = 0usize;
    for (index, (label, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_text(&e))));
        let elapsed = start.elapsed();
        let within = budget.map_or(true, |b| elapsed <= b);
        let budget_text = match budget {
            Some(b) => format!("{:.2}s of {}s", elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        match result {
            Ok(detail) if within => {
                println!("criterion {:2} pass  [{budget_text}]  {label}: {detail}", index + 1);
            }
            Ok(detail) => {
                failures += 1;
                println!(
                    "criterion {:2} FAIL  [{budget_text}]  {label}: over budget ({detail})",
                    index + 1
                );
            }
            Err(reason) => {
                failures += 1;
                println!("criterion {:2} FAIL  [{budget_text}]  {label}: {reason}", index + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "opaque panic".into())
}

/// xw * yz vanishes wherever xy + zw and xy - zw both do, while neither
/// factor does alone.
fn c01_worked_example() -> Result<String, String> {
    let xy = QuadraticForm::product(4, 0, 1);
    let zw = QuadraticForm::product(4, 2, 3);
    let p1 = xy.add(&zw).to_poly();
    let p2 = xy.sub(&zw).to_poly();
    let p3 = QuadraticForm::product(4, 0, 3).to_poly();
    let p4 = QuadraticForm::product(4, 1, 2).to_poly();
    let budget = Budget::default();
    let gens = [p1, p2];
    let product = radical_member(&p3.mul(&p4), &gens, &budget).map_err(|e| e.to_string())?;
    let alone3 = radical_member(&p3, &gens, &budget).map_err(|e| e.to_string())?;
    let alone4 = radical_member(&p4, &gens, &budget).map_err(|e| e.to_string())?;
    if !product {
        return Err("the product must lie in the radical".into());
    }
    if alone3 || alone4 {
        return Err("neither factor may lie in the radical alone".into());
    }
    Ok("product in, both factors out".into())
}

fn c02_case_iii() -> Result<String, String> {
    for seed in 0..20 {
        let inst = make_instance_with(PlantedCase::SharedPlane, 6, seed, seed % 2 == 1)
            .map_err(|e| e.to_string())?;
        let report = classify(&inst.a, &inst.b, &inst.qs, true);
        if report.oracle_confirmed != Some(true) {
            return Err(format!("seed {seed}: oracle did not confirm membership"));
        }
        if report.case_iii.is_none() {
            return Err(format!("seed {seed}: no common plane reported"));
        }
    }
    Ok("20/20 planes found and confirmed".into())
}

fn c03_case_ii() -> Result<String, String> {
    for seed in 0..20 {
        let inst = make_instance_with(PlantedCase::SplitPencil, 5, seed, false)
            .map_err(|e| e.to_string())?;
        let report = classify(&inst.a, &inst.b, &inst.qs, true);
        if report.oracle_confirmed != Some(true) {
            return Err(format!("seed {seed}: oracle did not confirm membership"));
        }
        if report.case_ii.is_none() {
            return Err(format!("seed {seed}: no split pencil member reported"));
        }
    }
    Ok("20/20 split members found and confirmed".into())
}

/// Mixed planted instances: whenever the oracle confirms the radical
/// membership, the classifier must exhibit at least one mechanism.
fn c04_completeness() -> Result<String, String> {
    let mut confirmed = 0usize;
    for seed in 0..100u64 {
        let (case, n, homogenized) = if seed % 2 == 0 {
            (PlantedCase::SplitPencil, 4 + (seed % 3) as usize, false)
        } else {
            (PlantedCase::SharedPlane, 6 + (seed % 2) as usize, seed % 4 == 1)
        };
        let inst = make_instance_with(case, n, seed, homogenized).map_err(|e| e.to_string())?;
        let report = classify(&inst.a, &inst.b, &inst.qs, true);
        if report.oracle_confirmed != Some(true) {
            return Err(format!("seed {seed}: oracle did not confirm a planted instance"));
        }
        confirmed += 1;
        if report.case_i.is_none() && report.case_ii.is_none() && report.case_iii.is_none() {
            return Err(format!("seed {seed}: confirmed instance fell into no case"));
        }
    }
    Ok(format!("{confirmed}/100 confirmed instances all classified"))
}

fn c05_projection() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..200u64 {
        let n = rng.gen_range(3..=8);
        let delta = rng.gen_range(1..=4.min(n - 1));
        let forms: Vec<LinearForm> = (0..delta)
            .map(|_| loop {
                let f = LinearForm::from_rats(
                    (0..n).map(|_| rat_int(rng.gen_range(-3..=3))).collect(),
                );
                if !f.is_zero() {
                    break f;
                }
            })
            .collect();
        let space = LinearSpace::span(n, &forms);
        if space.dim() == 0 {
            continue;
        }
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let c = rat_int(rng.gen_range(-3..=3));
                gram[i][j] = c.clone();
                gram[j][i] = c;
            }
        }
        let q = QuadraticForm::from_gram(gram);
        let map = ProjectionMap::sampled(space.clone(), 1000 + trial);
        let image = QuadraticForm::from_poly(&map.apply_quadratic(&q))
            .ok_or_else(|| format!("trial {trial}: image not quadratic"))?;
        if image.product_rank() + space.dim() < q.product_rank() {
            return Err(format!(
                "trial {trial}: rank dropped from {} to {} with delta {}",
                q.product_rank(),
                image.product_rank(),
                space.dim()
            ));
        }
    }
    Ok("0 violations in 200 trials".into())
}

/// Products of monic-in-x0 factors with controlled constant terms: the
/// ground truth for a common factor is the planted sharing itself, and
/// the resultant in x0 must vanish exactly on the planted pairs.
fn c06_resultant() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let affine = |rng: &mut ChaCha8Rng, n: usize, constant: i64| -> MultiPoly {
        let mut p = MultiPoly::constant(n, rat_int(constant));
        for v in 1..n {
            p = p.add(&MultiPoly::var(n, v).scale(&rat_int(rng.gen_range(-2..=2))));
        }
        p
    };
    let root_factor = |n: usize, p: &MultiPoly| MultiPoly::var(n, 0).sub(p);
    for trial in 0..200u64 {
        let planted = trial < 100;
        let n = rng.gen_range(2..=4);
        let df = rng.gen_range(1..=3);
        let dg = rng.gen_range(1..=3);
        // Constant terms are globally distinct across F and G, except for
        // the single shared factor of a planted pair.
        let mut constants: Vec<i64> = (0..20).collect();
        let mut f_roots: Vec<MultiPoly> =
            (0..df).map(|_| affine(&mut rng, n, constants.remove(0))).collect();
        let g_roots: Vec<MultiPoly> =
            (0..dg).map(|_| affine(&mut rng, n, constants.remove(0))).collect();
        if planted {
            f_roots[0] = g_roots[0].clone();
        }
        let f = f_roots.iter().fold(MultiPoly::one(n), |acc, p| acc.mul(&root_factor(n, p)));
        let g = g_roots.iter().fold(MultiPoly::one(n), |acc, p| acc.mul(&root_factor(n, p)));
        let res = resultant(&f, &g, 0);
        if planted && !res.is_zero() {
            return Err(format!("trial {trial}: shared factor but nonzero resultant"));
        }
        if !planted && res.is_zero() {
            return Err(format!("trial {trial}: coprime pair but vanishing resultant"));
        }
    }
    Ok("100 planted and 100 coprime pairs all agree".into())
}

fn c07_incidence() -> Result<String, String> {
    let lf = |coeffs: &[i64]| LinearForm::from_ints(coeffs);
    // Hand-counted robustness fractions on five fixed configurations.
    let fixed: Vec<(&str, Vec<LinearForm>, Rat)> = vec![
        ("triangle", vec![lf(&[1, 0]), lf(&[0, 1]), lf(&[1, 1])], rat_int(1)),
        ("coordinate triple", vec![lf(&[1, 0, 0]), lf(&[0, 1, 0]), lf(&[0, 0, 1])], rat_int(0)),
        (
            "pencil of four",
            vec![lf(&[1, 0]), lf(&[0, 1]), lf(&[1, 1]), lf(&[1, -1])],
            rat_int(1),
        ),
        (
            "two disjoint triangles",
            vec![
                lf(&[1, 0, 0, 0]),
                lf(&[0, 1, 0, 0]),
                lf(&[1, 1, 0, 0]),
                lf(&[0, 0, 1, 0]),
                lf(&[0, 0, 0, 1]),
                lf(&[0, 0, 1, 1]),
            ],
            Rat::new(2.into(), 5.into()),
        ),
        (
            "plane quadruple plus isolated form",
            vec![lf(&[1, 0, 0]), lf(&[0, 1, 0]), lf(&[1, 1, 0]), lf(&[1, -1, 0]), lf(&[0, 0, 1])],
            rat_int(0),
        ),
    ];
    for (name, forms, expected) in &fixed {
        let delta = check_delta_sg(forms);
        if &delta != expected {
            return Err(format!("{name}: delta {delta} but hand count gives {expected}"));
        }
        // Robustness bound: families with positive delta span at most
        // 12/delta + 1 dimensions.
        if !delta.is_zero() {
            let dim = LinearSpace::span(forms[0].n(), forms).dim();
            let bound = rat_int(12) / &delta + rat_int(1);
            if Rat::new(dim.into(), 1.into()) > bound {
                return Err(format!("{name}: dimension {dim} exceeds 12/delta + 1"));
            }
        }
    }
    // Cross-closure on the nine inflection points of a cubic, grouped by
    // vanishing coordinate: the joint span stays within 3 dimensions.
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
    if !check_ek(&nine[0..3], &nine[3..6], &nine[6..9]) {
        return Err("nine-point cross-closure must hold".into());
    }
    let dim = LinearSpace::span(3, &nine).dim();
    if dim > 3 {
        return Err(format!("nine-point family spans {dim} > 3 dimensions"));
    }
    if check_delta_sg(&nine) != rat_int(1) {
        return Err("nine-point family must have delta = 1".into());
    }
    Ok("5 hand counts, the robustness bound and the 3-group bound hold".into())
}

/// Six-member families whose product vanishes on the pair's zeros: the
/// planted split B - A = a*b makes {A + a*c, A + b*d} a certificate, and
/// the reducer must find some subset of size at most 4 that the oracle
/// re-confirms.
fn c08_gupta() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for seed in 0..10u64 {
        let inst = make_instance_with(PlantedCase::SplitPencil, 4, seed, false)
            .map_err(|e| e.to_string())?;
        let (fa, fb) = match &inst.expected {
            quadrics::PlantedWitness::Split { factors, .. } => factors.clone(),
            _ => unreachable!("split case"),
        };
        let mut family = inst.qs.clone();
        // Pad to six members with products that vanish on one branch each.
        for k in 0..4 {
            let base = if k % 2 == 0 { &fa } else { &fb };
            let partner = loop {
                let f = LinearForm::from_rats(
                    (0..4).map(|_| rat_int(rng.gen_range(-2..=2))).collect(),
                );
                if !f.is_zero() && !f.proportional_to(base) {
                    break f;
                }
            };
            family.push(QuadraticForm::mul_linear(base, &partner));
        }
        assert_eq!(family.len(), 6);
        let subset =
            gupta_reduce(&family, &inst.a, &inst.b).map_err(|e| format!("seed {seed}: {e}"))?;
        if subset.is_empty() || subset.len() > 4 {
            return Err(format!("seed {seed}: subset size {} out of range", subset.len()));
        }
        // Independent oracle pass over the returned subset.
        let product = subset
            .iter()
            .fold(MultiPoly::one(4), |acc, &i| acc.mul(&family[i].to_poly()));
        let confirmed = radical_member(
            &product,
            &[inst.a.to_poly(), inst.b.to_poly()],
            &Budget::default(),
        )
        .map_err(|e| format!("seed {seed}: {e}"))?;
        if !confirmed {
            return Err(format!("seed {seed}: subset {subset:?} failed re-confirmation"));
        }
    }
    Ok("10/10 subsets of size <= 4, all re-confirmed".into())
}

fn c09_main_condition() -> Result<String, String> {
    let sq = |a: i64, b: i64| QuadraticForm::square_linear(&LinearForm::from_ints(&[a, b]));
    let squares = vec![sq(1, 0), sq(0, 1), sq(1, 1), sq(1, -1)];
    let report = check_main_condition(&squares, false);
    if !matches!(report.verdict, Verdict::Holds) {
        return Err("squares family must pass".into());
    }
    if report.span_dimension != 3 {
        return Err(format!("squares family spans {} != 3", report.span_dimension));
    }
    let xy = QuadraticForm::product(4, 0, 1);
    let zw = QuadraticForm::product(4, 2, 3);
    let family = vec![
        xy.add(&zw),
        xy.sub(&zw),
        QuadraticForm::product(4, 0, 3),
        QuadraticForm::product(4, 1, 2),
    ];
    let report = check_main_condition(&family, false);
    if !matches!(report.verdict, Verdict::Fails) {
        return Err("hyperbolic family must fail".into());
    }
    if report.failing_pairs != vec![(2, 3)] {
        return Err(format!("expected failure exactly at (2, 3), got {:?}", report.failing_pairs));
    }
    Ok("squares pass in dimension 3; cross pair (2, 3) fails".into())
}

fn c10_pit() -> Result<String, String> {
    let mut zero_count = 0usize;
    for seed in 0..50u64 {
        let n = 2 + (seed % 4) as usize;
        let d = 1 + (seed % 3) as usize;
        let circuit: Circuit = if seed % 2 == 0 {
            random_circuit(n, 3, d, seed)
        } else {
            random_zero_circuit(n.min(4), d.min(2), seed)
        };
        let zero = expand_zero_test(&circuit).map_err(|e| format!("seed {seed}: {e}"))?;
        match schwartz_zippel_test(&circuit, 10, 7 * seed + 1) {
            SzOutcome::ProbablyNonzero { witness, .. } => {
                if zero {
                    return Err(format!("seed {seed}: zero circuit produced a witness"));
                }
                if circuit.eval(&witness).is_zero() {
                    return Err(format!("seed {seed}: witness does not evaluate nonzero"));
                }
            }
            SzOutcome::ConsistentWithZero { .. } => {
                if !zero {
                    return Err(format!(
                        "seed {seed}: nonzero circuit survived 10 evaluation trials"
                    ));
                }
            }
        }
        if zero && circuit.gates().len() == 3 {
            zero_count += 1;
            let checks = gate_radical_report(&circuit).map_err(|e| format!("seed {seed}: {e}"))?;
            if checks.iter().any(|c| !c.confirmed) {
                return Err(format!("seed {seed}: an unconfirmed factor pair in a zero circuit"));
            }
        }
    }
    Ok(format!("50 circuits agree; all pairs confirmed on {zero_count} zero circuits"))
}

fn c11_structural() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let random_gram = |rng: &mut ChaCha8Rng, n: usize| -> QuadraticForm {
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let c = rat_int(rng.gen_range(-3..=3));
                gram[i][j] = c.clone();
                gram[j][i] = c;
            }
        }
        QuadraticForm::from_gram(gram)
    };

    // Adding a product of two fresh variables raises the product rank by
    // exactly one and adjoins both variables to the minimal space.
    for trial in 0..200 {
        let k = rng.gen_range(1..=4);
        let q = random_gram(&mut rng, k);
        let n = k + 2;
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = q.gram()[i][j].clone();
            }
        }
        let widened = QuadraticForm::from_gram(gram);
        let sum = widened.add(&QuadraticForm::product(n, k, k + 1));
        if sum.product_rank() != q.product_rank() + 1 {
            return Err(format!("trial {trial}: product rank not additive"));
        }
        let space = sum.minimal_space();
        let mut y1 = vec![0i64; n];
        y1[k] = 1;
        let mut y2 = vec![0i64; n];
        y2[k + 1] = 1;
        if !space.contains(&LinearForm::from_ints(&y1))
            || !space.contains(&LinearForm::from_ints(&y2))
        {
            return Err(format!("trial {trial}: fresh variables escape the minimal space"));
        }
    }

    // Restriction to the zero set of a space drops the product rank by at
    // most the dimension of the space.
    for trial in 0..200 {
        let n = rng.gen_range(3..=6);
        let q = random_gram(&mut rng, n);
        let delta = rng.gen_range(1..=2);
        let forms: Vec<LinearForm> = (0..delta)
            .map(|_| LinearForm::from_rats((0..n).map(|_| rat_int(rng.gen_range(-2..=2))).collect()))
            .collect();
        let space = LinearSpace::span(n, &forms);
        let restricted = q.restrict(&space);
        if restricted.product_rank() + space.dim() < q.product_rank() {
            return Err(format!("trial {trial}: restriction dropped too much rank"));
        }
    }

    // Minimal representations re-expand to the form with exactly
    // product_rank pairs.
    for trial in 0..200 {
        let n = rng.gen_range(2..=5);
        let q = random_gram(&mut rng, n);
        let pairs = q.minimal_representation();
        if pairs.len() != q.product_rank() {
            return Err(format!("trial {trial}: representation length mismatch"));
        }
        let mut sum = QuadraticForm::zero(n);
        for (a, b) in &pairs {
            match QuadraticForm::try_mul_linear(a, b) {
                Some(p) => sum = sum.add(&p),
                None => return Err(format!("trial {trial}: pair product not rational")),
            }
        }
        if sum != q {
            return Err(format!("trial {trial}: pairs do not re-expand to the form"));
        }
    }

    // The minimal space is exactly the row space of the Gram matrix.
    for trial in 0..200 {
        let n = rng.gen_range(2..=5);
        let q = random_gram(&mut rng, n);
        let space = q.minimal_space();
        if space.dim() != q.rank() {
            return Err(format!("trial {trial}: minimal space dimension differs from rank"));
        }
        let rows: Vec<LinearForm> = q
            .gram()
            .iter()
            .filter(|row| row.iter().any(|c| !c.is_zero()))
            .map(|row| LinearForm::from_rats(row.clone()))
            .collect();
        let row_space = LinearSpace::span(n, &rows);
        if row_space.dim() != space.dim()
            || !rows.iter().all(|f| space.contains(f))
            || !space.basis().iter().all(|f| row_space.contains(f))
        {
            return Err(format!("trial {trial}: minimal space is not the Gram row space"));
        }
    }

    Ok("rank additivity, restriction bound, re-expansion, row-space: 200 trials each".into())
}
