//! Seeded instance generation with planted witnesses, and the round trip
//! through the JSON wire format the command-line front end speaks.

use quadrics::cli::{run, Command, Format, InputSource, JobSpec};
use quadrics::{classify, make_instance, PlantedCase, PlantedWitness};

fn main() {
    // Instances are reproducible: the same seed gives the same triple.
    for seed in [0, 1, 2] {
        let inst = make_instance(PlantedCase::SplitPencil, 4, seed).unwrap();
        match &inst.expected {
            PlantedWitness::Split { alpha, beta, factors } => println!(
                "seed {seed}: planted ({alpha})*A + ({beta})*B = ({}) * ({})",
                factors.0, factors.1
            ),
            PlantedWitness::Plane { .. } => unreachable!("split case"),
        }
        let report = classify(&inst.a, &inst.b, &inst.qs, false);
        assert!(report.case_ii.is_some(), "planted witness must be found");
    }
    println!();

    // The same generator drives the CLI; its JSON output feeds classify
    // unchanged, and equal seeds give byte-identical reports.
    let mut gen = JobSpec::new(Command::Generate {
        case: "iii".into(),
        n: 6,
        homogenized: false,
    });
    gen.seed = 7;
    gen.format = Format::Json;
    let instance_json = run(&gen);
    assert_eq!(instance_json.code, 0);
    println!("generate --case iii --n 6 --seed 7:");
    println!("{}", &instance_json.stdout[..instance_json.stdout.len().min(100)]);
    println!("... ({} bytes total)", instance_json.stdout.len());
    assert_eq!(instance_json.stdout, run(&gen).stdout, "byte-stable output");

    let mut classify_job = JobSpec::new(Command::Classify);
    classify_job.input = Some(InputSource::Inline(instance_json.stdout));
    let report = run(&classify_job);
    println!("\nclassify on that instance (exit {}):", report.code);
    println!("{}", report.stdout);
}
