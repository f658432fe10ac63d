//! Batch front end: JSON in, JSON (or short human text) out.
//!
//! [`run`] is a pure function from a [`JobSpec`] to an exit code plus the
//! exact bytes for stdout and stderr, so every command is testable without
//! a process boundary. Exit code 0 means the question was decided, 2 means
//! a resource cap left it undecided, 1 means the input was rejected.

use crate::groebner::{radical_member, Budget};
use crate::jsonio::{
    linear_from_json, linear_to_json, poly_from_json, quad_from_json, quad_to_json, rat_string,
    scalar_to_json, ClassifyInput, DimInput, ExpectedJson, GenerateOutput, PitInput, RadicalInput,
    ScalarJson, SgInput,
};
use crate::linear::{pairwise_independent, LinearForm};
use crate::pit::{
    expand_zero_test_capped, gate_radical_report_with, schwartz_zippel_test, variable_reduction,
    Circuit, ReportError, SzOutcome, DEFAULT_TERM_CAP,
};
use crate::quadratic::{proportional, span_dimension, QuadraticForm};
use crate::scalar::Rat;
use crate::sg::{check_delta_sg, check_ek, check_main_condition_with, check_sg_linear, Verdict};
use crate::structure::{classify_with_budget, make_instance_with, PlantedCase, PlantedWitness};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone)]
pub enum InputSource {
    Path(PathBuf),
    Stdin,
    Inline(String),
}

#[derive(Debug, Clone)]
pub enum Command {
    Classify,
    Radical,
    SgVerify,
    Dim,
    Pit,
    Generate { case: String, n: usize, homogenized: bool },
}

/// Everything one invocation depends on. Identical specs (with identical
/// resolved input bytes) produce identical output bytes in json mode.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<InputSource>,
    pub seed: u64,
    pub max_terms: Option<usize>,
    pub max_pairs: Option<usize>,
    pub format: Format,
    pub oracle: bool,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            input: None,
            seed: 0,
            max_terms: None,
            max_pairs: None,
            format: Format::Json,
            oracle: true,
        }
    }

    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(t) = self.max_terms {
            b.max_terms = t;
        }
        if let Some(p) = self.max_pairs {
            b.max_pairs = p;
        }
        b
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// Rejected input: malformed JSON, arity mismatches, violated
    /// preconditions, unreadable files.
    Input(String),
    /// A resource cap preempted the decision.
    Undecided(String),
}

type Rendered = (String, String);

/// Dispatches a job and renders its report. All analysis is exact; the
/// only randomness is seeded and echoed back in the report.
pub fn run(spec: &JobSpec) -> RunOutcome {
    let result = match &spec.command {
        Command::Classify => cmd_classify(spec),
        Command::Radical => cmd_radical(spec),
        Command::SgVerify => cmd_sg_verify(spec),
        Command::Dim => cmd_dim(spec),
        Command::Pit => cmd_pit(spec),
        Command::Generate { case, n, homogenized } => {
            cmd_generate(spec, case, *n, *homogenized)
        }
    };
    match result {
        Ok((json, human)) => RunOutcome {
            code: EXIT_DECIDED,
            stdout: match spec.format {
                Format::Json => json,
                Format::Human => human,
            },
            stderr: String::new(),
        },
        Err(Failure::Input(msg)) => failure_outcome(spec, EXIT_INPUT_ERROR, "error", &msg),
        Err(Failure::Undecided(msg)) => {
            failure_outcome(spec, EXIT_UNDECIDED, "undecided", &msg)
        }
    }
}

fn failure_outcome(spec: &JobSpec, code: i32, label: &str, msg: &str) -> RunOutcome {
    let mut obj = BTreeMap::new();
    obj.insert(label.to_string(), msg.to_string());
    RunOutcome {
        code,
        stdout: match spec.format {
            Format::Json => serde_json::to_string(&obj).expect("string map serializes"),
            Format::Human => format!("{label}: {msg}"),
        },
        stderr: format!("{label}: {msg}"),
    }
}

fn load_input(spec: &JobSpec) -> Result<String, Failure> {
    match &spec.input {
        None => Err(Failure::Input("this command needs --input".into())),
        Some(InputSource::Inline(text)) => Ok(text.clone()),
        Some(InputSource::Path(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display()))),
        Some(InputSource::Stdin) => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn parse_input<'a, T: serde::Deserialize<'a>>(text: &'a str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("malformed input: {e}")))
}

fn json_of<T: Serialize>(report: &T) -> String {
    serde_json::to_string(report).expect("reports serialize")
}

fn quads_from_json(qs: &[crate::jsonio::QuadJson]) -> Result<Vec<QuadraticForm>, Failure> {
    let quads: Vec<QuadraticForm> = qs
        .iter()
        .map(quad_from_json)
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(first) = quads.first() {
        if quads.iter().any(|q| q.n() != first.n()) {
            return Err(Failure::Input("quadratics must share one arity".into()));
        }
    }
    Ok(quads)
}

fn forms_from_json(forms: &[Vec<ScalarJson>]) -> Result<Vec<LinearForm>, Failure> {
    let parsed: Vec<LinearForm> = forms
        .iter()
        .map(|f| linear_from_json(f))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(first) = parsed.first() {
        if parsed.iter().any(|f| f.n() != first.n()) {
            return Err(Failure::Input("forms must share one arity".into()));
        }
    }
    Ok(parsed)
}

fn require_independent_family(forms: &[LinearForm], least: usize) -> Result<(), Failure> {
    if forms.len() < least {
        return Err(Failure::Input(format!("need at least {least} forms, got {}", forms.len())));
    }
    if !pairwise_independent(forms) {
        return Err(Failure::Input(
            "forms must be nonzero and pairwise linearly independent".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct CaseIJson {
    index: usize,
    alpha: String,
    beta: String,
}

#[derive(Serialize)]
struct CaseIIJson {
    alpha: ScalarJson,
    beta: ScalarJson,
    factors: Option<Vec<Vec<ScalarJson>>>,
    certificate: Option<Vec<String>>,
}

#[derive(Serialize)]
struct CaseIIIJson {
    a: Vec<ScalarJson>,
    b: Vec<ScalarJson>,
    vanishing_member: Option<usize>,
}

#[derive(Serialize)]
struct ClassifyReport {
    case_i: Option<CaseIJson>,
    case_ii: Option<CaseIIJson>,
    case_iii: Option<CaseIIIJson>,
    pencil_certificate: Option<Vec<String>>,
    oracle_confirmed: Option<bool>,
    undecided: Vec<String>,
}

fn binary_coeff_strings(f: &crate::binary::BinaryForm<Rat>) -> Vec<String> {
    f.coeffs.iter().map(rat_string).collect()
}

fn cmd_classify(spec: &JobSpec) -> Result<Rendered, Failure> {
    let text = load_input(spec)?;
    let input: ClassifyInput = parse_input(&text)?;
    let a = quad_from_json(&input.a).map_err(|e| Failure::Input(e.to_string()))?;
    let b = quad_from_json(&input.b).map_err(|e| Failure::Input(e.to_string()))?;
    let qs = quads_from_json(&input.qs)?;
    if qs.is_empty() {
        return Err(Failure::Input("the family qs must be nonempty".into()));
    }
    if a.n() != b.n() || qs[0].n() != a.n() {
        return Err(Failure::Input("all quadratics must share one arity".into()));
    }
    if a.is_zero() || b.is_zero() || proportional(&a, &b) {
        return Err(Failure::Input("the pair must be linearly independent".into()));
    }
    let report = classify_with_budget(&a, &b, &qs, spec.oracle, &spec.budget());
    let decided = report.case_i.is_some() || report.case_ii.is_some() || report.case_iii.is_some();
    let out = ClassifyReport {
        case_i: report.case_i.as_ref().map(|(k, al, be)| CaseIJson {
            index: *k,
            alpha: rat_string(al),
            beta: rat_string(be),
        }),
        case_ii: report.case_ii.as_ref().map(|w| CaseIIJson {
            alpha: scalar_to_json(&w.alpha),
            beta: scalar_to_json(&w.beta),
            factors: w
                .factors
                .as_ref()
                .map(|(c, d)| vec![linear_to_json(c), linear_to_json(d)]),
            certificate: w.certificate.as_ref().map(binary_coeff_strings),
        }),
        case_iii: report.case_iii.as_ref().map(|(pa, pb, k)| CaseIIIJson {
            a: linear_to_json(pa),
            b: linear_to_json(pb),
            vanishing_member: *k,
        }),
        pencil_certificate: report.pencil_certificate.as_ref().map(binary_coeff_strings),
        oracle_confirmed: report.oracle_confirmed,
        undecided: report.undecided.clone(),
    };
    if !decided && !report.undecided.is_empty() {
        return Err(Failure::Undecided(report.undecided.join("; ")));
    }
    let mut human = String::new();
    match &report.case_i {
        Some((k, al, be)) => {
            let _ = writeln!(human, "case i: member {k} = ({al})*A + ({be})*B");
        }
        None => {
            let _ = writeln!(human, "case i: no member lies in the span of the pair");
        }
    }
    match &report.case_ii {
        Some(w) => {
            let _ = writeln!(human, "case ii: ({})*A + ({})*B splits", w.alpha, w.beta);
            if let Some((c, d)) = &w.factors {
                let _ = writeln!(human, "  factors: ({c}) * ({d})");
            }
        }
        None => {
            let _ = writeln!(human, "case ii: no pencil member splits");
        }
    }
    match &report.case_iii {
        Some((pa, pb, k)) => {
            let _ = writeln!(human, "case iii: both vanish on {{{pa} = 0, {pb} = 0}}");
            if let Some(k) = k {
                let _ = writeln!(human, "  member {k} vanishes on the same plane");
            }
        }
        None => {
            let _ = writeln!(human, "case iii: no common isotropic plane");
        }
    }
    if let Some(confirmed) = report.oracle_confirmed {
        let _ = writeln!(
            human,
            "oracle: product of the family {} in the radical of the pair",
            if confirmed { "lies" } else { "does not lie" }
        );
    }
    for note in &report.undecided {
        let _ = writeln!(human, "undecided: {note}");
    }
    Ok((json_of(&out), human))
}

#[derive(Serialize)]
struct RadicalReport {
    member: bool,
}

fn cmd_radical(spec: &JobSpec) -> Result<Rendered, Failure> {
    let text = load_input(spec)?;
    let input: RadicalInput = parse_input(&text)?;
    let f = poly_from_json(&input.f).map_err(|e| Failure::Input(e.to_string()))?;
    let gens: Vec<_> = input
        .gens
        .iter()
        .map(poly_from_json)
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    if gens.is_empty() {
        return Err(Failure::Input("gens must be nonempty".into()));
    }
    if gens.iter().any(|g: &crate::poly::MultiPoly| g.n() != f.n()) {
        return Err(Failure::Input("f and gens must share one arity".into()));
    }
    let member = radical_member(&f, &gens, &spec.budget())
        .map_err(|cap| Failure::Undecided(cap.to_string()))?;
    let human = format!(
        "f {} in the radical of the ideal of the generators\n",
        if member { "lies" } else { "does not lie" }
    );
    Ok((json_of(&RadicalReport { member }), human))
}

#[derive(Serialize)]
struct SgFlagReport {
    kind: &'static str,
    holds: bool,
}

#[derive(Serialize)]
struct SgDeltaReport {
    kind: &'static str,
    delta: String,
}

#[derive(Serialize)]
struct SgMainReport {
    kind: &'static str,
    verdict: &'static str,
    span_dimension: usize,
    failing_pairs: Vec<(usize, usize)>,
    undecided_pairs: Vec<(usize, usize)>,
    subsets: Option<BTreeMap<String, Vec<usize>>>,
}

fn cmd_sg_verify(spec: &JobSpec) -> Result<Rendered, Failure> {
    let text = load_input(spec)?;
    let input: SgInput = parse_input(&text)?;
    match input {
        SgInput::Sg { forms } => {
            let forms = forms_from_json(&forms)?;
            require_independent_family(&forms, 3)?;
            let holds = check_sg_linear(&forms);
            let human = format!(
                "closure {}: every pair {} a third member\n",
                if holds { "holds" } else { "fails" },
                if holds { "spans" } else { "does not always span" }
            );
            Ok((json_of(&SgFlagReport { kind: "sg", holds }), human))
        }
        SgInput::Delta { forms } => {
            let forms = forms_from_json(&forms)?;
            require_independent_family(&forms, 2)?;
            let delta = check_delta_sg(&forms);
            let human = format!("robustness delta = {}\n", rat_string(&delta));
            Ok((json_of(&SgDeltaReport { kind: "delta", delta: rat_string(&delta) }), human))
        }
        SgInput::Ek { forms, groups } => {
            let forms = forms_from_json(&forms)?;
            if groups.len() != 3 {
                return Err(Failure::Input("ek needs exactly three groups".into()));
            }
            let mut split: Vec<Vec<LinearForm>> = Vec::new();
            for group in &groups {
                if group.is_empty() {
                    return Err(Failure::Input("groups must be nonempty".into()));
                }
                let mut g = Vec::new();
                for &i in group {
                    g.push(
                        forms
                            .get(i)
                            .cloned()
                            .ok_or_else(|| Failure::Input(format!("form index {i} out of range")))?,
                    );
                }
                split.push(g);
            }
            let mut seen = std::collections::BTreeSet::new();
            if groups.iter().flatten().any(|&i| !seen.insert(i)) {
                return Err(Failure::Input("groups must be disjoint".into()));
            }
            let all: Vec<LinearForm> = split.iter().flatten().cloned().collect();
            if !pairwise_independent(&all) {
                return Err(Failure::Input(
                    "forms must be nonzero and pairwise linearly independent".into(),
                ));
            }
            let holds = check_ek(&split[0], &split[1], &split[2]);
            let human = format!(
                "cross-closure {}: pairs from two groups {} span a member of the third\n",
                if holds { "holds" } else { "fails" },
                if holds { "always" } else { "do not always" }
            );
            Ok((json_of(&SgFlagReport { kind: "ek", holds }), human))
        }
        SgInput::Main { qs } => {
            let quads = quads_from_json(&qs)?;
            if quads.len() < 3 {
                return Err(Failure::Input("need at least three quadratics".into()));
            }
            if quads.iter().any(QuadraticForm::is_zero)
                || (0..quads.len()).any(|i| {
                    (i + 1..quads.len()).any(|j| proportional(&quads[i], &quads[j]))
                })
            {
                return Err(Failure::Input(
                    "quadratics must be nonzero and pairwise independent".into(),
                ));
            }
            let report = check_main_condition_with(&quads, spec.oracle, &spec.budget());
            let verdict = match report.verdict {
                Verdict::Holds => "holds",
                Verdict::Fails => "fails",
                Verdict::Undetermined => "undetermined",
            };
            let out = SgMainReport {
                kind: "main",
                verdict,
                span_dimension: report.span_dimension,
                failing_pairs: report.failing_pairs.clone(),
                undecided_pairs: report.undecided_pairs.clone(),
                subsets: report.subsets.as_ref().map(|m| {
                    m.iter().map(|((i, j), s)| (format!("{i},{j}"), s.clone())).collect()
                }),
            };
            let mut human = format!(
                "pairwise radical condition {verdict}; span dimension {}\n",
                report.span_dimension
            );
            for (i, j) in &report.failing_pairs {
                let _ = writeln!(human, "  pair ({i}, {j}) fails");
            }
            for (i, j) in &report.undecided_pairs {
                let _ = writeln!(human, "  pair ({i}, {j}) undecided within budget");
            }
            if matches!(report.verdict, Verdict::Undetermined) {
                return Err(Failure::Undecided(format!(
                    "{} pair(s) exceeded the oracle budget",
                    report.undecided_pairs.len()
                )));
            }
            Ok((json_of(&out), human))
        }
    }
}

#[derive(Serialize)]
struct DimReport {
    dimension: usize,
}

fn cmd_dim(spec: &JobSpec) -> Result<Rendered, Failure> {
    let text = load_input(spec)?;
    let input: DimInput = parse_input(&text)?;
    let quads = quads_from_json(&input.qs)?;
    if quads.is_empty() {
        return Err(Failure::Input("qs must be nonempty".into()));
    }
    let dimension = span_dimension(&quads);
    let human = format!("span dimension {dimension}\n");
    Ok((json_of(&DimReport { dimension }), human))
}

#[derive(Serialize)]
struct PairCheckJson {
    j2: usize,
    j3: usize,
    confirmed: bool,
    subset: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct PitReport {
    method: &'static str,
    zero: Option<bool>,
    reduced_variables: usize,
    seed: Option<u64>,
    trials: Option<usize>,
    witness: Option<Vec<String>>,
    witness_trial: Option<usize>,
    pair_checks: Option<Vec<PairCheckJson>>,
    notes: Vec<String>,
}

fn cmd_pit(spec: &JobSpec) -> Result<Rendered, Failure> {
    let text = load_input(spec)?;
    let input: PitInput = parse_input(&text)?;
    if !(1..=3).contains(&input.gates.len()) {
        return Err(Failure::Input("between one and three gates".into()));
    }
    let mut gates = Vec::new();
    for gate in &input.gates {
        if gate.is_empty() {
            return Err(Failure::Input("every gate needs at least one factor".into()));
        }
        let factors = quads_from_json(gate)?;
        if factors.iter().any(|q| q.n() != input.n) {
            return Err(Failure::Input("factor arity must match n".into()));
        }
        if factors.iter().any(QuadraticForm::is_zero) {
            return Err(Failure::Input("factors must be nonzero".into()));
        }
        gates.push(factors);
    }
    let circuit = Circuit::new(input.n, gates);
    let reduction = variable_reduction(&circuit);
    let cap = spec.max_terms.unwrap_or(DEFAULT_TERM_CAP);
    let mut notes = Vec::new();
    match expand_zero_test_capped(&reduction.circuit, cap) {
        Ok(zero) => {
            let pair_checks = if zero && circuit.gates().len() == 3 && spec.oracle {
                match gate_radical_report_with(&circuit, &spec.budget()) {
                    Ok(checks) => Some(
                        checks
                            .into_iter()
                            .map(|c| PairCheckJson {
                                j2: c.j2,
                                j3: c.j3,
                                confirmed: c.confirmed,
                                subset: c.subset,
                            })
                            .collect::<Vec<_>>(),
                    ),
                    Err(ReportError::Oracle(cap)) => {
                        notes.push(format!("pair analysis skipped: {cap}"));
                        None
                    }
                    Err(e) => {
                        notes.push(format!("pair analysis skipped: {e}"));
                        None
                    }
                }
            } else {
                None
            };
            let out = PitReport {
                method: "expansion",
                zero: Some(zero),
                reduced_variables: reduction.delta,
                seed: None,
                trials: None,
                witness: None,
                witness_trial: None,
                pair_checks,
                notes: notes.clone(),
            };
            let mut human = format!(
                "the circuit computes {} (exact expansion over {} variables)\n",
                if zero { "the zero polynomial" } else { "a nonzero polynomial" },
                reduction.delta
            );
            if let Some(checks) = &out.pair_checks {
                for c in checks {
                    let _ = writeln!(
                        human,
                        "  pair ({}, {}): first-gate product {} the radical{}",
                        c.j2,
                        c.j3,
                        if c.confirmed { "lies in" } else { "escapes" },
                        match &c.subset {
                            Some(s) => format!(", subset {s:?} suffices"),
                            None => String::new(),
                        }
                    );
                }
            }
            for note in &notes {
                let _ = writeln!(human, "  note: {note}");
            }
            Ok((json_of(&out), human))
        }
        Err(cap_err) => {
            let trials = input.trials.unwrap_or(10);
            if trials == 0 {
                return Err(Failure::Undecided(format!(
                    "{cap_err}; no evaluation trials requested"
                )));
            }
            match schwartz_zippel_test(&circuit, trials, spec.seed) {
                SzOutcome::ProbablyNonzero { trial, witness } => {
                    let out = PitReport {
                        method: "evaluation",
                        zero: Some(false),
                        reduced_variables: reduction.delta,
                        seed: Some(spec.seed),
                        trials: Some(trials),
                        witness: Some(witness.iter().map(rat_string).collect()),
                        witness_trial: Some(trial),
                        pair_checks: None,
                        notes: vec![format!("expansion abandoned: {cap_err}")],
                    };
                    let human = format!(
                        "the circuit computes a nonzero polynomial \
                         (nonzero value at a seeded point, trial {trial})\n"
                    );
                    Ok((json_of(&out), human))
                }
                SzOutcome::ConsistentWithZero { trials } => Err(Failure::Undecided(format!(
                    "{cap_err}; {trials} evaluation trials all vanished, \
                     which cannot certify zero"
                ))),
            }
        }
    }
}

fn cmd_generate(
    spec: &JobSpec,
    case: &str,
    n: usize,
    homogenized: bool,
) -> Result<Rendered, Failure> {
    let planted = match case {
        "ii" => PlantedCase::SplitPencil,
        "iii" => PlantedCase::SharedPlane,
        other => {
            return Err(Failure::Input(format!(
                "unknown case {other:?}; expected \"ii\" or \"iii\""
            )))
        }
    };
    let instance = make_instance_with(planted, n, spec.seed, homogenized)
        .map_err(|e| Failure::Input(e.to_string()))?;
    let expected = match &instance.expected {
        PlantedWitness::Split { alpha, beta, factors } => ExpectedJson::Split {
            alpha: rat_string(alpha),
            beta: rat_string(beta),
            factors: vec![linear_to_json(&factors.0), linear_to_json(&factors.1)],
        },
        PlantedWitness::Plane { a, b } => {
            ExpectedJson::Plane { a: linear_to_json(a), b: linear_to_json(b) }
        }
    };
    let out = GenerateOutput {
        case: case.to_string(),
        n,
        seed: spec.seed,
        a: quad_to_json(&instance.a),
        b: quad_to_json(&instance.b),
        qs: instance.qs.iter().map(quad_to_json).collect(),
        expected,
    };
    let mut human = format!(
        "generated a case-{case} instance over {n} variables (seed {})\n",
        spec.seed
    );
    let _ = writeln!(human, "  A = {}", instance.a);
    let _ = writeln!(human, "  B = {}", instance.b);
    for (k, q) in instance.qs.iter().enumerate() {
        let _ = writeln!(human, "  Q{k} = {q}");
    }
    Ok((json_of(&out), human))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_with(command: Command, input: &str) -> JobSpec {
        let mut spec = JobSpec::new(command);
        spec.input = Some(InputSource::Inline(input.to_string()));
        spec
    }

    #[test]
    fn radical_membership_of_x_in_x_squared() {
        let input = r#"{
            "f": {"n": 1, "terms": [[[1], "1"]]},
            "gens": [{"n": 1, "terms": [[[2], "1"]]}]
        }"#;
        let out = run(&spec_with(Command::Radical, input));
        assert_eq!(out.code, EXIT_DECIDED);
        assert_eq!(out.stdout, r#"{"member":true}"#);
    }

    #[test]
    fn radical_rejects_a_non_member() {
        let input = r#"{
            "f": {"n": 2, "terms": [[[1, 0], "1"]]},
            "gens": [{"n": 2, "terms": [[[0, 2], "1"]]}]
        }"#;
        let out = run(&spec_with(Command::Radical, input));
        assert_eq!(out.code, EXIT_DECIDED);
        assert_eq!(out.stdout, r#"{"member":false}"#);
    }

    #[test]
    fn malformed_json_is_an_input_error() {
        let out = run(&spec_with(Command::Radical, "{ not json"));
        assert_eq!(out.code, EXIT_INPUT_ERROR);
        assert!(out.stderr.contains("malformed input"));
    }

    #[test]
    fn starved_oracle_reports_undecided() {
        let mut spec = spec_with(
            Command::Radical,
            r#"{
                "f": {"n": 3, "terms": [[[1, 1, 1], "1"]]},
                "gens": [
                    {"n": 3, "terms": [[[2, 0, 0], "1"], [[0, 1, 0], "2"], [[0, 0, 1], "3"]]},
                    {"n": 3, "terms": [[[0, 2, 0], "1"], [[0, 0, 1], "5"], [[1, 0, 0], "7"]]}
                ]
            }"#,
        );
        spec.max_pairs = Some(1);
        let out = run(&spec);
        assert_eq!(out.code, EXIT_UNDECIDED);
    }

    #[test]
    fn sg_closure_of_the_triangle_family() {
        let input = r#"{"kind": "sg",
            "forms": [["1","0"],["0","1"],["1","1"]]}"#;
        let out = run(&spec_with(Command::SgVerify, input));
        assert_eq!(out.code, EXIT_DECIDED);
        assert_eq!(out.stdout, r#"{"kind":"sg","holds":true}"#);
    }

    #[test]
    fn delta_of_a_generic_triple_is_zero() {
        let input = r#"{"kind": "delta",
            "forms": [["1","0","0"],["0","1","0"],["0","0","1"]]}"#;
        let out = run(&spec_with(Command::SgVerify, input));
        assert_eq!(out.code, EXIT_DECIDED);
        assert_eq!(out.stdout, r#"{"kind":"delta","delta":"0"}"#);
    }

    #[test]
    fn ek_overlapping_groups_are_rejected() {
        let input = r#"{"kind": "ek",
            "forms": [["1","0"],["0","1"],["1","1"]],
            "groups": [[0],[1],[1]]}"#;
        let out = run(&spec_with(Command::SgVerify, input));
        assert_eq!(out.code, EXIT_INPUT_ERROR);
        assert!(out.stderr.contains("disjoint"));
    }

    #[test]
    fn dim_of_two_squares_and_their_sum() {
        let input = r#"{"qs": [
            {"gram": [["1","0"],["0","0"]]},
            {"gram": [["0","0"],["0","1"]]},
            {"gram": [["1","0"],["0","1"]]}
        ]}"#;
        let out = run(&spec_with(Command::Dim, input));
        assert_eq!(out.code, EXIT_DECIDED);
        assert_eq!(out.stdout, r#"{"dimension":2}"#);
    }

    #[test]
    fn classify_requires_an_independent_pair() {
        let input = r#"{
            "a": {"gram": [["1","0"],["0","0"]]},
            "b": {"gram": [["2","0"],["0","0"]]},
            "qs": [{"gram": [["0","0"],["0","1"]]}]
        }"#;
        let out = run(&spec_with(Command::Classify, input));
        assert_eq!(out.code, EXIT_INPUT_ERROR);
        assert!(out.stderr.contains("independent"));
    }

    #[test]
    fn generated_instances_classify_with_their_planted_case() {
        for (case, n, expect_iii) in [("ii", 5, false), ("iii", 6, true)] {
            let mut gen = JobSpec::new(Command::Generate {
                case: case.into(),
                n,
                homogenized: false,
            });
            gen.seed = 7;
            let generated = run(&gen);
            assert_eq!(generated.code, EXIT_DECIDED, "generate {case} failed");
            let classify = spec_with(Command::Classify, &generated.stdout);
            let out = run(&classify);
            assert_eq!(out.code, EXIT_DECIDED);
            let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
            if expect_iii {
                assert!(!report["case_iii"].is_null(), "case iii expected: {}", out.stdout);
            } else {
                assert!(!report["case_ii"].is_null(), "case ii expected: {}", out.stdout);
            }
        }
    }

    #[test]
    fn json_output_is_byte_stable() {
        let mut gen =
            JobSpec::new(Command::Generate { case: "iii".into(), n: 6, homogenized: false });
        gen.seed = 11;
        let first = run(&gen);
        let second = run(&gen);
        assert_eq!(first.stdout, second.stdout);
        let classify = spec_with(Command::Classify, &first.stdout);
        assert_eq!(run(&classify).stdout, run(&classify).stdout);
    }

    #[test]
    fn pit_decides_a_cancelling_sum_and_reports_pairs() {
        let input = r#"{
            "n": 4,
            "gates": [
                [{"gram": [["0","1/2","0","0"],["1/2","0","0","0"],["0","0","0","0"],["0","0","0","0"]]},
                 {"gram": [["0","0","0","0"],["0","0","0","0"],["0","0","0","1/2"],["0","0","1/2","0"]]}],
                [{"gram": [["0","1/2","0","0"],["1/2","0","0","0"],["0","0","0","0"],["0","0","0","0"]]},
                 {"gram": [["0","0","0","0"],["0","0","0","0"],["0","0","0","1/2"],["0","0","1/2","0"]]}],
                [{"gram": [["0","-1","0","0"],["-1","0","0","0"],["0","0","0","0"],["0","0","0","0"]]},
                 {"gram": [["0","0","0","0"],["0","0","0","0"],["0","0","0","1/2"],["0","0","1/2","0"]]}]
            ]
        }"#;
        let out = run(&spec_with(Command::Pit, input));
        assert_eq!(out.code, EXIT_DECIDED, "stderr: {}", out.stderr);
        let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(report["zero"], serde_json::Value::Bool(true));
        let checks = report["pair_checks"].as_array().expect("pair checks present");
        assert_eq!(checks.len(), 4);
        for check in checks {
            assert_eq!(check["confirmed"], serde_json::Value::Bool(true));
        }
    }

    #[test]
    fn pit_starved_expansion_falls_back_to_evaluation() {
        let mut spec = spec_with(
            Command::Pit,
            r#"{"n": 2, "gates": [[{"gram": [["1","1"],["1","2"]]}]]}"#,
        );
        spec.max_terms = Some(1);
        spec.seed = 5;
        let out = run(&spec);
        assert_eq!(out.code, EXIT_DECIDED);
        let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(report["method"], "evaluation");
        assert_eq!(report["zero"], serde_json::Value::Bool(false));
        assert!(report["witness"].is_array());
    }

    #[test]
    fn pit_starved_expansion_of_a_zero_circuit_is_undecided() {
        let mut spec = spec_with(
            Command::Pit,
            r#"{"n": 4, "gates": [
                [{"gram": [["0","1/2","0","0"],["1/2","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}],
                [{"gram": [["0","-1/2","0","0"],["-1/2","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}]
            ]}"#,
        );
        spec.max_terms = Some(0);
        let out = run(&spec);
        assert_eq!(out.code, EXIT_UNDECIDED);
        assert!(out.stderr.contains("cannot certify zero"));
    }

    #[test]
    fn human_format_renders_text() {
        let input = r#"{"qs": [{"gram": [["1","0"],["0","0"]]}]}"#;
        let mut spec = spec_with(Command::Dim, input);
        spec.format = Format::Human;
        let out = run(&spec);
        assert_eq!(out.code, EXIT_DECIDED);
        assert_eq!(out.stdout, "span dimension 1\n");
    }

    #[test]
    fn missing_input_is_an_input_error() {
        let out = run(&JobSpec::new(Command::Dim));
        assert_eq!(out.code, EXIT_INPUT_ERROR);
        assert!(out.stderr.contains("--input"));
    }
}
