//! Command dispatch. Every command produces human text, one JSON record per
//! result, and a status that determines the exit code.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde_json::{json, Value};

use mixmult_core::bhattacharya::{BhattacharyaAnalysis, MixedType};
use mixmult_core::field::{CoefficientField, Field, PrimeField, Rationals};
use mixmult_core::groebner::PolyIdeal;
use mixmult_core::harness::{
    fuzz_campaign, verify_main_theorem, verify_rees_corollary, verify_superficial_remark, FuzzConfig, HarnessOptions,
    ReportError, VerificationReport,
};
use mixmult_core::monomial_ideal::MonomialIdeal;
use mixmult_core::multiplicity::{hilbert_samuel, hilbert_samuel_monomial, MultiplicityResult};
use mixmult_core::poly::{Poly, PolyRing};
use mixmult_core::reductions::{
    build_superficial_sequence, check_joint_reduction, BuildOptions, Setup, Window, DEFAULT_RETRIES,
    DEFAULT_WINDOW_WIDTH,
};
use mixmult_core::{Error, Result};

use crate::input::{ProblemSpec, TypeSpec, J_NAME};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    MixedMult,
    Multiplicity,
    Superficial,
    JointReduction,
    Verify,
    VerifyRees,
    Fuzz,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::MixedMult => "mixed-mult",
            CommandKind::Multiplicity => "multiplicity",
            CommandKind::Superficial => "superficial",
            CommandKind::JointReduction => "joint-reduction",
            CommandKind::Verify => "verify",
            CommandKind::VerifyRees => "verify-rees",
            CommandKind::Fuzz => "fuzz",
        }
    }

    pub fn from_name(name: &str) -> Option<CommandKind> {
        [
            CommandKind::MixedMult,
            CommandKind::Multiplicity,
            CommandKind::Superficial,
            CommandKind::JointReduction,
            CommandKind::Verify,
            CommandKind::VerifyRees,
            CommandKind::Fuzz,
        ]
        .into_iter()
        .find(|c| c.name() == name)
    }
}

/// Flag values after merging with the input file's directives.
#[derive(Debug, Clone)]
pub struct Settings {
    pub mixed_type: Option<TypeSpec>,
    pub seed: u64,
    pub window: u32,
    pub offset: Option<u32>,
    pub timings: bool,
    pub ideal: Option<String>,
    pub superficial_only: bool,
    pub fuzz: FuzzConfig,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            mixed_type: None,
            seed: 0,
            window: DEFAULT_WINDOW_WIDTH,
            offset: None,
            timings: false,
            ideal: None,
            superficial_only: false,
            fuzz: FuzzConfig::default(),
        }
    }
}

impl Settings {
    fn harness(&self) -> HarnessOptions {
        HarnessOptions {
            retries: DEFAULT_RETRIES,
            window_width: self.window,
            offset: self.offset,
            timings: self.timings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A verification ran and came out unequal or false.
    Unverified,
    Failed(ReportError),
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub human: String,
    pub records: Vec<Value>,
    pub status: Status,
    /// Field-independent values compared by `--field-check`.
    pub key: Value,
}

pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn type_label(spec: &ProblemSpec, ty: &MixedType) -> String {
    let mut parts = vec![format!("{J_NAME}^[{}]", ty.k0_plus_1)];
    for (name, k) in spec.i_names().iter().zip(&ty.k) {
        parts.push(format!("{name}^[{k}]"));
    }
    format!("e({})", parts.join(", "))
}

/// Label for the m-primary scenario: every ideal in declaration order.
fn tally_label(spec: &ProblemSpec, ty: &MixedType, j_slot: usize) -> String {
    let mut k = ty.k.clone();
    k.insert(j_slot.min(k.len()), ty.k0_plus_1);
    let parts: Vec<String> = spec.ideals.iter().zip(&k).map(|(d, k)| format!("{}^[{k}]", d.name)).collect();
    format!("e({})", parts.join(", "))
}

fn mixed_type(settings: &Settings) -> Result<Option<MixedType>> {
    match &settings.mixed_type {
        None => Ok(None),
        Some(TypeSpec::Mixed(t)) => Ok(Some(t.clone())),
        Some(TypeSpec::Tally(_)) => {
            Err(Error::InvalidArgument("this command needs a type of the form k1,..,ks;k0+1".into()))
        }
    }
}

fn required_type(settings: &Settings) -> Result<MixedType> {
    mixed_type(settings)?.ok_or_else(|| Error::InvalidArgument("--type is required".into()))
}

/// Runs `kind` on `spec` over the spec's own field, or over `field` if given.
pub fn execute(kind: CommandKind, spec: &ProblemSpec, settings: &Settings, field: CoefficientField) -> Result<CommandOutput> {
    match field {
        CoefficientField::Rationals => execute_in(kind, spec, settings, Rationals),
        CoefficientField::Prime { p } => execute_in(kind, spec, settings, PrimeField::new(p)?),
    }
}

fn execute_in<F: Field>(kind: CommandKind, spec: &ProblemSpec, settings: &Settings, field: F) -> Result<CommandOutput> {
    if kind == CommandKind::Fuzz {
        return fuzz(&field, settings);
    }
    let ring = PolyRing::grevlex(spec.variables()?, field);
    match kind {
        CommandKind::MixedMult => mixed_mult(spec, settings),
        CommandKind::Multiplicity => multiplicity(&ring, spec, settings),
        CommandKind::Superficial => superficial(&ring, spec, settings),
        CommandKind::JointReduction => joint_reduction(&ring, spec, settings),
        CommandKind::Verify => verify(&ring, spec, settings),
        CommandKind::VerifyRees => verify_rees(&ring, spec, settings),
        CommandKind::Fuzz => unreachable!(),
    }
}

fn mixed_mult(spec: &ProblemSpec, settings: &Settings) -> Result<CommandOutput> {
    let (j, i_list) = spec.j_and_i_list()?;
    let h = spec.module_ideal()?;
    let analysis = BhattacharyaAnalysis::compute(&j, &i_list, &h, settings.offset)?;
    let values = match mixed_type(settings)? {
        Some(t) => vec![(t.clone(), analysis.mixed_multiplicity(&t)?)],
        None => analysis.all_mixed_multiplicities()?,
    };
    let ctx = analysis.context;
    let mut human = format!(
        "context: nvars={} d={} q={} h={} s={}\npolynomial: total degree {}, offset {}, {}\n",
        ctx.nvars,
        ctx.d,
        ctx.q,
        ctx.h,
        ctx.s,
        ctx.q - 1,
        analysis.polynomial.offset,
        if analysis.degree_certified { "degree certified" } else { "degree NOT certified" }
    );
    let mut records = Vec::new();
    for (t, v) in &values {
        let coefficient = analysis.polynomial.coefficient(&t.exponents());
        writeln!(human, "{} = {v}", type_label(spec, t)).unwrap();
        records.push(json!({
            "command": "mixed-mult",
            "type": t.to_string(),
            "value": v,
            "coefficient": rational(&coefficient),
            "context": ctx,
            "degree_certified": analysis.degree_certified,
            "offset": analysis.polynomial.offset,
        }));
    }
    let key = json!(values.iter().map(|(t, v)| (t.to_string(), *v)).collect::<Vec<_>>());
    let status = if analysis.degree_certified { Status::Success } else { Status::Unverified };
    Ok(CommandOutput { human, records, status, key })
}

fn multiplicity<F: Field>(ring: &PolyRing<F>, spec: &ProblemSpec, settings: &Settings) -> Result<CommandOutput> {
    let name = settings.ideal.clone().unwrap_or_else(|| J_NAME.to_string());
    let decl = spec.ideal(&name)?;
    let h = spec.module_ideal()?;
    let result: MultiplicityResult = match spec.monomial_ideal(&name) {
        Ok(q) => hilbert_samuel_monomial(&q, &h)?,
        Err(_) => {
            let gens = decl.gens.iter().map(|g| g.to_poly(ring)).collect::<Result<Vec<Poly<F>>>>()?;
            hilbert_samuel(&PolyIdeal::new(ring, gens), &h)?
        }
    };
    let d = h.dim_quotient()?;
    let mut human = format!("e({name}; A/{}) = {}\nsamples (n, length):", spec.module_name, result.value);
    for (n, l) in &result.samples {
        write!(human, " ({n}, {l})").unwrap();
    }
    human.push('\n');
    let record = json!({
        "command": "multiplicity",
        "ideal": name,
        "value": result.value,
        "dimension": d,
        "method": result.method,
        "samples": result.samples,
    });
    Ok(CommandOutput { human, records: vec![record], status: Status::Success, key: json!(result.value) })
}

fn setup<F: Field>(ring: &PolyRing<F>, spec: &ProblemSpec) -> Result<Setup<F>> {
    let (j, i_list) = spec.j_and_i_list()?;
    Setup::new(ring.clone(), j, i_list, spec.module_ideal()?)
}

fn window_for(setup: &Setup<impl Field>, settings: &Settings) -> Result<Window> {
    let offset = match settings.offset {
        Some(n) => n,
        None => BhattacharyaAnalysis::compute(&setup.j, &setup.i_list, &setup.h, None)?.polynomial.offset,
    };
    Ok(Window::boxed(setup.s() + 1, offset, settings.window))
}

fn superficial<F: Field>(ring: &PolyRing<F>, spec: &ProblemSpec, settings: &Settings) -> Result<CommandOutput> {
    let ty = required_type(settings)?;
    let setup = setup(ring, spec)?;
    let window = window_for(&setup, settings)?;
    let options = BuildOptions { retries: DEFAULT_RETRIES, window: window.clone(), full_conditions: true };
    let seq = build_superficial_sequence(&setup, &ty, settings.seed, &options)?;
    let mut human = format!("superficial sequence of type {ty} (window offset {}, width {})\n", window.offset, window.width);
    let mut records = Vec::new();
    let mut all = true;
    let slot_names: Vec<&str> = spec.i_names().into_iter().chain([J_NAME]).collect();
    for (e, c) in seq.elements.iter().zip(&seq.certificates) {
        let poly = ring.format(&e.poly);
        let fc = |v: Option<bool>| match v {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        writeln!(
            human,
            "x{} in {}: {poly}\n    FC1 {} on {} tuples, FC2 {}, FC3 {}, dimension drop {}, draws {}",
            c.position + 1,
            slot_names[c.slot],
            if c.fc1.passed { "yes" } else { "no" },
            c.fc1.tuples_checked,
            fc(c.fc2),
            fc(c.fc3),
            if c.dimension_drop { "yes" } else { "no" },
            c.attempts
        )
        .unwrap();
        all &= c.fc2 != Some(false) && c.fc3 != Some(false);
        records.push(json!({
            "command": "superficial",
            "type": ty.to_string(),
            "element": poly,
            "ideal": slot_names[c.slot],
            "certificate": c,
        }));
    }
    let key = json!(seq.certificates.iter().map(|c| (c.fc1.passed, c.fc2, c.fc3)).collect::<Vec<_>>());
    Ok(CommandOutput { human, records, status: if all { Status::Success } else { Status::Unverified }, key })
}

fn joint_reduction<F: Field>(ring: &PolyRing<F>, spec: &ProblemSpec, settings: &Settings) -> Result<CommandOutput> {
    let ty = required_type(settings)?;
    let setup = setup(ring, spec)?;
    let window = window_for(&setup, settings)?;
    let options = BuildOptions { retries: DEFAULT_RETRIES, window: window.clone(), full_conditions: false };
    let seq = build_superficial_sequence(&setup, &ty, settings.seed, &options)?;
    let cert = check_joint_reduction(&seq.elements, &setup, &window)?;
    let elements: Vec<String> = seq.elements.iter().map(|e| ring.format(&e.poly)).collect();
    let mut human = format!("joint reduction of type {ty}\n");
    for (k, e) in elements.iter().enumerate() {
        writeln!(human, "x{} = {e}", k + 1).unwrap();
    }
    writeln!(
        human,
        "identity {} on {} tuples (offset {}, width {}); system of parameters: {}",
        if cert.verified { "holds" } else { "FAILS" },
        cert.tuples_checked,
        window.offset,
        window.width,
        if cert.is_sop { "yes" } else { "no" }
    )
    .unwrap();
    if let Some(t) = &cert.failed_tuple {
        writeln!(human, "first failing tuple: {t:?}").unwrap();
    }
    let ok = cert.verified && cert.is_sop;
    let key = json!([cert.verified, cert.is_sop]);
    let record = json!({
        "command": "joint-reduction",
        "type": ty.to_string(),
        "elements": elements,
        "certificate": cert,
    });
    Ok(CommandOutput { human, records: vec![record], status: if ok { Status::Success } else { Status::Unverified }, key })
}

fn report_output(spec: Option<&ProblemSpec>, command: &str, report: VerificationReport) -> CommandOutput {
    let value = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    let label = match spec {
        Some(spec) => match report.j_slot {
            None => type_label(spec, &report.mixed_type),
            Some(r) => tally_label(spec, &report.mixed_type, r),
        },
        None => format!("e(type {})", report.mixed_type),
    };
    let mut human = format!(
        "{command}: {label} = {}, e(R) = {}: {}\n",
        value(report.mixed_value),
        value(report.reduction_value),
        if report.equal { "equal" } else { "NOT equal" }
    );
    if let Some(c) = &report.context {
        writeln!(human, "context: nvars={} d={} q={} h={} s={}", c.nvars, c.d, c.q, c.h, c.s).unwrap();
    }
    if let Some(r) = report.j_slot {
        let name = spec.and_then(|s| s.ideals.get(r)).map_or(String::new(), |d| format!(" ({})", d.name));
        writeln!(human, "J-slot: ideal {}{name}", r + 1).unwrap();
    }
    for (k, e) in report.elements.iter().enumerate() {
        writeln!(human, "x{} = {e}", k + 1).unwrap();
    }
    if let Some(jr) = &report.joint_reduction {
        writeln!(
            human,
            "joint reduction: {} on {} tuples (offset {}, width {})",
            if jr.verified { "verified" } else { "failed" },
            jr.tuples_checked,
            jr.window.offset,
            jr.window.width
        )
        .unwrap();
    }
    writeln!(human, "degree certified: {}", if report.degree_certified { "yes" } else { "no" }).unwrap();
    writeln!(human, "seed {} (rounds {})", report.seeds.master, report.seeds.rounds).unwrap();
    let status = match (&report.error, report.equal && report.degree_certified) {
        (Some(e), _) => Status::Failed(e.clone()),
        (None, true) => Status::Success,
        (None, false) => Status::Unverified,
    };
    let key = json!([report.mixed_value, report.reduction_value, report.equal]);
    let mut record = serde_json::to_value(&report).expect("reports serialize");
    record["command"] = json!(command);
    record["type"] = json!(report.mixed_type.to_string());
    CommandOutput { human, records: vec![record], status, key }
}

fn verify<F: Field>(ring: &PolyRing<F>, spec: &ProblemSpec, settings: &Settings) -> Result<CommandOutput> {
    let ty = required_type(settings)?;
    let (j, i_list) = spec.j_and_i_list()?;
    let h = spec.module_ideal()?;
    let opts = settings.harness();
    let report = if settings.superficial_only {
        verify_superficial_remark(ring, &j, &i_list, &h, &ty, settings.seed, &opts)
    } else {
        verify_main_theorem(ring, &j, &i_list, &h, &ty, settings.seed, &opts)
    };
    Ok(report_output(Some(spec), "verify", report))
}

fn verify_rees<F: Field>(ring: &PolyRing<F>, spec: &ProblemSpec, settings: &Settings) -> Result<CommandOutput> {
    let k = match &settings.mixed_type {
        Some(TypeSpec::Tally(k)) => k.clone(),
        Some(TypeSpec::Mixed(_)) => {
            return Err(Error::InvalidArgument("verify-rees takes a plain tally k1,..,ks".into()));
        }
        None => return Err(Error::InvalidArgument("--type is required".into())),
    };
    let ideals: Vec<MonomialIdeal> = spec.all_monomial_ideals()?;
    let report = verify_rees_corollary(ring, &ideals, &spec.module_ideal()?, &k, settings.seed, &settings.harness())?;
    Ok(report_output(Some(spec), "verify-rees", report))
}

fn fuzz<F: Field>(field: &F, settings: &Settings) -> Result<CommandOutput> {
    let summary = fuzz_campaign(field, &settings.fuzz, settings.seed, &settings.harness())?;
    let mut human = format!(
        "fuzz over {}: {} trials, {} equal, {} unequal, {} errored, {} degree certified\n",
        summary.field, summary.trials, summary.equal, summary.unequal, summary.errored, summary.degree_certified
    );
    for (kind, count) in &summary.error_kinds {
        writeln!(human, "  {kind}: {count}").unwrap();
    }
    for r in &summary.reproducers {
        writeln!(human, "reproducer trial {} (seed {}): {}", r.trial, r.instance.seed, r.description).unwrap();
    }
    let ok = summary.unequal == 0 && summary.errored == 0;
    let key = json!([summary.equal, summary.unequal, summary.errored]);
    let mut record = serde_json::to_value(&summary).expect("summaries serialize");
    record["command"] = json!("fuzz");
    Ok(CommandOutput { human, records: vec![record], status: if ok { Status::Success } else { Status::Unverified }, key })
}
