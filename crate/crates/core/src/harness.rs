//! End-to-end verification scenarios: both sides of the mixed multiplicity
//! identity on one instance, its m-primary specialisation, the vanishing
//! fixture, and seeded random campaigns.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bhattacharya::{context, AnalysisContext, BhattacharyaAnalysis, MixedType};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{monomials_of_degree, Monomial, VariableSet};
use crate::monomial_ideal::MonomialIdeal;
use crate::multiplicity::multiplicity_symbol;
use crate::poly::{Poly, PolyRing};
use crate::reductions::{
    build_superficial_sequence, check_joint_reduction, check_type, BuildOptions, JointReductionCertificate, Setup,
    SuperficialCertificate, Window, DEFAULT_RETRIES, DEFAULT_WINDOW_WIDTH,
};
use crate::seed::{child_seed, rng_from_seed};

/// Tunables shared by the verification scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarnessOptions {
    pub retries: u32,
    pub window_width: u32,
    /// Overrides the starting offset of the interpolation and the window.
    pub offset: Option<u32>,
    /// Record wall-clock timings (they break byte-identical output).
    pub timings: bool,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions { retries: DEFAULT_RETRIES, window_width: DEFAULT_WINDOW_WIDTH, offset: None, timings: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    MainTheorem,
    ReesCorollary,
    SuperficialRemark,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportError {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ReportError {
    fn from(e: &Error) -> Self {
        ReportError { kind: e.kind().to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub master: u64,
    /// Seed handed to the sequence builder on the accepted round.
    pub sequence: Option<u64>,
    /// Builder rounds used, counting the accepted one.
    pub rounds: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub mixed_ms: u64,
    pub reduction_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: Scenario,
    pub field: String,
    pub context: Option<AnalysisContext>,
    #[serde(rename = "type")]
    pub mixed_type: MixedType,
    /// Input index used as the J-slot (m-primary scenario only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_slot: Option<usize>,
    pub mixed_value: Option<u64>,
    pub reduction_value: Option<u64>,
    pub equal: bool,
    pub degree_certified: bool,
    pub offset: Option<u32>,
    pub elements: Vec<String>,
    pub superficial: Vec<SuperficialCertificate>,
    pub joint_reduction: Option<JointReductionCertificate>,
    pub seeds: SeedRecord,
    pub error: Option<ReportError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl VerificationReport {
    fn new<F: Field>(scenario: Scenario, ring: &PolyRing<F>, ty: &MixedType, seed: u64) -> Self {
        VerificationReport {
            scenario,
            field: ring.field().descriptor().to_string(),
            context: None,
            mixed_type: ty.clone(),
            j_slot: None,
            mixed_value: None,
            reduction_value: None,
            equal: false,
            degree_certified: false,
            offset: None,
            elements: Vec::new(),
            superficial: Vec::new(),
            joint_reduction: None,
            seeds: SeedRecord { master: seed, sequence: None, rounds: 0 },
            error: None,
            timings: None,
        }
    }

    /// Hypotheses held and both sides agree.
    pub fn verified(&self) -> bool {
        self.error.is_none() && self.equal
    }
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Both sides of `e(J^{[k_0+1]}, I^{[k]}; A/H) = e(R; A/H)`.
///
/// Hypothesis failures produce an advisory report: the mixed value is
/// recorded when computable and `equal` stays false.
pub fn verify_main_theorem<F: Field>(
    ring: &PolyRing<F>,
    j: &MonomialIdeal,
    i_list: &[MonomialIdeal],
    h: &MonomialIdeal,
    ty: &MixedType,
    seed: u64,
    options: &HarnessOptions,
) -> VerificationReport {
    run(Scenario::MainTheorem, ring, j, i_list, h, ty, seed, options)
}

/// Same comparison, certifying only the superficial sequence and the
/// parameter property instead of the joint-reduction identity.
pub fn verify_superficial_remark<F: Field>(
    ring: &PolyRing<F>,
    j: &MonomialIdeal,
    i_list: &[MonomialIdeal],
    h: &MonomialIdeal,
    ty: &MixedType,
    seed: u64,
    options: &HarnessOptions,
) -> VerificationReport {
    run(Scenario::SuperficialRemark, ring, j, i_list, h, ty, seed, options)
}

/// `e(I_1^{[k_1]}, …, I_s^{[k_s]}; A/H) = e(R; A/H)` for m-primary `I_i` and
/// `Σ k_i = d`. The last ideal with a positive entry becomes the J-slot.
pub fn verify_rees_corollary<F: Field>(
    ring: &PolyRing<F>,
    ideals: &[MonomialIdeal],
    h: &MonomialIdeal,
    k: &[u32],
    seed: u64,
    options: &HarnessOptions,
) -> Result<VerificationReport> {
    if ideals.len() != k.len() {
        return Err(Error::DimensionMismatch { expected: ideals.len(), found: k.len() });
    }
    if let Some(bad) = ideals.iter().position(|i| i.is_unit() || !i.is_m_primary()) {
        return Err(Error::NotMPrimary(format!("ideal {} is not m-primary", bad + 1)));
    }
    let d = h.dim_quotient()?;
    let total: u32 = k.iter().sum();
    if total as usize != d {
        return Err(Error::DegreeMismatch { type_degree: total as i64, expected: d as i64 });
    }
    let r = k.iter().rposition(|&v| v > 0).ok_or_else(|| Error::InvalidArgument("empty type".into()))?;
    let mut i_list = ideals.to_vec();
    let j = i_list.remove(r);
    let mut rest = k.to_vec();
    let k0_plus_1 = rest.remove(r);
    let ty = MixedType::new(rest, k0_plus_1)?;
    let mut report = run(Scenario::ReesCorollary, ring, &j, &i_list, h, &ty, seed, options);
    report.j_slot = Some(r);
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run<F: Field>(
    scenario: Scenario,
    ring: &PolyRing<F>,
    j: &MonomialIdeal,
    i_list: &[MonomialIdeal],
    h: &MonomialIdeal,
    ty: &MixedType,
    seed: u64,
    options: &HarnessOptions,
) -> VerificationReport {
    let mut report = VerificationReport::new(scenario, ring, ty, seed);
    if let Err(e) = run_into(&mut report, scenario, ring, j, i_list, h, ty, seed, options) {
        report.equal = false;
        report.error = Some(ReportError::from(&e));
    }
    report
}

#[allow(clippy::too_many_arguments)]
fn run_into<F: Field>(
    report: &mut VerificationReport,
    scenario: Scenario,
    ring: &PolyRing<F>,
    j: &MonomialIdeal,
    i_list: &[MonomialIdeal],
    h: &MonomialIdeal,
    ty: &MixedType,
    seed: u64,
    options: &HarnessOptions,
) -> Result<()> {
    let ctx = context(j, i_list, h)?;
    report.context = Some(ctx);
    let setup = Setup::new(ring.clone(), j.clone(), i_list.to_vec(), h.clone())?;
    let t = Instant::now();
    let analysis = BhattacharyaAnalysis::compute(j, i_list, h, options.offset);
    if let Err(e) = check_type(&setup, ty) {
        // Advisory mode: keep the mixed value when the type has the right shape.
        if let Ok(a) = &analysis {
            report.mixed_value = a.mixed_multiplicity(ty).ok();
            report.degree_certified = a.degree_certified;
            report.offset = Some(a.polynomial.offset);
        }
        return Err(e);
    }
    let analysis = analysis?;
    report.degree_certified = analysis.degree_certified;
    report.offset = Some(analysis.polynomial.offset);
    report.mixed_value = Some(analysis.mixed_multiplicity(ty)?);
    let mixed_ms = elapsed_ms(t);

    let t = Instant::now();
    let window = Window::boxed(setup.s() + 1, analysis.polynomial.offset, options.window_width);
    let build = BuildOptions { retries: options.retries, window: window.clone(), full_conditions: false };
    let base = child_seed(seed, 0);
    let mut last_err = None;
    for round in 0..=options.retries {
        let round_seed = child_seed(base, round as u64);
        report.seeds.rounds = round + 1;
        let seq = match build_superficial_sequence(&setup, ty, round_seed, &build) {
            Ok(seq) => seq,
            Err(e @ Error::GenericityFailure(_)) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let polys: Vec<Poly<F>> = seq.elements.iter().map(|e| e.poly.clone()).collect();
        let accepted = match scenario {
            Scenario::SuperficialRemark => crate::reductions::is_system_of_parameters(&setup, &polys)?,
            _ => {
                let cert = check_joint_reduction(&seq.elements, &setup, &window)?;
                let ok = cert.verified && cert.is_sop;
                report.joint_reduction = Some(cert);
                ok
            }
        };
        if !accepted {
            last_err = Some(Error::GenericityFailure(format!("round {round} did not certify")));
            continue;
        }
        report.seeds.sequence = Some(round_seed);
        report.elements = polys.iter().map(|p| ring.format(p)).collect();
        report.superficial = seq.certificates;
        report.reduction_value = Some(multiplicity_symbol(ring, &polys, h)?.value);
        report.equal = report.mixed_value == report.reduction_value;
        if options.timings {
            report.timings = Some(Timings { mixed_ms, reduction_ms: elapsed_ms(t) });
        }
        return Ok(());
    }
    Err(last_err.unwrap_or_else(|| Error::GenericityFailure("no certified sequence".into())))
}

/// Mixed multiplicities `e(m^{[d-i]}, I^{[i]})` for `I = (x_1, …, x_h)` in
/// `k[x_1, …, x_d]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub d: usize,
    pub h: usize,
    /// `(i, value)` for `i = 0, …, d - 1`.
    pub values: Vec<(u32, u64)>,
    /// Every value with `i ≥ h` is zero.
    pub vanishes_from_height: bool,
    /// Some value with `i < h` is positive, so the zero is not a
    /// multiplicity of a system of parameters.
    pub positive_below_height: bool,
}

impl VanishingReport {
    pub fn holds(&self) -> bool {
        self.vanishes_from_height && self.positive_below_height
    }
}

pub fn verify_equimultiple_vanishing(d: usize, h: usize) -> Result<VanishingReport> {
    if h == 0 || h >= d {
        return Err(Error::InvalidArgument(format!("need 0 < h < d, got h = {h}, d = {d}")));
    }
    let j = MonomialIdeal::maximal(d);
    let i = MonomialIdeal::from_gens(d, (0..h).map(|v| Monomial::var(d, v)));
    let zero = MonomialIdeal::zero(d);
    let analysis = BhattacharyaAnalysis::compute(&j, std::slice::from_ref(&i), &zero, None)?;
    let mut values = Vec::new();
    for k in 0..d as u32 {
        let ty = MixedType::new(vec![k], d as u32 - k)?;
        values.push((k, analysis.mixed_multiplicity(&ty)?));
    }
    let vanishes_from_height = values.iter().filter(|(k, _)| *k as usize >= h).all(|(_, v)| *v == 0);
    let positive_below_height = values.iter().any(|(k, v)| (*k as usize) < h && *v > 0);
    Ok(VanishingReport { d, h, values, vanishes_from_height, positive_below_height })
}

/// Bounds for random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: u32,
    /// Ambient variables, drawn from `2..=max_vars`.
    pub max_vars: usize,
    /// Largest generator degree of the `I_i` and of `H`.
    pub max_degree: u32,
    /// Largest number of `I_i`.
    pub max_s: usize,
    /// Allow a nonzero `H`.
    pub module: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { trials: 50, max_vars: 3, max_degree: 2, max_s: 2, module: true }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.max_vars) || !(1..=3).contains(&self.max_degree) || self.max_s > 2 || self.trials > 200
        {
            return Err(Error::InvalidArgument(
                "fuzz bounds: 2 <= vars <= 3, 1 <= degree <= 3, s <= 2, trials <= 200".into(),
            ));
        }
        Ok(())
    }
}

/// A hypothesis-satisfying instance as exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub nvars: usize,
    pub j: Vec<Vec<u32>>,
    pub i_list: Vec<Vec<Vec<u32>>>,
    pub h: Vec<Vec<u32>>,
    #[serde(rename = "type")]
    pub mixed_type: MixedType,
    pub seed: u64,
}

fn exponents(i: &MonomialIdeal) -> Vec<Vec<u32>> {
    i.gens().iter().map(|g| g.exponents().to_vec()).collect()
}

impl Instance {
    pub fn ideals(&self) -> Result<(MonomialIdeal, Vec<MonomialIdeal>, MonomialIdeal)> {
        let j = MonomialIdeal::from_exponents(self.nvars, &self.j)?;
        let i_list =
            self.i_list.iter().map(|g| MonomialIdeal::from_exponents(self.nvars, g)).collect::<Result<Vec<_>>>()?;
        let h = if self.h.is_empty() {
            MonomialIdeal::zero(self.nvars)
        } else {
            MonomialIdeal::from_exponents(self.nvars, &self.h)?
        };
        Ok((j, i_list, h))
    }

    /// Human-readable form in the standard variable names.
    pub fn describe(&self) -> String {
        let vars = VariableSet::standard(self.nvars);
        let (j, i_list, h) = self.ideals().expect("instance ideals are valid");
        let is: Vec<String> = i_list.iter().map(|i| i.display(&vars)).collect();
        format!("J = {}; I = [{}]; H = {}; type {}", j.display(&vars), is.join("; "), h.display(&vars), self.mixed_type)
    }
}

fn random_subset<R: Rng>(rng: &mut R, pool: &[Monomial]) -> Vec<Monomial> {
    let size = rng.gen_range(1..=pool.len());
    let mut picked: Vec<Monomial> = pool.choose_multiple(rng, size).cloned().collect();
    picked.sort();
    picked
}

/// Draws a random instance satisfying `d > 0`, `h > 0`, type degree `d - 1`
/// and `k_1 + ⋯ + k_s < h`.
pub fn random_instance(config: &FuzzConfig, seed: u64) -> Result<Instance> {
    let mut rng = rng_from_seed(seed);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=config.max_vars);
        let j = MonomialIdeal::maximal(n).power(rng.gen_range(1..=2));
        let s = rng.gen_range(1..=config.max_s.max(1));
        let i_list: Vec<MonomialIdeal> = (0..s)
            .map(|_| {
                let deg = rng.gen_range(1..=config.max_degree.min(2));
                MonomialIdeal::from_gens(n, random_subset(&mut rng, &monomials_of_degree(n, deg)))
            })
            .collect();
        let h = if config.module && rng.gen_bool(0.5) {
            let deg = rng.gen_range(2..=config.max_degree.max(2));
            let pool = monomials_of_degree(n, deg);
            let count = rng.gen_range(1..=2.min(pool.len()));
            MonomialIdeal::from_gens(n, pool.choose_multiple(&mut rng, count).cloned())
        } else {
            MonomialIdeal::zero(n)
        };
        let ctx = match context(&j, &i_list, &h) {
            Ok(ctx) => ctx,
            Err(_) => continue,
        };
        if ctx.d == 0 || ctx.h == 0 {
            continue;
        }
        let budget = (ctx.h - 1).min(ctx.d - 1) as u32;
        let k_sum = rng.gen_range(0..=budget);
        let mut k = vec![0u32; s];
        for _ in 0..k_sum {
            let slot = rng.gen_range(0..s);
            k[slot] += 1;
        }
        let ty = MixedType::new(k, ctx.d as u32 - k_sum)?;
        return Ok(Instance {
            nvars: n,
            j: exponents(&j),
            i_list: i_list.iter().map(exponents).collect(),
            h: exponents(&h),
            mixed_type: ty,
            seed: rng.gen(),
        });
    }
    Err(Error::Internal("no admissible random instance in 1000 draws".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reproducer {
    pub trial: u32,
    pub instance: Instance,
    pub description: String,
    pub mixed_value: Option<u64>,
    pub reduction_value: Option<u64>,
    pub error: Option<ReportError>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub field: String,
    pub master_seed: u64,
    pub config: FuzzConfig,
    pub trials: u32,
    pub equal: u32,
    pub unequal: u32,
    pub errored: u32,
    pub degree_certified: u32,
    pub error_kinds: BTreeMap<String, u32>,
    /// Instances that were unequal or errored.
    pub reproducers: Vec<Reproducer>,
}

/// Runs `config.trials` random instances; trial `t` uses `child_seed(seed, t)`.
pub fn fuzz_campaign<F: Field>(field: &F, config: &FuzzConfig, seed: u64, options: &HarnessOptions) -> Result<FuzzSummary> {
    config.validate()?;
    let mut summary = FuzzSummary {
        field: field.descriptor().to_string(),
        master_seed: seed,
        config: *config,
        trials: config.trials,
        equal: 0,
        unequal: 0,
        errored: 0,
        degree_certified: 0,
        error_kinds: BTreeMap::new(),
        reproducers: Vec::new(),
    };
    for trial in 0..config.trials {
        let instance = random_instance(config, child_seed(seed, trial as u64))?;
        let (j, i_list, h) = instance.ideals()?;
        let ring = PolyRing::grevlex(VariableSet::standard(instance.nvars), field.clone());
        let report = verify_main_theorem(&ring, &j, &i_list, &h, &instance.mixed_type, instance.seed, options);
        if report.degree_certified {
            summary.degree_certified += 1;
        }
        match (&report.error, report.equal) {
            (None, true) => {
                summary.equal += 1;
                continue;
            }
            (Some(e), _) => {
                summary.errored += 1;
                *summary.error_kinds.entry(e.kind.clone()).or_default() += 1;
            }
            (None, false) => summary.unequal += 1,
        }
        summary.reproducers.push(Reproducer {
            trial,
            description: instance.describe(),
            instance,
            mixed_value: report.mixed_value,
            reduction_value: report.reduction_value,
            error: report.error,
        });
    }
    Ok(summary)
}
