//! End-to-end acceptance checks. This target runs without the test harness:
//! criteria run sequentially, so the wall-clock limits are not distorted by
//! parallel tests, and each prints one `PASS`/`FAIL` line.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use mixmult_cli::run;
use mixmult_core::bhattacharya::{BhattacharyaAnalysis, MixedType};
use mixmult_core::field::{Field, PrimeField};
use mixmult_core::groebner::{colength, PolyIdeal};
use mixmult_core::harness::{
    fuzz_campaign, verify_main_theorem, verify_rees_corollary, FuzzConfig, HarnessOptions,
};
use mixmult_core::monomial::{monomials_of_degree, Monomial, VariableSet};
use mixmult_core::monomial_ideal::MonomialIdeal;
use mixmult_core::multiplicity::{additivity_check, hilbert_samuel, hilbert_samuel_monomial};
use mixmult_core::poly::{Poly, PolyRing};
use mixmult_core::reductions::sample_general_element;
use mixmult_core::seed::{child_seed, rng_from_seed};

const MASTER_SEED: u64 = 20_240_601;

const MAIN_INSTANCES: u32 = 50;
const MAIN_LIMIT: Duration = Duration::from_secs(300);
const REES_PAIRS: u64 = 20;
const REES_LIMIT: Duration = Duration::from_secs(120);
const VANISHING_LIMIT: Duration = Duration::from_secs(10);
const COLENGTH_IDEALS: u64 = 100;
const COLENGTH_LIMIT: Duration = Duration::from_secs(60);
const BEZOUT_CASES: u64 = 20;
const ADDITIVITY_CASES: u64 = 20;
const DECOMPOSITION_PAIRS: u64 = 20;

fn fp(n: usize) -> PolyRing<PrimeField> {
    PolyRing::grevlex(VariableSet::standard(n), PrimeField::default())
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let t = Instant::now();
    let result = f();
    let elapsed = t.elapsed();
    let within = limit.is_none_or(|l| elapsed <= l);
    let limit_text = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
    match result {
        Ok(detail) if within => Outcome { passed: true, detail: format!("{detail}; {:.1}s{limit_text}", elapsed.as_secs_f64()) },
        Ok(detail) => Outcome { passed: false, detail: format!("{detail}; too slow: {:.1}s{limit_text}", elapsed.as_secs_f64()) },
        Err(detail) => Outcome { passed: false, detail: format!("{detail}; {:.1}s", elapsed.as_secs_f64()) },
    }
}

/// Equigenerated m-primary monomial ideal of degree `a` in k[x,y]: both pure
/// powers plus a random subset of the mixed monomials.
fn random_plane_ideal<R: Rng>(rng: &mut R) -> MonomialIdeal {
    let a = rng.gen_range(1..=3);
    let gens = monomials_of_degree(2, a)
        .into_iter()
        .filter(|m| m.pure_power_var().is_some() || rng.gen_bool(0.5));
    MonomialIdeal::from_gens(2, gens)
}

/// Random m-primary monomial ideal, not necessarily equigenerated.
fn random_m_primary<R: Rng>(rng: &mut R, n: usize) -> MonomialIdeal {
    let bounds: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let mut gens: Vec<Monomial> = (0..n).map(|i| Monomial::var(n, i).pow(bounds[i])).collect();
    for _ in 0..rng.gen_range(0..=4) {
        let m = Monomial::new(bounds.iter().map(|&b| rng.gen_range(0..b)));
        if !m.is_one() {
            gens.push(m);
        }
    }
    MonomialIdeal::from_gens(n, gens)
}

/// Colength by listing every monomial in the bounding box.
fn enumerate_colength(i: &MonomialIdeal) -> u64 {
    let n = i.nvars();
    let bounds: Vec<u32> = (0..n)
        .map(|v| i.gens().iter().filter(|g| g.pure_power_var() == Some(v)).map(|g| g.degree()).min().unwrap())
        .collect();
    let mut count = 0;
    let mut e = vec![0u32; n];
    loop {
        if !i.contains(&Monomial::new(e.iter().copied())) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

/// A random invertible linear substitution applied to `i`.
fn linear_change<R: Rng>(rng: &mut R, ring: &PolyRing<PrimeField>, i: &MonomialIdeal) -> PolyIdeal<PrimeField> {
    let n = ring.nvars();
    let field = ring.field();
    // Unitriangular, so always invertible.
    let images: Vec<Poly<PrimeField>> = (0..n)
        .map(|v| {
            ring.from_terms((0..n).filter(|&w| w >= v).map(|w| {
                let c = if w == v { field.one() } else { field.from_i64(rng.gen_range(-50..=50)) };
                (Monomial::var(n, w), c)
            }))
        })
        .collect();
    let gens = i.gens().iter().map(|g| ring.substitute(&ring.monomial(g.clone()), ring, &images)).collect();
    PolyIdeal::new(ring, gens)
}

fn criterion_main(certified: &mut Vec<String>) -> Outcome {
    timed(Some(MAIN_LIMIT), || {
        let config = FuzzConfig { trials: MAIN_INSTANCES, ..FuzzConfig::default() };
        let seed = child_seed(MASTER_SEED, 1);
        let summary = fuzz_campaign(&PrimeField::default(), &config, seed, &HarnessOptions::default())
            .map_err(|e| e.to_string())?;
        if summary.degree_certified != summary.trials {
            certified.push(format!("main: {} of {} certified", summary.degree_certified, summary.trials));
        }
        let detail = format!("{} of {} instances equal", summary.equal, summary.trials);
        if summary.equal == MAIN_INSTANCES && summary.trials == MAIN_INSTANCES {
            Ok(detail)
        } else {
            let first = summary.reproducers.first().map(|r| r.description.clone()).unwrap_or_default();
            Err(format!("{detail}; first failure: {first}"))
        }
    })
}

fn criterion_rees(certified: &mut Vec<String>) -> Outcome {
    timed(Some(REES_LIMIT), || {
        let ring = fp(2);
        let zero = MonomialIdeal::zero(2);
        let opts = HarnessOptions::default();
        let fixture = verify_rees_corollary(
            &ring,
            &[MonomialIdeal::maximal(2), MonomialIdeal::maximal(2).power(2)],
            &zero,
            &[1, 1],
            MASTER_SEED,
            &opts,
        )
        .map_err(|e| e.to_string())?;
        if !fixture.verified() || fixture.mixed_value != Some(2) {
            return Err(format!("fixture e(m, m^2) gave {:?} / {:?}", fixture.mixed_value, fixture.reduction_value));
        }
        if !fixture.degree_certified {
            certified.push("rees fixture".into());
        }
        let types: [[u32; 2]; 3] = [[1, 1], [2, 0], [0, 2]];
        let mut equal = 0;
        for t in 0..REES_PAIRS {
            let seed = child_seed(MASTER_SEED ^ 2, t);
            let mut rng = rng_from_seed(seed);
            let a = random_plane_ideal(&mut rng);
            let b = random_plane_ideal(&mut rng);
            let k = types[t as usize % 3];
            let report = verify_rees_corollary(&ring, &[a.clone(), b.clone()], &zero, &k, seed, &opts)
                .map_err(|e| e.to_string())?;
            if !report.degree_certified {
                certified.push(format!("rees pair {t}"));
            }
            if report.verified() {
                equal += 1;
            } else {
                let vars = VariableSet::standard(2);
                return Err(format!(
                    "pair {t}: I = {}, J = {}, type {:?}: {:?} vs {:?} ({:?})",
                    a.display(&vars),
                    b.display(&vars),
                    k,
                    report.mixed_value,
                    report.reduction_value,
                    report.error
                ));
            }
        }
        Ok(format!("fixture = 2 and {equal} of {REES_PAIRS} random pairs equal"))
    })
}

fn criterion_vanishing(certified: &mut Vec<String>) -> Outcome {
    timed(Some(VANISHING_LIMIT), || {
        let j = MonomialIdeal::maximal(3);
        let i = MonomialIdeal::from_exponents(3, &[vec![1, 0, 0], vec![0, 1, 0]]).map_err(|e| e.to_string())?;
        let zero = MonomialIdeal::zero(3);
        let analysis = BhattacharyaAnalysis::compute(&j, std::slice::from_ref(&i), &zero, None).map_err(|e| e.to_string())?;
        if !analysis.degree_certified {
            certified.push("vanishing instance".into());
        }
        let mut got = Vec::new();
        for (k1, k0_plus_1) in [(0, 3), (1, 2), (2, 1)] {
            let ty = MixedType::new(vec![k1], k0_plus_1).map_err(|e| e.to_string())?;
            got.push(analysis.mixed_multiplicity(&ty).map_err(|e| e.to_string())?);
        }
        // The two types inside the hypothesis range also go through the reduction side.
        let ring = fp(3);
        for (k1, k0_plus_1) in [(0, 3), (1, 2)] {
            let ty = MixedType::new(vec![k1], k0_plus_1).map_err(|e| e.to_string())?;
            let report = verify_main_theorem(&ring, &j, std::slice::from_ref(&i), &zero, &ty, 7, &HarnessOptions::default());
            if !report.verified() {
                return Err(format!("type {ty}: {:?} vs {:?}", report.mixed_value, report.reduction_value));
            }
            if !report.degree_certified {
                certified.push(format!("vanishing type {ty}"));
            }
        }
        if got == [1, 1, 0] {
            Ok(format!("(0;3), (1;2), (2;1) = {got:?}"))
        } else {
            Err(format!("expected [1, 1, 0], got {got:?}"))
        }
    })
}

fn criterion_certificate(certified: &[String]) -> Outcome {
    timed(None, || {
        if certified.is_empty() {
            Ok("every instance of criteria 1-3 has total degree q-1 and agreed at N and N+1".into())
        } else {
            Err(format!("not certified: {}", certified.join(", ")))
        }
    })
}

fn criterion_colength() -> Outcome {
    timed(Some(COLENGTH_LIMIT), || {
        let mut largest = 0;
        for t in 0..COLENGTH_IDEALS {
            let mut rng = rng_from_seed(child_seed(MASTER_SEED ^ 5, t));
            let n = rng.gen_range(1..=3);
            let ring = fp(n);
            let i = random_m_primary(&mut rng, n);
            let staircase = i.colength().ok_or("staircase reported infinite colength")?;
            let groebner = colength(&PolyIdeal::from_monomial_ideal(&ring, &i)).ok_or("Gröbner reported infinite colength")?;
            let moved = colength(&linear_change(&mut rng, &ring, &i)).ok_or("changed ideal has infinite colength")?;
            let brute = enumerate_colength(&i);
            largest = largest.max(brute);
            if !(staircase == groebner && groebner == moved && moved == brute) {
                let vars = VariableSet::standard(n);
                return Err(format!(
                    "{}: staircase {staircase}, Gröbner {groebner}, after linear change {moved}, enumeration {brute}",
                    i.display(&vars)
                ));
            }
        }
        Ok(format!("{COLENGTH_IDEALS} ideals agree, also after a linear change of coordinates; largest colength {largest}"))
    })
}

fn criterion_bezout() -> Outcome {
    timed(None, || {
        let mut largest = 0;
        for t in 0..BEZOUT_CASES {
            let seed = child_seed(MASTER_SEED ^ 6, t);
            let mut rng = rng_from_seed(seed);
            // The last case is the largest allowed: three cubics.
            let last = t + 1 == BEZOUT_CASES;
            let d = if last { 3 } else { 1 + (t as usize % 3) };
            let ring = fp(d);
            let degrees: Vec<u32> = (0..d).map(|_| if last { 3 } else { rng.gen_range(1..=3) }).collect();
            let forms = degrees
                .iter()
                .enumerate()
                .map(|(k, &a)| {
                    sample_general_element(&ring, &MonomialIdeal::maximal(d).power(a), k, child_seed(seed, k as u64))
                        .map(|e| e.poly)
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let e = hilbert_samuel(&PolyIdeal::new(&ring, forms), &MonomialIdeal::zero(d)).map_err(|e| e.to_string())?;
            let expected: u64 = degrees.iter().map(|&a| a as u64).product();
            largest = largest.max(expected);
            if e.value != expected {
                return Err(format!("degrees {degrees:?}: e = {}, expected {expected}", e.value));
            }
        }
        Ok(format!("{BEZOUT_CASES} cases give the product of the degrees; largest product {largest}"))
    })
}

fn criterion_additivity() -> Outcome {
    timed(None, || {
        let mut square_free = 0;
        let mut other = 0;
        let mut t = 0;
        while square_free + other < ADDITIVITY_CASES {
            let seed = child_seed(MASTER_SEED ^ 7, t);
            t += 1;
            let mut rng = rng_from_seed(seed);
            let n = rng.gen_range(2..=3);
            let want_square_free = t % 2 == 0;
            let pool: Vec<Monomial> = (1..=3)
                .flat_map(|deg| monomials_of_degree(n, deg))
                .filter(|m| !want_square_free || m.exponents().iter().all(|&e| e <= 1))
                .collect();
            let count = rng.gen_range(1..=3);
            let h = MonomialIdeal::from_gens(n, pool.choose_multiple(&mut rng, count).cloned());
            let d = h.dim_quotient().map_err(|e| e.to_string())?;
            if d == 0 {
                continue;
            }
            let ring = fp(n);
            let sop = (0..d)
                .map(|k| sample_general_element(&ring, &MonomialIdeal::maximal(n), k, child_seed(seed, k as u64)).map(|e| e.poly))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let report = additivity_check(&ring, &sop, &h).map_err(|e| e.to_string())?;
            // Linear parameters measure the degree of A/H, read off the staircase.
            let degree = hilbert_samuel_monomial(&MonomialIdeal::maximal(n), &h).map_err(|e| e.to_string())?.value;
            if !report.holds || report.lhs != degree {
                let vars = VariableSet::standard(n);
                return Err(format!("H = {}: lhs {}, rhs {}, degree {degree}", h.display(&vars), report.lhs, report.rhs));
            }
            if h.gens().iter().all(|g| g.exponents().iter().all(|&e| e <= 1)) {
                square_free += 1;
            } else {
                other += 1;
            }
        }
        if square_free == 0 || other == 0 {
            return Err(format!("unbalanced sample: {square_free} square-free, {other} not"));
        }
        Ok(format!("{square_free} square-free and {other} other modules satisfy additivity"))
    })
}

fn criterion_decomposition() -> Outcome {
    timed(None, || {
        let zero = MonomialIdeal::zero(2);
        let mixed_type = MixedType::new(vec![1], 1).map_err(|e| e.to_string())?;
        for t in 0..DECOMPOSITION_PAIRS {
            let mut rng = rng_from_seed(child_seed(MASTER_SEED ^ 8, t));
            let i = random_m_primary(&mut rng, 2);
            let j = random_m_primary(&mut rng, 2);
            let e = |q: &MonomialIdeal| hilbert_samuel_monomial(q, &zero).map(|r| r.value).map_err(|e| e.to_string());
            let ij = i.product(&j).map_err(|e| e.to_string())?;
            let mixed = BhattacharyaAnalysis::compute(&j, std::slice::from_ref(&i), &zero, None)
                .and_then(|a| a.mixed_multiplicity(&mixed_type))
                .map_err(|e| e.to_string())?;
            let (lhs, ei, ej) = (e(&ij)?, e(&i)?, e(&j)?);
            if lhs != ei + 2 * mixed + ej {
                let vars = VariableSet::standard(2);
                return Err(format!(
                    "I = {}, J = {}: e(IJ) = {lhs}, e(I) = {ei}, e(I,J) = {mixed}, e(J) = {ej}",
                    i.display(&vars),
                    j.display(&vars)
                ));
            }
        }
        Ok(format!("{DECOMPOSITION_PAIRS} pairs satisfy e(IJ) = e(I) + 2e(I,J) + e(J)"))
    })
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn criterion_determinism() -> Outcome {
    timed(None, || {
        let read = |p: &PathBuf| std::fs::read_to_string(p);
        let plane = fixture("plane_line.mm").display().to_string();
        let rees = fixture("rees_pair.mm").display().to_string();
        let commands: Vec<Vec<String>> = vec![
            vec!["verify".into(), plane.clone()],
            vec!["superficial".into(), plane.clone()],
            vec!["joint-reduction".into(), plane.clone()],
            vec!["mixed-mult".into(), plane],
            vec!["verify-rees".into(), rees],
            vec!["fuzz".into(), "--trials".into(), "4".into(), "--vars".into(), "2".into()],
        ];
        for cmd in &commands {
            let mut args = vec!["mixmult".to_string()];
            args.extend(cmd.iter().cloned());
            args.extend(["--json".to_string(), "--seed".to_string(), "11".to_string()]);
            let first = run(args.clone(), read);
            let second = run(args, read);
            if first.code == 2 {
                return Err(format!("{}: {}", cmd[0], first.stderr.trim()));
            }
            if first != second || first.stdout.is_empty() {
                return Err(format!("{} output differs between runs", cmd[0]));
            }
        }
        Ok(format!("{} commands reproduce byte for byte", commands.len()))
    })
}

fn main() {
    let mut certified = Vec::new();
    let main = criterion_main(&mut certified);
    let rees = criterion_rees(&mut certified);
    let vanishing = criterion_vanishing(&mut certified);
    let results = [
        ("1 main identity on random instances", main),
        ("2 m-primary case", rees),
        ("3 equimultiple vanishing", vanishing),
        ("4 degree certificate", criterion_certificate(&certified)),
        ("5 colength oracle", criterion_colength()),
        ("6 generic forms", criterion_bezout()),
        ("7 additivity", criterion_additivity()),
        ("8 classical decomposition", criterion_decomposition()),
        ("9 determinism", criterion_determinism()),
    ];
    for (name, outcome) in &results {
        println!("criterion {name}: {} ({})", if outcome.passed { "PASS" } else { "FAIL" }, outcome.detail);
    }
    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.passed).map(|(n, _)| *n).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of {} criteria passed", results.len(), results.len());
}
