//! Generic elements, superficial-element certificates on finite windows,
//! typed superficial sequences, and joint-reduction certificates.
//!
//! Slots are numbered `0..s` for `I_1, …, I_s` and `s` for `J`. Exponent
//! tuples in windows follow the same order: `(n_1, …, n_s, n_0)`.

use serde::{Deserialize, Serialize};

use crate::bhattacharya::{context, MixedType};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{
    buchberger_from, buchberger_truncated, colength, ideal_dimension, quotient_by_element, saturate_by_monomial_ideal,
    ElementQuotient, PolyIdeal,
};
use crate::monomial::Monomial;
use crate::monomial_ideal::{product_all, MonomialIdeal, PowerCache};
use crate::poly::{Poly, PolyRing};
use crate::seed::{child_seed, rng_from_seed};

/// Resampling attempts per position after the first draw.
pub const DEFAULT_RETRIES: u32 = 5;

/// Default window width `w` of the box `[N, N + w]^{s+1}`.
pub const DEFAULT_WINDOW_WIDTH: u32 = 2;

/// The ring data every check needs: `J`, the I-ideals and `H`, over `ring`.
#[derive(Debug, Clone)]
pub struct Setup<F: Field> {
    pub ring: PolyRing<F>,
    pub j: MonomialIdeal,
    pub i_list: Vec<MonomialIdeal>,
    pub h: MonomialIdeal,
}

impl<F: Field> Setup<F> {
    pub fn new(ring: PolyRing<F>, j: MonomialIdeal, i_list: Vec<MonomialIdeal>, h: MonomialIdeal) -> Result<Self> {
        let n = ring.nvars();
        for m in i_list.iter().chain([&j, &h]) {
            if m.nvars() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.nvars() });
            }
        }
        Ok(Setup { ring, j, i_list, h })
    }

    pub fn s(&self) -> usize {
        self.i_list.len()
    }

    /// Slot `k < s` is `I_{k+1}`; slot `s` is `J`.
    pub fn slot(&self, k: usize) -> &MonomialIdeal {
        if k < self.s() {
            &self.i_list[k]
        } else {
            &self.j
        }
    }

    pub fn slots(&self) -> Vec<MonomialIdeal> {
        self.i_list.iter().cloned().chain([self.j.clone()]).collect()
    }

    /// `I = I_1 ⋯ I_s` (the unit ideal when `s = 0`).
    pub fn product_ideal(&self) -> MonomialIdeal {
        product_all(self.ring.nvars(), &self.i_list).expect("same ring")
    }

    /// Product of every slot, `I_1 ⋯ I_s J`: the ideal the filter-regularity
    /// and dimension conditions refer to.
    pub fn full_product(&self) -> MonomialIdeal {
        self.product_ideal().product(&self.j).expect("same ring")
    }

    pub fn h_ideal(&self) -> PolyIdeal<F> {
        PolyIdeal::from_monomial_ideal(&self.ring, &self.h)
    }
}

/// A finite set of exponent tuples `(n_1, …, n_s, n_0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub offset: u32,
    pub width: u32,
    pub tuples: Vec<Vec<u32>>,
}

impl Window {
    /// The box `[offset, offset + width]^slots`, in lexicographic order.
    pub fn boxed(slots: usize, offset: u32, width: u32) -> Window {
        let mut tuples = vec![Vec::new()];
        for _ in 0..slots {
            tuples = tuples
                .into_iter()
                .flat_map(|t: Vec<u32>| {
                    (offset..=offset + width).map(move |v| {
                        let mut t = t.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        Window { offset, width, tuples }
    }

    pub fn empty() -> Window {
        Window { offset: 0, width: 0, tuples: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// A random element `Σ c_j g_j` over the minimal generators of a slot ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralElement<F: Field> {
    pub poly: Poly<F>,
    pub slot: usize,
    pub coefficients: Vec<F::Elem>,
    pub seed: u64,
}

impl<F: Field> GeneralElement<F> {
    /// A fixed element, for fixtures and regression cases.
    pub fn fixed(poly: Poly<F>, slot: usize) -> Self {
        GeneralElement { poly, slot, coefficients: Vec::new(), seed: 0 }
    }
}

/// Draws nonzero coefficients for every minimal generator of `source`.
pub fn sample_general_element<F: Field>(
    ring: &PolyRing<F>,
    source: &MonomialIdeal,
    slot: usize,
    seed: u64,
) -> Result<GeneralElement<F>> {
    if !source.is_equigenerated() {
        return Err(Error::UnsupportedInput(
            "generic elements need an equigenerated source ideal (all generators of one degree)".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let coefficients: Vec<F::Elem> = source.gens().iter().map(|_| ring.field().random_nonzero(&mut rng)).collect();
    let poly = ring.from_terms(source.gens().iter().cloned().zip(coefficients.iter().cloned()));
    Ok(GeneralElement { poly, slot, coefficients, seed })
}

/// Outcome of a window check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowOutcome {
    pub passed: bool,
    /// The window was empty, so `passed` holds vacuously.
    pub vacuous: bool,
    pub tuples_checked: usize,
}

#[cfg(test)]
fn monomial_poly_ideal<F: Field>(ring: &PolyRing<F>, m: &MonomialIdeal, extra: &[Poly<F>]) -> PolyIdeal<F> {
    let mut gens: Vec<Poly<F>> = m.gens().iter().map(|g| ring.monomial(g.clone())).collect();
    gens.extend(extra.iter().cloned());
    PolyIdeal::new(ring, gens)
}

/// Condition (FC1) for `x` in slot `slot` over `A/H'`, where `H'` is `current`.
///
/// For each tuple with `P = ∏ slot_k^{n_k}` and `P' = P · slot`, the
/// intersection form `((x) + H') ∩ (P' + H') = xP + H'` is checked through the
/// equivalent colon form `(P' + H') : x = P + (H' : x)`. The inclusion `⊇`
/// holds by construction, so only `⊆` is tested.
pub fn check_fc1<F: Field>(
    x: &GeneralElement<F>,
    setup: &Setup<F>,
    current: &PolyIdeal<F>,
    window: &Window,
) -> Result<WindowOutcome> {
    if window.is_empty() {
        return Ok(WindowOutcome { passed: true, vacuous: true, tuples_checked: 0 });
    }
    let quotient = ElementQuotient::new(current, &x.poly)?;
    let h_colon = quotient.quotient();
    let h_colon_basis = h_colon.basis().elements();
    let ring = &setup.ring;
    let mut cache = PowerCache::new(setup.slots());
    for (count, n) in window.tuples.iter().enumerate() {
        if n.len() != setup.s() + 1 {
            return Err(Error::DimensionMismatch { expected: setup.s() + 1, found: n.len() });
        }
        let p = cache.product(n);
        let mut n_up = n.clone();
        n_up[x.slot] += 1;
        let p_up = cache.product(&n_up);
        let lhs = quotient.quotient_with(&p_up);
        let monomials: Vec<Poly<F>> = p.gens().iter().map(|g| ring.monomial(g.clone())).collect();
        let rhs = buchberger_from(ring, h_colon_basis, &monomials, Some(lhs.max_degree()));
        if !lhs.gens().iter().all(|g| rhs.contains(g)) {
            return Ok(WindowOutcome { passed: false, vacuous: false, tuples_checked: count + 1 });
        }
    }
    Ok(WindowOutcome { passed: true, vacuous: false, tuples_checked: window.tuples.len() })
}

/// Condition (FC2): `H' : x ⊆ H' : I^∞`.
pub fn check_fc2<F: Field>(x: &Poly<F>, current: &PolyIdeal<F>, i: &MonomialIdeal) -> Result<bool> {
    let colon = quotient_by_element(current, x)?;
    let sat = saturate_by_monomial_ideal(current, i)?;
    Ok(colon.is_subset_of(&sat))
}

/// Condition (FC3): `dim A/(((x) + H') : I^∞) = dim A/(H' : I^∞) - 1`.
///
/// A nonzero `M/(0 : I^∞)` has positive dimension, so the zero module is
/// counted as dimension 0; a maximal sequence then has length `q`. Returns
/// `false` when `H' : I^∞` is already the unit ideal.
pub fn check_fc3<F: Field>(x: &Poly<F>, current: &PolyIdeal<F>, i: &MonomialIdeal) -> Result<bool> {
    let before = saturate_by_monomial_ideal(current, i)?;
    if before.is_unit() {
        return Ok(false);
    }
    let with_x = current.sum(&PolyIdeal::new(current.ring(), vec![x.clone()]));
    let after = saturate_by_monomial_ideal(&with_x, i)?;
    let after_dim = if after.is_unit() { 0 } else { ideal_dimension(&after)? };
    Ok(after_dim + 1 == ideal_dimension(&before)?)
}

/// Certificate for one element of a superficial sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperficialCertificate {
    pub position: usize,
    pub slot: usize,
    pub seed: u64,
    /// Draws used, counting the accepted one.
    pub attempts: u32,
    pub fc1: WindowOutcome,
    /// `dim A/(H + (x_1, …, x_j))` equals `d - j`.
    pub dimension_drop: bool,
    pub fc2: Option<bool>,
    pub fc3: Option<bool>,
}

/// A certified sequence `x_1, …, x_d`: I-blocks first, then the J-block.
#[derive(Debug, Clone)]
pub struct SuperficialSequence<F: Field> {
    pub elements: Vec<GeneralElement<F>>,
    pub certificates: Vec<SuperficialCertificate>,
}

/// Options for the sequence builder.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub retries: u32,
    pub window: Window,
    /// Also evaluate (FC2) and (FC3) for every accepted element.
    pub full_conditions: bool,
}

/// Slot of each position: `k_1` copies of slot 0, …, then `k_0 + 1` of slot `s`.
pub fn slot_sequence(ty: &MixedType) -> Vec<usize> {
    let s = ty.s();
    ty.k.iter()
        .enumerate()
        .flat_map(|(slot, &k)| std::iter::repeat_n(slot, k as usize))
        .chain(std::iter::repeat_n(s, ty.k0_plus_1 as usize))
        .collect()
}

/// Checks the type against the context and the hypothesis `k_1 + ⋯ + k_s < h`.
pub fn check_type<F: Field>(setup: &Setup<F>, ty: &MixedType) -> Result<()> {
    let ctx = context(&setup.j, &setup.i_list, &setup.h)?;
    if ty.s() != setup.s() {
        return Err(Error::InvalidArgument(format!("type has {} I-entries but there are {} I-ideals", ty.s(), setup.s())));
    }
    if ctx.d == 0 {
        return Err(Error::HypothesisViolated("dim M = 0".into()));
    }
    let expected = ctx.d as i64 - 1;
    if ty.total_degree() as i64 != expected {
        return Err(Error::DegreeMismatch { type_degree: ty.total_degree() as i64, expected });
    }
    if setup.s() > 0 && ty.k_sum() as usize >= ctx.h {
        return Err(Error::HypothesisViolated(format!(
            "k1+...+ks = {} is not below the height h = {}",
            ty.k_sum(),
            ctx.h
        )));
    }
    Ok(())
}

/// Draws and certifies a superficial sequence of the given type.
pub fn build_superficial_sequence<F: Field>(
    setup: &Setup<F>,
    ty: &MixedType,
    seed: u64,
    options: &BuildOptions,
) -> Result<SuperficialSequence<F>> {
    check_type(setup, ty)?;
    let d = setup.h.dim_quotient()?;
    let i = setup.full_product();
    let mut current = setup.h_ideal();
    let mut elements = Vec::new();
    let mut certificates = Vec::new();
    for (position, slot) in slot_sequence(ty).into_iter().enumerate() {
        let base = child_seed(seed, position as u64);
        let mut accepted = None;
        for attempt in 0..=options.retries {
            let s = child_seed(base, attempt as u64);
            let x = sample_general_element(&setup.ring, setup.slot(slot), slot, s)?;
            let fc1 = check_fc1(&x, setup, &current, &options.window)?;
            let next = current.extend(std::slice::from_ref(&x.poly));
            let dimension_drop = !next.is_unit() && ideal_dimension(&next)? + position + 1 == d;
            if fc1.passed && dimension_drop {
                let (fc2, fc3) = if options.full_conditions {
                    (Some(check_fc2(&x.poly, &current, &i)?), Some(check_fc3(&x.poly, &current, &i)?))
                } else {
                    (None, None)
                };
                let cert =
                    SuperficialCertificate { position, slot, seed: s, attempts: attempt + 1, fc1, dimension_drop, fc2, fc3 };
                accepted = Some((x, cert, next));
                break;
            }
        }
        let (x, cert, next) = accepted.ok_or_else(|| {
            Error::GenericityFailure(format!(
                "no certified element for position {position} after {} draws",
                options.retries + 1
            ))
        })?;
        elements.push(x);
        certificates.push(cert);
        current = next;
    }
    Ok(SuperficialSequence { elements, certificates })
}

/// Certificate for a candidate joint reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointReductionCertificate {
    /// Elements per slot: `(k_1, …, k_s, k_0 + 1)`.
    pub tally: Vec<u32>,
    pub window: Window,
    pub tuples_checked: usize,
    /// First tuple on which the identity failed, if any.
    pub failed_tuple: Option<Vec<u32>>,
    pub is_sop: bool,
    pub verified: bool,
}

/// Whether `(R) + H` has finite colength with `|R| = dim A/H`.
pub fn is_system_of_parameters<F: Field>(setup: &Setup<F>, elements: &[Poly<F>]) -> Result<bool> {
    let d = setup.h.dim_quotient()?;
    if elements.len() != d {
        return Ok(false);
    }
    let ideal = setup.h_ideal().sum(&PolyIdeal::new(&setup.ring, elements.to_vec()));
    Ok(colength(&ideal).is_some())
}

/// Checks, on every window tuple `n`,
/// `∏_k slot_k^{n_k+1} + H = Σ_k (R_k) · slot_k^{n_k} ∏_{l≠k} slot_l^{n_l+1} + H`,
/// where `R_k` are the elements drawn from slot `k`.
pub fn check_joint_reduction<F: Field>(
    elements: &[GeneralElement<F>],
    setup: &Setup<F>,
    window: &Window,
) -> Result<JointReductionCertificate> {
    let ring = &setup.ring;
    let slots = setup.s() + 1;
    let mut tally = vec![0u32; slots];
    for e in elements {
        if e.slot >= slots {
            return Err(Error::InvalidArgument(format!("element slot {} out of range", e.slot)));
        }
        tally[e.slot] += 1;
    }
    let polys: Vec<Poly<F>> = elements.iter().map(|e| e.poly.clone()).collect();
    let is_sop = is_system_of_parameters(setup, &polys)?;
    let mut cache = PowerCache::new(setup.slots());
    let mut failed_tuple = None;
    let mut checked = 0;
    for n in &window.tuples {
        if n.len() != slots {
            return Err(Error::DimensionMismatch { expected: slots, found: n.len() });
        }
        checked += 1;
        let up: Vec<u32> = n.iter().map(|&v| v + 1).collect();
        let lhs = cache.product(&up);
        let t0 = lhs.max_degree();
        let mut rhs: Vec<Poly<F>> = Vec::new();
        for e in elements {
            let mut lowered = up.clone();
            lowered[e.slot] -= 1;
            let rest = cache.product(&lowered);
            rhs.extend(rest.gens().iter().map(|g| ring.mul_monomial(&e.poly, g)));
        }
        // RHS ⊆ LHS + H holds termwise.
        let termwise = rhs.iter().all(|f| f.monomials().all(|m| lhs.contains(m) || setup.h.contains(m)));
        let gens: Vec<Poly<F>> = rhs
            .into_iter()
            .chain(setup.h.gens().iter().filter(|g| g.degree() <= t0).map(|g| ring.monomial(g.clone())))
            .collect();
        let gb = buchberger_truncated(ring, &gens, t0);
        let covered = lhs.gens().iter().all(|g: &Monomial| setup.h.contains(g) || gb.contains(&ring.monomial(g.clone())));
        if !(termwise && covered) {
            failed_tuple = Some(n.clone());
            break;
        }
    }
    let verified = failed_tuple.is_none() && !window.is_empty();
    Ok(JointReductionCertificate { tally, window: window.clone(), tuples_checked: checked, failed_tuple, is_sop, verified })
}

/// Replaces the element at `position` by a fresh draw from the same slot.
pub fn resample_element<F: Field>(
    elements: &[GeneralElement<F>],
    position: usize,
    setup: &Setup<F>,
    seed: u64,
) -> Result<Vec<GeneralElement<F>>> {
    let old = elements
        .get(position)
        .ok_or_else(|| Error::InvalidArgument(format!("position {position} out of range ({} elements)", elements.len())))?;
    let fresh = sample_general_element(&setup.ring, setup.slot(old.slot), old.slot, seed)?;
    let mut out = elements.to_vec();
    out[position] = fresh;
    Ok(out)
}

/// Resamples `position` until the joint-reduction and sop checks pass again.
pub fn resample_and_certify<F: Field>(
    elements: &[GeneralElement<F>],
    position: usize,
    setup: &Setup<F>,
    seed: u64,
    retries: u32,
    window: &Window,
) -> Result<(Vec<GeneralElement<F>>, JointReductionCertificate)> {
    for attempt in 0..=retries {
        let r = resample_element(elements, position, setup, child_seed(seed, attempt as u64))?;
        let cert = check_joint_reduction(&r, setup, window)?;
        if cert.verified && cert.is_sop {
            return Ok((r, cert));
        }
    }
    Err(Error::GenericityFailure(format!("resampled position {position} failed certification {} times", retries + 1)))
}
