//! Hilbert-Samuel multiplicities of ideals on `A/H`, the multiplicity
//! symbol of a system of parameters, and additivity over minimal primes.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bhattacharya::{factorial, interpolate, InterpolatedPolynomial, MAX_DOUBLINGS};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{colength, PolyIdeal};
use crate::monomial_ideal::{CoordinatePrime, MonomialIdeal, DEFAULT_LENGTH_GUARD};
use crate::poly::{Poly, PolyRing};

/// First sample index tried by the stability protocol.
pub const HILBERT_SAMUEL_START: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    HilbertSamuelInterpolation,
    Additivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityResult {
    pub value: u64,
    pub method: Method,
    /// `(n, ℓ(A/(q^{n+1} + H)))` for the certified window.
    pub samples: Vec<(u32, u64)>,
}

/// Fits the degree-`d` polynomial through `n ↦ len(n)` on `N..=N+d` and on
/// `N+1..=N+d+1`, doubling `N` until the fits agree, and returns
/// `d! · leading coefficient`.
fn stable_fit(d: u32, mut len: impl FnMut(u32) -> Result<u64>) -> Result<MultiplicityResult> {
    let mut values: BTreeMap<u32, u64> = BTreeMap::new();
    let mut n = HILBERT_SAMUEL_START;
    for _ in 0..=MAX_DOUBLINGS {
        for k in n..=n + d + 1 {
            if let Entry::Vacant(slot) = values.entry(k) {
                slot.insert(len(k)?);
            }
        }
        let fit = |start: u32| -> Result<InterpolatedPolynomial> {
            let samples = (start..=start + d).map(|k| (vec![k], values[&k])).collect();
            interpolate(&samples, d, 1, start)
        };
        let (a, b) = (fit(n)?, fit(n + 1)?);
        if a.same_polynomial(&b) {
            let v = a.coefficient(&[d]) * BigRational::from_integer(factorial(d));
            if !v.is_integer() || v.is_negative() {
                return Err(Error::Internal(format!("multiplicity {v} is not a non-negative integer")));
            }
            let value = v.to_integer().to_u64().ok_or_else(|| Error::Internal("multiplicity overflows u64".into()))?;
            let samples = (n..=n + d + 1).map(|k| (k, values[&k])).collect();
            return Ok(MultiplicityResult { value, method: Method::HilbertSamuelInterpolation, samples });
        }
        n *= 2;
    }
    Err(Error::StabilityFailure(format!("Hilbert-Samuel fits still disagree after {MAX_DOUBLINGS} doublings")))
}

/// `e(q; A/H)` for a homogeneous ideal `q` with `q + H` m-primary.
pub fn hilbert_samuel<F: Field>(q: &PolyIdeal<F>, h: &MonomialIdeal) -> Result<MultiplicityResult> {
    let ring = q.ring();
    if !q.is_homogeneous() {
        return Err(Error::UnsupportedInput("Hilbert-Samuel sampling needs homogeneous generators".into()));
    }
    let h_gens: Vec<Poly<F>> = h.gens().iter().map(|g| ring.monomial(g.clone())).collect();
    let base = q.sum(&PolyIdeal::new(ring, h_gens.clone()));
    if colength(&base).is_none() {
        return Err(Error::NotMPrimary("q + H does not have finite colength".into()));
    }
    let d = h.dim_quotient()? as u32;
    // K_n = q^{n+1} + H, built as K_n = K_{n-1} · q + H from the reduced basis of K_{n-1}.
    let mut powers: Vec<PolyIdeal<F>> = vec![base];
    let mut len = |n: u32| -> Result<u64> {
        while powers.len() <= n as usize {
            let prev = powers.last().unwrap().basis().elements().to_vec();
            let mut gens: Vec<Poly<F>> = Vec::with_capacity(prev.len() * q.gens().len() + h_gens.len());
            for g in &prev {
                for f in q.gens() {
                    gens.push(ring.mul(g, f));
                }
            }
            gens.extend(h_gens.iter().cloned());
            gens.sort_by_key(|g| g.terms().len());
            gens.dedup();
            powers.push(PolyIdeal::new(ring, gens));
        }
        colength(&powers[n as usize]).ok_or_else(|| Error::Internal("power lost finite colength".into()))
    };
    stable_fit(d, &mut len)
}

/// `e(q; A/H)` for a monomial ideal `q`, by staircase counting.
pub fn hilbert_samuel_monomial(q: &MonomialIdeal, h: &MonomialIdeal) -> Result<MultiplicityResult> {
    let base = q.sum(h)?;
    if !base.is_m_primary() {
        return Err(Error::NotMPrimary("q + H does not have finite colength".into()));
    }
    let d = h.dim_quotient()? as u32;
    let n_vars = q.nvars();
    let unit = MonomialIdeal::unit(n_vars);
    let mut powers = vec![MonomialIdeal::unit(n_vars)];
    stable_fit(d, |n| {
        while powers.len() <= n as usize + 1 {
            let next = powers.last().unwrap().product(q)?;
            powers.push(next);
        }
        unit.count_quotient_length(&powers[n as usize + 1], h, DEFAULT_LENGTH_GUARD)
    })
}

/// `e((R); A/H)` for a system of parameters `R` of `A/H`.
pub fn multiplicity_symbol<F: Field>(ring: &PolyRing<F>, r: &[Poly<F>], h: &MonomialIdeal) -> Result<MultiplicityResult> {
    let d = h.dim_quotient()?;
    if r.len() != d {
        return Err(Error::NotSystemOfParameters(format!("{} elements but dim A/H = {d}", r.len())));
    }
    let q = PolyIdeal::new(ring, r.to_vec());
    let with_h = q.sum(&PolyIdeal::from_monomial_ideal(ring, h));
    if colength(&with_h).is_none() {
        return Err(Error::NotSystemOfParameters("(R) + H does not have finite colength".into()));
    }
    hilbert_samuel(&q, h)
}

/// `ℓ((A/H)_p)` for a minimal prime `p` of `H`.
pub fn localized_length(h: &MonomialIdeal, p: &CoordinatePrime) -> Result<u64> {
    let comps = h.components()?;
    if !comps.contains(p) {
        return Err(Error::NotMinimalPrime(format!("{:?}", p.vars())));
    }
    if p.height() == 0 {
        return Ok(1);
    }
    h.localize_at(p)
        .colength()
        .ok_or_else(|| Error::Internal("localisation at a minimal prime has infinite length".into()))
}

/// One summand of the additivity formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityTerm {
    pub prime: Vec<usize>,
    pub length: u64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub lhs: u64,
    pub terms: Vec<AdditivityTerm>,
    pub rhs: u64,
    pub holds: bool,
}

/// `e(R; A/H) = Σ_{p ∈ Λ} ℓ((A/H)_p) · e(R; A/p)` with `Λ` the minimal primes
/// of `H` of maximal dimension.
pub fn additivity_check<F: Field>(ring: &PolyRing<F>, r: &[Poly<F>], h: &MonomialIdeal) -> Result<AdditivityReport> {
    let lhs = multiplicity_symbol(ring, r, h)?.value;
    let comps = h.components()?;
    let min_height = comps.iter().map(CoordinatePrime::height).min().unwrap_or(0);
    let mut terms = Vec::new();
    for p in comps.iter().filter(|p| p.height() == min_height) {
        let length = localized_length(h, p)?;
        let multiplicity = multiplicity_symbol(ring, r, &p.to_ideal())?.value;
        terms.push(AdditivityTerm { prime: p.vars().to_vec(), length, multiplicity });
    }
    let rhs = terms.iter().map(|t| t.length * t.multiplicity).sum();
    Ok(AdditivityReport { lhs, terms, rhs, holds: lhs == rhs })
}
