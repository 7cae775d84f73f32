//! The multigraded length function
//! `(n_0, …, n_s) ↦ ℓ(J^{n_0} I_1^{n_1} ⋯ I_s^{n_s} M / J^{n_0+1} I_1^{n_1} ⋯ I_s^{n_s} M)`
//! for `M = A/H`, its exact interpolation, and the mixed multiplicities
//! read off its top-degree part.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_bareiss;
use crate::monomial::monomials_of_degree;
use crate::monomial_ideal::{height_in_quotient, product_all, MonomialIdeal, PowerCache, DEFAULT_LENGTH_GUARD};

/// Doublings of the offset allowed before giving up on stability.
pub const MAX_DOUBLINGS: u32 = 6;

/// A type `(k_1, …, k_s; k_0 + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MixedType {
    pub k: Vec<u32>,
    pub k0_plus_1: u32,
}

impl MixedType {
    pub fn new(k: Vec<u32>, k0_plus_1: u32) -> Result<Self> {
        if k0_plus_1 == 0 {
            return Err(Error::InvalidArgument("the J-slot entry k0+1 must be positive".into()));
        }
        Ok(MixedType { k, k0_plus_1 })
    }

    pub fn k0(&self) -> u32 {
        self.k0_plus_1 - 1
    }

    pub fn s(&self) -> usize {
        self.k.len()
    }

    pub fn k_sum(&self) -> u32 {
        self.k.iter().sum()
    }

    /// `k_0 + k_1 + ⋯ + k_s`, the degree of the attached monomial.
    pub fn total_degree(&self) -> u32 {
        self.k0() + self.k_sum()
    }

    /// Number of elements in a joint reduction of this type.
    pub fn element_count(&self) -> u32 {
        self.k_sum() + self.k0_plus_1
    }

    /// Exponent vector `(k_0, k_1, …, k_s)` of the attached monomial.
    pub fn exponents(&self) -> Vec<u32> {
        std::iter::once(self.k0()).chain(self.k.iter().copied()).collect()
    }

    /// All types with `s` I-entries and the given total degree, ordered by
    /// decreasing `k_0` and then lexicographically.
    pub fn all_of_degree(s: usize, degree: u32) -> Vec<MixedType> {
        let mut out: Vec<MixedType> = monomials_of_degree(s + 1, degree)
            .into_iter()
            .map(|m| {
                let e = m.exponents();
                MixedType { k: e[1..].to_vec(), k0_plus_1: e[0] + 1 }
            })
            .collect();
        out.sort_by(|a, b| b.k0_plus_1.cmp(&a.k0_plus_1).then_with(|| a.k.cmp(&b.k)));
        out
    }
}

impl fmt::Display for MixedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.k.iter().map(u32::to_string).collect();
        write!(f, "{};{}", ks.join(","), self.k0_plus_1)
    }
}

impl FromStr for MixedType {
    type Err = Error;

    /// Parses `k1,..,ks;k0+1`; the I-part may be empty (`;3`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed type '{s}', expected k1,..,ks;k0+1"));
        let (left, right) = s.split_once(';').ok_or_else(bad)?;
        let k = if left.trim().is_empty() {
            Vec::new()
        } else {
            left.split(',').map(|t| t.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
        };
        let k0_plus_1 = right.trim().parse::<u32>().map_err(|_| bad())?;
        MixedType::new(k, k0_plus_1)
    }
}

/// Dimensions and height attached to `(J; I_1, …, I_s; H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisContext {
    /// Number of ring variables.
    pub nvars: usize,
    /// `dim A/H`.
    pub d: usize,
    /// `dim M/(0_M : I^∞)` with `I = I_1 ⋯ I_s`.
    pub q: usize,
    /// Height of `(I + H)/H`.
    pub h: usize,
    pub s: usize,
}

/// Computes the analysis context.
///
/// With no I-ideals the product is the unit ideal; then `q = d` and the
/// height is taken to be `d`, so the hypothesis `k_1 + ⋯ + k_s < h` is void.
pub fn context(j: &MonomialIdeal, i_list: &[MonomialIdeal], h: &MonomialIdeal) -> Result<AnalysisContext> {
    let n = j.nvars();
    for other in i_list.iter().chain([h]) {
        if other.nvars() != n {
            return Err(Error::DimensionMismatch { expected: n, found: other.nvars() });
        }
    }
    if j.is_unit() || !j.is_m_primary() {
        return Err(Error::NotMPrimary("J must be a proper m-primary ideal".into()));
    }
    if h.is_unit() {
        return Err(Error::InvalidArgument("module ideal must be proper (M = A/H is zero)".into()));
    }
    let d = h.dim_quotient()?;
    if i_list.is_empty() {
        return Ok(AnalysisContext { nvars: n, d, q: d, h: d, s: 0 });
    }
    let i = product_all(n, i_list)?;
    let sat = h.saturate(&i)?;
    if sat.is_unit() {
        return Err(Error::DegenerateIdeal("I is contained in the radical of H, so M/(0:I^∞) = 0".into()));
    }
    let q = sat.dim_quotient()?;
    let ht = height_in_quotient(&i, h)?;
    if ht > 0 && q != d {
        return Err(Error::Internal(format!("positive height {ht} but q = {q} differs from d = {d}")));
    }
    Ok(AnalysisContext { nvars: n, d, q, h: ht, s: i_list.len() })
}

/// Evaluates the length function, memoising ideal powers and samples.
#[derive(Debug, Clone)]
pub struct Sampler {
    powers: PowerCache,
    h: MonomialIdeal,
    guard: u64,
    cache: HashMap<Vec<u32>, u64>,
}

impl Sampler {
    /// `slots[0]` is `J`; `slots[1..]` are the I-ideals.
    pub fn new(j: &MonomialIdeal, i_list: &[MonomialIdeal], h: &MonomialIdeal) -> Self {
        let slots: Vec<MonomialIdeal> = std::iter::once(j.clone()).chain(i_list.iter().cloned()).collect();
        Sampler { powers: PowerCache::new(slots), h: h.clone(), guard: DEFAULT_LENGTH_GUARD, cache: HashMap::new() }
    }

    pub fn with_guard(mut self, guard: u64) -> Self {
        self.guard = guard;
        self
    }

    pub fn sample(&mut self, point: &[u32]) -> Result<u64> {
        if point.len() != self.powers.ideals().len() {
            return Err(Error::DimensionMismatch { expected: self.powers.ideals().len(), found: point.len() });
        }
        if let Some(&v) = self.cache.get(point) {
            return Ok(v);
        }
        let p = self.powers.product(point);
        let jp = p.product(&self.powers.ideals()[0])?;
        let v = p.count_quotient_length(&jp, &self.h, self.guard)?;
        self.cache.insert(point.to_vec(), v);
        Ok(v)
    }
}

/// One evaluation of the length function.
pub fn sample_b(j: &MonomialIdeal, i_list: &[MonomialIdeal], h: &MonomialIdeal, point: &[u32]) -> Result<u64> {
    if !j.is_m_primary() || j.is_unit() {
        return Err(Error::NotMPrimary("J must be a proper m-primary ideal".into()));
    }
    Sampler::new(j, i_list, h).sample(point)
}

/// A polynomial in `n_0, …, n_s` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolatedPolynomial {
    /// Coefficient of `n_0^{e_0} ⋯ n_s^{e_s}`, keyed by `(e_0, …, e_s)`; zero entries omitted.
    pub coefficients: BTreeMap<Vec<u32>, BigRational>,
    pub nvars: usize,
    /// Interpolation degree bound.
    pub degree_bound: u32,
    /// Base point `(N, …, N)` of the sample grid.
    pub offset: u32,
}

impl InterpolatedPolynomial {
    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.coefficients.get(exponents).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest total degree with a nonzero coefficient; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.coefficients.keys().map(|e| e.iter().sum()).max()
    }

    pub fn evaluate(&self, point: &[u32]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coefficients {
            let mut t = c.clone();
            for (&x, &k) in point.iter().zip(e) {
                t *= BigRational::from_integer(BigInt::from(x).pow(k));
            }
            acc += t;
        }
        acc
    }

    /// Same coefficients, ignoring where the samples were taken.
    pub fn same_polynomial(&self, other: &InterpolatedPolynomial) -> bool {
        self.coefficients == other.coefficients
    }
}

/// The simplex grid `{offset + a : |a| ≤ degree}` in `nvars` coordinates.
pub fn simplex_grid(nvars: usize, degree: u32, offset: u32) -> Vec<Vec<u32>> {
    (0..=degree)
        .flat_map(|t| monomials_of_degree(nvars, t))
        .map(|m| m.exponents().iter().map(|&a| a + offset).collect())
        .collect()
}

/// The unique polynomial of total degree at most `degree` through the
/// given samples on the simplex grid at `offset`.
pub fn interpolate(samples: &BTreeMap<Vec<u32>, u64>, degree: u32, nvars: usize, offset: u32) -> Result<InterpolatedPolynomial> {
    let grid = simplex_grid(nvars, degree, offset);
    if samples.len() != grid.len() || grid.iter().any(|p| !samples.contains_key(p)) {
        return Err(Error::InvalidArgument("samples must be exactly the simplex grid".into()));
    }
    let basis: Vec<Vec<u32>> = (0..=degree)
        .flat_map(|t| monomials_of_degree(nvars, t))
        .map(|m| m.exponents().to_vec())
        .collect();
    let rows: Vec<Vec<BigInt>> = grid
        .iter()
        .map(|p| {
            basis
                .iter()
                .map(|e| p.iter().zip(e).fold(BigInt::one(), |acc, (&x, &k)| acc * BigInt::from(x).pow(k)))
                .collect()
        })
        .collect();
    let rhs: Vec<BigInt> = grid.iter().map(|p| BigInt::from(samples[p])).collect();
    let x = solve_bareiss(&rows, &rhs)?;
    let coefficients = basis.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect();
    Ok(InterpolatedPolynomial { coefficients, nvars, degree_bound: degree, offset })
}

fn interpolate_at(sampler: &mut Sampler, nvars: usize, degree: u32, offset: u32) -> Result<InterpolatedPolynomial> {
    let mut samples = BTreeMap::new();
    for p in simplex_grid(nvars, degree, offset) {
        let v = sampler.sample(&p)?;
        samples.insert(p, v);
    }
    interpolate(&samples, degree, nvars, offset)
}

/// Interpolates at offsets `N` and `N + 1`, doubling `N` until the two agree.
pub fn interpolate_stable(sampler: &mut Sampler, nvars: usize, degree: u32, start: u32) -> Result<InterpolatedPolynomial> {
    let mut n = start;
    for _ in 0..=MAX_DOUBLINGS {
        let a = interpolate_at(sampler, nvars, degree, n)?;
        let b = interpolate_at(sampler, nvars, degree, n + 1)?;
        if a.same_polynomial(&b) {
            return Ok(a);
        }
        n = (2 * n).max(1);
    }
    Err(Error::StabilityFailure(format!(
        "interpolants at offsets N and N+1 still disagree after {MAX_DOUBLINGS} doublings"
    )))
}

/// Default starting offset: the largest generator degree among all inputs.
pub fn default_offset(j: &MonomialIdeal, i_list: &[MonomialIdeal], h: &MonomialIdeal) -> u32 {
    i_list.iter().chain([j, h]).map(MonomialIdeal::max_degree).max().unwrap_or(0)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// The certified polynomial with everything derived from it.
#[derive(Debug, Clone)]
pub struct BhattacharyaAnalysis {
    pub context: AnalysisContext,
    pub polynomial: InterpolatedPolynomial,
    /// Total degree equals `q - 1` and the polynomial agreed at `N` and `N + 1`.
    pub degree_certified: bool,
}

impl BhattacharyaAnalysis {
    /// Runs the stability protocol. `offset` overrides the starting `N`.
    pub fn compute(
        j: &MonomialIdeal,
        i_list: &[MonomialIdeal],
        h: &MonomialIdeal,
        offset: Option<u32>,
    ) -> Result<BhattacharyaAnalysis> {
        let ctx = context(j, i_list, h)?;
        if ctx.q == 0 {
            return Err(Error::DegenerateIdeal("q = 0: the length function is eventually zero".into()));
        }
        let degree = (ctx.q - 1) as u32;
        let start = offset.unwrap_or_else(|| default_offset(j, i_list, h));
        let mut sampler = Sampler::new(j, i_list, h);
        let polynomial = interpolate_stable(&mut sampler, ctx.s + 1, degree, start)?;
        let top_nonzero = polynomial.total_degree() == Some(degree);
        Ok(BhattacharyaAnalysis { context: ctx, polynomial, degree_certified: top_nonzero })
    }

    /// `coefficient × k_0! k_1! ⋯ k_s!`.
    pub fn mixed_multiplicity(&self, ty: &MixedType) -> Result<u64> {
        if ty.s() != self.context.s {
            return Err(Error::InvalidArgument(format!(
                "type has {} I-entries but there are {} I-ideals",
                ty.s(),
                self.context.s
            )));
        }
        let expected = self.polynomial.degree_bound as i64;
        if ty.total_degree() as i64 != expected {
            return Err(Error::DegreeMismatch { type_degree: ty.total_degree() as i64, expected });
        }
        let e = ty.exponents();
        let scale: BigInt = e.iter().map(|&k| factorial(k)).product();
        let v = self.polynomial.coefficient(&e) * BigRational::from_integer(scale);
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Internal(format!("mixed multiplicity {v} is not a non-negative integer")));
        }
        v.to_integer().to_u64().ok_or_else(|| Error::Internal("mixed multiplicity overflows u64".into()))
    }

    /// Every type of total degree `q - 1` with its value.
    pub fn all_mixed_multiplicities(&self) -> Result<Vec<(MixedType, u64)>> {
        MixedType::all_of_degree(self.context.s, self.polynomial.degree_bound)
            .into_iter()
            .map(|t| self.mixed_multiplicity(&t).map(|v| (t, v)))
            .collect()
    }
}

/// `e(J^{[k_0+1]}, I_1^{[k_1]}, …, I_s^{[k_s]}; A/H)`.
pub fn mixed_multiplicity(j: &MonomialIdeal, i_list: &[MonomialIdeal], h: &MonomialIdeal, ty: &MixedType) -> Result<u64> {
    BhattacharyaAnalysis::compute(j, i_list, h, None)?.mixed_multiplicity(ty)
}
