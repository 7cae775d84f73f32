//! Monomial ideals: sums, products, powers, colons, minimal primes,
//! dimension, height, and staircase length counting.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, VariableSet};

/// Default cap on the number of monomials a staircase count may visit.
pub const DEFAULT_LENGTH_GUARD: u64 = 10_000_000;

/// A monomial ideal given by its unique minimal generating set.
///
/// No generator is empty set = zero ideal; `{1}` = unit ideal. Generators are
/// kept sorted by degree, then lexicographically, so equal ideals are
/// structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.gens).finish()
    }
}

/// A prime generated by a subset of the variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoordinatePrime {
    nvars: usize,
    vars: Vec<usize>,
}

impl CoordinatePrime {
    pub fn new(nvars: usize, mut vars: Vec<usize>) -> Result<Self> {
        vars.sort_unstable();
        vars.dedup();
        if vars.iter().any(|&v| v >= nvars) {
            return Err(Error::InvalidArgument("prime uses an undeclared variable".into()));
        }
        Ok(CoordinatePrime { nvars, vars })
    }

    fn from_mask(nvars: usize, mask: u64) -> Self {
        CoordinatePrime { nvars, vars: (0..nvars).filter(|&i| mask >> i & 1 == 1).collect() }
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn height(&self) -> usize {
        self.vars.len()
    }

    pub fn contains(&self, other: &CoordinatePrime) -> bool {
        other.vars.iter().all(|v| self.vars.contains(v))
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::from_gens(self.nvars, self.vars.iter().map(|&i| Monomial::var(self.nvars, i)))
    }

    pub fn display(&self, vars: &VariableSet) -> String {
        let names: Vec<&str> = self.vars.iter().map(|&i| vars.names()[i].as_str()).collect();
        format!("({})", names.join(", "))
    }
}

/// The cyclic module `A/H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientModule {
    h: MonomialIdeal,
}

impl QuotientModule {
    pub fn new(h: MonomialIdeal) -> Result<Self> {
        if h.is_unit() {
            return Err(Error::InvalidArgument("module ideal must be proper (M = A/H is zero)".into()));
        }
        Ok(QuotientModule { h })
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.h
    }

    pub fn dimension(&self) -> usize {
        self.h.dim_quotient().expect("proper by construction")
    }
}

fn sort_key(m: &Monomial) -> (u32, std::cmp::Reverse<Monomial>) {
    (m.degree(), std::cmp::Reverse(m.clone()))
}

/// Reduces a generator list to the minimal generating set of the ideal it generates.
pub fn minimalize(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> MonomialIdeal {
    let mut all: Vec<Monomial> = gens.into_iter().collect();
    all.sort_by_key(sort_key);
    all.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(all.len());
    for m in all {
        debug_assert_eq!(m.nvars(), nvars);
        let d = m.degree();
        // Only strictly lower degrees can divide once duplicates are gone.
        if !kept.iter().take_while(|k| k.degree() < d).any(|k| k.divides(&m)) {
            kept.push(m);
        }
    }
    MonomialIdeal { nvars, gens: kept }
}

impl MonomialIdeal {
    pub fn from_gens(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        minimalize(nvars, gens)
    }

    /// From raw exponent vectors; checks their length.
    pub fn from_exponents(nvars: usize, gens: &[Vec<u32>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, found: g.len() });
        }
        Ok(minimalize(nvars, gens.iter().map(|g| Monomial::new(g.iter().copied()))))
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: Vec::new() }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: vec![Monomial::one(nvars)] }
    }

    /// The maximal ideal `(x_1, …, x_n)`.
    pub fn maximal(nvars: usize) -> Self {
        MonomialIdeal::from_gens(nvars, (0..nvars).map(|i| Monomial::var(nvars, i)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.first().is_some_and(Monomial::is_one)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        let d = m.degree();
        self.gens.iter().take_while(|g| g.degree() <= d).any(|g| g.divides(m))
    }

    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// Ideal equality by mutual generator membership.
    pub fn equals(&self, other: &MonomialIdeal) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// All minimal generators share one total degree (the zero ideal does not qualify).
    pub fn is_equigenerated(&self) -> bool {
        match self.gens.first() {
            None => false,
            Some(g) => self.gens.iter().all(|h| h.degree() == g.degree()),
        }
    }

    fn check_same(&self, other: &MonomialIdeal) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        Ok(minimalize(self.nvars, self.gens.iter().chain(&other.gens).cloned()))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        let mut set: HashSet<Monomial> = HashSet::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                set.insert(a.mul(b));
            }
        }
        Ok(minimalize(self.nvars, set))
    }

    pub fn power(&self, n: u32) -> MonomialIdeal {
        let mut result = MonomialIdeal::unit(self.nvars);
        for _ in 0..n {
            result = result.product(self).expect("same ring");
        }
        result
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        Ok(minimalize(
            self.nvars,
            self.gens.iter().flat_map(|a| other.gens.iter().map(move |b| a.lcm(b))),
        ))
    }

    /// `self : (m)` for a single monomial.
    pub fn colon_monomial(&self, m: &Monomial) -> MonomialIdeal {
        minimalize(self.nvars, self.gens.iter().map(|g| g.colon(m)))
    }

    /// `self : other`, intersecting the colons by each generator of `other`.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        let mut result = MonomialIdeal::unit(self.nvars);
        for g in &other.gens {
            result = result.intersect(&self.colon_monomial(g))?;
        }
        Ok(result)
    }

    /// `self : other^∞`, iterating colons until they stabilise.
    pub fn saturate(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        if other.is_zero() {
            return Err(Error::InvalidArgument("cannot saturate by the zero ideal".into()));
        }
        let mut cur = self.clone();
        loop {
            let next = cur.colon(other)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// True iff every variable occurs as a pure power among the generators.
    pub fn is_m_primary(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let mut seen = vec![false; self.nvars];
        for g in &self.gens {
            if let Some(i) = g.pure_power_var() {
                seen[i] = true;
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Minimal primes: the minimal vertex covers of the generator supports.
    pub fn minimal_primes(&self) -> Result<Vec<CoordinatePrime>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("minimal primes of the zero ideal".into()));
        }
        if self.is_unit() {
            return Err(Error::InvalidArgument("minimal primes of the unit ideal".into()));
        }
        if self.nvars > 63 {
            return Err(Error::UnsupportedInput("more than 63 variables".into()));
        }
        let mut supports: Vec<u64> = self.gens.iter().map(Monomial::support_mask).collect();
        supports.sort_unstable();
        supports.dedup();
        let mut covers = Vec::new();
        vertex_covers(&supports, 0, &mut covers);
        covers.sort_by_key(|c: &u64| (c.count_ones(), *c));
        covers.dedup();
        let mut minimal: Vec<u64> = Vec::new();
        for c in covers {
            if !minimal.iter().any(|&k| (k & c) == k) {
                minimal.push(c);
            }
        }
        let mut primes: Vec<CoordinatePrime> =
            minimal.into_iter().map(|m| CoordinatePrime::from_mask(self.nvars, m)).collect();
        primes.sort();
        Ok(primes)
    }

    /// Minimal primes, with the zero ideal answering `{(0)}`.
    pub fn components(&self) -> Result<Vec<CoordinatePrime>> {
        if self.is_zero() {
            Ok(vec![CoordinatePrime { nvars: self.nvars, vars: Vec::new() }])
        } else {
            self.minimal_primes()
        }
    }

    /// Krull dimension of `A/self`.
    pub fn dim_quotient(&self) -> Result<usize> {
        if self.is_unit() {
            return Err(Error::InvalidArgument("dimension of the zero module".into()));
        }
        let min_height = self.components()?.iter().map(CoordinatePrime::height).min().unwrap_or(0);
        Ok(self.nvars - min_height)
    }

    /// Sum of exponents becomes `1` outside `keep`: the image of the ideal
    /// after inverting every variable not in `keep`, in the variables of `keep`.
    pub fn localize_at(&self, keep: &CoordinatePrime) -> MonomialIdeal {
        let k = keep.vars.len();
        minimalize(k, self.gens.iter().map(|g| Monomial::new(keep.vars.iter().map(|&i| g.exponents()[i]))))
    }

    /// Monomials of `self` that are not in `other + h`, counted by
    /// breadth-first search from the generators of `self`.
    ///
    /// The search only follows monomials outside `other + h`; this reaches
    /// everything because a divisor (within `self`) of a monomial outside an
    /// ideal is itself outside it.
    pub fn count_quotient_length(&self, other: &MonomialIdeal, h: &MonomialIdeal, guard: u64) -> Result<u64> {
        self.check_same(other)?;
        self.check_same(h)?;
        let outside = |m: &Monomial| !other.contains(m) && !h.contains(m);
        let mut visited: HashSet<Monomial> = HashSet::new();
        let mut queue: VecDeque<Monomial> = VecDeque::new();
        for g in &self.gens {
            if outside(g) && visited.insert(g.clone()) {
                queue.push_back(g.clone());
            }
        }
        while let Some(m) = queue.pop_front() {
            if visited.len() as u64 > guard {
                return Err(Error::LengthOverflow { guard });
            }
            for i in 0..self.nvars {
                let next = m.times_var(i);
                if !visited.contains(&next) && outside(&next) {
                    visited.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(visited.len() as u64)
    }

    /// Number of standard monomials, `None` when infinite.
    pub fn colength(&self) -> Option<u64> {
        if !self.is_m_primary() {
            return None;
        }
        let unit = MonomialIdeal::unit(self.nvars);
        let zero = MonomialIdeal::zero(self.nvars);
        unit.count_quotient_length(self, &zero, u64::MAX).ok()
    }

    pub fn display(&self, vars: &VariableSet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.display(vars).to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

fn vertex_covers(supports: &[u64], chosen: u64, out: &mut Vec<u64>) {
    match supports.iter().find(|&&s| s & chosen == 0) {
        None => out.push(chosen),
        Some(&s) => {
            let mut bits = s;
            while bits != 0 {
                let v = bits.trailing_zeros();
                bits &= bits - 1;
                vertex_covers(supports, chosen | 1 << v, out);
            }
        }
    }
}

/// Height of `(I + H)/H` in `A/H`.
///
/// Every prime involved is a coordinate prime and `A/H` is catenary, so the
/// height of `P/H` is the longest drop `ht P - ht q` over minimal primes `q`
/// of `H` inside `P`; the height of `(I + H)/H` is the minimum over the
/// minimal primes `P` of `I + H`.
pub fn height_in_quotient(i: &MonomialIdeal, h: &MonomialIdeal) -> Result<usize> {
    i.check_same(h)?;
    if h.is_unit() {
        return Err(Error::InvalidArgument("module ideal must be proper".into()));
    }
    let sum = i.sum(h)?;
    if sum.is_unit() {
        return Err(Error::HeightUndefined);
    }
    if sum.is_zero() {
        return Ok(0);
    }
    let over = sum.minimal_primes()?;
    let under = h.components()?;
    over.iter()
        .map(|p| {
            under
                .iter()
                .filter(|q| p.contains(q))
                .map(|q| p.height() - q.height())
                .max()
                .ok_or_else(|| Error::Internal("prime over H contains no minimal prime of H".into()))
        })
        .collect::<Result<Vec<_>>>()
        .map(|hs| hs.into_iter().min().unwrap_or(0))
}

/// Product of a list of monomial ideals (the unit ideal when empty).
pub fn product_all<'a>(nvars: usize, ideals: impl IntoIterator<Item = &'a MonomialIdeal>) -> Result<MonomialIdeal> {
    let mut acc = MonomialIdeal::unit(nvars);
    for i in ideals {
        acc = acc.product(i)?;
    }
    Ok(acc)
}

/// Memoised powers of a fixed list of monomial ideals.
#[derive(Debug, Clone)]
pub struct PowerCache {
    ideals: Vec<MonomialIdeal>,
    powers: Vec<Vec<MonomialIdeal>>,
}

impl PowerCache {
    pub fn new(ideals: Vec<MonomialIdeal>) -> Self {
        let powers = ideals.iter().map(|i| vec![MonomialIdeal::unit(i.nvars())]).collect();
        PowerCache { ideals, powers }
    }

    pub fn ideals(&self) -> &[MonomialIdeal] {
        &self.ideals
    }

    pub fn power(&mut self, k: usize, n: u32) -> &MonomialIdeal {
        while self.powers[k].len() <= n as usize {
            let next = self.powers[k].last().unwrap().product(&self.ideals[k]).expect("same ring");
            self.powers[k].push(next);
        }
        &self.powers[k][n as usize]
    }

    /// `∏ ideals[k]^{exponents[k]}`.
    pub fn product(&mut self, exponents: &[u32]) -> MonomialIdeal {
        assert_eq!(exponents.len(), self.ideals.len());
        let nvars = self.ideals.first().map(MonomialIdeal::nvars).unwrap_or(0);
        let mut acc = MonomialIdeal::unit(nvars);
        for (k, &e) in exponents.iter().enumerate() {
            let p = self.power(k, e).clone();
            acc = acc.product(&p).expect("same ring");
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.iter().copied())
    }

    #[test]
    fn minimalize_examples() {
        assert_eq!(ideal(2, &[&[2, 0], &[2, 1], &[0, 3]]), ideal(2, &[&[2, 0], &[0, 3]]));
        assert!(ideal(2, &[]).is_zero());
        let u = ideal(2, &[&[0, 0], &[1, 0]]);
        assert!(u.is_unit());
        assert_eq!(u.gens().len(), 1);
    }

    #[test]
    fn sums_products_powers() {
        let m = MonomialIdeal::maximal(2);
        assert_eq!(m.product(&m).unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(ideal(2, &[&[1, 0], &[0, 2]]).power(2), ideal(2, &[&[2, 0], &[1, 2], &[0, 4]]));
        assert!(m.power(0).is_unit());
        assert_eq!(ideal(2, &[&[1, 0]]).sum(&ideal(2, &[&[0, 1]])).unwrap(), m);
    }

    #[test]
    fn colon_and_saturation_examples() {
        let i = ideal(2, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.colon(&ideal(2, &[&[1, 0]])).unwrap(), MonomialIdeal::maximal(2));
        assert_eq!(i.saturate(&MonomialIdeal::maximal(2)).unwrap(), ideal(2, &[&[1, 0]]));
        assert!(ideal(2, &[&[2, 0], &[0, 3]]).saturate(&MonomialIdeal::maximal(2)).unwrap().is_unit());
    }

    #[test]
    fn minimal_primes_examples() {
        let ps = ideal(3, &[&[1, 1, 0], &[1, 0, 1]]).minimal_primes().unwrap();
        let expect = vec![CoordinatePrime::new(3, vec![0]).unwrap(), CoordinatePrime::new(3, vec![1, 2]).unwrap()];
        assert_eq!(ps, expect);
        assert_eq!(ideal(2, &[&[2, 0], &[0, 3]]).minimal_primes().unwrap(), vec![CoordinatePrime::new(2, vec![0, 1]).unwrap()]);
        assert_eq!(ideal(2, &[&[2, 0]]).minimal_primes().unwrap(), vec![CoordinatePrime::new(2, vec![0]).unwrap()]);
        assert!(MonomialIdeal::zero(2).minimal_primes().is_err());
        assert!(MonomialIdeal::unit(2).minimal_primes().is_err());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(MonomialIdeal::zero(3).dim_quotient().unwrap(), 3);
        assert_eq!(ideal(3, &[&[1, 1, 0], &[1, 0, 1]]).dim_quotient().unwrap(), 2);
        assert_eq!(ideal(2, &[&[2, 0], &[0, 3]]).dim_quotient().unwrap(), 0);
        assert!(MonomialIdeal::unit(2).dim_quotient().is_err());
    }

    #[test]
    fn height_examples() {
        let z3 = MonomialIdeal::zero(3);
        assert_eq!(height_in_quotient(&ideal(3, &[&[1, 0, 0], &[0, 1, 0]]), &z3).unwrap(), 2);
        assert_eq!(height_in_quotient(&ideal(2, &[&[1, 0]]), &ideal(2, &[&[1, 1]])).unwrap(), 0);
        assert_eq!(height_in_quotient(&MonomialIdeal::maximal(3), &z3).unwrap(), 3);
        assert_eq!(
            height_in_quotient(&ideal(2, &[&[1, 0]]), &ideal(2, &[&[0, 0]])).unwrap_err(),
            Error::InvalidArgument("module ideal must be proper".into())
        );
        assert_eq!(height_in_quotient(&MonomialIdeal::unit(2), &ideal(2, &[&[1, 1]])).unwrap_err(), Error::HeightUndefined);
    }

    /// Brute-force height: the shortest chain from a minimal prime of H to a
    /// prime over I + H, enumerating all coordinate primes.
    fn brute_height(i: &MonomialIdeal, h: &MonomialIdeal) -> usize {
        let n = i.nvars();
        let contains_ideal = |mask: u64, id: &MonomialIdeal| id.gens().iter().all(|g| g.support_mask() & mask != 0);
        let primes: Vec<u64> = (0..1u64 << n).collect();
        let over_h: Vec<u64> = primes.iter().copied().filter(|&p| contains_ideal(p, h)).collect();
        let min_h: Vec<u64> = over_h.iter().copied().filter(|&p| !over_h.iter().any(|&q| q != p && q & p == q)).collect();
        let over_ih: Vec<u64> = over_h.iter().copied().filter(|&p| contains_ideal(p, i)).collect();
        over_ih
            .iter()
            .map(|&p| min_h.iter().filter(|&&q| q & p == q).map(|&q| (p.count_ones() - q.count_ones()) as usize).max().unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn height_matches_chain_enumeration() {
        let i = ideal(2, &[&[1, 0]]);
        let h = ideal(2, &[&[1, 1]]);
        assert_eq!(brute_height(&i, &h), 0);
        let i = ideal(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let h = ideal(3, &[&[0, 1, 1]]);
        assert_eq!(height_in_quotient(&i, &h).unwrap(), brute_height(&i, &h));
    }

    #[test]
    fn m_primary_examples() {
        assert!(ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]).is_m_primary());
        assert!(!ideal(2, &[&[2, 0], &[1, 1]]).is_m_primary());
        assert!(MonomialIdeal::unit(2).is_m_primary());
    }

    #[test]
    fn length_examples() {
        let m = MonomialIdeal::maximal(2);
        let z = MonomialIdeal::zero(2);
        assert_eq!(m.count_quotient_length(&m.power(2), &z, 1000).unwrap(), 2);
        assert_eq!(MonomialIdeal::unit(2).count_quotient_length(&m, &z, 1000).unwrap(), 1);
        let q = ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]);
        assert_eq!(m.count_quotient_length(&q, &z, 1000).unwrap(), brute_length(&m, &q, &z, 10));
        assert_eq!(m.count_quotient_length(&q, &z, 1000).unwrap(), 3);
        let x = ideal(2, &[&[1, 0]]);
        assert_eq!(MonomialIdeal::unit(2).count_quotient_length(&x, &z, 50), Err(Error::LengthOverflow { guard: 50 }));
    }

    /// Exhaustive count over all monomials of degree at most `bound`.
    fn brute_length(p: &MonomialIdeal, q: &MonomialIdeal, h: &MonomialIdeal, bound: u32) -> u64 {
        let n = p.nvars();
        (0..=bound)
            .flat_map(|d| crate::monomial::monomials_of_degree(n, d))
            .filter(|m| p.contains(m) && !q.contains(m) && !h.contains(m))
            .count() as u64
    }

    #[test]
    fn localization_lengths() {
        let h = ideal(2, &[&[2, 1]]);
        let p = CoordinatePrime::new(2, vec![0]).unwrap();
        assert_eq!(h.localize_at(&p).colength(), Some(2));
        assert_eq!(mono(&[1, 1]).colon(&mono(&[1, 0])), mono(&[0, 1]));
    }

    fn arb_ideal(n: usize) -> impl Strategy<Value = MonomialIdeal> {
        prop::collection::vec(prop::collection::vec(0u32..3, n), 1..4)
            .prop_map(move |g| MonomialIdeal::from_exponents(n, &g).unwrap())
    }

    fn arb_m_primary(n: usize) -> impl Strategy<Value = MonomialIdeal> {
        (prop::collection::vec(1u32..4, n), prop::collection::vec(prop::collection::vec(0u32..3, n), 0..3)).prop_map(
            move |(pure, mixed)| {
                let mut gens: Vec<Monomial> = pure.iter().enumerate().map(|(i, &e)| Monomial::var(n, i).pow(e)).collect();
                gens.extend(mixed.into_iter().map(Monomial::new));
                MonomialIdeal::from_gens(n, gens)
            },
        )
    }

    proptest! {
        #[test]
        fn powers_multiply(i in arb_ideal(3), a in 0u32..4, b in 0u32..4) {
            prop_assert_eq!(i.power(a).product(&i.power(b)).unwrap(), i.power(a + b));
        }

        #[test]
        fn minimalize_is_idempotent(i in arb_ideal(3)) {
            prop_assert_eq!(minimalize(3, i.gens().to_vec()), i.clone());
            prop_assert!(i.equals(&i));
        }

        #[test]
        fn saturation_is_stable(i in arb_ideal(3), j in arb_ideal(3)) {
            let s = i.saturate(&j).unwrap();
            prop_assert_eq!(s.saturate(&j).unwrap(), s);
        }

        #[test]
        fn minimal_primes_of_products(i in arb_ideal(3), j in arb_ideal(3)) {
            let ij = i.product(&j).unwrap();
            prop_assume!(!ij.is_unit());
            let mut expected = Vec::new();
            for (a, comps) in [(&i, i.minimal_primes()), (&j, j.minimal_primes())] {
                if !a.is_unit() {
                    expected.extend(comps.unwrap());
                }
            }
            let mut minimal: Vec<CoordinatePrime> = expected
                .iter()
                .filter(|p| !expected.iter().any(|q| q != *p && p.contains(q)))
                .cloned()
                .collect();
            minimal.sort();
            minimal.dedup();
            prop_assert_eq!(ij.minimal_primes().unwrap(), minimal);
        }

        #[test]
        fn bfs_length_matches_enumeration(q in arb_m_primary(3)) {
            let unit = MonomialIdeal::unit(3);
            let z = MonomialIdeal::zero(3);
            let bound = 3 * q.max_degree();
            prop_assert_eq!(unit.count_quotient_length(&q, &z, 100_000).unwrap(), brute_length(&unit, &q, &z, bound));
        }

        #[test]
        fn positive_height_keeps_dimension(i in arb_ideal(3), h in arb_ideal(3)) {
            prop_assume!(!h.is_unit() && !i.sum(&h).unwrap().is_unit());
            let ht = height_in_quotient(&i, &h).unwrap();
            prop_assert_eq!(ht, brute_height(&i, &h));
            if ht > 0 {
                prop_assert_eq!(h.dim_quotient().unwrap(), h.saturate(&i).unwrap().dim_quotient().unwrap());
            }
        }
    }
}
