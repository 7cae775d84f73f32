//! Buchberger's algorithm with the Gebauer-Möller criteria and the sugar
//! strategy, plus the ideal operations built on it.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, TermOrder};
use crate::monomial_ideal::MonomialIdeal;
use crate::poly::{Poly, PolyRing};

/// A reduced Gröbner basis, sorted by increasing lead monomial.
///
/// A basis computed with a degree bound is only a basis up to that degree:
/// normal forms decide membership for homogeneous polynomials of degree at
/// most the bound and nothing else.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: Field> {
    ring: PolyRing<F>,
    elements: Vec<Poly<F>>,
    bound: Option<u32>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn elements(&self) -> &[Poly<F>] {
        &self.elements
    }

    pub fn degree_bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn is_unit(&self) -> bool {
        self.elements.first().is_some_and(|g| g.lead_monomial().is_some_and(Monomial::is_one))
    }

    pub fn lead_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::from_gens(self.ring.nvars(), self.elements.iter().filter_map(|g| g.lead_monomial().cloned()))
    }

    pub fn normal_form(&self, f: &Poly<F>) -> Poly<F> {
        reduce_full(&self.ring, f, &self.elements)
    }

    pub fn contains(&self, f: &Poly<F>) -> bool {
        self.normal_form(f).is_zero()
    }
}

#[derive(Debug, Clone, Copy)]
enum Item {
    Input(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone)]
struct Candidate {
    item: Item,
    lcm: Option<Monomial>,
    sugar: u32,
    serial: usize,
}

struct Engine<'a, F: Field> {
    ring: &'a PolyRing<F>,
    polys: Vec<Poly<F>>,
    sugars: Vec<u32>,
    active: Vec<usize>,
    queue: Vec<Candidate>,
    serial: usize,
}

impl<'a, F: Field> Engine<'a, F> {
    fn grading(&self, m: &Monomial) -> u32 {
        self.ring.order().degree(m)
    }

    fn lt(&self, i: usize) -> &Monomial {
        self.polys[i].lead_monomial().expect("basis elements are nonzero")
    }

    fn next_serial(&mut self) -> usize {
        self.serial += 1;
        self.serial
    }

    fn pick(&mut self) -> Option<Candidate> {
        let order = self.ring.order();
        let best = (0..self.queue.len()).min_by(|&a, &b| {
            let (x, y) = (&self.queue[a], &self.queue[b]);
            x.sugar
                .cmp(&y.sugar)
                .then_with(|| match (&x.lcm, &y.lcm) {
                    (Some(p), Some(q)) => order.compare(p, q),
                    _ => Ordering::Equal,
                })
                .then_with(|| x.serial.cmp(&y.serial))
        })?;
        Some(self.queue.swap_remove(best))
    }

    fn spoly(&self, i: usize, j: usize, lcm: &Monomial) -> Poly<F> {
        let (fi, fj) = (&self.polys[i], &self.polys[j]);
        let mi = self.lt(i).quotient_of(lcm).expect("lcm is a multiple");
        let mj = self.lt(j).quotient_of(lcm).expect("lcm is a multiple");
        let field = self.ring.field();
        let a = self.ring.mul_term(fi, &mi, &field.inv(&fi.lead().unwrap().1));
        let cj = field.inv(&fj.lead().unwrap().1);
        self.ring.sub_mul_term(&a, &cj, &mj, fj)
    }

    /// Gebauer-Möller update after appending polynomial `h`.
    fn update(&mut self, h: usize) {
        let lh = self.lt(h).clone();
        let sugar_h = self.sugars[h];

        // New pairs, with their lcms.
        let mut fresh: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let lg = self.lt(g);
                (g, lg.lcm(&lh), lg.is_coprime(&lh))
            })
            .collect();

        // Chain criterion among the new pairs: drop (g, h) when another new
        // pair's lcm properly divides it; among equal lcms keep one,
        // preferring a coprime witness.
        let mut keep = vec![true; fresh.len()];
        for a in 0..fresh.len() {
            for b in 0..fresh.len() {
                if a == b || !keep[b] {
                    continue;
                }
                let (la, lb) = (&fresh[a].1, &fresh[b].1);
                if lb.divides(la) && (lb != la || (fresh[b].2 && !fresh[a].2) || (fresh[b].2 == fresh[a].2 && b < a)) {
                    keep[a] = false;
                    break;
                }
            }
        }
        let mut kept = Vec::new();
        for (k, entry) in fresh.drain(..).enumerate() {
            if keep[k] && !entry.2 {
                kept.push(entry);
            }
        }

        // Old pairs made redundant by h.
        let polys = &self.polys;
        let lt = |i: usize| polys[i].lead_monomial().unwrap();
        self.queue.retain(|c| match (c.item, &c.lcm) {
            (Item::Pair(i, j), Some(l)) => {
                !(lh.divides(l) && &lt(i).lcm(&lh) != l && &lt(j).lcm(&lh) != l)
            }
            _ => true,
        });

        self.active.retain(|&g| !lh.divides(polys[g].lead_monomial().unwrap()));

        for (g, lcm, _) in kept {
            // Two monomials have a zero S-polynomial.
            if self.polys[g].len() == 1 && self.polys[h].len() == 1 {
                continue;
            }
            let lg = self.lt(g);
            let sugar = (self.sugars[g] + self.grading(&lcm) - self.grading(lg))
                .max(sugar_h + self.grading(&lcm) - self.grading(&lh));
            let serial = self.next_serial();
            self.queue.push(Candidate { item: Item::Pair(g, h), lcm: Some(lcm), sugar, serial });
        }
        self.active.push(h);
    }

    fn leads(&self) -> Vec<&Poly<F>> {
        self.active.iter().map(|&i| &self.polys[i]).collect()
    }
}

/// Reduced Gröbner basis of `gens` under the ring's order.
pub fn buchberger<F: Field>(ring: &PolyRing<F>, gens: &[Poly<F>]) -> GroebnerBasis<F> {
    run_buchberger(ring, &[], gens, None)
}

/// Basis of `known + gens` where `known` is already a Gröbner basis under the
/// ring's order: S-pairs among `known` are never formed.
pub(crate) fn buchberger_from<F: Field>(
    ring: &PolyRing<F>,
    known: &[Poly<F>],
    gens: &[Poly<F>],
    bound: Option<u32>,
) -> GroebnerBasis<F> {
    run_buchberger(ring, known, gens, bound)
}

/// Gröbner basis up to degree `bound` for homogeneous generators.
pub fn buchberger_truncated<F: Field>(ring: &PolyRing<F>, gens: &[Poly<F>], bound: u32) -> GroebnerBasis<F> {
    debug_assert!(gens.iter().all(|g| ring.is_homogeneous(g)));
    run_buchberger(ring, &[], gens, Some(bound))
}

fn run_buchberger<F: Field>(
    ring: &PolyRing<F>,
    known: &[Poly<F>],
    gens: &[Poly<F>],
    bound: Option<u32>,
) -> GroebnerBasis<F> {
    let inputs: Vec<Poly<F>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut engine =
        Engine { ring, polys: Vec::new(), sugars: Vec::new(), active: Vec::new(), queue: Vec::new(), serial: 0 };
    for g in known.iter().filter(|g| !g.is_zero()) {
        debug_assert!(g.lead_monomial() == ring.from_terms(g.terms().iter().cloned()).lead_monomial());
        engine.polys.push(ring.monic(g));
        engine.sugars.push(ring.degree(g).unwrap_or(0));
        engine.active.push(engine.polys.len() - 1);
    }
    if engine.active.iter().any(|&i| engine.polys[i].lead_monomial().unwrap().is_one()) {
        return GroebnerBasis { ring: ring.clone(), elements: vec![ring.one()], bound };
    }
    for (k, g) in inputs.iter().enumerate() {
        let sugar = ring.degree(g).unwrap_or(0);
        let serial = engine.next_serial();
        engine.queue.push(Candidate { item: Item::Input(k), lcm: g.lead_monomial().cloned(), sugar, serial });
    }

    while let Some(cand) = engine.pick() {
        if bound.is_some_and(|b| cand.sugar > b) {
            continue;
        }
        let p = match cand.item {
            Item::Input(k) => inputs[k].clone(),
            Item::Pair(i, j) => engine.spoly(i, j, cand.lcm.as_ref().unwrap()),
        };
        let reducers = engine.leads();
        let h = reduce_full(ring, &p, &reducers);
        if h.is_zero() {
            continue;
        }
        let h = ring.monic(&h);
        let unit = h.lead_monomial().unwrap().is_one();
        engine.polys.push(h);
        engine.sugars.push(cand.sugar);
        let idx = engine.polys.len() - 1;
        if unit {
            engine.active = vec![idx];
            break;
        }
        engine.update(idx);
    }

    let mut basis: Vec<Poly<F>> = engine.active.iter().map(|&i| engine.polys[i].clone()).collect();
    // Interreduce tails.
    for k in 0..basis.len() {
        let others: Vec<&Poly<F>> = basis.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, g)| g).collect();
        let g = &basis[k];
        let (lm, lc) = g.lead().unwrap().clone();
        let tail = ring.from_terms(g.terms()[1..].iter().cloned());
        let tail = reduce_full(ring, &tail, &others);
        let mut terms = vec![(lm, lc)];
        terms.extend(tail.into_terms());
        basis[k] = ring.monic(&ring.from_terms(terms));
    }
    let order = ring.order().clone();
    basis.sort_by(|a, b| order.compare(a.lead_monomial().unwrap(), b.lead_monomial().unwrap()));
    GroebnerBasis { ring: ring.clone(), elements: basis, bound }
}

/// Full reduction of `f` modulo `basis`: no term of the result is divisible
/// by a lead monomial of the basis.
fn reduce_full<F: Field, P: std::borrow::Borrow<Poly<F>>>(ring: &PolyRing<F>, f: &Poly<F>, basis: &[P]) -> Poly<F> {
    let field = ring.field();
    let mut terms = f.terms().to_vec();
    let mut k = 0;
    while k < terms.len() {
        let m = &terms[k].0;
        match basis.iter().map(|g| g.borrow()).find(|g| g.lead_monomial().unwrap().divides(m)) {
            None => k += 1,
            Some(g) if g.len() == 1 => {
                terms.remove(k);
            }
            Some(g) => {
                let (gm, gc) = g.lead().unwrap();
                let q = gm.quotient_of(m).unwrap();
                let coef = field.mul(&terms[k].1, &field.inv(gc));
                ring.sub_mul_term_from(&mut terms, k, &coef, &q, g);
            }
        }
    }
    ring.from_sorted_terms(terms)
}

/// Normal form of `f` with respect to `g`.
pub fn normal_form<F: Field>(f: &Poly<F>, g: &GroebnerBasis<F>) -> Poly<F> {
    g.normal_form(f)
}

/// A finitely generated ideal with a lazily computed, cached Gröbner basis.
#[derive(Debug, Clone)]
pub struct PolyIdeal<F: Field> {
    ring: PolyRing<F>,
    gens: Vec<Poly<F>>,
    basis: Arc<OnceLock<GroebnerBasis<F>>>,
}

impl<F: Field> PolyIdeal<F> {
    pub fn new(ring: &PolyRing<F>, gens: Vec<Poly<F>>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        PolyIdeal { ring: ring.clone(), gens, basis: Arc::new(OnceLock::new()) }
    }

    pub fn from_monomial_ideal(ring: &PolyRing<F>, m: &MonomialIdeal) -> Self {
        PolyIdeal::new(ring, m.gens().iter().map(|g| ring.monomial(g.clone())).collect())
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    pub fn basis(&self) -> &GroebnerBasis<F> {
        self.basis.get_or_init(|| buchberger(&self.ring, &self.gens))
    }

    pub fn contains(&self, f: &Poly<F>) -> bool {
        self.basis().contains(f)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| self.ring.is_homogeneous(g))
    }

    pub fn is_subset_of(&self, other: &PolyIdeal<F>) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &PolyIdeal<F>) -> PolyIdeal<F> {
        PolyIdeal::new(&self.ring, self.gens.iter().chain(&other.gens).cloned().collect())
    }

    /// `self + (extra)`, with the basis computed from the basis of `self`.
    pub fn extend(&self, extra: &[Poly<F>]) -> PolyIdeal<F> {
        let basis = buchberger_from(&self.ring, self.basis().elements(), extra, None);
        let gens = self.gens.iter().chain(extra).filter(|g| !g.is_zero()).cloned().collect();
        PolyIdeal { ring: self.ring.clone(), gens, basis: Arc::new(OnceLock::from(basis)) }
    }

    pub fn is_unit(&self) -> bool {
        self.basis().is_unit()
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().filter_map(|g| self.ring.degree(g)).max().unwrap_or(0)
    }
}

/// Equality of ideals by mutual membership of generators.
pub fn ideal_equal<F: Field>(i: &PolyIdeal<F>, j: &PolyIdeal<F>) -> bool {
    i.is_subset_of(j) && j.is_subset_of(i)
}

/// `I ∩ J` by eliminating a tag variable `t` from `t·I + (1-t)·J`.
pub fn ideal_intersect<F: Field>(i: &PolyIdeal<F>, j: &PolyIdeal<F>) -> PolyIdeal<F> {
    let ring = i.ring();
    let n = ring.nvars();
    let big = extended_ring(ring, "t", true, TermOrder::Elimination { block: 1 });
    let lift = |f: &Poly<F>| ring.remap(f, &big, |m| Monomial::new(std::iter::once(0).chain(m.exponents().iter().copied())));
    let t = big.var(0);
    let one_minus_t = big.sub(&big.one(), &t);
    let mut gens: Vec<Poly<F>> = i.gens().iter().map(|f| big.mul(&t, &lift(f))).collect();
    gens.extend(j.gens().iter().map(|g| big.mul(&one_minus_t, &lift(g))));
    let gb = buchberger(&big, &gens);
    let kept = gb
        .elements()
        .iter()
        .filter(|g| g.monomials().all(|m| m.exponents()[0] == 0))
        .map(|g| big.remap(g, ring, |m| Monomial::new(m.exponents()[1..=n].iter().copied())))
        .collect();
    PolyIdeal::new(ring, kept)
}

/// A ring with one extra variable, first or last, and the given order.
fn extended_ring<F: Field>(ring: &PolyRing<F>, name: &str, front: bool, order: TermOrder) -> PolyRing<F> {
    let mut names: Vec<String> = ring.vars().names().to_vec();
    let mut fresh = name.to_string();
    while names.contains(&fresh) {
        fresh.push('\'');
    }
    if front {
        names.insert(0, fresh);
    } else {
        names.push(fresh);
    }
    let vars = crate::monomial::VariableSet::new(names).expect("fresh name is distinct");
    PolyRing::new(vars, ring.field().clone(), order)
}

/// Number of standard monomials; `None` when infinite.
pub fn colength<F: Field>(i: &PolyIdeal<F>) -> Option<u64> {
    i.basis().lead_ideal().colength()
}

/// Krull dimension of `A/I`, read off the lead-term ideal.
pub fn ideal_dimension<F: Field>(i: &PolyIdeal<F>) -> Result<usize> {
    let lead = i.basis().lead_ideal();
    if lead.is_unit() {
        return Err(Error::InvalidArgument("dimension of the unit ideal".into()));
    }
    lead.dim_quotient()
}

/// `K : f` for a homogeneous ideal `K` and a homogeneous element `f`.
///
/// Adjoins `y` of weight `deg f`, last in a weighted reverse-lexicographic
/// order, computes a basis of `K + (y - f)`, divides by `y` where possible,
/// and substitutes `y = f` back.
pub fn quotient_by_element<F: Field>(k: &PolyIdeal<F>, f: &Poly<F>) -> Result<PolyIdeal<F>> {
    Ok(ElementQuotient::new(k, f)?.quotient())
}

/// `(K + N) : f` for a fixed `K` and `f` and varying monomial ideals `N`.
///
/// The basis of `K + N` is computed first without `y`; it stays a basis
/// after lifting, since the extended order is grevlex on monomials free of
/// `y`, and only `y - f` is then added.
pub struct ElementQuotient<F: Field> {
    k: PolyIdeal<F>,
    big: PolyRing<F>,
    /// `y - f` in the extended ring; `None` when `f = 0`.
    shift: Option<Poly<F>>,
    images: Vec<Poly<F>>,
}

impl<F: Field> ElementQuotient<F> {
    pub fn new(k: &PolyIdeal<F>, f: &Poly<F>) -> Result<Self> {
        let ring = k.ring();
        if !ring.is_homogeneous(f) || !k.is_homogeneous() {
            return Err(Error::UnsupportedInput("colon needs homogeneous input".into()));
        }
        if !matches!(ring.order(), TermOrder::GrevLex) {
            return Err(Error::UnsupportedInput("colon expects a graded reverse lexicographic ring".into()));
        }
        let n = ring.nvars();
        let delta = ring.degree(f).unwrap_or(1).max(1);
        let mut weights = vec![1u32; n];
        weights.push(delta);
        let big = extended_ring(ring, "y", false, TermOrder::WeightedGrevLex(weights.into()));
        let mut images: Vec<Poly<F>> = (0..n).map(|i| ring.var(i)).collect();
        images.push(f.clone());
        let shift = (!f.is_zero()).then(|| big.sub(&big.var(n), &lift(ring, &big, f)));
        Ok(ElementQuotient { k: k.clone(), big, shift, images })
    }

    fn finish(&self, k: &PolyIdeal<F>) -> PolyIdeal<F> {
        let ring = k.ring();
        let Some(shift) = &self.shift else {
            return PolyIdeal::new(ring, vec![ring.one()]);
        };
        let n = ring.nvars();
        let known: Vec<Poly<F>> = k.basis().elements().iter().map(|g| lift(ring, &self.big, g)).collect();
        let gb = buchberger_from(&self.big, &known, std::slice::from_ref(shift), None);
        let out = gb
            .elements()
            .iter()
            .map(|g| {
                let g = if g.monomials().all(|m| m.exponents()[n] > 0) {
                    self.big.remap(g, &self.big, |m| m.with_exponent(n, m.exponents()[n] - 1))
                } else {
                    g.clone()
                };
                self.big.substitute(&g, ring, &self.images)
            })
            .collect();
        PolyIdeal::new(ring, out)
    }

    /// `K : f`.
    pub fn quotient(&self) -> PolyIdeal<F> {
        self.finish(&self.k)
    }

    /// `(K + N) : f`.
    pub fn quotient_with(&self, extra: &MonomialIdeal) -> PolyIdeal<F> {
        let ring = self.k.ring();
        let mut gens: Vec<Poly<F>> = extra.gens().iter().map(|g| ring.monomial(g.clone())).collect();
        gens.extend(self.k.gens().iter().cloned());
        self.finish(&PolyIdeal::new(ring, gens))
    }
}

fn lift<F: Field>(ring: &PolyRing<F>, big: &PolyRing<F>, g: &Poly<F>) -> Poly<F> {
    ring.remap(g, big, |m| Monomial::new(m.exponents().iter().copied().chain(std::iter::once(0))))
}


/// `K : x_i^∞` for a homogeneous ideal, by moving `x_i` last in grevlex.
pub fn saturate_by_variable<F: Field>(k: &PolyIdeal<F>, var: usize) -> Result<PolyIdeal<F>> {
    let ring = k.ring();
    if !k.is_homogeneous() {
        return Err(Error::UnsupportedInput("saturation needs homogeneous input".into()));
    }
    let n = ring.nvars();
    let perm: Vec<usize> = (0..n).filter(|&j| j != var).chain(std::iter::once(var)).collect();
    let names: Vec<String> = perm.iter().map(|&j| ring.vars().names()[j].clone()).collect();
    let moved = PolyRing::new(crate::monomial::VariableSet::new(names)?, ring.field().clone(), TermOrder::GrevLex);
    let to = |m: &Monomial| Monomial::new(perm.iter().map(|&j| m.exponents()[j]));
    let back = |m: &Monomial| {
        let mut e = vec![0u32; n];
        for (pos, &j) in perm.iter().enumerate() {
            e[j] = m.exponents()[pos];
        }
        Monomial::new(e)
    };
    let gens: Vec<Poly<F>> = k.gens().iter().map(|g| ring.remap(g, &moved, to)).collect();
    let gb = buchberger(&moved, &gens);
    let out = gb
        .elements()
        .iter()
        .map(|g| {
            let low = g.monomials().map(|m| m.exponents()[n - 1]).min().unwrap_or(0);
            moved.remap(g, ring, |m| back(&m.with_exponent(n - 1, m.exponents()[n - 1] - low)))
        })
        .collect();
    Ok(PolyIdeal::new(ring, out))
}

/// `K : I^∞` for a monomial ideal `I`: the intersection over generators `g`
/// of `K : g^∞`, each a chain of variable saturations.
pub fn saturate_by_monomial_ideal<F: Field>(k: &PolyIdeal<F>, i: &MonomialIdeal) -> Result<PolyIdeal<F>> {
    if i.is_zero() {
        return Err(Error::InvalidArgument("cannot saturate by the zero ideal".into()));
    }
    let mut acc: Option<PolyIdeal<F>> = None;
    for g in i.gens() {
        let mut cur = k.clone();
        for (v, &e) in g.exponents().iter().enumerate() {
            if e > 0 {
                cur = saturate_by_variable(&cur, v)?;
            }
        }
        acc = Some(match acc {
            None => cur,
            Some(a) => ideal_intersect(&a, &cur),
        });
    }
    Ok(acc.expect("nonzero ideal has a generator"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::monomial::VariableSet;
    use proptest::prelude::*;

    fn qring(n: usize) -> PolyRing<Rationals> {
        PolyRing::grevlex(VariableSet::standard(n), Rationals)
    }

    fn p<F: Field>(ring: &PolyRing<F>, terms: &[(&[u32], i64)]) -> Poly<F> {
        ring.from_terms(terms.iter().map(|(e, c)| (Monomial::new(e.iter().copied()), ring.field().from_i64(*c))))
    }

    /// Independent Gröbner criterion: every S-polynomial of basis pairs
    /// reduces to zero by plain (lead-only) division.
    fn s_pairs_reduce<F: Field>(ring: &PolyRing<F>, g: &[Poly<F>]) -> bool {
        for a in 0..g.len() {
            for b in a + 1..g.len() {
                let (la, lb) = (g[a].lead_monomial().unwrap(), g[b].lead_monomial().unwrap());
                let l = la.lcm(lb);
                let fa = ring.mul_term(&g[a], &la.quotient_of(&l).unwrap(), &ring.field().inv(&g[a].lead().unwrap().1));
                let fb = ring.mul_term(&g[b], &lb.quotient_of(&l).unwrap(), &ring.field().inv(&g[b].lead().unwrap().1));
                let mut s = ring.sub(&fa, &fb);
                'outer: while let Some((m, c)) = s.lead().cloned() {
                    for h in g {
                        let (hm, hc) = h.lead().unwrap();
                        if let Some(q) = hm.quotient_of(&m) {
                            let coef = ring.field().mul(&c, &ring.field().inv(hc));
                            s = ring.sub_mul_term(&s, &coef, &q, h);
                            continue 'outer;
                        }
                    }
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn monomial_input_is_its_own_basis() {
        let r = qring(2);
        let gb = buchberger(&r, &[p(&r, &[(&[2, 0], 1)]), p(&r, &[(&[0, 3], 1)])]);
        assert_eq!(gb.elements().len(), 2);
        assert_eq!(gb.lead_ideal(), MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![0, 3]]).unwrap());
    }

    #[test]
    fn principal_is_made_monic() {
        let r = qring(2);
        let f = p(&r, &[(&[1, 0], 3), (&[0, 1], 6)]);
        let gb = buchberger(&r, &[f]);
        assert_eq!(gb.elements(), &[p(&r, &[(&[1, 0], 1), (&[0, 1], 2)])]);
    }

    #[test]
    fn twisted_cubic_style_example() {
        let r = qring(3);
        let g = [p(&r, &[(&[2, 0, 0], 1), (&[0, 1, 0], -1)]), p(&r, &[(&[3, 0, 0], 1), (&[0, 0, 1], -1)])];
        let gb = buchberger(&r, &g);
        assert!(s_pairs_reduce(&r, gb.elements()));
        for f in &g {
            assert!(gb.contains(f));
        }
    }

    #[test]
    fn normal_form_examples() {
        let r = qring(2);
        let gb = buchberger(&r, &[p(&r, &[(&[2, 0], 1), (&[0, 1], -1)])]);
        // x^2 - y is not its own lead under grevlex (x^2 > y by degree), so x^2 -> y.
        assert_eq!(gb.normal_form(&p(&r, &[(&[2, 1], 1)])), p(&r, &[(&[0, 2], 1)]));
        let gb = buchberger(&r, &[p(&r, &[(&[1, 0], 1), (&[0, 1], -1)]), p(&r, &[(&[0, 1], 1)])]);
        assert!(gb.normal_form(&p(&r, &[(&[1, 0], 1)])).is_zero());
        let gb = buchberger(&r, &[p(&r, &[(&[1, 0], 1), (&[0, 1], 1)])]);
        assert_eq!(gb.normal_form(&r.one()), r.one());
    }

    #[test]
    fn ideal_equality_examples() {
        let r = qring(2);
        let a = PolyIdeal::new(&r, vec![r.var(0), r.var(1)]);
        let b = PolyIdeal::new(&r, vec![r.add(&r.var(0), &r.var(1)), r.var(1)]);
        assert!(ideal_equal(&a, &b));
        let x = PolyIdeal::new(&r, vec![r.var(0)]);
        let x2 = PolyIdeal::new(&r, vec![r.pow(&r.var(0), 2)]);
        assert!(!ideal_equal(&x, &x2));
        assert!(ideal_equal(&a, &a));
    }

    #[test]
    fn intersection_examples() {
        let r = qring(2);
        let (x, y) = (r.var(0), r.var(1));
        let i = ideal_intersect(&PolyIdeal::new(&r, vec![x.clone()]), &PolyIdeal::new(&r, vec![y.clone()]));
        assert!(ideal_equal(&i, &PolyIdeal::new(&r, vec![r.mul(&x, &y)])));
        let a = PolyIdeal::new(&r, vec![x.clone(), r.pow(&y, 2)]);
        let i = ideal_intersect(&a, &PolyIdeal::new(&r, vec![x.clone(), y.clone()]));
        assert!(ideal_equal(&i, &a));
        let xy = r.add(&x, &y);
        let i = ideal_intersect(&PolyIdeal::new(&r, vec![xy.clone()]), &PolyIdeal::new(&r, vec![x.clone()]));
        assert!(ideal_equal(&i, &PolyIdeal::new(&r, vec![r.mul(&xy, &x)])));
    }

    #[test]
    fn colength_and_dimension_examples() {
        let r = qring(2);
        let (x, y) = (r.var(0), r.var(1));
        assert_eq!(colength(&PolyIdeal::new(&r, vec![r.pow(&x, 2), r.pow(&y, 3)])), Some(6));
        assert_eq!(colength(&PolyIdeal::new(&r, vec![r.sub(&x, &y), r.pow(&y, 2)])), Some(2));
        assert_eq!(colength(&PolyIdeal::new(&r, vec![x.clone()])), None);
        assert_eq!(ideal_dimension(&PolyIdeal::new(&r, vec![r.pow(&x, 2), r.mul(&x, &y)])).unwrap(), 1);
        assert_eq!(ideal_dimension(&PolyIdeal::new(&r, vec![r.add(&x, &y)])).unwrap(), 1);
        assert_eq!(ideal_dimension(&PolyIdeal::new(&r, vec![x.clone(), y.clone()])).unwrap(), 0);
        assert!(ideal_dimension(&PolyIdeal::new(&r, vec![r.one()])).is_err());
    }

    #[test]
    fn colon_by_element_matches_intersection() {
        let r = qring(3);
        let (x, y, z) = (r.var(0), r.var(1), r.var(2));
        let k = PolyIdeal::new(&r, vec![r.mul(&x, &y), r.pow(&z, 2), r.mul(&x, &z)]);
        let f = r.add(&x, &z);
        let colon = quotient_by_element(&k, &f).unwrap();
        // (K ∩ (f)) / f
        let meet = ideal_intersect(&k, &PolyIdeal::new(&r, vec![f.clone()]));
        let divided = PolyIdeal::new(&r, meet.gens().iter().map(|g| r.divide_exact(g, &f).unwrap()).collect());
        assert!(ideal_equal(&colon, &divided));
        // Monomial case agrees with the combinatorial colon.
        let m = MonomialIdeal::from_exponents(3, &[vec![2, 0, 0], vec![1, 1, 0]]).unwrap();
        let c = quotient_by_element(&PolyIdeal::from_monomial_ideal(&r, &m), &x).unwrap();
        let expect = m.colon_monomial(&Monomial::var(3, 0));
        assert!(ideal_equal(&c, &PolyIdeal::from_monomial_ideal(&r, &expect)));
        let _ = y;
    }

    #[test]
    fn variable_saturation_matches_monomial_saturation() {
        let r = qring(2);
        let m = MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![1, 1]]).unwrap();
        let k = PolyIdeal::from_monomial_ideal(&r, &m);
        let s = saturate_by_monomial_ideal(&k, &MonomialIdeal::maximal(2)).unwrap();
        let expect = m.saturate(&MonomialIdeal::maximal(2)).unwrap();
        assert!(ideal_equal(&s, &PolyIdeal::from_monomial_ideal(&r, &expect)));
        // (x^2 + xy) : x^∞ = (x + y)
        let f = r.add(&r.pow(&r.var(0), 2), &r.mul(&r.var(0), &r.var(1)));
        let s = saturate_by_variable(&PolyIdeal::new(&r, vec![f]), 0).unwrap();
        assert!(ideal_equal(&s, &PolyIdeal::new(&r, vec![r.add(&r.var(0), &r.var(1))])));
    }

    #[test]
    fn truncated_basis_decides_low_degrees() {
        let r = PolyRing::grevlex(VariableSet::standard(3), PrimeField::default());
        let (x, y, z) = (r.var(0), r.var(1), r.var(2));
        let gens = vec![r.add(&x, &y), r.add(&r.mul(&y, &y), &r.mul(&x, &z))];
        let full = buchberger(&r, &gens);
        let trunc = buchberger_truncated(&r, &gens, 3);
        for m in (0..=3).flat_map(|d| crate::monomial::monomials_of_degree(3, d)) {
            let f = r.monomial(m);
            assert_eq!(full.contains(&f), trunc.contains(&f));
        }
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

    fn arb_homogeneous(n: usize, deg: u32) -> impl Strategy<Value = Vec<i64>> {
        let count = crate::monomial::monomials_of_degree(n, deg).len();
        prop::collection::vec(-3i64..4, count)
    }

    fn homog(r: &PolyRing<PrimeField>, deg: u32, coeffs: &[i64]) -> Poly<PrimeField> {
        let ms = crate::monomial::monomials_of_degree(r.nvars(), deg);
        r.from_terms(ms.into_iter().zip(coeffs).map(|(m, &c)| (m, r.field().from_i64(c))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn monomial_oracle(q in arb_m_primary(3)) {
            let r = qring(3);
            let i = PolyIdeal::from_monomial_ideal(&r, &q);
            prop_assert_eq!(i.basis().lead_ideal(), q.clone());
            let bfs = MonomialIdeal::unit(3).count_quotient_length(&q, &MonomialIdeal::zero(3), 1_000_000).unwrap();
            prop_assert_eq!(colength(&i), Some(bfs));
        }

        #[test]
        fn homogeneous_bases(a in arb_homogeneous(3, 2), b in arb_homogeneous(3, 2), c in arb_homogeneous(3, 1)) {
            let r = PolyRing::grevlex(VariableSet::standard(3), PrimeField::default());
            let gens = vec![homog(&r, 2, &a), homog(&r, 2, &b), homog(&r, 1, &c)];
            let gb = buchberger(&r, &gens);
            prop_assert!(gb.elements().iter().all(|g| r.is_homogeneous(g)));
            prop_assert!(s_pairs_reduce(&r, gb.elements()));
            // Random combinations of the generators reduce to zero.
            let combo = r.add(&r.mul(&gens[0], &r.var(1)), &r.mul(&gens[2], &r.mul(&r.var(0), &r.var(2))));
            prop_assert!(gb.contains(&combo));
            // Permuted input gives the identical reduced basis.
            let rev: Vec<_> = gens.iter().rev().cloned().collect();
            let again = buchberger(&r, &rev);
            prop_assert_eq!(again.elements(), gb.elements());
        }

        #[test]
        fn intersection_is_contained(a in arb_homogeneous(2, 2), b in arb_homogeneous(2, 1)) {
            let r = PolyRing::grevlex(VariableSet::standard(2), PrimeField::default());
            let i = PolyIdeal::new(&r, vec![homog(&r, 2, &a), r.pow(&r.var(1), 3)]);
            let j = PolyIdeal::new(&r, vec![homog(&r, 1, &b), r.pow(&r.var(0), 2)]);
            let m = ideal_intersect(&i, &j);
            prop_assert!(m.is_subset_of(&i) && m.is_subset_of(&j));
            prop_assert!(ideal_equal(&ideal_intersect(&i, &i), &i));
        }
    }
}
