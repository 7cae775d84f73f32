//! Sparse multivariate polynomials over an exact [`Field`].

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, TermOrder, VariableSet};

/// A polynomial in canonical form: terms strictly decreasing under the
/// owning ring's order, no zero coefficients. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<E> {
    terms: Vec<(Monomial, E)>,
}

pub type Poly<F> = Polynomial<<F as Field>::Elem>;

impl<E> Polynomial<E> {
    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, E)> {
        self.terms.first()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|t| &t.0)
    }

    pub fn into_terms(self) -> Vec<(Monomial, E)> {
        self.terms
    }
}

/// A polynomial ring: variables, coefficient field and the active term order.
#[derive(Debug, Clone)]
pub struct PolyRing<F: Field> {
    vars: VariableSet,
    field: F,
    order: TermOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(vars: VariableSet, field: F, order: TermOrder) -> Self {
        if let TermOrder::WeightedGrevLex(w) = &order {
            assert_eq!(w.len(), vars.len(), "one weight per variable");
            assert!(w.iter().all(|&x| x > 0), "weights must be positive");
        }
        PolyRing { vars, field, order }
    }

    pub fn grevlex(vars: VariableSet, field: F) -> Self {
        PolyRing::new(vars, field, TermOrder::GrevLex)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Same variables and field, different order.
    pub fn with_order(&self, order: TermOrder) -> Self {
        PolyRing::new(self.vars.clone(), self.field.clone(), order)
    }

    pub fn zero(&self) -> Poly<F> {
        Polynomial { terms: Vec::new() }
    }

    pub fn one(&self) -> Poly<F> {
        self.term(Monomial::one(self.nvars()), self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn term(&self, m: Monomial, c: F::Elem) -> Poly<F> {
        debug_assert_eq!(m.nvars(), self.nvars());
        if self.field.is_zero(&c) {
            self.zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    pub fn monomial(&self, m: Monomial) -> Poly<F> {
        self.term(m, self.field.one())
    }

    pub fn var(&self, i: usize) -> Poly<F> {
        self.monomial(Monomial::var(self.nvars(), i))
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges repeated
    /// monomials and drops zeros.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Poly<F> {
        let mut terms: Vec<(Monomial, F::Elem)> = terms.into_iter().collect();
        let order = &self.order;
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut out: Vec<(Monomial, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), self.nvars());
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        Polynomial { terms: out }
    }

    /// Checked variant of [`PolyRing::from_terms`] for external input.
    pub fn try_from_terms(&self, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Result<Poly<F>> {
        let terms: Vec<_> = terms.into_iter().collect();
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.nvars() != self.nvars()) {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: m.nvars() });
        }
        Ok(self.from_terms(terms))
    }

    fn merge(&self, f: &Poly<F>, g: &Poly<F>, negate_g: bool) -> Poly<F> {
        let (a, b) = (&f.terms, &g.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let conv = |c: &F::Elem| if negate_g { self.field.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match self.order.compare(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), conv(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_g {
                        self.field.sub(&a[i].1, &b[j].1)
                    } else {
                        self.field.add(&a[i].1, &b[j].1)
                    };
                    if !self.field.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), conv(c))));
        Polynomial { terms: out }
    }

    pub fn add(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        self.merge(f, g, false)
    }

    pub fn sub(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        self.merge(f, g, true)
    }

    pub fn neg(&self, f: &Poly<F>) -> Poly<F> {
        Polynomial { terms: f.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect() }
    }

    pub fn scale(&self, f: &Poly<F>, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return self.zero();
        }
        Polynomial { terms: f.terms.iter().map(|(m, a)| (m.clone(), self.field.mul(a, c))).collect() }
    }

    /// `c * m * f`. Term order is multiplicative, so no re-sorting is needed.
    pub fn mul_term(&self, f: &Poly<F>, m: &Monomial, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return self.zero();
        }
        Polynomial {
            terms: f.terms.iter().map(|(fm, a)| (fm.mul(m), self.field.mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, f: &Poly<F>, m: &Monomial) -> Poly<F> {
        Polynomial { terms: f.terms.iter().map(|(fm, a)| (fm.mul(m), a.clone())).collect() }
    }

    pub fn mul(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        if f.is_zero() || g.is_zero() {
            return self.zero();
        }
        if g.len() == 1 {
            let (m, c) = &g.terms[0];
            return self.mul_term(f, m, c);
        }
        if f.len() == 1 {
            let (m, c) = &f.terms[0];
            return self.mul_term(g, m, c);
        }
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(f.len() * g.len());
        for (a, ca) in &f.terms {
            for (b, cb) in &g.terms {
                let prod = self.field.mul(ca, cb);
                acc.entry(a.mul(b))
                    .and_modify(|c| *c = self.field.add(c, &prod))
                    .or_insert(prod);
            }
        }
        self.from_terms(acc)
    }

    pub fn pow(&self, f: &Poly<F>, n: u32) -> Poly<F> {
        let mut result = self.one();
        for _ in 0..n {
            result = self.mul(&result, f);
        }
        result
    }

    /// `f - c * m * g`, the elementary reduction step.
    pub fn sub_mul_term(&self, f: &Poly<F>, c: &F::Elem, m: &Monomial, g: &Poly<F>) -> Poly<F> {
        let (a, b) = (&f.terms, &g.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut cur: Option<Monomial> = b.first().map(|t| t.0.mul(m));
        while i < a.len() {
            let Some(gm) = cur.as_ref() else { break };
            match self.order.compare(&a[i].0, gm) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let coef = self.field.neg(&self.field.mul(c, &b[j].1));
                    out.push((cur.take().unwrap(), coef));
                    j += 1;
                    cur = b.get(j).map(|t| t.0.mul(m));
                }
                Ordering::Equal => {
                    let coef = self.field.sub(&a[i].1, &self.field.mul(c, &b[j].1));
                    if !self.field.is_zero(&coef) {
                        out.push((a[i].0.clone(), coef));
                    }
                    i += 1;
                    j += 1;
                    cur = b.get(j).map(|t| t.0.mul(m));
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        if let Some(gm) = cur {
            out.push((gm, self.field.neg(&self.field.mul(c, &b[j].1))));
            for t in &b[j + 1..] {
                out.push((t.0.mul(m), self.field.neg(&self.field.mul(c, &t.1))));
            }
        }
        Polynomial { terms: out }
    }

    /// Wraps terms already in canonical order.
    pub(crate) fn from_sorted_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> Poly<F> {
        debug_assert!(terms.windows(2).all(|w| self.order.compare(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial { terms }
    }

    /// Applies `f - c * m * g` to the terms of `f` from index `start` on,
    /// leaving the canonical prefix untouched.
    pub(crate) fn sub_mul_term_from(
        &self,
        f: &mut Vec<(Monomial, F::Elem)>,
        start: usize,
        c: &F::Elem,
        m: &Monomial,
        g: &Poly<F>,
    ) {
        let suffix = Polynomial { terms: f.split_off(start) };
        f.extend(self.sub_mul_term(&suffix, c, m, g).terms);
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, f: &Poly<F>) -> Poly<F> {
        match f.lead() {
            None => self.zero(),
            Some((_, c)) if self.field.is_one(c) => f.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c);
                self.scale(f, &inv)
            }
        }
    }

    /// Largest degree of a term under the order's grading.
    pub fn degree(&self, f: &Poly<F>) -> Option<u32> {
        f.terms.iter().map(|(m, _)| self.order.degree(m)).max()
    }

    /// Homogeneous with respect to the order's grading (zero counts as homogeneous).
    pub fn is_homogeneous(&self, f: &Poly<F>) -> bool {
        let mut degs = f.terms.iter().map(|(m, _)| self.order.degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_monomial(&self, f: &Poly<F>) -> bool {
        f.len() == 1
    }

    pub fn evaluate(&self, f: &Poly<F>, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars());
        let mut acc = self.field.zero();
        for (m, c) in &f.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    v = self.field.mul(&v, x);
                }
            }
            acc = self.field.add(&acc, &v);
        }
        acc
    }

    /// Moves `f` into `target` by rewriting each monomial with `map`.
    pub fn remap(&self, f: &Poly<F>, target: &PolyRing<F>, map: impl Fn(&Monomial) -> Monomial) -> Poly<F> {
        target.from_terms(f.terms.iter().map(|(m, c)| (map(m), c.clone())))
    }

    /// Same variables, re-sorted for `target`'s order.
    pub fn convert(&self, f: &Poly<F>, target: &PolyRing<F>) -> Poly<F> {
        debug_assert_eq!(self.nvars(), target.nvars());
        self.remap(f, target, |m| m.clone())
    }

    /// Ring homomorphism sending variable `i` to `images[i]` (polynomials of `target`).
    pub fn substitute(&self, f: &Poly<F>, target: &PolyRing<F>, images: &[Poly<F>]) -> Poly<F> {
        assert_eq!(images.len(), self.nvars());
        let mut powers: Vec<Vec<Poly<F>>> = images.iter().map(|g| vec![target.one(), g.clone()]).collect();
        let mut acc = target.zero();
        for (m, c) in &f.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = target.mul(powers[i].last().unwrap(), &images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = target.mul(&t, &powers[i][e as usize]);
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// `f / g` when `g` divides `f` exactly.
    pub fn divide_exact(&self, f: &Poly<F>, g: &Poly<F>) -> Option<Poly<F>> {
        let (gm, gc) = g.lead()?;
        let ginv = self.field.inv(gc);
        let mut rem = f.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.lead().cloned() {
            let q = gm.quotient_of(&m)?;
            let qc = self.field.mul(&c, &ginv);
            rem = self.sub_mul_term(&rem, &qc, &q, g);
            quotient.push((q, qc));
        }
        Some(Polynomial { terms: quotient })
    }

    pub fn format(&self, f: &Poly<F>) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in f.terms.iter().enumerate() {
            let mut coef = self.field.format(c);
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = m.display(&self.vars).to_string();
            if m.is_one() {
                s.push_str(&coef);
            } else if coef == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&coef);
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}
