//! The line-oriented problem format.
//!
//! ```text
//! # comment
//! field Fp 32003
//! ring x y z
//! ideal J = x, y, z
//! ideal I = x, y
//! module H = 0
//! type 1;2
//! seed 7
//! ```
//!
//! `window`, `offset` and `command` lines are accepted as defaults for the
//! corresponding flags.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use mixmult_core::bhattacharya::MixedType;
use mixmult_core::field::{format_rational, CoefficientField, Field, DEFAULT_PRIME};
use mixmult_core::monomial::{Monomial, VariableSet};
use mixmult_core::monomial_ideal::MonomialIdeal;
use mixmult_core::poly::{Poly, PolyRing};
use mixmult_core::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A generator as a sum of rational multiples of exponent vectors, with
/// like terms merged, zero terms dropped, and terms in descending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub terms: Vec<(BigRational, Vec<u32>)>,
}

impl Generator {
    pub fn new(terms: impl IntoIterator<Item = (BigRational, Vec<u32>)>) -> Self {
        let mut terms: Vec<(BigRational, Vec<u32>)> = terms.into_iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.1.iter().sum();
            let db: u32 = b.1.iter().sum();
            db.cmp(&da).then_with(|| b.1.cmp(&a.1))
        });
        let mut merged: Vec<(BigRational, Vec<u32>)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match merged.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        Generator { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_monomial(&self) -> Option<Monomial> {
        match self.terms.as_slice() {
            [(_, e)] => Some(Monomial::new(e.iter().copied())),
            _ => None,
        }
    }

    pub fn to_poly<F: Field>(&self, ring: &PolyRing<F>) -> Result<Poly<F>> {
        let field = ring.field();
        let terms = self
            .terms
            .iter()
            .map(|(c, e)| Ok((Monomial::new(e.iter().copied()), field.from_rational(c)?)))
            .collect::<Result<Vec<_>>>()?;
        ring.try_from_terms(terms)
    }

    pub fn format(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (c, e)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let factors: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(&p, _)| p > 0)
                .map(|(&p, v)| if p == 1 { v.clone() } else { format!("{v}^{p}") })
                .collect();
            if factors.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDecl {
    pub name: String,
    pub gens: Vec<Generator>,
}

/// A type vector: `k1,..,ks;k0+1` for the J-slot commands, or a plain
/// tally `k1,..,ks` for the m-primary command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeSpec {
    Mixed(MixedType),
    Tally(Vec<u32>),
}

impl FromStr for TypeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains(';') {
            return Ok(TypeSpec::Mixed(s.parse()?));
        }
        s.split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(TypeSpec::Tally)
            .map_err(|_| Error::InvalidArgument(format!("malformed type '{s}'")))
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeSpec::Mixed(t) => write!(f, "{t}"),
            TypeSpec::Tally(k) => {
                let ks: Vec<String> = k.iter().map(u32::to_string).collect();
                write!(f, "{}", ks.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub field: CoefficientField,
    pub vars: Vec<String>,
    pub ideals: Vec<IdealDecl>,
    pub module_name: String,
    /// Monomial generators of `H`; empty means `H = 0`.
    pub module: Vec<Vec<u32>>,
    pub command: Option<String>,
    pub mixed_type: Option<TypeSpec>,
    pub seed: Option<u64>,
    pub window: Option<u32>,
    pub offset: Option<u32>,
}

pub const J_NAME: &str = "J";

impl ProblemSpec {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> Result<VariableSet> {
        VariableSet::new(self.vars.iter().cloned())
    }

    pub fn ideal(&self, name: &str) -> Result<&IdealDecl> {
        self.ideals
            .iter()
            .find(|i| i.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no ideal named {name}")))
    }

    pub fn monomial_ideal(&self, name: &str) -> Result<MonomialIdeal> {
        to_monomial_ideal(self.nvars(), self.ideal(name)?)
    }

    /// `J`, then every other ideal in declaration order.
    pub fn j_and_i_list(&self) -> Result<(MonomialIdeal, Vec<MonomialIdeal>)> {
        let j = self.monomial_ideal(J_NAME)?;
        let i_list = self
            .ideals
            .iter()
            .filter(|i| i.name != J_NAME)
            .map(|i| to_monomial_ideal(self.nvars(), i))
            .collect::<Result<Vec<_>>>()?;
        Ok((j, i_list))
    }

    /// Names of the `I_i`, in slot order.
    pub fn i_names(&self) -> Vec<&str> {
        self.ideals.iter().filter(|i| i.name != J_NAME).map(|i| i.name.as_str()).collect()
    }

    pub fn all_monomial_ideals(&self) -> Result<Vec<MonomialIdeal>> {
        self.ideals.iter().map(|i| to_monomial_ideal(self.nvars(), i)).collect()
    }

    pub fn module_ideal(&self) -> Result<MonomialIdeal> {
        if self.module.is_empty() {
            Ok(MonomialIdeal::zero(self.nvars()))
        } else {
            MonomialIdeal::from_exponents(self.nvars(), &self.module)
        }
    }

    /// Canonical text; `parse_input(&spec.serialize())` returns `spec`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        match self.field {
            CoefficientField::Rationals => out.push_str("field Q\n"),
            CoefficientField::Prime { p } => out.push_str(&format!("field Fp {p}\n")),
        }
        out.push_str(&format!("ring {}\n", self.vars.join(" ")));
        for i in &self.ideals {
            let gens: Vec<String> = i.gens.iter().map(|g| g.format(&self.vars)).collect();
            let rhs = if gens.is_empty() { "0".to_string() } else { gens.join(", ") };
            out.push_str(&format!("ideal {} = {}\n", i.name, rhs));
        }
        let module: Vec<String> = self
            .module
            .iter()
            .map(|e| Generator::new([(BigRational::one(), e.clone())]).format(&self.vars))
            .collect();
        let rhs = if module.is_empty() { "0".to_string() } else { module.join(", ") };
        out.push_str(&format!("module {} = {}\n", self.module_name, rhs));
        if let Some(t) = &self.mixed_type {
            out.push_str(&format!("type {t}\n"));
        }
        if let Some(s) = self.seed {
            out.push_str(&format!("seed {s}\n"));
        }
        if let Some(w) = self.window {
            out.push_str(&format!("window {w}\n"));
        }
        if let Some(n) = self.offset {
            out.push_str(&format!("offset {n}\n"));
        }
        if let Some(c) = &self.command {
            out.push_str(&format!("command {c}\n"));
        }
        out
    }
}

fn to_monomial_ideal(nvars: usize, decl: &IdealDecl) -> Result<MonomialIdeal> {
    let gens = decl
        .gens
        .iter()
        .map(|g| {
            g.as_monomial().ok_or_else(|| {
                Error::UnsupportedInput(format!("ideal {} has a non-monomial generator; a monomial ideal is required", decl.name))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonomialIdeal::from_gens(nvars, gens))
}

pub const COMMANDS: &[&str] =
    &["mixed-mult", "multiplicity", "superficial", "joint-reduction", "verify", "verify-rees", "fuzz"];

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, at: &str, message: impl Into<String>) -> ParseError {
        // `at` is always a subslice of the line.
        let column = at.as_ptr() as usize - self.text.as_ptr() as usize + 1;
        ParseError { line: self.number, column, message: message.into() }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits off the first whitespace-delimited word.
fn word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    let end = s.find(char::is_whitespace).unwrap_or(s.len());
    (&s[..end], &s[end..])
}

pub fn parse_input(text: &str) -> std::result::Result<ProblemSpec, ParseError> {
    let mut field = None;
    let mut vars: Option<Vec<String>> = None;
    let mut ideals: Vec<IdealDecl> = Vec::new();
    let mut module: Option<(String, Vec<Vec<u32>>)> = None;
    let mut spec_extra = (None, None, None, None, None);
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let line = Line { number: idx + 1, text: raw };
        let (keyword, rest) = word(body);
        if keyword.is_empty() {
            continue;
        }
        match keyword {
            "field" => {
                if field.is_some() {
                    return Err(line.err(keyword, "field declared twice"));
                }
                let (kind, tail) = word(rest);
                field = Some(match kind {
                    "Q" => {
                        if !tail.trim().is_empty() {
                            return Err(line.err(tail.trim(), "unexpected text after 'field Q'"));
                        }
                        CoefficientField::Rationals
                    }
                    "Fp" => {
                        let (p, tail) = word(tail);
                        if !tail.trim().is_empty() {
                            return Err(line.err(tail.trim(), "unexpected text after modulus"));
                        }
                        let value: u32 = p.parse().map_err(|_| line.err(p, format!("invalid modulus '{p}'")))?;
                        if value >= 1 << 31 {
                            return Err(line.err(p, format!("modulus {value} is too large")));
                        }
                        CoefficientField::prime(value).map_err(|_| line.err(p, format!("modulus {value} is not prime")))?
                    }
                    _ => return Err(line.err(if kind.is_empty() { keyword } else { kind }, "expected 'Q' or 'Fp <prime>'")),
                });
            }
            "ring" => {
                if vars.is_some() {
                    return Err(line.err(keyword, "ring declared twice"));
                }
                if !ideals.is_empty() || module.is_some() {
                    return Err(line.err(keyword, "ring must precede ideals"));
                }
                let mut names: Vec<String> = Vec::new();
                for v in rest.split_whitespace() {
                    if !is_identifier(v) {
                        return Err(line.err(v, format!("invalid variable name '{v}'")));
                    }
                    if names.iter().any(|n| n == v) {
                        return Err(line.err(v, format!("variable {v} declared twice")));
                    }
                    names.push(v.to_string());
                }
                if names.is_empty() {
                    return Err(line.err(keyword, "a ring needs at least one variable"));
                }
                vars = Some(names);
            }
            "ideal" | "module" => {
                let names = vars.as_ref().ok_or_else(|| line.err(keyword, "ring must be declared first"))?;
                let (name, rhs) = rest.split_once('=').ok_or_else(|| line.err(keyword, "expected '<Name> = ...'"))?;
                let name = name.trim();
                if !is_identifier(name) {
                    return Err(line.err(if name.is_empty() { keyword } else { name }, format!("invalid name '{name}'")));
                }
                let gens = parse_generators(&line, rhs, names)?;
                if keyword == "ideal" {
                    if ideals.iter().any(|i| i.name == name) || module.as_ref().is_some_and(|m| m.0 == name) {
                        return Err(line.err(name, format!("{name} declared twice")));
                    }
                    ideals.push(IdealDecl { name: name.to_string(), gens });
                } else {
                    if module.is_some() {
                        return Err(line.err(keyword, "module declared twice"));
                    }
                    if ideals.iter().any(|i| i.name == name) {
                        return Err(line.err(name, format!("{name} declared twice")));
                    }
                    let mut exps = Vec::new();
                    for (g, at) in gens.iter().zip(generator_spans(rhs)) {
                        match g.terms.as_slice() {
                            [(_, e)] => exps.push(e.clone()),
                            _ => return Err(line.err(at, "module generators must be monomials")),
                        }
                    }
                    module = Some((name.to_string(), exps));
                }
            }
            "type" => {
                let t = rest.trim();
                spec_extra.0 = Some(t.parse::<TypeSpec>().map_err(|e| line.err(t, e.to_string()))?);
            }
            "seed" | "window" | "offset" => {
                let (v, tail) = word(rest);
                if v.is_empty() {
                    return Err(line.err(keyword, format!("{keyword} needs a value")));
                }
                if !tail.trim().is_empty() {
                    return Err(line.err(tail.trim(), "unexpected text"));
                }
                match keyword {
                    "seed" => spec_extra.1 = Some(v.parse::<u64>().map_err(|_| line.err(v, "invalid seed"))?),
                    "window" => spec_extra.2 = Some(v.parse::<u32>().map_err(|_| line.err(v, "invalid window"))?),
                    _ => spec_extra.3 = Some(v.parse::<u32>().map_err(|_| line.err(v, "invalid offset"))?),
                }
            }
            "command" => {
                let (c, _) = word(rest);
                if !COMMANDS.contains(&c) {
                    return Err(line.err(if c.is_empty() { keyword } else { c }, format!("unknown command '{c}'")));
                }
                spec_extra.4 = Some(c.to_string());
            }
            other => return Err(line.err(other, format!("unknown directive '{other}'"))),
        }
    }
    let vars = vars.ok_or(ParseError { line: 0, column: 0, message: "missing ring declaration".into() })?;
    let (module_name, module) = module.unwrap_or_else(|| ("H".to_string(), Vec::new()));
    let (mixed_type, seed, window, offset, command) = spec_extra;
    Ok(ProblemSpec {
        field: field.unwrap_or(CoefficientField::Prime { p: DEFAULT_PRIME }),
        vars,
        ideals,
        module_name,
        module,
        command,
        mixed_type,
        seed,
        window,
        offset,
    })
}

/// Comma-separated pieces of `rhs`, trimmed, as subslices.
fn generator_spans(rhs: &str) -> Vec<&str> {
    rhs.split(',').map(str::trim).collect()
}

fn parse_generators(line: &Line<'_>, rhs: &str, vars: &[String]) -> std::result::Result<Vec<Generator>, ParseError> {
    let pieces = generator_spans(rhs);
    if pieces.len() == 1 && pieces[0] == "0" {
        return Ok(Vec::new());
    }
    let mut gens = Vec::new();
    for piece in pieces {
        if piece.is_empty() {
            return Err(line.err(rhs, "empty generator"));
        }
        let g = parse_polynomial(line, piece, vars)?;
        if g.is_zero() {
            return Err(line.err(piece, "zero generator"));
        }
        gens.push(g);
    }
    Ok(gens)
}

fn parse_polynomial(line: &Line<'_>, text: &str, vars: &[String]) -> std::result::Result<Generator, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        let mut sign = BigRational::one();
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        } else if !first {
            return Err(line.err(&text[pos..], "expected '+' or '-'"));
        }
        first = false;
        let mut coef = sign;
        let mut exps = vec![0u32; vars.len()];
        loop {
            skip_ws(&mut pos);
            let start = pos;
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let mut value = BigRational::from_integer(text[start..pos].parse::<BigInt>().unwrap());
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b'/' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let dstart = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if dstart == pos {
                        return Err(line.err(&text[dstart..], "expected a denominator"));
                    }
                    let den = text[dstart..pos].parse::<BigInt>().unwrap();
                    if den.is_zero() {
                        return Err(line.err(&text[dstart..pos], "zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                coef *= value;
            } else if pos < bytes.len() && (bytes[pos].is_ascii_alphabetic() || bytes[pos] == b'_') {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                let name = &text[start..pos];
                let v = vars
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| line.err(name, format!("undeclared variable '{name}'")))?;
                skip_ws(&mut pos);
                let mut power = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let pstart = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    power = text[pstart..pos]
                        .parse()
                        .map_err(|_| line.err(&text[pstart..], "expected an exponent"))?;
                }
                exps[v] += power;
            } else {
                let at = if pos < bytes.len() { &text[pos..] } else { text };
                return Err(line.err(at, "expected a number or a variable"));
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            } else {
                break;
            }
        }
        terms.push((coef, exps));
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
    }
    Ok(Generator::new(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
# two ideals in three variables
field Fp 32003
ring x y z
ideal J = x, y, z
ideal I = x, y
module H = 0
type 1;2
seed 7
";

    #[test]
    fn parses_example() {
        let spec = parse_input(EXAMPLE).unwrap();
        assert_eq!(spec.nvars(), 3);
        assert_eq!(spec.i_names(), vec!["I"]);
        assert_eq!(spec.module_ideal().unwrap().dim_quotient().unwrap(), 3);
        assert_eq!(spec.mixed_type, Some(TypeSpec::Mixed(MixedType::new(vec![1], 2).unwrap())));
        assert_eq!(spec.seed, Some(7));
        assert_eq!(parse_input(&spec.serialize()).unwrap(), spec);
    }

    #[test]
    fn rejects_bad_input() {
        let e = parse_input("field Fp 6\nring x\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        assert!(e.message.contains("not prime"));
        let e = parse_input("ring x y z\nideal J = x, w\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 14));
        assert!(e.message.contains("undeclared"));
        assert!(parse_input("ring x\nideal J = x +\n").is_err());
        assert!(parse_input("ring x y\nmodule H = x + y\n").is_err());
        assert!(parse_input("ideal J = x\n").is_err());
        assert!(parse_input("ring x\nfrobnicate\n").is_err());
    }

    #[test]
    fn polynomials_are_canonical() {
        let spec = parse_input("field Q\nring x y\nideal K = y^2 + 2*x*y - 1/2*x^2 + x*y\n").unwrap();
        let g = &spec.ideal("K").unwrap().gens[0];
        assert_eq!(g.format(&spec.vars), "-1/2*x^2 + 3*x*y + y^2");
        assert!(spec.monomial_ideal("K").is_err());
        let spec = parse_input("ring x y\nideal J = x^2*y, y * x ^ 2, 3*y\n").unwrap();
        assert_eq!(spec.monomial_ideal("J").unwrap().gens().len(), 1);
    }
}
