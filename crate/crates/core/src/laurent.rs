//! Laurent polynomials over the valued field and over the complex residue
//! field: supports, weights, reductions, initial forms and monic
//! normalization.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dot_int_rat, IntMatrix, PhaseVec, PolarC, Rat};
use crate::series::{Section, Series};

pub type Exponent = Vec<i64>;

fn default_vars(n: usize) -> Vec<String> {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    if n <= 3 {
        NAMES[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// Laurent polynomial with coefficients in the valued field.
#[derive(Clone, PartialEq)]
pub struct KPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponent, Series>,
}

/// Laurent polynomial with complex coefficients.
#[derive(Clone, PartialEq)]
pub struct CPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponent, PolarC>,
}

impl KPoly {
    pub fn new(nvars: usize) -> KPoly {
        KPoly { vars: default_vars(nvars), terms: BTreeMap::new() }
    }

    pub fn with_vars(vars: Vec<String>) -> KPoly {
        KPoly { vars, terms: BTreeMap::new() }
    }

    /// Adds `c·x^m`, merging with an existing term.
    pub fn add_term(&mut self, m: Exponent, c: Series) {
        assert_eq!(m.len(), self.vars.len(), "exponent length");
        let merged = match self.terms.remove(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(m, merged);
        }
    }

    pub fn term(mut self, m: &[i64], c: Series) -> KPoly {
        self.add_term(m.to_vec(), c);
        self
    }

    /// Shorthand for a term `c·t^γ·x^m`.
    pub fn mono(self, m: &[i64], gamma: Rat, c: PolarC) -> KPoly {
        self.term(m, Series::monomial(gamma, c))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Series> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponents with the valuations of their coefficients.
    pub fn weighted_support(&self) -> Vec<(Exponent, Rat)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.valuation().expect("nonzero coefficient")))
            .collect()
    }

    /// `min_m ν(c_m) + ⟨m, w⟩`.
    pub fn trop_value(&self, w: &[Rat]) -> Option<Rat> {
        self.weighted_support()
            .into_iter()
            .map(|(m, v)| &v + &dot_int_rat(&m, w))
            .min()
    }

    /// Evaluation at a point of the torus over the valued field.
    pub fn eval(&self, x: &[Series], max_order: &Rat) -> Result<Series> {
        let mut acc = Series::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                if e != 0 {
                    t = t.mul(&xi.pow(e, max_order)?);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl CPoly {
    pub fn new(nvars: usize) -> CPoly {
        CPoly { vars: default_vars(nvars), terms: BTreeMap::new() }
    }

    pub fn with_vars(vars: Vec<String>) -> CPoly {
        CPoly { vars, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: Exponent, c: PolarC) {
        assert_eq!(m.len(), self.vars.len(), "exponent length");
        let merged = match self.terms.remove(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(m, merged);
        }
    }

    pub fn term(mut self, m: &[i64], c: PolarC) -> CPoly {
        self.add_term(m.to_vec(), c);
        self
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, PolarC> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// The same polynomial with constant series coefficients.
    pub fn to_kpoly(&self) -> KPoly {
        KPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), Series::constant(c.clone()))).collect(),
        }
    }

    pub fn scale(&self, c: &PolarC) -> CPoly {
        CPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
        }
    }

    /// Substitutes `x_j ↦ c_j·x_j`.
    pub fn scale_vars(&self, c: &[PolarC]) -> CPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| {
                let f = m.iter().zip(c).fold(a.clone(), |acc, (&e, cj)| acc.mul(&cj.pow(e)));
                (m.clone(), f)
            })
            .collect();
        CPoly { vars: self.vars.clone(), terms }
    }

    /// Divides by the coefficient of the lexicographically least exponent, so
    /// that polynomials equal up to a scalar become equal.
    pub fn normalized(&self) -> CPoly {
        match self.terms.values().next() {
            Some(c) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }

    /// Equality up to a nonzero scalar.
    pub fn eq_up_to_scalar(&self, o: &CPoly) -> bool {
        self.normalized() == o.normalized()
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().zip(z).fold(c.to_complex(), |acc, (&e, zi)| acc * zi.powi(e as i32))
            })
            .sum()
    }
}

/// Exponents minimizing `ν(c_m) + ⟨m, w⟩`, sorted.
pub fn argmin_support(f: &KPoly, w: &[Rat]) -> Vec<Exponent> {
    argmin_weighted(&f.weighted_support(), w)
}

pub(crate) fn argmin_weighted(support: &[(Exponent, Rat)], w: &[Rat]) -> Vec<Exponent> {
    let vals: Vec<Rat> = support.iter().map(|(m, v)| v + &dot_int_rat(m, w)).collect();
    let Some(best) = vals.iter().min() else {
        return Vec::new();
    };
    let mut out: Vec<Exponent> = support
        .iter()
        .zip(&vals)
        .filter(|(_, v)| *v == best)
        .map(|((m, _), _)| m.clone())
        .collect();
    out.sort();
    out
}

/// Whether `w` lies on the tropical hypersurface of `f`.
pub fn is_in_trop(f: &KPoly, w: &[Rat]) -> bool {
    argmin_support(f, w).len() >= 2
}

/// The reduction of `f` at `w` with respect to the section `s`.
///
/// The coefficient of `ξ^m` for `m` of minimal weight is the leading
/// coefficient of `c_m` times `α(-ν(c_m))`, where `α` relates `s` to the
/// canonical section.
pub fn tropical_reduction(f: &KPoly, w: &[Rat], s: &Section) -> Result<CPoly> {
    if w.len() != f.nvars() {
        return Err(Error::Dimension { expected: f.nvars(), got: w.len() });
    }
    let mut g = CPoly::with_vars(f.vars.clone());
    for m in argmin_support(f, w) {
        let c = &f.terms[&m];
        let v = c.valuation().expect("nonzero");
        let lc = c.leading_coeff().expect("nonzero");
        g.add_term(m, lc.mul(&s.alpha_at(&-v)?));
    }
    Ok(g)
}

/// Terms of `g` whose exponents minimize `⟨m, w⟩`.
pub fn initial_form(g: &CPoly, w: &[Rat]) -> CPoly {
    let support: Vec<(Exponent, Rat)> = g.terms.keys().map(|m| (m.clone(), Rat::zero())).collect();
    let mut out = CPoly::with_vars(g.vars.clone());
    for m in argmin_weighted(&support, w) {
        let c = g.terms[&m].clone();
        out.terms.insert(m, c);
    }
    out
}

/// A polynomial written as `c·x^base·(1 + Σ a_i x^{A_i})`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicReduced {
    pub a: IntMatrix,
    pub shifts: PhaseVec,
    pub base: Exponent,
    pub scale: PolarC,
    /// The complex coefficients `a_i`, whose phases are `shifts`.
    pub coeffs: Vec<PolarC>,
}

/// Monic normalization at the lexicographically least exponent. The
/// remaining exponents become the rows of `A` in decreasing lexicographic
/// order.
pub fn monic_reduced(g: &CPoly) -> Result<MonicReduced> {
    if g.len() < 2 {
        return Err(Error::TooFewTerms(g.len()));
    }
    let mut it = g.terms.iter();
    let (base, c0) = it.next().expect("nonempty");
    let inv = c0.inv();
    let mut rows = Vec::new();
    let mut coeffs = Vec::new();
    for (m, c) in g.terms.iter().skip(1).rev() {
        rows.push(m.iter().zip(base).map(|(a, b)| a - b).collect::<Vec<i64>>());
        coeffs.push(c.mul(&inv));
    }
    let shifts = PhaseVec(coeffs.iter().map(|c| c.phase.clone()).collect());
    Ok(MonicReduced {
        a: IntMatrix::from_rows(&rows, g.nvars()),
        shifts,
        base: base.clone(),
        scale: c0.clone(),
        coeffs,
    })
}

/// Monic polynomials with jointly independent reduced supports.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleSystem {
    pub nvars: usize,
    pub polys: Vec<CPoly>,
    pub factors: Vec<MonicReduced>,
}

impl SimpleSystem {
    /// All reduced-support rows stacked.
    pub fn stacked(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.factors.iter().flat_map(|f| f.a.to_rows()).collect();
        IntMatrix::from_rows(&rows, self.nvars)
    }
}

/// Accepts a list of polynomials whose monic normalizations have linearly
/// independent reduced supports, jointly.
pub fn check_simple_system(polys: &[CPoly]) -> Result<SimpleSystem> {
    let nvars = polys.first().map_or(0, |p| p.nvars());
    let mut factors = Vec::with_capacity(polys.len());
    let mut all_rows: Vec<Vec<i64>> = Vec::new();
    for p in polys {
        let mr = monic_reduced(p)?;
        let rows = mr.a.to_rows();
        if mr.a.rank() < rows.len() {
            return Err(Error::NotSimple { face: String::new(), dependent: rows });
        }
        all_rows.extend(rows);
        factors.push(mr);
    }
    if IntMatrix::from_rows(&all_rows, nvars).rank() < all_rows.len() {
        return Err(Error::NotSimple { face: String::new(), dependent: all_rows });
    }
    Ok(SimpleSystem { nvars, polys: polys.to_vec(), factors })
}

fn fmt_poly<C>(
    f: &mut fmt::Formatter<'_>,
    vars: &[String],
    terms: &BTreeMap<Exponent, C>,
    coeff: impl Fn(&C) -> String,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (m, c)) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{}", coeff(c))?;
        for (v, &e) in vars.iter().zip(m) {
            match e {
                0 => {}
                1 => write!(f, "·{v}")?,
                _ => write!(f, "·{v}^{e}")?,
            }
        }
    }
    Ok(())
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(f, &self.vars, &self.terms, |c| format!("({c:?})"))
    }
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(f, &self.vars, &self.terms, |c| format!("({c:?})"))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr<C> {
    #[serde(default)]
    vars: Vec<String>,
    terms: Vec<TermRepr<C>>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr<C> {
    exp: Exponent,
    coeff: C,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyCoeff {
    Series(Series),
    Polar(PolarC),
}

fn check_vars(vars: Vec<String>, exps: &[&Exponent]) -> std::result::Result<Vec<String>, String> {
    let n = exps.first().map_or(vars.len(), |m| m.len());
    if exps.iter().any(|m| m.len() != n) {
        return Err("exponents of different lengths".into());
    }
    if vars.is_empty() {
        return Ok(default_vars(n));
    }
    if vars.len() != n {
        return Err(format!("{} variables but exponents of length {n}", vars.len()));
    }
    Ok(vars)
}

impl Serialize for KPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr { exp: m.clone(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<KPoly, D::Error> {
        let r = PolyRepr::<AnyCoeff>::deserialize(d)?;
        let exps: Vec<&Exponent> = r.terms.iter().map(|t| &t.exp).collect();
        let vars = check_vars(r.vars, &exps).map_err(serde::de::Error::custom)?;
        let mut p = KPoly::with_vars(vars);
        for t in r.terms {
            let c = match t.coeff {
                AnyCoeff::Series(s) => s,
                AnyCoeff::Polar(c) => Series::constant(c),
            };
            p.add_term(t.exp, c);
        }
        Ok(p)
    }
}

impl Serialize for CPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr { exp: m.clone(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<CPoly, D::Error> {
        let r = PolyRepr::<PolarC>::deserialize(d)?;
        let exps: Vec<&Exponent> = r.terms.iter().map(|t| &t.exp).collect();
        let vars = check_vars(r.vars, &exps).map_err(serde::de::Error::custom)?;
        let mut p = CPoly::with_vars(vars);
        for t in r.terms {
            p.add_term(t.exp, t.coeff);
        }
        Ok(p)
    }
}
