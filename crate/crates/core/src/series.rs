//! Elements of the valued field: finite sums `Σ c_γ t^γ` with rational
//! exponents and complex coefficients, known up to an optional truncation
//! order. The valuation is the least exponent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Phase, PolarC, Rat};

/// Truncated generalized power series.
///
/// Invariants: exponents strictly increasing, coefficients nonzero, every
/// exponent below `trunc`. `trunc == None` means the sum is exact.
#[derive(Clone, PartialEq)]
pub struct Series {
    terms: Vec<(Rat, PolarC)>,
    trunc: Option<Rat>,
}

fn min_order(a: &Option<Rat>, b: &Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(Rat::min(x.clone(), y.clone())),
    }
}

fn shift_order(a: &Option<Rat>, by: &Rat) -> Option<Rat> {
    a.as_ref().map(|x| x + by)
}

impl Series {
    pub fn zero() -> Series {
        Series { terms: Vec::new(), trunc: None }
    }

    pub fn one() -> Series {
        Series::constant(PolarC::one())
    }

    pub fn constant(c: PolarC) -> Series {
        Series::monomial(Rat::zero(), c)
    }

    /// `c·t^γ`, exact.
    pub fn monomial(gamma: Rat, c: PolarC) -> Series {
        if c.is_zero() {
            return Series::zero();
        }
        Series { terms: vec![(gamma, c)], trunc: None }
    }

    /// The uniformizer power `t^γ`.
    pub fn t_pow(gamma: Rat) -> Series {
        Series::monomial(gamma, PolarC::one())
    }

    /// Builds a series from arbitrary terms: sorts, merges equal exponents,
    /// drops zeros and everything at or beyond `trunc`.
    pub fn from_terms(terms: Vec<(Rat, PolarC)>, trunc: Option<Rat>) -> Series {
        let mut terms = terms;
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Rat, PolarC)> = Vec::with_capacity(terms.len());
        for (g, c) in terms {
            if let Some(t) = &trunc {
                if &g >= t {
                    continue;
                }
            }
            match out.last_mut() {
                Some((lg, lc)) if *lg == g => *lc = lc.add(&c),
                _ => out.push((g, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Series { terms: out, trunc }
    }

    pub fn with_trunc(&self, trunc: Option<Rat>) -> Series {
        let t = min_order(&self.trunc, &trunc);
        Series::from_terms(self.terms.clone(), t)
    }

    pub fn terms(&self) -> &[(Rat, PolarC)] {
        &self.terms
    }

    pub fn trunc(&self) -> Option<&Rat> {
        self.trunc.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least exponent; `None` stands for `+∞` (the zero series).
    pub fn valuation(&self) -> Option<Rat> {
        self.terms.first().map(|(g, _)| g.clone())
    }

    pub fn leading_coeff(&self) -> Option<&PolarC> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn neg(&self) -> Series {
        Series {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.neg())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn scale(&self, c: &PolarC) -> Series {
        if c.is_zero() {
            return Series { terms: Vec::new(), trunc: self.trunc.clone() };
        }
        Series {
            terms: self.terms.iter().map(|(g, a)| (g.clone(), a.mul(c))).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn add(&self, o: &Series) -> Series {
        let trunc = min_order(&self.trunc, &o.trunc);
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Series::from_terms(terms, trunc)
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    // Order up to which a product is determined.
    fn product_order(&self, o: &Series) -> Option<Rat> {
        let a = match o.valuation() {
            Some(v) => shift_order(&self.trunc, &v),
            // o is an unknown small quantity O(t^T)
            None => o.trunc.as_ref().map(|t| self.valuation().map_or_else(|| t.clone(), |v| &v + t)),
        };
        let b = match self.valuation() {
            Some(v) => shift_order(&o.trunc, &v),
            None => self.trunc.as_ref().map(|t| o.valuation().map_or_else(|| t.clone(), |v| &v + t)),
        };
        min_order(&a, &b)
    }

    pub fn mul(&self, o: &Series) -> Series {
        if (self.is_zero() && self.trunc.is_none()) || (o.is_zero() && o.trunc.is_none()) {
            return Series::zero();
        }
        let trunc = self.product_order(o);
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (g1, c1) in &self.terms {
            for (g2, c2) in &o.terms {
                let g = g1 + g2;
                if trunc.as_ref().is_some_and(|t| &g >= t) {
                    continue;
                }
                terms.push((g, c1.mul(c2)));
            }
        }
        Series::from_terms(terms, trunc)
    }

    /// Inverse, computed to absolute order at most `max_order` when the exact
    /// inverse is an infinite series.
    pub fn inv(&self, max_order: &Rat) -> Result<Series> {
        let Some((v, c)) = self.terms.first().cloned() else {
            return Err(Error::DivisionByZero);
        };
        let c_inv = c.inv();
        // self = c·t^v·(1 + h)
        let rel_prec = self.trunc.as_ref().map(|t| t - &v);
        let h: Vec<(Rat, PolarC)> =
            self.terms[1..].iter().map(|(g, a)| (g - &v, a.mul(&c_inv))).collect();
        let neg_v = -&v;
        let mut order = max_order - &neg_v;
        if let Some(p) = &rel_prec {
            order = Rat::min(order, p.clone());
        }
        let inv_rel = if h.is_empty() {
            match rel_prec {
                None => Series::one(),
                Some(p) => Series::one().with_trunc(Some(p)),
            }
        } else {
            if !order.is_positive() {
                return Err(Error::TruncationExhausted(format!(
                    "inverse needs order {max_order} but only {order} is available"
                )));
            }
            let hs = Series::from_terms(h, Some(order.clone()));
            let neg_h = hs.neg();
            // 1/(1+h) = Σ (-h)^k
            let mut acc = Series::one().with_trunc(Some(order.clone()));
            let mut pw = Series::one().with_trunc(Some(order.clone()));
            loop {
                pw = pw.mul(&neg_h).with_trunc(Some(order.clone()));
                if pw.is_zero() {
                    break;
                }
                acc = acc.add(&pw);
            }
            acc
        };
        Ok(inv_rel.mul(&Series::monomial(neg_v, c_inv)))
    }

    pub fn div(&self, o: &Series, max_order: &Rat) -> Result<Series> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if o.terms.len() == 1 && o.trunc.is_none() {
            let (g, c) = &o.terms[0];
            return Ok(self.mul(&Series::monomial(-g, c.inv())));
        }
        let vx = self.valuation().unwrap_or_else(Rat::zero);
        let inv = o.inv(&(max_order - &vx))?;
        Ok(self.mul(&inv).with_trunc(Some(max_order.clone())))
    }

    /// Integer power (negative powers via [`Series::inv`]).
    pub fn pow(&self, k: i64, max_order: &Rat) -> Result<Series> {
        let base = if k < 0 { self.inv(max_order)? } else { self.clone() };
        let mut acc = Series::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
            if acc.trunc.is_none() && acc.terms.len() > 1 {
                acc = acc.with_trunc(Some(max_order.clone()));
            }
        }
        Ok(acc)
    }

    /// A `k`-th root: `c^{1/k}` on the branch `branch`, times `t^{v/k}`, times
    /// the binomial series of `(1+h)^{1/k}`.
    pub fn root(&self, k: i64, branch: i64, max_order: &Rat) -> Result<Series> {
        assert!(k > 0);
        let Some((v, c)) = self.terms.first().cloned() else {
            return Ok(self.clone());
        };
        if k == 1 {
            return Ok(self.clone());
        }
        let c_inv = c.inv();
        let h: Vec<(Rat, PolarC)> =
            self.terms[1..].iter().map(|(g, a)| (g - &v, a.mul(&c_inv))).collect();
        let lead_v = &v / &Rat::from_int(k);
        let mut order = max_order - &lead_v;
        if let Some(t) = &self.trunc {
            order = Rat::min(order, t - &v);
        }
        let rel = if h.is_empty() && self.trunc.is_none() {
            Series::one()
        } else {
            if !order.is_positive() {
                return Err(Error::TruncationExhausted(format!("root needs order {max_order}")));
            }
            let hs = Series::from_terms(h, Some(order.clone()));
            let a = Rat::new(1, k);
            let mut acc = Series::one().with_trunc(Some(order.clone()));
            let mut pw = Series::one().with_trunc(Some(order.clone()));
            let mut binom = Rat::one();
            let mut j = 0i64;
            loop {
                pw = pw.mul(&hs).with_trunc(Some(order.clone()));
                if pw.is_zero() {
                    break;
                }
                binom = &binom * &(&(&a - &Rat::from_int(j)) / &Rat::from_int(j + 1));
                j += 1;
                if !binom.is_zero() {
                    acc = acc.add(&pw.scale(&PolarC::real(binom.clone())));
                }
            }
            acc
        };
        Ok(rel.mul(&Series::monomial(lead_v, c.root(k, branch))))
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})t^{g}")?;
        }
        if let Some(t) = &self.trunc {
            write!(f, " + O(t^{t})")?;
        }
        Ok(())
    }
}

/// Which operation [`series_arith`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
}

/// Binary arithmetic; `max_order` caps quotients that would otherwise be
/// infinite series.
pub fn series_arith(op: SeriesOp, x: &Series, y: &Series, max_order: &Rat) -> Result<Series> {
    match op {
        SeriesOp::Add => Ok(x.add(y)),
        SeriesOp::Mul => Ok(x.mul(y)),
        SeriesOp::Div => x.div(y, max_order),
    }
}

/// The valuation, `None` for `+∞`.
pub fn valuation(x: &Series) -> Option<Rat> {
    x.valuation()
}

/// A section of the valuation, relative to the canonical one `γ ↦ t^γ`.
///
/// A twisted section is `γ ↦ α(γ)·t^γ`, where `α` is a homomorphism from the
/// cyclic group `generator·ℤ` to the nonzero complex numbers, fixed by its
/// value on the generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Section {
    Canonical,
    Twisted {
        generator: Rat,
        alpha: PolarC,
    },
}

impl Section {
    pub fn twisted(generator: Rat, alpha: PolarC) -> Section {
        assert!(generator.is_positive(), "generator must be positive");
        assert!(!alpha.is_zero(), "α(g) must be nonzero");
        Section::Twisted { generator, alpha }
    }

    /// `α(γ) = α(g)^k` for `γ = k·g`.
    pub fn alpha_at(&self, gamma: &Rat) -> Result<PolarC> {
        match self {
            Section::Canonical => Ok(PolarC::one()),
            Section::Twisted { generator, alpha } => {
                let k = gamma / generator;
                let Some(k) = k.to_i64() else {
                    return Err(Error::SectionUndefined(gamma.clone()));
                };
                Ok(alpha.pow(k))
            }
        }
    }

    /// The element `s(γ) = α(γ)·t^γ`.
    pub fn apply(&self, gamma: &Rat) -> Result<Series> {
        Ok(Series::monomial(gamma.clone(), self.alpha_at(gamma)?))
    }

    /// The section `γ ↦ (α(γ)/β(γ))·t^γ` relating `self` (α) to `base` (β).
    pub fn relative_to(&self, base: &Section) -> Result<Section> {
        match (self, base) {
            (s, Section::Canonical) => Ok(s.clone()),
            (Section::Canonical, Section::Twisted { generator, alpha }) => {
                Ok(Section::twisted(generator.clone(), alpha.inv()))
            }
            (
                Section::Twisted { generator: g1, alpha: a1 },
                Section::Twisted { generator: g2, alpha: a2 },
            ) => {
                // common refinement: generator gcd-like, here the lcm subgroup
                // only when one generator divides the other
                if (g1 / g2).is_integer() {
                    let k = (g1 / g2).to_i64().unwrap();
                    Ok(Section::twisted(g1.clone(), a1.div(&a2.pow(k))))
                } else if (g2 / g1).is_integer() {
                    let k = (g2 / g1).to_i64().unwrap();
                    Ok(Section::twisted(g2.clone(), a1.pow(k).div(a2)))
                } else {
                    Err(Error::SectionUndefined(g1.clone()))
                }
            }
        }
    }
}

/// `α(γ)` of `s` relative to the canonical section.
pub fn alpha_at(s: &Section, gamma: &Rat) -> Result<PolarC> {
    s.alpha_at(gamma)
}

/// The phase of the reduction of `a_x`, where `x = a_x · s(ν(x))`.
pub fn arg_section(x: &Series, s: &Section) -> Result<Phase> {
    let gamma = x.valuation().ok_or(Error::DivisionByZero)?;
    let lc = x.leading_coeff().expect("nonzero");
    let a = lc.div(&s.alpha_at(&gamma)?);
    Ok(a.phase)
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    terms: Vec<TermRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trunc: Option<Rat>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    gamma: Rat,
    #[serde(flatten)]
    coeff: PolarC,
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            terms: self
                .terms
                .iter()
                .map(|(g, c)| TermRepr { gamma: g.clone(), coeff: c.clone() })
                .collect(),
            trunc: self.trunc.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Series, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        Ok(Series::from_terms(r.terms.into_iter().map(|t| (t.gamma, t.coeff)).collect(), r.trunc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn poly(terms: &[(i64, i64, i64)]) -> Series {
        Series::from_terms(
            terms.iter().map(|&(n, d, c)| (q(n, d), PolarC::from_int(c))).collect(),
            None,
        )
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(poly(&[(1, 1, 1), (2, 1, 3)]).valuation(), Some(Rat::one()));
        assert_eq!(Series::zero().valuation(), None);
        let s = Series::from_terms(
            vec![
                (q(1, 2), PolarC::new_f64(2f64.sqrt(), Phase::turns_frac(1, 8))),
                (Rat::one(), PolarC::from_int(3)),
            ],
            None,
        );
        assert_eq!(s.valuation(), Some(q(1, 2)));
    }

    #[test]
    fn geometric_series() {
        let one_plus_t = poly(&[(0, 1, 1), (1, 1, 1)]);
        let inv = Series::one().div(&one_plus_t, &Rat::from_int(3)).unwrap();
        assert_eq!(inv, Series::from_terms(
            vec![(Rat::zero(), PolarC::from_int(1)), (Rat::one(), PolarC::from_int(-1)), (Rat::from_int(2), PolarC::from_int(1))],
            Some(Rat::from_int(3)),
        ));
    }

    #[test]
    fn half_powers_and_cancellation() {
        let s = Series::t_pow(q(1, 2));
        assert_eq!(s.mul(&s), Series::t_pow(Rat::one()));
        let a = poly(&[(1, 1, 1), (2, 1, 1)]);
        let b = poly(&[(1, 1, -1)]);
        let sum = a.add(&b);
        assert_eq!(sum, poly(&[(2, 1, 1)]));
        assert_eq!(sum.valuation(), Some(Rat::from_int(2)));
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(Series::one().div(&Series::zero(), &Rat::one()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn arg_section_examples() {
        let x = Series::monomial(q(1, 2), PolarC::new_f64(2f64.sqrt(), Phase::turns_frac(1, 8)));
        assert_eq!(arg_section(&x, &Section::Canonical).unwrap(), Phase::turns_frac(1, 8));
        let tw = Section::twisted(Rat::one(), PolarC::root_of_unity(1, 4));
        let t = Series::t_pow(Rat::one());
        assert_eq!(arg_section(&t, &tw).unwrap(), Phase::turns_frac(-1, 4));
        let five = Series::constant(PolarC::from_int(5));
        assert_eq!(arg_section(&five, &tw).unwrap(), Phase::zero());
        assert_eq!(arg_section(&five, &Section::Canonical).unwrap(), Phase::zero());
        let half = Series::t_pow(q(1, 2));
        assert!(matches!(arg_section(&half, &tw), Err(Error::SectionUndefined(_))));
    }

    #[test]
    fn alpha_examples() {
        let tw = Section::twisted(Rat::one(), PolarC::root_of_unity(1, 4));
        assert_eq!(alpha_at(&tw, &Rat::from_int(2)).unwrap(), PolarC::from_int(-1));
        assert_eq!(alpha_at(&tw, &Rat::zero()).unwrap(), PolarC::one());
        let z3 = Section::twisted(q(1, 2), PolarC::root_of_unity(1, 3));
        assert_eq!(alpha_at(&z3, &q(3, 2)).unwrap(), PolarC::one());
        assert!(alpha_at(&z3, &q(1, 3)).is_err());
    }

    #[test]
    fn roots() {
        // (t^2 (1 + t))^{1/2} = t (1 + t/2 - t^2/8 + ...)
        let x = poly(&[(2, 1, 1), (3, 1, 1)]);
        let r = x.root(2, 0, &Rat::from_int(4)).unwrap();
        assert_eq!(r.valuation(), Some(Rat::one()));
        let sq = r.mul(&r).with_trunc(Some(Rat::from_int(4)));
        assert_eq!(sq, x.with_trunc(Some(Rat::from_int(4))));
    }

    #[test]
    fn json_shape() {
        let s = Series::from_terms(
            vec![(q(1, 2), PolarC::new_f64(1.25, Phase::turns_frac(1, 8)))],
            Some(Rat::from_int(4)),
        );
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"terms":[{"gamma":"1/2","mod":1.25,"phase":{"turns":"1/8"}}],"trunc":"4"}"#);
        let back: Series = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    fn arb_series() -> impl Strategy<Value = Series> {
        proptest::collection::vec((0i64..8, 1i64..4, 1i64..4, 0i64..6), 1..4).prop_map(|ts| {
            Series::from_terms(
                ts.into_iter()
                    .map(|(n, d, m, p)| (q(n, d), PolarC::new(Rat::from_int(m), Phase::turns_frac(p, 6))))
                    .collect(),
                None,
            )
        })
        .prop_filter("nonzero", |s| !s.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn valuation_axioms(x in arb_series(), y in arb_series()) {
            let vx = x.valuation();
            let vy = y.valuation();
            if let (Some(a), Some(b)) = (&vx, &vy) {
                prop_assert_eq!(x.mul(&y).valuation(), Some(a + b));
                let s = x.add(&y);
                match s.valuation() {
                    None => prop_assert!(a == b),
                    Some(v) => {
                        prop_assert!(v >= Rat::min(a.clone(), b.clone()));
                        if a != b {
                            prop_assert_eq!(v, Rat::min(a.clone(), b.clone()));
                        }
                    }
                }
            }
        }

        #[test]
        fn arg_is_multiplicative(x in arb_series(), y in arb_series(), k in 0i64..4) {
            for s in [Section::Canonical, Section::twisted(Rat::new(1, 12), PolarC::root_of_unity(k, 5))] {
                let lhs = arg_section(&x.mul(&y), &s).unwrap();
                let rhs = arg_section(&x, &s).unwrap() + arg_section(&y, &s).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
            let lc = x.leading_coeff().unwrap().phase.clone();
            prop_assert_eq!(arg_section(&x, &Section::Canonical).unwrap(), lc);
        }
    }
}
