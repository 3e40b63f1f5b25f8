use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Tolerance, in radians, for comparisons involving float phases.
pub const PHASE_EPS: f64 = 1e-9;

/// A point of the circle group ℝ/2πℤ.
///
/// Exact phases are rational turns reduced into `[0, 1)`; float phases are
/// radians reduced into `[0, 2π)`. Mixing the two yields a float phase.
#[derive(Clone)]
pub enum Phase {
    Turns(Rat),
    Radians(f64),
}

impl Phase {
    pub fn zero() -> Phase {
        Phase::Turns(Rat::zero())
    }

    pub fn turns(t: Rat) -> Phase {
        Phase::Turns(t.fract_pos())
    }

    pub fn turns_frac(num: i64, den: i64) -> Phase {
        Phase::turns(Rat::new(num, den))
    }

    pub fn radians(r: f64) -> Phase {
        let mut x = r.rem_euclid(TAU);
        if x >= TAU {
            x = 0.0;
        }
        Phase::Radians(x)
    }

    /// The half turn π.
    pub fn half() -> Phase {
        Phase::turns_frac(1, 2)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Phase::Turns(_))
    }

    pub fn exact_turns(&self) -> Option<&Rat> {
        match self {
            Phase::Turns(t) => Some(t),
            Phase::Radians(_) => None,
        }
    }

    pub fn to_radians(&self) -> f64 {
        match self {
            Phase::Turns(t) => t.to_f64() * TAU,
            Phase::Radians(r) => *r,
        }
    }

    pub fn to_turns_f64(&self) -> f64 {
        match self {
            Phase::Turns(t) => t.to_f64(),
            Phase::Radians(r) => r / TAU,
        }
    }

    /// Integer multiple, exact for exact phases.
    pub fn mul_int(&self, k: i64) -> Phase {
        match self {
            Phase::Turns(t) => Phase::turns(t.mul_int(k)),
            Phase::Radians(r) => Phase::radians(r * k as f64),
        }
    }

    /// One of the `k` solutions of `k·φ = self`, selected by `branch`.
    pub fn div_int(&self, k: i64, branch: i64) -> Phase {
        assert!(k != 0);
        match self {
            Phase::Turns(t) => Phase::turns((t + &Rat::from_int(branch)) / Rat::from_int(k)),
            Phase::Radians(r) => Phase::radians((r + TAU * branch as f64) / k as f64),
        }
    }

    /// Canonical lift in turns, in `(-1/2, 1/2]`.
    pub fn lift_turns(&self) -> Lift {
        match self {
            Phase::Turns(t) => {
                let half = Rat::new(1, 2);
                if t > &half {
                    Lift::Exact(t - &Rat::one())
                } else {
                    Lift::Exact(t.clone())
                }
            }
            Phase::Radians(r) => {
                let x = if *r > PI { r - TAU } else { *r };
                Lift::Float(x / TAU)
            }
        }
    }

    /// Distance on the circle, in radians.
    pub fn distance(&self, other: &Phase) -> f64 {
        let d = (self.clone() - other.clone()).to_radians();
        d.min(TAU - d).abs()
    }

    /// Equality: exact for exact phases, within [`PHASE_EPS`] otherwise.
    pub fn approx_eq(&self, other: &Phase) -> bool {
        match (self, other) {
            (Phase::Turns(a), Phase::Turns(b)) => a == b,
            _ => self.distance(other) <= PHASE_EPS,
        }
    }
}

/// A lift of a phase to the real line, in turns.
#[derive(Clone, Debug)]
pub enum Lift {
    Exact(Rat),
    Float(f64),
}

impl Lift {
    pub fn to_f64(&self) -> f64 {
        match self {
            Lift::Exact(r) => r.to_f64(),
            Lift::Float(x) => *x,
        }
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Phase) -> bool {
        self.approx_eq(other)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        match (self, o) {
            (Phase::Turns(a), Phase::Turns(b)) => Phase::turns(a + b),
            (a, b) => Phase::radians(a.to_radians() + b.to_radians()),
        }
    }
}

impl Add for &Phase {
    type Output = Phase;
    fn add(self, o: &Phase) -> Phase {
        match (self, o) {
            (Phase::Turns(a), Phase::Turns(b)) => Phase::turns(a + b),
            (a, b) => Phase::radians(a.to_radians() + b.to_radians()),
        }
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        match self {
            Phase::Turns(a) => Phase::turns(-a),
            Phase::Radians(r) => Phase::radians(-r),
        }
    }
}

impl Neg for &Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self.clone().neg()
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        self + (-o)
    }
}

impl Sub for &Phase {
    type Output = Phase;
    fn sub(self, o: &Phase) -> Phase {
        self + &(-o)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Turns(t) => write!(f, "{t}"),
            Phase::Radians(r) => write!(f, "{r} rad"),
        }
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q` (turns), `x.y rad`, `p/q pi` (also `2/3pi`, `-pi`, `pi`).
impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Phase> {
        let s = s.trim();
        if let Some(body) = s.strip_suffix("rad") {
            let r: f64 = body
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad radians: {s:?}")))?;
            return Ok(Phase::radians(r));
        }
        if let Some(body) = s.strip_suffix("pi").or_else(|| s.strip_suffix('π')) {
            let body = body.trim().trim_end_matches('*').trim();
            let coeff = match body {
                "" | "+" => Rat::one(),
                "-" => -Rat::one(),
                b => b.parse::<Rat>()?,
            };
            // coeff·π radians = coeff/2 turns
            return Ok(Phase::turns(coeff / Rat::from_int(2)));
        }
        Ok(Phase::turns(s.parse::<Rat>()?))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PhaseRepr {
    Turns { turns: Rat },
    Radians { radians: f64 },
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Phase::Turns(t) => PhaseRepr::Turns { turns: t.clone() }.serialize(s),
            Phase::Radians(r) => PhaseRepr::Radians { radians: *r }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Phase, D::Error> {
        Ok(match PhaseRepr::deserialize(d)? {
            PhaseRepr::Turns { turns } => Phase::turns(turns),
            PhaseRepr::Radians { radians } => Phase::radians(radians),
        })
    }
}

/// A point of the real torus 𝕌ⁿ.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseVec(pub Vec<Phase>);

impl PhaseVec {
    pub fn zeros(n: usize) -> PhaseVec {
        PhaseVec(vec![Phase::zero(); n])
    }

    pub fn from_turns(t: &[(i64, i64)]) -> PhaseVec {
        PhaseVec(t.iter().map(|&(p, q)| Phase::turns_frac(p, q)).collect())
    }

    pub fn from_radians(r: &[f64]) -> PhaseVec {
        PhaseVec(r.iter().map(|&x| Phase::radians(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().all(Phase::is_exact)
    }

    pub fn add(&self, o: &PhaseVec) -> PhaseVec {
        assert_eq!(self.len(), o.len());
        PhaseVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &PhaseVec) -> PhaseVec {
        assert_eq!(self.len(), o.len());
        PhaseVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> PhaseVec {
        PhaseVec(self.0.iter().map(|a| -a).collect())
    }

    /// Parses a comma separated list of phases.
    pub fn parse_list(s: &str) -> Result<PhaseVec> {
        s.split(',')
            .map(|p| p.parse::<Phase>())
            .collect::<Result<Vec<_>>>()
            .map(PhaseVec)
    }
}

impl fmt::Debug for PhaseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl std::ops::Index<usize> for PhaseVec {
    type Output = Phase;
    fn index(&self, i: usize) -> &Phase {
        &self.0[i]
    }
}
