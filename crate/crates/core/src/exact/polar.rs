use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::Phase;
use super::rat::Rat;

/// Relative size below which a float sum is taken to be an exact zero.
pub const CANCEL_EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum Modulus {
    Exact(Rat),
    Float(f64),
}

impl Modulus {
    pub fn to_f64(&self) -> f64 {
        match self {
            Modulus::Exact(r) => r.to_f64(),
            Modulus::Float(x) => *x,
        }
    }

    fn mul(&self, o: &Modulus) -> Modulus {
        match (self, o) {
            (Modulus::Exact(a), Modulus::Exact(b)) => Modulus::Exact(a * b),
            _ => Modulus::Float(self.to_f64() * o.to_f64()),
        }
    }

    fn recip(&self) -> Modulus {
        match self {
            Modulus::Exact(a) => Modulus::Exact(a.recip()),
            Modulus::Float(x) => Modulus::Float(1.0 / x),
        }
    }

    fn approx_eq(&self, o: &Modulus) -> bool {
        match (self, o) {
            (Modulus::Exact(a), Modulus::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), o.to_f64());
                (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
            }
        }
    }
}

/// A complex number in polar form, `modulus · e^{2πi·phase}`, or zero.
#[derive(Clone)]
pub struct PolarC {
    pub modulus: Modulus,
    pub phase: Phase,
    pub zero: bool,
}

impl PolarC {
    pub fn zero() -> PolarC {
        PolarC { modulus: Modulus::Exact(Rat::zero()), phase: Phase::zero(), zero: true }
    }

    pub fn one() -> PolarC {
        PolarC::unit(Phase::zero())
    }

    pub fn unit(phase: Phase) -> PolarC {
        PolarC { modulus: Modulus::Exact(Rat::one()), phase, zero: false }
    }

    pub fn new(modulus: Rat, phase: Phase) -> PolarC {
        assert!(modulus.is_positive(), "modulus must be positive");
        PolarC { modulus: Modulus::Exact(modulus), phase, zero: false }
    }

    pub fn new_f64(modulus: f64, phase: Phase) -> PolarC {
        assert!(modulus > 0.0, "modulus must be positive");
        PolarC { modulus: Modulus::Float(modulus), phase, zero: false }
    }

    /// A real rational number.
    pub fn real(r: Rat) -> PolarC {
        if r.is_zero() {
            PolarC::zero()
        } else if r.is_negative() {
            PolarC::new(-r, Phase::half())
        } else {
            PolarC::new(r, Phase::zero())
        }
    }

    pub fn from_int(n: i64) -> PolarC {
        PolarC::real(Rat::from_int(n))
    }

    /// Exact `e^{2πi p/q}`.
    pub fn root_of_unity(p: i64, q: i64) -> PolarC {
        PolarC::unit(Phase::turns_frac(p, q))
    }

    pub fn from_complex(z: Complex64) -> PolarC {
        let r = z.norm();
        if r == 0.0 {
            PolarC::zero()
        } else {
            PolarC::new_f64(r, Phase::radians(z.arg()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_exact(&self) -> bool {
        self.zero || (self.phase.is_exact() && matches!(self.modulus, Modulus::Exact(_)))
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.modulus.to_f64(), self.phase.to_radians())
    }

    pub fn mul(&self, o: &PolarC) -> PolarC {
        if self.zero || o.zero {
            return PolarC::zero();
        }
        PolarC { modulus: self.modulus.mul(&o.modulus), phase: &self.phase + &o.phase, zero: false }
    }

    pub fn inv(&self) -> PolarC {
        assert!(!self.zero, "inverse of zero");
        PolarC { modulus: self.modulus.recip(), phase: -&self.phase, zero: false }
    }

    pub fn div(&self, o: &PolarC) -> PolarC {
        self.mul(&o.inv())
    }

    pub fn neg(&self) -> PolarC {
        if self.zero {
            return self.clone();
        }
        PolarC { modulus: self.modulus.clone(), phase: &self.phase + &Phase::half(), zero: false }
    }

    pub fn pow(&self, k: i64) -> PolarC {
        if k == 0 {
            return PolarC::one();
        }
        if self.zero {
            assert!(k > 0, "negative power of zero");
            return PolarC::zero();
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let e = k.unsigned_abs();
        let modulus = match &base.modulus {
            Modulus::Exact(r) => {
                let mut acc = Rat::one();
                for _ in 0..e {
                    acc *= r;
                }
                Modulus::Exact(acc)
            }
            Modulus::Float(x) => Modulus::Float(x.powi(e as i32)),
        };
        PolarC { modulus, phase: base.phase.mul_int(e as i64), zero: false }
    }

    /// One of the `k`-th roots, chosen by `branch` in `0..k`.
    pub fn root(&self, k: i64, branch: i64) -> PolarC {
        assert!(k > 0);
        if self.zero {
            return PolarC::zero();
        }
        let m = self.modulus.to_f64().powf(1.0 / k as f64);
        let modulus = if k == 1 { self.modulus.clone() } else { Modulus::Float(m) };
        PolarC { modulus, phase: self.phase.div_int(k, branch), zero: false }
    }

    /// Sum. Exact when both phases agree or are opposite and both moduli are
    /// exact; otherwise computed in floating point, with results smaller than
    /// [`CANCEL_EPS`] relative to the summands treated as zero.
    pub fn add(&self, o: &PolarC) -> PolarC {
        if self.zero {
            return o.clone();
        }
        if o.zero {
            return self.clone();
        }
        if let (Modulus::Exact(a), Modulus::Exact(b), Phase::Turns(p), Phase::Turns(q)) =
            (&self.modulus, &o.modulus, &self.phase, &o.phase)
        {
            if p == q {
                return PolarC::new(a + b, self.phase.clone());
            }
            if (p - q).fract_pos() == Rat::new(1, 2) {
                let d = a - b;
                return if d.is_zero() {
                    PolarC::zero()
                } else if d.is_positive() {
                    PolarC::new(d, self.phase.clone())
                } else {
                    PolarC::new(-d, o.phase.clone())
                };
            }
        }
        let z = self.to_complex() + o.to_complex();
        let scale = self.modulus.to_f64() + o.modulus.to_f64();
        if z.norm() <= CANCEL_EPS * scale {
            PolarC::zero()
        } else {
            PolarC::from_complex(z)
        }
    }

    pub fn sub(&self, o: &PolarC) -> PolarC {
        self.add(&o.neg())
    }

    /// Equality up to the float tolerances used for phases and moduli.
    pub fn approx_eq(&self, o: &PolarC) -> bool {
        match (self.zero, o.zero) {
            (true, true) => true,
            (false, false) => self.phase.approx_eq(&o.phase) && self.modulus.approx_eq(&o.modulus),
            _ => false,
        }
    }
}

impl PartialEq for PolarC {
    fn eq(&self, o: &PolarC) -> bool {
        self.approx_eq(o)
    }
}

impl fmt::Debug for PolarC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "0");
        }
        match &self.modulus {
            Modulus::Exact(r) => write!(f, "{r}∠{:?}", self.phase),
            Modulus::Float(x) => write!(f, "{x}∠{:?}", self.phase),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolarRepr {
    #[serde(rename = "mod")]
    modulus: ModRepr,
    phase: Phase,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ModRepr {
    Float(f64),
    Exact(Rat),
}

impl Serialize for PolarC {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let modulus = if self.zero {
            ModRepr::Float(0.0)
        } else {
            match &self.modulus {
                Modulus::Exact(r) => ModRepr::Exact(r.clone()),
                Modulus::Float(x) => ModRepr::Float(*x),
            }
        };
        PolarRepr { modulus, phase: self.phase.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolarC {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<PolarC, D::Error> {
        let r = PolarRepr::deserialize(d)?;
        Ok(match r.modulus {
            ModRepr::Float(0.0) => PolarC::zero(),
            ModRepr::Float(x) if x < 0.0 || !x.is_finite() => {
                return Err(serde::de::Error::custom("modulus must be positive"))
            }
            // Integral floats like 1.0 are kept exact.
            ModRepr::Float(x) if x.fract() == 0.0 && x.abs() < 1e15 => {
                PolarC::new(Rat::from_int(x as i64), r.phase)
            }
            ModRepr::Float(x) => PolarC::new_f64(x, r.phase),
            ModRepr::Exact(q) if q.is_zero() => PolarC::zero(),
            ModRepr::Exact(q) if q.is_negative() => {
                return Err(serde::de::Error::custom("modulus must be positive"))
            }
            ModRepr::Exact(q) => PolarC::new(q, r.phase),
        })
    }
}
