use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in `i64` are stored inline;
/// everything else falls back to a big rational. The representation is
/// canonical, so derived equality and hashing agree with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

// n/d with d != 0, reduced, downsized when possible.
fn from_i128(n: i128, d: i128) -> Rat {
    let g = n.gcd(&d);
    let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Rat(Repr::Small(a, b)),
        _ => Rat(Repr::Big(BigRational::new(n.into(), d.into()))),
    }
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        from_i128(num.into(), den.into())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(Repr::Small(n, 1))
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Rat(Repr::Small(a, b)),
            _ => Rat(Repr::Big(r)),
        }
    }

    pub fn zero() -> Self {
        Rat::from_int(0)
    }

    pub fn one() -> Self {
        Rat::from_int(1)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw((*n).into(), (*d).into()),
            Repr::Big(r) => r.clone(),
        }
    }

    /// Numerator and denominator when both fit in `i64`.
    pub fn small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => (*n).into(),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => (*d).into(),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                from_i128((*d).into(), (*n).into())
            }
            Repr::Big(r) => Rat::from_big(r.recip()),
        }
    }

    pub fn floor(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => Rat::from_int(n.div_euclid(*d)),
            Repr::Big(r) => Rat::from_big(r.floor()),
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract_pos(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => Rat(Repr::Small(n.rem_euclid(*d), *d)),
            Repr::Big(r) => Rat::from_big(r - r.floor()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Option<Rat> {
        BigRational::from_float(x).map(Rat::from_big)
    }

    pub fn mul_int(&self, k: i64) -> Rat {
        self * &Rat::from_int(k)
    }

    pub fn min(a: Rat, b: Rat) -> Rat {
        if a <= b {
            a
        } else {
            b
        }
    }
}

fn add(a: &Rat, b: &Rat) -> Rat {
    if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&a.0, &b.0) {
        let (n1, d1, n2, d2) = (i128::from(*n1), i128::from(*d1), i128::from(*n2), i128::from(*d2));
        if d1 == d2 {
            return from_i128(n1 + n2, d1);
        }
        if let Some(n) = (n1 * d2).checked_add(n2 * d1) {
            return from_i128(n, d1 * d2);
        }
    }
    Rat::from_big(a.to_big() + b.to_big())
}

fn mul(a: &Rat, b: &Rat) -> Rat {
    if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&a.0, &b.0) {
        return from_i128(i128::from(*n1) * i128::from(*n2), i128::from(*d1) * i128::from(*d2));
    }
    Rat::from_big(a.to_big() * b.to_big())
}

fn sub(a: &Rat, b: &Rat) -> Rat {
    add(a, &-b)
}

fn div(a: &Rat, b: &Rat) -> Rat {
    mul(a, &b.recip())
}

impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &o.0) {
            return (i128::from(*n1) * i128::from(*d2)).cmp(&(i128::from(*n2) * i128::from(*d1)));
        }
        self.to_big().cmp(&o.to_big())
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::from_big(BigRational::new(n, d)))
        } else if s.contains('.') || s.contains('e') || s.contains('E') {
            // Decimal literals are read exactly as written, e.g. "0.25" = 1/4.
            let (mant, exp) = match s.find(['e', 'E']) {
                Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
                None => (s, 0),
            };
            let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
            let digits = format!("{int_part}{frac_part}");
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            let scale = exp - frac_part.len() as i32;
            let ten = BigInt::from(10);
            let r = if scale >= 0 {
                BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
            } else {
                BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
            };
            Ok(Rat::from_big(r))
        } else {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_big(BigRational::from_integer(n)))
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::I(i) => Ok(Rat::from_int(i)),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(n))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                $f(&self, &o)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                $f(&self, o)
            }
        }
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                $f(self, o)
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                $f(self, &o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, o: &Rat) {
        *self = add(self, o);
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, o: &Rat) {
        *self = sub(self, o);
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, o: &Rat) {
        *self = mul(self, o);
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat(Repr::Small(m, *d)),
                None => Rat::from_big(-self.to_big()),
            },
            Repr::Big(r) => Rat::from_big(-r),
        }
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Dot product of an integer vector with a rational vector.
pub fn dot_int_rat(m: &[i64], w: &[Rat]) -> Rat {
    debug_assert_eq!(m.len(), w.len());
    let mut acc = Rat::zero();
    for (a, b) in m.iter().zip(w) {
        if *a != 0 {
            acc += &b.mul_int(*a);
        }
    }
    acc
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, r| l.lcm(&r.denom()))
}

pub fn cmp_rat(a: &Rat, b: &Rat) -> Ordering {
    a.cmp(b)
}
