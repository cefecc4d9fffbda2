//! Exact rational arithmetic for the finite-window sums.
//!
//! [`Frac`] keeps an unreduced big-integer fraction and only runs a gcd when
//! the denominator grows past a size threshold or a canonical form is
//! requested. Identity residuals are compared to zero by cross
//! multiplication, so no rounding enters anywhere on the rational path.

use crate::bounded::{BoundedComplex, BoundedReal};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

const REDUCE_BITS: u64 = 1536;

/// Exact rational with positive denominator, reduced lazily.
#[derive(Clone, Debug)]
pub struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parameter("zero denominator".into()));
        }
        let mut f = Frac { num, den };
        f.fix_sign();
        Ok(f)
    }

    fn fix_sign(&mut self) {
        if self.den.is_negative() {
            self.num = -std::mem::take(&mut self.num);
            self.den = -std::mem::take(&mut self.den);
        }
    }

    pub fn zero() -> Self {
        Frac {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Frac {
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Frac {
            num: BigInt::from(n),
            den: BigInt::one(),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Frac {
            num: n,
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        Frac::new(BigInt::from(p), BigInt::from(q))
    }

    /// "p/q" or "p"; used by the CLI shift grammar.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let mk_err = |msg: String| Error::Parse { pos: 0, msg };
        if let Some((p, q)) = t.split_once('/') {
            let pn: BigInt = p
                .trim()
                .parse()
                .map_err(|_| mk_err(format!("bad numerator {p:?}")))?;
            let qn: BigInt = q
                .trim()
                .parse()
                .map_err(|_| mk_err(format!("bad denominator {q:?}")))?;
            Frac::new(pn, qn)
        } else {
            let pn: BigInt = t
                .parse()
                .map_err(|_| mk_err(format!("bad rational {t:?}")))?;
            Ok(Frac::from_bigint(pn))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        let mut c = self.clone();
        c.reduce();
        c.den.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num = &self.num / &g;
            self.den = &self.den / &g;
        }
    }

    pub fn reduced(&self) -> Self {
        let mut c = self.clone();
        c.reduce();
        c
    }

    fn maybe_reduce(&mut self) {
        if self.den.bits() > REDUCE_BITS {
            self.reduce();
        }
    }

    pub fn abs(&self) -> Self {
        Frac {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::Parameter("reciprocal of zero".into()));
        }
        Frac::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        Frac {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// 1/n^k for a nonzero integer n.
    pub fn recip_ipow(n: i64, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("1/0^k".into()));
        }
        Frac::new(BigInt::one(), BigInt::from(n).pow(k))
    }

    pub fn mul_int(&self, n: i64) -> Self {
        let mut f = Frac {
            num: &self.num * BigInt::from(n),
            den: self.den.clone(),
        };
        f.maybe_reduce();
        f
    }

    /// Exact comparison by cross multiplication.
    pub fn cmp_frac(&self, other: &Self) -> std::cmp::Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }

    pub fn to_f64(&self) -> f64 {
        // Scale to keep both parts in range; 60 bits of headroom is plenty
        // for display and sorting.
        let nb = self.num.bits() as i64;
        let db = self.den.bits() as i64;
        let shift = (nb.max(db) - 900).max(0);
        let n = (&self.num >> shift as usize).to_string().parse::<f64>();
        let d = (&self.den >> shift as usize).to_string().parse::<f64>();
        match (n, d) {
            (Ok(n), Ok(d)) if d != 0.0 => n / d,
            _ => f64::NAN,
        }
    }

    pub fn to_bounded(&self) -> BoundedReal {
        BoundedReal::from_frac(self)
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}
impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_frac(other))
    }
}
impl Ord for Frac {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_frac(other)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.den.is_one() {
            write!(f, "{}", r.num)
        } else {
            write!(f, "{}/{}", r.num, r.den)
        }
    }
}

impl Add for &Frac {
    type Output = Frac;
    fn add(self, rhs: &Frac) -> Frac {
        let mut f = if self.den == rhs.den {
            Frac {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
        } else {
            Frac {
                num: &self.num * &rhs.den + &rhs.num * &self.den,
                den: &self.den * &rhs.den,
            }
        };
        f.maybe_reduce();
        f
    }
}

impl Sub for &Frac {
    type Output = Frac;
    fn sub(self, rhs: &Frac) -> Frac {
        let mut f = if self.den == rhs.den {
            Frac {
                num: &self.num - &rhs.num,
                den: self.den.clone(),
            }
        } else {
            Frac {
                num: &self.num * &rhs.den - &rhs.num * &self.den,
                den: &self.den * &rhs.den,
            }
        };
        f.maybe_reduce();
        f
    }
}

impl Mul for &Frac {
    type Output = Frac;
    fn mul(self, rhs: &Frac) -> Frac {
        let mut f = Frac {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        };
        f.maybe_reduce();
        f
    }
}

impl Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// binom(-k, j) = (-1)^j · C(k+j-1, j), an exact integer.
pub fn binom_neg(k: u32, j: u32) -> BigInt {
    let mut v = BigInt::one();
    for i in 0..j {
        v *= BigInt::from(k as u64 + i as u64);
        v /= BigInt::from(i as u64 + 1);
    }
    if j % 2 == 1 {
        -v
    } else {
        v
    }
}

/// C(n, j) for small arguments.
pub fn binom(n: u64, j: u64) -> BigInt {
    if j > n {
        return BigInt::zero();
    }
    let mut v = BigInt::one();
    for i in 0..j {
        v *= BigInt::from(n - i);
        v /= BigInt::from(i + 1);
    }
    v
}

/// Value of a finite (possibly colored) sum: exact rational whenever the
/// color level is 1 or 2, certified complex otherwise.
#[derive(Clone, Debug)]
pub enum ExactValue {
    Rat(Frac),
    Cplx(BoundedComplex),
}

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue::Rat(Frac::zero())
    }

    pub fn one() -> Self {
        ExactValue::Rat(Frac::one())
    }

    pub fn is_exact_zero(&self) -> bool {
        match self {
            ExactValue::Rat(f) => f.is_zero(),
            ExactValue::Cplx(_) => false,
        }
    }

    pub fn as_rat(&self) -> Option<&Frac> {
        match self {
            ExactValue::Rat(f) => Some(f),
            ExactValue::Cplx(_) => None,
        }
    }

    pub fn to_complex(&self) -> BoundedComplex {
        match self {
            ExactValue::Rat(f) => BoundedComplex::from_frac(f),
            ExactValue::Cplx(z) => z.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactValue::Rat(a), ExactValue::Rat(b)) => ExactValue::Rat(a + b),
            _ => ExactValue::Cplx(self.to_complex().add(&other.to_complex())),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactValue::Rat(a), ExactValue::Rat(b)) => ExactValue::Rat(a - b),
            _ => ExactValue::Cplx(self.to_complex().sub(&other.to_complex())),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactValue::Rat(a), ExactValue::Rat(b)) => ExactValue::Rat(a * b),
            _ => ExactValue::Cplx(self.to_complex().mul(&other.to_complex())),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactValue::Rat(a) => ExactValue::Rat(-a),
            ExactValue::Cplx(z) => ExactValue::Cplx(z.neg()),
        }
    }

    pub fn scale(&self, c: &Frac) -> Self {
        match self {
            ExactValue::Rat(a) => ExactValue::Rat(a * c),
            ExactValue::Cplx(z) => ExactValue::Cplx(z.scale_frac(c)),
        }
    }

    /// Upper bound on the magnitude (for residual checks on the complex
    /// branch; exact on the rational branch).
    pub fn mag_f64(&self) -> f64 {
        match self {
            ExactValue::Rat(f) => f.to_f64().abs(),
            ExactValue::Cplx(z) => z.abs_ub_f64(),
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rat(r) => write!(f, "{r}"),
            ExactValue::Cplx(z) => write!(f, "{z}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_equality() {
        let a = Frac::from_ratio(1, 4).unwrap();
        let b = Frac::from_ratio(1, 9).unwrap();
        let c = Frac::from_ratio(1, 18).unwrap();
        let s = &(&a + &b) + &c;
        assert_eq!(s, Frac::from_ratio(5, 12).unwrap());
        assert_eq!(s.to_string(), "5/12");
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn negative_denominators_normalize() {
        let f = Frac::new(BigInt::from(3), BigInt::from(-6)).unwrap();
        assert_eq!(f, Frac::from_ratio(-1, 2).unwrap());
        assert!(f.is_negative());
    }

    #[test]
    fn binom_neg_values() {
        // binom(-2, j) = (-1)^j (j+1)
        assert_eq!(binom_neg(2, 0), BigInt::from(1));
        assert_eq!(binom_neg(2, 1), BigInt::from(-2));
        assert_eq!(binom_neg(2, 2), BigInt::from(3));
        assert_eq!(binom_neg(3, 2), BigInt::from(6));
    }

    #[test]
    fn parse_shift_grammar() {
        assert_eq!(Frac::parse("1/2").unwrap(), Frac::from_ratio(1, 2).unwrap());
        assert_eq!(Frac::parse("-3").unwrap(), Frac::from_int(-3));
        assert!(Frac::parse("1/0").is_err());
        assert!(Frac::parse("x").is_err());
    }
}
