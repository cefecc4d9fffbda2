//! Arbitrary-precision binary floating point on top of `BigInt`.
//!
//! A [`BigFloat`] is m·2^e with no hidden state; every rounding operation
//! returns the rounded value together with an upper bound on the rounding
//! error, which the [`crate::bounded`] layer accumulates into certified
//! absolute error bounds. Rounding truncates toward zero, so the error of a
//! single rounding is strictly below one unit in the last place.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_bigint(m: BigInt) -> Self {
        BigFloat { m, e: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        BigFloat {
            m: BigInt::from(n),
            e: 0,
        }
    }

    /// 2^k.
    pub fn pow2(k: i64) -> Self {
        BigFloat {
            m: BigInt::from(1),
            e: k,
        }
    }

    /// Exact conversion of a finite f64 via its bit pattern.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "from_f64 requires a finite value");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if biased == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = if sign {
            -BigInt::from(mant)
        } else {
            BigInt::from(mant)
        };
        BigFloat { m, e }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn mantissa_bits(&self) -> u64 {
        self.m.bits()
    }

    /// Exponent of the leading bit: |v| ∈ [2^(b-1), 2^b). Zero input gives
    /// i64::MIN as a sentinel.
    pub fn mag_exp(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN
        } else {
            self.e + self.m.bits() as i64
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn shl(&self, k: i64) -> Self {
        if self.m.is_zero() {
            return Self::zero();
        }
        BigFloat {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    /// Truncate the mantissa toward zero to at most `prec` bits. Returns the
    /// rounded value and an error bound (zero when exact).
    pub fn round(&self, prec: u32) -> (Self, Self) {
        let bits = self.m.bits();
        if bits <= prec as u64 {
            return (self.clone(), Self::zero());
        }
        let drop = (bits - prec as u64) as i64;
        let exact = self.m.trailing_zeros().unwrap_or(0) >= drop as u64;
        let mag = self.m.magnitude() >> drop as usize;
        let m = BigInt::from_biguint(self.m.sign(), mag);
        let err = if exact {
            Self::zero()
        } else {
            BigFloat::pow2(self.e + drop)
        };
        (
            BigFloat {
                m,
                e: self.e + drop,
            },
            err,
        )
    }

    /// Round a nonnegative value upward to a tiny mantissa; used for error
    /// bounds so they stay cheap to carry around.
    pub fn round_up_coarse(&self) -> Self {
        debug_assert!(!self.m.is_negative());
        let bits = self.m.bits();
        if bits <= 12 {
            return self.clone();
        }
        let drop = (bits - 12) as i64;
        let mag = (self.m.magnitude() >> drop as usize) + 1u32;
        BigFloat {
            m: BigInt::from_biguint(Sign::Plus, mag),
            e: self.e + drop,
        }
    }

    /// Sum of two nonnegative values, rounded upward. Sound for error-bound
    /// arithmetic: the result is always ≥ the exact sum.
    pub fn add_up(&self, rhs: &Self) -> Self {
        debug_assert!(!self.m.is_negative() && !rhs.m.is_negative());
        if self.m.is_zero() {
            return rhs.round_up_coarse();
        }
        if rhs.m.is_zero() {
            return self.round_up_coarse();
        }
        let (hi, lo) = if self.e >= rhs.e {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if hi.e - lo.e > lo.m.bits() as i64 + 64 {
            // bump one ulp of hi, which exceeds |lo| here
            return BigFloat {
                m: &hi.m + 1u32,
                e: hi.e,
            }
            .round_up_coarse();
        }
        let gap = (hi.e - lo.e) as usize;
        BigFloat {
            m: (&hi.m << gap) + &lo.m,
            e: lo.e,
        }
        .round_up_coarse()
    }

    /// Product of two nonnegative values, rounded upward.
    pub fn mul_up(&self, rhs: &Self) -> Self {
        debug_assert!(!self.m.is_negative() && !rhs.m.is_negative());
        let (v, r) = self.mul_rounded(rhs, 24);
        v.add_up(&r)
    }

    /// Upper bound on self/rhs for nonnegative self and positive rhs.
    pub fn div_up(&self, rhs: &Self) -> Self {
        debug_assert!(!self.m.is_negative() && rhs.m.is_positive());
        let (q, r) = self.div_rounded(rhs, 24);
        q.add_up(&r)
    }

    /// Exact sum; the caller rounds. When the exponent gap is so large that
    /// the small term cannot touch `prec` guarded bits, it is dropped and
    /// returned as an error bound instead.
    pub fn add_rounded(&self, rhs: &Self, prec: u32) -> (Self, Self) {
        if self.m.is_zero() {
            return rhs.round(prec);
        }
        if rhs.m.is_zero() {
            return self.round(prec);
        }
        let (hi, lo) = if self.e >= rhs.e {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = hi.e - lo.e;
        let cutoff = prec as i64 + lo.m.bits() as i64 + hi.m.bits() as i64 + 16;
        if gap > cutoff {
            // |lo| < 2^(lo.e + bits) is far below the guard bits of hi.
            let (v, r) = hi.round(prec);
            let e1 = BigFloat::pow2(lo.mag_exp());
            let (err, _) = e1.add_rounded(&r, 32);
            return (v, err.round_up_coarse());
        }
        let sum = BigFloat {
            m: (&hi.m << gap as usize) + &lo.m,
            e: lo.e,
        };
        sum.round(prec)
    }

    pub fn sub_rounded(&self, rhs: &Self, prec: u32) -> (Self, Self) {
        self.add_rounded(&rhs.neg(), prec)
    }

    pub fn mul_rounded(&self, rhs: &Self, prec: u32) -> (Self, Self) {
        if self.m.is_zero() || rhs.m.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let prod = BigFloat {
            m: &self.m * &rhs.m,
            e: self.e + rhs.e,
        };
        prod.round(prec)
    }

    /// Quotient with |error| < 2^(result exponent), i.e. below one ulp.
    pub fn div_rounded(&self, rhs: &Self, prec: u32) -> (Self, Self) {
        assert!(!rhs.m.is_zero(), "division by zero BigFloat");
        if self.m.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let shift = prec as i64 + rhs.m.bits() as i64 - self.m.bits() as i64 + 8;
        let shift = shift.max(0);
        let num = &self.m << shift as usize;
        let q = &num / &rhs.m; // truncates toward zero
        let exact = &q * &rhs.m == num;
        let e = self.e - rhs.e - shift;
        let err = if exact {
            BigFloat::zero()
        } else {
            BigFloat::pow2(e)
        };
        (BigFloat { m: q, e }, err)
    }

    pub fn cmp_value(&self, rhs: &Self) -> Ordering {
        // Fast path on magnitudes and signs, exact path otherwise.
        let (d, _) = self.sub_rounded(rhs, u32::MAX);
        if d.m.is_zero() {
            Ordering::Equal
        } else if d.m.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits();
        let drop = bits as i64 - 53;
        let (top, e) = if drop > 0 {
            let mag = self.m.magnitude() >> drop as usize;
            (mag.to_f64().unwrap_or(f64::INFINITY), self.e + drop)
        } else {
            (
                self.m.magnitude().to_f64().unwrap_or(f64::INFINITY),
                self.e,
            )
        };
        let v = if e > 2000 {
            f64::INFINITY
        } else if e < -2000 {
            0.0
        } else {
            top * 2f64.powi(e as i32)
        };
        if self.m.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Decimal rendering with `sig` significant digits (truncated).
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.m.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let neg = self.m.is_negative();
        let mag = self.m.magnitude().clone();
        // log10 |v| estimate from the binary magnitude.
        let b2 = self.mag_exp();
        let mut exp10 = ((b2 as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
        // digits = floor(|v| * 10^(sig-1-exp10)):
        let mut digits;
        loop {
            let p = sig as i64 - 1 - exp10;
            let mut t = BigInt::from_biguint(Sign::Plus, mag.clone());
            if p >= 0 {
                t *= BigInt::from(10u32).pow(p as u32);
            }
            if self.e >= 0 {
                t <<= self.e as usize;
            } else {
                t >>= (-self.e) as usize;
            }
            if p < 0 {
                t /= BigInt::from(10u32).pow((-p) as u32);
            }
            let s = t.to_string();
            if s.len() > sig {
                exp10 += (s.len() - sig) as i64;
                continue;
            }
            if s.len() < sig && s != "0" {
                exp10 -= (sig - s.len()) as i64;
                continue;
            }
            digits = s;
            break;
        }
        while digits.len() < sig {
            digits.push('0');
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&digits[..1]);
        if sig > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        if exp10 != 0 {
            out.push('e');
            out.push_str(&exp10.to_string());
        }
        out
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_tracks_error() {
        let v = BigFloat::from_bigint(BigInt::from(0b1011_1101_0111u64));
        let (r, err) = v.round(6);
        // rounded value differs by less than the reported bound
        let (diff, _) = v.sub_rounded(&r, 128);
        assert!(diff.abs().cmp_value(&err) == Ordering::Less || diff.is_zero());
    }

    #[test]
    fn div_hits_f64() {
        let a = BigFloat::from_i64(1);
        let b = BigFloat::from_i64(3);
        let (q, _) = a.div_rounded(&b, 128);
        assert!((q.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        let a = BigFloat::from_i64(1);
        let b = BigFloat::from_i64(8);
        let (q, _) = a.div_rounded(&b, 128);
        assert_eq!(q.to_decimal(3), "1.25e-1");
        assert_eq!(BigFloat::from_i64(-12).to_decimal(2), "-1.2e1");
        assert_eq!(BigFloat::zero().to_decimal(5), "0");
    }

    #[test]
    fn huge_exponent_gap_add() {
        let a = BigFloat::from_i64(1);
        let tiny = BigFloat::pow2(-100_000);
        let (s, err) = a.add_rounded(&tiny, 64);
        assert_eq!(s.cmp_value(&a), Ordering::Equal);
        assert!(!err.is_zero());
    }
}
