//! Thin wrapper around `astro_float::BigFloat` fixing a per-value working
//! precision in bits. Binary operations run at the larger of the two operand
//! precisions, rounding to nearest even.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::Signed;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

const RM: RoundingMode = RoundingMode::ToEven;

/// Convert a decimal digit count into a mantissa bit length, with guard bits.
pub fn digits_to_bits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

fn consts() -> &'static Mutex<Consts> {
    static CC: std::sync::OnceLock<Mutex<Consts>> = std::sync::OnceLock::new();
    CC.get_or_init(|| Mutex::new(Consts::new().expect("constants cache")))
}

/// Arbitrary-precision binary float.
#[derive(Clone, Debug)]
pub struct Bf {
    v: BigFloat,
    prec: usize,
}

impl Bf {
    pub fn zero(prec: usize) -> Self {
        Self {
            v: BigFloat::from_word(0, prec),
            prec,
        }
    }

    pub fn one(prec: usize) -> Self {
        Self {
            v: BigFloat::from_word(1, prec),
            prec,
        }
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self {
            v: BigFloat::from_i64(n, prec),
            prec,
        }
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self {
            v: BigFloat::from_f64(x, prec),
            prec,
        }
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        let mut acc = BigFloat::from_word(0, prec + 64);
        let shift = BigFloat::from_u64(1 << 32, prec + 64);
        let shift = shift.mul(&shift, prec + 64, RM); // 2^64 exactly
        for limb in n.magnitude().iter_u64_digits().rev() {
            acc = acc.mul(&shift, prec + 64, RM);
            acc = acc.add(&BigFloat::from_u64(limb, prec + 64), prec + 64, RM);
        }
        if n.is_negative() {
            acc.inv_sign();
        }
        Self { v: acc, prec }.with_prec(prec)
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        let num = Self::from_bigint(q.numer(), prec + 64);
        let den = Self::from_bigint(q.denom(), prec + 64);
        num.div(&den).with_prec(prec)
    }

    pub fn pi(prec: usize) -> Self {
        let v = consts().lock().unwrap().pi(prec, RM);
        Self { v, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Round (or pad) to a new working precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(prec, RM).expect("set precision");
        Self { v, prec }
    }

    fn join(&self, rhs: &Self) -> usize {
        self.prec.max(rhs.prec)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.join(rhs);
        Self {
            v: self.v.add(&rhs.v, p, RM),
            prec: p,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.join(rhs);
        Self {
            v: self.v.sub(&rhs.v, p, RM),
            prec: p,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.join(rhs);
        Self {
            v: self.v.mul(&rhs.v, p, RM),
            prec: p,
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let p = self.join(rhs);
        Self {
            v: self.v.div(&rhs.v, p, RM),
            prec: p,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            v: self.v.neg(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        let mut v = self.v.clone();
        v.set_sign(Sign::Pos);
        Self { v, prec: self.prec }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul(&Self::from_i64(n, self.prec))
    }

    pub fn div_i64(&self, n: i64) -> Self {
        self.div(&Self::from_i64(n, self.prec))
    }

    pub fn powi(&self, n: usize) -> Self {
        Self {
            v: self.v.powi(n, self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn sqrt(&self) -> Self {
        Self {
            v: self.v.sqrt(self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn exp(&self) -> Self {
        let v = self.v.exp(self.prec, RM, &mut consts().lock().unwrap());
        Self { v, prec: self.prec }
    }

    pub fn ln(&self) -> Self {
        let v = self.v.ln(self.prec, RM, &mut consts().lock().unwrap());
        Self { v, prec: self.prec }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    /// Round toward the nearest f64. Values outside the f64 exponent range
    /// saturate to 0 or ±inf.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _n, sign, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        // value = sign * 0.mantissa * 2^e, mantissa MSB-aligned in `words` (LE)
        let len = words.len();
        let hi = words[len - 1] as f64 / 18446744073709551616.0; // 2^64
        let lo = if len >= 2 {
            words[len - 2] as f64 / 18446744073709551616.0 / 18446744073709551616.0
        } else {
            0.0
        };
        let mut m = hi + lo;
        let mut e = e as i64;
        // apply exponent in chunks to avoid overflow in powi
        let sgn = if sign == Sign::Neg { -1.0 } else { 1.0 };
        if e > 1100 {
            return sgn * f64::INFINITY;
        }
        if e < -1100 {
            return 0.0;
        }
        while e > 512 {
            m *= 2f64.powi(512);
            e -= 512;
        }
        while e < -512 {
            m *= 2f64.powi(-512);
            e += 512;
        }
        sgn * m * 2f64.powi(e as i32)
    }

    pub fn cmp_val(&self, rhs: &Self) -> Ordering {
        match self.v.cmp(&rhs.v) {
            Some(x) if x < 0 => Ordering::Less,
            Some(x) if x > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Natural logarithm pushed to f64 (handles magnitudes outside f64 range).
    pub fn ln_f64(&self) -> f64 {
        self.ln().to_f64()
    }
}

impl PartialEq for Bf {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_val(other) == Ordering::Equal
    }
}

impl PartialOrd for Bf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_val(other))
    }
}

impl fmt::Display for Bf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// Complex number over [`Bf`].
#[derive(Clone, Debug)]
pub struct CBf {
    pub re: Bf,
    pub im: Bf,
}

impl CBf {
    pub fn new(re: Bf, im: Bf) -> Self {
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Self::new(Bf::from_f64(re, prec), Bf::from_f64(im, prec))
    }

    pub fn zero(prec: usize) -> Self {
        Self::new(Bf::zero(prec), Bf::zero(prec))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(self.re.add(&rhs.re), self.im.add(&rhs.im))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::new(self.re.sub(&rhs.re), self.im.sub(&rhs.im))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(
            self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        )
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let d = rhs.norm_sqr();
        Self::new(
            self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im)).div(&d),
            self.im.mul(&rhs.re).sub(&self.re.mul(&rhs.im)).div(&d),
        )
    }

    pub fn scale(&self, s: &Bf) -> Self {
        Self::new(self.re.mul(s), self.im.mul(s))
    }

    pub fn norm_sqr(&self) -> Bf {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Bf {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_conversion_roundtrip() {
        let n = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let x = Bf::from_bigint(&n, 192);
        // exact: 30 digits < 192 bits capacity
        let back = x.to_f64();
        assert!((back - 1.2345678901234568e29).abs() / 1.2e29 < 1e-14);
    }

    #[test]
    fn rational_to_f64() {
        let q = BigRational::new(BigInt::from(-355), BigInt::from(113));
        let x = Bf::from_rational(&q, 128);
        assert!((x.to_f64() + 355.0 / 113.0).abs() < 1e-15);
    }

    #[test]
    fn exp_and_ln() {
        let x = Bf::from_f64(2.0, 256);
        let e2 = x.exp();
        assert!((e2.to_f64() - 2f64.exp()).abs() < 1e-14);
        assert!((e2.ln().to_f64() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn complex_division() {
        let a = CBf::from_f64(1.0, 2.0, 128);
        let b = CBf::from_f64(3.0, -1.0, 128);
        let q = a.div(&b).to_c64();
        let want = num_complex::Complex64::new(1.0, 2.0) / num_complex::Complex64::new(3.0, -1.0);
        assert!((q - want).norm() < 1e-15);
    }

    #[test]
    fn huge_exponent_saturates() {
        let x = Bf::from_f64(1e300, 128);
        let y = x.mul(&x).mul(&x); // 1e900 overflows f64
        assert!(y.to_f64().is_infinite());
        assert!((y.ln_f64() - 900.0 * std::f64::consts::LN_10).abs() < 1e-9);
    }
}
