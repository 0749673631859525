//! Exact coefficient arithmetic in ℚ[ζ(3), ζ(5), …] and controlled-precision
//! numeric evaluation.
//!
//! Every coefficient that arises from the one-loop Mellin kernel lives in the
//! polynomial ring over ℚ generated by the odd zeta values ζ(3), ζ(5), …
//! (only odd zetas appear in the kernel expansion). [`ZetaPoly`] is that ring;
//! [`Bf`] is an arbitrary-precision binary float used once values are pushed
//! to the numeric side. The two never mix implicitly: converting exact data to
//! numeric goes through [`zeta::zeta_eval`] (or [`Scalar::to_numeric`]) with an
//! explicit precision.

mod bigfloat;
pub mod zeta;

pub use bigfloat::{digits_to_bits, Bf, CBf};

use crate::error::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational scalar. Always stored reduced with a positive denominator
/// (enforced by the backing implementation).
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A monomial in the odd zeta generators: a finite map ζ(k) ↦ exponent with
/// k odd, k ≥ 3, exponent ≥ 1. The empty map is the unit monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ZetaMonomial {
    exps: BTreeMap<u32, u32>,
}

impl ZetaMonomial {
    /// The unit monomial (no zeta factors).
    pub fn unit() -> Self {
        Self::default()
    }

    /// Single generator ζ(k); `k` must be odd and ≥ 3.
    pub fn generator(k: u32) -> Result<Self, Error> {
        Self::from_exps([(k, 1)])
    }

    pub fn from_exps(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, Error> {
        let mut exps = BTreeMap::new();
        for (k, e) in pairs {
            if k < 3 || k % 2 == 0 {
                return Err(Error::InvalidArgument(format!(
                    "zeta index {k} must be odd and >= 3"
                )));
            }
            if e == 0 {
                continue;
            }
            *exps.entry(k).or_insert(0) += e;
        }
        Ok(Self { exps })
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps.iter().map(|(&k, &e)| (k, e))
    }

    /// Total weight Σ k·e (the transcendentality weight).
    pub fn weight(&self) -> u32 {
        self.exps.iter().map(|(&k, &e)| k * e).sum()
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (&k, &e) in &rhs.exps {
            *exps.entry(k).or_insert(0) += e;
        }
        Self { exps }
    }

    /// Canonical key form: "1" for the unit, else "z3^2*z5" with factors
    /// sorted by index and '^' omitted for exponent 1.
    pub fn key(&self) -> String {
        if self.exps.is_empty() {
            return "1".to_string();
        }
        self.exps
            .iter()
            .map(|(k, e)| {
                if *e == 1 {
                    format!("z{k}")
                } else {
                    format!("z{k}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Parse the canonical key form produced by [`Self::key`].
    pub fn parse_key(s: &str) -> Result<Self, Error> {
        if s == "1" {
            return Ok(Self::unit());
        }
        let mut pairs = Vec::new();
        for factor in s.split('*') {
            let body = factor
                .strip_prefix('z')
                .ok_or_else(|| Error::InvalidArgument(format!("bad monomial key {s:?}")))?;
            let (k, e) = match body.split_once('^') {
                Some((k, e)) => (k, e.parse::<u32>().ok()),
                None => (body, Some(1)),
            };
            let k = k
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad monomial key {s:?}")))?;
            let e = e.ok_or_else(|| Error::InvalidArgument(format!("bad monomial key {s:?}")))?;
            pairs.push((k, e));
        }
        Self::from_exps(pairs)
    }
}

impl fmt::Display for ZetaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// An element of ℚ[ζ(3), ζ(5), …]: a finite sum of rational multiples of
/// zeta monomials. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZetaPoly {
    terms: BTreeMap<ZetaMonomial, Rational>,
}

impl ZetaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ZetaMonomial::unit(), c);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// The generator ζ(k) as a polynomial.
    pub fn zeta(k: u32) -> Result<Self, Error> {
        Ok(Self::term(ZetaMonomial::generator(k)?, Rational::one()))
    }

    pub fn term(m: ZetaMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ZetaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&ZetaMonomial::unit())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// If the polynomial is a pure rational constant, return it.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&ZetaMonomial::unit()).cloned(),
            _ => None,
        }
    }

    fn insert_add(&mut self, m: ZetaMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Exact ring product; monomial exponents add.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert_add(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero");
        self.scale(&Rational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Serialize to the cache JSON form: an object mapping monomial keys to
    /// `{"num": "...", "den": "..."}` with decimal integer strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (m, c) in &self.terms {
            let mut entry = serde_json::Map::new();
            entry.insert("num".into(), serde_json::Value::String(c.numer().to_string()));
            entry.insert("den".into(), serde_json::Value::String(c.denom().to_string()));
            map.insert(m.key(), serde_json::Value::Object(entry));
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidArgument("ZetaPoly JSON must be an object".into()))?;
        let mut out = Self::zero();
        for (key, entry) in obj {
            let m = ZetaMonomial::parse_key(key)?;
            let num = entry
                .get("num")
                .and_then(|x| x.as_str())
                .and_then(|s| s.parse::<BigInt>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad num in term {key:?}")))?;
            let den = entry
                .get("den")
                .and_then(|x| x.as_str())
                .and_then(|s| s.parse::<BigInt>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad den in term {key:?}")))?;
            if den.is_zero() || !den.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "denominator must be positive in term {key:?}"
                )));
            }
            out.insert_add(m, Rational::new(num, den));
        }
        Ok(out)
    }
}

impl fmt::Display for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Tagged union of the two coefficient modes. Arithmetic between mismatched
/// modes is a contract violation and panics; exact → numeric conversion is
/// explicit via [`Scalar::to_numeric`].
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(ZetaPoly),
    Numeric(Bf),
}

impl Scalar {
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Explicit conversion to numeric mode at the given decimal precision.
    /// Exact values are evaluated; numeric values pass through unchanged.
    pub fn to_numeric(&self, precision: u32) -> Result<Bf, Error> {
        match self {
            Scalar::Exact(p) => zeta::zeta_eval(p, precision),
            Scalar::Numeric(x) => Ok(x.clone()),
        }
    }

    fn binop(
        &self,
        rhs: &Self,
        ex: impl Fn(&ZetaPoly, &ZetaPoly) -> ZetaPoly,
        nu: impl Fn(&Bf, &Bf) -> Bf,
    ) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(ex(a, b)),
            (Scalar::Numeric(a), Scalar::Numeric(b)) => Scalar::Numeric(nu(a, b)),
            _ => panic!("Scalar mode mix: exact and numeric operands; convert explicitly"),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.binop(rhs, ZetaPoly::add, Bf::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.binop(rhs, ZetaPoly::sub, Bf::sub)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.binop(rhs, ZetaPoly::mul, Bf::mul)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(p) => p.is_zero(),
            Scalar::Numeric(x) => x.is_zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: u32) -> ZetaPoly {
        ZetaPoly::zeta(k).unwrap()
    }

    #[test]
    fn unit_times_generator() {
        assert_eq!(ZetaPoly::one().mul(&z(3)), z(3));
    }

    #[test]
    fn difference_of_squares() {
        // (z3 + 2)(z3 - 2) = z3^2 - 4
        let a = z(3).add(&ZetaPoly::from_int(2));
        let b = z(3).sub(&ZetaPoly::from_int(2));
        let expect = z(3).mul(&z(3)).sub(&ZetaPoly::from_int(4));
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn monomial_key_roundtrip() {
        let m = ZetaMonomial::from_exps([(3, 2), (5, 1)]).unwrap();
        assert_eq!(m.key(), "z3^2*z5");
        assert_eq!(ZetaMonomial::parse_key("z3^2*z5").unwrap(), m);
        assert_eq!(ZetaMonomial::parse_key("1").unwrap(), ZetaMonomial::unit());
    }

    #[test]
    fn rejects_even_or_small_index() {
        assert!(ZetaMonomial::generator(2).is_err());
        assert!(ZetaMonomial::generator(1).is_err());
        assert!(ZetaMonomial::generator(4).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p = z(3).pow(2).scale(&rat(-7, 3)).add(&ZetaPoly::from_int(5));
        let v = p.to_json();
        assert_eq!(ZetaPoly::from_json(&v).unwrap(), p);
    }

    #[test]
    fn display_form() {
        let p = ZetaPoly::from_int(-2).add(&z(3).scale(&rat(16, 1)));
        assert_eq!(p.to_string(), "-2 + 16*z3");
    }

    #[test]
    #[should_panic(expected = "mode mix")]
    fn scalar_mode_mix_panics() {
        let a = Scalar::Exact(ZetaPoly::one());
        let b = Scalar::Numeric(Bf::from_i64(1, 128));
        let _ = a.add(&b);
    }

    mod properties {
        use super::super::*;
        use crate::coeffring::zeta::zeta_eval;
        use num::Integer;
        use proptest::prelude::*;

        fn arb_poly(max_deg: u32) -> impl Strategy<Value = ZetaPoly> {
            // random polynomials over {1, z3, z5, z3^2, z3*z5, ...} up to the
            // requested total number of zeta factors
            prop::collection::vec(
                ((0u32..=max_deg, 0u32..=1), (-30i64..30, 1i64..8)),
                0..5,
            )
            .prop_map(|terms| {
                let mut p = ZetaPoly::zero();
                for ((e3, e5), (num, den)) in terms {
                    let m = ZetaMonomial::from_exps([(3, e3), (5, e5)]).unwrap();
                    p = p.add(&ZetaPoly::term(m, rat(num, den)));
                }
                p
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn ring_axioms(p in arb_poly(3), q in arb_poly(3), r in arb_poly(3)) {
                prop_assert_eq!(p.mul(&q), q.mul(&p));
                prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
                prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
                prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
            }

            #[test]
            fn product_matches_schoolbook(p in arb_poly(3), q in arb_poly(3)) {
                // independent naive expansion: accumulate term-by-term
                let mut naive = ZetaPoly::zero();
                for (m1, c1) in p.terms() {
                    for (m2, c2) in q.terms() {
                        let exps: Vec<(u32, u32)> = {
                            let mut acc = std::collections::BTreeMap::new();
                            for (k, e) in m1.exponents().chain(m2.exponents()) {
                                *acc.entry(k).or_insert(0) += e;
                            }
                            acc.into_iter().collect()
                        };
                        let m = ZetaMonomial::from_exps(exps).unwrap();
                        naive = naive.add(&ZetaPoly::term(m, c1 * c2));
                    }
                }
                prop_assert_eq!(p.mul(&q), naive);
            }

            #[test]
            fn rationals_stay_reduced(p in arb_poly(2), q in arb_poly(2)) {
                for (_, c) in p.mul(&q).add(&p).terms() {
                    prop_assert_eq!(c.numer().gcd(c.denom()), 1.into());
                    prop_assert!(c.denom() > &0.into());
                }
            }

            #[test]
            fn eval_is_ring_homomorphism(p in arb_poly(3), q in arb_poly(3)) {
                // |eval(pq) − eval(p)·eval(q)| ≤ 10^(2−P) relative at P = 30
                let prec = 30;
                let pq = zeta_eval(&p.mul(&q), prec).unwrap();
                let sep = zeta_eval(&p, prec).unwrap().mul(&zeta_eval(&q, prec).unwrap());
                let diff = pq.sub(&sep).abs();
                let scale = pq.abs().add(&sep.abs()).add(&Bf::one(64));
                let rel = diff.div(&scale);
                prop_assert!(
                    rel.is_zero() || rel.ln_f64() < (2.0 - prec as f64) * std::f64::consts::LN_10,
                    "relative deviation too large"
                );
            }
        }
    }
}
