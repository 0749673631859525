//! Truncated formal-series engine: Cauchy products, the RG differential
//! operator, the formal Borel transform, and truncated convolution.
//!
//! All series are generic over a coefficient ring [`Coeff`], so the same
//! operations run in exact mode (coefficients in ℚ[odd zetas]) and in
//! numeric mode (arbitrary-precision floats), without ever mixing the two.
//! Truncation orders are explicit everywhere; operations on mismatched
//! orders are errors rather than silent re-truncations.
//!
//! The Borel convention is fixed by the identification a = 1/z: the
//! transform maps a^{n+1} ↦ ζ^n / n!, products to convolutions.

use crate::coeffring::{Bf, Rational, Scalar, ZetaPoly};
use crate::error::Error;
use num::Zero;

/// Ring operations required of series coefficients.
pub trait Coeff: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiply by a small natural number.
    fn mul_nat(&self, n: u64) -> Self;
    /// Divide by a small positive natural number (exact in exact mode).
    fn div_nat(&self, n: u64) -> Self;
}

impl Coeff for ZetaPoly {
    fn zero() -> Self {
        ZetaPoly::zero()
    }
    fn one() -> Self {
        ZetaPoly::one()
    }
    fn is_zero(&self) -> bool {
        ZetaPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        ZetaPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        ZetaPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ZetaPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        ZetaPoly::neg(self)
    }
    fn mul_nat(&self, n: u64) -> Self {
        self.mul_int(n as i64)
    }
    fn div_nat(&self, n: u64) -> Self {
        self.div_int(n as i64)
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_nat(&self, n: u64) -> Self {
        self * Rational::from_integer(n.into())
    }
    fn div_nat(&self, n: u64) -> Self {
        self / Rational::from_integer(n.into())
    }
}

/// Working precision (bits) of numeric-mode identity elements; absorbed by
/// the other operand's precision on first contact.
const BF_SEED_PREC: usize = 96;

impl Coeff for Bf {
    fn zero() -> Self {
        Bf::zero(BF_SEED_PREC)
    }
    fn one() -> Self {
        Bf::one(BF_SEED_PREC)
    }
    fn is_zero(&self) -> bool {
        Bf::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Bf::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Bf::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Bf::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Bf::neg(self)
    }
    fn mul_nat(&self, n: u64) -> Self {
        self.mul_i64(n as i64)
    }
    fn div_nat(&self, n: u64) -> Self {
        self.div_i64(n as i64)
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::Exact(ZetaPoly::zero())
    }
    fn one() -> Self {
        Scalar::Exact(ZetaPoly::one())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Scalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Scalar::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Scalar::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        match self {
            Scalar::Exact(p) => Scalar::Exact(p.neg()),
            Scalar::Numeric(x) => Scalar::Numeric(x.neg()),
        }
    }
    fn mul_nat(&self, n: u64) -> Self {
        match self {
            Scalar::Exact(p) => Scalar::Exact(p.mul_int(n as i64)),
            Scalar::Numeric(x) => Scalar::Numeric(x.mul_i64(n as i64)),
        }
    }
    fn div_nat(&self, n: u64) -> Self {
        match self {
            Scalar::Exact(p) => Scalar::Exact(p.div_int(n as i64)),
            Scalar::Numeric(x) => Scalar::Numeric(x.div_i64(n as i64)),
        }
    }
}

/// Truncated formal power series in the coupling a, keeping a^0 … a^N.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesA<C: Coeff> {
    coeffs: Vec<C>,
}

/// Truncated series in the Borel variable ζ, keeping ζ^0 … ζ^M.
#[derive(Clone, Debug, PartialEq)]
pub struct BorelSeries<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> SeriesA<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the a^0 slot");
        Self { coeffs }
    }

    /// c·a^k truncated at `order`.
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        self.coeffs[n] = c;
    }

    /// Smallest index with a nonzero coefficient; `None` marks the zero
    /// series (valuation +∞).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_order(&self, rhs: &Self) -> Result<(), Error> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch(self.order(), rhs.order()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_order(rhs)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_order(rhs)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_order(rhs)?;
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// The RG operator (1 + 3a∂_a): coefficient n maps to (1+3n)·c_n.
    pub fn rg_operator(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c.mul_nat(1 + 3 * n as u64))
                .collect(),
        }
    }

    /// Formal Borel transform in the convention a = 1/z: a^{n+1} ↦ ζ^n/n!.
    /// Requires valuation ≥ 1; the output order is the input order − 1.
    pub fn borel_transform(&self) -> Result<BorelSeries<C>, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = Vec::with_capacity(self.order());
        for n in 0..self.order() {
            let mut c = self.coeffs[n + 1].clone();
            for k in 2..=n as u64 {
                c = c.div_nat(k);
            }
            out.push(c);
        }
        Ok(BorelSeries { coeffs: out })
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SeriesA<D> {
        SeriesA {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Restrict to a smaller truncation order.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }
}

impl<C: Coeff> BorelSeries<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch(self.order(), rhs.order()));
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// Inverse Borel transform: ζ^n ↦ n!·a^{n+1}; output order = order + 1.
    pub fn inverse_borel(&self) -> SeriesA<C> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        for (n, c) in self.coeffs.iter().enumerate() {
            let mut v = c.clone();
            for k in 2..=n as u64 {
                v = v.mul_nat(k);
            }
            coeffs.push(v);
        }
        SeriesA { coeffs }
    }

    /// Truncated convolution, defined through the product-transform identity
    /// B(f̃·g̃) = f̂ ⋆ ĝ so exactness is inherited from the Cauchy product.
    pub fn convolve(&self, rhs: &Self) -> Result<Self, Error> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch(self.order(), rhs.order()));
        }
        let prod = self.inverse_borel().mul(&rhs.inverse_borel())?;
        let full = prod.borel_transform()?;
        Ok(Self {
            coeffs: full.coeffs[..=self.order()].to_vec(),
        })
    }

    /// The Borel image of the RG operator: (4 + 3ζ∂_ζ) is (4+3n)·c_n.
    pub fn rg_operator(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c.mul_nat(4 + 3 * n as u64))
                .collect(),
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BorelSeries<D> {
        BorelSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Polynomial in the kinematic parameter L. The stored degree equals the
/// actual degree: no trailing zero coefficients (the zero polynomial stores
/// an empty coefficient list).
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesL<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> SeriesL<C> {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![C::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Antiderivative with zero constant term: L^k ↦ L^{k+1}/(k+1).
    pub fn integrate(&self) -> Self {
        let mut out = vec![C::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c.div_nat(k as u64 + 1));
        }
        Self::from_coeffs(out)
    }
}

/// Bivariate series truncated by total degree: coefficients for (i, j) with
/// i + j ≤ D, the triangular index set complete by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeriesXY<C: Coeff> {
    bound: usize,
    coeffs: Vec<C>, // row-major: row i holds j = 0..=D-i
}

impl<C: Coeff> BiSeriesXY<C> {
    fn len_for(bound: usize) -> usize {
        (bound + 1) * (bound + 2) / 2
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + j <= self.bound);
        i * (self.bound + 1) - i * i.saturating_sub(1) / 2 + j
    }

    pub fn zero(bound: usize) -> Self {
        Self {
            bound,
            coeffs: vec![C::zero(); Self::len_for(bound)],
        }
    }

    pub fn constant(c: C, bound: usize) -> Self {
        let mut s = Self::zero(bound);
        s.set(0, 0, c);
        s
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.coeffs[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        let k = self.idx(i, j);
        self.coeffs[k] = c;
    }

    pub fn add_to(&mut self, i: usize, j: usize, c: &C) {
        let k = self.idx(i, j);
        self.coeffs[k] = self.coeffs[k].add(c);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        if self.bound != rhs.bound {
            return Err(Error::OrderMismatch(self.bound, rhs.bound));
        }
        Ok(Self {
            bound: self.bound,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Product truncated to total degree ≤ bound.
    pub fn mul(&self, rhs: &Self) -> Result<Self, Error> {
        if self.bound != rhs.bound {
            return Err(Error::OrderMismatch(self.bound, rhs.bound));
        }
        let d = self.bound;
        let mut out = Self::zero(d);
        for i1 in 0..=d {
            for j1 in 0..=(d - i1) {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(d - i1 - j1) {
                    for j2 in 0..=(d - i1 - j1 - i2) {
                        let b = rhs.get(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        out.add_to(i1 + i2, j1 + j2, &a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Truncated exponential Σ s^m/m!; requires a zero constant term.
    pub fn exp(&self) -> Result<Self, Error> {
        if !self.get(0, 0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = Self::constant(C::one(), self.bound);
        let mut term = Self::constant(C::one(), self.bound);
        for m in 1..=self.bound as u64 {
            term = term.mul(self)?;
            if term.is_zero() {
                break;
            }
            term = Self {
                bound: term.bound,
                coeffs: term.coeffs.iter().map(|c| c.div_nat(m)).collect(),
            };
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Numeric evaluation of an exact L-polynomial at an f64 point, via zeta
/// substitution at the given decimal precision, pushed to f64.
pub fn eval_l_poly_f64(p: &SeriesL<ZetaPoly>, l: f64, precision: u32) -> Result<f64, Error> {
    let mut acc = 0.0f64;
    for c in p.coeffs().iter().rev() {
        acc = acc * l + crate::coeffring::zeta::zeta_eval(c, precision)?.to_f64();
    }
    Ok(acc)
}

/// Exact L-polynomial evaluation at a rational point, when every coefficient
/// is itself rational.
pub fn eval_l_poly_rational(p: &SeriesL<ZetaPoly>, l: &Rational) -> Option<Rational> {
    let mut acc: Rational = Zero::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc * l + c.as_rational()?;
    }
    Some(acc)
}
