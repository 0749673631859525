//! The Wess-Zumino system: Mellin kernel coefficients, the Schwinger-Dyson
//! fixed point for the anomalous dimension γ, RGE solutions in both
//! expansions, combinatorial coefficients, and bound reports.

mod bounds;
mod comb;
mod gpoly;

pub use bounds::{
    bound_report, mellin_h_exp_form, mellin_h_gamma_form, torus_sup, BoundReport, KOnesComparison,
    Lemma44Fit, Lemma45Check, Lemma54Check, Prop46Check, RatioCheck,
};
pub use comb::{
    composition_census, compositions_mask_iter, k_coefficient, word_count, Composition,
    KCoefficient, WordCountReport,
};
pub use gpoly::{g_n_poly, g_polys_recursive};

use crate::coeffring::ZetaPoly;
use crate::error::Error;
use crate::series::{BiSeriesXY, Coeff, SeriesA};
use num::rational::BigRational;
use num::BigInt;

/// Exact Taylor coefficients X(n, m) of the one-loop Mellin kernel H(x, y)
/// for n + m ≤ bound, in ℚ[odd zetas].
#[derive(Clone, Debug)]
pub struct MellinTable {
    bound: usize,
    rows: Vec<Vec<ZetaPoly>>, // rows[n][m] with n + m <= bound
}

impl MellinTable {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn get(&self, n: usize, m: usize) -> &ZetaPoly {
        &self.rows[n][m]
    }

    pub fn rows(&self) -> &[Vec<ZetaPoly>] {
        &self.rows
    }

    pub fn from_rows(rows: Vec<Vec<ZetaPoly>>) -> Result<Self, Error> {
        let bound = rows.len().checked_sub(1).ok_or_else(|| {
            Error::InvalidArgument("Mellin table needs at least the (0,0) entry".into())
        })?;
        for (n, row) in rows.iter().enumerate() {
            if row.len() != bound + 1 - n {
                return Err(Error::InvalidArgument(format!(
                    "Mellin row {n} has {} entries, expected {}",
                    row.len(),
                    bound + 1 - n
                )));
            }
        }
        Ok(Self { bound, rows })
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Expand H(x,y) = exp(2 Σ_k ζ(2k+1)/(2k+1)·((x+y)^{2k+1} − x^{2k+1} − y^{2k+1}))
/// / (1+x+y) exactly to total degree `bound`.
///
/// The geometric factor contributes (−1)^d (x+y)^d; the exponential's argument
/// has no pure x^N or y^N terms, which forces X_{0n} = X_{n0} = (−1)^n.
pub fn mellin_coeffs(bound: usize) -> MellinTable {
    let d = bound;
    // argument of the exponential
    let mut arg = BiSeriesXY::<ZetaPoly>::zero(d);
    let mut k = 1usize;
    while 2 * k + 1 <= d {
        let kk = 2 * k + 1;
        let z = ZetaPoly::zeta(kk as u32).expect("odd index");
        let w = z.scale(&BigRational::new(BigInt::from(2), BigInt::from(kk)));
        // (x+y)^kk − x^kk − y^kk: the mixed terms x^t y^(kk−t), 0 < t < kk
        for t in 1..kk {
            let c = w.scale(&BigRational::from_integer(binomial(kk as u64, t as u64)));
            arg.add_to(t, kk - t, &c);
        }
        k += 1;
    }
    let exp_part = arg.exp().expect("argument has zero constant term");
    // 1/(1+x+y) = Σ_d (−1)^d (x+y)^d
    let mut geo = BiSeriesXY::<ZetaPoly>::zero(d);
    for deg in 0..=d {
        let sign = if deg % 2 == 0 { 1 } else { -1 };
        for t in 0..=deg {
            let c = BigRational::from_integer(binomial(deg as u64, t as u64) * BigInt::from(sign));
            geo.add_to(t, deg - t, &ZetaPoly::constant(c));
        }
    }
    let h = exp_part.mul(&geo).expect("equal bounds");
    let rows = (0..=d)
        .map(|n| (0..=(d - n)).map(|m| h.get(n, m).clone()).collect())
        .collect();
    MellinTable { bound: d, rows }
}

/// γ_k in the L-expansion of G: γ_0 = 1 and γ_{k+1} = γ·(1+3a∂_a)γ_k.
/// The valuation of γ_k is k.
pub fn gamma_k_series<C: Coeff>(gamma: &SeriesA<C>, k: usize) -> SeriesA<C> {
    let mut gk = SeriesA::monomial(C::one(), 0, gamma.order());
    for _ in 0..k {
        gk = gamma.mul(&gk.rg_operator()).expect("equal orders");
    }
    gk
}

/// Fill γ_0..γ_kmax in one sweep (each step reuses the previous γ_k).
pub fn gamma_k_all<C: Coeff>(gamma: &SeriesA<C>, kmax: usize) -> Vec<SeriesA<C>> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(SeriesA::monomial(C::one(), 0, gamma.order()));
    for k in 0..kmax {
        let next = gamma.mul(&out[k].rg_operator()).expect("equal orders");
        out.push(next);
    }
    out
}

/// Solve the Schwinger-Dyson fixed point γ = a·Σ_{n,m≥0} X_nm γ_n γ_m to
/// order `n`, order by order: the coefficient of a^{p+1} on the right
/// depends only on coefficients of γ of order ≤ p, so a single incremental
/// pass determines the unique formal solution (the same one the fixed-point
/// iteration γ ↦ Φ(γ) converges to in exactly N steps).
pub fn solve_sde(n: usize, table: &MellinTable) -> Result<SeriesA<ZetaPoly>, Error> {
    if n < 1 {
        return Err(Error::InvalidArgument("order must be >= 1".into()));
    }
    if table.bound() + 1 < n {
        return Err(Error::InvalidArgument(format!(
            "Mellin table bound {} too small for order {n} (need >= {})",
            table.bound(),
            n - 1
        )));
    }
    let kmax = n.saturating_sub(1); // only γ_k with k ≤ n−1 can contribute
    let mut gamma = SeriesA::<ZetaPoly>::zero(n);
    // gk[k][o]: coefficient of a^o in γ_k, filled column-by-column
    let mut gk: Vec<Vec<ZetaPoly>> = vec![vec![ZetaPoly::zero(); n + 1]; kmax + 1];
    gk[0][0] = ZetaPoly::one();
    let mut filled = 0usize; // γ_k columns valid through this order
    for p in 1..=n {
        // extend γ_k columns up to order p−1 using γ known through p−1
        for o in (filled + 1)..p {
            for ki in 1..=kmax {
                let mut acc = ZetaPoly::zero();
                for i in 1..=o {
                    let gi = gamma.coeff(i);
                    if gi.is_zero() {
                        continue;
                    }
                    let prev = &gk[ki - 1][o - i];
                    if prev.is_zero() {
                        continue;
                    }
                    acc = acc.add(&gi.mul(prev).mul_int(1 + 3 * (o - i) as i64));
                }
                gk[ki][o] = acc;
            }
        }
        filled = filled.max(p - 1);
        // c_p = [a^{p-1}] Σ_{n,m} X_nm γ_n γ_m
        let mut tot = ZetaPoly::zero();
        for nn in 0..=kmax.min(p - 1) {
            for mm in 0..=(p - 1 - nn).min(kmax) {
                let x = table.get(nn, mm);
                if x.is_zero() {
                    continue;
                }
                // [a^{p-1}] γ_nn γ_mm, using valuations nn and mm
                let mut acc = ZetaPoly::zero();
                for i in nn..=(p - 1).saturating_sub(mm) {
                    let a = &gk[nn][i];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &gk[mm][p - 1 - i];
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                if !acc.is_zero() {
                    tot = tot.add(&x.mul(&acc));
                }
            }
        }
        gamma.set_coeff(p, tot);
    }
    Ok(gamma)
}

/// Literal fixed-point iteration γ^{(p+1)} = a·Σ X_nm γ_n[γ^{(p)}] γ_m[γ^{(p)}]
/// starting from γ^{(0)} = a. Converges in exactly `n` iterations by
/// valuation growth. Kept as an independent cross-check of [`solve_sde`].
pub fn solve_sde_fixed_point(n: usize, table: &MellinTable) -> Result<SeriesA<ZetaPoly>, Error> {
    if n < 1 {
        return Err(Error::InvalidArgument("order must be >= 1".into()));
    }
    let mut gamma = SeriesA::monomial(ZetaPoly::one(), 1, n);
    for _ in 0..n {
        gamma = sde_rhs(&gamma, table)?;
    }
    Ok(gamma)
}

/// The right-hand side a·Σ_{n,m≥0} X_nm γ_n γ_m evaluated on a full series.
pub fn sde_rhs(gamma: &SeriesA<ZetaPoly>, table: &MellinTable) -> Result<SeriesA<ZetaPoly>, Error> {
    let n = gamma.order();
    let kmax = n.saturating_sub(1);
    let gks = gamma_k_all(gamma, kmax);
    let mut sum = SeriesA::<ZetaPoly>::zero(n);
    for (nn, gn) in gks.iter().enumerate() {
        // S_n = Σ_m X_nm γ_m with n + m ≤ n−1 (higher (n,m) cannot reach order n)
        let mut s = SeriesA::<ZetaPoly>::zero(n);
        let mut any = false;
        for (mm, gm) in gks.iter().enumerate() {
            if nn + mm > kmax {
                break;
            }
            let x = table.get(nn, mm);
            if x.is_zero() {
                continue;
            }
            any = true;
            s = s.add(&gm.scale(x))?;
        }
        if any {
            sum = sum.add(&gn.mul(&s)?)?;
        }
    }
    // multiply by a (shift up one order)
    let a = SeriesA::monomial(ZetaPoly::one(), 1, n);
    a.mul(&sum)
}

/// Residual γ − a·Σ X_nm γ_n γ_m of a truncated solution: identically zero
/// through the truncation order for the formal solution.
pub fn sde_residual(
    gamma: &SeriesA<ZetaPoly>,
    table: &MellinTable,
) -> Result<SeriesA<ZetaPoly>, Error> {
    gamma.sub(&sde_rhs(gamma, table)?)
}

/// Outcome of comparing the two expansions of G(L, a) coefficient-by-
/// coefficient over the square a^n L^k, n, k ≤ order.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub order: usize,
    pub coefficients_checked: usize,
    pub equal: bool,
    pub first_mismatch: Option<(usize, usize)>,
}

/// Assemble the bivariate truncation of G(L, a) from the L-expansion
/// (γ_k Lᵏ/k!) and from the a-expansion (g_n(L) aⁿ) and compare exactly.
pub fn cross_check_g(gamma: &SeriesA<ZetaPoly>, order: usize) -> Result<CrossCheck, Error> {
    if gamma.order() < order {
        return Err(Error::InvalidArgument(format!(
            "γ order {} below requested cross-check order {order}",
            gamma.order()
        )));
    }
    let gks = gamma_k_all(gamma, order);
    let gpolys: Vec<_> = (0..=order)
        .map(|n| g_n_poly(n, gamma))
        .collect::<Result<_, _>>()?;
    let mut checked = 0usize;
    for k in 0..=order {
        // γ_k / k! gives the coefficients of L^k
        let mut kfact_inv = BigRational::from_integer(BigInt::from(1));
        for i in 2..=k {
            kfact_inv /= BigRational::from_integer(BigInt::from(i));
        }
        for n in 0..=order {
            let lhs = gks[k].coeff(n).scale(&kfact_inv);
            let rhs = gpolys[n].coeff(k);
            checked += 1;
            if lhs != rhs {
                return Ok(CrossCheck {
                    order,
                    coefficients_checked: checked,
                    equal: false,
                    first_mismatch: Some((n, k)),
                });
            }
        }
    }
    Ok(CrossCheck {
        order,
        coefficients_checked: checked,
        equal: true,
        first_mismatch: None,
    })
}
