//! The coefficients g_n(L) of the a-expansion of the two-point function.
//!
//! Two independent routes compute the same polynomials:
//!
//! - [`g_n_poly`]: the closed form over compositions,
//!   g_n(L) = Σ_comps c_{i1}···c_{iq} · K_{i1..iq} · L^q / q!,
//!   where K is the prefix-product coefficient of [`super::k_coefficient`].
//!   (Equivalently Σ_q L^q/q · Σ_comps c·K/(q−1)!; the 1/(q−1)! relative to
//!   the bare K recursion comes from the repeated integration in L and is
//!   what makes this expansion agree exactly with the γ_k one.)
//! - [`g_polys_recursive`]: direct integration of the RGE system
//!   g_n'(L) = Σ_p c_p (1+3(n−p)) g_{n−p}(L), g_n(0) = 0 for n ≥ 1.

use super::comb::{compositions_mask_iter, k_coefficient};
use crate::coeffring::{Rational, ZetaPoly};
use crate::error::Error;
use crate::series::{SeriesA, SeriesL};
use num::BigInt;

/// g_n(L) via the composition closed form; g_0 = 1.
pub fn g_n_poly(n: usize, gamma: &SeriesA<ZetaPoly>) -> Result<SeriesL<ZetaPoly>, Error> {
    if n == 0 {
        return Ok(SeriesL::one());
    }
    if n > gamma.order() {
        return Err(Error::InvalidArgument(format!(
            "g_{n} needs γ to order {n}, have {}",
            gamma.order()
        )));
    }
    let mut coeffs = vec![ZetaPoly::zero(); n + 1];
    for comp in compositions_mask_iter(n as u32)? {
        let q = comp.len();
        let mut prod = ZetaPoly::constant(k_coefficient(&comp));
        for &part in comp.parts() {
            prod = prod.mul(gamma.coeff(part as usize));
        }
        let mut qfact = BigInt::from(1);
        for i in 2..=q {
            qfact *= BigInt::from(i);
        }
        coeffs[q] = coeffs[q].add(&prod.scale(&Rational::new(BigInt::from(1), qfact)));
    }
    Ok(SeriesL::from_coeffs(coeffs))
}

/// g_0..g_nmax by integrating the RGE recursion; exact.
pub fn g_polys_recursive(
    nmax: usize,
    gamma: &SeriesA<ZetaPoly>,
) -> Result<Vec<SeriesL<ZetaPoly>>, Error> {
    if nmax > gamma.order() {
        return Err(Error::InvalidArgument(format!(
            "g_{nmax} needs γ to order {nmax}, have {}",
            gamma.order()
        )));
    }
    let mut out: Vec<SeriesL<ZetaPoly>> = vec![SeriesL::one()];
    for n in 1..=nmax {
        let mut deriv = SeriesL::zero();
        for p in 1..=n {
            let w = gamma.coeff(p).mul_int(1 + 3 * (n - p) as i64);
            deriv = deriv.add(&out[n - p].scale(&w));
        }
        out.push(deriv.integrate());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;
    use crate::model::{mellin_coeffs, solve_sde};

    fn gamma(order: usize) -> SeriesA<ZetaPoly> {
        solve_sde(order, &mellin_coeffs(order.saturating_sub(1).max(2))).unwrap()
    }

    #[test]
    fn g0_and_g1() {
        let g = gamma(4);
        assert_eq!(g_n_poly(0, &g).unwrap(), SeriesL::one());
        // g_1(L) = L
        let g1 = g_n_poly(1, &g).unwrap();
        assert_eq!(g1.coeffs(), &[ZetaPoly::zero(), ZetaPoly::one()]);
    }

    #[test]
    fn g2_closed_form() {
        // g_2(L) = 2L² − 2L from (c_1)²(1+3(2−1))L²/2 + c_2 L
        let g = gamma(4);
        let g2 = g_n_poly(2, &g).unwrap();
        assert_eq!(
            g2.coeffs(),
            &[
                ZetaPoly::zero(),
                ZetaPoly::from_int(-2),
                ZetaPoly::from_int(2)
            ]
        );
    }

    #[test]
    fn g3_values() {
        // g_3(L) = 14L − 11L² + (14/3)L³
        let g = gamma(4);
        let g3 = g_n_poly(3, &g).unwrap();
        assert_eq!(
            g3.coeffs(),
            &[
                ZetaPoly::zero(),
                ZetaPoly::from_int(14),
                ZetaPoly::from_int(-11),
                ZetaPoly::constant(rat(14, 3))
            ]
        );
    }

    #[test]
    fn routes_agree() {
        let g = gamma(9);
        let rec = g_polys_recursive(9, &g).unwrap();
        for n in 0..=9 {
            assert_eq!(g_n_poly(n, &g).unwrap(), rec[n], "g_{n}");
        }
    }

    #[test]
    fn needs_enough_orders() {
        let g = gamma(3);
        assert!(g_n_poly(5, &g).is_err());
    }
}
