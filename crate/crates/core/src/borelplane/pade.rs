//! Padé approximants of truncated Borel series at arbitrary precision,
//! with denominator roots by the Durand-Kerner iteration.

use crate::coeffring::{Bf, CBf};
use crate::error::Error;
use crate::series::BorelSeries;
use num::complex::Complex64;

/// Rational approximant num/den with den(0) = 1, fitted so its Taylor
/// expansion matches the source series through order p + q.
#[derive(Clone, Debug)]
pub struct PadeApproximant {
    p: usize,
    q: usize,
    source_order: usize,
    num: Vec<Bf>,
    den: Vec<Bf>,
    num_f64: Vec<f64>,
    den_f64: Vec<f64>,
    poles: Vec<(Complex64, f64)>, // (location, residue magnitude), by modulus
    poles_converged: bool,
}

impl PadeApproximant {
    pub fn degrees(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    /// Denominator poles with residue magnitudes, sorted by modulus.
    pub fn poles(&self) -> &[(Complex64, f64)] {
        &self.poles
    }

    pub fn poles_converged(&self) -> bool {
        self.poles_converged
    }

    /// High-precision evaluation.
    pub fn eval(&self, z: &CBf) -> CBf {
        let prec = z.re.prec();
        let horner = |cs: &[Bf]| {
            let mut acc = CBf::zero(prec);
            for c in cs.iter().rev() {
                acc = acc.mul(z);
                acc.re = acc.re.add(c);
            }
            acc
        };
        horner(&self.num).div(&horner(&self.den))
    }

    /// Fast f64 evaluation through pre-converted coefficients.
    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        let horner = |cs: &[f64]| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &c in cs.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        horner(&self.num_f64) / horner(&self.den_f64)
    }

    /// Distance from z to the nearest detected pole (∞ when none).
    pub fn pole_distance(&self, z: Complex64) -> f64 {
        self.poles
            .iter()
            .map(|(p, _)| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Re-expand the approximant as a Taylor series to the given order
    /// (division of power series), for consistency checks.
    pub fn taylor(&self, order: usize, prec: usize) -> Vec<Bf> {
        let num = |i: usize| -> Bf {
            self.num.get(i).cloned().unwrap_or_else(|| Bf::zero(prec))
        };
        let den = |i: usize| -> Bf {
            self.den.get(i).cloned().unwrap_or_else(|| Bf::zero(prec))
        };
        let mut out: Vec<Bf> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            // c_k = (num_k - sum_{j=1..k} den_j c_{k-j}) / den_0, den_0 = 1
            let mut acc = num(k);
            for j in 1..=k {
                acc = acc.sub(&den(j).mul(&out[k - j]));
            }
            out.push(acc);
        }
        out
    }
}

/// Fit the (p, q) Padé approximant to `f` (numeric coefficients). The
/// denominator comes from the q×q Toeplitz/Hankel system solved by Gaussian
/// elimination with partial pivoting at the coefficients' precision.
pub fn pade_fit(f: &BorelSeries<Bf>, p: usize, q: usize) -> Result<PadeApproximant, Error> {
    if p + q > f.order() {
        return Err(Error::InvalidArgument(format!(
            "(p,q) = ({p},{q}) needs order >= {}, have {}",
            p + q,
            f.order()
        )));
    }
    let prec = f
        .coeffs()
        .iter()
        .map(|c| c.prec())
        .max()
        .unwrap_or(128);
    let c = |i: isize| -> Bf {
        if i < 0 {
            Bf::zero(prec)
        } else {
            f.coeff(i as usize).clone()
        }
    };
    // solve sum_{j=1..q} c_{p+k-j} b_j = -c_{p+k} for k = 1..q.
    // Rank deficiency (the source is exactly rational of lower degree) is
    // legitimate: the system stays consistent, free unknowns are set to
    // zero, and the fit is verified by re-expansion below.
    let mut den = vec![Bf::one(prec)];
    if q > 0 {
        let mut a: Vec<Vec<Bf>> = (1..=q)
            .map(|k| {
                (1..=q)
                    .map(|j| c(p as isize + k as isize - j as isize))
                    .collect()
            })
            .collect();
        let mut rhs: Vec<Bf> = (1..=q).map(|k| c((p + k) as isize).neg()).collect();
        let scale = a
            .iter()
            .flatten()
            .filter(|v| !v.is_zero())
            .map(|v| v.abs().ln_f64())
            .fold(f64::NEG_INFINITY, f64::max);
        let negligible = scale - (prec as f64 - 24.0) * std::f64::consts::LN_2;
        let mut max_piv: f64 = f64::NEG_INFINITY;
        let mut min_piv: f64 = f64::INFINITY;
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut row = 0usize;
        for col in 0..q {
            let (piv_row, piv_ln) = (row..q)
                .map(|r| {
                    let v = &a[r][col];
                    (r, if v.is_zero() { f64::NEG_INFINITY } else { v.abs().ln_f64() })
                })
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap_or((row, f64::NEG_INFINITY));
            if piv_ln <= negligible {
                continue; // free column: b_col stays zero
            }
            max_piv = max_piv.max(piv_ln);
            min_piv = min_piv.min(piv_ln);
            a.swap(row, piv_row);
            rhs.swap(row, piv_row);
            for r in (row + 1)..q {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].div(&a[row][col]);
                for cc in col..q {
                    let t = factor.mul(&a[row][cc]);
                    a[r][cc] = a[r][cc].sub(&t);
                }
                let t = factor.mul(&rhs[row]);
                rhs[r] = rhs[r].sub(&t);
            }
            pivots.push((row, col));
            row += 1;
            if row == q {
                break;
            }
        }
        let cond = (max_piv - min_piv).exp();
        let mut b = vec![Bf::zero(prec); q];
        for &(r, col) in pivots.iter().rev() {
            let mut acc = rhs[r].clone();
            for cc in (col + 1)..q {
                if !b[cc].is_zero() {
                    acc = acc.sub(&a[r][cc].mul(&b[cc]));
                }
            }
            b[col] = acc.div(&a[r][col]);
        }
        den.extend(b);
        // verify the linear system is actually satisfied (re-expansion check):
        // a degenerate but inconsistent system must be reported, not used
        for k in 1..=q {
            let mut acc = c((p + k) as isize);
            for (j, d) in den.iter().enumerate().skip(1) {
                acc = acc.add(&d.mul(&c(p as isize + k as isize - j as isize)));
            }
            if !acc.is_zero() && acc.abs().ln_f64() > negligible {
                return Err(Error::PadeSingular { cond });
            }
        }
    }
    // numerator a_i = sum_{j=0..min(i,q)} den_j c_{i-j}
    let mut num = Vec::with_capacity(p + 1);
    for i in 0..=p {
        let mut acc = Bf::zero(prec);
        for (j, d) in den.iter().enumerate().take(i.min(q) + 1) {
            acc = acc.add(&d.mul(&c(i as isize - j as isize)));
        }
        num.push(acc);
    }
    let num_f64: Vec<f64> = num.iter().map(Bf::to_f64).collect();
    let den_f64: Vec<f64> = den.iter().map(Bf::to_f64).collect();
    let (roots, converged) = denominator_roots(&den, prec);
    let mut poles: Vec<(Complex64, f64)> = roots
        .iter()
        .map(|r| {
            let res = eval_poly(&num, r).div(&eval_poly_deriv(&den, r));
            (r.to_c64(), res.abs().to_f64())
        })
        .collect();
    poles.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()));
    Ok(PadeApproximant {
        p,
        q,
        source_order: f.order(),
        num,
        den,
        num_f64,
        den_f64,
        poles,
        poles_converged: converged,
    })
}

fn eval_poly(cs: &[Bf], z: &CBf) -> CBf {
    let prec = z.re.prec();
    let mut acc = CBf::zero(prec);
    for c in cs.iter().rev() {
        acc = acc.mul(z);
        acc.re = acc.re.add(c);
    }
    acc
}

fn eval_poly_deriv(cs: &[Bf], z: &CBf) -> CBf {
    let prec = z.re.prec();
    let mut acc = CBf::zero(prec);
    for k in (1..cs.len()).rev() {
        acc = acc.mul(z);
        acc.re = acc.re.add(&cs[k].mul_i64(k as i64));
    }
    acc
}

/// All denominator roots by Durand-Kerner at precision `prec`. Trailing
/// coefficients that vanish relative to the largest one reduce the degree.
fn denominator_roots(den: &[Bf], prec: usize) -> (Vec<CBf>, bool) {
    let ln_max = den
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.abs().ln_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut deg = den.len() - 1;
    while deg > 0 {
        let c = &den[deg];
        if !c.is_zero() && c.abs().ln_f64() > ln_max - (prec as f64 - 8.0) * std::f64::consts::LN_2
        {
            break;
        }
        deg -= 1;
    }
    if deg == 0 {
        return (vec![], true);
    }
    // monic normalization
    let lead = den[deg].clone();
    let monic: Vec<CBf> = (0..=deg)
        .map(|i| CBf::new(den[i].div(&lead), Bf::zero(prec)))
        .collect();
    // scattered initial guesses (0.4 + 0.9i)^k
    let seed = CBf::from_f64(0.4, 0.9, prec);
    let mut zs: Vec<CBf> = Vec::with_capacity(deg);
    let mut acc = seed.clone();
    for _ in 0..deg {
        zs.push(acc.clone());
        acc = acc.mul(&seed);
    }
    let eval_monic = |z: &CBf| -> CBf {
        let mut acc = CBf::zero(prec);
        for c in monic.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    };
    let tol = -((prec as f64) * 0.5) * std::f64::consts::LN_2;
    let mut converged = false;
    for _ in 0..400 {
        let mut max_move = f64::NEG_INFINITY;
        for i in 0..deg {
            let zi = zs[i].clone();
            let mut denom = CBf::new(Bf::one(prec), Bf::zero(prec));
            for (j, zj) in zs.iter().enumerate() {
                if j != i {
                    denom = denom.mul(&zi.sub(zj));
                }
            }
            let step = eval_monic(&zi).div(&denom);
            let moved = step.abs();
            if !moved.is_zero() {
                max_move = max_move.max(moved.ln_f64());
            }
            zs[i] = zi.sub(&step);
        }
        if max_move <= tol {
            converged = true;
            break;
        }
    }
    (zs, converged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::digits_to_bits;

    fn bf(x: f64) -> Bf {
        Bf::from_f64(x, digits_to_bits(64))
    }

    fn geometric(ratio: f64, order: usize) -> BorelSeries<Bf> {
        // coefficients ratio^n: truncation of 1/(1 - ratio ζ)
        BorelSeries::from_coeffs((0..=order).map(|n| bf(ratio).powi(n)).collect())
    }

    #[test]
    fn simple_pole_exact_denominator() {
        // f = 1/(1-ζ): (0,1) gives den = 1 - ζ
        let f = geometric(1.0, 6);
        let a = pade_fit(&f, 0, 1).unwrap();
        assert!((a.den_f64[0] - 1.0).abs() < 1e-30);
        assert!((a.den_f64[1] + 1.0).abs() < 1e-30);
        assert_eq!(a.poles().len(), 1);
        assert!((a.poles()[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-30);
    }

    #[test]
    fn pole_at_one_third() {
        // coefficients 3^n: pole at 1/3
        let f = geometric(3.0, 6);
        let a = pade_fit(&f, 0, 1).unwrap();
        assert!((a.poles()[0].0.re - 1.0 / 3.0).abs() < 1e-25);
    }

    #[test]
    fn reexpansion_matches_source() {
        // rational function with two poles: 1/(1-ζ) + 1/(1+2ζ)
        let order = 12;
        let f = BorelSeries::from_coeffs(
            (0..=order)
                .map(|n| bf(1.0).add(&bf(-2.0).powi(n)))
                .collect(),
        );
        let a = pade_fit(&f, 6, 6).unwrap();
        let taylor = a.taylor(order, digits_to_bits(64));
        for (n, t) in taylor.iter().enumerate() {
            let diff = t.sub(f.coeff(n)).abs();
            assert!(
                diff.is_zero() || diff.ln_f64() < -40.0 * std::f64::consts::LN_10,
                "coefficient {n} differs"
            );
        }
        // and it recovers the exact poles 1 and -1/2
        let ps = a.poles();
        assert!(ps.iter().any(|(z, _)| (z - Complex64::new(-0.5, 0.0)).norm() < 1e-12));
        assert!(ps.iter().any(|(z, _)| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn rejects_oversized_fit() {
        let f = geometric(1.0, 4);
        assert!(pade_fit(&f, 3, 3).is_err());
    }

    #[test]
    fn eval_consistency_between_precisions() {
        let f = geometric(2.0, 8);
        let a = pade_fit(&f, 4, 4).unwrap();
        let z = Complex64::new(0.1, 0.05);
        let hi = a.eval(&CBf::from_f64(z.re, z.im, digits_to_bits(64))).to_c64();
        let lo = a.eval_f64(z);
        assert!((hi - lo).norm() < 1e-13);
    }
}
