//! Borel-plane analysis: Padé analytic continuation, singularity location,
//! Gevrey-class estimation, lateral boundary values, and the scalar bound
//! recursions.

mod checks;
mod pade;

pub use checks::{
    asymptotic_probe, bound_recursion_check, star_bound_check, AsymptoticProfile,
    BoundRecursionRow, ExpFit, StarBoundSample,
};
pub use pade::{pade_fit, PadeApproximant};

use crate::coeffring::{Bf, CBf};
use crate::error::Error;
use crate::series::{BorelSeries, SeriesA};
use num::complex::Complex64;

/// A pole candidate from the scan.
#[derive(Clone, Debug)]
pub struct PolePoint {
    pub location: Complex64,
    pub residue_mag: f64,
    /// Persists within 1e-3 across the two consecutive Padé orders.
    pub stable: bool,
}

/// Result of a two-order diagonal Padé pole scan, sorted by modulus.
///
/// The scan reports singular-point locations, not singularity types: a
/// logarithmic branch point is modeled by the approximant as a cluster of
/// poles along the cut, and the nearest cluster member marks the branch
/// point. Type classification is out of scope.
#[derive(Clone, Debug)]
pub struct SingularityScan {
    pub orders: ((usize, usize), (usize, usize)),
    pub poles: Vec<PolePoint>,
}

/// Tolerance for pole persistence between consecutive orders.
pub const POLE_STABILITY_TOL: f64 = 1e-3;
/// Froissart-doublet filter: poles with smaller residues are noise.
pub const RESIDUE_FLOOR: f64 = 1e-8;

impl SingularityScan {
    pub fn stable_poles(&self) -> impl Iterator<Item = &PolePoint> {
        self.poles.iter().filter(|p| p.stable)
    }

    /// Nearest stable pole to a target location, if any.
    pub fn nearest_stable(&self, target: Complex64) -> Option<&PolePoint> {
        self.stable_poles()
            .min_by(|a, b| (a.location - target).norm().total_cmp(&(b.location - target).norm()))
    }
}

/// Locate singular points of a Borel series by diagonal Padé approximants at
/// two consecutive orders (m−1, m−1) and (m, m) with m = order/2. Poles of
/// the higher order are reported; a pole is stable when the lower order has
/// a pole within [`POLE_STABILITY_TOL`]. Froissart doublets are dropped by
/// the residue filter.
pub fn singularity_scan(f: &BorelSeries<Bf>) -> Result<SingularityScan, Error> {
    if f.order() < 10 {
        return Err(Error::InvalidArgument(format!(
            "scan needs order >= 10, have {}",
            f.order()
        )));
    }
    let m = f.order() / 2;
    let fit_diag = |mm: usize| -> Result<PadeApproximant, Error> {
        match pade_fit(f, mm, mm) {
            Ok(a) if a.poles_converged() => Ok(a),
            // fall back one diagonal step on singular systems
            Ok(_) | Err(Error::PadeSingular { .. }) => pade_fit(f, mm - 1, mm - 1),
            Err(e) => Err(e),
        }
    };
    let hi = fit_diag(m)?;
    let lo = fit_diag(m - 1)?;
    let mut poles: Vec<PolePoint> = hi
        .poles()
        .iter()
        .filter(|(_, res)| *res > RESIDUE_FLOOR)
        .map(|&(z, res)| {
            let moved = lo
                .poles()
                .iter()
                .map(|(w, _)| (z - w).norm())
                .fold(f64::INFINITY, f64::min);
            PolePoint {
                location: z,
                residue_mag: res,
                stable: moved < POLE_STABILITY_TOL,
            }
        })
        .collect();
    poles.sort_by(|a, b| a.location.norm().total_cmp(&b.location.norm()));
    Ok(SingularityScan {
        orders: (hi.degrees(), lo.degrees()),
        poles,
    })
}

/// Gevrey-class fit |a_n| ≤ A·Bⁿ·n!.
#[derive(Clone, Debug)]
pub struct GevreyFit {
    pub a: f64,
    pub b: f64,
    /// Implied Borel radius estimate 1/B.
    pub radius: f64,
    /// |a_n| / (A Bⁿ n!) per n; all ≤ 1 by construction of A.
    pub margins: Vec<f64>,
}

/// Fit Gevrey-1 constants: B is the max of (|a_n|/n!)^{1/n} over a trailing
/// window (the last third, starting no earlier than n = 5), A the smallest
/// prefactor covering all n.
pub fn gevrey_fit(f: &SeriesA<Bf>) -> Result<GevreyFit, Error> {
    let n_ord = f.order();
    if n_ord < 5 {
        return Err(Error::InvalidArgument("gevrey fit needs order >= 5".into()));
    }
    let ln_abs: Vec<f64> = (1..=n_ord)
        .map(|n| {
            let c = f.coeff(n);
            if c.is_zero() {
                f64::NEG_INFINITY
            } else {
                c.abs().ln_f64()
            }
        })
        .collect();
    let ln_fact = |n: usize| -> f64 { (2..=n).map(|k| (k as f64).ln()).sum() };
    let window_start = (2 * n_ord / 3).max(5);
    let ln_b = (window_start..=n_ord)
        .map(|n| (ln_abs[n - 1] - ln_fact(n)) / n as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let b = ln_b.exp();
    let ln_a = (1..=n_ord)
        .map(|n| ln_abs[n - 1] - n as f64 * ln_b - ln_fact(n))
        .fold(f64::NEG_INFINITY, f64::max);
    let a = ln_a.exp();
    let margins = (1..=n_ord)
        .map(|n| (ln_abs[n - 1] - ln_a - n as f64 * ln_b - ln_fact(n)).exp())
        .collect();
    Ok(GevreyFit {
        a,
        b,
        radius: 1.0 / b,
        margins,
    })
}

/// Which side of the cut a lateral value approaches from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Boundary value of the continuation at ζ ± iε. Errors when the evaluation
/// point sits within 10·ε of a detected pole; callers refine toward the cut
/// with Richardson extrapolation over a decreasing ε schedule.
pub fn lateral_value(
    approx: &PadeApproximant,
    zeta: f64,
    side: Side,
    eps: f64,
) -> Result<Complex64, Error> {
    if !(zeta > 0.0 && eps > 0.0) {
        return Err(Error::InvalidArgument(
            "lateral value needs ζ > 0 and ε > 0".into(),
        ));
    }
    let z = Complex64::new(zeta, if side == Side::Plus { eps } else { -eps });
    let dist = approx.pole_distance(Complex64::new(zeta, 0.0));
    if dist < 10.0 * eps {
        return Err(Error::PoleProximity {
            distance: dist,
            guard: 10.0 * eps,
        });
    }
    // f64 path is accurate to ~1e-12 here; use the high-precision path so
    // Schwarz-reflection checks at 1e-10 are limited by f64 rounding only
    let prec = Bf::zero(96).prec().max(192);
    Ok(approx.eval(&CBf::from_f64(z.re, z.im, prec)).to_c64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::digits_to_bits;

    const P64: usize = 213 + 32;

    fn bf(x: f64) -> Bf {
        Bf::from_f64(x, P64)
    }

    #[test]
    fn scan_single_pole() {
        // truncation of 1/(1/3 - ζ) = 3·Σ (3ζ)^n
        let f = BorelSeries::from_coeffs((0..=12).map(|n| bf(3.0).powi(n + 1)).collect());
        let scan = singularity_scan(&f).unwrap();
        let stable: Vec<_> = scan.stable_poles().collect();
        assert!(!stable.is_empty());
        assert!((stable[0].location - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn scan_symmetric_poles() {
        // 1/(1/9 - ζ²) = 9·Σ (9ζ²)^k: poles at ±1/3
        let f = BorelSeries::from_coeffs(
            (0..=12)
                .map(|n| if n % 2 == 0 { bf(9.0).powi(n / 2 + 1) } else { bf(0.0) })
                .collect(),
        );
        let scan = singularity_scan(&f).unwrap();
        let near = |t: f64| {
            scan.nearest_stable(Complex64::new(t, 0.0))
                .map(|p| (p.location - Complex64::new(t, 0.0)).norm())
                .unwrap_or(f64::INFINITY)
        };
        assert!(near(1.0 / 3.0) < 1e-9, "pole near +1/3");
        assert!(near(-1.0 / 3.0) < 1e-9, "pole near -1/3");
    }

    #[test]
    fn gevrey_fit_factorial() {
        // a_n = n!: A = 1, B = 1
        let mut c = vec![bf(0.0)];
        let mut fact = 1.0f64;
        for n in 1..=12 {
            fact *= n as f64;
            c.push(bf(fact));
        }
        let f = SeriesA::from_coeffs(c);
        let fit = gevrey_fit(&f).unwrap();
        assert!((fit.b - 1.0).abs() < 1e-12);
        assert!((fit.a - 1.0).abs() < 1e-12);
        assert!(fit.margins.iter().all(|&m| m <= 1.0 + 1e-12));
    }

    #[test]
    fn gevrey_fit_radius_one_third() {
        // a_n = 3^n n!: B = 3, radius 1/3
        let mut c = vec![bf(0.0)];
        let mut fact = 1.0f64;
        for n in 1..=12 {
            fact *= n as f64;
            c.push(bf(fact * 3f64.powi(n)));
        }
        let fit = gevrey_fit(&SeriesA::from_coeffs(c)).unwrap();
        assert!((fit.b - 3.0).abs() < 1e-12);
        assert!((fit.radius - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn lateral_entire_function() {
        // e^ζ has no cut: both sides see the same value within 1e-10
        let mut c = Vec::new();
        let mut fact = 1.0f64;
        for n in 0..=16usize {
            if n > 1 {
                fact *= n as f64;
            }
            c.push(bf(1.0 / fact));
        }
        let f = BorelSeries::from_coeffs(c);
        let a = pade_fit(&f, 8, 8).unwrap();
        let vp = lateral_value(&a, 1.0, Side::Plus, 1e-6).unwrap();
        let vm = lateral_value(&a, 1.0, Side::Minus, 1e-6).unwrap();
        let e = std::f64::consts::E;
        assert!((vp.re - e).abs() < 1e-10 && (vm.re - e).abs() < 1e-10);
        // Schwarz reflection: conjugate pair
        assert!((vp - vm.conj()).norm() < 1e-10);
    }

    #[test]
    fn lateral_pole_proximity_rejected() {
        let f = BorelSeries::from_coeffs((0..=10).map(|n| bf(3.0).powi(n + 1)).collect());
        let a = pade_fit(&f, 5, 5).unwrap();
        match lateral_value(&a, 1.0 / 3.0, Side::Plus, 1e-4) {
            Err(Error::PoleProximity { .. }) => {}
            other => panic!("expected pole proximity, got {other:?}"),
        }
    }

    #[test]
    fn digits_to_bits_is_monotone() {
        assert!(digits_to_bits(64) > digits_to_bits(30));
    }
}
