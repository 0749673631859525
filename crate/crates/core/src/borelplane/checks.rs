//! Scalar bound recursions, the star-shaped convolution bound, and
//! asymptotic profiles of continued Borel transforms.

use super::PadeApproximant;
use crate::error::Error;
use num::complex::Complex64;

/// One row of the g_n/h_n recursion table.
#[derive(Clone, Debug)]
pub struct BoundRecursionRow {
    pub n: usize,
    pub g: f64,
    pub h: f64,
    /// h_n · α · |ζ| / g_n with α = g0/(g0+1); ≤ 1 when the h-bound holds.
    pub h_margin: f64,
    /// g_n / ([(7g0+3)|ζ|]^{n−1} g0); ≤ 1 when the closed-form bound holds.
    pub g_margin: f64,
}

/// Run the coupled recursion
///   g_{n+1} = g0·|ζ|·(4 g_n + 3|ζ| h_n),
///   h_{n+1} = g_{n+1}/|ζ| + 4 g_n + 3|ζ| h_n,
/// from g_1 = g0, h_1 = g0/|ζ|, and verify the h-bound h_n ≤ g_n/(α|ζ|)
/// and the closed-form g-bound g_n ≤ [(7g0+3)|ζ|]^{n−1} g0 for n ≤ n_max.
/// Requires g0 ≥ 1 (the underlying function starts at 1 at the origin).
pub fn bound_recursion_check(
    g0: f64,
    zeta_abs: f64,
    n_max: usize,
) -> Result<Vec<BoundRecursionRow>, Error> {
    if g0 < 1.0 {
        return Err(Error::InvalidArgument(format!("g0 = {g0} must be >= 1")));
    }
    if zeta_abs <= 0.0 {
        return Err(Error::InvalidArgument("|ζ| must be positive".into()));
    }
    let alpha = g0 / (g0 + 1.0);
    let base = (7.0 * g0 + 3.0) * zeta_abs;
    let mut rows = Vec::with_capacity(n_max);
    let (mut g, mut h) = (g0, g0 / zeta_abs);
    let mut bound = g0; // [(7g0+3)|ζ|]^{n−1}·g0 at n = 1
    for n in 1..=n_max {
        rows.push(BoundRecursionRow {
            n,
            g,
            h,
            h_margin: h * alpha * zeta_abs / g,
            g_margin: g / bound,
        });
        let g_next = g0 * zeta_abs * (4.0 * g + 3.0 * zeta_abs * h);
        let h_next = g_next / zeta_abs + 4.0 * g + 3.0 * zeta_abs * h;
        g = g_next;
        h = h_next;
        bound *= base;
        if !g.is_finite() || !h.is_finite() {
            break;
        }
    }
    Ok(rows)
}

/// One sample of the star-shaped convolution bound check.
#[derive(Clone, Debug)]
pub struct StarBoundSample {
    pub zeta: f64,
    pub convolution_abs: f64,
    pub bound: f64,
    /// convolution_abs / bound; ≤ 1 when the bound holds.
    pub margin: f64,
}

/// Verify |(φ₁⋆…⋆φ_n)(ζ)| ≤ |ζ|^{n−1}/(n−1)!·Π sup|φ_i| (sup over the
/// segment from 0 to ζ) at the
/// sample points, computing the iterated convolution by nested quadrature
/// (n ≤ 4).
pub fn star_bound_check(
    phis: &[&dyn Fn(f64) -> f64],
    samples: &[f64],
) -> Result<Vec<StarBoundSample>, Error> {
    if phis.is_empty() || phis.len() > 4 {
        return Err(Error::InvalidArgument(
            "star bound check handles 1..=4 factors".into(),
        ));
    }
    let (nodes, weights) = gauss_legendre(40);
    let mut out = Vec::with_capacity(samples.len());
    for &zeta in samples {
        if zeta <= 0.0 {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        let conv = iterated_convolution(phis, zeta, &nodes, &weights);
        let nfold = phis.len();
        let mut bound = zeta.powi(nfold as i32 - 1);
        for k in 2..nfold {
            bound /= k as f64;
        }
        for phi in phis {
            bound *= segment_max(phi, zeta);
        }
        let margin = conv.abs() / bound;
        out.push(StarBoundSample {
            zeta,
            convolution_abs: conv.abs(),
            bound,
            margin,
        });
    }
    Ok(out)
}

fn segment_max(phi: &dyn Fn(f64) -> f64, zeta: f64) -> f64 {
    (0..=256)
        .map(|i| phi(zeta * i as f64 / 256.0).abs())
        .fold(0.0, f64::max)
}

fn iterated_convolution(
    phis: &[&dyn Fn(f64) -> f64],
    z: f64,
    nodes: &[f64],
    weights: &[f64],
) -> f64 {
    if phis.len() == 1 {
        return phis[0](z);
    }
    let (head, tail) = phis.split_at(phis.len() - 1);
    let last = tail[0];
    // ∫_0^z inner(t)·φ_last(z−t) dt on the mapped Gauss-Legendre rule
    let half = z / 2.0;
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| {
            let t = half * (x + 1.0);
            w * half * iterated_convolution(head, t, nodes, weights) * last(z - t)
        })
        .sum()
}

/// Gauss-Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Log-linear exponential fit |v(ζ)| ≈ K·e^{m·ζ} (optionally with a 1/|ζ|
/// prefactor) over the sampled profile.
#[derive(Clone, Debug)]
pub struct ExpFit {
    pub k: f64,
    pub m: f64,
}

#[derive(Clone, Debug)]
pub struct AsymptoticProfile {
    /// (ζ, |value at ζ + iε|) samples.
    pub samples: Vec<(f64, f64)>,
    pub ceiling: f64,
    /// Trailing half of the profile non-increasing within 5% slack.
    pub eventually_nonincreasing: bool,
    pub fit: ExpFit,
    pub with_zeta_prefactor: bool,
}

/// Sample |approx(ζ + iε)| on [r_min, r_max] and fit an exponential profile
/// in log scale; with `one_over_zeta` the fitted model is (K/|ζ|)e^{mζ}.
pub fn asymptotic_probe(
    approx: &PadeApproximant,
    r_min: f64,
    r_max: f64,
    eps: f64,
    n_samples: usize,
    one_over_zeta: bool,
) -> Result<AsymptoticProfile, Error> {
    if !(r_max > r_min && r_min > 0.0) || n_samples < 4 {
        return Err(Error::InvalidArgument("bad probe range".into()));
    }
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let z = r_min + (r_max - r_min) * i as f64 / (n_samples - 1) as f64;
        let v = approx.eval_f64(Complex64::new(z, eps)).norm();
        samples.push((z, v));
    }
    let ceiling = samples.iter().map(|&(_, v)| v).fold(0.0, f64::max);
    // least squares on ln|v| (+ ln ζ when modeling the 1/ζ prefactor)
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(z, v) in &samples {
        if v <= 0.0 || !v.is_finite() {
            continue;
        }
        let y = v.ln() + if one_over_zeta { z.ln() } else { 0.0 };
        sx += z;
        sy += y;
        sxx += z * z;
        sxy += z * y;
        n += 1.0;
    }
    let m = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let k = ((sy - m * sx) / n).exp();
    let half = samples.len() / 2;
    let eventually_nonincreasing = samples[half..]
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * 1.05);
    Ok(AsymptoticProfile {
        samples,
        ceiling,
        eventually_nonincreasing,
        fit: ExpFit { k, m },
        with_zeta_prefactor: one_over_zeta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borelplane::pade_fit;
    use crate::coeffring::Bf;
    use crate::series::BorelSeries;

    #[test]
    fn recursion_base_rows() {
        let rows = bound_recursion_check(1.0, 1.0, 3).unwrap();
        // n = 1 rows are equalities: g_1 = g0, h_1 = g0/|ζ|
        assert_eq!(rows[0].g, 1.0);
        assert_eq!(rows[0].h, 1.0);
        assert!((rows[0].g_margin - 1.0).abs() < 1e-15);
        // g_2 = 7 ≤ (7+3)·1·1 = 10
        assert_eq!(rows[1].g, 7.0);
        assert!((rows[1].g_margin - 0.7).abs() < 1e-15);
        assert!(rows[1].h_margin <= 1.0 + 1e-15);
    }

    #[test]
    fn recursion_grid_passes() {
        for g0 in [1.0, 2.0, 5.0] {
            for z in [0.1, 1.0, 10.0] {
                let rows = bound_recursion_check(g0, z, 20).unwrap();
                assert_eq!(rows.len(), 20);
                for row in rows {
                    assert!(row.h_margin <= 1.0 + 1e-12, "h at n={} g0={g0} z={z}", row.n);
                    assert!(row.g_margin <= 1.0 + 1e-12, "g at n={} g0={g0} z={z}", row.n);
                }
            }
        }
    }

    #[test]
    fn recursion_rejects_small_g0() {
        assert!(bound_recursion_check(0.5, 1.0, 5).is_err());
    }

    #[test]
    fn star_bound_constants() {
        // n = 2, φ = 1 at ζ = 1: |1⋆1|(1) = 1 ≤ 1
        let one = |_: f64| 1.0;
        let r = star_bound_check(&[&one, &one], &[1.0]).unwrap();
        assert!((r[0].convolution_abs - 1.0).abs() < 1e-12);
        assert!(r[0].margin <= 1.0 + 1e-12);
    }

    #[test]
    fn star_bound_exponentials() {
        // (e^ζ ⋆ e^ζ)(ζ) = ζ e^ζ; at ζ = 1 the value is e and the bound e²
        let e = |x: f64| x.exp();
        let r = star_bound_check(&[&e, &e], &[1.0]).unwrap();
        assert!((r[0].convolution_abs - std::f64::consts::E).abs() < 1e-10);
        assert!((r[0].bound - std::f64::consts::E * std::f64::consts::E).abs() < 1e-9);
        assert!(r[0].margin <= 1.0);
    }

    #[test]
    fn star_bound_three_polynomials() {
        let p1 = |x: f64| 1.0 + x;
        let p2 = |x: f64| 2.0 - x;
        let p3 = |x: f64| x * x;
        let r = star_bound_check(&[&p1, &p2, &p3], &[0.5, 1.0, 1.5, 2.0, 3.0]).unwrap();
        for s in &r {
            assert!(s.margin <= 1.0, "margin {} at ζ = {}", s.margin, s.zeta);
        }
    }

    #[test]
    fn star_bound_rejects_five() {
        let one = |_: f64| 1.0;
        let fns: Vec<&dyn Fn(f64) -> f64> = vec![&one; 5];
        assert!(star_bound_check(&fns, &[1.0]).is_err());
    }

    #[test]
    fn gl_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(40);
        // degree 79 exactness: check x^10 and x^39 on [-1,1]
        let int10: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(10)).sum();
        assert!((int10 - 2.0 / 11.0).abs() < 1e-14);
        let int39: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(39)).sum();
        assert!(int39.abs() < 1e-14);
    }

    #[test]
    fn probe_constant_profile() {
        let f = BorelSeries::from_coeffs(
            (0..=10)
                .map(|n| Bf::from_f64(if n == 0 { 1.0 } else { 0.0 }, 128))
                .collect(),
        );
        let a = pade_fit(&f, 2, 2).unwrap();
        let p = asymptotic_probe(&a, 0.1, 3.0, 1e-3, 50, false).unwrap();
        assert!((p.ceiling - 1.0).abs() < 1e-6);
        assert!(p.eventually_nonincreasing);
        assert!(p.fit.m.abs() < 1e-6);
    }

    #[test]
    fn probe_exponential_rate() {
        // e^{2ζ} on [0, 3]: fitted exponent within 5% of 2
        let mut c = Vec::new();
        let mut fact = 1.0f64;
        for n in 0..=20usize {
            if n > 1 {
                fact *= n as f64;
            }
            c.push(Bf::from_f64(2f64.powi(n as i32) / fact, 256));
        }
        let a = pade_fit(&BorelSeries::from_coeffs(c), 10, 10).unwrap();
        let p = asymptotic_probe(&a, 0.1, 3.0, 1e-4, 80, false).unwrap();
        assert!((p.fit.m - 2.0).abs() < 0.1, "fitted m = {}", p.fit.m);
    }
}
