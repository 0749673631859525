//! Écalle average weights on branch signatures, coherence and reality
//! checks, and averaged boundary values.
//!
//! A branch signature records which side of each successive singularity an
//! analytic continuation passed; an average assigns each signature a weight.
//! Three families are supported: lateral (all mass on one side), median,
//! and the Catalan one-parameter family. The Catalan polynomials Qa_n are
//! not fixed a priori here: they are derived from the defining last-sign
//! coherence relation, which determines them uniquely (the recursion is
//! solvable exactly when Qa_n(0) equals the n-th Catalan number, and the
//! Catalan numbers do emerge), and validated by [`coherence_check`].

use crate::coeffring::Rational;
use crate::error::Error;
use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, Zero};
use std::fmt;

/// One side of a singularity on the summation ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A finite sign sequence labeling a branch of the ramified plane; the
/// empty signature is the trivial branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BranchSignature(Vec<Sign>);

impl BranchSignature {
    pub fn new(signs: Vec<Sign>) -> Self {
        Self(signs)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn push(&self, s: Sign) -> Self {
        let mut v = self.0.clone();
        v.push(s);
        Self(v)
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|s| s.flip()).collect())
    }

    /// Lengths of the maximal constant-sign runs, left to right.
    pub fn runs(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut iter = self.0.iter();
        let Some(mut cur) = iter.next() else {
            return out;
        };
        let mut len = 1usize;
        for s in iter {
            if s == cur {
                len += 1;
            } else {
                out.push(len);
                cur = s;
                len = 1;
            }
        }
        out.push(len);
        out
    }

    /// All 2^depth signatures of a given depth.
    pub fn all(depth: usize) -> Vec<Self> {
        assert!(depth <= 20, "signature enumeration capped");
        let mut out = vec![Self::empty()];
        for _ in 0..depth {
            out = out
                .iter()
                .flat_map(|s| [s.push(Sign::Plus), s.push(Sign::Minus)])
                .collect();
        }
        out
    }
}

impl fmt::Display for BranchSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(empty)");
        }
        for s in &self.0 {
            f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// The supported weight systems.
#[derive(Clone, Debug, PartialEq)]
pub enum AverageSpec {
    /// All weight on the uniform-side branch (+…+ or −…−).
    Lateral(Sign),
    /// The median weights (2p)!(2q)!/(4^{p+q}(p+q)!p!q!).
    Median,
    /// The Catalan family with parameter α (β = 1 − α derived).
    Catalan { alpha: Rational },
}

impl AverageSpec {
    pub fn catalan(alpha: Rational) -> Result<Self, Error> {
        if alpha.is_zero() || alpha.is_one() {
            return Err(Error::InvalidArgument(
                "catalan average needs α outside {0, 1}".into(),
            ));
        }
        Ok(AverageSpec::Catalan { alpha })
    }

    /// Whether the average preserves reality (property P2). Lateral averages
    /// do not; the Catalan family does for real weights only at α = 1/2.
    pub fn preserves_reality(&self) -> bool {
        match self {
            AverageSpec::Lateral(_) => false,
            AverageSpec::Median => true,
            AverageSpec::Catalan { alpha } => *alpha == Rational::new(1.into(), 2.into()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            AverageSpec::Lateral(Sign::Plus) => "lateral+".into(),
            AverageSpec::Lateral(Sign::Minus) => "lateral-".into(),
            AverageSpec::Median => "median".into(),
            AverageSpec::Catalan { alpha } => format!("catalan:{alpha}"),
        }
    }
}

fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

fn catalan_number(n: usize) -> BigInt {
    // C_n = (2n)! / (n! (n+1)!)
    factorial(2 * n) / (factorial(n) * factorial(n + 1))
}

/// Catalan polynomials Qa_1..Qa_maxn (coefficient vectors, ascending powers)
/// derived from the last-sign coherence relation:
///   Qa_1(x) = 1 + x,
///   Qa_{m+1}(x) = ((1+x)^2 Qa_m(x) - Ca_m (1+x)) / x,
/// which requires Qa_m(0) = Ca_m exactly for the division to succeed.
pub fn catalan_polynomials(maxn: usize) -> Result<Vec<Vec<Rational>>, Error> {
    let mut qa: Vec<Vec<Rational>> = vec![vec![Rational::one(), Rational::one()]];
    for m in 1..maxn {
        let q = &qa[m - 1];
        let ca = Rational::from_integer(catalan_number(m));
        if q[0] != ca {
            return Err(Error::CatalanDegenerate(m));
        }
        // (1+x)^2 q - Ca_m (1+x), then divide by x
        let mut num = vec![Rational::zero(); q.len() + 2];
        for (i, c) in q.iter().enumerate() {
            num[i] += c;
            num[i + 1] += c * Rational::from_integer(2.into());
            num[i + 2] += c;
        }
        num[0] -= &ca;
        num[1] -= &ca;
        if !num[0].is_zero() {
            return Err(Error::CatalanDegenerate(m));
        }
        qa.push(num[1..].to_vec());
    }
    Ok(qa)
}

fn eval_poly(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// The weight an average assigns to a branch signature; exact.
pub fn weight(spec: &AverageSpec, sig: &BranchSignature) -> Result<Rational, Error> {
    if sig.depth() == 0 {
        return Ok(Rational::one());
    }
    match spec {
        AverageSpec::Lateral(side) => {
            let all = sig.signs().iter().all(|s| s == side);
            Ok(if all { Rational::one() } else { Rational::zero() })
        }
        AverageSpec::Median => {
            let p = sig.signs().iter().filter(|s| **s == Sign::Plus).count();
            let q = sig.depth() - p;
            let num = factorial(2 * p) * factorial(2 * q);
            let den = BigInt::from(4).pow((p + q) as u32)
                * factorial(p + q)
                * factorial(p)
                * factorial(q);
            Ok(Rational::new(num, den))
        }
        AverageSpec::Catalan { alpha } => {
            if alpha.is_zero() || alpha.is_one() {
                return Err(Error::InvalidArgument(
                    "catalan average needs α outside {0, 1}".into(),
                ));
            }
            let beta = Rational::one() - alpha;
            let runs = sig.runs();
            let qa = catalan_polynomials(*runs.last().expect("nonempty"))?;
            let n = sig.depth();
            let mut w = (alpha * &beta).pow(n as i32);
            for &len in &runs[..runs.len() - 1] {
                w *= Rational::from_integer(catalan_number(len));
            }
            let last_sign = *sig.signs().last().expect("nonempty");
            let x = match last_sign {
                Sign::Plus => alpha / &beta,
                Sign::Minus => beta / alpha,
            };
            w *= eval_poly(&qa[runs.last().unwrap() - 1], &x);
            Ok(w)
        }
    }
}

/// Weight table at a fixed depth: all 2^depth signatures with exact weights.
#[derive(Clone, Debug)]
pub struct WeightTable {
    pub depth: usize,
    pub rows: Vec<(BranchSignature, Rational)>,
}

pub fn weight_table(spec: &AverageSpec, depth: usize) -> Result<WeightTable, Error> {
    if depth > 12 {
        return Err(Error::InvalidArgument(
            "weight table enumeration capped at depth 12".into(),
        ));
    }
    let rows = BranchSignature::all(depth)
        .into_iter()
        .map(|sig| weight(spec, &sig).map(|w| (sig, w)))
        .collect::<Result<_, _>>()?;
    Ok(WeightTable { depth, rows })
}

/// Verdict of the coherence check. The interior-deletion relation of the
/// full definition requires averages on punctured lattices and is reported
/// as unverified rather than tested.
#[derive(Clone, Debug)]
pub struct CoherenceVerdict {
    pub depth: usize,
    pub last_sign_relation: bool,
    pub total_weight_one: bool,
    pub interior_relation_verified: bool,
}

impl CoherenceVerdict {
    pub fn pass(&self) -> bool {
        self.last_sign_relation && self.total_weight_one
    }
}

/// Exact check of m^{ε,+} + m^{ε,−} = m^{ε} for every prefix at every level
/// up to `depth`, plus total weight 1 at every level.
pub fn coherence_check(spec: &AverageSpec, depth: usize) -> Result<CoherenceVerdict, Error> {
    if depth > 12 {
        return Err(Error::InvalidArgument(
            "coherence enumeration capped at depth 12".into(),
        ));
    }
    let mut last_sign_relation = true;
    let mut total_weight_one = true;
    for d in 0..depth {
        let mut total = Rational::zero();
        for prefix in BranchSignature::all(d) {
            let wp = weight(spec, &prefix.push(Sign::Plus))?;
            let wm = weight(spec, &prefix.push(Sign::Minus))?;
            let w = weight(spec, &prefix)?;
            if &wp + &wm != w {
                last_sign_relation = false;
            }
            total += wp + wm;
        }
        if total != Rational::one() {
            total_weight_one = false;
        }
    }
    Ok(CoherenceVerdict {
        depth,
        last_sign_relation,
        total_weight_one,
        interior_relation_verified: false,
    })
}

/// Verdict of the reality (P2) check: for real weights this is the sign-flip
/// symmetry m^{ε} = m^{ε̄}.
#[derive(Clone, Debug)]
pub struct RealityVerdict {
    pub depth: usize,
    pub pass: bool,
    pub first_violation: Option<BranchSignature>,
}

pub fn reality_check(spec: &AverageSpec, depth: usize) -> Result<RealityVerdict, Error> {
    if depth > 12 {
        return Err(Error::InvalidArgument(
            "reality enumeration capped at depth 12".into(),
        ));
    }
    for d in 1..=depth {
        for sig in BranchSignature::all(d) {
            if weight(spec, &sig)? != weight(spec, &sig.flipped())? {
                return Ok(RealityVerdict {
                    depth,
                    pass: false,
                    first_violation: Some(sig),
                });
            }
        }
    }
    Ok(RealityVerdict {
        depth,
        pass: true,
        first_violation: None,
    })
}

/// Imaginary residue below this is clipped silently (and recorded).
pub const IM_CLIP: f64 = 1e-8;
/// Imaginary residue above this signals bad lateral values.
pub const IM_LIMIT: f64 = 1e-6;

/// An averaged boundary value. For reality-preserving averages acting on
/// conjugate lateral values, `real` carries the clipped real result.
#[derive(Clone, Copy, Debug)]
pub struct AveragedValue {
    pub value: Complex64,
    /// Clipped real value when the average preserves reality.
    pub real: Option<f64>,
    /// |Im| discarded by the clip (0 for non-reality-preserving specs).
    pub clipped_im: f64,
}

/// Combine the two depth-1 lateral values: m⁺·φ(ζ⁺) + m⁻·φ(ζ⁻). Valid in
/// the first singular interval, where only depth-1 signatures contribute.
pub fn averaged_value(
    spec: &AverageSpec,
    phi_plus: Complex64,
    phi_minus: Complex64,
) -> Result<AveragedValue, Error> {
    let to_f = |w: Rational| -> f64 {
        let n = w.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
        let d = w.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        n / d
    };
    let wp = to_f(weight(spec, &BranchSignature::new(vec![Sign::Plus]))?);
    let wm = to_f(weight(spec, &BranchSignature::new(vec![Sign::Minus]))?);
    let value = wp * phi_plus + wm * phi_minus;
    if !spec.preserves_reality() {
        return Ok(AveragedValue {
            value,
            real: None,
            clipped_im: 0.0,
        });
    }
    let scale = value.norm().max(1.0);
    let residue = value.im.abs() / scale;
    if residue > IM_LIMIT {
        return Err(Error::ImaginaryResidue {
            residue,
            limit: IM_LIMIT,
        });
    }
    Ok(AveragedValue {
        value,
        real: Some(value.re),
        clipped_im: value.im.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;
    use num::Signed;

    fn sig(s: &str) -> BranchSignature {
        BranchSignature::new(
            s.chars()
                .map(|c| if c == '+' { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
    }

    #[test]
    fn lateral_weights() {
        let spec = AverageSpec::Lateral(Sign::Plus);
        assert_eq!(weight(&spec, &sig("+++")).unwrap(), rat(1, 1));
        assert_eq!(weight(&spec, &sig("++-")).unwrap(), rat(0, 1));
        assert_eq!(weight(&spec, &sig("-")).unwrap(), rat(0, 1));
    }

    #[test]
    fn median_weights() {
        assert_eq!(weight(&AverageSpec::Median, &sig("+")).unwrap(), rat(1, 2));
        assert_eq!(weight(&AverageSpec::Median, &sig("++")).unwrap(), rat(3, 8));
        assert_eq!(weight(&AverageSpec::Median, &sig("+-")).unwrap(), rat(1, 8));
    }

    #[test]
    fn median_depends_only_on_counts() {
        // permutation invariance of the (p, q) formula
        for d in 1..=6usize {
            for s in BranchSignature::all(d) {
                let p = s.signs().iter().filter(|x| **x == Sign::Plus).count();
                let mut sorted: Vec<Sign> = vec![Sign::Plus; p];
                sorted.extend(vec![Sign::Minus; d - p]);
                assert_eq!(
                    weight(&AverageSpec::Median, &s).unwrap(),
                    weight(&AverageSpec::Median, &BranchSignature::new(sorted)).unwrap()
                );
            }
        }
    }

    #[test]
    fn catalan_polynomials_are_the_catalan_family() {
        let qa = catalan_polynomials(6).unwrap();
        assert_eq!(qa[0], vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(qa[1], vec![rat(2, 1), rat(3, 1), rat(1, 1)]);
        assert_eq!(qa[2], vec![rat(5, 1), rat(9, 1), rat(5, 1), rat(1, 1)]);
        assert_eq!(
            qa[3],
            vec![rat(14, 1), rat(28, 1), rat(20, 1), rat(7, 1), rat(1, 1)]
        );
        // constant terms are the Catalan numbers
        for (i, q) in qa.iter().enumerate() {
            assert_eq!(q[0], Rational::from_integer(catalan_number(i + 1)));
        }
    }

    #[test]
    fn coherence_median_and_lateral() {
        for spec in [
            AverageSpec::Median,
            AverageSpec::Lateral(Sign::Plus),
            AverageSpec::Lateral(Sign::Minus),
        ] {
            let v = coherence_check(&spec, 12).unwrap();
            assert!(v.pass(), "{}", spec.name());
            assert!(!v.interior_relation_verified);
        }
    }

    #[test]
    fn coherence_catalan() {
        for alpha in [rat(1, 2), rat(1, 3), rat(2, 5)] {
            let spec = AverageSpec::catalan(alpha).unwrap();
            let v = coherence_check(&spec, 8).unwrap();
            assert!(v.pass(), "{}", spec.name());
        }
    }

    #[test]
    fn depth_one_coherence_is_unit_sum() {
        // m^+ + m^- = m^(empty) = 1 for every spec
        for spec in [
            AverageSpec::Median,
            AverageSpec::Lateral(Sign::Plus),
            AverageSpec::catalan(rat(1, 3)).unwrap(),
        ] {
            let s = weight(&spec, &sig("+")).unwrap() + weight(&spec, &sig("-")).unwrap();
            assert_eq!(s, rat(1, 1), "{}", spec.name());
        }
    }

    #[test]
    fn median_depth2_coherence_values() {
        // 3/8 + 1/8 = 1/2 = m^+
        let w = weight(&AverageSpec::Median, &sig("++")).unwrap()
            + weight(&AverageSpec::Median, &sig("+-")).unwrap();
        assert_eq!(w, rat(1, 2));
    }

    #[test]
    fn reality_verdicts() {
        assert!(reality_check(&AverageSpec::Median, 3).unwrap().pass);
        assert!(reality_check(&AverageSpec::Median, 6).unwrap().pass);
        let lat = reality_check(&AverageSpec::Lateral(Sign::Plus), 1).unwrap();
        assert!(!lat.pass);
        assert_eq!(lat.first_violation.unwrap(), sig("+"));
        assert!(
            reality_check(&AverageSpec::catalan(rat(1, 2)).unwrap(), 6)
                .unwrap()
                .pass
        );
        assert!(
            !reality_check(&AverageSpec::catalan(rat(1, 3)).unwrap(), 4)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn catalan_half_flip_symmetry() {
        let spec = AverageSpec::catalan(rat(1, 2)).unwrap();
        for s in BranchSignature::all(6) {
            assert_eq!(
                weight(&spec, &s).unwrap(),
                weight(&spec, &s.flipped()).unwrap()
            );
        }
    }

    #[test]
    fn median_weights_nonnegative_sum_one() {
        for d in 1..=12usize {
            let t = weight_table(&AverageSpec::Median, d).unwrap();
            let mut total = Rational::zero();
            for (_, w) in &t.rows {
                assert!(!w.is_negative());
                total += w;
            }
            assert_eq!(total, rat(1, 1), "depth {d}");
        }
    }

    #[test]
    fn averaged_value_median() {
        // median of 3 +/- 4i is 3
        let v = averaged_value(
            &AverageSpec::Median,
            Complex64::new(3.0, 4.0),
            Complex64::new(3.0, -4.0),
        )
        .unwrap();
        assert_eq!(v.real, Some(3.0));
        assert!(v.clipped_im < 1e-15);
    }

    #[test]
    fn averaged_value_lateral_keeps_complex() {
        let v = averaged_value(
            &AverageSpec::Lateral(Sign::Plus),
            Complex64::new(3.0, 4.0),
            Complex64::new(3.0, -4.0),
        )
        .unwrap();
        assert_eq!(v.value, Complex64::new(3.0, 4.0));
        assert_eq!(v.real, None);
    }

    #[test]
    fn averaged_value_rejects_bad_laterals() {
        // median of far-from-conjugate values trips the residue limit
        let r = averaged_value(
            &AverageSpec::Median,
            Complex64::new(1.0, 2.0),
            Complex64::new(1.0, 1.0),
        );
        assert!(matches!(r, Err(Error::ImaginaryResidue { .. })));
    }

    #[test]
    fn catalan_rejects_degenerate_alpha() {
        assert!(AverageSpec::catalan(rat(0, 1)).is_err());
        assert!(AverageSpec::catalan(rat(1, 1)).is_err());
    }
}
