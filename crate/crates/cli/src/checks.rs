//! The verify battery: named checks over the cached (or freshly solved)
//! exact tables, each yielding a machine-readable verdict. Hard checks gate
//! the exit code; soft probes only record.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use wzresum::averages::{coherence_check, reality_check, AverageSpec, Sign};
use wzresum::borelplane::{bound_recursion_check, gevrey_fit, singularity_scan, star_bound_check};
use wzresum::coeffring::zeta::zeta_eval;
use wzresum::coeffring::{rat, ZetaPoly};
use wzresum::model::{
    bound_report, composition_census, cross_check_g, k_coefficient, sde_residual, solve_sde,
    word_count,
    Composition, MellinTable,
};
use wzresum::resum::{laplace_quadrature, ResumConfig, ResumContext};
use wzresum::series::SeriesA;

pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub hard: bool,
    pub detail: String,
}

impl CheckResult {
    fn ok(name: &'static str, detail: String) -> Self {
        Self {
            name,
            pass: true,
            hard: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            pass: false,
            hard: true,
            detail,
        }
    }

    fn soft(name: &'static str, pass: bool, detail: String) -> Self {
        Self {
            name,
            pass,
            hard: false,
            detail,
        }
    }
}

pub const CHECK_NAMES: &[&str] = &[
    "coefficients",
    "mellin",
    "cross",
    "combinatorics",
    "bounds",
    "borel",
    "coherence",
    "reality",
    "recursion",
    "star",
    "resum",
];

pub struct VerifyInputs<'a> {
    pub gamma: &'a SeriesA<ZetaPoly>,
    pub table: &'a MellinTable,
    pub precision: u32,
    pub radius: f64,
}

pub fn run_check(name: &str, inp: &VerifyInputs<'_>) -> CheckResult {
    match name {
        "coefficients" => check_coefficients(inp),
        "mellin" => check_mellin(inp),
        "cross" => check_cross(inp),
        "combinatorics" => check_combinatorics(),
        "bounds" => check_bounds(inp),
        "borel" => check_borel(inp),
        "coherence" => check_coherence(),
        "reality" => check_reality(),
        "recursion" => check_recursion(),
        "star" => check_star(),
        "resum" => check_resum(inp),
        other => CheckResult::fail("unknown", format!("no check named {other:?}")),
    }
}

fn check_coefficients(inp: &VerifyInputs<'_>) -> CheckResult {
    if *inp.gamma.coeff(1) != ZetaPoly::one() {
        return CheckResult::fail(
            "coefficients",
            format!("c_1 = {} (expected 1)", inp.gamma.coeff(1)),
        );
    }
    if *inp.gamma.coeff(2) != ZetaPoly::from_int(-2) {
        return CheckResult::fail(
            "coefficients",
            format!("c_2 = {} (expected -2)", inp.gamma.coeff(2)),
        );
    }
    // the table must actually solve the equation. The formal solution is
    // unique, so re-running the order-by-order solve against the stored
    // kernel table and comparing coefficient-by-coefficient is equivalent
    // to a full residual check and names a corrupted entry directly; the
    // explicit residual (sde_residual) stays as the low-order cross-check.
    match solve_sde(inp.gamma.order(), inp.table) {
        Ok(resolved) => {
            for n in 1..=inp.gamma.order() {
                if resolved.coeff(n) != inp.gamma.coeff(n) {
                    return CheckResult::fail(
                        "coefficients",
                        format!("coefficient c_{n} does not solve the fixed point (corrupted entry)"),
                    );
                }
            }
        }
        Err(e) => return CheckResult::fail("coefficients", format!("re-solve failed: {e}")),
    }
    let low = inp.gamma.truncated(inp.gamma.order().min(8));
    match sde_residual(&low, inp.table) {
        Ok(residual) => match residual.valuation() {
            None => CheckResult::ok(
                "coefficients",
                format!(
                    "c_1 = 1, c_2 = -2; fixed point re-solved identically through order {}; low-order residual vanishes",
                    inp.gamma.order()
                ),
            ),
            Some(n) => CheckResult::fail(
                "coefficients",
                format!("fixed-point residual nonzero at order {n}: coefficient c_{n} is corrupted"),
            ),
        },
        Err(e) => CheckResult::fail("coefficients", format!("residual failed: {e}")),
    }
}

fn check_mellin(inp: &VerifyInputs<'_>) -> CheckResult {
    let t = inp.table;
    let cap = t.bound().min(20);
    for n in 1..=cap {
        let want = ZetaPoly::from_int(if n % 2 == 0 { 1 } else { -1 });
        if *t.get(0, n) != want || *t.get(n, 0) != want {
            return CheckResult::fail("mellin", format!("X_0{n} row breaks the (-1)^n rule"));
        }
    }
    for n in 0..=cap {
        for m in 0..=(cap - n) {
            if t.get(n, m) != t.get(m, n) {
                return CheckResult::fail("mellin", format!("X_{n}{m} != X_{m}{n}"));
            }
        }
    }
    CheckResult::ok(
        "mellin",
        format!("X_0n = (-1)^n and symmetry exact for n+m <= {cap}"),
    )
}

fn check_cross(inp: &VerifyInputs<'_>) -> CheckResult {
    let order = inp.gamma.order().min(12);
    match cross_check_g(inp.gamma, order) {
        Ok(c) if c.equal => CheckResult::ok(
            "cross",
            format!(
                "both expansions of G agree exactly on {} coefficients (order {order})",
                c.coefficients_checked
            ),
        ),
        Ok(c) => {
            let (n, k) = c.first_mismatch.unwrap_or((0, 0));
            CheckResult::fail(
                "cross",
                format!("expansions disagree at the coefficient of a^{n} L^{k}"),
            )
        }
        Err(e) => CheckResult::fail("cross", e.to_string()),
    }
}

fn check_combinatorics() -> CheckResult {
    for n in 1..=10u32 {
        match word_count(n) {
            Ok(w) if w.count == 1 << (n - 1) && w.all_distinct && w.branches_disjoint => {}
            Ok(w) => {
                return CheckResult::fail(
                    "combinatorics",
                    format!("|W_{n}| = {} with distinct = {}", w.count, w.all_distinct),
                )
            }
            Err(e) => return CheckResult::fail("combinatorics", e.to_string()),
        }
        let census = match composition_census(n) {
            Ok(c) => c,
            Err(e) => return CheckResult::fail("combinatorics", e.to_string()),
        };
        let mut binom = 1u64;
        for (q, &count) in census.iter().enumerate().skip(1) {
            if count != binom {
                return CheckResult::fail(
                    "combinatorics",
                    format!("census n = {n}, q = {q}: {count} (expected {binom})"),
                );
            }
            binom = binom * (n as u64 - q as u64) / q as u64;
        }
    }
    for n in 1..=8usize {
        let k = k_coefficient(&Composition::new(vec![1; n]).unwrap());
        let mut want = rat(1, 1);
        for j in 1..n as i64 {
            want = want * rat(3 * j + 1, 1);
        }
        if k != want {
            return CheckResult::fail("combinatorics", format!("K_(1^{n}) = {k}"));
        }
    }
    CheckResult::ok(
        "combinatorics",
        "words |W_n| = 2^(n-1), census C(n-1,q-1), K_(1^n) products all exact".into(),
    )
}

fn check_bounds(inp: &VerifyInputs<'_>) -> CheckResult {
    let order = inp.gamma.order().min(25);
    let g = inp.gamma.truncated(order);
    match bound_report(&g, inp.table, inp.radius, &[0.5, 1.0, 2.0], inp.precision) {
        Ok(rep) => {
            if !rep.hard_pass() {
                return CheckResult::fail(
                    "bounds",
                    format!(
                        "growth fit {}, alternation {}, kernel bound {}, g_n bound {}, multinomial {}",
                        rep.lemma44.pass,
                        rep.ratio.sign_alternation,
                        rep.lemma54.pass,
                        rep.prop46.iter().all(|p| p.pass),
                        rep.lemma45.pass
                    ),
                );
            }
            let k_ones_note = rep
                .k_ones
                .iter()
                .find(|k| !k.agree)
                .map(|k| {
                    format!(
                        "; recorded: all-ones closed forms diverge from n = {} ({} vs {})",
                        k.n, k.recursion_over_n, k.step1_product
                    )
                })
                .unwrap_or_default();
            CheckResult::ok(
                "bounds",
                format!(
                    "K = {:.4}, delta = {:.4}, K_r = {:.4} (worst kernel margin {:.3}), envelope {}{}",
                    rep.lemma44.k,
                    rep.lemma44.delta,
                    rep.lemma54.k_r,
                    rep.lemma54.worst_margin,
                    rep.ratio.envelope_pass,
                    k_ones_note
                ),
            )
        }
        Err(e) => CheckResult::fail("bounds", e.to_string()),
    }
}

fn check_borel(inp: &VerifyInputs<'_>) -> CheckResult {
    let gnum = inp.gamma.map(|c| zeta_eval(c, inp.precision).expect("eval"));
    let ghat = match gnum.borel_transform() {
        Ok(b) => b,
        Err(e) => return CheckResult::fail("borel", e.to_string()),
    };
    let scan = match singularity_scan(&ghat) {
        Ok(s) => s,
        Err(e) => return CheckResult::fail("borel", e.to_string()),
    };
    let third = 1.0 / 3.0;
    let assertable = inp.gamma.order() >= 31;
    let near = |t: f64| {
        scan.nearest_stable(Complex64::new(t, 0.0))
            .map(|p| (p.location - Complex64::new(t, 0.0)).norm() / third)
    };
    let (dp, dm) = (near(third), near(-third));
    let fit = match gevrey_fit(&gnum) {
        Ok(f) => f,
        Err(e) => return CheckResult::fail("borel", e.to_string()),
    };
    let dr = (fit.radius - third).abs() / third;
    let detail = format!(
        "stable poles off +1/3 by {} and -1/3 by {}; Gevrey radius {:.5} ({:.1}% off)",
        dp.map_or("none".into(), |d| format!("{:.2}%", d * 100.0)),
        dm.map_or("none".into(), |d| format!("{:.2}%", d * 100.0)),
        fit.radius,
        dr * 100.0
    );
    if assertable {
        let pass = dp.is_some_and(|d| d < 0.05) && dm.is_some_and(|d| d < 0.05) && dr < 0.10;
        if pass {
            CheckResult::ok("borel", detail)
        } else {
            CheckResult::fail("borel", detail)
        }
    } else {
        CheckResult::soft("borel", true, format!("order too low to assert; {detail}"))
    }
}

fn check_coherence() -> CheckResult {
    for (spec, depth) in [
        (AverageSpec::Lateral(Sign::Plus), 12usize),
        (AverageSpec::Lateral(Sign::Minus), 12),
        (AverageSpec::Median, 12),
        (AverageSpec::catalan(rat(1, 2)).unwrap(), 8),
        (AverageSpec::catalan(rat(1, 3)).unwrap(), 8),
    ] {
        match coherence_check(&spec, depth) {
            Ok(v) if v.pass() => {}
            Ok(_) => {
                return CheckResult::fail(
                    "coherence",
                    format!("coherence broken for {}", spec.name()),
                )
            }
            Err(e) => return CheckResult::fail("coherence", e.to_string()),
        }
    }
    CheckResult::ok(
        "coherence",
        "last-sign relation and unit total weight exact (lateral/median depth 12, catalan depth 8); interior relation not verifiable on a single lattice".into(),
    )
}

fn check_reality() -> CheckResult {
    let median = reality_check(&AverageSpec::Median, 12).map(|v| v.pass);
    let catalan = reality_check(&AverageSpec::catalan(rat(1, 2)).unwrap(), 8).map(|v| v.pass);
    let lateral = reality_check(&AverageSpec::Lateral(Sign::Plus), 12).map(|v| v.pass);
    match (median, catalan, lateral) {
        (Ok(true), Ok(true), Ok(false)) => CheckResult::ok(
            "reality",
            "median and catalan(1/2) preserve reality; lateral does not (as expected)".into(),
        ),
        other => CheckResult::fail("reality", format!("unexpected pattern {other:?}")),
    }
}

fn check_recursion() -> CheckResult {
    for g0 in [1.0, 2.0, 5.0] {
        for z in [0.1, 1.0, 10.0] {
            match bound_recursion_check(g0, z, 20) {
                Ok(rows) => {
                    if rows
                        .iter()
                        .any(|r| r.h_margin > 1.0 + 1e-12 || r.g_margin > 1.0 + 1e-12)
                    {
                        return CheckResult::fail(
                            "recursion",
                            format!("bound broken at g0 = {g0}, |zeta| = {z}"),
                        );
                    }
                }
                Err(e) => return CheckResult::fail("recursion", e.to_string()),
            }
        }
    }
    CheckResult::ok(
        "recursion",
        "g/h recursion bounds hold on the 3x3 grid, n <= 20".into(),
    )
}

fn check_star() -> CheckResult {
    let one = |_: f64| 1.0;
    let e = |x: f64| x.exp();
    let p1 = |x: f64| 1.0 + x;
    let p2 = |x: f64| 2.0 - x;
    let p3 = |x: f64| x * x;
    let samples = [0.3, 0.7, 1.0, 1.6, 2.5];
    for phis in [
        vec![&one as &dyn Fn(f64) -> f64, &one],
        vec![&e as &dyn Fn(f64) -> f64, &e],
        vec![&p1 as &dyn Fn(f64) -> f64, &p2, &p3],
        vec![&p1 as &dyn Fn(f64) -> f64, &p2, &p3, &one],
    ] {
        match star_bound_check(&phis, &samples) {
            Ok(rows) => {
                if let Some(r) = rows.iter().find(|r| r.margin > 1.0 + 1e-12) {
                    return CheckResult::fail(
                        "star",
                        format!("margin {} at zeta = {}", r.margin, r.zeta),
                    );
                }
            }
            Err(e) => return CheckResult::fail("star", e.to_string()),
        }
    }
    CheckResult::ok(
        "star",
        "iterated-convolution bound holds on all quadrature samples (n <= 4)".into(),
    )
}

fn check_resum(inp: &VerifyInputs<'_>) -> CheckResult {
    for z in [2.0, 3.0, 5.0] {
        let a = 1.0 / z;
        match laplace_quadrature(|x| x.exp(), a, 40.0 * a, 1e-12) {
            Ok((v, _)) if (v - 1.0 / (z - 1.0)).abs() < 1e-8 => {}
            Ok((v, _)) => {
                return CheckResult::fail(
                    "resum",
                    format!("Laplace oracle off at z = {z}: {v} vs {}", 1.0 / (z - 1.0)),
                )
            }
            Err(e) => return CheckResult::fail("resum", e.to_string()),
        }
    }
    if inp.gamma.order() < 31 {
        return CheckResult::soft(
            "resum",
            true,
            "Laplace oracle passes; order too low for the full pipeline checks".into(),
        );
    }
    let cfg = ResumConfig {
        precision: inp.precision,
        ..Default::default()
    };
    let ctx = match ResumContext::from_gamma(cfg, inp.gamma.clone()) {
        Ok(c) => c,
        Err(e) => return CheckResult::fail("resum", e.to_string()),
    };
    let r1 = match ctx.resum_gamma(0.01) {
        Ok(r) => r,
        Err(e) => return CheckResult::fail("resum", e.to_string()),
    };
    if (r1.value / 0.01 - 1.0).abs() > 0.03 {
        return CheckResult::fail("resum", format!("leading behavior {}", r1.value / 0.01));
    }
    for a in [0.01, 0.05] {
        match ctx.resum_g(a, 0.0) {
            Ok(r) if r.value == 1.0 => {}
            Ok(r) => return CheckResult::fail("resum", format!("G({a}, 0) = {}", r.value)),
            Err(e) => return CheckResult::fail("resum", e.to_string()),
        }
    }
    match ctx.resum_g(0.02, 1.0) {
        Ok(r) if r.im_value.abs() <= 1e-8 => CheckResult::ok(
            "resum",
            format!(
                "Laplace oracle to 1e-8; resum gamma(0.01)/a = {:.5}; G(a,0) = 1 exactly; median real to {:.1e}",
                r1.value / 0.01,
                r.im_value.abs().max(r.flags.im_clipped)
            ),
        ),
        Ok(r) => CheckResult::fail("resum", format!("imaginary leak {}", r.im_value)),
        Err(e) => CheckResult::fail("resum", e.to_string()),
    }
}

pub fn results_to_json(results: &[CheckResult], seed: u64) -> Value {
    let mut checks = Map::new();
    for r in results {
        checks.insert(
            r.name.to_string(),
            json!({"pass": r.pass, "hard": r.hard, "detail": r.detail}),
        );
    }
    let hard_fail = results.iter().filter(|r| r.hard && !r.pass).count();
    json!({
        "checks": Value::Object(checks),
        "seed": seed,
        "summary": {
            "total": results.len(),
            "hard_failures": hard_fail,
            "pass": hard_fail == 0,
        }
    })
}
