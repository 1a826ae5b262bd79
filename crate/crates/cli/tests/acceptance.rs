//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p quadri-cli --test acceptance -- --nocapture` to
//! see the report. The test fails if any criterion outside
//! `KNOWN_UNATTAINABLE` fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadri_core::quadrinomial::{criterion_sweep, verify_factorization};
use quadri_core::stability::{cohn_on_circle, corner_points, curve_iii, curve_iv, stability_boundary, trinomial_in_disk};
use quadri_core::univalent::{
    alexander, alexander_derivative_factored, f_family, fejer, fejer_closed_form_numerator,
    fejer_derivative_factored, phi_verdicts, w_checks,
};
use quadri_core::{
    boundary_image, classify_roots, find_roots, simple_curve_scan, CurveLabel, Error, Family, Kappa, QuadSpec,
    RealPoly, SolverOptions,
};

/// `φ_k` at `k = N` has a reciprocal real pair off the circle (N = 5:
/// moduli 0.4423 and 2.2610), so the all-k claim cannot hold.
const KNOWN_UNATTAINABLE: &[u32] = &[5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cusp_table() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_quadri"))
        .args(["cusps", "--N", "11", "--json"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let env: serde_json::Value = serde_json::from_slice(&out.stdout).expect("JSON envelope");
    let floats = |key: &str| -> Vec<f64> {
        env["payload"][key]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect()
    };
    let angles = floats("angles");
    let diffs = floats("differences");
    let round4 = |x: f64| (x * 1e4).round() / 1e4;
    let expected_angles = [0.3173, 0.9527, 1.5911, 2.2398];
    let expected_diffs = [0.6354, 0.6383, 0.6487];
    // the table truncates to four places; accept either truncation or rounding
    let matches = |got: &[f64], want: &[f64]| {
        got.len() == want.len()
            && got
                .iter()
                .zip(want)
                .all(|(g, w)| round4(*g) == *w || ((g * 1e4).floor() / 1e4 - w).abs() < 1e-12)
    };
    let pass = out.status.success()
        && matches(&angles, &expected_angles)
        && matches(&diffs, &expected_diffs)
        && elapsed < Duration::from_millis(100);
    outcome(
        pass,
        format!("angles {angles:.6?}, differences {diffs:.6?}, {:.3} s", elapsed.as_secs_f64()),
    )
}

fn criterion_equivalence() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    let mut disagreements = Vec::new();
    for family in [Family::P, Family::Q] {
        match criterion_sweep(family, 3..=40, 81, 1e-6, 1e-3) {
            Ok(records) => {
                total += records.len();
                disagreements.extend(
                    records
                        .into_iter()
                        .filter(|r| r.check.predicted != r.check.observed)
                        .map(|r| format!("{} N={} kappa={}", r.family, r.n, r.kappa)),
                );
            }
            Err(e) => return outcome(false, format!("sweep failed: {e}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        disagreements.is_empty() && elapsed < Duration::from_secs(30),
        format!(
            "{total} grid points, {} disagreements {:?}, {:.1} s",
            disagreements.len(),
            disagreements.iter().take(3).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    )
}

fn factorization_identities() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut worst: (f64, String) = (0.0, String::new());
    for n in 3..=101u32 {
        let (ni, di) = (n as i64, n as i64 - 2);
        let kappas = [Kappa::exact(-1, 1), Kappa::exact(1, 1), Kappa::exact(ni, di), Kappa::exact(-ni, di)];
        for family in [Family::P, Family::Q] {
            for kappa in kappas {
                let spec = QuadSpec::new(family, kappa, n).unwrap();
                match verify_factorization(&spec) {
                    Ok(d) => {
                        checked += 1;
                        if d > worst.0 {
                            worst = (d, format!("{family} kappa={kappa} N={n}"));
                        }
                    }
                    Err(Error::NotALimitCase { .. }) => {}
                    Err(e) => return outcome(false, format!("{family} kappa={kappa} N={n}: {e}")),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst.0 <= 1e-10 && elapsed < Duration::from_secs(10),
        format!(
            "{checked} limit cases, worst deviation {:.2e} ({}), {:.2} s",
            worst.0,
            worst.1,
            elapsed.as_secs_f64()
        ),
    )
}

fn fejer_alexander() -> Outcome {
    let mut worst = [0.0f64; 3];
    for n in 1..=60 {
        if n >= 2 {
            let d = fejer(n).unwrap().poly().derivative();
            worst[0] = worst[0].max(fejer_derivative_factored(n).unwrap().expand().max_abs_diff(&d));
        }
        let d = alexander(n).unwrap().poly().derivative();
        worst[1] = worst[1].max(alexander_derivative_factored(n).unwrap().expand().max_abs_diff(&d));
        let lhs = &RealPoly::linear_power(1.0, 3) * &fejer(n).unwrap().poly().derivative();
        worst[2] = worst[2].max(lhs.max_abs_diff(&fejer_closed_form_numerator(n)));
    }
    outcome(
        worst.iter().all(|&w| w <= 1e-10),
        format!(
            "N <= 60: Fejér {:.2e}, Alexander {:.2e}, closed form {:.2e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn phi_circle() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_below_n = 0.0f64;
    for n in (5..=21).step_by(2) {
        for v in phi_verdicts(n, 1e-5).unwrap() {
            if v.k < n {
                worst_below_n = worst_below_n.max(v.worst_deviation);
            }
            if !v.on_circle {
                failures.push(format!("N={n} k={} dev={:.3}", v.k, v.worst_deviation));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "off-circle roots for {} (N, k) pairs {:?}; k <= N-1 worst deviation {:.2e}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            worst_below_n
        ),
    )
}

fn quasi_extremality() -> Outcome {
    let mut bad = Vec::new();
    let mut worst_identity = 0.0f64;
    for n in (5..=21).step_by(2) {
        let w = w_checks(n, 1e-5).unwrap();
        worst_identity = worst_identity.max(w.derivative_identity_deviation);
        if !(w.order_five_zero && w.deflated_on_circle && w.derivative_identity_deviation <= 1e-10) {
            bad.push(n);
        }
    }
    outcome(
        bad.is_empty(),
        format!("N in 5..=21 odd, failing {bad:?}, worst F' identity deviation {worst_identity:.2e}"),
    )
}

fn random_circle_poly(rng: &mut ChaCha8Rng) -> RealPoly {
    let degree = rng.gen_range(1..=12usize);
    let mut p = RealPoly::new(vec![rng.gen_range(0.5..2.0) * if rng.gen() { 1.0 } else { -1.0 }]);
    if degree % 2 == 1 {
        let root = if rng.gen() { 1.0 } else { -1.0 };
        p = &p * &RealPoly::linear_power(root, 1);
    }
    for _ in 0..degree / 2 {
        let theta: f64 = rng.gen_range(0.05..PI - 0.05);
        p = &p * &RealPoly::circle_quadratic(theta.cos());
    }
    p
}

fn random_self_reciprocal(rng: &mut ChaCha8Rng) -> RealPoly {
    let degree = rng.gen_range(1..=12usize);
    let sign = if rng.gen() { 1.0 } else { -1.0 };
    let mut c = vec![0.0f64; degree + 1];
    for j in 0..=degree / 2 {
        let v: f64 = rng.gen_range(-1.0..1.0);
        c[j] = v;
        c[degree - j] = sign * v;
    }
    if degree % 2 == 0 && sign < 0.0 {
        c[degree / 2] = 0.0;
    }
    c[0] = if c[0].abs() < 0.1 { 0.5 } else { c[0] };
    c[degree] = sign * c[0];
    RealPoly::new(c)
}

fn cohn_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut polys: Vec<RealPoly> = (0..100).map(|_| random_circle_poly(&mut rng)).collect();
    polys.extend((0..100).map(|_| random_self_reciprocal(&mut rng)));

    let mut mismatches = 0;
    let mut on_circle = 0;
    for p in &polys {
        let cohn = cohn_on_circle(p, 1e-8).unwrap();
        let rs = find_roots(p, &SolverOptions::default()).unwrap();
        let direct = classify_roots(&rs, 1e-6).on_circle == rs.total;
        on_circle += direct as usize;
        mismatches += (cohn != direct) as usize;
    }

    let mut perturbed_true = 0;
    for p in &polys {
        let d = p.degree();
        let j = loop {
            let j = rng.gen_range(0..=d);
            if 2 * j != d {
                break j;
            }
        };
        let mut c = p.coeffs().to_vec();
        c[j] += rng.gen_range(1e-3..1e-1) * (1.0 + p.norm_inf());
        perturbed_true += cohn_on_circle(&RealPoly::new(c), 1e-8).unwrap() as usize;
    }
    outcome(
        mismatches == 0 && perturbed_true == 0,
        format!(
            "200 self-reciprocal ({on_circle} with all zeros on the circle): {mismatches} mismatches; \
             200 perturbed: {perturbed_true} accepted"
        ),
    )
}

/// Parameters of the midpoints of `pieces` equal-arclength pieces of a
/// parametric curve on `[t0, π]`.
fn arclength_midpoints(n: usize, f: fn(usize, f64) -> (f64, f64), t0: f64, pieces: usize) -> Vec<f64> {
    let dense = 20_000;
    // stop short of π, where the parametrization is 0/0; the remaining arc is negligible
    let ts: Vec<f64> = (0..=dense).map(|i| t0 + (PI - 1e-6 - t0) * i as f64 / dense as f64).collect();
    let mut arc = vec![0.0];
    for w in ts.windows(2) {
        let (a0, b0) = f(n, w[0]);
        let (a1, b1) = f(n, w[1]);
        arc.push(arc.last().unwrap() + (a1 - a0).hypot(b1 - b0));
    }
    let total = *arc.last().unwrap();
    (0..pieces)
        .map(|k| {
            let s = total * (k as f64 + 0.5) / pieces as f64;
            let i = arc.partition_point(|&x| x < s).clamp(1, dense);
            let frac = (s - arc[i - 1]) / (arc[i] - arc[i - 1]);
            ts[i - 1] + frac * (ts[i] - ts[i - 1])
        })
        .collect()
}

/// Curve, point `(a, b)` and tangent `(da, db)`.
type Probe = (CurveLabel, f64, f64, f64, f64);

fn stability_sharpness() -> Outcome {
    let eps = 1e-2;
    let mut failures = Vec::new();
    let mut tested = 0;
    for n in 3..=10usize {
        let set = stability_boundary(n, 20).unwrap();
        let (t0, _) = set.t_range;
        let mut probes: Vec<Probe> = Vec::new();
        for label in [CurveLabel::I, CurveLabel::II] {
            let pts = &set.curve(label).points;
            let (first, last) = (pts[0], pts[pts.len() - 1]);
            let (dx, dy) = (last.a - first.a, last.b - first.b);
            for k in 0..20 {
                let s = (k as f64 + 0.5) / 20.0;
                probes.push((label, first.a + s * dx, first.b + s * dy, dx, dy));
            }
        }
        for (label, f) in [(CurveLabel::III, curve_iii as fn(usize, f64) -> (f64, f64)), (CurveLabel::IV, curve_iv)] {
            for t in arclength_midpoints(n, f, t0, 20) {
                let (a, b) = f(n, t);
                let h = 1e-6;
                let (a1, b1) = f(n, t + h);
                let (a0, b0) = f(n, t - h);
                probes.push((label, a, b, a1 - a0, b1 - b0));
            }
        }
        for (label, a, b, dx, dy) in probes {
            let len = dx.hypot(dy);
            let (nx, ny) = (-dy / len, dx / len);
            let plus = trinomial_in_disk(n, a + eps * nx, b + eps * ny).unwrap();
            let minus = trinomial_in_disk(n, a - eps * nx, b - eps * ny).unwrap();
            tested += 1;
            if plus == minus {
                failures.push(format!("n={n} {label} ({a:.3}, {b:.3})"));
            }
        }
    }

    // t -> π limit of curve III for even n, by Richardson extrapolation
    let mut corner_err = 0.0f64;
    for n in (4..=10usize).step_by(2) {
        let (c3, _) = corner_points(n);
        let nf = n as f64;
        let target = (nf / (nf - 1.0), 1.0 / (nf - 1.0));
        let h = 1e-3;
        let (a1, b1) = curve_iii(n, PI - h);
        let (a2, b2) = curve_iii(n, PI - h / 2.0);
        let limit = ((4.0 * a2 - a1) / 3.0, (4.0 * b2 - b1) / 3.0);
        let last = *stability_boundary(n, 20).unwrap().curve(CurveLabel::III).points.last().unwrap();
        for (x, y) in [(limit.0, target.0), (limit.1, target.1), (c3.0, target.0), (c3.1, target.1), (last.a, target.0), (last.b, target.1)] {
            corner_err = corner_err.max((x - y).abs());
        }
    }
    outcome(
        failures.is_empty() && corner_err <= 1e-9,
        format!(
            "{tested} midpoint nudges, {} without a flip {:?}; even-n corner error {corner_err:.2e}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn univalence_scan() -> Outcome {
    let mut results = Vec::new();
    for (s, n) in [(0u8, 11usize), (1, 11), (2, 11), (3, 12), (4, 12)] {
        let img = boundary_image(f_family(s, n).unwrap().poly(), 4096).unwrap();
        results.push((s, n, simple_curve_scan(&img)));
    }
    // the scan must also be able to say no
    let square = boundary_image(&RealPoly::monomial(1.0, 2), 4096).unwrap();
    let detects = !simple_curve_scan(&square);
    outcome(
        results.iter().all(|r| r.2) && detects,
        format!("simple (s, N, simple): {results:?}; z^2 flagged: {detects}"),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "cusp-angle table", cusp_table),
        (2, "circle criterion equivalence sweep", criterion_equivalence),
        (3, "limit-case factorization identities", factorization_identities),
        (4, "Fejér and Alexander factorizations", fejer_alexander),
        (5, "phi_k zeros on the circle", phi_circle),
        (6, "quasi-extremality witness W", quasi_extremality),
        (7, "Cohn equivalence", cohn_equivalence),
        (8, "stability boundary sharpness", stability_sharpness),
        (9, "boundary self-intersection scan", univalence_scan),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} {verdict} {name}: {}", o.detail);
        if !o.pass && !KNOWN_UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
