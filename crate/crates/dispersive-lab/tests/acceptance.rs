//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`).

use dispersive_lab::grid::{forward_ft, gaussian_field, Field, GridSpec, Space};
use dispersive_lab::harness::registry::{default_config, run_estimate};
use dispersive_lab::harness::Outcome;
use num_complex::Complex64;

fn report(criterion: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {verdict} ({detail})");
    assert!(pass, "acceptance {criterion} failed: {detail}");
}

fn run(id: &str, overrides: &[(&str, &str)]) -> Outcome {
    let mut cfg = default_config(id).unwrap();
    for (k, v) in overrides {
        cfg.set(k, v);
    }
    run_estimate(id, &cfg).unwrap_or_else(|e| panic!("{id} failed to run: {e}"))
}

#[test]
fn criterion_01_plancherel_roundtrip() {
    let out = run("plancherel", &[("count", "100")]);
    report(
        "01 plancherel/round-trip",
        out.summary.pass,
        &format!("sup residual {:.3e} over 100 random fields", out.summary.measured),
    );
}

#[test]
fn criterion_02_self_duality_translation_modulation() {
    let d1 = run("gaussian-self-duality", &[("n", "1"), ("L", "14"), ("N", "128")]);
    let d2 = run("gaussian-self-duality", &[]);
    // translation-modulation law: the FT of g(x-x0) e^{i xi0 x} is
    // e^{-i x0 (xi - xi0)} g^(xi - xi0)
    let mut worst = d1.summary.measured.max(d2.summary.measured);
    for (dim, l, n) in [(1usize, 14.0f64, 128usize), (2, 14.0, 128)] {
        let grid = GridSpec::new(dim, l, n).unwrap();
        let x0: Vec<f64> = (0..dim).map(|i| 1.5 - i as f64).collect();
        let xi0: Vec<f64> = (0..dim).map(|i| 2.0 - 0.5 * i as f64).collect();
        let f = gaussian_field(grid, 1.0, &x0, &xi0);
        let fhat = forward_ft(&f).unwrap();
        let target = Field::from_fn(grid, Space::Frequency, |xi| {
            let q: f64 = xi.iter().zip(&xi0).map(|(a, b)| (a - b) * (a - b)).sum();
            let phase: f64 = x0
                .iter()
                .zip(xi.iter().zip(&xi0))
                .map(|(c, (a, b))| -c * (a - b))
                .sum();
            Complex64::from_polar((-q / 2.0).exp(), phase)
        });
        let scale = fhat.l2_norm() / target.l2_norm();
        let err = fhat
            .values()
            .iter()
            .zip(target.values())
            .map(|(a, b)| (a - b * scale).norm())
            .fold(0.0f64, f64::max);
        worst = worst.max(err);
    }
    report(
        "02 self-duality/translation-modulation",
        worst <= 1e-10,
        &format!("max lattice error {worst:.3e}"),
    );
}

#[test]
fn criterion_03_group_law_closed_form() {
    let mut worst_group = 0.0f64;
    let mut worst_closed = 0.0f64;
    for dim in ["1", "2"] {
        let g = run("group-law", &[("n", dim)]);
        let c = run("gaussian-closed-form", &[("n", dim)]);
        assert!(g.summary.pass && c.summary.pass);
        worst_group = worst_group.max(g.summary.measured);
        worst_closed = worst_closed.max(c.summary.measured);
    }
    report(
        "03 group law + Gaussian closed form",
        worst_group <= 1e-12 && worst_closed <= 1e-8,
        &format!("group {worst_group:.3e}, closed form {worst_closed:.3e}"),
    );
}

#[test]
fn criterion_04_duhamel_order() {
    let out = run("duhamel-order", &[]);
    report(
        "04 Duhamel 4th-order residual decay",
        out.summary.pass,
        &format!("measured order {:.3}", out.summary.measured),
    );
}

#[test]
fn criterion_05_kato_chain() {
    let out = run("kato-chain", &[]);
    report(
        "05 Kato chain identity",
        out.summary.pass,
        &format!("relative residual {:.3e}", out.summary.measured),
    );
}

#[test]
fn criterion_06_coarea() {
    let euclid = run("coarea", &[]);
    let lp4_coarse = run(
        "coarea",
        &[("symbol", "lp4"), ("tau_quad", "1024"), ("resolution", "64")],
    );
    let lp4_fine = run(
        "coarea",
        &[("symbol", "lp4"), ("tau_quad", "4096"), ("resolution", "128")],
    );
    let pass = euclid.summary.pass
        && lp4_fine.summary.measured <= 1e-4
        && lp4_fine.summary.measured <= lp4_coarse.summary.measured;
    report(
        "06 co-area identity",
        pass,
        &format!(
            "euclid {:.3e}, lp4 {:.3e} -> {:.3e} under refinement",
            euclid.summary.measured, lp4_coarse.summary.measured, lp4_fine.summary.measured
        ),
    );
}

#[test]
fn criterion_07_trace_closed_form() {
    let out = run("trace-closed-form", &[]);
    report(
        "07 trace closed form",
        out.summary.pass,
        &format!("worst relative error {:.3e} over tau in {{0.5,1,2}}", out.summary.measured),
    );
}

#[test]
fn criterion_08_uniform_trace() {
    let out = run("trace-uniform", &[]);
    assert_eq!(out.summary.rows, 50, "expected 25 members at each refinement");
    report(
        "08 uniform trace sweep",
        out.summary.pass && out.summary.family_sup.is_finite(),
        &format!(
            "family sup {:.3e}, refinement delta {:.2}%",
            out.summary.family_sup,
            100.0 * out.summary.measured
        ),
    );
}

#[test]
fn criterion_09_hoelder_trace() {
    let out = run("trace-hoelder", &[]);
    assert_eq!(out.summary.rows, 40, "expected 20 pairs at each refinement");
    report(
        "09 Hoelder trace continuity",
        out.summary.pass && out.summary.family_sup.is_finite(),
        &format!(
            "sup ratio {:.3e}, refinement delta {:.2}%",
            out.summary.family_sup,
            100.0 * out.summary.measured
        ),
    );
}

#[test]
fn criterion_10_lowfreq_trace() {
    let out = run("trace-lowfreq", &[]);
    report(
        "10 low-frequency trace",
        out.summary.pass,
        &format!(
            "refinement delta {:.2}%; {}",
            100.0 * out.summary.measured,
            out.summary.notes.first().map(String::as_str).unwrap_or("")
        ),
    );
}

#[test]
fn criterion_11_smoothing_sweeps() {
    let runs = [
        ("T11-I-homog", vec![]),
        ("T11-I-duhamel", vec![]),
        ("T11-II-homog", vec![]),
        ("T11-II-duhamel", vec![]),
        ("T11-II-homog", vec![("symbol", "lp4")]),
        ("T11-II-duhamel", vec![("symbol", "lp4")]),
    ];
    let mut detail = String::new();
    let mut pass = true;
    for (id, overrides) in &runs {
        let out = run(id, overrides);
        pass &= out.summary.pass && out.summary.family_sup.is_finite();
        let tag = if overrides.is_empty() { "" } else { "/lp4" };
        detail.push_str(&format!("{id}{tag} {:.2}% ", 100.0 * out.summary.measured));
    }
    report("11 smoothing ratio sweeps", pass, detail.trim());
}

#[test]
fn criterion_12_resolvent_sweeps_and_identities() {
    let runs = [
        ("T12-I", vec![]),
        ("T12-II", vec![]),
        ("T12-II", vec![("symbol", "lp4")]),
    ];
    let mut detail = String::new();
    let mut pass = true;
    for (id, overrides) in &runs {
        let out = run(id, overrides);
        pass &= out.summary.pass && out.summary.family_sup.is_finite();
        let tag = if overrides.is_empty() { "" } else { "/lp4" };
        detail.push_str(&format!("{id}{tag} {:.2}% ", 100.0 * out.summary.measured));
    }
    for id in ["resolvent-identity", "polarization", "pv-cancellation"] {
        let out = run(id, &[]);
        pass &= out.summary.pass;
        detail.push_str(&format!("{id} {:.1e} ", out.summary.measured));
    }
    report("12 resolvent sweeps + identities", pass, detail.trim());
}

#[test]
fn criterion_13_weighted_inequalities() {
    let mut detail = String::new();
    let mut pass = true;
    for id in ["stein-weiss", "weight-commutator", "freq-commutator"] {
        let out = run(id, &[]);
        assert_eq!(out.summary.rows, 14, "{id}: expected 7 dilations per refinement");
        pass &= out.summary.pass && out.summary.family_sup.is_finite();
        detail.push_str(&format!("{id} {:.2}% ", 100.0 * out.summary.measured));
    }
    let case3 = run("case3-commutator", &[]);
    pass &= case3.summary.pass;
    detail.push_str(&format!("case3 {:.1e}", case3.summary.measured));
    report("13 weighted-inequality sweeps + exact identity", pass, &detail);
}

#[test]
fn criterion_14_hypothesis_gating() {
    let cases: [(&str, &[(&str, &str)], &str); 4] = [
        ("T12-II", &[("m", "2.5")], "1 < m < n"),
        ("trace-lowfreq", &[("theta", "0.6")], "0 < theta < (n-1)/2"),
        ("weight-commutator", &[("delta", "1.2")], "0 < delta < 1"),
        ("freq-commutator", &[("kappa", "1.2")], "0 < kappa < 1"),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (id, overrides, expected) in cases {
        let mut cfg = default_config(id).unwrap();
        for (k, v) in overrides {
            cfg.set(k, v);
        }
        match run_estimate(id, &cfg) {
            Err(e) => {
                let msg = e.to_string();
                let ok = msg.starts_with("usage error") && msg.contains(expected);
                pass &= ok;
                detail.push_str(&format!("{id}:{} ", if ok { "gated" } else { "BAD" }));
            }
            Ok(_) => {
                pass = false;
                detail.push_str(&format!("{id}:NOT-GATED "));
            }
        }
    }
    report("14 hypothesis gating", pass, detail.trim());
}
