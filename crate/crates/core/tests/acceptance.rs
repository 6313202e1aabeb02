//! End-to-end acceptance suite. Each criterion prints one pass/fail line;
//! the test fails if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;

use uncq::bounds::{
    berta_rhs, fine_grained_bound, game_max, joint_fine_grained, key_rate_berta,
    key_rate_fine_grained, WinningRule,
};
use uncq::entropy::binary_entropy;
use uncq::linalg::{kron, trace_product, ComplexMatrix};
use uncq::measure::{complementarity, MeasurementPair};
use uncq::states::{bell, bell_diagonal_mix, mmm, random_density, werner, BellKind, TwoQubitState};
use uncq::verify::run_all;
use uncq::BlochDirection64;

const EPS: f64 = 1e-6;

fn check(cond: bool, detail: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail.to_string())
    }
}

fn zx_pair() -> MeasurementPair<f64> {
    MeasurementPair::new(BlochDirection64::z_axis(), BlochDirection64::x_axis(), EPS).unwrap()
}

/// Anisotropic correlation state: fine-grained vs. weaker bound at (z, x).
fn criterion_1() -> Result<(), String> {
    let rho = mmm::<f64>(0.5, -0.2, -0.3).unwrap();
    let report = fine_grained_bound(&rho, &BlochDirection64::z_axis(), EPS).unwrap();
    check(
        (report.fg_bound.bits - 1.7454).abs() <= 1e-3,
        &format!("fg bound {} != 1.7454", report.fg_bound.bits),
    )?;
    let rhs = berta_rhs(&rho, &BlochDirection64::z_axis(), &BlochDirection64::x_axis()).unwrap();
    check((rhs - 1.5589).abs() <= 1e-3, &format!("rhs {rhs} != 1.5589"))?;
    check(
        report.argmin_s.axis_distance(&BlochDirection64::x_axis()) <= 1e-4,
        &format!("argmin ({}, {}) not on x-axis", report.argmin_s.theta(), report.argmin_s.phi()),
    )?;
    check(
        (report.p_extremal - 0.25).abs() <= 1e-6,
        &format!("p_extremal {} != 0.25", report.p_extremal),
    )
}

/// Two-Bell mixture: closed-form fixed-z bound across the mixing range.
fn criterion_2() -> Result<(), String> {
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = bell_diagonal_mix::<f64>(p).unwrap();
        let report = fine_grained_bound(&rho, &BlochDirection64::z_axis(), EPS).unwrap();
        let want = binary_entropy(1.0 - p).unwrap().bits;
        check(
            (report.fg_bound.bits - want).abs() <= 1e-6,
            &format!("p={p}: fg {} != H(1-p) {want}", report.fg_bound.bits),
        )?;
        check(
            (report.p_d_r - (1.0 - p)).abs() <= 1e-9,
            &format!("p={p}: p_d^z {} != {}", report.p_d_r, 1.0 - p),
        )?;
        check(
            (report.p_extremal - 1.0).abs() <= 1e-6,
            &format!("p={p}: p_extremal {} != 1", report.p_extremal),
        )?;
        if p > 0.0 {
            // At p = 0 the surface is fully degenerate (every direction
            // attains the extremum), so only check the location for p > 0.
            check(
                report.argmin_s.axis_distance(&BlochDirection64::y_axis()) <= 1e-3,
                &format!(
                    "p={p}: argmin ({}, {}) not on y-axis",
                    report.argmin_s.theta(),
                    report.argmin_s.phi()
                ),
            )?;
        } else {
            let p_y = uncq::measure::discord_probability(&rho, &BlochDirection64::y_axis());
            check((p_y - 1.0).abs() <= 1e-9, &format!("p=0: p_d^y {p_y} != 1"))?;
        }
    }
    Ok(())
}

/// Maximally entangled state: zero bound and the closed-form sweep curve.
fn criterion_3() -> Result<(), String> {
    let rho = bell::<f64>(BellKind::PhiPlus);
    let report = fine_grained_bound(&rho, &BlochDirection64::z_axis(), EPS).unwrap();
    check(report.fg_bound.bits.abs() <= 1e-9, &format!("fg {} != 0", report.fg_bound.bits))?;

    let z = BlochDirection64::z_axis();
    for i in 0..121 {
        let theta = PI * i as f64 / 120.0;
        let s = BlochDirection64::wrapped(theta, 0.0);
        let got = berta_rhs(&rho, &z, &s).unwrap();
        let half = theta / 2.0;
        let c = half.cos().powi(2).max(half.sin().powi(2));
        let want = -1.0 + (1.0 / c).log2();
        check(
            (got - want).abs() <= 1e-9,
            &format!("theta={theta}: rhs {got} != {want}"),
        )?;
        if (theta - FRAC_PI_2).abs() < 1e-12 {
            check(got.abs() <= 1e-9, &format!("rhs at pi/2 is {got}, not 0"))?;
        }
        if theta == 0.0 || (theta - PI).abs() < 1e-12 {
            check((got + 1.0).abs() <= 1e-9, &format!("rhs at pole is {got}, not -1"))?;
        }
    }
    Ok(())
}

/// Isotropic mixture family: joint bound vs. the weaker bound, touching
/// only at the endpoints.
fn criterion_4() -> Result<(), String> {
    let z = BlochDirection64::z_axis();
    let x = BlochDirection64::x_axis();
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = werner::<f64>(p).unwrap();
        let fg = joint_fine_grained(&rho, EPS).unwrap().fg_bound.bits;
        let want_fg = 2.0 * binary_entropy((1.0 + p) / 2.0).unwrap().bits;
        check(
            (fg - want_fg).abs() <= 1e-6,
            &format!("p={p}: joint fg {fg} != {want_fg}"),
        )?;

        let rhs = berta_rhs(&rho, &z, &x).unwrap();
        let xlog = |v: f64| if v > 0.0 { v * v.log2() } else { 0.0 };
        let s_ab = -3.0 * xlog((1.0 - p) / 4.0) - xlog((1.0 + 3.0 * p) / 4.0);
        check((rhs - s_ab).abs() <= 1e-9, &format!("p={p}: rhs {rhs} != {s_ab}"))?;

        let gap = fg - rhs;
        if p == 0.0 || p == 1.0 {
            check(gap.abs() <= 1e-6, &format!("p={p}: endpoint gap {gap} != 0"))?;
        } else {
            check(gap > 1e-6, &format!("p={p}: interior gap {gap} not positive"))?;
        }
    }
    Ok(())
}

/// Seeded property suites at full scale.
fn criterion_5() -> Result<(), String> {
    let suites = run_all(1000, 0);
    for suite in &suites {
        check(
            suite.failed == 0,
            &format!(
                "suite {} failed {} of {} ({})",
                suite.name,
                suite.failed,
                suite.passed + suite.failed,
                suite.first_failure.as_deref().unwrap_or("no detail")
            ),
        )?;
    }
    Ok(())
}

/// Correlation `<a.sigma x b.sigma>` straight from the density matrix,
/// independent of the game module.
fn pauli_correlation(rho: &TwoQubitState<f64>, a: &BlochDirection64, b: &BlochDirection64) -> f64 {
    let spin = |n: &BlochDirection64| {
        let [nx, ny, nz] = n.unit_vector();
        let p = uncq::linalg::paulis::<f64>();
        p[0].scale_re(nx).add(&p[1].scale_re(ny)).add(&p[2].scale_re(nz))
    };
    trace_product(&kron(&spin(a), &spin(b)), rho.matrix()).unwrap().re
}

/// CHSH: optimizer vs. a coarse brute-force oracle, plus classical caps.
fn criterion_6() -> Result<(), String> {
    let singlet = bell::<f64>(BellKind::PsiMinus);
    let (_, value) = game_max(&singlet, WinningRule::Chsh).unwrap();
    check(
        (value - 0.85355).abs() <= 1e-4,
        &format!("singlet optimum {value} != 0.85355"),
    )?;

    // Independent oracle: best CHSH value over a 20-direction grid, 20^4
    // setting combinations, using only the Pauli-correlation trace.
    let mut dirs = Vec::new();
    for i in 0..5 {
        for j in 0..4 {
            dirs.push(BlochDirection64::wrapped(
                PI * i as f64 / 4.0,
                FRAC_PI_2 * j as f64,
            ));
        }
    }
    let e: Vec<Vec<f64>> = dirs
        .iter()
        .map(|a| dirs.iter().map(|b| pauli_correlation(&singlet, a, b)).collect())
        .collect();
    let n = dirs.len();
    let mut oracle = f64::NEG_INFINITY;
    for a0 in 0..n {
        for a1 in 0..n {
            for b0 in 0..n {
                for b1 in 0..n {
                    let v = 0.5 + (e[a0][b0] + e[a0][b1] + e[a1][b0] - e[a1][b1]) / 8.0;
                    oracle = oracle.max(v);
                }
            }
        }
    }
    check(
        value >= oracle - 1e-9,
        &format!("optimizer {value} below brute-force oracle {oracle}"),
    )?;
    check(
        (oracle - 0.85355).abs() <= 1e-4,
        &format!("oracle {oracle} != 0.85355"),
    )?;

    let mixed =
        TwoQubitState::new(ComplexMatrix::<f64>::identity(4).scale_re(0.25), "mixed").unwrap();
    let (_, value) = game_max(&mixed, WinningRule::Chsh).unwrap();
    check((value - 0.5).abs() <= 1e-12, &format!("mixed optimum {value} != 0.5"))?;

    for seed in 0..20 {
        let a = random_density::<f64>(seed).marginal(uncq::linalg::Subsystem::A);
        let b = random_density::<f64>(seed + 1000).marginal(uncq::linalg::Subsystem::B);
        let product = TwoQubitState::new(kron(&a, &b), "product").unwrap();
        let (_, value) = game_max(&product, WinningRule::Chsh).unwrap();
        check(
            value <= 0.75 + 1e-9,
            &format!("product state (seed {seed}) beat the classical cap: {value}"),
        )?;
    }
    Ok(())
}

/// Key-rate bounds at the reference states plus the trivial cap.
fn criterion_7() -> Result<(), String> {
    let pair = zx_pair();
    let phi = bell::<f64>(BellKind::PhiPlus);
    let kb = key_rate_berta(&phi, &pair).unwrap();
    let kf = key_rate_fine_grained(&phi, &pair, EPS).unwrap();
    check((kb - 1.0).abs() <= 1e-9, &format!("phi+ berta rate {kb} != 1"))?;
    check((kf - 1.0).abs() <= 1e-9, &format!("phi+ fine-grained rate {kf} != 1"))?;

    let mixed =
        TwoQubitState::new(ComplexMatrix::<f64>::identity(4).scale_re(0.25), "mixed").unwrap();
    let kb = key_rate_berta(&mixed, &pair).unwrap();
    let kf = key_rate_fine_grained(&mixed, &pair, EPS).unwrap();
    check((kb + 1.0).abs() <= 1e-9, &format!("mixed berta rate {kb} != -1"))?;
    check((kf + 1.0).abs() <= 1e-9, &format!("mixed fine-grained rate {kf} != -1"))?;

    let cap = (1.0 / complementarity(&pair.r, &pair.s)).log2();
    for seed in 0..200 {
        let rho = random_density::<f64>(seed);
        let kf = key_rate_fine_grained(&rho, &pair, EPS).unwrap();
        check(
            kf <= cap + 1e-12,
            &format!("seed {seed}: rate {kf} above cap {cap}"),
        )?;
    }
    Ok(())
}

/// CLI determinism and a full verification pass through the binary.
///
/// The long `verify` run is started before the other criteria and only
/// collected here, so it overlaps with the in-process work.
fn criterion_8(verify_child: std::process::Child) -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_uncq");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| format!("failed to spawn {bin}: {e}"))
    };

    for args in [
        vec!["fg", "--state", "mmm:c1=0.5,c2=-0.2,c3=-0.3"],
        vec!["sweep", "--state", "bell:phi+", "--steps", "61"],
        vec!["game", "--state", "bell:psi-", "--optimize"],
    ] {
        let first = run(&args)?;
        let second = run(&args)?;
        check(
            first.status == second.status && first.stdout == second.stdout,
            &format!("non-deterministic output for {args:?}"),
        )?;
        check(first.status.success(), &format!("{args:?} exited {:?}", first.status))?;
    }

    let out = verify_child
        .wait_with_output()
        .map_err(|e| format!("failed to wait for verify: {e}"))?;
    check(
        out.status.code() == Some(0),
        &format!(
            "verify --trials 1000 --seed 0 exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        ),
    )
}

#[test]
fn acceptance() {
    let verify_child = Command::new(env!("CARGO_BIN_EXE_uncq"))
        .args(["verify", "--trials", "1000", "--seed", "0"])
        .stdout(std::process::Stdio::piped())
        .spawn()
        .expect("spawn uncq verify");

    type Criterion = Box<dyn FnOnce() -> Result<(), String>>;
    let criteria: [(&str, Criterion); 8] = [
        ("1 anisotropic-state bounds", Box::new(criterion_1)),
        ("2 two-Bell mixture family", Box::new(criterion_2)),
        ("3 maximally entangled sweep", Box::new(criterion_3)),
        ("4 isotropic mixture family", Box::new(criterion_4)),
        ("5 seeded property suites", Box::new(criterion_5)),
        ("6 CHSH game optimization", Box::new(criterion_6)),
        ("7 key-rate bounds", Box::new(criterion_7)),
        ("8 CLI determinism and verify", Box::new(move || criterion_8(verify_child))),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(()) => println!("criterion {name}: pass"),
            Err(detail) => {
                println!("criterion {name}: FAIL ({detail})");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
