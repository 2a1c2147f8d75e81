//! Exit criteria for the whole workspace. Each criterion prints one
//! PASS/FAIL line; the test fails if any criterion fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::process::Command;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use wbell::bell::{
    bell_factor, min_efficiency, min_efficiency_frontier, omega_closed_form_hybrid,
    omega_closed_form_optimal, Scheme, SolveFor, Threshold,
};
use wbell::homodyne::{chi_quadrature, hd_projector, QuadratureBin};
use wbell::measurement::{
    probability_compact, probability_dense, EfficiencyAssignment, MeasurementSetting, Observable,
};
use wbell::mode_algebra::{standard_projector, StandardEffect};
use wbell::wstate::AttenuatedWState;
use wbell::Execution;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn eff(z: f64, x: f64) -> EfficiencyAssignment {
    EfficiencyAssignment::new(z, x).unwrap()
}

fn ideal_case_law() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=20 {
        let omega = bell_factor(n, eff(1.0, 1.0), Scheme::Optimal).unwrap().omega;
        worst = worst.max((omega - (1.0 - n as f64 / 2f64.powi(n as i32 - 1))).abs());
    }
    let o3 = bell_factor(3, eff(1.0, 1.0), Scheme::Optimal).unwrap().omega;
    let o4 = bell_factor(4, eff(1.0, 1.0), Scheme::Optimal).unwrap().omega;
    check(
        worst <= 1e-12 && (o3 - 0.25).abs() <= 1e-12 && (o4 - 0.5).abs() <= 1e-12,
        format!("max |Ω - (1 - N/2^(N-1))| = {worst:.2e}; Ω(3) = {o3}, Ω(4) = {o4}"),
    )
}

fn closed_form_agreement() -> Outcome {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let (mut worst_opt, mut worst_hyb) = (0.0f64, 0.0f64);
    for n in 2..=10 {
        for &z in &grid {
            for &x in &grid {
                let o = bell_factor(n, eff(z, x), Scheme::Optimal).unwrap().omega;
                worst_opt = worst_opt.max((o - omega_closed_form_optimal(n, z, x)).abs());
                let h = bell_factor(n, eff(z, x), Scheme::Hybrid).unwrap().omega;
                worst_hyb = worst_hyb.max((h - omega_closed_form_hybrid(n, z, x)).abs());
            }
        }
    }
    check(
        worst_opt <= 1e-10 && worst_hyb <= 1e-10,
        format!("optimal max dev {worst_opt:.2e}, hybrid max dev {worst_hyb:.2e} (tol 1e-10)"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_110_053);
    let effects = [
        (standard_projector(StandardEffect::ZPlus), Observable::Z),
        (standard_projector(StandardEffect::ZMinus), Observable::Z),
        (standard_projector(StandardEffect::XPlus), Observable::X),
        (standard_projector(StandardEffect::XMinus), Observable::X),
        (hd_projector(QuadratureBin::Positive, 1).unwrap().to_effect(), Observable::X),
        (hd_projector(QuadratureBin::Negative, 1).unwrap().to_effect(), Observable::X),
    ];
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let eta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let state = AttenuatedWState::pure(n).unwrap().attenuate(&eta).unwrap();
        let setting = MeasurementSetting::from_pairs(
            (0..n).map(|_| effects.choose(&mut rng).unwrap().clone()),
        );
        let c = probability_compact(&state, &setting).unwrap();
        let d = probability_dense(&state, &setting).unwrap();
        worst = worst.max((c - d).abs());
    }
    check(worst <= 1e-12, format!("200 random cases, max |compact - dense| = {worst:.2e}"))
}

fn global_min(solve_for: SolveFor) -> (usize, f64) {
    min_efficiency_frontier(2, 20, solve_for, 1.0, Execution::default())
        .unwrap()
        .global_min()
        .unwrap()
}

fn optimal_thresholds() -> Outcome {
    let (nz, z) = global_min(SolveFor::Z);
    let (nx, x) = global_min(SolveFor::X);
    check(
        nz == 4 && (z - 0.800).abs() <= 1e-3 && nx == 3 && (x - 0.500).abs() <= 1e-3,
        format!("min η_z² = {z:.6} at N = {nz}; min η_x² = {x:.6} at N = {nx}"),
    )
}

fn hadamard_threshold() -> Outcome {
    let frontier = min_efficiency_frontier(2, 20, SolveFor::Hadamard, 1.0, Execution::default()).unwrap();
    let (n, v) = frontier.global_min().unwrap();
    let tail: Vec<f64> = frontier
        .entries
        .iter()
        .filter(|(n, _)| *n >= 4)
        .map(|(_, t)| t.value().unwrap_or(f64::INFINITY))
        .collect();
    let monotone = tail.windows(2).all(|w| w[1] >= w[0]);
    check(
        n == 4 && (v - 0.862).abs() <= 1e-3 && monotone,
        format!("min = {v:.6} at N = {n}; non-decreasing for N >= 4: {monotone}"),
    )
}

fn hybrid_behaviour() -> Outcome {
    let omegas: Vec<(usize, f64)> = (2..=20)
        .map(|n| (n, bell_factor(n, eff(1.0, 1.0), Scheme::Hybrid).unwrap().omega))
        .collect();
    let &(peak_n, peak) = omegas.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    let negative_tail = omegas.iter().filter(|(n, _)| *n >= 6).all(|(_, o)| *o < 0.0);
    check(
        peak_n == 4 && (0.088..=0.094).contains(&peak) && negative_tail,
        format!("peak Ω_hybrid = {peak:.6} at N = {peak_n}; Ω < 0 for N in 6..=20: {negative_tail}"),
    )
}

fn hybrid_thresholds() -> Outcome {
    let apd = min_efficiency(3, SolveFor::Apd, 1.0).unwrap().value().unwrap_or(f64::NAN);
    let hd = min_efficiency(3, SolveFor::Hd, 1.0).unwrap().value().unwrap_or(f64::NAN);
    let exact_apd = (1.75 - 1.0 / PI) / 1.5;
    let infeasible = (6..=20).all(|n| {
        min_efficiency(n, SolveFor::Apd, 1.0).unwrap() == Threshold::Infeasible
            && min_efficiency(n, SolveFor::Hd, 1.0).unwrap() == Threshold::Infeasible
    });
    check(
        (apd - 0.955).abs() <= 1e-3
            && (apd - exact_apd).abs() <= 1e-12
            && (hd - FRAC_PI_4).abs() <= 1e-3
            && infeasible,
        format!("APD root {apd:.6} (exact {exact_apd:.6}); HD root {hd:.6} (π/4); infeasible N >= 6: {infeasible}"),
    )
}

fn homodyne_math() -> Outcome {
    let chi01 = chi_quadrature(0, 1, QuadratureBin::Positive).unwrap();
    let expected = 1.0 / (2.0 * PI).sqrt();
    let mut worst_completeness = 0.0f64;
    for m in 1..=4 {
        let sum = hd_projector(QuadratureBin::Positive, m).unwrap().matrix()
            + hd_projector(QuadratureBin::Negative, m).unwrap().matrix();
        for i in 0..=m {
            for j in 0..=m {
                let id = if i == j { 1.0 } else { 0.0 };
                worst_completeness = worst_completeness.max((sum[(i, j)] - id).abs());
            }
        }
    }
    let interference_zero = (2..=20).all(|n| {
        bell_factor(n, eff(1.0, 1.0), Scheme::Optimal).unwrap().p_xx_z == 0.0
    });
    check(
        (chi01 - expected).abs() <= 1e-9 && worst_completeness <= 1e-10 && interference_zero,
        format!(
            "χ01 quadrature dev {:.2e}; bin completeness dev {worst_completeness:.2e}; interference term exactly 0: {interference_zero}",
            (chi01 - expected).abs()
        ),
    )
}

fn sweep(scheme: &str) -> Vec<u8> {
    Command::new(env!("CARGO_BIN_EXE_wbell"))
        .args([
            "sweep", "--scheme", scheme, "--n-min", "2", "--n-max", "10",
            "--eta-z2", "0.9:1:0.1", "--eta-x2", "0.9:1:0.1",
        ])
        .output()
        .unwrap()
        .stdout
}

fn cli_determinism() -> Outcome {
    let fig2 = sweep("optimal");
    let fig5 = sweep("hybrid");
    let repeat = fig2 == sweep("optimal") && fig5 == sweep("hybrid");
    let golden2 = fig2 == include_bytes!("golden/fig2_optimal.csv").to_vec();
    let golden5 = fig5 == include_bytes!("golden/fig5_hybrid.csv").to_vec();
    let mut worst = 0.0f64;
    for (bytes, closed) in [
        (&fig2, omega_closed_form_optimal as fn(usize, f64, f64) -> f64),
        (&fig5, omega_closed_form_hybrid),
    ] {
        for line in std::str::from_utf8(bytes).unwrap().lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let n: usize = f[1].parse().unwrap();
            let (z, x, omega): (f64, f64, f64) =
                (f[2].parse().unwrap(), f[3].parse().unwrap(), f[8].parse().unwrap());
            worst = worst.max((omega - closed(n, z, x)).abs());
        }
    }
    check(
        repeat && golden2 && golden5 && worst <= 1e-10,
        format!("repeatable: {repeat}; golden fig2: {golden2}; golden fig5: {golden5}; row Ω vs closed form max dev {worst:.2e}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 ideal-case law", ideal_case_law),
        ("2 closed-form agreement", closed_form_agreement),
        ("3 oracle equivalence", oracle_equivalence),
        ("4 optimal thresholds", optimal_thresholds),
        ("5 hadamard threshold", hadamard_threshold),
        ("6 hybrid behaviour", hybrid_behaviour),
        ("7 hybrid thresholds", hybrid_thresholds),
        ("8 homodyne math", homodyne_math),
        ("9 CLI determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(detail) => {
                println!("FAIL [{name}] {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
