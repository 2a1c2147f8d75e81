//! The W-state Bell factor
//!
//! ```text
//! Ω = N·P(z₁=-1, z₂..=+1) - N(N-1)·P(x₁=+1, x₂=-1, z₃..=+1)
//!     - P(x all +1) - P(x all -1)
//! ```
//!
//! evaluated through [`crate::measurement`], together with the published
//! closed forms (used as cross-checks) and the minimum-efficiency solver.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::homodyne::{hd_projector, QuadratureBin};
use crate::measurement::{
    apply_efficiencies, probability_compact, EfficiencyAssignment, MeasurementSetting, Observable,
};
use crate::mode_algebra::{standard_projector, QubitOperator, StandardEffect};
use crate::wstate::AttenuatedWState;

/// Tolerance of the bisection fallback on η².
pub const BISECTION_TOL: f64 = 1e-10;
/// Slopes smaller than this are treated as exactly zero.
const FLAT_SLOPE: f64 = 1e-14;
/// A flat Ω must exceed this to count as a violation.
const FLAT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Ideal Pauli projectors for both `Ẑ` and `X̂`.
    Optimal,
    /// APD for `Ẑ`, sign-binned homodyne for `X̂`.
    Hybrid,
    /// `X̂` via a perfect Hadamard rotation and a `Ẑ` detector, so every mode
    /// pays the `Ẑ` efficiency.
    Hadamard,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Optimal => "optimal",
            Scheme::Hybrid => "hybrid",
            Scheme::Hadamard => "hadamard",
        }
    }

    /// The efficiencies actually seen by the detectors.
    pub fn effective(self, eff: EfficiencyAssignment) -> EfficiencyAssignment {
        match self {
            Scheme::Hadamard => EfficiencyAssignment::new(eff.eta_z_sq(), eff.eta_z_sq())
                .expect("eta_z_sq already validated"),
            _ => eff,
        }
    }

    fn z_effect(self, plus: bool) -> QubitOperator {
        standard_projector(if plus { StandardEffect::ZPlus } else { StandardEffect::ZMinus })
    }

    fn x_effect(self, plus: bool) -> QubitOperator {
        match self {
            Scheme::Hybrid => {
                let bin = if plus { QuadratureBin::Positive } else { QuadratureBin::Negative };
                hd_projector(bin, 1).expect("cutoff 1 is valid").to_effect()
            }
            _ => standard_projector(if plus { StandardEffect::XPlus } else { StandardEffect::XMinus }),
        }
    }

    /// The four representative settings entering `Ω`, in the order
    /// single-click, interference, all-plus, all-minus.
    pub fn settings(self, n_modes: usize) -> [MeasurementSetting; 4] {
        let z = |plus| (self.z_effect(plus), Observable::Z);
        let x = |plus| (self.x_effect(plus), Observable::X);
        let click = std::iter::once(z(false)).chain((1..n_modes).map(|_| z(true)));
        let interference = [x(true), x(false)]
            .into_iter()
            .chain((2..n_modes).map(|_| z(true)));
        [
            MeasurementSetting::from_pairs(click),
            MeasurementSetting::from_pairs(interference),
            MeasurementSetting::from_pairs((0..n_modes).map(|_| x(true))),
            MeasurementSetting::from_pairs((0..n_modes).map(|_| x(false))),
        ]
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "optimal" => Ok(Scheme::Optimal),
            "hybrid" => Ok(Scheme::Hybrid),
            "hadamard" => Ok(Scheme::Hadamard),
            other => Err(format!("unknown scheme `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellBreakdown {
    pub n_modes: usize,
    pub scheme: Scheme,
    /// Efficiencies after the scheme's own substitution.
    pub efficiencies: EfficiencyAssignment,
    pub p_one_z_minus: f64,
    pub p_xx_z: f64,
    pub p_all_x_plus: f64,
    pub p_all_x_minus: f64,
    pub omega: f64,
}

impl BellBreakdown {
    /// `N` multiplying the single-click term.
    pub fn click_prefactor(&self) -> f64 {
        self.n_modes as f64
    }

    /// `(N)₂ = N(N-1)` multiplying the interference term.
    pub fn interference_prefactor(&self) -> f64 {
        let n = self.n_modes as f64;
        n * (n - 1.0)
    }

    pub fn assemble(&self) -> f64 {
        self.click_prefactor() * self.p_one_z_minus
            - self.interference_prefactor() * self.p_xx_z
            - self.p_all_x_plus
            - self.p_all_x_minus
    }

    pub fn violates_locality(&self) -> bool {
        self.omega > 0.0
    }
}

/// Bell factor from the simulated measurement probabilities.
///
/// By permutation symmetry one representative setting per term suffices.
/// Every mode of every setting is attenuated by the efficiency of the
/// detector measuring it in that setting.
pub fn bell_factor(n_modes: usize, eff: EfficiencyAssignment, scheme: Scheme) -> Result<BellBreakdown> {
    if n_modes < 2 {
        return Err(Error::TooFewModes(n_modes));
    }
    let eff = scheme.effective(eff);
    let pure = AttenuatedWState::pure(n_modes)?;
    let mut probs = [0.0; 4];
    for (p, setting) in probs.iter_mut().zip(scheme.settings(n_modes)) {
        let state = pure.attenuate(&apply_efficiencies(&setting, &eff))?;
        *p = probability_compact(&state, &setting)?;
    }
    let mut out = BellBreakdown {
        n_modes,
        scheme,
        efficiencies: eff,
        p_one_z_minus: probs[0],
        p_xx_z: probs[1],
        p_all_x_plus: probs[2],
        p_all_x_minus: probs[3],
        omega: 0.0,
    };
    out.omega = out.assemble();
    Ok(out)
}

/// Closed-form `Ω(η_z², η_x²)` for ideal projectors.
pub fn omega_closed_form_optimal(n_modes: usize, eta_z_sq: f64, eta_x_sq: f64) -> f64 {
    let n = n_modes as f64;
    let p = 2f64.powf(1.0 - n);
    eta_z_sq / 2.0 * (3.0 + n * n / 2.0 - 1.5 * n) - p - n * n / 4.0
        + n / 4.0
        + eta_x_sq * (n / 2.0 + p - p * n - 0.5)
}

/// Closed-form `Ω_hybrid(η_APD², η_HD²)`.
pub fn omega_closed_form_hybrid(n_modes: usize, eta_apd_sq: f64, eta_hd_sq: f64) -> f64 {
    let n = n_modes as f64;
    let p = 2f64.powf(2.0 - n);
    eta_apd_sq / 4.0 * (n * n - 3.0 * n + 6.0)
        + eta_hd_sq / std::f64::consts::PI * (p + n - p * n - 1.0)
        + 0.25 * (n - n * n - 2f64.powf(3.0 - n))
}

/// Closed form for any scheme; the Hadamard scheme is the optimal one on the
/// diagonal `η_x² = η_z²`.
pub fn omega_closed_form(scheme: Scheme, n_modes: usize, eff: EfficiencyAssignment) -> f64 {
    match scheme {
        Scheme::Optimal => omega_closed_form_optimal(n_modes, eff.eta_z_sq(), eff.eta_x_sq()),
        Scheme::Hadamard => omega_closed_form_optimal(n_modes, eff.eta_z_sq(), eff.eta_z_sq()),
        Scheme::Hybrid => omega_closed_form_hybrid(n_modes, eff.eta_z_sq(), eff.eta_x_sq()),
    }
}

/// Which efficiency is solved for; the other is held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveFor {
    Z,
    X,
    /// Common `Ẑ` efficiency of the Hadamard scheme; nothing is held fixed.
    Hadamard,
    Apd,
    Hd,
}

impl SolveFor {
    pub fn name(self) -> &'static str {
        match self {
            SolveFor::Z => "z",
            SolveFor::X => "x",
            SolveFor::Hadamard => "hadamard",
            SolveFor::Apd => "apd",
            SolveFor::Hd => "hd",
        }
    }

    pub fn scheme(self) -> Scheme {
        match self {
            SolveFor::Z | SolveFor::X => Scheme::Optimal,
            SolveFor::Hadamard => Scheme::Hadamard,
            SolveFor::Apd | SolveFor::Hd => Scheme::Hybrid,
        }
    }

    /// Efficiency assignment with the solved-for value set to `value`.
    pub fn assignment(self, value: f64, fixed_other: f64) -> Result<EfficiencyAssignment> {
        match self {
            SolveFor::Z | SolveFor::Apd => EfficiencyAssignment::new(value, fixed_other),
            SolveFor::X | SolveFor::Hd => EfficiencyAssignment::new(fixed_other, value),
            SolveFor::Hadamard => EfficiencyAssignment::new(value, value),
        }
    }
}

impl fmt::Display for SolveFor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolveFor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "z" => Ok(SolveFor::Z),
            "x" => Ok(SolveFor::X),
            "hadamard" => Ok(SolveFor::Hadamard),
            "apd" => Ok(SolveFor::Apd),
            "hd" => Ok(SolveFor::Hd),
            other => Err(format!("unknown solve-for target `{other}`")),
        }
    }
}

/// Minimum intensity efficiency giving `Ω ≥ 0`, or `Infeasible` when no
/// value in `[0, 1]` does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Efficiency(f64),
    Infeasible,
}

impl Threshold {
    pub fn value(self) -> Option<f64> {
        match self {
            Threshold::Efficiency(v) => Some(v),
            Threshold::Infeasible => None,
        }
    }

    pub fn is_feasible(self) -> bool {
        matches!(self, Threshold::Efficiency(_))
    }
}

/// Smallest `e ∈ [0, 1]` with `intercept + slope·e ≥ 0`.
fn affine_root(intercept: f64, slope: f64) -> Threshold {
    if slope.abs() < FLAT_SLOPE {
        return if intercept > FLAT_MARGIN {
            Threshold::Efficiency(0.0)
        } else {
            Threshold::Infeasible
        };
    }
    let root = -intercept / slope;
    if slope > 0.0 {
        if root > 1.0 {
            Threshold::Infeasible
        } else {
            Threshold::Efficiency(root.max(0.0))
        }
    } else if intercept >= 0.0 {
        Threshold::Efficiency(0.0)
    } else {
        Threshold::Infeasible
    }
}

fn check_fixed(fixed_other: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&fixed_other) {
        return Err(Error::EfficiencyOutOfRange {
            mode: 0,
            value: fixed_other,
        });
    }
    Ok(())
}

/// Ω is affine in each efficiency, so two engine evaluations fix the line
/// and the root is exact.
pub fn min_efficiency(n_modes: usize, solve_for: SolveFor, fixed_other: f64) -> Result<Threshold> {
    check_fixed(fixed_other)?;
    let scheme = solve_for.scheme();
    let at = |v: f64| -> Result<f64> {
        Ok(bell_factor(n_modes, solve_for.assignment(v, fixed_other)?, scheme)?.omega)
    };
    let intercept = at(0.0)?;
    let slope = at(1.0)? - intercept;
    Ok(affine_root(intercept, slope))
}

/// Bisection on the engine for schemes where Ω is monotone but not affine.
pub fn min_efficiency_bisection(
    n_modes: usize,
    solve_for: SolveFor,
    fixed_other: f64,
) -> Result<Threshold> {
    check_fixed(fixed_other)?;
    let scheme = solve_for.scheme();
    let omega = |v: f64| -> Result<f64> {
        Ok(bell_factor(n_modes, solve_for.assignment(v, fixed_other)?, scheme)?.omega)
    };
    if omega(1.0)? < 0.0 {
        return Ok(Threshold::Infeasible);
    }
    if omega(0.0)? >= 0.0 {
        return Ok(Threshold::Efficiency(0.0));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if omega(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold::Efficiency(hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    pub solve_for: SolveFor,
    pub fixed_other: f64,
    pub entries: Vec<(usize, Threshold)>,
}

impl Frontier {
    /// Smallest feasible threshold and the first `N` attaining it.
    pub fn global_min(&self) -> Option<(usize, f64)> {
        self.entries
            .iter()
            .filter_map(|&(n, t)| t.value().map(|v| (n, v)))
            .fold(None, |best: Option<(usize, f64)>, (n, v)| match best {
                Some((_, bv)) if bv <= v => best,
                _ => Some((n, v)),
            })
    }
}

pub fn min_efficiency_frontier(
    n_min: usize,
    n_max: usize,
    solve_for: SolveFor,
    fixed_other: f64,
    exec: Execution,
) -> Result<Frontier> {
    if n_min < 2 || n_max < n_min {
        return Err(Error::InvalidRange { min: n_min, max: n_max });
    }
    let entries = map_ordered((n_min..=n_max).collect(), exec, |n| {
        min_efficiency(n, solve_for, fixed_other).map(|t| (n, t))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(Frontier {
        solve_for,
        fixed_other,
        entries,
    })
}
