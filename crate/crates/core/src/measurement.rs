//! N-mode joint probabilities `Tr{(⊗_k Π_k) ρ}` on attenuated W states.
//!
//! [`probability_compact`] works on the vacuum + single-excitation form and
//! costs `O(N²)`; [`probability_dense`] builds the full Kronecker product and
//! density matrix and serves as an oracle for small `N`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mode_algebra::{clamp_probability, QubitOperator};
use crate::wstate::{AttenuatedWState, DENSE_MAX_MODES};

/// Which Pauli observable a mode is measuring; selects the detector efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Z,
    X,
}

/// One effect per mode together with the observable it realises.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    effects: Vec<QubitOperator>,
    labels: Vec<Observable>,
}

impl MeasurementSetting {
    pub fn new(effects: Vec<QubitOperator>, labels: Vec<Observable>) -> Result<Self> {
        if effects.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: effects.len(),
                got: labels.len(),
            });
        }
        Ok(MeasurementSetting { effects, labels })
    }

    /// Builds a setting from `(effect, observable)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (QubitOperator, Observable)>,
    {
        let (effects, labels) = pairs.into_iter().unzip();
        MeasurementSetting { effects, labels }
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[QubitOperator] {
        &self.effects
    }

    pub fn labels(&self) -> &[Observable] {
        &self.labels
    }
}

/// Intensity efficiencies of the Z-type and X-type detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyAssignment {
    eta_z_sq: f64,
    eta_x_sq: f64,
}

impl EfficiencyAssignment {
    pub fn new(eta_z_sq: f64, eta_x_sq: f64) -> Result<Self> {
        for (mode, v) in [(0, eta_z_sq), (1, eta_x_sq)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::EfficiencyOutOfRange { mode, value: v });
            }
        }
        Ok(EfficiencyAssignment { eta_z_sq, eta_x_sq })
    }

    pub fn ideal() -> Self {
        EfficiencyAssignment {
            eta_z_sq: 1.0,
            eta_x_sq: 1.0,
        }
    }

    pub fn eta_z_sq(&self) -> f64 {
        self.eta_z_sq
    }

    pub fn eta_x_sq(&self) -> f64 {
        self.eta_x_sq
    }

    pub fn intensity(&self, obs: Observable) -> f64 {
        match obs {
            Observable::Z => self.eta_z_sq,
            Observable::X => self.eta_x_sq,
        }
    }
}

/// Per-mode amplitude transmissions: each mode pays the efficiency of the
/// detector that measures it in this setting.
pub fn apply_efficiencies(setting: &MeasurementSetting, eff: &EfficiencyAssignment) -> Vec<f64> {
    setting
        .labels
        .iter()
        .map(|&obs| eff.intensity(obs).sqrt())
        .collect()
}

fn check_lengths(state: &AttenuatedWState, setting: &MeasurementSetting) -> Result<()> {
    if state.n_modes() != setting.len() {
        return Err(Error::LengthMismatch {
            expected: state.n_modes(),
            got: setting.len(),
        });
    }
    Ok(())
}

/// Joint probability from the compact state representation.
///
/// The vacuum contributes `∏_k Π_k[0,0]`; the coherence `|γ_i⟩⟨γ_j|`
/// contributes `Π_i[0,1] Π_j[1,0] ∏_{k≠i,j} Π_k[0,0]` (or `Π_i[1,1]` on the
/// diagonal). The products over the remaining modes are assembled from
/// prefix/suffix products so no division by a vanishing `Π_k[0,0]` occurs.
/// Terms are summed in ascending `(i, j)` order.
pub fn probability_compact(state: &AttenuatedWState, setting: &MeasurementSetting) -> Result<f64> {
    check_lengths(state, setting)?;
    let n = state.n_modes();
    let a: Vec<f64> = setting.effects.iter().map(|e| e.entry(0, 0)).collect();
    let up: Vec<f64> = setting.effects.iter().map(|e| e.entry(0, 1)).collect();
    let down: Vec<f64> = setting.effects.iter().map(|e| e.entry(1, 0)).collect();
    let diag: Vec<f64> = setting.effects.iter().map(|e| e.entry(1, 1)).collect();

    // prefix[k] = ∏_{l<k} a_l, suffix[k] = ∏_{l≥k} a_l
    let mut prefix = vec![1.0; n + 1];
    let mut suffix = vec![1.0; n + 1];
    for k in 0..n {
        prefix[k + 1] = prefix[k] * a[k];
    }
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] * a[k];
    }

    let exc = state.excitation_matrix();
    let mut total = state.vacuum_weight() * prefix[n];
    // between[j] = ∏_{j<l<i} a_l for j < i, rebuilt for each row i
    let mut between = vec![1.0; n];
    for i in 0..n {
        if i > 0 {
            between[i - 1] = 1.0;
            for j in (0..i - 1).rev() {
                between[j] = between[j + 1] * a[j + 1];
            }
        }
        for j in 0..i {
            let rest = prefix[j] * between[j] * suffix[i + 1];
            total += exc[(i, j)] * down[j] * up[i] * rest;
        }
        total += exc[(i, i)] * diag[i] * prefix[i] * suffix[i + 1];
        let mut mid = 1.0;
        for j in (i + 1)..n {
            let rest = prefix[i] * mid * suffix[j + 1];
            total += exc[(i, j)] * up[i] * down[j] * rest;
            mid *= a[j];
        }
    }
    clamp_probability(total)
}

/// Joint probability by explicit Kronecker product against the dense state.
///
/// Effects are restricted to their `{|0⟩, |1⟩}` block, which is exact because
/// the state has no support on higher photon numbers.
pub fn probability_dense(state: &AttenuatedWState, setting: &MeasurementSetting) -> Result<f64> {
    check_lengths(state, setting)?;
    if state.n_modes() > DENSE_MAX_MODES {
        return Err(Error::DenseTooLarge {
            got: state.n_modes(),
            max: DENSE_MAX_MODES,
        });
    }
    let rho = state.to_dense()?;
    let joint = setting
        .effects
        .iter()
        .map(QubitOperator::qubit_block)
        .reduce(|acc, e| acc.kronecker(&e))
        .unwrap_or_else(|| DMatrix::identity(1, 1));
    let raw = joint.component_mul(&rho.transpose()).sum();
    clamp_probability(raw)
}
