//! Pure and attenuated N-mode W states.
//!
//! A W state carries one photon spread evenly over `N` modes. Losses are
//! modelled by a fictitious beam splitter of amplitude transmission `η_k` on
//! each mode, which leaves the state inside the span of the vacuum and the
//! single-excitation kets `|γ_k⟩`. [`AttenuatedWState`] therefore stores only
//! a vacuum weight plus an `N x N` coherence matrix over the `|γ_i⟩⟨γ_j|`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest `N` accepted by [`AttenuatedWState::to_dense`].
pub const DENSE_MAX_MODES: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct AttenuatedWState {
    eta: Vec<f64>,
    vacuum_weight: f64,
    excitation: DMatrix<f64>,
}

impl AttenuatedWState {
    /// The lossless W state `(1/√N) Σ_k |γ_k⟩`.
    pub fn pure(n_modes: usize) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::TooFewModes(n_modes));
        }
        let n = n_modes as f64;
        Ok(AttenuatedWState {
            eta: vec![1.0; n_modes],
            vacuum_weight: 0.0,
            excitation: DMatrix::from_element(n_modes, n_modes, 1.0 / n),
        })
    }

    /// Pure W state followed by per-mode loss with intensity efficiencies `eta_sq`.
    pub fn with_intensities(eta_sq: &[f64]) -> Result<Self> {
        let eta = eta_sq
            .iter()
            .enumerate()
            .map(|(mode, &e)| {
                check_unit(mode, e)?;
                Ok(e.sqrt())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::pure(eta_sq.len())?.attenuate(&eta)
    }

    /// Applies a further loss stage with amplitude transmissions `eta`.
    ///
    /// Loss composes multiplicatively, so attenuating by `a` then `b` equals
    /// attenuating once by `a ⊙ b`.
    pub fn attenuate(&self, eta: &[f64]) -> Result<Self> {
        if eta.len() != self.n_modes() {
            return Err(Error::LengthMismatch {
                expected: self.n_modes(),
                got: eta.len(),
            });
        }
        for (mode, &e) in eta.iter().enumerate() {
            check_unit(mode, e)?;
        }
        let n_modes = self.n_modes();
        let n = n_modes as f64;
        let total: Vec<f64> = self.eta.iter().zip(eta).map(|(a, b)| a * b).collect();
        let excitation =
            DMatrix::from_fn(n_modes, n_modes, |i, j| total[i] * total[j] / n);
        let vacuum_weight = total.iter().map(|t| 1.0 - t * t).sum::<f64>() / n;
        Ok(AttenuatedWState {
            eta: total,
            vacuum_weight,
            excitation,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.eta.len()
    }

    /// Cumulative amplitude transmission per mode.
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn vacuum_weight(&self) -> f64 {
        self.vacuum_weight
    }

    /// Coefficients of `|γ_i⟩⟨γ_j|`.
    pub fn excitation_matrix(&self) -> &DMatrix<f64> {
        &self.excitation
    }

    pub fn trace(&self) -> f64 {
        self.vacuum_weight + self.excitation.trace()
    }

    /// `Tr ρ²`; the vacuum block is orthogonal to the excitation block.
    pub fn purity(&self) -> f64 {
        self.vacuum_weight * self.vacuum_weight + self.excitation.norm_squared()
    }

    /// The Bell argument is stated for `N ≥ 3`; `N = 2` is computed but flagged.
    pub fn below_bell_scope(&self) -> bool {
        self.n_modes() < 3
    }

    /// Full `2^N x 2^N` density matrix in the product Fock basis.
    ///
    /// Mode 0 is the most significant bit of the basis index, matching the
    /// Kronecker order `Π_0 ⊗ Π_1 ⊗ …`. The matrix is built independently of
    /// the compact coefficients: the pure W projector is pushed through a
    /// single-mode amplitude-damping channel on every mode.
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let n_modes = self.n_modes();
        if n_modes > DENSE_MAX_MODES {
            return Err(Error::DenseTooLarge {
                got: n_modes,
                max: DENSE_MAX_MODES,
            });
        }
        let dim = 1usize << n_modes;
        let bit = |k: usize| 1usize << (n_modes - 1 - k);
        let mut rho = DMatrix::<f64>::zeros(dim, dim);
        let amp = 1.0 / (n_modes as f64);
        for i in 0..n_modes {
            for j in 0..n_modes {
                rho[(bit(i), bit(j))] = amp;
            }
        }
        for (k, &eta) in self.eta.iter().enumerate() {
            rho = damp_mode(&rho, bit(k), eta);
        }
        Ok(rho)
    }
}

fn check_unit(mode: usize, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::EfficiencyOutOfRange { mode, value });
    }
    Ok(())
}

/// `K0 ρ K0ᵀ + K1 ρ K1ᵀ` with `K0 = diag(1, η)` and `K1 = √(1-η²)|0⟩⟨1|`,
/// acting on the mode addressed by `mask`.
fn damp_mode(rho: &DMatrix<f64>, mask: usize, eta: f64) -> DMatrix<f64> {
    let dim = rho.nrows();
    let loss = (1.0 - eta * eta).max(0.0);
    let k0 = |b: usize| if b == 0 { 1.0 } else { eta };
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let v = rho[(a, b)];
            if v == 0.0 {
                continue;
            }
            let (abit, bbit) = ((a & mask != 0) as usize, (b & mask != 0) as usize);
            out[(a, b)] += k0(abit) * k0(bbit) * v;
            if abit == 1 && bbit == 1 {
                out[(a & !mask, b & !mask)] += loss * v;
            }
        }
    }
    out
}
