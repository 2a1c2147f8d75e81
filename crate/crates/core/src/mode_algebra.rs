//! Single-mode states and measurement effects in the truncated Fock basis.
//!
//! Everything here is real-valued: the equatorial Bloch phase is fixed to
//! zero, so a qubit `cos θ |0⟩ + sin θ |1⟩` is parametrised by one angle.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Symmetry / eigenvalue tolerance for operator validation.
pub const OPERATOR_TOL: f64 = 1e-12;
/// Raw probabilities further than this outside `[0, 1]` are rejected.
pub const CLAMP_TOL: f64 = 1e-9;
/// PSD / trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

/// A real qubit `cos θ |0⟩ + sin θ |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitKet {
    theta: f64,
    coefficients: [f64; 2],
}

impl QubitKet {
    pub fn new(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        QubitKet {
            theta,
            coefficients: [c, s],
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn coefficients(&self) -> [f64; 2] {
        self.coefficients
    }

    /// `|ψ⟩⟨ψ|` as a 2x2 matrix.
    pub fn density(&self) -> DMatrix<f64> {
        let [c, s] = self.coefficients;
        DMatrix::from_row_slice(2, 2, &[c * c, c * s, s * c, s * s])
    }
}

/// A single-mode measurement effect: a real symmetric `(M+1)x(M+1)` matrix
/// in the Fock basis with spectrum inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitOperator {
    matrix: DMatrix<f64>,
}

impl QubitOperator {
    /// Validates symmetry and the effect spectrum before wrapping `matrix`.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::InvalidOperator(format!("matrix is {rows}x{cols}")));
        }
        if rows < 2 {
            return Err(Error::CutoffTooSmall(rows.saturating_sub(1)));
        }
        for i in 0..rows {
            for j in (i + 1)..rows {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > OPERATOR_TOL {
                    return Err(Error::InvalidOperator(format!(
                        "not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let eig = SymmetricEigen::new(matrix.clone());
        for &ev in eig.eigenvalues.iter() {
            if !(-OPERATOR_TOL..=1.0 + OPERATOR_TOL).contains(&ev) {
                return Err(Error::InvalidOperator(format!(
                    "eigenvalue {ev} outside [0, 1]"
                )));
            }
        }
        Ok(QubitOperator { matrix })
    }

    /// Skips validation; callers guarantee a valid effect by construction.
    pub(crate) fn from_trusted(matrix: DMatrix<f64>) -> Self {
        debug_assert!(matrix.is_square() && matrix.nrows() >= 2);
        QubitOperator { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Fock-basis element `⟨n|Π|m⟩`.
    #[inline]
    pub fn entry(&self, n: usize, m: usize) -> f64 {
        self.matrix[(n, m)]
    }

    /// Maximum photon number `M` represented.
    pub fn photon_cutoff(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// The `{|0⟩, |1⟩}` block, which is all a single-excitation state can see.
    pub fn qubit_block(&self) -> DMatrix<f64> {
        self.matrix.view((0, 0), (2, 2)).into_owned()
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        let sq = &self.matrix * &self.matrix;
        (sq - &self.matrix).amax() <= tol
    }
}

/// The four Pauli-eigenstate projectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardEffect {
    ZPlus,
    ZMinus,
    XPlus,
    XMinus,
}

impl StandardEffect {
    pub fn angle(self) -> f64 {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        match self {
            StandardEffect::ZPlus => 0.0,
            StandardEffect::ZMinus => FRAC_PI_2,
            StandardEffect::XPlus => FRAC_PI_4,
            StandardEffect::XMinus => 7.0 * FRAC_PI_4,
        }
    }
}

/// Rank-one projector `|ψ_θ⟩⟨ψ_θ|`.
pub fn projector_at_angle(theta: f64) -> QubitOperator {
    QubitOperator::from_trusted(QubitKet::new(theta).density())
}

/// Exact matrices; `projector_at_angle(kind.angle())` agrees to rounding.
pub fn standard_projector(kind: StandardEffect) -> QubitOperator {
    let entries = match kind {
        StandardEffect::ZPlus => [1.0, 0.0, 0.0, 0.0],
        StandardEffect::ZMinus => [0.0, 0.0, 0.0, 1.0],
        StandardEffect::XPlus => [0.5, 0.5, 0.5, 0.5],
        StandardEffect::XMinus => [0.5, -0.5, -0.5, 0.5],
    };
    QubitOperator::from_trusted(DMatrix::from_row_slice(2, 2, &entries))
}

/// Brings a raw probability back into `[0, 1]`, failing if it strayed further
/// than [`CLAMP_TOL`].
pub fn clamp_probability(raw: f64) -> Result<f64> {
    if !raw.is_finite() || !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&raw) {
        return Err(Error::ProbabilityOutOfRange(raw));
    }
    Ok(raw.clamp(0.0, 1.0))
}

fn validate_density(rho: &DMatrix<f64>) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidDensityMatrix(format!(
            "shape {:?}",
            rho.shape()
        )));
    }
    let n = rho.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (rho[(i, j)] - rho[(j, i)]).abs() > DENSITY_TOL {
                return Err(Error::InvalidDensityMatrix("not symmetric".into()));
            }
        }
    }
    if (rho.trace() - 1.0).abs() > DENSITY_TOL {
        return Err(Error::InvalidDensityMatrix(format!("trace {}", rho.trace())));
    }
    let min_ev = SymmetricEigen::new(rho.clone()).eigenvalues.min();
    if min_ev < -DENSITY_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative eigenvalue {min_ev}"
        )));
    }
    Ok(())
}

/// `Tr{Π ρ}` for a single-mode state.
pub fn qubit_projective_probability(rho: &DMatrix<f64>, effect: &QubitOperator) -> Result<f64> {
    if rho.nrows() != effect.matrix.nrows() || !rho.is_square() {
        return Err(Error::DimensionMismatch {
            left: rho.nrows(),
            right: effect.matrix.nrows(),
        });
    }
    validate_density(rho)?;
    let raw = effect.matrix.component_mul(&rho.transpose()).sum();
    clamp_probability(raw)
}
