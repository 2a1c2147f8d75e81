//! Sign-binned homodyne detection as an approximate `X̂` measurement.
//!
//! A quadrature outcome `q > 0` is read as `x = +1` and `q < 0` as `x = -1`.
//! In the Fock basis the positive bin is the effect
//! `χ_{n,m} = ∫_0^∞ φ_n(q) φ_m(q) dq` with the dimensionless oscillator
//! eigenfunctions `φ_0(q) = π^{-1/4} e^{-q²/2}`.
//!
//! Production values come from a Wronskian identity: since
//! `φ_n'' = (q² - 2n - 1) φ_n`, the Wronskian `W = φ_n φ_m' - φ_m φ_n'`
//! satisfies `W' = 2(n - m) φ_n φ_m`, so the half-line overlap only needs
//! `φ` and `φ'` at `q = 0`. [`chi_quadrature`] integrates numerically and is
//! kept as an independent check.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mode_algebra::QubitOperator;
use crate::quadrature::{self, DEFAULT_MAX_INTERVALS};

/// Beyond this |q| the integrands are below 1e-27 for n, m ≤ 8.
pub const QUADRATURE_CUTOFF: f64 = 10.0;
pub const QUADRATURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureBin {
    /// `q < 0`, read as `x = -1`.
    Negative,
    /// `q > 0`, read as `x = +1`.
    Positive,
}

impl QuadratureBin {
    pub fn x_value(self) -> i8 {
        match self {
            QuadratureBin::Negative => -1,
            QuadratureBin::Positive => 1,
        }
    }

    pub fn range(self) -> (f64, f64) {
        match self {
            QuadratureBin::Negative => (f64::NEG_INFINITY, 0.0),
            QuadratureBin::Positive => (0.0, f64::INFINITY),
        }
    }

    pub fn contains(self, q: f64) -> bool {
        match self {
            QuadratureBin::Negative => q < 0.0,
            QuadratureBin::Positive => q > 0.0,
        }
    }
}

/// Normalised Fock-state quadrature wavefunction `⟨q|n⟩`.
pub fn fock_wavefunction(n: usize, q: f64) -> f64 {
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * q * q).exp();
    if n == 0 {
        return phi0;
    }
    let (mut prev, mut cur) = (phi0, std::f64::consts::SQRT_2 * q * phi0);
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `dφ_n/dq` via the ladder relation `φ_n' = √(n/2) φ_{n-1} - √((n+1)/2) φ_{n+1}`.
pub fn fock_wavefunction_derivative(n: usize, q: f64) -> f64 {
    let nf = n as f64;
    let lower = if n == 0 { 0.0 } else { (nf / 2.0).sqrt() * fock_wavefunction(n - 1, q) };
    lower - ((nf + 1.0) / 2.0).sqrt() * fock_wavefunction(n + 1, q)
}

/// Half-line overlap `∫_bin φ_n φ_m dq`.
pub fn chi(n: usize, m: usize, bin: QuadratureBin) -> f64 {
    if n == m {
        return 0.5;
    }
    let wronskian0 = fock_wavefunction(n, 0.0) * fock_wavefunction_derivative(m, 0.0)
        - fock_wavefunction(m, 0.0) * fock_wavefunction_derivative(n, 0.0);
    let positive = -wronskian0 / (2.0 * (n as f64 - m as f64));
    match bin {
        QuadratureBin::Positive => positive,
        QuadratureBin::Negative => -positive,
    }
}

/// Same overlap by adaptive quadrature on `[0, 10]` (or `[-10, 0]`).
pub fn chi_quadrature(n: usize, m: usize, bin: QuadratureBin) -> Result<f64> {
    let (a, b) = match bin {
        QuadratureBin::Positive => (0.0, QUADRATURE_CUTOFF),
        QuadratureBin::Negative => (-QUADRATURE_CUTOFF, 0.0),
    };
    let est = quadrature::integrate(
        |q| fock_wavefunction(n, q) * fock_wavefunction(m, q),
        a,
        b,
        QUADRATURE_TOL,
        DEFAULT_MAX_INTERVALS,
    )?;
    Ok(est.value)
}

/// Binned-homodyne effect truncated at photon number `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneProjector {
    bin: QuadratureBin,
    matrix: DMatrix<f64>,
}

impl HomodyneProjector {
    pub fn bin(&self) -> QuadratureBin {
        self.bin
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn photon_cutoff(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn to_effect(&self) -> QubitOperator {
        QubitOperator::from_trusted(self.matrix.clone())
    }
}

pub fn hd_projector(bin: QuadratureBin, cutoff: usize) -> Result<HomodyneProjector> {
    if cutoff < 1 {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    let dim = cutoff + 1;
    Ok(HomodyneProjector {
        bin,
        matrix: DMatrix::from_fn(dim, dim, |n, m| chi(n, m, bin)),
    })
}

/// Quadrature density `|cos θ φ_0(q) + sin θ φ_1(q)|²` of a real qubit.
pub fn qubit_quadrature_density(theta: f64, q: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let amp = c * fock_wavefunction(0, q) + s * fock_wavefunction(1, q);
    amp * amp
}
