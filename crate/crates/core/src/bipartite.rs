//! Two-party states: Schmidt coefficients, pure-state concurrence and the
//! relation between the entanglement eigenvalue and the concurrence.
//!
//! Schmidt coefficients are amplitude-level (`√p`), so `Λmax` is the largest
//! coefficient. The nearest product state is not unique when the largest
//! coefficient is degenerate (Bell-like states); the solver returns any maximizer.

use crate::error::{Error, Result};
use crate::states::PureState;

/// Cut-off below which a singular value is dropped from the spectrum.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// Schmidt coefficients in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn largest(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }
}

fn require_bipartite(psi: &PureState) -> Result<()> {
    match psi.parties() {
        2 => Ok(()),
        n => Err(Error::NotBipartite(n)),
    }
}

/// Singular values of the `d1 × d2` amplitude matrix.
pub fn schmidt(psi: &PureState) -> Result<SchmidtSpectrum> {
    require_bipartite(psi)?;
    let m = psi.flatten_party(0);
    let mut coefficients: Vec<f64> =
        m.singular_values().iter().copied().filter(|&s| s >= SCHMIDT_CUTOFF).collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum { coefficients })
}

/// `Λmax` of a bipartite pure state: its largest Schmidt coefficient.
pub fn lambda_max_bipartite(psi: &PureState) -> Result<f64> {
    Ok(schmidt(psi)?.largest().min(1.0))
}

/// `C = 2 |χ00 χ11 − χ01 χ10|` for two qubits.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    if psi.dims() != [2, 2] {
        return Err(Error::NotTwoQubit);
    }
    let a = psi.amplitudes();
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0))
}

/// `Λmax² = (1 + √(1 − C²)) / 2`, valid for every two-qubit pure state.
pub fn lambda2_from_concurrence(concurrence: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(Error::OutOfRange { name: "concurrence", value: concurrence });
    }
    Ok(0.5 * (1.0 + (1.0 - concurrence * concurrence).sqrt()))
}
