//! Seeded sampling of random states, unitaries and channels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::states::{make_pure, norm, PureState};

/// Generator for stream `stream` of `seed`; streams are independent.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Uniformly distributed point on the unit sphere of `C^d`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let nrm = norm(&v);
        if nrm > 1e-8 {
            return v.into_iter().map(|z| z / nrm).collect();
        }
    }
}

/// Haar-random pure state on the given party dimensions.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total = dims.iter().product();
    make_pure(dims, &random_unit_vector(total, rng))
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of `R` fixed.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = ginibre(d, d, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random isometry with `rows ≥ cols` (orthonormal columns).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    haar_unitary(rows, rng).columns(0, cols).into_owned()
}

/// Random density matrix `G G† / Tr(G G†)` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = ginibre(dim, rank, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho.map(|z| z / tr)
}

/// Random trace-preserving set of `outcomes` Kraus operators on `C^d`,
/// cut from the blocks of a Haar isometry `C^d → C^{outcomes·d}`.
pub fn random_kraus<R: Rng + ?Sized>(d: usize, outcomes: usize, rng: &mut R) -> Vec<DMatrix<Complex64>> {
    let iso = random_isometry(d * outcomes, d, rng);
    (0..outcomes).map(|k| iso.rows(k * d, d).into_owned()).collect()
}
