//! Mixed states: density matrices, closed forms for two-qubit, Werner and
//! isotropic states, the convex-hull construction for mixtures of two Dicke
//! states, and a sampled upper bound on the convex roof
//! `E(ρ) = min_{p_i, ψ_i} Σ_i p_i E_sin²(ψ_i)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::lambda_max_bipartite;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::random::{ginibre, random_isometry, stream_rng};
use crate::solver::{entanglement_eigenvalue, SolveOptions};
use crate::states::{dicke, make_pure, PureState};
use crate::symmetric::ss_pure_curve;

/// Tolerance for the Hermiticity, trace and positivity checks.
pub const DENSITY_TOL: f64 = 1e-10;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// A validated density operator on `⊗ C^{d_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensity", into = "RawDensity")]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

/// Serialized form: `{"dims": [...], "matrix": [[[re, im], ...], ...]}` (row-major rows).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawDensity {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<RawDensity> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: RawDensity) -> Result<Self> {
        let size = raw.matrix.len();
        if raw.matrix.iter().any(|row| row.len() != size) {
            return Err(Error::NotDensityMatrix("matrix is not square".into()));
        }
        let m = DMatrix::from_fn(size, size, |i, j| {
            let [re, im] = raw.matrix[i][j];
            Complex64::new(re, im)
        });
        DensityMatrix::new(&raw.dims, m)
    }
}

impl From<DensityMatrix> for RawDensity {
    fn from(rho: DensityMatrix) -> Self {
        let n = rho.matrix.nrows();
        RawDensity {
            dims: rho.dims,
            matrix: (0..n).map(|i| (0..n).map(|j| [rho.matrix[(i, j)].re, rho.matrix[(i, j)].im]).collect()).collect(),
        }
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each within [`DENSITY_TOL`].
    pub fn new(dims: &[usize], matrix: DMatrix<Complex64>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::NotDensityMatrix(format!("invalid dims {dims:?}")));
        }
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(Error::NotDensityMatrix(format!(
                "matrix is {}x{}, dims {dims:?} need {size}x{size}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotDensityMatrix("non-finite entry".into()));
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        let rho = DensityMatrix { dims: dims.to_vec(), matrix };
        let min = rho.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix { dims: psi.dims().to_vec(), matrix: psi.density() }
    }

    /// `Σ_i p_i |ψ_i⟩⟨ψ_i|`.
    pub fn from_ensemble(weights: &[f64], states: &[PureState]) -> Result<Self> {
        Decomposition::new(weights.to_vec(), states.to_vec())?.density()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.matrix + self.matrix.adjoint()).map(|z| z * 0.5)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.hermitian_part()).eigenvalues.iter().copied().collect()
    }

    /// Eigenpairs with eigenvalue above `cutoff`, largest first.
    pub fn spectrum(&self, cutoff: f64) -> Vec<(f64, DVector<Complex64>)> {
        let eig = SymmetricEigen::new(self.hermitian_part());
        let mut pairs: Vec<(f64, DVector<Complex64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > cutoff)
            .map(|(i, &v)| (v, eig.eigenvectors.column(i).into_owned()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs
    }

    pub fn rank(&self) -> usize {
        self.spectrum(1e-12).len()
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, op: &DMatrix<Complex64>) -> Complex64 {
        (&self.matrix * op).trace()
    }
}

/// An ensemble `{p_i, ψ_i}` realizing a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch { expected: weights.len(), got: states.len() });
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::NotDensityMatrix("negative weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!("weights sum to {total}")));
        }
        if states.iter().any(|s| s.dims() != states[0].dims()) {
            return Err(Error::DimensionMismatch { expected: states[0].parties(), got: 0 });
        }
        Ok(Decomposition { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    /// `Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let size = self.states[0].amplitudes().len();
        self.weights
            .iter()
            .zip(&self.states)
            .fold(DMatrix::zeros(size, size), |acc, (&p, s)| acc + s.density().map(|z| z * p))
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.states[0].dims(), self.reconstruct())
    }
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dims != [2, 2] {
        return Err(Error::NotTwoQubit);
    }
    Ok(())
}

/// Positive square root of a PSD Hermitian matrix (negative round-off clipped).
fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(m.clone());
    let roots = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0)));
    &eig.eigenvectors * roots * eig.eigenvectors.adjoint()
}

/// Wootters concurrence `max(0, λ1 − λ2 − λ3 − λ4)`, where `λ_i` are the
/// decreasing square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
///
/// The `λ_i` are computed as square roots of the eigenvalues of the Hermitian
/// matrix `√ρ ρ̃ √ρ`, which has the same spectrum.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let one = Complex64::new(1.0, 0.0);
    let mut yy = DMatrix::zeros(4, 4);
    yy[(0, 3)] = -one;
    yy[(1, 2)] = one;
    yy[(2, 1)] = one;
    yy[(3, 0)] = -one;
    let flipped = &yy * rho.matrix.map(|z| z.conj()) * &yy;
    let root = psd_sqrt(&rho.hermitian_part());
    let m = &root * flipped * &root;
    let m = (&m + m.adjoint()).map(|z| z * 0.5);
    let mut lambdas: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// `E_sin²(ρ) = (1 − √(1 − C(ρ)²)) / 2` for any two-qubit state.
pub fn e_sin2_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let c = wootters_concurrence(rho)?;
    Ok(0.5 * (1.0 - (1.0 - c * c).sqrt()))
}

/// Swap operator `F = Σ_ij |ij⟩⟨ji|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> DMatrix<Complex64> {
    let mut f = DMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    f
}

/// `|Φ+⟩ = Σ_i |ii⟩ / √d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    let mut amps = vec![zero(); d * d];
    for i in 0..d {
        amps[i * d + i] = Complex64::new(1.0, 0.0);
    }
    make_pure(&[d, d], &amps)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange { name: "d", value: d as f64 });
    }
    Ok(())
}

/// Werner state `a·1 + b·F` with `Tr(ρ F) = f`.
pub fn make_werner(d: usize, f: f64) -> Result<DensityMatrix> {
    check_dim(d)?;
    if !(-1.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange { name: "f", value: f });
    }
    // a d² + b d = 1 and a d + b d² = f.
    let df = d as f64;
    let det = df.powi(4) - df * df;
    let a = (df * df - f * df) / det;
    let b = (df * df * f - df) / det;
    let n = d * d;
    let matrix = DMatrix::<Complex64>::identity(n, n).map(|z| z * a) + swap_operator(d).map(|z| z * b);
    DensityMatrix::new(&[d, d], matrix)
}

/// `E_sin²` of a Werner state: `(1 − √(1 − f²))/2` for `f ≤ 0`, zero for `f > 0`, any `d`.
pub fn e_sin2_werner(f: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange { name: "f", value: f });
    }
    Ok(if f <= 0.0 { 0.5 * (1.0 - (1.0 - f * f).sqrt()) } else { 0.0 })
}

/// Isotropic state `(1−F)/(d²−1) (1 − |Φ+⟩⟨Φ+|) + F |Φ+⟩⟨Φ+|`.
pub fn make_isotropic(d: usize, fidelity: f64) -> Result<DensityMatrix> {
    check_dim(d)?;
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::OutOfRange { name: "F", value: fidelity });
    }
    let n = d * d;
    let proj = max_entangled(d)?.density();
    let w = (1.0 - fidelity) / (n as f64 - 1.0);
    let matrix = (DMatrix::<Complex64>::identity(n, n) - &proj).map(|z| z * w) + proj.map(|z| z * fidelity);
    DensityMatrix::new(&[d, d], matrix)
}

/// `E_sin²` of an isotropic state: zero for `F ≤ 1/d`, otherwise
/// `1 − (√F + √((1−F)(d−1)))² / d`.
pub fn e_sin2_isotropic(d: usize, fidelity: f64) -> Result<f64> {
    check_dim(d)?;
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::OutOfRange { name: "F", value: fidelity });
    }
    let df = d as f64;
    if fidelity <= 1.0 / df {
        return Ok(0.0);
    }
    let root = fidelity.sqrt() + ((1.0 - fidelity) * (df - 1.0)).sqrt();
    Ok((1.0 - root * root / df).max(0.0))
}

/// `r |S(n,k1)⟩⟨S(n,k1)| + (1−r) |S(n,k2)⟩⟨S(n,k2)|`.
pub fn dicke_mixture(n: usize, k1: usize, k2: usize, r: f64) -> Result<DensityMatrix> {
    if k1 == k2 {
        return Err(Error::InvalidK { n, k: k2 });
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange { name: "r", value: r });
    }
    DensityMatrix::from_ensemble(&[r, 1.0 - r], &[dicke(n, k1)?, dicke(n, k2)?])
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower convex envelope of points with strictly increasing `x` (monotone chain).
///
/// Returns the minimal vertex set: collinear interior points are dropped, the
/// two endpoints are always kept.
pub fn lower_convex_hull(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if points.len() < 2 {
        return Err(Error::DegenerateGrid(points.len()));
    }
    if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::UnsortedInput);
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(hull)
}

/// Piecewise-linear interpolation through `vertices` (sorted by `x`).
pub fn interpolate(vertices: &[(f64, f64)], x: f64) -> f64 {
    let idx = vertices.partition_point(|v| v.0 < x);
    if idx == 0 {
        return vertices[0].1;
    }
    if idx == vertices.len() {
        return vertices[vertices.len() - 1].1;
    }
    let ((x0, y0), (x1, y1)) = (vertices[idx - 1], vertices[idx]);
    if x == x1 {
        return y1;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Lower convex hull of a curve, evaluated back on the curve's own grid.
pub fn convexify(curve: &Curve) -> Result<Curve> {
    let points: Vec<(f64, f64)> = curve.params().iter().copied().zip(curve.values().iter().copied()).collect();
    let hull = lower_convex_hull(&points)?;
    let values = curve.params().iter().map(|&x| interpolate(&hull, x)).collect();
    Curve::new(curve.params().to_vec(), values, true)
}

/// `E_sin²(ρ_{n;k1k2}(r))` over `r_grid`: the lower convex hull in `r` of the
/// pure-state curve `E_sin²(SS_{n;k1k2}(r, 0))`.
///
/// Every pure state in the support is `√r'|S(n,k1)⟩ + √(1−r')e^{iφ}|S(n,k2)⟩`
/// and its entanglement does not depend on `φ`, so an ensemble average is an
/// average of the pure curve at points whose weighted mean is `r`.
pub fn symmetric_mixture_curve(n: usize, k1: usize, k2: usize, r_grid: &[f64]) -> Result<Curve> {
    if r_grid.len() < 3 {
        return Err(Error::DegenerateGrid(r_grid.len()));
    }
    convexify(&ss_pure_curve(n, k1, k2, r_grid)?)
}

/// `E_sin²(ρ_{n;k1k2}(r))` at a single `r`, from the hull over a uniform grid
/// of `grid_points` values with `r` added.
pub fn dicke_mixture_e_sin2(n: usize, k1: usize, k2: usize, r: f64, grid_points: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange { name: "r", value: r });
    }
    let mut grid = crate::curve::unit_grid(grid_points)?;
    if !grid.contains(&r) {
        grid.push(r);
        grid.sort_by(f64::total_cmp);
    }
    let curve = symmetric_mixture_curve(n, k1, k2, &grid)?;
    let idx = grid.iter().position(|&x| x == r).expect("r is on the grid");
    Ok(curve.values()[idx])
}

/// Best decomposition found by [`roof_search`].
#[derive(Debug, Clone)]
pub struct RoofBound {
    pub value: f64,
    pub decomposition: Decomposition,
}

/// `p · E_sin²(ψ/√p)` for an unnormalized vector of squared norm `p`.
///
/// Two parties use the largest eigenvalue of the reduced matrix `M M†` (closed
/// form for 2×2); more parties go through the solver.
fn weighted_entanglement(dims: &[usize], amps: &[Complex64], p: f64, opts: &SolveOptions) -> Result<f64> {
    if dims == [2, 2] {
        let det = amps[0] * amps[3] - amps[1] * amps[2];
        let disc = (p * p - 4.0 * det.norm_sqr()).max(0.0);
        return Ok(0.5 * (p - disc.sqrt()).max(0.0));
    }
    let psi = make_pure(dims, amps)?;
    let e = if dims.len() == 2 {
        let l = lambda_max_bipartite(&psi)?;
        1.0 - l * l
    } else {
        entanglement_eigenvalue(&psi, opts)?.e_sin2
    };
    Ok(p * e.max(0.0))
}

/// Rows `√λ_j e_jᵀ` of the eigen-ensemble; any decomposition is `U · W` for an isometry `U`.
fn eigen_ensemble(rho: &DensityMatrix) -> DMatrix<Complex64> {
    let spectrum = rho.spectrum(1e-12);
    let size = rho.matrix.nrows();
    DMatrix::from_fn(spectrum.len(), size, |j, a| spectrum[j].1[a] * spectrum[j].0.sqrt())
}

/// `Σ p_i E(ψ_i)` for the ensemble given by the rows of `U · W`.
fn average_entanglement(
    dims: &[usize],
    mixing: &DMatrix<Complex64>,
    basis: &DMatrix<Complex64>,
    opts: &SolveOptions,
) -> Result<f64> {
    let vectors = mixing * basis;
    let mut amps = vec![zero(); vectors.ncols()];
    let mut total = 0.0;
    let mut mass = 0.0;
    for row in vectors.row_iter() {
        let p = row.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if p < 1e-14 {
            continue;
        }
        amps.iter_mut().zip(row.iter()).for_each(|(a, z)| *a = *z);
        total += weighted_entanglement(dims, &amps, p, opts)?;
        mass += p;
    }
    Ok(total / mass)
}

fn decomposition(dims: &[usize], mixing: &DMatrix<Complex64>, basis: &DMatrix<Complex64>) -> Result<Decomposition> {
    let vectors = mixing * basis;
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for row in vectors.row_iter() {
        let p = row.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if p < 1e-14 {
            continue;
        }
        let amps: Vec<Complex64> = row.iter().copied().collect();
        states.push(make_pure(dims, &amps)?);
        weights.push(p);
    }
    let mass: f64 = weights.iter().sum();
    Ok(Decomposition { weights: weights.into_iter().map(|w| w / mass).collect(), states })
}

/// Unitary `Q` from the QR factorization of `1 + ε G`, close to the identity for small `ε`.
fn near_identity<R: Rng + ?Sized>(k: usize, eps: f64, rng: &mut R) -> DMatrix<Complex64> {
    let m = DMatrix::<Complex64>::identity(k, k) + ginibre(k, k, rng).map(|z| z * eps);
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..k {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Sampled minimization of the average pure-state entanglement over decompositions.
///
/// Decompositions are `|ψ̃_i⟩ = Σ_j U_ij √λ_j |e_j⟩` with `U` a `K × m` isometry,
/// `m = rank(ρ)` and `m ≤ K ≤ 4m`; every decomposition of that size arises this
/// way. Sample 0 is the eigen-ensemble itself. The first half of the budget
/// draws Haar-random isometries in parallel; the second half perturbs the best
/// one found by near-identity unitaries with an adaptive step. The result is an
/// upper bound on the convex roof and is deterministic given `seed`.
pub fn roof_search(rho: &DensityMatrix, ensembles: usize, seed: u64, opts: &SolveOptions) -> Result<RoofBound> {
    if ensembles < 1 {
        return Err(Error::OutOfRange { name: "ensembles", value: 0.0 });
    }
    let basis = eigen_ensemble(rho);
    let m = basis.nrows();
    let dims = rho.dims.clone();
    let global = ensembles.div_ceil(2);

    let sample = |idx: usize| -> Result<(f64, DMatrix<Complex64>)> {
        let mixing = if idx == 0 {
            DMatrix::identity(m, m)
        } else {
            let mut rng = stream_rng(seed, idx as u64);
            let k = rng.random_range(m..=4 * m);
            random_isometry(k, m, &mut rng)
        };
        Ok((average_entanglement(&dims, &mixing, &basis, opts)?, mixing))
    };
    let samples = (0..global).into_par_iter().map(sample).collect::<Result<Vec<_>>>()?;
    let (mut best_value, mut best_mixing) = samples
        .into_iter()
        .reduce(|best, s| if s.0 < best.0 { s } else { best })
        .expect("at least one sample");

    let mut rng = stream_rng(seed, u64::MAX);
    let mut eps = 0.3f64;
    let mut misses = 0;
    for _ in global..ensembles {
        let k = best_mixing.nrows();
        let trial_mixing = near_identity(k, eps, &mut rng) * &best_mixing;
        let value = average_entanglement(&dims, &trial_mixing, &basis, opts)?;
        if value < best_value {
            best_value = value;
            best_mixing = trial_mixing;
            misses = 0;
        } else {
            misses += 1;
            if misses >= 8 {
                eps = (eps * 0.6).max(1e-4);
                misses = 0;
            }
        }
    }
    Ok(RoofBound { value: best_value.max(0.0), decomposition: decomposition(&dims, &best_mixing, &basis)? })
}

/// Upper bound on the convex roof of `E_sin²` from [`roof_search`].
pub fn roof_upper_bound(rho: &DensityMatrix, ensembles: usize, seed: u64, opts: &SolveOptions) -> Result<f64> {
    Ok(roof_search(rho, ensembles, seed, opts)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::{concurrence_pure, lambda2_from_concurrence};
    use crate::curve::unit_grid;
    use crate::random::{haar_unitary, random_density_matrix, random_state};
    use crate::states::{ghz, w_state, w_tilde_state};
    use crate::symmetric::lambda_dicke;
    use approx::assert_abs_diff_eq;

    fn werner_family(p: f64) -> DensityMatrix {
        let bell = DensityMatrix::from_pure(&ghz(2).unwrap());
        let m = bell.matrix().map(|z| z * p) + DMatrix::<Complex64>::identity(4, 4).map(|z| z * (1.0 - p) / 4.0);
        DensityMatrix::new(&[2, 2], m).unwrap()
    }

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = DMatrix::<Complex64>::identity(4, 4).map(|z| z * 0.25);
        assert!(DensityMatrix::new(&[2, 2], m.clone()).is_ok());
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(&[2, 2], m.clone()), Err(Error::NotDensityMatrix(_))));
        let neg = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(1.2, 0.0),
            Complex64::new(-0.2, 0.0),
            zero(),
            zero(),
        ]));
        assert!(matches!(DensityMatrix::new(&[2, 2], neg), Err(Error::NotDensityMatrix(_))));
        let trace2 = DMatrix::<Complex64>::identity(4, 4).map(|z| z * 0.5);
        assert!(DensityMatrix::new(&[2, 2], trace2).is_err());
        assert!(DensityMatrix::new(&[2, 3], DMatrix::identity(4, 4)).is_err());
    }

    #[test]
    fn wootters_examples() {
        let bell = DensityMatrix::from_pure(&ghz(2).unwrap());
        assert_abs_diff_eq!(wootters_concurrence(&bell).unwrap(), 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(e_sin2_two_qubit(&bell).unwrap(), 0.5, epsilon = 1e-7);
        let mixed = werner_family(0.0);
        assert_abs_diff_eq!(wootters_concurrence(&mixed).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e_sin2_two_qubit(&mixed).unwrap(), 0.0, epsilon = 1e-12);
        // Spectrum of ρ ρ̃ is {(1+3p)²/16, (1−p)²/16 ×3}, so C = max(0, (3p−1)/2).
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert_abs_diff_eq!(wootters_concurrence(&werner_family(p)).unwrap(), want, epsilon = 1e-7);
        }
        let qutrits = make_isotropic(3, 0.5).unwrap();
        assert_eq!(wootters_concurrence(&qutrits), Err(Error::NotTwoQubit));
    }

    #[test]
    fn wootters_reduces_to_pure_concurrence() {
        let mut rng = stream_rng(51, 0);
        for _ in 0..20 {
            let psi = random_state(&[2, 2], &mut rng).unwrap();
            let rho = DensityMatrix::from_pure(&psi);
            let c = wootters_concurrence(&rho).unwrap();
            assert_abs_diff_eq!(c, concurrence_pure(&psi).unwrap(), epsilon = 1e-6);
            let e = e_sin2_two_qubit(&rho).unwrap();
            assert_abs_diff_eq!(e, 1.0 - lambda2_from_concurrence(c).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn werner_construction() {
        let sym = make_werner(2, 1.0).unwrap();
        let expect = (DMatrix::<Complex64>::identity(4, 4) + swap_operator(2)).map(|z| z / 6.0);
        assert!(max_abs(&(sym.matrix() - expect)) < 1e-14);
        let mut spectrum = sym.eigenvalues();
        spectrum.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(spectrum[0], 0.0, epsilon = 1e-12);
        for v in &spectrum[1..] {
            assert_abs_diff_eq!(*v, 1.0 / 3.0, epsilon = 1e-12);
        }
        for d in 2..5 {
            // Maximally mixed state has f = Tr(F)/d² = 1/d.
            let mixed = make_werner(d, 1.0 / d as f64).unwrap();
            let n = d * d;
            assert!(max_abs(&(mixed.matrix() - DMatrix::identity(n, n).map(|z: Complex64| z / n as f64))) < 1e-14);
            for i in 0..=10 {
                let f = -1.0 + 0.2 * i as f64;
                let rho = make_werner(d, f).unwrap();
                assert_abs_diff_eq!(rho.expectation(&swap_operator(d)).re, f, epsilon = 1e-10);
            }
        }
        assert!(make_werner(2, 1.1).is_err());
    }

    #[test]
    fn werner_is_uu_invariant() {
        let mut rng = stream_rng(53, 0);
        let rho = make_werner(3, -0.4).unwrap();
        for _ in 0..5 {
            let u = haar_unitary(3, &mut rng);
            let uu = u.kronecker(&u);
            let rotated = &uu * rho.matrix() * uu.adjoint();
            assert!(max_abs(&(rotated - rho.matrix())) < 1e-12);
        }
    }

    #[test]
    fn twirling_projects_onto_werner() {
        let mut rng = stream_rng(57, 0);
        let rho = random_density_matrix(4, 4, &mut rng);
        let rho = DensityMatrix::new(&[2, 2], rho).unwrap();
        let samples = 10_000;
        let mut acc = DMatrix::<Complex64>::zeros(4, 4);
        for _ in 0..samples {
            let u = haar_unitary(2, &mut rng);
            let uu = u.kronecker(&u);
            acc += &uu * rho.matrix() * uu.adjoint();
        }
        let twirled = acc.map(|z| z / samples as f64);
        let f = rho.expectation(&swap_operator(2)).re;
        let werner = make_werner(2, f).unwrap();
        assert!(max_abs(&(twirled - werner.matrix())) <= 2e-2);
    }

    #[test]
    fn werner_formula() {
        assert_abs_diff_eq!(e_sin2_werner(-1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(e_sin2_werner(0.3).unwrap(), 0.0);
        assert_abs_diff_eq!(e_sin2_werner(-0.6).unwrap(), 0.1, epsilon = 1e-15);
        assert!(e_sin2_werner(-1.01).is_err());
    }

    #[test]
    fn werner_singlet_matches_pure_value() {
        // d = 2, f = −1 is the singlet projector.
        let rho = make_werner(2, -1.0).unwrap();
        assert_eq!(rho.rank(), 1);
        assert_abs_diff_eq!(e_sin2_two_qubit(&rho).unwrap(), e_sin2_werner(-1.0).unwrap(), epsilon = 1e-7);
    }

    #[test]
    fn isotropic_construction() {
        for d in 2..5 {
            let n = d * d;
            let mixed = make_isotropic(d, 1.0 / n as f64).unwrap();
            assert!(max_abs(&(mixed.matrix() - DMatrix::identity(n, n).map(|z: Complex64| z / n as f64))) < 1e-14);
            let pure = make_isotropic(d, 1.0).unwrap();
            assert!(max_abs(&(pure.matrix() - max_entangled(d).unwrap().density())) < 1e-14);
            let phi = max_entangled(d).unwrap().density();
            for i in 0..=10 {
                let fid = i as f64 / 10.0;
                let rho = make_isotropic(d, fid).unwrap();
                assert_abs_diff_eq!(rho.expectation(&phi).re, fid, epsilon = 1e-12);
            }
        }
        let mut rng = stream_rng(59, 0);
        let rho = make_isotropic(3, 0.7).unwrap();
        let u = haar_unitary(3, &mut rng);
        let uu = u.kronecker(&u.map(|z| z.conj()));
        assert!(max_abs(&(&uu * rho.matrix() * uu.adjoint() - rho.matrix())) < 1e-12);
    }

    #[test]
    fn isotropic_formula() {
        for d in 2..6 {
            let df = d as f64;
            assert_eq!(e_sin2_isotropic(d, 1.0 / df).unwrap(), 0.0);
            assert_abs_diff_eq!(e_sin2_isotropic(d, 1.0 / df + 1e-12).unwrap(), 0.0, epsilon = 1e-6);
            assert_abs_diff_eq!(e_sin2_isotropic(d, 1.0).unwrap(), 1.0 - 1.0 / df, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(e_sin2_isotropic(2, 1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(e_sin2_isotropic(3, 1.0).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert!(e_sin2_isotropic(3, 1.2).is_err());
    }

    #[test]
    fn isotropic_two_qubit_agrees_with_wootters() {
        // For d = 2 the isotropic family is two-qubit, so both closed forms apply.
        for i in 0..=20 {
            let fid = i as f64 / 20.0;
            let rho = make_isotropic(2, fid).unwrap();
            assert_abs_diff_eq!(e_sin2_two_qubit(&rho).unwrap(), e_sin2_isotropic(2, fid).unwrap(), epsilon = 1e-7);
        }
    }

    #[test]
    fn closed_forms_are_convex() {
        let grid: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 / 100.0).collect();
        let werner: Vec<f64> = grid.iter().map(|&f| e_sin2_werner(f).unwrap()).collect();
        for w in werner.windows(3) {
            assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-12);
        }
        for d in 2..5 {
            let iso: Vec<f64> = (0..=200).map(|i| e_sin2_isotropic(d, i as f64 / 200.0).unwrap()).collect();
            for w in iso.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-12);
            }
        }
        // Two-qubit formula along random mixing segments.
        let mut rng = stream_rng(61, 0);
        for _ in 0..20 {
            let a = random_density_matrix(4, 2, &mut rng);
            let b = random_density_matrix(4, 2, &mut rng);
            let e = |t: f64| {
                let m = a.map(|z| z * t) + b.map(|z| z * (1.0 - t));
                e_sin2_two_qubit(&DensityMatrix::new(&[2, 2], m).unwrap()).unwrap()
            };
            for i in 1..10 {
                let t = i as f64 / 10.0;
                assert!(e(t) <= t * e(1.0) + (1.0 - t) * e(0.0) + 1e-7);
            }
        }
    }

    #[test]
    fn hull_examples() {
        let collinear = [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)];
        assert_eq!(lower_convex_hull(&collinear).unwrap(), vec![(0.0, 0.0), (1.0, 1.0)]);
        let convex = [(0.0, 1.0), (0.5, 0.2), (1.0, 1.0)];
        assert_eq!(lower_convex_hull(&convex).unwrap(), convex.to_vec());
        let bump = [(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)];
        assert_eq!(lower_convex_hull(&bump).unwrap(), vec![(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(lower_convex_hull(&[(1.0, 0.0), (0.0, 0.0)]), Err(Error::UnsortedInput));
        assert!(lower_convex_hull(&[(0.0, 0.0)]).is_err());
    }

    #[test]
    fn ww_mixture_hull_is_pure_curve() {
        let grid = unit_grid(21).unwrap();
        let hull = symmetric_mixture_curve(3, 1, 2, &grid).unwrap();
        let pure = ss_pure_curve(3, 1, 2, &grid).unwrap();
        assert!(hull.is_convexified());
        for (h, p) in hull.values().iter().zip(pure.values()) {
            assert_abs_diff_eq!(h, p, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(hull.values()[0], 5.0 / 9.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hull.values()[10], 0.25, epsilon = 1e-9);
        assert_abs_diff_eq!(hull.values()[20], 5.0 / 9.0, epsilon = 1e-9);
    }

    #[test]
    fn seven_qubit_mixture_hull_dips_below() {
        let grid = unit_grid(41).unwrap();
        let hull = symmetric_mixture_curve(7, 2, 5, &grid).unwrap();
        let pure = ss_pure_curve(7, 2, 5, &grid).unwrap();
        let edge = 1.0 - lambda_dicke(7, 2).unwrap().powi(2);
        assert_abs_diff_eq!(hull.values()[0], edge, epsilon = 1e-9);
        assert_abs_diff_eq!(hull.values()[40], edge, epsilon = 1e-9);
        assert!(hull.values().iter().zip(pure.values()).all(|(h, p)| h <= &(p + 1e-12)));
        assert!(hull.values().iter().zip(pure.values()).any(|(h, p)| h < &(p - 1e-3)));
        assert!(matches!(symmetric_mixture_curve(7, 2, 5, &[0.0, 1.0]), Err(Error::DegenerateGrid(2))));
        assert!(matches!(symmetric_mixture_curve(7, 2, 2, &grid), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn roof_of_pure_state_is_exact() {
        let psi = random_state(&[2, 2], &mut stream_rng(67, 0)).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let bound = roof_upper_bound(&rho, 16, 1, &SolveOptions::default()).unwrap();
        let l = lambda_max_bipartite(&psi).unwrap();
        assert_abs_diff_eq!(bound, 1.0 - l * l, epsilon = 1e-12);
    }

    #[test]
    fn roof_decomposition_reconstructs_rho() {
        let mut rng = stream_rng(71, 0);
        let rho = DensityMatrix::new(&[2, 2], random_density_matrix(4, 3, &mut rng)).unwrap();
        let found = roof_search(&rho, 200, 5, &SolveOptions::default()).unwrap();
        let diff = found.decomposition.reconstruct() - rho.matrix();
        assert!(max_abs(&diff) < 1e-8);
        assert!(found.value >= e_sin2_two_qubit(&rho).unwrap() - 1e-6);
    }

    #[test]
    fn roof_bounds_the_ww_mixture_from_above() {
        let opts = SolveOptions { restarts: 4, ..SolveOptions::default() };
        let r = 0.3;
        let rho = DensityMatrix::from_ensemble(&[r, 1.0 - r], &[w_tilde_state(), w_state()]).unwrap();
        let bound = roof_upper_bound(&rho, 40, 9, &opts).unwrap();
        let hull = symmetric_mixture_curve(3, 1, 2, &[0.0, 0.3, 1.0]).unwrap();
        assert!(bound >= hull.values()[1] - 1e-6);
    }
}
