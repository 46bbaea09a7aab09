//! Nearest product state of a pure multipartite state.
//!
//! The entanglement eigenvalue `Λmax = max_φ |⟨φ|ψ⟩|` over product states is
//! found by alternating optimization: holding all factors but one fixed, the
//! overlap is maximized by setting the free factor parallel to the environment
//! vector `(⊗_{j≠i} ⟨φ⁽ʲ⁾|)|ψ⟩`. A fixed point of this map is exactly a solution
//! of the stationarity condition `(⊗_{j≠i} ⟨φ⁽ʲ⁾|)|ψ⟩ = Λ |φ⁽ⁱ⁾⟩`. Each update
//! can only increase `|⟨φ|ψ⟩|`, so the sweep sequence is monotone, but it can
//! stall in a local maximum; we therefore restart from several seeded random
//! product states plus one deterministic start and keep the best run.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::random::{random_unit_vector, stream_rng};
use crate::states::{environment, norm, overlap, ProductState, PureState, ZERO_NORM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Number of random restarts (a deterministic start is always added).
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Convergence threshold on the change of `Λ` per sweep.
    pub tol: f64,
    pub seed: u64,
    /// Restrict the search to `|c⟩^{⊗n}` with one shared factor.
    pub symmetric_ansatz: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { restarts: 20, max_sweeps: 500, tol: 1e-12, seed: 0x5eed, symmetric_ansatz: false }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::OutOfRange { name: "restarts", value: self.restarts as f64 });
        }
        if !(self.tol > 0.0) {
            return Err(Error::OutOfRange { name: "tol", value: self.tol });
        }
        if self.max_sweeps < 1 {
            return Err(Error::OutOfRange { name: "max_sweeps", value: 0.0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub lambda_max: f64,
    /// `1 − Λmax²`.
    pub e_sin2: f64,
    pub nearest: ProductState,
    /// Sweeps taken by the winning restart.
    pub sweeps_used: usize,
    /// `false` when the winning restart hit `max_sweeps` before meeting `tol`.
    pub converged: bool,
    /// Spread `max − min` of the final `Λ` across restarts.
    pub restart_spread: f64,
    /// `min ‖ψ − φ‖ = √(2 − 2Λmax)`.
    pub distance: f64,
}

impl SolveResult {
    fn from_run(best: Run, spread: f64) -> Self {
        let lambda = best.lambda.clamp(0.0, 1.0);
        SolveResult {
            lambda_max: lambda,
            e_sin2: 1.0 - lambda * lambda,
            nearest: best.phi,
            sweeps_used: best.sweeps,
            converged: best.converged,
            restart_spread: spread,
            distance: (2.0 - 2.0 * lambda).max(0.0).sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
struct Run {
    phi: ProductState,
    lambda: f64,
    sweeps: usize,
    converged: bool,
}

fn unit(v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let nrm = norm(&v);
    (nrm >= ZERO_NORM).then(|| v.into_iter().map(|z| z / nrm).collect())
}

/// One cyclic pass over the parties, setting each factor to its normalized environment.
///
/// A factor whose environment vanishes is left unchanged. Returns the updated
/// product state and `|⟨φ|ψ⟩|` after the pass.
pub fn als_sweep(psi: &PureState, phi: &ProductState) -> Result<(ProductState, f64)> {
    let (phi, lambda, _) = sweep_with_step(psi, phi)?;
    Ok((phi, lambda))
}

/// Distance between unit vectors after aligning their global phase.
fn aligned_step(old: &[Complex64], new: &[Complex64]) -> f64 {
    let ip: Complex64 = old.iter().zip(new).map(|(a, b)| a.conj() * b).sum();
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    old.iter().zip(new).map(|(a, b)| (a * phase - b).norm_sqr()).sum::<f64>().sqrt()
}

/// As [`als_sweep`], also returning the largest phase-aligned factor change.
fn sweep_with_step(psi: &PureState, phi: &ProductState) -> Result<(ProductState, f64, f64)> {
    let mut phi = phi.clone();
    let mut step = 0.0f64;
    for party in 0..psi.parties() {
        let env = environment(psi, &phi, party)?;
        if let Some(c) = unit(env) {
            step = step.max(aligned_step(phi.factor(party), &c));
            phi.set_factor(party, c);
        }
    }
    let lambda = overlap(&phi, psi)?.norm();
    Ok((phi, lambda, step))
}

/// A run only counts as converged once the factors have also stopped moving;
/// `Λ` is quadratic in the factor error, so `|ΔΛ| < tol` alone would leave
/// factors (and the stationarity residual) accurate to only `~√tol`.
const FACTOR_STEP_TOL: f64 = 1e-10;

fn run_als(psi: &PureState, start: ProductState, opts: &SolveOptions) -> Result<Run> {
    let mut phi = start;
    let mut lambda = overlap(&phi, psi)?.norm();
    for sweep in 1..=opts.max_sweeps {
        let (next, next_lambda, step) = sweep_with_step(psi, &phi)?;
        let delta = (next_lambda - lambda).abs();
        phi = next;
        lambda = next_lambda;
        if delta < opts.tol && step < FACTOR_STEP_TOL.max(opts.tol) {
            return Ok(Run { phi, lambda, sweeps: sweep, converged: true });
        }
    }
    Ok(Run { phi, lambda, sweeps: opts.max_sweeps, converged: false })
}

/// Gradient of `⟨c^{⊗n}|ψ⟩` with respect to `conj(c)`: the sum of all party environments.
fn symmetric_gradient(psi: &PureState, phi: &ProductState) -> Result<Vec<Complex64>> {
    let d = psi.dims()[0];
    let mut grad = vec![Complex64::new(0.0, 0.0); d];
    for party in 0..psi.parties() {
        for (g, e) in grad.iter_mut().zip(environment(psi, phi, party)?) {
            *g += e;
        }
    }
    Ok(grad)
}

/// Shifted symmetric power iteration on `|⟨c^{⊗n}|ψ⟩|`.
///
/// The plain update `c ← grad` can oscillate for general tensors; a rejected
/// step doubles the shift `α` in `c ← grad/‖grad‖ + α c`, which turns the
/// update into an ever shorter ascent step, and an accepted one halves it.
fn run_symmetric(psi: &PureState, start: Vec<Complex64>, opts: &SolveOptions) -> Result<Run> {
    let n = psi.parties();
    let mut c = start;
    let mut phi = ProductState::from_unit_factors(vec![c.clone(); n]);
    let mut g = overlap(&phi, psi)?;
    let mut shift = 0.0f64;
    for sweep in 1..=opts.max_sweeps {
        let grad = symmetric_gradient(psi, &phi)?;
        let phase = if g.norm() > ZERO_NORM { g.conj() / g.norm() } else { Complex64::new(1.0, 0.0) };
        let gnorm = norm(&grad);
        if gnorm < ZERO_NORM {
            return Ok(Run { phi, lambda: g.norm(), sweeps: sweep, converged: true });
        }
        let dir: Vec<Complex64> = grad.iter().map(|z| z * phase / gnorm).collect();
        loop {
            let trial: Vec<Complex64> = dir.iter().zip(&c).map(|(a, b)| a + b * shift).collect();
            let Some(trial) = unit(trial) else {
                shift = shift.max(1.0) * 2.0;
                continue;
            };
            let trial_phi = ProductState::from_unit_factors(vec![trial.clone(); n]);
            let trial_g = overlap(&trial_phi, psi)?;
            if trial_g.norm() >= g.norm() {
                let delta = trial_g.norm() - g.norm();
                c = trial;
                phi = trial_phi;
                g = trial_g;
                shift = if shift < 1e-3 { 0.0 } else { shift / 2.0 };
                if delta < opts.tol {
                    return Ok(Run { phi, lambda: g.norm(), sweeps: sweep, converged: true });
                }
                break;
            }
            shift = if shift == 0.0 { 1.0 } else { shift * 2.0 };
            if shift > 1e12 {
                // No ascent direction left at working precision.
                return Ok(Run { phi, lambda: g.norm(), sweeps: sweep, converged: true });
            }
        }
    }
    Ok(Run { phi, lambda: g.norm(), sweeps: opts.max_sweeps, converged: false })
}

/// Leading eigenvector of the single-party reduced density operator.
fn leading_marginal_vector(psi: &PureState, party: usize) -> Vec<Complex64> {
    let m = psi.flatten_party(party);
    let rho: DMatrix<Complex64> = &m * m.adjoint();
    let eig = SymmetricEigen::new(rho);
    let best = eig.eigenvalues.iter().enumerate().fold(0, |b, (i, v)| if *v > eig.eigenvalues[b] { i } else { b });
    eig.eigenvectors.column(best).iter().copied().collect()
}

fn start_state(psi: &PureState, restart: usize, opts: &SolveOptions) -> Vec<Vec<Complex64>> {
    let n = psi.parties();
    if restart == 0 {
        return if opts.symmetric_ansatz {
            vec![leading_marginal_vector(psi, 0)]
        } else {
            (0..n).map(|i| leading_marginal_vector(psi, i)).collect()
        };
    }
    let mut rng = stream_rng(opts.seed, restart as u64);
    let count = if opts.symmetric_ansatz { 1 } else { n };
    (0..count).map(|i| random_unit_vector(psi.dims()[i], &mut rng)).collect()
}

fn solve_one(psi: &PureState, restart: usize, opts: &SolveOptions) -> Result<Run> {
    let mut start = start_state(psi, restart, opts);
    if opts.symmetric_ansatz {
        run_symmetric(psi, start.remove(0), opts)
    } else {
        run_als(psi, ProductState::from_unit_factors(start), opts)
    }
}

/// Entanglement eigenvalue `Λmax` with the maximizing product state.
///
/// Restart 0 starts from the leading eigenvectors of the single-party
/// marginals; restarts `1..=opts.restarts` start from seeded random product
/// states. Restarts run in parallel; the best `Λ` wins, ties going to the
/// lowest restart index, so the result does not depend on scheduling.
pub fn entanglement_eigenvalue(psi: &PureState, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;
    if opts.symmetric_ansatz && psi.dims().iter().any(|&d| d != psi.dims()[0]) {
        return Err(Error::DimensionMismatch { expected: psi.dims()[0], got: psi.dims()[1] });
    }
    let runs = (0..=opts.restarts)
        .into_par_iter()
        .map(|i| solve_one(psi, i, opts))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) = runs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.lambda), hi.max(r.lambda)));
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.lambda > best.lambda { r } else { best })
        .expect("at least one run");
    Ok(SolveResult::from_run(best, hi - lo))
}

/// `E_sin² = 1 − Λmax²` of a pure state.
pub fn e_sin2_pure(psi: &PureState, opts: &SolveOptions) -> Result<f64> {
    Ok(entanglement_eigenvalue(psi, opts)?.e_sin2)
}

/// Largest deviation from the stationarity condition `env_i = ⟨φ|ψ⟩ c⁽ⁱ⁾` over all parties.
pub fn stationarity_residual(psi: &PureState, phi: &ProductState) -> Result<f64> {
    let g = overlap(phi, psi)?;
    let mut worst = 0.0f64;
    for party in 0..psi.parties() {
        let env = environment(psi, phi, party)?;
        let diff: Vec<Complex64> = env.iter().zip(phi.factor(party)).map(|(e, c)| e - g * c).collect();
        worst = worst.max(norm(&diff));
    }
    Ok(worst)
}

/// Grid points per refinement round and per angle.
const REFINE_POINTS: usize = 9;
const REFINE_ROUNDS: usize = 3;

fn qubit_factor(theta: f64, phase: f64) -> [Complex64; 2] {
    [Complex64::new(theta.cos(), 0.0), Complex64::from_polar(theta.sin(), phase)]
}

/// Exhaustive search over `(θ, φ)` grids for all parties but the last; the last
/// factor is optimized exactly since `max_c |⟨c|v⟩| = ‖v‖`.
fn grid_search(t: &[Complex64], candidates: &[Vec<[Complex64; 2]>], chosen: &mut Vec<usize>) -> (f64, Vec<usize>) {
    let Some((first, rest)) = candidates.split_first() else {
        return (norm(t), chosen.clone());
    };
    let half = t.len() / 2;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut reduced = vec![Complex64::new(0.0, 0.0); half];
    for (idx, c) in first.iter().enumerate() {
        let (c0, c1) = (c[0].conj(), c[1].conj());
        for (r, (a, b)) in reduced.iter_mut().zip(t[..half].iter().zip(&t[half..])) {
            *r = c0 * a + c1 * b;
        }
        chosen.push(idx);
        let found = grid_search(&reduced, rest, chosen);
        chosen.pop();
        if found.0 > best.0 {
            best = found;
        }
    }
    best
}

/// Brute-force lower bound on `Λmax` for at most four qubits.
///
/// Each factor is parametrized as `(cos θ, e^{iφ} sin θ)` on a uniform grid with
/// `grid_points_per_angle` values per angle, followed by three rounds of
/// shrinking grids centred on the best cell. This does not use the sweep
/// machinery and serves as an independent check on it.
pub fn brute_force_lambda(psi: &PureState, grid_points_per_angle: usize) -> Result<f64> {
    let n = psi.parties();
    if n > 4 || !psi.is_qubits() {
        return Err(Error::TooLarge(format!("brute force needs at most 4 qubits, got dims {:?}", psi.dims())));
    }
    if grid_points_per_angle < 2 {
        return Err(Error::DegenerateGrid(grid_points_per_angle));
    }
    let free = n - 1;
    let amps = psi.amplitudes();
    let g = grid_points_per_angle;
    let theta_max = std::f64::consts::FRAC_PI_2;
    let tau = std::f64::consts::TAU;

    let thetas: Vec<f64> = (0..g).map(|i| theta_max * i as f64 / (g - 1) as f64).collect();
    let phases: Vec<f64> = (0..g).map(|i| tau * i as f64 / g as f64).collect();
    let coarse: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| phases.iter().map(move |&p| (t, p))).collect();
    let factors: Vec<[Complex64; 2]> = coarse.iter().map(|&(t, p)| qubit_factor(t, p)).collect();
    let (mut best, picks) = grid_search(amps, &vec![factors; free], &mut Vec::new());
    let mut centre: Vec<(f64, f64)> = picks.iter().map(|&i| coarse[i]).collect();
    let (mut h_theta, mut h_phase) = (theta_max / (g - 1) as f64, tau / g as f64);

    for _ in 0..REFINE_ROUNDS {
        let offsets: Vec<f64> =
            (0..REFINE_POINTS).map(|i| -1.0 + 2.0 * i as f64 / (REFINE_POINTS - 1) as f64).collect();
        let local: Vec<Vec<(f64, f64)>> = centre
            .iter()
            .map(|&(t0, p0)| {
                offsets
                    .iter()
                    .flat_map(|&a| {
                        offsets.iter().map(move |&b| ((t0 + a * h_theta).clamp(0.0, theta_max), p0 + b * h_phase))
                    })
                    .collect()
            })
            .collect();
        let cands: Vec<Vec<[Complex64; 2]>> =
            local.iter().map(|pts| pts.iter().map(|&(t, p)| qubit_factor(t, p)).collect()).collect();
        let (value, picks) = grid_search(amps, &cands, &mut Vec::new());
        if value >= best {
            best = value;
            centre = picks.iter().zip(&local).map(|(&i, pts)| pts[i]).collect();
        }
        h_theta *= 2.0 / (REFINE_POINTS - 1) as f64;
        h_phase *= 2.0 / (REFINE_POINTS - 1) as f64;
    }
    Ok(best.min(1.0))
}

/// Kraus operators acting on a single party.
#[derive(Debug, Clone)]
pub struct UnilocalChannel {
    pub party: usize,
    pub kraus: Vec<DMatrix<Complex64>>,
}

impl UnilocalChannel {
    /// `max |Σ V†V − 1|` entrywise.
    pub fn completeness_error(&self) -> f64 {
        let Some(first) = self.kraus.first() else { return f64::INFINITY };
        let d = first.ncols();
        let sum = self.kraus.iter().fold(DMatrix::zeros(d, d), |acc, v| acc + v.adjoint() * v);
        (sum - DMatrix::<Complex64>::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `Σ_k p_k Λ_k² − Λ²` for the post-measurement ensemble of a unilocal channel.
///
/// Average entanglement cannot grow under local operations, so the gap is
/// non-negative up to solver accuracy. Outcomes with `p_k < 1e-14` are skipped.
pub fn unilocal_monotonicity_gap(psi: &PureState, channel: &UnilocalChannel, opts: &SolveOptions) -> Result<f64> {
    let dev = channel.completeness_error();
    if !(dev <= 1e-10) {
        return Err(Error::NotTracePreserving(dev));
    }
    let lambda = entanglement_eigenvalue(psi, opts)?.lambda_max;
    let mut average = 0.0;
    for v in &channel.kraus {
        let post = psi.apply_local(channel.party, v)?;
        let p = norm(&post).powi(2);
        if p < 1e-14 {
            continue;
        }
        let post = crate::states::make_pure(psi.dims(), &post)?;
        let lambda_k = entanglement_eigenvalue(&post, opts)?.lambda_max;
        average += p * lambda_k * lambda_k;
    }
    Ok(average - lambda * lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_state};
    use crate::states::{dicke, ghz, make_pure, w_state};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_state_converges_in_one_sweep() {
        let psi = PureState::basis(&[2, 2], &[0, 1]).unwrap();
        let start = ProductState::new(vec![vec![c(1.0), c(0.3)], vec![c(0.2), c(1.0)]]).unwrap();
        let (_, lambda) = als_sweep(&psi, &start).unwrap();
        assert_abs_diff_eq!(lambda, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bell_from_zero_zero_is_stationary() {
        // Hand contraction: env_0 = (χ00, χ10) = (1/√2, 0), then env_1 = (1/√2, 0).
        let bell = ghz(2).unwrap();
        let start = ProductState::new(vec![vec![c(1.0), c(0.0)]; 2]).unwrap();
        let (phi, lambda) = als_sweep(&bell, &start).unwrap();
        assert_abs_diff_eq!(lambda, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!(phi, start);
    }

    #[test]
    fn sweeps_are_monotone_on_w() {
        let w = w_state();
        let mut rng = stream_rng(3, 0);
        for _ in 0..10 {
            let mut phi =
                ProductState::from_unit_factors((0..3).map(|_| random_unit_vector(2, &mut rng)).collect());
            let mut last = overlap(&phi, &w).unwrap().norm();
            for _ in 0..200 {
                let (next, lambda) = als_sweep(&w, &phi).unwrap();
                assert!(lambda >= last - 1e-12);
                phi = next;
                last = lambda;
            }
            assert_abs_diff_eq!(last, 2.0 / 3.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn named_values() {
        let opts = SolveOptions::default();
        let w = entanglement_eigenvalue(&w_state(), &opts).unwrap();
        assert_abs_diff_eq!(w.lambda_max, 2.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(w.e_sin2, 5.0 / 9.0, epsilon = 1e-9);
        assert!(w.converged);
        for n in 2..6 {
            let r = entanglement_eigenvalue(&ghz(n).unwrap(), &opts).unwrap();
            assert_abs_diff_eq!(r.lambda_max, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-9);
            assert_abs_diff_eq!(r.distance, (2.0 - std::f64::consts::SQRT_2).sqrt(), epsilon = 1e-8);
        }
        let prod = PureState::basis(&[2, 2, 2], &[0, 0, 0]).unwrap();
        assert_abs_diff_eq!(e_sin2_pure(&prod, &opts).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn result_fields_are_consistent() {
        let mut rng = stream_rng(19, 0);
        let psi = random_state(&[2, 3, 2], &mut rng).unwrap();
        let r = entanglement_eigenvalue(&psi, &SolveOptions::default()).unwrap();
        assert_eq!(r.e_sin2, 1.0 - r.lambda_max * r.lambda_max);
        assert!(r.restart_spread >= 0.0);
        assert_abs_diff_eq!(overlap(&r.nearest, &psi).unwrap().norm(), r.lambda_max, epsilon = 1e-15);
        assert!(stationarity_residual(&psi, &r.nearest).unwrap() < 1e-8);
    }

    #[test]
    fn deterministic_given_seed() {
        let mut rng = stream_rng(23, 0);
        let psi = random_state(&[2, 2, 2, 2], &mut rng).unwrap();
        let opts = SolveOptions { seed: 99, ..SolveOptions::default() };
        let a = entanglement_eigenvalue(&psi, &opts).unwrap();
        let b = entanglement_eigenvalue(&psi, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_options() {
        let w = w_state();
        let bad = SolveOptions { restarts: 0, ..SolveOptions::default() };
        assert!(entanglement_eigenvalue(&w, &bad).is_err());
        let bad = SolveOptions { tol: 0.0, ..SolveOptions::default() };
        assert!(entanglement_eigenvalue(&w, &bad).is_err());
    }

    #[test]
    fn max_sweeps_flags_non_convergence() {
        let mut rng = stream_rng(29, 0);
        let psi = random_state(&[2, 2, 2], &mut rng).unwrap();
        let opts = SolveOptions { max_sweeps: 1, tol: 1e-300, ..SolveOptions::default() };
        let r = entanglement_eigenvalue(&psi, &opts).unwrap();
        assert!(!r.converged);
        assert_eq!(r.sweeps_used, 1);
    }

    #[test]
    fn symmetric_ansatz_on_dicke() {
        let opts = SolveOptions { symmetric_ansatz: true, ..SolveOptions::default() };
        for (n, k) in [(3, 2), (4, 2), (5, 1), (6, 3)] {
            let psi = dicke(n, k).unwrap();
            let sym = entanglement_eigenvalue(&psi, &opts).unwrap();
            let full = entanglement_eigenvalue(&psi, &SolveOptions::default()).unwrap();
            assert_abs_diff_eq!(sym.lambda_max, full.lambda_max, epsilon = 1e-8);
        }
    }

    #[test]
    fn brute_force_examples() {
        let prod = PureState::basis(&[2, 2, 2], &[0, 0, 0]).unwrap();
        assert_abs_diff_eq!(brute_force_lambda(&prod, 8).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(brute_force_lambda(&w_state(), 60).unwrap(), 2.0 / 3.0, epsilon = 1e-4);
        assert!(matches!(brute_force_lambda(&ghz(5).unwrap(), 4), Err(Error::TooLarge(_))));
        let qutrit = make_pure(&[3, 2], &[c(1.0); 6]).unwrap();
        assert!(matches!(brute_force_lambda(&qutrit, 4), Err(Error::TooLarge(_))));
    }

    #[test]
    fn brute_force_agrees_with_solver() {
        let mut rng = stream_rng(31, 0);
        for dims in [[2usize, 2].as_slice(), &[2, 2, 2]] {
            for _ in 0..4 {
                let psi = random_state(dims, &mut rng).unwrap();
                let bf = brute_force_lambda(&psi, 24).unwrap();
                let sol = entanglement_eigenvalue(&psi, &SolveOptions::default()).unwrap().lambda_max;
                assert!(bf <= sol + 1e-12);
                assert_abs_diff_eq!(bf, sol, epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn local_unitaries_do_not_change_lambda() {
        let mut rng = stream_rng(37, 0);
        let psi = random_state(&[2, 2, 2], &mut rng).unwrap();
        let us: Vec<_> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let rotated = psi.apply_product(&us).unwrap();
        let opts = SolveOptions::default();
        let a = entanglement_eigenvalue(&psi, &opts).unwrap().lambda_max;
        let b = entanglement_eigenvalue(&rotated, &opts).unwrap().lambda_max;
        assert_abs_diff_eq!(a, b, epsilon = 1e-8);
    }

    #[test]
    fn monotonicity_gap_examples() {
        let opts = SolveOptions::default();
        let id = UnilocalChannel { party: 1, kraus: vec![DMatrix::identity(2, 2)] };
        let gap = unilocal_monotonicity_gap(&w_state(), &id, &opts).unwrap();
        assert_abs_diff_eq!(gap, 0.0, epsilon = 1e-12);

        let p0 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let p1 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
        let measure = UnilocalChannel { party: 0, kraus: vec![p0.clone(), p1] };
        let gap = unilocal_monotonicity_gap(&ghz(3).unwrap(), &measure, &opts).unwrap();
        assert_abs_diff_eq!(gap, 0.5, epsilon = 1e-12);

        let broken = UnilocalChannel { party: 0, kraus: vec![p0] };
        assert!(matches!(
            unilocal_monotonicity_gap(&ghz(3).unwrap(), &broken, &opts),
            Err(Error::NotTracePreserving(_))
        ));
    }
}
