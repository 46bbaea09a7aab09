//! Permutation-symmetric qubit states.
//!
//! For a superposition of Dicke states the nearest product state can be taken
//! as `(cos θ |0⟩ + e^{iϕ} sin θ |1⟩)^{⊗n}`, reducing the search to two real
//! parameters. With that factor,
//! `⟨φ|S(n,k)⟩ = √C(n,k) cos^k θ (e^{−iϕ} sin θ)^{n−k}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::solver::{entanglement_eigenvalue, SolveOptions};
use crate::states::{build, FamilySpec};

const THETA_POINTS: usize = 721;
const PHASE_POINTS: usize = 360;
const MAX_REFINE_ROUNDS: usize = 200;
const MIN_REFINE_STEP: f64 = 1e-10;
const REFINE_POINTS: usize = 21;
const CANDIDATES: usize = 8;

/// Shared single-qubit factor `cos θ |0⟩ + e^{i·phase} sin θ |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricAnsatz {
    pub theta: f64,
    pub phase: f64,
}

impl SymmetricAnsatz {
    pub fn new(theta: f64, phase: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::OutOfRange { name: "theta", value: theta });
        }
        Ok(SymmetricAnsatz { theta, phase: phase.rem_euclid(std::f64::consts::TAU) })
    }

    pub fn factor(&self) -> [Complex64; 2] {
        [Complex64::new(self.theta.cos(), 0.0), Complex64::from_polar(self.theta.sin(), self.phase)]
    }
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    ln_binomial(n, k).exp()
}

/// `x ln x` with the `0 ln 0 = 0` convention.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `Λmax` of the Dicke state `S(n, k)`:
/// `√C(n,k) (k/n)^{k/2} ((n−k)/n)^{(n−k)/2}`.
pub fn lambda_dicke(n: usize, k: usize) -> Result<f64> {
    if n == 0 || k > n {
        return Err(Error::InvalidK { n, k });
    }
    let (nf, kf) = (n as f64, k as f64);
    let log = 0.5 * ln_binomial(n, k) + 0.5 * nf * (xlnx(kf / nf) + xlnx((nf - kf) / nf));
    Ok(log.exp().min(1.0))
}

/// The `k` minimizing `lambda_dicke(n, ·)`: `{n/2}` for even `n`, `{(n−1)/2, (n+1)/2}` for odd `n`.
pub fn max_entangled_k(n: usize) -> Vec<usize> {
    if n % 2 == 0 {
        vec![n / 2]
    } else {
        vec![(n - 1) / 2, (n + 1) / 2]
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

/// Cubic whose root gives `tan θ` of the nearest product state of `√s|W⟩ + √(1−s)|W̃⟩`.
pub fn ww_polynomial(s: f64, t: f64) -> f64 {
    let (a, b) = ((1.0 - s).sqrt(), s.sqrt());
    ((a * t + 2.0 * b) * t - 2.0 * a) * t - b
}

/// The root of [`ww_polynomial`] in `[√½, √2]`, by bisection.
///
/// The polynomial is convex on the bracket, non-positive at `√½` and
/// non-negative at `√2`, so the root there is unique.
pub fn ww_root(s: f64) -> Result<f64> {
    let s = check_unit("s", s)?;
    let (mut lo, mut hi) = (0.5f64.sqrt(), 2f64.sqrt());
    if ww_polynomial(s, lo) >= 0.0 {
        return Ok(lo);
    }
    if ww_polynomial(s, hi) <= 0.0 {
        return Ok(hi);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ww_polynomial(s, mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if ww_polynomial(s, lo).abs() <= ww_polynomial(s, hi).abs() { lo } else { hi })
}

/// `Λmax` of `√s|W⟩ + √(1−s)e^{iφ}|W̃⟩` (independent of `φ`):
/// `√3 cos θ sin θ (√s cos θ + √(1−s) sin θ)` with `tan θ = ww_root(s)`.
pub fn ww_lambda(s: f64) -> Result<f64> {
    let theta = ww_root(s)?.atan();
    let (c, sn) = (theta.cos(), theta.sin());
    Ok(3f64.sqrt() * c * sn * (s.sqrt() * c + (1.0 - s).sqrt() * sn))
}

/// Evaluates `|⟨φ(θ, ϕ)^{⊗n}|Σ_k α_k S(n,k)⟩|` for fixed per-`k` weights `α_k √C(n,k)`.
struct SymmetricOverlap {
    weights: Vec<Complex64>,
}

impl SymmetricOverlap {
    fn eval(&self, theta: f64, phase: f64) -> f64 {
        let n = self.weights.len() - 1;
        let (c, s) = (theta.cos(), theta.sin());
        let down = Complex64::from_polar(s, -phase);
        // Horner in z = cos θ / (e^{−iϕ} sin θ) would divide by zero at θ = 0.
        let mut cos_pow = 1.0;
        let mut total = Complex64::new(0.0, 0.0);
        let mut down_pows = vec![Complex64::new(1.0, 0.0); n + 1];
        for j in 1..=n {
            down_pows[j] = down_pows[j - 1] * down;
        }
        for (k, w) in self.weights.iter().enumerate() {
            total += w * cos_pow * down_pows[n - k];
            cos_pow *= c;
        }
        total.norm()
    }
}

fn local_maxima(values: &[f64], rows: usize, cols: usize, periodic_cols: bool) -> Vec<(usize, usize)> {
    let at = |i: usize, j: usize| values[i * cols + j];
    let mut peaks = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = at(i, j);
            let mut is_peak = true;
            'scan: for di in [-1i64, 0, 1] {
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as i64 + di;
                    if ii < 0 || ii >= rows as i64 {
                        continue;
                    }
                    let jj = j as i64 + dj;
                    let jj = if periodic_cols {
                        jj.rem_euclid(cols as i64)
                    } else if jj < 0 || jj >= cols as i64 {
                        continue;
                    } else {
                        jj
                    };
                    if at(ii as usize, jj as usize) > v {
                        is_peak = false;
                        break 'scan;
                    }
                }
            }
            if is_peak {
                peaks.push((i, j));
            }
        }
    }
    peaks.sort_by(|a, b| at(b.0, b.1).total_cmp(&at(a.0, a.1)));
    peaks.truncate(CANDIDATES);
    peaks
}

/// `Λmax` of `Σ_k α_k |S(n,k)⟩` under the symmetric product ansatz, with the maximizer.
///
/// `coeffs[k]` is the amplitude of `S(n,k)`. A dense `(θ, ϕ)` grid is followed
/// by local refinement around the best grid peaks: a 21×21 window recentres on
/// its best point and shrinks once that point is interior. For real
/// non-negative coefficients the phase is pinned to zero, which is optimal by
/// the triangle inequality.
pub fn symmetric_lambda_with_ansatz(n: usize, coeffs: &[Complex64]) -> Result<(f64, SymmetricAnsatz)> {
    if n == 0 || coeffs.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: coeffs.len() });
    }
    let sq: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
    if !((sq - 1.0).abs() <= 1e-6) {
        return Err(Error::NotNormalized(sq));
    }
    let scale = sq.sqrt().recip();
    let weights: Vec<Complex64> =
        coeffs.iter().enumerate().map(|(k, a)| a * scale * binomial(n, k).sqrt()).collect();
    let f = SymmetricOverlap { weights };

    let real_nonneg = coeffs.iter().all(|z| z.im == 0.0 && z.re >= 0.0);
    let theta_max = std::f64::consts::FRAC_PI_2;
    let tau = std::f64::consts::TAU;
    let phase_points = if real_nonneg { 1 } else { PHASE_POINTS };
    let theta_step = theta_max / (THETA_POINTS - 1) as f64;
    let phase_step = tau / PHASE_POINTS as f64;

    let values: Vec<f64> = (0..THETA_POINTS)
        .flat_map(|i| (0..phase_points).map(move |j| (i, j)))
        .map(|(i, j)| f.eval(i as f64 * theta_step, j as f64 * phase_step))
        .collect();

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for (i, j) in local_maxima(&values, THETA_POINTS, phase_points, !real_nonneg) {
        let (mut theta, mut phase) = (i as f64 * theta_step, j as f64 * phase_step);
        let mut value = values[i * phase_points + j];
        let (mut ht, mut hp) = (theta_step, if real_nonneg { 0.0 } else { phase_step });
        let last = REFINE_POINTS - 1;
        for _ in 0..MAX_REFINE_ROUNDS {
            if ht < MIN_REFINE_STEP {
                break;
            }
            let (t0, p0) = (theta, phase);
            let mut moved_to_edge = false;
            for a in 0..REFINE_POINTS {
                let t = (t0 + ht * (2.0 * a as f64 / last as f64 - 1.0)).clamp(0.0, theta_max);
                for b in 0..REFINE_POINTS {
                    let p = p0 + hp * (2.0 * b as f64 / last as f64 - 1.0);
                    let v = f.eval(t, p);
                    if v > value {
                        value = v;
                        theta = t;
                        phase = p;
                        moved_to_edge = a == 0 || a == last || (hp > 0.0 && (b == 0 || b == last));
                    }
                }
            }
            // Keep the window size while the maximum is still sliding along a ridge.
            if !moved_to_edge {
                ht *= 2.0 / last as f64;
                hp *= 2.0 / last as f64;
            }
        }
        if value > best.0 {
            best = (value, theta, phase);
        }
    }
    Ok((best.0.min(1.0), SymmetricAnsatz::new(best.1, best.2)?))
}

/// `Λmax` of `Σ_k α_k |S(n,k)⟩` under the symmetric product ansatz.
pub fn symmetric_lambda(n: usize, coeffs: &[Complex64]) -> Result<f64> {
    Ok(symmetric_lambda_with_ansatz(n, coeffs)?.0)
}

/// Per-`k` amplitudes of `√r |S(n,k1)⟩ + √(1−r) e^{iφ} |S(n,k2)⟩`.
pub fn ss_coefficients(n: usize, k1: usize, k2: usize, r: f64, phase: f64) -> Result<Vec<Complex64>> {
    for k in [k1, k2] {
        if k > n {
            return Err(Error::InvalidK { n, k });
        }
    }
    if k1 == k2 {
        return Err(Error::InvalidK { n, k: k2 });
    }
    let r = check_unit("r", r)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[k1] = Complex64::new(r.sqrt(), 0.0);
    coeffs[k2] = Complex64::from_polar((1.0 - r).sqrt(), phase);
    Ok(coeffs)
}

/// Pure-state curve `E_sin²(SS_{n;k1k2}(r, 0))` over `r_grid`.
pub fn ss_pure_curve(n: usize, k1: usize, k2: usize, r_grid: &[f64]) -> Result<Curve> {
    let values = r_grid
        .par_iter()
        .map(|&r| {
            let lambda = symmetric_lambda(n, &ss_coefficients(n, k1, k2, r, 0.0)?)?;
            Ok(1.0 - lambda * lambda)
        })
        .collect::<Result<Vec<_>>>()?;
    Curve::new(r_grid.to_vec(), values, false)
}

/// `E_sin²` of `√s|W⟩ + √(1−s)|W̃⟩` over `s_grid`, from the cubic root.
pub fn ww_curve(s_grid: &[f64]) -> Result<Curve> {
    let values = s_grid
        .iter()
        .map(|&s| ww_lambda(s).map(|l| 1.0 - l * l))
        .collect::<Result<Vec<_>>>()?;
    Curve::new(s_grid.to_vec(), values, false)
}

/// `E_sin²` of `√s|W⟩ + √(1−s)e^{iφ}|GHZ⟩` over `s_grid` with the full solver.
pub fn wg_curve(phase: f64, s_grid: &[f64], opts: &SolveOptions) -> Result<Curve> {
    let values = s_grid
        .par_iter()
        .map(|&s| {
            check_unit("s", s)?;
            let psi = build(&FamilySpec::wg(s, phase)?)?;
            Ok(entanglement_eigenvalue(&psi, opts)?.e_sin2)
        })
        .collect::<Result<Vec<_>>>()?;
    Curve::new(s_grid.to_vec(), values, false)
}
