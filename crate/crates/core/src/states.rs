//! Pure multipartite states, product (Hartree) states and the named state families.
//!
//! Amplitudes are stored densely in row-major order over the party index tuple,
//! so party 0 is the most significant digit: for three qubits the basis string
//! `|001⟩` lives at flat index 1 and `|100⟩` at flat index 4.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this norm a vector is treated as zero.
pub const ZERO_NORM: f64 = 1e-14;

/// Largest amplitude count a state may have.
pub const MAX_AMPLITUDES: usize = 1 << 24;

/// Dense pure state `Σ χ_{p1…pn} |p1 … pn⟩`, normalized on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState", into = "RawState")]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

/// Serialized form: `{"dims": [...], "amps": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawState {
    pub dims: Vec<usize>,
    pub amps: Vec<[f64; 2]>,
}

impl TryFrom<RawState> for PureState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        let amps: Vec<Complex64> = raw.amps.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        make_pure(&raw.dims, &amps)
    }
}

impl From<PureState> for RawState {
    fn from(state: PureState) -> Self {
        RawState {
            dims: state.dims,
            amps: state.amps.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let mut total: usize = 1;
    for &d in dims {
        if d < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: d });
        }
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_AMPLITUDES)
            .ok_or_else(|| Error::TooLarge(format!("dims {dims:?} exceed {MAX_AMPLITUDES} amplitudes")))?;
    }
    Ok(total)
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Builds a normalized pure state from raw amplitudes.
pub fn make_pure(dims: &[usize], amps: &[Complex64]) -> Result<PureState> {
    let total = check_dims(dims)?;
    if amps.len() != total {
        return Err(Error::DimensionMismatch { expected: total, got: amps.len() });
    }
    let nrm = norm(amps);
    if !(nrm >= ZERO_NORM) || !nrm.is_finite() {
        return Err(Error::ZeroState);
    }
    Ok(PureState {
        dims: dims.to_vec(),
        amps: amps.iter().map(|z| z / nrm).collect(),
    })
}

impl PureState {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        let total = check_dims(dims)?;
        if digits.len() != dims.len() {
            return Err(Error::DimensionMismatch { expected: dims.len(), got: digits.len() });
        }
        let mut index = 0;
        for (&p, &d) in digits.iter().zip(dims) {
            if p >= d {
                return Err(Error::IndexOutOfRange { index: p, len: d });
            }
            index = index * d + p;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(PureState { dims: dims.to_vec(), amps })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), got: other.amps.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Applies `op` to one party and returns the unnormalized amplitudes.
    pub fn apply_local(&self, party: usize, op: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
        let n = self.parties();
        if party >= n {
            return Err(Error::IndexOutOfRange { index: party, len: n });
        }
        let d = self.dims[party];
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: op.nrows() });
        }
        let right: usize = self.dims[party + 1..].iter().product();
        let left = self.amps.len() / (d * right);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for l in 0..left {
            for r in 0..right {
                for row in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for col in 0..d {
                        acc += op[(row, col)] * self.amps[(l * d + col) * right + r];
                    }
                    out[(l * d + row) * right + r] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Applies one operator per party (a local unitary when each one is unitary).
    pub fn apply_product(&self, ops: &[DMatrix<Complex64>]) -> Result<PureState> {
        if ops.len() != self.parties() {
            return Err(Error::DimensionMismatch { expected: self.parties(), got: ops.len() });
        }
        let mut state = self.clone();
        for (party, op) in ops.iter().enumerate() {
            let amps = state.apply_local(party, op)?;
            state = make_pure(&self.dims, &amps)?;
        }
        Ok(state)
    }

    /// The state as a `d_party × (rest)` matrix.
    pub fn flatten_party(&self, party: usize) -> DMatrix<Complex64> {
        let d = self.dims[party];
        let right: usize = self.dims[party + 1..].iter().product();
        let left = self.amps.len() / (d * right);
        DMatrix::from_fn(d, left * right, |p, col| {
            let (l, r) = (col / right, col % right);
            self.amps[(l * d + p) * right + r]
        })
    }

    pub fn density(&self) -> DMatrix<Complex64> {
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        &v * v.adjoint()
    }
}

/// A product state `⊗ᵢ |φ⁽ⁱ⁾⟩`, one unit-norm factor per party.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<Vec<Complex64>>,
}

impl ProductState {
    /// Normalizes every factor; fails on a zero factor.
    pub fn new(factors: Vec<Vec<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let factors = factors
            .into_iter()
            .map(|f| {
                let nrm = norm(&f);
                if !(nrm >= ZERO_NORM) || f.len() < 2 {
                    return Err(Error::ZeroState);
                }
                Ok(f.into_iter().map(|z| z / nrm).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductState { factors })
    }

    pub(crate) fn from_unit_factors(factors: Vec<Vec<Complex64>>) -> Self {
        ProductState { factors }
    }

    /// `n` copies of the same factor.
    pub fn uniform(factor: &[Complex64], n: usize) -> Result<Self> {
        ProductState::new(vec![factor.to_vec(); n])
    }

    pub fn factors(&self) -> &[Vec<Complex64>] {
        &self.factors
    }

    pub fn factor(&self, party: usize) -> &[Complex64] {
        &self.factors[party]
    }

    pub(crate) fn set_factor(&mut self, party: usize, factor: Vec<Complex64>) {
        self.factors[party] = factor;
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    /// Expands the product into a dense state.
    pub fn to_state(&self) -> PureState {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in &self.factors {
            amps = amps.iter().flat_map(|a| f.iter().map(move |c| a * c)).collect();
        }
        PureState { dims: self.dims(), amps }
    }

    fn check(&self, psi: &PureState) -> Result<()> {
        if self.factors.len() != psi.parties() {
            return Err(Error::DimensionMismatch { expected: psi.parties(), got: self.factors.len() });
        }
        for (f, &d) in self.factors.iter().zip(psi.dims()) {
            if f.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: f.len() });
            }
        }
        Ok(())
    }
}

/// Contracts axis `axis` of a row-major tensor with `conj(w)`, removing that axis.
fn contract_axis(t: &[Complex64], dims: &[usize], axis: usize, w: &[Complex64]) -> Vec<Complex64> {
    let d = dims[axis];
    let right: usize = dims[axis + 1..].iter().product();
    let left = t.len() / (d * right);
    let mut out = vec![Complex64::new(0.0, 0.0); left * right];
    for l in 0..left {
        for (p, wp) in w.iter().enumerate() {
            let wc = wp.conj();
            let src = &t[(l * d + p) * right..(l * d + p + 1) * right];
            let dst = &mut out[l * right..(l + 1) * right];
            for (o, s) in dst.iter_mut().zip(src) {
                *o += wc * s;
            }
        }
    }
    out
}

/// `⟨φ|ψ⟩ = Σ χ_{p1…pn} ∏ᵢ conj(c⁽ⁱ⁾_{pᵢ})`.
pub fn overlap(phi: &ProductState, psi: &PureState) -> Result<Complex64> {
    phi.check(psi)?;
    let mut t = psi.amps.clone();
    let mut dims = psi.dims.clone();
    while let Some(last) = dims.len().checked_sub(1) {
        t = contract_axis(&t, &dims, last, &phi.factors[last]);
        dims.pop();
    }
    Ok(t[0])
}

/// `(⊗_{j≠i} ⟨φ⁽ʲ⁾|) |ψ⟩`, a vector on party `i`.
pub fn environment(psi: &PureState, phi: &ProductState, party: usize) -> Result<Vec<Complex64>> {
    phi.check(psi)?;
    let n = psi.parties();
    if party >= n {
        return Err(Error::IndexOutOfRange { index: party, len: n });
    }
    let mut t = psi.amps.clone();
    let mut dims = psi.dims.clone();
    for j in (party + 1..n).rev() {
        t = contract_axis(&t, &dims, dims.len() - 1, &phi.factors[j]);
        dims.pop();
    }
    for j in 0..party {
        t = contract_axis(&t, &dims, 0, &phi.factors[j]);
        dims.remove(0);
    }
    Ok(t)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dicke state `S(n, k)`: equal superposition of all n-qubit strings with exactly `k` zeros.
pub fn dicke(n: usize, k: usize) -> Result<PureState> {
    if n == 0 {
        return Err(Error::OutOfRange { name: "n", value: 0.0 });
    }
    if k > n {
        return Err(Error::InvalidK { n, k });
    }
    let dims = vec![2; n];
    let total = check_dims(&dims)?;
    let amp = Complex64::new(binomial(n, k).recip().sqrt(), 0.0);
    let amps = (0..total)
        .map(|idx| {
            let ones = (idx as u64).count_ones() as usize;
            if n - ones == k {
                amp
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(PureState { dims, amps })
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::OutOfRange { name: "n", value: n as f64 });
    }
    let dims = vec![2; n];
    let total = check_dims(&dims)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); total];
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[total - 1] = amps[0];
    Ok(PureState { dims, amps })
}

/// `|W⟩ = S(3, 2)`.
pub fn w_state() -> PureState {
    dicke(3, 2).expect("valid Dicke index")
}

/// `|W̃⟩ = S(3, 1)`.
pub fn w_tilde_state() -> PureState {
    dicke(3, 1).expect("valid Dicke index")
}

/// One weighted branch of a superposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "complex_pair")]
    pub coeff: Complex64,
    pub state: FamilySpec,
}

/// Declarative description of a pure state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FamilySpec {
    Dicke { n: usize, k: usize },
    Ghz { n: usize },
    Superposition { terms: Vec<Term> },
    Raw { state: PureState },
}

fn unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

impl FamilySpec {
    /// `√a |first⟩ + √(1−a) e^{iφ} |second⟩`.
    pub fn two_term(a: f64, phase: f64, first: FamilySpec, second: FamilySpec) -> Result<Self> {
        let a = unit_interval("weight", a)?;
        Ok(FamilySpec::Superposition {
            terms: vec![
                Term { coeff: Complex64::new(a.sqrt(), 0.0), state: first },
                Term { coeff: Complex64::from_polar((1.0 - a).sqrt(), phase), state: second },
            ],
        })
    }

    /// `√s |W⟩ + √(1−s) e^{iφ} |W̃⟩`.
    pub fn ww(s: f64, phase: f64) -> Result<Self> {
        Self::two_term(s, phase, FamilySpec::Dicke { n: 3, k: 2 }, FamilySpec::Dicke { n: 3, k: 1 })
    }

    /// `√s |W⟩ + √(1−s) e^{iφ} |GHZ⟩`.
    pub fn wg(s: f64, phase: f64) -> Result<Self> {
        Self::two_term(s, phase, FamilySpec::Dicke { n: 3, k: 2 }, FamilySpec::Ghz { n: 3 })
    }

    /// `√r |S(n,k1)⟩ + √(1−r) e^{iφ} |S(n,k2)⟩`.
    pub fn ss(n: usize, k1: usize, k2: usize, r: f64, phase: f64) -> Result<Self> {
        if k1 > n || k1 == k2 {
            return Err(Error::InvalidK { n, k: k1 });
        }
        if k2 > n {
            return Err(Error::InvalidK { n, k: k2 });
        }
        Self::two_term(r, phase, FamilySpec::Dicke { n, k: k1 }, FamilySpec::Dicke { n, k: k2 })
    }
}

/// Materializes a family description into a normalized dense state.
pub fn build(spec: &FamilySpec) -> Result<PureState> {
    match spec {
        FamilySpec::Dicke { n, k } => dicke(*n, *k),
        FamilySpec::Ghz { n } => ghz(*n),
        FamilySpec::Raw { state } => Ok(state.clone()),
        FamilySpec::Superposition { terms } => {
            let mut acc: Option<(Vec<usize>, Vec<Complex64>)> = None;
            for term in terms {
                let leaf = build(&term.state)?;
                let (dims, amps) = acc.get_or_insert_with(|| {
                    (leaf.dims.clone(), vec![Complex64::new(0.0, 0.0); leaf.amps.len()])
                });
                if *dims != leaf.dims {
                    return Err(Error::DimensionMismatch { expected: amps.len(), got: leaf.amps.len() });
                }
                for (a, x) in amps.iter_mut().zip(&leaf.amps) {
                    *a += term.coeff * x;
                }
            }
            let (dims, amps) = acc.ok_or(Error::ZeroState)?;
            make_pure(&dims, &amps)
        }
    }
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bell_is_normalized() {
        let psi = make_pure(&[2, 2], &[c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        assert_abs_diff_eq!(psi.amplitudes()[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(psi.amplitudes()[3].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn zero_and_mismatched_inputs_are_rejected() {
        assert_eq!(make_pure(&[2], &[c(0.0), c(0.0)]), Err(Error::ZeroState));
        assert_eq!(
            make_pure(&[2, 2], &[c(1.0); 3]),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        );
        assert!(make_pure(&[1, 2], &[c(1.0); 2]).is_err());
    }

    #[test]
    fn uniform_three_qubit_state() {
        let psi = make_pure(&[2, 2, 2], &[c(1.0); 8]).unwrap();
        for z in psi.amplitudes() {
            assert_abs_diff_eq!(z.norm_sqr(), 0.125, epsilon = 1e-15);
        }
    }

    #[test]
    fn dicke_states() {
        let w = dicke(3, 2).unwrap();
        let expected = 1.0 / 3f64.sqrt();
        // |001⟩, |010⟩, |100⟩
        for idx in 0..8 {
            let want = if [1, 2, 4].contains(&idx) { expected } else { 0.0 };
            assert_abs_diff_eq!(w.amplitudes()[idx].re, want, epsilon = 1e-15);
        }
        let s30 = dicke(3, 0).unwrap();
        assert_abs_diff_eq!(s30.amplitudes()[7].re, 1.0, epsilon = 1e-15);
        let s42 = dicke(4, 2).unwrap();
        let nz: Vec<_> = s42.amplitudes().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nz.len(), 6);
        for z in nz {
            assert_abs_diff_eq!(z.re, 1.0 / 6f64.sqrt(), epsilon = 1e-15);
        }
        assert_eq!(dicke(3, 4), Err(Error::InvalidK { n: 3, k: 4 }));
    }

    #[test]
    fn ghz_states() {
        let g = ghz(3).unwrap();
        assert_abs_diff_eq!(g.amplitudes()[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(g.amplitudes()[7].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        let g5 = ghz(5).unwrap();
        assert_eq!(g5.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 2);
        assert_eq!(g5.amplitudes().len(), 32);
        assert!(ghz(1).is_err());
    }

    #[test]
    fn build_families() {
        let w = build(&FamilySpec::ww(1.0, 0.7).unwrap()).unwrap();
        assert_eq!(w, w_state());

        let half = Complex64::new(0.5f64.sqrt(), 0.0);
        for n in 2..6 {
            let spec = FamilySpec::Superposition {
                terms: vec![
                    Term { coeff: half, state: FamilySpec::Dicke { n, k: 0 } },
                    Term { coeff: half, state: FamilySpec::Dicke { n, k: n } },
                ],
            };
            let built = build(&spec).unwrap();
            let g = ghz(n).unwrap();
            for (a, b) in built.amplitudes().iter().zip(g.amplitudes()) {
                assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
            }
        }

        let g = build(&FamilySpec::wg(0.0, 1.3).unwrap()).unwrap();
        let overlap = g.inner(&ghz(3).unwrap()).unwrap();
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn build_rejects_mixed_dims() {
        let spec = FamilySpec::Superposition {
            terms: vec![
                Term { coeff: c(1.0), state: FamilySpec::Ghz { n: 2 } },
                Term { coeff: c(1.0), state: FamilySpec::Ghz { n: 3 } },
            ],
        };
        assert!(matches!(build(&spec), Err(Error::DimensionMismatch { .. })));
        let cancel = FamilySpec::Superposition {
            terms: vec![
                Term { coeff: c(1.0), state: FamilySpec::Ghz { n: 2 } },
                Term { coeff: c(-1.0), state: FamilySpec::Ghz { n: 2 } },
            ],
        };
        assert_eq!(build(&cancel), Err(Error::ZeroState));
    }

    #[test]
    fn overlap_examples() {
        let plus = vec![c(1.0), c(1.0)];
        let phi = ProductState::uniform(&plus, 3).unwrap();
        assert_abs_diff_eq!(overlap(&phi, &ghz(3).unwrap()).unwrap().re, 0.5, epsilon = 1e-15);

        let zero = ProductState::uniform(&[c(1.0), c(0.0)], 3).unwrap();
        assert_abs_diff_eq!(overlap(&zero, &w_state()).unwrap().norm(), 0.0, epsilon = 1e-15);

        let best = ProductState::uniform(&[c((2.0f64 / 3.0).sqrt()), c((1.0f64 / 3.0).sqrt())], 3).unwrap();
        assert_abs_diff_eq!(overlap(&best, &w_state()).unwrap().re, 2.0 / 3.0, epsilon = 1e-15);

        let short = ProductState::uniform(&plus, 2).unwrap();
        assert!(matches!(overlap(&short, &w_state()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn environment_examples() {
        let (l0, l1) = (0.7f64, 0.3f64);
        let psi = make_pure(&[2, 2], &[c(l0.sqrt()), c(0.0), c(0.0), c(l1.sqrt())]).unwrap();
        let phi = ProductState::new(vec![vec![c(1.0), c(1.0)], vec![c(1.0), c(0.0)]]).unwrap();
        let v = environment(&psi, &phi, 0).unwrap();
        assert_abs_diff_eq!(v[0].re, l0.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].norm(), 0.0, epsilon = 1e-15);

        let plus = ProductState::uniform(&[c(1.0), c(1.0)], 3).unwrap();
        // Normalized |+⟩ factors: each entry is (1/√2)(1/√2)², and ⟨+|v⟩ = 1/2.
        let v = environment(&ghz(3).unwrap(), &plus, 0).unwrap();
        assert_abs_diff_eq!(v[0].re, 0.5 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].re, 0.5 / 2f64.sqrt(), epsilon = 1e-15);

        assert!(matches!(environment(&ghz(3).unwrap(), &plus, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn environment_matches_explicit_sum() {
        // Oracle: explicit loop over all 8 index tuples.
        let w = w_state();
        let f = vec![c((2.0f64 / 3.0).sqrt()), Complex64::new(0.0, (1.0f64 / 3.0).sqrt())];
        let g = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8)];
        let phi = ProductState::new(vec![g.clone(), f.clone(), g.clone()]).unwrap();
        for party in 0..3 {
            let mut expect = [Complex64::new(0.0, 0.0); 2];
            for idx in 0..8usize {
                let digits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
                let mut term = w.amplitudes()[idx];
                for j in 0..3 {
                    if j != party {
                        term *= phi.factor(j)[digits[j]].conj();
                    }
                }
                expect[digits[party]] += term;
            }
            let v = environment(&w, &phi, party).unwrap();
            for p in 0..2 {
                assert_abs_diff_eq!((v[p] - expect[p]).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn family_json_round_trip() {
        let spec = FamilySpec::wg(0.3, 1.1).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: FamilySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
        let raw: PureState = serde_json::from_str(r#"{"dims":[2,2],"amps":[[1,0],[0,0],[0,0],[0,1]]}"#).unwrap();
        assert_abs_diff_eq!(raw.amplitudes()[3].im, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }
}
