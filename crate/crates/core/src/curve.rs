//! Sampled entanglement curves and their CSV form.

use crate::error::{Error, Result};

/// Ordered `(parameter, E_sin²)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    params: Vec<f64>,
    values: Vec<f64>,
    convexified: bool,
}

impl Curve {
    pub fn new(params: Vec<f64>, values: Vec<f64>, convexified: bool) -> Result<Self> {
        if params.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: params.len(), got: values.len() });
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::UnsortedInput);
        }
        Ok(Curve { params, values, convexified })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_convexified(&self) -> bool {
        self.convexified
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// `√(1 − E)`, the entanglement eigenvalue for pure-state curves.
    pub fn lambdas(&self) -> Vec<f64> {
        self.values.iter().map(|e| (1.0 - e).max(0.0).sqrt()).collect()
    }

    /// CSV with header `param,e_sin2,lambda`, LF line endings, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,e_sin2,lambda\n");
        for ((p, e), l) in self.params.iter().zip(&self.values).zip(self.lambdas()) {
            out.push_str(&format!("{},{},{}\n", fmt_sig(*p), fmt_sig(*e), fmt_sig(l)));
        }
        out
    }
}

/// Uniform grid of `points` values on `[0, 1]`.
pub fn unit_grid(points: usize) -> Result<Vec<f64>> {
    if points < 3 {
        return Err(Error::DegenerateGrid(points));
    }
    Ok((0..points).map(|i| i as f64 / (points - 1) as f64).collect())
}

/// Formats `x` with 12 significant digits, `%g` style.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
