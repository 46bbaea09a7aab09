//! State files and output helpers.
//!
//! A state file is a JSON object in one of three shapes:
//!
//! * `{"dims": [2, 2], "amps": [[re, im], ...]}`: a pure state, row-major amplitudes;
//! * `{"dims": [2, 2], "matrix": [[[re, im], ...], ...]}`: a density matrix, rows first;
//! * `{"family": {"type": ..., ...}}`: a pure family (`dicke`, `ghz`,
//!   `superposition`, `raw`) or a mixed family (`werner`, `isotropic`, `dicke_mixture`).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mixed::{dicke_mixture, make_isotropic, make_werner, DensityMatrix, RawDensity};
use crate::states::{build, FamilySpec, PureState, RawState};

/// Mixed-state families with closed-form or hull solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MixedFamily {
    Werner { d: usize, f: f64 },
    Isotropic {
        d: usize,
        #[serde(rename = "F")]
        fidelity: f64,
    },
    DickeMixture { n: usize, k1: usize, k2: usize, r: f64 },
}

impl MixedFamily {
    pub fn density(&self) -> Result<DensityMatrix> {
        match *self {
            MixedFamily::Werner { d, f } => make_werner(d, f),
            MixedFamily::Isotropic { d, fidelity } => make_isotropic(d, fidelity),
            MixedFamily::DickeMixture { n, k1, k2, r } => dicke_mixture(n, k1, k2, r),
        }
    }
}

/// A parsed and validated state file.
#[derive(Debug, Clone)]
pub enum StateInput {
    Pure { state: PureState, family: Option<FamilySpec> },
    Mixed { rho: DensityMatrix, family: Option<MixedFamily> },
}

impl StateInput {
    pub fn from_family(spec: FamilySpec) -> Result<Self> {
        Ok(StateInput::Pure { state: build(&spec)?, family: Some(spec) })
    }

    pub fn from_mixed_family(family: MixedFamily) -> Result<Self> {
        Ok(StateInput::Mixed { rho: family.density()?, family: Some(family) })
    }
}

fn shape_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Reads a state from JSON text. Malformed JSON or a wrong shape gives
/// [`Error::Parse`]; a well-formed but invalid state gives the validation error.
pub fn parse_state(text: &str) -> Result<StateInput> {
    let value: Value = serde_json::from_str(text).map_err(shape_error)?;
    let obj = value.as_object().ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    if let Some(family) = obj.get("family") {
        let tag = family.get("type").and_then(Value::as_str).unwrap_or_default();
        return if matches!(tag, "werner" | "isotropic" | "dicke_mixture") {
            let fam: MixedFamily = serde_json::from_value(family.clone()).map_err(shape_error)?;
            Ok(StateInput::from_mixed_family(fam)?)
        } else {
            let spec = serde_json::from_value::<FamilySpec>(family.clone()).map_err(shape_error)?;
            Ok(StateInput::from_family(spec)?)
        };
    }
    if obj.contains_key("matrix") {
        let raw: RawDensity = serde_json::from_value(value).map_err(shape_error)?;
        return Ok(StateInput::Mixed { rho: DensityMatrix::try_from(raw)?, family: None });
    }
    if obj.contains_key("amps") {
        let raw: RawState = serde_json::from_value(value).map_err(shape_error)?;
        return Ok(StateInput::Pure { state: PureState::try_from(raw)?, family: None });
    }
    Err(Error::Parse("expected one of the keys \"amps\", \"matrix\" or \"family\"".into()))
}

pub fn read_state(path: &Path) -> Result<StateInput> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_state(&text)
}

/// Writes `contents`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)
}
