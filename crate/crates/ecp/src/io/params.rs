use std::fs;
use std::path::Path;

use ecp_core::calibration::FitParams;

use crate::{Error, FormatError, Location, Result};

/// Parses a JSON parameter file and checks the constants are usable.
pub fn read_params(text: &str) -> std::result::Result<FitParams, FormatError> {
    let params: FitParams = serde_json::from_str(text)
        .map_err(|e| FormatError::Syntax { at: Location::Line(e.line()), message: e.to_string() })?;
    params.validate().map_err(|e| FormatError::Invalid { at: Location::Line(1), message: e.to_string() })?;
    Ok(params)
}

pub fn load_params(path: impl AsRef<Path>) -> Result<FitParams> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_params(&text).map_err(|e| Error::format(path, e))
}

pub fn save_params(path: impl AsRef<Path>, params: &FitParams) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(params).expect("parameters always serialise");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
