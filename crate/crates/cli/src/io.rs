use std::fs;
use std::io::{self, Read};
use std::path::Path;

use rootcont_core::{Polynomial, Scalar};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("{path}: invalid polynomial JSON: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid scalar {0:?}: expected RE,IM")]
    Scalar(String),
}

/// Reads `{"coeffs": [[re, im], ...]}` from a file, or from stdin for `-`.
pub fn read_polynomial(path: &Path) -> Result<Polynomial, IoError> {
    let shown = path.display().to_string();
    let text = if shown == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| IoError::Read { path: shown.clone(), source })?;
        s
    } else {
        fs::read_to_string(path).map_err(|source| IoError::Read { path: shown.clone(), source })?
    };
    parse_polynomial(&text).map_err(|source| IoError::Parse { path: shown, source })
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial, serde_json::Error> {
    serde_json::from_str(text)
}

/// Parses `RE,IM` (or a bare `RE`).
pub fn parse_scalar(s: &str) -> Result<Scalar, IoError> {
    let bad = || IoError::Scalar(s.to_string());
    let mut parts = s.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Scalar::new(re, im))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}
