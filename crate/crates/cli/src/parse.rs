//! Flag value parsers: seven-vectors and tolerance overrides.

use anyhow::{anyhow, bail, Result};
use g52::lie::DIM;
use g52::verify::Tolerances;

/// Seven comma-separated decimals in basis order `X1..X5, X, Y`.
pub fn vector(s: &str) -> Result<[f64; DIM]> {
    let mut out = [0.0; DIM];
    let mut pos = 0;
    let mut count = 0;
    for item in s.split(',') {
        if count == DIM {
            bail!("parse error at position {pos}: expected {DIM} components, found more");
        }
        let t = item.trim();
        out[count] = t
            .parse()
            .map_err(|_| anyhow!("parse error at position {pos}: invalid number {t:?}"))?;
        count += 1;
        pos += item.len() + 1;
    }
    if count != DIM {
        bail!("parse error at position {}: expected {DIM} components, found {count}", s.len());
    }
    Ok(out)
}

/// `key=value{,key=value}` applied over the defaults.
pub fn tolerances(s: &str) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    let mut pos = 0;
    for item in s.split(',') {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            anyhow!(
                "parse error at position {pos}: expected key=value, found {item:?}; keys: {}",
                Tolerances::KEYS.join(", ")
            )
        })?;
        let vpos = pos + key.len() + 1;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| anyhow!("parse error at position {vpos}: invalid number {value:?}"))?;
        tol.set(key.trim(), value)?;
        pos += item.len() + 1;
    }
    Ok(tol)
}
