//! Noise spec strings: `KIND:name=value,...`, e.g. `GAD:q=0.75,gamma=0.4`.
//!
//! Whitespace may replace either separator. `r` is accepted for `gamma`.

use qldp_core::noise::NoiseParams;
use qldp_core::{NoiseKind, NoiseSpec, QldpError};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("empty noise spec")]
    Empty,
    #[error("unknown noise kind `{0}` (expected XF, YF, ZF, Dep, PD, AD, GAD or DepN)")]
    UnknownKind(String),
    #[error("malformed parameter `{0}` (expected name=value)")]
    Malformed(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("parameter `{0}` given twice")]
    Duplicate(String),
    #[error("parameter `{name}` has invalid value `{value}`")]
    BadValue { name: String, value: String },
    #[error(transparent)]
    Invalid(#[from] QldpError),
}

fn set<T>(slot: &mut Option<T>, name: &str, value: T) -> Result<(), SpecError> {
    if slot.replace(value).is_some() {
        return Err(SpecError::Duplicate(name.to_string()));
    }
    Ok(())
}

pub fn parse_noise_spec(text: &str) -> Result<NoiseSpec, SpecError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(SpecError::Empty);
    }
    let (kind, rest) = match text.find(|c: char| c == ':' || c.is_whitespace()) {
        Some(i) => (&text[..i], &text[i + 1..]),
        None => (text, ""),
    };
    let kind = NoiseKind::parse(kind).ok_or_else(|| SpecError::UnknownKind(kind.to_string()))?;
    let mut params = NoiseParams::default();
    for item in rest
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
    {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| SpecError::Malformed(item.to_string()))?;
        let (name, value) = (name.trim(), value.trim());
        let bad = || SpecError::BadValue {
            name: name.to_string(),
            value: value.to_string(),
        };
        match name {
            "p" => set(&mut params.p, name, value.parse().map_err(|_| bad())?)?,
            "q" => set(&mut params.q, name, value.parse().map_err(|_| bad())?)?,
            "gamma" | "r" => set(&mut params.gamma, "gamma", value.parse().map_err(|_| bad())?)?,
            "n" => set(&mut params.n, name, value.parse().map_err(|_| bad())?)?,
            other => return Err(SpecError::UnknownParameter(other.to_string())),
        }
    }
    Ok(NoiseSpec::from_params(kind, params)?)
}
