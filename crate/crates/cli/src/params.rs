//! Parameter files: flat `key = value` TOML.
//!
//! Values may be TOML numbers or strings; strings such as `"-1/10"` or
//! `"0.3"` are read as exact rationals, floats as their shortest decimal.
//! Besides the nine coefficients the file may carry `seed`, `a_range` and
//! `d_range`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use icoflux_core::algebra::{parse_rational, rational_from_f64};
use icoflux_core::energy::PARAM_NAMES;
use icoflux_core::Rational;

#[derive(Clone, Debug, Default)]
pub struct ParamsFile {
    /// Indexed like `PARAM_NAMES`.
    pub values: [Option<Rational>; 9],
    pub seed: Option<u64>,
    pub a_range: Option<String>,
    pub d_range: Option<String>,
}

fn rational_value(key: &str, v: &toml::Value) -> Result<Rational> {
    match v {
        toml::Value::Integer(n) => Ok(Rational::from_integer((*n).into())),
        toml::Value::Float(x) => rational_from_f64(*x).ok_or_else(|| anyhow!("{key} = {x} is not finite")),
        toml::Value::String(s) => parse_rational(s).ok_or_else(|| anyhow!("{key} = {s:?} is not a number or ratio")),
        other => bail!("{key} must be a number or a string, got {}", other.type_str()),
    }
}

impl ParamsFile {
    pub fn parse(src: &str) -> Result<Self> {
        let table: toml::Table = src.parse().context("parameter file is not valid TOML")?;
        let mut out = ParamsFile::default();
        for (key, v) in &table {
            if let Some(i) = PARAM_NAMES.iter().position(|n| n == key) {
                out.values[i] = Some(rational_value(key, v)?);
                continue;
            }
            match (key.as_str(), v) {
                ("seed", toml::Value::Integer(n)) if *n >= 0 => out.seed = Some(*n as u64),
                ("seed", _) => bail!("seed must be a non-negative integer"),
                ("a_range", toml::Value::String(s)) => out.a_range = Some(s.clone()),
                ("d_range", toml::Value::String(s)) => out.d_range = Some(s.clone()),
                ("a_range" | "d_range", _) => bail!("{key} must be a string start:stop:step"),
                _ => bail!("unknown key {key:?}; expected one of {}, seed, a_range, d_range", PARAM_NAMES.join(", ")),
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&src).with_context(|| format!("in {}", path.display()))
    }

    /// All nine coefficients; `defaults` fills the ones named there.
    pub fn exact(&self, defaults: &[(&str, Rational)]) -> Result<[Rational; 9]> {
        let mut missing = Vec::new();
        let out: [Rational; 9] = std::array::from_fn(|i| {
            self.values[i]
                .clone()
                .or_else(|| defaults.iter().find(|(n, _)| *n == PARAM_NAMES[i]).map(|(_, v)| v.clone()))
                .unwrap_or_else(|| {
                    missing.push(PARAM_NAMES[i]);
                    Rational::from_integer(0.into())
                })
        });
        if !missing.is_empty() {
            bail!("missing parameters: {}", missing.join(", "));
        }
        Ok(out)
    }
}
