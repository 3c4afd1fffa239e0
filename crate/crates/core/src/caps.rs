//! Resource caps that keep every enumeration at desk scale.
//!
//! The defaults can be overridden programmatically or through the
//! `GRASSMANN_LAB_CAPS` environment variable, whose value is a comma
//! separated list of `key=value` pairs, e.g. `q=32,n=10,vertices=200000`.

use crate::error::{Error, Result};

pub const CAPS_ENV: &str = "GRASSMANN_LAB_CAPS";

/// Largest field order representable by the byte-encoded elements.
pub const HARD_MAX_Q: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_q: u32,
    pub max_n: usize,
    /// Upper bound on the number of subspaces a single enumeration may materialize.
    pub max_vertices: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_q: 16,
            max_n: 8,
            max_vertices: 2_000_000,
        }
    }
}

impl Caps {
    /// Parses an override string on top of the defaults.
    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::schema(CAPS_ENV, format!("expected key=value, got `{item}`")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::schema(CAPS_ENV, format!("`{value}` is not an unsigned integer")))?;
            match key.trim() {
                "q" => {
                    if value < 2 || value > HARD_MAX_Q as u64 {
                        return Err(Error::schema(CAPS_ENV, format!("q cap must be in 2..={HARD_MAX_Q}")));
                    }
                    caps.max_q = value as u32;
                }
                "n" => {
                    if value == 0 || value > 64 {
                        return Err(Error::schema(CAPS_ENV, "n cap must be in 1..=64"));
                    }
                    caps.max_n = value as usize;
                }
                "vertices" => caps.max_vertices = value,
                other => return Err(Error::schema(CAPS_ENV, format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    /// Defaults, overridden by the environment variable when it is set.
    pub fn from_env() -> Result<Caps> {
        match std::env::var(CAPS_ENV) {
            Ok(s) => Caps::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::CapExceeded(format!(
                "ambient dimension {n} exceeds cap {}",
                self.max_n
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let caps = Caps::parse("q=32, n=10").unwrap();
        assert_eq!(caps.max_q, 32);
        assert_eq!(caps.max_n, 10);
        assert_eq!(caps.max_vertices, Caps::default().max_vertices);
        assert_eq!(Caps::parse("").unwrap(), Caps::default());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Caps::parse("q").is_err());
        assert!(Caps::parse("q=abc").is_err());
        assert!(Caps::parse("q=1000").is_err());
        assert!(Caps::parse("depth=3").is_err());
    }
}
