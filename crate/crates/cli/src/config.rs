//! Run configuration: JSON document plus command-line overrides.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use dklattice::lattice::LatticeSpec;
use serde::{Deserialize, Serialize};

/// Flags shared by every subcommand. Each one overrides the matching field
/// of the JSON config when present.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// JSON configuration file; explicit flags take precedence over it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Lattice extents, comma separated.
    #[arg(long, value_name = "N0,N1,N2,N3")]
    pub lattice: Option<String>,

    /// Boundary closure: `periodic` or `ghost`.
    #[arg(long, value_name = "MODE")]
    pub boundary: Option<String>,

    /// Mass parameter; repeat the flag to check several masses.
    #[arg(long = "mass", value_name = "REAL")]
    pub masses: Vec<f64>,

    /// Seed of the random form generator.
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,

    /// Pass/fail tolerance for the floating-point checks.
    #[arg(long, value_name = "REAL")]
    pub tol: Option<f64>,

    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// The resolved configuration every command runs against.
#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub lattice: [usize; 4],
    pub boundary: String,
    pub masses: Vec<f64>,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lattice: [3, 3, 3, 3],
            boundary: "periodic".to_owned(),
            masses: vec![0.5, 1.0, 2.0],
            seed: 42,
            tol: 1e-12,
            out: None,
        }
    }
}

impl RunConfig {
    /// Load the JSON config (if any) and fold in the flag overrides.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let mut config = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str::<RunConfig>(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(spec) = &args.lattice {
            config.lattice = parse_extents(spec)?;
        }
        if let Some(mode) = &args.boundary {
            config.boundary = mode.clone();
        }
        if !args.masses.is_empty() {
            config.masses = args.masses.clone();
        }
        if let Some(seed) = args.seed {
            config.seed = seed;
        }
        if let Some(tol) = args.tol {
            config.tol = tol;
        }
        if let Some(out) = &args.out {
            config.out = Some(out.clone());
        }
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.lattice.iter().any(|&n| n < 1) {
            bail!("lattice extents must all be at least 1, got {:?}", self.lattice);
        }
        if !(self.tol >= 0.0) {
            bail!("tol must be a non-negative real, got {}", self.tol);
        }
        match self.boundary.as_str() {
            "periodic" | "ghost" => Ok(()),
            other => bail!("boundary must be `periodic` or `ghost`, got `{other}`"),
        }
    }

    pub fn lattice_spec(&self) -> LatticeSpec {
        match self.boundary.as_str() {
            "periodic" => LatticeSpec::periodic(self.lattice),
            "ghost" => LatticeSpec::ghost(self.lattice, 1),
            _ => unreachable!("validated on resolve"),
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == "periodic"
    }
}

fn parse_extents(spec: &str) -> Result<[usize; 4]> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        bail!("--lattice expects four comma-separated extents, got `{spec}`");
    }
    let mut extents = [0usize; 4];
    for (slot, text) in extents.iter_mut().zip(parts) {
        *slot = text
            .trim()
            .parse()
            .with_context(|| format!("invalid lattice extent `{text}`"))?;
    }
    Ok(extents)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extents_parse_and_reject() {
        assert_eq!(parse_extents("2,3,4,5").unwrap(), [2, 3, 4, 5]);
        assert!(parse_extents("2,3,4").is_err());
        assert!(parse_extents("2,3,4,x").is_err());
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"seed": 1, "sneed": 2}"#);
        assert!(err.is_err());
    }

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }
}
