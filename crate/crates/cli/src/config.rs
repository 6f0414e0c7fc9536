use std::path::PathBuf;

use anyhow::{bail, Context};
use congruence_tower::congruence::CongruenceKind;
use congruence_tower::matgroup::{GroupContext, Mat2};
use congruence_tower::presets::Preset;
use congruence_tower::quadfield::FieldSpec;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StrategyFlag {
    SmallestSplit,
    DirectInterval,
}

/// Everything a run depends on. Loaded from TOML, overridden by flags, and
/// embedded verbatim in every JSON report so the run can be replayed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub d: Option<u64>,
    pub generators: Vec<String>,
    pub c_prime: f64,
    pub systole: f64,
    pub geodesic_count_exponent: f64,
    /// Index of the chosen finite-index subgroup in the Bianchi group.
    pub d_index: u64,
    /// Covolume of the base quotient; defaults to the preset's value.
    pub v0: Option<f64>,
    pub epsilon: f64,
    pub depth: usize,
    pub cutoff: f64,
    pub levels: usize,
    pub strategy: StrategyFlag,
    pub kind: CongruenceKind,
    pub kinds: Vec<CongruenceKind>,
    /// Ideals as `p` or `p:r`, factors joined by `*`.
    pub ideals: Vec<String>,
    pub primes: Vec<u64>,
    pub limit: u64,
    pub c1: f64,
    pub tolerance: f64,
    pub density_tolerance: f64,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: None,
            d: None,
            generators: Vec::new(),
            c_prime: 1.0,
            systole: 1.0,
            geodesic_count_exponent: 2.0,
            d_index: 1,
            v0: None,
            epsilon: 0.05,
            depth: 6,
            cutoff: 2.0,
            levels: 1,
            strategy: StrategyFlag::SmallestSplit,
            kind: CongruenceKind::Hecke0,
            kinds: CongruenceKind::ALL.to_vec(),
            ideals: Vec::new(),
            primes: Vec::new(),
            limit: 100_000,
            c1: congruence_tower::tower::DEFAULT_C1,
            tolerance: congruence_tower::tower::DISPLACEMENT_TOLERANCE,
            density_tolerance: 0.02,
            threads: None,
            output: None,
            csv: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(s: &str) -> anyhow::Result<Self> {
        toml::from_str(s).context("malformed config")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serialisable")
    }

    pub fn field(&self) -> anyhow::Result<FieldSpec> {
        match (self.d, self.preset) {
            (Some(d), Some(p)) if p.field().d() != d => {
                bail!("d = {d} conflicts with preset {p} over d = {}", p.field().d())
            }
            (Some(d), _) => Ok(FieldSpec::new(d)?),
            (None, Some(p)) => Ok(p.field()),
            (None, None) => bail!("no field: set d or a preset"),
        }
    }

    /// Explicit generators take precedence over the preset's.
    pub fn context(&self) -> anyhow::Result<GroupContext> {
        let field = self.field()?;
        let strings: Vec<String> = if !self.generators.is_empty() {
            self.generators.clone()
        } else if let Some(p) = self.preset {
            p.generator_strings().iter().map(|s| s.to_string()).collect()
        } else {
            bail!("empty generator list: give generators or a preset");
        };
        let gens = strings
            .iter()
            .map(|s| Mat2::parse(field, s).with_context(|| format!("generator {s}")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(GroupContext::new(field, gens)?
            .with_c_prime(self.c_prime)?
            .with_systole(self.systole)?
            .with_geodesic_count_exponent(self.geodesic_count_exponent)?)
    }

    pub fn covolume(&self) -> anyhow::Result<f64> {
        match (self.v0, self.preset) {
            (Some(v), _) => Ok(v),
            (None, Some(p)) if self.generators.is_empty() => Ok(p.covolume()),
            _ => bail!("v0 (base covolume) is required without a preset"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_roundtrip() {
        let src = r#"
            preset = "figure8"
            epsilon = 0.1
            kinds = ["principal", "hecke1"]
            ideals = ["5*13:8"]
        "#;
        let c = RunConfig::from_toml(src).unwrap();
        let text = c.to_toml();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
        assert_eq!(RunConfig::from_toml(&text).unwrap().to_toml(), text);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn generators_required() {
        let c = RunConfig { d: Some(1), ..Default::default() };
        assert!(c.context().is_err());
        let p = RunConfig { preset: Some(Preset::Picard), ..Default::default() };
        assert_eq!(p.context().unwrap().generators().len(), 3);
        assert_eq!(p.covolume().unwrap(), Preset::Picard.covolume());
    }
}
