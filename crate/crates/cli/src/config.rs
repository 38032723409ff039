use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use fuzzyqm::deuteron::{PhysicalConstants, SmearingChoice, VariationalOptions};

/// Smearing mass used by the fuzzy deuteron variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmearingSetting {
    /// Calibrate over the candidate masses.
    Auto,
    Fixed(SmearingChoice),
}

impl SmearingSetting {
    fn parse(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "auto" => Self::Auto,
            "nucleon" => Self::Fixed(SmearingChoice::Nucleon),
            "reduced" => Self::Fixed(SmearingChoice::Reduced),
            _ => bail!("smearing must be auto, nucleon or reduced, got {s:?}"),
        })
    }

    fn name(self) -> &'static str {
        match self {
            Self::Auto => "auto",
            Self::Fixed(SmearingChoice::Nucleon) => "nucleon",
            Self::Fixed(SmearingChoice::Reduced) => "reduced",
        }
    }
}

/// Effective run configuration: defaults overridden by the `--config` file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub smearing: SmearingSetting,
    pub variational: VariationalOptions,
    pub oscillator_points: usize,
    /// Multiplier on the oscillator's default momentum cutoff.
    pub oscillator_cutoff_scale: f64,
    pub commutator_base: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::default(),
            smearing: SmearingSetting::Auto,
            variational: VariationalOptions::default(),
            oscillator_points: 1024,
            oscillator_cutoff_scale: 1.0,
            commutator_base: 128,
        }
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> anyhow::Result<T> {
    value.parse().map_err(|_| anyhow::anyhow!("{key}: cannot parse {value:?}"))
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value", lineno + 1);
            };
            cfg.set(key.trim(), value.trim()).with_context(|| format!("line {}", lineno + 1))?;
        }
        cfg.constants.validate()?;
        if cfg.variational.alpha_lo <= 0.0 || cfg.variational.alpha_hi <= cfg.variational.alpha_lo {
            bail!("alpha_lo must be positive and below alpha_hi");
        }
        if cfg.oscillator_cutoff_scale <= 0.0 {
            bail!("oscillator_cutoff_scale must be positive");
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> anyhow::Result<()> {
        let c = &mut self.constants;
        match key {
            "hbar_c" => c.hbar_c = number(key, value)?,
            "m_proton" => c.m_proton = number(key, value)?,
            "m_neutron" => c.m_neutron = number(key, value)?,
            "e0_binding" => c.e0_binding = number(key, value)?,
            "m_sigma" => c.m_sigma = number(key, value)?,
            "m_omega" => c.m_omega = number(key, value)?,
            "m_pi" => c.m_pi = number(key, value)?,
            "g_sigma_phenom_sq_over_4pi" => c.g_sigma_phenom_sq_over_4pi = number(key, value)?,
            "g_omega_phenom_sq_over_4pi" => c.g_omega_phenom_sq_over_4pi = number(key, value)?,
            "smearing" => self.smearing = SmearingSetting::parse(value)?,
            "alpha_lo" => self.variational.alpha_lo = number(key, value)?,
            "alpha_hi" => self.variational.alpha_hi = number(key, value)?,
            "alpha_scan_points" => self.variational.scan_points = number(key, value)?,
            "oscillator_points" => self.oscillator_points = number(key, value)?,
            "oscillator_cutoff_scale" => self.oscillator_cutoff_scale = number(key, value)?,
            "commutator_base" => self.commutator_base = number(key, value)?,
            _ => bail!("unknown config key {key:?}"),
        }
        Ok(())
    }

    /// Every key with its effective value, in a fixed order.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let c = &self.constants;
        vec![
            ("hbar_c", c.hbar_c.to_string()),
            ("m_proton", c.m_proton.to_string()),
            ("m_neutron", c.m_neutron.to_string()),
            ("e0_binding", c.e0_binding.to_string()),
            ("m_sigma", c.m_sigma.to_string()),
            ("m_omega", c.m_omega.to_string()),
            ("m_pi", c.m_pi.to_string()),
            ("g_sigma_phenom_sq_over_4pi", c.g_sigma_phenom_sq_over_4pi.to_string()),
            ("g_omega_phenom_sq_over_4pi", c.g_omega_phenom_sq_over_4pi.to_string()),
            ("smearing", self.smearing.name().to_string()),
            ("alpha_lo", self.variational.alpha_lo.to_string()),
            ("alpha_hi", self.variational.alpha_hi.to_string()),
            ("alpha_scan_points", self.variational.scan_points.to_string()),
            ("oscillator_points", self.oscillator_points.to_string()),
            ("oscillator_cutoff_scale", self.oscillator_cutoff_scale.to_string()),
            ("commutator_base", self.commutator_base.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_and_comments() {
        let cfg = RunConfig::parse("# constants\nhbar_c = 197.78\n\nsmearing=reduced # fixed\n").unwrap();
        assert_eq!(cfg.constants.hbar_c, 197.78);
        assert_eq!(cfg.smearing, SmearingSetting::Fixed(SmearingChoice::Reduced));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("hbar = 1").is_err());
        assert!(RunConfig::parse("hbar_c").is_err());
        assert!(RunConfig::parse("hbar_c = abc").is_err());
        assert!(RunConfig::parse("e0_binding = 2.0").is_err());
        assert!(RunConfig::parse("alpha_lo = 5\nalpha_hi = 1").is_err());
    }

    #[test]
    fn pairs_round_trip() {
        let cfg = RunConfig::parse("m_sigma = 600\ncommutator_base = 64").unwrap();
        let text: String = cfg.pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let back = RunConfig::parse(&text).unwrap();
        assert_eq!(back.pairs(), cfg.pairs());
    }
}
