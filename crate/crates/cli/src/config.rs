//! Flat key=value experiment configuration with command-line overrides.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dqgan_core::datasets::SelectionPolicy;
use dqgan_core::dqnn::NetworkArchitecture;

/// Environment variable providing the default output directory.
pub const OUT_DIR_ENV: &str = "DQGAN_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact exponential updates on perceptron unitaries.
    Exact,
    /// Parameterised-circuit training with finite-difference gradients.
    Circuit,
}

/// One side of the architecture string: layer widths plus an optional `+`
/// marking the enriched circuit layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchSpec {
    pub widths: NetworkArchitecture,
    pub plus: bool,
}

fn parse_arch_side(text: &str) -> Result<ArchSpec> {
    let (body, plus) = match text.strip_suffix('+') {
        Some(rest) => (rest, true),
        None => (text, false),
    };
    let widths = NetworkArchitecture::parse(body)
        .map_err(|e| anyhow!("invalid architecture '{text}': {e}"))?;
    Ok(ArchSpec { widths, plus })
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub generator: ArchSpec,
    pub discriminator: ArchSpec,
    pub dataset: String,
    pub n: usize,
    pub s: usize,
    pub v: usize,
    pub r_t: usize,
    pub r_d: usize,
    pub r_g: usize,
    pub eta: f64,
    pub eta_d: f64,
    pub eta_g: f64,
    pub epsilon: f64,
    pub fd_step: f64,
    pub seed: u64,
    pub selection: SelectionPolicy,
    pub histogram_epochs: Vec<usize>,
    pub sample_count: usize,
    pub out_dir: String,
}

impl ExperimentConfig {
    /// Reads a config file and applies `--set key=value` overrides.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::from_text(&text, overrides)
    }

    pub fn from_text(text: &str, overrides: &[String]) -> Result<Self> {
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key=value, got '{raw}'", lineno + 1))?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        for item in overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("override '{item}': expected key=value"))?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Self::from_entries(entries)
    }

    fn from_entries(mut entries: BTreeMap<String, String>) -> Result<Self> {
        fn take<T: std::str::FromStr>(
            entries: &mut BTreeMap<String, String>,
            key: &str,
            default: T,
        ) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            match entries.remove(key) {
                None => Ok(default),
                Some(raw) => raw
                    .parse()
                    .map_err(|e| anyhow!("config key '{key}': cannot parse '{raw}': {e}")),
            }
        }

        let mode = match entries
            .remove("mode")
            .unwrap_or_else(|| "exact".to_string())
            .as_str()
        {
            "exact" => Mode::Exact,
            "circuit" => Mode::Circuit,
            other => bail!("config key 'mode': expected exact|circuit, got '{other}'"),
        };

        let arch_text = entries
            .remove("architecture")
            .unwrap_or_else(|| "1-1|1-1".to_string());
        let (gen_text, dis_text) = arch_text.split_once('|').ok_or_else(|| {
            anyhow!("config key 'architecture': expected generator|discriminator, got '{arch_text}'")
        })?;
        let generator = parse_arch_side(gen_text)?;
        let discriminator = parse_arch_side(dis_text)?;
        if mode == Mode::Exact && (generator.plus || discriminator.plus) {
            bail!("the '+' architecture variant is only available in circuit mode");
        }
        if generator.widths.output_width() != discriminator.widths.input_width() {
            bail!(
                "incompatible seam: generator output width {} does not match discriminator input width {}",
                generator.widths.output_width(),
                discriminator.widths.input_width()
            );
        }

        let selection = match entries
            .remove("selection")
            .unwrap_or_else(|| "random".to_string())
            .as_str()
        {
            "random" => SelectionPolicy::Random,
            "equally_spaced" => SelectionPolicy::EquallySpaced,
            other => bail!("config key 'selection': expected random|equally_spaced, got '{other}'"),
        };

        let histogram_epochs = match entries.remove("histogram_epochs") {
            None => Vec::new(),
            Some(raw) if raw.is_empty() => Vec::new(),
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| anyhow!("config key 'histogram_epochs': '{s}': {e}"))
                })
                .collect::<Result<Vec<usize>>>()?,
        };

        let out_dir = match entries.remove("out_dir") {
            Some(dir) => dir,
            None => std::env::var(OUT_DIR_ENV).unwrap_or_else(|_| ".".to_string()),
        };

        let config = Self {
            mode,
            generator,
            discriminator,
            dataset: take(&mut entries, "dataset", "data_line".to_string())?,
            n: take(&mut entries, "n", 50)?,
            s: take(&mut entries, "s", 10)?,
            v: take(&mut entries, "v", 100)?,
            r_t: take(&mut entries, "r_t", 1000)?,
            r_d: take(&mut entries, "r_d", 1)?,
            r_g: take(&mut entries, "r_g", 1)?,
            eta: take(&mut entries, "eta", 1.0)?,
            eta_d: take(&mut entries, "eta_d", 0.5)?,
            eta_g: take(&mut entries, "eta_g", 0.1)?,
            epsilon: take(&mut entries, "epsilon", 0.01)?,
            fd_step: take(&mut entries, "fd_step", 0.001)?,
            seed: take(&mut entries, "seed", 1)?,
            selection,
            histogram_epochs,
            sample_count: take(&mut entries, "sample_count", 100)?,
            out_dir,
        };

        if let Some(key) = entries.keys().next() {
            bail!("unknown config key '{key}'");
        }
        Ok(config)
    }

    /// Echo of every resolved setting, written next to the run artifacts.
    pub fn resolved_text(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            Mode::Exact => "exact",
            Mode::Circuit => "circuit",
        };
        let arch = format!(
            "{}{}|{}{}",
            self.generator
                .widths
                .layer_widths()
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join("-"),
            if self.generator.plus { "+" } else { "" },
            self.discriminator
                .widths
                .layer_widths()
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join("-"),
            if self.discriminator.plus { "+" } else { "" },
        );
        let selection = match self.selection {
            SelectionPolicy::Random => "random",
            SelectionPolicy::EquallySpaced => "equally_spaced",
        };
        let epochs = self
            .histogram_epochs
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "mode={mode}").unwrap();
        writeln!(out, "architecture={arch}").unwrap();
        writeln!(out, "dataset={}", self.dataset).unwrap();
        writeln!(out, "n={}", self.n).unwrap();
        writeln!(out, "s={}", self.s).unwrap();
        writeln!(out, "v={}", self.v).unwrap();
        writeln!(out, "r_t={}", self.r_t).unwrap();
        writeln!(out, "r_d={}", self.r_d).unwrap();
        writeln!(out, "r_g={}", self.r_g).unwrap();
        writeln!(out, "eta={}", self.eta).unwrap();
        writeln!(out, "eta_d={}", self.eta_d).unwrap();
        writeln!(out, "eta_g={}", self.eta_g).unwrap();
        writeln!(out, "epsilon={}", self.epsilon).unwrap();
        writeln!(out, "fd_step={}", self.fd_step).unwrap();
        writeln!(out, "seed={}", self.seed).unwrap();
        writeln!(out, "selection={selection}").unwrap();
        writeln!(out, "histogram_epochs={epochs}").unwrap();
        writeln!(out, "sample_count={}", self.sample_count).unwrap();
        writeln!(out, "out_dir={}", self.out_dir).unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_the_exact_experiment() {
        let config = ExperimentConfig::from_text("", &[]).unwrap();
        assert_eq!(config.mode, Mode::Exact);
        assert_eq!(config.n, 50);
        assert_eq!(config.s, 10);
        assert_eq!(config.r_t, 1000);
        assert_eq!(config.eta, 1.0);
        assert_eq!(config.epsilon, 0.01);
        assert_eq!(config.generator.widths.layer_widths(), &[1, 1]);
    }

    #[test]
    fn overrides_win_over_file_values() {
        let config =
            ExperimentConfig::from_text("seed=1\nr_t=5\n", &["seed=9".to_string()]).unwrap();
        assert_eq!(config.seed, 9);
        assert_eq!(config.r_t, 5);
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let err = ExperimentConfig::from_text("seed=1\nnot a pair\n", &[]).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn seam_mismatch_names_both_widths() {
        let err = ExperimentConfig::from_text("architecture=1-2|1-1\n", &[]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("output width 2") && msg.contains("input width 1"), "{msg}");
    }

    #[test]
    fn plus_variant_requires_circuit_mode() {
        assert!(ExperimentConfig::from_text("architecture=1-1+|1-1+\n", &[]).is_err());
        let config =
            ExperimentConfig::from_text("mode=circuit\narchitecture=1-1+|1-1+\n", &[]).unwrap();
        assert!(config.generator.plus && config.discriminator.plus);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_text("bogus=1\n", &[]).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let config =
            ExperimentConfig::from_text("# comment\n\nseed=4\nhistogram_epochs=300,800\n", &[])
                .unwrap();
        assert_eq!(config.seed, 4);
        assert_eq!(config.histogram_epochs, vec![300, 800]);
    }

    #[test]
    fn resolved_text_round_trips() {
        let config = ExperimentConfig::from_text(
            "mode=circuit\narchitecture=1-1+|1-1+\nselection=equally_spaced\nout_dir=/tmp/x\n",
            &[],
        )
        .unwrap();
        let echoed = ExperimentConfig::from_text(&config.resolved_text(), &[]).unwrap();
        assert_eq!(echoed.resolved_text(), config.resolved_text());
    }
}
