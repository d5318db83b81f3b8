use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use dslkit::classifiers::TrainerSpec;
use serde::Serialize;

use crate::Format;

/// Effective settings of one invocation, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    /// Input role → paths as given on the command line.
    pub inputs: BTreeMap<&'static str, Vec<String>>,
    pub output: Option<String>,
    pub format: Option<&'static str>,
    /// `None` for commands that draw no random numbers.
    pub seed: Option<u64>,
    pub generator: Option<&'static str>,
    pub trainer: Option<TrainerSpec>,
    /// Subcommand-specific settings.
    pub settings: serde_json::Value,
}

impl RunConfig {
    pub fn new(subcommand: &'static str) -> Self {
        RunConfig {
            tool: "dslkit",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            inputs: BTreeMap::new(),
            output: None,
            format: None,
            seed: None,
            generator: None,
            trainer: None,
            settings: serde_json::json!({}),
        }
    }

    pub fn input(mut self, role: &'static str, paths: &[PathBuf]) -> Self {
        self.inputs.insert(
            role,
            paths.iter().map(|p| p.display().to_string()).collect(),
        );
        self
    }

    pub fn output(mut self, out: Option<&Path>, format: Option<Format>) -> Self {
        self.output = out.map(|p| p.display().to_string());
        self.format = format.map(format_name);
        self
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self.generator = Some(dslkit::rng::GENERATOR);
        self
    }

    pub fn settings(mut self, settings: serde_json::Value) -> Self {
        self.settings = settings;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run config serialises")
    }
}

pub fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Svg => "svg",
    }
}

/// `{"run_config": .., <key>: body}` as pretty JSON.
pub fn json_report<T: Serialize>(
    config: &RunConfig,
    key: &str,
    body: &T,
) -> anyhow::Result<Vec<u8>> {
    let mut map = serde_json::Map::new();
    map.insert("run_config".into(), serde_json::to_value(config)?);
    map.insert(key.into(), serde_json::to_value(body)?);
    let mut s = serde_json::to_string_pretty(&map)?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Prepends the run config as a `#` comment line.
pub fn csv_with_config(config: &RunConfig, csv: &[u8]) -> Vec<u8> {
    let mut out = format!("# run_config {}\n", config.to_json()).into_bytes();
    out.extend_from_slice(csv);
    out
}

/// Inserts the run config as `<metadata>` right after the opening `<svg>` tag.
pub fn svg_with_config(config: &RunConfig, svg: &[u8]) -> Vec<u8> {
    let svg = String::from_utf8_lossy(svg);
    let escaped = config
        .to_json()
        .replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;");
    let meta = format!("<metadata>{escaped}</metadata>\n");
    match svg.find(">\n") {
        Some(i) => format!("{}{}{}", &svg[..i + 2], meta, &svg[i + 2..]).into_bytes(),
        None => svg.into_owned().into_bytes(),
    }
}

/// Writes to `out`, or stdout when absent.
pub fn write_output(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
