//! Figure dataset presets shipped in `presets/*.json`.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use crate::config::{parse_config, Experiment};
use crate::run::{run_config, write_csv};

const BUILTIN: [(&str, &str); 7] = [
    ("fig4a", include_str!("../../../presets/fig4a.json")),
    ("fig4b", include_str!("../../../presets/fig4b.json")),
    ("fig4c", include_str!("../../../presets/fig4c.json")),
    ("fig4d", include_str!("../../../presets/fig4d.json")),
    ("fig5", include_str!("../../../presets/fig5.json")),
    ("fig6", include_str!("../../../presets/fig6.json")),
    ("fig7", include_str!("../../../presets/fig7.json")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreset {
    name: String,
    #[serde(default)]
    description: String,
    experiments: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    label: Option<String>,
    config: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub experiments: Vec<(Option<String>, Experiment)>,
}

impl Preset {
    /// Output file name for entry `i`: `<name>.csv` or `<name>_<label>.csv`.
    pub fn file_name(&self, i: usize) -> String {
        match &self.experiments[i].0 {
            Some(label) => format!("{}_{label}.csv", self.name),
            None => format!("{}.csv", self.name),
        }
    }
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

pub fn parse_preset(text: &str) -> Result<Preset> {
    let raw: RawPreset = serde_json::from_str(text).context("preset file")?;
    if raw.experiments.is_empty() {
        bail!("preset '{}': no experiments", raw.name);
    }
    let experiments = raw
        .experiments
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let exp = parse_config(&e.config.to_string())
                .with_context(|| format!("preset '{}' experiment {i}", raw.name))?;
            Ok((e.label, exp))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Preset { name: raw.name, description: raw.description, experiments })
}

/// A built-in preset name or a path to a preset file.
pub fn load_preset(name_or_path: &str) -> Result<Preset> {
    if let Some((_, text)) = BUILTIN.iter().find(|(n, _)| *n == name_or_path) {
        return parse_preset(text);
    }
    let path = Path::new(name_or_path);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_preset(&text);
    }
    let known: Vec<_> = builtin_names().collect();
    Err(anyhow!("unknown preset '{name_or_path}' (built-in: {})", known.join(", ")))
}

/// Runs every experiment of `preset` and writes one CSV each into `dir`.
pub fn run_preset(preset: &Preset, dir: &Path, jobs: usize) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for (i, (_, exp)) in preset.experiments.iter().enumerate() {
        let rows = run_config(exp, jobs)?;
        let path = dir.join(preset.file_name(i));
        let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = std::io::BufWriter::new(file);
        write_csv(&rows, &mut w)?;
        std::io::Write::flush(&mut w)?;
        written.push(path);
    }
    Ok(written)
}
