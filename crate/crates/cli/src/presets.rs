//! Configurations shipped with the tool.

use std::path::PathBuf;

use crate::error::{CliError, Result};

pub struct Preset {
    pub name: &'static str,
    pub config: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig3",
        config: include_str!("../presets/fig3.toml"),
    },
    Preset {
        name: "fig4",
        config: include_str!("../presets/fig4.toml"),
    },
    Preset {
        name: "beamsplitter-hom",
        config: include_str!("../presets/beamsplitter-hom.toml"),
    },
    Preset {
        name: "qutrit-n3",
        config: include_str!("../presets/qutrit-n3.toml"),
    },
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        CliError::config("preset", format!("unknown preset `{name}`; expected one of {}", names.join(", ")))
    })
}

/// Where the reference outputs of a preset live in the source tree.
pub fn golden_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden").join(name)
}
