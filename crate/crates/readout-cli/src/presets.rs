//! Named run configurations checked into the repository.

/// Preset names and their TOML text.
pub const PRESETS: [(&str, &str); 5] = [
    ("fig4a", include_str!("../configs/fig4a.toml")),
    ("fig5", include_str!("../configs/fig5.toml")),
    ("fig6a", include_str!("../configs/fig6a.toml")),
    ("fig7b", include_str!("../configs/fig7b.toml")),
    ("fig8", include_str!("../configs/fig8.toml")),
];

/// Returns the TOML text of a preset, if the name is known.
pub fn lookup(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(preset, _)| *preset == name)
        .map(|(_, text)| *text)
}

/// Preset names in listing order.
pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Resolved, RunConfig};

    #[test]
    fn every_preset_parses_and_resolves() {
        for (name, text) in PRESETS {
            let config = RunConfig::from_toml(text)
                .unwrap_or_else(|e| panic!("preset {name} failed to parse: {e}"));
            Resolved::from_config(&config)
                .unwrap_or_else(|e| panic!("preset {name} failed to resolve: {e}"));
        }
    }
}
