//! Scenario files on disk: TOML in a fixed key order, with a SHA-256
//! content digest over the canonical serialization so reports can assert
//! which scenario produced them.
//!
//! A file describes the [`Scenario`] struct directly — scalar keys first
//! (`target_angle_deg`, `blocked_sector_deg`, `pfa`, `snr_db`, `seed`,
//! `normalization`), then `[radar]`, `[bs]`, `[sweep_grid]` tables and
//! one `[[paths]]` table per propagation path. Unknown keys anywhere are
//! rejected. Path tables hold *incidence* angles in (0°, 180°) measured
//! from the array axis; target, sector, and sweep fields use broadside
//! look angles in [−90°, 90°].

use std::path::Path;

use sha2::{Digest, Sha256};

use coexsim_core::scenario::Scenario;

use crate::error::{CliError, Result};
use crate::outputs::write_atomic;

/// Serialize a scenario in canonical form: struct key order, `toml`'s
/// standard formatting. Byte-identical input to [`scenario_digest`].
pub fn canonical_toml(s: &Scenario) -> Result<String> {
    toml::to_string(s).map_err(|e| CliError::InvalidInput(format!("scenario serialization: {e}")))
}

/// SHA-256 of the canonical serialization, lowercase hex.
pub fn scenario_digest(s: &Scenario) -> Result<String> {
    let text = canonical_toml(s)?;
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        write!(hex, "{byte:02x}").expect("writing to a String cannot fail");
    }
    Ok(hex)
}

/// Parse and validate a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let scenario: Scenario = toml::from_str(&text)
        .map_err(|e| CliError::InvalidInput(format!("{}: {e}", path.display())))?;
    scenario.validate()?;
    Ok(scenario)
}

/// Write a scenario in canonical form (atomically).
pub fn save_scenario(path: &Path, s: &Scenario) -> Result<()> {
    write_atomic(path, canonical_toml(s)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use coexsim_core::scenario::Preset;
    use tempfile::tempdir;

    #[test]
    fn presets_round_trip_byte_identically() {
        let dir = tempdir().unwrap();
        for which in Preset::ALL {
            let s = Scenario::preset(which);
            let path = dir.path().join(format!("{}.toml", which.name()));
            save_scenario(&path, &s).unwrap();
            let loaded = load_scenario(&path).unwrap();
            assert_eq!(loaded, s, "{which:?} changed across a round trip");
            assert_eq!(
                canonical_toml(&loaded).unwrap(),
                canonical_toml(&s).unwrap()
            );
            assert_eq!(
                scenario_digest(&loaded).unwrap(),
                scenario_digest(&s).unwrap()
            );
        }
    }

    #[test]
    fn digest_is_stable_and_content_sensitive() {
        let s = Scenario::preset(Preset::Fig1a);
        let d1 = scenario_digest(&s).unwrap();
        let d2 = scenario_digest(&s).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(d1.len(), 64);
        assert!(d1.chars().all(|c| c.is_ascii_hexdigit()));

        let mut t = s.clone();
        t.snr_db = 19.0;
        assert_ne!(scenario_digest(&t).unwrap(), d1);
        // Different presets digest differently.
        let other = Scenario::preset(Preset::Fig1b);
        assert_ne!(scenario_digest(&other).unwrap(), d1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        let mut text = canonical_toml(&Scenario::preset(Preset::Fig1a)).unwrap();
        text.insert_str(0, "surprise_key = 1\n");
        std::fs::write(&path, text).unwrap();
        let err = load_scenario(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("surprise_key"), "{err}");
    }

    #[test]
    fn invalid_values_are_rejected_after_parsing() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("badval.toml");
        let mut s = Scenario::preset(Preset::Fig1a);
        s.pfa = 2.0;
        std::fs::write(&path, canonical_toml(&s).unwrap()).unwrap();
        let err = load_scenario(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_file_is_invalid_input() {
        let err = load_scenario(Path::new("/definitely/not/here.toml")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
