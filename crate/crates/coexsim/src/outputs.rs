//! Output files: CSV tables for patterns and detection curves, the TOML
//! run report, and the atomic writer they all go through.
//!
//! Every float is printed as `{:.11e}` (12 significant digits) so files
//! are byte-reproducible across runs and platforms and still round-trip
//! through any CSV reader. Writes land in a temporary file that is
//! renamed into place, so a crash never leaves a half-written table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use coexsim_core::beampattern::BeampatternResult;
use coexsim_core::detection::{DetectionCurve, SweepVariable};

use crate::error::{CliError, Result};

/// Write `bytes` to `path` atomically (temp file + rename in the same
/// directory). Creates parent directories as needed.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::InvalidInput(format!("not a file path: {}", path.display())))?;
    let mut tmp = path.to_path_buf();
    tmp.set_file_name(format!("{}.tmp", file_name.to_string_lossy()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Fixed float formatting for all output files: 12 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// Render a swept beampattern as `theta_deg,gain_linear,gain_db` rows.
pub fn beampattern_csv(result: &BeampatternResult) -> String {
    let mut out = String::with_capacity(48 * (result.points.len() + 1));
    out.push_str("theta_deg,gain_linear,gain_db\n");
    for p in &result.points {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_float(p.theta_deg),
            format_float(p.gain),
            format_float(p.gain_db)
        );
    }
    out
}

/// Render a detection curve. The first column is `theta_deg` or `snr_db`
/// depending on what was swept; a `pd_mc` column appears only when the
/// curve carries Monte Carlo values.
pub fn detection_csv(curve: &DetectionCurve) -> String {
    let abscissa = match curve.variable {
        SweepVariable::AngleDeg => "theta_deg",
        SweepVariable::SnrDb => "snr_db",
    };
    let with_mc = curve
        .points
        .first()
        .is_some_and(|p| p.pd_monte_carlo.is_some());
    let mut out = String::with_capacity(48 * (curve.points.len() + 1));
    if with_mc {
        let _ = writeln!(out, "{abscissa},pd_analytic,pd_mc");
    } else {
        let _ = writeln!(out, "{abscissa},pd_analytic");
    }
    for p in &curve.points {
        match (with_mc, p.pd_monte_carlo) {
            (true, Some(mc)) => {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    format_float(p.abscissa),
                    format_float(p.pd_analytic),
                    format_float(mc)
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "{},{}",
                    format_float(p.abscissa),
                    format_float(p.pd_analytic)
                );
            }
        }
    }
    out
}

/// Render interference-suppression ratios as `method,ratio` rows.
pub fn suppression_csv(rows: &[(&str, f64)]) -> String {
    let mut out = String::from("method,ratio\n");
    for (method, ratio) in rows {
        let _ = writeln!(out, "{method},{}", format_float(*ratio));
    }
    out
}

/// Summary of a combined run, serialized to `report.toml`.
///
/// `output_paths` are file names relative to the output directory, so
/// two runs into different directories produce byte-identical reports.
/// Every metric is recomputable from the emitted CSVs.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunReport {
    /// SHA-256 digest of the canonical scenario serialization.
    pub scenario_digest: String,
    /// Named scalar results, sorted by key.
    pub metrics: BTreeMap<String, f64>,
    /// Files this run wrote, relative to the output directory.
    pub output_paths: Vec<String>,
    /// Embedded result checks and whether each held.
    pub checks: BTreeMap<String, bool>,
}

impl RunReport {
    /// Serialize to TOML.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Numeric(format!("report serialization: {e}")))
    }

    /// Parse a report back (used by tests and downstream tooling).
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::InvalidInput(format!("report: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coexsim_core::beampattern::PatternPoint;
    use coexsim_core::detection::DetectionPoint;

    #[test]
    fn float_format_is_twelve_significant_digits() {
        assert_eq!(format_float(0.0), "0.00000000000e0");
        assert_eq!(format_float(1.0), "1.00000000000e0");
        assert_eq!(format_float(-0.05), "-5.00000000000e-2");
        assert_eq!(format_float(12345.6789), "1.23456789000e4");
        // Round-trips through parsing to within half an ulp of the
        // twelfth significant digit.
        let x = 0.123456789012345;
        let back: f64 = format_float(x).parse().unwrap();
        assert!((back - x).abs() <= 5e-12 * x);
    }

    #[test]
    fn beampattern_rows_match_points() {
        let r = BeampatternResult {
            points: vec![
                PatternPoint {
                    theta_deg: -1.0,
                    gain: 0.5,
                    gain_db: -3.0102999566398,
                },
                PatternPoint {
                    theta_deg: 0.0,
                    gain: 1.0,
                    gain_db: 0.0,
                },
            ],
            gaps: vec![],
            steer_angle_deg: 0.0,
            normalization: 1.0,
        };
        let csv = beampattern_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "theta_deg,gain_linear,gain_db");
        assert!(lines[1].starts_with("-1.00000000000e0,5.00000000000e-1,"));
        assert!(lines[2].starts_with("0.00000000000e0,1.00000000000e0,"));
    }

    #[test]
    fn detection_csv_column_layout_follows_the_curve() {
        let analytic_only = DetectionCurve {
            variable: SweepVariable::SnrDb,
            points: vec![DetectionPoint {
                abscissa: -30.0,
                pd_analytic: 1e-3,
                pd_monte_carlo: None,
            }],
        };
        let csv = detection_csv(&analytic_only);
        assert!(csv.starts_with("snr_db,pd_analytic\n"));
        assert_eq!(csv.lines().count(), 2);

        let with_mc = DetectionCurve {
            variable: SweepVariable::AngleDeg,
            points: vec![DetectionPoint {
                abscissa: -7.0,
                pd_analytic: 0.5,
                pd_monte_carlo: Some(0.493),
            }],
        };
        let csv = detection_csv(&with_mc);
        assert!(csv.starts_with("theta_deg,pd_analytic,pd_mc\n"));
        assert!(csv.contains(",4.93000000000e-1"));
    }

    #[test]
    fn report_round_trips_through_toml() {
        let mut metrics = BTreeMap::new();
        metrics.insert("suppression_eigen".to_string(), 3.4e-16);
        let mut checks = BTreeMap::new();
        checks.insert("snr_curves_monotone".to_string(), true);
        let report = RunReport {
            scenario_digest: "ab".repeat(32),
            metrics,
            output_paths: vec!["beampattern_eigen.csv".into()],
            checks,
        };
        let text = report.to_toml().unwrap();
        assert_eq!(RunReport::from_toml(&text).unwrap(), report);
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("t.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        let entries: Vec<_> = std::fs::read_dir(path.parent().unwrap())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(entries, vec![std::ffi::OsString::from("t.csv")]);
    }
}
