use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recognizer::GateSignal;
use crate::teleport::BellOutcome;

/// One feedback cycle's observables. Scenario-specific fields stay unset
/// where they do not apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub cycle: u32,
    pub fidelity_to_target: f64,
    pub bell_outcome: Option<BellOutcome>,
    #[serde(rename = "max_distance")]
    pub recognizer_max_distance: Option<f64>,
    pub gate_signal: Option<GateSignal>,
    pub actuator_applied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown export format '{other}', expected csv or json"
            ))),
        }
    }
}

/// Format a float with 9 significant digits, plain decimal notation.
pub fn format_sig9(value: f64) -> String {
    if value == 0.0 {
        return "0.00000000".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 30) as usize;
    format!("{value:.decimals$}")
}

fn round_sig9(value: f64) -> f64 {
    format_sig9(value).parse().expect("formatter emits valid floats")
}

/// Render records as CSV with the fixed column set
/// `cycle,fidelity_to_target,bell_outcome,max_distance,gate_signal,actuator_applied`.
/// Inapplicable fields are left empty; floats carry 9 significant digits.
pub fn render_csv(records: &[TrajectoryRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let mut out = String::from(
        "cycle,fidelity_to_target,bell_outcome,max_distance,gate_signal,actuator_applied\n",
    );
    for r in records {
        let outcome = r.bell_outcome.map(|o| o.label()).unwrap_or("");
        let distance = r
            .recognizer_max_distance
            .map(format_sig9)
            .unwrap_or_default();
        let signal = r
            .gate_signal
            .map(|s| s.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.cycle,
            format_sig9(r.fidelity_to_target),
            outcome,
            distance,
            signal,
            r.actuator_applied
        ));
    }
    Ok(out)
}

/// Render records as a JSON array with the same field names as the CSV
/// columns. Floats are rounded to 9 significant digits before encoding, so
/// parsing the output reproduces the encoded records exactly.
pub fn render_json(records: &[TrajectoryRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let rounded: Vec<TrajectoryRecord> = records
        .iter()
        .map(|r| TrajectoryRecord {
            fidelity_to_target: round_sig9(r.fidelity_to_target),
            recognizer_max_distance: r.recognizer_max_distance.map(round_sig9),
            ..r.clone()
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rounded)?;
    text.push('\n');
    Ok(text)
}

/// Parse records back from JSON.
pub fn parse_json(text: &str) -> Result<Vec<TrajectoryRecord>> {
    Ok(serde_json::from_str(text)?)
}

/// Write records to `path` in the requested format.
pub fn export_trajectory(
    records: &[TrajectoryRecord],
    format: ExportFormat,
    path: &Path,
) -> Result<()> {
    let rendered = match format {
        ExportFormat::Csv => render_csv(records)?,
        ExportFormat::Json => render_json(records)?,
    };
    std::fs::write(path, rendered)?;
    Ok(())
}
