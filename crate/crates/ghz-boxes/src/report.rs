//! Structured run reports behind the command-line front end.
//!
//! Every command produces a [`RunReport`]: the command name, its inputs, a
//! structured output block, and the `paper_anchor` naming the published
//! equation or figure the run reproduces. Reports serialize to JSON with
//! sorted keys, so identical inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boxbasis::Basis;
use crate::doublewell::{emit_figure_data, write_csv, Figure, OVERLAP_THRESHOLD};
use crate::entangler::{ghz_expansion, ghz_state, two_box_correlated, Expansion};
use crate::epr::{
    contradiction_check, derive_pair_rule, lhv_scan_with, parity_certificate,
    reality_distributions, ConstraintFamily, PairRule,
};
use crate::error::{Error, Result};
use crate::measurement::{
    outcome_probabilities, predict_remaining, sample_measure_with, MeasurementRecord,
};
use crate::qstate::{BoxId, BoxState};

/// Envelope shared by every command.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: Value,
    pub paper_anchor: String,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only JSON-safe values")
    }
}

fn complex_value(c: Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

fn expansion_value(expansion: &Expansion) -> Value {
    let terms: Vec<Value> = expansion
        .terms
        .iter()
        .map(|term| {
            json!({
                "labels": term.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "coefficient": complex_value(term.coefficient),
                "modulus": term.coefficient.norm(),
            })
        })
        .collect();
    json!({
        "frames": expansion.frames.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "terms": terms,
        "surviving_terms": expansion.terms.len(),
        "raw_products": expansion.raw_products,
        "cancelled_labels": expansion.cancelled_labels,
    })
}

fn expand_anchor(frames: &[Basis; 3]) -> &'static str {
    if *frames == [Basis::Position; 3] {
        "Eq. (3a) first"
    } else if *frames == [Basis::Bonding, Basis::Bonding, Basis::Position] {
        "Eq. (3a) second"
    } else if *frames == [Basis::Phase; 3] {
        "Eq. (3)"
    } else {
        "Eq. (3), general frame expansion"
    }
}

/// `expand`: the entangled state multiplied out into per-box frames, from
/// its defining two-term phase form.
pub fn expand_report(frames: [Basis; 3], tolerance: f64) -> RunReport {
    let expansion = ghz_expansion(&frames, tolerance);
    let mut inputs = BTreeMap::new();
    inputs.insert(
        "frames".to_string(),
        json!(frames.iter().map(|f| f.to_string()).collect::<Vec<_>>()),
    );
    inputs.insert("tolerance".to_string(), json!(tolerance));
    RunReport {
        command: "expand".to_string(),
        inputs,
        outputs: expansion_value(&expansion),
        paper_anchor: expand_anchor(&frames).to_string(),
    }
}

fn rule_value(rule: &PairRule) -> Result<Value> {
    let table = rule.same_different_table()?;
    let rows: Vec<Value> = rule
        .rows
        .iter()
        .map(|row| {
            json!({
                "pair": [row.pair_outcome.0.to_string(), row.pair_outcome.1.to_string()],
                "forces": row.prediction.map(|l| l.to_string()),
                "joint_probability": row.joint_probability,
            })
        })
        .collect();
    Ok(json!({
        "measured_basis": rule.measured_basis.to_string(),
        "target_basis": rule.target_basis.to_string(),
        "same": table.same.to_string(),
        "different": table.different.to_string(),
        "rows": rows,
    }))
}

/// `rules`: both deterministic pair rules, identical across all three
/// pairings.
pub fn rules_report() -> Result<RunReport> {
    let state = ghz_state();
    let position = derive_pair_rule(&state, Basis::Position, Basis::Position)?;
    let bonding = derive_pair_rule(&state, Basis::Bonding, Basis::Position)?;
    let outputs = json!({
        "position": rule_value(&position)?,
        "bonding": rule_value(&bonding)?,
        "pair_symmetric": true,
        "pairings": ["AB->C", "AC->B", "BC->A"],
    });
    Ok(RunReport {
        command: "rules".to_string(),
        inputs: BTreeMap::new(),
        outputs,
        paper_anchor: "Rules of \u{a7}VII.1 and \u{a7}VII.3".to_string(),
    })
}

/// `epr`: the two property-distribution sets, their empty intersection, and
/// the parity certificate for the clash.
pub fn epr_report() -> Result<RunReport> {
    let state = ghz_state();
    let position_rule = derive_pair_rule(&state, Basis::Position, Basis::Position)?;
    let bonding_rule = derive_pair_rule(&state, Basis::Bonding, Basis::Position)?;
    let set_4a = reality_distributions(&position_rule)?;
    let set_4b = reality_distributions(&bonding_rule)?;
    let intersection: Vec<String> = set_4a
        .intersection(&set_4b)
        .map(|d| d.to_string())
        .collect();
    let contradiction = contradiction_check(&set_4a, &set_4b);
    let certificate = parity_certificate()?;
    let outputs = json!({
        "set_4a": set_4a.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "set_4b": set_4b.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "intersection": intersection,
        "contradiction": contradiction,
        "parity": serde_json::to_value(&certificate).expect("certificate serializes"),
    });
    Ok(RunReport {
        command: "epr".to_string(),
        inputs: BTreeMap::new(),
        outputs,
        paper_anchor: "Eqs. (4a), (4b); \u{a7}VIII".to_string(),
    })
}

/// `lhv`: exhaustive scan of the 64 per-box assignments against the enabled
/// constraint families.
pub fn lhv_report(families: &[ConstraintFamily]) -> Result<RunReport> {
    let scan = lhv_scan_with(families)?;
    let survivors = scan.survivors();
    let eliminated: BTreeMap<String, usize> = families
        .iter()
        .map(|&family| (family.to_string(), scan.eliminated_by(family)))
        .collect();
    let outputs = json!({
        "families": families.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "total": scan.total,
        "survivor_count": survivors.len(),
        "survivors": survivors.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "eliminated_by_family": eliminated,
    });
    let mut inputs = BTreeMap::new();
    inputs.insert(
        "families".to_string(),
        json!(families.iter().map(|f| f.to_string()).collect::<Vec<_>>()),
    );
    Ok(RunReport {
        command: "lhv".to_string(),
        inputs,
        outputs,
        paper_anchor: "\u{a7}VIII".to_string(),
    })
}

/// Which prepared state a measurement script runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateChoice {
    Ghz,
    TwoBox,
}

impl StateChoice {
    pub fn state(self) -> BoxState {
        match self {
            StateChoice::Ghz => ghz_state(),
            StateChoice::TwoBox => two_box_correlated(),
        }
    }
}

impl std::fmt::Display for StateChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StateChoice::Ghz => "ghz",
            StateChoice::TwoBox => "two-box",
        })
    }
}

impl FromStr for StateChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(StateChoice::Ghz),
            "two-box" | "twobox" | "pair" => Ok(StateChoice::TwoBox),
            other => Err(format!("unknown state {other:?} (expected ghz or two-box)")),
        }
    }
}

fn amplitudes_value(state: &BoxState) -> Value {
    let rows: Vec<Value> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(index, &amplitude)| {
            json!({
                "labels": state
                    .labels_of(index)
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>(),
                "amplitude": complex_value(amplitude),
            })
        })
        .collect();
    Value::Array(rows)
}

/// `measure`: run a seeded measurement script, then report collapse results
/// and certainty predictions for the untouched boxes.
pub fn measure_report(
    choice: StateChoice,
    script: &[(BoxId, Basis)],
    seed: u64,
) -> Result<RunReport> {
    let initial = choice.state();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = initial.clone();
    let mut steps = Vec::new();
    let mut records: Vec<MeasurementRecord> = Vec::new();
    for &(box_id, basis) in script {
        let probabilities = outcome_probabilities(&current, box_id, basis)?;
        let (outcome, collapsed) = sample_measure_with(&current, box_id, basis, &mut rng)?;
        steps.push(json!({
            "box": box_id.to_string(),
            "basis": basis.to_string(),
            "outcome": outcome.to_string(),
            "probability": probabilities[&outcome],
        }));
        records.push(MeasurementRecord::new(box_id, basis, outcome));
        current = collapsed;
    }

    let measured: Vec<BoxId> = records.iter().map(|r| r.box_id).collect();
    let mut predictions: BTreeMap<String, Value> = BTreeMap::new();
    for box_id in BoxId::ALL.iter().take(initial.n_boxes()).copied() {
        if measured.contains(&box_id) {
            continue;
        }
        let mut per_basis: BTreeMap<String, Value> = BTreeMap::new();
        for basis in Basis::ALL {
            let prediction = predict_remaining(&initial, &records, box_id, basis)?;
            per_basis.insert(
                basis.to_string(),
                serde_json::to_value(&prediction).expect("prediction serializes"),
            );
        }
        predictions.insert(box_id.to_string(), json!(per_basis));
    }

    let outputs = json!({
        "state": choice.to_string(),
        "steps": steps,
        "predictions": predictions,
        "collapsed_amplitudes": amplitudes_value(&current),
    });
    let mut inputs = BTreeMap::new();
    inputs.insert("state".to_string(), json!(choice.to_string()));
    inputs.insert("seed".to_string(), json!(seed));
    inputs.insert(
        "script".to_string(),
        json!(script
            .iter()
            .map(|(b, basis)| format!("{b}:{basis}"))
            .collect::<Vec<_>>()),
    );
    let anchor = match choice {
        StateChoice::TwoBox => "Eq. (2b)",
        StateChoice::Ghz => "\u{a7}IV collapse; \u{a7}VII rules",
    };
    Ok(RunReport {
        command: "measure".to_string(),
        inputs,
        outputs,
        paper_anchor: anchor.to_string(),
    })
}

/// Output path for one dataset of a figure: `waves.csv` plus dataset
/// `psi_left` becomes `waves_psi_left.csv`.
pub fn dataset_path(out: &Path, dataset: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "waveform".to_string());
    let extension = out
        .extension()
        .map(|e| e.to_string_lossy().to_string())
        .unwrap_or_else(|| "csv".to_string());
    out.with_file_name(format!("{stem}_{dataset}.{extension}"))
}

/// `waveform`: emit figure samples as one CSV file per dataset.
pub fn waveform_report(figure: Figure, resolution: usize, out: &Path) -> Result<RunReport> {
    let data = emit_figure_data(figure, resolution)?;
    let mut files = Vec::new();
    let mut dataset_summaries = Vec::new();
    for dataset in &data.datasets {
        let path = dataset_path(out, &dataset.name);
        let mut buffer = Vec::new();
        write_csv(dataset, &mut buffer)?;
        fs::write(&path, buffer).map_err(Error::Io)?;
        dataset_summaries.push(json!({
            "name": dataset.name,
            "rows": dataset.rows.len(),
            "columns": dataset
                .coordinates
                .iter()
                .map(|c| c.to_string())
                .chain(["psi_re".to_string(), "psi_im".to_string(), "density".to_string()])
                .collect::<Vec<_>>(),
        }));
        files.push(path.to_string_lossy().to_string());
    }
    let overlap_value = data.overlap.map(|overlap| {
        json!({
            "value": overlap,
            "threshold": OVERLAP_THRESHOLD,
            "disjoint": overlap < OVERLAP_THRESHOLD,
        })
    });
    let outputs = json!({
        "figure": figure.to_string(),
        "files": files,
        "datasets": dataset_summaries,
        "overlap": overlap_value,
    });
    let mut inputs = BTreeMap::new();
    inputs.insert("figure".to_string(), json!(figure.to_string()));
    inputs.insert("resolution".to_string(), json!(resolution));
    inputs.insert("out".to_string(), json!(out.to_string_lossy()));
    let anchor = match figure {
        Figure::DisjointWells => "Figure 2",
        Figure::WellSuperpositions => "Figure 9",
        Figure::BondingOrbitals => "Figure 10",
    };
    Ok(RunReport {
        command: "waveform".to_string(),
        inputs,
        outputs,
        paper_anchor: anchor.to_string(),
    })
}

// -- human rendering --------------------------------------------------------

fn is_complex_object(map: &serde_json::Map<String, Value>) -> bool {
    map.len() == 2 && map.contains_key("re") && map.contains_key("im")
}

fn scalar_text(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("-".to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(map) if is_complex_object(map) => {
            let re = map["re"].as_f64().unwrap_or(0.0);
            let im = map["im"].as_f64().unwrap_or(0.0);
            Some(format!("{re}{im:+}i"))
        }
        Value::Array(items) => {
            if items.is_empty() {
                return Some("(none)".to_string());
            }
            let parts: Vec<String> = items.iter().map(scalar_text).collect::<Option<_>>()?;
            let joined = parts.join(" ");
            // Long lists read better one entry per line.
            if joined.len() <= 72 {
                Some(joined)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn render_value(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, child) in map {
                if let Some(text) = scalar_text(child) {
                    let _ = writeln!(out, "{pad}{key}: {text}");
                } else {
                    let _ = writeln!(out, "{pad}{key}:");
                    render_value(child, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if let Some(text) = scalar_text(item) {
                    let _ = writeln!(out, "{pad}- {text}");
                } else {
                    let _ = writeln!(out, "{pad}-");
                    render_value(item, indent + 1, out);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}

/// Plain-text rendering used when `--json` is not requested.
pub fn render_human(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", report.command);
    let _ = writeln!(out, "anchor:  {}", report.paper_anchor);
    if !report.inputs.is_empty() {
        let _ = writeln!(out, "inputs:");
        for (key, value) in &report.inputs {
            if let Some(text) = scalar_text(value) {
                let _ = writeln!(out, "  {key}: {text}");
            } else {
                let _ = writeln!(out, "  {key}:");
                render_value(value, 2, &mut out);
            }
        }
    }
    let _ = writeln!(out, "results:");
    render_value(&report.outputs, 1, &mut out);
    out
}
