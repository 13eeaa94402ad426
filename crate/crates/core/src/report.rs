//! Batch evaluation across all DMUs, ranking, and report emission.
//!
//! A run evaluates every DMU against the others under one configuration,
//! deterministically and in dataset order. Reports carry per-DMU scores,
//! weights, projections, zero-pattern sets, and every warning or
//! infeasibility diagnostic, plus run metadata; repeated runs of the same
//! `(dataset, config)` produce byte-identical output (no timestamps).

use crate::catalog::{resolve_preset, run_preset, CatalogError, PresetParams};
use crate::config::{ModelChoice, OutputFormat, RunConfig};
use crate::dataset::{DataError, Dataset, RtsSpec};
use crate::direction::{
    apply_preference_weights, build_direction, validate_direction, DirectionError, DirectionReport,
    DirectionSpec, DirectionVector,
};
use crate::models::{
    slack_index_sets, solve_model, HybridPartition, ModelError, ModelSpec, ScoreResult, SolveStatus,
};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Direction(#[from] DirectionError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunMetadata {
    pub model: String,
    pub rts: String,
    pub direction: String,
    pub input_labels: Vec<String>,
    pub output_labels: Vec<String>,
    pub feasibility_tolerance: f64,
    pub value_tolerance: f64,
    pub config_hash: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DmuReport {
    pub name: String,
    pub status: SolveStatus,
    pub score: Option<f64>,
    pub rank: Option<usize>,
    pub tau_radial: Option<f64>,
    pub tau_minus: Vec<f64>,
    pub tau_plus: Vec<f64>,
    pub lambdas: Vec<(String, f64)>,
    pub projection_inputs: Vec<f64>,
    pub projection_outputs: Vec<f64>,
    pub decomposition: Option<(f64, f64)>,
    pub problem_inputs: Vec<String>,
    pub problem_outputs: Vec<String>,
    pub diagnostics: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub metadata: RunMetadata,
    pub dmus: Vec<DmuReport>,
}

/// Splits a flat custom direction list into input and output parts.
fn split_custom(values: &[f64], m: usize, s: usize) -> Result<DirectionSpec, DirectionError> {
    if values.len() != m + s {
        return Err(DirectionError::DimensionMismatch {
            kind: "direction",
            expected: m + s,
            found: values.len(),
        });
    }
    Ok(DirectionSpec::Custom {
        inputs: values[..m].to_vec(),
        outputs: values[m..].to_vec(),
    })
}

fn direction_spec_for(dataset: &Dataset, config: &RunConfig) -> Result<DirectionSpec, RunError> {
    Ok(match &config.direction {
        DirectionSpec::Custom { inputs, outputs } => {
            let mut values = inputs.clone();
            values.extend_from_slice(outputs);
            split_custom(&values, dataset.num_inputs(), dataset.num_outputs())?
        }
        other => other.clone(),
    })
}

fn direction_summary(spec: &DirectionSpec, config: &RunConfig) -> String {
    let mut s = match spec {
        DirectionSpec::OwnData => "own_data".to_string(),
        DirectionSpec::ColumnMax => format!("column_max (include_self={})", config.include_self),
        DirectionSpec::ColumnRange => {
            format!("column_range (include_self={})", config.include_self)
        }
        DirectionSpec::Custom { inputs, outputs } => {
            format!("custom (g- = {inputs:?}, g+ = {outputs:?})")
        }
    };
    if let Some(w) = &config.weights {
        s.push_str(&format!(", weights = {w:?}"));
    }
    s
}

fn family_direction(
    ctx: &crate::dataset::EvaluationContext,
    spec: &DirectionSpec,
    config: &RunConfig,
) -> Result<DirectionVector, DirectionError> {
    let g = build_direction(ctx, spec, config.include_self)?;
    match &config.weights {
        Some(w) => apply_preference_weights(&g, w),
        None => Ok(g),
    }
}

fn report_from_result(dataset: &Dataset, o: usize, res: ScoreResult) -> DmuReport {
    let sets = {
        // zero-pattern sets do not depend on the RTS, any context works
        let rts = if dataset.allow_negative() {
            RtsSpec::vrs()
        } else {
            RtsSpec::crs()
        };
        let ctx = dataset.context(o, rts).expect("index in range");
        slack_index_sets(&ctx)
    };
    let (tau_radial, tau_minus, tau_plus, lambdas) = match &res.bundle {
        Some(b) => (
            b.tau_radial,
            b.tau_minus.clone(),
            b.tau_plus.clone(),
            b.lambdas
                .iter()
                .map(|&(j, v)| (dataset.dmu(j).name.clone(), v))
                .collect(),
        ),
        None => (None, Vec::new(), Vec::new(), Vec::new()),
    };
    let (projection_inputs, projection_outputs) = match &res.projection {
        Some(p) => (p.inputs.clone(), p.outputs.clone()),
        None => (Vec::new(), Vec::new()),
    };
    DmuReport {
        name: dataset.dmu(o).name.clone(),
        status: res.status,
        score: res.score,
        rank: None,
        tau_radial,
        tau_minus,
        tau_plus,
        lambdas,
        projection_inputs,
        projection_outputs,
        decomposition: res.decomposition,
        problem_inputs: sets
            .problem_inputs
            .iter()
            .map(|&i| dataset.input_labels()[i].clone())
            .collect(),
        problem_outputs: sets
            .problem_outputs
            .iter()
            .map(|&r| dataset.output_labels()[r].clone())
            .collect(),
        diagnostics: res.diagnostics,
        warnings: res.warnings,
    }
}

/// Evaluates every DMU under the configuration and ranks the result.
pub fn run_evaluation(dataset: &Dataset, config: &RunConfig) -> Result<RunReport, RunError> {
    let mut dmus = Vec::with_capacity(dataset.len());
    let (model_name, rts_text, direction_text) = match &config.model {
        ModelChoice::Preset(name) => {
            let params = PresetParams {
                big_m: config.big_m,
                m_ray: config.m_ray,
            };
            let base_rts = if dataset.allow_negative() {
                RtsSpec::vrs()
            } else {
                RtsSpec::crs()
            };
            let mut rts_text = String::new();
            for o in 0..dataset.len() {
                let ctx = dataset.context(o, base_rts)?;
                if o == 0 {
                    rts_text = resolve_preset(name, &ctx, &params)?.rts.to_string();
                }
                let res = run_preset(name, &ctx, &params)?;
                dmus.push(report_from_result(dataset, o, res));
            }
            (name.clone(), rts_text, "per preset".to_string())
        }
        ModelChoice::Family(family) => {
            let spec = direction_spec_for(dataset, config)?;
            let direction_text = direction_summary(&spec, config);
            let model_spec = ModelSpec {
                family: *family,
                enforce_output_nonneg: config.enforce_output_nonneg,
                partition: config
                    .partition
                    .map(|(m1, s1)| HybridPartition::new(m1, s1)),
                tau_minus_free: false,
                tau_plus_free: false,
            };
            for o in 0..dataset.len() {
                let ctx = dataset.context(o, config.rts)?;
                let g = family_direction(&ctx, &spec, config)?;
                let res = solve_model(&ctx, &g, &model_spec)?;
                dmus.push(report_from_result(dataset, o, res));
            }
            (family.to_string(), config.rts.to_string(), direction_text)
        }
    };
    let mut report = RunReport {
        metadata: RunMetadata {
            model: model_name,
            rts: rts_text,
            direction: direction_text,
            input_labels: dataset.input_labels().to_vec(),
            output_labels: dataset.output_labels().to_vec(),
            feasibility_tolerance: crate::lp::FEAS_TOL,
            value_tolerance: crate::lp::VALUE_TOL,
            config_hash: config.config_hash.clone(),
        },
        dmus,
    };
    rank_dmus(&mut report);
    Ok(report)
}

/// Ranks optimal DMUs by descending score, ties broken lexicographically by
/// name; non-optimal DMUs keep no rank and list after the ranked ones in
/// the rendered table.
pub fn rank_dmus(report: &mut RunReport) {
    let mut order: Vec<usize> = report
        .dmus
        .iter()
        .enumerate()
        .filter(|(_, d)| d.status == SolveStatus::Optimal && d.score.is_some())
        .map(|(i, _)| i)
        .collect();
    order.sort_by(|&a, &b| {
        let (da, db) = (&report.dmus[a], &report.dmus[b]);
        db.score
            .unwrap()
            .total_cmp(&da.score.unwrap())
            .then_with(|| da.name.cmp(&db.name))
    });
    for d in report.dmus.iter_mut() {
        d.rank = None;
    }
    for (rank, &i) in order.iter().enumerate() {
        report.dmus[i].rank = Some(rank + 1);
    }
}

/// Renders the report in the requested format.
pub fn render_report(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(report),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Table => render_table(report),
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(
    report: &RunReport,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), RunError> {
    let text = render_report(report, format);
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn render_csv(report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let meta = &report.metadata;
    let mut header: Vec<String> = vec![
        "name".into(),
        "status".into(),
        "score".into(),
        "rank".into(),
    ];
    header.extend(meta.input_labels.iter().map(|l| format!("tau:{l}")));
    header.extend(meta.output_labels.iter().map(|l| format!("tau:{l}")));
    header.extend(meta.input_labels.iter().map(|l| format!("proj:{l}")));
    header.extend(meta.output_labels.iter().map(|l| format!("proj:{l}")));
    w.write_record(&header).expect("csv header");
    let fmt_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for d in &report.dmus {
        let mut row: Vec<String> = vec![
            d.name.clone(),
            d.status.to_string(),
            fmt_opt(d.score),
            d.rank.map(|r| r.to_string()).unwrap_or_default(),
        ];
        let pad = |xs: &[f64], n: usize| -> Vec<String> {
            if xs.is_empty() {
                vec![String::new(); n]
            } else {
                xs.iter().map(|x| x.to_string()).collect()
            }
        };
        row.extend(pad(&d.tau_minus, meta.input_labels.len()));
        row.extend(pad(&d.tau_plus, meta.output_labels.len()));
        row.extend(pad(&d.projection_inputs, meta.input_labels.len()));
        row.extend(pad(&d.projection_outputs, meta.output_labels.len()));
        w.write_record(&row).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

/// Four-decimal score cell, with shorthand markers for non-optimal statuses.
fn score_cell(d: &DmuReport) -> String {
    match (d.status, d.score) {
        (SolveStatus::Optimal, Some(v)) => format!("{v:.4}"),
        (SolveStatus::Infeasible, _) => "Inf.".to_string(),
        (SolveStatus::Undefined, _) => "Und.".to_string(),
        _ => "—".to_string(),
    }
}

fn render_table(report: &RunReport) -> String {
    let meta = &report.metadata;
    let mut out = String::new();
    out.push_str(&format!("model     : {}\n", meta.model));
    out.push_str(&format!("rts       : {}\n", meta.rts));
    out.push_str(&format!("direction : {}\n", meta.direction));
    out.push_str(&format!("config    : {}\n\n", meta.config_hash));

    // ranked first, then the rest in dataset order
    let mut rows: Vec<&DmuReport> = report.dmus.iter().filter(|d| d.rank.is_some()).collect();
    rows.sort_by_key(|d| d.rank.unwrap());
    rows.extend(report.dmus.iter().filter(|d| d.rank.is_none()));

    let headers = ["dmu", "status", "score", "rank"];
    let table: Vec<[String; 4]> = rows
        .iter()
        .map(|d| {
            [
                d.name.clone(),
                d.status.to_string(),
                score_cell(d),
                d.rank.map(|r| r.to_string()).unwrap_or("—".to_string()),
            ]
        })
        .collect();
    let mut widths = [0usize; 4];
    for (k, h) in headers.iter().enumerate() {
        widths[k] = h.chars().count();
    }
    for row in &table {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    let line = |cells: [&str; 4], widths: &[usize; 4]| {
        let mut s = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            for _ in cell.chars().count()..widths[k] {
                s.push(' ');
            }
        }
        s.trim_end().to_string() + "\n"
    };
    out.push_str(&line(headers, &widths));
    for row in &table {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3]], &widths));
    }

    let mut notes = Vec::new();
    for d in &report.dmus {
        for msg in d.diagnostics.iter().chain(d.warnings.iter()) {
            notes.push(format!("{}: {}", d.name, msg));
        }
    }
    if !notes.is_empty() {
        out.push_str("\nnotes\n");
        for n in notes {
            out.push_str(&format!("  {n}\n"));
        }
    }
    out
}

/// Per-DMU diagnostics without solving: zero-pattern sets plus the
/// feasibility/well-definedness report of the configured direction.
#[derive(Clone, Debug, Serialize)]
pub struct DmuCheck {
    pub name: String,
    pub problem_inputs: Vec<String>,
    pub problem_outputs: Vec<String>,
    pub direction: Option<DirectionReport>,
}

pub fn run_diagnostics(dataset: &Dataset, config: &RunConfig) -> Result<Vec<DmuCheck>, RunError> {
    let base_rts = if dataset.allow_negative() {
        RtsSpec::vrs()
    } else {
        match &config.model {
            ModelChoice::Family(_) => config.rts,
            ModelChoice::Preset(_) => RtsSpec::crs(),
        }
    };
    let mut out = Vec::with_capacity(dataset.len());
    for o in 0..dataset.len() {
        let ctx = dataset.context(o, base_rts)?;
        let sets = slack_index_sets(&ctx);
        let g = match &config.model {
            ModelChoice::Preset(name) => {
                let params = PresetParams {
                    big_m: config.big_m,
                    m_ray: config.m_ray,
                };
                Some(resolve_preset(name, &ctx, &params)?.direction)
            }
            ModelChoice::Family(_) => {
                let spec = direction_spec_for(dataset, config)?;
                Some(family_direction(&ctx, &spec, config)?)
            }
        };
        let direction = match g {
            Some(g) => Some(validate_direction(&ctx, &g)?),
            None => None,
        };
        out.push(DmuCheck {
            name: dataset.dmu(o).name.clone(),
            problem_inputs: sets
                .problem_inputs
                .iter()
                .map(|&i| dataset.input_labels()[i].clone())
                .collect(),
            problem_outputs: sets
                .problem_outputs
                .iter()
                .map(|&r| dataset.output_labels()[r].clone())
                .collect(),
            direction,
        });
    }
    Ok(out)
}
