//! Named presets: the conventional super-efficiency models expressed as
//! direction-vector choices over the directional families.
//!
//! Each preset fixes a family, returns-to-scale bounds, a direction recipe,
//! flags, and a score transform. Radial-family presets report `1 + tau`;
//! the slacks-based family reports the fractional objective; the L1-norm
//! and additive presets report the solved linear objective (their original
//! index formulas live in their source papers, so results carry a
//! "transform unverified" warning); the big-M oriented presets report the
//! radial factor of their oriented block.

use crate::dataset::{EvaluationContext, RtsSpec};
use crate::direction::{build_direction, DirectionError, DirectionSpec, DirectionVector};
use crate::models::{
    slack_index_sets, solve_linear_gdse, solve_model, HybridPartition, ModelError, ModelFamily,
    ModelSpec, ScoreResult, SolveStatus,
};
use thiserror::Error;

/// Runtime parameters some presets need.
#[derive(Clone, Copy, Debug)]
pub struct PresetParams {
    /// Big-M scalar for the oriented derivations.
    pub big_m: f64,
    /// User-chosen `(a, b)` scalars of the modified-ray preset; it has no
    /// defaults.
    pub m_ray: Option<(f64, f64)>,
}

impl Default for PresetParams {
    fn default() -> Self {
        Self {
            big_m: 1e5,
            m_ray: None,
        }
    }
}

/// Structural base a preset derives from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseFamily {
    Radial,
    Fractional,
    Linear,
    Hybrid,
}

/// How the reported index is read off the solved bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScoreTransform {
    /// `1 + tau` of the radial factor (already the family score).
    OnePlusTau,
    /// `1 + sum(tau_minus)` (already the non-radial input family score).
    OnePlusSumTauMinus,
    /// The fractional objective itself.
    FractionalObjective,
    /// The product-form index of the linear/hybrid families.
    ProductIndex,
    /// The raw solved objective value.
    SolvedObjective,
    /// `1 + tau` of the input radial block (big-M input-oriented presets).
    InputExpansionFactor,
    /// `(1 - tau)^-1` of the output radial block (big-M output-oriented).
    OutputRetentionInverse,
}

/// Fully instantiated preset invocation for one evaluation context.
#[derive(Clone, Debug)]
pub struct ResolvedPreset {
    pub name: &'static str,
    pub rts: RtsSpec,
    pub spec: ModelSpec,
    pub direction: DirectionVector,
    pub transform: ScoreTransform,
    /// Warnings attached to every run of this preset.
    pub warnings: Vec<String>,
    /// Set when the preset's index is undefined at this DMU (division by a
    /// zero own-data entry in the original formula).
    pub undefined_reason: Option<String>,
    /// Set when the preset is infeasible by construction at this DMU.
    pub infeasible_reason: Option<String>,
}

impl ResolvedPreset {
    pub fn base_family(&self) -> BaseFamily {
        match self.spec.family {
            ModelFamily::Rdse | ModelFamily::InputRadial => BaseFamily::Radial,
            ModelFamily::FractionalGdse => BaseFamily::Fractional,
            ModelFamily::LinearGdse | ModelFamily::InputNonradial => BaseFamily::Linear,
            ModelFamily::Hdse => BaseFamily::Hybrid,
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown preset '{name}' (run the preset listing for the vocabulary)")]
    UnknownPreset { name: String },
    #[error("preset 'M-Ray' needs user-supplied parameters a and b")]
    MissingMRayParams,
    #[error(transparent)]
    Direction(#[from] DirectionError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Data(#[from] crate::dataset::DataError),
}

/// The registry vocabulary, in listing order.
pub const PRESET_NAMES: &[&str] = &[
    "AP",
    "MAJ",
    "M-MAJ",
    "R-MAJ",
    "Ray",
    "M-Ray",
    "Super-SBM-C",
    "Super-SBM-C(I)",
    "Super-SBM-C(II)",
    "Super-SBM-I",
    "Super-SBM-V",
    "Super-SBM-I-V",
    "Super-ERM",
    "LJK",
    "Norm1",
    "Norm1-V",
    "Super-Add(I)",
    "Super-Add(II)",
    "Super-Add(III)",
    "Super-Add(IV)",
    "Chen2011",
    "Cook2009-I",
    "Cook2009-O",
    "ChenLiang2011-I",
    "ChenLiang2011-O",
];

/// One line per preset for the CLI listing.
pub fn preset_summaries() -> Vec<(&'static str, &'static str)> {
    vec![
        ("AP", "radial input-oriented, CRS, own-input direction"),
        (
            "MAJ",
            "radial input-oriented, CRS, column-max input direction",
        ),
        (
            "M-MAJ",
            "MAJ with the column max taken over efficient DMUs only",
        ),
        (
            "R-MAJ",
            "radial non-oriented, CRS, column-max direction, projections may go negative",
        ),
        (
            "Ray",
            "radial non-oriented, VRS, own-data direction, projections may go negative",
        ),
        (
            "M-Ray",
            "radial non-oriented, VRS, direction (a*x_o+1, b*y_o+1); needs a and b",
        ),
        (
            "Super-SBM-C",
            "fractional, CRS, own-data direction; needs positive own data",
        ),
        ("Super-SBM-C(I)", "fractional, CRS, column-max direction"),
        (
            "Super-SBM-C(II)",
            "fractional, GRS(1,inf), column-range direction",
        ),
        (
            "Super-SBM-I",
            "fractional input-oriented, CRS, own-input direction",
        ),
        (
            "Super-SBM-V",
            "fractional, VRS, own-data direction; needs positive own data",
        ),
        (
            "Super-SBM-I-V",
            "fractional input-oriented, VRS, own-input direction",
        ),
        ("Super-ERM", "identical invocation to Super-SBM-C"),
        (
            "LJK",
            "non-radial input-oriented, CRS, column-max input direction",
        ),
        (
            "Norm1",
            "linear, CRS, (1/m, 1/s)-scaled column-max direction; reports the objective",
        ),
        ("Norm1-V", "Norm1 under VRS"),
        (
            "Super-Add(I)",
            "linear, CRS, constant direction (1/m, 1/s); reports the objective",
        ),
        (
            "Super-Add(II)",
            "linear, CRS, ((m+s)/m)-scaled own-data direction; reports the objective",
        ),
        (
            "Super-Add(III)",
            "linear, CRS, ((m+s)/m, (m+s)/s)-scaled column-max direction",
        ),
        (
            "Super-Add(IV)",
            "linear, CRS, ((m+s)/m)-scaled column-range direction",
        ),
        (
            "Chen2011",
            "hybrid fully-radial, VRS, own-data direction; infeasible on zero patterns",
        ),
        (
            "Cook2009-I",
            "hybrid fully-radial big-M input-oriented, VRS",
        ),
        (
            "Cook2009-O",
            "hybrid fully-radial big-M output-oriented, VRS",
        ),
        (
            "ChenLiang2011-I",
            "hybrid big-M input-oriented with non-radial outputs, VRS",
        ),
        (
            "ChenLiang2011-O",
            "hybrid big-M output-oriented with non-radial inputs, VRS",
        ),
    ]
}

const TRANSFORM_UNVERIFIED: &str =
    "score transform unverified: reporting the solved objective or oriented factor; the preset's original index formula is defined in its source paper";

fn preset_direction(
    ctx: &EvaluationContext,
    preset: &'static str,
    spec: &DirectionSpec,
) -> Result<DirectionVector, DirectionError> {
    let mut g = build_direction(ctx, spec, true)?;
    g.provenance.preset = Some(preset.to_string());
    Ok(g)
}

fn input_only(ctx: &EvaluationContext, g_minus: Vec<f64>) -> DirectionSpec {
    DirectionSpec::Custom {
        inputs: g_minus,
        outputs: vec![0.0; ctx.num_outputs()],
    }
}

/// Positive own-data check for presets whose original index divides by the
/// evaluated DMU's data.
fn own_data_positivity(
    ctx: &EvaluationContext,
    need_inputs: bool,
    need_outputs: bool,
) -> Option<String> {
    let o = ctx.evaluated();
    let ds = ctx.dataset();
    if need_inputs {
        if let Some(i) = o.inputs.iter().position(|&v| v <= 0.0) {
            return Some(format!(
                "index undefined: original formula divides by {} of '{}', which is {}",
                ds.input_labels()[i],
                o.name,
                o.inputs[i]
            ));
        }
    }
    if need_outputs {
        if let Some(r) = o.outputs.iter().position(|&v| v <= 0.0) {
            return Some(format!(
                "index undefined: original formula divides by {} of '{}', which is {}",
                ds.output_labels()[r],
                o.name,
                o.outputs[r]
            ));
        }
    }
    None
}

/// Extreme-efficiency indicator per DMU: the linear generalized objective
/// with a global column-max direction is positive only for extreme-efficient
/// units.
pub fn efficient_flags(
    rts: RtsSpec,
    dataset: &crate::dataset::Dataset,
) -> Result<Vec<bool>, CatalogError> {
    let mut flags = Vec::with_capacity(dataset.len());
    for o in 0..dataset.len() {
        let ctx = dataset.context(o, rts)?;
        let g = build_direction(&ctx, &DirectionSpec::ColumnMax, true)?;
        let res = solve_linear_gdse(&ctx, &g)?;
        let eff = res.status == SolveStatus::Optimal && res.objective_value.unwrap_or(0.0) > 1e-7;
        flags.push(eff);
    }
    Ok(flags)
}

/// Instantiates a preset for one evaluation context.
pub fn resolve_preset(
    name: &str,
    ctx: &EvaluationContext,
    params: &PresetParams,
) -> Result<ResolvedPreset, CatalogError> {
    let o = ctx.evaluated();
    let m = ctx.num_inputs();
    let s = ctx.num_outputs();
    let mf = m as f64;
    let sf = s as f64;
    let full = HybridPartition::new(m, s);

    let rp = match name {
        "AP" => ResolvedPreset {
            name: "AP",
            rts: RtsSpec::crs(),
            spec: ModelSpec::plain(ModelFamily::InputRadial),
            direction: preset_direction(ctx, "AP", &input_only(ctx, o.inputs.clone()))?,
            transform: ScoreTransform::OnePlusTau,
            warnings: vec![],
            undefined_reason: None,
            infeasible_reason: None,
        },
        "MAJ" => {
            let g = preset_direction(ctx, "MAJ", &DirectionSpec::ColumnMax)?;
            ResolvedPreset {
                name: "MAJ",
                rts: RtsSpec::crs(),
                spec: ModelSpec::plain(ModelFamily::InputRadial),
                direction: preset_direction(ctx, "MAJ", &input_only(ctx, g.g_minus().to_vec()))?,
                transform: ScoreTransform::OnePlusTau,
                warnings: vec![],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "M-MAJ" => {
            let flags = efficient_flags(RtsSpec::crs(), ctx.dataset())?;
            let pick = |only_efficient: bool| {
                let mut g = vec![f64::MIN; m];
                for (j, dmu) in ctx.dataset().dmus().iter().enumerate() {
                    if only_efficient && !flags[j] {
                        continue;
                    }
                    for (gi, xi) in g.iter_mut().zip(&dmu.inputs) {
                        *gi = gi.max(*xi);
                    }
                }
                g
            };
            let g_minus = if flags.iter().any(|&f| f) {
                pick(true)
            } else {
                // degenerate dataset without an extreme-efficient unit;
                // keep the preset runnable with the plain column max
                pick(false)
            };
            ResolvedPreset {
                name: "M-MAJ",
                rts: RtsSpec::crs(),
                spec: ModelSpec::plain(ModelFamily::InputRadial),
                direction: preset_direction(ctx, "M-MAJ", &input_only(ctx, g_minus))?,
                transform: ScoreTransform::OnePlusTau,
                warnings: vec![],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "R-MAJ" => {
            let mut spec = ModelSpec::plain(ModelFamily::Rdse);
            spec.enforce_output_nonneg = false;
            ResolvedPreset {
                name: "R-MAJ",
                rts: RtsSpec::crs(),
                spec,
                direction: preset_direction(ctx, "R-MAJ", &DirectionSpec::ColumnMax)?,
                transform: ScoreTransform::OnePlusTau,
                warnings: vec![],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "Ray" => {
            let mut spec = ModelSpec::plain(ModelFamily::Rdse);
            spec.enforce_output_nonneg = false;
            ResolvedPreset {
                name: "Ray",
                rts: RtsSpec::vrs(),
                spec,
                direction: preset_direction(ctx, "Ray", &DirectionSpec::OwnData)?,
                transform: ScoreTransform::OnePlusTau,
                warnings: vec![],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "M-Ray" => {
            let (a, b) = params.m_ray.ok_or(CatalogError::MissingMRayParams)?;
            let gi: Vec<f64> = o.inputs.iter().map(|x| a * x + 1.0).collect();
            let go: Vec<f64> = o.outputs.iter().map(|y| b * y + 1.0).collect();
            let mut spec = ModelSpec::plain(ModelFamily::Rdse);
            spec.enforce_output_nonneg = false;
            ResolvedPreset {
                name: "M-Ray",
                rts: RtsSpec::vrs(),
                spec,
                direction: preset_direction(
                    ctx,
                    "M-Ray",
                    &DirectionSpec::Custom {
                        inputs: gi,
                        outputs: go,
                    },
                )?,
                transform: ScoreTransform::OnePlusTau,
                warnings: vec![],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "Super-SBM-C" | "Super-ERM" => {
            let static_name: &'static str = if name == "Super-ERM" {
                "Super-ERM"
            } else {
                "Super-SBM-C"
            };
            ResolvedPreset {
                name: static_name,
                rts: RtsSpec::crs(),
                spec: ModelSpec::plain(ModelFamily::FractionalGdse),
                direction: preset_direction(ctx, static_name, &DirectionSpec::OwnData)?,
                transform: ScoreTransform::FractionalObjective,
                warnings: vec![],
                undefined_reason: own_data_positivity(ctx, true, true),
                infeasible_reason: None,
            }
        }
        "Super-SBM-C(I)" => ResolvedPreset {
            name: "Super-SBM-C(I)",
            rts: RtsSpec::crs(),
            spec: ModelSpec::plain(ModelFamily::FractionalGdse),
            direction: preset_direction(ctx, "Super-SBM-C(I)", &DirectionSpec::ColumnMax)?,
            transform: ScoreTransform::FractionalObjective,
            warnings: vec![],
            undefined_reason: None,
            infeasible_reason: None,
        },
        "Super-SBM-C(II)" => ResolvedPreset {
            name: "Super-SBM-C(II)",
            rts: RtsSpec::grs(1.0, f64::INFINITY)?,
            spec: ModelSpec::plain(ModelFamily::FractionalGdse),
            direction: preset_direction(ctx, "Super-SBM-C(II)", &DirectionSpec::ColumnRange)?,
            transform: ScoreTransform::FractionalObjective,
            warnings: vec![],
            undefined_reason: None,
            infeasible_reason: None,
        },
        "Super-SBM-I" | "Super-SBM-I-V" => {
            let vrs = name == "Super-SBM-I-V";
            let static_name: &'static str = if vrs { "Super-SBM-I-V" } else { "Super-SBM-I" };
            ResolvedPreset {
                name: static_name,
                rts: if vrs { RtsSpec::vrs() } else { RtsSpec::crs() },
                spec: ModelSpec::plain(ModelFamily::FractionalGdse),
                direction: preset_direction(ctx, static_name, &input_only(ctx, o.inputs.clone()))?,
                transform: ScoreTransform::FractionalObjective,
                warnings: vec![],
                undefined_reason: own_data_positivity(ctx, true, false),
                infeasible_reason: None,
            }
        }
        "Super-SBM-V" => ResolvedPreset {
            name: "Super-SBM-V",
            rts: RtsSpec::vrs(),
            spec: ModelSpec::plain(ModelFamily::FractionalGdse),
            direction: preset_direction(ctx, "Super-SBM-V", &DirectionSpec::OwnData)?,
            transform: ScoreTransform::FractionalObjective,
            warnings: vec![],
            undefined_reason: own_data_positivity(ctx, true, true),
            infeasible_reason: None,
        },
        "LJK" => {
            let g = preset_direction(ctx, "LJK", &DirectionSpec::ColumnMax)?;
            ResolvedPreset {
                name: "LJK",
                rts: RtsSpec::crs(),
                spec: ModelSpec::plain(ModelFamily::InputNonradial),
                direction: preset_direction(ctx, "LJK", &input_only(ctx, g.g_minus().to_vec()))?,
                transform: ScoreTransform::OnePlusSumTauMinus,
                warnings: vec![],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "Norm1" | "Norm1-V" => {
            let vrs = name == "Norm1-V";
            let static_name: &'static str = if vrs { "Norm1-V" } else { "Norm1" };
            let g = preset_direction(ctx, static_name, &DirectionSpec::ColumnMax)?
                .scale_uniform(1.0 / mf, 1.0 / sf);
            ResolvedPreset {
                name: static_name,
                rts: if vrs { RtsSpec::vrs() } else { RtsSpec::crs() },
                spec: ModelSpec::plain(ModelFamily::LinearGdse),
                direction: g,
                transform: ScoreTransform::SolvedObjective,
                warnings: vec![TRANSFORM_UNVERIFIED.to_string()],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "Super-Add(I)" => ResolvedPreset {
            name: "Super-Add(I)",
            rts: RtsSpec::crs(),
            spec: ModelSpec::plain(ModelFamily::LinearGdse),
            direction: preset_direction(
                ctx,
                "Super-Add(I)",
                &DirectionSpec::Custom {
                    inputs: vec![1.0 / mf; m],
                    outputs: vec![1.0 / sf; s],
                },
            )?,
            transform: ScoreTransform::SolvedObjective,
            warnings: vec![TRANSFORM_UNVERIFIED.to_string()],
            undefined_reason: None,
            infeasible_reason: None,
        },
        "Super-Add(II)" => {
            let g = preset_direction(ctx, "Super-Add(II)", &DirectionSpec::OwnData)?
                .scale_uniform((mf + sf) / mf, (mf + sf) / mf);
            ResolvedPreset {
                name: "Super-Add(II)",
                rts: RtsSpec::crs(),
                spec: ModelSpec::plain(ModelFamily::LinearGdse),
                direction: g,
                transform: ScoreTransform::SolvedObjective,
                warnings: vec![TRANSFORM_UNVERIFIED.to_string()],
                undefined_reason: own_data_positivity(ctx, true, true),
                infeasible_reason: None,
            }
        }
        "Super-Add(III)" => {
            let g = preset_direction(ctx, "Super-Add(III)", &DirectionSpec::ColumnMax)?
                .scale_uniform((mf + sf) / mf, (mf + sf) / sf);
            ResolvedPreset {
                name: "Super-Add(III)",
                rts: RtsSpec::crs(),
                spec: ModelSpec::plain(ModelFamily::LinearGdse),
                direction: g,
                transform: ScoreTransform::SolvedObjective,
                warnings: vec![TRANSFORM_UNVERIFIED.to_string()],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "Super-Add(IV)" => {
            let g = preset_direction(ctx, "Super-Add(IV)", &DirectionSpec::ColumnRange)?
                .scale_uniform((mf + sf) / mf, (mf + sf) / mf);
            ResolvedPreset {
                name: "Super-Add(IV)",
                rts: RtsSpec::crs(),
                spec: ModelSpec::plain(ModelFamily::LinearGdse),
                direction: g,
                transform: ScoreTransform::SolvedObjective,
                warnings: vec![TRANSFORM_UNVERIFIED.to_string()],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "Chen2011" => {
            let sets = slack_index_sets(ctx);
            let infeasible_reason = if sets.is_clear() {
                None
            } else {
                Some(format!(
                    "zero-pattern check: the derived model is infeasible when P_o or Q_o is nonempty (P_o = {:?}, Q_o = {:?})",
                    sets.problem_inputs, sets.problem_outputs
                ))
            };
            let mut spec = ModelSpec::plain(ModelFamily::Hdse);
            spec.partition = Some(full);
            ResolvedPreset {
                name: "Chen2011",
                rts: RtsSpec::vrs(),
                spec,
                direction: preset_direction(ctx, "Chen2011", &DirectionSpec::OwnData)?,
                transform: ScoreTransform::ProductIndex,
                warnings: vec![],
                undefined_reason: None,
                infeasible_reason,
            }
        }
        "Cook2009-I" | "ChenLiang2011-I" => {
            let cook = name == "Cook2009-I";
            let static_name: &'static str = if cook {
                "Cook2009-I"
            } else {
                "ChenLiang2011-I"
            };
            let gi = o.inputs.clone();
            let go: Vec<f64> = o.outputs.iter().map(|y| y / params.big_m).collect();
            let mut spec = ModelSpec::plain(ModelFamily::Hdse);
            spec.partition = Some(if cook {
                full
            } else {
                HybridPartition::new(m, 0)
            });
            spec.tau_minus_free = true;
            ResolvedPreset {
                name: static_name,
                rts: RtsSpec::vrs(),
                spec,
                direction: preset_direction(
                    ctx,
                    static_name,
                    &DirectionSpec::Custom {
                        inputs: gi,
                        outputs: go,
                    },
                )?,
                transform: ScoreTransform::InputExpansionFactor,
                warnings: vec![TRANSFORM_UNVERIFIED.to_string()],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        "Cook2009-O" | "ChenLiang2011-O" => {
            let cook = name == "Cook2009-O";
            let static_name: &'static str = if cook {
                "Cook2009-O"
            } else {
                "ChenLiang2011-O"
            };
            let gi: Vec<f64> = o.inputs.iter().map(|x| x / params.big_m).collect();
            let go = o.outputs.clone();
            let mut spec = ModelSpec::plain(ModelFamily::Hdse);
            spec.partition = Some(if cook {
                full
            } else {
                HybridPartition::new(0, s)
            });
            spec.tau_plus_free = true;
            ResolvedPreset {
                name: static_name,
                rts: RtsSpec::vrs(),
                spec,
                direction: preset_direction(
                    ctx,
                    static_name,
                    &DirectionSpec::Custom {
                        inputs: gi,
                        outputs: go,
                    },
                )?,
                transform: ScoreTransform::OutputRetentionInverse,
                warnings: vec![TRANSFORM_UNVERIFIED.to_string()],
                undefined_reason: None,
                infeasible_reason: None,
            }
        }
        _ => {
            return Err(CatalogError::UnknownPreset {
                name: name.to_string(),
            })
        }
    };
    Ok(rp)
}

/// Resolves and solves a preset, applying its score transform.
pub fn run_preset(
    name: &str,
    ctx: &EvaluationContext,
    params: &PresetParams,
) -> Result<ScoreResult, CatalogError> {
    let rp = resolve_preset(name, ctx, params)?;
    // the preset imposes its own RTS
    let run_ctx = ctx.dataset().context(ctx.evaluated_index(), rp.rts)?;

    if let Some(reason) = rp.infeasible_reason.clone() {
        let mut res = non_optimal(&rp, SolveStatus::Infeasible);
        res.diagnostics.push(reason);
        return Ok(res);
    }
    if let Some(reason) = rp.undefined_reason.clone() {
        let mut res = non_optimal(&rp, SolveStatus::Undefined);
        res.diagnostics.push(reason);
        return Ok(res);
    }

    let mut res = solve_model(&run_ctx, &rp.direction, &rp.spec)?;
    res.warnings.extend(rp.warnings.iter().cloned());
    if res.status == SolveStatus::Undefined
        && rp.transform == ScoreTransform::SolvedObjective
        && res.objective_value.is_some()
    {
        // only the product-form index is undefined here; this preset
        // reports the solved objective, which the bundle still carries
        res.status = SolveStatus::Optimal;
        res.score = res.objective_value;
        let notes = std::mem::take(&mut res.diagnostics);
        res.warnings.extend(notes);
        if let Some(b) = &res.bundle {
            res.projection = Some(crate::models::project(
                run_ctx.evaluated(),
                &rp.direction,
                b,
            ));
        }
        return Ok(res);
    }
    if res.status != SolveStatus::Optimal {
        return Ok(res);
    }
    let bundle = res
        .bundle
        .as_ref()
        .expect("optimal result carries a bundle");
    match rp.transform {
        // already the family score
        ScoreTransform::OnePlusTau
        | ScoreTransform::OnePlusSumTauMinus
        | ScoreTransform::FractionalObjective
        | ScoreTransform::ProductIndex => {}
        ScoreTransform::SolvedObjective => {
            res.score = res.objective_value;
        }
        ScoreTransform::InputExpansionFactor => {
            let tau = bundle.tau_radial.unwrap_or(0.0);
            let relaxation = bundle.mean_tau_plus() * ctx.num_outputs() as f64 / params.big_m;
            res.score = Some(1.0 + tau);
            if relaxation > 1e-9 {
                res.warnings.push(format!(
                    "big-M output relaxation active (total scaled relaxation {relaxation:.3e})"
                ));
            }
        }
        ScoreTransform::OutputRetentionInverse => {
            let tau = bundle.tau_radial_output.unwrap_or(0.0);
            let relaxation = bundle.mean_tau_minus() * ctx.num_inputs() as f64 / params.big_m;
            if 1.0 - tau <= 1e-12 {
                res.status = SolveStatus::Undefined;
                res.score = None;
                res.diagnostics.push(format!(
                    "output retention factor 1 - tau = {} is not positive; the oriented index is undefined",
                    1.0 - tau
                ));
            } else {
                res.score = Some(1.0 / (1.0 - tau));
            }
            if relaxation > 1e-9 {
                res.warnings.push(format!(
                    "big-M input relaxation active (total scaled relaxation {relaxation:.3e})"
                ));
            }
        }
    }
    Ok(res)
}

fn non_optimal(rp: &ResolvedPreset, status: SolveStatus) -> ScoreResult {
    ScoreResult {
        family: rp.spec.family,
        status,
        score: None,
        objective_value: None,
        bundle: None,
        projection: None,
        decomposition: None,
        diagnostics: Vec::new(),
        warnings: rp.warnings.clone(),
    }
}
