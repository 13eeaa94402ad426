//! The directional super-efficiency model families.
//!
//! Every family shares the same envelopment block — reference intensity
//! weights against the evaluated DMU's data, expanded inputs and contracted
//! outputs along a direction vector, intensity-sum bounds — and differs in
//! how the adjustment factors are tied together and priced:
//!
//! * radial: one sign-free factor for all inputs and outputs at once;
//! * fractional / linear generalized: one non-negative factor per input and
//!   per output, priced as a ratio or as a weighted sum;
//! * hybrid: leading blocks move radially, the rest componentwise;
//! * input-oriented radial / non-radial: outputs pinned at their observed
//!   levels.
//!
//! Solvers return a [`ScoreResult`] whose status distinguishes genuine LP
//! infeasibility from index formulas that lose meaning at the optimum
//! ("undefined"), mirroring how published comparison tables report them.

use crate::dataset::{DmuRecord, EvaluationContext};
use crate::direction::{validate_direction, DirectionError, DirectionVector, Provenance, Strategy};
use crate::lp::{FractionalProgram, LinearProgram, LpError, LpOutcome, Relation, VarId};
use serde::Serialize;
use thiserror::Error;

/// Stable family identifiers shared by the preset registry and CLI config.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    Rdse,
    FractionalGdse,
    LinearGdse,
    Hdse,
    InputRadial,
    InputNonradial,
}

impl ModelFamily {
    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "rdse" => Some(Self::Rdse),
            "fractional_gdse" => Some(Self::FractionalGdse),
            "linear_gdse" => Some(Self::LinearGdse),
            "hdse" => Some(Self::Hdse),
            "input_radial" => Some(Self::InputRadial),
            "input_nonradial" => Some(Self::InputNonradial),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Rdse => "rdse",
            Self::FractionalGdse => "fractional_gdse",
            Self::LinearGdse => "linear_gdse",
            Self::Hdse => "hdse",
            Self::InputRadial => "input_radial",
            Self::InputNonradial => "input_nonradial",
        };
        f.write_str(s)
    }
}

/// Zero-pattern index sets that govern feasibility without solving anything.
///
/// `problem_inputs` holds inputs where the evaluated DMU sits at zero while
/// every reference DMU is positive; `problem_outputs` holds outputs the
/// reference set cannot produce at all while the evaluated DMU does.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlackIndexSets {
    pub problem_inputs: Vec<usize>,
    pub problem_outputs: Vec<usize>,
}

impl SlackIndexSets {
    pub fn is_clear(&self) -> bool {
        self.problem_inputs.is_empty() && self.problem_outputs.is_empty()
    }
}

pub fn slack_index_sets(ctx: &EvaluationContext) -> SlackIndexSets {
    let o = ctx.evaluated();
    let problem_inputs = (0..ctx.num_inputs())
        .filter(|&i| o.inputs[i] == 0.0 && ctx.reference().all(|(_, d)| d.inputs[i] > 0.0))
        .collect();
    let problem_outputs = (0..ctx.num_outputs())
        .filter(|&r| o.outputs[r] > 0.0 && ctx.reference().all(|(_, d)| d.outputs[r] == 0.0))
        .collect();
    SlackIndexSets {
        problem_inputs,
        problem_outputs,
    }
}

/// Hybrid partition: the first `m1` inputs and `s1` outputs move radially,
/// the remainder componentwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HybridPartition {
    pub m1: usize,
    pub s1: usize,
}

impl HybridPartition {
    pub fn new(m1: usize, s1: usize) -> Self {
        Self { m1, s1 }
    }
}

/// Optimal weights and adjustment factors of one solved model.
///
/// `tau_minus` / `tau_plus` always hold the *effective per-component*
/// factors (radial blocks repeat their shared scalar), which makes
/// projection, binding checks, and decomposition uniform across families.
/// The raw radial scalars are kept alongside for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionBundle {
    /// `(dataset index, weight)` per reference DMU, in dataset order.
    pub lambdas: Vec<(usize, f64)>,
    /// Sign-free radial factor (radial families) or the input-block radial
    /// factor (hybrid).
    pub tau_radial: Option<f64>,
    /// Output-block radial factor (hybrid only).
    pub tau_radial_output: Option<f64>,
    /// Effective per-input adjustment factors.
    pub tau_minus: Vec<f64>,
    /// Effective per-output adjustment factors.
    pub tau_plus: Vec<f64>,
}

impl SolutionBundle {
    pub fn lambda_sum(&self) -> f64 {
        self.lambdas.iter().map(|(_, v)| v).sum()
    }

    pub fn mean_tau_minus(&self) -> f64 {
        mean(&self.tau_minus)
    }

    pub fn mean_tau_plus(&self) -> f64 {
        mean(&self.tau_plus)
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Frontier point associated with an optimal bundle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Projection {
    pub inputs: Vec<f64>,
    pub outputs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Undefined,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Optimal => "optimal",
            Self::Infeasible => "infeasible",
            Self::Undefined => "undefined",
        };
        f.write_str(s)
    }
}

/// Outcome of one model evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct ScoreResult {
    pub family: ModelFamily,
    pub status: SolveStatus,
    /// Reported super-efficiency index (family transform of the bundle).
    pub score: Option<f64>,
    /// Raw solved objective of the underlying program.
    pub objective_value: Option<f64>,
    pub bundle: Option<SolutionBundle>,
    pub projection: Option<Projection>,
    /// `(input-side factor, output-side factor)`; product equals the score.
    pub decomposition: Option<(f64, f64)>,
    /// Why a non-optimal status was returned, named by the check that
    /// triggered it.
    pub diagnostics: Vec<String>,
    pub warnings: Vec<String>,
}

impl ScoreResult {
    fn non_optimal(family: ModelFamily, status: SolveStatus) -> Self {
        Self {
            family,
            status,
            score: None,
            objective_value: None,
            bundle: None,
            projection: None,
            decomposition: None,
            diagnostics: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn score_or_nan(&self) -> f64 {
        self.score.unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Direction(#[from] DirectionError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("invalid hybrid partition (m1 = {m1}, s1 = {s1}) for shape ({m}, {s})")]
    InvalidPartition {
        m1: usize,
        s1: usize,
        m: usize,
        s: usize,
    },
    #[error("decomposition is not defined for family {family}")]
    UnsupportedDecomposition { family: ModelFamily },
    #[error("output-side factor undefined: mean output adjustment {mean_tau_plus} >= 1")]
    UndefinedOutputFactor { mean_tau_plus: f64 },
}

/// Full model invocation: family plus the switches some families take.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelSpec {
    pub family: ModelFamily,
    /// Radial family only: keep the projected outputs non-negative.
    pub enforce_output_nonneg: bool,
    /// Hybrid family only.
    pub partition: Option<HybridPartition>,
    /// Hybrid derivations only: drop the sign restriction on the input or
    /// output adjustment block.
    pub tau_minus_free: bool,
    pub tau_plus_free: bool,
}

impl ModelSpec {
    pub fn plain(family: ModelFamily) -> Self {
        Self {
            family,
            enforce_output_nonneg: family == ModelFamily::Rdse,
            partition: None,
            tau_minus_free: false,
            tau_plus_free: false,
        }
    }
}

/// Dispatches to the family solvers.
pub fn solve_model(
    ctx: &EvaluationContext,
    g: &DirectionVector,
    spec: &ModelSpec,
) -> Result<ScoreResult, ModelError> {
    match spec.family {
        ModelFamily::Rdse => solve_rdse(ctx, g, spec.enforce_output_nonneg),
        ModelFamily::FractionalGdse => solve_fractional_gdse(ctx, g),
        ModelFamily::LinearGdse => solve_linear_gdse(ctx, g),
        ModelFamily::Hdse => {
            let partition = spec.partition.unwrap_or(HybridPartition::new(0, 0));
            solve_hdse_with(
                ctx,
                g,
                partition,
                HdseOptions {
                    tau_minus_free: spec.tau_minus_free,
                    tau_plus_free: spec.tau_plus_free,
                },
            )
        }
        ModelFamily::InputRadial => solve_input_radial(ctx, g.g_minus()),
        ModelFamily::InputNonradial => solve_input_nonradial(ctx, g.g_minus()),
    }
}

// ---------------------------------------------------------------------------
// shared assembly
// ---------------------------------------------------------------------------

trait ProgramBuilder {
    fn var(&mut self, name: String, lower: f64, upper: f64) -> VarId;
    fn row(&mut self, terms: &[(VarId, f64)], relation: Relation, rhs: f64);
}

impl ProgramBuilder for LinearProgram {
    fn var(&mut self, name: String, lower: f64, upper: f64) -> VarId {
        self.add_var(name, lower, upper)
    }
    fn row(&mut self, terms: &[(VarId, f64)], relation: Relation, rhs: f64) {
        self.add_constraint(terms, relation, rhs);
    }
}

impl ProgramBuilder for FractionalProgram {
    fn var(&mut self, name: String, lower: f64, upper: f64) -> VarId {
        self.add_var(name, lower, upper)
    }
    fn row(&mut self, terms: &[(VarId, f64)], relation: Relation, rhs: f64) {
        self.add_constraint(terms, relation, rhs);
    }
}

fn add_lambdas<B: ProgramBuilder>(b: &mut B, ctx: &EvaluationContext) -> Vec<(usize, VarId)> {
    ctx.reference()
        .map(|(j, d)| (j, b.var(format!("lambda[{}]", d.name), 0.0, f64::INFINITY)))
        .collect()
}

/// Adds the envelopment rows. `input_tau[i]` / `output_tau[r]` give the
/// adjustment variable and direction coefficient wired into each row; `None`
/// (or a zero coefficient) leaves the row fixed at the observed level.
fn add_envelope<B: ProgramBuilder>(
    b: &mut B,
    ctx: &EvaluationContext,
    lambdas: &[(usize, VarId)],
    input_tau: &[Option<(VarId, f64)>],
    output_tau: &[Option<(VarId, f64)>],
) {
    let o = ctx.evaluated();
    let ds = ctx.dataset();
    for (i, slot) in input_tau.iter().enumerate() {
        let mut terms: Vec<(VarId, f64)> = lambdas
            .iter()
            .map(|&(j, v)| (v, ds.dmu(j).inputs[i]))
            .collect();
        if let Some((tau, coeff)) = *slot {
            if coeff != 0.0 {
                terms.push((tau, -coeff));
            }
        }
        b.row(&terms, Relation::Le, o.inputs[i]);
    }
    for (r, slot) in output_tau.iter().enumerate() {
        let mut terms: Vec<(VarId, f64)> = lambdas
            .iter()
            .map(|&(j, v)| (v, ds.dmu(j).outputs[r]))
            .collect();
        if let Some((tau, coeff)) = *slot {
            if coeff != 0.0 {
                terms.push((tau, coeff));
            }
        }
        b.row(&terms, Relation::Ge, o.outputs[r]);
    }
    let sum: Vec<(VarId, f64)> = lambdas.iter().map(|&(_, v)| (v, 1.0)).collect();
    let rts = ctx.rts();
    if rts.lower() > 0.0 {
        b.row(&sum, Relation::Ge, rts.lower());
    }
    if rts.upper().is_finite() {
        b.row(&sum, Relation::Le, rts.upper());
    }
}

fn label_set(labels: &[String], idx: &[usize]) -> String {
    if idx.is_empty() {
        "{}".to_string()
    } else {
        let names: Vec<&str> = idx.iter().map(|&k| labels[k].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Diagnostic for an infeasible run: names the zero-pattern set and the
/// direction components that fail the necessary condition.
fn infeasibility_diagnostics(ctx: &EvaluationContext, g: &DirectionVector) -> Vec<String> {
    let sets = slack_index_sets(ctx);
    let ds = ctx.dataset();
    let mut out = Vec::new();
    let out_violations: Vec<usize> = sets
        .problem_outputs
        .iter()
        .copied()
        .filter(|&r| g.g_plus()[r] <= 0.0)
        .collect();
    if !out_violations.is_empty() {
        let zeros: Vec<String> = out_violations
            .iter()
            .map(|&r| format!("g\u{207a}_{} = 0", r + 1))
            .collect();
        out.push(format!(
            "necessary direction condition violated: Q_o = {} and {}",
            label_set(ds.output_labels(), &sets.problem_outputs),
            zeros.join(", ")
        ));
    }
    let in_violations: Vec<usize> = sets
        .problem_inputs
        .iter()
        .copied()
        .filter(|&i| g.g_minus()[i] <= 0.0)
        .collect();
    if !in_violations.is_empty() {
        let zeros: Vec<String> = in_violations
            .iter()
            .map(|&i| format!("g\u{207b}_{} = 0", i + 1))
            .collect();
        out.push(format!(
            "necessary direction condition violated: P_o = {} and {}",
            label_set(ds.input_labels(), &sets.problem_inputs),
            zeros.join(", ")
        ));
    }
    if out.is_empty() {
        out.push("no admissible intensity combination satisfies the envelopment rows under the given bounds".to_string());
    }
    out
}

fn welldef_warning(ctx: &EvaluationContext, g: &DirectionVector) -> Option<String> {
    let report = validate_direction(ctx, g).ok()?;
    let ok = report.welldef_grs_ok || (ctx.rts().is_vrs() && report.welldef_vrs_ok);
    if ok {
        None
    } else {
        Some("direction fails the well-definedness bound; the score may fall below one".to_string())
    }
}

fn negative_projection_warning(ctx: &EvaluationContext, proj: &Projection) -> Option<String> {
    if ctx.dataset().allow_negative() {
        return None;
    }
    let labels = ctx.dataset().output_labels();
    let bad: Vec<String> = proj
        .outputs
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < -1e-12)
        .map(|(r, &v)| format!("{} = {:.4}", labels[r], v))
        .collect();
    if bad.is_empty() {
        None
    } else {
        Some(format!(
            "negative-projection check: projected point is technologically impossible ({})",
            bad.join(", ")
        ))
    }
}

/// Computes the frontier point `(x + tau_minus * g_minus, y - tau_plus * g_plus)`.
pub fn project(o: &DmuRecord, g: &DirectionVector, bundle: &SolutionBundle) -> Projection {
    let inputs = o
        .inputs
        .iter()
        .zip(g.g_minus())
        .zip(&bundle.tau_minus)
        .map(|((x, gm), t)| x + t * gm)
        .collect();
    let outputs = o
        .outputs
        .iter()
        .zip(g.g_plus())
        .zip(&bundle.tau_plus)
        .map(|((y, gp), t)| y - t * gp)
        .collect();
    Projection { inputs, outputs }
}

/// Splits a score into its input-side and output-side factors.
///
/// For the generalized and hybrid families this is the mean-adjustment
/// product form; the input-oriented families keep their whole index on the
/// input side with an output factor of exactly one. The plain radial family
/// has no product decomposition.
pub fn decompose(bundle: &SolutionBundle, family: ModelFamily) -> Result<(f64, f64), ModelError> {
    match family {
        ModelFamily::Rdse => Err(ModelError::UnsupportedDecomposition { family }),
        ModelFamily::InputRadial => Ok((1.0 + bundle.tau_radial.unwrap_or(0.0), 1.0)),
        ModelFamily::InputNonradial => Ok((1.0 + bundle.tau_minus.iter().sum::<f64>(), 1.0)),
        ModelFamily::FractionalGdse | ModelFamily::LinearGdse | ModelFamily::Hdse => {
            let mp = bundle.mean_tau_plus();
            if mp >= 1.0 {
                return Err(ModelError::UndefinedOutputFactor { mean_tau_plus: mp });
            }
            Ok((1.0 + bundle.mean_tau_minus(), 1.0 / (1.0 - mp)))
        }
    }
}

// ---------------------------------------------------------------------------
// radial model
// ---------------------------------------------------------------------------

/// Radial model: one sign-free factor expands all inputs and contracts all
/// outputs along `g`; the optional flag keeps projected outputs
/// non-negative (a "true" frontier projection), at the cost of feasibility.
pub fn solve_rdse(
    ctx: &EvaluationContext,
    g: &DirectionVector,
    enforce_output_nonneg: bool,
) -> Result<ScoreResult, ModelError> {
    validate_direction(ctx, g)?;
    let mut lp = LinearProgram::new();
    let lambdas = add_lambdas(&mut lp, ctx);
    let tau = lp.var("tau".into(), f64::NEG_INFINITY, f64::INFINITY);
    let input_tau: Vec<_> = g.g_minus().iter().map(|&c| Some((tau, c))).collect();
    let output_tau: Vec<_> = g.g_plus().iter().map(|&c| Some((tau, c))).collect();
    add_envelope(&mut lp, ctx, &lambdas, &input_tau, &output_tau);
    if enforce_output_nonneg {
        let o = ctx.evaluated();
        for (r, &gp) in g.g_plus().iter().enumerate() {
            // y_ro - tau * g_plus_r >= 0
            if gp != 0.0 {
                lp.add_constraint(&[(tau, gp)], Relation::Le, o.outputs[r]);
            }
        }
    }
    lp.set_objective(&[(tau, 1.0)], 1.0);
    let m = ctx.num_inputs();
    let s = ctx.num_outputs();
    match lp.solve()? {
        LpOutcome::Infeasible => {
            let mut res = ScoreResult::non_optimal(ModelFamily::Rdse, SolveStatus::Infeasible);
            res.diagnostics = infeasibility_diagnostics(ctx, g);
            if enforce_output_nonneg {
                res.diagnostics.push(
                    "output non-negativity rows are active; rerun without them to allow negative projections"
                        .to_string(),
                );
            }
            Ok(res)
        }
        LpOutcome::Unbounded => {
            let mut res = ScoreResult::non_optimal(ModelFamily::Rdse, SolveStatus::Undefined);
            res.diagnostics
                .push("radial objective unbounded below for this direction".to_string());
            Ok(res)
        }
        LpOutcome::Optimal(sol) => {
            let t = sol.value(tau);
            let bundle = SolutionBundle {
                lambdas: lambdas.iter().map(|&(j, v)| (j, sol.value(v))).collect(),
                tau_radial: Some(t),
                tau_radial_output: None,
                tau_minus: vec![t; m],
                tau_plus: vec![t; s],
            };
            let projection = project(ctx.evaluated(), g, &bundle);
            let mut warnings = Vec::new();
            if let Some(w) = negative_projection_warning(ctx, &projection) {
                warnings.push(w);
            }
            Ok(ScoreResult {
                family: ModelFamily::Rdse,
                status: SolveStatus::Optimal,
                score: Some(1.0 + t),
                objective_value: Some(sol.objective),
                bundle: Some(bundle),
                projection: Some(projection),
                decomposition: None,
                diagnostics: Vec::new(),
                warnings,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// generalized models
// ---------------------------------------------------------------------------

struct GdseVars {
    lambdas: Vec<(usize, VarId)>,
    tau_minus: Vec<VarId>,
    tau_plus: Vec<VarId>,
}

fn add_gdse_block<B: ProgramBuilder>(
    b: &mut B,
    ctx: &EvaluationContext,
    g: &DirectionVector,
) -> GdseVars {
    let lambdas = add_lambdas(b, ctx);
    let tau_minus: Vec<VarId> = (0..ctx.num_inputs())
        .map(|i| b.var(format!("tau-[{}]", i + 1), 0.0, f64::INFINITY))
        .collect();
    let tau_plus: Vec<VarId> = (0..ctx.num_outputs())
        .map(|r| b.var(format!("tau+[{}]", r + 1), 0.0, f64::INFINITY))
        .collect();
    let input_tau: Vec<_> = tau_minus
        .iter()
        .zip(g.g_minus())
        .map(|(&v, &c)| Some((v, c)))
        .collect();
    let output_tau: Vec<_> = tau_plus
        .iter()
        .zip(g.g_plus())
        .map(|(&v, &c)| Some((v, c)))
        .collect();
    add_envelope(b, ctx, &lambdas, &input_tau, &output_tau);
    GdseVars {
        lambdas,
        tau_minus,
        tau_plus,
    }
}

fn gdse_result(
    ctx: &EvaluationContext,
    g: &DirectionVector,
    family: ModelFamily,
    bundle: SolutionBundle,
    objective_value: f64,
    mut warnings: Vec<String>,
) -> ScoreResult {
    let mp = bundle.mean_tau_plus();
    if 1.0 - mp <= 1e-12 {
        let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
        res.diagnostics.push(format!(
            "score undefined: mean output adjustment {mp} reaches one (well-definedness bound violated)"
        ));
        res.objective_value = Some(objective_value);
        res.bundle = Some(bundle);
        res.warnings = warnings;
        return res;
    }
    let score = (1.0 + bundle.mean_tau_minus()) / (1.0 - mp);
    let projection = project(ctx.evaluated(), g, &bundle);
    if let Some(w) = negative_projection_warning(ctx, &projection) {
        warnings.push(w);
    }
    let decomposition = decompose(&bundle, family).ok();
    ScoreResult {
        family,
        status: SolveStatus::Optimal,
        score: Some(score),
        objective_value: Some(objective_value),
        bundle: Some(bundle),
        projection: Some(projection),
        decomposition,
        diagnostics: Vec::new(),
        warnings,
    }
}

/// Fractional generalized model: minimizes the ratio of mean input expansion
/// to mean output retention, solved through the Charnes–Cooper
/// linearization.
pub fn solve_fractional_gdse(
    ctx: &EvaluationContext,
    g: &DirectionVector,
) -> Result<ScoreResult, ModelError> {
    validate_direction(ctx, g)?;
    let mut fp = FractionalProgram::new();
    let vars = add_gdse_block(&mut fp, ctx, g);
    let m = ctx.num_inputs() as f64;
    let s = ctx.num_outputs() as f64;
    let num: Vec<(VarId, f64)> = vars.tau_minus.iter().map(|&v| (v, 1.0 / m)).collect();
    let den: Vec<(VarId, f64)> = vars.tau_plus.iter().map(|&v| (v, -1.0 / s)).collect();
    fp.set_numerator(&num, 1.0);
    fp.set_denominator(&den, 1.0);

    let mut warnings = Vec::new();
    if let Some(w) = welldef_warning(ctx, g) {
        warnings.push(w);
    }
    let family = ModelFamily::FractionalGdse;
    match fp.solve() {
        Err(LpError::DenominatorDegeneracy { t }) => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
            res.diagnostics.push(format!(
                "denominator degeneracy at the linearized optimum (t = {t:e}); direction violates well-definedness"
            ));
            res.warnings = warnings;
            Ok(res)
        }
        Err(e) => Err(e.into()),
        Ok(crate::lp::FractionalOutcome::Infeasible) => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Infeasible);
            res.diagnostics = infeasibility_diagnostics(ctx, g);
            res.warnings = warnings;
            Ok(res)
        }
        Ok(crate::lp::FractionalOutcome::Unbounded) => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
            res.diagnostics
                .push("linearized ratio objective unbounded".to_string());
            res.warnings = warnings;
            Ok(res)
        }
        Ok(crate::lp::FractionalOutcome::Optimal(sol)) => {
            let bundle = SolutionBundle {
                lambdas: vars
                    .lambdas
                    .iter()
                    .map(|&(j, v)| (j, sol.value(v)))
                    .collect(),
                tau_radial: None,
                tau_radial_output: None,
                tau_minus: vars.tau_minus.iter().map(|&v| sol.value(v)).collect(),
                tau_plus: vars.tau_plus.iter().map(|&v| sol.value(v)).collect(),
            };
            Ok(gdse_result(ctx, g, family, bundle, sol.objective, warnings))
        }
    }
}

/// Linear generalized model: minimizes the sum of mean input and output
/// adjustments; the reported index is the product form evaluated at the
/// canonical (lexicographically refined) optimum.
pub fn solve_linear_gdse(
    ctx: &EvaluationContext,
    g: &DirectionVector,
) -> Result<ScoreResult, ModelError> {
    validate_direction(ctx, g)?;
    let m = ctx.num_inputs() as f64;
    let s = ctx.num_outputs() as f64;
    let build = || {
        let mut lp = LinearProgram::new();
        let vars = add_gdse_block(&mut lp, ctx, g);
        let input_part: Vec<(VarId, f64)> = vars.tau_minus.iter().map(|&v| (v, 1.0 / m)).collect();
        let output_part: Vec<(VarId, f64)> = vars.tau_plus.iter().map(|&v| (v, 1.0 / s)).collect();
        (lp, vars, input_part, output_part)
    };

    let mut warnings = Vec::new();
    if let Some(w) = welldef_warning(ctx, g) {
        warnings.push(w);
    }
    let family = ModelFamily::LinearGdse;
    match lexicographic_optimum(&build)? {
        LexOutcome::Infeasible => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Infeasible);
            res.diagnostics = infeasibility_diagnostics(ctx, g);
            res.warnings = warnings;
            Ok(res)
        }
        LexOutcome::Unbounded => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
            res.diagnostics
                .push("linear objective unbounded below".to_string());
            res.warnings = warnings;
            Ok(res)
        }
        LexOutcome::Optimal(lex) => {
            let (_, vars, ..) = build();
            let bundle = SolutionBundle {
                lambdas: vars
                    .lambdas
                    .iter()
                    .map(|&(j, v)| (j, lex.solution.value(v)))
                    .collect(),
                tau_radial: None,
                tau_radial_output: None,
                tau_minus: vars
                    .tau_minus
                    .iter()
                    .map(|&v| lex.solution.value(v))
                    .collect(),
                tau_plus: vars
                    .tau_plus
                    .iter()
                    .map(|&v| lex.solution.value(v))
                    .collect(),
            };
            if let Some(w) = lex.ambiguity_warning() {
                warnings.push(w);
            }
            Ok(gdse_result(ctx, g, family, bundle, lex.objective, warnings))
        }
    }
}

enum LexOutcome {
    Optimal(LexSolution),
    Infeasible,
    Unbounded,
}

struct LexSolution {
    /// Primary optimum (the model's objective value).
    objective: f64,
    /// Canonical point on the optimal face.
    solution: crate::lp::LpSolution,
    /// Range of the output-side adjustment over the optimal face.
    d_min: f64,
    d_max: f64,
}

impl LexSolution {
    /// Ties in the optimum leave the product-form index ambiguous: the
    /// objective pins mean(tau-) + mean(tau+) but not the split, and the
    /// index is 1 + objective / (1 - d). Flag a spread beyond 1e-6.
    fn ambiguity_warning(&self) -> Option<String> {
        let rho_at = |d: f64| 1.0 + self.objective / (1.0 - d);
        if self.d_max >= 1.0 - 1e-9 {
            return Some(
                "alternative optima reach the well-definedness boundary; reported index is basis-dependent"
                    .to_string(),
            );
        }
        let spread = (rho_at(self.d_max) - rho_at(self.d_min)).abs();
        if spread > 1e-6 {
            Some(format!(
                "alternative optimal bases change the reported index by {spread:.3e} (> 1e-6); reporting the canonical optimum"
            ))
        } else {
            None
        }
    }
}

/// Canonical optimum selection for objectives of the form
/// `input_part + output_part`:
///
/// 1. minimize the full objective;
/// 2. on the optimal face, minimize the output part (this makes the
///    product-form index the smallest one consistent with the optimum);
/// 3. with the output part pinned, minimize the input part (so positive
///    adjustment factors keep their rows binding).
///
/// The face is also probed for the maximal output part, which bounds how
/// much an alternative basis could move the reported index. If any probe
/// misbehaves numerically, the primary optimum is kept as-is.
type ObjectivePart = Vec<(VarId, f64)>;

fn lexicographic_optimum<V>(
    build: &dyn Fn() -> (LinearProgram, V, ObjectivePart, ObjectivePart),
) -> Result<LexOutcome, LpError> {
    let (mut lp, _, input_part, output_part) = build();
    let mut full: Vec<(VarId, f64)> = input_part.clone();
    full.extend(output_part.iter().copied());
    lp.set_objective(&full, 0.0);
    let primary = match lp.solve()? {
        LpOutcome::Infeasible => return Ok(LexOutcome::Infeasible),
        LpOutcome::Unbounded => return Ok(LexOutcome::Unbounded),
        LpOutcome::Optimal(sol) => sol,
    };
    let objective = primary.objective;
    let face_eps = 1e-9 * (1.0 + objective.abs());
    let eval = |terms: &[(VarId, f64)], sol: &crate::lp::LpSolution| -> f64 {
        terms.iter().map(|&(v, c)| c * sol.value(v)).sum()
    };
    let primary_d = eval(&output_part, &primary);

    let solve_on_face = |extra_row: Option<(&[(VarId, f64)], f64)>,
                         objective_terms: &[(VarId, f64)]|
     -> Option<crate::lp::LpSolution> {
        let (mut lp, _, input_part, output_part) = build();
        let mut full: Vec<(VarId, f64)> = input_part.clone();
        full.extend(output_part.iter().copied());
        lp.add_constraint(&full, Relation::Le, objective + face_eps);
        if let Some((row, rhs)) = extra_row {
            lp.add_constraint(row, Relation::Le, rhs);
        }
        lp.set_objective(objective_terms, 0.0);
        match lp.solve() {
            Ok(LpOutcome::Optimal(sol)) => Some(sol),
            _ => None,
        }
    };

    let neg_output: Vec<(VarId, f64)> = output_part.iter().map(|&(v, c)| (v, -c)).collect();
    let refined = solve_on_face(None, &output_part).and_then(|d_min_sol| {
        let d_min = d_min_sol.objective;
        let d_max = -solve_on_face(None, &neg_output)?.objective;
        let solution = solve_on_face(Some((&output_part, d_min + face_eps)), &input_part)?;
        Some(LexSolution {
            objective,
            solution,
            d_min,
            d_max,
        })
    });
    Ok(LexOutcome::Optimal(refined.unwrap_or(LexSolution {
        objective,
        solution: primary,
        d_min: primary_d,
        d_max: primary_d,
    })))
}

// ---------------------------------------------------------------------------
// hybrid model
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default)]
pub struct HdseOptions {
    /// Drop the sign restriction on the input adjustment block.
    pub tau_minus_free: bool,
    /// Drop the sign restriction on the output adjustment block.
    pub tau_plus_free: bool,
}

/// Hybrid model with default sign restrictions.
pub fn solve_hdse(
    ctx: &EvaluationContext,
    g: &DirectionVector,
    partition: HybridPartition,
) -> Result<ScoreResult, ModelError> {
    solve_hdse_with(ctx, g, partition, HdseOptions::default())
}

pub fn solve_hdse_with(
    ctx: &EvaluationContext,
    g: &DirectionVector,
    partition: HybridPartition,
    opts: HdseOptions,
) -> Result<ScoreResult, ModelError> {
    validate_direction(ctx, g)?;
    let m = ctx.num_inputs();
    let s = ctx.num_outputs();
    if partition.m1 > m || partition.s1 > s {
        return Err(ModelError::InvalidPartition {
            m1: partition.m1,
            s1: partition.s1,
            m,
            s,
        });
    }
    let mut warnings = Vec::new();
    if let Some(w) = welldef_warning(ctx, g) {
        warnings.push(w);
    }
    if let Some(w) = radial_block_warning(ctx, partition) {
        warnings.push(w);
    }

    let lo_minus = if opts.tau_minus_free {
        f64::NEG_INFINITY
    } else {
        0.0
    };
    let lo_plus = if opts.tau_plus_free {
        f64::NEG_INFINITY
    } else {
        0.0
    };
    let mf = m as f64;
    let sf = s as f64;

    struct HdseVars {
        lambdas: Vec<(usize, VarId)>,
        tau_in_radial: Option<VarId>,
        tau_in_rest: Vec<VarId>,
        tau_out_radial: Option<VarId>,
        tau_out_rest: Vec<VarId>,
    }
    let build = || {
        let mut lp = LinearProgram::new();
        let lambdas = add_lambdas(&mut lp, ctx);
        let tau_in_radial =
            (partition.m1 > 0).then(|| lp.var("tau-[radial]".into(), lo_minus, f64::INFINITY));
        let tau_in_rest: Vec<VarId> = (partition.m1..m)
            .map(|i| lp.var(format!("tau-[{}]", i + 1), lo_minus, f64::INFINITY))
            .collect();
        let tau_out_radial =
            (partition.s1 > 0).then(|| lp.var("tau+[radial]".into(), lo_plus, f64::INFINITY));
        let tau_out_rest: Vec<VarId> = (partition.s1..s)
            .map(|r| lp.var(format!("tau+[{}]", r + 1), lo_plus, f64::INFINITY))
            .collect();
        let input_tau: Vec<Option<(VarId, f64)>> = (0..m)
            .map(|i| {
                if i < partition.m1 {
                    tau_in_radial.map(|v| (v, g.g_minus()[i]))
                } else {
                    Some((tau_in_rest[i - partition.m1], g.g_minus()[i]))
                }
            })
            .collect();
        let output_tau: Vec<Option<(VarId, f64)>> = (0..s)
            .map(|r| {
                if r < partition.s1 {
                    tau_out_radial.map(|v| (v, g.g_plus()[r]))
                } else {
                    Some((tau_out_rest[r - partition.s1], g.g_plus()[r]))
                }
            })
            .collect();
        add_envelope(&mut lp, ctx, &lambdas, &input_tau, &output_tau);

        let mut input_part: Vec<(VarId, f64)> = Vec::new();
        if let Some(v) = tau_in_radial {
            input_part.push((v, partition.m1 as f64 / mf));
        }
        input_part.extend(tau_in_rest.iter().map(|&v| (v, 1.0 / mf)));
        let mut output_part: Vec<(VarId, f64)> = Vec::new();
        if let Some(v) = tau_out_radial {
            output_part.push((v, partition.s1 as f64 / sf));
        }
        output_part.extend(tau_out_rest.iter().map(|&v| (v, 1.0 / sf)));
        let vars = HdseVars {
            lambdas,
            tau_in_radial,
            tau_in_rest,
            tau_out_radial,
            tau_out_rest,
        };
        (lp, vars, input_part, output_part)
    };

    let extract = |sol: &crate::lp::LpSolution| -> SolutionBundle {
        let (_, vars, ..) = build();
        let tin = vars.tau_in_radial.map(|v| sol.value(v));
        let tout = vars.tau_out_radial.map(|v| sol.value(v));
        let tau_minus: Vec<f64> = (0..m)
            .map(|i| {
                if i < partition.m1 {
                    tin.unwrap_or(0.0)
                } else {
                    sol.value(vars.tau_in_rest[i - partition.m1])
                }
            })
            .collect();
        let tau_plus: Vec<f64> = (0..s)
            .map(|r| {
                if r < partition.s1 {
                    tout.unwrap_or(0.0)
                } else {
                    sol.value(vars.tau_out_rest[r - partition.s1])
                }
            })
            .collect();
        SolutionBundle {
            lambdas: vars
                .lambdas
                .iter()
                .map(|&(j, v)| (j, sol.value(v)))
                .collect(),
            tau_radial: tin,
            tau_radial_output: tout,
            tau_minus,
            tau_plus,
        }
    };

    let family = ModelFamily::Hdse;
    if opts.tau_minus_free || opts.tau_plus_free {
        // big-M derivations: single solve, the product index no longer
        // applies (callers read their own factor off the bundle)
        let (mut lp, _, input_part, output_part) = build();
        let mut obj = input_part;
        obj.extend(output_part);
        lp.set_objective(&obj, 0.0);
        return match lp.solve()? {
            LpOutcome::Infeasible => {
                let mut res = ScoreResult::non_optimal(family, SolveStatus::Infeasible);
                res.diagnostics = infeasibility_diagnostics(ctx, g);
                res.warnings = warnings;
                Ok(res)
            }
            LpOutcome::Unbounded => {
                let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
                res.diagnostics.push(
                    "hybrid objective unbounded below (sign restrictions removed)".to_string(),
                );
                res.warnings = warnings;
                Ok(res)
            }
            LpOutcome::Optimal(sol) => {
                let bundle = extract(&sol);
                let mp = bundle.mean_tau_plus();
                let score =
                    (1.0 - mp > 1e-12).then(|| (1.0 + bundle.mean_tau_minus()) / (1.0 - mp));
                let projection = project(ctx.evaluated(), g, &bundle);
                Ok(ScoreResult {
                    family,
                    status: SolveStatus::Optimal,
                    score,
                    objective_value: Some(sol.objective),
                    bundle: Some(bundle),
                    projection: Some(projection),
                    decomposition: None,
                    diagnostics: Vec::new(),
                    warnings,
                })
            }
        };
    }

    match lexicographic_optimum(&build)? {
        LexOutcome::Infeasible => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Infeasible);
            res.diagnostics = infeasibility_diagnostics(ctx, g);
            res.warnings = warnings;
            Ok(res)
        }
        LexOutcome::Unbounded => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
            res.diagnostics
                .push("hybrid objective unbounded below".to_string());
            res.warnings = warnings;
            Ok(res)
        }
        LexOutcome::Optimal(lex) => {
            let bundle = extract(&lex.solution);
            if let Some(w) = lex.ambiguity_warning() {
                warnings.push(w);
            }
            Ok(gdse_result(ctx, g, family, bundle, lex.objective, warnings))
        }
    }
}

fn radial_block_warning(ctx: &EvaluationContext, partition: HybridPartition) -> Option<String> {
    let ds = ctx.dataset();
    for dmu in ds.dmus() {
        for i in 0..partition.m1 {
            if dmu.inputs[i] <= 0.0 {
                return Some(format!(
                    "radial-block data check: {} has non-positive {} (radial blocks assume positive data)",
                    dmu.name,
                    ds.input_labels()[i]
                ));
            }
        }
        for r in 0..partition.s1 {
            if dmu.outputs[r] <= 0.0 {
                return Some(format!(
                    "radial-block data check: {} has non-positive {} (radial blocks assume positive data)",
                    dmu.name,
                    ds.output_labels()[r]
                ));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// input-oriented models
// ---------------------------------------------------------------------------

fn input_only_direction(
    ctx: &EvaluationContext,
    g_minus: &[f64],
) -> Result<DirectionVector, DirectionError> {
    let mut p = Provenance {
        strategy: Strategy::Custom,
        include_self: None,
        weights: None,
        preset: None,
        notes: Vec::new(),
    };
    p.notes.push("input-oriented (g+ = 0)".to_string());
    DirectionVector::new(g_minus.to_vec(), vec![0.0; ctx.num_outputs()], p)
}

fn input_oriented_infeasibility(ctx: &EvaluationContext) -> Vec<String> {
    let sets = slack_index_sets(ctx);
    let ds = ctx.dataset();
    if ctx.rts().is_crs() && !sets.problem_outputs.is_empty() {
        vec![format!(
            "zero-output-pattern feasibility check: Q_o = {} is nonempty, so the input-oriented model cannot reach the fixed outputs",
            label_set(ds.output_labels(), &sets.problem_outputs)
        )]
    } else {
        vec![
            "outputs cannot be covered by any admissible intensity combination under the given bounds"
                .to_string(),
        ]
    }
}

/// Radial input-oriented model: outputs held at their observed levels, one
/// sign-free factor expands the inputs along `g_minus`.
pub fn solve_input_radial(
    ctx: &EvaluationContext,
    g_minus: &[f64],
) -> Result<ScoreResult, ModelError> {
    let g = input_only_direction(ctx, g_minus)?;
    validate_direction(ctx, &g)?;
    let mut lp = LinearProgram::new();
    let lambdas = add_lambdas(&mut lp, ctx);
    let tau = lp.var("tau".into(), f64::NEG_INFINITY, f64::INFINITY);
    let input_tau: Vec<_> = g_minus.iter().map(|&c| Some((tau, c))).collect();
    let output_tau: Vec<Option<(VarId, f64)>> = vec![None; ctx.num_outputs()];
    add_envelope(&mut lp, ctx, &lambdas, &input_tau, &output_tau);
    lp.set_objective(&[(tau, 1.0)], 1.0);
    let family = ModelFamily::InputRadial;
    match lp.solve()? {
        LpOutcome::Infeasible => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Infeasible);
            res.diagnostics = input_oriented_infeasibility(ctx);
            Ok(res)
        }
        LpOutcome::Unbounded => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
            res.diagnostics
                .push("input-oriented objective unbounded below".to_string());
            Ok(res)
        }
        LpOutcome::Optimal(sol) => {
            let t = sol.value(tau);
            let bundle = SolutionBundle {
                lambdas: lambdas.iter().map(|&(j, v)| (j, sol.value(v))).collect(),
                tau_radial: Some(t),
                tau_radial_output: None,
                tau_minus: vec![t; ctx.num_inputs()],
                tau_plus: vec![0.0; ctx.num_outputs()],
            };
            let projection = project(ctx.evaluated(), &g, &bundle);
            let decomposition = decompose(&bundle, family).ok();
            Ok(ScoreResult {
                family,
                status: SolveStatus::Optimal,
                score: Some(1.0 + t),
                objective_value: Some(sol.objective),
                bundle: Some(bundle),
                projection: Some(projection),
                decomposition,
                diagnostics: Vec::new(),
                warnings: Vec::new(),
            })
        }
    }
}

/// Non-radial input-oriented model: per-input factors, outputs fixed; the
/// index is one plus the *sum* of the factors.
pub fn solve_input_nonradial(
    ctx: &EvaluationContext,
    g_minus: &[f64],
) -> Result<ScoreResult, ModelError> {
    let g = input_only_direction(ctx, g_minus)?;
    validate_direction(ctx, &g)?;
    let mut lp = LinearProgram::new();
    let lambdas = add_lambdas(&mut lp, ctx);
    let tau_minus: Vec<VarId> = (0..ctx.num_inputs())
        .map(|i| lp.var(format!("tau-[{}]", i + 1), 0.0, f64::INFINITY))
        .collect();
    let input_tau: Vec<_> = tau_minus
        .iter()
        .zip(g_minus)
        .map(|(&v, &c)| Some((v, c)))
        .collect();
    let output_tau: Vec<Option<(VarId, f64)>> = vec![None; ctx.num_outputs()];
    add_envelope(&mut lp, ctx, &lambdas, &input_tau, &output_tau);
    let obj: Vec<(VarId, f64)> = tau_minus.iter().map(|&v| (v, 1.0)).collect();
    lp.set_objective(&obj, 1.0);
    let family = ModelFamily::InputNonradial;
    match lp.solve()? {
        LpOutcome::Infeasible => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Infeasible);
            res.diagnostics = input_oriented_infeasibility(ctx);
            Ok(res)
        }
        LpOutcome::Unbounded => {
            let mut res = ScoreResult::non_optimal(family, SolveStatus::Undefined);
            res.diagnostics
                .push("input-oriented objective unbounded below".to_string());
            Ok(res)
        }
        LpOutcome::Optimal(sol) => {
            let taus: Vec<f64> = tau_minus.iter().map(|&v| sol.value(v)).collect();
            let score = 1.0 + taus.iter().sum::<f64>();
            let bundle = SolutionBundle {
                lambdas: lambdas.iter().map(|&(j, v)| (j, sol.value(v))).collect(),
                tau_radial: None,
                tau_radial_output: None,
                tau_minus: taus,
                tau_plus: vec![0.0; ctx.num_outputs()],
            };
            let projection = project(ctx.evaluated(), &g, &bundle);
            let decomposition = decompose(&bundle, family).ok();
            Ok(ScoreResult {
                family,
                status: SolveStatus::Optimal,
                score: Some(score),
                objective_value: Some(sol.objective),
                bundle: Some(bundle),
                projection: Some(projection),
                decomposition,
                diagnostics: Vec::new(),
                warnings: Vec::new(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, DmuRecord, RtsSpec};
    use crate::direction::{build_direction, DirectionSpec};

    fn table1() -> Dataset {
        Dataset::validate(
            vec![
                DmuRecord::new("DMU1", vec![1.0], vec![1.0, 0.0]),
                DmuRecord::new("DMU2", vec![1.0], vec![0.0, 1.0]),
                DmuRecord::new("DMU3", vec![1.0], vec![0.0, 2.0]),
            ],
            false,
        )
        .unwrap()
    }

    fn table5() -> Dataset {
        Dataset::validate(
            vec![
                DmuRecord::new("DMU1", vec![1.0, 5.0], vec![1.0, 1.0]),
                DmuRecord::new("DMU2", vec![4.0, 2.0], vec![0.0, 1.0]),
                DmuRecord::new("DMU3", vec![8.0, 1.0], vec![0.0, 1.0]),
            ],
            false,
        )
        .unwrap()
    }

    fn table9() -> Dataset {
        Dataset::validate(
            vec![
                DmuRecord::new("DMU1", vec![1.0, 6.0], vec![1.0]),
                DmuRecord::new("DMU2", vec![2.0, 3.0], vec![1.0]),
                DmuRecord::new("DMU3", vec![5.0, 2.0], vec![1.0]),
            ],
            false,
        )
        .unwrap()
    }

    fn colmax(ctx: &EvaluationContext) -> DirectionVector {
        build_direction(ctx, &DirectionSpec::ColumnMax, true).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn slack_sets_on_shared_tables() {
        let ds = table5();
        let s1 = slack_index_sets(&ds.context(0, RtsSpec::crs()).unwrap());
        assert_eq!(s1.problem_outputs, vec![0]);
        assert!(s1.problem_inputs.is_empty());
        let s2 = slack_index_sets(&ds.context(1, RtsSpec::crs()).unwrap());
        assert!(s2.is_clear());

        let pos = table9();
        for o in 0..3 {
            assert!(slack_index_sets(&pos.context(o, RtsSpec::crs()).unwrap()).is_clear());
        }
    }

    #[test]
    fn radial_with_nonneg_rows_is_infeasible_on_the_one_input_table() {
        let ds = table1();
        let ctx = ds.context(2, RtsSpec::crs()).unwrap();
        let g = DirectionVector::new(
            vec![1.0],
            vec![1.0, 2.0],
            Provenance {
                strategy: Strategy::Custom,
                include_self: None,
                weights: None,
                preset: None,
                notes: vec![],
            },
        )
        .unwrap();
        let with = solve_rdse(&ctx, &g, true).unwrap();
        assert_eq!(with.status, SolveStatus::Infeasible);

        let without = solve_rdse(&ctx, &g, false).unwrap();
        assert_eq!(without.status, SolveStatus::Optimal);
        assert_close(without.score.unwrap(), 1.3333, 1e-4);
        let proj = without.projection.unwrap();
        assert_close(proj.inputs[0], 1.3333, 1e-4);
        assert_close(proj.outputs[0], -0.3333, 1e-4);
        assert_close(proj.outputs[1], 1.3333, 1e-4);
        assert!(!without.warnings.is_empty(), "negative projection flagged");
    }

    #[test]
    fn radial_twin_scores_one() {
        let ds = Dataset::validate(
            vec![
                DmuRecord::new("A", vec![2.0, 3.0], vec![1.0, 4.0]),
                DmuRecord::new("B", vec![2.0, 3.0], vec![1.0, 4.0]),
            ],
            false,
        )
        .unwrap();
        for rts in [RtsSpec::vrs(), RtsSpec::crs()] {
            let ctx = ds.context(0, rts).unwrap();
            let g = colmax(&ctx);
            let res = solve_rdse(&ctx, &g, false).unwrap();
            assert_eq!(res.status, SolveStatus::Optimal);
            assert_close(res.score.unwrap(), 1.0, 1e-9);
        }
    }

    #[test]
    fn fractional_matches_published_two_output_scores() {
        let ds = table5();
        let expect = [2.3750, 1.1286, 1.1000];
        for (o, want) in expect.iter().enumerate() {
            let ctx = ds.context(o, RtsSpec::crs()).unwrap();
            let res = solve_fractional_gdse(&ctx, &colmax(&ctx)).unwrap();
            assert_eq!(res.status, SolveStatus::Optimal);
            assert_close(res.score.unwrap(), *want, 1e-4);
        }
    }

    #[test]
    fn fractional_matches_published_single_output_scores() {
        let ds = table9();
        let expect = [1.1000, 1.1667, 1.0833];
        for (o, want) in expect.iter().enumerate() {
            let ctx = ds.context(o, RtsSpec::crs()).unwrap();
            let res = solve_fractional_gdse(&ctx, &colmax(&ctx)).unwrap();
            assert_close(res.score.unwrap(), *want, 1e-4);
        }
    }

    #[test]
    fn linear_index_differs_from_fractional_on_the_middle_unit() {
        let ds = table5();
        let expect = [2.3750, 1.1304, 1.1000];
        for (o, want) in expect.iter().enumerate() {
            let ctx = ds.context(o, RtsSpec::crs()).unwrap();
            let res = solve_linear_gdse(&ctx, &colmax(&ctx)).unwrap();
            assert_eq!(res.status, SolveStatus::Optimal);
            assert_close(res.score.unwrap(), *want, 1e-4);
        }
    }

    #[test]
    fn dominated_unit_scores_one_with_zero_adjustments() {
        let ds = Dataset::validate(
            vec![
                DmuRecord::new("good", vec![1.0, 1.0], vec![3.0]),
                DmuRecord::new("bad", vec![2.0, 2.0], vec![1.0]),
            ],
            false,
        )
        .unwrap();
        let ctx = ds.context_by_name("bad", RtsSpec::crs()).unwrap();
        let g = colmax(&ctx);
        let f = solve_fractional_gdse(&ctx, &g).unwrap();
        assert_close(f.score.unwrap(), 1.0, 1e-9);
        let l = solve_linear_gdse(&ctx, &g).unwrap();
        assert_close(l.objective_value.unwrap(), 0.0, 1e-9);
        assert_close(l.score.unwrap(), 1.0, 1e-9);
        let nr = solve_input_nonradial(&ctx, g.g_minus()).unwrap();
        assert_close(nr.score.unwrap(), 1.0, 1e-9);
    }

    #[test]
    fn hdse_with_empty_radial_blocks_is_the_linear_model() {
        let ds = table5();
        for o in 0..3 {
            let ctx = ds.context(o, RtsSpec::crs()).unwrap();
            let g = colmax(&ctx);
            let lin = solve_linear_gdse(&ctx, &g).unwrap();
            let hyb = solve_hdse(&ctx, &g, HybridPartition::new(0, 0)).unwrap();
            assert_close(
                hyb.objective_value.unwrap(),
                lin.objective_value.unwrap(),
                1e-9,
            );
        }
    }

    #[test]
    fn hdse_fully_radial_matches_hand_solved_two_variable_model() {
        // own-data direction under VRS with both blocks radial reduces to a
        // two-variable program; solved by hand the objective is 0.4 and the
        // index 1.4
        let ds = table9();
        let ctx = ds.context_by_name("DMU2", RtsSpec::vrs()).unwrap();
        let g = build_direction(&ctx, &DirectionSpec::OwnData, true).unwrap();
        let res = solve_hdse(&ctx, &g, HybridPartition::new(2, 1)).unwrap();
        assert_eq!(res.status, SolveStatus::Optimal);
        assert_close(res.objective_value.unwrap(), 0.4, 1e-6);
        assert_close(res.score.unwrap(), 1.4, 1e-6);
    }

    #[test]
    fn hdse_index_dominates_linear_index_on_shared_direction() {
        let ds = table5();
        let ctx = ds.context_by_name("DMU2", RtsSpec::crs()).unwrap();
        let g = colmax(&ctx);
        let lin = solve_linear_gdse(&ctx, &g).unwrap();
        let hyb = solve_hdse(&ctx, &g, HybridPartition::new(2, 2)).unwrap();
        assert!(hyb.score.unwrap() >= lin.score.unwrap() - 1e-9);
        assert_close(lin.score.unwrap(), 1.1304, 1e-4);
        // outputs contain zeros, so the radial-block assumption is flagged
        assert!(hyb
            .warnings
            .iter()
            .any(|w| w.contains("radial-block data check")));
    }

    #[test]
    fn input_radial_reproduces_published_oriented_scores() {
        let ds = table5();
        let ctx3 = ds.context_by_name("DMU3", RtsSpec::crs()).unwrap();
        let own = solve_input_radial(&ctx3, &ctx3.evaluated().inputs.clone()).unwrap();
        assert_close(own.score.unwrap(), 2.0, 1e-4);
        let g = colmax(&ctx3);
        let maxdir = solve_input_radial(&ctx3, g.g_minus()).unwrap();
        assert_close(maxdir.score.unwrap(), 1.2, 1e-4);

        let ctx1 = ds.context_by_name("DMU1", RtsSpec::crs()).unwrap();
        let inf = solve_input_radial(&ctx1, &[1.0, 5.0]).unwrap();
        assert_eq!(inf.status, SolveStatus::Infeasible);
        assert!(inf.diagnostics[0].contains("Q_o = {O1}"));
    }

    #[test]
    fn input_nonradial_reproduces_published_score() {
        let ds = table5();
        let ctx2 = ds.context_by_name("DMU2", RtsSpec::crs()).unwrap();
        let g = colmax(&ctx2);
        let res = solve_input_nonradial(&ctx2, g.g_minus()).unwrap();
        assert_close(res.score.unwrap(), 1.2571, 1e-4);

        let ctx1 = ds.context_by_name("DMU1", RtsSpec::crs()).unwrap();
        let inf = solve_input_nonradial(&ctx1, g.g_minus()).unwrap();
        assert_eq!(inf.status, SolveStatus::Infeasible);
    }

    #[test]
    fn nonradial_adjustment_sum_bounded_by_scaled_radial_factor() {
        // the radial point (tau, ..., tau) is feasible for the non-radial
        // model whenever tau >= 0, so the optimal sum is at most m * tau
        let ds = table5();
        for name in ["DMU2", "DMU3"] {
            let ctx = ds.context_by_name(name, RtsSpec::crs()).unwrap();
            let g = colmax(&ctx);
            let radial = solve_input_radial(&ctx, g.g_minus()).unwrap();
            let nonradial = solve_input_nonradial(&ctx, g.g_minus()).unwrap();
            let tau = radial.bundle.unwrap().tau_radial.unwrap();
            let sum: f64 = nonradial.bundle.unwrap().tau_minus.iter().sum();
            assert!(sum <= 2.0 * tau.max(0.0) + 1e-9, "{name}");
        }
    }

    #[test]
    fn projection_identity_for_zero_bundle_and_q_forced_zero_output() {
        let ds = table5();
        let ctx = ds.context(0, RtsSpec::crs()).unwrap();
        let g = colmax(&ctx);
        let zero = SolutionBundle {
            lambdas: vec![],
            tau_radial: None,
            tau_radial_output: None,
            tau_minus: vec![0.0, 0.0],
            tau_plus: vec![0.0, 0.0],
        };
        let id = project(ctx.evaluated(), &g, &zero);
        assert_eq!(id.inputs, ctx.evaluated().inputs);
        assert_eq!(id.outputs, ctx.evaluated().outputs);

        let res = solve_fractional_gdse(&ctx, &g).unwrap();
        let proj = res.projection.unwrap();
        // the problem output is forced to contract all the way to zero
        assert_close(proj.outputs[0], 0.0, 1e-9);
        assert!(proj.outputs.iter().all(|&y| y >= -1e-9));
    }

    #[test]
    fn decomposition_factors_multiply_back_to_the_score() {
        let ds = table5();
        let ctx = ds.context(0, RtsSpec::crs()).unwrap();
        let res = solve_fractional_gdse(&ctx, &colmax(&ctx)).unwrap();
        let (fi, fo) = res.decomposition.unwrap();
        assert_close(fi, 1.1875, 1e-4);
        assert_close(fo, 2.0, 1e-4);
        assert_close(fi * fo, res.score.unwrap(), 1e-9);

        let zero = SolutionBundle {
            lambdas: vec![],
            tau_radial: None,
            tau_radial_output: None,
            tau_minus: vec![0.0, 0.0],
            tau_plus: vec![0.0, 0.0],
        };
        assert_eq!(
            decompose(&zero, ModelFamily::LinearGdse).unwrap(),
            (1.0, 1.0)
        );

        // an input-oriented bundle has an output factor of exactly one
        let ctx2 = ds.context(1, RtsSpec::crs()).unwrap();
        let g2 = colmax(&ctx2);
        let nr = solve_input_nonradial(&ctx2, g2.g_minus()).unwrap();
        let (fi, fo) = nr.decomposition.unwrap();
        assert_eq!(fo, 1.0);
        assert_close(fi, nr.score.unwrap(), 1e-12);
    }

    #[test]
    fn intensity_bounds_hold_at_optimal_bundles() {
        let ds = table9();
        let rts = RtsSpec::grs(0.5, 2.0).unwrap();
        for o in 0..3 {
            let ctx = ds.context(o, rts).unwrap();
            let res = solve_linear_gdse(&ctx, &colmax(&ctx)).unwrap();
            let sum = res.bundle.unwrap().lambda_sum();
            assert!((0.5 - 1e-9..=2.0 + 1e-9).contains(&sum));
        }
    }
}
