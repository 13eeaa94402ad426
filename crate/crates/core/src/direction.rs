//! Direction vectors: the axes along which inputs are expanded and outputs
//! contracted, plus the feasibility and well-definedness checks that gate
//! model runs.
//!
//! Three data-driven recipes are built in (the evaluated DMU's own data,
//! columnwise maxima, columnwise ranges), along with custom vectors,
//! preference weighting, and uniform rescaling for preset derivations.

use crate::dataset::EvaluationContext;
use crate::models::slack_index_sets;
use serde::Serialize;
use thiserror::Error;

/// How a direction vector was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    OwnData,
    ColumnMax,
    ColumnRange,
    Custom,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Strategy::OwnData => "own_data",
            Strategy::ColumnMax => "column_max",
            Strategy::ColumnRange => "column_range",
            Strategy::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Requested direction construction.
#[derive(Clone, Debug, PartialEq)]
pub enum DirectionSpec {
    OwnData,
    ColumnMax,
    ColumnRange,
    Custom { inputs: Vec<f64>, outputs: Vec<f64> },
}

impl DirectionSpec {
    pub fn strategy(&self) -> Strategy {
        match self {
            DirectionSpec::OwnData => Strategy::OwnData,
            DirectionSpec::ColumnMax => Strategy::ColumnMax,
            DirectionSpec::ColumnRange => Strategy::ColumnRange,
            DirectionSpec::Custom { .. } => Strategy::Custom,
        }
    }
}

/// Construction record carried by every direction vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub strategy: Strategy,
    /// Whether column statistics included the evaluated DMU's own row.
    pub include_self: Option<bool>,
    /// Preference weights applied by componentwise division, if any.
    pub weights: Option<Vec<f64>>,
    /// Preset that produced this direction, if any.
    pub preset: Option<String>,
    /// Free-form notes (scalings and the like).
    pub notes: Vec<String>,
}

impl Provenance {
    fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            include_self: None,
            weights: None,
            preset: None,
            notes: Vec::new(),
        }
    }
}

/// Non-negative direction pair `(g_minus, g_plus)` over inputs and outputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionVector {
    g_minus: Vec<f64>,
    g_plus: Vec<f64>,
    pub provenance: Provenance,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirectionError {
    #[error("direction component for {column} is negative ({value})")]
    NegativeComponent { column: String, value: f64 },
    #[error("direction vector is identically zero{hint}")]
    AllZero { hint: String },
    #[error("direction has {found} {kind} components, dataset has {expected}")]
    DimensionMismatch {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("preference weight {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("non-finite direction component for {column}")]
    NonFinite { column: String },
}

impl DirectionVector {
    /// Builds a direction, enforcing non-negativity and ruling out the
    /// all-zero vector.
    pub fn new(
        g_minus: Vec<f64>,
        g_plus: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self, DirectionError> {
        for (vals, prefix) in [(&g_minus, "input"), (&g_plus, "output")] {
            for (k, &v) in vals.iter().enumerate() {
                let column = format!("{prefix} {}", k + 1);
                if !v.is_finite() {
                    return Err(DirectionError::NonFinite { column });
                }
                if v < 0.0 {
                    return Err(DirectionError::NegativeComponent { column, value: v });
                }
            }
        }
        if g_minus.iter().chain(g_plus.iter()).all(|&v| v == 0.0) {
            return Err(DirectionError::AllZero {
                hint: String::new(),
            });
        }
        Ok(Self {
            g_minus,
            g_plus,
            provenance,
        })
    }

    pub fn g_minus(&self) -> &[f64] {
        &self.g_minus
    }

    pub fn g_plus(&self) -> &[f64] {
        &self.g_plus
    }

    /// Rescales the input and output sub-vectors by positive constants,
    /// recording the scaling in the provenance. Preset derivations use this
    /// (for example `1/m`-scaled column maxima).
    pub fn scale_uniform(mut self, input_scale: f64, output_scale: f64) -> Self {
        for v in self.g_minus.iter_mut() {
            *v *= input_scale;
        }
        for v in self.g_plus.iter_mut() {
            *v *= output_scale;
        }
        self.provenance
            .notes
            .push(format!("scaled by ({input_scale}, {output_scale})"));
        self
    }

    fn check_dims(&self, m: usize, s: usize) -> Result<(), DirectionError> {
        if self.g_minus.len() != m {
            return Err(DirectionError::DimensionMismatch {
                kind: "input",
                expected: m,
                found: self.g_minus.len(),
            });
        }
        if self.g_plus.len() != s {
            return Err(DirectionError::DimensionMismatch {
                kind: "output",
                expected: s,
                found: self.g_plus.len(),
            });
        }
        Ok(())
    }
}

fn column_stat(
    ctx: &EvaluationContext,
    include_self: bool,
    extract: impl Fn(&crate::dataset::DmuRecord) -> &[f64],
    len: usize,
    fold: impl Fn(f64, f64) -> f64,
    init: f64,
) -> Vec<f64> {
    let mut acc = vec![init; len];
    for (j, dmu) in ctx.dataset().dmus().iter().enumerate() {
        if !include_self && j == ctx.evaluated_index() {
            continue;
        }
        for (k, &v) in extract(dmu).iter().enumerate() {
            acc[k] = fold(acc[k], v);
        }
    }
    acc
}

/// Constructs a direction vector for the given context.
///
/// `include_self` controls whether the evaluated DMU's own row enters the
/// column statistics of the `ColumnMax` / `ColumnRange` recipes; it defaults
/// to `true` at call sites because the global maximum is what keeps the
/// well-definedness bound at one.
pub fn build_direction(
    ctx: &EvaluationContext,
    spec: &DirectionSpec,
    include_self: bool,
) -> Result<DirectionVector, DirectionError> {
    let m = ctx.num_inputs();
    let s = ctx.num_outputs();
    let mut provenance = Provenance::new(spec.strategy());
    match spec {
        DirectionSpec::OwnData => {
            let o = ctx.evaluated();
            DirectionVector::new(o.inputs.clone(), o.outputs.clone(), provenance)
        }
        DirectionSpec::ColumnMax => {
            provenance.include_self = Some(include_self);
            let g_minus = column_stat(ctx, include_self, |d| &d.inputs, m, f64::max, f64::MIN);
            let g_plus = column_stat(ctx, include_self, |d| &d.outputs, s, f64::max, f64::MIN);
            DirectionVector::new(g_minus, g_plus, provenance)
        }
        DirectionSpec::ColumnRange => {
            provenance.include_self = Some(include_self);
            let max_in = column_stat(ctx, include_self, |d| &d.inputs, m, f64::max, f64::MIN);
            let min_in = column_stat(ctx, include_self, |d| &d.inputs, m, f64::min, f64::MAX);
            let max_out = column_stat(ctx, include_self, |d| &d.outputs, s, f64::max, f64::MIN);
            let min_out = column_stat(ctx, include_self, |d| &d.outputs, s, f64::min, f64::MAX);
            let g_minus: Vec<f64> = max_in.iter().zip(&min_in).map(|(a, b)| a - b).collect();
            let g_plus: Vec<f64> = max_out.iter().zip(&min_out).map(|(a, b)| a - b).collect();
            DirectionVector::new(g_minus, g_plus, provenance).map_err(|e| match e {
                DirectionError::AllZero { .. } => DirectionError::AllZero {
                    hint: " (column ranges of a constant dataset)".to_string(),
                },
                other => other,
            })
        }
        DirectionSpec::Custom { inputs, outputs } => {
            let g = DirectionVector::new(inputs.clone(), outputs.clone(), provenance)?;
            g.check_dims(m, s)?;
            Ok(g)
        }
    }
}

/// Divides each direction component by its (strictly positive) weight.
///
/// A higher weight shrinks the direction component, so changes along that
/// dimension are penalized more in the resulting scores. Weights are listed
/// inputs first, then outputs.
pub fn apply_preference_weights(
    g: &DirectionVector,
    weights: &[f64],
) -> Result<DirectionVector, DirectionError> {
    let m = g.g_minus.len();
    let s = g.g_plus.len();
    if weights.len() != m + s {
        return Err(DirectionError::DimensionMismatch {
            kind: "weight",
            expected: m + s,
            found: weights.len(),
        });
    }
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 || !w.is_finite() {
            return Err(DirectionError::NonPositiveWeight { index: k, value: w });
        }
    }
    let g_minus: Vec<f64> = g
        .g_minus
        .iter()
        .zip(&weights[..m])
        .map(|(v, w)| v / w)
        .collect();
    let g_plus: Vec<f64> = g
        .g_plus
        .iter()
        .zip(&weights[m..])
        .map(|(v, w)| v / w)
        .collect();
    let mut provenance = g.provenance.clone();
    provenance.weights = Some(weights.to_vec());
    DirectionVector::new(g_minus, g_plus, provenance)
}

/// Feasibility and well-definedness report for a `(context, direction)` pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionReport {
    /// Necessary feasibility condition: positive direction components on the
    /// problematic zero-pattern index sets.
    pub necessary_ok: bool,
    /// Input indices in the problem set with a zero direction component.
    pub violating_inputs: Vec<usize>,
    /// Output indices in the problem set with a zero direction component.
    pub violating_outputs: Vec<usize>,
    /// Score well-definedness bound under any intensity bounds.
    pub welldef_grs_ok: bool,
    /// Score well-definedness bound specific to the VRS case.
    pub welldef_vrs_ok: bool,
    /// Strict positivity of every component: sufficient for feasibility of
    /// the generalized models.
    pub guaranteed_feasible: bool,
}

/// Checks a direction against a context without solving anything.
pub fn validate_direction(
    ctx: &EvaluationContext,
    g: &DirectionVector,
) -> Result<DirectionReport, DirectionError> {
    g.check_dims(ctx.num_inputs(), ctx.num_outputs())?;
    let sets = slack_index_sets(ctx);
    let violating_inputs: Vec<usize> = sets
        .problem_inputs
        .iter()
        .copied()
        .filter(|&i| g.g_minus[i] <= 0.0)
        .collect();
    let violating_outputs: Vec<usize> = sets
        .problem_outputs
        .iter()
        .copied()
        .filter(|&r| g.g_plus[r] <= 0.0)
        .collect();
    let necessary_ok = violating_inputs.is_empty() && violating_outputs.is_empty();

    let o = ctx.evaluated();
    let mut grs_ratio: f64 = 0.0;
    let mut vrs_ratio: f64 = 0.0;
    for (r, &gp) in g.g_plus.iter().enumerate() {
        if gp > 0.0 {
            grs_ratio = grs_ratio.max(o.outputs[r] / gp);
            let min_ref = ctx
                .reference()
                .map(|(_, d)| d.outputs[r])
                .fold(f64::MAX, f64::min);
            vrs_ratio = vrs_ratio.max((o.outputs[r] - min_ref) / gp);
        }
    }
    let guaranteed_feasible = g.g_minus.iter().all(|&v| v > 0.0)
        && g.g_plus.iter().all(|&v| v > 0.0)
        && !g.g_minus.is_empty()
        && !g.g_plus.is_empty();
    Ok(DirectionReport {
        necessary_ok,
        violating_inputs,
        violating_outputs,
        welldef_grs_ok: grs_ratio <= 1.0 + 1e-12,
        welldef_vrs_ok: vrs_ratio <= 1.0 + 1e-12,
        guaranteed_feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, DmuRecord, RtsSpec};

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

    #[test]
    fn column_max_over_single_output_table() {
        let ds = table9();
        for o in 0..3 {
            let ctx = ds.context(o, RtsSpec::crs()).unwrap();
            let g = build_direction(&ctx, &DirectionSpec::ColumnMax, true).unwrap();
            assert_eq!(g.g_minus(), &[5.0, 6.0]);
            assert_eq!(g.g_plus(), &[1.0]);
        }
    }

    #[test]
    fn own_data_reads_the_evaluated_row() {
        let ds = table5();
        let ctx = ds.context_by_name("DMU2", RtsSpec::crs()).unwrap();
        let g = build_direction(&ctx, &DirectionSpec::OwnData, true).unwrap();
        assert_eq!(g.g_minus(), &[4.0, 2.0]);
        assert_eq!(g.g_plus(), &[0.0, 1.0]);
    }

    #[test]
    fn column_range_componentwise() {
        let ds = table5();
        for o in 0..3 {
            let ctx = ds.context(o, RtsSpec::crs()).unwrap();
            let g = build_direction(&ctx, &DirectionSpec::ColumnRange, true).unwrap();
            assert_eq!(g.g_minus(), &[7.0, 4.0]);
            assert_eq!(g.g_plus(), &[1.0, 0.0]);
        }
    }

    #[test]
    fn column_max_exclude_self_differs() {
        let ds = table5();
        let ctx = ds.context_by_name("DMU3", RtsSpec::crs()).unwrap();
        let g = build_direction(&ctx, &DirectionSpec::ColumnMax, false).unwrap();
        // DMU3 holds the input-1 maximum, so excluding it shrinks that column
        assert_eq!(g.g_minus(), &[4.0, 5.0]);
    }

    #[test]
    fn constant_dataset_has_no_column_range_direction() {
        let ds = Dataset::validate(
            vec![
                DmuRecord::new("A", vec![2.0], vec![3.0]),
                DmuRecord::new("B", vec![2.0], vec![3.0]),
            ],
            false,
        )
        .unwrap();
        let ctx = ds.context(0, RtsSpec::crs()).unwrap();
        assert!(matches!(
            build_direction(&ctx, &DirectionSpec::ColumnRange, true),
            Err(DirectionError::AllZero { .. })
        ));
    }

    #[test]
    fn custom_direction_must_be_nonnegative_and_sized() {
        let ds = table9();
        let ctx = ds.context(0, RtsSpec::crs()).unwrap();
        let bad = DirectionSpec::Custom {
            inputs: vec![1.0, -2.0],
            outputs: vec![1.0],
        };
        assert!(matches!(
            build_direction(&ctx, &bad, true),
            Err(DirectionError::NegativeComponent { .. })
        ));
        let short = DirectionSpec::Custom {
            inputs: vec![1.0],
            outputs: vec![1.0],
        };
        assert!(matches!(
            build_direction(&ctx, &short, true),
            Err(DirectionError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn preference_weights_divide_componentwise() {
        let ds = table9();
        let ctx = ds.context(0, RtsSpec::crs()).unwrap();
        let g = build_direction(&ctx, &DirectionSpec::ColumnMax, true).unwrap();
        let weighted = apply_preference_weights(&g, &[1.0, 7.0, 1.0]).unwrap();
        assert_eq!(weighted.g_minus(), &[5.0, 6.0 / 7.0]);
        assert_eq!(weighted.g_plus(), &[1.0]);

        let identity = apply_preference_weights(&g, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(identity.g_minus(), g.g_minus());
        assert_eq!(identity.g_plus(), g.g_plus());

        let g2 = DirectionVector::new(
            vec![8.0, 5.0],
            vec![1.0, 1.0],
            Provenance::new(Strategy::Custom),
        )
        .unwrap();
        let w2 = apply_preference_weights(&g2, &[2.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(w2.g_minus(), &[4.0, 5.0]);
        assert_eq!(w2.g_plus(), &[1.0, 1.0]);

        assert!(matches!(
            apply_preference_weights(&g, &[1.0, 0.0, 1.0]),
            Err(DirectionError::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn necessary_condition_catches_zero_direction_on_problem_output() {
        let ds = table5();
        let ctx = ds.context_by_name("DMU1", RtsSpec::crs()).unwrap();
        // input-oriented style direction: expand own inputs, no output play
        let g = DirectionVector::new(
            vec![1.0, 5.0],
            vec![0.0, 0.0],
            Provenance::new(Strategy::OwnData),
        )
        .unwrap();
        let report = validate_direction(&ctx, &g).unwrap();
        assert!(!report.necessary_ok);
        assert_eq!(report.violating_outputs, vec![0]);
        assert!(!report.guaranteed_feasible);
    }

    #[test]
    fn global_column_max_is_well_defined() {
        let ds = table5();
        let ctx = ds.context_by_name("DMU1", RtsSpec::crs()).unwrap();
        let g = build_direction(&ctx, &DirectionSpec::ColumnMax, true).unwrap();
        let report = validate_direction(&ctx, &g).unwrap();
        assert!(report.welldef_grs_ok);
        assert!(report.necessary_ok);
    }

    #[test]
    fn strictly_positive_direction_is_guaranteed_feasible() {
        let ds = table9();
        let ctx = ds.context(2, RtsSpec::crs()).unwrap();
        let g = build_direction(&ctx, &DirectionSpec::ColumnMax, true).unwrap();
        let report = validate_direction(&ctx, &g).unwrap();
        assert!(report.guaranteed_feasible);
        assert!(report.necessary_ok);
    }

    #[test]
    fn weighting_by_scaled_weights_scales_inversely() {
        let g = DirectionVector::new(vec![3.0, 4.0], vec![2.0], Provenance::new(Strategy::Custom))
            .unwrap();
        let w = [1.5, 2.0, 4.0];
        let c = 3.0;
        let gw = apply_preference_weights(&g, &w).unwrap();
        let scaled_w: Vec<f64> = w.iter().map(|x| c * x).collect();
        let gcw = apply_preference_weights(&g, &scaled_w).unwrap();
        for (a, b) in gw.g_minus().iter().zip(gcw.g_minus()) {
            assert!((a / c - b).abs() < 1e-12);
        }
        for (a, b) in gw.g_plus().iter().zip(gcw.g_plus()) {
            assert!((a / c - b).abs() < 1e-12);
        }
    }
}
