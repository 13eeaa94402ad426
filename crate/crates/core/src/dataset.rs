//! DMU data, validation, returns-to-scale bounds, and evaluation contexts.
//!
//! A [`Dataset`] is immutable after validation and safe to share across
//! concurrent evaluations. An [`EvaluationContext`] singles out one DMU and
//! treats the rest as the reference set.

use serde::Serialize;
use thiserror::Error;

/// One decision-making unit: a named input/output vector pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DmuRecord {
    pub name: String,
    pub inputs: Vec<f64>,
    pub outputs: Vec<f64>,
}

impl DmuRecord {
    pub fn new(name: impl Into<String>, inputs: Vec<f64>, outputs: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            inputs,
            outputs,
        }
    }
}

/// Bounds `L <= sum(lambda) <= U` on the intensity weights.
///
/// `(0, inf)` is constant returns to scale, `(1, 1)` variable returns to
/// scale; anything else is a generalized assumption. An unbounded upper end
/// is represented by `f64::INFINITY` and later omitted from the constraint
/// system rather than replaced by a large constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RtsSpec {
    lower: f64,
    upper: f64,
}

impl RtsSpec {
    pub fn crs() -> Self {
        Self {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }

    pub fn vrs() -> Self {
        Self {
            lower: 1.0,
            upper: 1.0,
        }
    }

    pub fn grs(lower: f64, upper: f64) -> Result<Self, DataError> {
        if !(0.0..=1.0).contains(&lower) || upper < 1.0 || lower.is_nan() || upper.is_nan() {
            return Err(DataError::InvalidRtsBounds { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_crs(&self) -> bool {
        self.lower == 0.0 && self.upper.is_infinite()
    }

    pub fn is_vrs(&self) -> bool {
        self.lower == 1.0 && self.upper == 1.0
    }
}

impl std::fmt::Display for RtsSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_crs() {
            write!(f, "crs")
        } else if self.is_vrs() {
            write!(f, "vrs")
        } else if self.upper.is_infinite() {
            write!(f, "grs({},inf)", self.lower)
        } else {
            write!(f, "grs({},{})", self.lower, self.upper)
        }
    }
}

/// Validated, immutable collection of DMUs sharing one input/output shape.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dataset {
    dmus: Vec<DmuRecord>,
    num_inputs: usize,
    num_outputs: usize,
    allow_negative: bool,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("dataset needs at least 2 DMUs, got {n}")]
    TooFewDmus { n: usize },
    #[error("DMU '{name}': expected {expected} {kind}s, found {found}")]
    DimensionMismatch {
        name: String,
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("DMU '{name}': all-zero {kind} vector")]
    AllZeroVector { name: String, kind: &'static str },
    #[error("duplicate DMU name '{name}'")]
    DuplicateName { name: String },
    #[error("DMU '{name}': negative value {value} in {column} (negative data mode is off)")]
    NegativeValue {
        name: String,
        column: String,
        value: f64,
    },
    #[error("DMU '{name}': non-finite value in {column}")]
    NonFiniteValue { name: String, column: String },
    #[error("dataset must have at least one input and one output column")]
    NoColumns,
    #[error("unknown DMU '{name}'")]
    UnknownDmu { name: String },
    #[error("DMU index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid returns-to-scale bounds (L = {lower}, U = {upper})")]
    InvalidRtsBounds { lower: f64, upper: f64 },
    #[error("negative data mode requires VRS evaluation (got {rts})")]
    NegativeDataRequiresVrs { rts: String },
    #[error("label count does not match data shape")]
    LabelMismatch,
}

impl Dataset {
    /// Validates raw records into a dataset with default column labels
    /// `I1..Im` / `O1..Os`.
    pub fn validate(records: Vec<DmuRecord>, allow_negative: bool) -> Result<Self, DataError> {
        let (m, s) = match records.first() {
            Some(r) => (r.inputs.len(), r.outputs.len()),
            None => return Err(DataError::TooFewDmus { n: 0 }),
        };
        let input_labels = (1..=m).map(|i| format!("I{i}")).collect();
        let output_labels = (1..=s).map(|r| format!("O{r}")).collect();
        Self::validate_labeled(records, allow_negative, input_labels, output_labels)
    }

    /// As [`Dataset::validate`], with caller-supplied column labels.
    pub fn validate_labeled(
        records: Vec<DmuRecord>,
        allow_negative: bool,
        input_labels: Vec<String>,
        output_labels: Vec<String>,
    ) -> Result<Self, DataError> {
        if records.len() < 2 {
            return Err(DataError::TooFewDmus { n: records.len() });
        }
        let m = records[0].inputs.len();
        let s = records[0].outputs.len();
        if m == 0 || s == 0 {
            return Err(DataError::NoColumns);
        }
        if input_labels.len() != m || output_labels.len() != s {
            return Err(DataError::LabelMismatch);
        }
        let mut seen: Vec<&str> = Vec::with_capacity(records.len());
        for rec in &records {
            if rec.inputs.len() != m {
                return Err(DataError::DimensionMismatch {
                    name: rec.name.clone(),
                    kind: "input",
                    expected: m,
                    found: rec.inputs.len(),
                });
            }
            if rec.outputs.len() != s {
                return Err(DataError::DimensionMismatch {
                    name: rec.name.clone(),
                    kind: "output",
                    expected: s,
                    found: rec.outputs.len(),
                });
            }
            if seen.contains(&rec.name.as_str()) {
                return Err(DataError::DuplicateName {
                    name: rec.name.clone(),
                });
            }
            seen.push(&rec.name);
            for (vals, labels) in [(&rec.inputs, &input_labels), (&rec.outputs, &output_labels)] {
                for (k, &v) in vals.iter().enumerate() {
                    if !v.is_finite() {
                        return Err(DataError::NonFiniteValue {
                            name: rec.name.clone(),
                            column: labels[k].clone(),
                        });
                    }
                    if v < 0.0 && !allow_negative {
                        return Err(DataError::NegativeValue {
                            name: rec.name.clone(),
                            column: labels[k].clone(),
                            value: v,
                        });
                    }
                }
            }
            if rec.inputs.iter().all(|&v| v == 0.0) {
                return Err(DataError::AllZeroVector {
                    name: rec.name.clone(),
                    kind: "input",
                });
            }
            if rec.outputs.iter().all(|&v| v == 0.0) {
                return Err(DataError::AllZeroVector {
                    name: rec.name.clone(),
                    kind: "output",
                });
            }
        }
        Ok(Self {
            dmus: records,
            num_inputs: m,
            num_outputs: s,
            allow_negative,
            input_labels,
            output_labels,
        })
    }

    pub fn len(&self) -> usize {
        self.dmus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dmus.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    pub fn allow_negative(&self) -> bool {
        self.allow_negative
    }

    pub fn dmus(&self) -> &[DmuRecord] {
        &self.dmus
    }

    pub fn dmu(&self, index: usize) -> &DmuRecord {
        &self.dmus[index]
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.dmus.iter().position(|d| d.name == name)
    }

    /// Creates the evaluation context for the DMU at `index`.
    pub fn context(&self, index: usize, rts: RtsSpec) -> Result<EvaluationContext<'_>, DataError> {
        if index >= self.dmus.len() {
            return Err(DataError::IndexOutOfRange {
                index,
                n: self.dmus.len(),
            });
        }
        if self.allow_negative && !rts.is_vrs() {
            return Err(DataError::NegativeDataRequiresVrs {
                rts: rts.to_string(),
            });
        }
        Ok(EvaluationContext {
            dataset: self,
            under_evaluation: index,
            rts,
        })
    }

    /// Creates the evaluation context for the DMU named `name`.
    pub fn context_by_name(
        &self,
        name: &str,
        rts: RtsSpec,
    ) -> Result<EvaluationContext<'_>, DataError> {
        let index = self.index_of(name).ok_or_else(|| DataError::UnknownDmu {
            name: name.to_string(),
        })?;
        self.context(index, rts)
    }
}

/// One DMU under evaluation against the reference set of all the others.
#[derive(Clone, Copy, Debug)]
pub struct EvaluationContext<'a> {
    dataset: &'a Dataset,
    under_evaluation: usize,
    rts: RtsSpec,
}

impl<'a> EvaluationContext<'a> {
    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    /// Index of the DMU under evaluation.
    pub fn evaluated_index(&self) -> usize {
        self.under_evaluation
    }

    pub fn evaluated(&self) -> &'a DmuRecord {
        &self.dataset.dmus[self.under_evaluation]
    }

    pub fn rts(&self) -> RtsSpec {
        self.rts
    }

    pub fn num_inputs(&self) -> usize {
        self.dataset.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.dataset.num_outputs
    }

    /// Reference indices: every DMU except the one under evaluation, in
    /// dataset order.
    pub fn reference_indices(&self) -> impl Iterator<Item = usize> + 'a {
        let o = self.under_evaluation;
        (0..self.dataset.dmus.len()).filter(move |&j| j != o)
    }

    pub fn reference(&self) -> impl Iterator<Item = (usize, &'a DmuRecord)> {
        let ds = self.dataset;
        self.reference_indices().map(move |j| (j, &ds.dmus[j]))
    }

    pub fn reference_len(&self) -> usize {
        self.dataset.dmus.len() - 1
    }
}
