//! Self-contained linear-program carrier and a deterministic dense solver.
//!
//! The rest of the crate assembles envelopment programs as [`LinearProgram`]
//! values and solves them through [`LinearProgram::solve`]. Fractional
//! (ratio) objectives go through [`FractionalProgram`], which linearizes via
//! the Charnes–Cooper scaling transform before hitting the same solver.

mod fractional;
mod simplex;

pub use fractional::{FractionalOutcome, FractionalProgram, FractionalSolution};

use thiserror::Error;

/// Constraint-satisfaction tolerance an optimal solution is held to.
pub const FEAS_TOL: f64 = 1e-9;
/// Tolerance on reported objective values.
pub const VALUE_TOL: f64 = 1e-7;
/// Default cap on coefficient magnitudes before input is rejected as
/// numerically pathological.
pub const DEFAULT_COEFF_CAP: f64 = 1e12;

/// Relation of a constraint's left-hand side to its right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// Opaque handle to a declared variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub(crate) usize);

#[derive(Clone, Debug)]
struct Variable {
    name: String,
    lower: f64,
    upper: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub(crate) terms: Vec<(VarId, f64)>,
    pub(crate) relation: Relation,
    pub(crate) rhs: f64,
}

/// A linear program in minimization form with per-variable bounds.
///
/// Lower bounds may be `-inf` (sign-free variables) and upper bounds `+inf`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    variables: Vec<Variable>,
    objective: Vec<(VarId, f64)>,
    objective_constant: f64,
    constraints: Vec<Constraint>,
    coefficient_cap: Option<f64>,
}

/// Solver verdict for a [`LinearProgram`].
#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal(_))
    }

    /// Unwraps the optimal solution, panicking otherwise. Test convenience.
    pub fn expect_optimal(&self) -> &LpSolution {
        match self {
            LpOutcome::Optimal(s) => s,
            other => panic!("expected optimal outcome, got {other:?}"),
        }
    }
}

/// One optimal assignment together with the objective it attains.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub objective: f64,
    values: Vec<f64>,
}

impl LpSolution {
    pub fn value(&self, var: VarId) -> f64 {
        self.values[var.0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("{place} references undeclared variable index {index}")]
    UnknownVariable { place: String, index: usize },
    #[error("non-finite coefficient in {place}")]
    NonFiniteCoefficient { place: String },
    #[error("coefficient magnitude {value:e} in {place} exceeds conditioning cap {cap:e}")]
    Conditioning { place: String, value: f64, cap: f64 },
    #[error("simplex iteration limit hit; input is numerically pathological")]
    IterationLimit,
    #[error("denominator degeneracy: scaling variable t = {t:e} at the linearized optimum")]
    DenominatorDegeneracy { t: f64 },
    #[error("fractional program has an identically zero denominator")]
    ZeroDenominator,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a variable with bounds `lower <= x <= upper`.
    /// Use `f64::NEG_INFINITY` / `f64::INFINITY` for unbounded sides.
    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> VarId {
        let id = VarId(self.variables.len());
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        id
    }

    pub fn set_objective(&mut self, terms: &[(VarId, f64)], constant: f64) {
        self.objective = terms.to_vec();
        self.objective_constant = constant;
    }

    pub fn add_constraint(&mut self, terms: &[(VarId, f64)], relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            terms: terms.to_vec(),
            relation,
            rhs,
        });
    }

    /// Overrides the conditioning cap on coefficient magnitudes.
    pub fn set_coefficient_cap(&mut self, cap: f64) {
        self.coefficient_cap = Some(cap);
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Solves the program with a two-phase dense simplex under Bland's rule.
    ///
    /// The pivot rule is fixed, so repeated solves of the same program return
    /// the identical status, objective, and variable assignment. Infeasible
    /// and unbounded verdicts come from the method itself (positive phase-one
    /// optimum, empty ratio test), never from an iteration cap.
    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        self.validate()?;
        simplex::solve(self)
    }

    fn check_coeff(&self, value: f64, place: &str) -> Result<(), LpError> {
        if !value.is_finite() {
            return Err(LpError::NonFiniteCoefficient {
                place: place.to_string(),
            });
        }
        let cap = self.coefficient_cap.unwrap_or(DEFAULT_COEFF_CAP);
        if value.abs() > cap {
            return Err(LpError::Conditioning {
                place: place.to_string(),
                value,
                cap,
            });
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), LpError> {
        for (var, coeff) in &self.objective {
            if var.0 >= self.variables.len() {
                return Err(LpError::UnknownVariable {
                    place: "objective".to_string(),
                    index: var.0,
                });
            }
            self.check_coeff(*coeff, "objective")?;
        }
        self.check_coeff(self.objective_constant, "objective constant")?;
        for (ci, con) in self.constraints.iter().enumerate() {
            let place = format!("constraint {ci}");
            for (var, coeff) in &con.terms {
                if var.0 >= self.variables.len() {
                    return Err(LpError::UnknownVariable {
                        place,
                        index: var.0,
                    });
                }
                self.check_coeff(*coeff, &place)?;
            }
            self.check_coeff(con.rhs, &place)?;
        }
        for (vi, v) in self.variables.iter().enumerate() {
            // Bounds may be infinite; finite ones obey the cap.
            for b in [v.lower, v.upper] {
                if b.is_nan() {
                    return Err(LpError::NonFiniteCoefficient {
                        place: format!("bounds of variable {vi}"),
                    });
                }
                if b.is_finite() {
                    self.check_coeff(b, &format!("bounds of variable {vi}"))?;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn variables(&self) -> impl Iterator<Item = (VarId, &str, f64, f64)> {
        self.variables
            .iter()
            .enumerate()
            .map(|(i, v)| (VarId(i), v.name.as_str(), v.lower, v.upper))
    }

    pub(crate) fn objective_terms(&self) -> (&[(VarId, f64)], f64) {
        (&self.objective, self.objective_constant)
    }

    pub(crate) fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Evaluates the objective at an assignment indexed by variable.
    pub fn eval_objective(&self, values: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .map(|(v, c)| c * values[v.0])
                .sum::<f64>()
    }

    /// Largest constraint violation of an assignment (diagnostic).
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for con in &self.constraints {
            let lhs: f64 = con.terms.iter().map(|(v, c)| c * values[v.0]).sum();
            let gap = match con.relation {
                Relation::Le => lhs - con.rhs,
                Relation::Ge => con.rhs - lhs,
                Relation::Eq => (lhs - con.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        for (i, v) in self.variables.iter().enumerate() {
            worst = worst.max(v.lower - values[i]);
            worst = worst.max(values[i] - v.upper);
        }
        worst
    }

    /// Renders the program as LP-format text for cross-checking with
    /// external solvers. Diagnostic only; the exact layout is not a
    /// stability contract.
    pub fn to_lp_format(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let name = |v: &VarId| {
            let raw = &self.variables[v.0].name;
            let mut s: String = raw
                .chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        c
                    } else {
                        '_'
                    }
                })
                .collect();
            if s.is_empty() {
                s = format!("x{}", v.0);
            }
            s
        };
        let write_terms = |out: &mut String, terms: &[(VarId, f64)]| {
            if terms.is_empty() {
                out.push_str("0 ");
            }
            for (i, (v, c)) in terms.iter().enumerate() {
                if i == 0 {
                    let _ = write!(out, "{} {} ", c, name(v));
                } else if *c < 0.0 {
                    let _ = write!(out, "- {} {} ", -c, name(v));
                } else {
                    let _ = write!(out, "+ {} {} ", c, name(v));
                }
            }
        };
        out.push_str("Minimize\n obj: ");
        write_terms(&mut out, &self.objective);
        if self.objective_constant != 0.0 {
            let _ = write!(out, "\\ plus constant {}", self.objective_constant);
        }
        out.push_str("\nSubject To\n");
        for (i, con) in self.constraints.iter().enumerate() {
            let _ = write!(out, " c{i}: ");
            write_terms(&mut out, &con.terms);
            let _ = writeln!(out, "{} {}", con.relation.symbol(), con.rhs);
        }
        out.push_str("Bounds\n");
        for (i, v) in self.variables.iter().enumerate() {
            let n = name(&VarId(i));
            match (v.lower.is_finite(), v.upper.is_finite()) {
                (false, false) => {
                    let _ = writeln!(out, " {n} free");
                }
                (true, false) => {
                    let _ = writeln!(out, " {} <= {n}", v.lower);
                }
                (false, true) => {
                    let _ = writeln!(out, " -inf <= {n} <= {}", v.upper);
                }
                (true, true) => {
                    let _ = writeln!(out, " {} <= {n} <= {}", v.lower, v.upper);
                }
            }
        }
        out.push_str("End\n");
        out
    }
}
