//! Linear-fractional programs and their Charnes–Cooper linearization.
//!
//! A [`FractionalProgram`] minimizes `(n0 + n'v) / (d0 + d'v)` over a
//! polyhedron. The transform introduces a scaling variable `t > 0` and the
//! scaled copies `w = t v`, pins the scaled denominator to one, and
//! homogenizes every constraint and finite bound. The LP optimum equals the
//! fractional optimum, and `v = w / t` recovers a fractional solution. A
//! vanishing `t` at the optimum means the denominator can be driven to zero
//! on the feasible set, which the caller is expected to have excluded via
//! the direction well-definedness checks; it surfaces as an explicit error.

use super::{Constraint, LinearProgram, LpError, LpOutcome, LpSolution, Relation, VarId};

/// `t` values at or below this are treated as denominator degeneracy.
pub const SCALE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub struct FractionalProgram {
    vars: Vec<(String, f64, f64)>,
    numerator: Vec<(VarId, f64)>,
    numerator_constant: f64,
    denominator: Vec<(VarId, f64)>,
    denominator_constant: f64,
    constraints: Vec<Constraint>,
}

/// Outcome of solving a fractional program through the linearization.
#[derive(Clone, Debug)]
pub enum FractionalOutcome {
    Optimal(FractionalSolution),
    Infeasible,
    Unbounded,
}

/// Recovered solution of the original (unscaled) fractional program.
#[derive(Clone, Debug)]
pub struct FractionalSolution {
    /// Optimal ratio value (equals the LP optimum).
    pub objective: f64,
    /// Assignment of the original variables, `v = w / t`.
    values: Vec<f64>,
    /// Optimal scaling variable `t`.
    pub scale: f64,
}

impl FractionalSolution {
    pub fn value(&self, var: VarId) -> f64 {
        self.values[var.0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Maps an LP solution of the linearized program back to fractional space.
#[derive(Clone, Debug)]
pub struct CcMap {
    scale: VarId,
    scaled: Vec<VarId>,
}

impl CcMap {
    pub fn scale_var(&self) -> VarId {
        self.scale
    }

    pub fn scaled_var(&self, original: VarId) -> VarId {
        self.scaled[original.0]
    }

    /// Divides the scaled variables by `t`, rejecting degenerate optima.
    pub fn recover(&self, sol: &LpSolution) -> Result<FractionalSolution, LpError> {
        let t = sol.value(self.scale);
        if t <= SCALE_TOL {
            return Err(LpError::DenominatorDegeneracy { t });
        }
        let values = self.scaled.iter().map(|w| sol.value(*w) / t).collect();
        Ok(FractionalSolution {
            objective: sol.objective,
            values,
            scale: t,
        })
    }
}

impl FractionalProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> VarId {
        let id = VarId(self.vars.len());
        self.vars.push((name.into(), lower, upper));
        id
    }

    pub fn set_numerator(&mut self, terms: &[(VarId, f64)], constant: f64) {
        self.numerator = terms.to_vec();
        self.numerator_constant = constant;
    }

    pub fn set_denominator(&mut self, terms: &[(VarId, f64)], constant: f64) {
        self.denominator = terms.to_vec();
        self.denominator_constant = constant;
    }

    pub fn add_constraint(&mut self, terms: &[(VarId, f64)], relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            terms: terms.to_vec(),
            relation,
            rhs,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Evaluates the ratio at an assignment of the original variables.
    pub fn eval_ratio(&self, values: &[f64]) -> f64 {
        let num = self.numerator_constant
            + self
                .numerator
                .iter()
                .map(|(v, c)| c * values[v.0])
                .sum::<f64>();
        let den = self.denominator_constant
            + self
                .denominator
                .iter()
                .map(|(v, c)| c * values[v.0])
                .sum::<f64>();
        num / den
    }

    /// Builds a [`LinearProgram`] in the original variables with objective
    /// `numerator - q * denominator`. Test oracles (parametric iteration)
    /// and feasibility probes use this; the production path never does.
    pub fn parametric_lp(&self, q: f64) -> LinearProgram {
        let mut lp = LinearProgram::new();
        let ids: Vec<VarId> = self
            .vars
            .iter()
            .map(|(name, lo, up)| lp.add_var(name.clone(), *lo, *up))
            .collect();
        let mut terms: Vec<(VarId, f64)> = Vec::new();
        for (v, c) in &self.numerator {
            terms.push((ids[v.0], *c));
        }
        for (v, c) in &self.denominator {
            terms.push((ids[v.0], -q * c));
        }
        lp.set_objective(
            &terms,
            self.numerator_constant - q * self.denominator_constant,
        );
        for con in &self.constraints {
            let row: Vec<(VarId, f64)> = con.terms.iter().map(|(v, c)| (ids[v.0], *c)).collect();
            lp.add_constraint(&row, con.relation, con.rhs);
        }
        lp
    }

    /// Charnes–Cooper linearization: returns the equivalent LP and the map
    /// back to fractional space.
    pub fn linearize(&self) -> Result<(LinearProgram, CcMap), LpError> {
        if self.denominator.is_empty() && self.denominator_constant == 0.0 {
            return Err(LpError::ZeroDenominator);
        }
        let mut lp = LinearProgram::new();
        let t = lp.add_var("t", 0.0, f64::INFINITY);
        let mut scaled = Vec::with_capacity(self.vars.len());
        for (name, lower, upper) in &self.vars {
            // w = t v inherits the sign of any zero-anchored bound; other
            // finite bounds homogenize into rows below.
            let w_lower = if *lower >= 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            let w_upper = if *upper <= 0.0 { 0.0 } else { f64::INFINITY };
            let w = lp.add_var(format!("{name}~"), w_lower, w_upper);
            scaled.push(w);
            if lower.is_finite() && *lower != 0.0 {
                lp.add_constraint(&[(w, 1.0), (t, -lower)], Relation::Ge, 0.0);
            }
            if upper.is_finite() && *upper != 0.0 {
                lp.add_constraint(&[(w, 1.0), (t, -upper)], Relation::Le, 0.0);
            }
        }
        for con in &self.constraints {
            let mut row: Vec<(VarId, f64)> =
                con.terms.iter().map(|(v, c)| (scaled[v.0], *c)).collect();
            row.push((t, -con.rhs));
            lp.add_constraint(&row, con.relation, 0.0);
        }
        // normalization: scaled denominator pinned to one
        let mut norm: Vec<(VarId, f64)> = self
            .denominator
            .iter()
            .map(|(v, c)| (scaled[v.0], *c))
            .collect();
        norm.push((t, self.denominator_constant));
        lp.add_constraint(&norm, Relation::Eq, 1.0);
        let mut obj: Vec<(VarId, f64)> = self
            .numerator
            .iter()
            .map(|(v, c)| (scaled[v.0], *c))
            .collect();
        obj.push((t, self.numerator_constant));
        lp.set_objective(&obj, 0.0);
        Ok((lp, CcMap { scale: t, scaled }))
    }

    /// Linearizes, solves, and maps the optimum back.
    pub fn solve(&self) -> Result<FractionalOutcome, LpError> {
        let (lp, map) = self.linearize()?;
        match lp.solve()? {
            LpOutcome::Optimal(sol) => Ok(FractionalOutcome::Optimal(map.recover(&sol)?)),
            LpOutcome::Infeasible => Ok(FractionalOutcome::Infeasible),
            LpOutcome::Unbounded => Ok(FractionalOutcome::Unbounded),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn constant_denominator_reduces_to_plain_lp() {
        // denominator has a variable block whose members are pinned to zero,
        // so the ratio degenerates to the numerator
        let mut fp = FractionalProgram::new();
        let x = fp.add_var("x", 0.0, f64::INFINITY);
        let y = fp.add_var("y", 0.0, 0.0);
        fp.set_numerator(&[(x, 1.0)], 1.0);
        fp.set_denominator(&[(y, -1.0)], 1.0);
        fp.add_constraint(&[(x, 1.0)], Relation::Ge, 2.0);

        let ratio = match fp.solve().unwrap() {
            FractionalOutcome::Optimal(sol) => sol.objective,
            other => panic!("expected optimal, got {other:?}"),
        };

        let mut lp = LinearProgram::new();
        let x2 = lp.add_var("x", 0.0, f64::INFINITY);
        lp.set_objective(&[(x2, 1.0)], 1.0);
        lp.add_constraint(&[(x2, 1.0)], Relation::Ge, 2.0);
        let plain = lp.solve().unwrap().expect_optimal().objective;
        assert_close(ratio, plain, 1e-9);
        assert_close(ratio, 3.0, 1e-9);
    }

    #[test]
    fn simple_ratio_optimum_and_roundtrip() {
        // min (1 + x) / (1 - y) st x + 2y >= 1, y <= 0.4
        let mut fp = FractionalProgram::new();
        let x = fp.add_var("x", 0.0, f64::INFINITY);
        let y = fp.add_var("y", 0.0, 0.4);
        fp.set_numerator(&[(x, 1.0)], 1.0);
        fp.set_denominator(&[(y, -1.0)], 1.0);
        fp.add_constraint(&[(x, 1.0), (y, 2.0)], Relation::Ge, 1.0);
        let sol = match fp.solve().unwrap() {
            FractionalOutcome::Optimal(sol) => sol,
            other => panic!("{other:?}"),
        };
        // tradeoff: ratio (1 + (1-2y)) / (1-y) = (2-2y)/(1-y) = 2 for y < 0.5
        assert_close(sol.objective, 2.0, 1e-9);
        assert_close(fp.eval_ratio(sol.values()), sol.objective, 1e-9);
    }

    #[test]
    fn degenerate_scale_is_reported() {
        // denominator 1 - y with y unbounded above: ratio is minimized by
        // pushing the denominator to zero from above, so t* collapses
        let mut fp = FractionalProgram::new();
        let y = fp.add_var("y", 0.0, f64::INFINITY);
        fp.set_numerator(&[], 1.0);
        fp.set_denominator(&[(y, 1.0)], 1.0);
        match fp.solve() {
            Err(LpError::DenominatorDegeneracy { .. }) => {}
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_constraints_propagate() {
        let mut fp = FractionalProgram::new();
        let x = fp.add_var("x", 0.0, f64::INFINITY);
        fp.set_numerator(&[(x, 1.0)], 1.0);
        fp.set_denominator(&[], 1.0);
        fp.add_constraint(&[(x, 1.0)], Relation::Le, -1.0);
        assert!(matches!(fp.solve().unwrap(), FractionalOutcome::Infeasible));
    }
}
