//! Two-phase dense tableau simplex with Bland's anti-cycling rule.
//!
//! Bland's rule (smallest-index entering column, smallest-index leaving
//! basic variable among ratio-test ties) guarantees finite termination, so
//! infeasibility is certified by a positive phase-one optimum and
//! unboundedness by an empty ratio test. The iteration cap below exists only
//! as a guard against float pathology and surfaces as an error, never as a
//! status.

use super::{Constraint, LinearProgram, LpError, LpOutcome, LpSolution, Relation};

const PIVOT_TOL: f64 = 1e-9;

/// How each user variable is represented in the nonnegative z-space.
#[derive(Clone, Copy, Debug)]
enum Repr {
    /// x = offset + z
    Shifted { col: usize, offset: f64 },
    /// x = offset - z  (used when only the upper bound is finite)
    Mirrored { col: usize, offset: f64 },
    /// x = z_pos - z_neg  (sign-free)
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, pivot_row: usize, entering: usize) {
        let inv = 1.0 / self.rows[pivot_row][entering];
        for v in self.rows[pivot_row].iter_mut() {
            *v *= inv;
        }
        self.rhs[pivot_row] *= inv;
        // exact unit pivot keeps the identity column clean
        self.rows[pivot_row][entering] = 1.0;
        for i in 0..self.rows.len() {
            if i == pivot_row {
                continue;
            }
            let factor = self.rows[i][entering];
            if factor == 0.0 {
                continue;
            }
            for j in 0..self.n_cols {
                let delta = factor * self.rows[pivot_row][j];
                self.rows[i][j] -= delta;
            }
            self.rows[i][entering] = 0.0;
            self.rhs[i] -= factor * self.rhs[pivot_row];
        }
        self.basis[pivot_row] = entering;
    }

    /// Bland ratio test: minimum rhs/col ratio over positive column entries,
    /// ties broken by the smallest basic-variable index.
    fn leaving_row(&self, entering: usize) -> Option<usize> {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..self.rows.len() {
            let a = self.rows[i][entering];
            if a > PIVOT_TOL {
                let ratio = self.rhs[i] / a;
                let key = (ratio, self.basis[i]);
                match best {
                    None => best = Some((key.0, key.1, i)),
                    Some((r, b, _)) => {
                        if ratio < r - PIVOT_TOL || ((ratio - r).abs() <= PIVOT_TOL && key.1 < b) {
                            best = Some((key.0, key.1, i));
                        }
                    }
                }
            }
        }
        best.map(|(_, _, i)| i)
    }
}

/// Runs Bland iterations for the cost vector `costs` (indexed by column).
/// Returns `Ok(objective)` at optimality or `Err(())` on unboundedness.
fn optimize(
    tab: &mut Tableau,
    costs: &[f64],
    iter_budget: &mut usize,
) -> Result<Result<f64, ()>, LpError> {
    // reduced costs and running objective for the current basis
    let mut reduced: Vec<f64> = costs.to_vec();
    let mut objective = 0.0;
    for i in 0..tab.rows.len() {
        let cb = costs[tab.basis[i]];
        if cb != 0.0 {
            for (rj, tij) in reduced.iter_mut().zip(&tab.rows[i]) {
                *rj -= cb * tij;
            }
            objective += cb * tab.rhs[i];
        }
    }
    loop {
        let entering = (0..tab.n_cols).find(|&j| reduced[j] < -PIVOT_TOL);
        let Some(entering) = entering else {
            return Ok(Ok(objective));
        };
        let Some(row) = tab.leaving_row(entering) else {
            return Ok(Err(()));
        };
        if *iter_budget == 0 {
            return Err(LpError::IterationLimit);
        }
        *iter_budget -= 1;
        tab.pivot(row, entering);
        let factor = reduced[entering];
        for (rj, tij) in reduced.iter_mut().zip(&tab.rows[row]) {
            *rj -= factor * tij;
        }
        reduced[entering] = 0.0;
        objective += factor * tab.rhs[row];
    }
}

pub(super) fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    // Variable representations over z >= 0, plus synthetic upper-bound rows.
    let mut reprs: Vec<Repr> = Vec::with_capacity(lp.num_vars());
    let mut n_struct = 0usize;
    let mut extra_rows: Vec<Constraint> = Vec::new();
    for (id, _name, lower, upper) in lp.variables() {
        if lower > upper {
            return Ok(LpOutcome::Infeasible);
        }
        let repr = match (lower.is_finite(), upper.is_finite()) {
            (true, true) => {
                extra_rows.push(Constraint {
                    terms: vec![(id, 1.0)],
                    relation: Relation::Le,
                    rhs: upper,
                });
                let r = Repr::Shifted {
                    col: n_struct,
                    offset: lower,
                };
                n_struct += 1;
                r
            }
            (true, false) => {
                let r = Repr::Shifted {
                    col: n_struct,
                    offset: lower,
                };
                n_struct += 1;
                r
            }
            (false, true) => {
                let r = Repr::Mirrored {
                    col: n_struct,
                    offset: upper,
                };
                n_struct += 1;
                r
            }
            (false, false) => {
                let r = Repr::Split {
                    pos: n_struct,
                    neg: n_struct + 1,
                };
                n_struct += 2;
                r
            }
        };
        reprs.push(repr);
    }

    // Assemble equality rows in z-space with slack/surplus columns.
    let all_rows: Vec<&Constraint> = lp.constraints().iter().chain(extra_rows.iter()).collect();
    let n_rows = all_rows.len();
    let n_slack = all_rows
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let n_cols = n_struct + n_slack;

    let mut rows: Vec<Vec<f64>> = vec![vec![0.0; n_cols]; n_rows];
    let mut rhs: Vec<f64> = vec![0.0; n_rows];
    let mut slack_col_of_row: Vec<Option<usize>> = vec![None; n_rows];
    let mut next_slack = n_struct;
    for (i, con) in all_rows.iter().enumerate() {
        let mut b = con.rhs;
        for (var, coeff) in &con.terms {
            match reprs[var.0] {
                Repr::Shifted { col, offset } => {
                    rows[i][col] += coeff;
                    b -= coeff * offset;
                }
                Repr::Mirrored { col, offset } => {
                    rows[i][col] -= coeff;
                    b -= coeff * offset;
                }
                Repr::Split { pos, neg } => {
                    rows[i][pos] += coeff;
                    rows[i][neg] -= coeff;
                }
            }
        }
        match con.relation {
            Relation::Le => {
                rows[i][next_slack] = 1.0;
                slack_col_of_row[i] = Some(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                rows[i][next_slack] = -1.0;
                slack_col_of_row[i] = Some(next_slack);
                next_slack += 1;
            }
            Relation::Eq => {}
        }
        rhs[i] = b;
    }
    for i in 0..n_rows {
        if rhs[i] < 0.0 {
            for v in rows[i].iter_mut() {
                *v = -*v;
            }
            rhs[i] = -rhs[i];
        }
    }

    // Initial basis: a slack column that survived sign normalization as +1,
    // otherwise an artificial.
    let mut artificial_cols: Vec<usize> = Vec::new();
    let mut basis: Vec<usize> = vec![usize::MAX; n_rows];
    for i in 0..n_rows {
        if let Some(s) = slack_col_of_row[i] {
            if rows[i][s] == 1.0 {
                basis[i] = s;
                continue;
            }
        }
        artificial_cols.push(i);
    }
    let n_artificial = artificial_cols.len();
    let total_cols = n_cols + n_artificial;
    for row in rows.iter_mut() {
        row.resize(total_cols, 0.0);
    }
    for (k, &i) in artificial_cols.iter().enumerate() {
        rows[i][n_cols + k] = 1.0;
        basis[i] = n_cols + k;
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        n_cols: total_cols,
    };
    let mut iter_budget = 50_000 + 1_000 * (n_rows + total_cols);

    // Phase one: drive the artificial variables to zero.
    if n_artificial > 0 {
        let mut costs = vec![0.0; total_cols];
        for c in costs.iter_mut().skip(n_cols) {
            *c = 1.0;
        }
        let scale = 1.0 + tab.rhs.iter().cloned().fold(0.0f64, f64::max);
        match optimize(&mut tab, &costs, &mut iter_budget)? {
            Ok(w) => {
                if w > 1e-7 * scale {
                    return Ok(LpOutcome::Infeasible);
                }
            }
            Err(()) => unreachable!("phase-one objective is bounded below by zero"),
        }
        // Pivot leftover zero-level artificials out; rows that cannot be
        // pivoted are redundant and get dropped.
        let mut drop_rows: Vec<usize> = Vec::new();
        for i in 0..tab.rows.len() {
            if tab.basis[i] >= n_cols {
                let col = (0..n_cols).find(|&j| tab.rows[i][j].abs() > PIVOT_TOL);
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => drop_rows.push(i),
                }
            }
        }
        if !drop_rows.is_empty() {
            let keep = |i: &usize| !drop_rows.contains(i);
            let idx: Vec<usize> = (0..tab.rows.len()).filter(keep).collect();
            tab.rows = idx.iter().map(|&i| tab.rows[i].clone()).collect();
            tab.rhs = idx.iter().map(|&i| tab.rhs[i]).collect();
            tab.basis = idx.iter().map(|&i| tab.basis[i]).collect();
        }
        // Artificial columns are dead from here on.
        for row in tab.rows.iter_mut() {
            row.truncate(n_cols);
        }
        tab.n_cols = n_cols;
    }

    // Phase two over the real objective expressed in z-space.
    let mut costs = vec![0.0; tab.n_cols];
    let (obj_terms, _) = lp.objective_terms();
    for (var, coeff) in obj_terms {
        match reprs[var.0] {
            Repr::Shifted { col, .. } => costs[col] += coeff,
            Repr::Mirrored { col, .. } => costs[col] -= coeff,
            Repr::Split { pos, neg } => {
                costs[pos] += coeff;
                costs[neg] -= coeff;
            }
        }
    }
    match optimize(&mut tab, &costs, &mut iter_budget)? {
        Ok(_) => {}
        Err(()) => return Ok(LpOutcome::Unbounded),
    }

    // Recover the user-variable assignment.
    let mut z = vec![0.0; tab.n_cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs[i];
    }
    let values: Vec<f64> = reprs
        .iter()
        .map(|r| match *r {
            Repr::Shifted { col, offset } => offset + z[col],
            Repr::Mirrored { col, offset } => offset - z[col],
            Repr::Split { pos, neg } => z[pos] - z[neg],
        })
        .collect();
    let objective = lp.eval_objective(&values);
    Ok(LpOutcome::Optimal(LpSolution { objective, values }))
}
