//! Shared fixtures and independent oracles for the integration suites.
//!
//! The oracles here re-assemble the generalized model from the raw data and
//! solve it by different algorithms (parametric ratio iteration, a
//! hand-built two-variable program), so they share nothing with the
//! production assembly path except the LP solver itself.

#![allow(dead_code)]

use dea_core::dataset::{Dataset, DmuRecord, EvaluationContext, RtsSpec};
use dea_core::direction::DirectionVector;
use dea_core::lp::{FractionalProgram, LinearProgram, LpOutcome, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{what}: {a} vs {b} (|diff| = {:.3e} > {tol:.1e})",
        (a - b).abs()
    );
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

/// One input, two outputs, three units; the radial counterexample table.
pub fn table1() -> Dataset {
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

/// Two inputs, two outputs, three units; the main comparison table.
pub fn table5() -> Dataset {
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

/// Same table with the first output scaled by ten.
pub fn table5_scaled() -> Dataset {
    Dataset::validate(
        vec![
            DmuRecord::new("DMU1", vec![1.0, 5.0], vec![10.0, 1.0]),
            DmuRecord::new("DMU2", vec![4.0, 2.0], vec![0.0, 1.0]),
            DmuRecord::new("DMU3", vec![8.0, 1.0], vec![0.0, 1.0]),
        ],
        false,
    )
    .unwrap()
}

/// Two inputs, one output, three units; the preference-weighting table.
pub fn table9() -> Dataset {
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

// ---------------------------------------------------------------------------
// random instances
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct InstanceShape {
    pub n: (usize, usize),
    pub m: (usize, usize),
    pub s: (usize, usize),
    /// Probability of zeroing an entry.
    pub zero_prob: f64,
    /// Re-roll columns that end up all zero (keeps column maxima positive).
    pub positive_columns: bool,
}

impl InstanceShape {
    /// Small sparse corpus shape used by the randomized acceptance criteria.
    pub fn small_sparse() -> Self {
        Self {
            n: (3, 8),
            m: (1, 3),
            s: (1, 3),
            zero_prob: 0.2,
            positive_columns: false,
        }
    }
}

pub fn random_dataset(rng: &mut ChaCha8Rng, shape: InstanceShape) -> Dataset {
    let n = rng.gen_range(shape.n.0..=shape.n.1);
    let m = rng.gen_range(shape.m.0..=shape.m.1);
    let s = rng.gen_range(shape.s.0..=shape.s.1);
    loop {
        let mut records = Vec::with_capacity(n);
        for k in 0..n {
            let draw = |rng: &mut ChaCha8Rng| -> f64 {
                if rng.gen_bool(shape.zero_prob) {
                    0.0
                } else {
                    rng.gen_range(0.5..10.0)
                }
            };
            let mut inputs: Vec<f64> = (0..m).map(|_| draw(rng)).collect();
            let mut outputs: Vec<f64> = (0..s).map(|_| draw(rng)).collect();
            if inputs.iter().all(|&v| v == 0.0) {
                inputs[rng.gen_range(0..m)] = rng.gen_range(0.5..10.0);
            }
            if outputs.iter().all(|&v| v == 0.0) {
                outputs[rng.gen_range(0..s)] = rng.gen_range(0.5..10.0);
            }
            records.push(DmuRecord::new(format!("U{}", k + 1), inputs, outputs));
        }
        if shape.positive_columns {
            for i in 0..m {
                if records.iter().all(|r| r.inputs[i] == 0.0) {
                    let k = rng.gen_range(0..n);
                    records[k].inputs[i] = rng.gen_range(0.5..10.0);
                }
            }
            for r in 0..s {
                if records.iter().all(|rec| rec.outputs[r] == 0.0) {
                    let k = rng.gen_range(0..n);
                    records[k].outputs[r] = rng.gen_range(0.5..10.0);
                }
            }
        }
        if let Ok(ds) = Dataset::validate(records, false) {
            return ds;
        }
    }
}

/// Random intensity bounds: CRS, VRS, or a finite generalized band.
pub fn random_rts(rng: &mut ChaCha8Rng) -> RtsSpec {
    match rng.gen_range(0..4) {
        0 => RtsSpec::crs(),
        1 => RtsSpec::vrs(),
        2 => RtsSpec::grs(rng.gen_range(0.0..1.0), f64::INFINITY).unwrap(),
        _ => RtsSpec::grs(rng.gen_range(0.0..1.0), rng.gen_range(1.0..3.0)).unwrap(),
    }
}

// ---------------------------------------------------------------------------
// ratio-iteration oracle for the fractional model
// ---------------------------------------------------------------------------

/// Assembles the fractional generalized model directly from the context
/// data. Test-side twin of the production builder, kept separate on
/// purpose.
pub fn fractional_program_for(ctx: &EvaluationContext, g: &DirectionVector) -> FractionalProgram {
    let m = ctx.num_inputs();
    let s = ctx.num_outputs();
    let o = ctx.evaluated();
    let mut fp = FractionalProgram::new();
    let lambdas: Vec<_> = ctx
        .reference()
        .map(|(j, _)| fp.add_var(format!("l{j}"), 0.0, f64::INFINITY))
        .collect();
    let tau_minus: Vec<_> = (0..m)
        .map(|i| fp.add_var(format!("tm{i}"), 0.0, f64::INFINITY))
        .collect();
    let tau_plus: Vec<_> = (0..s)
        .map(|r| fp.add_var(format!("tp{r}"), 0.0, f64::INFINITY))
        .collect();
    for (i, &tm) in tau_minus.iter().enumerate() {
        let mut row: Vec<_> = ctx
            .reference()
            .zip(&lambdas)
            .map(|((_, d), &l)| (l, d.inputs[i]))
            .collect();
        row.push((tm, -g.g_minus()[i]));
        fp.add_constraint(&row, Relation::Le, o.inputs[i]);
    }
    for (r, &tp) in tau_plus.iter().enumerate() {
        let mut row: Vec<_> = ctx
            .reference()
            .zip(&lambdas)
            .map(|((_, d), &l)| (l, d.outputs[r]))
            .collect();
        row.push((tp, g.g_plus()[r]));
        fp.add_constraint(&row, Relation::Ge, o.outputs[r]);
    }
    let sum: Vec<_> = lambdas.iter().map(|&l| (l, 1.0)).collect();
    if ctx.rts().lower() > 0.0 {
        fp.add_constraint(&sum, Relation::Ge, ctx.rts().lower());
    }
    if ctx.rts().upper().is_finite() {
        fp.add_constraint(&sum, Relation::Le, ctx.rts().upper());
    }
    let num: Vec<_> = tau_minus.iter().map(|&v| (v, 1.0 / m as f64)).collect();
    let den: Vec<_> = tau_plus.iter().map(|&v| (v, -1.0 / s as f64)).collect();
    fp.set_numerator(&num, 1.0);
    fp.set_denominator(&den, 1.0);
    fp
}

/// Parametric ratio iteration: repeatedly solve `min numerator - q *
/// denominator` and update `q` to the ratio at the argmin, until the
/// auxiliary optimum vanishes.
///
/// The feasible set may contain points whose denominator is zero (full
/// output contraction), where the ratio is infinite. Starting from a `q`
/// with a strictly negative auxiliary optimum sidesteps them: the
/// numerator is at least one everywhere, so a negative `numerator - q *
/// denominator` forces a positive denominator at every later argmin, and
/// the updates descend monotonically to the optimal ratio.
pub fn dinkelbach_ratio(fp: &FractionalProgram, q0: f64) -> Option<f64> {
    let evaluate = |q: f64| -> Option<(f64, f64)> {
        match fp.parametric_lp(q).solve().ok()? {
            LpOutcome::Optimal(sol) => Some((sol.objective, fp.eval_ratio(sol.values()))),
            _ => None,
        }
    };
    // find a strict upper start
    let mut hi = q0.max(2.0);
    loop {
        let (aux, _) = evaluate(hi)?;
        if aux < 0.0 {
            break;
        }
        if aux <= 1e-11 * (1.0 + hi) {
            return Some(hi);
        }
        hi *= 2.0;
        if hi > 1e12 {
            return None;
        }
    }
    let mut q = hi;
    for _ in 0..300 {
        let (aux, ratio) = evaluate(q)?;
        if !ratio.is_finite() {
            return None;
        }
        if (q - ratio).abs() <= 1e-12 * (1.0 + q.abs()) || aux >= 0.0 {
            return Some(ratio.min(q));
        }
        q = ratio;
    }
    Some(q)
}

// ---------------------------------------------------------------------------
// two-variable radial oracle for the fully radial hybrid model
// ---------------------------------------------------------------------------

/// Fully radial two-factor program solved directly: one expansion factor
/// for all inputs, one contraction factor for all outputs, objective is
/// their sum. Returns `(objective, product_index)`.
pub fn radial_two_factor(ctx: &EvaluationContext, g: &DirectionVector) -> Option<(f64, f64)> {
    let o = ctx.evaluated();
    let mut lp = LinearProgram::new();
    let lambdas: Vec<_> = ctx
        .reference()
        .map(|(j, _)| lp.add_var(format!("l{j}"), 0.0, f64::INFINITY))
        .collect();
    let te = lp.add_var("expand", 0.0, f64::INFINITY);
    let tc = lp.add_var("contract", 0.0, f64::INFINITY);
    for i in 0..ctx.num_inputs() {
        let mut row: Vec<_> = ctx
            .reference()
            .zip(&lambdas)
            .map(|((_, d), &l)| (l, d.inputs[i]))
            .collect();
        row.push((te, -g.g_minus()[i]));
        lp.add_constraint(&row, Relation::Le, o.inputs[i]);
    }
    for r in 0..ctx.num_outputs() {
        let mut row: Vec<_> = ctx
            .reference()
            .zip(&lambdas)
            .map(|((_, d), &l)| (l, d.outputs[r]))
            .collect();
        row.push((tc, g.g_plus()[r]));
        lp.add_constraint(&row, Relation::Ge, o.outputs[r]);
    }
    let sum: Vec<_> = lambdas.iter().map(|&l| (l, 1.0)).collect();
    if ctx.rts().lower() > 0.0 {
        lp.add_constraint(&sum, Relation::Ge, ctx.rts().lower());
    }
    if ctx.rts().upper().is_finite() {
        lp.add_constraint(&sum, Relation::Le, ctx.rts().upper());
    }
    lp.set_objective(&[(te, 1.0), (tc, 1.0)], 0.0);
    match lp.solve().ok()? {
        LpOutcome::Optimal(sol) => {
            let e = sol.value(te);
            let c = sol.value(tc);
            if 1.0 - c <= 1e-12 {
                None
            } else {
                Some((sol.objective, (1.0 + e) / (1.0 - c)))
            }
        }
        _ => None,
    }
}
