//! Parallel AR(1) benchmark runs and their per-(model, φ) evaluation.

use ccm_causal_core::eval::{evaluate, EvalReport};
use ccm_causal_core::rng::{derive_seed, mix64};
use ccm_causal_core::simulate::{run_trial, BenchmarkPlan, BenchmarkRecord};
use ccm_causal_core::{Direction, Model};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Every trial of the plan on the current rayon pool, in `(phi, trial)`
/// order. Identical to the sequential runner for any thread count.
pub fn run_benchmark(plan: &BenchmarkPlan) -> Result<Vec<BenchmarkRecord>> {
    plan.validate()?;
    Ok((0..plan.trial_count())
        .into_par_iter()
        .map(|k| {
            let (p, t) = plan.cell(k);
            run_trial(plan, p, t)
        })
        .collect::<Result<Vec<_>, _>>()?)
}

/// One row of the benchmark CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub phi: f64,
    pub trial: u32,
    pub truth: Direction,
    pub model: Model,
    pub direction: Direction,
    pub score_xy: f64,
    pub score_yx: f64,
    pub strength: f64,
}

pub fn benchmark_rows(records: &[BenchmarkRecord]) -> Vec<BenchmarkRow> {
    records
        .iter()
        .flat_map(|r| {
            r.verdicts.iter().map(move |v| BenchmarkRow {
                phi: r.phi,
                trial: r.trial,
                truth: r.truth,
                model: v.model,
                direction: v.direction,
                score_xy: v.score_xy,
                score_yx: v.score_yx,
                strength: v.strength,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub model: Model,
    pub phi: f64,
    pub n: usize,
    #[serde(flatten)]
    pub report: EvalReport,
}

/// One row of the curve CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub model: Model,
    pub phi: f64,
    pub n: usize,
    pub rate: f64,
    pub accuracy: f64,
}

/// Evaluates each (model, φ) cell of a benchmark separately.
///
/// Cells come out ordered by model (first appearance) then ascending φ.
/// Each cell flips its coins from a seed derived from `coin_seed`, the
/// model and the φ value, so a cell's report does not depend on which other
/// cells are present.
pub fn evaluate_rows(rows: &[BenchmarkRow], rates: &[f64], coin_seed: u64) -> Result<Vec<CellReport>> {
    let mut models: Vec<Model> = Vec::new();
    let mut phis: Vec<f64> = Vec::new();
    for r in rows {
        if !models.contains(&r.model) {
            models.push(r.model);
        }
        if !phis.iter().any(|p| p.to_bits() == r.phi.to_bits()) {
            phis.push(r.phi);
        }
    }
    phis.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(models.len() * phis.len());
    for &model in &models {
        let slot = Model::ALL.iter().position(|&m| m == model).expect("listed") as u32;
        for &phi in &phis {
            let cell: Vec<&BenchmarkRow> =
                rows.iter().filter(|r| r.model == model && r.phi.to_bits() == phi.to_bits()).collect();
            if cell.is_empty() {
                continue;
            }
            let verdicts: Vec<_> = cell
                .iter()
                .map(|r| ccm_causal_core::CausalVerdict {
                    model,
                    direction: r.direction,
                    score_xy: r.score_xy,
                    score_yx: r.score_yx,
                    strength: r.strength,
                })
                .collect();
            let truths: Vec<Direction> = cell.iter().map(|r| r.truth).collect();
            let seed = derive_seed(coin_seed ^ mix64(phi.to_bits()), slot, 0);
            let report = evaluate(&verdicts, &truths, rates, seed)?;
            out.push(CellReport { model, phi, n: cell.len(), report });
        }
    }
    Ok(out)
}

pub fn curve_rows(cells: &[CellReport]) -> Vec<CurveRow> {
    cells
        .iter()
        .flat_map(|c| {
            c.report.decision_rate_curve.iter().map(move |p| CurveRow {
                model: c.model,
                phi: c.phi,
                n: c.n,
                rate: p.rate,
                accuracy: p.accuracy,
            })
        })
        .collect()
}
