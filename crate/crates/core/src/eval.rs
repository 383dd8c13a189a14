//! Accuracy against decision rate, AUROC and AUPRC for verdict collections.

use alloc::vec::Vec;

use rand::Rng;

use crate::causal::{CausalVerdict, Direction};
use crate::error::{Error, Result};
use crate::rng::seeded;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvePoint {
    pub rate: f64,
    pub accuracy: f64,
}

/// `auroc` / `auprc` are `None` where the area is undefined (one class).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub decision_rate_curve: Vec<CurvePoint>,
    pub auroc: Option<f64>,
    pub auprc: Option<f64>,
    pub overall_accuracy: f64,
}

/// Twenty evenly spaced decision rates, 0.05 to 1.0.
pub fn default_rates() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    if a == 0 {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Resolves undecided verdicts with a fair coin. One flip per undecided
/// verdict, drawn in input order from a generator seeded with `coin_seed`.
pub fn resolve_with_coin(verdicts: &[CausalVerdict], coin_seed: u64) -> Vec<Direction> {
    let mut rng = seeded(coin_seed);
    verdicts
        .iter()
        .map(|v| match v.direction {
            Direction::Undecided if rng.random::<bool>() => Direction::XtoY,
            Direction::Undecided => Direction::YtoX,
            d => d,
        })
        .collect()
}

/// Accuracy over the `ceil(rate · N)` strongest verdicts for each rate.
///
/// Verdicts are ordered by strength, descending, with input position
/// breaking ties. Undecided verdicts keep their strength for the ordering
/// and are settled by [`resolve_with_coin`] before scoring.
pub fn decision_rate_accuracy(
    verdicts: &[CausalVerdict],
    truths: &[Direction],
    rates: &[f64],
    coin_seed: u64,
) -> Result<Vec<CurvePoint>> {
    check_lengths(verdicts.len(), truths.len())?;
    if rates.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(Error::InvalidParameter("decision rates must lie in (0, 1]"));
    }
    let resolved = resolve_with_coin(verdicts, coin_seed);
    let mut order: Vec<usize> = (0..verdicts.len()).collect();
    order.sort_by(|&a, &b| verdicts[b].strength.total_cmp(&verdicts[a].strength));
    // correct[k] = correct answers among the k strongest
    let mut correct = Vec::with_capacity(order.len() + 1);
    correct.push(0usize);
    for &i in &order {
        let hit = usize::from(resolved[i] == truths[i]);
        correct.push(correct.last().unwrap() + hit);
    }
    let n = verdicts.len();
    Ok(rates
        .iter()
        .map(|&rate| {
            let k = (libm::ceil(rate * n as f64) as usize).clamp(1, n);
            CurvePoint { rate, accuracy: correct[k] as f64 / k as f64 }
        })
        .collect())
}

fn labels(truths: &[Direction]) -> Result<Vec<bool>> {
    truths
        .iter()
        .map(|t| match t {
            Direction::XtoY => Ok(true),
            Direction::YtoX => Ok(false),
            Direction::Undecided => Err(Error::InvalidParameter("ground truth cannot be undecided")),
        })
        .collect()
}

fn check_scores(scores: &[f64]) -> Result<()> {
    match scores.iter().position(|s| !s.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Area under the ROC curve via the Mann–Whitney statistic with midranks, so
/// tied scores count one half. x→y is the positive class.
pub fn auroc(signed_scores: &[f64], truths: &[Direction]) -> Result<Option<f64>> {
    check_lengths(signed_scores.len(), truths.len())?;
    check_scores(signed_scores)?;
    let labels = labels(truths)?;
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..signed_scores.len()).collect();
    order.sort_by(|&a, &b| signed_scores[a].total_cmp(&signed_scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && signed_scores[order[j + 1]] == signed_scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their average
        let mid = (i + j) as f64 / 2.0 + 1.0;
        rank_sum_pos += mid * order[i..=j].iter().filter(|&&k| labels[k]).count() as f64;
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(Some(u / (n_pos as f64 * n_neg as f64)))
}

/// Average precision: `Σ (R_k − R_{k−1}) · P_k` over a descending threshold
/// sweep, tied scores forming one threshold. `None` without positives.
pub fn auprc(signed_scores: &[f64], truths: &[Direction]) -> Result<Option<f64>> {
    check_lengths(signed_scores.len(), truths.len())?;
    check_scores(signed_scores)?;
    let labels = labels(truths)?;
    let n_pos = labels.iter().filter(|&&l| l).count();
    if n_pos == 0 {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..signed_scores.len()).collect();
    order.sort_by(|&a, &b| signed_scores[b].total_cmp(&signed_scores[a]));
    let (mut tp, mut seen) = (0usize, 0usize);
    let mut prev_recall = 0.0;
    let mut area = 0.0;
    let mut i = 0;
    while i < order.len() {
        let score = signed_scores[order[i]];
        while i < order.len() && signed_scores[order[i]] == score {
            tp += usize::from(labels[order[i]]);
            seen += 1;
            i += 1;
        }
        let recall = tp as f64 / n_pos as f64;
        let precision = tp as f64 / seen as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    Ok(Some(area))
}

/// Full report for one verdict collection.
///
/// The curve is computed at `rates` sorted, deduplicated and completed with
/// 1.0. AUROC and AUPRC use every pair in both orientations: a verdict on
/// (x, y) with truth t also stands for the swapped pair with negated signed
/// score and mirrored truth. This keeps the areas defined when a battery
/// has a single ground-truth direction.
pub fn evaluate(verdicts: &[CausalVerdict], truths: &[Direction], rates: &[f64], coin_seed: u64) -> Result<EvalReport> {
    let mut rates: Vec<f64> = rates.to_vec();
    rates.sort_by(f64::total_cmp);
    rates.dedup();
    if rates.last() != Some(&1.0) {
        rates.push(1.0);
    }
    let decision_rate_curve = decision_rate_accuracy(verdicts, truths, &rates, coin_seed)?;
    let overall_accuracy = decision_rate_curve.last().expect("1.0 present").accuracy;
    let mut scores = Vec::with_capacity(2 * verdicts.len());
    let mut both = Vec::with_capacity(2 * verdicts.len());
    for (v, &t) in verdicts.iter().zip(truths) {
        let s = v.signed_score();
        scores.extend([s, -s]);
        both.extend([t, t.mirrored()]);
    }
    Ok(EvalReport {
        decision_rate_curve,
        auroc: auroc(&scores, &both)?,
        auprc: auprc(&scores, &both)?,
        overall_accuracy,
    })
}
