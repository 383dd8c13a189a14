//! The three causal models: ETC penalty, ETC efficacy and LZ penalty.
//!
//! Penalty models score the extra complexity of describing one sequence with
//! the other's grammar; the direction with the smaller penalty wins. The
//! efficacy model scores the normalized complexity of what the foreign
//! grammar leaves behind; by default the larger score wins.

use alloc::borrow::Cow;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::etc::{etc_compress, etc_compress_from, etc_conditional_with, ConditionalMode, EtcResult, Grammar};
use crate::lz::{lz76, LzCount};
use crate::sequence::SymbolicSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Model {
    #[cfg_attr(feature = "serde", serde(rename = "ETC-P"))]
    EtcPenalty,
    #[cfg_attr(feature = "serde", serde(rename = "ETC-E"))]
    EtcEfficacy,
    #[cfg_attr(feature = "serde", serde(rename = "LZ-P"))]
    LzPenalty,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::EtcPenalty, Model::EtcEfficacy, Model::LzPenalty];

    pub fn name(self) -> &'static str {
        match self {
            Model::EtcPenalty => "ETC-P",
            Model::EtcEfficacy => "ETC-E",
            Model::LzPenalty => "LZ-P",
        }
    }

    pub fn is_penalty(self) -> bool {
        !matches!(self, Model::EtcEfficacy)
    }

    fn uses_etc(self) -> bool {
        !matches!(self, Model::LzPenalty)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    /// Accepts `ETC-P`, `etc-p`, `etcp`, ... case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let norm = |c: char| c.to_ascii_lowercase();
        let mut key = [0u8; 8];
        let mut n = 0;
        for c in s.trim().chars().filter(|&c| c != '-' && c != '_').map(norm) {
            if n == key.len() || !c.is_ascii() {
                return Err(Error::InvalidParameter("unknown model"));
            }
            key[n] = c as u8;
            n += 1;
        }
        match &key[..n] {
            b"etcp" => Ok(Model::EtcPenalty),
            b"etce" => Ok(Model::EtcEfficacy),
            b"lzp" => Ok(Model::LzPenalty),
            _ => Err(Error::InvalidParameter("unknown model")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Direction {
    #[cfg_attr(feature = "serde", serde(rename = "x->y"))]
    XtoY,
    #[cfg_attr(feature = "serde", serde(rename = "y->x"))]
    YtoX,
    #[cfg_attr(feature = "serde", serde(rename = "undecided"))]
    Undecided,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::XtoY => "x->y",
            Direction::YtoX => "y->x",
            Direction::Undecided => "undecided",
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Direction::XtoY => Direction::YtoX,
            Direction::YtoX => Direction::XtoY,
            Direction::Undecided => Direction::Undecided,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x->y" => Ok(Direction::XtoY),
            "y->x" => Ok(Direction::YtoX),
            "undecided" => Ok(Direction::Undecided),
            _ => Err(Error::InvalidParameter("unknown direction")),
        }
    }
}

/// How the joint LZ term is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum JointMode {
    /// One joint complexity for both directions. The two sequences are
    /// concatenated in a canonical order (shorter first, then
    /// lexicographically smaller) so the verdict does not depend on argument
    /// order.
    #[default]
    Shared,
    /// `LZ(x·y)` for x→y and `LZ(y·x)` for y→x.
    Matched,
}

/// Which efficacy score names the cause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EfficacyPolarity {
    #[default]
    GreaterWins,
    LesserWins,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CausalConfig {
    /// Score gaps at or below this are undecided.
    pub threshold: f64,
    pub joint: JointMode,
    pub conditional: ConditionalMode,
    pub efficacy_polarity: EfficacyPolarity,
}

impl Default for CausalConfig {
    fn default() -> Self {
        Self {
            threshold: 0.0,
            joint: JointMode::Shared,
            conditional: ConditionalMode::FiringRules,
            efficacy_polarity: EfficacyPolarity::GreaterWins,
        }
    }
}

impl CausalConfig {
    pub fn with_threshold(threshold: f64) -> Self {
        Self { threshold, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CausalVerdict {
    pub model: Model,
    pub direction: Direction,
    pub score_xy: f64,
    pub score_yx: f64,
    /// `|score_yx - score_xy|`
    pub strength: f64,
}

impl CausalVerdict {
    /// The verdict for the swapped pair.
    pub fn mirrored(&self) -> Self {
        Self {
            model: self.model,
            direction: self.direction.mirrored(),
            score_xy: self.score_yx,
            score_yx: self.score_xy,
            strength: self.strength,
        }
    }

    /// Score oriented so positive values favour x→y: `score_yx - score_xy`
    /// for penalty models, `score_xy - score_yx` for efficacy.
    pub fn signed_score(&self) -> f64 {
        self.signed_score_with(EfficacyPolarity::GreaterWins)
    }

    pub fn signed_score_with(&self, polarity: EfficacyPolarity) -> f64 {
        match (self.model.is_penalty(), polarity) {
            (true, _) | (false, EfficacyPolarity::LesserWins) => self.score_yx - self.score_xy,
            (false, EfficacyPolarity::GreaterWins) => self.score_xy - self.score_yx,
        }
    }
}

/// A sequence together with the complexity summaries the models need, so a
/// sequence paired many times (a reference genome) is compressed once.
#[derive(Debug, Clone)]
pub struct Profile {
    seq: SymbolicSequence,
    etc: Option<EtcResult>,
    lz: Option<LzCount>,
}

impl Profile {
    pub fn new(seq: SymbolicSequence, models: &[Model]) -> Self {
        let etc = models.iter().any(|m| m.uses_etc()).then(|| etc_compress(&seq));
        let lz = models.contains(&Model::LzPenalty).then(|| lz76(&seq));
        Self { seq, etc, lz }
    }

    pub fn sequence(&self) -> &SymbolicSequence {
        &self.seq
    }

    fn etc(&self) -> Cow<'_, EtcResult> {
        match &self.etc {
            Some(r) => Cow::Borrowed(r),
            None => Cow::Owned(etc_compress(&self.seq)),
        }
    }

    fn lz(&self) -> LzCount {
        self.lz.unwrap_or_else(|| lz76(&self.seq))
    }
}

pub fn etc_penalty(x: &SymbolicSequence, y: &SymbolicSequence, threshold: f64) -> Result<CausalVerdict> {
    evaluate(Model::EtcPenalty, x, y, &CausalConfig::with_threshold(threshold))
}

pub fn etc_efficacy(x: &SymbolicSequence, y: &SymbolicSequence, threshold: f64) -> Result<CausalVerdict> {
    evaluate(Model::EtcEfficacy, x, y, &CausalConfig::with_threshold(threshold))
}

pub fn lz_penalty(x: &SymbolicSequence, y: &SymbolicSequence, threshold: f64) -> Result<CausalVerdict> {
    evaluate(Model::LzPenalty, x, y, &CausalConfig::with_threshold(threshold))
}

pub fn evaluate(model: Model, x: &SymbolicSequence, y: &SymbolicSequence, cfg: &CausalConfig) -> Result<CausalVerdict> {
    let mut v = evaluate_many(&[model], x, y, cfg)?;
    Ok(v.remove(0))
}

/// Verdicts for several models, sharing the compression work between them.
pub fn evaluate_many(
    models: &[Model],
    x: &SymbolicSequence,
    y: &SymbolicSequence,
    cfg: &CausalConfig,
) -> Result<Vec<CausalVerdict>> {
    validate(x, y, cfg)?;
    let px = Profile::new(x.clone(), models);
    let py = Profile::new(y.clone(), models);
    evaluate_profiles(models, &px, &py, cfg)
}

pub fn evaluate_profiles(
    models: &[Model],
    px: &Profile,
    py: &Profile,
    cfg: &CausalConfig,
) -> Result<Vec<CausalVerdict>> {
    let (x, y) = (px.sequence(), py.sequence());
    validate(x, y, cfg)?;
    let etc =
        if models.iter().any(|m| m.uses_etc()) { Some(EtcScores::compute(px, py, cfg.conditional)?) } else { None };
    let mut out = Vec::with_capacity(models.len());
    for &model in models {
        let verdict = match model {
            Model::EtcPenalty => {
                let s = etc.as_ref().expect("computed above");
                lower_wins(model, s.penalty_xy, s.penalty_yx, cfg.threshold)
            }
            Model::EtcEfficacy => {
                let s = etc.as_ref().expect("computed above");
                match cfg.efficacy_polarity {
                    EfficacyPolarity::GreaterWins => greater_wins(model, s.efficacy_xy, s.efficacy_yx, cfg.threshold),
                    EfficacyPolarity::LesserWins => lower_wins(model, s.efficacy_xy, s.efficacy_yx, cfg.threshold),
                }
            }
            Model::LzPenalty => {
                let (joint_xy, joint_yx) = joint_terms(x, y, cfg.joint);
                let lx = px.lz().get() as f64;
                let ly = py.lz().get() as f64;
                lower_wins(model, joint_xy - lx, joint_yx - ly, cfg.threshold)
            }
        };
        out.push(verdict);
    }
    Ok(out)
}

fn validate(x: &SymbolicSequence, y: &SymbolicSequence, cfg: &CausalConfig) -> Result<()> {
    if !(cfg.threshold >= 0.0 && cfg.threshold.is_finite()) {
        return Err(Error::InvalidParameter("threshold must be finite and non-negative"));
    }
    for s in [x, y] {
        if s.len() < 2 {
            return Err(Error::TooShort { len: s.len(), min: 2 });
        }
    }
    if x.symbols() == y.symbols() {
        return Err(Error::IdenticalSequences);
    }
    Ok(())
}

fn joint_terms(x: &SymbolicSequence, y: &SymbolicSequence, mode: JointMode) -> (f64, f64) {
    match mode {
        JointMode::Shared => {
            let x_first = (x.len(), x.symbols()) <= (y.len(), y.symbols());
            let joined = if x_first { x.concat(y) } else { y.concat(x) };
            let j = lz76(&joined).get() as f64;
            (j, j)
        }
        JointMode::Matched => (lz76(&x.concat(y)).get() as f64, lz76(&y.concat(x)).get() as f64),
    }
}

struct EtcScores {
    penalty_xy: f64,
    penalty_yx: f64,
    efficacy_xy: f64,
    efficacy_yx: f64,
}

/// One direction: compress `target` with `grammar`, then compress what is
/// left. Returns (penalty, efficacy).
fn cross_compress(
    target: &SymbolicSequence,
    target_etc: usize,
    grammar: &Grammar,
    mode: ConditionalMode,
) -> Result<(f64, f64)> {
    let cond = etc_conditional_with(target, grammar, mode)?;
    let first_fresh = cond.residual.alphabet_size();
    let residual = etc_compress_from(&cond.residual, first_fresh)?;
    let penalty = cond.applied_steps as f64 + residual.steps as f64 - target_etc as f64;
    Ok((penalty, residual.normalized))
}

impl EtcScores {
    fn compute(px: &Profile, py: &Profile, mode: ConditionalMode) -> Result<Self> {
        let base = px.sequence().alphabet_size().max(py.sequence().alphabet_size());
        let (ex, ey) = (px.etc(), py.etc());
        let gx = rebase(&ex.grammar, base);
        let gy = rebase(&ey.grammar, base);
        let (penalty_xy, efficacy_xy) = cross_compress(py.sequence(), ey.steps, &gx, mode)?;
        let (penalty_yx, efficacy_yx) = cross_compress(px.sequence(), ex.steps, &gy, mode)?;
        Ok(Self { penalty_xy, penalty_yx, efficacy_xy, efficacy_yx })
    }
}

fn rebase(g: &Grammar, base: u32) -> Cow<'_, Grammar> {
    if g.first_fresh() == base {
        Cow::Borrowed(g)
    } else {
        Cow::Owned(g.rebased(base))
    }
}

fn lower_wins(model: Model, score_xy: f64, score_yx: f64, threshold: f64) -> CausalVerdict {
    let gap = score_yx - score_xy;
    verdict(model, score_xy, score_yx, gap, threshold)
}

fn greater_wins(model: Model, score_xy: f64, score_yx: f64, threshold: f64) -> CausalVerdict {
    let gap = score_xy - score_yx;
    verdict(model, score_xy, score_yx, gap, threshold)
}

/// `gap > 0` favours x→y.
fn verdict(model: Model, score_xy: f64, score_yx: f64, gap: f64, threshold: f64) -> CausalVerdict {
    let direction = if gap > threshold {
        Direction::XtoY
    } else if -gap > threshold {
        Direction::YtoX
    } else {
        Direction::Undecided
    };
    CausalVerdict { model, direction, score_xy, score_yx, strength: (score_yx - score_xy).abs() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::Rng;

    fn seq(v: Vec<u32>, alphabet: u32) -> SymbolicSequence {
        SymbolicSequence::new(v, alphabet).unwrap()
    }

    fn periodic_and_random() -> (SymbolicSequence, SymbolicSequence) {
        let x = seq((0..100).map(|i| 1 + (i % 2)).collect(), 3);
        let mut rng = seeded(42);
        let y = seq((0..100).map(|_| rng.random_range(0..2u32)).collect(), 3);
        (x, y)
    }

    #[test]
    fn strength_is_the_score_gap() {
        let (x, y) = periodic_and_random();
        for v in evaluate_many(&Model::ALL, &x, &y, &CausalConfig::default()).unwrap() {
            assert_eq!(v.strength, (v.score_yx - v.score_xy).abs());
        }
    }

    #[test]
    fn swapping_mirrors_every_model() {
        let (x, y) = periodic_and_random();
        let cfg = CausalConfig::default();
        let fwd = evaluate_many(&Model::ALL, &x, &y, &cfg).unwrap();
        let back = evaluate_many(&Model::ALL, &y, &x, &cfg).unwrap();
        for (f, b) in fwd.iter().zip(&back) {
            assert_eq!(f.mirrored(), *b);
        }
    }

    #[test]
    fn rejects_identical_and_short() {
        let x = seq(vec![0, 1, 1], 2);
        assert_eq!(etc_penalty(&x, &x, 0.0), Err(Error::IdenticalSequences));
        let short = seq(vec![1], 2);
        assert_eq!(lz_penalty(&x, &short, 0.0), Err(Error::TooShort { len: 1, min: 2 }));
        assert!(matches!(etc_efficacy(&x, &seq(vec![1, 0], 2), -1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn efficacy_zero_for_collapsed_residual() {
        // x's grammar reduces y = [0,1] to a single symbol
        let x = seq(vec![0, 1, 0, 1], 2);
        let y = seq(vec![0, 1], 2);
        let v = etc_efficacy(&x, &y, 0.0).unwrap();
        assert_eq!(v.score_xy, 0.0);
    }

    #[test]
    fn shared_joint_strength_is_lz_gap() {
        let (x, y) = periodic_and_random();
        let v = lz_penalty(&x, &y, 0.0).unwrap();
        let gap = lz76(&x).get() as f64 - lz76(&y).get() as f64;
        assert_eq!(v.strength, gap.abs());
    }

    #[test]
    fn threshold_turns_small_gaps_undecided() {
        let (x, y) = periodic_and_random();
        let v = lz_penalty(&x, &y, 0.0).unwrap();
        let wide = lz_penalty(&x, &y, v.strength).unwrap();
        assert_eq!(wide.direction, Direction::Undecided);
    }

    #[test]
    fn unequal_lengths_and_alphabets_are_fine() {
        let x = seq(vec![0, 1, 0, 0, 1, 1, 0], 2);
        let y = seq(vec![4, 2, 3, 1, 4, 4, 2, 1, 3, 3, 2, 1], 5);
        let v = evaluate_many(&Model::ALL, &x, &y, &CausalConfig::default()).unwrap();
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn model_and_direction_names() {
        assert_eq!("lz-p".parse::<Model>().unwrap(), Model::LzPenalty);
        assert_eq!("ETC-E".parse::<Model>().unwrap(), Model::EtcEfficacy);
        assert_eq!("etcp".parse::<Model>().unwrap(), Model::EtcPenalty);
        assert!("zip".parse::<Model>().is_err());
        assert_eq!("y->x".parse::<Direction>().unwrap(), Direction::YtoX);
        assert_eq!(Direction::Undecided.to_string(), "undecided");
    }

    #[test]
    fn signed_score_agrees_with_direction() {
        let (x, y) = periodic_and_random();
        for joint in [JointMode::Shared, JointMode::Matched] {
            let cfg = CausalConfig { joint, ..CausalConfig::default() };
            for v in evaluate_many(&Model::ALL, &x, &y, &cfg).unwrap() {
                match v.direction {
                    Direction::XtoY => assert!(v.signed_score() > 0.0),
                    Direction::YtoX => assert!(v.signed_score() < 0.0),
                    Direction::Undecided => assert_eq!(v.signed_score(), 0.0),
                }
            }
        }
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (prop::collection::vec(0u32..3, 2..60), prop::collection::vec(0u32..3, 2..60))
            .prop_filter("distinct", |(a, b)| a != b)
    }

    proptest! {
        #[test]
        fn antisymmetry(
            (a, b) in arb_pair(),
            threshold in prop_oneof![Just(0.0), 0.0f64..3.0],
            matched in any::<bool>(),
            all_rules in any::<bool>(),
            lesser in any::<bool>(),
        ) {
            let cfg = CausalConfig {
                threshold,
                joint: if matched { JointMode::Matched } else { JointMode::Shared },
                conditional: if all_rules { ConditionalMode::AllRules } else { ConditionalMode::FiringRules },
                efficacy_polarity: if lesser { EfficacyPolarity::LesserWins } else { EfficacyPolarity::GreaterWins },
            };
            let (x, y) = (seq(a, 3), seq(b, 3));
            let fwd = evaluate_many(&Model::ALL, &x, &y, &cfg).unwrap();
            let back = evaluate_many(&Model::ALL, &y, &x, &cfg).unwrap();
            for (f, r) in fwd.iter().zip(&back) {
                prop_assert_eq!(f.mirrored(), *r);
                prop_assert_eq!(f.direction == Direction::Undecided, f.strength <= threshold);
                if threshold == 0.0 && f.score_xy != f.score_yx {
                    prop_assert_ne!(f.direction, Direction::Undecided);
                }
            }
            prop_assert_eq!(&fwd, &evaluate_many(&Model::ALL, &x, &y, &cfg).unwrap());
        }

        #[test]
        fn score_ranges((a, b) in arb_pair()) {
            let (x, y) = (seq(a, 3), seq(b, 3));
            let cfg = CausalConfig { joint: JointMode::Matched, ..CausalConfig::default() };
            let v = evaluate_many(&Model::ALL, &x, &y, &cfg).unwrap();
            prop_assert!((0.0..=1.0).contains(&v[1].score_xy) && (0.0..=1.0).contains(&v[1].score_yx));
            prop_assert!(v[2].score_xy >= 0.0 && v[2].score_yx >= 0.0);
        }
    }
}
