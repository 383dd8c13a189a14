//! Effort-To-Compress: the number of non-sequential recursive pair
//! substitution (NSRPS) steps needed to reduce a sequence to a constant one.
//!
//! Each step counts adjacent pairs greedily left to right without overlap
//! (so `1 1 1` holds a single `(1, 1)`), picks the most frequent pair (ties:
//! leftmost first occurrence), and replaces its non-overlapping occurrences
//! with a fresh symbol. The rules recorded along the way form the inferred
//! [`Grammar`].

mod table;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sequence::{Symbol, SymbolicSequence};
use table::PairTable;

/// `(left, right) -> output`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub left: Symbol,
    pub right: Symbol,
    pub output: Symbol,
}

/// Ordered substitution rules inferred by NSRPS.
///
/// Outputs are consecutive fresh ids starting at `first_fresh`; rule `k` was
/// produced by step `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grammar {
    rules: Vec<Rule>,
    first_fresh: Symbol,
}

impl Grammar {
    pub fn empty(first_fresh: Symbol) -> Self {
        Self { rules: Vec::new(), first_fresh }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn first_fresh(&self) -> Symbol {
        self.first_fresh
    }

    /// The id the next rule would receive.
    pub fn next_fresh(&self) -> Symbol {
        self.first_fresh + self.rules.len() as Symbol
    }

    /// Same grammar with fresh ids moved to start at `first_fresh`.
    /// Terminal ids (below the old base) are untouched.
    pub fn rebased(&self, first_fresh: Symbol) -> Self {
        let old = self.first_fresh;
        let map = |s: Symbol| if s >= old { s - old + first_fresh } else { s };
        Self {
            rules: self
                .rules
                .iter()
                .map(|r| Rule { left: map(r.left), right: map(r.right), output: map(r.output) })
                .collect(),
            first_fresh,
        }
    }

    /// One rule per line, `left right -> output`, in inference order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            let _ = writeln!(out, "{} {} -> {}", r.left, r.right, r.output);
        }
        out
    }

    /// Parses [`Self::to_text`] output. Blank lines and `#` comments are
    /// skipped. Outputs must be consecutive.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = Error::GrammarSyntax { line: n + 1 };
            let (lhs, rhs) = line.split_once("->").ok_or(bad.clone())?;
            let mut parts = lhs.split_whitespace().map(str::parse::<Symbol>);
            let (Some(Ok(left)), Some(Ok(right)), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad);
            };
            let output: Symbol = rhs.trim().parse().map_err(|_| bad.clone())?;
            if let Some(prev) = rules.last().map(|r: &Rule| r.output) {
                if output != prev + 1 {
                    return Err(bad);
                }
            }
            rules.push(Rule { left, right, output });
        }
        let first_fresh = rules.first().map_or(0, |r| r.output);
        Ok(Self { rules, first_fresh })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtcResult {
    /// Number of NSRPS steps.
    pub steps: usize,
    pub grammar: Grammar,
    /// `steps / (len - 1)`, zero for a length-1 input.
    pub normalized: f64,
}

/// How replayed rules are charged in [`etc_conditional_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ConditionalMode {
    /// Only rules whose pair is present when they are reached count.
    #[default]
    FiringRules,
    /// Every rule counts, present or not.
    AllRules,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalResult {
    pub applied_steps: usize,
    pub residual: SymbolicSequence,
}

/// NSRPS with fresh ids starting at the sequence's alphabet size.
pub fn etc_compress(s: &SymbolicSequence) -> EtcResult {
    compress_from(s.symbols(), s.alphabet_size())
}

/// NSRPS with fresh ids starting at `first_fresh`, which must be at least
/// the alphabet size.
pub fn etc_compress_from(s: &SymbolicSequence, first_fresh: Symbol) -> Result<EtcResult> {
    if first_fresh < s.alphabet_size() {
        return Err(Error::InvalidParameter("first fresh id below alphabet size"));
    }
    Ok(compress_from(s.symbols(), first_fresh))
}

fn compress_from(symbols: &[Symbol], first_fresh: Symbol) -> EtcResult {
    let mut table = PairTable::new(symbols, true);
    let mut grammar = Grammar::empty(first_fresh);
    while table.len() > 1 && !table.is_constant() {
        let (left, right) = table.most_frequent().expect("non-constant sequence has a pair");
        let output = grammar.next_fresh();
        table.substitute((left, right), output);
        grammar.rules.push(Rule { left, right, output });
    }
    let steps = grammar.len();
    EtcResult { steps, grammar, normalized: normalize(steps, symbols.len()) }
}

fn normalize(steps: usize, len: usize) -> f64 {
    if len <= 1 {
        0.0
    } else {
        steps as f64 / (len - 1) as f64
    }
}

pub fn normalized_etc(s: &SymbolicSequence) -> f64 {
    etc_compress(s).normalized
}

/// ETC of `target` given grammar `g`, charging only rules that fire.
pub fn etc_conditional(target: &SymbolicSequence, g: &Grammar) -> Result<ConditionalResult> {
    etc_conditional_with(target, g, ConditionalMode::FiringRules)
}

/// Replays `g`'s rules on `target` strictly in order, each at most once.
///
/// A rule whose pair is present performs the usual non-overlapping
/// left-to-right substitution. The residual is the sequence after the last
/// rule; its alphabet covers every id the grammar can emit. Target symbols
/// must lie below the grammar's first fresh id.
pub fn etc_conditional_with(
    target: &SymbolicSequence,
    g: &Grammar,
    mode: ConditionalMode,
) -> Result<ConditionalResult> {
    if !g.is_empty() {
        if let Some(&symbol) = target.symbols().iter().find(|&&s| s >= g.first_fresh()) {
            return Err(Error::GrammarCollision { symbol, first_fresh: g.first_fresh() });
        }
    }
    let mut table = PairTable::new(target.symbols(), false);
    let mut fired = 0;
    for r in g.rules() {
        if table.len() < 2 {
            break;
        }
        if table.contains_pair((r.left, r.right)) {
            table.substitute((r.left, r.right), r.output);
            fired += 1;
        }
    }
    let applied_steps = match mode {
        ConditionalMode::FiringRules => fired,
        ConditionalMode::AllRules => g.len(),
    };
    let alphabet = target.alphabet_size().max(g.next_fresh());
    let residual = SymbolicSequence::new(table.symbols(), alphabet)?;
    Ok(ConditionalResult { applied_steps, residual })
}
