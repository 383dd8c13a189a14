//! LZ76 complexity (exhaustive production history) over arbitrary finite
//! alphabets.
//!
//! A phrase starting at position `w` keeps growing while the phrase so far is
//! reproducible from earlier material, i.e. `s[w..w+m]` occurs at some start
//! before `w` (overlap allowed). The first symbol that breaks this is the
//! novel symbol closing the phrase; a phrase cut off by the end of the input
//! still counts.
//!
//! The parse runs in linear time on a suffix automaton of the whole input.
//! Each automaton state remembers the earliest end position of its strings,
//! so "occurs starting before `w`" becomes a single comparison.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sequence::{Symbol, SymbolicSequence};

/// Number of phrases in the LZ76 parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LzCount(pub usize);

impl LzCount {
    pub fn get(self) -> usize {
        self.0
    }
}

/// Which sequence goes first when building the joint string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinOrder {
    XThenY,
    YThenX,
}

pub fn lz76(s: &SymbolicSequence) -> LzCount {
    LzCount(parse_len(s.symbols()))
}

/// [`lz76`] over a raw slice.
pub fn lz76_symbols(s: &[Symbol]) -> Result<LzCount> {
    if s.is_empty() {
        return Err(Error::Empty);
    }
    Ok(LzCount(parse_len(s)))
}

/// LZ76 of the concatenation of `x` and `y` in the requested order.
pub fn lz_joint(x: &SymbolicSequence, y: &SymbolicSequence, order: JoinOrder) -> LzCount {
    let joined = match order {
        JoinOrder::XThenY => x.concat(y),
        JoinOrder::YThenX => y.concat(x),
    };
    lz76(&joined)
}

/// Phrase boundaries of the parse: `result[k]` is the start of phrase `k`.
pub fn phrase_starts(s: &[Symbol]) -> Vec<usize> {
    let mut starts = Vec::new();
    parse(s, |w| starts.push(w));
    starts
}

fn parse_len(s: &[Symbol]) -> usize {
    let mut n = 0;
    parse(s, |_| n += 1);
    n
}

fn parse(s: &[Symbol], mut on_phrase: impl FnMut(usize)) {
    if s.is_empty() {
        return;
    }
    let sam = SuffixAutomaton::build(s);
    let n = s.len();
    let mut w = 0;
    while w < n {
        on_phrase(w);
        let mut state = 0u32;
        let mut m = 0;
        // extend while s[w..=w+m] has an occurrence ending before w+m
        while w + m < n {
            let next = sam.transition(state, s[w + m]).expect("substring of the input");
            if (sam.states[next as usize].first_end as usize) < w + m {
                state = next;
                m += 1;
            } else {
                break;
            }
        }
        w += m + 1;
    }
}

const NONE: u32 = u32::MAX;

struct State {
    len: u32,
    link: u32,
    first_end: u32,
    // sorted by symbol
    next: Vec<(Symbol, u32)>,
}

struct SuffixAutomaton {
    states: Vec<State>,
}

impl SuffixAutomaton {
    fn build(s: &[Symbol]) -> Self {
        let mut states = Vec::with_capacity(2 * s.len());
        states.push(State { len: 0, link: NONE, first_end: 0, next: Vec::new() });
        let mut sam = Self { states };
        let mut last = 0u32;
        for (pos, &c) in s.iter().enumerate() {
            last = sam.extend(last, c, pos as u32);
        }
        sam
    }

    fn transition(&self, state: u32, c: Symbol) -> Option<u32> {
        let next = &self.states[state as usize].next;
        next.binary_search_by_key(&c, |e| e.0).ok().map(|i| next[i].1)
    }

    fn set_transition(&mut self, state: u32, c: Symbol, target: u32) {
        let next = &mut self.states[state as usize].next;
        match next.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => next[i].1 = target,
            Err(i) => next.insert(i, (c, target)),
        }
    }

    fn extend(&mut self, last: u32, c: Symbol, pos: u32) -> u32 {
        let cur = self.states.len() as u32;
        let len = self.states[last as usize].len + 1;
        self.states.push(State { len, link: NONE, first_end: pos, next: Vec::new() });
        let mut p = last;
        while p != NONE && self.transition(p, c).is_none() {
            self.set_transition(p, c, cur);
            p = self.states[p as usize].link;
        }
        if p == NONE {
            self.states[cur as usize].link = 0;
            return cur;
        }
        let q = self.transition(p, c).unwrap();
        if self.states[p as usize].len + 1 == self.states[q as usize].len {
            self.states[cur as usize].link = q;
            return cur;
        }
        let clone = self.states.len() as u32;
        let q_state = &self.states[q as usize];
        let cloned = State {
            len: self.states[p as usize].len + 1,
            link: q_state.link,
            first_end: q_state.first_end,
            next: q_state.next.clone(),
        };
        self.states.push(cloned);
        while p != NONE && self.transition(p, c) == Some(q) {
            self.set_transition(p, c, clone);
            p = self.states[p as usize].link;
        }
        self.states[q as usize].link = clone;
        self.states[cur as usize].link = clone;
        cur
    }
}
