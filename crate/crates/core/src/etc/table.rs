//! Indexed pair-substitution workspace shared by compression and
//! conditional replay.
//!
//! The sequence lives in a doubly linked list over the original positions.
//! A merged pair keeps the position of its left element, so the order of
//! live positions is always the order of the current sequence and a
//! position doubles as a stable "leftmost" key for tie-breaking.
//!
//! For every adjacent pair type we index the left positions of all its
//! occurrences. For `(a, b)` with `a != b` the greedy non-overlapping count
//! is the size of that set. For `(a, a)` the set holds overlapping
//! occurrences; each maximal chain of `m` overlapping occurrences (a run of
//! `m + 1` equal symbols) contributes `ceil(m / 2)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::sequence::Symbol;

const NIL: u32 = u32::MAX;

type Pair = (Symbol, Symbol);

struct Slot {
    pair: Pair,
    occ: BTreeSet<u32>,
    /// Key currently stored in the priority queue, if any.
    queued: Option<(Reverse<u32>, u32)>,
    touched: bool,
}

pub(super) struct PairTable {
    sym: Vec<Symbol>,
    prev: Vec<u32>,
    next: Vec<u32>,
    alive: Vec<bool>,
    len: usize,
    ids: BTreeMap<Pair, u32>,
    slots: Vec<Slot>,
    /// (count desc, first position asc, slot id)
    queue: BTreeSet<(Reverse<u32>, u32, u32)>,
    touched: Vec<u32>,
    track: bool,
    symbol_counts: BTreeMap<Symbol, u32>,
}

impl PairTable {
    /// `track` enables the frequency queue needed by [`Self::most_frequent`].
    pub(super) fn new(symbols: &[Symbol], track: bool) -> Self {
        let n = symbols.len();
        assert!(n > 0 && n < NIL as usize);
        let mut table = Self {
            sym: symbols.to_vec(),
            prev: (0..n).map(|i| if i == 0 { NIL } else { i as u32 - 1 }).collect(),
            next: (0..n).map(|i| if i + 1 == n { NIL } else { i as u32 + 1 }).collect(),
            alive: alloc::vec![true; n],
            len: n,
            ids: BTreeMap::new(),
            slots: Vec::new(),
            queue: BTreeSet::new(),
            touched: Vec::new(),
            track,
            symbol_counts: BTreeMap::new(),
        };
        for &s in symbols {
            *table.symbol_counts.entry(s).or_insert(0) += 1;
        }
        for i in 0..n.saturating_sub(1) {
            table.add_occ(i as u32);
        }
        table
    }

    pub(super) fn len(&self) -> usize {
        self.len
    }

    pub(super) fn is_constant(&self) -> bool {
        self.symbol_counts.len() <= 1
    }

    pub(super) fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.len);
        let mut i = 0u32; // position 0 is never removed
        while i != NIL {
            out.push(self.sym[i as usize]);
            i = self.next[i as usize];
        }
        out
    }

    pub(super) fn contains_pair(&self, pair: Pair) -> bool {
        self.ids.get(&pair).is_some_and(|&id| !self.slots[id as usize].occ.is_empty())
    }

    /// Most frequent pair by greedy non-overlapping count; ties go to the
    /// pair occurring leftmost.
    pub(super) fn most_frequent(&mut self) -> Option<Pair> {
        debug_assert!(self.track);
        for id in core::mem::take(&mut self.touched) {
            self.requeue(id);
        }
        self.queue.first().map(|&(_, _, id)| self.slots[id as usize].pair)
    }

    /// Replaces non-overlapping occurrences of `pair` left to right with
    /// `output`, which must not occur in the sequence. Returns the number of
    /// replacements.
    pub(super) fn substitute(&mut self, pair: Pair, output: Symbol) -> usize {
        let Some(&id) = self.ids.get(&pair) else { return 0 };
        let positions: Vec<u32> = self.slots[id as usize].occ.iter().copied().collect();
        let mut replaced = 0;
        for i in positions {
            let iu = i as usize;
            if !self.alive[iu] || self.sym[iu] != pair.0 {
                continue;
            }
            let j = self.next[iu];
            if j == NIL || self.sym[j as usize] != pair.1 {
                continue;
            }
            let l = self.prev[iu];
            let r = self.next[j as usize];
            if l != NIL {
                self.remove_occ(l);
            }
            self.remove_occ(i);
            if r != NIL {
                self.remove_occ(j);
            }
            self.sym[iu] = output;
            self.alive[j as usize] = false;
            self.next[iu] = r;
            if r != NIL {
                self.prev[r as usize] = i;
            }
            self.len -= 1;
            self.dec_symbol(pair.0);
            self.dec_symbol(pair.1);
            *self.symbol_counts.entry(output).or_insert(0) += 1;
            if l != NIL {
                self.add_occ(l);
            }
            if r != NIL {
                self.add_occ(i);
            }
            replaced += 1;
        }
        replaced
    }

    fn dec_symbol(&mut self, s: Symbol) {
        let c = self.symbol_counts.get_mut(&s).expect("symbol present");
        *c -= 1;
        if *c == 0 {
            self.symbol_counts.remove(&s);
        }
    }

    fn pair_at(&self, i: u32) -> Pair {
        let j = self.next[i as usize];
        (self.sym[i as usize], self.sym[j as usize])
    }

    fn add_occ(&mut self, i: u32) {
        let pair = self.pair_at(i);
        let id = match self.ids.get(&pair) {
            Some(&id) => id,
            None => {
                let id = self.slots.len() as u32;
                self.slots.push(Slot { pair, occ: BTreeSet::new(), queued: None, touched: false });
                self.ids.insert(pair, id);
                id
            }
        };
        self.slots[id as usize].occ.insert(i);
        self.touch(id);
    }

    fn remove_occ(&mut self, i: u32) {
        let pair = self.pair_at(i);
        let id = self.ids[&pair];
        let removed = self.slots[id as usize].occ.remove(&i);
        debug_assert!(removed);
        self.touch(id);
    }

    fn touch(&mut self, id: u32) {
        if !self.track {
            return;
        }
        let slot = &mut self.slots[id as usize];
        if !slot.touched {
            slot.touched = true;
            self.touched.push(id);
        }
    }

    fn greedy_count(&self, slot: &Slot) -> u32 {
        if slot.pair.0 != slot.pair.1 {
            return slot.occ.len() as u32;
        }
        let mut total = 0u32;
        let mut chain = 0u32;
        let mut last = NIL;
        for &i in &slot.occ {
            if last != NIL && self.next[last as usize] == i {
                chain += 1;
            } else {
                total += chain.div_ceil(2);
                chain = 1;
            }
            last = i;
        }
        total + chain.div_ceil(2)
    }

    fn requeue(&mut self, id: u32) {
        let slot = &self.slots[id as usize];
        let key = slot.occ.first().map(|&first| (Reverse(self.greedy_count(slot)), first));
        let slot = &mut self.slots[id as usize];
        slot.touched = false;
        if slot.queued == key {
            return;
        }
        if let Some((c, f)) = slot.queued.take() {
            self.queue.remove(&(c, f, id));
        }
        if let Some((c, f)) = key {
            self.queue.insert((c, f, id));
        }
        self.slots[id as usize].queued = key;
    }
}
