//! Deliberately naive implementations of the compression measures.
//!
//! Nothing here is meant to be fast. Each function follows the textbook
//! definition as literally as possible so it can serve as an oracle for the
//! optimized code in `ccm-causal-core`.

/// LZ76 phrase count by direct substring search.
///
/// A phrase starting at `w` grows to `w..w+m` for the largest `m` such that
/// `s[w..w+m]` occurs somewhere inside `s[..w+m-1]`. The phrase then absorbs
/// one more (novel) symbol, unless the sequence already ended.
pub fn lz76(s: &[u32]) -> usize {
    assert!(!s.is_empty());
    let n = s.len();
    let mut w = 0;
    let mut phrases = 0;
    while w < n {
        let mut m = 0;
        while w + m < n && occurs_in(&s[w..w + m + 1], &s[..w + m]) {
            m += 1;
        }
        phrases += 1;
        w += m + 1;
    }
    phrases
}

fn occurs_in(needle: &[u32], hay: &[u32]) -> bool {
    if needle.len() > hay.len() {
        return false;
    }
    (0..=hay.len() - needle.len()).any(|i| &hay[i..i + needle.len()] == needle)
}

/// Kaspar & Schuster's LZ76 counter, written out in its classic index form.
pub fn lz76_kaspar_schuster(s: &[u32]) -> usize {
    let n = s.len();
    assert!(n > 0);
    if n == 1 {
        return 1;
    }
    let (mut i, mut k, mut l, mut k_max) = (0usize, 1usize, 1usize, 1usize);
    let mut c = 1;
    loop {
        if s[i + k - 1] == s[l + k - 1] {
            k += 1;
            if l + k > n {
                c += 1;
                break;
            }
        } else {
            k_max = k_max.max(k);
            i += 1;
            if i == l {
                c += 1;
                l += k_max;
                if l + 1 > n {
                    break;
                }
                i = 0;
                k = 1;
                k_max = 1;
            } else {
                k = 1;
            }
        }
    }
    c
}

/// One substitution rule: `(left, right) -> output`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NaiveRule {
    pub left: u32,
    pub right: u32,
    pub output: u32,
}

/// Outcome of a naive NSRPS run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveEtc {
    pub steps: usize,
    pub rules: Vec<NaiveRule>,
    pub final_sequence: Vec<u32>,
}

/// Greedy left-to-right non-overlapping pair counts, in order of first
/// appearance: `(pair, count, first_position)`.
pub fn pair_counts(s: &[u32]) -> Vec<((u32, u32), usize, usize)> {
    let mut out: Vec<((u32, u32), usize, usize, usize)> = Vec::new();
    for i in 0..s.len().saturating_sub(1) {
        let p = (s[i], s[i + 1]);
        match out.iter_mut().find(|e| e.0 == p) {
            Some(e) => {
                // the last counted occurrence ends at i: overlapping, skip
                if e.3 + 1 == i {
                    continue;
                }
                e.1 += 1;
                e.3 = i;
            }
            None => out.push((p, 1, i, i)),
        }
    }
    out.into_iter().map(|(p, c, f, _)| (p, c, f)).collect()
}

/// Replace non-overlapping occurrences of `pair`, scanning left to right.
pub fn substitute(s: &[u32], pair: (u32, u32), output: u32) -> (Vec<u32>, usize) {
    let mut out = Vec::with_capacity(s.len());
    let mut i = 0;
    let mut replaced = 0;
    while i < s.len() {
        if i + 1 < s.len() && (s[i], s[i + 1]) == pair {
            out.push(output);
            replaced += 1;
            i += 2;
        } else {
            out.push(s[i]);
            i += 1;
        }
    }
    (out, replaced)
}

fn is_constant(s: &[u32]) -> bool {
    s.iter().all(|&v| v == s[0])
}

/// Non-sequential recursive pair substitution, recomputed from scratch at
/// every step. Ties between equally frequent pairs go to the pair whose
/// first occurrence is leftmost.
pub fn nsrps(s: &[u32], first_fresh: u32) -> NaiveEtc {
    assert!(!s.is_empty());
    let mut cur = s.to_vec();
    let mut fresh = first_fresh;
    let mut rules = Vec::new();
    while cur.len() > 1 && !is_constant(&cur) {
        let counts = pair_counts(&cur);
        let best =
            counts.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2))).expect("non-constant sequence has a pair");
        let (next, _) = substitute(&cur, best.0, fresh);
        rules.push(NaiveRule { left: best.0 .0, right: best.0 .1, output: fresh });
        fresh += 1;
        cur = next;
    }
    NaiveEtc { steps: rules.len(), rules, final_sequence: cur }
}

/// Replays `rules` on `target` in order; returns (rules that fired, residual).
pub fn conditional(target: &[u32], rules: &[NaiveRule]) -> (usize, Vec<u32>) {
    let mut cur = target.to_vec();
    let mut fired = 0;
    for r in rules {
        let (next, n) = substitute(&cur, (r.left, r.right), r.output);
        if n > 0 {
            fired += 1;
            cur = next;
        }
    }
    (fired, cur)
}
