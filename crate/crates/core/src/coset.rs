//! Todd–Coxeter coset enumeration (HLT strategy: relator scanning with
//! filling, coincidence handling via union-find with a merge queue).
//!
//! Enumeration is semi-decidable: a `Complete` outcome gives the exact
//! index of the subgroup, `Overflow` only means the coset budget was
//! exhausted and says nothing about finiteness.

use crate::presentation::Presentation;
use crate::word::Word;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

const UNDEF: u32 = u32::MAX;

#[inline]
fn col(gen: usize, sign: i8) -> usize {
    2 * gen + usize::from(sign < 0)
}

#[inline]
fn inv_col(c: usize) -> usize {
    c ^ 1
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| col(l.gen, l.sign)).collect()
}

/// A complete coset table: the action of each generator and inverse
/// generator on the cosets `0..live_count`. Coset 0 is the subgroup coset.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CosetTable {
    num_generators: usize,
    live_count: usize,
    /// Row-major, `live_count` rows by `2 * num_generators` columns.
    entries: Vec<u32>,
}

impl CosetTable {
    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn live_count(&self) -> usize {
        self.live_count
    }

    /// Image of `coset` under one letter.
    pub fn apply(&self, coset: usize, gen: usize, sign: i8) -> usize {
        self.entries[coset * 2 * self.num_generators + col(gen, sign)] as usize
    }

    /// Image of `coset` under a word.
    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        let mut c = coset;
        for l in w.letters() {
            c = self.apply(c, l.gen, l.sign);
        }
        c
    }

    /// On a regular table (trivial subgroup) this decides triviality of
    /// `w` in the group: `w = 1` iff it fixes the base coset.
    pub fn word_acts_trivially(&self, w: &Word) -> bool {
        self.trace(0, w) == 0
    }

    /// The permutation induced by `w` on the cosets.
    pub fn permutation(&self, w: &Word) -> Vec<usize> {
        (0..self.live_count).map(|c| self.trace(c, w)).collect()
    }

    /// Order of the permutation induced by `w` (lcm of cycle lengths).
    /// On a regular table this is the order of `w` in the group.
    pub fn element_order(&self, w: &Word) -> u64 {
        let perm = self.permutation(w);
        let mut seen = vec![false; perm.len()];
        let mut order: u64 = 1;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                c = perm[c];
                len += 1;
            }
            order = order.lcm(&len);
        }
        order
    }

    /// True when the word moves no coset at all.
    pub fn permutation_is_identity(&self, w: &Word) -> bool {
        (0..self.live_count).all(|c| self.trace(c, w) == c)
    }

    /// Validates the complete-table invariants: inverse-action
    /// consistency, relator closure from every coset, and subgroup
    /// generators fixing coset 0.
    pub fn validate(&self, p: &Presentation, subgroup: &[Word]) -> Result<(), String> {
        let n = self.live_count;
        for c in 0..n {
            for g in 0..self.num_generators {
                for sign in [1i8, -1] {
                    let d = self.apply(c, g, sign);
                    if d >= n {
                        return Err(format!("entry out of range at coset {c}"));
                    }
                    if self.apply(d, g, -sign) != c {
                        return Err(format!("inverse action inconsistent at coset {c}"));
                    }
                }
            }
            for (i, r) in p.relators().iter().enumerate() {
                if self.trace(c, r) != c {
                    return Err(format!("relator {i} does not close at coset {c}"));
                }
            }
        }
        for (i, w) in subgroup.iter().enumerate() {
            if self.trace(0, w) != 0 {
                return Err(format!("subgroup generator {i} does not fix coset 0"));
            }
        }
        Ok(())
    }

    /// Minimal-length coset representatives from a breadth-first scan of
    /// the table, columns in fixed order. `reps[0]` is the identity.
    pub fn transversal(&self) -> Vec<Word> {
        let n = self.live_count;
        let mut reps: Vec<Option<Word>> = vec![None; n];
        reps[0] = Some(Word::identity());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let rep = reps[c].clone().unwrap();
            for g in 0..self.num_generators {
                for sign in [1i8, -1] {
                    let d = self.apply(c, g, sign);
                    if reps[d].is_none() {
                        let letter = crate::word::Letter::new(g, sign);
                        reps[d] = Some(rep.multiply(&Word::from_letters([letter])));
                        queue.push_back(d);
                    }
                }
            }
        }
        reps.into_iter().map(|r| r.expect("table is transitive")).collect()
    }

    /// Builds a table directly from complete rows (used by the low-index
    /// search, whose tables are complete by construction).
    pub(crate) fn from_entries(num_generators: usize, live_count: usize, entries: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), live_count * 2 * num_generators);
        debug_assert!(entries.iter().all(|&e| (e as usize) < live_count));
        CosetTable { num_generators, live_count, entries }
    }
}

/// Result of an enumeration: either a complete table with the subgroup
/// index, or budget exhaustion.
#[derive(Clone, Debug)]
pub enum EnumerationOutcome {
    Complete { table: CosetTable, index: usize },
    Overflow { max_cosets: usize },
}

impl EnumerationOutcome {
    pub fn complete(self) -> Option<(CosetTable, usize)> {
        match self {
            EnumerationOutcome::Complete { table, index } => Some((table, index)),
            EnumerationOutcome::Overflow { .. } => None,
        }
    }
}

struct Enumerator {
    ncols: usize,
    max_cosets: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    merge_queue: std::collections::VecDeque<u32>,
}

impl Enumerator {
    fn new(num_generators: usize, max_cosets: usize) -> Self {
        let ncols = 2 * num_generators;
        Enumerator {
            ncols,
            max_cosets,
            table: vec![UNDEF; ncols],
            parent: vec![0],
            merge_queue: std::collections::VecDeque::new(),
        }
    }

    fn num_cosets(&self) -> usize {
        self.parent.len()
    }

    fn find(&mut self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            let p = self.parent[c as usize];
            self.parent[c as usize] = self.parent[p as usize];
            c = self.parent[c as usize];
        }
        c
    }

    fn is_live(&mut self, c: u32) -> bool {
        self.find(c) == c
    }

    fn get(&mut self, c: u32, col: usize) -> u32 {
        let v = self.table[c as usize * self.ncols + col];
        if v == UNDEF {
            UNDEF
        } else {
            let r = self.find(v);
            self.table[c as usize * self.ncols + col] = r;
            r
        }
    }

    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.ncols + col] = d;
        self.table[d as usize * self.ncols + inv_col(col)] = c;
    }

    /// Allocates a new coset as the image of `c` under `col`.
    /// Returns None when the budget is exhausted.
    fn define(&mut self, c: u32, col: usize) -> Option<u32> {
        if self.parent.len() >= self.max_cosets {
            return None;
        }
        let d = self.parent.len() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat(UNDEF).take(self.ncols));
        self.set(c, col, d);
        Some(d)
    }

    /// Merges the classes of `a` and `b`, keeping the lower-numbered
    /// representative, then replays the dead cosets' rows.
    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(dead) = self.merge_queue.pop_front() {
            for c in 0..self.ncols {
                let delta = self.table[dead as usize * self.ncols + c];
                if delta == UNDEF {
                    continue;
                }
                self.table[dead as usize * self.ncols + c] = UNDEF;
                // Remove the back-pointer into the dead row, then re-add
                // the edge between the live representatives.
                if self.table[delta as usize * self.ncols + inv_col(c)] == dead {
                    self.table[delta as usize * self.ncols + inv_col(c)] = UNDEF;
                }
                let mu = self.find(dead);
                let delta_live = self.find(delta);
                self.join(mu, c, delta_live);
            }
        }
    }

    /// Records the edge a·col = b, merging with any edges already present,
    /// and leaves both direction slots defined for the surviving
    /// representatives.
    fn join(&mut self, a: u32, col: usize, b: u32) {
        let fwd = self.get(a, col);
        if fwd != UNDEF {
            self.merge(fwd, b);
        }
        let fa = self.find(a);
        let fb = self.find(b);
        let back = self.get(fb, inv_col(col));
        if back != UNDEF {
            self.merge(back, fa);
        }
        let fa = self.find(fa);
        let fb = self.find(fb);
        self.table[fa as usize * self.ncols + col] = fb;
        self.table[fb as usize * self.ncols + inv_col(col)] = fa;
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (keep, dead) = if a < b { (a, b) } else { (b, a) };
        self.parent[dead as usize] = keep;
        self.merge_queue.push_back(dead);
    }

    /// Scans `word` from coset `start`, filling every gap by defining new
    /// cosets, so the scan always closes. Returns false on overflow.
    fn scan_and_fill(&mut self, start: u32, cols: &[usize]) -> bool {
        let a = self.find(start);
        if cols.is_empty() {
            return true;
        }
        loop {
            // Forward.
            let mut f = a;
            let mut fpos = 0;
            while fpos < cols.len() {
                let next = self.get(f, cols[fpos]);
                if next == UNDEF {
                    break;
                }
                f = next;
                fpos += 1;
            }
            if fpos == cols.len() {
                if f != a {
                    self.coincidence(f, a);
                }
                return true;
            }
            // Backward, never crossing the forward position.
            let mut b = a;
            let mut bpos = cols.len();
            while bpos - 1 > fpos {
                let prev = self.get(b, inv_col(cols[bpos - 1]));
                if prev == UNDEF {
                    break;
                }
                b = prev;
                bpos -= 1;
            }
            if bpos == fpos + 1 {
                // Single remaining gap. If the backward slot is already
                // defined the scans overlap and force a coincidence;
                // otherwise the deduction closes the scan.
                let existing = self.get(b, inv_col(cols[fpos]));
                if existing == UNDEF {
                    self.set(f, cols[fpos], b);
                } else if existing != f {
                    self.coincidence(existing, f);
                }
                return true;
            }
            // Gap of at least two: fill one entry and rescan.
            if self.define(f, cols[fpos]).is_none() {
                return false;
            }
        }
    }

    fn compact(&mut self, num_generators: usize) -> CosetTable {
        let total = self.num_cosets();
        let mut remap = vec![UNDEF; total];
        let mut live = 0u32;
        for c in 0..total as u32 {
            if self.find(c) == c {
                remap[c as usize] = live;
                live += 1;
            }
        }
        let ncols = self.ncols;
        let mut entries = Vec::with_capacity(live as usize * ncols);
        for c in 0..total as u32 {
            if self.find(c) != c {
                continue;
            }
            for col in 0..ncols {
                let v = self.get(c, col);
                debug_assert_ne!(v, UNDEF, "compacting an incomplete table");
                entries.push(remap[v as usize]);
            }
        }
        CosetTable { num_generators, live_count: live as usize, entries }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the
/// group presented by `p`. Deterministic: relators are scanned in
/// presentation order, cosets in numeric order, and coincidences keep the
/// lower-numbered coset; the returned table is compacted to contiguous
/// numbering.
///
/// Panics when `max_cosets` is zero.
pub fn coset_enumerate(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> EnumerationOutcome {
    assert!(max_cosets >= 1, "max_cosets must be positive");
    let ngens = p.generator_count();
    let relator_cols: Vec<Vec<usize>> = p.relators().iter().map(word_cols).collect();
    let mut e = Enumerator::new(ngens, max_cosets);

    for w in subgroup {
        if !e.scan_and_fill(0, &word_cols(w)) {
            return EnumerationOutcome::Overflow { max_cosets };
        }
    }

    let mut alpha: u32 = 0;
    while (alpha as usize) < e.num_cosets() {
        if !e.is_live(alpha) {
            alpha += 1;
            continue;
        }
        let mut died = false;
        for cols in &relator_cols {
            if !e.scan_and_fill(alpha, cols) {
                return EnumerationOutcome::Overflow { max_cosets };
            }
            if !e.is_live(alpha) {
                died = true;
                break;
            }
        }
        if !died {
            // Fill the row so generators absent from all relators still
            // get images and the enumeration makes progress.
            for c in 0..e.ncols {
                if e.get(alpha, c) == UNDEF && e.define(alpha, c).is_none() {
                    return EnumerationOutcome::Overflow { max_cosets };
                }
            }
        }
        alpha += 1;
    }

    let table = e.compact(ngens);
    let index = table.live_count();
    debug_assert!(table.validate(p, subgroup).is_ok());
    EnumerationOutcome::Complete { table, index }
}

/// Order of the group presented by `p`, when enumeration of the trivial
/// subgroup completes within the budget.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupOrder {
    Finite(u64),
    Overflow { max_cosets: usize },
}

pub fn group_order(p: &Presentation, max_cosets: usize) -> GroupOrder {
    match coset_enumerate(p, &[], max_cosets) {
        EnumerationOutcome::Complete { index, .. } => GroupOrder::Finite(index as u64),
        EnumerationOutcome::Overflow { max_cosets } => GroupOrder::Overflow { max_cosets },
    }
}

/// Regular (trivial-subgroup) table, when the enumeration completes.
pub fn regular_table(p: &Presentation, max_cosets: usize) -> Option<CosetTable> {
    coset_enumerate(p, &[], max_cosets).complete().map(|(t, _)| t)
}

/// Decides cyclicity of the finite group behind a complete regular table:
/// the group is cyclic iff some element (some coset's transversal
/// representative) has order equal to the group order.
pub fn is_cyclic(table: &CosetTable) -> bool {
    let n = table.live_count() as u64;
    table.transversal().iter().any(|w| table.element_order(w) == n)
}
