//! Low-index subgroup search and Reidemeister–Schreier rewriting.
//!
//! Together these provide infiniteness certificates when abelianization
//! is blind: a finite-index subgroup whose own abelianization has free
//! rank ≥ 1 witnesses that the whole group is infinite.

use crate::coset::CosetTable;
use crate::presentation::Presentation;
use crate::word::{Letter, Word};
use std::collections::BTreeMap;

const UNDEF: u32 = u32::MAX;

#[inline]
fn col(gen: usize, sign: i8) -> usize {
    2 * gen + usize::from(sign < 0)
}

#[inline]
fn inv_col(c: usize) -> usize {
    c ^ 1
}

/// One conjugacy class of finite-index subgroups: the index, the coset
/// table of a class representative, and a presentation of the subgroup
/// obtained by Reidemeister–Schreier rewriting.
#[derive(Clone, Debug)]
pub struct SubgroupRecord {
    pub index: usize,
    pub table: CosetTable,
    pub presentation: Presentation,
}

struct Search<'a> {
    ncols: usize,
    max_index: usize,
    relator_cols: Vec<Vec<usize>>,
    table: Vec<u32>,
    n: usize,
    trail: Vec<usize>,
    found: &'a mut BTreeMap<(usize, Vec<u32>), Vec<u32>>,
}

impl<'a> Search<'a> {
    fn entry(&self, coset: usize, c: usize) -> u32 {
        self.table[coset * self.ncols + c]
    }

    fn assign(&mut self, coset: usize, c: usize, to: usize) {
        let pos = coset * self.ncols + c;
        debug_assert_eq!(self.table[pos], UNDEF);
        self.table[pos] = to as u32;
        self.trail.push(pos);
        let back = to * self.ncols + inv_col(c);
        if self.table[back] == UNDEF {
            self.table[back] = coset as u32;
            self.trail.push(back);
        }
    }

    fn undo_to(&mut self, mark: usize, n_mark: usize) {
        while self.trail.len() > mark {
            let pos = self.trail.pop().unwrap();
            self.table[pos] = UNDEF;
        }
        self.n = n_mark;
    }

    /// Scans every relator at every coset until no new deductions appear.
    /// Returns false on a contradiction.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for coset in 0..self.n {
                for r in 0..self.relator_cols.len() {
                    match self.scan(coset, r) {
                        ScanResult::Contradiction => return false,
                        ScanResult::Deduced => changed = true,
                        ScanResult::Quiet => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn scan(&mut self, start: usize, relator: usize) -> ScanResult {
        let cols = &self.relator_cols[relator];
        let mut f = start;
        let mut fpos = 0;
        while fpos < cols.len() {
            let next = self.entry(f, cols[fpos]);
            if next == UNDEF {
                break;
            }
            f = next as usize;
            fpos += 1;
        }
        if fpos == cols.len() {
            return if f == start { ScanResult::Quiet } else { ScanResult::Contradiction };
        }
        let mut b = start;
        let mut bpos = cols.len();
        while bpos - 1 > fpos {
            let prev = self.entry(b, inv_col(cols[bpos - 1]));
            if prev == UNDEF {
                break;
            }
            b = prev as usize;
            bpos -= 1;
        }
        if bpos == fpos + 1 {
            // Both slots of the deduced edge must be free or agree; the
            // forward slot is known free, check the backward one.
            let back = self.entry(b, inv_col(cols[fpos]));
            if back != UNDEF {
                return ScanResult::Contradiction;
            }
            self.assign(f, cols[fpos], b);
            ScanResult::Deduced
        } else {
            ScanResult::Quiet
        }
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        for coset in 0..self.n {
            for c in 0..self.ncols {
                if self.entry(coset, c) == UNDEF {
                    return Some((coset, c));
                }
            }
        }
        None
    }

    fn search(&mut self) {
        let Some((coset, c)) = self.first_undefined() else {
            self.record();
            return;
        };
        // Try existing cosets whose inverse slot is free, then one new
        // coset; each completed table is therefore reached exactly once.
        for to in 0..=self.n {
            let mark = self.trail.len();
            let n_mark = self.n;
            if to == self.n {
                if self.n == self.max_index {
                    break;
                }
                self.n += 1;
            } else if self.entry(to, inv_col(c)) != UNDEF {
                continue;
            }
            self.assign(coset, c, to);
            if self.propagate() {
                self.search();
            }
            self.undo_to(mark, n_mark);
        }
    }

    fn record(&mut self) {
        let n = self.n;
        let flat: Vec<u32> = self.table[..n * self.ncols].to_vec();
        let mut best: Option<Vec<u32>> = None;
        let mut best_base = 0;
        for base in 0..n {
            let key = relabel(&flat, n, self.ncols, base);
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
                best_base = base;
            }
        }
        let canonical = relabel(&flat, n, self.ncols, best_base);
        self.found.entry((n, canonical.clone())).or_insert(canonical);
    }
}

enum ScanResult {
    Quiet,
    Deduced,
    Contradiction,
}

/// Renumbers a complete transitive table by first appearance when scanned
/// from `base` (coset order, then column order). Conjugate subgroups give
/// the same multiset of relabellings, so the minimum over bases is a
/// canonical form of the conjugacy class.
fn relabel(flat: &[u32], n: usize, ncols: usize, base: usize) -> Vec<u32> {
    let mut map = vec![UNDEF; n];
    let mut order = Vec::with_capacity(n);
    map[base] = 0;
    order.push(base);
    let mut out = Vec::with_capacity(n * ncols);
    let mut next = 1u32;
    let mut i = 0;
    while i < order.len() {
        let old = order[i];
        for c in 0..ncols {
            let img = flat[old * ncols + c] as usize;
            if map[img] == UNDEF {
                map[img] = next;
                next += 1;
                order.push(img);
            }
            out.push(map[img]);
        }
        i += 1;
    }
    out
}

/// Finds one representative per conjugacy class of subgroups of index at
/// most `max_index`, each with a complete coset table (in canonical
/// labelling) and a rewritten presentation. Output is deterministic:
/// sorted by index, then lexicographically by table.
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Vec<SubgroupRecord> {
    assert!(max_index >= 1, "max_index must be positive");
    let ncols = 2 * p.generator_count();
    let relator_cols: Vec<Vec<usize>> =
        p.relators().iter().map(|r| r.letters().iter().map(|l| col(l.gen, l.sign)).collect()).collect();
    let mut found = BTreeMap::new();
    let mut s = Search {
        ncols,
        max_index,
        relator_cols,
        table: vec![UNDEF; max_index * ncols],
        n: 1,
        trail: Vec::new(),
        found: &mut found,
    };
    if s.propagate() {
        s.search();
    }
    found
        .into_iter()
        .map(|((n, _), flat)| {
            let table = CosetTable::from_entries(p.generator_count(), n, flat);
            debug_assert!(table.validate(p, &[]).is_ok());
            let presentation = rewrite_subgroup(p, &table);
            SubgroupRecord { index: n, table, presentation }
        })
        .collect()
}

/// All Reidemeister–Schreier rewritten relators, including those that
/// freely reduce to the empty word: one per (coset, relator) pair, so
/// exactly `index · |relators|` words. Also returns the Schreier
/// generator count after dropping the tree generators.
pub fn rewrite_subgroup_raw(p: &Presentation, table: &CosetTable) -> (usize, Vec<Word>) {
    let n = table.live_count();
    let ngens = p.generator_count();

    // Breadth-first Schreier transversal; tree edges give trivial
    // Schreier generators and are dropped.
    let reps = table.transversal();
    let mut schreier: Vec<Vec<Option<usize>>> = vec![vec![None; ngens]; n];
    let mut count = 0;
    for c in 0..n {
        for g in 0..ngens {
            let d = table.apply(c, g, 1);
            let letter = Word::generator(g);
            let u = reps[c].multiply(&letter).multiply(&reps[d].inverse());
            if !u.is_empty() {
                schreier[c][g] = Some(count);
                count += 1;
            }
        }
    }

    let mut rewritten = Vec::with_capacity(n * p.relator_count());
    for c in 0..n {
        for r in p.relators() {
            let mut letters = Vec::new();
            let mut at = c;
            for l in r.letters() {
                if l.sign > 0 {
                    if let Some(s) = schreier[at][l.gen] {
                        letters.push(Letter::positive(s));
                    }
                    at = table.apply(at, l.gen, 1);
                } else {
                    let from = table.apply(at, l.gen, -1);
                    if let Some(s) = schreier[from][l.gen] {
                        letters.push(Letter::negative(s));
                    }
                    at = from;
                }
            }
            debug_assert_eq!(at, c, "relator must close");
            rewritten.push(Word::from_letters(letters));
        }
    }
    (count, rewritten)
}

/// Presentation of the subgroup whose cosets `table` enumerates, on the
/// nontrivial Schreier generators (named s, s1, s2, …). Relators that
/// rewrite to the empty word are dropped; no other simplification is
/// performed, which keeps the rewriting auditable.
pub fn rewrite_subgroup(p: &Presentation, table: &CosetTable) -> Presentation {
    let (count, rewritten) = rewrite_subgroup_raw(p, table);
    let names: Vec<String> =
        (0..count).map(|i| if i == 0 { "s".to_string() } else { format!("s{i}") }).collect();
    let relators = rewritten.into_iter().filter(|w| !w.is_empty()).collect();
    Presentation::new(names, relators).expect("rewritten presentation is structurally valid")
}

/// First subgroup (in the deterministic search order) of index at most
/// `max_index` whose rewritten presentation has free abelian rank ≥ 1.
/// Such a subgroup certifies that the whole group is infinite.
pub fn find_infinite_abelianization_subgroup(
    p: &Presentation,
    max_index: usize,
) -> Option<SubgroupRecord> {
    low_index_subgroups(p, max_index)
        .into_iter()
        .find(|rec| crate::abelian::abelian_invariants(&rec.presentation).free_rank >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::abelian_invariants;
    use crate::coset::{group_order, GroupOrder};
    use crate::syntax::parse_presentation;

    #[test]
    fn cyclic_four_subgroup_lattice() {
        let p = parse_presentation("< x | x^4 >").unwrap();
        let recs = low_index_subgroups(&p, 4);
        let indices: Vec<usize> = recs.iter().map(|r| r.index).collect();
        assert_eq!(indices, vec![1, 2, 4]);
    }

    #[test]
    fn whole_group_record() {
        let p = parse_presentation("< s, t | s^4, t^2, t^-1*s*t = s^3 >").unwrap();
        let recs = low_index_subgroups(&p, 1);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].index, 1);
        // Index-1 rewriting preserves the abelian invariants.
        assert_eq!(abelian_invariants(&recs[0].presentation), abelian_invariants(&p));
    }

    #[test]
    fn infinite_dihedral_has_three_index_two_classes() {
        let p = parse_presentation("< s, t | t^2, t^-1*s*t*s >").unwrap();
        let recs = low_index_subgroups(&p, 2);
        let at_two: Vec<_> = recs.iter().filter(|r| r.index == 2).collect();
        assert_eq!(at_two.len(), 3);
        // Exactly one of them (the translation subgroup ⟨σ⟩ ≅ ℤ) has
        // infinite abelianization.
        let infinite: Vec<_> = at_two
            .iter()
            .filter(|r| abelian_invariants(&r.presentation).free_rank >= 1)
            .collect();
        assert_eq!(infinite.len(), 1);
    }

    #[test]
    fn rewrite_trivial_subgroup_of_z3() {
        let p = parse_presentation("< x | x^3 >").unwrap();
        let (table, index) = crate::coset::coset_enumerate(&p, &[], 100).complete().unwrap();
        assert_eq!(index, 3);
        let (count, raw) = rewrite_subgroup_raw(&p, &table);
        assert_eq!(raw.len(), 3);
        assert_eq!(count, 1);
        let sub = rewrite_subgroup(&p, &table);
        let inv = abelian_invariants(&sub);
        assert!(inv.torsion.is_empty());
        assert_eq!(inv.free_rank, 0);
        match group_order(&sub, 100) {
            GroupOrder::Finite(1) => {}
            other => panic!("expected trivial subgroup, got {other:?}"),
        }
    }

    #[test]
    fn raw_relator_count_is_index_times_relators() {
        let p = parse_presentation("< s, t | s^4, t^2, t^-1*s*t = s^3 >").unwrap();
        for rec in low_index_subgroups(&p, 8) {
            let (_, raw) = rewrite_subgroup_raw(&p, &rec.table);
            assert_eq!(raw.len(), rec.index * p.relator_count());
        }
    }

    #[test]
    fn subgroup_orders_satisfy_lagrange() {
        for text in ["< s, t | s^4, t^2, t^-1*s*t = s^3 >", "< x, y | x^-1*y*x = y^2, x^2 >"] {
            let p = parse_presentation(text).unwrap();
            let GroupOrder::Finite(order) = group_order(&p, 10_000) else {
                panic!("fixture must be finite")
            };
            for rec in low_index_subgroups(&p, 6) {
                let GroupOrder::Finite(sub_order) = group_order(&rec.presentation, 10_000) else {
                    panic!("subgroup of finite group must be finite")
                };
                assert_eq!(sub_order * rec.index as u64, order, "fixture {text}");
            }
        }
    }

    #[test]
    fn certificate_search_examples() {
        // Infinite dihedral: found at index 2.
        let p = parse_presentation("< s, t | t^2, t^-1*s*t*s >").unwrap();
        let rec = find_infinite_abelianization_subgroup(&p, 2).unwrap();
        assert_eq!(rec.index, 2);

        // ℤ₄ ∗ ℤ₂ (classical dihedral minus the third relator): found at
        // index ≤ 8.
        let p = parse_presentation("< s, t | s^4, t^2 >").unwrap();
        let rec = find_infinite_abelianization_subgroup(&p, 8).unwrap();
        assert!(rec.index <= 8);

        // A finite group has no such subgroup.
        let p = parse_presentation("< s, t | s^4, t^2, t^-1*s*t = s^3 >").unwrap();
        assert!(find_infinite_abelianization_subgroup(&p, 8).is_none());
    }

    #[test]
    fn search_is_deterministic() {
        let p = parse_presentation("< s, t | s^4, t^2 >").unwrap();
        let a = low_index_subgroups(&p, 5);
        let b = low_index_subgroups(&p, 5);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.index, y.index);
            assert_eq!(x.table, y.table);
        }
    }
}
