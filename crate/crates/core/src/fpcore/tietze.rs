//! Tietze simplification of presentations.
//!
//! Two kinds of moves are applied until a fixpoint or the step budget is
//! reached:
//!
//! 1. generator elimination: a generator occurring exactly once in some
//!    relator is solved for and substituted everywhere, shortest relator
//!    first;
//! 2. substring substitution: when more than half of a cyclic conjugate of
//!    relator `r` (or its inverse) occurs in a longer relator `s`, that
//!    piece of `s` is replaced by the shorter remainder of `r`.
//!
//! Relators are kept freely and cyclically reduced, and duplicates (up to
//! cyclic permutation and inversion) are dropped.

use std::collections::{BTreeSet, HashSet};

use crate::words::{Presentation, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TietzeOptions {
    /// Maximum number of moves.
    pub budget: usize,
    /// Substitutions may not create relators longer than `growth` times
    /// the longest relator at the start of simplification.
    pub growth: usize,
    /// Substring search only runs with at most this many relators.
    pub search_limit: usize,
}

impl Default for TietzeOptions {
    fn default() -> Self {
        TietzeOptions { budget: 200_000, growth: 4, search_limit: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplified {
    pub presentation: Presentation,
    /// True when the budget ran out before a fixpoint.
    pub exhausted: bool,
    pub moves: usize,
}

pub(crate) fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

pub(crate) fn cyclic_reduce(w: &mut Vec<i32>) {
    free_reduce(w);
    let mut i = 0;
    let mut j = w.len();
    while j >= i + 2 && w[i] == -w[j - 1] {
        i += 1;
        j -= 1;
    }
    if i > 0 {
        *w = w[i..j].to_vec();
    }
}

fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

/// Least rotation of `w` or of its inverse; equal for relators that define
/// the same normal closure by cyclic permutation and inversion.
pub(crate) fn canonical(w: &[i32]) -> Vec<i32> {
    let n = w.len();
    let mut best: Option<Vec<i32>> = None;
    for v in [w.to_vec(), inverse(w)] {
        for k in 0..n {
            let rot: Vec<i32> = v[k..].iter().chain(&v[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

struct Tz {
    names: Vec<String>,
    gen_alive: Vec<bool>,
    rels: Vec<Option<Vec<i32>>>,
    occ: Vec<BTreeSet<usize>>,
    by_len: BTreeSet<(usize, usize)>,
    stuck: HashSet<usize>,
    seen: HashSet<Vec<i32>>,
    cap: usize,
    moves: usize,
    budget: usize,
}

impl Tz {
    fn new(p: &Presentation, opts: &TietzeOptions) -> Self {
        let ng = p.generators().len();
        let mut tz = Tz {
            names: p.generators().to_vec(),
            gen_alive: vec![true; ng],
            rels: Vec::new(),
            occ: vec![BTreeSet::new(); ng],
            by_len: BTreeSet::new(),
            stuck: HashSet::new(),
            seen: HashSet::new(),
            cap: 0,
            moves: 0,
            budget: opts.budget,
        };
        let mut max_len = 0;
        for mut r in p.relator_letters() {
            cyclic_reduce(&mut r);
            max_len = max_len.max(r.len());
            tz.insert(r);
        }
        tz.cap = (opts.growth.max(1) * max_len).max(8);
        tz
    }

    fn insert(&mut self, r: Vec<i32>) {
        if r.is_empty() {
            return;
        }
        let key = canonical(&r);
        if !self.seen.insert(key) {
            return;
        }
        let id = self.rels.len();
        for &l in &r {
            self.occ[l.unsigned_abs() as usize - 1].insert(id);
        }
        self.by_len.insert((r.len(), id));
        self.rels.push(Some(r));
    }

    fn remove(&mut self, id: usize) -> Vec<i32> {
        let r = self.rels[id].take().expect("live relator");
        for &l in &r {
            self.occ[l.unsigned_abs() as usize - 1].remove(&id);
        }
        self.by_len.remove(&(r.len(), id));
        self.stuck.remove(&id);
        self.seen.remove(&canonical(&r));
        r
    }

    fn out_of_budget(&self) -> bool {
        self.moves >= self.budget
    }

    /// Generators occurring exactly once in `r`, cheapest first.
    fn single_occurrences(&self, r: &[i32]) -> Vec<usize> {
        let mut count = std::collections::BTreeMap::<usize, usize>::new();
        for &l in r {
            *count.entry(l.unsigned_abs() as usize - 1).or_default() += 1;
        }
        let mut gens: Vec<usize> = count.into_iter().filter(|&(_, c)| c == 1).map(|(g, _)| g).collect();
        gens.sort_by_key(|&g| (self.occ[g].len(), std::cmp::Reverse(g)));
        gens
    }

    /// Tries to eliminate a generator using relator `id`.
    fn try_eliminate(&mut self, id: usize) -> bool {
        let r = self.rels[id].clone().expect("live relator");
        'gens: for g in self.single_occurrences(&r) {
            let pos = r.iter().position(|l| l.unsigned_abs() as usize - 1 == g).expect("present");
            let rot: Vec<i32> = r[pos..].iter().chain(&r[..pos]).copied().collect();
            let rest = &rot[1..];
            // g^e * rest = 1
            let value = if rot[0] > 0 { inverse(rest) } else { rest.to_vec() };
            let value_inv = inverse(&value);
            let targets: Vec<usize> = self.occ[g].iter().copied().filter(|&s| s != id).collect();
            let mut replaced = Vec::with_capacity(targets.len());
            for &s in &targets {
                let old = self.rels[s].as_ref().expect("live");
                let mut new = Vec::with_capacity(old.len() + value.len());
                for &l in old {
                    if l.unsigned_abs() as usize - 1 == g {
                        new.extend_from_slice(if l > 0 { &value } else { &value_inv });
                    } else {
                        new.push(l);
                    }
                }
                cyclic_reduce(&mut new);
                if new.len() > self.cap {
                    continue 'gens;
                }
                replaced.push((s, new));
            }
            self.remove(id);
            for (s, new) in replaced {
                self.remove(s);
                self.insert(new);
            }
            self.gen_alive[g] = false;
            self.moves += 1;
            return true;
        }
        false
    }

    fn eliminate_all(&mut self) -> bool {
        let mut changed = false;
        loop {
            if self.out_of_budget() {
                return changed;
            }
            let candidate = self.by_len.iter().map(|&(_, id)| id).find(|id| !self.stuck.contains(id));
            let Some(id) = candidate else { return changed };
            if self.try_eliminate(id) {
                changed = true;
            } else {
                self.stuck.insert(id);
            }
        }
    }

    /// One round of substring substitutions; returns whether anything
    /// changed.
    fn substring_pass(&mut self) -> bool {
        let mut changed = false;
        let ids: Vec<usize> = self.by_len.iter().map(|&(_, id)| id).collect();
        for &rid in &ids {
            let Some(r) = self.rels[rid].clone() else { continue };
            let n = r.len();
            let mut conj = Vec::with_capacity(2 * n);
            for v in [r.clone(), inverse(&r)] {
                for k in 0..n {
                    conj.push(v[k..].iter().chain(&v[..k]).copied().collect::<Vec<i32>>());
                }
            }
            let targets: Vec<usize> = self.by_len.iter().map(|&(_, id)| id).filter(|&s| s != rid).collect();
            for sid in targets {
                if self.out_of_budget() {
                    return changed;
                }
                let Some(s) = self.rels[sid].as_ref() else { continue };
                let m = s.len();
                if m < n {
                    continue;
                }
                let mut hit: Option<(usize, usize, usize)> = None; // (len, start, conj)
                for start in 0..m {
                    for (ci, c) in conj.iter().enumerate() {
                        let mut k = 0;
                        while k < n && k < m && s[(start + k) % m] == c[k] {
                            k += 1;
                        }
                        if 2 * k > n && hit.is_none_or(|h| k > h.0) {
                            hit = Some((k, start, ci));
                        }
                    }
                }
                if let Some((k, start, ci)) = hit {
                    let c = &conj[ci];
                    let mut new = inverse(&c[k..]);
                    new.extend((k..m).map(|i| s[(start + i) % m]));
                    cyclic_reduce(&mut new);
                    self.remove(sid);
                    self.insert(new);
                    self.moves += 1;
                    changed = true;
                }
            }
        }
        changed
    }

    fn live_relator_count(&self) -> usize {
        self.by_len.len()
    }

    fn into_presentation(self) -> Presentation {
        let mut newidx = vec![0usize; self.names.len()];
        let mut names = Vec::new();
        for (g, n) in self.names.iter().enumerate() {
            if self.gen_alive[g] {
                newidx[g] = names.len();
                names.push(n.clone());
            }
        }
        let rels: Vec<Word> = self
            .rels
            .iter()
            .flatten()
            .map(|r| {
                let l: Vec<i32> = r
                    .iter()
                    .map(|&x| {
                        let k = newidx[x.unsigned_abs() as usize - 1] as i32 + 1;
                        if x > 0 {
                            k
                        } else {
                            -k
                        }
                    })
                    .collect();
                Word::from_letters(&l, &names)
            })
            .collect();
        Presentation::new(names, rels).expect("alphabet preserved")
    }
}

/// Simplifies `p` by Tietze moves; the result presents an isomorphic
/// group.
pub fn tietze_simplify(p: &Presentation, opts: &TietzeOptions) -> Simplified {
    let mut tz = Tz::new(p, opts);
    loop {
        tz.eliminate_all();
        if tz.out_of_budget() {
            break;
        }
        if tz.live_relator_count() > opts.search_limit || !tz.substring_pass() {
            break;
        }
        tz.stuck.clear();
    }
    let exhausted = tz.out_of_budget();
    let moves = tz.moves;
    Simplified { presentation: tz.into_presentation(), exhausted, moves }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simp(g: &[&str], r: &[&str]) -> Presentation {
        tietze_simplify(&Presentation::parse(g, r).unwrap(), &TietzeOptions::default()).presentation
    }

    #[test]
    fn reductions() {
        let mut w = vec![1, 2, -2, -1, 3, 1, -3];
        cyclic_reduce(&mut w);
        assert_eq!(w, vec![1]);
        let mut w = vec![-1, 2, 1];
        cyclic_reduce(&mut w);
        assert_eq!(w, vec![2]);
        assert_eq!(canonical(&[2, 1]), vec![-2, -1]);
        assert_eq!(canonical(&[1, 2]), canonical(&[2, 1]));
    }

    #[test]
    fn eliminates_defined_generator() {
        let p = simp(&["a", "b", "c"], &["c*b^-1*a^-1"]);
        assert_eq!(p.generators(), &["a".to_string(), "b".to_string()]);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn keeps_one_relator_groups() {
        let src = Presentation::parse(&["a", "b"], &["a^-1*b*a*b^-1*a*b*a^-1*b^-1*a*b^-1"]).unwrap();
        let out = tietze_simplify(&src, &TietzeOptions::default());
        assert_eq!(out.presentation, src);
        assert!(!out.exhausted);
        let again = tietze_simplify(&out.presentation, &TietzeOptions::default());
        assert_eq!(again.presentation, out.presentation);
    }

    #[test]
    fn kills_trivial_group() {
        let p = simp(&["a", "b"], &["a*b", "a*b^2"]);
        assert!(p.generators().is_empty());
        assert!(p.relators().is_empty());
    }

    #[test]
    fn substring_move_shortens() {
        // the second relator contains more than half of the first
        let p = simp(&["a", "b"], &["a^3*b^2", "a^2*b^2*a^2*b^-1", "a^5"]);
        let total: usize = p.relators().iter().map(Word::len).sum();
        assert!(total < 5 + 9 + 5);
    }

    #[test]
    fn budget_flag() {
        let src = Presentation::parse(&["a", "b", "c", "d"], &["a*b", "b*c", "c*d"]).unwrap();
        let out = tietze_simplify(&src, &TietzeOptions { budget: 1, ..Default::default() });
        assert!(out.exhausted);
        assert_eq!(out.presentation.generators().len(), 3);
    }
}
