//! Coset tables: HLT-style Todd-Coxeter enumeration and tables read off
//! from homomorphisms onto finite groups.

use std::collections::HashMap;

use serde::Serialize;

use crate::perm::GroupElem;
use crate::words::{Presentation, Word};

use super::FpError;

const NONE: u32 = u32::MAX;

#[inline]
pub(crate) fn col(letter: i32) -> usize {
    if letter > 0 {
        2 * (letter as usize - 1)
    } else {
        2 * ((-letter) as usize - 1) + 1
    }
}

#[inline]
fn inv_col(c: usize) -> usize {
    c ^ 1
}

/// The right action of a group's generators on the cosets of a subgroup.
/// Cosets are numbered `0..n` with `0` the subgroup itself; column `2k`
/// holds generator `k`, column `2k+1` its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    n: usize,
    ngens: usize,
    table: Vec<u32>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    #[inline]
    pub fn get(&self, coset: usize, column: usize) -> usize {
        self.table[coset * 2 * self.ngens + column] as usize
    }

    /// Image of `coset` under a signed letter.
    #[inline]
    pub fn act(&self, coset: usize, letter: i32) -> usize {
        self.get(coset, col(letter))
    }

    pub fn act_word(&self, coset: usize, letters: &[i32]) -> usize {
        letters.iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// The action of generator `k` as a permutation list.
    pub fn generator_action(&self, k: usize) -> Vec<usize> {
        (0..self.n).map(|c| self.get(c, 2 * k)).collect()
    }

    /// Index-1 table for a presentation with `ngens` generators.
    pub fn trivial(ngens: usize) -> Self {
        CosetTable { n: 1, ngens, table: vec![0; 2 * ngens] }
    }

    /// Builds a table from generator permutations (0-based images), after
    /// checking they are permutations and renumbering in standard order.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self, FpError> {
        let ngens = perms.len();
        let n = perms.first().map_or(1, Vec::len);
        let mut table = vec![NONE; n * 2 * ngens];
        for (k, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(FpError::InvalidTable("permutations of different degrees".into()));
            }
            for (c, &d) in p.iter().enumerate() {
                if d >= n || table[d * 2 * ngens + 2 * k + 1] != NONE {
                    return Err(FpError::InvalidTable(format!("generator {k} is not a permutation")));
                }
                table[c * 2 * ngens + 2 * k] = d as u32;
                table[d * 2 * ngens + 2 * k + 1] = c as u32;
            }
        }
        let t = CosetTable { n, ngens, table };
        t.standardize()
    }

    /// Renumbers cosets in breadth-first order from coset 0, scanning
    /// columns left to right. Fails if the action is not transitive.
    pub fn standardize(&self) -> Result<Self, FpError> {
        let w = 2 * self.ngens;
        let mut order = vec![NONE; self.n];
        let mut seq = vec![0usize];
        order[0] = 0;
        let mut k = 0;
        while k < seq.len() {
            let c = seq[k];
            k += 1;
            for j in 0..w {
                let d = self.table[c * w + j];
                if d != NONE && order[d as usize] == NONE {
                    order[d as usize] = seq.len() as u32;
                    seq.push(d as usize);
                }
            }
        }
        if seq.len() != self.n {
            return Err(FpError::InvalidTable("action is not transitive".into()));
        }
        let mut table = vec![NONE; self.n * w];
        for (new, &old) in seq.iter().enumerate() {
            for j in 0..w {
                let d = self.table[old * w + j];
                table[new * w + j] = if d == NONE { NONE } else { order[d as usize] };
            }
        }
        Ok(CosetTable { n: self.n, ngens: self.ngens, table })
    }

    /// Checks completeness, that inverse columns invert, that every relator
    /// fixes every coset, and that every subgroup generator fixes coset 0.
    pub fn validate(&self, p: &Presentation, subgroup: &[Word]) -> Result<(), FpError> {
        if p.generators().len() != self.ngens {
            return Err(FpError::InvalidTable("generator count mismatch".into()));
        }
        let w = 2 * self.ngens;
        for c in 0..self.n {
            for j in 0..w {
                let d = self.table[c * w + j];
                if d == NONE || d as usize >= self.n {
                    return Err(FpError::InvalidTable(format!("undefined entry at coset {c}")));
                }
                if self.table[d as usize * w + inv_col(j)] as usize != c {
                    return Err(FpError::InvalidTable(format!("inverse mismatch at coset {c}")));
                }
            }
        }
        for (i, r) in p.relator_letters().iter().enumerate() {
            for c in 0..self.n {
                if self.act_word(c, r) != c {
                    return Err(FpError::InvalidTable(format!("relator {i} moves coset {c}")));
                }
            }
        }
        let alpha = p.alphabet();
        for s in subgroup {
            let l = s.to_letters(&alpha)?;
            if self.act_word(0, &l) != 0 {
                return Err(FpError::InvalidTable(format!("subgroup generator {s} moves coset 0")));
            }
        }
        Ok(())
    }

    /// JSON-friendly form: one 1-based image list per generator.
    pub fn export(&self, p: &Presentation) -> CosetTableExport {
        CosetTableExport {
            cosets: self.n,
            generators: p
                .generators()
                .iter()
                .enumerate()
                .map(|(k, g)| (g.clone(), self.generator_action(k).iter().map(|c| c + 1).collect()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CosetTableExport {
    pub cosets: usize,
    pub generators: Vec<(String, Vec<usize>)>,
}

struct Enumerator {
    w: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    limit: usize,
    hard_cap: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn new(ngens: usize, limit: usize) -> Self {
        let w = 2 * ngens;
        Enumerator {
            w,
            table: vec![NONE; w],
            parent: vec![0],
            live: 1,
            limit,
            hard_cap: limit.saturating_mul(16).max(1024),
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: u32, j: usize) -> u32 {
        self.table[c as usize * self.w + j]
    }

    #[inline]
    fn set(&mut self, c: u32, j: usize, d: u32) {
        self.table[c as usize * self.w + j] = d;
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, j: usize) -> Result<(), FpError> {
        let total = self.parent.len();
        if self.live >= self.limit || total >= self.hard_cap {
            return Err(FpError::LimitExceeded(self.limit));
        }
        let d = total as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.w));
        self.set(c, j, d);
        self.set(d, inv_col(j), c);
        self.live += 1;
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.queue.push(hi);
        self.live -= 1;
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for j in 0..self.w {
                let d = self.get(g, j);
                if d == NONE {
                    continue;
                }
                if self.get(d, inv_col(j)) == g {
                    self.set(d, inv_col(j), NONE);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mj = self.get(mu, j);
                if mj != NONE {
                    self.merge(nu, mj);
                } else {
                    let ni = self.get(nu, inv_col(j));
                    if ni != NONE {
                        self.merge(mu, ni);
                    } else {
                        self.set(mu, j, nu);
                        self.set(nu, inv_col(j), mu);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: u32, word: &[i32]) -> Result<(), FpError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut i = 0usize;
        let mut b = alpha;
        let mut j = word.len();
        loop {
            while i < j {
                let n = self.get(f, col(word[i]));
                if n == NONE {
                    break;
                }
                f = n;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let n = self.get(b, inv_col(col(word[j - 1])));
                if n == NONE {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                let c = col(word[i]);
                self.set(f, c, b);
                self.set(b, inv_col(c), f);
                return Ok(());
            }
            self.define(f, col(word[i]))?;
        }
    }

    fn finish(mut self, ngens: usize) -> Result<CosetTable, FpError> {
        let total = self.parent.len();
        let mut number = vec![NONE; total];
        let mut k = 0u32;
        for c in 0..total as u32 {
            if self.is_live(c) {
                number[c as usize] = k;
                k += 1;
            }
        }
        let n = k as usize;
        let mut table = vec![NONE; n * self.w];
        for c in 0..total as u32 {
            if !self.is_live(c) {
                continue;
            }
            for j in 0..self.w {
                let d = self.get(c, j);
                if d == NONE {
                    return Err(FpError::InvalidTable("enumeration left an undefined entry".into()));
                }
                let d = self.rep(d);
                table[number[c as usize] as usize * self.w + j] = number[d as usize];
            }
        }
        CosetTable { n, ngens, table }.standardize()
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the
/// group presented by `p`, with at most `limit` live cosets.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], limit: usize) -> Result<CosetTable, FpError> {
    let ngens = p.generators().len();
    let rels: Vec<Vec<i32>> = p.relator_letters().into_iter().filter(|r| !r.is_empty()).collect();
    let alpha = p.alphabet();
    let sub: Vec<Vec<i32>> = subgroup.iter().map(|w| w.to_letters(&alpha)).collect::<Result<_, _>>()?;
    let mut e = Enumerator::new(ngens, limit.max(1));
    for s in &sub {
        e.scan_and_fill(0, s)?;
    }
    let mut a = 0u32;
    while (a as usize) < e.parent.len() {
        if e.is_live(a) {
            for r in &rels {
                e.scan_and_fill(a, r)?;
                if !e.is_live(a) {
                    break;
                }
            }
            if e.is_live(a) {
                for j in 0..e.w {
                    if e.get(a, j) == NONE {
                        e.define(a, j)?;
                    }
                }
            }
        }
        a += 1;
    }
    let t = e.finish(ngens)?;
    t.validate(p, subgroup)?;
    Ok(t)
}

/// The coset table of the kernel of the homomorphism sending each
/// generator to `images[k]`: cosets are the elements of the image,
/// numbered in breadth-first order.
pub fn coset_table_from_hom<E: GroupElem>(p: &Presentation, images: &[E], identity: &E) -> Result<CosetTable, FpError> {
    let ngens = p.generators().len();
    if images.len() != ngens {
        return Err(FpError::InvalidTable("one image per generator required".into()));
    }
    let dict: HashMap<String, E> = p.generators().iter().cloned().zip(images.iter().cloned()).collect();
    for (i, r) in p.relators().iter().enumerate() {
        if r.eval(&dict, identity)? != *identity {
            return Err(FpError::RelatorViolation { index: i, relator: r.to_string() });
        }
    }
    let inverses: Vec<E> = images.iter().map(GroupElem::inv).collect();
    let w = 2 * ngens;
    let mut elems = vec![identity.clone()];
    let mut index: HashMap<E, u32> = HashMap::from([(identity.clone(), 0)]);
    let mut table: Vec<u32> = Vec::new();
    let mut k = 0;
    while k < elems.len() {
        for g in 0..ngens {
            for (j, img) in [(2 * g, &images[g]), (2 * g + 1, &inverses[g])] {
                let y = elems[k].op(img);
                let next = index.len() as u32;
                let id = *index.entry(y.clone()).or_insert_with(|| {
                    elems.push(y);
                    next
                });
                debug_assert_eq!(table.len(), k * w + j);
                table.push(id);
            }
        }
        k += 1;
    }
    Ok(CosetTable { n: elems.len(), ngens, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::words::parse_word;

    fn pres(g: &[&str], r: &[&str]) -> Presentation {
        Presentation::parse(g, r).unwrap()
    }

    #[test]
    fn cyclic_group() {
        let p = pres(&["a"], &["a^3"]);
        assert_eq!(todd_coxeter(&p, &[], 100).unwrap().len(), 3);
    }

    #[test]
    fn infinite_index_hits_limit() {
        let p = pres(&["a", "b"], &[]);
        let r = todd_coxeter(&p, &[parse_word("a").unwrap()], 10);
        assert_eq!(r, Err(FpError::LimitExceeded(10)));
    }

    #[test]
    fn small_groups() {
        // S3 = <a, b | a^2, b^3, (ab)^2>
        let s3 = pres(&["a", "b"], &["a^2", "b^3", "(a*b)^2"]);
        assert_eq!(todd_coxeter(&s3, &[], 1000).unwrap().len(), 6);
        assert_eq!(todd_coxeter(&s3, &[parse_word("a").unwrap()], 1000).unwrap().len(), 3);
        // A5 as the (2,3,5) triangle group
        let a5 = pres(&["a", "b"], &["a^2", "b^3", "(a*b)^5"]);
        assert_eq!(todd_coxeter(&a5, &[], 1000).unwrap().len(), 60);
        // quaternion group
        let q8 = pres(&["x", "y"], &["x^4", "x^2*y^-2", "y^-1*x*y*x"]);
        assert_eq!(todd_coxeter(&q8, &[], 1000).unwrap().len(), 8);
    }

    #[test]
    fn hom_table_matches_enumeration() {
        let s3 = pres(&["a", "b"], &["a^2", "b^3", "(a*b)^2"]);
        let a = Perm::parse_cycles(3, "(1 2)").unwrap();
        let b = Perm::parse_cycles(3, "(1 2 3)").unwrap();
        let t1 = coset_table_from_hom(&s3, &[a.clone(), b.clone()], &Perm::identity(3)).unwrap();
        assert_eq!(t1.len(), 6);
        t1.validate(&s3, &[]).unwrap();
        let t2 = todd_coxeter(&s3, &[], 100).unwrap();
        assert_eq!(t1, t2);
        let bad = coset_table_from_hom(&s3, &[b.clone(), a], &Perm::identity(3));
        assert!(matches!(bad, Err(FpError::RelatorViolation { index: 0, .. })));
        let triv = coset_table_from_hom(&s3, &[Perm::identity(3), Perm::identity(3)], &Perm::identity(3)).unwrap();
        assert_eq!(triv.len(), 1);
    }

    #[test]
    fn from_permutations_standardizes() {
        let t = CosetTable::from_permutations(&[vec![1, 2, 0]]).unwrap();
        assert_eq!(t.generator_action(0), vec![1, 2, 0]);
        let t = CosetTable::from_permutations(&[vec![2, 0, 1]]).unwrap();
        assert_eq!(t.generator_action(0), vec![1, 2, 0]);
        assert!(CosetTable::from_permutations(&[vec![0, 0, 1]]).is_err());
        assert!(CosetTable::from_permutations(&[vec![0, 2, 1]]).is_err());
    }
}
