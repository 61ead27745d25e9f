//! Reidemeister-Schreier presentations of finite-index subgroups.

use crate::words::{Presentation, Word};

use super::coset::CosetTable;
use super::FpError;

/// Rewrites words of the parent group that lie in the subgroup into words
/// in the Schreier generators.
#[derive(Debug, Clone)]
pub struct SchreierRewriter {
    table: CosetTable,
    parent_alphabet: Vec<String>,
    /// Schreier generator (0-based) for the edge `c --k--> c.k`, indexed by
    /// `c * ngens + k`; `None` on spanning-tree edges.
    edge_gen: Vec<Option<u32>>,
    names: Vec<String>,
}

impl SchreierRewriter {
    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    /// Rewrites a signed-letter word starting at `coset`, returning the
    /// Schreier letters and the final coset.
    pub fn trace_letters(&self, coset: usize, letters: &[i32]) -> (Vec<i32>, usize) {
        let ng = self.table.ngens();
        let mut c = coset;
        let mut out = Vec::new();
        for &l in letters {
            let k = l.unsigned_abs() as usize - 1;
            if l > 0 {
                if let Some(s) = self.edge_gen[c * ng + k] {
                    out.push(s as i32 + 1);
                }
                c = self.table.act(c, l);
            } else {
                let d = self.table.act(c, l);
                if let Some(s) = self.edge_gen[d * ng + k] {
                    out.push(-(s as i32 + 1));
                }
                c = d;
            }
        }
        (out, c)
    }

    /// Rewrites letters of a subgroup element given in the parent's
    /// alphabet.
    pub fn rewrite_letters(&self, letters: &[i32]) -> Result<Vec<i32>, FpError> {
        let (out, end) = self.trace_letters(0, letters);
        if end != 0 {
            return Err(FpError::NotInSubgroup(Word::from_letters(letters, &self.parent_alphabet).to_string()));
        }
        Ok(out)
    }

    pub fn rewrite(&self, w: &Word) -> Result<Word, FpError> {
        let alpha = self.parent_alphabet.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        let letters = w.to_letters(&alpha)?;
        let out = self.rewrite_letters(&letters)?;
        Ok(Word::from_letters(&out, &self.names))
    }
}

/// Presents the subgroup whose coset table is `t`, on Schreier generators
/// `s<c>_<g>` (coset `c` 1-based), one per non-tree edge of the
/// breadth-first spanning tree, with one relator per coset and relator of
/// `p` (trivial ones included).
pub fn reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Result<(Presentation, SchreierRewriter), FpError> {
    let ng = p.generators().len();
    if t.ngens() != ng {
        return Err(FpError::InvalidTable("generator count mismatch".into()));
    }
    let n = t.len();
    // breadth-first spanning tree; tree[c * ng + k] marks the edge c --k-->
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut tree = vec![false; n * ng];
    let mut queue = vec![0usize];
    let mut qi = 0;
    while qi < queue.len() {
        let c = queue[qi];
        qi += 1;
        for k in 0..ng {
            let fwd = t.get(c, 2 * k);
            if !seen[fwd] {
                seen[fwd] = true;
                tree[c * ng + k] = true;
                queue.push(fwd);
            }
            let back = t.get(c, 2 * k + 1);
            if !seen[back] {
                seen[back] = true;
                tree[back * ng + k] = true;
                queue.push(back);
            }
        }
    }
    if queue.len() != n {
        return Err(FpError::InvalidTable("coset table is not transitive".into()));
    }
    let mut edge_gen = vec![None; n * ng];
    let mut names = Vec::new();
    for c in 0..n {
        for k in 0..ng {
            if !tree[c * ng + k] {
                edge_gen[c * ng + k] = Some(names.len() as u32);
                names.push(format!("s{}_{}", c + 1, p.generators()[k]));
            }
        }
    }
    let rw = SchreierRewriter {
        table: t.clone(),
        parent_alphabet: p.generators().to_vec(),
        edge_gen,
        names: names.clone(),
    };
    let rels = p.relator_letters();
    let mut relators = Vec::with_capacity(n * rels.len());
    for c in 0..n {
        for r in &rels {
            let (out, end) = rw.trace_letters(c, r);
            if end != c {
                return Err(FpError::InvalidTable(format!("relator moves coset {}", c + 1)));
            }
            relators.push(Word::from_letters(&out, &names));
        }
    }
    let sub = Presentation::new(names, relators)?;
    Ok((sub, rw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::todd_coxeter;
    use crate::words::parse_word;

    #[test]
    fn index_two_in_z() {
        let p = Presentation::parse(&["a"], &[]).unwrap();
        let t = CosetTable::from_permutations(&[vec![1, 0]]).unwrap();
        let (sub, rw) = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(sub.generators().len(), 1);
        assert!(sub.relators().is_empty());
        let x = rw.rewrite(&parse_word("a^2").unwrap()).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(rw.rewrite(&parse_word("a^-4").unwrap()).unwrap(), x.pow(-2));
        assert!(matches!(rw.rewrite(&parse_word("a").unwrap()), Err(FpError::NotInSubgroup(_))));
    }

    #[test]
    fn index_one_keeps_presentation() {
        let p = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a*b)^2"]).unwrap();
        let t = CosetTable::trivial(2);
        let (sub, _) = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(sub.generators(), &["s1_a".to_string(), "s1_b".to_string()]);
        assert_eq!(sub.relators(), &[parse_word("s1_a^2").unwrap(), parse_word("s1_b^3").unwrap(), parse_word("(s1_a*s1_b)^2").unwrap()]);
    }

    #[test]
    fn schreier_counts() {
        // kernel of S3 -> C2 is C3
        let p = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a*b)^2"]).unwrap();
        let t = todd_coxeter(&p, &[parse_word("b").unwrap()], 100).unwrap();
        assert_eq!(t.len(), 2);
        let (sub, _) = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(sub.generators().len(), 2 * 2 - 1);
        assert_eq!(sub.relators().len(), 2 * 3);
    }
}
