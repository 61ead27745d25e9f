//! Abelianization via the Smith normal form of the exponent-sum matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::words::Presentation;

/// `Z^rank + Z/d1 + Z/d2 + ...` with `d1 | d2 | ...`, all `d > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub rank: usize,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// True for the infinite cyclic group.
    pub fn is_z(&self) -> bool {
        self.rank == 1 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".into() } else { format!("Z^{}", self.rank) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbelianInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbelianInvariants", 3)?;
        let tor: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        st.serialize_field("torsion", &tor)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

type SparseRow = BTreeMap<usize, BigInt>;

/// Invariant factors of an integer matrix given as sparse rows over
/// `ncols` columns: returns the nonzero diagonal entries of its Smith
/// normal form (absolute values, divisibility chain) and its rank.
pub fn smith_invariants(rows: Vec<SparseRow>, ncols: usize) -> Vec<BigInt> {
    let mut rows: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut diag = Vec::new();
    // column -> rows containing it
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            cols[c].push(i);
        }
    }
    let mut alive = vec![true; rows.len()];
    // unit pivots: eliminate the column from every other row, then drop
    // the pivot row and column
    loop {
        let mut best: Option<(usize, usize, usize)> = None; // (row len, row, col)
        for (i, r) in rows.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            if let Some((&c, _)) = r.iter().find(|(_, v)| v.abs().is_one()) {
                let key = (r.len(), i, c);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
                if r.len() <= 2 {
                    break;
                }
            }
        }
        let Some((_, pi, pc)) = best else { break };
        let pivot_row = rows[pi].clone();
        let pv = pivot_row[&pc].clone();
        let others: Vec<usize> = cols[pc].iter().copied().filter(|&i| i != pi && alive[i]).collect();
        for i in others {
            let Some(v) = rows[i].get(&pc).cloned() else { continue };
            // row_i -= (v / pv) * pivot_row, with pv = ±1
            let factor = &v * &pv;
            for (&c, x) in &pivot_row {
                let e = rows[i].entry(c).or_insert_with(BigInt::zero);
                *e -= &factor * x;
                if e.is_zero() {
                    rows[i].remove(&c);
                } else if !cols[c].contains(&i) {
                    cols[c].push(i);
                }
            }
        }
        alive[pi] = false;
        diag.push(BigInt::one());
    }
    // remaining entries: dense elimination with smallest-pivot selection
    let live_rows: Vec<&SparseRow> = rows.iter().zip(&alive).filter(|(r, &a)| a && !r.is_empty()).map(|(r, _)| r).collect();
    let mut used_cols: Vec<usize> = live_rows.iter().flat_map(|r| r.keys().copied()).collect();
    used_cols.sort_unstable();
    used_cols.dedup();
    let pos: BTreeMap<usize, usize> = used_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut m: Vec<Vec<BigInt>> = live_rows
        .iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); used_cols.len()];
            for (c, x) in r.iter() {
                v[pos[c]] = x.clone();
            }
            v
        })
        .collect();
    diag.extend(dense_smith(&mut m));
    let mut out: Vec<BigInt> = diag.into_iter().map(|d| d.abs()).filter(|d| !d.is_zero()).collect();
    normalize_chain(&mut out);
    out
}

#[allow(clippy::needless_range_loop)]
fn dense_smith(m: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(BigInt, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.as_ref().is_none_or(|b| x.abs() < b.0) {
                    best = Some((x.abs(), i, j));
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = m[t][t].clone();
            let mut done = true;
            for i in t + 1..nr {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&p);
                for j in t..nc {
                    let v = &q * &m[t][j];
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..nc {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&p);
                for row in m.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (m[t][t].abs(), t, t);
            for i in t + 1..nr {
                if !m[i][t].is_zero() && m[i][t].abs() < best.0 {
                    best = (m[i][t].abs(), i, t);
                }
            }
            for j in t + 1..nc {
                if !m[t][j].is_zero() && m[t][j].abs() < best.0 {
                    best = (m[t][j].abs(), t, j);
                }
            }
            m.swap(t, best.1);
            for row in m.iter_mut() {
                row.swap(t, best.2);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Turns any list of diagonal entries into the divisibility chain of the
/// same group.
fn normalize_chain(d: &mut [BigInt]) {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d.sort();
}

/// Exponent-sum matrix of a presentation as sparse rows.
pub fn exponent_sum_rows(p: &Presentation) -> Vec<SparseRow> {
    p.relator_letters()
        .into_iter()
        .map(|r| {
            let mut row = SparseRow::new();
            for l in r {
                let e = row.entry(l.unsigned_abs() as usize - 1).or_insert_with(BigInt::zero);
                *e += if l > 0 { 1 } else { -1 };
            }
            row.retain(|_, v| !v.is_zero());
            row
        })
        .collect()
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let ng = p.generators().len();
    let d = smith_invariants(exponent_sum_rows(p), ng);
    let rank = ng - d.len();
    AbelianInvariants { torsion: d.into_iter().filter(|x| !x.is_one()).collect(), rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(g: &[&str], r: &[&str]) -> AbelianInvariants {
        abelianization(&Presentation::parse(g, r).unwrap())
    }

    #[test]
    fn examples() {
        let f8 = ab(&["a", "b"], &["a^-1*b*a*b^-1*a*b*(b*a^-1*b*a)^-1"]);
        assert!(f8.is_z());
        let c3 = ab(&["a"], &["a^3"]);
        assert_eq!(c3, AbelianInvariants { torsion: vec![3.into()], rank: 0 });
        assert_eq!(ab(&["a", "b"], &[]).rank, 2);
        assert!(ab(&["a", "b"], &["a", "b"]).is_trivial());
    }

    #[test]
    fn divisibility_chain() {
        // Z/2 + Z/3 = Z/6; Z/4 + Z/6 = Z/2 + Z/12
        assert_eq!(ab(&["a", "b"], &["a^2", "b^3", "[a,b]"]).torsion, vec![BigInt::from(6)]);
        assert_eq!(ab(&["a", "b"], &["a^4", "b^6", "[a,b]"]).torsion, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(ab(&["a", "b"], &["a^4*b^6", "a^6*b^4"]).torsion, vec![BigInt::from(2), BigInt::from(10)]);
    }

    #[test]
    fn dense_path_matches_brute_force_determinant() {
        // det [[2, 3], [4, 5]] = -2 so the group is Z/2
        assert_eq!(ab(&["a", "b"], &["a^2*b^3", "a^4*b^5"]).torsion, vec![BigInt::from(2)]);
        assert_eq!(ab(&["a", "b", "c"], &["a^6*b^10*c^15"]).rank, 2);
    }

    #[test]
    fn display() {
        assert_eq!(ab(&["a", "b"], &["a^2"]).to_string(), "Z/2 + Z");
        assert_eq!(ab(&["a"], &["a"]).to_string(), "0");
    }
}
