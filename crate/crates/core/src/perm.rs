//! Permutations of `{0, .., n-1}` and the group-element trait shared by
//! matrices and permutations.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use thiserror::Error;

use crate::matgroup::{ProjMat, RingElem};

/// Minimal group structure on element values.
pub trait GroupElem: Clone + Eq + Hash {
    fn op(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;

    fn pow_with(&self, k: i64, identity: &Self) -> Self {
        let mut base = if k < 0 { self.inv() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = identity.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.op(&base);
            }
            base = base.op(&base);
            e >>= 1;
        }
        acc
    }
}

impl<R: RingElem> GroupElem for ProjMat<R> {
    fn op(&self, o: &Self) -> Self {
        self.mul_unchecked(o)
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("invalid cycle notation {0:?}")]
    Syntax(String),
    #[error("point {point} out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated in cycle notation")]
    Repeated(usize),
}

/// A permutation acting on the right: `p.apply(i)` is the image of `i`, and
/// `p.op(q)` applies `p` first, then `q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { img: (0..n as u32).collect() }
    }

    pub fn from_images(img: Vec<u32>) -> Option<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &x in &img {
            let x = x as usize;
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm { img })
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut img: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(PermError::OutOfRange { point: x + 1, degree: n });
                }
                if used[x] {
                    return Err(PermError::Repeated(x + 1));
                }
                used[x] = true;
                img[x] = c[(k + 1) % c.len()] as u32;
            }
        }
        Ok(Perm { img })
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)` or `()`.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self, PermError> {
        let err = || PermError::Syntax(s.to_string());
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        if rest.is_empty() || rest == "id" {
            return Ok(Perm::identity(n));
        }
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(err)?;
            let close = body.find(')').ok_or_else(err)?;
            let inner = &body[..close];
            let pts: Vec<usize> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            if pts.contains(&0) {
                return Err(err());
            }
            if !pts.is_empty() {
                cycles.push(pts.iter().map(|p| p - 1).collect());
            }
            rest = body[close + 1..].trim_start();
        }
        Perm::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Cycles (including fixed points), each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Sorted cycle lengths, longest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

impl GroupElem for Perm {
    fn op(&self, o: &Self) -> Self {
        Perm { img: self.img.iter().map(|&x| o.img[x as usize]).collect() }
    }

    fn inv(&self) -> Self {
        let mut img = vec![0u32; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            img[x as usize] = i as u32;
        }
        Perm { img }
    }
}

/// 1-based cycle notation, fixed points omitted; the identity prints as `()`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles() {
            if c.len() > 1 {
                any = true;
                let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
                write!(f, "({})", pts.join(" "))?;
            }
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `n:(cycles)`; mostly useful in tests.
impl FromStr for Perm {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, c) = s.split_once(':').ok_or_else(|| PermError::Syntax(s.to_string()))?;
        let n = n.trim().parse().map_err(|_| PermError::Syntax(s.to_string()))?;
        Perm::parse_cycles(n, c)
    }
}

/// Orbits of the group generated by `gens` on `{0, .., n-1}`, each sorted,
/// listed by least element.
pub fn orbits(n: usize, gens: &[&Perm]) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut orbit = vec![s];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for g in gens {
                for y in [g.apply(x), g.inv().apply(x)] {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        orbit.push(y);
                    }
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}
