//! Small finite groups as Cayley tables, used as homomorphism targets.

use std::collections::HashMap;
use std::fmt;

use crate::matgroup::FiniteImage;
use crate::perm::{GroupElem, Perm};

use super::FpError;

/// A finite group given by its multiplication table. Element 0 is the
/// identity.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

/// Largest group for which a full Cayley table is built.
pub const CAYLEY_LIMIT: usize = 5000;

impl FiniteGroup {
    /// Closes `gens` under multiplication and tabulates the result.
    pub fn from_generators<E: GroupElem>(name: &str, identity: E, gens: &[E]) -> Result<Self, FpError> {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<E, usize> = HashMap::from([(identity, 0)]);
        let mut k = 0;
        while k < elems.len() {
            for g in gens {
                let y = elems[k].op(g);
                if !index.contains_key(&y) {
                    if elems.len() >= CAYLEY_LIMIT {
                        return Err(FpError::GuardExceeded(format!("group {name} larger than {CAYLEY_LIMIT}")));
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            k += 1;
        }
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[&elems[i].op(&elems[j])] as u32;
            }
        }
        let inv = (0..n).map(|i| index[&elems[i].inv()] as u32).collect();
        Ok(FiniteGroup { name: name.to_string(), order: n, mul, inv })
    }

    pub fn trivial() -> Self {
        FiniteGroup { name: "1".into(), order: 1, mul: vec![0], inv: vec![0] }
    }

    pub fn cyclic(n: usize) -> Self {
        let g = Perm::from_cycles(n, &[(0..n).collect()]).expect("valid cycle");
        Self::from_generators(&format!("C{n}"), Perm::identity(n), &[g]).expect("small")
    }

    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return FiniteGroup { name: format!("S{n}"), ..Self::trivial() };
        }
        let a = Perm::from_cycles(n, &[vec![0, 1]]).expect("valid");
        let b = Perm::from_cycles(n, &[(0..n).collect()]).expect("valid");
        Self::from_generators(&format!("S{n}"), Perm::identity(n), &[a, b]).expect("small symmetric group")
    }

    pub fn alternating(n: usize) -> Self {
        if n <= 2 {
            return FiniteGroup { name: format!("A{n}"), ..Self::trivial() };
        }
        let a = Perm::from_cycles(n, &[vec![0, 1, 2]]).expect("valid");
        let b = if n % 2 == 1 {
            Perm::from_cycles(n, &[(0..n).collect()])
        } else {
            Perm::from_cycles(n, &[(1..n).collect()])
        }
        .expect("valid");
        Self::from_generators(&format!("A{n}"), Perm::identity(n), &[a, b]).expect("small alternating group")
    }

    /// `PSL_2(F_p)` acting on the projective line `{0, .., p-1, oo}`.
    pub fn psl2_prime(p: usize) -> Self {
        let n = p + 1;
        let inf = p;
        let shift: Vec<u32> = (0..n).map(|x| if x == inf { inf as u32 } else { ((x + 1) % p) as u32 }).collect();
        let inv_of = |x: usize| (1..p).find(|y| x * y % p == 1).expect("field");
        let flip: Vec<u32> = (0..n)
            .map(|x| {
                if x == inf {
                    0
                } else if x == 0 {
                    inf as u32
                } else {
                    ((p - inv_of(x)) % p) as u32
                }
            })
            .collect();
        let gens = [Perm::from_images(shift).expect("perm"), Perm::from_images(flip).expect("perm")];
        Self::from_generators(&format!("PSL2({p})"), Perm::identity(n), &gens).expect("small")
    }

    pub fn from_image(name: &str, img: &FiniteImage) -> Result<Self, FpError> {
        let n = img.order();
        if n > CAYLEY_LIMIT {
            return Err(FpError::GuardExceeded(format!("group {name} larger than {CAYLEY_LIMIT}")));
        }
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = img.mul(i, j) as u32;
            }
        }
        let inv = (0..n)
            .map(|i| img.index_of(&img.elements()[i].inv()).expect("closed") as u32)
            .collect();
        Ok(FiniteGroup { name: name.to_string(), order: n, mul, inv })
    }

    /// Parses a panel descriptor: `S<n>`, `A<n>`, `C<n>`, `PSL2(<p>)`, `1`.
    pub fn from_descriptor(s: &str) -> Result<Self, FpError> {
        let t = s.trim();
        let bad = || FpError::BadDescriptor(s.to_string());
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        if t == "1" || t == "trivial" {
            return Ok(Self::trivial());
        }
        if let Some(p) = t.strip_prefix("PSL2(").and_then(|r| r.strip_suffix(')')) {
            let p = num(p)?;
            if p < 2 || !(2..p).all(|k| p % k != 0) || p > 31 {
                return Err(bad());
            }
            return Ok(Self::psl2_prime(p));
        }
        let (kind, n) = t.split_at(1);
        let n = num(n)?;
        if n > 6 {
            return Err(bad());
        }
        match kind {
            "S" => Ok(Self::symmetric(n)),
            "A" => Ok(Self::alternating(n)),
            "C" if n >= 1 => Ok(Self::cyclic(n)),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..self.order as u32).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// The default fingerprint panel: `S3, S4, S5, A5, PSL2(7)`.
pub fn default_panel() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::symmetric(3),
        FiniteGroup::symmetric(4),
        FiniteGroup::symmetric(5),
        FiniteGroup::alternating(5),
        FiniteGroup::psl2_prime(7),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(5).order(), 120);
        assert_eq!(FiniteGroup::alternating(4).order(), 12);
        assert_eq!(FiniteGroup::alternating(5).order(), 60);
        assert_eq!(FiniteGroup::psl2_prime(7).order(), 168);
        assert_eq!(FiniteGroup::psl2_prime(5).order(), 60);
        assert_eq!(FiniteGroup::cyclic(7).order(), 7);
        assert!(FiniteGroup::cyclic(7).is_abelian());
        assert!(!FiniteGroup::symmetric(3).is_abelian());
    }

    #[test]
    fn descriptors() {
        for (d, n) in [("S3", 6), ("S4", 24), ("A5", 60), ("PSL2(7)", 168), ("C4", 4), ("1", 1)] {
            let g = FiniteGroup::from_descriptor(d).unwrap();
            assert_eq!(g.order(), n, "{d}");
        }
        for d in ["Q8", "PSL2(8)", "S", "S9"] {
            assert!(FiniteGroup::from_descriptor(d).is_err(), "{d}");
        }
    }

    #[test]
    fn table_is_a_group() {
        let g = FiniteGroup::psl2_prime(7);
        for a in 0..g.order() as u32 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.mul(0, a), a);
        }
        for a in (0..168).step_by(7) {
            for b in (0..168).step_by(11) {
                for c in (0..168).step_by(13) {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }
}
