//! Homomorphism counts into small finite groups, and fingerprints built
//! from them.

use serde::Serialize;

use crate::par::{self, Jobs};
use crate::words::Presentation;

use super::abelian::{abelianization, AbelianInvariants};
use super::finite::FiniteGroup;
use super::FpError;

/// Search-node limit for [`hom_count`].
pub const DEFAULT_HOM_GUARD: u64 = 2_000_000_000;

struct Plan {
    /// generator order for the search
    order: Vec<usize>,
    /// relators to check once `order[..=depth]` is assigned
    checks: Vec<Vec<Vec<i32>>>,
    free_gens: usize,
}

fn plan(p: &Presentation) -> Plan {
    let ng = p.generators().len();
    let rels: Vec<Vec<i32>> = p.relator_letters().into_iter().filter(|r| !r.is_empty()).collect();
    let gens_of = |r: &Vec<i32>| {
        let mut g: Vec<usize> = r.iter().map(|l| l.unsigned_abs() as usize - 1).collect();
        g.sort_unstable();
        g.dedup();
        g
    };
    let rel_gens: Vec<Vec<usize>> = rels.iter().map(gens_of).collect();
    let used: Vec<bool> = (0..ng).map(|g| rel_gens.iter().any(|rg| rg.contains(&g))).collect();
    // greedy: next generator is the one completing the most relators, then
    // the one appearing in the most relators
    let mut assigned = vec![false; ng];
    let mut order = Vec::new();
    let total = used.iter().filter(|&&u| u).count();
    while order.len() < total {
        let best = (0..ng)
            .filter(|&g| used[g] && !assigned[g])
            .max_by_key(|&g| {
                let completes = rel_gens
                    .iter()
                    .filter(|rg| rg.contains(&g) && rg.iter().all(|&h| h == g || assigned[h]))
                    .count();
                let touches = rel_gens.iter().filter(|rg| rg.contains(&g)).count();
                (completes, touches, std::cmp::Reverse(g))
            })
            .expect("some generator left");
        assigned[best] = true;
        order.push(best);
    }
    let mut position = vec![usize::MAX; ng];
    for (i, &g) in order.iter().enumerate() {
        position[g] = i;
    }
    let mut checks = vec![Vec::new(); order.len()];
    for (r, rg) in rels.iter().zip(&rel_gens) {
        let depth = rg.iter().map(|&g| position[g]).max().expect("nonempty relator");
        checks[depth].push(r.clone());
    }
    Plan { order, checks, free_gens: ng - total }
}

struct Search<'a> {
    target: &'a FiniteGroup,
    plan: &'a Plan,
    images: Vec<u32>,
    nodes: u64,
    guard: u64,
}

impl Search<'_> {
    fn eval(&self, r: &[i32]) -> u32 {
        let g = self.target;
        let mut acc = 0u32;
        for &l in r {
            let x = self.images[l.unsigned_abs() as usize - 1];
            acc = g.mul(acc, if l > 0 { x } else { g.inv(x) });
        }
        acc
    }

    fn count(&mut self, depth: usize) -> Result<u64, FpError> {
        if depth == self.plan.order.len() {
            return Ok(1);
        }
        let gen = self.plan.order[depth];
        let mut total = 0u64;
        for x in 0..self.target.order() as u32 {
            self.nodes += 1;
            if self.nodes > self.guard {
                return Err(FpError::GuardExceeded(format!("hom search exceeded {} nodes", self.guard)));
            }
            self.images[gen] = x;
            if self.plan.checks[depth].iter().all(|r| self.eval(r) == 0) {
                total += self.count(depth + 1)?;
            }
        }
        Ok(total)
    }
}

/// Number of homomorphisms from the group presented by `p` to `target`,
/// found by backtracking over generator images with relators checked as
/// soon as all their generators are assigned.
pub fn hom_count(p: &Presentation, target: &FiniteGroup) -> Result<u64, FpError> {
    hom_count_with(p, target, Jobs::sequential(), DEFAULT_HOM_GUARD)
}

/// [`hom_count`] with the top level of the search split across workers.
pub fn hom_count_with(p: &Presentation, target: &FiniteGroup, jobs: Jobs, guard: u64) -> Result<u64, FpError> {
    let plan = plan(p);
    let n = target.order() as u64;
    let free = (0..plan.free_gens).try_fold(1u64, |acc, _| acc.checked_mul(n));
    let free = free.ok_or_else(|| FpError::GuardExceeded("hom count overflows u64".into()))?;
    if plan.order.is_empty() {
        return Ok(free);
    }
    let first = plan.order[0];
    let ng = p.generators().len();
    let branches: Vec<u32> = (0..target.order() as u32).collect();
    let results = par::map(jobs, branches, |x| {
        let mut s = Search { target, plan: &plan, images: vec![0; ng], nodes: 0, guard };
        s.images[first] = x;
        if plan.checks[0].iter().all(|r| s.eval(r) == 0) {
            s.count(1)
        } else {
            Ok(0)
        }
    });
    let mut total = 0u64;
    for r in results {
        total = total
            .checked_add(r?)
            .ok_or_else(|| FpError::GuardExceeded("hom count overflows u64".into()))?;
    }
    total
        .checked_mul(free)
        .ok_or_else(|| FpError::GuardExceeded("hom count overflows u64".into()))
}

/// Abelianization plus homomorphism counts into a panel of finite groups.
/// Equal fingerprints are necessary, not sufficient, for isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub abelian: AbelianInvariants,
    pub counts: Vec<(String, u64)>,
}

impl Fingerprint {
    /// True when every homomorphism count is 1, as for the trivial group.
    pub fn all_ones(&self) -> bool {
        self.counts.iter().all(|(_, c)| *c == 1)
    }
}

pub fn fingerprint(p: &Presentation, panel: &[FiniteGroup]) -> Result<Fingerprint, FpError> {
    fingerprint_with(p, panel, Jobs::sequential(), DEFAULT_HOM_GUARD)
}

pub fn fingerprint_with(p: &Presentation, panel: &[FiniteGroup], jobs: Jobs, guard: u64) -> Result<Fingerprint, FpError> {
    let counts = panel
        .iter()
        .map(|g| Ok((g.name().to_string(), hom_count_with(p, g, jobs, guard)?)))
        .collect::<Result<Vec<_>, FpError>>()?;
    Ok(Fingerprint { abelian: abelianization(p), counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(g: &[&str], r: &[&str]) -> Presentation {
        Presentation::parse(g, r).unwrap()
    }

    #[test]
    fn involutions_in_s3() {
        assert_eq!(hom_count(&pres(&["a"], &["a^2"]), &FiniteGroup::symmetric(3)).unwrap(), 4);
    }

    #[test]
    fn trivial_target() {
        let p = pres(&["a", "b"], &["a^5*b^-2"]);
        assert_eq!(hom_count(&p, &FiniteGroup::trivial()).unwrap(), 1);
    }

    #[test]
    fn free_generators() {
        let p = pres(&["a", "b"], &[]);
        assert_eq!(hom_count(&p, &FiniteGroup::symmetric(3)).unwrap(), 36);
        let p = pres(&["a", "b"], &["a^3"]);
        assert_eq!(hom_count(&p, &FiniteGroup::symmetric(3)).unwrap(), 3 * 6);
    }

    #[test]
    fn parallel_matches_sequential() {
        let p = pres(&["a", "b"], &["a^-1*b*a*b^-1*a*b*a^-1*b^-1*a*b^-1"]);
        let g = FiniteGroup::symmetric(5);
        let s = hom_count_with(&p, &g, Jobs(1), DEFAULT_HOM_GUARD).unwrap();
        let q = hom_count_with(&p, &g, Jobs(3), DEFAULT_HOM_GUARD).unwrap();
        assert_eq!(s, q);
    }

    #[test]
    fn guard_fires() {
        let p = pres(&["a", "b", "c"], &["a*b*c*a*b*c*a^-1*b^-1*c^-1"]);
        let r = hom_count_with(&p, &FiniteGroup::symmetric(5), Jobs(1), 1000);
        assert!(matches!(r, Err(FpError::GuardExceeded(_))));
    }
}
