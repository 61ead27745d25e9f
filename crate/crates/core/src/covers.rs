//! Branched-cover monodromy of link groups and its trivial extension to a
//! larger link.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::perm::{orbits, GroupElem, Perm, PermError};
use crate::words::{Presentation, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("relator {index} ({relator}) maps to {image}, not the identity")]
    RelatorViolation { index: usize, relator: String, image: String },
    #[error("image acts with {orbits} orbits on {degree} points")]
    NotTransitive { orbits: usize, degree: usize },
    #[error("no image for generator {0}")]
    MissingImage(String),
    #[error("generator {0} is not in the presentation")]
    UnknownGenerator(String),
    #[error("image of {gen} has degree {found}, expected {expected}")]
    DegreeMismatch { gen: String, expected: usize, found: usize },
    #[error("line {line}: {msg}")]
    BadLine { line: usize, msg: String },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// One link component and the generators that are its meridians.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub meridians: Vec<String>,
}

/// A homomorphism from a link group to `S_n`, given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monodromy {
    presentation: Presentation,
    components: Vec<Component>,
    degree: usize,
    images: Vec<Perm>,
}

impl Monodromy {
    /// Builds a monodromy without validating relators; see
    /// [`check_monodromy`]. With no components given, each generator is its
    /// own component.
    pub fn new(presentation: Presentation, components: Vec<Component>, degree: usize, images: Vec<Perm>) -> Result<Self, CoverError> {
        let gens = presentation.generators();
        if images.len() != gens.len() {
            let missing = gens.get(images.len()).cloned().unwrap_or_default();
            return Err(CoverError::MissingImage(missing));
        }
        for (g, p) in gens.iter().zip(&images) {
            if p.degree() != degree {
                return Err(CoverError::DegreeMismatch { gen: g.clone(), expected: degree, found: p.degree() });
            }
        }
        let components = if components.is_empty() {
            gens.iter().map(|g| Component { meridians: vec![g.clone()] }).collect()
        } else {
            components
        };
        for c in &components {
            for m in &c.meridians {
                if !gens.contains(m) {
                    return Err(CoverError::UnknownGenerator(m.clone()));
                }
            }
        }
        Ok(Monodromy { presentation, components, degree, images })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn image(&self, gen: &str) -> Option<&Perm> {
        let i = self.presentation.generators().iter().position(|g| g == gen)?;
        Some(&self.images[i])
    }

    fn dictionary(&self) -> HashMap<String, Perm> {
        self.presentation.generators().iter().cloned().zip(self.images.iter().cloned()).collect()
    }

    pub fn eval(&self, w: &Word) -> Result<Perm, CoverError> {
        Ok(w.eval(&self.dictionary(), &Perm::identity(self.degree))?)
    }

    /// Parses the text format: `gens:` and `rel:` lines as for
    /// presentations, then `degree: n`, `component: x y ...` and
    /// `gen x -> (1 2)(3 4)` lines.
    pub fn from_text(text: &str) -> Result<Self, CoverError> {
        let mut pres = String::new();
        let mut degree = None;
        let mut components = Vec::new();
        let mut assigned: Vec<(usize, String, String)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let bad = |msg: &str| CoverError::BadLine { line: n + 1, msg: msg.to_string() };
            if line.is_empty() {
                continue;
            }
            if line.starts_with("gens:") || line.starts_with("rel:") {
                pres.push_str(line);
                pres.push('\n');
            } else if let Some(rest) = line.strip_prefix("degree:") {
                degree = Some(rest.trim().parse::<usize>().map_err(|_| bad("bad degree"))?);
            } else if let Some(rest) = line.strip_prefix("component:") {
                components.push(Component { meridians: rest.split_whitespace().map(str::to_string).collect() });
            } else if let Some(rest) = line.strip_prefix("gen ") {
                let (g, p) = rest.split_once("->").ok_or_else(|| bad("expected 'gen x -> cycles'"))?;
                assigned.push((n + 1, g.trim().to_string(), p.trim().to_string()));
            } else {
                return Err(bad("unrecognised line"));
            }
        }
        let presentation = Presentation::from_text(&pres)?;
        let degree = degree.ok_or(CoverError::BadLine { line: 0, msg: "missing degree line".into() })?;
        let mut images: Vec<Option<Perm>> = vec![None; presentation.generators().len()];
        for (line, g, p) in assigned {
            let i = presentation
                .generators()
                .iter()
                .position(|x| *x == g)
                .ok_or(CoverError::UnknownGenerator(g))?;
            if images[i].is_some() {
                return Err(CoverError::BadLine { line, msg: "generator assigned twice".into() });
            }
            images[i] = Some(Perm::parse_cycles(degree, &p)?);
        }
        let images = images
            .into_iter()
            .zip(presentation.generators())
            .map(|(p, g)| p.ok_or_else(|| CoverError::MissingImage(g.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Monodromy::new(presentation, components, degree, images)
    }

    pub fn to_text(&self) -> String {
        let mut s = self.presentation.to_text();
        let _ = writeln!(s, "degree: {}", self.degree);
        for c in &self.components {
            let _ = writeln!(s, "component: {}", c.meridians.join(" "));
        }
        for (g, p) in self.presentation.generators().iter().zip(&self.images) {
            let _ = writeln!(s, "gen {g} -> {p}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyCheck {
    pub valid: bool,
    pub transitive: bool,
    pub orbits: usize,
    /// First relator not sent to the identity.
    pub failing_relator: Option<String>,
    /// Components whose meridian images are not all conjugate.
    pub warnings: Vec<String>,
}

/// Checks that every relator maps to the identity and that the image is
/// transitive. Meridians of one component with images of different cycle
/// type only produce a warning.
pub fn check_monodromy(m: &Monodromy) -> MonodromyCheck {
    let failing_relator = relator_failure(m).map(|e| e.to_string());
    let refs: Vec<&Perm> = m.images.iter().collect();
    let orbit_count = orbits(m.degree, &refs).len();
    let mut warnings = Vec::new();
    for (i, c) in m.components.iter().enumerate() {
        let types: Vec<Vec<usize>> = c.meridians.iter().filter_map(|g| m.image(g)).map(Perm::cycle_type).collect();
        if types.windows(2).any(|w| w[0] != w[1]) {
            warnings.push(format!("component {}: meridian images are not conjugate", i + 1));
        }
    }
    let transitive = orbit_count <= 1;
    MonodromyCheck {
        valid: failing_relator.is_none() && transitive,
        transitive,
        orbits: orbit_count,
        failing_relator,
        warnings,
    }
}

fn relator_failure(m: &Monodromy) -> Option<CoverError> {
    let dict = m.dictionary();
    let id = Perm::identity(m.degree);
    for (i, r) in m.presentation.relators().iter().enumerate() {
        match r.eval(&dict, &id) {
            Ok(p) if p.is_identity() => {}
            Ok(p) => return Some(CoverError::RelatorViolation { index: i + 1, relator: r.to_string(), image: p.to_string() }),
            Err(e) => return Some(e.into()),
        }
    }
    None
}

/// Like [`check_monodromy`] but as a `Result`, failing on the first
/// broken relator or on intransitivity.
pub fn validate(m: &Monodromy) -> Result<(), CoverError> {
    if let Some(e) = relator_failure(m) {
        return Err(e);
    }
    let refs: Vec<&Perm> = m.images.iter().collect();
    let n = orbits(m.degree, &refs).len();
    if n > 1 {
        return Err(CoverError::NotTransitive { orbits: n, degree: m.degree });
    }
    Ok(())
}

/// Extends `m` to the group of a larger link presented by `full`: the
/// generators in `new_meridians` go to the identity, a generator listed in
/// `correspondence` goes to the image of its word, and any other
/// generator keeps the image of the same-named generator of `m`.
pub fn extend_trivially(
    m: &Monodromy,
    full: &Presentation,
    components: Vec<Component>,
    new_meridians: &[String],
    correspondence: &HashMap<String, Word>,
) -> Result<Monodromy, CoverError> {
    let id = Perm::identity(m.degree);
    let images = full
        .generators()
        .iter()
        .map(|g| {
            if new_meridians.contains(g) {
                Ok(id.clone())
            } else if let Some(w) = correspondence.get(g) {
                m.eval(w)
            } else {
                m.image(g).cloned().ok_or_else(|| CoverError::MissingImage(g.clone()))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    for g in new_meridians {
        if !full.generators().contains(g) {
            return Err(CoverError::UnknownGenerator(g.clone()));
        }
    }
    let out = Monodromy::new(full.clone(), components, m.degree, images)?;
    if let Some(e) = relator_failure(&out) {
        return Err(e);
    }
    Ok(out)
}

/// For each component, the number of cycles of its first meridian's
/// image: how many components of the cover lie over it.
pub fn branch_preimage_counts(m: &Monodromy) -> Vec<usize> {
    m.components
        .iter()
        .map(|c| c.meridians.first().and_then(|g| m.image(g)).map_or(m.degree, Perm::cycle_count))
        .collect()
}

impl Monodromy {
    /// Composes two generator images, for callers building words by hand.
    pub fn product(&self, a: &str, b: &str) -> Option<Perm> {
        Some(self.image(a)?.op(self.image(b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig8() -> Presentation {
        Presentation::parse(&["a", "b"], &["a^-1*b*a*b^-1*a*b*(b*a^-1*b*a)^-1"]).unwrap()
    }

    fn mono(p: Presentation, n: usize, imgs: &[&str]) -> Monodromy {
        let images = imgs.iter().map(|s| Perm::parse_cycles(n, s).unwrap()).collect();
        Monodromy::new(p, vec![], n, images).unwrap()
    }

    #[test]
    fn trivial_cover() {
        let m = mono(fig8(), 1, &["()", "()"]);
        assert!(check_monodromy(&m).valid);
    }

    #[test]
    fn cyclic_cover_of_fig8() {
        let m = mono(fig8(), 3, &["(1 2 3)", "(1 2 3)"]);
        let c = check_monodromy(&m);
        assert!(c.valid, "{c:?}");
        assert!(validate(&m).is_ok());
    }

    #[test]
    fn broken_relator_is_named() {
        let p = Presentation::parse(&["a", "b"], &["[a,b]"]).unwrap();
        let m = mono(p, 3, &["(1 2)", "(2 3)"]);
        let c = check_monodromy(&m);
        assert!(!c.valid);
        assert!(c.failing_relator.unwrap().contains("relator 1"));
        assert!(matches!(validate(&m), Err(CoverError::RelatorViolation { index: 1, .. })));
    }

    #[test]
    fn intransitive() {
        let p = Presentation::parse(&["a"], &[]).unwrap();
        let m = mono(p, 3, &["(1 2)"]);
        let c = check_monodromy(&m);
        assert!(!c.transitive && !c.valid);
        assert_eq!(c.orbits, 2);
    }

    #[test]
    fn conjugacy_warning() {
        let p = Presentation::parse(&["a", "b"], &[]).unwrap();
        let images = vec![Perm::parse_cycles(3, "(1 2 3)").unwrap(), Perm::parse_cycles(3, "(1 2)").unwrap()];
        let comp = vec![Component { meridians: vec!["a".into(), "b".into()] }];
        let m = Monodromy::new(p, comp, 3, images).unwrap();
        let c = check_monodromy(&m);
        assert!(c.valid);
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn extension() {
        let m = mono(fig8(), 3, &["(1 2 3)", "(1 2 3)"]);
        // a new meridian c commuting with a, threaded into the old relator
        let full = Presentation::parse(
            &["a", "b", "c"],
            &["a^-1*c*b*a*b^-1*a*b*(b*a^-1*b*a)^-1*c^-1", "[c,a]"],
        )
        .unwrap();
        let comps = vec![
            Component { meridians: vec!["a".into(), "b".into()] },
            Component { meridians: vec!["c".into()] },
        ];
        let e = extend_trivially(&m, &full, comps, &["c".into()], &HashMap::new()).unwrap();
        assert!(check_monodromy(&e).valid);
        assert_eq!(e.image("a"), m.image("a"));
        assert!(e.image("c").unwrap().is_identity());
        assert_eq!(branch_preimage_counts(&e), vec![1, 3]);
    }

    #[test]
    fn extension_with_wrong_correspondence_fails() {
        let m = mono(fig8(), 3, &["(1 2 3)", "(1 2 3)"]);
        let full = Presentation::parse(&["x", "c"], &["x*c*x^-1*c^-1", "x^2"]).unwrap();
        let corr = HashMap::from([("x".to_string(), Word::gen("a"))]);
        let r = extend_trivially(&m, &full, vec![], &["c".into()], &corr);
        assert!(matches!(r, Err(CoverError::RelatorViolation { index: 2, .. })));
    }

    #[test]
    fn preimage_counts() {
        let p = Presentation::parse(&["a", "b", "c"], &[]).unwrap();
        let m = mono(p, 3, &["()", "(1 2 3)", "(1 2)"]);
        assert_eq!(branch_preimage_counts(&m), vec![3, 1, 2]);
    }

    #[test]
    fn text_round_trip() {
        let text = "gens: a b\nrel: [a,b]\ndegree: 4\ncomponent: a\ncomponent: b\ngen a -> (1 2)(3 4)\ngen b -> (1 3)(2 4)\n";
        let m = Monodromy::from_text(text).unwrap();
        assert!(check_monodromy(&m).valid);
        assert_eq!(Monodromy::from_text(&m.to_text()).unwrap(), m);
        assert!(matches!(Monodromy::from_text("gens: a\ndegree: 2\n"), Err(CoverError::MissingImage(_))));
        assert!(matches!(Monodromy::from_text("gens: a\ndegree: 2\ngen z -> ()"), Err(CoverError::UnknownGenerator(_))));
    }
}
