//! Free-group words, finitely presented groups, the Swan presentation of
//! `PSL_2(Z[i])` with its matrix dictionary, and the meridian table of the
//! principal congruence link for `3+2i`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matgroup::GaussMat;
use crate::perm::GroupElem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("bad presentation line {line}: {msg}")]
    BadLine { line: usize, msg: String },
    #[error("meridian data: expected {expected} entries, found {found}")]
    CountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: String,
    pub exp: i64,
}

/// A freely reduced word, stored as syllables `g^k` with no two adjacent
/// syllables on the same generator and no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn gen(name: &str) -> Self {
        Word::from_syllables([(name.to_string(), 1)])
    }

    pub fn power(name: &str, exp: i64) -> Self {
        Word::from_syllables([(name.to_string(), exp)])
    }

    pub fn from_syllables<I, S>(it: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut w = Word::identity();
        for (g, e) in it {
            w.push(g.into(), e);
        }
        w
    }

    fn push(&mut self, gen: String, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable { gen, exp });
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Length as a sequence of letters `g^{±1}`.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut w = self.clone();
        for s in &o.syllables {
            w.push(s.gen.clone(), s.exp);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word::from_syllables(self.syllables.iter().rev().map(|s| (s.gen.clone(), -s.exp)))
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    /// Generators appearing in the word.
    pub fn generators(&self) -> BTreeSet<&str> {
        self.syllables.iter().map(|s| s.gen.as_str()).collect()
    }

    /// Replaces every occurrence of generator `name` by `body`.
    pub fn substitute(&self, name: &str, body: &Word) -> Word {
        let mut w = Word::identity();
        for s in &self.syllables {
            if s.gen == name {
                w = w.concat(&body.pow(s.exp));
            } else {
                w.push(s.gen.clone(), s.exp);
            }
        }
        w
    }

    /// Letters as signed 1-based indices into `alphabet`.
    pub fn to_letters(&self, alphabet: &HashMap<&str, usize>) -> Result<Vec<i32>, WordError> {
        let mut out = Vec::with_capacity(self.len());
        for s in &self.syllables {
            let k = *alphabet.get(s.gen.as_str()).ok_or_else(|| WordError::UnknownGenerator(s.gen.clone()))?;
            let letter = if s.exp > 0 { k as i32 + 1 } else { -(k as i32 + 1) };
            out.extend(std::iter::repeat_n(letter, s.exp.unsigned_abs() as usize));
        }
        Ok(out)
    }

    pub fn from_letters(letters: &[i32], names: &[String]) -> Word {
        Word::from_syllables(letters.iter().map(|&l| (names[l.unsigned_abs() as usize - 1].clone(), l.signum() as i64)))
    }

    /// Evaluates the word under a dictionary of group elements.
    pub fn eval<E: GroupElem>(&self, dict: &HashMap<String, E>, identity: &E) -> Result<E, WordError> {
        let mut acc = identity.clone();
        for s in &self.syllables {
            let g = dict.get(&s.gen).ok_or_else(|| WordError::UnknownGenerator(s.gen.clone()))?;
            acc = acc.op(&g.pow_with(s.exp, identity));
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (k, s) in self.syllables.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if s.exp == 1 {
                write!(f, "{}", s.gen)?;
            } else {
                write!(f, "{}^{}", s.gen, s.exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> WordError {
        WordError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn word(&mut self) -> Result<Word, WordError> {
        let mut w = Word::identity();
        let mut first = true;
        loop {
            match self.peek() {
                None | Some(')') | Some(',') | Some(']') => {
                    if first {
                        return Err(self.err("expected a factor"));
                    }
                    return Ok(w);
                }
                Some('*') if !first => {
                    self.bump();
                    w = w.concat(&self.factor()?);
                }
                _ => {
                    w = w.concat(&self.factor()?);
                }
            }
            first = false;
        }
    }

    fn factor(&mut self) -> Result<Word, WordError> {
        let base = match self.peek() {
            Some('(') => {
                self.bump();
                let w = self.word()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                w
            }
            Some('[') => {
                self.bump();
                let x = self.word()?;
                if self.peek() != Some(',') {
                    return Err(self.err("expected ','"));
                }
                self.bump();
                let y = self.word()?;
                if self.peek() != Some(']') {
                    return Err(self.err("expected ']'"));
                }
                self.bump();
                Word::commutator(&x, &y)
            }
            Some('1') => {
                self.bump();
                Word::identity()
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(c) = self.src[self.pos..].chars().next() {
                    if c.is_alphanumeric() || c == '_' {
                        self.pos += c.len_utf8();
                    } else {
                        break;
                    }
                }
                Word::gen(&self.src[start..self.pos])
            }
            Some(_) => return Err(self.err("unexpected character")),
            None => return Err(self.err("unexpected end of input")),
        };
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            if matches!(self.src[self.pos..].chars().next(), Some('-') | Some('+')) {
                self.pos += 1;
            }
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let k: i64 = self.src[start..self.pos].parse().map_err(|_| self.err("expected integer exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }
}

/// Parses the word grammar: identifiers, `^` with integer exponents,
/// optional `*`, parentheses with outer exponents, `[x,y]` commutators and
/// `1` for the identity.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let mut p = Parser { src: text, pos: 0 };
    let w = p.word()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(w)
}

/// Parses a word and checks every generator against `gens`.
pub fn parse_word_in(text: &str, gens: &[String]) -> Result<Word, WordError> {
    let w = parse_word(text)?;
    for g in w.generators() {
        if !gens.iter().any(|x| x == g) {
            return Err(WordError::UnknownGenerator(g.to_string()));
        }
    }
    Ok(w)
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Presentation {
    gens: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(gens: Vec<String>, relators: Vec<Word>) -> Result<Self, WordError> {
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.as_str()) {
                return Err(WordError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relators {
            for g in r.generators() {
                if !seen.contains(g) {
                    return Err(WordError::UnknownGenerator(g.to_string()));
                }
            }
        }
        Ok(Presentation { gens, relators })
    }

    /// Builds a presentation from generator names and relator strings.
    pub fn parse(gens: &[&str], relators: &[&str]) -> Result<Self, WordError> {
        let gens: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let rels = relators.iter().map(|r| parse_word_in(r, &gens)).collect::<Result<Vec<_>, _>>()?;
        Presentation::new(gens, rels)
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn alphabet(&self) -> HashMap<&str, usize> {
        self.gens.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect()
    }

    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self, WordError> {
        let mut rels = self.relators.clone();
        rels.extend(extra);
        Presentation::new(self.gens.clone(), rels)
    }

    /// Relators as signed letter sequences (see [`Word::to_letters`]).
    pub fn relator_letters(&self) -> Vec<Vec<i32>> {
        let alpha = self.alphabet();
        self.relators.iter().map(|r| r.to_letters(&alpha).expect("validated on construction")).collect()
    }

    /// Parses the text format: a `gens:` line followed by `rel:` lines.
    /// Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self, WordError> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| WordError::BadLine { line: n + 1, msg: msg.to_string() };
            if let Some(rest) = line.strip_prefix("gens:") {
                if gens.is_some() {
                    return Err(bad("duplicate gens line"));
                }
                gens = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let g = gens.as_ref().ok_or_else(|| bad("rel before gens"))?;
                rels.push(parse_word_in(rest, g)?);
            } else {
                return Err(bad("expected 'gens:' or 'rel:'"));
            }
        }
        let gens = gens.ok_or(WordError::BadLine { line: 0, msg: "missing gens line".into() })?;
        Presentation::new(gens, rels)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gens: {}\n", self.gens.join(" "));
        for r in &self.relators {
            s.push_str(&format!("rel: {r}\n"));
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "< {} | {} >", self.gens.join(", "), rels.join(", "))
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Swan's presentation of `PSL_2(Z[i])` on `a, l, t, u`.
pub fn swan_presentation() -> Presentation {
    Presentation::parse(
        &["a", "l", "t", "u"],
        &["l^2", "(t*l)^2", "(u*l)^2", "(a*l)^2", "a^2", "(t*a)^3", "(u*a*l)^3", "t*u*t^-1*u^-1"],
    )
    .expect("static presentation")
}

/// The matrices of `a, l, t, u` in `PSL_2(Z[i])`.
pub fn swan_dictionary() -> HashMap<String, GaussMat> {
    let m = |a, b, c, d| GaussMat::gaussian(a, b, c, d).expect("determinant one");
    HashMap::from([
        ("a".to_string(), m((0, 0), (-1, 0), (1, 0), (0, 0))),
        ("l".to_string(), m((0, -1), (0, 0), (0, 0), (0, 1))),
        ("t".to_string(), m((1, 0), (1, 0), (0, 0), (1, 0))),
        ("u".to_string(), m((1, 0), (0, 1), (0, 0), (1, 0))),
    ])
}

/// Evaluates a word in `a, l, t, u` to its matrix.
pub fn eval_swan(w: &Word) -> Result<GaussMat, WordError> {
    let dict = swan_dictionary();
    let id = dict["t"].identity();
    w.eval(&dict, &id)
}

pub const MERIDIAN_COUNT: usize = 42;

const MERIDIAN_DATA: &str = include_str!("../data/meridians.txt");

/// The 42 meridians of the congruence link for `3+2i`, with the `h` macro
/// expanded, indexed 1..=42 in row-major order of the source table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeridianTable {
    words: Vec<Word>,
}

impl MeridianTable {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// 1-based access.
    pub fn get(&self, index: usize) -> Option<&Word> {
        index.checked_sub(1).and_then(|i| self.words.get(i))
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }
}

/// Parses meridian data: a `# name = word` header defining macros, then one
/// word per line.
pub fn parse_meridians(text: &str) -> Result<MeridianTable, WordError> {
    let swan = swan_presentation();
    let base: Vec<String> = swan.generators().to_vec();
    let mut macros: Vec<(String, Word)> = Vec::new();
    let mut words = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some((name, body)) = c.split_once('=') {
                let name = name.trim().to_string();
                let mut w = parse_word_in(body, &base)?;
                for (m, mb) in &macros {
                    w = w.substitute(m, mb);
                }
                macros.push((name, w));
            }
            continue;
        }
        let mut allowed = base.clone();
        allowed.extend(macros.iter().map(|(m, _)| m.clone()));
        let mut w = parse_word_in(line, &allowed).map_err(|e| match e {
            WordError::Syntax { pos, msg } => WordError::BadLine { line: n + 1, msg: format!("{msg} at {pos}") },
            other => other,
        })?;
        for (m, mb) in &macros {
            w = w.substitute(m, mb);
        }
        words.push(w);
    }
    if words.len() != MERIDIAN_COUNT {
        return Err(WordError::CountMismatch { expected: MERIDIAN_COUNT, found: words.len() });
    }
    Ok(MeridianTable { words })
}

/// Loads the bundled meridian table, or `meridians.txt` from `data_dir`
/// when given.
pub fn load_meridians_from(data_dir: Option<&std::path::Path>) -> Result<MeridianTable, WordError> {
    match data_dir {
        Some(dir) => {
            let path = dir.join("meridians.txt");
            let text = std::fs::read_to_string(&path)
                .map_err(|e| WordError::BadLine { line: 0, msg: format!("{}: {e}", path.display()) })?;
            parse_meridians(&text)
        }
        None => parse_meridians(MERIDIAN_DATA),
    }
}

pub fn load_meridians() -> MeridianTable {
    parse_meridians(MERIDIAN_DATA).expect("bundled meridian data is well-formed")
}
