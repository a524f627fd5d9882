//! Free-group words and finite presentations.
//!
//! A letter is a signed generator index: `k > 0` is the `k`-th generator and
//! `-k` its inverse. In the ASCII syntax a lowercase letter is a generator and
//! the corresponding uppercase letter its inverse, so `abAB` is the commutator
//! of the first two generators.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// A signed generator index. Never zero.
pub type Letter = i32;

/// Position of a letter in the total order `a < A < b < B < ...` used for
/// shortlex comparisons and deterministic iteration.
pub fn letter_rank(x: Letter) -> usize {
    debug_assert!(x != 0);
    2 * (x.unsigned_abs() as usize - 1) + usize::from(x < 0)
}

/// Inverse of [`letter_rank`].
pub fn letter_from_rank(rank: usize) -> Letter {
    let g = (rank / 2 + 1) as Letter;
    if rank.is_multiple_of(2) {
        g
    } else {
        -g
    }
}

/// All `2n` letters over `n` generators, in rank order.
pub fn alphabet(generator_count: usize) -> Vec<Letter> {
    (0..2 * generator_count).map(letter_from_rank).collect()
}

/// A word in the free group, stored as a plain letter sequence. Nothing is
/// reduced implicitly.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<Letter>>) -> Self {
        Word(letters.into())
    }

    /// Parses the default ASCII alphabet: `a` is generator 1, `b` is 2, and so
    /// on; uppercase letters are inverses. `1` or `ε` alone denote the empty word.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let t = text.trim();
        if t.is_empty() || t == "1" || t == "ε" {
            return Ok(Word::empty());
        }
        t.chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok((c as u8 - b'a' + 1) as Letter)
                } else if c.is_ascii_uppercase() {
                    Ok(-((c as u8 - b'A' + 1) as Letter))
                } else {
                    Err(ParseError::UnknownGenerator(c))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&x| -x).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.free_reduce();
        for &x in &other.0 {
            if out.0.last() == Some(&-x) {
                out.0.pop();
            } else {
                out.0.push(x);
            }
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) if self.len() > 1 => f != -l,
                _ => true,
            }
    }

    /// The unique reduced word representing the same element of the free group.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &x in &self.0 {
            if stack.last() == Some(&-x) {
                stack.pop();
            } else {
                stack.push(x);
            }
        }
        Word(stack)
    }

    /// Returns `(core, conjugator)` with `core` cyclically reduced and
    /// `self = conjugator * core * conjugator^-1` in the free group.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let r = self.free_reduce();
        let v = &r.0;
        let mut i = 0;
        let mut j = v.len();
        while j >= i + 2 && v[i] == -v[j - 1] {
            i += 1;
            j -= 1;
        }
        (Word(v[i..j].to_vec()), Word(v[..i].to_vec()))
    }

    /// The cyclic permutation starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Smallest `p` dividing the length with `self = s^(len/p)` for the prefix
    /// `s` of length `p`. Returns `(root, exponent)`.
    pub fn root(&self) -> (Word, usize) {
        let n = self.len();
        for p in 1..=n {
            if n.is_multiple_of(p) && (p..n).all(|i| self.0[i] == self.0[i - p]) {
                return (Word(self.0[..p].to_vec()), n / p);
            }
        }
        (self.clone(), 1)
    }

    /// Shortlex comparison under the letter order `a < A < b < B < ...`.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let a = self.0.iter().map(|&x| letter_rank(x));
            let b = other.0.iter().map(|&x| letter_rank(x));
            a.cmp(b)
        })
    }

    /// Largest generator index used, or 0.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

/// `free_reduce(t * w * t^-1)`.
pub fn conjugate(w: &Word, t: &Word) -> Word {
    t.mul(w).mul(&t.inverse())
}

/// Renders a letter with the default ASCII alphabet.
pub fn letter_char(x: Letter) -> char {
    let c = (b'a' + (x.unsigned_abs() as u8 - 1)) as char;
    if x < 0 {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for &x in &self.0 {
            write!(f, "{}", letter_char(x))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.shortlex_cmp(other)
    }
}

/// A finite presentation `<S | R>` with cyclically reduced, non-empty relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generator_names: Vec<char>,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// Builds a presentation, cyclically reducing each relator.
    pub fn new(generator_names: Vec<char>, relators: Vec<Word>) -> Result<Self, ParseError> {
        let n = generator_names.len();
        let mut out = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            if r.max_generator() > n {
                return Err(ParseError::GeneratorOutOfRange {
                    relator: i,
                    generators: n,
                });
            }
            let (core, _) = r.cyclic_reduce();
            if core.is_empty() {
                return Err(ParseError::EmptyRelator(i));
            }
            out.push(core);
        }
        Ok(Presentation {
            generator_names,
            relators: out,
        })
    }

    /// Presentation over the default alphabet `a, b, c, ...`.
    pub fn from_words(generator_count: usize, relators: &[&str]) -> Result<Self, ParseError> {
        let names = (0..generator_count).map(|i| (b'a' + i as u8) as char).collect();
        let rels = relators
            .iter()
            .map(|r| Word::parse(r))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(names, rels)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        alphabet(self.generator_count())
    }

    /// Parses a word using this presentation's generator names.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let t = text.trim();
        if t.is_empty() || t == "1" || t == "ε" {
            return Ok(Word::empty());
        }
        t.chars()
            .map(|c| self.letter_of(c).ok_or(ParseError::UnknownGenerator(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    fn letter_of(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let idx = self.generator_names.iter().position(|&g| g == lower)?;
        let g = (idx + 1) as Letter;
        Some(if c.is_ascii_uppercase() { -g } else { g })
    }

    pub fn format_letter(&self, x: Letter) -> char {
        let c = self.generator_names[x.unsigned_abs() as usize - 1];
        if x < 0 {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter().map(|&x| self.format_letter(x)).collect()
    }

    /// Canonical text form, accepted back by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let gens: Vec<String> = self.generator_names.iter().map(|c| c.to_string()).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        format!("gens: {}; rels: {}", gens.join(" "), rels.join(" "))
    }
}

/// Parses `gens: <name>+ ; rels: <word>*`. Lines starting with `#` are
/// comments; relators may be separated by whitespace or commas and may span
/// several lines.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    let body = body.trim();
    let rest = body
        .strip_prefix("gens:")
        .ok_or_else(|| ParseError::Syntax("expected `gens:`".into()))?;
    let (gens_part, rels_part) = rest
        .split_once(';')
        .ok_or_else(|| ParseError::Syntax("expected `;` after generators".into()))?;
    let rels_part = rels_part
        .trim()
        .strip_prefix("rels:")
        .ok_or_else(|| ParseError::Syntax("expected `rels:`".into()))?;

    let mut names = Vec::new();
    for tok in gens_part.split_whitespace() {
        let mut chars = tok.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => {
                if names.contains(&c) {
                    return Err(ParseError::Syntax(format!("duplicate generator `{c}`")));
                }
                names.push(c);
            }
            _ => {
                return Err(ParseError::Syntax(format!(
                    "generator names are single lowercase letters, got `{tok}`"
                )))
            }
        }
    }
    if names.is_empty() {
        return Err(ParseError::Syntax("no generators".into()));
    }

    let shell = Presentation {
        generator_names: names.clone(),
        relators: Vec::new(),
    };
    let rels = rels_part
        .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|t| !t.is_empty())
        .map(|t| shell.parse_word(t))
        .collect::<Result<Vec<_>, _>>()?;
    Presentation::new(names, rels)
}

/// Where a symmetrized word came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Origin {
    pub relator: usize,
    pub shift: usize,
    pub inverted: bool,
}

/// The closure of the relators under cyclic permutation and inversion.
///
/// Words are kept in shortlex order. Coinciding words (shifts of a proper
/// power, duplicate relators) are stored once with every origin.
#[derive(Clone, Debug)]
pub struct SymmetrizedSet {
    words: Vec<Word>,
    origins: Vec<Vec<Origin>>,
}

impl SymmetrizedSet {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn origins(&self, idx: usize) -> &[Origin] {
        &self.origins[idx]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index_of(w).is_some()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    /// Words beginning with the letter `x`.
    pub fn starting_with(&self, x: Letter) -> impl Iterator<Item = (usize, &Word)> {
        self.words
            .iter()
            .enumerate()
            .filter(move |(_, w)| w.0.first() == Some(&x))
    }
}

pub fn symmetrize(p: &Presentation) -> SymmetrizedSet {
    let mut map: BTreeMap<Word, Vec<Origin>> = BTreeMap::new();
    for (i, r) in p.relators.iter().enumerate() {
        for inverted in [false, true] {
            let base = if inverted { r.inverse() } else { r.clone() };
            for shift in 0..base.len() {
                map.entry(base.rotate(shift)).or_default().push(Origin {
                    relator: i,
                    shift,
                    inverted,
                });
            }
        }
    }
    let (words, origins) = map.into_iter().unzip();
    SymmetrizedSet { words, origins }
}
