//! Pieces and the conditions `C(n)`, `C'(1/n)` and `T(q)`.
//!
//! A piece is a non-empty word that is a common prefix of two distinct words
//! of the symmetrized relator set. `C(n)` and `C'(1/n)` are decided from the
//! piece set directly. `T(q)` is decided on the link graph: its vertices are
//! the `2n` letters and every corner `(x, y)` of a relator (an occurrence of
//! the cyclic subword `xy`) contributes an edge `{x^-1, y}`. An interior vertex
//! of valence `h` in a reduced diagram is the same thing as a closed walk of
//! length `h` in this graph that never immediately retraces an edge, read
//! cyclically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::presentation::{letter_rank, symmetrize, Letter, Presentation, SymmetrizedSet, Word};

/// A piece together with every symmetrized word (by index) it prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub word: Word,
    pub witnesses: Vec<usize>,
}

/// The prefix-closed set of pieces of a symmetrized set.
#[derive(Clone, Debug, Default)]
pub struct PieceSet {
    pieces: BTreeMap<Word, Vec<usize>>,
}

impl PieceSet {
    pub fn contains(&self, w: &Word) -> bool {
        self.pieces.contains_key(w)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Piece> + '_ {
        self.pieces.iter().map(|(w, ws)| Piece {
            word: w.clone(),
            witnesses: ws.clone(),
        })
    }

    pub fn max_len(&self) -> usize {
        self.pieces.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Longest piece that is a prefix of `w`.
    pub fn longest_prefix(&self, w: &[Letter]) -> usize {
        let mut best = 0;
        for k in 1..=w.len() {
            if self.pieces.contains_key(&Word(w[..k].to_vec())) {
                best = k;
            } else {
                break;
            }
        }
        best
    }
}

pub fn compute_pieces(s: &SymmetrizedSet) -> PieceSet {
    let mut pieces = BTreeMap::new();
    let max_len = s.words().iter().map(Word::len).max().unwrap_or(0);
    for k in 1..=max_len {
        let mut groups: BTreeMap<&[Letter], Vec<usize>> = BTreeMap::new();
        for (i, w) in s.words().iter().enumerate() {
            if w.len() >= k {
                groups.entry(&w.0[..k]).or_default().push(i);
            }
        }
        let mut any = false;
        for (prefix, members) in groups {
            if members.len() >= 2 {
                pieces.insert(Word(prefix.to_vec()), members);
                any = true;
            }
        }
        if !any {
            break;
        }
    }
    PieceSet { pieces }
}

/// Result of covering a word by pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// Minimal number of pieces and one optimal factorization.
    Pieces(Vec<Word>),
    /// Some letter of the word is not a piece.
    NotCoverable,
}

impl Decomposition {
    pub fn count(&self) -> Option<usize> {
        match self {
            Decomposition::Pieces(ps) => Some(ps.len()),
            Decomposition::NotCoverable => None,
        }
    }
}

/// Minimal piece factorization of `r` read as a linear word, by dynamic
/// programming over positions.
pub fn min_piece_decomposition(r: &Word, pieces: &PieceSet) -> Decomposition {
    let n = r.len();
    let mut best: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    best[0] = Some((0, 0));
    for end in 1..=n {
        for start in 0..end {
            let Some((cost, _)) = best[start] else { continue };
            if !pieces.contains(&Word(r.0[start..end].to_vec())) {
                continue;
            }
            if best[end].is_none_or(|(c, _)| cost + 1 < c) {
                best[end] = Some((cost + 1, start));
            }
        }
    }
    if best[n].is_none() || n == 0 {
        return Decomposition::NotCoverable;
    }
    let mut parts = Vec::new();
    let mut end = n;
    while end > 0 {
        let (_, start) = best[end].unwrap();
        parts.push(Word(r.0[start..end].to_vec()));
        end = start;
    }
    parts.reverse();
    Decomposition::Pieces(parts)
}

/// Greedy factorization taking the longest piece prefix at each step. Optimal
/// because the piece set is closed under taking subwords.
pub fn greedy_piece_decomposition(r: &Word, pieces: &PieceSet) -> Decomposition {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < r.len() {
        let k = pieces.longest_prefix(&r.0[i..]);
        if k == 0 {
            return Decomposition::NotCoverable;
        }
        parts.push(Word(r.0[i..i + k].to_vec()));
        i += k;
    }
    if parts.is_empty() {
        return Decomposition::NotCoverable;
    }
    Decomposition::Pieces(parts)
}

/// Which condition a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    C(usize),
    CPrime(usize),
    T(usize),
    C4T4,
    C3T6,
    C6,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::C(n) => write!(f, "C({n})"),
            Condition::CPrime(n) => write!(f, "C'(1/{n})"),
            Condition::T(q) => write!(f, "T({q})"),
            Condition::C4T4 => write!(f, "C(4)-T(4)"),
            Condition::C3T6 => write!(f, "C(3)-T(6)"),
            Condition::C6 => write!(f, "C(6)"),
        }
    }
}

impl std::str::FromStr for Condition {
    type Err = String;

    /// Accepts `C6`, `C4T4`, `C3T6`, `C:<n>`, `Cprime:<n>`, `T:<q>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.parse::<usize>().map_err(|e| format!("bad number in `{s}`: {e}"));
        match s {
            "C6" => Ok(Condition::C6),
            "C4T4" => Ok(Condition::C4T4),
            "C3T6" => Ok(Condition::C3T6),
            _ => {
                if let Some(n) = s.strip_prefix("Cprime:") {
                    Ok(Condition::CPrime(num(n)?))
                } else if let Some(n) = s.strip_prefix("C:") {
                    Ok(Condition::C(num(n)?))
                } else if let Some(q) = s.strip_prefix("T:") {
                    Ok(Condition::T(num(q)?))
                } else {
                    Err(format!("unknown condition `{s}`"))
                }
            }
        }
    }
}

/// Counterexample attached to a failing report. Words are rendered with the
/// presentation's generator names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A symmetrized relator that is a product of too few pieces.
    Decomposition { relator: String, pieces: Vec<String> },
    /// A piece that is too long relative to the relator containing it.
    Piece {
        piece: String,
        relator: String,
        piece_len: usize,
        relator_len: usize,
    },
    /// A reduced closed walk in the link graph; `letters[i]` is the direction
    /// leaving the vertex between corner `i-1` and corner `i`.
    LinkCycle { length: usize, letters: Vec<String>, corners: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub holds: bool,
    /// True when the condition holds because there is nothing to check (no
    /// relators, or no coverable relator).
    pub vacuous: bool,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl ConditionReport {
    fn holds(condition: Condition, vacuous: bool, note: Option<String>) -> Self {
        ConditionReport {
            condition: condition.to_string(),
            holds: true,
            vacuous,
            witness: None,
            note,
        }
    }

    fn fails(condition: Condition, witness: Witness) -> Self {
        ConditionReport {
            condition: condition.to_string(),
            holds: false,
            vacuous: false,
            witness: Some(witness),
            note: None,
        }
    }
}

/// Precomputed symmetrized set and pieces for a presentation.
pub struct Analysis<'p> {
    pub presentation: &'p Presentation,
    pub symmetrized: SymmetrizedSet,
    pub pieces: PieceSet,
}

impl<'p> Analysis<'p> {
    pub fn new(p: &'p Presentation) -> Self {
        let symmetrized = symmetrize(p);
        let pieces = compute_pieces(&symmetrized);
        Analysis {
            presentation: p,
            symmetrized,
            pieces,
        }
    }

    pub fn check_c(&self, n: usize) -> ConditionReport {
        let cond = Condition::C(n);
        let p = self.presentation;
        let mut coverable = 0;
        for w in self.symmetrized.words() {
            if let Decomposition::Pieces(parts) = min_piece_decomposition(w, &self.pieces) {
                coverable += 1;
                if parts.len() < n {
                    return ConditionReport::fails(
                        cond,
                        Witness::Decomposition {
                            relator: p.format_word(w),
                            pieces: parts.iter().map(|x| p.format_word(x)).collect(),
                        },
                    );
                }
            }
        }
        if coverable == 0 {
            let note = if self.symmetrized.is_empty() {
                "no relators"
            } else {
                "no relator is a product of pieces"
            };
            ConditionReport::holds(cond, true, Some(note.into()))
        } else {
            ConditionReport::holds(cond, false, None)
        }
    }

    pub fn check_c_prime(&self, n: usize) -> ConditionReport {
        let cond = Condition::CPrime(n);
        let p = self.presentation;
        // The longest piece prefixing a symmetrized word bounds every piece
        // occurring in the corresponding relator.
        let mut worst: Option<(usize, usize)> = None;
        for (i, w) in self.symmetrized.words().iter().enumerate() {
            let k = self.pieces.longest_prefix(&w.0);
            if k > 0 && k * n >= w.len() {
                let ratio_worse = worst.is_none_or(|(_, bk)| k > bk);
                if ratio_worse {
                    worst = Some((i, k));
                }
            }
        }
        match worst {
            Some((i, k)) => {
                let w = &self.symmetrized.words()[i];
                ConditionReport::fails(
                    cond,
                    Witness::Piece {
                        piece: p.format_word(&Word(w.0[..k].to_vec())),
                        relator: p.format_word(w),
                        piece_len: k,
                        relator_len: w.len(),
                    },
                )
            }
            None => {
                let vac = self.pieces.is_empty();
                ConditionReport::holds(cond, vac, vac.then(|| "no pieces".to_string()))
            }
        }
    }

    pub fn check_t(&self, q: usize) -> ConditionReport {
        let cond = Condition::T(q);
        let link = LinkGraph::new(self.presentation);
        match link.shortest_reduced_cycle(3, q.saturating_sub(1)) {
            Some(cycle) => ConditionReport::fails(cond, link.witness(&cycle, self.presentation)),
            None => ConditionReport::holds(cond, link.edges.is_empty(), None),
        }
    }

    pub fn check(&self, c: Condition) -> ConditionReport {
        let both = |a: ConditionReport, b: ConditionReport| {
            let holds = a.holds && b.holds;
            let failing = if !a.holds { a.clone() } else { b.clone() };
            ConditionReport {
                condition: c.to_string(),
                holds,
                vacuous: holds && a.vacuous && b.vacuous,
                witness: if holds { None } else { failing.witness },
                note: if holds {
                    None
                } else {
                    Some(format!("{} fails", failing.condition))
                },
            }
        };
        match c {
            Condition::C(n) => self.check_c(n),
            Condition::CPrime(n) => self.check_c_prime(n),
            Condition::T(q) => self.check_t(q),
            Condition::C6 => {
                let mut r = self.check_c(6);
                r.condition = c.to_string();
                r
            }
            Condition::C4T4 => both(self.check_c(4), self.check_t(4)),
            Condition::C3T6 => both(self.check_c(3), self.check_t(6)),
        }
    }

    pub fn classify(&self) -> BTreeSet<Regime> {
        let mut out = BTreeSet::new();
        if self.check_c_prime(6).holds {
            out.insert(Regime::CPrime6);
        }
        if self.check_c(6).holds {
            out.insert(Regime::C6);
        }
        if self.check(Condition::C4T4).holds {
            out.insert(Regime::C4T4);
        }
        if self.check(Condition::C3T6).holds {
            out.insert(Regime::C3T6);
        }
        out
    }
}

pub fn check_c(p: &Presentation, n: usize) -> ConditionReport {
    Analysis::new(p).check_c(n)
}

pub fn check_c_prime(p: &Presentation, n: usize) -> ConditionReport {
    Analysis::new(p).check_c_prime(n)
}

pub fn check_t(p: &Presentation, q: usize) -> ConditionReport {
    Analysis::new(p).check_t(q)
}

pub fn classify(p: &Presentation) -> BTreeSet<Regime> {
    Analysis::new(p).classify()
}

/// The regimes in which the Cohen–Lyndon machinery is checked, plus the
/// metric condition under which Dehn's algorithm applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "C'(1/6)")]
    CPrime6,
    #[serde(rename = "C(6)")]
    C6,
    #[serde(rename = "C(4)-T(4)")]
    C4T4,
    #[serde(rename = "C(3)-T(6)")]
    C3T6,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::CPrime6 => "C'(1/6)",
            Regime::C6 => "C(6)",
            Regime::C4T4 => "C(4)-T(4)",
            Regime::C3T6 => "C(3)-T(6)",
        })
    }
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C6" | "C(6)" => Ok(Regime::C6),
            "C4T4" | "C(4)-T(4)" => Ok(Regime::C4T4),
            "C3T6" | "C(3)-T(6)" => Ok(Regime::C3T6),
            "Cprime6" | "C'(1/6)" => Ok(Regime::CPrime6),
            _ => Err(format!("unknown regime `{s}`")),
        }
    }
}

impl Regime {
    /// The regime whose Greendlinger variant and Helly form apply, preferring
    /// the strongest conclusions: `C(6)` (including `C'(1/6)`), then
    /// `C(4)-T(4)`, then `C(3)-T(6)`.
    pub fn primary(set: &BTreeSet<Regime>) -> Option<Regime> {
        if set.contains(&Regime::C6) || set.contains(&Regime::CPrime6) {
            Some(Regime::C6)
        } else if set.contains(&Regime::C4T4) {
            Some(Regime::C4T4)
        } else if set.contains(&Regime::C3T6) {
            Some(Regime::C3T6)
        } else {
            None
        }
    }
}

/// A corner occurrence: the vertex of relator `relator` between positions
/// `position - 1` and `position`, taken modulo the period of the relator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub relator: usize,
    pub position: usize,
}

/// Link (star) graph of the presentation complex's single vertex.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    /// Edge `e` joins letter vertices `ends.0` and `ends.1` (letter ranks).
    pub edges: Vec<(usize, usize, Corner)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl LinkGraph {
    pub fn new(p: &Presentation) -> Self {
        let nverts = 2 * p.generator_count();
        let mut seen_cells = BTreeSet::new();
        let mut edges = Vec::new();
        for (i, r) in p.relators.iter().enumerate() {
            if !seen_cells.insert(cyclic_canonical(r)) {
                continue;
            }
            let period = r.root().0.len();
            let n = r.len();
            for pos in 0..period {
                let x = r.0[(pos + n - 1) % n];
                let y = r.0[pos];
                edges.push((
                    letter_rank(-x),
                    letter_rank(y),
                    Corner {
                        relator: i,
                        position: pos,
                    },
                ));
            }
        }
        let mut adjacency = vec![Vec::new(); nverts];
        for (e, &(u, v, _)) in edges.iter().enumerate() {
            adjacency[u].push((e, v));
            adjacency[v].push((e, u));
        }
        LinkGraph { edges, adjacency }
    }

    /// Shortest closed walk with length in `min..=max` that never uses the
    /// same edge twice in a row (cyclically). Returns `(vertex, edge)` steps.
    pub fn shortest_reduced_cycle(&self, min: usize, max: usize) -> Option<Vec<(usize, usize)>> {
        for h in min..=max {
            for start in 0..self.adjacency.len() {
                let mut path = Vec::with_capacity(h);
                if self.search(start, start, h, None, &mut path) {
                    return Some(path);
                }
            }
        }
        None
    }

    /// All lengths `h` in `min..=max` realised by reduced closed walks.
    pub fn cycle_lengths(&self, min: usize, max: usize) -> BTreeSet<usize> {
        (min..=max)
            .filter(|&h| {
                (0..self.adjacency.len()).any(|s| self.search(s, s, h, None, &mut Vec::with_capacity(h)))
            })
            .collect()
    }

    fn search(
        &self,
        start: usize,
        at: usize,
        remaining: usize,
        last_edge: Option<usize>,
        path: &mut Vec<(usize, usize)>,
    ) -> bool {
        if remaining == 0 {
            return at == start && path.first().map(|&(_, e)| Some(e) != last_edge).unwrap_or(false);
        }
        for &(e, next) in &self.adjacency[at] {
            if Some(e) == last_edge {
                continue;
            }
            path.push((at, e));
            if self.search(start, next, remaining - 1, Some(e), path) {
                return true;
            }
            path.pop();
        }
        false
    }

    fn witness(&self, cycle: &[(usize, usize)], p: &Presentation) -> Witness {
        use crate::presentation::letter_from_rank;
        Witness::LinkCycle {
            length: cycle.len(),
            letters: cycle
                .iter()
                .map(|&(v, _)| p.format_letter(letter_from_rank(v)).to_string())
                .collect(),
            corners: cycle
                .iter()
                .map(|&(_, e)| {
                    let c = self.edges[e].2;
                    format!("r{}@{}", c.relator, c.position)
                })
                .collect(),
        }
    }

    /// Number of corner occurrences.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The corner occurrence for relator index `relator` at `position`,
    /// normalised by the relator's period.
    pub fn corner_edge(&self, relator: usize, position: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|&(_, _, c)| c.relator == relator && c.position == position)
    }
}

/// Canonical representative of the 2-cell a relator attaches: least word in
/// shortlex order among rotations of `r` and `r^-1`.
pub fn cyclic_canonical(r: &Word) -> Word {
    let inv = r.inverse();
    (0..r.len())
        .flat_map(|k| [r.rotate(k), inv.rotate(k)])
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn pres(t: &str) -> Presentation {
        parse_presentation(t).unwrap()
    }

    /// Exhaustive oracle: a word is a piece iff two distinct symmetrized
    /// words have it as a prefix, checked by scanning all pairs.
    fn brute_pieces(s: &SymmetrizedSet) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let ws = s.words();
        for i in 0..ws.len() {
            for j in 0..ws.len() {
                if i == j {
                    continue;
                }
                let mut k = 0;
                while k < ws[i].len() && k < ws[j].len() && ws[i].0[k] == ws[j].0[k] {
                    k += 1;
                    out.insert(Word(ws[i].0[..k].to_vec()));
                }
            }
        }
        out
    }

    #[test]
    fn z2_pieces_are_single_letters() {
        let p = pres("gens: a b; rels: abAB");
        let s = symmetrize(&p);
        let pieces = compute_pieces(&s);
        let got: BTreeSet<Word> = pieces.iter().map(|x| x.word).collect();
        assert_eq!(got, brute_pieces(&s));
        let expected: BTreeSet<Word> = ["a", "A", "b", "B"].iter().map(|x| Word::parse(x).unwrap()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn w3_has_long_piece() {
        let p = pres("gens: a b t; rels: taaaTbbbbbbb");
        let a = Analysis::new(&p);
        assert!(a.pieces.contains(&Word(vec![2; 6])));
        assert!(!a.pieces.contains(&Word(vec![2; 7])));
    }

    #[test]
    fn free_group_has_no_pieces() {
        let p = pres("gens: a b; rels:");
        assert!(compute_pieces(&symmetrize(&p)).is_empty());
        let r = check_c(&p, 7);
        assert!(r.holds && r.vacuous);
    }

    #[test]
    fn decomposition_examples() {
        let z2 = pres("gens: a b; rels: abAB");
        let a = Analysis::new(&z2);
        assert_eq!(min_piece_decomposition(&Word::parse("abAB").unwrap(), &a.pieces).count(), Some(4));
        let g2 = pres("gens: a b c d; rels: abABcdCD");
        let a = Analysis::new(&g2);
        assert!(a.pieces.iter().all(|p| p.word.len() == 1));
        assert_eq!(min_piece_decomposition(&Word::parse("abABcdCD").unwrap(), &a.pieces).count(), Some(8));
        let tor = pres("gens: a b; rels: aaa");
        let a = Analysis::new(&tor);
        assert_eq!(min_piece_decomposition(&Word::parse("aaa").unwrap(), &a.pieces), Decomposition::NotCoverable);
    }

    #[test]
    fn c_examples() {
        let w3 = pres("gens: a b t; rels: taaaTbbbbbbb");
        assert!(check_c(&w3, 6).holds);
        let z2 = pres("gens: a b; rels: abAB");
        assert!(check_c(&z2, 4).holds);
        let r = check_c(&z2, 5);
        assert!(!r.holds);
        match r.witness {
            Some(Witness::Decomposition { pieces, .. }) => assert_eq!(pieces.len(), 4),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn c_prime_examples() {
        let w3 = pres("gens: a b t; rels: taaaTbbbbbbb");
        let r = check_c_prime(&w3, 2);
        assert!(!r.holds);
        assert_eq!(
            r.witness,
            Some(Witness::Piece {
                piece: "bbbbbb".into(),
                relator: "bbbbbbbtaaaT".into(),
                piece_len: 6,
                relator_len: 12
            })
        );
        let g2 = pres("gens: a b c d; rels: abABcdCD");
        assert!(check_c_prime(&g2, 6).holds);
        let z2 = pres("gens: a b; rels: abAB");
        assert!(!check_c_prime(&z2, 4).holds);
    }

    #[test]
    fn t_examples() {
        let z2 = pres("gens: a b; rels: abAB");
        assert!(check_t(&z2, 4).holds);
        let r = check_t(&z2, 5);
        assert!(!r.holds);
        assert!(matches!(r.witness, Some(Witness::LinkCycle { length: 4, .. })));
        let tri = pres("gens: a b c; rels: abc cba");
        assert!(check_t(&tri, 6).holds);
        assert!(!check_t(&tri, 7).holds);
        for t in ["gens: a b; rels: ab", "gens: a; rels: a", "gens: a b; rels: aab"] {
            assert!(check_t(&pres(t), 3).holds);
        }
    }

    #[test]
    fn classify_examples() {
        let w3 = pres("gens: a b t; rels: taaaTbbbbbbb");
        assert_eq!(classify(&w3), [Regime::C6].into_iter().collect());
        let z2 = pres("gens: a b; rels: abAB");
        assert_eq!(classify(&z2), [Regime::C4T4].into_iter().collect());
        let tri = pres("gens: a b c; rels: abc cba");
        assert_eq!(classify(&tri), [Regime::C3T6].into_iter().collect());
    }

    #[test]
    fn condition_parsing() {
        assert_eq!("C6".parse::<Condition>().unwrap(), Condition::C6);
        assert_eq!("Cprime:6".parse::<Condition>().unwrap(), Condition::CPrime(6));
        assert_eq!("C:5".parse::<Condition>().unwrap(), Condition::C(5));
        assert_eq!("T:4".parse::<Condition>().unwrap(), Condition::T(4));
        assert!("X".parse::<Condition>().is_err());
    }
}
