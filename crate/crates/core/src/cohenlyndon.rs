//! Transversal conjugators and the free basis of the normal closure, with a
//! Stallings-folding certificate of independence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley::Ball;
use crate::error::{Error, Result};
use crate::ordering::OrderingMap;
use crate::presentation::{letter_from_rank, letter_rank, Letter, Presentation, Word};
use crate::structure::{LambdaVertex, StructureGraph, Subcomplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalEntry {
    /// Label of the cell in the ordering.
    pub label: usize,
    pub cell: usize,
    pub base: usize,
    pub conjugator: Word,
    /// Ball vertices along the conjugator path from the identity.
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transversal {
    pub relator: usize,
    pub entries: Vec<TransversalEntry>,
}

/// Labelled graph on the ball vertices, built from a subcomplex.
#[derive(Default)]
struct UnionGraph {
    adj: BTreeMap<usize, BTreeMap<usize, usize>>,
}

impl UnionGraph {
    fn add(&mut self, s: &Subcomplex) {
        for &v in &s.vertices {
            self.adj.entry(v).or_default();
        }
        for &(u, x, v) in &s.edges {
            self.adj.entry(u).or_default().insert(letter_rank(x), v);
            self.adj.entry(v).or_default().insert(letter_rank(-x), u);
        }
    }

    /// Shortlex-least path from `from` to `to`, as a word and vertex list.
    fn path(&self, from: usize, to: usize) -> Option<(Word, Vec<usize>)> {
        let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for (&x, &v) in self.adj.get(&u)? {
                if seen.insert(v) {
                    prev.insert(v, (u, x));
                    queue.push_back(v);
                }
            }
        }
        if !seen.contains(&to) {
            return None;
        }
        let (mut letters, mut verts) = (Vec::new(), vec![to]);
        let mut cur = to;
        while cur != from {
            let (u, x) = prev[&cur];
            letters.push(letter_from_rank(x));
            verts.push(u);
            cur = u;
        }
        letters.reverse();
        verts.reverse();
        Some((Word(letters), verts))
    }
}

/// Walks the ordering, and for each labelled cell records the shortlex-least
/// path from the identity to its base inside the union of the cells labelled
/// so far.
pub fn extract_transversals(b: &Ball, sg: &StructureGraph, phi: &OrderingMap) -> Result<Vec<Transversal>> {
    let mut union = UnionGraph::default();
    let mut by_relator: BTreeMap<usize, Vec<TransversalEntry>> = BTreeMap::new();
    let mut seen: BTreeMap<usize, BTreeSet<Vec<usize>>> = BTreeMap::new();
    for (label, &v) in phi.order.iter().enumerate() {
        union.add(&sg.sets[v]);
        let LambdaVertex::Cell(cell) = sg.vertices[v] else {
            continue;
        };
        let ct = &b.cells[cell];
        let (conjugator, path) = union.path(0, ct.base).ok_or_else(|| {
            Error::Verification(format!("cell {cell} (label {label}) is unreachable in the prefix union"))
        })?;
        let r = &b.presentation.relators[ct.relator];
        if b.trace(&conjugator) != Some(ct.base) || b.trace(&conjugator.concat(r)) != Some(ct.base) {
            return Err(Error::Verification(format!("conjugator of cell {cell} does not read its boundary")));
        }
        let mut key = ct.vertices.clone();
        key.sort_unstable();
        if !seen.entry(ct.relator).or_default().insert(key) {
            return Err(Error::Verification(format!("cell {cell} repeats a translate")));
        }
        by_relator.entry(ct.relator).or_default().push(TransversalEntry {
            label,
            cell,
            base: ct.base,
            conjugator,
            path,
        });
    }
    Ok(by_relator
        .into_iter()
        .map(|(relator, entries)| Transversal { relator, entries })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub relator: usize,
    pub conjugator: Word,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootData {
    pub relator: usize,
    pub root: Word,
    pub exponent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohenLyndonBasis {
    pub elements: Vec<BasisElement>,
    pub roots: Vec<RootData>,
    pub warnings: Vec<String>,
}

impl CohenLyndonBasis {
    pub fn words(&self) -> Vec<Word> {
        self.elements.iter().map(|e| e.word.clone()).collect()
    }
}

/// Realizes each conjugate `t r t^-1` as a reduced word.
pub fn basis_elements(ts: &[Transversal], p: &Presentation) -> CohenLyndonBasis {
    let mut elements = Vec::new();
    let mut roots = Vec::new();
    let mut warnings = Vec::new();
    for (i, r) in p.relators.iter().enumerate() {
        let (root, exponent) = r.root();
        if exponent > 1 {
            warnings.push(format!(
                "relator {} is the {exponent}th power of {}; basis elements conjugate the relator, not its root",
                p.format_word(r),
                p.format_word(&root)
            ));
        }
        roots.push(RootData { relator: i, root, exponent });
    }
    for t in ts {
        let r = &p.relators[t.relator];
        for e in &t.entries {
            elements.push(BasisElement {
                relator: t.relator,
                conjugator: e.conjugator.clone(),
                word: e.conjugator.concat(r).concat(&e.conjugator.inverse()).free_reduce(),
            });
        }
    }
    CohenLyndonBasis { elements, roots, warnings }
}

/// A folded, cored labelled graph: the Stallings graph of a subgroup of the
/// free group. Vertex 0 is the base and vertices are numbered in shortlex
/// order of their first visit, so equal subgroups give equal values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldedGraph {
    pub vertex_count: usize,
    /// Positive-label edges `(tail, generator, head)`, sorted.
    pub edges: Vec<(usize, Letter, usize)>,
    #[serde(skip)]
    out: Vec<BTreeMap<usize, usize>>,
}

impl FoldedGraph {
    /// Rank of the subgroup: `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn contains(&self, w: &Word) -> bool {
        subgroup_membership(self, w)
    }
}

struct Folder {
    parent: Vec<usize>,
    out: Vec<BTreeMap<usize, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn fresh(&mut self) -> usize {
        self.parent.push(self.out.len());
        self.out.push(BTreeMap::new());
        self.out.len() - 1
    }

    fn link(&mut self, u: usize, x: usize, v: usize) {
        let (u, v) = (self.find(u), self.find(v));
        for (a, y, b) in [(u, x, v), (v, x ^ 1, u)] {
            match self.out[a].get(&y).copied() {
                Some(w) => {
                    if self.find(w) != b {
                        self.pending.push((w, b));
                    }
                }
                None => {
                    self.out[a].insert(y, b);
                }
            }
        }
        self.settle();
    }

    fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = (a.min(b), a.max(b));
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.out[gone]);
            for (y, t) in moved {
                let t = self.find(t);
                match self.out[keep].get(&y).copied() {
                    Some(w) => {
                        if self.find(w) != t {
                            self.pending.push((w, t));
                        }
                    }
                    None => {
                        self.out[keep].insert(y, t);
                    }
                }
            }
        }
    }
}

/// Folds the wedge of loops reading `words` at a common base, then prunes
/// hanging trees away from the base.
pub fn stallings_fold(words: &[Word]) -> FoldedGraph {
    let mut f = Folder {
        parent: vec![0],
        out: vec![BTreeMap::new()],
        pending: Vec::new(),
    };
    for w in words {
        let w = w.free_reduce();
        if w.is_empty() {
            continue;
        }
        let mut cur = 0;
        for (i, &x) in w.0.iter().enumerate() {
            let next = if i + 1 == w.len() { 0 } else { f.fresh() };
            f.link(cur, letter_rank(x), next);
            cur = next;
        }
    }
    // Resolve targets to representatives, then core.
    let n = f.out.len();
    let mut adj: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for v in 0..n {
        if f.find(v) != v {
            continue;
        }
        let row: Vec<(usize, usize)> = f.out[v].clone().into_iter().collect();
        let entry = adj.entry(v).or_default();
        for (y, t) in row {
            entry.insert(y, f.find(t));
        }
    }
    let base = f.find(0);
    loop {
        let leaves: Vec<usize> = adj
            .iter()
            .filter(|(&v, row)| v != base && row.len() <= 1)
            .map(|(&v, _)| v)
            .collect();
        if leaves.is_empty() {
            break;
        }
        for v in leaves {
            if let Some(row) = adj.remove(&v) {
                for (y, t) in row {
                    if let Some(r) = adj.get_mut(&t) {
                        r.remove(&(y ^ 1));
                    }
                }
            }
        }
    }
    // Renumber by breadth-first visit from the base in letter order.
    let mut index: BTreeMap<usize, usize> = BTreeMap::from([(base, 0)]);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &t in adj[&v].values() {
            if !index.contains_key(&t) {
                index.insert(t, index.len());
                queue.push_back(t);
            }
        }
    }
    let mut out = vec![BTreeMap::new(); index.len()];
    let mut edges = Vec::new();
    for (&v, row) in &adj {
        for (&y, &t) in row {
            out[index[&v]].insert(y, index[&t]);
            if y % 2 == 0 {
                edges.push((index[&v], letter_from_rank(y), index[&t]));
            }
        }
    }
    edges.sort_unstable();
    FoldedGraph {
        vertex_count: index.len(),
        edges,
        out,
    }
}

/// True iff `w` reads a closed path at the base.
pub fn subgroup_membership(fg: &FoldedGraph, w: &Word) -> bool {
    let w = w.free_reduce();
    let mut cur = 0;
    for &x in &w.0 {
        match fg.out[cur].get(&letter_rank(x)) {
            Some(&t) => cur = t,
            None => return false,
        }
    }
    cur == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub elements: usize,
    pub rank: usize,
    pub holds: bool,
    /// Indices of a dependent subset, minimal under single removals.
    pub dependent: Option<Vec<usize>>,
}

/// The basis is free on its elements iff the folded graph has rank equal to
/// the number of elements.
pub fn verify_free_independence(basis: &CohenLyndonBasis) -> IndependenceReport {
    let words = basis.words();
    let rank = stallings_fold(&words).rank();
    let holds = rank == words.len();
    let dependent = (!holds).then(|| {
        let mut keep: Vec<usize> = (0..words.len()).collect();
        for i in 0..words.len() {
            let rest: Vec<usize> = keep.iter().copied().filter(|&j| j != i).collect();
            let ws: Vec<Word> = rest.iter().map(|&j| words[j].clone()).collect();
            if stallings_fold(&ws).rank() < ws.len() {
                keep = rest;
            }
        }
        keep
    });
    IndependenceReport {
        elements: words.len(),
        rank,
        holds,
        dependent,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub samples: usize,
    pub members: usize,
    /// Samples whose free reduction is not empty.
    pub nontrivial: usize,
    /// Non-member sample words, if any.
    pub failures: Vec<String>,
}

/// Samples products of conjugates `g r^±1 g^-1` where `g` runs along a random
/// path in the labelled union ending at a cell base, and checks each lies in
/// the subgroup folded from the basis.
pub fn sample_normal_closure(
    b: &Ball,
    sg: &StructureGraph,
    phi: &OrderingMap,
    fold: &FoldedGraph,
    samples: usize,
    factors: usize,
    seed: u64,
) -> SampleReport {
    let mut union = UnionGraph::default();
    let mut cells = Vec::new();
    for &v in &phi.order {
        union.add(&sg.sets[v]);
        if let LambdaVertex::Cell(c) = sg.vertices[v] {
            cells.push(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = 0;
    let mut nontrivial = 0;
    let mut failures = Vec::new();
    if cells.is_empty() {
        return SampleReport {
            samples: 0,
            members: 0,
            nontrivial: 0,
            failures,
        };
    }
    let span = union.adj.len().max(2);
    for _ in 0..samples {
        let mut product = Word::empty();
        for _ in 0..factors {
            let c = &b.cells[*cells.choose(&mut rng).unwrap()];
            let (mut g, mut cur) = (Vec::new(), 0usize);
            for _ in 0..rng.gen_range(0..span) {
                let row: Vec<(&usize, &usize)> = union.adj[&cur].iter().collect();
                let Some(&(&x, &t)) = row.choose(&mut rng) else { break };
                g.push(letter_from_rank(x));
                cur = t;
            }
            let (tail, _) = union.path(cur, c.base).expect("labelled union is connected");
            let g = Word(g).concat(&tail);
            let mut r = b.presentation.relators[c.relator].clone();
            if rng.gen_bool(0.5) {
                r = r.inverse();
            }
            product = product.concat(&g.concat(&r).concat(&g.inverse()));
        }
        let w = product.free_reduce();
        nontrivial += usize::from(!w.is_empty());
        if fold.contains(&w) {
            members += 1;
        } else {
            failures.push(b.presentation.format_word(&w));
        }
    }
    SampleReport {
        samples,
        members,
        nontrivial,
        failures,
    }
}

/// Random reduced products of `length` basis elements and their inverses.
/// Each must lie in the folded subgroup, and freeness forces it to be
/// nontrivial.
pub fn sample_basis_products(
    basis: &CohenLyndonBasis,
    fold: &FoldedGraph,
    samples: usize,
    length: usize,
    seed: u64,
) -> SampleReport {
    let words = basis.words();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut members, mut nontrivial, mut failures) = (0, 0, Vec::new());
    if words.is_empty() {
        return SampleReport {
            samples: 0,
            members,
            nontrivial,
            failures,
        };
    }
    for _ in 0..samples {
        let mut picks: Vec<(usize, bool)> = Vec::new();
        while picks.len() < length {
            let pick = (rng.gen_range(0..words.len()), rng.gen_bool(0.5));
            // Keep the product reduced as a word in the basis.
            if picks.last().is_some_and(|&(i, inv)| i == pick.0 && inv != pick.1) {
                continue;
            }
            picks.push(pick);
        }
        let w = picks
            .iter()
            .fold(Word::empty(), |acc, &(i, inv)| {
                acc.concat(&if inv { words[i].inverse() } else { words[i].clone() })
            })
            .free_reduce();
        nontrivial += usize::from(!w.is_empty());
        if fold.contains(&w) {
            members += 1;
        } else {
            failures.push(format!("{picks:?}"));
        }
    }
    SampleReport {
        samples,
        members,
        nontrivial,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::cayley::{build_ball, exponent_vector, Budget};
    use crate::ordering::{compute_ordering, NerveKind, TieBreak, DEFAULT_DIM_CAP};
    use crate::presentation::parse_presentation;
    use crate::structure::build_structure_graph;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn setup(text: &str, r: usize) -> (Ball, StructureGraph, OrderingMap) {
        let b = build_ball(&parse_presentation(text).unwrap(), r, &Budget::default()).unwrap();
        let sg = build_structure_graph(&b).unwrap();
        let pool: Vec<usize> = (0..sg.len()).collect();
        let v0 = (0..sg.len()).find(|&v| sg.sets[v].vertices.contains(&0)).unwrap();
        let phi = compute_ordering(&sg, &pool, v0, TieBreak::Least, NerveKind::Closed, DEFAULT_DIM_CAP).unwrap();
        (b, sg, phi)
    }

    #[test]
    fn conjugated_commutators() {
        let p = parse_presentation("gens: a b; rels: abAB").unwrap();
        let entry = |t: &str| TransversalEntry {
            label: 0,
            cell: 0,
            base: 0,
            conjugator: w(t),
            path: Vec::new(),
        };
        let ts = vec![Transversal {
            relator: 0,
            entries: vec![entry(""), entry("a")],
        }];
        let basis = basis_elements(&ts, &p);
        assert_eq!(basis.elements[0].word, w("abAB"));
        assert_eq!(basis.elements[1].word, w("aabABA"));
        assert!(basis.warnings.is_empty());
    }

    #[test]
    fn proper_power_roots() {
        let p = parse_presentation("gens: a b; rels: ababab").unwrap();
        let basis = basis_elements(&[], &p);
        assert_eq!(basis.roots[0].root, w("ab"));
        assert_eq!(basis.roots[0].exponent, 3);
        assert_eq!(basis.warnings.len(), 1);
    }

    #[test]
    fn fold_ranks() {
        assert_eq!(stallings_fold(&[w("a"), w("b")]).rank(), 2);
        assert_eq!(stallings_fold(&[w("aa")]).rank(), 1);
        // <ab, ba, b> = <a, b>.
        let g = stallings_fold(&[w("ab"), w("ba"), w("b")]);
        assert_eq!(g.rank(), 2);
        assert_eq!(g, stallings_fold(&[w("a"), w("b")]));
    }

    #[test]
    fn membership() {
        assert!(stallings_fold(&[w("a"), w("b")]).contains(&w("abAB")));
        let even = stallings_fold(&[w("aa")]);
        assert!(!even.contains(&w("a")));
        assert!(even.contains(&w("AAAA")));
        assert!(even.contains(&Word::empty()));
    }

    #[test]
    fn duplicate_cyclic_factor_is_dependent() {
        let r = w("ababab");
        let s = w("ab");
        let conj = s.concat(&r).concat(&s.inverse()).free_reduce();
        let basis = CohenLyndonBasis {
            elements: [r.clone(), conj, w("cabababC")]
                .into_iter()
                .map(|word| BasisElement {
                    relator: 0,
                    conjugator: Word::empty(),
                    word,
                })
                .collect(),
            roots: Vec::new(),
            warnings: Vec::new(),
        };
        let rep = verify_free_independence(&basis);
        assert!(!rep.holds);
        assert_eq!(rep.rank, 2);
        assert_eq!(rep.dependent.unwrap().len(), 2);
    }

    #[test]
    fn z2_basis_is_free() {
        let (b, sg, phi) = setup("gens: a b; rels: abAB", 5);
        let ts = extract_transversals(&b, &sg, &phi).unwrap();
        let entries: Vec<&TransversalEntry> = ts.iter().flat_map(|t| &t.entries).collect();
        assert_eq!(entries.len(), phi.len());
        for e in &entries {
            // Lattice oracle: the conjugator lands on the base point.
            assert_eq!(exponent_vector(&e.conjugator, 2), exponent_vector(b.word(e.base), 2));
            assert_eq!(e.path.first(), Some(&0));
            assert_eq!(e.path.last(), Some(&e.base));
        }
        if let Some(e) = entries.iter().find(|e| e.base == 0) {
            assert!(e.conjugator.is_empty());
        }
        let basis = basis_elements(&ts, &b.presentation);
        assert!(basis.elements.iter().all(|e| !e.word.is_empty()));
        let rep = verify_free_independence(&basis);
        assert!(rep.holds, "{rep:?}");
        assert_eq!(rep.rank, phi.len());
        let fold = stallings_fold(&basis.words());
        let sample = sample_normal_closure(&b, &sg, &phi, &fold, 100, 3, 1);
        assert_eq!(sample.members, 100, "{:?}", sample.failures);
    }

    #[test]
    fn genus_two_basis_is_free() {
        let (b, sg, phi) = setup("gens: a b c d; rels: abABcdCD", 4);
        let ts = extract_transversals(&b, &sg, &phi).unwrap();
        let basis = basis_elements(&ts, &b.presentation);
        assert!(!basis.elements.is_empty());
        assert!(verify_free_independence(&basis).holds);
    }

    #[test]
    fn triangle_tiling_samples_are_members() {
        let (b, sg, phi) = setup("gens: a b c; rels: abc cba", 3);
        let ts = extract_transversals(&b, &sg, &phi).unwrap();
        let basis = basis_elements(&ts, &b.presentation);
        let rep = verify_free_independence(&basis);
        assert!(rep.holds, "{rep:?}");
        let fold = stallings_fold(&basis.words());
        let sample = sample_normal_closure(&b, &sg, &phi, &fold, 50, 3, 9);
        assert_eq!(sample.members, 50);
    }

    proptest! {
        #[test]
        fn folding_ignores_input_order(ws in proptest::collection::vec("[abAB]{1,6}", 1..5), seed in any::<u64>()) {
            let words: Vec<Word> = ws.iter().map(|s| w(s)).collect();
            let mut shuffled = words.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(stallings_fold(&words), stallings_fold(&shuffled));
        }

        #[test]
        fn products_of_generators_are_members(ws in proptest::collection::vec("[abAB]{1,6}", 1..4), picks in proptest::collection::vec((0usize..4, any::<bool>()), 0..6)) {
            let words: Vec<Word> = ws.iter().map(|s| w(s)).collect();
            let g = stallings_fold(&words);
            let mut prod = Word::empty();
            for (i, inv) in picks {
                let x = &words[i % words.len()];
                prod = prod.concat(&if inv { x.inverse() } else { x.clone() });
            }
            prop_assert!(g.contains(&prod));
        }
    }
}
