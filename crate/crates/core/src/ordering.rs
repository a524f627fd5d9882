//! The ordering of the cover: Λ-vertices are labelled one at a time, each new
//! label going to an extension of the least already-labelled simplex in the
//! Kleene–Brouwer (Lusin–Sierpiński) order.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conditions::Regime;
use crate::error::{Error, Result};
use crate::structure::{StructureGraph, Subcomplex};

/// Default cap on simplex dimension.
pub const DEFAULT_DIM_CAP: usize = 6;

/// Kleene–Brouwer order on strictly increasing tuples: the first difference
/// decides, and a proper extension precedes its prefix.
pub fn lusin_sierpinski_less(s1: &[usize], s2: &[usize]) -> bool {
    for (a, b) in s1.iter().zip(s2) {
        if a != b {
            return a < b;
        }
    }
    s1.len() > s2.len()
}

/// How to choose among several vertices extending the least simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest Λ-vertex id.
    Least,
    /// Uniformly at random from a seeded stream.
    Random(u64),
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreak::Least => write!(f, "least"),
            TieBreak::Random(s) => write!(f, "random:{s}"),
        }
    }
}

impl std::str::FromStr for TieBreak {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "least" {
            return Ok(TieBreak::Least);
        }
        s.strip_prefix("random:")
            .and_then(|n| n.parse().ok())
            .map(TieBreak::Random)
            .ok_or_else(|| Error::Invalid(format!("tie-break `{s}` is not `least` or `random:<seed>`")))
    }
}

impl Serialize for TieBreak {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which simplices the labelling consults.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NerveKind {
    /// Sets with a common vertex.
    Closed,
    /// Sets with a common edge: the nerve of the open cover.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingStep {
    pub label: usize,
    pub vertex: usize,
    /// Labels of the least simplex the vertex extends; empty for the base.
    pub simplex: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingMap {
    pub base: usize,
    pub tie_break: TieBreak,
    pub nerve: NerveKind,
    pub dim_cap: usize,
    /// Λ-vertices in label order.
    pub order: Vec<usize>,
    pub steps: Vec<OrderingStep>,
    /// Why labelling stopped before exhausting the pool, if it did.
    pub frontier: Option<String>,
    /// `(first label, base vertex)` of each independently ordered class.
    pub segments: Vec<(usize, usize)>,
}

impl OrderingMap {
    /// Label of a Λ-vertex, if it has one.
    pub fn phi(&self, v: usize) -> Option<usize> {
        self.order.iter().position(|&x| x == v)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

struct Labeller<'a> {
    sg: &'a StructureGraph,
    pool: BTreeSet<usize>,
    nerve: NerveKind,
    dim_cap: usize,
    label: Vec<Option<usize>>,
    order: Vec<usize>,
}

impl Labeller<'_> {
    fn is_simplex(&self, labels: &[usize], extra: Option<usize>) -> bool {
        let mut vs: Vec<usize> = labels.iter().map(|&l| self.order[l]).collect();
        vs.extend(extra);
        match self.nerve {
            NerveKind::Closed => self.sg.meets(&vs),
            NerveKind::Open => self.sg.meets_in_edge(&vs),
        }
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.sg.adjacency[v].iter().copied().filter(|w| self.pool.contains(w))
    }

    /// Greedy ascending scan: the least simplex of labels extendable by `u`.
    fn least_simplex(&self, u: usize) -> Vec<usize> {
        let mut labels: Vec<usize> = self.neighbors(u).filter_map(|w| self.label[w]).collect();
        labels.sort_unstable();
        let mut cur: Vec<usize> = Vec::new();
        for l in labels {
            if cur.len() + 2 > self.dim_cap + 1 {
                break;
            }
            cur.push(l);
            if !self.is_simplex(&cur, Some(u)) {
                cur.pop();
            }
        }
        cur
    }

    /// Least labelled simplex made only of non-interior vertices; such a
    /// simplex may have extensions outside the ball.
    fn least_undetermined(&self) -> Option<Vec<usize>> {
        let open: Vec<usize> = (0..self.order.len())
            .filter(|&l| !self.sg.interior[self.order[l]])
            .collect();
        let mut cur: Vec<usize> = Vec::new();
        for l in open {
            if cur.len() + 1 > self.dim_cap + 1 {
                break;
            }
            cur.push(l);
            if !self.is_simplex(&cur, None) {
                cur.pop();
            }
        }
        (!cur.is_empty()).then_some(cur)
    }
}

/// Labels the Λ-vertices of `pool` starting from `v0`. Stops when the least
/// simplex with an unlabelled extension might be preceded by a simplex whose
/// extensions are not all materialized.
pub fn compute_ordering(
    sg: &StructureGraph,
    pool: &[usize],
    v0: usize,
    tie_break: TieBreak,
    nerve: NerveKind,
    dim_cap: usize,
) -> Result<OrderingMap> {
    let pool: BTreeSet<usize> = pool.iter().copied().collect();
    if !pool.contains(&v0) {
        return Err(Error::Invalid(format!("base vertex {v0} is not in the pool")));
    }
    let mut rng = match tie_break {
        TieBreak::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieBreak::Least => None,
    };
    let mut lab = Labeller {
        sg,
        pool,
        nerve,
        dim_cap,
        label: vec![None; sg.len()],
        order: vec![v0],
    };
    lab.label[v0] = Some(0);
    let mut steps = vec![OrderingStep {
        label: 0,
        vertex: v0,
        simplex: Vec::new(),
    }];
    let mut frontier = None;
    loop {
        let mut cands: BTreeSet<usize> = BTreeSet::new();
        for &v in &lab.order {
            cands.extend(lab.neighbors(v).filter(|&w| lab.label[w].is_none()));
        }
        let mut best: Option<Vec<usize>> = None;
        let mut tied: Vec<usize> = Vec::new();
        for &u in &cands {
            let s = lab.least_simplex(u);
            if s.is_empty() {
                continue;
            }
            match &best {
                Some(b) if lusin_sierpinski_less(b, &s) => {}
                Some(b) if *b == s => tied.push(u),
                _ => {
                    best = Some(s);
                    tied = vec![u];
                }
            }
        }
        let Some(best) = best else { break };
        if let Some(und) = lab.least_undetermined() {
            if lusin_sierpinski_less(&und, &best) {
                frontier = Some(format!(
                    "simplex {und:?} precedes {best:?} but has extensions outside the ball"
                ));
                break;
            }
        }
        let u = match rng.as_mut() {
            Some(r) => *tied.choose(r).unwrap(),
            None => tied[0],
        };
        let k = lab.order.len();
        lab.label[u] = Some(k);
        lab.order.push(u);
        steps.push(OrderingStep {
            label: k,
            vertex: u,
            simplex: best,
        });
    }
    if frontier.is_none() && lab.order.len() < lab.pool.len() {
        frontier = Some("remaining vertices are not connected to the labelled set".into());
    }
    Ok(OrderingMap {
        base: v0,
        tie_break,
        nerve,
        dim_cap,
        order: lab.order,
        steps,
        frontier,
        segments: vec![(0, v0)],
    })
}

/// Orderings per class of Λ-vertices linked by shared edges, each computed on
/// the open nerve, then concatenated with classes sorted by the earliest ball
/// vertex they contain. A class is appended only once its earliest vertex is
/// covered by the labelled union.
pub fn compute_component_orderings(
    sg: &StructureGraph,
    pool: &[usize],
    tie_break: TieBreak,
    dim_cap: usize,
) -> Result<OrderingMap> {
    let pool_set: BTreeSet<usize> = pool.iter().copied().collect();
    let mut parent: Vec<usize> = (0..sg.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (&(v, w), rec) in &sg.records {
        if !rec.subcomplex.edges.is_empty() && pool_set.contains(&v) && pool_set.contains(&w) {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &v in &pool_set {
        let r = find(&mut parent, v);
        classes.entry(r).or_default().push(v);
    }
    // Sort classes by earliest ball vertex, then by least member.
    let earliest = |v: usize| *sg.sets[v].vertices.iter().next().unwrap_or(&usize::MAX);
    let mut keyed: Vec<(usize, usize, Vec<usize>)> = classes
        .into_values()
        .map(|members| {
            let e = members.iter().map(|&v| earliest(v)).min().unwrap();
            (e, members[0], members)
        })
        .collect();
    keyed.sort();
    let mut order: Vec<usize> = Vec::new();
    let mut steps = Vec::new();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut frontier = None;
    let mut seed_shift = 0u64;
    let mut segments = Vec::new();
    for (e, _, members) in keyed {
        if !order.is_empty() && !covered.contains(&e) {
            frontier.get_or_insert_with(|| format!("class at vertex {e} is not attached to the labelled union"));
            continue;
        }
        let v0 = *members
            .iter()
            .filter(|&&v| sg.sets[v].vertices.contains(&e))
            .min_by_key(|&&v| (!sg.is_cell(v), v))
            .unwrap();
        let tb = match tie_break {
            TieBreak::Random(s) => TieBreak::Random(s.wrapping_add(seed_shift)),
            t => t,
        };
        seed_shift += 1;
        let sub = compute_ordering(sg, &members, v0, tb, NerveKind::Open, dim_cap)?;
        if let Some(f) = &sub.frontier {
            frontier.get_or_insert_with(|| f.clone());
        }
        let offset = order.len();
        segments.push((offset, v0));
        for st in sub.steps {
            steps.push(OrderingStep {
                label: st.label + offset,
                vertex: st.vertex,
                simplex: st.simplex.iter().map(|l| l + offset).collect(),
            });
        }
        for &v in &sub.order {
            covered.extend(sg.sets[v].vertices.iter().copied());
        }
        order.extend(sub.order);
    }
    let base = *order.first().ok_or_else(|| Error::Inconclusive("the pool is empty".into()))?;
    Ok(OrderingMap {
        base,
        tie_break,
        nerve: NerveKind::Open,
        dim_cap,
        order,
        steps,
        frontier,
        segments,
    })
}

/// Λ-distances from `v0`, counting only adjacencies allowed by `nerve`.
pub fn nerve_distances(sg: &StructureGraph, v0: usize, nerve: NerveKind) -> Vec<Option<usize>> {
    if nerve == NerveKind::Closed {
        return sg.distances(v0);
    }
    let mut adj = vec![Vec::new(); sg.len()];
    for (&(v, w), rec) in &sg.records {
        if !rec.subcomplex.edges.is_empty() {
            adj[v].push(w);
            adj[w].push(v);
        }
    }
    let mut d = vec![None; sg.len()];
    d[v0] = Some(0);
    let mut queue = std::collections::VecDeque::from([v0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if d[w].is_none() {
                d[w] = Some(d[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    d
}

/// First Λ-vertex containing the identity, preferring relator cycles.
pub fn default_base(sg: &StructureGraph) -> Option<usize> {
    (0..sg.len()).find(|&v| sg.sets[v].vertices.contains(&0))
}

/// The ordering the regime calls for: the closed nerve from the default base
/// in `C(6)` and `C(4)-T(4)`, per-class open-nerve orderings in `C(3)-T(6)`.
pub fn ordering_for_regime(sg: &StructureGraph, regime: Regime, tie_break: TieBreak) -> Result<OrderingMap> {
    let pool: Vec<usize> = (0..sg.len()).collect();
    if regime == Regime::C3T6 {
        return compute_component_orderings(sg, &pool, tie_break, DEFAULT_DIM_CAP);
    }
    let v0 = default_base(sg).ok_or_else(|| Error::Inconclusive("the ball contains no complete cell or component".into()))?;
    compute_ordering(sg, &pool, v0, tie_break, NerveKind::Closed, DEFAULT_DIM_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneReport {
    pub pairs: usize,
    pub holds: bool,
    /// Labels `(i, j)` with `i < j` but `d(v_i) > d(v_j)`.
    pub witness: Option<(usize, usize)>,
}

/// Checks that labels never decrease the distance from the base of their
/// class. Distances use the nerve the ordering was built on.
pub fn verify_distance_monotone(phi: &OrderingMap, sg: &StructureGraph) -> MonotoneReport {
    let mut pairs = 0;
    let mut witness = None;
    for (i, &(start, base)) in phi.segments.iter().enumerate() {
        let end = phi.segments.get(i + 1).map_or(phi.order.len(), |s| s.0);
        let d = nerve_distances(sg, base, phi.nerve);
        let dist: Vec<usize> = phi.order[start..end].iter().map(|&v| d[v].unwrap_or(usize::MAX)).collect();
        let n = dist.len();
        pairs += n * n.saturating_sub(1) / 2;
        // Compare each label with the largest distance seen before it.
        let mut max_at = 0;
        for j in 1..n {
            if dist[max_at] > dist[j] {
                witness.get_or_insert((start + max_at, start + j));
                break;
            }
            if dist[j] > dist[max_at] {
                max_at = j;
            }
        }
    }
    MonotoneReport {
        pairs,
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixStep {
    pub k: usize,
    pub vertex: usize,
    pub intersection_vertices: usize,
    pub intersection_edges: usize,
    pub tree: bool,
    /// First Betti number of the union through label `k`.
    pub union_betti: usize,
    pub cells_so_far: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionReport {
    pub steps: Vec<PrefixStep>,
    pub all_trees: bool,
    pub betti_matches: bool,
}

/// For each `k <= k_max`, checks that `(X_0 ∪ ... ∪ X_{k-1}) ∩ X_k` is a
/// nonempty tree and that the union through `k` has first Betti number equal
/// to the number of relator cycles in it.
pub fn verify_union_contractibility(sg: &StructureGraph, phi: &OrderingMap, k_max: usize) -> Result<UnionReport> {
    let mut union = Subcomplex::default();
    let mut steps = Vec::new();
    let mut cells = 0;
    for (k, &v) in phi.order.iter().enumerate().take(k_max.saturating_add(1)) {
        let x = &sg.sets[v];
        let meet = union.intersect(x);
        let tree = k == 0 || meet.is_tree();
        if !tree {
            return Err(Error::Verification(format!(
                "prefix intersection at k = {k} ({:?}) is not a tree: vertices {:?}, {} edges",
                sg.vertices[v],
                meet.vertices,
                meet.edges.len()
            )));
        }
        union.extend(x);
        cells += usize::from(sg.is_cell(v));
        let betti = union.betti();
        if betti != cells || !union.is_connected() {
            return Err(Error::Verification(format!(
                "union through k = {k} has Betti number {betti} but {cells} relator cycles"
            )));
        }
        steps.push(PrefixStep {
            k,
            vertex: v,
            intersection_vertices: meet.vertices.len(),
            intersection_edges: meet.edges.len(),
            tree,
            union_betti: betti,
            cells_so_far: cells,
        });
    }
    Ok(UnionReport {
        steps,
        all_trees: true,
        betti_matches: true,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::cayley::{build_ball, Budget};
    use crate::presentation::parse_presentation;
    use crate::structure::build_structure_graph;

    fn graph(text: &str, r: usize) -> StructureGraph {
        let b = build_ball(&parse_presentation(text).unwrap(), r, &Budget::default()).unwrap();
        build_structure_graph(&b).unwrap()
    }

    fn base(sg: &StructureGraph) -> usize {
        (0..sg.len()).find(|&v| sg.sets[v].vertices.contains(&0)).unwrap()
    }

    fn closed(sg: &StructureGraph, tb: TieBreak) -> OrderingMap {
        let pool: Vec<usize> = (0..sg.len()).collect();
        compute_ordering(sg, &pool, base(sg), tb, NerveKind::Closed, DEFAULT_DIM_CAP).unwrap()
    }

    #[test]
    fn order_examples() {
        assert!(lusin_sierpinski_less(&[0, 1], &[0, 2]));
        assert!(lusin_sierpinski_less(&[0, 1, 2], &[0, 1]));
        assert!(!lusin_sierpinski_less(&[0, 2], &[0, 1, 5]));
        assert!(lusin_sierpinski_less(&[0, 1, 5], &[0, 2]));
    }

    #[test]
    fn tie_break_round_trips() {
        for t in [TieBreak::Least, TieBreak::Random(42)] {
            assert_eq!(t.to_string().parse::<TieBreak>().unwrap(), t);
        }
        assert!("random:".parse::<TieBreak>().is_err());
        assert!("first".parse::<TieBreak>().is_err());
    }

    #[test]
    fn base_gets_label_zero() {
        let sg = graph("gens: a b; rels: abAB", 4);
        let phi = closed(&sg, TieBreak::Least);
        assert_eq!(phi.phi(phi.base), Some(0));
        assert!(phi.steps[0].simplex.is_empty());
        let distinct: std::collections::BTreeSet<usize> = phi.order.iter().copied().collect();
        assert_eq!(distinct.len(), phi.len());
    }

    #[test]
    fn z2_orderings_are_distance_monotone() {
        let sg = graph("gens: a b; rels: abAB", 5);
        for tb in std::iter::once(TieBreak::Least).chain((0..10).map(TieBreak::Random)) {
            let phi = closed(&sg, tb);
            assert!(phi.len() > 4, "{tb}");
            let d = sg.distances(phi.base);
            // Brute force over all ordered pairs.
            for i in 0..phi.len() {
                for j in i + 1..phi.len() {
                    assert!(d[phi.order[i]] <= d[phi.order[j]], "{tb}: {i} {j}");
                }
            }
            assert!(verify_distance_monotone(&phi, &sg).holds);
        }
    }

    #[test]
    fn swapped_labels_are_caught() {
        let sg = graph("gens: a b; rels: abAB", 5);
        let mut phi = closed(&sg, TieBreak::Least);
        let d = sg.distances(phi.base);
        let far = (2..phi.len()).find(|&j| d[phi.order[j]] > d[phi.order[1]]).unwrap();
        phi.order.swap(1, far);
        let rep = verify_distance_monotone(&phi, &sg);
        assert!(!rep.holds);
        assert_eq!(rep.witness.map(|w| w.0), Some(1));
    }

    #[test]
    fn z2_prefix_intersections_are_trees() {
        let sg = graph("gens: a b; rels: abAB", 5);
        for tb in [TieBreak::Least, TieBreak::Random(3)] {
            let phi = closed(&sg, tb);
            let rep = verify_union_contractibility(&sg, &phi, usize::MAX).unwrap();
            assert_eq!(rep.steps.len(), phi.len());
            // The second square meets the first in a side or a corner.
            assert!(rep.steps[1].intersection_edges <= 1);
            assert_eq!(rep.steps[1].intersection_vertices, rep.steps[1].intersection_edges + 1);
        }
    }

    #[test]
    fn genus_two_prefix_intersections_are_trees() {
        let sg = graph("gens: a b c d; rels: abABcdCD", 4);
        let phi = closed(&sg, TieBreak::Least);
        let rep = verify_union_contractibility(&sg, &phi, usize::MAX).unwrap();
        assert!(rep.steps.iter().all(|s| s.tree));
    }

    #[test]
    fn triangle_tiling_classes_are_monotone_for_random_ties() {
        // Triangles sharing edges form a honeycomb.
        let sg = graph("gens: a b c; rels: abc cba", 4);
        let pool: Vec<usize> = (0..sg.len()).collect();
        for seed in 0..10 {
            let phi = compute_component_orderings(&sg, &pool, TieBreak::Random(seed), DEFAULT_DIM_CAP).unwrap();
            assert_eq!(phi.segments.len(), 1);
            assert!(verify_distance_monotone(&phi, &sg).holds, "seed {seed}");
            verify_union_contractibility(&sg, &phi, usize::MAX).unwrap();
        }
    }

    #[test]
    fn wedge_classes_are_ordered_separately() {
        // Z^2 * Z: sheets of triangles joined by c-trees.
        let sg = graph("gens: a b c d; rels: abc cba", 3);
        let pool: Vec<usize> = (0..sg.len()).collect();
        let phi = compute_component_orderings(&sg, &pool, TieBreak::Least, DEFAULT_DIM_CAP).unwrap();
        assert!(phi.segments.len() > 1);
        assert!(verify_distance_monotone(&phi, &sg).holds);
        verify_union_contractibility(&sg, &phi, usize::MAX).unwrap();
    }

    #[test]
    fn single_class_matches_plain_ordering() {
        let sg = graph("gens: a b c; rels: abc cba", 3);
        let pool: Vec<usize> = (0..sg.len()).collect();
        let comp = compute_component_orderings(&sg, &pool, TieBreak::Least, DEFAULT_DIM_CAP).unwrap();
        let plain = compute_ordering(&sg, &pool, comp.base, TieBreak::Least, NerveKind::Open, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(comp.order, plain.order);
    }

    fn tuple() -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::btree_set(0usize..8, 1..5).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn strict_total_order(a in tuple(), b in tuple(), c in tuple()) {
            prop_assert!(!lusin_sierpinski_less(&a, &a));
            if a != b {
                prop_assert!(lusin_sierpinski_less(&a, &b) != lusin_sierpinski_less(&b, &a));
            }
            if lusin_sierpinski_less(&a, &b) && lusin_sierpinski_less(&b, &c) {
                prop_assert!(lusin_sierpinski_less(&a, &c));
            }
        }
    }
}
