//! The structure graph of a ball: one vertex per relator cycle and per
//! untethered tree, one edge per nonempty intersection. Intersection shapes,
//! the Helly property and the nerve of the cover.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cayley::Ball;
use crate::conditions::Regime;
use crate::error::{Error, Result};
use crate::presentation::Letter;

/// An edge of the Cayley graph as `(tail, generator, head)`.
pub type EdgeKey = (usize, Letter, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum LambdaVertex {
    Cell(usize),
    Component(usize),
}

/// A finite subgraph of the ball.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Subcomplex {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<EdgeKey>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Empty,
    EqualBoundary,
    Arc,
    SingleVertex,
    Disconnected,
}

impl Subcomplex {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn intersect(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            vertices: self.vertices.intersection(&other.vertices).copied().collect(),
            edges: self.edges.intersection(&other.edges).copied().collect(),
        }
    }

    pub fn extend(&mut self, other: &Subcomplex) {
        self.vertices.extend(other.vertices.iter().copied());
        self.edges.extend(other.edges.iter().copied());
    }

    pub fn component_count(&self) -> usize {
        let idx: BTreeMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..idx.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut count = idx.len();
        for &(u, _, v) in &self.edges {
            let (a, b) = (find(&mut parent, idx[&u]), find(&mut parent, idx[&v]));
            if a != b {
                parent[a.max(b)] = a.min(b);
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertices.len()
    }

    /// Nonempty, connected and acyclic.
    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.edges.len() + 1 == self.vertices.len()
    }

    pub fn shape(&self) -> Shape {
        if self.is_empty() {
            Shape::Empty
        } else if !self.is_connected() {
            Shape::Disconnected
        } else if self.betti() > 0 {
            // A cycle inside a cycle is the whole cycle.
            Shape::EqualBoundary
        } else if self.edges.is_empty() {
            Shape::SingleVertex
        } else {
            Shape::Arc
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionRecord {
    pub participants: Vec<usize>,
    pub subcomplex: Subcomplex,
    pub shape: Shape,
}

impl IntersectionRecord {
    fn new(participants: Vec<usize>, subcomplex: Subcomplex) -> Self {
        let shape = subcomplex.shape();
        IntersectionRecord {
            participants,
            subcomplex,
            shape,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StructureGraph {
    pub vertices: Vec<LambdaVertex>,
    pub sets: Vec<Subcomplex>,
    /// Whether every element of the cover meeting this one is materialized.
    pub interior: Vec<bool>,
    pub adjacency: Vec<BTreeSet<usize>>,
    /// Λ-vertices containing each ball vertex.
    pub incidence: Vec<Vec<usize>>,
    /// Sorted pairs `(v, w)` with `v < w`, one per nonempty intersection.
    pub edges: Vec<(usize, usize)>,
    pub records: BTreeMap<(usize, usize), IntersectionRecord>,
}

/// The cycle of cell `c` as a subcomplex.
pub fn cell_subcomplex(b: &Ball, c: usize) -> Subcomplex {
    let cell = &b.cells[c];
    let r = &b.presentation.relators[cell.relator];
    let n = cell.vertices.len();
    let mut s = Subcomplex::default();
    for i in 0..n {
        let (u, v) = (cell.vertices[i], cell.vertices[(i + 1) % n]);
        let x = r.0[i];
        s.vertices.insert(u);
        s.edges.insert(if x > 0 { (u, x, v) } else { (v, -x, u) });
    }
    s
}

pub fn build_structure_graph(b: &Ball) -> Result<StructureGraph> {
    let mut vertices = Vec::new();
    let mut sets = Vec::new();
    let mut interior = Vec::new();
    for c in 0..b.cells.len() {
        vertices.push(LambdaVertex::Cell(c));
        sets.push(cell_subcomplex(b, c));
        interior.push(b.cell_is_interior(c));
    }
    for comp in &b.components {
        vertices.push(LambdaVertex::Component(comp.id));
        sets.push(Subcomplex {
            vertices: comp.vertices.iter().copied().collect(),
            edges: comp.edges.iter().copied().collect(),
        });
        interior.push(false);
    }
    let mut incidence = vec![Vec::new(); b.vertex_count()];
    for (i, s) in sets.iter().enumerate() {
        for &v in &s.vertices {
            incidence[v].push(i);
        }
    }
    let mut pairs = BTreeSet::new();
    for inc in &incidence {
        for (k, &i) in inc.iter().enumerate() {
            for &j in &inc[k + 1..] {
                pairs.insert((i.min(j), i.max(j)));
            }
        }
    }
    let mut adjacency = vec![BTreeSet::new(); vertices.len()];
    let mut records = BTreeMap::new();
    for &(i, j) in &pairs {
        let rec = IntersectionRecord::new(vec![i, j], sets[i].intersect(&sets[j]));
        if rec.shape == Shape::EqualBoundary {
            return Err(Error::Verification(format!(
                "structure graph vertices {i} and {j} have the same boundary"
            )));
        }
        adjacency[i].insert(j);
        adjacency[j].insert(i);
        records.insert((i, j), rec);
    }
    Ok(StructureGraph {
        vertices,
        sets,
        interior,
        adjacency,
        incidence,
        edges: pairs.into_iter().collect(),
        records,
    })
}

impl StructureGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_cell(&self, v: usize) -> bool {
        matches!(self.vertices[v], LambdaVertex::Cell(_))
    }

    /// Intersection of the elements in `vset`, an arbitrary finite set.
    pub fn total(&self, vset: &[usize]) -> Subcomplex {
        let mut it = vset.iter();
        let Some(&first) = it.next() else {
            return Subcomplex::default();
        };
        let mut acc = self.sets[first].clone();
        for &v in it {
            acc = acc.intersect(&self.sets[v]);
        }
        acc
    }

    /// Whether the elements in `vset` share a vertex.
    pub fn meets(&self, vset: &[usize]) -> bool {
        let Some(&first) = vset.first() else { return true };
        self.sets[first]
            .vertices
            .iter()
            .any(|x| vset[1..].iter().all(|&v| self.sets[v].vertices.contains(x)))
    }

    /// Whether the elements in `vset` share an edge.
    pub fn meets_in_edge(&self, vset: &[usize]) -> bool {
        let Some(&first) = vset.first() else { return true };
        self.sets[first]
            .edges
            .iter()
            .any(|e| vset[1..].iter().all(|&v| self.sets[v].edges.contains(e)))
    }

    /// Breadth-first distances in Λ from `v0`; unreachable vertices get `None`.
    pub fn distances(&self, v0: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.len()];
        d[v0] = Some(0);
        let mut queue = std::collections::VecDeque::from([v0]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if d[w].is_none() {
                    d[w] = Some(d[v].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        d
    }

    /// Sets of at most `max` Λ-vertices drawn from `pool`, pairwise adjacent,
    /// listed in increasing order.
    pub fn cliques(&self, pool: &[usize], max: usize) -> Vec<Vec<usize>> {
        let allowed: BTreeSet<usize> = pool.iter().copied().collect();
        let mut out = Vec::new();
        fn grow(
            g: &StructureGraph,
            cur: &mut Vec<usize>,
            cands: Vec<usize>,
            max: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            out.push(cur.clone());
            if cur.len() == max {
                return;
            }
            for (k, &w) in cands.iter().enumerate() {
                let next: Vec<usize> = cands[k + 1..]
                    .iter()
                    .copied()
                    .filter(|u| g.adjacency[w].contains(u))
                    .collect();
                cur.push(w);
                grow(g, cur, next, max, out);
                cur.pop();
            }
        }
        for &v in &allowed {
            let cands: Vec<usize> = self.adjacency[v]
                .iter()
                .copied()
                .filter(|&u| u > v && allowed.contains(&u))
                .collect();
            grow(self, &mut vec![v], cands, max, &mut out);
        }
        out
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.interior[v]).collect()
    }

    pub fn view(&self) -> StructureView {
        StructureView {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| LambdaVertexView {
                    id: i,
                    element: *v,
                    interior: self.interior[i],
                })
                .collect(),
            edges: self
                .records
                .iter()
                .map(|(&(v, w), r)| LambdaEdgeView {
                    source: v,
                    target: w,
                    shape: r.shape,
                    vertices: r.subcomplex.vertices.iter().copied().collect(),
                    edge_count: r.subcomplex.edges.len(),
                })
                .collect(),
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let (label, shape) = match v {
                LambdaVertex::Cell(c) => (format!("c{c}"), "box"),
                LambdaVertex::Component(c) => (format!("u{c}"), "ellipse"),
            };
            s += &format!("  n{i} [label=\"{label}\", shape={shape}];\n");
        }
        for (&(v, w), r) in &self.records {
            let style = if r.subcomplex.edges.is_empty() { "dashed" } else { "solid" };
            s += &format!("  n{v} -- n{w} [style={style}];\n");
        }
        s += "}\n";
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureView {
    pub vertices: Vec<LambdaVertexView>,
    pub edges: Vec<LambdaEdgeView>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaVertexView {
    pub id: usize,
    pub element: LambdaVertex,
    pub interior: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaEdgeView {
    pub source: usize,
    pub target: usize,
    pub shape: Shape,
    pub vertices: Vec<usize>,
    pub edge_count: usize,
}

fn full_helly_regime(regime: Regime) -> bool {
    regime != Regime::C3T6
}

/// `X_v ∩ X_w` for distinct Λ-vertices.
pub fn intersection(sg: &StructureGraph, v: usize, w: usize) -> Result<IntersectionRecord> {
    if v == w {
        return Err(Error::Invalid("intersection of a vertex with itself".into()));
    }
    let key = (v.min(w), v.max(w));
    Ok(sg
        .records
        .get(&key)
        .cloned()
        .unwrap_or_else(|| IntersectionRecord::new(vec![key.0, key.1], Subcomplex::default())))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntersectionSummary {
    /// Nonempty pairwise intersections examined.
    pub pairs: usize,
    pub shapes: BTreeMap<String, usize>,
    /// Edge counts of arcs between two relator cycles.
    pub arc_lengths: BTreeMap<usize, usize>,
}

/// Classifies every nonempty pairwise intersection among `pool`; a
/// disconnected one is a verification failure.
pub fn check_intersections(sg: &StructureGraph, pool: &[usize]) -> Result<IntersectionSummary> {
    let allowed: BTreeSet<usize> = pool.iter().copied().collect();
    let mut out = IntersectionSummary::default();
    for (&(v, w), rec) in &sg.records {
        if !allowed.contains(&v) || !allowed.contains(&w) {
            continue;
        }
        if rec.shape == Shape::Disconnected {
            return Err(Error::Verification(format!(
                "intersection of {:?} and {:?} is disconnected: {:?}",
                sg.vertices[v], sg.vertices[w], rec.subcomplex.vertices
            )));
        }
        out.pairs += 1;
        *out.shapes.entry(format!("{:?}", rec.shape)).or_default() += 1;
        if rec.shape == Shape::Arc && sg.is_cell(v) && sg.is_cell(w) {
            *out.arc_lengths.entry(rec.subcomplex.edges.len()).or_default() += 1;
        }
    }
    Ok(out)
}

/// `⋂ X_v` over `vset`. In `C(6)` and `C(4)-T(4)` a nonempty intersection of
/// two or more elements must be a tree.
pub fn total_intersection(sg: &StructureGraph, vset: &[usize], regime: Regime) -> Result<IntersectionRecord> {
    let mut parts = vset.to_vec();
    parts.sort_unstable();
    parts.dedup();
    let rec = IntersectionRecord::new(parts.clone(), sg.total(&parts));
    if parts.len() >= 2 && full_helly_regime(regime) && !rec.subcomplex.is_empty() && !rec.subcomplex.is_tree() {
        return Err(Error::Verification(format!(
            "nonempty intersection of {parts:?} is not contractible ({:?})",
            rec.shape
        )));
    }
    Ok(rec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyReport {
    pub vset: Vec<usize>,
    pub pairwise_nonempty: bool,
    pub pairwise_edges: bool,
    pub total: IntersectionRecord,
    /// Pairwise nonempty implies total nonempty (vacuous otherwise).
    pub full_helly: bool,
    /// Pairwise edges implies the total is one edge or one vertex.
    pub weak_helly: bool,
}

/// Checks the Helly property on one set. In `C(6)` and `C(4)-T(4)` the full
/// form is required; in `C(3)-T(6)` only the weak form, and a full failure is
/// reported, not raised.
pub fn check_helly(sg: &StructureGraph, vset: &[usize], regime: Regime) -> Result<HellyReport> {
    let mut parts = vset.to_vec();
    parts.sort_unstable();
    parts.dedup();
    let mut pairwise_nonempty = true;
    let mut pairwise_edges = true;
    for (i, &v) in parts.iter().enumerate() {
        for &w in &parts[i + 1..] {
            let rec = intersection(sg, v, w)?;
            pairwise_nonempty &= !rec.subcomplex.is_empty();
            pairwise_edges &= !rec.subcomplex.edges.is_empty();
        }
    }
    let total = IntersectionRecord::new(parts.clone(), sg.total(&parts));
    let full_helly = !pairwise_nonempty || !total.subcomplex.is_empty();
    let one_cell = |s: &Subcomplex| {
        (s.vertices.len() == 1 && s.edges.is_empty()) || (s.vertices.len() == 2 && s.edges.len() == 1)
    };
    let weak_helly = !pairwise_edges || parts.len() < 3 || one_cell(&total.subcomplex);
    if full_helly_regime(regime) && !full_helly {
        return Err(Error::Verification(format!(
            "{parts:?} pairwise intersect but have empty total intersection"
        )));
    }
    if !weak_helly {
        return Err(Error::Verification(format!(
            "{parts:?} pairwise share edges but meet in {:?}",
            total.subcomplex
        )));
    }
    Ok(HellyReport {
        vset: parts,
        pairwise_nonempty,
        pairwise_edges,
        total,
        full_helly,
        weak_helly,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HellySummary {
    pub max_size: usize,
    /// Pairwise-intersecting sets of size at least two examined.
    pub sets: usize,
    pub pairwise_edge_sets: usize,
    /// Sets where only the full form fails; always zero outside `C(3)-T(6)`.
    pub full_failures: usize,
    pub first_full_failure: Option<Vec<usize>>,
}

/// Runs [`check_helly`] and [`total_intersection`] on every pairwise
/// intersecting subset of `pool` with at most `max_size` elements.
pub fn helly_suite(sg: &StructureGraph, pool: &[usize], regime: Regime, max_size: usize) -> Result<HellySummary> {
    let mut out = HellySummary {
        max_size,
        ..Default::default()
    };
    for set in sg.cliques(pool, max_size) {
        if set.len() < 2 {
            continue;
        }
        let rep = check_helly(sg, &set, regime)?;
        total_intersection(sg, &set, regime)?;
        out.sets += 1;
        out.pairwise_edge_sets += usize::from(rep.pairwise_edges);
        if !rep.full_helly {
            out.full_failures += 1;
            out.first_full_failure.get_or_insert(set);
        }
    }
    Ok(out)
}

/// Three relator cycles meeting pairwise with nothing common to all three.
pub fn find_triforce(sg: &StructureGraph, pool: &[usize]) -> Option<Vec<usize>> {
    let cells: Vec<usize> = pool.iter().copied().filter(|&v| sg.is_cell(v)).collect();
    sg.cliques(&cells, 3)
        .into_iter()
        .find(|s| s.len() == 3 && !sg.meets(s))
}

/// Simplices of the nerve among a pool of Λ-vertices, each a sorted vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveComplex {
    pub dim_cap: usize,
    pub simplices: Vec<Vec<usize>>,
}

impl NerveComplex {
    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.binary_search_by(|x| x.as_slice().cmp(s)).is_ok()
    }

    pub fn dimension(&self) -> usize {
        self.simplices.iter().map(|s| s.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// Every face of every simplex is present.
    pub fn is_face_closed(&self) -> bool {
        self.simplices.iter().all(|s| {
            (0..s.len()).all(|i| {
                let mut f = s.clone();
                f.remove(i);
                f.is_empty() || self.contains(&f)
            })
        })
    }
}

/// All simplices of dimension at most `dim_cap` among the interior Λ-vertices.
pub fn build_nerve(sg: &StructureGraph, dim_cap: usize) -> NerveComplex {
    nerve_on(sg, &sg.interior_vertices(), dim_cap)
}

pub fn nerve_on(sg: &StructureGraph, pool: &[usize], dim_cap: usize) -> NerveComplex {
    let mut simplices: Vec<Vec<usize>> = sg
        .cliques(pool, dim_cap + 1)
        .into_iter()
        .filter(|s| sg.meets(s))
        .collect();
    simplices.sort();
    NerveComplex { dim_cap, simplices }
}
