use std::collections::{BTreeMap, HashSet};

use super::map::Diagram;
use super::reduce::{cell_has_mirror, is_reduced};
use crate::error::{Error, Result};
use crate::presentation::{Letter, SymmetrizedSet, Word};

/// Limits for an enumeration run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_area: usize,
    /// Maximum number of partial diagrams examined before giving up.
    pub max_nodes: usize,
}

impl EnumerationBudget {
    pub fn area(max_area: usize) -> Self {
        EnumerationBudget {
            max_area,
            max_nodes: 2_000_000,
        }
    }
}

type Parts = (usize, Vec<(usize, usize, Letter)>, Vec<Vec<usize>>, Vec<usize>);

fn parts(d: &Diagram) -> Parts {
    (
        d.vertex_count(),
        (0..d.edge_count()).map(|e| d.edge(e)).collect(),
        d.cells().to_vec(),
        d.outer_darts().to_vec(),
    )
}

/// Attach a new cell reading `w` counterclockwise along the `k` outer darts
/// starting at outer position `s`; the rest of `w` becomes a new boundary arc.
pub fn glue_cell(d: &Diagram, s: usize, k: usize, w: &Word) -> Result<Diagram> {
    let (mut nv, mut edges, mut cells, outer) = parts(d);
    let b = outer.len();
    if k == 0 || k > b || w.len() <= k {
        return Err(Error::Invalid("gluing path must be a proper, non-empty prefix".into()));
    }
    let rot: Vec<usize> = (0..b).map(|i| outer[(s + i) % b]).collect();
    let path = &rot[..k];
    if path.iter().zip(&w.0).any(|(&x, &l)| d.dart_label(x) != l) {
        return Err(Error::Invalid("word does not match the gluing path".into()));
    }
    let m = w.len() - k;
    let start = d.dart_head(path[k - 1]);
    let end = d.dart_tail(path[0]);
    let mut chain = vec![start];
    for _ in 1..m {
        chain.push(nv);
        nv += 1;
    }
    chain.push(end);
    let e0 = edges.len();
    for j in 0..m {
        edges.push((chain[j], chain[j + 1], w.0[k + j]));
    }
    let mut cell = path.to_vec();
    cell.extend((0..m).map(|j| 2 * (e0 + j)));
    cells.push(cell);
    let mut new_outer: Vec<usize> = (0..m).rev().map(|j| 2 * (e0 + j) + 1).collect();
    new_outer.extend_from_slice(&rot[k..]);
    Diagram::from_parts(nv, edges, cells, new_outer)
}

/// All reduced diagrams of area `1..=max_area` built by successively gluing
/// cells along a single boundary arc, up to isomorphism. This covers every
/// reduced diagram without cut vertices or free edges that admits such a
/// shelling order.
pub fn enumerate_by_area(s: &SymmetrizedSet, budget: EnumerationBudget) -> Result<Vec<Diagram>> {
    let mut out = Vec::new();
    let mut nodes = 0usize;
    let mut level: Vec<Diagram> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    if budget.max_area == 0 {
        return Ok(out);
    }
    for w in s.words() {
        let d = Diagram::single_cell(w);
        if seen.insert(d.canonical_code()) {
            level.push(d);
        }
    }
    out.extend(level.iter().cloned());
    for _area in 2..=budget.max_area {
        let mut next = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        for d in &level {
            let outer = d.outer_darts();
            let b = outer.len();
            for start in 0..b {
                let first = d.dart_label(outer[start]);
                for k in 1..=b {
                    let labels: Vec<Letter> = (0..k).map(|i| d.dart_label(outer[(start + i) % b])).collect();
                    let mut any = false;
                    for (_, w) in s.starting_with(first) {
                        if w.len() <= k || w.0[..k] != labels[..] {
                            continue;
                        }
                        any = true;
                        nodes += 1;
                        if nodes > budget.max_nodes {
                            return Err(Error::Budget(format!(
                                "area enumeration examined more than {} gluings",
                                budget.max_nodes
                            )));
                        }
                        let Ok(g) = glue_cell(d, start, k, w) else { continue };
                        if cell_has_mirror(&g, g.area() - 1) {
                            continue;
                        }
                        if seen.insert(g.canonical_code()) {
                            next.push(g);
                        }
                    }
                    if !any {
                        break;
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    Ok(out)
}

struct Search<'a> {
    sym: &'a SymmetrizedSet,
    max_area: usize,
    max_rel: usize,
    max_nodes: usize,
    nodes: usize,
    found: Vec<Diagram>,
    seen: HashSet<Vec<i64>>,
    first_only: bool,
}

/// Partial diagram with unfilled holes. Darts are identified lazily through a
/// union-find; every hole dart has a face dart as its reverse.
#[derive(Clone)]
struct State {
    vparent: Vec<usize>,
    edges: Vec<(usize, usize, Letter)>,
    dparent: Vec<usize>,
    /// Cell owning each dart, if any.
    owner: Vec<Option<usize>>,
    cells: Vec<Vec<usize>>,
    holes: Vec<Vec<usize>>,
    outer: Vec<usize>,
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let n = p[y];
        p[y] = r;
        y = n;
    }
    r
}

fn union(p: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(p, a), find(p, b));
    if ra != rb {
        p[ra.max(rb)] = ra.min(rb);
    }
}

impl State {
    fn label(&self, d: usize) -> Letter {
        let l = self.edges[d / 2].2;
        if d.is_multiple_of(2) {
            l
        } else {
            -l
        }
    }

    fn tail(&self, d: usize) -> usize {
        let (t, h, _) = self.edges[d / 2];
        if d.is_multiple_of(2) {
            t
        } else {
            h
        }
    }

    fn head(&self, d: usize) -> usize {
        self.tail(d ^ 1)
    }

    fn add_edge(&mut self, t: usize, h: usize, l: Letter) -> usize {
        let e = self.edges.len();
        self.edges.push((t, h, l));
        self.dparent.extend([2 * e, 2 * e + 1]);
        self.owner.extend([None, None]);
        e
    }

    fn add_vertex(&mut self) -> usize {
        self.vparent.push(self.vparent.len());
        self.vparent.len() - 1
    }

    fn cell_word_from(&self, f: usize, d: usize) -> Word {
        let c = &self.cells[f];
        let k = c.iter().position(|&x| x == d).unwrap();
        Word((0..c.len()).map(|i| self.label(c[(k + i) % c.len()])).collect())
    }

    /// Whether the cells owning face darts `x` and `y`, now two sides of one
    /// edge, form a mirror pair.
    fn mirror(&self, x: usize, y: usize) -> bool {
        match (self.owner[x], self.owner[y]) {
            (Some(f), Some(g)) if f != g => {
                let u = self.cell_word_from(f, x);
                let v = self.cell_word_from(g, y);
                u.len() == v.len() && v.inverse() == u.rotate(1)
            }
            _ => false,
        }
    }

    fn hole_perimeter_ok(&self, area_left: usize, max_rel: usize) -> bool {
        let mut total = 0;
        for h in &self.holes {
            let w = Word(h.iter().map(|&d| self.label(d)).collect());
            let (core, _) = w.cyclic_reduce();
            if area_left == 0 && !core.is_empty() {
                return false;
            }
            total += core.len();
        }
        total <= area_left * max_rel
    }

    fn finish(&self) -> Result<Diagram> {
        let mut dp = self.dparent.clone();
        let mut vp = self.vparent.clone();
        let face_darts: Vec<usize> = self.cells.iter().flatten().chain(&self.outer).copied().collect();
        let mut member: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in &face_darts {
            let r = find(&mut dp, x);
            if member.insert(r, x).is_some() {
                return Err(Error::Verification("two face darts on one edge side".into()));
            }
        }
        let mut new_dart: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut edges = Vec::new();
        for &x in &face_darts {
            if new_dart.contains_key(&x) {
                continue;
            }
            let r = find(&mut dp, x ^ 1);
            let y = *member
                .get(&r)
                .ok_or_else(|| Error::Verification("edge with one side".into()))?;
            let mut vid = |v: usize| {
                let r = find(&mut vp, v);
                let n = vmap.len();
                *vmap.entry(r).or_insert(n)
            };
            let t = vid(self.tail(x));
            let h = vid(self.head(x));
            let e = edges.len();
            edges.push((t, h, self.label(x)));
            new_dart.insert(x, 2 * e);
            new_dart.insert(y, 2 * e + 1);
        }
        let map = |c: &Vec<usize>| c.iter().map(|x| new_dart[x]).collect::<Vec<_>>();
        let cells = self.cells.iter().map(map).collect();
        let outer = map(&self.outer);
        Diagram::from_parts(vmap.len().max(1), edges, cells, outer)
    }
}

impl Search<'_> {
    fn run(&mut self, st: State) -> Result<()> {
        if self.first_only && !self.found.is_empty() {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget(format!(
                "boundary enumeration examined more than {} partial diagrams",
                self.max_nodes
            )));
        }
        let area_left = self.max_area - st.cells.len();
        if !st.hole_perimeter_ok(area_left, self.max_rel) {
            return Ok(());
        }
        let Some(hole) = st.holes.first().cloned() else {
            let d = st.finish()?;
            if is_reduced(&d).0 && self.seen.insert(d.canonical_code()) {
                self.found.push(d);
            }
            return Ok(());
        };
        let d0 = hole[0];
        let l0 = st.label(d0);
        // The first dart lies on a free edge: fold it onto its partner.
        for j in 1..hole.len() {
            let y = hole[j];
            if st.label(y) != -l0 || st.mirror(d0 ^ 1, y ^ 1) {
                continue;
            }
            let mut nx = st.clone();
            union(&mut nx.dparent, d0, y ^ 1);
            union(&mut nx.dparent, d0 ^ 1, y);
            let (t0, h0, ty, hy) = (st.tail(d0), st.head(d0), st.tail(y), st.head(y));
            union(&mut nx.vparent, t0, hy);
            union(&mut nx.vparent, h0, ty);
            let mut parts = Vec::new();
            if j > 1 {
                parts.push(hole[1..j].to_vec());
            }
            if j + 1 < hole.len() {
                parts.push(hole[j + 1..].to_vec());
            }
            nx.holes.splice(0..1, parts);
            self.run(nx)?;
        }
        // Or it lies on a cell.
        if area_left == 0 {
            return Ok(());
        }
        for (_, w) in self.sym.starting_with(l0) {
            let mut nx = st.clone();
            let f = nx.cells.len();
            let (t0, h0) = (st.tail(d0), st.head(d0));
            let mut cell = vec![d0];
            let mut back = Vec::new();
            if w.len() == 1 {
                union(&mut nx.vparent, t0, h0);
            } else {
                let mut prev = h0;
                for (i, &l) in w.0[1..].iter().enumerate() {
                    let next = if i + 2 == w.len() { t0 } else { nx.add_vertex() };
                    let e = nx.add_edge(prev, next, l);
                    cell.push(2 * e);
                    back.push(2 * e + 1);
                    prev = next;
                }
            }
            for &x in &cell {
                nx.owner[x] = Some(f);
            }
            nx.cells.push(cell);
            if nx.mirror(d0, d0 ^ 1) {
                continue;
            }
            back.reverse();
            back.extend_from_slice(&hole[1..]);
            if back.is_empty() {
                nx.holes.remove(0);
            } else {
                nx.holes[0] = back;
            }
            self.run(nx)?;
        }
        Ok(())
    }
}

/// All reduced diagrams of area at most `budget.max_area` whose boundary path
/// reads `w`, up to isomorphism. The search fills the region inside the
/// boundary from its first unfilled dart: that dart either lies on a free
/// edge, folded onto a later dart of the same hole, or on a new cell.
pub fn enumerate_with_boundary(
    s: &SymmetrizedSet,
    w: &Word,
    budget: EnumerationBudget,
) -> Result<Vec<Diagram>> {
    boundary_search(s, w, budget.max_area, budget.max_nodes, false).map(|(found, _)| found)
}

/// A reduced diagram of least area with boundary `w`, found by iterative
/// deepening on area. `Ok(None)` means no diagram up to `budget.max_area`.
/// The second component is the number of partial diagrams examined.
pub fn find_diagram_with_boundary(
    s: &SymmetrizedSet,
    w: &Word,
    budget: EnumerationBudget,
) -> Result<(Option<Diagram>, usize)> {
    let mut spent = 0;
    for area in 0..=budget.max_area {
        let left = budget.max_nodes.saturating_sub(spent);
        let (found, nodes) = boundary_search(s, w, area, left, true)?;
        spent += nodes;
        if let Some(d) = found.into_iter().next() {
            return Ok((Some(d), spent));
        }
    }
    Ok((None, spent))
}

fn boundary_search(
    s: &SymmetrizedSet,
    w: &Word,
    max_area: usize,
    max_nodes: usize,
    first_only: bool,
) -> Result<(Vec<Diagram>, usize)> {
    let n = w.len();
    if n == 0 {
        return Ok((vec![Diagram::point()], 1));
    }
    let mut st = State {
        vparent: (0..n).collect(),
        edges: Vec::new(),
        dparent: Vec::new(),
        owner: Vec::new(),
        cells: Vec::new(),
        holes: Vec::new(),
        outer: Vec::new(),
    };
    for i in 0..n {
        st.add_edge(i, (i + 1) % n, w.0[i]);
    }
    st.holes.push((0..n).map(|i| 2 * i).collect());
    st.outer = (0..n).rev().map(|i| 2 * i + 1).collect();
    let max_rel = s.words().iter().map(Word::len).max().unwrap_or(0);
    let mut search = Search {
        sym: s,
        max_area,
        max_rel,
        max_nodes,
        nodes: 0,
        found: Vec::new(),
        seen: HashSet::new(),
        first_only,
    };
    search.run(st)?;
    Ok((search.found, search.nodes))
}
