use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::abelian::Abelianization;
use super::dehn::dehn_reduce;
use super::enumeration::TruncatedEnumeration;
use super::Budget;
use crate::conditions::{cyclic_canonical, Analysis};
use crate::error::{Error, Result};
use crate::presentation::{letter_from_rank, letter_rank, symmetrize, Letter, Presentation, SymmetrizedSet, Word};

/// How vertices were told apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Engine {
    /// Dehn's algorithm; exact under `C'(1/6)`.
    Dehn,
    /// Coset enumeration truncated at depth `cap`.
    Enumeration { cap: usize, cosets: usize },
}

/// Counts of vertex pairs by the argument that separates them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Distinctness {
    pub abelianization: usize,
    pub dehn: usize,
    pub enumeration: usize,
}

/// A relator cycle `g c_i` whose whole boundary lies in the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellTranslate {
    /// Index of the relator read from `base`.
    pub relator: usize,
    pub base: usize,
    /// Boundary vertices in reading order from `base`.
    pub vertices: Vec<usize>,
    /// How many vertices of the cycle read the relator; more than one when
    /// it is a proper power.
    pub lifts: usize,
}

impl CellTranslate {
    /// Boundary edges as vertex pairs `(u, v)` with `u <= v`.
    pub fn edge_keys(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect()
    }
}

/// A connected component of the edges lying on no relator cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UntetheredComponent {
    pub id: usize,
    pub vertices: Vec<usize>,
    /// Edges `(tail, generator, head)` with positive labels.
    pub edges: Vec<(usize, Letter, usize)>,
}

#[derive(Clone, Debug)]
pub struct Ball {
    pub presentation: Presentation,
    pub radius: usize,
    pub budget: Budget,
    pub engine: Engine,
    words: Vec<Word>,
    depth: Vec<usize>,
    adj: Vec<Vec<Option<usize>>>,
    pub cells: Vec<CellTranslate>,
    pub components: Vec<UntetheredComponent>,
    saturated: Vec<bool>,
    pub distinctness: Distinctness,
}

impl Ball {
    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    /// Shortlex-least word reaching `v`.
    pub fn word(&self, v: usize) -> &Word {
        &self.words[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn neighbor(&self, v: usize, x: Letter) -> Option<usize> {
        self.adj[v][letter_rank(x)]
    }

    /// Follows `w` from vertex `v` while it stays in the ball.
    pub fn trace_from(&self, v: usize, w: &Word) -> Option<usize> {
        w.0.iter().try_fold(v, |u, &x| self.neighbor(u, x))
    }

    pub fn trace(&self, w: &Word) -> Option<usize> {
        self.trace_from(0, w)
    }

    /// Every directed edge `(tail, letter, head)`, both orientations.
    pub fn directed_edges(&self) -> Vec<(usize, Letter, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.adj.iter().enumerate() {
            for (x, t) in row.iter().enumerate() {
                if let Some(v) = t {
                    out.push((u, letter_from_rank(x), *v));
                }
            }
        }
        out
    }

    /// Edges with positive labels; each undirected edge once.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        self.directed_edges().into_iter().filter(|e| e.1 > 0).collect()
    }

    /// A vertex is saturated when it is not on the outer sphere and every
    /// relator cycle through it lies in the ball, so all cells and untethered
    /// edges at it are known.
    pub fn is_saturated(&self, v: usize) -> bool {
        self.saturated[v]
    }

    /// A cell is interior when all of its vertices are saturated: every cell
    /// meeting it is then materialized.
    pub fn cell_is_interior(&self, c: usize) -> bool {
        self.cells[c].vertices.iter().all(|&v| self.saturated[v])
    }

    pub fn view(&self) -> BallView {
        let p = &self.presentation;
        BallView {
            radius: self.radius,
            budget: self.budget,
            engine: self.engine,
            distinctness: self.distinctness,
            vertices: (0..self.vertex_count())
                .map(|v| VertexView {
                    id: v,
                    word: p.format_word(&self.words[v]),
                    depth: self.depth[v],
                    saturated: self.saturated[v],
                })
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(t, x, h)| EdgeView {
                    tail: t,
                    head: h,
                    label: p.format_letter(x).to_string(),
                })
                .collect(),
            cells: self
                .cells
                .iter()
                .enumerate()
                .map(|(i, c)| CellView {
                    id: i,
                    relator: c.relator,
                    base: c.base,
                    word: p.format_word(&p.relators[c.relator]),
                    vertices: c.vertices.clone(),
                    lifts: c.lifts,
                    interior: self.cell_is_interior(i),
                })
                .collect(),
            components: self
                .components
                .iter()
                .map(|c| ComponentView {
                    id: c.id,
                    vertices: c.vertices.clone(),
                    edges: c
                        .edges
                        .iter()
                        .map(|&(t, x, h)| EdgeView {
                            tail: t,
                            head: h,
                            label: p.format_letter(x).to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let p = &self.presentation;
        let mut s = format!("digraph \"{name}\" {{\n");
        for v in 0..self.vertex_count() {
            let w = p.format_word(&self.words[v]);
            let w = if w.is_empty() { "1".to_string() } else { w };
            s += &format!("  v{v} [label=\"{w}\"];\n");
        }
        for (t, x, h) in self.edges() {
            s += &format!("  v{t} -> v{h} [label=\"{}\"];\n", p.format_letter(x));
        }
        s += "}\n";
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BallView {
    pub radius: usize,
    pub budget: Budget,
    pub engine: Engine,
    pub distinctness: Distinctness,
    pub vertices: Vec<VertexView>,
    pub edges: Vec<EdgeView>,
    pub cells: Vec<CellView>,
    pub components: Vec<ComponentView>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexView {
    pub id: usize,
    pub word: String,
    pub depth: usize,
    pub saturated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeView {
    pub tail: usize,
    pub head: usize,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellView {
    pub id: usize,
    pub relator: usize,
    pub base: usize,
    pub word: String,
    pub vertices: Vec<usize>,
    pub lifts: usize,
    pub interior: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentView {
    pub id: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeView>,
}

struct Skeleton {
    words: Vec<Word>,
    depth: Vec<usize>,
    adj: Vec<Vec<Option<usize>>>,
}

impl Skeleton {
    fn root(width: usize) -> Self {
        Skeleton {
            words: vec![Word::empty()],
            depth: vec![0],
            adj: vec![vec![None; width]],
        }
    }

    fn add_vertex(&mut self, w: Word, depth: usize) -> usize {
        let width = self.adj[0].len();
        self.words.push(w);
        self.depth.push(depth);
        self.adj.push(vec![None; width]);
        self.words.len() - 1
    }

    fn link(&mut self, u: usize, x: usize, v: usize) {
        self.adj[u][x] = Some(v);
        self.adj[v][x ^ 1] = Some(u);
    }
}

/// Breadth-first construction deciding each new word against the vertices of
/// nearby depth with the same abelian image.
fn dehn_skeleton(s: &SymmetrizedSet, ab: &Abelianization, width: usize, radius: usize) -> Skeleton {
    let mut sk = Skeleton::root(width);
    let mut by_image: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    by_image.entry(ab.image(&Word::empty())).or_default().push(0);
    let mut level = vec![0usize];
    for k in 1..=radius + 1 {
        let mut next = Vec::new();
        for &v in &level {
            for x in 0..width {
                if sk.adj[v][x].is_some() {
                    continue;
                }
                let mut u = sk.words[v].clone();
                u.0.push(letter_from_rank(x));
                let image = ab.image(&u);
                let found = by_image.get(&image).and_then(|cands| {
                    cands.iter().copied().find(|&c| {
                        sk.depth[c] + 2 >= k && dehn_reduce(s, &u.concat(&sk.words[c].inverse())).trivial()
                    })
                });
                match found {
                    Some(c) => sk.link(v, x, c),
                    None if k <= radius => {
                        let id = sk.add_vertex(u, k);
                        sk.link(v, x, id);
                        by_image.entry(image).or_default().push(id);
                        next.push(id);
                    }
                    None => {}
                }
            }
        }
        level = next;
    }
    sk
}

/// Breadth-first reading of a truncated coset table.
fn enumeration_skeleton(e: &TruncatedEnumeration, width: usize, radius: usize) -> Result<Skeleton> {
    let mut sk = Skeleton::root(width);
    let mut coset = vec![e.identity()];
    let mut vid: HashMap<usize, usize> = HashMap::from([(e.identity(), 0)]);
    let mut level = vec![0usize];
    for k in 0..=radius {
        let mut next = Vec::new();
        for &v in &level {
            for x in 0..width {
                if sk.adj[v][x].is_some() {
                    continue;
                }
                let Some(d) = e.neighbor(coset[v], x) else {
                    return Err(Error::Budget(format!(
                        "coset table incomplete at depth {k}; raise the lookahead"
                    )));
                };
                if let Some(&u) = vid.get(&d) {
                    sk.link(v, x, u);
                } else if k < radius {
                    let mut w = sk.words[v].clone();
                    w.0.push(letter_from_rank(x));
                    let id = sk.add_vertex(w, k + 1);
                    coset.push(d);
                    vid.insert(d, id);
                    sk.link(v, x, id);
                    next.push(id);
                }
            }
        }
        level = next;
    }
    Ok(sk)
}

/// Builds the ball of the given radius about the identity, with every relator
/// cycle that fits inside it and the untethered trees.
pub fn build_ball(p: &Presentation, radius: usize, budget: &Budget) -> Result<Ball> {
    let s = symmetrize(p);
    let ab = Abelianization::new(p);
    let width = 2 * p.generator_count();
    let metric = Analysis::new(p).check_c_prime(6).holds;
    let (sk, engine) = if metric {
        (dehn_skeleton(&s, &ab, width, radius), Engine::Dehn)
    } else {
        let cap = radius + budget.lookahead_for(p);
        let e = TruncatedEnumeration::run(&s, p.generator_count(), cap, budget.max_nodes)?;
        let sk = enumeration_skeleton(&e, width, radius)?;
        (sk, Engine::Enumeration { cap, cosets: e.coset_count() })
    };
    let mut ball = Ball {
        presentation: p.clone(),
        radius,
        budget: *budget,
        engine,
        words: sk.words,
        depth: sk.depth,
        adj: sk.adj,
        cells: Vec::new(),
        components: Vec::new(),
        saturated: Vec::new(),
        distinctness: Distinctness::default(),
    };
    ball.saturated = (0..ball.vertex_count())
        .map(|v| ball.depth[v] < radius && s.words().iter().all(|r| ball.trace_from(v, r).is_some()))
        .collect();
    ball.distinctness = distinctness(&ball, &s, &ab, metric)?;
    ball.cells = relator_translates(&ball)?;
    ball.components = untethered_components(&ball)?;
    Ok(ball)
}

fn distinctness(b: &Ball, s: &SymmetrizedSet, ab: &Abelianization, metric: bool) -> Result<Distinctness> {
    let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for v in 0..b.vertex_count() {
        groups.entry(ab.image(&b.words[v])).or_default().push(v);
    }
    let n = b.vertex_count();
    let total = n * n.saturating_sub(1) / 2;
    let mut same = 0;
    for g in groups.values() {
        same += g.len() * (g.len() - 1) / 2;
        if metric {
            for (i, &u) in g.iter().enumerate() {
                for &v in &g[i + 1..] {
                    if dehn_reduce(s, &b.words[u].concat(&b.words[v].inverse())).trivial() {
                        return Err(Error::Verification(format!(
                            "vertices {} and {} name the same element",
                            b.words[u], b.words[v]
                        )));
                    }
                }
            }
        }
    }
    Ok(Distinctness {
        abelianization: total - same,
        dehn: if metric { same } else { 0 },
        enumeration: if metric { 0 } else { same },
    })
}

fn canonical_cycle(vs: &[usize]) -> Vec<usize> {
    let n = vs.len();
    let mut rev: Vec<usize> = vs.to_vec();
    rev.reverse();
    (0..n)
        .flat_map(|k| {
            let a: Vec<usize> = (0..n).map(|i| vs[(k + i) % n]).collect();
            let b: Vec<usize> = (0..n).map(|i| rev[(k + i) % n]).collect();
            [a, b]
        })
        .min()
        .unwrap_or_default()
}

/// Every relator cycle with its whole boundary in the ball, one per distinct
/// boundary. Each must be embedded.
pub fn relator_translates(b: &Ball) -> Result<Vec<CellTranslate>> {
    let p = &b.presentation;
    let mut classes: BTreeMap<Word, usize> = BTreeMap::new();
    for (i, r) in p.relators.iter().enumerate() {
        classes.entry(cyclic_canonical(r)).or_insert(i);
    }
    let mut reps: Vec<usize> = classes.into_values().collect();
    reps.sort_unstable();
    let mut found: BTreeMap<(usize, Vec<usize>), CellTranslate> = BTreeMap::new();
    for &i in &reps {
        let r = &p.relators[i];
        for g in 0..b.vertex_count() {
            let mut vs = vec![g];
            let mut cur = Some(g);
            for &x in &r.0 {
                cur = cur.and_then(|u| b.neighbor(u, x));
                match cur {
                    Some(u) => vs.push(u),
                    None => break,
                }
            }
            let Some(end) = cur else { continue };
            vs.pop();
            if end != g {
                return Err(Error::Verification(format!(
                    "relator {} read from {} ends at {}",
                    p.format_word(r),
                    p.format_word(&b.words[g]),
                    p.format_word(&b.words[end])
                )));
            }
            let mut sorted = vs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != vs.len() {
                return Err(Error::Verification(format!(
                    "relator {} read from {} is not embedded: {:?}",
                    p.format_word(r),
                    p.format_word(&b.words[g]),
                    vs
                )));
            }
            found
                .entry((i, canonical_cycle(&vs)))
                .and_modify(|c| c.lifts += 1)
                .or_insert(CellTranslate {
                    relator: i,
                    base: g,
                    vertices: vs,
                    lifts: 1,
                });
        }
    }
    let mut cells: Vec<CellTranslate> = found.into_values().collect();
    cells.sort_by_key(|c| (c.base, c.relator));
    Ok(cells)
}

/// Components of the edges on no relator cycle. An edge lies on a relator
/// cycle exactly when its generator occurs in some relator, since the group
/// acts transitively on edges with a given label.
pub fn untethered_components(b: &Ball) -> Result<Vec<UntetheredComponent>> {
    let p = &b.presentation;
    let n = p.generator_count();
    let mut tethered = vec![false; n + 1];
    for r in &p.relators {
        for &x in &r.0 {
            tethered[x.unsigned_abs() as usize] = true;
        }
    }
    let free: Vec<(usize, Letter, usize)> = b
        .edges()
        .into_iter()
        .filter(|e| !tethered[e.1 as usize])
        .collect();
    let mut parent: Vec<usize> = (0..b.vertex_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(u, _, v) in &free {
        let (a, c) = (find(&mut parent, u), find(&mut parent, v));
        parent[a.max(c)] = a.min(c);
    }
    type Group = (Vec<usize>, Vec<(usize, Letter, usize)>);
    let mut groups: BTreeMap<usize, Group> = BTreeMap::new();
    for &e in &free {
        let r = find(&mut parent, e.0);
        let g = groups.entry(r).or_default();
        g.0.extend([e.0, e.2]);
        g.1.push(e);
    }
    let mut out = Vec::new();
    for (id, (mut vs, es)) in groups.into_values().enumerate() {
        vs.sort_unstable();
        vs.dedup();
        if es.len() + 1 != vs.len() {
            return Err(Error::Verification(format!(
                "untethered component {id} has {} vertices and {} edges; not a tree",
                vs.len(),
                es.len()
            )));
        }
        out.push(UntetheredComponent { id, vertices: vs, edges: es });
    }
    Ok(out)
}
