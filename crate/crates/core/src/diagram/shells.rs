use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::Serialize;

use super::map::{Diagram, Face};
use super::reduce::is_reduced;
use crate::conditions::Regime;
use crate::error::{Error, Result};

/// A cell whose boundary is one boundary arc followed by interior pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShellRecord {
    pub face: usize,
    /// Darts of the outerpath, in the cell's order.
    pub outerpath: Vec<usize>,
    /// The innerpath split into maximal runs along a single neighbour.
    pub inner_pieces: Vec<Vec<usize>>,
    pub inner_piece_count: usize,
    /// Set when the whole cell boundary lies on the boundary of the diagram.
    pub degenerate: bool,
}

impl ShellRecord {
    /// Vertices met by the outerpath, endpoints included.
    pub fn outer_vertices(&self, d: &Diagram) -> Vec<usize> {
        let mut vs: Vec<usize> = self.outerpath.iter().map(|&x| d.dart_tail(x)).collect();
        if let Some(&last) = self.outerpath.last() {
            if !self.degenerate {
                vs.push(d.dart_head(last));
            }
        }
        vs
    }

    /// Vertices strictly inside the outerpath.
    pub fn outer_interior_vertices(&self, d: &Diagram) -> Vec<usize> {
        if self.degenerate {
            return self.outer_vertices(d);
        }
        self.outerpath[1..].iter().map(|&x| d.dart_tail(x)).collect()
    }
}

/// Shell structure of cell `f`, if it is a shell with any number of inner
/// pieces.
pub fn shell_of(d: &Diagram, f: usize) -> Option<ShellRecord> {
    let c = d.cell_darts(f);
    let n = c.len();
    let is_outer = |x: usize| d.face_of(x ^ 1) == Face::Outer;
    let outer_count = c.iter().filter(|&&x| is_outer(x)).count();
    if outer_count == 0 {
        return None;
    }
    if outer_count == n {
        return Some(ShellRecord {
            face: f,
            outerpath: c.to_vec(),
            inner_pieces: Vec::new(),
            inner_piece_count: 0,
            degenerate: true,
        });
    }
    // Start at the first outer dart following an inner one.
    let start = (0..n).find(|&i| is_outer(c[i]) && !is_outer(c[(i + n - 1) % n]))?;
    let seq: Vec<usize> = (0..n).map(|i| c[(start + i) % n]).collect();
    let outer_len = seq.iter().take_while(|&&x| is_outer(x)).count();
    if seq[outer_len..].iter().any(|&x| is_outer(x)) {
        return None;
    }
    let boundary = d.boundary_vertices();
    let inner = &seq[outer_len..];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for (k, &y) in inner.iter().enumerate() {
        let continues = k > 0 && {
            let x = inner[k - 1];
            d.face_of(y ^ 1) == d.face_of(x ^ 1) && d.phi(y ^ 1) == x ^ 1
        };
        if k > 0 && boundary.contains(&d.dart_tail(y)) {
            // The innerpath must stay off the boundary between its ends.
            return None;
        }
        if continues {
            pieces.last_mut().unwrap().push(y);
        } else {
            pieces.push(vec![y]);
        }
    }
    Some(ShellRecord {
        face: f,
        outerpath: seq[..outer_len].to_vec(),
        inner_piece_count: pieces.len(),
        inner_pieces: pieces,
        degenerate: false,
    })
}

/// All shells with at most `max_inner_pieces` inner pieces.
pub fn shells(d: &Diagram, max_inner_pieces: usize) -> Vec<ShellRecord> {
    (0..d.area())
        .filter_map(|f| shell_of(d, f))
        .filter(|s| s.inner_piece_count <= max_inner_pieces)
        .collect()
}

/// A member of a ladder sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum LadderElement {
    Cell(usize),
    Edge(usize),
}

/// Number of connected components left after deleting a closed element.
fn components_without(d: &Diagram, el: LadderElement) -> usize {
    let (nv, ne, nf) = (d.vertex_count(), d.edge_count(), d.area());
    let (gone_v, gone_e): (BTreeSet<usize>, BTreeSet<usize>) = match el {
        LadderElement::Cell(f) => (
            d.cell_darts(f).iter().map(|&x| d.dart_tail(x)).collect(),
            d.cell_darts(f).iter().map(|&x| x / 2).collect(),
        ),
        LadderElement::Edge(e) => {
            let (t, h, _) = d.edge(e);
            ([t, h].into_iter().collect(), [e].into_iter().collect())
        }
    };
    let gone_f = match el {
        LadderElement::Cell(f) => Some(f),
        LadderElement::Edge(_) => None,
    };
    let mut parent: Vec<usize> = (0..nv + ne + nf).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let join = |a: usize, b: usize, p: &mut Vec<usize>| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra] = rb;
        }
    };
    for e in 0..ne {
        if gone_e.contains(&e) {
            continue;
        }
        let (t, h, _) = d.edge(e);
        for v in [t, h] {
            if !gone_v.contains(&v) {
                join(nv + e, v, &mut parent);
            }
        }
    }
    for f in 0..nf {
        if Some(f) == gone_f {
            continue;
        }
        for &x in d.cell_darts(f) {
            if !gone_e.contains(&(x / 2)) {
                join(nv + ne + f, nv + x / 2, &mut parent);
            }
            let v = d.dart_tail(x);
            if !gone_v.contains(&v) {
                join(nv + ne + f, v, &mut parent);
            }
        }
    }
    let alive = (0..nv)
        .filter(|v| !gone_v.contains(v))
        .chain((0..ne).filter(|e| !gone_e.contains(e)).map(|e| nv + e))
        .chain((0..nf).filter(|&f| Some(f) != gone_f).map(|f| nv + ne + f))
        .collect::<Vec<_>>();
    let roots: BTreeSet<usize> = alive.iter().map(|&x| find(&mut parent, x)).collect();
    roots.len()
}

/// The ladder sequence of `d`, if `d` is a ladder with at least two elements.
pub fn ladder_sequence(d: &Diagram) -> Option<Vec<LadderElement>> {
    let elements: Vec<LadderElement> = (0..d.area())
        .map(LadderElement::Cell)
        .chain(d.free_edges().into_iter().map(LadderElement::Edge))
        .collect();
    if elements.len() < 2 {
        return None;
    }
    let mut ends = Vec::new();
    for &el in &elements {
        match components_without(d, el) {
            1 => ends.push(el),
            2 => {}
            _ => return None,
        }
    }
    if ends.len() != 2 {
        return None;
    }
    // Order by distance from the first end in the element adjacency graph.
    let verts = |el: LadderElement| -> BTreeSet<usize> {
        match el {
            LadderElement::Cell(f) => d.cell_darts(f).iter().map(|&x| d.dart_tail(x)).collect(),
            LadderElement::Edge(e) => {
                let (t, h, _) = d.edge(e);
                [t, h].into_iter().collect()
            }
        }
    };
    let vsets: Vec<BTreeSet<usize>> = elements.iter().map(|&e| verts(e)).collect();
    let idx = |el: LadderElement| elements.iter().position(|&e| e == el).unwrap();
    let mut dist = vec![usize::MAX; elements.len()];
    let mut queue = std::collections::VecDeque::from([idx(ends[0])]);
    dist[idx(ends[0])] = 0;
    while let Some(i) = queue.pop_front() {
        for j in 0..elements.len() {
            if dist[j] == usize::MAX && !vsets[i].is_disjoint(&vsets[j]) {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by_key(|&i| (dist[i], elements[i]));
    Some(order.into_iter().map(|i| elements[i]).collect())
}

pub fn is_ladder(d: &Diagram) -> bool {
    ladder_sequence(d).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GreendlingerClause {
    /// The diagram is a single vertex.
    Trivial,
    SingleCell,
    Ladder,
    ManyShellsOrSpurs,
}

#[derive(Clone, Debug, Serialize)]
pub struct GreendlingerEvidence {
    pub clause: GreendlingerClause,
    /// Shells of the kind the regime counts.
    pub shells: Vec<ShellRecord>,
    pub spurs: Vec<usize>,
    /// Pairs of 2-shells sharing an edge with an end on the boundary; only
    /// counted under `C(3)-T(6)`.
    pub shell_pairs: Vec<(usize, usize)>,
    pub ladder: Option<Vec<LadderElement>>,
    /// Number of features the regime's third clause counts.
    pub count: usize,
}

/// Shells, spurs and shell pairs counted by the regime's third clause.
pub fn counted_features(
    d: &Diagram,
    regime: Regime,
    shell_cap: usize,
) -> (Vec<ShellRecord>, Vec<usize>, Vec<(usize, usize)>) {
    let spurs = d.spurs();
    match regime {
        Regime::C6 | Regime::CPrime6 => (shells(d, shell_cap), spurs, Vec::new()),
        Regime::C4T4 => (shells(d, 2), spurs, Vec::new()),
        Regime::C3T6 => {
            let ones = shells(d, 1);
            let twos: Vec<ShellRecord> = shells(d, 2).into_iter().filter(|s| s.inner_piece_count == 2).collect();
            let boundary = d.boundary_vertices();
            let mut pairs = Vec::new();
            for (i, a) in twos.iter().enumerate() {
                for b in &twos[i + 1..] {
                    let shared = d.cell_darts(a.face).iter().any(|&x| {
                        d.face_of(x ^ 1) == Face::Cell(b.face)
                            && (boundary.contains(&d.dart_tail(x)) || boundary.contains(&d.dart_head(x)))
                    });
                    if shared {
                        pairs.push((a.face, b.face));
                    }
                }
            }
            (ones, spurs, pairs)
        }
    }
}

/// Which clause of the regime's Greendlinger trichotomy `d` satisfies.
pub fn classify_greendlinger(d: &Diagram, regime: Regime, shell_cap: usize) -> Result<GreendlingerEvidence> {
    if !is_reduced(d).0 {
        return Err(Error::NotReduced);
    }
    let (shells, spurs, shell_pairs) = counted_features(d, regime, shell_cap);
    let count = shells.len() + spurs.len() + shell_pairs.len();
    let mut ev = GreendlingerEvidence {
        clause: GreendlingerClause::ManyShellsOrSpurs,
        shells,
        spurs,
        shell_pairs,
        ladder: None,
        count,
    };
    if d.edge_count() == 0 {
        ev.clause = GreendlingerClause::Trivial;
    } else if d.area() == 1 && d.free_edges().is_empty() {
        ev.clause = GreendlingerClause::SingleCell;
    } else if let Some(seq) = ladder_sequence(d) {
        ev.clause = GreendlingerClause::Ladder;
        ev.ladder = Some(seq);
    } else if count < 3 {
        return Err(Error::Verification(format!(
            "reduced diagram of area {} is neither a cell nor a ladder and has {count} shells/spurs under {regime}",
            d.area()
        )));
    }
    Ok(ev)
}

/// Shell witnessing the refined corner statements for spurless reduced
/// diagrams of area at least two. `None` means the statement fails.
pub fn corner_shell(d: &Diagram, regime: Regime) -> Result<Option<ShellRecord>> {
    if !d.spurs().is_empty() {
        return Err(Error::HasSpurs);
    }
    let deg = d.degrees();
    let boundary = d.boundary_vertices();
    let all = shells(d, 2);
    let shell_vertices =
        |s: &ShellRecord| -> BTreeSet<usize> { d.cell_darts(s.face).iter().map(|&x| d.dart_tail(x)).collect() };
    let found = match regime {
        Regime::C4T4 => all.iter().find(|s| {
            s.inner_piece_count <= 1
                || shell_vertices(s).iter().any(|v| boundary.contains(v) && deg[*v] == 3)
        }),
        Regime::C3T6 => all.iter().find(|s| {
            if s.inner_piece_count <= 1 {
                shell_vertices(s).iter().filter(|&&v| deg[v] > 6).count() <= 1
            } else {
                shell_vertices(s)
                    .iter()
                    .filter(|v| boundary.contains(v))
                    .all(|&v| deg[v] <= 5)
            }
        }),
        Regime::C6 | Regime::CPrime6 => all.first(),
    };
    Ok(found.cloned())
}

#[derive(Clone, Debug, Serialize)]
pub struct ChargeReport {
    /// Charge of each vertex kept after smoothing, as `"p/q"` strings.
    pub charges: BTreeMap<usize, String>,
    pub total: String,
    pub smoothed: Vec<usize>,
    #[serde(skip)]
    pub exact_total: Ratio<i64>,
}

/// Distributed Euler characteristic after smoothing degree-2 vertices, keeping
/// two per 1-shell outerpath and one per 2-shell outerpath (`C(4)-T(4)`) or
/// one per 1-shell outerpath (`C(3)-T(6)`).
pub fn euler_charge(d: &Diagram, regime: Regime) -> Result<ChargeReport> {
    if !d.spurs().is_empty() {
        return Err(Error::HasSpurs);
    }
    let deg = d.degrees();
    let mut keep: BTreeSet<usize> = BTreeSet::new();
    if d.area() <= 1 {
        keep.extend(0..d.vertex_count());
    } else {
        for s in shells(d, 2) {
            let quota = match (regime, s.inner_piece_count) {
                (Regime::C3T6, i) if i <= 1 => 1,
                (Regime::C3T6, _) => 0,
                (_, i) if i <= 1 => 2,
                _ => 1,
            };
            let candidates = s.outer_interior_vertices(d).into_iter().filter(|&v| deg[v] == 2);
            keep.extend(candidates.take(quota));
        }
    }
    let mut smoothed: BTreeSet<usize> = (0..d.vertex_count())
        .filter(|&v| deg[v] == 2 && !keep.contains(&v))
        .filter(|&v| {
            // A vertex whose only edge is a loop cannot be smoothed.
            let ds = d.darts_at(v);
            ds[0] / 2 != ds[1] / 2
        })
        .collect();
    // Every cell keeps at least one corner.
    for f in 0..d.area() {
        let c = d.cell_darts(f);
        if c.iter().all(|&x| smoothed.contains(&d.dart_tail(x))) {
            smoothed.remove(&d.dart_tail(c[0]));
        }
    }
    let corners: Vec<i64> = (0..d.area())
        .map(|f| {
            d.cell_darts(f)
                .iter()
                .filter(|&&x| !smoothed.contains(&d.dart_tail(x)))
                .count() as i64
        })
        .collect();
    let mut charges = BTreeMap::new();
    let mut total = Ratio::from_integer(0);
    for (v, &dv) in deg.iter().enumerate() {
        if smoothed.contains(&v) {
            continue;
        }
        let mut q = Ratio::from_integer(1) - Ratio::new(dv as i64, 2);
        for x in 0..d.dart_count() {
            if d.dart_tail(x) == v {
                if let Face::Cell(f) = d.face_of(x) {
                    q += Ratio::new(1, corners[f]);
                }
            }
        }
        total += q;
        charges.insert(v, q.to_string());
    }
    Ok(ChargeReport {
        charges,
        total: total.to_string(),
        smoothed: smoothed.into_iter().collect(),
        exact_total: total,
    })
}
