use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{Letter, Presentation, Word};

/// Face incident to a dart: the face on the dart's left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Face {
    Cell(usize),
    Outer,
}

/// A disc diagram stored as a combinatorial map.
///
/// Edge `e` runs from `tails[e]` to `heads[e]` reading `labels[e]`. Dart `2e`
/// traverses it forwards and dart `2e + 1` backwards. Every dart has exactly
/// one face on its left: cells list their darts counterclockwise, and the
/// outer face lists its darts clockwise, so the boundary path is the outer
/// cycle reversed. The vertex rotation is `d -> phi(d ^ 1)`.
#[derive(Clone, Debug)]
pub struct Diagram {
    vertex_count: usize,
    tails: Vec<usize>,
    heads: Vec<usize>,
    labels: Vec<Letter>,
    phi: Vec<usize>,
    cells: Vec<Vec<usize>>,
    outer: Vec<usize>,
    face_of: Vec<Face>,
}

impl Diagram {
    /// Assemble a diagram from its edges and face cycles, checking that the
    /// result is a connected planar map.
    pub fn from_parts(
        vertex_count: usize,
        edges: Vec<(usize, usize, Letter)>,
        cells: Vec<Vec<usize>>,
        outer: Vec<usize>,
    ) -> Result<Self> {
        let ndarts = 2 * edges.len();
        let mut phi = vec![usize::MAX; ndarts];
        let mut face_of = vec![Face::Outer; ndarts];
        let mut seen = vec![false; ndarts];
        let mut tails = Vec::with_capacity(edges.len());
        let mut heads = Vec::with_capacity(edges.len());
        let mut labels = Vec::with_capacity(edges.len());
        for (t, h, l) in edges {
            tails.push(t);
            heads.push(h);
            labels.push(l);
        }
        if tails.iter().chain(&heads).any(|&v| v >= vertex_count) {
            return Err(Error::Invalid("edge endpoint out of range".into()));
        }
        let faces = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (Face::Cell(i), c))
            .chain(std::iter::once((Face::Outer, &outer)));
        for (face, cycle) in faces {
            if cycle.is_empty() && face != Face::Outer {
                return Err(Error::Invalid("empty cell".into()));
            }
            for (k, &d) in cycle.iter().enumerate() {
                if d >= ndarts || seen[d] {
                    return Err(Error::Invalid(format!("dart {d} missing or repeated")));
                }
                seen[d] = true;
                face_of[d] = face;
                let next = cycle[(k + 1) % cycle.len()];
                phi[d] = next;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("dart without a face".into()));
        }
        let dg = Diagram {
            vertex_count,
            tails,
            heads,
            labels,
            phi,
            cells,
            outer,
            face_of,
        };
        dg.validate()?;
        Ok(dg)
    }

    /// The one-cell diagram whose boundary reads `w` counterclockwise.
    pub fn single_cell(w: &Word) -> Self {
        let n = w.len();
        let edges = (0..n).map(|i| (i, (i + 1) % n, w.0[i])).collect();
        let cell = (0..n).map(|i| 2 * i).collect();
        let outer = (0..n).rev().map(|i| 2 * i + 1).collect();
        Diagram::from_parts(n.max(1), edges, vec![cell], outer).expect("a polygon is a valid diagram")
    }

    /// A single vertex, the diagram of the empty word.
    pub fn point() -> Self {
        Diagram::from_parts(1, Vec::new(), Vec::new(), Vec::new()).expect("a point is a valid diagram")
    }

    fn validate(&self) -> Result<()> {
        for d in 0..self.dart_count() {
            if self.dart_head(d) != self.dart_tail(self.phi[d]) {
                return Err(Error::Invalid(format!("face cycle breaks after dart {d}")));
            }
        }
        // Each vertex must carry exactly one rotation orbit.
        let mut orbit_vertex = BTreeSet::new();
        let mut visited = vec![false; self.dart_count()];
        let mut orbits = 0;
        for d in 0..self.dart_count() {
            if visited[d] {
                continue;
            }
            orbits += 1;
            let v = self.dart_tail(d);
            if !orbit_vertex.insert(v) {
                return Err(Error::Invalid(format!("vertex {v} is not a manifold point")));
            }
            let mut x = d;
            while !visited[x] {
                visited[x] = true;
                x = self.rotate(x);
            }
        }
        let isolated = self.vertex_count - orbit_vertex.len();
        if self.edge_count() == 0 {
            if self.vertex_count != 1 {
                return Err(Error::Invalid("edgeless diagram must be a single vertex".into()));
            }
        } else if isolated > 0 || orbits != self.vertex_count {
            return Err(Error::Invalid("isolated vertex".into()));
        }
        let euler = self.vertex_count as i64 - self.edge_count() as i64 + self.cells.len() as i64 + 1;
        if euler != 2 {
            return Err(Error::Invalid(format!("not planar and connected (V - E + F = {euler})")));
        }
        Ok(())
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.labels.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize, Letter) {
        (self.tails[e], self.heads[e], self.labels[e])
    }

    pub fn dart_tail(&self, d: usize) -> usize {
        if d.is_multiple_of(2) {
            self.tails[d / 2]
        } else {
            self.heads[d / 2]
        }
    }

    pub fn dart_head(&self, d: usize) -> usize {
        self.dart_tail(d ^ 1)
    }

    pub fn dart_label(&self, d: usize) -> Letter {
        if d.is_multiple_of(2) {
            self.labels[d / 2]
        } else {
            -self.labels[d / 2]
        }
    }

    /// Next dart along the face on the left.
    pub fn phi(&self, d: usize) -> usize {
        self.phi[d]
    }

    /// Next dart leaving the same vertex.
    pub fn rotate(&self, d: usize) -> usize {
        self.phi[d ^ 1]
    }

    pub fn face_of(&self, d: usize) -> Face {
        self.face_of[d]
    }

    pub fn cell_darts(&self, f: usize) -> &[usize] {
        &self.cells[f]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn outer_darts(&self) -> &[usize] {
        &self.outer
    }

    /// Label read around cell `f` starting at its `k`-th dart.
    pub fn cell_word_from(&self, f: usize, k: usize) -> Word {
        let c = &self.cells[f];
        Word((0..c.len()).map(|i| self.dart_label(c[(k + i) % c.len()])).collect())
    }

    pub fn cell_word(&self, f: usize) -> Word {
        self.cell_word_from(f, 0)
    }

    /// Darts of the boundary path, read counterclockwise.
    pub fn boundary_darts(&self) -> Vec<usize> {
        self.outer.iter().rev().map(|d| d ^ 1).collect()
    }

    pub fn boundary_word(&self) -> Word {
        Word(self.boundary_darts().iter().map(|&d| self.dart_label(d)).collect())
    }

    pub fn darts_at(&self, v: usize) -> Vec<usize> {
        let Some(start) = (0..self.dart_count()).find(|&d| self.dart_tail(d) == v) else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut d = self.rotate(start);
        while d != start {
            out.push(d);
            d = self.rotate(d);
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.dart_count()).filter(|&d| self.dart_tail(d) == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for d in 0..self.dart_count() {
            deg[self.dart_tail(d)] += 1;
        }
        deg
    }

    /// Vertices on the boundary path.
    pub fn boundary_vertices(&self) -> BTreeSet<usize> {
        if self.edge_count() == 0 {
            return [0].into_iter().collect();
        }
        self.outer.iter().map(|&d| self.dart_tail(d)).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        let b = self.boundary_vertices();
        (0..self.vertex_count).filter(|v| !b.contains(v)).collect()
    }

    /// Spurs: boundary vertices of degree one.
    pub fn spurs(&self) -> Vec<usize> {
        let deg = self.degrees();
        (0..self.vertex_count).filter(|&v| deg[v] == 1).collect()
    }

    /// Edges with the outer face on both sides.
    pub fn free_edges(&self) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| self.face_of[2 * e] == Face::Outer && self.face_of[2 * e + 1] == Face::Outer)
            .collect()
    }

    /// Every cell reads a word of the symmetrized set of `p`.
    pub fn check_labels(&self, p: &Presentation) -> Result<()> {
        let sym = crate::presentation::symmetrize(p);
        for f in 0..self.area() {
            let w = self.cell_word(f);
            if !sym.contains(&w) {
                return Err(Error::Invalid(format!("cell {f} reads {w}, not a relator")));
            }
        }
        Ok(())
    }

    /// Canonical code: the least breadth-first encoding over all starting
    /// darts of the outer face. Equal codes mean isomorphic labelled plane
    /// diagrams.
    pub fn canonical_code(&self) -> Vec<i64> {
        let starts: Vec<usize> = if self.outer.is_empty() {
            (0..self.dart_count()).collect()
        } else {
            self.outer.clone()
        };
        starts.iter().map(|&s| self.encode_from(s)).min().unwrap_or_default()
    }

    fn encode_from(&self, start: usize) -> Vec<i64> {
        let n = self.dart_count();
        let mut index = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        index[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let d = order[head];
            head += 1;
            for next in [self.phi[d], d ^ 1] {
                if index[next] == usize::MAX {
                    index[next] = order.len();
                    order.push(next);
                }
            }
        }
        let mut code = Vec::with_capacity(4 * n);
        for &d in &order {
            code.push(self.dart_label(d) as i64);
            code.push(index[self.phi[d]] as i64);
            code.push(index[d ^ 1] as i64);
            code.push(i64::from(self.face_of[d] == Face::Outer));
        }
        code
    }

    pub fn to_view(&self, p: &Presentation) -> DiagramView {
        DiagramView {
            area: self.area(),
            vertices: self.vertex_count,
            edges: (0..self.edge_count())
                .map(|e| EdgeView {
                    tail: self.tails[e],
                    head: self.heads[e],
                    label: p.format_letter(self.labels[e]).to_string(),
                })
                .collect(),
            cells: (0..self.area())
                .map(|f| CellView {
                    word: p.format_word(&self.cell_word(f)),
                    darts: self.cells[f].clone(),
                })
                .collect(),
            boundary: p.format_word(&self.boundary_word()),
        }
    }

    pub fn to_dot(&self, p: &Presentation, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  node [shape=point];\n");
        for e in 0..self.edge_count() {
            s.push_str(&format!(
                "  v{} -> v{} [label=\"{}\"];\n",
                self.tails[e],
                self.heads[e],
                p.format_letter(self.labels[e])
            ));
        }
        for f in 0..self.area() {
            s.push_str(&format!(
                "  // cell {f}: {}\n",
                p.format_word(&self.cell_word(f))
            ));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeView {
    pub tail: usize,
    pub head: usize,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellView {
    pub word: String,
    pub darts: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramView {
    pub area: usize,
    pub vertices: usize,
    pub edges: Vec<EdgeView>,
    pub cells: Vec<CellView>,
    pub boundary: String,
}
