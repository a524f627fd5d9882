use std::collections::BTreeMap;

use serde::Serialize;

use super::map::{Diagram, Face};
use crate::error::{Error, Result};

/// Two cells meeting along the edge of `dart`, with `dart` on `first` and its
/// reverse on `second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CancellablePair {
    pub first: usize,
    pub second: usize,
    pub dart: usize,
}

/// Whether the cells on the two sides of `dart` are mirror images across it:
/// reading the second cell from the reversed dart gives the inverse of the
/// first cell's word read from `dart`, rotated to start at the shared edge.
pub fn is_mirror_across(d: &Diagram, dart: usize) -> bool {
    let (Face::Cell(f), Face::Cell(g)) = (d.face_of(dart), d.face_of(dart ^ 1)) else {
        return false;
    };
    if f == g {
        return false;
    }
    let kf = d.cell_darts(f).iter().position(|&x| x == dart).unwrap();
    let kg = d.cell_darts(g).iter().position(|&x| x == dart ^ 1).unwrap();
    let u = d.cell_word_from(f, kf);
    let v = d.cell_word_from(g, kg);
    u.len() == v.len() && v.inverse() == u.rotate(1)
}

pub fn find_cancellable_pair(d: &Diagram) -> Option<CancellablePair> {
    (0..d.edge_count()).map(|e| 2 * e).find_map(|x| {
        if !is_mirror_across(d, x) {
            return None;
        }
        let (Face::Cell(first), Face::Cell(second)) = (d.face_of(x), d.face_of(x ^ 1)) else {
            unreachable!()
        };
        Some(CancellablePair { first, second, dart: x })
    })
}

/// Reduced means no cancellable pair; returns the first pair found otherwise.
pub fn is_reduced(d: &Diagram) -> (bool, Option<CancellablePair>) {
    match find_cancellable_pair(d) {
        Some(p) => (false, Some(p)),
        None => (true, None),
    }
}

/// Whether any edge of cell `f` is a mirror edge.
pub fn cell_has_mirror(d: &Diagram, f: usize) -> bool {
    d.cell_darts(f).iter().any(|&x| is_mirror_across(d, x))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Remove a cancellable pair and zip the hole shut. Area drops by two and the
/// boundary word is unchanged.
pub fn cancel_pair(d: &Diagram, pair: CancellablePair) -> Result<Diagram> {
    if !is_mirror_across(d, pair.dart)
        || d.face_of(pair.dart) != Face::Cell(pair.first)
        || d.face_of(pair.dart ^ 1) != Face::Cell(pair.second)
    {
        return Err(Error::NotCancellable(format!(
            "cells {} and {} are not mirror images across dart {}",
            pair.first, pair.second, pair.dart
        )));
    }
    let fc = d.cell_darts(pair.first);
    let gc = d.cell_darts(pair.second);
    let len = fc.len();
    let kf = fc.iter().position(|&x| x == pair.dart).unwrap();
    let kg = gc.iter().position(|&x| x == pair.dart ^ 1).unwrap();
    let f_at = |i: usize| fc[(kf + i) % len];
    let g_at = |i: usize| gc[(kg + i) % len];

    // Zip: dart i of the first cell is identified with the reverse of dart
    // len - i of the second.
    let mut darts = UnionFind::new(d.dart_count());
    let mut verts = UnionFind::new(d.vertex_count());
    for i in 0..len {
        let x = f_at(i);
        let y = g_at((len - i) % len);
        darts.union(x, y ^ 1);
        darts.union(x ^ 1, y);
        verts.union(d.dart_tail(x), d.dart_head(y));
        verts.union(d.dart_head(x), d.dart_tail(y));
    }
    let removed = |x: usize| matches!(d.face_of(x), Face::Cell(c) if c == pair.first || c == pair.second);

    // Each class of identified darts keeps at most one dart outside the pair.
    let mut survivor: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..d.dart_count() {
        if removed(x) {
            continue;
        }
        let root = darts.find(x);
        if survivor.insert(root, x).is_some() {
            return Err(Error::Verification("cancellation identifies two surviving darts".into()));
        }
    }
    // New edges: pair each surviving dart with the survivor of the reverse class.
    let mut new_dart: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut vid = |v: usize, verts: &mut UnionFind| {
        let r = verts.find(v);
        let n = vmap.len();
        *vmap.entry(r).or_insert(n)
    };
    for x in 0..d.dart_count() {
        if removed(x) || new_dart.contains_key(&x) {
            continue;
        }
        let rev_root = darts.find(x ^ 1);
        let Some(&y) = survivor.get(&rev_root) else {
            return Err(Error::Verification("cancellation leaves a dangling dart".into()));
        };
        let e = edges.len();
        let t = vid(d.dart_tail(x), &mut verts);
        let h = vid(d.dart_head(x), &mut verts);
        edges.push((t, h, d.dart_label(x)));
        new_dart.insert(x, 2 * e);
        new_dart.insert(y, 2 * e + 1);
    }
    let map_cycle = |c: &[usize]| c.iter().map(|x| new_dart[x]).collect::<Vec<_>>();
    let cells = (0..d.area())
        .filter(|&c| c != pair.first && c != pair.second)
        .map(|c| map_cycle(d.cell_darts(c)))
        .collect();
    let outer = map_cycle(d.outer_darts());
    let vertex_count = vmap.len().max(1);
    Diagram::from_parts(vertex_count, edges, cells, outer)
}

/// Cancel pairs until the diagram is reduced.
pub fn reduce(d: &Diagram) -> Result<Diagram> {
    let mut cur = d.clone();
    while let Some(p) = find_cancellable_pair(&cur) {
        cur = cancel_pair(&cur, p)?;
    }
    Ok(cur)
}
