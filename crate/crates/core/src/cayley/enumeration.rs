use crate::error::{Error, Result};
use crate::presentation::{letter_rank, SymmetrizedSet};

const NONE: usize = usize::MAX;

/// Coset enumeration over the trivial subgroup, truncated at a depth cap.
///
/// Cosets are only defined along words of length at most `cap`, so the table
/// is a finite piece of the Cayley graph. Every identification it makes is a
/// consequence of the relators; identifications that would need cosets beyond
/// the cap are missed.
pub struct TruncatedEnumeration {
    width: usize,
    table: Vec<Vec<usize>>,
    forward: Vec<usize>,
    depth: Vec<usize>,
    cap: usize,
    max_nodes: usize,
    queue: Vec<usize>,
}

fn inv(rank: usize) -> usize {
    rank ^ 1
}

impl TruncatedEnumeration {
    /// Runs the enumeration to a fixed point.
    pub fn run(s: &SymmetrizedSet, generator_count: usize, cap: usize, max_nodes: usize) -> Result<Self> {
        let width = 2 * generator_count;
        let mut e = TruncatedEnumeration {
            width,
            table: vec![vec![NONE; width]],
            forward: vec![0],
            depth: vec![0],
            cap,
            max_nodes,
            queue: Vec::new(),
        };
        let rels: Vec<Vec<usize>> = s
            .words()
            .iter()
            .map(|w| w.0.iter().map(|&x| letter_rank(x)).collect())
            .collect();
        loop {
            e.recompute_depths();
            let before = e.fingerprint();
            let mut c = 0;
            while c < e.table.len() {
                if e.alive(c) {
                    for r in &rels {
                        if !e.alive(c) {
                            break;
                        }
                        e.scan_and_fill(c, r)?;
                    }
                    if e.alive(c) && e.depth[c] < e.cap {
                        for x in 0..width {
                            if e.table[c][x] == NONE {
                                e.define(c, x)?;
                            }
                        }
                    }
                }
                c += 1;
            }
            if e.fingerprint() == before {
                return Ok(e);
            }
        }
    }

    /// Depths drift above true distances when deductions create shortcuts.
    fn recompute_depths(&mut self) {
        let root = self.identity();
        self.depth.iter_mut().for_each(|d| *d = usize::MAX / 2);
        self.depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            for x in 0..self.width {
                if let Some(d) = self.neighbor(c, x) {
                    if self.depth[d] > self.depth[c] + 1 {
                        self.depth[d] = self.depth[c] + 1;
                        queue.push_back(d);
                    }
                }
            }
        }
    }

    fn fingerprint(&self) -> (usize, usize) {
        let live = (0..self.table.len()).filter(|&c| self.alive(c)).count();
        let filled = (0..self.table.len())
            .filter(|&c| self.alive(c))
            .map(|c| self.table[c].iter().filter(|&&d| d != NONE).count())
            .sum();
        (live, filled)
    }

    fn alive(&self, c: usize) -> bool {
        self.forward[c] == c
    }

    fn rep(&self, mut c: usize) -> usize {
        while self.forward[c] != c {
            c = self.forward[c];
        }
        c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize> {
        if self.table.len() >= self.max_nodes {
            return Err(Error::Budget(format!(
                "coset enumeration defined more than {} cosets",
                self.max_nodes
            )));
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.width]);
        self.forward.push(d);
        self.depth.push(self.depth[c] + 1);
        self.table[c][x] = d;
        self.table[d][inv(x)] = c;
        Ok(d)
    }

    fn scan_and_fill(&mut self, c: usize, r: &[usize]) -> Result<()> {
        let (mut f, mut i) = (c, 0usize);
        let (mut b, mut j) = (c, r.len());
        loop {
            while i < j && self.table[f][r[i]] != NONE {
                f = self.rep(self.table[f][r[i]]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][inv(r[j - 1])] != NONE {
                b = self.rep(self.table[b][inv(r[j - 1])]);
                j -= 1;
            }
            if i == j {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][r[i]] = b;
                self.table[b][inv(r[i])] = f;
                return Ok(());
            }
            if self.depth[f] < self.cap {
                self.define(f, r[i])?;
            } else if self.depth[b] < self.cap {
                self.define(b, inv(r[j - 1]))?;
            } else {
                return Ok(());
            }
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.forward[kill] = keep;
        self.depth[keep] = self.depth[keep].min(self.depth[kill]);
        self.queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(k) = self.queue.pop() {
            for x in 0..self.width {
                let e = self.table[k][x];
                if e == NONE {
                    continue;
                }
                self.table[k][x] = NONE;
                if self.table[e][inv(x)] == k {
                    self.table[e][inv(x)] = NONE;
                }
                let (k2, e2) = (self.rep(k), self.rep(e));
                if self.table[k2][x] != NONE {
                    let t = self.rep(self.table[k2][x]);
                    if t == e2 {
                        self.table[e2][inv(x)] = k2;
                    } else {
                        self.merge(t, e2);
                    }
                } else if self.table[e2][inv(x)] != NONE {
                    let t = self.rep(self.table[e2][inv(x)]);
                    if t == k2 {
                        self.table[k2][x] = e2;
                    } else {
                        self.merge(t, k2);
                    }
                } else {
                    self.table[k2][x] = e2;
                    self.table[e2][inv(x)] = k2;
                }
            }
        }
    }

    /// Target of the edge labelled by letter rank `x` at live coset `c`.
    pub fn neighbor(&self, c: usize, x: usize) -> Option<usize> {
        match self.table[c][x] {
            NONE => None,
            d => Some(self.rep(d)),
        }
    }

    pub fn identity(&self) -> usize {
        self.rep(0)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coset_count(&self) -> usize {
        self.table.len()
    }
}
