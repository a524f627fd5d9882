use crate::presentation::{SymmetrizedSet, Word};

/// Outcome of Dehn's algorithm on a cyclic word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnRun {
    /// The cyclically reduced word left when no more than half of a relator
    /// occurs as a cyclic subword.
    pub residue: Word,
    /// Number of replacements made; bounds the area of a minimal diagram.
    pub steps: usize,
}

impl DehnRun {
    pub fn trivial(&self) -> bool {
        self.residue.is_empty()
    }
}

/// Repeatedly replaces a cyclic subword `s` with `t^-1` where `st` is a
/// symmetrized relator and `|s| > |t|`. Under `C'(1/6)` the residue is empty
/// exactly when the word is trivial.
pub fn dehn_reduce(s: &SymmetrizedSet, w: &Word) -> DehnRun {
    let mut cur = w.cyclic_reduce().0;
    let mut steps = 0;
    'outer: loop {
        let n = cur.len();
        for i in 0..n {
            for r in s.words() {
                let half = r.len() / 2 + 1;
                if half > n {
                    continue;
                }
                let k = (0..r.len().min(n))
                    .take_while(|&j| cur.0[(i + j) % n] == r.0[j])
                    .count();
                if k >= half {
                    // cur rotated to i is s u with s = r[..k]; s equals t^-1.
                    let rot = cur.rotate(i);
                    let t_inv = Word(r.0[k..].to_vec()).inverse();
                    let next = t_inv.concat(&Word(rot.0[k..].to_vec()));
                    cur = next.cyclic_reduce().0;
                    steps += 1;
                    continue 'outer;
                }
            }
        }
        return DehnRun { residue: cur, steps };
    }
}
