use crate::presentation::{Presentation, Word};

/// The abelianization `Z^n / <relator exponent vectors>`, kept as a row
/// Hermite normal form so that every class has a unique reduced vector.
#[derive(Clone, Debug)]
pub struct Abelianization {
    n: usize,
    /// Rows in echelon form with positive pivots, sorted by pivot column.
    rows: Vec<(usize, Vec<i64>)>,
}

pub fn exponent_vector(w: &Word, n: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    for &x in &w.0 {
        v[x.unsigned_abs() as usize - 1] += i64::from(x.signum());
    }
    v
}

impl Abelianization {
    pub fn new(p: &Presentation) -> Self {
        let n = p.generator_count();
        let mut m: Vec<Vec<i64>> = p.relators.iter().map(|r| exponent_vector(r, n)).collect();
        let mut rows = Vec::new();
        let mut top = 0;
        for col in 0..n {
            // Euclid on column `col` among rows top.. until one nonzero entry remains.
            loop {
                let nz: Vec<usize> = (top..m.len()).filter(|&i| m[i][col] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let piv = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
                for &i in &nz {
                    if i != piv {
                        let q = m[i][col] / m[piv][col];
                        let prow = m[piv].clone();
                        for (a, b) in m[i].iter_mut().zip(&prow) {
                            *a -= q * b;
                        }
                    }
                }
            }
            let Some(i) = (top..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(top, i);
            if m[top][col] < 0 {
                m[top].iter_mut().for_each(|a| *a = -*a);
            }
            top += 1;
        }
        for row in m.iter().take(top) {
            let col = row.iter().position(|&a| a != 0).unwrap();
            rows.push((col, row.clone()));
        }
        // Reduce entries above each pivot.
        for j in 0..rows.len() {
            let (col, prow) = rows[j].clone();
            for row in rows.iter_mut().take(j) {
                let q = row.1[col].div_euclid(prow[col]);
                for (a, b) in row.1.iter_mut().zip(&prow) {
                    *a -= q * b;
                }
            }
        }
        Abelianization { n, rows }
    }

    /// Unique representative of the class of `v`.
    pub fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (col, row) in &self.rows {
            let q = v[*col].div_euclid(row[*col]);
            if q != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= q * b;
                }
            }
        }
        v
    }

    /// Canonical image of a word.
    pub fn image(&self, w: &Word) -> Vec<i64> {
        self.reduce(exponent_vector(w, self.n))
    }

    /// Rank of the free part.
    pub fn free_rank(&self) -> usize {
        self.n - self.rows.len()
    }
}
