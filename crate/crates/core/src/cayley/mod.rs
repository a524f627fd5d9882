//! Finite balls in Cayley complexes and a budgeted word-problem oracle.
//!
//! Two engines decide which words name the same vertex. When `C'(1/6)` holds,
//! Dehn's algorithm is exact. Otherwise a truncated coset enumeration merges
//! vertices; its merges are always consequences of the relators, but a pair it
//! leaves apart is only distinct up to the enumeration's depth cap. Words with
//! different abelianizations are distinct in every case, and the ball records
//! which argument separated each pair.

mod abelian;
mod ball;
mod dehn;
mod enumeration;

use serde::{Deserialize, Serialize};

pub use abelian::{exponent_vector, Abelianization};
pub use ball::{build_ball, relator_translates, untethered_components, Ball, CellTranslate, Distinctness, Engine, UntetheredComponent};
pub use dehn::{dehn_reduce, DehnRun};
pub use enumeration::TruncatedEnumeration;

use crate::conditions::Analysis;
use crate::diagram::{find_diagram_with_boundary, Diagram, DiagramView, EnumerationBudget};
use crate::error::{Error, Result};
use crate::presentation::{symmetrize, Presentation, Word};

/// Environment variable holding the default [`Budget`], e.g.
/// `area=12,divisor=8,len=64,nodes=2000000,lookahead=3`.
pub const BUDGET_ENV: &str = "SMALLCANCEL_BUDGET";

/// Resource limits for word-problem decisions. Serialized with every ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Hard cap on the area of searched diagrams.
    pub max_area: usize,
    /// Diagram searches for a word `w` stop at area `|w|^2 / area_divisor`
    /// (rounded up), or `max_area` if smaller.
    pub area_divisor: usize,
    /// Longest word `word_equal` accepts.
    pub max_word_len: usize,
    /// Cap on search nodes and on cosets defined.
    pub max_nodes: usize,
    /// Extra depth past the radius for the coset enumeration; `None` uses
    /// half the longest relator plus one.
    pub lookahead: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_area: 12,
            area_divisor: 8,
            max_word_len: 64,
            max_nodes: 2_000_000,
            lookahead: None,
        }
    }
}

impl Budget {
    /// Parses `key=value` pairs separated by commas. Missing keys keep their
    /// defaults.
    pub fn parse(text: &str) -> Result<Budget> {
        let mut b = Budget::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("budget entry `{item}` is not key=value")))?;
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("budget value `{v}` is not a number")))?;
            match k.trim() {
                "area" => b.max_area = n,
                "divisor" => b.area_divisor = n.max(1),
                "len" => b.max_word_len = n,
                "nodes" => b.max_nodes = n,
                "lookahead" => b.lookahead = Some(n),
                other => return Err(Error::Invalid(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(b)
    }

    /// The budget from [`BUDGET_ENV`], or the default when unset.
    pub fn from_env() -> Result<Budget> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => Budget::parse(&s),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn area_for(&self, len: usize) -> usize {
        (len * len).div_ceil(self.area_divisor).min(self.max_area)
    }

    pub fn lookahead_for(&self, p: &Presentation) -> usize {
        self.lookahead.unwrap_or(p.max_relator_len() / 2 + 1)
    }
}

/// Why two words are known to differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistinctCertificate {
    /// Their quotient has nonzero image in the abelianization.
    Abelianization { image: Vec<i64> },
    /// Dehn's algorithm under `C'(1/6)` leaves a nonempty residue.
    Dehn { residue: String },
    /// No reduced diagram up to `max_area` exists; a budget policy.
    DiagramSearch { max_area: usize, nodes: usize },
}

/// Result of [`word_equal`].
#[derive(Clone, Debug)]
pub enum EqualityVerdict {
    /// A reduced diagram whose boundary reads `w1 w2^-1`.
    Equal(Diagram),
    Distinct(DistinctCertificate),
    Unknown(String),
}

impl EqualityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityVerdict::Equal(_))
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, EqualityVerdict::Distinct(_))
    }

    pub fn view(&self, p: &Presentation) -> VerdictView {
        match self {
            EqualityVerdict::Equal(d) => VerdictView::Equal { diagram: d.to_view(p) },
            EqualityVerdict::Distinct(c) => VerdictView::Distinct { certificate: c.clone() },
            EqualityVerdict::Unknown(r) => VerdictView::Unknown { reason: r.clone() },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VerdictView {
    Equal { diagram: DiagramView },
    Distinct { certificate: DistinctCertificate },
    Unknown { reason: String },
}

/// Decides whether `w1` and `w2` are equal in the group, one-sidedly: `Equal`
/// and `Distinct` verdicts are never wrong at the stated certificate, and
/// running out of budget gives `Unknown`.
pub fn word_equal(p: &Presentation, w1: &Word, w2: &Word, budget: &Budget) -> EqualityVerdict {
    let w = w1.concat(&w2.inverse());
    if w.len() > budget.max_word_len {
        return EqualityVerdict::Unknown(format!("word length {} exceeds {}", w.len(), budget.max_word_len));
    }
    let reduced = w.free_reduce();
    let s = symmetrize(p);
    let search = |max_area: usize| {
        find_diagram_with_boundary(
            &s,
            &w,
            EnumerationBudget {
                max_area,
                max_nodes: budget.max_nodes,
            },
        )
    };
    if !reduced.is_empty() {
        let image = Abelianization::new(p).image(&reduced);
        if image.iter().any(|&x| x != 0) {
            return EqualityVerdict::Distinct(DistinctCertificate::Abelianization { image });
        }
    }
    if Analysis::new(p).check_c_prime(6).holds {
        let run = dehn_reduce(&s, &reduced);
        if !run.trivial() {
            return EqualityVerdict::Distinct(DistinctCertificate::Dehn {
                residue: p.format_word(&run.residue),
            });
        }
        return match search(run.steps) {
            Ok((Some(d), _)) => EqualityVerdict::Equal(d),
            Ok((None, _)) => EqualityVerdict::Unknown(format!(
                "Dehn's algorithm took {} steps but no diagram of that area was found",
                run.steps
            )),
            Err(e) => EqualityVerdict::Unknown(e.to_string()),
        };
    }
    let area = budget.area_for(reduced.len());
    match search(area) {
        Ok((Some(d), _)) => EqualityVerdict::Equal(d),
        Ok((None, nodes)) => EqualityVerdict::Distinct(DistinctCertificate::DiagramSearch { max_area: area, nodes }),
        Err(e) => EqualityVerdict::Unknown(e.to_string()),
    }
}

#[cfg(test)]
mod tests;
