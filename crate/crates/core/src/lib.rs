//! Small-cancellation toolkit.
//!
//! Decides the classical small-cancellation conditions `C(n)`, `C'(1/n)` and
//! `T(q)` for finite presentations, builds finite balls of Cayley complexes,
//! and checks the Cohen–Lyndon machinery on them: the structure graph of
//! relator cycles and untethered trees, its nerve, the Kleene–Brouwer style
//! ordering of the cover, contractibility of prefix intersections, and free
//! independence of conjugated relators via Stallings folding.

pub mod cayley;
pub mod cohenlyndon;
pub mod conditions;
pub mod diagram;
pub mod error;
pub mod ordering;
pub mod presentation;
pub mod report;
pub mod structure;

pub use error::{Error, ParseError, Result};
pub use presentation::{parse_presentation, symmetrize, Letter, Presentation, SymmetrizedSet, Word};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/presentations.md")]
    pub struct Presentations;
    #[doc = include_str!("../../../book/src/diagrams.md")]
    pub struct Diagrams;
    #[doc = include_str!("../../../book/src/cayley.md")]
    pub struct Cayley;
    #[doc = include_str!("../../../book/src/structure.md")]
    pub struct Structure;
    #[doc = include_str!("../../../book/src/ordering.md")]
    pub struct Ordering;
    #[doc = include_str!("../../../book/src/cohen-lyndon.md")]
    pub struct CohenLyndon;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
