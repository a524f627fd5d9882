//! Disc diagrams over a presentation: construction, reduction, shells,
//! ladders, the Greendlinger trichotomy, distributed Euler characteristic and
//! exhaustive enumeration.

mod enumerate;
mod map;
mod reduce;
mod shells;

pub use enumerate::{
    enumerate_by_area, enumerate_with_boundary, find_diagram_with_boundary, glue_cell, EnumerationBudget,
};
pub use map::{CellView, Diagram, DiagramView, EdgeView, Face};
pub use reduce::{cancel_pair, cell_has_mirror, find_cancellable_pair, is_mirror_across, is_reduced, reduce, CancellablePair};
pub use shells::{
    classify_greendlinger, corner_shell, counted_features, euler_charge, is_ladder, ladder_sequence, shell_of,
    shells, ChargeReport, GreendlingerClause, GreendlingerEvidence, LadderElement, ShellRecord,
};

/// Default cap on inner pieces for `C(6)` shells.
pub const DEFAULT_SHELL_CAP: usize = 3;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::Regime;
    use crate::presentation::{parse_presentation, symmetrize, Presentation, Word};
    use num_rational::Ratio;

    fn pres(t: &str) -> Presentation {
        parse_presentation(t).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Glue along the first outer arc reading `prefix`.
    fn glue_on(d: &Diagram, word: &str, k: usize) -> Diagram {
        let word = w(word);
        let outer = d.outer_darts();
        let b = outer.len();
        let s = (0..b)
            .find(|&s| (0..k).all(|i| d.dart_label(outer[(s + i) % b]) == word.0[i]))
            .expect("no matching arc");
        glue_cell(d, s, k, &word).unwrap()
    }

    fn z2_block() -> Diagram {
        let s = symmetrize(&pres("gens: a b; rels: abAB"));
        let found = enumerate_with_boundary(&s, &w("aabbAABB"), EnumerationBudget::area(4)).unwrap();
        assert_eq!(found.len(), 1);
        found.into_iter().next().unwrap()
    }

    #[test]
    fn single_cell_basics() {
        let d = Diagram::single_cell(&w("abAB"));
        assert_eq!(d.area(), 1);
        assert_eq!(d.boundary_word(), w("abAB"));
        assert!(is_reduced(&d).0);
        assert!(d.interior_vertices().is_empty());
    }

    #[test]
    fn mirror_pair_cancels_to_a_tree() {
        let d = Diagram::single_cell(&w("abAB"));
        // Across its `a` edge the mirror cell reads AbaB from the shared edge.
        let m = glue_on(&d, "AbaB", 1);
        assert_eq!(m.area(), 2);
        let pair = find_cancellable_pair(&m);
        assert!(pair.is_some(), "mirror glue should be cancellable");
        let before = m.boundary_word();
        let t = cancel_pair(&m, pair.unwrap()).unwrap();
        assert_eq!(t.area(), 0);
        assert_eq!(t.boundary_word(), before);
        assert!(t.boundary_word().free_reduce().is_empty());
    }

    #[test]
    fn cancel_on_reduced_fails() {
        let d = Diagram::single_cell(&w("abAB"));
        let bogus = CancellablePair { first: 0, second: 0, dart: 0 };
        assert!(matches!(cancel_pair(&d, bogus), Err(crate::Error::NotCancellable(_))));
    }

    #[test]
    fn three_faces_one_pair() {
        let d = Diagram::single_cell(&w("abAB"));
        let d = glue_on(&d, "AbaB", 1);
        // A third square on a free side, not mirroring its neighbour.
        let d = ["BabA", "BAba"]
            .iter()
            .map(|x| glue_on(&d, x, 1))
            .find(|g| !cell_has_mirror(g, 2))
            .unwrap();
        assert_eq!(d.area(), 3);
        let r = reduce(&d).unwrap();
        assert_eq!(r.area(), 1);
        assert_eq!(r.boundary_word(), d.boundary_word());
    }

    #[test]
    fn genus_two_pieces_are_reduced() {
        let s = symmetrize(&pres("gens: a b c d; rels: abABcdCD"));
        let found = enumerate_by_area(&s, EnumerationBudget::area(2)).unwrap();
        let twos: Vec<_> = found.iter().filter(|d| d.area() == 2).collect();
        assert!(!twos.is_empty());
        for d in twos {
            assert!(is_reduced(d).0);
            let ev = classify_greendlinger(d, Regime::C6, DEFAULT_SHELL_CAP).unwrap();
            assert_eq!(ev.clause, GreendlingerClause::Ladder);
        }
    }

    #[test]
    fn z2_block_shells_and_charge() {
        let d = z2_block();
        assert_eq!(d.area(), 4);
        assert_eq!(d.vertex_count(), 9);
        let sh = shells(&d, 2);
        assert_eq!(sh.len(), 4);
        assert!(sh.iter().all(|s| s.inner_piece_count == 2 && s.outerpath.len() == 2));
        let ev = classify_greendlinger(&d, Regime::C4T4, 2).unwrap();
        assert_eq!(ev.clause, GreendlingerClause::ManyShellsOrSpurs);
        assert!(ev.count >= 3);
        let ch = euler_charge(&d, Regime::C4T4).unwrap();
        assert_eq!(ch.exact_total, Ratio::from_integer(1));
    }

    #[test]
    fn single_square_charge() {
        let d = Diagram::single_cell(&w("abAB"));
        let ch = euler_charge(&d, Regime::C4T4).unwrap();
        assert_eq!(ch.charges.len(), 4);
        assert!(ch.charges.values().all(|q| q == "1/4"));
        assert_eq!(ch.total, "1");
    }

    #[test]
    fn single_face_is_degenerate_shell() {
        let d = Diagram::single_cell(&w("abAB"));
        let sh = shells(&d, 3);
        assert_eq!(sh.len(), 1);
        assert!(sh[0].degenerate);
        assert_eq!(sh[0].inner_piece_count, 0);
        let ev = classify_greendlinger(&d, Regime::C6, 3).unwrap();
        assert_eq!(ev.clause, GreendlingerClause::SingleCell);
    }

    #[test]
    fn triangle_flower_charge() {
        let s = symmetrize(&pres("gens: a b c; rels: abc cba"));
        let found = enumerate_by_area(&s, EnumerationBudget::area(6)).unwrap();
        let flowers: Vec<_> = found.iter().filter(|d| !d.interior_vertices().is_empty()).collect();
        assert!(!flowers.is_empty());
        for d in flowers {
            assert_eq!(d.area(), 6);
            let v = d.interior_vertices()[0];
            assert_eq!(d.degree(v), 6);
            let ch = euler_charge(d, Regime::C3T6).unwrap();
            assert_eq!(ch.exact_total, Ratio::from_integer(1));
        }
    }

    #[test]
    fn boundary_examples() {
        let g2 = pres("gens: a b c d; rels: abABcdCD");
        let s = symmetrize(&g2);
        let r = w("abABcdCD");
        let one = enumerate_with_boundary(&s, &r, EnumerationBudget::area(1)).unwrap();
        assert!(one.iter().any(|d| d.area() == 1));
        let conj = r.concat(&w("a")).concat(&r).concat(&w("A")).free_reduce();
        let two = enumerate_with_boundary(&s, &conj, EnumerationBudget::area(2)).unwrap();
        assert!(two.iter().any(|d| d.area() == 2));
        for d in &two {
            assert_eq!(d.boundary_word(), conj);
        }
        let z2 = symmetrize(&pres("gens: a b; rels: abAB"));
        assert!(enumerate_with_boundary(&z2, &w("ab"), EnumerationBudget::area(4)).unwrap().is_empty());
    }

    #[test]
    fn empty_boundary_is_a_point() {
        let s = symmetrize(&pres("gens: a b; rels: abAB"));
        let d = enumerate_with_boundary(&s, &Word::empty(), EnumerationBudget::area(2)).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].vertex_count(), 1);
        let ev = classify_greendlinger(&d[0], Regime::C4T4, 2).unwrap();
        assert_eq!(ev.clause, GreendlingerClause::Trivial);
    }

    #[test]
    fn free_tree_boundary() {
        let s = symmetrize(&pres("gens: a b; rels: abAB"));
        let d = enumerate_with_boundary(&s, &w("abBA"), EnumerationBudget::area(0)).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].area(), 0);
        assert_eq!(d[0].spurs().len(), 2);
        assert!(is_ladder(&d[0]));
    }

    #[test]
    fn canonical_code_ignores_rotation() {
        let a = Diagram::single_cell(&w("abAB"));
        let b = Diagram::single_cell(&w("bABa"));
        assert_eq!(a.canonical_code(), b.canonical_code());
        let c = Diagram::single_cell(&w("baBA"));
        assert_ne!(a.canonical_code(), c.canonical_code());
    }
    /// Subwords of the arcs two cells share in reduced area-2 diagrams.
    fn shared_arc_words(s: &crate::presentation::SymmetrizedSet) -> std::collections::BTreeSet<Word> {
        let mut out = std::collections::BTreeSet::new();
        for d in enumerate_by_area(s, EnumerationBudget::area(2)).unwrap() {
            if d.area() != 2 {
                continue;
            }
            for (f, g) in [(0, 1), (1, 0)] {
                let c = d.cell_darts(f);
                let n = c.len();
                let shared: Vec<bool> = c.iter().map(|&x| d.face_of(x ^ 1) == Face::Cell(g)).collect();
                // Start just after a non-shared dart so the arc is contiguous.
                let start = (0..n).find(|&i| !shared[i] && shared[(i + 1) % n]).unwrap();
                let arc: Vec<_> = (1..=n)
                    .map(|j| (start + j) % n)
                    .take_while(|&i| shared[i])
                    .map(|i| d.dart_label(c[i]))
                    .collect();
                for a in 0..arc.len() {
                    for b in a + 1..=arc.len() {
                        out.insert(Word(arc[a..b].to_vec()));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn pieces_are_shared_arcs_of_reduced_pairs() {
        for text in [
            "gens: a b; rels: abAB",
            "gens: a b c d; rels: abABcdCD",
            "gens: a b c; rels: abcABC",
            "gens: a b; rels: aabbAb",
            "gens: a b t; rels: taaaTbbbbbbb",
            "gens: a b c; rels: abc cba",
            "gens: a b c; rels: abc acb",
            "gens: a b c; rels: abAB bcBC",
        ] {
            let s = symmetrize(&pres(text));
            let combinatorial: std::collections::BTreeSet<Word> =
                crate::conditions::compute_pieces(&s).iter().map(|p| p.word).collect();
            assert_eq!(shared_arc_words(&s), combinatorial, "{text}");
        }
    }
}
