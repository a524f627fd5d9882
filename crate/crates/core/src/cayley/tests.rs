use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::presentation::parse_presentation;

fn pres(t: &str) -> Presentation {
    parse_presentation(t).unwrap()
}

fn spheres(b: &Ball) -> Vec<usize> {
    let mut out = vec![0; b.radius + 1];
    for v in 0..b.vertex_count() {
        out[b.depth(v)] += 1;
    }
    out
}

/// Power series of `num / den` to `n` terms; `den[0]` must be 1.
fn series(num: &[i64], den: &[i64], n: usize) -> Vec<usize> {
    let mut out: Vec<i64> = Vec::with_capacity(n);
    for k in 0..n {
        let mut c = num.get(k).copied().unwrap_or(0);
        for j in 1..=k {
            c -= den.get(j).copied().unwrap_or(0) * out[k - j];
        }
        out.push(c);
    }
    out.into_iter().map(|c| c as usize).collect()
}

/// Lattice points of `Z^2` within taxicab distance `r`.
fn lattice(r: i64) -> BTreeSet<(i64, i64)> {
    let mut s = BTreeSet::new();
    for x in -r..=r {
        for y in -r..=r {
            if x.abs() + y.abs() <= r {
                s.insert((x, y));
            }
        }
    }
    s
}

fn squares(pts: &BTreeSet<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.iter()
        .copied()
        .filter(|&(x, y)| [(x + 1, y), (x, y + 1), (x + 1, y + 1)].iter().all(|q| pts.contains(q)))
        .collect()
}

#[test]
fn z2_ball_matches_lattice() {
    let p = pres("gens: a b; rels: abAB");
    for r in 0..=4usize {
        let b = build_ball(&p, r, &Budget::default()).unwrap();
        let pts = lattice(r as i64);
        assert_eq!(b.vertex_count(), pts.len(), "radius {r}");
        assert_eq!(b.vertex_count(), 2 * r * r + 2 * r + 1);
        let coords: BTreeSet<(i64, i64)> = (0..b.vertex_count())
            .map(|v| {
                let e = exponent_vector(b.word(v), 2);
                (e[0], e[1])
            })
            .collect();
        assert_eq!(coords, pts);
        let lattice_edges = pts
            .iter()
            .map(|&(x, y)| usize::from(pts.contains(&(x + 1, y))) + usize::from(pts.contains(&(x, y + 1))))
            .sum::<usize>();
        assert_eq!(b.edges().len(), lattice_edges);
        let sq = squares(&pts);
        assert_eq!(b.cells.len(), sq.len());
        let saturated = |&(x, y): &(i64, i64)| {
            x.abs() + y.abs() < r as i64
                && [(x, y), (x - 1, y), (x, y - 1), (x - 1, y - 1)].iter().all(|c| sq.contains(c))
        };
        let interior = sq
            .iter()
            .filter(|&&(x, y)| [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)].iter().all(saturated))
            .count();
        let got = (0..b.cells.len()).filter(|&c| b.cell_is_interior(c)).count();
        assert_eq!(got, interior, "radius {r}");
    }
}

#[test]
fn z2_radius_two_has_thirteen_vertices_and_four_cells() {
    let b = build_ball(&pres("gens: a b; rels: abAB"), 2, &Budget::default()).unwrap();
    assert_eq!(b.vertex_count(), 13);
    assert_eq!(b.cells.len(), 4);
    assert!(matches!(b.engine, Engine::Enumeration { .. }));
}

#[test]
fn free_group_radius_one() {
    let b = build_ball(&pres("gens: a b; rels:"), 1, &Budget::default()).unwrap();
    assert_eq!(b.vertex_count(), 5);
    assert!(b.cells.is_empty());
    assert_eq!(b.components.len(), 1);
    assert_eq!(b.components[0].edges.len(), 4);
}

#[test]
fn genus_two_uses_dehn() {
    let p = pres("gens: a b c d; rels: abABcdCD");
    let b = build_ball(&p, 3, &Budget::default()).unwrap();
    assert_eq!(b.engine, Engine::Dehn);
    // Growth of the genus-2 surface group: 1 + 8t + 56t^2 + 392t^3 + ...
    assert_eq!(spheres(&b), vec![1, 8, 56, 392]);
    assert_eq!(b.distinctness.enumeration, 0);
}

#[test]
fn raag_growth_series() {
    // Right-angled Artin groups grow as 1 / C(-2t / (1 + t)) for the clique
    // polynomial C of the defining graph.
    let cases: [(&str, &[i64], &[i64]); 3] = [
        ("gens: a b c; rels: abAB", &[1, 2, 1], &[1, -4, -1]),
        ("gens: a b c; rels: abAB bcBC", &[1, 2, 1], &[1, -4, 3]),
        ("gens: a b c d; rels: abAB bcBC cdCD", &[1, 2, 1], &[1, -6, 5]),
    ];
    for (text, num, den) in cases {
        let b = build_ball(&pres(text), 4, &Budget::default()).unwrap();
        assert_eq!(spheres(&b), series(num, den, 5), "{text}");
    }
}

#[test]
fn free_product_growth() {
    // <a, b | aaa> is Z/3 * Z; 1/S = 1/S1 + 1/S2 - 1 with S1 = 1 + 2t and
    // S2 = (1 + t)/(1 - t) gives S = (1 + t)(1 + 2t) / (1 - t - 4t^2).
    let b = build_ball(&pres("gens: a b; rels: aaa"), 4, &Budget::default()).unwrap();
    let expect = series(&[1, 3, 2], &[1, -1, -4], 5);
    assert_eq!(spheres(&b), expect);
    assert_eq!(b.vertex_count(), expect.iter().sum::<usize>());
    let b_edges = b.edges().iter().filter(|e| e.1 == 2).count();
    let mut covered = 0;
    for comp in &b.components {
        assert!(comp.edges.iter().all(|e| e.1 == 2));
        assert_eq!(comp.edges.len() + 1, comp.vertices.len());
        covered += comp.edges.len();
    }
    assert_eq!(covered, b_edges);
}

#[test]
fn edges_are_closed_under_inversion() {
    for text in ["gens: a b; rels: abAB", "gens: a b c; rels: abc cba", "gens: a b; rels: aaa"] {
        let b = build_ball(&pres(text), 3, &Budget::default()).unwrap();
        for (u, x, v) in b.directed_edges() {
            assert_eq!(b.neighbor(v, -x), Some(u));
        }
    }
}

#[test]
fn relator_read_from_a_cell_base_closes() {
    let b = build_ball(&pres("gens: a b c; rels: abc cba"), 3, &Budget::default()).unwrap();
    for c in &b.cells {
        let r = &b.presentation.relators[c.relator];
        assert_eq!(b.trace_from(c.base, r), Some(c.base));
        assert_eq!(c.vertices.len(), r.len());
    }
}

#[test]
fn word_equal_commutator_words() {
    let p = pres("gens: a b; rels: abAB");
    let (w1, w2) = (p.parse_word("abab").unwrap(), p.parse_word("aabb").unwrap());
    match word_equal(&p, &w1, &w2, &Budget::default()) {
        EqualityVerdict::Equal(d) => assert_eq!(d.boundary_word(), w1.concat(&w2.inverse())),
        other => panic!("{other:?}"),
    }
}

#[test]
fn relator_equals_identity_with_one_face() {
    let p = pres("gens: a b; rels: abAB");
    let r = p.relators[0].clone();
    match word_equal(&p, &r, &Word::empty(), &Budget::default()) {
        EqualityVerdict::Equal(d) => assert_eq!(d.area(), 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn free_generators_differ_by_abelianization() {
    let p = pres("gens: a b; rels:");
    let v = word_equal(&p, &Word::parse("a").unwrap(), &Word::parse("b").unwrap(), &Budget::default());
    assert!(matches!(
        v,
        EqualityVerdict::Distinct(DistinctCertificate::Abelianization { .. })
    ));
}

#[test]
fn genus_two_commutator_differs_by_dehn() {
    let p = pres("gens: a b c d; rels: abABcdCD");
    let v = word_equal(&p, &p.parse_word("ab").unwrap(), &p.parse_word("ba").unwrap(), &Budget::default());
    assert!(matches!(v, EqualityVerdict::Distinct(DistinctCertificate::Dehn { .. })));
    let v = word_equal(&p, &p.parse_word("abAB").unwrap(), &p.parse_word("dcDC").unwrap(), &Budget::default());
    assert!(v.is_equal());
}

#[test]
fn word_budget_gives_unknown() {
    let p = pres("gens: a b; rels: abAB");
    let budget = Budget {
        max_word_len: 4,
        ..Budget::default()
    };
    let w = p.parse_word("ababab").unwrap();
    assert!(matches!(word_equal(&p, &w, &w, &budget), EqualityVerdict::Unknown(_)));
}

#[test]
fn budget_parses_keys() {
    let b = Budget::parse("area=5, nodes=100,lookahead=2").unwrap();
    assert_eq!((b.max_area, b.max_nodes, b.lookahead), (5, 100, Some(2)));
    assert_eq!(b.area_divisor, Budget::default().area_divisor);
    assert!(Budget::parse("depth=3").is_err());
    assert!(Budget::parse("area").is_err());
}

#[test]
fn abelianization_ranks() {
    assert_eq!(Abelianization::new(&pres("gens: a b; rels: abAB")).free_rank(), 2);
    let z3 = Abelianization::new(&pres("gens: a b; rels: aaa"));
    assert_eq!(z3.free_rank(), 1);
    assert_eq!(z3.image(&Word::parse("aaa").unwrap()), vec![0, 0]);
    assert_ne!(z3.image(&Word::parse("a").unwrap()), vec![0, 0]);
}

proptest! {
    #[test]
    fn dehn_kills_conjugated_relators(t in proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2), Just(3), Just(-3), Just(4), Just(-4)], 0..6)) {
        let p = pres("gens: a b c d; rels: abABcdCD");
        let s = symmetrize(&p);
        let t = Word(t);
        let w = t.concat(&p.relators[0]).concat(&t.inverse()).free_reduce();
        prop_assert!(dehn_reduce(&s, &w).trivial());
    }

    #[test]
    fn abelian_image_ignores_commutators(x in "[abAB]{0,8}", y in "[abAB]{0,8}") {
        let p = pres("gens: a b; rels: aaa");
        let ab = Abelianization::new(&p);
        let (x, y) = (Word::parse(&x).unwrap(), Word::parse(&y).unwrap());
        prop_assert_eq!(ab.image(&x.concat(&y)), ab.image(&y.concat(&x)));
    }
}
