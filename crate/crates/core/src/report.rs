//! Run configuration, the end-to-end verification pipeline and deterministic
//! JSON output.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{build_ball, Ball, Budget};
use crate::cohenlyndon::{
    basis_elements, extract_transversals, sample_basis_products, sample_normal_closure, stallings_fold,
    verify_free_independence, CohenLyndonBasis, Transversal,
};
use crate::conditions::{
    classify, compute_pieces, greedy_piece_decomposition, min_piece_decomposition, Analysis, Condition, LinkGraph,
    Regime,
};
use crate::diagram::{
    classify_greendlinger, corner_shell, enumerate_by_area, euler_charge, Diagram, EnumerationBudget,
    GreendlingerClause, DEFAULT_SHELL_CAP,
};
use crate::error::{Error, Result};
use crate::ordering::{
    ordering_for_regime, verify_distance_monotone, verify_union_contractibility, OrderingMap, TieBreak,
    DEFAULT_DIM_CAP,
};
use crate::presentation::{symmetrize, Presentation};
use crate::structure::{
    build_structure_graph, check_intersections, find_triforce, helly_suite, StructureGraph,
};

/// Everything that determines a run. Echoed into every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub presentation: String,
    /// Forces a regime instead of the strongest one detected.
    pub regime: Option<Regime>,
    pub radius: usize,
    pub budget: Budget,
    pub tie_break: TieBreak,
    /// Extra random tie-break policies tried by `verify`, seeded from `seed`.
    pub seeds: u64,
    pub seed: u64,
    /// Area bound for the diagram suites in `verify`.
    pub diagram_area: usize,
    /// Largest subset size in the Helly suite.
    pub helly_max: usize,
    /// Random products checked against the folded basis.
    pub samples: usize,
    pub emit: String,
    /// Record wall-clock time per check. Breaks byte-identical output.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            presentation: String::new(),
            regime: None,
            radius: 3,
            budget: Budget::default(),
            tie_break: TieBreak::Least,
            seeds: 10,
            seed: 0,
            diagram_area: 4,
            helly_max: 5,
            samples: 100,
            emit: "json".into(),
            timings: false,
        }
    }
}

/// Defaults a presentation file may carry in comment lines of the form
/// `# radius: 6`, `# budget: lookahead=1` and `# diagram-area: 3`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Directives {
    pub radius: Option<usize>,
    pub budget: Option<String>,
    pub diagram_area: Option<usize>,
}

fn number(key: &str, value: &str) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad {key} directive `{}`", value.trim())))
}

pub fn read_directives(text: &str) -> Result<Directives> {
    let mut d = Directives::default();
    for line in text.lines() {
        let Some(body) = line.trim().strip_prefix('#') else { continue };
        let Some((key, value)) = body.split_once(':') else { continue };
        match key.trim() {
            "radius" => d.radius = Some(number("radius", value)?),
            "diagram-area" => d.diagram_area = Some(number("diagram-area", value)?),
            "budget" => d.budget = Some(value.trim().to_string()),
            _ => {}
        }
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// A budget ran out before the check could decide.
    Inconclusive,
    /// A failure the theory predicts, such as full Helly in `C(3)-T(6)`.
    Expected,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub presentation: String,
    pub regimes: Vec<Regime>,
    pub regime: Option<Regime>,
    pub checks: Vec<CheckResult>,
    pub summary: BTreeMap<String, usize>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// No `FAIL`, and no `INCONCLUSIVE` either when `strict`.
    pub fn passed(&self, strict: bool) -> bool {
        self.checks.iter().all(|c| match c.verdict {
            Verdict::Fail => false,
            Verdict::Inconclusive => !strict,
            _ => true,
        })
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn condition_for(r: Regime) -> Condition {
    match r {
        Regime::CPrime6 => Condition::CPrime(6),
        Regime::C6 => Condition::C6,
        Regime::C4T4 => Condition::C4T4,
        Regime::C3T6 => Condition::C3T6,
    }
}

struct Recorder {
    timings: bool,
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let (verdict, detail, witness) = f();
        self.checks.push(CheckResult {
            name: name.into(),
            verdict,
            detail,
            witness,
            millis: self.timings.then(|| start.elapsed().as_millis() as u64),
        });
    }

    fn skip(&mut self, names: &[&str], reason: &str) {
        for n in names {
            self.run(n, || (Verdict::Inconclusive, json!({ "reason": reason }), None));
        }
    }
}

/// Verdict, detail and witness of one check.
type Outcome = (Verdict, Value, Option<Value>);

fn from_error(e: &Error) -> Outcome {
    let verdict = match e {
        Error::Budget(_) | Error::Inconclusive(_) => Verdict::Inconclusive,
        _ => Verdict::Fail,
    };
    let w = (verdict == Verdict::Fail).then(|| json!({ "error": e.to_string() }));
    (verdict, json!({ "error": e.to_string() }), w)
}

fn pass(detail: Value) -> Outcome {
    (Verdict::Pass, detail, None)
}

fn fail(detail: Value, witness: Value) -> Outcome {
    (Verdict::Fail, detail, Some(witness))
}

/// Greedy and dynamic-programming piece factorizations agree on every
/// symmetrized relator.
fn check_pieces(p: &Presentation) -> Outcome {
    let s = symmetrize(p);
    let pieces = compute_pieces(&s);
    for w in s.words() {
        let (g, d) = (
            greedy_piece_decomposition(w, &pieces).count(),
            min_piece_decomposition(w, &pieces).count(),
        );
        if g != d {
            return fail(
                json!({ "words": s.words().len() }),
                json!({ "word": p.format_word(w), "greedy": g, "minimal": d }),
            );
        }
    }
    pass(json!({ "words": s.words().len(), "pieces": pieces.len() }))
}

/// Interior valences of enumerated diagrams never contradict the link-graph
/// verdicts for `T(4)`, `T(5)` and `T(6)`.
fn check_link_graph(p: &Presentation, diagrams: &[Diagram]) -> Outcome {
    let analysis = Analysis::new(p);
    let mut verdicts = BTreeMap::new();
    for q in [4usize, 5, 6] {
        let holds = analysis.check_t(q).holds;
        verdicts.insert(format!("T({q})"), holds);
        if !holds {
            continue;
        }
        for d in diagrams {
            if let Some(v) = d.interior_vertices().into_iter().find(|&v| (3..q).contains(&d.degree(v))) {
                return fail(
                    json!({ "link_verdicts": verdicts }),
                    json!({ "q": q, "boundary": p.format_word(&d.boundary_word()), "area": d.area(), "valence": d.degree(v) }),
                );
            }
        }
    }
    let lengths: Vec<usize> = LinkGraph::new(p).cycle_lengths(3, 5).into_iter().collect();
    let mut valences: BTreeMap<usize, usize> = BTreeMap::new();
    for d in diagrams {
        for v in d.interior_vertices() {
            *valences.entry(d.degree(v)).or_default() += 1;
        }
    }
    pass(json!({ "link_verdicts": verdicts, "short_link_cycles": lengths, "interior_valences": valences }))
}

fn check_greendlinger(p: &Presentation, diagrams: &[Diagram], regime: Regime) -> Outcome {
    let mut clauses: BTreeMap<String, usize> = BTreeMap::new();
    for d in diagrams {
        match classify_greendlinger(d, regime, DEFAULT_SHELL_CAP) {
            Ok(ev) => {
                let key = match ev.clause {
                    GreendlingerClause::Trivial => "trivial",
                    GreendlingerClause::SingleCell => "single_cell",
                    GreendlingerClause::Ladder => "ladder",
                    GreendlingerClause::ManyShellsOrSpurs => "many_shells_or_spurs",
                };
                *clauses.entry(key.into()).or_default() += 1;
            }
            Err(e) => {
                return fail(
                    json!({ "diagrams": diagrams.len() }),
                    json!({ "boundary": p.format_word(&d.boundary_word()), "area": d.area(), "error": e.to_string() }),
                )
            }
        }
    }
    pass(json!({ "diagrams": diagrams.len(), "clauses": clauses }))
}

fn check_charge(p: &Presentation, diagrams: &[Diagram], regime: Regime) -> Outcome {
    let mut checked = 0;
    for d in diagrams.iter().filter(|d| d.spurs().is_empty()) {
        match euler_charge(d, regime) {
            Ok(c) if c.exact_total == 1.into() => checked += 1,
            Ok(c) => {
                return fail(
                    json!({ "checked": checked }),
                    json!({ "boundary": p.format_word(&d.boundary_word()), "total": c.total, "charges": c.charges }),
                )
            }
            Err(e) => return from_error(&e),
        }
    }
    pass(json!({ "checked": checked }))
}

fn check_corners(p: &Presentation, diagrams: &[Diagram], regime: Regime) -> Outcome {
    if !matches!(regime, Regime::C4T4 | Regime::C3T6) {
        return pass(json!({ "applies": false }));
    }
    let mut checked = 0;
    for d in diagrams.iter().filter(|d| d.area() >= 2 && d.spurs().is_empty()) {
        match corner_shell(d, regime) {
            Ok(Some(_)) => checked += 1,
            Ok(None) => {
                return fail(
                    json!({ "checked": checked }),
                    json!({ "boundary": p.format_word(&d.boundary_word()), "area": d.area() }),
                )
            }
            Err(e) => return from_error(&e),
        }
    }
    pass(json!({ "applies": true, "checked": checked }))
}

fn check_structure_intersections(p: &Presentation, sg: &StructureGraph) -> Outcome {
    let pool = sg.interior_vertices();
    let summary = match check_intersections(sg, &pool) {
        Ok(s) => s,
        Err(e) => return from_error(&e),
    };
    let t5 = Analysis::new(p).check_t(5).holds;
    let detail = json!({ "pool": pool.len(), "summary": summary, "t5": t5 });
    if t5 {
        if let Some((&len, _)) = summary.arc_lengths.iter().find(|(&l, _)| l != 1) {
            return fail(detail, json!({ "arc_length": len }));
        }
    }
    pass(detail)
}

fn check_helly_suite(sg: &StructureGraph, regime: Regime, max: usize) -> Vec<(&'static str, Outcome)> {
    let pool = sg.interior_vertices();
    let mut out = Vec::new();
    match helly_suite(sg, &pool, regime, max) {
        Ok(s) => {
            let full = if s.full_failures > 0 {
                (
                    Verdict::Expected,
                    json!({ "failures": s.full_failures }),
                    Some(json!({ "set": s.first_full_failure })),
                )
            } else {
                pass(json!({ "failures": 0 }))
            };
            out.push(("helly", pass(json!({ "pool": pool.len(), "summary": s }))));
            out.push(("full-helly", full));
        }
        Err(e) => {
            out.push(("helly", from_error(&e)));
            out.push(("full-helly", from_error(&e)));
        }
    }
    let all: Vec<usize> = (0..sg.len()).collect();
    let tri = find_triforce(sg, &all);
    let triforce = match (&tri, regime) {
        (None, _) => pass(json!({ "found": false })),
        (Some(t), Regime::C3T6) => (Verdict::Expected, json!({ "found": true }), Some(json!({ "set": t }))),
        (Some(t), _) => fail(json!({ "found": true }), json!({ "set": t })),
    };
    out.push(("triforce", triforce));
    out
}

fn policies(cfg: &RunConfig) -> Vec<TieBreak> {
    std::iter::once(cfg.tie_break)
        .chain((0..cfg.seeds).map(|i| TieBreak::Random(cfg.seed.wrapping_add(i))))
        .collect()
}

/// Runs every check the detected (or forced) regime supports.
pub fn run_verify(p: &Presentation, cfg: &RunConfig) -> VerificationReport {
    let set = classify(p);
    let regimes: Vec<Regime> = set.iter().copied().collect();
    let regime = cfg.regime.or_else(|| Regime::primary(&set));
    let mut rec = Recorder {
        timings: cfg.timings,
        checks: Vec::new(),
    };
    rec.run("regime", || match regime {
        None => (
            Verdict::Inconclusive,
            json!({ "detected": regimes }),
            None,
        ),
        Some(r) => {
            let report = Analysis::new(p).check(condition_for(r));
            if report.holds {
                pass(json!({ "detected": regimes, "used": r }))
            } else {
                fail(json!({ "detected": regimes, "used": r }), value(&report))
            }
        }
    });
    rec.run("pieces", || check_pieces(p));
    let later = [
        "link-graph", "greendlinger", "euler-charge", "corner-shell", "ball", "intersections", "helly", "full-helly",
        "triforce", "ordering", "prefix-union", "basis-independence", "basis-membership",
    ];
    let Some(regime) = regime else {
        rec.skip(&later, "no supported regime");
        return finish(p, cfg, regimes, None, rec);
    };
    let budget = EnumerationBudget {
        max_area: cfg.diagram_area,
        max_nodes: cfg.budget.max_nodes,
    };
    match enumerate_by_area(&symmetrize(p), budget) {
        Ok(ds) => {
            rec.run("link-graph", || check_link_graph(p, &ds));
            rec.run("greendlinger", || check_greendlinger(p, &ds, regime));
            rec.run("euler-charge", || check_charge(p, &ds, regime));
            rec.run("corner-shell", || check_corners(p, &ds, regime));
        }
        Err(e) => {
            for n in &later[..4] {
                rec.run(n, || from_error(&e));
            }
        }
    }
    let ball = match build_ball(p, cfg.radius, &cfg.budget) {
        Ok(b) => b,
        Err(e) => {
            rec.run("ball", || from_error(&e));
            rec.skip(&later[5..], "no ball");
            return finish(p, cfg, regimes, Some(regime), rec);
        }
    };
    let sg = build_structure_graph(&ball);
    rec.run("ball", || match &sg {
        Ok(_) => pass(ball_summary(&ball)),
        Err(e) => from_error(e),
    });
    let Ok(sg) = sg else {
        rec.skip(&later[5..], "no structure graph");
        return finish(p, cfg, regimes, Some(regime), rec);
    };
    rec.run("intersections", || check_structure_intersections(p, &sg));
    for (name, result) in check_helly_suite(&sg, regime, cfg.helly_max) {
        rec.run(name, || result);
    }
    let mut maps = Vec::new();
    let mut errors = Vec::new();
    for tb in policies(cfg) {
        match ordering_for_regime(&sg, regime, tb) {
            Ok(m) => maps.push(m),
            Err(e) => errors.push(e),
        }
    }
    if let Some(e) = errors.first() {
        rec.run("ordering", || from_error(e));
        rec.skip(&later[10..], "no ordering");
        return finish(p, cfg, regimes, Some(regime), rec);
    }
    rec.run("ordering", || {
        let mut rows = Vec::new();
        for m in &maps {
            let r = verify_distance_monotone(m, &sg);
            if let Some((i, j)) = r.witness {
                return fail(
                    json!({ "policies": maps.len() }),
                    json!({ "tie_break": m.tie_break, "labels": [i, j], "vertices": [m.order[i], m.order[j]] }),
                );
            }
            rows.push(json!({ "tie_break": m.tie_break, "labelled": m.len(), "pairs": r.pairs, "frontier": m.frontier }));
        }
        pass(json!({ "policies": rows }))
    });
    rec.run("prefix-union", || {
        let mut rows = Vec::new();
        for m in &maps {
            match verify_union_contractibility(&sg, m, usize::MAX) {
                Ok(r) => rows.push(json!({
                    "tie_break": m.tie_break,
                    "steps": r.steps.len(),
                    "final_betti": r.steps.last().map(|s| s.union_betti),
                })),
                Err(e) => {
                    return fail(json!({ "policies": maps.len() }), json!({ "tie_break": m.tie_break, "error": e.to_string() }))
                }
            }
        }
        pass(json!({ "policies": rows }))
    });
    let phi = &maps[0];
    match extract_transversals(&ball, &sg, phi) {
        Ok(ts) => {
            let basis = basis_elements(&ts, p);
            let fold = stallings_fold(&basis.words());
            rec.run("basis-independence", || {
                let r = verify_free_independence(&basis);
                let detail = json!({ "elements": r.elements, "rank": r.rank, "warnings": basis.warnings });
                if r.holds {
                    pass(detail)
                } else {
                    fail(detail, json!({ "dependent": r.dependent }))
                }
            });
            rec.run("basis-membership", || {
                let products = sample_basis_products(&basis, &fold, cfg.samples, 3, cfg.seed);
                let conjugates = sample_normal_closure(&ball, &sg, phi, &fold, cfg.samples, 3, cfg.seed);
                let detail = json!({ "products": products, "conjugates": conjugates });
                if products.members == products.samples
                    && products.nontrivial == products.samples
                    && conjugates.members == conjugates.samples
                {
                    pass(detail)
                } else {
                    fail(detail.clone(), detail)
                }
            });
        }
        Err(e) => {
            rec.run("basis-independence", || from_error(&e));
            rec.run("basis-membership", || from_error(&e));
        }
    }
    finish(p, cfg, regimes, Some(regime), rec)
}

fn finish(
    p: &Presentation,
    cfg: &RunConfig,
    regimes: Vec<Regime>,
    regime: Option<Regime>,
    rec: Recorder,
) -> VerificationReport {
    let mut summary = BTreeMap::new();
    for c in &rec.checks {
        let key = serde_json::to_value(c.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        *summary.entry(key).or_default() += 1;
    }
    VerificationReport {
        config: cfg.clone(),
        presentation: p.to_text(),
        regimes,
        regime,
        checks: rec.checks,
        summary,
    }
}

fn ball_summary(b: &Ball) -> Value {
    json!({
        "radius": b.radius,
        "vertices": b.vertex_count(),
        "edges": b.edges().len(),
        "cells": b.cells.len(),
        "interior_cells": (0..b.cells.len()).filter(|&c| b.cell_is_interior(c)).count(),
        "components": b.components.len(),
        "engine": b.engine,
        "distinctness": b.distinctness,
    })
}

/// `check`: one condition, or the full classification when `condition` is
/// `None`. The flag is whether the condition holds (or some regime does).
pub fn check_report(p: &Presentation, cfg: &RunConfig, condition: Option<Condition>) -> (Value, bool) {
    let analysis = Analysis::new(p);
    match condition {
        Some(c) => {
            let r = analysis.check(c);
            let ok = r.holds;
            (json!({ "config": cfg, "presentation": p.to_text(), "report": r }), ok)
        }
        None => {
            let set = analysis.classify();
            let reports: Vec<_> = [Regime::CPrime6, Regime::C6, Regime::C4T4, Regime::C3T6]
                .into_iter()
                .map(|r| analysis.check(condition_for(r)))
                .collect();
            let ok = !set.is_empty();
            (
                json!({ "config": cfg, "presentation": p.to_text(), "regimes": set, "primary": Regime::primary(&set), "reports": reports }),
                ok,
            )
        }
    }
}

pub fn ball_report(b: &Ball, cfg: &RunConfig) -> Value {
    json!({ "config": cfg, "ball": b.view(), "summary": ball_summary(b) })
}

/// `structure`: Λ, its nerve on the interior, intersection and Helly
/// summaries.
pub fn structure_report(p: &Presentation, sg: &StructureGraph, regime: Option<Regime>, cfg: &RunConfig) -> Value {
    let nerve = crate::structure::build_nerve(sg, DEFAULT_DIM_CAP);
    let pool = sg.interior_vertices();
    let helly = regime.map(|r| {
        helly_suite(sg, &pool, r, cfg.helly_max)
            .map(|s| value(&s))
            .unwrap_or_else(|e| json!({ "error": e.to_string() }))
    });
    let intersections = check_structure_intersections(p, sg);
    json!({
        "config": cfg,
        "regime": regime,
        "structure": sg.view(),
        "nerve": nerve,
        "intersections": { "verdict": intersections.0, "detail": intersections.1, "witness": intersections.2 },
        "helly": helly,
    })
}

pub fn order_report(sg: &StructureGraph, phi: &OrderingMap, regime: Regime, cfg: &RunConfig) -> (Value, bool) {
    let mono = verify_distance_monotone(phi, sg);
    let union = verify_union_contractibility(sg, phi, usize::MAX);
    let ok = mono.holds && union.is_ok();
    let table: Vec<Value> = phi
        .steps
        .iter()
        .map(|s| json!({ "label": s.label, "vertex": s.vertex, "element": sg.vertices[s.vertex], "simplex": s.simplex }))
        .collect();
    (
        json!({
            "config": cfg,
            "regime": regime,
            "base": phi.base,
            "nerve": phi.nerve,
            "frontier": phi.frontier,
            "segments": phi.segments,
            "phi": table,
            "distance_monotone": mono,
            "prefix_union": union.map(|r| value(&r)).unwrap_or_else(|e| json!({ "error": e.to_string() })),
        }),
        ok,
    )
}

fn transversal_view(p: &Presentation, ts: &[Transversal]) -> Value {
    ts.iter()
        .map(|t| {
            json!({
                "relator": p.format_word(&p.relators[t.relator]),
                "entries": t.entries.iter().map(|e| json!({
                    "label": e.label,
                    "cell": e.cell,
                    "base": e.base,
                    "conjugator": p.format_word(&e.conjugator),
                    "path": e.path,
                })).collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn basis_view(p: &Presentation, basis: &CohenLyndonBasis) -> Value {
    json!({
        "elements": basis.elements.iter().map(|e| json!({
            "relator": e.relator,
            "conjugator": p.format_word(&e.conjugator),
            "word": p.format_word(&e.word),
        })).collect::<Vec<_>>(),
        "roots": basis.roots.iter().map(|r| json!({
            "relator": r.relator,
            "root": p.format_word(&r.root),
            "exponent": r.exponent,
        })).collect::<Vec<_>>(),
        "warnings": basis.warnings,
    })
}

/// `basis`: transversals, basis words, fold rank and the membership samples.
pub fn basis_report(b: &Ball, sg: &StructureGraph, phi: &OrderingMap, cfg: &RunConfig) -> Result<(Value, bool)> {
    let p = &b.presentation;
    let ts = extract_transversals(b, sg, phi)?;
    let basis = basis_elements(&ts, p);
    let fold = stallings_fold(&basis.words());
    let independence = verify_free_independence(&basis);
    let products = sample_basis_products(&basis, &fold, cfg.samples, 3, cfg.seed);
    let conjugates = sample_normal_closure(b, sg, phi, &fold, cfg.samples, 3, cfg.seed);
    let ok = independence.holds
        && products.members == products.samples
        && products.nontrivial == products.samples
        && conjugates.members == conjugates.samples;
    Ok((
        json!({
            "config": cfg,
            "transversals": transversal_view(p, &ts),
            "basis": basis_view(p, &basis),
            "fold": { "rank": fold.rank(), "vertices": fold.vertex_count, "edges": fold.edges.len() },
            "independence": independence,
            "products": products,
            "conjugates": conjugates,
        }),
        ok,
    ))
}
