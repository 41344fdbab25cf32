//! The bundled instance corpus: generation, loading and the per-instance
//! invariant audit.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use skein_core::lamination::{counts_from_crossings, vertex_link, ComponentInput, Curve, CurveInput, IntegralLamination};
use skein_core::ordering::{
    assign_orientations_weights, build_regional_graph, check_compatibility_sanity,
    dyadic_ranks, labels_per_arc, ConditionViolation, EdgeLabel, signed_sum_ranks, transfer, triangle_orderings, verify_sufficient_condition,
    ComponentKind, LowestId, OrderingSolution, RegionalGraph, Witness,
};
use skein_core::surface::{standard, Triangulation, TriangulationData};
use skein_core::trace::{lamination_element, classical_oracle, specialize, Engine};

use crate::io::{read_json, step_json, ComponentJson, Expectation, InputError, InstanceJson, LaminationJson, OrderingFixture, TriangulationJson};

/// Junctures up to which exhaustive enumerations run.
pub const ENUMERATION_LIMIT: usize = 16;

/// Juncture count of the largest corpus curve.
pub const LONG_JUNCTURES: usize = 30;

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Instance files of a directory, sorted by file name.
pub fn list(dir: &Path) -> Result<Vec<PathBuf>, InputError> {
    let rd = fs::read_dir(dir).map_err(|source| InputError::Io { path: dir.display().to_string(), source })?;
    let mut out: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

pub fn load(dir: &Path) -> Result<Vec<(PathBuf, InstanceJson)>, InputError> {
    list(dir)?.into_iter().map(|p| read_json(&p).map(|(inst, _)| (p, inst))).collect()
}

/// Findings for one curve.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CurveAudit {
    pub component: usize,
    pub junctures: usize,
    pub graph_edges: usize,
    pub closed_components: usize,
    pub solve_ms: f64,
}

/// Findings for one instance; `failures` is empty iff every invariant held.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Audit {
    pub name: String,
    pub family: String,
    pub failures: Vec<String>,
    pub curves: Vec<CurveAudit>,
    pub max_junctures: usize,
    pub terms: usize,
    pub positive: bool,
    pub even: bool,
    pub x_form_positive: Option<bool>,
    pub oracle_match: Option<bool>,
    pub engines_match: Option<bool>,
    pub witness: Option<String>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Regional-graph shape: no self-loop, no multiple edge, valence 1 to 3, at
/// most one closed component, and a three-valent vertex in it.
pub fn graph_violations(g: &RegionalGraph) -> Vec<String> {
    let mut out = Vec::new();
    let mut pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        if e.first_side == e.second_side {
            out.push(format!("edge {i} is a self-loop"));
        }
        *pairs.entry((e.first_side.min(e.second_side), e.first_side.max(e.second_side))).or_default() += 1;
    }
    for ((a, b), m) in pairs.into_iter().filter(|&(_, m)| m > 1) {
        out.push(format!("narrow regions {a} and {b} share {m} ends"));
    }
    for (v, r) in g.vertices.iter().enumerate() {
        let d = g.edges.iter().filter(|e| e.first_side == v).count() + g.edges.iter().filter(|e| e.second_side == v).count();
        if !(1..=3).contains(&d) || d != r.ends.len() {
            out.push(format!("vertex {v} has valence {d}"));
        }
    }
    let closed: Vec<usize> =
        g.components.iter().enumerate().filter(|(_, c)| c.kind == ComponentKind::Closed).map(|(i, _)| i).collect();
    if closed.len() > 1 {
        out.push(format!("{} closed components", closed.len()));
    }
    for &c in &closed {
        let comp = &g.components[c];
        if comp.vertices.iter().any(|&v| g.vertices[v].ends.len() == 1) {
            out.push(format!("closed component {c} has a one-valent vertex"));
        }
        if !comp.vertices.iter().any(|&v| g.vertices[v].ends.len() == 3) {
            out.push(format!("closed component {c} has no three-valent vertex"));
        }
    }
    out
}

/// Replays the chains of every component, checking the partition and the
/// partial valences after each stage.
pub fn chain_violations(g: &RegionalGraph, sol: &OrderingSolution) -> Vec<String> {
    let mut out = Vec::new();
    for cc in &sol.chains {
        let comp = &g.components[cc.component];
        let mut remaining: BTreeSet<usize> = comp.edges.iter().copied().collect();
        let closed = comp.kind == ComponentKind::Closed;
        for (stage, chain) in cc.chains.iter().enumerate() {
            for (i, &e) in chain.edges.iter().enumerate() {
                let ends = [g.edges[e].first_side, g.edges[e].second_side];
                let (a, b) = (chain.vertices[i], chain.vertices[i + 1]);
                if !(ends == [a, b] || ends == [b, a]) {
                    out.push(format!("chain {stage} of component {} is not a trail at edge {e}", cc.component));
                }
                if !remaining.remove(&e) {
                    out.push(format!("edge {e} used twice in component {}", cc.component));
                }
            }
            if stage == 0 && closed && chain.departing() != chain.terminating() {
                out.push(format!("initial chain of closed component {} is not closed", cc.component));
            }
            let mut has_one = false;
            for &v in &comp.vertices {
                let s = g.vertices[v].ends.iter().filter(|e| remaining.contains(e)).count();
                has_one |= s == 1;
                let ok = match g.vertices[v].ends.len() {
                    2 => s == 0 || s == 2,
                    3 => s == 0 || s == 1 || s == 3,
                    _ => true,
                };
                if !ok {
                    out.push(format!("after stage {stage} vertex {v} has {s} remaining ends"));
                }
            }
            if !remaining.is_empty() && !has_one {
                out.push(format!("after stage {stage} no vertex has one remaining end"));
            }
        }
        if !remaining.is_empty() {
            out.push(format!("component {} leaves {} edges uncovered", cc.component, remaining.len()));
        }
    }
    out
}

/// Structural audit of one non-peripheral curve, recomputing each stage and
/// comparing against the solver's output.
pub fn audit_curve(t: &Triangulation, c: &Curve, index: usize, failures: &mut Vec<String>) -> Option<(OrderingSolution, f64)> {
    let start = Instant::now();
    let sol = match skein_core::ordering::solve(t, c, &mut LowestId) {
        Ok(s) => s,
        Err(e) => {
            failures.push(format!("component {index}: ordering failed: {e}"));
            return None;
        }
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let sys = c.system();
    let g = match build_regional_graph(t, sys) {
        Ok(g) => g,
        Err(e) => {
            failures.push(format!("component {index}: {e}"));
            return None;
        }
    };
    for v in graph_violations(&g) {
        failures.push(format!("component {index}: graph: {v}"));
    }
    for v in chain_violations(&g, &sol) {
        failures.push(format!("component {index}: chains: {v}"));
    }
    for v in verify_sufficient_condition(&g, &sol.edge_labels) {
        failures.push(format!("component {index}: condition {}: {v:?}", v.condition()));
    }
    let seg = transfer(&g, &sol.edge_labels);
    for (e, labels) in labels_per_arc(t, &g, &seg).iter().enumerate() {
        if sys.crossings(e) == 0 {
            continue;
        }
        let (a, b) = (dyadic_ranks(labels), signed_sum_ranks(labels));
        if a.is_none() || a != b {
            failures.push(format!("component {index}: arc {e}: reading rule disagrees with signed sums"));
        }
    }
    if let Err(w) = check_compatibility_sanity(t, sys, &sol.juncture_rank) {
        failures.push(format!("component {index}: checker rejects solver output: {w:?}"));
    }
    match triangle_orderings(t, sys, &sol.juncture_rank) {
        Ok(r) if r == sol.segment_rank => {}
        _ => failures.push(format!("component {index}: triangle orderings not reproducible")),
    }
    Some((sol, ms))
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Incompatible { triangle, segments } => format!("incompatible pair {segments:?} in triangle {triangle}"),
        Witness::Insane { triangle, segments } => format!("insane triple {segments:?} in triangle {triangle}"),
    }
}

/// Runs the full invariant suite on one instance.
pub fn audit(inst: &InstanceJson) -> Audit {
    let mut a = Audit { name: inst.name.clone(), family: inst.family.clone(), ..Default::default() };
    let t = match inst.triangulation.build() {
        Ok(t) => t,
        Err(e) => {
            a.failures.push(format!("triangulation: {e}"));
            return a;
        }
    };
    let lam = match inst.lamination.build(&t) {
        Ok(l) => l,
        Err(e) => {
            a.failures.push(format!("lamination: {e}"));
            return a;
        }
    };
    if let Some(fx) = &inst.ordering_fixture {
        let Some((c, _)) = lam.components().get(fx.component) else {
            a.failures.push(format!("fixture names missing component {}", fx.component));
            return a;
        };
        if fx.juncture_rank.len() != c.juncture_count() {
            a.failures.push(String::from("fixture rank has the wrong length"));
            return a;
        }
        if let Err(w) = check_compatibility_sanity(&t, c.system(), &fx.juncture_rank) {
            let text = witness_text(&w);
            a.failures.push(format!("prescribed ordering rejected: {text}"));
            a.witness = Some(text);
        }
        return a;
    }
    for (i, (c, _)) in lam.components().iter().enumerate() {
        a.max_junctures = a.max_junctures.max(c.juncture_count());
        if c.is_peripheral() {
            continue;
        }
        if let Some((sol, ms)) = audit_curve(&t, c, i, &mut a.failures) {
            a.curves.push(CurveAudit {
                component: i,
                junctures: c.juncture_count(),
                graph_edges: sol.graph.edges.len(),
                closed_components: sol.graph.closed_components().count(),
                solve_ms: ms,
            });
        }
    }
    if let Some(m) = inst.expect.max_junctures {
        if a.max_junctures > m {
            a.failures.push(format!("curve has {} junctures, more than the recorded {m}", a.max_junctures));
        }
    }
    if let Some(want) = inst.expect.closed_component {
        let has = a.curves.iter().any(|c| c.closed_components > 0);
        if has != want {
            a.failures.push(format!("closed component present: {has}, recorded {want}"));
        }
    }
    let small = a.max_junctures <= ENUMERATION_LIMIT;
    let x = match lamination_element(&t, &lam, Engine::Transfer, &mut LowestId) {
        Ok(r) => r.element,
        Err(e) => {
            a.failures.push(format!("trace: {e}"));
            return a;
        }
    };
    a.terms = x.term_count();
    a.positive = x.is_positive();
    if !a.positive {
        a.failures.push(String::from("element is not positive"));
    }
    if let Some(n) = inst.expect.terms {
        if a.terms != n {
            a.failures.push(format!("element has {} terms, recorded {n}", a.terms));
        }
    }
    a.even = lam.is_even(&t);
    if a.even {
        a.x_form_positive = Some(x.x_subalgebra_form().is_some_and(|f| f.is_positive()));
        if a.x_form_positive != Some(true) {
            a.failures.push(String::from("even lamination without a positive X-form"));
        }
    }
    if small {
        match lamination_element(&t, &lam, Engine::StateSum, &mut LowestId) {
            Ok(r) => a.engines_match = Some(r.element == x),
            Err(e) => a.failures.push(format!("state sum: {e}")),
        }
        if a.engines_match == Some(false) {
            a.failures.push(String::from("engines disagree"));
        }
        match classical_oracle(&t, &lam) {
            Ok(p) => a.oracle_match = Some(p == specialize(&x)),
            Err(e) => a.failures.push(format!("oracle: {e}")),
        }
        if a.oracle_match == Some(false) {
            a.failures.push(String::from("classical limit differs from the oracle"));
        }
    }
    a
}

/// Instance files from generated data.
pub fn instance(name: &str, family: &str, d: &TriangulationData, parts: &[(&Curve, i64)]) -> InstanceJson {
    let components = parts
        .iter()
        .map(|(c, w)| ComponentJson {
            weight: *w,
            corner_counts: c.counts().to_vec(),
            traversal: Some(c.traversal().iter().map(step_json).collect()),
            peripheral: Some(c.is_peripheral()),
        })
        .collect();
    InstanceJson {
        name: name.to_string(),
        family: family.to_string(),
        triangulation: TriangulationJson::from_data(d),
        lamination: LaminationJson { components },
        expect: Expectation::default(),
        ordering_fixture: None,
    }
}

fn curve_of(t: &Triangulation, counts: Vec<[u32; 3]>) -> Option<Curve> {
    Curve::new(t, &CurveInput { counts, traversal: None, peripheral: None }).ok()
}

/// Non-peripheral curves from random crossing vectors, distinct, sorted by
/// juncture count.
pub fn sample_curves(t: &Triangulation, rng: &mut ChaCha8Rng, max_cross: u32, max_junctures: usize, want: usize) -> Vec<Curve> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..200_000 {
        if out.len() == want {
            break;
        }
        let x: Vec<u32> = (0..t.arc_count())
            .map(|e| if t.arcs()[e].is_boundary() { 0 } else { rng.random_range(0..=max_cross) })
            .collect();
        let Some(counts) = counts_from_crossings(t, &x) else { continue };
        if seen.contains(&counts) {
            continue;
        }
        let Some(c) = curve_of(t, counts.clone()) else { continue };
        if c.is_peripheral() || c.juncture_count() > max_junctures {
            continue;
        }
        seen.insert(counts);
        out.push(c);
    }
    out.sort_by_key(|c| (c.juncture_count(), c.counts().to_vec()));
    out
}

fn closed_graph(t: &Triangulation, c: &Curve) -> bool {
    build_regional_graph(t, c.system()).is_ok_and(|g| g.closed_components().count() > 0)
}

fn lamination_ok(t: &Triangulation, parts: &[(&Curve, i64)]) -> bool {
    let input: Vec<ComponentInput> = parts
        .iter()
        .map(|(c, w)| ComponentInput {
            curve: CurveInput { counts: c.counts().to_vec(), traversal: None, peripheral: None },
            weight: *w,
        })
        .collect();
    IntegralLamination::new(t, &input).is_ok()
}

/// Disjoint non-peripheral pairs found as components of random multicurves.
fn sample_multicurves(t: &Triangulation, rng: &mut ChaCha8Rng, max_cross: u32, want: usize) -> Vec<Vec<Curve>> {
    let mut out: Vec<Vec<Curve>> = Vec::new();
    let mut seen = BTreeSet::new();
    for _ in 0..200_000 {
        if out.len() == want {
            break;
        }
        let x: Vec<u32> = (0..t.arc_count())
            .map(|e| if t.arcs()[e].is_boundary() { 0 } else { rng.random_range(0..=max_cross) })
            .collect();
        let Some(counts) = counts_from_crossings(t, &x) else { continue };
        let Ok(sys) = skein_core::lamination::build_junctures(t, &counts) else { continue };
        let mut parts: Vec<Vec<[u32; 3]>> = sys.components().iter().map(|cy| sys.cycle_counts(cy)).collect();
        parts.sort();
        parts.dedup();
        if parts.len() < 2 {
            continue;
        }
        let curves: Option<Vec<Curve>> = parts.into_iter().map(|p| curve_of(t, p)).collect();
        let Some(curves) = curves else { continue };
        if curves.iter().filter(|c| !c.is_peripheral()).count() < 2 || curves.iter().any(|c| c.juncture_count() > 12) {
            continue;
        }
        let key: Vec<Vec<[u32; 3]>> = curves.iter().map(|c| c.counts().to_vec()).collect();
        if seen.insert(key) {
            out.push(curves);
        }
    }
    out
}

/// Surfaces of the corpus by family name.
pub fn families() -> Vec<(&'static str, TriangulationData)> {
    let torus = standard::once_punctured_torus();
    let genus2 = standard::genus_two_once_punctured();
    vec![
        ("torus", torus.clone()),
        ("torus2", standard::stellar_subdivide(&torus, 0)),
        ("sphere4", standard::stellar_subdivide(&standard::three_punctured_sphere(), 0)),
        ("genus2", genus2.clone()),
        ("genus2p2", standard::stellar_subdivide(&genus2, 2)),
        ("bordered", standard::torus_with_boundary_monogon()),
    ]
}

/// The deterministic corpus.
pub fn generate() -> Vec<InstanceJson> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut out = Vec::new();
    for (family, d) in families() {
        let t = Triangulation::build(d.clone()).expect("standard triangulation");
        let (max_cross, n_single) = match family {
            "torus" => (6, 8),
            "torus2" => (5, 8),
            "sphere4" => (4, 6),
            "genus2" => (3, 6),
            "genus2p2" => (3, 5),
            _ => (4, 6),
        };
        let pool = sample_curves(&t, &mut rng, max_cross, 30, 400);
        let mut chosen: Vec<&Curve> = Vec::new();
        // a spread of sizes, biggest included
        if !pool.is_empty() {
            for i in 0..n_single {
                let k = (i * (pool.len() - 1)) / (n_single - 1).max(1);
                if !chosen.iter().any(|c| c.counts() == pool[k].counts()) {
                    chosen.push(&pool[k]);
                }
            }
        }
        let closed: Vec<&Curve> = pool.iter().filter(|c| closed_graph(&t, c)).take(3).collect();
        for c in closed {
            if !chosen.iter().any(|x| x.counts() == c.counts()) {
                chosen.push(c);
            }
        }
        for (i, c) in chosen.iter().enumerate() {
            let mut inst = instance(&format!("{family}_curve_{i:02}"), family, &d, &[(c, 1)]);
            inst.expect.max_junctures = Some(c.juncture_count());
            inst.expect.closed_component = Some(closed_graph(&t, c));
            out.push(inst);
        }
        // weights on small curves
        let small: Vec<&Curve> = pool.iter().filter(|c| c.juncture_count() <= 6).take(5).collect();
        for (i, c) in small.iter().enumerate() {
            let k = 2 + (i as i64 % 4);
            out.push(instance(&format!("{family}_weight_{k}_{i:02}"), family, &d, &[(c, k)]));
        }
        // peripheral components
        let links: Vec<Curve> = (0..t.vertex_count())
            .filter(|&v| !t.is_marked_point(v))
            .filter_map(|v| curve_of(&t, vertex_link(&t, v)))
            .collect();
        let pweights = [-2i64, -1, 1, 2];
        for (i, link) in links.iter().enumerate().take(2) {
            let w = pweights[(i + out.len()) % 4];
            out.push(instance(&format!("{family}_peripheral_{i:02}"), family, &d, &[(link, w)]));
            if let Some(c) = small.first() {
                let w2 = pweights[(i + 1 + out.len()) % 4];
                if lamination_ok(&t, &[(c, 1), (link, w2)]) {
                    out.push(instance(&format!("{family}_mixed_{i:02}"), family, &d, &[(c, 1), (link, w2)]));
                }
            }
        }
        for (i, m) in sample_multicurves(&t, &mut rng, max_cross.min(4), 2).iter().enumerate() {
            let parts: Vec<(&Curve, i64)> =
                m.iter().enumerate().map(|(j, c)| (c, if c.is_peripheral() { -1 } else { 1 + j as i64 % 2 })).collect();
            out.push(instance(&format!("{family}_multi_{i:02}"), family, &d, &parts));
        }
    }
    let d = standard::genus_two_once_punctured();
    let t = Triangulation::build(d.clone()).expect("genus two");
    let long = sample_curves(&t, &mut rng, 6, LONG_JUNCTURES, 2000)
        .into_iter()
        .rev()
        .find(|c| c.juncture_count() == LONG_JUNCTURES)
        .expect("a curve of the target length");
    let mut inst = instance(&format!("genus2_long_{LONG_JUNCTURES}"), "genus2", &d, &[(&long, 1)]);
    inst.expect.max_junctures = Some(LONG_JUNCTURES);
    out.push(inst);
    let c = separating_curve(&t);
    for w in [1, 2] {
        out.push(instance(&format!("genus2_separating_{w}"), "genus2", &d, &[(&c, w)]));
    }
    // the (1,0) curve on the once-punctured torus
    let d = standard::once_punctured_torus();
    let t = Triangulation::build(d.clone()).expect("torus");
    let c = curve_of(&t, counts_from_crossings(&t, &[1, 1, 0]).expect("triangle conditions")).expect("simple curve");
    let mut inst = instance("opt_torus_10", "torus", &d, &[(&c, 1)]);
    inst.expect.terms = Some(3);
    out.push(inst);
    out
}

/// The curve separating the genus-one half of the standard genus-two
/// triangulation.
pub fn separating_curve(t: &Triangulation) -> Curve {
    let counts = vec![[1, 1, 1], [1, 1, 1], [0, 0, 2], [0, 0, 0], [0, 0, 0], [0, 0, 0]];
    curve_of(t, counts).expect("separating curve")
}

/// A checker-only fixture: the separating curve with the first arc ordering,
/// in enumeration order, that has an insane triple.
pub fn insane_fixture() -> InstanceJson {
    let d = standard::genus_two_once_punctured();
    let t = Triangulation::build(d.clone()).expect("genus two");
    let c = separating_curve(&t);
    let sys = c.system();
    let arcs: Vec<usize> = (0..t.arc_count()).filter(|&e| sys.crossings(e) == 2).collect();
    for bits in 0u32..1 << arcs.len() {
        let mut rank = vec![0u32; sys.junctures().len()];
        for (i, &e) in arcs.iter().enumerate() {
            let flip = bits >> i & 1;
            for (k, j) in sys.arc_junctures(e).enumerate() {
                rank[j] = k as u32 ^ flip;
            }
        }
        if let Err(Witness::Insane { .. }) = check_compatibility_sanity(&t, sys, &rank) {
            let mut inst = instance("insane_ordering", "fixture", &d, &[(&c, 1)]);
            inst.ordering_fixture = Some(OrderingFixture { component: 0, juncture_rank: rank });
            return inst;
        }
    }
    unreachable!("some flip pattern is insane")
}

/// Hand-corrupted copies of the constructive assignment, each paired with
/// a violation the verifier must report for it.
pub fn corrupted_assignments(g: &RegionalGraph, sol: &OrderingSolution) -> Vec<(Vec<EdgeLabel>, ConditionViolation)> {
    let base = assign_orientations_weights(g, &sol.chains);
    let mut out = Vec::new();
    if base.is_empty() {
        return out;
    }
    let top = base.iter().map(|l| l.exponent).max().unwrap_or(0);
    let flip = |l: &mut EdgeLabel| core::mem::swap(&mut l.from, &mut l.to);

    let mut x = base.clone();
    x[0].exponent = 0;
    out.push((x, ConditionViolation::NonPositiveExponent { edge: 0 }));
    if base.len() >= 2 {
        let mut x = base.clone();
        x[1].exponent = x[0].exponent;
        out.push((x, ConditionViolation::RepeatedExponent { edges: [0, 1] }));
    }
    if let Some(v) = (0..g.vertices.len()).find(|&v| !g.edges[0].endpoints().contains(&v)) {
        let mut x = base.clone();
        x[0].from = v;
        out.push((x, ConditionViolation::BadEndpoints { edge: 0 }));
    }
    if let Some(v) = (0..g.vertices.len()).find(|&v| g.valence(v) == 2) {
        let mut x = base.clone();
        flip(&mut x[g.vertices[v].ends[0]]);
        out.push((x, ConditionViolation::TwoValent { vertex: v }));
        let mut x = base.clone();
        let [a, b] = [g.vertices[v].ends[0], g.vertices[v].ends[1]];
        let (ea, eb) = (x[a].exponent, x[b].exponent);
        x[a].exponent = eb;
        x[b].exponent = ea;
        out.push((x, ConditionViolation::TwoValent { vertex: v }));
    }
    let three = |kind: ComponentKind| (0..g.vertices.len()).find(|&v| g.valence(v) == 3 && g.kind_of_vertex(v) == kind);
    if let Some(v) = three(ComponentKind::Open) {
        let ends = &g.vertices[v].ends;
        let low = *ends.iter().min_by_key(|&&e| base[e].exponent).expect("three ends");
        let mut x = base.clone();
        x[low].exponent = top + 7;
        out.push((x, ConditionViolation::OpenThreeValent { vertex: v }));
    }
    if let Some(v) = three(ComponentKind::Closed) {
        let mut x = base.clone();
        for &e in &g.vertices[v].ends {
            x[e].from = g.edges[e].other(v);
            x[e].to = v;
        }
        out.push((x, ConditionViolation::ClosedThreeValent { vertex: v }));
        let open = (0..base.len()).find(|&e| g.kind_of_vertex(g.edges[e].first_side) == ComponentKind::Open);
        let closed = g.vertices[v].ends[0];
        if let Some(o) = open {
            let mut x = base.clone();
            x[closed].exponent = top + 11;
            out.push((x, ConditionViolation::ClosedOutweighs { open_edge: o, closed_edge: closed }));
        }
    }
    out
}

/// The reported violation matches the expected one, up to which open edge
/// is named for condition 4.
pub fn diagnosed(found: &[ConditionViolation], want: &ConditionViolation) -> bool {
    found.iter().any(|f| match (f, want) {
        (
            ConditionViolation::ClosedOutweighs { closed_edge: a, .. },
            ConditionViolation::ClosedOutweighs { closed_edge: b, .. },
        ) => a == b,
        _ => f == want,
    })
}
