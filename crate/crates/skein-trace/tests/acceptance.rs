//! Acceptance suite over the bundled corpus, one test per criterion.

use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use skein_core::lamination::IntegralLamination;
use skein_core::ordering::{solve, verify_sufficient_condition, LowestId};
use skein_core::qtorus::{chebyshev_f, CommutationForm, OmegaLaurent};
use skein_core::surface::Triangulation;
use skein_core::trace::{lamination_element, biangle_value, triangle_factor, BiangleDiagram, Engine, Sign};
use skein_trace::corpus::{self, audit, corrupted_assignments, diagnosed, Audit, ENUMERATION_LIMIT, LONG_JUNCTURES};
use skein_trace::io::InstanceJson;
use skein_trace::relabel::{relabel_components, rename_back, Relabeling};
use skein_trace::run::element_of;

const MIN_INSTANCES: usize = 50;
const MAX_SOLVE: Duration = Duration::from_secs(1);
const CORRUPTIONS: usize = 20;
const PERTURBED_INSTANCES: usize = 10;
const SEEDS_PER_INSTANCE: u64 = 5;
const LONG_LIMIT: Duration = Duration::from_secs(5);
const FAMILIES: [&str; 6] = ["torus", "torus2", "sphere4", "genus2", "genus2p2", "bordered"];

struct Corpus {
    instances: Vec<InstanceJson>,
    audits: Vec<Audit>,
}

fn load() -> Corpus {
    let instances: Vec<InstanceJson> =
        corpus::load(&corpus::default_dir()).expect("bundled corpus").into_iter().map(|(_, i)| i).collect();
    let audits = instances.iter().map(audit).collect();
    Corpus { instances, audits }
}

fn failures_with<'a>(c: &'a Corpus, marker: &'a str) -> impl Iterator<Item = String> + 'a {
    c.audits
        .iter()
        .flat_map(move |a| a.failures.iter().filter(move |f| f.contains(marker)).map(move |f| format!("{}: {f}", a.name)))
}

fn verdict(bad: Vec<String>, summary: String) -> Result<String, String> {
    if bad.is_empty() {
        Ok(summary)
    } else {
        let shown: Vec<&str> = bad.iter().take(5).map(String::as_str).collect();
        Err(format!("{} violations; {}", bad.len(), shown.join("; ")))
    }
}

fn ordering_theorem(c: &Corpus) -> Result<String, String> {
    let families: Vec<&str> = FAMILIES.iter().copied().filter(|f| !c.instances.iter().any(|i| i.family == *f)).collect();
    if c.instances.len() < MIN_INSTANCES || !families.is_empty() {
        return Err(format!("{} instances, missing families {families:?}", c.instances.len()));
    }
    let max_j = c.audits.iter().map(|a| a.max_junctures).max().unwrap_or(0);
    if max_j < LONG_JUNCTURES {
        return Err(format!("largest curve has only {max_j} junctures"));
    }
    if !c.audits.iter().any(|a| a.family == "torus2" && a.curves.iter().any(|k| k.closed_components > 0)) {
        return Err(String::from("no twice-punctured torus curve with a closed regional-graph component"));
    }
    let mut bad: Vec<String> = ["ordering failed", "checker rejects", "triangle orderings"]
        .iter()
        .flat_map(|m| failures_with(c, m))
        .collect();
    let slowest = c.audits.iter().flat_map(|a| a.curves.iter()).map(|k| k.solve_ms).fold(0.0, f64::max);
    if slowest > MAX_SOLVE.as_secs_f64() * 1e3 {
        bad.push(format!("slowest solve {slowest:.1} ms"));
    }
    let curves: usize = c.audits.iter().map(|a| a.curves.len()).sum();
    verdict(bad, format!("{} instances, {curves} curves, up to {max_j} junctures, slowest solve {slowest:.2} ms", c.instances.len()))
}

fn graph_structure(c: &Corpus) -> Result<String, String> {
    let bad: Vec<String> = failures_with(c, "graph:").collect();
    verdict(bad, String::from("no self-loop, multiplicity 1, valences 1..3, closed components well formed"))
}

fn chain_decomposition(c: &Corpus) -> Result<String, String> {
    let bad: Vec<String> = failures_with(c, "chains:").collect();
    verdict(bad, String::from("partitions exact, every stage sustainable"))
}

fn sufficient_condition(c: &Corpus) -> Result<String, String> {
    let mut bad: Vec<String> = failures_with(c, "condition ").collect();
    let mut tried = 0;
    let mut seen = [false; 4];
    for inst in &c.instances {
        if inst.ordering_fixture.is_some() {
            continue;
        }
        let t = inst.triangulation.build().expect("corpus triangulation");
        let lam = inst.lamination.build(&t).expect("corpus lamination");
        for (curve, _) in lam.components().iter().filter(|(k, _)| !k.is_peripheral()) {
            let Ok(sol) = solve(&t, curve, &mut LowestId) else { continue };
            for (labels, want) in corrupted_assignments(&sol.graph, &sol) {
                let found = verify_sufficient_condition(&sol.graph, &labels);
                tried += 1;
                seen[want.condition() as usize - 1] = true;
                if !diagnosed(&found, &want) {
                    bad.push(format!("{}: expected {want:?}, got {found:?}", inst.name));
                }
            }
        }
    }
    if tried < CORRUPTIONS || seen.contains(&false) {
        bad.push(format!("only {tried} corruptions, conditions covered {seen:?}"));
    }
    verdict(bad, format!("constructive labels pass everywhere; {tried} corruptions all diagnosed"))
}

fn reading_rule(c: &Corpus) -> Result<String, String> {
    verdict(failures_with(c, "reading rule").collect(), String::from("dyadic and signed-sum orderings agree on every arc"))
}

fn positivity(c: &Corpus) -> Result<String, String> {
    let mut bad: Vec<String> = ["not positive", "X-form", "trace:"].iter().flat_map(|m| failures_with(c, m)).collect();
    let mut weights = std::collections::BTreeSet::new();
    let mut peripheral = std::collections::BTreeSet::new();
    for inst in &c.instances {
        for comp in &inst.lamination.components {
            if comp.peripheral == Some(true) {
                peripheral.insert(comp.weight);
            } else {
                weights.insert(comp.weight);
            }
        }
    }
    if !(1..=5).all(|k| weights.contains(&k)) || ![-2, -1, 1, 2].iter().all(|k| peripheral.contains(k)) {
        bad.push(format!("weights {weights:?}, peripheral weights {peripheral:?}"));
    }
    let even = c.audits.iter().filter(|a| a.x_form_positive == Some(true)).count();
    verdict(bad, format!("all positive; {even} even laminations with a positive X-form"))
}

fn classical_limit(c: &Corpus) -> Result<String, String> {
    let mut bad: Vec<String> = failures_with(c, "oracle").collect();
    let checked = c.audits.iter().filter(|a| a.oracle_match.is_some()).count();
    for a in c.audits.iter().filter(|a| a.max_junctures <= ENUMERATION_LIMIT && a.witness.is_none()) {
        if a.oracle_match.is_none() {
            bad.push(format!("{}: oracle not run", a.name));
        }
    }
    verdict(bad, format!("{checked} instances match the commutative enumeration"))
}

fn choice_independence(c: &Corpus) -> Result<String, String> {
    let pool: Vec<&InstanceJson> = c
        .instances
        .iter()
        .zip(&c.audits)
        .filter(|(i, a)| i.ordering_fixture.is_none() && a.passed() && a.max_junctures <= 12 && a.terms > 1)
        .map(|(i, _)| i)
        .collect();
    if pool.len() < PERTURBED_INSTANCES {
        return Err(format!("only {} candidate instances", pool.len()));
    }
    let step = pool.len() / PERTURBED_INSTANCES;
    let mut bad = Vec::new();
    for inst in pool.iter().step_by(step).take(PERTURBED_INSTANCES) {
        let data = inst.triangulation.to_data().expect("corpus data");
        let t = Triangulation::build(data.clone()).expect("corpus triangulation");
        let input = inst.lamination.to_input().expect("corpus lamination");
        let lam = IntegralLamination::new(&t, &input).expect("valid lamination");
        let base = element_of(&t, &lam, Engine::Transfer, None).expect("baseline element");
        for seed in 0..SEEDS_PER_INSTANCE {
            let r = Relabeling::random(data.triangle_count, seed);
            let t2 = Triangulation::build(r.data(&data)).expect("relabeled triangulation");
            let lam2 = IntegralLamination::new(&t2, &relabel_components(&r, &input, seed as usize + 1)).expect("relabeled lamination");
            let x = element_of(&t2, &lam2, Engine::Transfer, Some(seed)).expect("perturbed element");
            let back = rename_back(&x, &t, &r.arc_map(&t, &t2));
            if back != base {
                bad.push(format!("{} seed {seed}", inst.name));
            }
        }
    }
    verdict(bad, format!("{PERTURBED_INSTANCES} instances x {SEEDS_PER_INSTANCE} perturbations identical"))
}

fn engine_equivalence(c: &Corpus) -> Result<String, String> {
    let mut bad: Vec<String> = ["engines disagree", "state sum:"].iter().flat_map(|m| failures_with(c, m)).collect();
    let compared = c.audits.iter().filter(|a| a.engines_match == Some(true)).count();
    let Some(long) = c.instances.iter().zip(&c.audits).find(|(_, a)| a.max_junctures == LONG_JUNCTURES) else {
        return Err(String::from("no long instance"));
    };
    let t = long.0.triangulation.build().expect("long triangulation");
    let lam = long.0.lamination.build(&t).expect("long lamination");
    let start = Instant::now();
    let x = lamination_element(&t, &lam, Engine::Transfer, &mut LowestId).expect("long element").element;
    let took = start.elapsed();
    if took > LONG_LIMIT || !x.is_positive() {
        bad.push(format!("{LONG_JUNCTURES}-juncture instance took {took:?}"));
    }
    verdict(bad, format!("{compared} instances equal; {LONG_JUNCTURES} junctures in {:.3} s", took.as_secs_f64()))
}

fn micro_formulas() -> Result<String, String> {
    let mut bad = Vec::new();
    let form = Arc::new(CommutationForm::triangle_algebra(1));
    for (a, b) in [(0u8, 1u8), (1, 2), (2, 0)] {
        let x = triangle_factor(&form, 0, (a, Sign::Minus), (b, Sign::Plus)).expect("distinct slots");
        if !x.is_zero() {
            bad.push(format!("factor (-,+) on slots {a},{b} is {}", x.render()));
        }
    }
    let mut d = BiangleDiagram::default();
    let cases = [
        ("empty", d, OmegaLaurent::one()),
        ("cap +-", {
            d.left_caps[0][1] = 1;
            d
        }, OmegaLaurent::monomial(-1, -5)),
        ("circle", BiangleDiagram { circles: 1, ..Default::default() }, OmegaLaurent::from_terms([(4, BigInt::from(-1)), (-4, BigInt::from(-1))])),
    ];
    for (name, diagram, want) in cases {
        if biangle_value(&diagram) != want {
            bad.push(format!("biangle {name}"));
        }
    }
    let ints = |v: &[i64]| v.iter().map(|&k| BigInt::from(k)).collect::<Vec<_>>();
    let chebyshev = [ints(&[2]), ints(&[0, 1]), ints(&[-2, 0, 1]), ints(&[0, -3, 0, 1])];
    for (k, want) in chebyshev.iter().enumerate() {
        if &chebyshev_f(k as u32) != want {
            bad.push(format!("F_{k}"));
        }
    }
    verdict(bad, String::from("triangle factor, biangle values and F_0..F_3 exact"))
}

fn report(n: usize, r: Result<String, String>) {
    match r {
        Ok(s) => println!("criterion {n:2}: PASS  {s}"),
        Err(s) => panic!("criterion {n:2}: FAIL  {s}"),
    }
}

fn shared() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(load)
}

#[test]
fn criterion_01_ordering_theorem() {
    report(1, ordering_theorem(shared()));
}

#[test]
fn criterion_02_regional_graph_structure() {
    report(2, graph_structure(shared()));
}

#[test]
fn criterion_03_chain_decomposition() {
    report(3, chain_decomposition(shared()));
}

#[test]
fn criterion_04_sufficient_condition() {
    report(4, sufficient_condition(shared()));
}

#[test]
fn criterion_05_dyadic_reading_rule() {
    report(5, reading_rule(shared()));
}

#[test]
fn criterion_06_positivity() {
    report(6, positivity(shared()));
}

#[test]
fn criterion_07_classical_limit() {
    report(7, classical_limit(shared()));
}

#[test]
fn criterion_08_choice_independence() {
    report(8, choice_independence(shared()));
}

#[test]
fn criterion_09_engine_equivalence() {
    report(9, engine_equivalence(shared()));
}

#[test]
fn criterion_10_micro_formulas() {
    report(10, micro_formulas());
}
