//! The compute pipeline and its report.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use skein_core::lamination::IntegralLamination;
use skein_core::ordering::{Chooser, LowestId};
use skein_core::qtorus::QtElement;
use skein_core::surface::Triangulation;
use skein_core::trace::{
    lamination_element, classical_oracle, has_single_power_coefficients, specialize, Engine, LaminationTrace, TraceError,
};

use crate::io::{InputError, LaminationJson, TriangulationJson};

/// Tie-breaking drawn from a seeded stream.
pub struct SeededChooser(ChaCha8Rng);

impl SeededChooser {
    pub fn new(seed: u64) -> Self {
        SeededChooser(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Chooser for SeededChooser {
    fn pick(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComputeOptions {
    pub engine: Engine,
    pub seed: Option<u64>,
    pub x_form: bool,
    pub check_positivity: bool,
    pub classical_oracle: bool,
    pub timing: bool,
}

/// What went wrong, by who is to blame.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Capacity(TraceError),
    #[error("internal invariant violated: {0}")]
    Internal(TraceError),
}

impl Failure {
    pub fn class(&self) -> &'static str {
        match self {
            Failure::Input(_) | Failure::Capacity(_) => "user-input",
            Failure::Internal(_) => "internal-theorem-violation",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) | Failure::Capacity(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl From<TraceError> for Failure {
    fn from(e: TraceError) -> Self {
        match e {
            TraceError::TooManyJunctures(_) | TraceError::BadWeight { .. } => Failure::Capacity(e),
            other => Failure::Internal(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigests {
    pub triangulation: String,
    pub lamination: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceSummary {
    pub genus: u32,
    pub punctures: u32,
    pub boundary_arcs: u32,
    pub triangles: usize,
    pub arcs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub open_components: usize,
    pub closed_components: usize,
    pub chains: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub index: usize,
    pub weight: i64,
    pub peripheral: bool,
    pub junctures: usize,
    pub base_terms: usize,
    pub terms: usize,
    pub positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regional_graph: Option<GraphSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XFormSummary {
    pub positive: bool,
    pub rendered: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementSummary {
    pub terms: usize,
    pub positive: bool,
    pub single_power_coefficients: bool,
    pub rendered: String,
    /// Requested and the element lies in the `X` subalgebra.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_form: Option<XFormSummary>,
    pub x_form_available: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResults {
    pub orderings_verified: bool,
    pub order_independence_checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positivity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_form_positive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_oracle: Option<bool>,
}

impl CheckResults {
    pub fn passed(&self) -> bool {
        self.orderings_verified
            && self.positivity != Some(false)
            && self.x_form_positive != Some(false)
            && self.classical_oracle != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub inputs: InputDigests,
    pub policy: String,
    pub engine: &'static str,
    pub surface: SurfaceSummary,
    pub fock_coordinates: Vec<String>,
    pub even: bool,
    pub dropped_zero_weight: usize,
    pub merged_duplicates: usize,
    pub components: Vec<ComponentSummary>,
    pub element: ElementSummary,
    pub checks: CheckResults,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

/// Everything a run produces.
pub struct Outcome {
    pub triangulation: Triangulation,
    pub lamination: IntegralLamination,
    pub trace: LaminationTrace,
    pub report: RunReport,
}

pub fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::StateSum => "statesum",
        Engine::Transfer => "transfer",
    }
}

pub fn chooser_for(seed: Option<u64>) -> Box<dyn Chooser> {
    match seed {
        Some(s) => Box::new(SeededChooser::new(s)),
        None => Box::new(LowestId),
    }
}

/// Runs surface, lamination, ordering and trace in order.
pub fn compute(tj: &TriangulationJson, lj: &LaminationJson, digests: InputDigests, opts: &ComputeOptions) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let t = tj.build()?;
    let lam = lj.build(&t)?;
    let mut chooser = chooser_for(opts.seed);
    let trace = lamination_element(&t, &lam, opts.engine, chooser.as_mut())?;
    let x = &trace.element;

    let components = trace
        .components
        .iter()
        .map(|c| ComponentSummary {
            index: c.component,
            weight: c.weight,
            peripheral: c.peripheral,
            junctures: c.junctures,
            base_terms: c.base.term_count(),
            terms: c.factor.term_count(),
            positive: c.factor.is_positive(),
            regional_graph: c.ordering.as_ref().map(|o| GraphSummary {
                vertices: o.graph.vertices.len(),
                edges: o.graph.edges.len(),
                open_components: o.graph.components.len() - o.graph.closed_components().count(),
                closed_components: o.graph.closed_components().count(),
                chains: o.chains.iter().map(|c| c.chains.len()).sum(),
            }),
        })
        .collect();

    let xf = x.x_subalgebra_form();
    let x_form = if opts.x_form {
        xf.as_ref().map(|f| XFormSummary { positive: f.is_positive(), rendered: f.render() })
    } else {
        None
    };
    let element = ElementSummary {
        terms: x.term_count(),
        positive: x.is_positive(),
        single_power_coefficients: has_single_power_coefficients(x),
        rendered: x.render(),
        x_form_available: xf.is_some(),
        x_form,
    };
    let classical = if opts.classical_oracle {
        Some(specialize(x) == classical_oracle(&t, &lam)?)
    } else {
        None
    };
    let checks = CheckResults {
        // solve re-checks compatibility and sanity before returning
        orderings_verified: true,
        order_independence_checked: trace.order_checked,
        positivity: opts.check_positivity.then_some(element.positive),
        x_form_positive: if opts.check_positivity && opts.x_form { xf.as_ref().map(|f| f.is_positive()) } else { None },
        classical_oracle: classical,
    };
    let s = t.surface();
    let report = RunReport {
        inputs: digests,
        policy: match opts.seed {
            Some(seed) => format!("seeded:{seed}"),
            None => String::from("lowest-id"),
        },
        engine: engine_name(opts.engine),
        surface: SurfaceSummary {
            genus: s.genus,
            punctures: s.punctures,
            boundary_arcs: s.boundary_arcs,
            triangles: t.triangle_count(),
            arcs: t.arc_count(),
        },
        fock_coordinates: (0..t.arc_count()).map(|e| lam.fock_coordinate(e).to_string()).collect(),
        even: lam.is_even(&t),
        dropped_zero_weight: lam.normalization.dropped_zero_weight,
        merged_duplicates: lam.normalization.merged_duplicates,
        components,
        element,
        checks,
        timing_ms: opts.timing.then(|| start.elapsed().as_millis()),
    };
    Ok(Outcome { triangulation: t, lamination: lam, trace, report })
}

/// Plain-text rendering of a report.
pub fn render_text(r: &RunReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "surface: genus {} punctures {} boundary arcs {} ({} triangles, {} arcs)\n",
        r.surface.genus, r.surface.punctures, r.surface.boundary_arcs, r.surface.triangles, r.surface.arcs
    ));
    s.push_str(&format!("policy: {}  engine: {}\n", r.policy, r.engine));
    s.push_str(&format!("fock coordinates: [{}]{}\n", r.fock_coordinates.join(", "), if r.even { " even" } else { "" }));
    for c in &r.components {
        s.push_str(&format!(
            "component {}: weight {} {} junctures {} terms {} positive {}\n",
            c.index,
            c.weight,
            if c.peripheral { "peripheral" } else { "non-peripheral" },
            c.junctures,
            c.terms,
            c.positive
        ));
    }
    s.push_str(&format!("terms: {}  positive: {}\n", r.element.terms, r.element.positive));
    if let Some(p) = r.checks.classical_oracle {
        s.push_str(&format!("classical oracle: {}\n", if p { "match" } else { "MISMATCH" }));
    }
    s.push_str(&format!("element: {}\n", r.element.rendered));
    if let Some(x) = &r.element.x_form {
        s.push_str(&format!("x-form: {}\n", x.rendered));
    } else if r.element.x_form_available {
        s.push_str("x-form: available\n");
    }
    s
}

/// Evaluates only the element, for comparisons.
pub fn element_of(t: &Triangulation, lam: &IntegralLamination, engine: Engine, seed: Option<u64>) -> Result<QtElement, Failure> {
    let mut chooser = chooser_for(seed);
    Ok(lamination_element(t, lam, engine, chooser.as_mut())?.element)
}
