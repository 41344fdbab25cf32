//! Compatible and sane orderings of loop segments, built from orientations
//! and power-of-two weights on the regional graph.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use thiserror::Error;

use crate::lamination::{region_of_piece, slot_count, Curve, CurveSystem, RegionIndex, SmallRegion};
use crate::surface::{SlotRef, Triangulation};

/// Failures of statements that hold for every non-peripheral loop in
/// minimal position. Any of these signals a bug upstream.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("curve is peripheral")]
    Peripheral,
    #[error("inner arc segment {0} joins a narrow region to itself")]
    SelfLoop(usize),
    #[error("narrow region {0} has two ends on one arc")]
    EndsOnSameArc(usize),
    #[error("three-end region {0} inside a self-folded triangle")]
    ThreeEndsSelfFolded(usize),
    #[error("narrow region {vertex} has {valence} ends")]
    Valence { vertex: usize, valence: usize },
    #[error("{0} closed components in the regional graph")]
    SeveralTypeII(usize),
    #[error("closed component {0} has no three-valent vertex")]
    NoThreeValent(usize),
    #[error("edge set after stage {stage} is not sustainable at vertex {vertex}")]
    Unsustainable { stage: usize, vertex: usize },
    #[error("edge set after stage {0} has no vertex of partial valence one")]
    NoStartVertex(usize),
    #[error("chain {stage} terminates at one of its middle vertices")]
    TerminatesInMiddle { stage: usize },
    #[error("chains do not partition the edges of component {0}")]
    NotPartition(usize),
    #[error("assignment violates the sufficient condition: {0:?}")]
    Condition(ConditionViolation),
    #[error("arc {0} carries a repeated exponent")]
    RepeatedExponent(usize),
    #[error("no segment is smallest on both its sides in triangle {0}")]
    NoMinimalSegment(usize),
    #[error("triangle ordering does not reproduce the arc ordering on slot {0}")]
    RoundTrip(SlotRef),
    #[error("arc orderings fail the check: {0:?}")]
    Check(Witness),
}

/// Source of tie-breaking choices. `pick(n)` returns an index below `n`.
pub trait Chooser {
    fn pick(&mut self, n: usize) -> usize;
}

/// Always takes the first candidate; candidates are listed by increasing id.
#[derive(Clone, Copy, Debug, Default)]
pub struct LowestId;

impl Chooser for LowestId {
    fn pick(&mut self, _n: usize) -> usize {
        0
    }
}

impl<F: FnMut(usize) -> usize> Chooser for F {
    fn pick(&mut self, n: usize) -> usize {
        self(n) % n
    }
}

/// A piece of an arc between two adjacent junctures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InnerSegment {
    pub arc: usize,
    /// Lies between the junctures at positions `index` and `index + 1`.
    pub index: u32,
    /// Narrow region on the side of the arc's first slot.
    pub first_side: usize,
    /// Narrow region on the side of the arc's second slot.
    pub second_side: usize,
}

impl InnerSegment {
    pub fn endpoints(&self) -> [usize; 2] {
        [self.first_side, self.second_side]
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.first_side {
            self.second_side
        } else {
            self.first_side
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarrowRegion {
    pub region: SmallRegion,
    pub triangle: usize,
    /// Small-region index within the curve system.
    pub index: usize,
    /// Edge ids of its ends.
    pub ends: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    /// Has a one-valent vertex.
    Open,
    /// Every vertex is two- or three-valent.
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphComponent {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub kind: ComponentKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionalGraph {
    pub vertices: Vec<NarrowRegion>,
    pub edges: Vec<InnerSegment>,
    pub components: Vec<GraphComponent>,
    /// Component of every vertex.
    pub component_of: Vec<usize>,
}

/// Builds narrow regions and the regional graph, checking its structure.
pub fn build_regional_graph(t: &Triangulation, sys: &CurveSystem) -> Result<RegionalGraph, OrderingError> {
    let idx = RegionIndex::new(sys);
    let mut vertex_of = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut vertex = |r: SmallRegion, vertices: &mut Vec<NarrowRegion>| -> usize {
        *vertex_of.entry(idx.id(r)).or_insert_with(|| {
            let triangle = match r {
                SmallRegion::Central(t) => t,
                SmallRegion::Layer(c, _) => c.triangle,
            };
            vertices.push(NarrowRegion { region: r, triangle, index: idx.id(r), ends: Vec::new() });
            vertices.len() - 1
        })
    };
    for (e, arc) in t.arcs().iter().enumerate() {
        if arc.is_boundary() {
            continue;
        }
        let n = slot_count(sys.counts(), arc.slots[0]);
        for x in 0..n.saturating_sub(1) {
            let a = vertex(region_of_piece(sys, arc.slots[0], x + 1), &mut vertices);
            let b = vertex(region_of_piece(sys, arc.slots[1], n - 1 - x), &mut vertices);
            let id = edges.len();
            if a == b {
                return Err(OrderingError::SelfLoop(id));
            }
            edges.push(InnerSegment { arc: e, index: x, first_side: a, second_side: b });
            vertices[a].ends.push(id);
            vertices[b].ends.push(id);
        }
    }
    // renumber vertices in small-region order
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_key(|&v| vertices[v].index);
    let mut new_id = vec![0usize; vertices.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let mut sorted: Vec<NarrowRegion> = order.iter().map(|&v| vertices[v].clone()).collect();
    for v in &mut sorted {
        v.ends.sort();
    }
    for e in &mut edges {
        e.first_side = new_id[e.first_side];
        e.second_side = new_id[e.second_side];
    }
    let vertices = sorted;

    for (v, r) in vertices.iter().enumerate() {
        if r.ends.is_empty() || r.ends.len() > 3 {
            return Err(OrderingError::Valence { vertex: v, valence: r.ends.len() });
        }
        let arcs: BTreeSet<usize> = r.ends.iter().map(|&e| edges[e].arc).collect();
        if arcs.len() != r.ends.len() {
            return Err(OrderingError::EndsOnSameArc(v));
        }
        if r.ends.len() == 3 && t.is_self_folded(r.triangle) {
            return Err(OrderingError::ThreeEndsSelfFolded(v));
        }
    }

    let mut component_of = vec![usize::MAX; vertices.len()];
    let mut components = Vec::new();
    for start in 0..vertices.len() {
        if component_of[start] != usize::MAX {
            continue;
        }
        let c = components.len();
        let mut stack = vec![start];
        let mut vs = Vec::new();
        component_of[start] = c;
        while let Some(v) = stack.pop() {
            vs.push(v);
            for &e in &vertices[v].ends {
                let w = edges[e].other(v);
                if component_of[w] == usize::MAX {
                    component_of[w] = c;
                    stack.push(w);
                }
            }
        }
        vs.sort();
        let mut es: Vec<usize> = vs.iter().flat_map(|&v| vertices[v].ends.iter().copied()).collect();
        es.sort();
        es.dedup();
        let kind =
            if vs.iter().any(|&v| vertices[v].ends.len() == 1) { ComponentKind::Open } else { ComponentKind::Closed };
        components.push(GraphComponent { vertices: vs, edges: es, kind });
    }
    let g = RegionalGraph { vertices, edges, components, component_of };
    let closed: Vec<usize> = g.closed_components().collect();
    if closed.len() > 1 {
        return Err(OrderingError::SeveralTypeII(closed.len()));
    }
    for c in closed {
        if !g.components[c].vertices.iter().any(|&v| g.valence(v) == 3) {
            return Err(OrderingError::NoThreeValent(c));
        }
    }
    Ok(g)
}

impl RegionalGraph {
    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].ends.len()
    }

    /// Pairs of narrow regions sharing more than one end, with the count.
    pub fn parallel_edges(&self) -> Vec<((usize, usize), usize)> {
        let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in &self.edges {
            *count.entry((e.first_side.min(e.second_side), e.first_side.max(e.second_side))).or_default() += 1;
        }
        count.into_iter().filter(|&(_, m)| m > 1).collect()
    }

    pub fn closed_components(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.iter().enumerate().filter(|(_, c)| c.kind == ComponentKind::Closed).map(|(i, _)| i)
    }

    pub fn kind_of_vertex(&self, v: usize) -> ComponentKind {
        self.components[self.component_of[v]].kind
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A trail in the regional graph: `vertices[i]` and `vertices[i + 1]` are the
/// endpoints of `edges[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Chain {
    pub fn departing(&self) -> usize {
        self.vertices[0]
    }

    pub fn terminating(&self) -> usize {
        *self.vertices.last().expect("chain has vertices")
    }

    pub fn middle(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> Chain {
        Chain { edges: self.edges.iter().rev().copied().collect(), vertices: self.vertices.iter().rev().copied().collect() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Chains of one component in construction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentChains {
    pub component: usize,
    pub chains: Vec<Chain>,
    /// The departing vertex of the first chain of a closed component.
    pub special_vertex: Option<usize>,
}

fn partial_valence(g: &RegionalGraph, remaining: &[bool], v: usize) -> usize {
    g.vertices[v].ends.iter().filter(|&&e| remaining[e]).count()
}

/// Checks partial valences of a remaining edge set inside a component.
pub fn check_sustainable(
    g: &RegionalGraph,
    comp: usize,
    remaining: &[bool],
    stage: usize,
) -> Result<(), OrderingError> {
    let mut has_one = false;
    let mut nonempty = false;
    for &v in &g.components[comp].vertices {
        let s = partial_valence(g, remaining, v);
        nonempty |= s > 0;
        has_one |= s == 1;
        let ok = match g.valence(v) {
            2 => s == 0 || s == 2,
            3 => s != 2,
            _ => true,
        };
        if !ok {
            return Err(OrderingError::Unsustainable { stage, vertex: v });
        }
    }
    if nonempty && !has_one {
        return Err(OrderingError::NoStartVertex(stage));
    }
    Ok(())
}

/// The first chain of a closed component: a simple cycle through a
/// three-valent vertex, starting and ending there.
pub fn initial_closed_chain(
    g: &RegionalGraph,
    comp: usize,
    chooser: &mut dyn Chooser,
) -> Result<Chain, OrderingError> {
    let c = &g.components[comp];
    let e0 = c.edges[chooser.pick(c.edges.len())];
    let ends = g.edges[e0].endpoints();
    let v0 = ends[chooser.pick(2)];
    let mut vertices = vec![v0, g.edges[e0].other(v0)];
    let mut edges = vec![e0];
    let mut seen = BTreeMap::from([(vertices[0], 0usize)]);
    let start = loop {
        let w = *vertices.last().expect("nonempty");
        if let Some(&i) = seen.get(&w) {
            break i;
        }
        seen.insert(w, vertices.len() - 1);
        let last = *edges.last().expect("nonempty");
        let next: Vec<usize> = g.vertices[w].ends.iter().copied().filter(|&e| e != last).collect();
        let e = next[chooser.pick(next.len())];
        edges.push(e);
        vertices.push(g.edges[e].other(w));
    };
    // cycle vertices[start..], edges[start..]
    let cyc_edges = edges[start..].to_vec();
    let cyc_vertices = vertices[start..vertices.len() - 1].to_vec();
    let three: Vec<usize> = (0..cyc_vertices.len()).filter(|&i| g.valence(cyc_vertices[i]) == 3).collect();
    if three.is_empty() {
        return Err(OrderingError::NoThreeValent(comp));
    }
    let k = three[chooser.pick(three.len())];
    let n = cyc_edges.len();
    let mut chain = Chain { edges: Vec::with_capacity(n), vertices: Vec::with_capacity(n + 1) };
    for i in 0..n {
        chain.edges.push(cyc_edges[(k + i) % n]);
        chain.vertices.push(cyc_vertices[(k + i) % n]);
    }
    chain.vertices.push(cyc_vertices[k]);
    Ok(chain)
}

/// Partitions every component's edges into chains, checking sustainability
/// of each intermediate edge set.
pub fn chain_decomposition(g: &RegionalGraph, chooser: &mut dyn Chooser) -> Result<Vec<ComponentChains>, OrderingError> {
    let mut out = Vec::new();
    for (ci, comp) in g.components.iter().enumerate() {
        let mut remaining = vec![false; g.edges.len()];
        for &e in &comp.edges {
            remaining[e] = true;
        }
        let mut chains = Vec::new();
        let mut special_vertex = None;
        if comp.kind == ComponentKind::Closed {
            let c0 = initial_closed_chain(g, ci, chooser)?;
            for &e in &c0.edges {
                remaining[e] = false;
            }
            special_vertex = Some(c0.departing());
            chains.push(c0);
        }
        check_sustainable(g, ci, &remaining, chains.len())?;
        while remaining.iter().any(|&r| r) {
            let starts: Vec<usize> =
                comp.vertices.iter().copied().filter(|&v| partial_valence(g, &remaining, v) == 1).collect();
            if starts.is_empty() {
                return Err(OrderingError::NoStartVertex(chains.len()));
            }
            let v = starts[chooser.pick(starts.len())];
            let e = *g.vertices[v].ends.iter().find(|&&e| remaining[e]).expect("partial valence one");
            let mut chain = Chain { edges: vec![e], vertices: vec![v, g.edges[e].other(v)] };
            let mut used = BTreeSet::from([e]);
            loop {
                let w = chain.terminating();
                let next: Vec<usize> =
                    g.vertices[w].ends.iter().copied().filter(|e| remaining[*e] && !used.contains(e)).collect();
                if next.is_empty() {
                    break;
                }
                let e = next[chooser.pick(next.len())];
                used.insert(e);
                chain.edges.push(e);
                chain.vertices.push(g.edges[e].other(w));
            }
            if chain.middle().contains(&chain.terminating()) {
                chain = chain.reversed();
            }
            if chain.middle().contains(&chain.terminating()) {
                return Err(OrderingError::TerminatesInMiddle { stage: chains.len() });
            }
            for &e in &chain.edges {
                remaining[e] = false;
            }
            chains.push(chain);
            check_sustainable(g, ci, &remaining, chains.len())?;
        }
        let mut all: Vec<usize> = chains.iter().flat_map(|c| c.edges.iter().copied()).collect();
        all.sort();
        if all != comp.edges {
            return Err(OrderingError::NotPartition(ci));
        }
        out.push(ComponentChains { component: ci, chains, special_vertex });
    }
    Ok(out)
}

/// Orientation and weight exponent of one regional-graph edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeLabel {
    pub from: usize,
    pub to: usize,
    pub exponent: u32,
}

/// Orients edges along their chains and numbers them 1, 2, ... along the
/// closed component first, then the others, each running from the last
/// chain to the first.
pub fn assign_orientations_weights(g: &RegionalGraph, chains: &[ComponentChains]) -> Vec<EdgeLabel> {
    let mut labels = vec![EdgeLabel { from: 0, to: 0, exponent: 0 }; g.edges.len()];
    let mut order: Vec<&ComponentChains> = chains.iter().collect();
    order.sort_by_key(|c| (g.components[c.component].kind != ComponentKind::Closed, c.component));
    let mut next = 1u32;
    for cc in order {
        for chain in cc.chains.iter().rev() {
            for (i, &e) in chain.edges.iter().enumerate() {
                labels[e] = EdgeLabel { from: chain.vertices[i], to: chain.vertices[i + 1], exponent: next };
                next += 1;
            }
        }
    }
    labels
}

/// A failed condition of the sufficient criterion on edge labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionViolation {
    /// Condition 1: exponent zero.
    NonPositiveExponent { edge: usize },
    /// Condition 1: two edges share an exponent.
    RepeatedExponent { edges: [usize; 2] },
    /// Orientation does not join the edge's endpoints.
    BadEndpoints { edge: usize },
    /// Condition 2 at a two-valent vertex.
    TwoValent { vertex: usize },
    /// Condition 3 at a three-valent vertex of an open component.
    OpenThreeValent { vertex: usize },
    /// Condition 3 at a three-valent vertex of a closed component.
    ClosedThreeValent { vertex: usize },
    /// Condition 4: an open-component edge weighs no more than a
    /// closed-component edge.
    ClosedOutweighs { open_edge: usize, closed_edge: usize },
}

impl ConditionViolation {
    pub fn condition(&self) -> u8 {
        match self {
            ConditionViolation::NonPositiveExponent { .. }
            | ConditionViolation::RepeatedExponent { .. }
            | ConditionViolation::BadEndpoints { .. } => 1,
            ConditionViolation::TwoValent { .. } => 2,
            ConditionViolation::OpenThreeValent { .. } | ConditionViolation::ClosedThreeValent { .. } => 3,
            ConditionViolation::ClosedOutweighs { .. } => 4,
        }
    }
}

/// Checks conditions 1 to 4 on orientations and weights, returning every
/// violation found.
pub fn verify_sufficient_condition(g: &RegionalGraph, labels: &[EdgeLabel]) -> Vec<ConditionViolation> {
    let mut out = Vec::new();
    let mut by_exp: BTreeMap<u32, usize> = BTreeMap::new();
    for (e, l) in labels.iter().enumerate() {
        let ends = g.edges[e].endpoints();
        if !((l.from == ends[0] && l.to == ends[1]) || (l.from == ends[1] && l.to == ends[0])) {
            out.push(ConditionViolation::BadEndpoints { edge: e });
        }
        if l.exponent == 0 {
            out.push(ConditionViolation::NonPositiveExponent { edge: e });
        }
        if let Some(&f) = by_exp.get(&l.exponent) {
            out.push(ConditionViolation::RepeatedExponent { edges: [f, e] });
        } else {
            by_exp.insert(l.exponent, e);
        }
    }
    for v in 0..g.vertices.len() {
        let ends = &g.vertices[v].ends;
        let incoming = |e: usize| labels[e].to == v;
        let m = |e: usize| labels[e].exponent as i64;
        match ends.len() {
            2 => {
                let (a, b) = (ends[0], ends[1]);
                let ok = (incoming(a) && !incoming(b) && m(b) == m(a) + 1)
                    || (incoming(b) && !incoming(a) && m(a) == m(b) + 1);
                if !ok {
                    out.push(ConditionViolation::TwoValent { vertex: v });
                }
            }
            3 => {
                if g.kind_of_vertex(v) == ComponentKind::Open {
                    let ok = (0..3).any(|i| {
                        (0..3).filter(|&o| o != i).any(|o| {
                            let r = 3 - i - o;
                            incoming(ends[i])
                                && !incoming(ends[o])
                                && m(ends[o]) == m(ends[i]) + 1
                                && m(ends[r]) < m(ends[i])
                        })
                    });
                    if !ok {
                        out.push(ConditionViolation::OpenThreeValent { vertex: v });
                    }
                } else {
                    let ins = ends.iter().filter(|&&e| incoming(e)).count();
                    if ins == 0 || ins == 3 {
                        out.push(ConditionViolation::ClosedThreeValent { vertex: v });
                    }
                }
            }
            _ => {}
        }
    }
    let mut open_min: Option<(u32, usize)> = None;
    let mut closed_max: Option<(u32, usize)> = None;
    for (e, l) in labels.iter().enumerate() {
        let kind = g.kind_of_vertex(g.edges[e].first_side);
        let key = (l.exponent, e);
        match kind {
            ComponentKind::Open => open_min = Some(open_min.map_or(key, |k| k.min(key))),
            ComponentKind::Closed => closed_max = Some(closed_max.map_or(key, |k| k.max(key))),
        }
    }
    if let (Some((a, open_edge)), Some((b, closed_edge))) = (open_min, closed_max) {
        if a <= b {
            out.push(ConditionViolation::ClosedOutweighs { open_edge, closed_edge });
        }
    }
    out
}

/// Orientation and exponent on an inner arc segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentLabel {
    /// Juncture `index` is smaller than juncture `index + 1`.
    pub ascending: bool,
    pub exponent: u32,
}

/// Moves edge labels onto inner arc segments: crossing the segment along
/// the edge, the segment points to the right, toward its smaller juncture.
pub fn transfer(g: &RegionalGraph, labels: &[EdgeLabel]) -> Vec<SegmentLabel> {
    g.edges
        .iter()
        .zip(labels)
        .map(|(e, l)| SegmentLabel { ascending: l.from != e.first_side, exponent: l.exponent })
        .collect()
}

/// Ranks of `n` junctures from labels on the `n - 1` segments between them,
/// by splitting at the largest exponent.
pub fn dyadic_ranks(labels: &[SegmentLabel]) -> Option<Vec<u32>> {
    let n = labels.len() + 1;
    let exps: BTreeSet<u32> = labels.iter().map(|l| l.exponent).collect();
    if exps.len() != labels.len() {
        return None;
    }
    let mut order = Vec::with_capacity(n);
    // (lo, hi) ranges of junctures, processed so that `order` grows ascending
    let mut stack = vec![(0usize, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if lo == hi {
            order.push(lo);
            continue;
        }
        let d = (lo..hi).max_by_key(|&i| labels[i].exponent).expect("nonempty range");
        let (left, right) = ((lo, d), (d + 1, hi));
        if labels[d].ascending {
            stack.push(right);
            stack.push(left);
        } else {
            stack.push(left);
            stack.push(right);
        }
    }
    let mut ranks = vec![0u32; n];
    for (r, &j) in order.iter().enumerate() {
        ranks[j] = r as u32;
    }
    Some(ranks)
}

/// Ranks from the partial sums of signed powers of two.
pub fn signed_sum_ranks(labels: &[SegmentLabel]) -> Option<Vec<u32>> {
    let mut values = vec![BigInt::from(0)];
    for l in labels {
        let step = BigInt::from(1) << l.exponent as usize;
        let last = values.last().expect("nonempty").clone();
        values.push(if l.ascending { last + step } else { last - step });
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
    if idx.windows(2).any(|w| values[w[0]] == values[w[1]]) {
        return None;
    }
    let mut ranks = vec![0u32; values.len()];
    for (r, &j) in idx.iter().enumerate() {
        ranks[j] = r as u32;
    }
    Some(ranks)
}

/// Segment labels grouped by arc, in position order.
pub fn labels_per_arc(t: &Triangulation, g: &RegionalGraph, labels: &[SegmentLabel]) -> Vec<Vec<SegmentLabel>> {
    let mut per: Vec<Vec<(u32, SegmentLabel)>> = vec![Vec::new(); t.arc_count()];
    for (e, l) in g.edges.iter().zip(labels) {
        per[e.arc].push((e.index, *l));
    }
    per.into_iter()
        .map(|mut v| {
            v.sort_by_key(|p| p.0);
            v.into_iter().map(|p| p.1).collect()
        })
        .collect()
}

/// Arc rank of every juncture, indexed by juncture id.
pub fn dyadic_arc_orderings(
    t: &Triangulation,
    sys: &CurveSystem,
    g: &RegionalGraph,
    labels: &[SegmentLabel],
) -> Result<Vec<u32>, OrderingError> {
    let per = labels_per_arc(t, g, labels);
    let mut rank = vec![0u32; sys.junctures().len()];
    for e in 0..t.arc_count() {
        let range = sys.arc_junctures(e);
        if range.is_empty() {
            continue;
        }
        debug_assert_eq!(per[e].len() + 1, range.len());
        let ranks = dyadic_ranks(&per[e]).ok_or(OrderingError::RepeatedExponent(e))?;
        for (j, r) in range.zip(ranks) {
            rank[j] = r;
        }
    }
    Ok(rank)
}

/// Segment ids of one side, sorted by the arc rank of their juncture there.
fn side_order(t: &Triangulation, sys: &CurveSystem, rank: &[u32], s: SlotRef) -> Vec<usize> {
    let n = slot_count(sys.counts(), s);
    let mut v: Vec<(u32, usize)> = (0..n)
        .map(|p| {
            let (j, side) = sys.juncture_at(t, s, p);
            (rank[j], sys.juncture_segments(j)[side])
        })
        .collect();
    v.sort();
    v.into_iter().map(|p| p.1).collect()
}

/// Rank (from 1) of every segment within its triangle, erasing at each step
/// the segment smallest on both of its sides.
pub fn triangle_orderings(t: &Triangulation, sys: &CurveSystem, rank: &[u32]) -> Result<Vec<u32>, OrderingError> {
    let mut out = vec![0u32; sys.segments().len()];
    for tri in 0..t.triangle_count() {
        let sides: [Vec<usize>; 3] = [0u8, 1, 2].map(|i| side_order(t, sys, rank, SlotRef::new(tri, i)));
        let mut head = [0usize; 3];
        let total = sys.counts()[tri].iter().sum::<u32>();
        for r in 1..=total {
            let mins: [Option<usize>; 3] = [0, 1, 2].map(|i| sides[i].get(head[i]).copied());
            let found = (0..3).find_map(|i| {
                let s = mins[i]?;
                let c = sys.segments()[s].corner;
                let (a, b) = (c.first_slot() as usize, c.second_slot() as usize);
                (mins[a] == Some(s) && mins[b] == Some(s)).then_some((s, a, b))
            });
            let (s, a, b) = found.ok_or(OrderingError::NoMinimalSegment(tri))?;
            out[s] = r;
            head[a] += 1;
            head[b] += 1;
        }
        for (i, side) in sides.iter().enumerate() {
            if side.windows(2).any(|w| out[w[0]] >= out[w[1]]) {
                return Err(OrderingError::RoundTrip(SlotRef::new(tri, i as u8)));
            }
        }
    }
    Ok(out)
}

/// A reason arc orderings cannot come from triangle orderings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Two segments of one corner ordered oppositely on its two sides.
    Incompatible { triangle: usize, segments: [usize; 2] },
    /// Segments in the three corners 0, 1, 2 with cyclically ordered
    /// endpoints.
    Insane { triangle: usize, segments: [usize; 3] },
}

/// Brute-force check of compatibility for every same-corner pair and sanity
/// for every triple spanning three corners.
pub fn check_compatibility_sanity(t: &Triangulation, sys: &CurveSystem, rank: &[u32]) -> Result<(), Witness> {
    let end_rank = |seg: usize, slot: u8| -> u32 {
        let c = sys.segments()[seg].corner;
        let end = if c.first_slot() == slot { 0 } else { 1 };
        rank[sys.segment_ends(seg)[end]]
    };
    for tri in 0..t.triangle_count() {
        let corner_segs: [Vec<usize>; 3] = [0u8, 1, 2].map(|k| {
            sys.segments()
                .iter()
                .enumerate()
                .filter(|(_, s)| s.corner.triangle == tri && s.corner.index == k)
                .map(|(i, _)| i)
                .collect()
        });
        for (k, segs) in corner_segs.iter().enumerate() {
            let (a, b) = (((k + 1) % 3) as u8, ((k + 2) % 3) as u8);
            for (i, &x) in segs.iter().enumerate() {
                for &y in &segs[i + 1..] {
                    if (end_rank(x, a) < end_rank(y, a)) != (end_rank(x, b) < end_rank(y, b)) {
                        return Err(Witness::Incompatible { triangle: tri, segments: [x, y] });
                    }
                }
            }
        }
        if t.is_self_folded(tri) {
            continue;
        }
        for &a in &corner_segs[0] {
            for &b in &corner_segs[1] {
                for &c in &corner_segs[2] {
                    // corner 0 meets slots 1,2; corner 1 meets 2,0; corner 2 meets 0,1
                    let on2 = end_rank(a, 2) < end_rank(b, 2);
                    let on0 = end_rank(b, 0) < end_rank(c, 0);
                    let on1 = end_rank(c, 1) < end_rank(a, 1);
                    if on2 == on0 && on0 == on1 {
                        return Err(Witness::Insane { triangle: tri, segments: [a, b, c] });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Everything produced while solving the ordering problem for one curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingSolution {
    pub graph: RegionalGraph,
    pub chains: Vec<ComponentChains>,
    pub edge_labels: Vec<EdgeLabel>,
    pub segment_labels: Vec<SegmentLabel>,
    /// Arc rank of every juncture.
    pub juncture_rank: Vec<u32>,
    /// Rank from 1 of every loop segment within its triangle.
    pub segment_rank: Vec<u32>,
}

impl OrderingSolution {
    /// Segment ids of a triangle, lowest rank first.
    pub fn elevation_order(&self, sys: &CurveSystem, tri: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..sys.segments().len()).filter(|&s| sys.segments()[s].corner.triangle == tri).collect();
        v.sort_by_key(|&s| self.segment_rank[s]);
        v
    }

    /// The regional graph in DOT syntax, edges directed by the assignment.
    pub fn to_dot(&self) -> String {
        let g = &self.graph;
        let mut s = String::from("digraph regional {\n");
        for (v, r) in g.vertices.iter().enumerate() {
            let kind = match g.kind_of_vertex(v) {
                ComponentKind::Open => "I",
                ComponentKind::Closed => "II",
            };
            let _ = writeln!(
                s,
                "  v{v} [label=\"t{} r{} ends={} type {kind}\"];",
                r.triangle,
                r.index,
                r.ends.len()
            );
        }
        for (e, l) in self.edge_labels.iter().enumerate() {
            let _ = writeln!(s, "  v{} -> v{} [label=\"arc {} m={}\"];", l.from, l.to, g.edges[e].arc, l.exponent);
        }
        s.push_str("}\n");
        s
    }
}

/// Runs the whole construction for a non-peripheral curve, asserting every
/// structural statement along the way.
pub fn solve(t: &Triangulation, curve: &Curve, chooser: &mut dyn Chooser) -> Result<OrderingSolution, OrderingError> {
    if curve.is_peripheral() {
        return Err(OrderingError::Peripheral);
    }
    let sys = curve.system();
    let graph = build_regional_graph(t, sys)?;
    let chains = chain_decomposition(&graph, chooser)?;
    let edge_labels = assign_orientations_weights(&graph, &chains);
    if let Some(v) = verify_sufficient_condition(&graph, &edge_labels).into_iter().next() {
        return Err(OrderingError::Condition(v));
    }
    let segment_labels = transfer(&graph, &edge_labels);
    let juncture_rank = dyadic_arc_orderings(t, sys, &graph, &segment_labels)?;
    let segment_rank = triangle_orderings(t, sys, &juncture_rank)?;
    check_compatibility_sanity(t, sys, &juncture_rank).map_err(OrderingError::Check)?;
    Ok(OrderingSolution { graph, chains, edge_labels, segment_labels, juncture_rank, segment_rank })
}
