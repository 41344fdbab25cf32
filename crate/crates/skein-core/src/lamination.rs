//! Normal curves given by per-corner segment counts, their junctures and
//! loop segments, complementary regions, and integral laminations.
//!
//! Inside a corner the segments are parallel and numbered by layer, layer 0
//! closest to the corner's vertex. On a side `i` of a triangle, positions are
//! counted clockwise: first the segments of corner `i + 1` from the vertex
//! outward, then those of corner `i + 2` from the outside in. Positions along
//! an arc follow the clockwise direction of the arc's first slot.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::surface::{Corner, SlotRef, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("expected corner counts for {expected} triangles, found {found}")]
    CountRows { expected: usize, found: usize },
    #[error("curve crosses boundary arc at slot {0}")]
    CrossesBoundary(SlotRef),
    #[error("segment in self-folded corner {0:?}")]
    SelfFoldedCorner(Corner),
    #[error("arc {arc}: {first} endpoints on one side, {second} on the other")]
    EdgeMismatch { arc: usize, first: u32, second: u32 },
    #[error("curve is empty")]
    Empty,
    #[error("corner counts describe {0} components, expected one")]
    NotConnected(usize),
    #[error("traversal does not match the corner counts")]
    TraversalMismatch,
    #[error("curve bounds a disk without punctures")]
    Contractible,
    #[error("declared peripheral = {declared}, computed {computed}")]
    PeripheralMismatch { declared: bool, computed: bool },
    #[error("negative weight {weight} on a non-peripheral component")]
    NegativeWeight { weight: i64 },
    #[error("components {0} and {1} intersect")]
    Intersecting(usize, usize),
}

/// A loop segment: layer `layer` of a corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub corner: Corner,
    pub layer: u32,
}

/// A crossing point of the curve with an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Juncture {
    pub arc: usize,
    pub position: u32,
}

/// One step of a traversal: the curve enters `corner` through slot `entry`
/// and leaves through slot `exit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub corner: Corner,
    pub entry: u8,
    pub exit: u8,
}

/// Segments, junctures and their incidences for a corner-count vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSystem {
    counts: Vec<[u32; 3]>,
    segments: Vec<Segment>,
    corner_offset: Vec<[usize; 3]>,
    junctures: Vec<Juncture>,
    arc_offset: Vec<usize>,
    /// Juncture at the first-slot end and at the second-slot end.
    seg_ends: Vec<[usize; 2]>,
    /// Segment meeting the juncture from the arc's first slot, and from its
    /// second slot.
    juncture_segs: Vec<[usize; 2]>,
}

pub fn slot_count(counts: &[[u32; 3]], s: SlotRef) -> u32 {
    let c = counts[s.triangle];
    c[((s.slot + 1) % 3) as usize] + c[((s.slot + 2) % 3) as usize]
}

/// Builds junctures and loop segments, checking edge matching, boundary and
/// self-folded corners.
pub fn build_junctures(t: &Triangulation, counts: &[[u32; 3]]) -> Result<CurveSystem, CurveError> {
    if counts.len() != t.triangle_count() {
        return Err(CurveError::CountRows { expected: t.triangle_count(), found: counts.len() });
    }
    for tri in 0..t.triangle_count() {
        if let Some(c) = t.self_folded_corner(tri) {
            if counts[tri][c.index as usize] > 0 {
                return Err(CurveError::SelfFoldedCorner(c));
            }
        }
    }
    let mut arc_offset = vec![0usize; t.arc_count() + 1];
    for (e, arc) in t.arcs().iter().enumerate() {
        let n0 = slot_count(counts, arc.slots[0]);
        let n = if arc.is_boundary() {
            if n0 > 0 {
                return Err(CurveError::CrossesBoundary(arc.slots[0]));
            }
            0
        } else {
            let n1 = slot_count(counts, arc.slots[1]);
            if n0 != n1 {
                return Err(CurveError::EdgeMismatch { arc: e, first: n0, second: n1 });
            }
            n0
        };
        arc_offset[e + 1] = arc_offset[e] + n as usize;
    }

    let mut segments = Vec::new();
    let mut corner_offset = vec![[0usize; 3]; t.triangle_count()];
    for tri in 0..t.triangle_count() {
        for k in 0..3u8 {
            corner_offset[tri][k as usize] = segments.len();
            for layer in 0..counts[tri][k as usize] {
                segments.push(Segment { corner: Corner::new(tri, k), layer });
            }
        }
    }
    let mut junctures = Vec::with_capacity(arc_offset[t.arc_count()]);
    for e in 0..t.arc_count() {
        for x in 0..(arc_offset[e + 1] - arc_offset[e]) {
            junctures.push(Juncture { arc: e, position: x as u32 });
        }
    }

    let mut sys = CurveSystem {
        counts: counts.to_vec(),
        segments,
        corner_offset,
        junctures,
        arc_offset,
        seg_ends: Vec::new(),
        juncture_segs: Vec::new(),
    };
    let mut juncture_segs = vec![[usize::MAX; 2]; sys.junctures.len()];
    let mut seg_ends = vec![[0usize; 2]; sys.segments.len()];
    for (id, seg) in sys.segments.iter().enumerate() {
        for (end, slot) in [seg.corner.first_slot(), seg.corner.second_slot()].into_iter().enumerate() {
            let s = SlotRef::new(seg.corner.triangle, slot);
            let (j, side) = sys.juncture_at(t, s, sys.side_position(s, *seg));
            seg_ends[id][end] = j;
            debug_assert_eq!(juncture_segs[j][side], usize::MAX);
            juncture_segs[j][side] = id;
        }
    }
    sys.seg_ends = seg_ends;
    sys.juncture_segs = juncture_segs;
    Ok(sys)
}

impl CurveSystem {
    pub fn counts(&self) -> &[[u32; 3]] {
        &self.counts
    }

    pub fn count(&self, c: Corner) -> u32 {
        self.counts[c.triangle][c.index as usize]
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_id(&self, s: Segment) -> usize {
        self.corner_offset[s.corner.triangle][s.corner.index as usize] + s.layer as usize
    }

    pub fn junctures(&self) -> &[Juncture] {
        &self.junctures
    }

    pub fn juncture_id(&self, j: Juncture) -> usize {
        self.arc_offset[j.arc] + j.position as usize
    }

    /// Juncture count on arc `e`.
    pub fn crossings(&self, e: usize) -> usize {
        self.arc_offset[e + 1] - self.arc_offset[e]
    }

    /// Juncture ids on arc `e` in position order.
    pub fn arc_junctures(&self, e: usize) -> core::ops::Range<usize> {
        self.arc_offset[e]..self.arc_offset[e + 1]
    }

    /// Junctures at the first-slot and second-slot ends of a segment.
    pub fn segment_ends(&self, seg: usize) -> [usize; 2] {
        self.seg_ends[seg]
    }

    /// Segments meeting a juncture from the arc's first and second slot.
    pub fn juncture_segments(&self, j: usize) -> [usize; 2] {
        self.juncture_segs[j]
    }

    /// Position of a segment's endpoint along side `s`, counted clockwise.
    pub fn side_position(&self, s: SlotRef, seg: Segment) -> u32 {
        let n = slot_count(&self.counts, s);
        if seg.corner.first_slot() == s.slot {
            n - 1 - seg.layer
        } else {
            seg.layer
        }
    }

    /// The juncture at side position `p` of slot `s`, with the side index
    /// (0 if `s` is the arc's first slot).
    pub fn juncture_at(&self, t: &Triangulation, s: SlotRef, p: u32) -> (usize, usize) {
        let e = t.arc_at(s);
        let n = self.crossings(e) as u32;
        let arc = &t.arcs()[e];
        if arc.slots[0] == s {
            (self.arc_offset[e] + p as usize, 0)
        } else {
            (self.arc_offset[e] + (n - 1 - p) as usize, 1)
        }
    }

    /// The segment on the other side of juncture `j` from `seg`.
    pub fn across(&self, j: usize, seg: usize) -> usize {
        let [a, b] = self.juncture_segs[j];
        if a == seg {
            b
        } else {
            a
        }
    }

    /// Connected components as cyclic segment sequences. Each starts at its
    /// lowest segment id and leaves through that segment's second-slot end.
    pub fn components(&self) -> Vec<Vec<(usize, u8)>> {
        let mut seen = vec![false; self.segments.len()];
        let mut out = Vec::new();
        for start in 0..self.segments.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut seg, mut exit_end) = (start, 1usize);
            while !seen[seg] {
                seen[seg] = true;
                cycle.push((seg, exit_end as u8));
                let j = self.seg_ends[seg][exit_end];
                seg = self.across(j, seg);
                exit_end = if self.seg_ends[seg][0] == j { 1 } else { 0 };
            }
            out.push(cycle);
        }
        out
    }

    /// The traversal steps of one component cycle.
    pub fn steps(&self, cycle: &[(usize, u8)]) -> Vec<Step> {
        cycle
            .iter()
            .map(|&(seg, exit_end)| {
                let c = self.segments[seg].corner;
                let (a, b) = (c.first_slot(), c.second_slot());
                if exit_end == 1 {
                    Step { corner: c, entry: a, exit: b }
                } else {
                    Step { corner: c, entry: b, exit: a }
                }
            })
            .collect()
    }

    /// Counts restricted to the segments of one cycle.
    pub fn cycle_counts(&self, cycle: &[(usize, u8)]) -> Vec<[u32; 3]> {
        let mut c = vec![[0u32; 3]; self.counts.len()];
        for &(seg, _) in cycle {
            let s = self.segments[seg];
            c[s.corner.triangle][s.corner.index as usize] += 1;
        }
        c
    }
}

/// A small region: a piece of one triangle cut by loop segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SmallRegion {
    /// The piece bounded by the outermost segment of every occupied corner.
    Central(usize),
    /// Layer `p` of a corner: the piece between segments `p - 1` and `p`, or
    /// between the vertex and segment 0 when `p = 0`.
    Layer(Corner, u32),
}

/// A component of the surface cut along the curve system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementPiece {
    pub regions: Vec<SmallRegion>,
    /// Euler characteristic with punctures filled in.
    pub euler: i64,
    pub punctures: usize,
    pub marked_points: usize,
    pub boundary_pieces: usize,
}

impl ComplementPiece {
    pub fn is_once_punctured_disk(&self) -> bool {
        self.euler == 1 && self.punctures == 1 && self.marked_points == 0 && self.boundary_pieces == 0
    }

    /// An annulus between the curve and one whole boundary circle.
    pub fn is_collar(&self) -> bool {
        self.euler == 0 && self.punctures == 0 && self.boundary_pieces > 0
    }

    pub fn is_empty_disk(&self) -> bool {
        self.euler == 1 && self.punctures == 0 && self.marked_points == 0 && self.boundary_pieces == 0
    }

    /// Contains no puncture and no part of the boundary.
    pub fn is_closed_off(&self) -> bool {
        self.punctures == 0 && self.marked_points == 0 && self.boundary_pieces == 0
    }
}

/// Dense indexing of small regions.
#[derive(Clone, Debug)]
pub struct RegionIndex {
    base: Vec<usize>,
    layer_base: Vec<[usize; 3]>,
    regions: Vec<SmallRegion>,
}

impl RegionIndex {
    pub fn new(sys: &CurveSystem) -> Self {
        let mut base = Vec::new();
        let mut layer_base = Vec::new();
        let mut regions = Vec::new();
        for (t, c) in sys.counts.iter().enumerate() {
            base.push(regions.len());
            regions.push(SmallRegion::Central(t));
            let mut lb = [0usize; 3];
            for k in 0..3u8 {
                lb[k as usize] = regions.len();
                for p in 0..c[k as usize] {
                    regions.push(SmallRegion::Layer(Corner::new(t, k), p));
                }
            }
            layer_base.push(lb);
        }
        RegionIndex { base, layer_base, regions }
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn region(&self, id: usize) -> SmallRegion {
        self.regions[id]
    }

    pub fn id(&self, r: SmallRegion) -> usize {
        match r {
            SmallRegion::Central(t) => self.base[t],
            SmallRegion::Layer(c, p) => self.layer_base[c.triangle][c.index as usize] + p as usize,
        }
    }
}

/// The region containing piece `q` (of `N + 1`) of side `s`.
pub fn region_of_piece(sys: &CurveSystem, s: SlotRef, q: u32) -> SmallRegion {
    let t = s.triangle;
    let c1 = Corner::new(t, (s.slot + 1) % 3);
    let c2 = Corner::new(t, (s.slot + 2) % 3);
    let a = sys.count(c1);
    let n = a + sys.count(c2);
    if q < a {
        SmallRegion::Layer(c1, q)
    } else if q == a {
        SmallRegion::Central(t)
    } else {
        SmallRegion::Layer(c2, n - q)
    }
}

/// The regions below and above a segment (toward and away from its vertex).
pub fn regions_beside(sys: &CurveSystem, seg: Segment) -> (SmallRegion, SmallRegion) {
    let below = SmallRegion::Layer(seg.corner, seg.layer);
    let above = if seg.layer + 1 < sys.count(seg.corner) {
        SmallRegion::Layer(seg.corner, seg.layer + 1)
    } else {
        SmallRegion::Central(seg.corner.triangle)
    };
    (below, above)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (x, y) = (self.find(a), self.find(b));
        if x != y {
            self.0[x.max(y)] = x.min(y);
        }
    }
}

/// Pieces of the surface cut along the curve system, and the piece of every
/// small region.
pub fn complement(t: &Triangulation, sys: &CurveSystem) -> (Vec<ComplementPiece>, Vec<usize>) {
    let idx = RegionIndex::new(sys);
    let mut dsu = Dsu((0..idx.len()).collect());
    for arc in t.arcs() {
        if arc.is_boundary() {
            continue;
        }
        let n = slot_count(&sys.counts, arc.slots[0]);
        for q in 0..=n {
            let a = idx.id(region_of_piece(sys, arc.slots[0], q));
            let b = idx.id(region_of_piece(sys, arc.slots[1], n - q));
            dsu.union(a, b);
        }
    }
    let mut piece_of_root = BTreeMap::new();
    let mut piece = vec![0usize; idx.len()];
    for r in 0..idx.len() {
        let root = dsu.find(r);
        let next = piece_of_root.len();
        piece[r] = *piece_of_root.entry(root).or_insert(next);
    }
    let count = piece_of_root.len();
    let mut pieces: Vec<ComplementPiece> = (0..count)
        .map(|_| ComplementPiece { regions: Vec::new(), euler: 0, punctures: 0, marked_points: 0, boundary_pieces: 0 })
        .collect();
    for r in 0..idx.len() {
        let p = &mut pieces[piece[r]];
        p.regions.push(idx.region(r));
        p.euler += 1;
    }
    // arc pieces
    for arc in t.arcs() {
        let s = arc.slots[0];
        let n = slot_count(&sys.counts, s);
        for q in 0..=n {
            let p = &mut pieces[piece[idx.id(region_of_piece(sys, s, q))]];
            p.euler -= 1;
            if arc.is_boundary() {
                p.boundary_pieces += 1;
            }
        }
    }
    // segment sides
    for &seg in &sys.segments {
        let (lo, hi) = regions_beside(sys, seg);
        pieces[piece[idx.id(lo)]].euler -= 1;
        pieces[piece[idx.id(hi)]].euler -= 1;
    }
    // juncture sides: pieces x and x+1 of the first slot
    for j in &sys.junctures {
        let s = t.arcs()[j.arc].slots[0];
        for q in [j.position, j.position + 1] {
            pieces[piece[idx.id(region_of_piece(sys, s, q))]].euler += 1;
        }
    }
    // vertices
    let mut vertex_piece = vec![usize::MAX; t.vertex_count()];
    for c in t.corners() {
        let r = if sys.count(c) > 0 { SmallRegion::Layer(c, 0) } else { SmallRegion::Central(c.triangle) };
        let p = piece[idx.id(r)];
        let v = t.vertex_at(c);
        debug_assert!(vertex_piece[v] == usize::MAX || vertex_piece[v] == p);
        vertex_piece[v] = p;
    }
    for (v, &p) in vertex_piece.iter().enumerate() {
        let piece = &mut pieces[p];
        piece.euler += 1;
        if t.is_marked_point(v) {
            piece.marked_points += 1;
        } else {
            piece.punctures += 1;
        }
    }
    (pieces, piece)
}

/// A single connected simple closed curve in minimal position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    system: CurveSystem,
    cycle: Vec<(usize, u8)>,
    steps: Vec<Step>,
    peripheral: bool,
}

/// Input form of a curve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveInput {
    pub counts: Vec<[u32; 3]>,
    pub traversal: Option<Vec<Step>>,
    pub peripheral: Option<bool>,
}

fn is_rotation(a: &[Step], b: &[Step]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|r| (0..a.len()).all(|i| a[(i + r) % a.len()] == b[i])))
}

fn reversed(steps: &[Step]) -> Vec<Step> {
    steps.iter().rev().map(|s| Step { corner: s.corner, entry: s.exit, exit: s.entry }).collect()
}

impl Curve {
    pub fn new(t: &Triangulation, input: &CurveInput) -> Result<Curve, CurveError> {
        let system = build_junctures(t, &input.counts)?;
        let mut comps = system.components();
        if comps.is_empty() {
            return Err(CurveError::Empty);
        }
        if comps.len() > 1 {
            return Err(CurveError::NotConnected(comps.len()));
        }
        let cycle = comps.pop().expect("one component");
        let steps = system.steps(&cycle);
        if let Some(given) = &input.traversal {
            if !is_rotation(given, &steps) && !is_rotation(given, &reversed(&steps)) {
                return Err(CurveError::TraversalMismatch);
            }
        }
        let (pieces, _) = complement(t, &system);
        if pieces.iter().any(ComplementPiece::is_empty_disk) {
            return Err(CurveError::Contractible);
        }
        let peripheral = pieces.iter().any(|p| p.is_once_punctured_disk() || p.is_collar());
        if let Some(declared) = input.peripheral {
            if declared != peripheral {
                return Err(CurveError::PeripheralMismatch { declared, computed: peripheral });
            }
        }
        Ok(Curve { system, cycle, steps, peripheral })
    }

    pub fn system(&self) -> &CurveSystem {
        &self.system
    }

    pub fn counts(&self) -> &[[u32; 3]] {
        self.system.counts()
    }

    pub fn traversal(&self) -> &[Step] {
        &self.steps
    }

    /// The traversal as `(segment id, exit end)` pairs.
    pub fn cycle(&self) -> &[(usize, u8)] {
        &self.cycle
    }

    pub fn is_peripheral(&self) -> bool {
        self.peripheral
    }

    pub fn juncture_count(&self) -> usize {
        self.system.junctures().len()
    }

    /// Arcs met along one traversal, in order.
    pub fn arcs_met(&self, t: &Triangulation) -> Vec<usize> {
        self.cycle
            .iter()
            .map(|&(seg, exit)| t.arc_at(SlotRef::new(self.system.segments[seg].corner.triangle, {
                let c = self.system.segments[seg].corner;
                if exit == 1 {
                    c.second_slot()
                } else {
                    c.first_slot()
                }
            })))
            .collect()
    }
}

/// Complementary pieces of a single curve, for diagnostics.
pub fn curve_complement(t: &Triangulation, c: &Curve) -> (Vec<ComplementPiece>, Vec<usize>) {
    complement(t, &c.system)
}

pub fn is_peripheral(c: &Curve) -> bool {
    c.is_peripheral()
}

/// An integral lamination after normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLamination {
    components: Vec<(Curve, i64)>,
    pub normalization: Normalization,
}

/// What normalization did to the input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Normalization {
    pub dropped_zero_weight: usize,
    pub merged_duplicates: usize,
}

/// One input component.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentInput {
    pub curve: CurveInput,
    pub weight: i64,
}

impl IntegralLamination {
    pub fn new(t: &Triangulation, input: &[ComponentInput]) -> Result<Self, (usize, CurveError)> {
        let mut norm = Normalization::default();
        let mut by_counts: BTreeMap<Vec<[u32; 3]>, (Curve, i64, usize)> = BTreeMap::new();
        for (i, c) in input.iter().enumerate() {
            let curve = Curve::new(t, &c.curve).map_err(|e| (i, e))?;
            if c.weight < 0 && !curve.is_peripheral() {
                return Err((i, CurveError::NegativeWeight { weight: c.weight }));
            }
            match by_counts.get_mut(curve.counts()) {
                Some(entry) => {
                    entry.1 += c.weight;
                    norm.merged_duplicates += 1;
                }
                None => {
                    by_counts.insert(curve.counts().to_vec(), (curve, c.weight, i));
                }
            }
        }
        let mut comps: Vec<(Curve, i64, usize)> = by_counts.into_values().collect();
        comps.sort_by_key(|c| c.2);
        let before = comps.len();
        comps.retain(|c| c.1 != 0);
        norm.dropped_zero_weight = before - comps.len();
        check_disjoint(t, &comps)?;
        Ok(IntegralLamination { components: comps.into_iter().map(|(c, w, _)| (c, w)).collect(), normalization: norm })
    }

    pub fn components(&self) -> &[(Curve, i64)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Twice the Fock coordinate on arc `e`.
    pub fn fock_coordinate_doubled(&self, e: usize) -> i64 {
        self.components.iter().map(|(c, w)| w * c.system.crossings(e) as i64).sum()
    }

    pub fn fock_coordinate(&self, e: usize) -> HalfInteger {
        HalfInteger(self.fock_coordinate_doubled(e))
    }

    pub fn is_even(&self, t: &Triangulation) -> bool {
        (0..t.arc_count()).all(|e| self.fock_coordinate_doubled(e) % 2 == 0)
    }
}

fn check_disjoint(t: &Triangulation, comps: &[(Curve, i64, usize)]) -> Result<(), (usize, CurveError)> {
    if comps.len() < 2 {
        return Ok(());
    }
    let mut total = vec![[0u32; 3]; t.triangle_count()];
    for (c, _, _) in comps {
        for (row, add) in total.iter_mut().zip(c.counts()) {
            for k in 0..3 {
                row[k] += add[k];
            }
        }
    }
    let sys = build_junctures(t, &total).map_err(|e| (comps[0].2, e))?;
    let mut found: Vec<Vec<[u32; 3]>> = sys.components().iter().map(|cy| sys.cycle_counts(cy)).collect();
    let mut want: Vec<Vec<[u32; 3]>> = comps.iter().map(|c| c.0.counts().to_vec()).collect();
    found.sort();
    want.sort();
    if found != want {
        let (a, b) = (comps[0].2, comps[1].2);
        return Err((b, CurveError::Intersecting(a, b)));
    }
    Ok(())
}

/// `n / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(pub i64);

impl HalfInteger {
    pub fn is_integer(&self) -> bool {
        self.0 % 2 == 0
    }
}

impl core::fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Corner counts of the closed curve around an interior vertex.
pub fn vertex_link(t: &Triangulation, v: usize) -> Vec<[u32; 3]> {
    let mut c = vec![[0u32; 3]; t.triangle_count()];
    for corner in t.corners() {
        if t.vertex_at(corner) == v {
            c[corner.triangle][corner.index as usize] += 1;
        }
    }
    c
}

/// Corner counts from per-arc crossing numbers, when they satisfy the
/// triangle conditions in every triangle.
pub fn counts_from_crossings(t: &Triangulation, x: &[u32]) -> Option<Vec<[u32; 3]>> {
    let mut out = Vec::with_capacity(t.triangle_count());
    for tri in 0..t.triangle_count() {
        let xs = [0u8, 1, 2].map(|i| x[t.arc_at(SlotRef::new(tri, i))] as i64);
        let mut row = [0u32; 3];
        for k in 0..3 {
            let twice = xs[(k + 1) % 3] + xs[(k + 2) % 3] - xs[k];
            if twice < 0 || twice % 2 != 0 {
                return None;
            }
            row[k] = (twice / 2) as u32;
        }
        out.push(row);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::standard;

    fn torus() -> Triangulation {
        Triangulation::build(standard::once_punctured_torus()).unwrap()
    }

    fn input(counts: Vec<[u32; 3]>) -> CurveInput {
        CurveInput { counts, traversal: None, peripheral: None }
    }

    #[test]
    fn torus_one_zero_curve() {
        let t = torus();
        let c = Curve::new(&t, &input(vec![[0, 0, 1], [0, 0, 1]])).unwrap();
        assert_eq!(c.juncture_count(), 2);
        assert_eq!(c.system().segments().len(), 2);
        assert!(!c.is_peripheral());
        let (pieces, _) = curve_complement(&t, &c);
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].euler, 0);
        assert_eq!(pieces[0].punctures, 1);
    }

    #[test]
    fn puncture_link_is_peripheral() {
        let t = torus();
        let c = Curve::new(&t, &input(vertex_link(&t, 0))).unwrap();
        assert!(c.is_peripheral());
        assert_eq!(c.juncture_count(), 6);

        let s = Triangulation::build(standard::stellar_subdivide(&standard::three_punctured_sphere(), 0)).unwrap();
        for v in 0..s.vertex_count() {
            let c = Curve::new(&s, &input(vertex_link(&s, v))).unwrap();
            assert!(c.is_peripheral());
        }
    }

    #[test]
    fn boundary_collar_is_peripheral() {
        let t = Triangulation::build(standard::torus_with_boundary_monogon()).unwrap();
        let c = Curve::new(&t, &input(vec![[1, 1, 1], [1, 1, 1], [0, 0, 2]])).unwrap();
        assert!(c.is_peripheral());
        let (pieces, _) = curve_complement(&t, &c);
        assert!(pieces.iter().any(|p| p.is_collar() && p.marked_points == 1));
        let inner = Curve::new(&t, &input(counts_from_crossings(&t, &[1, 1, 0, 0, 0]).unwrap())).unwrap();
        assert!(!inner.is_peripheral());
    }

    #[test]
    fn euler_characteristics_add_up() {
        let t = Triangulation::build(standard::stellar_subdivide(&standard::once_punctured_torus(), 1)).unwrap();
        for x in [[1u32, 1, 0, 1, 1, 0], [2, 2, 2, 2, 2, 2], [1, 1, 2, 1, 0, 1], [0, 2, 2, 1, 1, 1]] {
            if let Some(counts) = counts_from_crossings(&t, &x) {
                if let Ok(sys) = build_junctures(&t, &counts) {
                    let (pieces, _) = complement(&t, &sys);
                    let total: i64 = pieces.iter().map(|p| p.euler).sum();
                    assert_eq!(total, 0, "{x:?}");
                }
            }
        }
    }

    #[test]
    fn traversal_cross_check() {
        let t = torus();
        let counts = vec![[0, 0, 1], [0, 0, 1]];
        let c = Curve::new(&t, &input(counts.clone())).unwrap();
        let mut steps = c.traversal().to_vec();
        steps.rotate_left(1);
        let ok = CurveInput { counts: counts.clone(), traversal: Some(steps.clone()), peripheral: Some(false) };
        assert!(Curve::new(&t, &ok).is_ok());
        let rev = CurveInput { counts: counts.clone(), traversal: Some(reversed(&steps)), peripheral: None };
        assert!(Curve::new(&t, &rev).is_ok());
        steps[0].entry = steps[0].exit;
        let bad = CurveInput { counts, traversal: Some(steps), peripheral: None };
        assert_eq!(Curve::new(&t, &bad), Err(CurveError::TraversalMismatch));
    }

    #[test]
    fn invalid_curves_are_rejected() {
        let t = torus();
        assert_eq!(
            Curve::new(&t, &input(vec![[0, 0, 1], [0, 1, 0]])).unwrap_err(),
            CurveError::EdgeMismatch { arc: 1, first: 1, second: 0 }
        );
        assert_eq!(Curve::new(&t, &input(vec![[0; 3], [0; 3]])).unwrap_err(), CurveError::Empty);
        assert!(matches!(
            Curve::new(&t, &input(vec![[0, 0, 2], [0, 0, 2]])).unwrap_err(),
            CurveError::NotConnected(2)
        ));
        let d = Triangulation::build(standard::once_punctured_digon()).unwrap();
        assert_eq!(
            Curve::new(&d, &input(vec![[0, 0, 1], [0, 0, 0]])).unwrap_err(),
            CurveError::SelfFoldedCorner(Corner::new(0, 2))
        );
        let sq = Triangulation::build(standard::square()).unwrap();
        assert!(matches!(
            Curve::new(&sq, &input(vec![[0, 1, 0], [0, 1, 0]])).unwrap_err(),
            CurveError::CrossesBoundary(_)
        ));
        let declared = CurveInput { counts: vec![[0, 0, 1], [0, 0, 1]], traversal: None, peripheral: Some(true) };
        assert_eq!(
            Curve::new(&t, &declared).unwrap_err(),
            CurveError::PeripheralMismatch { declared: true, computed: false }
        );
    }

    #[test]
    fn lamination_normalization_and_fock() {
        let t = torus();
        let a = ComponentInput { curve: input(vec![[0, 0, 1], [0, 0, 1]]), weight: 1 };
        let b = ComponentInput { curve: input(vec![[0, 0, 1], [0, 0, 1]]), weight: 2 };
        let z = ComponentInput { curve: input(vertex_link(&t, 0)), weight: 0 };
        let l = IntegralLamination::new(&t, &[a.clone(), b, z]).unwrap();
        assert_eq!(l.components().len(), 1);
        assert_eq!(l.components()[0].1, 3);
        assert_eq!(l.normalization, Normalization { dropped_zero_weight: 1, merged_duplicates: 1 });
        assert_eq!(l.fock_coordinate(0), HalfInteger(3));
        assert_eq!(l.fock_coordinate(2), HalfInteger(0));

        let single = IntegralLamination::new(&t, &[a.clone()]).unwrap();
        assert!(!single.is_even(&t));
        let double = IntegralLamination::new(&t, &[ComponentInput { weight: 2, ..a.clone() }]).unwrap();
        assert!(double.is_even(&t));

        let neg = ComponentInput { weight: -1, ..a.clone() };
        assert!(matches!(IntegralLamination::new(&t, &[neg]), Err((0, CurveError::NegativeWeight { .. }))));

        // the (1,0) and (0,1) curves intersect
        let other = ComponentInput { curve: input(vec![[1, 0, 0], [1, 0, 0]]), weight: 1 };
        assert!(matches!(IntegralLamination::new(&t, &[a.clone(), other]), Err((_, CurveError::Intersecting(..)))));

        // a curve and the puncture link are disjoint
        let p = ComponentInput { curve: input(vertex_link(&t, 0)), weight: -2 };
        let l = IntegralLamination::new(&t, &[a, p]).unwrap();
        assert_eq!(l.components().len(), 2);
        assert_eq!(l.fock_coordinate_doubled(0), 1 - 4);
    }

    #[test]
    fn fock_coordinate_linearity() {
        let t = Triangulation::build(standard::stellar_subdivide(&standard::three_punctured_sphere(), 0)).unwrap();
        // two punctures enclosed: disjoint from the link of a third puncture
        let links: Vec<_> = (0..t.vertex_count()).map(|v| vertex_link(&t, v)).collect();
        let comps: Vec<ComponentInput> =
            [(0, 1), (1, 3)].iter().map(|&(v, w)| ComponentInput { curve: input(links[v].clone()), weight: w }).collect();
        let l = IntegralLamination::new(&t, &comps).unwrap();
        for e in 0..t.arc_count() {
            let expect = l.components().iter().map(|(c, w)| w * c.system().crossings(e) as i64).sum::<i64>();
            assert_eq!(l.fock_coordinate_doubled(e), expect);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn surfaces() -> Vec<Triangulation> {
            let sphere4 = standard::stellar_subdivide(&standard::three_punctured_sphere(), 0);
            [
                standard::once_punctured_torus(),
                standard::stellar_subdivide(&standard::once_punctured_torus(), 0),
                sphere4.clone(),
                standard::stellar_subdivide(&sphere4, 2),
                standard::genus_two_once_punctured(),
                standard::torus_with_boundary_monogon(),
                standard::once_punctured_digon(),
            ]
            .into_iter()
            .map(|d| Triangulation::build(d).unwrap())
            .collect()
        }

        fn euler_of(t: &Triangulation) -> i64 {
            t.vertex_count() as i64 - t.arc_count() as i64 + t.triangle_count() as i64
        }

        proptest! {
            #[test]
            fn complement_euler_sums_to_surface(which in 0usize..7, x in proptest::collection::vec(0u32..6, 12)) {
                let t = &surfaces()[which];
                let x: Vec<u32> = (0..t.arc_count()).map(|e| if t.arcs()[e].is_boundary() { 0 } else { x[e] }).collect();
                if let Some(counts) = counts_from_crossings(t, &x) {
                    if let Ok(sys) = build_junctures(t, &counts) {
                        let (pieces, of) = complement(t, &sys);
                        prop_assert_eq!(pieces.iter().map(|p| p.euler).sum::<i64>(), euler_of(t));
                        prop_assert_eq!(of.len(), RegionIndex::new(&sys).len());
                        prop_assert_eq!(sys.segments().len(), sys.junctures().len());
                        let comps = sys.components();
                        prop_assert_eq!(comps.iter().map(Vec::len).sum::<usize>(), sys.segments().len());
                        for e in 0..t.arc_count() {
                            prop_assert_eq!(sys.crossings(e) as u32, x[e]);
                        }
                    }
                }
            }

            #[test]
            fn traversal_rotation_is_accepted(which in 0usize..7, x in proptest::collection::vec(0u32..5, 12), r in 0usize..64) {
                let t = &surfaces()[which];
                let x: Vec<u32> = (0..t.arc_count()).map(|e| if t.arcs()[e].is_boundary() { 0 } else { x[e] }).collect();
                let Some(counts) = counts_from_crossings(t, &x) else { return Ok(()) };
                let Ok(c) = Curve::new(t, &input(counts.clone())) else { return Ok(()) };
                let mut steps = c.traversal().to_vec();
                let n = steps.len();
                steps.rotate_left(r % n);
                let again = Curve::new(t, &CurveInput { counts, traversal: Some(steps), peripheral: Some(c.is_peripheral()) }).unwrap();
                prop_assert_eq!(again.system(), c.system());
            }
        }
    }
}
