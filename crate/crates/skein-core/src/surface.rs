//! Combinatorial ideal triangulations of decorated surfaces.
//!
//! Every triangle has three side-slots `0, 1, 2` in clockwise order. The
//! corner with index `k` sits opposite slot `k`; walking clockwise around the
//! triangle one meets slot `k + 1`, then corner `k`, then slot `k + 2`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Genus and puncture data a triangulation is expected to realize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedSurface {
    pub genus: u32,
    /// Interior vertices of the triangulation.
    pub punctures: u32,
    /// Number of boundary arcs, which equals the number of marked points.
    pub boundary_arcs: u32,
}

impl DecoratedSurface {
    pub fn satisfies_size_condition(&self) -> bool {
        let n = self.punctures + self.boundary_arcs;
        if self.genus == 0 {
            n >= 3
        } else {
            n >= 1
        }
    }
}

/// A side-slot of a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotRef {
    pub triangle: usize,
    pub slot: u8,
}

impl SlotRef {
    pub const fn new(triangle: usize, slot: u8) -> Self {
        SlotRef { triangle, slot }
    }
}

/// A corner of a triangle, named by the slot it faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub triangle: usize,
    pub index: u8,
}

impl Corner {
    pub const fn new(triangle: usize, index: u8) -> Self {
        Corner { triangle, index }
    }

    /// The slot met first when passing the corner clockwise.
    pub const fn first_slot(&self) -> u8 {
        (self.index + 1) % 3
    }

    /// The slot met second when passing the corner clockwise.
    pub const fn second_slot(&self) -> u8 {
        (self.index + 2) % 3
    }

    /// Whether `slot` is one of the two delimiting slots.
    pub const fn touches(&self, slot: u8) -> bool {
        slot != self.index
    }
}

/// Raw input: a triangle count and a partial pairing of slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulationData {
    pub surface: DecoratedSurface,
    pub triangle_count: usize,
    pub gluing: Vec<(SlotRef, SlotRef)>,
    /// Optional user labels for the sides; glued slots must share a label and
    /// distinct arcs must carry distinct labels.
    pub slot_labels: Option<Vec<[i64; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("triangulation has no triangles")]
    Empty,
    #[error("slot {0:?} is out of range")]
    SlotOutOfRange(SlotRef),
    #[error("slot {0:?} is glued to itself")]
    SelfGluedSlot(SlotRef),
    #[error("slot {0:?} appears in more than one gluing pair")]
    SlotGluedTwice(SlotRef),
    #[error("triangles do not form a connected surface")]
    Disconnected,
    #[error("slot labels: expected {expected} rows, found {found}")]
    LabelRowCount { expected: usize, found: usize },
    #[error("glued slots {0:?} and {1:?} carry different labels")]
    LabelMismatch(SlotRef, SlotRef),
    #[error("label {0} is used by two different arcs")]
    LabelReused(i64),
    #[error("declared genus {declared} but the gluing realizes genus {found}")]
    Genus { declared: u32, found: i64 },
    #[error("declared {declared} punctures but the gluing has {found} interior vertices")]
    Punctures { declared: u32, found: usize },
    #[error("declared {declared} boundary arcs but {found} slots are unglued")]
    BoundaryArcs { declared: u32, found: usize },
    #[error("surface is too small to be triangulated (genus {genus}, {n} punctures and marked points)")]
    SizeCondition { genus: u32, n: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("unknown arc id {0}")]
    UnknownArc(usize),
    #[error("invalid triangulation: {}", first_violation(.0))]
    Invalid(Vec<Violation>),
}

fn first_violation(v: &[Violation]) -> alloc::string::String {
    use alloc::string::ToString;
    v.first().map(|x| x.to_string()).unwrap_or_default()
}

/// How a corner is delimited by an ordered pair of arcs `(e, f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CornerTag {
    /// `e` is met before `f` clockwise; counts toward `a_ef`.
    Forward,
    /// `f` is met before `e` clockwise; counts toward `a_fe`.
    Backward,
    /// Both sides are the same self-folded arc.
    SelfFolded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaggedCorner {
    pub corner: Corner,
    pub tag: CornerTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcInfo {
    /// One slot for a boundary arc, two otherwise. The first slot fixes the
    /// arc's bookkeeping direction: clockwise along that slot.
    pub slots: Vec<SlotRef>,
}

impl ArcInfo {
    pub fn is_boundary(&self) -> bool {
        self.slots.len() == 1
    }

    pub fn is_self_folded(&self) -> bool {
        self.slots.len() == 2 && self.slots[0].triangle == self.slots[1].triangle
    }
}

/// A validated triangulation with derived arc and vertex data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    surface: DecoratedSurface,
    partner: Vec<[Option<SlotRef>; 3]>,
    arc_of: Vec<[usize; 3]>,
    arcs: Vec<ArcInfo>,
    vertex_of: Vec<[usize; 3]>,
    vertex_on_boundary: Vec<bool>,
    boundary_components: usize,
    epsilon: Vec<Vec<i32>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Dense class ids numbered by first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[x] = id[r];
        }
        (out, next)
    }
}

fn partner_table(data: &TriangulationData) -> Result<Vec<[Option<SlotRef>; 3]>, Vec<Violation>> {
    let n = data.triangle_count;
    let mut partner = vec![[None; 3]; n];
    let mut errs = Vec::new();
    for &(a, b) in &data.gluing {
        let mut ok = true;
        for s in [a, b] {
            if s.triangle >= n || s.slot > 2 {
                errs.push(Violation::SlotOutOfRange(s));
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        if a == b {
            errs.push(Violation::SelfGluedSlot(a));
            continue;
        }
        for (s, other) in [(a, b), (b, a)] {
            let cell = &mut partner[s.triangle][s.slot as usize];
            if cell.is_some() {
                errs.push(Violation::SlotGluedTwice(s));
            } else {
                *cell = Some(other);
            }
        }
    }
    if errs.is_empty() {
        Ok(partner)
    } else {
        Err(errs)
    }
}

/// Checks every invariant of the raw data; the result is empty iff
/// [`Triangulation::build`] succeeds.
pub fn validate(data: &TriangulationData) -> Vec<Violation> {
    match Triangulation::build(data.clone()) {
        Ok(_) => Vec::new(),
        Err(SurfaceError::Invalid(v)) => v,
        Err(e) => unreachable!("build only reports violations: {e}"),
    }
}

impl Triangulation {
    pub fn build(data: TriangulationData) -> Result<Self, SurfaceError> {
        if data.triangle_count == 0 {
            return Err(SurfaceError::Invalid(vec![Violation::Empty]));
        }
        let partner = partner_table(&data).map_err(SurfaceError::Invalid)?;
        let n = data.triangle_count;
        let mut errs = Vec::new();

        let mut arc_of = vec![[usize::MAX; 3]; n];
        let mut arcs = Vec::new();
        for t in 0..n {
            for i in 0..3u8 {
                if arc_of[t][i as usize] != usize::MAX {
                    continue;
                }
                let id = arcs.len();
                let here = SlotRef::new(t, i);
                let mut slots = vec![here];
                arc_of[t][i as usize] = id;
                if let Some(p) = partner[t][i as usize] {
                    arc_of[p.triangle][p.slot as usize] = id;
                    slots.push(p);
                }
                arcs.push(ArcInfo { slots });
            }
        }

        let mut tri_uf = UnionFind::new(n);
        let mut corner_uf = UnionFind::new(3 * n);
        for t in 0..n {
            for i in 0..3u8 {
                if let Some(p) = partner[t][i as usize] {
                    tri_uf.union(t, p.triangle);
                    let (a1, a2) = ((i + 1) % 3, (i + 2) % 3);
                    let (b1, b2) = ((p.slot + 1) % 3, (p.slot + 2) % 3);
                    corner_uf.union(3 * t + a1 as usize, 3 * p.triangle + b2 as usize);
                    corner_uf.union(3 * t + a2 as usize, 3 * p.triangle + b1 as usize);
                }
            }
        }
        if (0..n).any(|t| tri_uf.find(t) != tri_uf.find(0)) {
            errs.push(Violation::Disconnected);
        }
        let (corner_class, vertex_count) = corner_uf.classes();
        let vertex_of: Vec<[usize; 3]> = (0..n)
            .map(|t| [corner_class[3 * t], corner_class[3 * t + 1], corner_class[3 * t + 2]])
            .collect();

        let mut vertex_on_boundary = vec![false; vertex_count];
        let mut boundary_uf = UnionFind::new(vertex_count);
        let mut boundary_slots = 0usize;
        for arc in arcs.iter().filter(|a| a.is_boundary()) {
            boundary_slots += 1;
            let s = arc.slots[0];
            let va = vertex_of[s.triangle][((s.slot + 1) % 3) as usize];
            let vb = vertex_of[s.triangle][((s.slot + 2) % 3) as usize];
            vertex_on_boundary[va] = true;
            vertex_on_boundary[vb] = true;
            boundary_uf.union(va, vb);
        }
        let mut roots: Vec<usize> = (0..vertex_count)
            .filter(|&v| vertex_on_boundary[v])
            .map(|v| boundary_uf.find(v))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        let boundary_components = roots.len();

        if let Some(labels) = &data.slot_labels {
            if labels.len() != n {
                errs.push(Violation::LabelRowCount { expected: n, found: labels.len() });
            } else {
                let mut seen: Vec<(i64, usize)> = Vec::new();
                for (id, arc) in arcs.iter().enumerate() {
                    let l0 = labels[arc.slots[0].triangle][arc.slots[0].slot as usize];
                    if let Some(&s1) = arc.slots.get(1) {
                        if labels[s1.triangle][s1.slot as usize] != l0 {
                            errs.push(Violation::LabelMismatch(arc.slots[0], s1));
                        }
                    }
                    if seen.iter().any(|&(l, other)| l == l0 && other != id) {
                        errs.push(Violation::LabelReused(l0));
                    }
                    seen.push((l0, id));
                }
            }
        }

        let interior_vertices = vertex_on_boundary.iter().filter(|b| !**b).count();
        let chi = vertex_count as i64 - arcs.len() as i64 + n as i64;
        // chi = 2 - 2g - h with h boundary circles
        let twice_genus = 2 - boundary_components as i64 - chi;
        let s = data.surface;
        if twice_genus < 0 || twice_genus % 2 != 0 || twice_genus / 2 != s.genus as i64 {
            let found = if twice_genus % 2 == 0 { twice_genus / 2 } else { -1 };
            errs.push(Violation::Genus { declared: s.genus, found });
        }
        if interior_vertices != s.punctures as usize {
            errs.push(Violation::Punctures { declared: s.punctures, found: interior_vertices });
        }
        if boundary_slots != s.boundary_arcs as usize {
            errs.push(Violation::BoundaryArcs { declared: s.boundary_arcs, found: boundary_slots });
        }
        if !s.satisfies_size_condition() {
            errs.push(Violation::SizeCondition { genus: s.genus, n: s.punctures + s.boundary_arcs });
        }
        if !errs.is_empty() {
            return Err(SurfaceError::Invalid(errs));
        }

        let m = arcs.len();
        let mut a = vec![vec![0i32; m]; m];
        for row in &arc_of {
            for k in 0..3 {
                let e = row[(k + 1) % 3];
                let f = row[(k + 2) % 3];
                a[e][f] += 1;
            }
        }
        let epsilon = (0..m)
            .map(|e| (0..m).map(|f| a[e][f] - a[f][e]).collect())
            .collect();

        Ok(Triangulation {
            surface: s,
            partner,
            arc_of,
            arcs,
            vertex_of,
            vertex_on_boundary,
            boundary_components,
            epsilon,
        })
    }

    pub fn surface(&self) -> DecoratedSurface {
        self.surface
    }

    pub fn triangle_count(&self) -> usize {
        self.arc_of.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[ArcInfo] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> Result<&ArcInfo, SurfaceError> {
        self.arcs.get(id).ok_or(SurfaceError::UnknownArc(id))
    }

    /// Arc id of a slot.
    pub fn arc_at(&self, s: SlotRef) -> usize {
        self.arc_of[s.triangle][s.slot as usize]
    }

    pub fn partner(&self, s: SlotRef) -> Option<SlotRef> {
        self.partner[s.triangle][s.slot as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_on_boundary.len()
    }

    pub fn vertex_at(&self, c: Corner) -> usize {
        self.vertex_of[c.triangle][c.index as usize]
    }

    pub fn is_marked_point(&self, vertex: usize) -> bool {
        self.vertex_on_boundary[vertex]
    }

    pub fn boundary_components(&self) -> usize {
        self.boundary_components
    }

    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        (0..self.triangle_count()).flat_map(|t| (0..3).map(move |k| Corner::new(t, k)))
    }

    /// The self-folded corner of triangle `t`, if `t` is self-folded.
    pub fn self_folded_corner(&self, t: usize) -> Option<Corner> {
        (0..3u8).find_map(|k| {
            let c = Corner::new(t, k);
            let a = SlotRef::new(t, c.first_slot());
            let b = SlotRef::new(t, c.second_slot());
            (self.partner(a) == Some(b)).then_some(c)
        })
    }

    pub fn is_self_folded(&self, t: usize) -> bool {
        self.self_folded_corner(t).is_some()
    }

    pub fn epsilon(&self, e: usize, f: usize) -> Result<i32, SurfaceError> {
        self.arc(e)?;
        self.arc(f)?;
        Ok(self.epsilon[e][f])
    }

    pub fn epsilon_matrix(&self) -> &[Vec<i32>] {
        &self.epsilon
    }

    /// The corners delimited by `e` and `f`, tagged by handedness.
    pub fn corners_between(&self, e: usize, f: usize) -> Result<Vec<TaggedCorner>, SurfaceError> {
        self.arc(e)?;
        self.arc(f)?;
        let mut out = Vec::new();
        for corner in self.corners() {
            let x = self.arc_at(SlotRef::new(corner.triangle, corner.first_slot()));
            let y = self.arc_at(SlotRef::new(corner.triangle, corner.second_slot()));
            let tag = if x == e && y == f && e == f {
                CornerTag::SelfFolded
            } else if x == e && y == f {
                CornerTag::Forward
            } else if x == f && y == e {
                CornerTag::Backward
            } else {
                continue;
            };
            out.push(TaggedCorner { corner, tag });
        }
        Ok(out)
    }
}

impl fmt::Display for SlotRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.triangle, self.slot)
    }
}

/// Builders for the standard small triangulations.
pub mod standard {
    use super::*;

    fn data(surface: DecoratedSurface, triangle_count: usize, pairs: &[((usize, u8), (usize, u8))]) -> TriangulationData {
        TriangulationData {
            surface,
            triangle_count,
            gluing: pairs
                .iter()
                .map(|&((a, i), (b, j))| (SlotRef::new(a, i), SlotRef::new(b, j)))
                .collect(),
            slot_labels: None,
        }
    }

    /// Two triangles with slots glued index to index.
    pub fn once_punctured_torus() -> TriangulationData {
        data(
            DecoratedSurface { genus: 1, punctures: 1, boundary_arcs: 0 },
            2,
            &[((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 2), (1, 2))],
        )
    }

    /// Two triangles glued along all sides into a sphere with three punctures.
    pub fn three_punctured_sphere() -> TriangulationData {
        data(
            DecoratedSurface { genus: 0, punctures: 3, boundary_arcs: 0 },
            2,
            &[((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))],
        )
    }

    /// A single ideal triangle: a disk with three marked points.
    pub fn ideal_triangle() -> TriangulationData {
        data(DecoratedSurface { genus: 0, punctures: 0, boundary_arcs: 3 }, 1, &[])
    }

    /// Two triangles sharing one diagonal: a disk with four marked points.
    pub fn square() -> TriangulationData {
        data(DecoratedSurface { genus: 0, punctures: 0, boundary_arcs: 4 }, 2, &[((0, 0), (1, 0))])
    }

    /// A punctured monogon inside a triangle: one self-folded triangle plus
    /// one triangle with two boundary sides. Disk with one puncture and two
    /// marked points.
    pub fn once_punctured_digon() -> TriangulationData {
        data(
            DecoratedSurface { genus: 0, punctures: 1, boundary_arcs: 2 },
            2,
            &[((0, 0), (0, 1)), ((0, 2), (1, 0))],
        )
    }

    /// Replaces triangle `t` by three triangles around a new puncture.
    ///
    /// The old triangle keeps its id and its slot 0; two new triangles are
    /// appended for the old slots 1 and 2.
    pub fn stellar_subdivide(d: &TriangulationData, t: usize) -> TriangulationData {
        let n = d.triangle_count;
        let (t1, t2) = (n, n + 1);
        let relocate = |s: SlotRef| -> SlotRef {
            if s.triangle != t {
                return s;
            }
            match s.slot {
                0 => SlotRef::new(t, 0),
                1 => SlotRef::new(t1, 0),
                _ => SlotRef::new(t2, 0),
            }
        };
        let mut gluing: Vec<(SlotRef, SlotRef)> =
            d.gluing.iter().map(|&(a, b)| (relocate(a), relocate(b))).collect();
        // New triangle j has slot 0 = old slot j; slots 1, 2 are spokes.
        // Spoke from the old corner between old slots j and j+1 is slot 1 of
        // piece j and slot 2 of piece j+1.
        let piece = [t, t1, t2];
        for j in 0..3 {
            gluing.push((SlotRef::new(piece[j], 1), SlotRef::new(piece[(j + 1) % 3], 2)));
        }
        let mut surface = d.surface;
        surface.punctures += 1;
        TriangulationData { surface, triangle_count: n + 2, gluing, slot_labels: None }
    }

    /// Genus-two surface with one puncture: the octagon `a b a' b' c d c' d'`
    /// fanned from one vertex into six triangles.
    pub fn genus_two_once_punctured() -> TriangulationData {
        // Octagon vertices P0..P7, sides s_i = P_i P_{i+1}. Fan from P0 with
        // diagonals d_k = P0 P_k, k = 2..6; triangle k-1 = (P0, P_{k-1}, P_k).
        // Triangle T_j (j = 0..5) = (P0, P_{j+1}, P_{j+2}), sides:
        //   left diagonal P0 P_{j+1}, outer side s_{j+1}, right diagonal P0 P_{j+2}.
        // Clockwise slot order after reflecting the counterclockwise polygon:
        //   slot 0 = left diagonal, slot 1 = outer side, slot 2 = right diagonal
        // with T_0 left = s_0 and T_5 right = s_7.
        let mut gluing = Vec::new();
        for j in 0..5 {
            gluing.push((SlotRef::new(j, 2), SlotRef::new(j + 1, 0)));
        }
        // side location: s_0 at (0,0), s_i for i=1..6 at (i-1, 1), s_7 at (5,2)
        let side = |i: usize| -> SlotRef {
            match i {
                0 => SlotRef::new(0, 0),
                7 => SlotRef::new(5, 2),
                _ => SlotRef::new(i - 1, 1),
            }
        };
        // a b a^-1 b^-1 c d c^-1 d^-1 pairs s0~s2, s1~s3, s4~s6, s5~s7
        for (x, y) in [(0, 2), (1, 3), (4, 6), (5, 7)] {
            gluing.push((side(x), side(y)));
        }
        TriangulationData {
            surface: DecoratedSurface { genus: 2, punctures: 1, boundary_arcs: 0 },
            triangle_count: 6,
            gluing,
            slot_labels: None,
        }
    }

    /// Torus with one boundary circle carrying one marked point: the
    /// once-punctured torus with arc 2 doubled into a bigon that holds a
    /// boundary monogon.
    pub fn torus_with_boundary_monogon() -> TriangulationData {
        data(
            DecoratedSurface { genus: 1, punctures: 0, boundary_arcs: 1 },
            3,
            &[((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 2), (2, 0)), ((1, 2), (2, 1))],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    fn build(d: TriangulationData) -> Triangulation {
        Triangulation::build(d).expect("valid")
    }

    #[test]
    fn torus_counts_and_epsilon() {
        let t = build(once_punctured_torus());
        assert_eq!(t.arc_count(), 3);
        assert_eq!(t.vertex_count(), 1);
        assert_eq!(t.epsilon(0, 1).unwrap(), 2);
        assert_eq!(t.epsilon(1, 2).unwrap(), 2);
        assert_eq!(t.epsilon(2, 0).unwrap(), 2);
        assert_eq!(t.epsilon(1, 0).unwrap(), -2);
        let cs = t.corners_between(0, 1).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.tag == CornerTag::Forward));
        assert!(t.corners_between(0, 0).unwrap().is_empty());
        assert_eq!(t.epsilon(0, 7), Err(SurfaceError::UnknownArc(7)));
    }

    #[test]
    fn standard_builders_validate() {
        let list = [
            once_punctured_torus(),
            three_punctured_sphere(),
            ideal_triangle(),
            square(),
            once_punctured_digon(),
            stellar_subdivide(&once_punctured_torus(), 0),
            stellar_subdivide(&three_punctured_sphere(), 1),
            genus_two_once_punctured(),
            stellar_subdivide(&genus_two_once_punctured(), 3),
            torus_with_boundary_monogon(),
        ];
        for d in list {
            assert_eq!(validate(&d), Vec::new(), "{d:?}");
        }
    }

    #[test]
    fn square_diagonal_epsilon() {
        let t = build(square());
        let d = t.arc_at(SlotRef::new(0, 0));
        for f in 0..t.arc_count() {
            if f != d {
                assert!(matches!(t.epsilon(d, f).unwrap(), -1 | 1));
            }
        }
    }

    #[test]
    fn self_folded_corner_is_reported() {
        let t = build(once_punctured_digon());
        let e = t.arc_at(SlotRef::new(0, 0));
        assert!(t.arcs()[e].is_self_folded());
        let cs = t.corners_between(e, e).unwrap();
        assert_eq!(cs, vec![TaggedCorner { corner: Corner::new(0, 2), tag: CornerTag::SelfFolded }]);
        assert_eq!(t.self_folded_corner(0), Some(Corner::new(0, 2)));
        assert!(!t.is_self_folded(1));
    }

    #[test]
    fn corrupted_inputs_are_rejected() {
        let mut d = once_punctured_torus();
        d.gluing[0].1 = d.gluing[0].0;
        assert!(validate(&d).contains(&Violation::SelfGluedSlot(SlotRef::new(0, 0))));

        let mut d = once_punctured_torus();
        d.surface.genus = 0;
        assert!(validate(&d).iter().any(|v| matches!(v, Violation::Genus { .. })));

        let mut d = once_punctured_torus();
        d.gluing.pop();
        assert!(!validate(&d).is_empty());

        let mut d = once_punctured_torus();
        d.gluing.push((SlotRef::new(0, 0), SlotRef::new(1, 1)));
        assert!(validate(&d).iter().any(|v| matches!(v, Violation::SlotGluedTwice(_))));

        let mut d = once_punctured_torus();
        d.slot_labels = Some(vec![[1, 2, 3], [1, 2, 4]]);
        assert!(validate(&d).iter().any(|v| matches!(v, Violation::LabelMismatch(..))));

        let mut d = once_punctured_torus();
        d.gluing.push((SlotRef::new(2, 0), SlotRef::new(0, 0)));
        assert!(validate(&d).contains(&Violation::SlotOutOfRange(SlotRef::new(2, 0))));
    }

    #[test]
    fn epsilon_row_bounds() {
        let d = stellar_subdivide(&genus_two_once_punctured(), 2);
        let t = build(d);
        for e in 0..t.arc_count() {
            let row: i32 = (0..t.arc_count()).map(|f| t.epsilon(e, f).unwrap().abs()).sum();
            assert!(row <= 4);
        }
    }
}
