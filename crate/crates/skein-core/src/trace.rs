//! State sums over juncture signs, the Chebyshev and peripheral cases, and a
//! commutative brute-force oracle.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lamination::{Curve, CurveSystem, IntegralLamination};
use crate::ordering::{check_compatibility_sanity, solve, Chooser, OrderingError, OrderingSolution, Witness};
use crate::qtorus::{chebyshev_apply, chebyshev_f, ArcEmbedding, CommutationForm, Monomial, OmegaLaurent, QtElement};
use crate::surface::Triangulation;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("a strand cannot start and end on slot {0}")]
    SameSlot(u8),
    #[error("curve is peripheral")]
    Peripheral,
    #[error("curve is not peripheral")]
    NotPeripheral,
    #[error("orderings are not compatible and sane: {0:?}")]
    BadOrdering(Witness),
    #[error("ordering construction failed: {0}")]
    Ordering(OrderingError),
    #[error("{0} junctures exceed the capacity of the transfer engine")]
    TooManyJunctures(usize),
    #[error("state sum does not lie in the arc subalgebra")]
    NotInArcSubalgebra,
    #[error("non-peripheral component {component} has weight {weight}")]
    BadWeight { component: usize, weight: i64 },
    #[error("product of component factors depends on their order")]
    OrderDependent,
}

/// A juncture state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The exponent the state contributes: `+` reads as -1, `-` as 1.
    pub fn exponent(self) -> i32 {
        match self {
            Sign::Plus => -1,
            Sign::Minus => 1,
        }
    }

    fn from_bit(bit: bool) -> Sign {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Factor of a strand between slots `a` and `b` of triangle `tri`, carrying
/// state `sa` at `a` and `sb` at `b`, as a monomial of the triangle algebra.
pub fn factor_monomial(
    form: &CommutationForm,
    tri: usize,
    (a, sa): (u8, Sign),
    (b, sb): (u8, Sign),
) -> Result<Option<Monomial>, TraceError> {
    if a == b {
        return Err(TraceError::SameSlot(a));
    }
    // (first, second) in clockwise order
    let ((p, sp), (q, sq)) = if (a + 1) % 3 == b { ((a, sa), (b, sb)) } else { ((b, sb), (a, sa)) };
    if sp == Sign::Minus && sq == Sign::Plus {
        return Ok(None);
    }
    let (x, y) = (sp.exponent(), sq.exponent());
    let mut left = vec![0; form.rank()];
    left[3 * tri + p as usize] = x;
    let mut right = vec![0; form.rank()];
    right[3 * tri + q as usize] = y;
    let mut m = Monomial { omega: 0, exps: left };
    m.mul_assign(&Monomial { omega: 0, exps: right }, form);
    m.omega -= x * y;
    Ok(Some(m))
}

/// [`factor_monomial`] as an element of the triangle algebra.
pub fn triangle_factor(
    form: &Arc<CommutationForm>,
    tri: usize,
    a: (u8, Sign),
    b: (u8, Sign),
) -> Result<QtElement, TraceError> {
    Ok(match factor_monomial(form, tri, a, b)? {
        Some(m) => QtElement::from_monomial(form, &m),
        None => QtElement::zero(form),
    })
}

/// One strand of a triangle with its two end states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StatedStrand {
    pub ends: [(u8, Sign); 2],
}

/// Ordered product of strand factors, lowest strand first.
pub fn triangle_product(
    form: &Arc<CommutationForm>,
    tri: usize,
    strands: &[StatedStrand],
) -> Result<QtElement, TraceError> {
    let mut m = Monomial::one(form.rank());
    for s in strands {
        match factor_monomial(form, tri, s.ends[0], s.ends[1])? {
            Some(f) => m.mul_assign(&f, form),
            None => return Ok(QtElement::zero(form)),
        }
    }
    Ok(QtElement::from_monomial(form, &m))
}

/// Component counts of a crossingless stated diagram in a biangle, indexed
/// `[s1][s2]` with 0 for `+` and 1 for `-`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BiangleDiagram {
    pub through: [[u32; 2]; 2],
    pub left_caps: [[u32; 2]; 2],
    pub right_caps: [[u32; 2]; 2],
    pub circles: u32,
}

const P: usize = 0;
const M: usize = 1;

pub fn biangle_value(d: &BiangleDiagram) -> OmegaLaurent {
    let (a, b, c) = (&d.through, &d.left_caps, &d.right_caps);
    if a[P][M] + a[M][P] + b[P][P] + b[M][M] + c[P][P] + c[M][M] != 0 {
        return OmegaLaurent::zero();
    }
    let sign = if (b[P][M] + c[M][P]) % 2 == 0 { 1 } else { -1 };
    let k = -(5 * b[P][M] as i32 + b[M][P] as i32) + (5 * c[M][P] as i32 + c[P][M] as i32);
    let circle = OmegaLaurent::from_terms([(4, BigInt::from(-1)), (-4, BigInt::from(-1))]);
    OmegaLaurent::monomial(sign, k).mul(&circle.pow(d.circles))
}

/// Which engine evaluates the state sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    #[default]
    StateSum,
    Transfer,
}

fn check_inputs(t: &Triangulation, c: &Curve, ord: &OrderingSolution) -> Result<(), TraceError> {
    if c.is_peripheral() {
        return Err(TraceError::Peripheral);
    }
    check_compatibility_sanity(t, c.system(), &ord.juncture_rank).map_err(TraceError::BadOrdering)
}

fn strand_factor(
    form: &CommutationForm,
    sys: &CurveSystem,
    seg: usize,
    signs: [Sign; 2],
) -> Option<Monomial> {
    let corner = sys.segments()[seg].corner;
    factor_monomial(form, corner.triangle, (corner.first_slot(), signs[0]), (corner.second_slot(), signs[1]))
        .expect("segment ends lie on distinct slots")
}

fn finish(emb: &ArcEmbedding, sum: &QtElement) -> Result<QtElement, TraceError> {
    emb.to_arc_element(sum).ok_or(TraceError::NotInArcSubalgebra)
}

/// The state sum, enumerating one sign per juncture.
pub fn quantum_trace(t: &Triangulation, c: &Curve, ord: &OrderingSolution) -> Result<QtElement, TraceError> {
    check_inputs(t, c, ord)?;
    let emb = ArcEmbedding::new(t);
    let form = &emb.tri;
    let sys = c.system();
    let n = sys.junctures().len();
    if n >= 64 {
        return Err(TraceError::TooManyJunctures(n));
    }
    let order: Vec<usize> = (0..t.triangle_count()).flat_map(|tri| ord.elevation_order(sys, tri)).collect();
    let mut sum = QtElement::zero(form);
    let one = BigInt::one();
    'states: for state in 0u64..(1u64 << n) {
        let mut m = Monomial::one(form.rank());
        for &seg in &order {
            let [j0, j1] = sys.segment_ends(seg);
            let signs = [Sign::from_bit(state >> j0 & 1 == 1), Sign::from_bit(state >> j1 & 1 == 1)];
            match strand_factor(form, sys, seg, signs) {
                Some(f) => m.mul_assign(&f, form),
                None => continue 'states,
            }
        }
        sum.add_monomial(&m, &one);
    }
    finish(&emb, &sum)
}

/// Processing order for the sweep: a merge of the per-triangle elevation
/// orders that greedily keeps few junctures open.
fn sweep_order(t: &Triangulation, sys: &CurveSystem, ord: &OrderingSolution) -> Vec<usize> {
    let queues: Vec<Vec<usize>> = (0..t.triangle_count()).map(|tri| ord.elevation_order(sys, tri)).collect();
    let mut head = vec![0usize; queues.len()];
    let mut touched = vec![0u8; sys.junctures().len()];
    let mut out = Vec::with_capacity(sys.segments().len());
    while out.len() < sys.segments().len() {
        let mut best: Option<(i32, usize)> = None;
        for (q, queue) in queues.iter().enumerate() {
            let Some(&seg) = queue.get(head[q]) else { continue };
            let delta: i32 = sys.segment_ends(seg).iter().map(|&j| if touched[j] == 0 { 1 } else { -1 }).sum();
            if best.is_none_or(|(d, _)| delta < d) {
                best = Some((delta, q));
            }
        }
        let (_, q) = best.expect("some queue is nonempty");
        let seg = queues[q][head[q]];
        head[q] += 1;
        for j in sys.segment_ends(seg) {
            touched[j] += 1;
        }
        out.push(seg);
    }
    out
}

/// The same sum organized as a sweep over segments, keeping partial products
/// keyed by the states of junctures with exactly one processed segment.
pub fn quantum_trace_transfer_matrix(
    t: &Triangulation,
    c: &Curve,
    ord: &OrderingSolution,
) -> Result<QtElement, TraceError> {
    check_inputs(t, c, ord)?;
    let emb = ArcEmbedding::new(t);
    let form = &emb.tri;
    let sys = c.system();
    let n = sys.junctures().len();
    let order = sweep_order(t, sys, ord);
    let mut bit = vec![usize::MAX; n];
    let mut free: Vec<usize> = (0..128).rev().collect();
    let mut done = vec![0u8; n];
    let mut states: BTreeMap<u128, QtElement> = BTreeMap::new();
    states.insert(0, QtElement::one(form));
    for &seg in &order {
        let ends = sys.segment_ends(seg);
        let mut fresh = Vec::new();
        for &j in &ends {
            if bit[j] == usize::MAX {
                bit[j] = free.pop().ok_or(TraceError::TooManyJunctures(n))?;
                fresh.push(bit[j]);
            }
        }
        let mut next: BTreeMap<u128, QtElement> = BTreeMap::new();
        for (key, value) in states {
            for choice in 0u32..(1 << fresh.len()) {
                let mut k = key;
                for (i, &b) in fresh.iter().enumerate() {
                    if choice >> i & 1 == 1 {
                        k |= 1u128 << b;
                    }
                }
                let signs = ends.map(|j| Sign::from_bit(k >> bit[j] & 1 == 1));
                let Some(f) = strand_factor(form, sys, seg, signs) else { continue };
                let prod = value.mul_monomial(&f);
                match next.get_mut(&k) {
                    Some(acc) => acc.add_assign(&prod).expect("same form"),
                    None => {
                        next.insert(k, prod);
                    }
                }
            }
        }
        states = next;
        let mut closing = Vec::new();
        for &j in &ends {
            done[j] += 1;
            if done[j] == 2 {
                closing.push(bit[j]);
                free.push(bit[j]);
            }
        }
        if !closing.is_empty() {
            let mask = closing.iter().fold(0u128, |m, &b| m | 1u128 << b);
            let mut merged: BTreeMap<u128, QtElement> = BTreeMap::new();
            for (key, value) in states {
                match merged.get_mut(&(key & !mask)) {
                    Some(acc) => acc.add_assign(&value).expect("same form"),
                    None => {
                        merged.insert(key & !mask, value);
                    }
                }
            }
            states = merged;
        }
    }
    let sum = states.remove(&0).unwrap_or_else(|| QtElement::zero(form));
    debug_assert!(states.is_empty());
    finish(&emb, &sum)
}

/// `[Z_e1 ... Z_er]^k` over the arcs met by a peripheral curve.
pub fn peripheral_element(t: &Triangulation, c: &Curve, k: i64) -> Result<QtElement, TraceError> {
    if !c.is_peripheral() {
        return Err(TraceError::NotPeripheral);
    }
    let form = Arc::new(CommutationForm::arc_algebra(t));
    let base = QtElement::weyl_bracket(&form, &c.arcs_met(t));
    Ok(base.powi(k).expect("single monomial with unit coefficient"))
}

/// Per-component data of an evaluated lamination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTrace {
    pub component: usize,
    pub weight: i64,
    pub peripheral: bool,
    pub junctures: usize,
    /// The weight-one trace, or the peripheral monomial to the weight.
    pub base: QtElement,
    pub factor: QtElement,
    pub ordering: Option<OrderingSolution>,
}

/// The evaluated element with its factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminationTrace {
    pub element: QtElement,
    pub components: Vec<ComponentTrace>,
    /// Whether the reversed product was computed and compared.
    pub order_checked: bool,
}

/// Term budget under which the reversed product is also computed.
pub const ORDER_CHECK_TERMS: usize = 4096;

/// The positive element of an integral lamination.
pub fn lamination_element(
    t: &Triangulation,
    lam: &IntegralLamination,
    engine: Engine,
    chooser: &mut dyn Chooser,
) -> Result<LaminationTrace, TraceError> {
    let form = Arc::new(CommutationForm::arc_algebra(t));
    let mut comps = Vec::new();
    for (i, (curve, w)) in lam.components().iter().enumerate() {
        if curve.is_peripheral() {
            let base = peripheral_element(t, curve, *w)?;
            comps.push(ComponentTrace {
                component: i,
                weight: *w,
                peripheral: true,
                junctures: curve.juncture_count(),
                factor: base.clone(),
                base,
                ordering: None,
            });
            continue;
        }
        if *w < 1 {
            return Err(TraceError::BadWeight { component: i, weight: *w });
        }
        let ord = solve(t, curve, chooser).map_err(TraceError::Ordering)?;
        let base = match engine {
            Engine::StateSum => quantum_trace(t, curve, &ord)?,
            Engine::Transfer => quantum_trace_transfer_matrix(t, curve, &ord)?,
        };
        let factor = chebyshev_apply(*w as u32, &base);
        comps.push(ComponentTrace {
            component: i,
            weight: *w,
            peripheral: false,
            junctures: curve.juncture_count(),
            base,
            factor,
            ordering: Some(ord),
        });
    }
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by(|&a, &b| lam.components()[a].0.counts().cmp(lam.components()[b].0.counts()));
    let product = |idx: &mut dyn Iterator<Item = &usize>| -> QtElement {
        idx.fold(QtElement::one(&form), |acc, &i| acc.mul(&comps[i].factor).expect("arc algebra"))
    };
    let element = product(&mut order.iter());
    let order_checked = comps.len() > 1 && comps.iter().map(|c| c.factor.term_count()).product::<usize>() <= ORDER_CHECK_TERMS;
    if order_checked && product(&mut order.iter().rev()) != element {
        return Err(TraceError::OrderDependent);
    }
    Ok(LaminationTrace { element, components: comps, order_checked })
}

/// A commutative Laurent polynomial in the arc variables.
pub type ClassicalPoly = BTreeMap<Vec<i64>, BigInt>;

fn poly_add(p: &mut ClassicalPoly, e: Vec<i64>, c: BigInt) {
    let slot = p.entry(e.clone()).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&e);
    }
}

fn poly_mul(a: &ClassicalPoly, b: &ClassicalPoly) -> ClassicalPoly {
    let mut out = ClassicalPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            poly_add(&mut out, e, ca * cb);
        }
    }
    out
}

fn poly_constant(n: usize, c: i64) -> ClassicalPoly {
    let mut p = ClassicalPoly::new();
    poly_add(&mut p, vec![0; n], BigInt::from(c));
    p
}

/// Exhaustive commutative evaluation at `w = 1`, written independently of
/// the quantum torus and the ordering construction.
pub fn classical_oracle(t: &Triangulation, lam: &IntegralLamination) -> Result<ClassicalPoly, TraceError> {
    let n = t.arc_count();
    let mut total = poly_constant(n, 1);
    for (i, (curve, w)) in lam.components().iter().enumerate() {
        let sys = curve.system();
        let factor = if curve.is_peripheral() {
            let e: Vec<i64> = (0..n).map(|a| sys.crossings(a) as i64 * w).collect();
            let mut p = ClassicalPoly::new();
            poly_add(&mut p, e, BigInt::one());
            p
        } else {
            if *w < 1 {
                return Err(TraceError::BadWeight { component: i, weight: *w });
            }
            let js = sys.junctures();
            if js.len() >= 64 {
                return Err(TraceError::TooManyJunctures(js.len()));
            }
            let mut base = ClassicalPoly::new();
            'states: for state in 0u64..(1u64 << js.len()) {
                let minus = |j: usize| state >> j & 1 == 1;
                for seg in 0..sys.segments().len() {
                    let [j0, j1] = sys.segment_ends(seg);
                    if minus(j0) && !minus(j1) {
                        continue 'states;
                    }
                }
                let mut e = vec![0i64; n];
                for (j, ju) in js.iter().enumerate() {
                    e[ju.arc] += if minus(j) { 1 } else { -1 };
                }
                poly_add(&mut base, e, BigInt::one());
            }
            // F_k(x) by its coefficient list
            let mut acc = ClassicalPoly::new();
            let mut power = poly_constant(n, 1);
            for c in chebyshev_f(*w as u32) {
                if !c.is_zero() {
                    for (e, v) in &power {
                        poly_add(&mut acc, e.clone(), v * &c);
                    }
                }
                power = poly_mul(&power, &base);
            }
            acc
        };
        total = poly_mul(&total, &factor);
    }
    Ok(total)
}

/// Converts the `w = 1` specialization into the oracle's representation.
pub fn specialize(x: &QtElement) -> ClassicalPoly {
    let mut out = ClassicalPoly::new();
    for (e, c) in x.specialize_commutative().terms() {
        poly_add(&mut out, e.iter().map(|&a| a as i64).collect(), c.clone());
    }
    out
}

/// Every coefficient is a single signed power of `w` times an integer.
pub fn has_single_power_coefficients(x: &QtElement) -> bool {
    x.terms().all(|(_, c)| c.len() == 1)
}

/// Coefficients relative to Weyl-ordered monomials are invariant under
/// `w -> w^-1`.
pub fn is_bar_invariant(x: &QtElement) -> bool {
    let form = x.form();
    x.terms().all(|(e, c)| {
        let w = c.shift(-form.weyl_phase(e));
        let flipped = OmegaLaurent::from_terms(w.terms().map(|(k, v)| (-k, v.clone())));
        flipped == w
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::{counts_from_crossings, ComponentInput, CurveInput};
    use crate::ordering::LowestId;
    use crate::surface::standard;
    use proptest::prelude::*;

    fn curve(t: &Triangulation, x: &[u32]) -> Curve {
        let counts = counts_from_crossings(t, x).expect("triangle conditions");
        Curve::new(t, &CurveInput { counts, traversal: None, peripheral: None }).unwrap()
    }

    fn lam(t: &Triangulation, parts: &[(&[u32], i64)]) -> IntegralLamination {
        let input: Vec<ComponentInput> = parts
            .iter()
            .map(|(x, w)| ComponentInput {
                curve: CurveInput { counts: counts_from_crossings(t, x).unwrap(), traversal: None, peripheral: None },
                weight: *w,
            })
            .collect();
        IntegralLamination::new(t, &input).unwrap()
    }

    fn torus() -> Triangulation {
        Triangulation::build(standard::once_punctured_torus()).unwrap()
    }

    #[test]
    fn minus_plus_factor_vanishes() {
        let f = Arc::new(CommutationForm::triangle_algebra(1));
        let z = triangle_factor(&f, 0, (0, Sign::Minus), (1, Sign::Plus)).unwrap();
        assert!(z.is_zero());
        // the same strand read from its other end
        let z = triangle_factor(&f, 0, (1, Sign::Plus), (0, Sign::Minus)).unwrap();
        assert!(z.is_zero());
        assert_eq!(triangle_factor(&f, 0, (1, Sign::Plus), (1, Sign::Minus)), Err(TraceError::SameSlot(1)));
    }

    #[test]
    fn factor_values() {
        let f = Arc::new(CommutationForm::triangle_algebra(1));
        let pp = triangle_factor(&f, 0, (0, Sign::Plus), (1, Sign::Plus)).unwrap();
        let z0i = QtElement::generator(&f, 0).inverse().unwrap();
        let z1i = QtElement::generator(&f, 1).inverse().unwrap();
        assert_eq!(pp, z0i.mul(&z1i).unwrap().scale_omega(-1));
        let mm = triangle_factor(&f, 0, (2, Sign::Minus), (0, Sign::Minus)).unwrap();
        let z2 = QtElement::generator(&f, 2);
        let z0 = QtElement::generator(&f, 0);
        assert_eq!(mm, z2.mul(&z0).unwrap().scale_omega(-1));
        // each factor is its own Weyl-ordered monomial
        assert_eq!(mm, QtElement::weyl_monomial(&f, vec![1, 0, 1]));
        let pm = triangle_factor(&f, 0, (1, Sign::Plus), (2, Sign::Minus)).unwrap();
        assert_eq!(pm, QtElement::weyl_monomial(&f, vec![0, -1, 1]));
    }

    #[test]
    fn products_in_a_triangle() {
        let f = Arc::new(CommutationForm::triangle_algebra(1));
        assert_eq!(triangle_product(&f, 0, &[]).unwrap(), QtElement::one(&f));
        let s1 = StatedStrand { ends: [(0, Sign::Plus), (1, Sign::Minus)] };
        let s2 = StatedStrand { ends: [(1, Sign::Minus), (2, Sign::Plus)] };
        assert_eq!(triangle_product(&f, 0, &[s1]).unwrap(), triangle_factor(&f, 0, s1.ends[0], s1.ends[1]).unwrap());
        assert!(triangle_product(&f, 0, &[s1, s2]).unwrap().is_zero());
        let s3 = StatedStrand { ends: [(1, Sign::Plus), (2, Sign::Plus)] };
        let ab = triangle_product(&f, 0, &[s1, s3]).unwrap();
        let ba = triangle_product(&f, 0, &[s3, s1]).unwrap();
        assert_ne!(ab, ba);
    }

    #[test]
    fn biangle_formula_values() {
        assert_eq!(biangle_value(&BiangleDiagram::default()), OmegaLaurent::one());
        let mut d = BiangleDiagram::default();
        d.left_caps[P][M] = 1;
        assert_eq!(biangle_value(&d), OmegaLaurent::monomial(-1, -5));
        let d = BiangleDiagram { circles: 1, ..Default::default() };
        assert_eq!(biangle_value(&d), OmegaLaurent::from_terms([(4, BigInt::from(-1)), (-4, BigInt::from(-1))]));
        let mut d = BiangleDiagram::default();
        d.through[M][P] = 1;
        assert!(biangle_value(&d).is_zero());
        let mut d = BiangleDiagram::default();
        d.through[P][P] = 3;
        d.through[M][M] = 2;
        assert_eq!(biangle_value(&d), OmegaLaurent::one());
        let mut d = BiangleDiagram::default();
        d.left_caps[M][P] = 1;
        d.right_caps[M][P] = 1;
        d.right_caps[P][M] = 2;
        // (-1)^1 w^(-1 + 5 + 2)
        assert_eq!(biangle_value(&d), OmegaLaurent::monomial(-1, 6));
    }

    #[test]
    fn chebyshev_low_degrees() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(chebyshev_f(0), ints(&[2]));
        assert_eq!(chebyshev_f(1), ints(&[0, 1]));
        assert_eq!(chebyshev_f(2), ints(&[-2, 0, 1]));
        assert_eq!(chebyshev_f(3), ints(&[0, -3, 0, 1]));
    }

    #[test]
    fn torus_simple_curve_has_three_terms() {
        let t = torus();
        let c = curve(&t, &[1, 1, 0]);
        let ord = solve(&t, &c, &mut LowestId).unwrap();
        let x = quantum_trace(&t, &c, &ord).unwrap();
        assert_eq!(x.term_count(), 3);
        assert!(x.is_positive());
        assert!(has_single_power_coefficients(&x));
        assert_eq!(quantum_trace_transfer_matrix(&t, &c, &ord).unwrap(), x);
        let l = lam(&t, &[(&[1, 1, 0], 1)]);
        assert_eq!(specialize(&x), classical_oracle(&t, &l).unwrap());
        let r = lamination_element(&t, &l, Engine::StateSum, &mut LowestId).unwrap();
        assert_eq!(r.element, x);
    }

    #[test]
    fn repeated_monomials_gather_several_powers() {
        let t = torus();
        let c = curve(&t, &[2, 1, 1]);
        let ord = solve(&t, &c, &mut LowestId).unwrap();
        let x = quantum_trace(&t, &c, &ord).unwrap();
        assert!(!has_single_power_coefficients(&x));
        assert!(is_bar_invariant(&x));
        let l = lam(&t, &[(&[2, 1, 1], 1)]);
        for (e, v) in classical_oracle(&t, &l).unwrap() {
            let e32: Vec<i32> = e.iter().map(|&a| a as i32).collect();
            let q = x.coefficient(&e32);
            assert_eq!(q.at_one(), v);
            assert_eq!(q.len() == 1, v == BigInt::one());
        }
    }

    #[test]
    fn weight_two_is_square_minus_two() {
        let t = torus();
        let l1 = lam(&t, &[(&[1, 1, 0], 1)]);
        let l2 = lam(&t, &[(&[1, 1, 0], 2)]);
        let x = lamination_element(&t, &l1, Engine::StateSum, &mut LowestId).unwrap().element;
        let y = lamination_element(&t, &l2, Engine::Transfer, &mut LowestId).unwrap().element;
        let two = QtElement::scalar(x.form(), OmegaLaurent::monomial(2, 0));
        assert_eq!(y, x.mul(&x).unwrap().sub(&two).unwrap());
        assert!(y.is_positive());
        assert_eq!(specialize(&y), classical_oracle(&t, &l2).unwrap());
    }

    #[test]
    fn peripheral_monomials() {
        let t = torus();
        let link = crate::lamination::vertex_link(&t, 0);
        let c = Curve::new(&t, &CurveInput { counts: link, traversal: None, peripheral: None }).unwrap();
        assert!(c.is_peripheral());
        let form = Arc::new(CommutationForm::arc_algebra(&t));
        assert_eq!(peripheral_element(&t, &c, 0).unwrap(), QtElement::one(&form));
        let p = peripheral_element(&t, &c, 1).unwrap();
        let q = peripheral_element(&t, &c, -1).unwrap();
        assert_eq!(p.term_count(), 1);
        assert!(p.is_positive() && q.is_positive());
        assert_eq!(p.mul(&q).unwrap(), QtElement::one(&form));
        assert_eq!(p.terms().next().unwrap().0, &vec![2, 2, 2]);
        let nc = curve(&t, &[1, 1, 0]);
        assert_eq!(peripheral_element(&t, &nc, 1), Err(TraceError::NotPeripheral));
        let ord = solve(&t, &nc, &mut LowestId).unwrap();
        assert_eq!(quantum_trace(&t, &c, &ord), Err(TraceError::Peripheral));
    }

    #[test]
    fn two_arc_weyl_bracket() {
        let t = torus();
        let form = Arc::new(CommutationForm::arc_algebra(&t));
        let (e, f) = (0..3)
            .flat_map(|e| (0..3).map(move |f| (e, f)))
            .find(|&(e, f)| t.epsilon(e, f).unwrap() == 2)
            .expect("torus has eps = 2");
        let b = QtElement::weyl_bracket(&form, &[e, f]);
        assert_eq!(b, QtElement::word(&form, &[e, f]).scale_omega(-2));
    }

    #[test]
    fn empty_lamination_is_one() {
        let t = torus();
        let l = IntegralLamination::new(&t, &[]).unwrap();
        let r = lamination_element(&t, &l, Engine::StateSum, &mut LowestId).unwrap();
        assert_eq!(r.element, QtElement::one(&Arc::new(CommutationForm::arc_algebra(&t))));
        assert_eq!(classical_oracle(&t, &l).unwrap(), poly_constant(3, 1));
    }

    #[test]
    fn corrupted_ordering_is_refused() {
        let t = torus();
        let c = curve(&t, &[3, 2, 1]);
        let ord = solve(&t, &c, &mut LowestId).unwrap();
        let mut refused = 0;
        for e in 0..3 {
            let r = c.system().arc_junctures(e);
            for i in r.start..r.end.saturating_sub(1) {
                let mut bad = ord.clone();
                bad.juncture_rank.swap(i, i + 1);
                if check_compatibility_sanity(&t, c.system(), &bad.juncture_rank).is_err() {
                    assert!(matches!(quantum_trace(&t, &c, &bad), Err(TraceError::BadOrdering(_))));
                    assert!(matches!(quantum_trace_transfer_matrix(&t, &c, &bad), Err(TraceError::BadOrdering(_))));
                    refused += 1;
                }
            }
        }
        assert!(refused > 0);
    }

    fn random_curve(t: &Triangulation, seed: u64, max: u32) -> Option<Curve> {
        let mut s = seed | 1;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        let x: Vec<u32> = (0..t.arc_count()).map(|_| (next() % (max as u64 + 1)) as u32).collect();
        let counts = counts_from_crossings(t, &x)?;
        Curve::new(t, &CurveInput { counts, traversal: None, peripheral: None }).ok().filter(|c| !c.is_peripheral())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn engines_agree_and_are_positive(seed in any::<u64>(), which in 0usize..3) {
            let t = match which {
                0 => torus(),
                1 => Triangulation::build(standard::stellar_subdivide(&standard::once_punctured_torus(), 0)).unwrap(),
                _ => Triangulation::build(standard::torus_with_boundary_monogon()).unwrap(),
            };
            let Some(c) = random_curve(&t, seed, 4) else { return Ok(()) };
            prop_assume!(c.juncture_count() <= 12);
            let ord = solve(&t, &c, &mut LowestId).unwrap();
            let x = quantum_trace(&t, &c, &ord).unwrap();
            let y = quantum_trace_transfer_matrix(&t, &c, &ord).unwrap();
            prop_assert_eq!(&x, &y);
            prop_assert!(x.is_positive());
            prop_assert!(is_bar_invariant(&x));
            prop_assert!(x.term_count() <= 1 << c.juncture_count());
            let input = ComponentInput { curve: CurveInput { counts: c.counts().to_vec(), traversal: None, peripheral: None }, weight: 1 };
            let l = IntegralLamination::new(&t, &[input]).unwrap();
            prop_assert_eq!(specialize(&x), classical_oracle(&t, &l).unwrap());
        }
    }
}
