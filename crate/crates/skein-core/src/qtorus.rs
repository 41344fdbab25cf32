//! Exact arithmetic in `Z[w, w^-1]` and in quantum tori whose generators
//! satisfy `Z_i Z_j = w^(2 eps_ij) Z_j Z_i`.
//!
//! Monomials are stored as exponent vectors read as the ordered product
//! `Z_0^a_0 Z_1^a_1 ...` in the fixed generator order.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::surface::{SlotRef, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QtError {
    #[error("operands live in different quantum tori")]
    MismatchedForms,
    #[error("only a single monomial with coefficient +-w^k can be inverted")]
    NotInvertible,
    #[error("exponent vector has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },
}

/// A Laurent polynomial in the formal variable `w` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OmegaLaurent {
    terms: BTreeMap<i32, BigInt>,
}

impl OmegaLaurent {
    pub fn zero() -> Self {
        OmegaLaurent::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * w^k`.
    pub fn monomial(c: impl Into<BigInt>, k: i32) -> Self {
        let mut out = OmegaLaurent::default();
        out.add_term(k, c.into());
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, BigInt)>) -> Self {
        let mut out = OmegaLaurent::default();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, k: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single `(k, c)` with `self = c w^k`, if there is exactly one term.
    pub fn as_single(&self) -> Option<(i32, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn shift(&self, k: i32) -> Self {
        OmegaLaurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn add_assign_shifted(&mut self, other: &OmegaLaurent, k: i32) {
        for (e, c) in &other.terms {
            self.add_term(e + k, c.clone());
        }
    }

    pub fn add(&self, other: &OmegaLaurent) -> Self {
        let mut out = self.clone();
        out.add_assign_shifted(other, 0);
        out
    }

    pub fn neg(&self) -> Self {
        OmegaLaurent { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn mul(&self, other: &OmegaLaurent) -> Self {
        self.mul_shifted(other, 0)
    }

    /// `self * other * w^k`.
    pub fn mul_shifted(&self, other: &OmegaLaurent, k: i32) -> Self {
        let mut out = OmegaLaurent::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a + b + k, x * y);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = OmegaLaurent::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Value at `w = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl fmt::Display for OmegaLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*w^{k}")?;
        }
        Ok(())
    }
}

/// How generators are named in renderings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorSet {
    /// One generator per arc, numbered by arc id.
    Arcs(usize),
    /// Three generators per triangle, numbered `3 t + slot`.
    TriangleSlots(usize),
}

/// The antisymmetric commutation matrix of a quantum torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommutationForm {
    generators: GeneratorSet,
    eps: Vec<Vec<i32>>,
    /// Nonzero entries `(p, q, 2 eps_pq)` with `p > q`.
    lower: Vec<(usize, usize, i32)>,
}

impl CommutationForm {
    pub fn new(generators: GeneratorSet, eps: Vec<Vec<i32>>) -> Self {
        let n = eps.len();
        let mut lower = Vec::new();
        for p in 0..n {
            for q in 0..p {
                if eps[p][q] != 0 {
                    lower.push((p, q, 2 * eps[p][q]));
                }
            }
        }
        CommutationForm { generators, eps, lower }
    }

    /// Tensor product of triangle algebras: `Z_a Z_(a+1) = w^2 Z_(a+1) Z_a`
    /// within each triangle, commuting across triangles.
    pub fn triangle_algebra(triangles: usize) -> Self {
        let n = 3 * triangles;
        let mut eps = vec![vec![0; n]; n];
        for t in 0..triangles {
            for a in 0..3 {
                let b = (a + 1) % 3;
                eps[3 * t + a][3 * t + b] = 1;
                eps[3 * t + b][3 * t + a] = -1;
            }
        }
        CommutationForm::new(GeneratorSet::TriangleSlots(triangles), eps)
    }

    /// Arc algebra with commutation matrix the triangulation's eps-matrix.
    pub fn arc_algebra(t: &Triangulation) -> Self {
        CommutationForm::new(GeneratorSet::Arcs(t.arc_count()), t.epsilon_matrix().to_vec())
    }

    pub fn rank(&self) -> usize {
        self.eps.len()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn eps(&self, p: usize, q: usize) -> i32 {
        self.eps[p][q]
    }

    /// Phase `c` in `Z^a Z^b = w^c Z^(a+b)`.
    pub fn product_phase(&self, a: &[i32], b: &[i32]) -> i32 {
        self.lower.iter().map(|&(p, q, v)| v * a[p] * b[q]).sum()
    }

    /// `sum_(p,q) a_p eps_pq b_q`, the exponent in `[Z^a][Z^b] = w^<a,b> [Z^(a+b)]`.
    pub fn pairing(&self, a: &[i32], b: &[i32]) -> i32 {
        self.lower.iter().map(|&(p, q, v)| (v / 2) * (a[p] * b[q] - a[q] * b[p])).sum()
    }

    /// Phase `s` with `[Z^a] = w^s Z^a`.
    pub fn weyl_phase(&self, a: &[i32]) -> i32 {
        // Z^a_p before Z^a_q for q > p: s = -sum_(p<q) eps_pq a_p a_q
        self.lower.iter().map(|&(p, q, v)| (v / 2) * a[p] * a[q]).sum()
    }

    pub fn generator_name(&self, i: usize) -> String {
        match self.generators {
            GeneratorSet::Arcs(_) => format!("Z[{i}]"),
            GeneratorSet::TriangleSlots(_) => format!("Z[{}.{}]", i / 3, i % 3),
        }
    }
}

/// A monomial `w^omega Z^exps` with coefficient one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub omega: i32,
    pub exps: Vec<i32>,
}

impl Monomial {
    pub fn one(rank: usize) -> Self {
        Monomial { omega: 0, exps: vec![0; rank] }
    }

    pub fn mul(&self, other: &Monomial, form: &CommutationForm) -> Monomial {
        let omega = self.omega + other.omega + form.product_phase(&self.exps, &other.exps);
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { omega, exps }
    }

    pub fn mul_assign(&mut self, other: &Monomial, form: &CommutationForm) {
        self.omega += other.omega + form.product_phase(&self.exps, &other.exps);
        for (a, b) in self.exps.iter_mut().zip(&other.exps) {
            *a += b;
        }
    }

    pub fn inverse(&self, form: &CommutationForm) -> Monomial {
        let neg: Vec<i32> = self.exps.iter().map(|a| -a).collect();
        let c = form.product_phase(&self.exps, &neg);
        Monomial { omega: -self.omega - c, exps: neg }
    }
}

/// An element of a quantum torus in normal form.
#[derive(Clone, Debug)]
pub struct QtElement {
    form: Arc<CommutationForm>,
    terms: BTreeMap<Vec<i32>, OmegaLaurent>,
}

impl PartialEq for QtElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.form, &other.form) || self.form == other.form) && self.terms == other.terms
    }
}

impl Eq for QtElement {}

impl QtElement {
    pub fn zero(form: &Arc<CommutationForm>) -> Self {
        QtElement { form: form.clone(), terms: BTreeMap::new() }
    }

    pub fn one(form: &Arc<CommutationForm>) -> Self {
        Self::from_monomial(form, &Monomial::one(form.rank()))
    }

    pub fn scalar(form: &Arc<CommutationForm>, c: OmegaLaurent) -> Self {
        let mut out = Self::zero(form);
        out.add_term(vec![0; form.rank()], &c, 0);
        out
    }

    pub fn from_monomial(form: &Arc<CommutationForm>, m: &Monomial) -> Self {
        let mut out = Self::zero(form);
        out.add_monomial(m, &BigInt::one());
        out
    }

    /// The single generator `Z_i`.
    pub fn generator(form: &Arc<CommutationForm>, i: usize) -> Self {
        let mut exps = vec![0; form.rank()];
        exps[i] = 1;
        Self::from_monomial(form, &Monomial { omega: 0, exps })
    }

    /// Ordered product `Z_(g_1) Z_(g_2) ...` of generators.
    pub fn word(form: &Arc<CommutationForm>, gens: &[usize]) -> Self {
        let mut m = Monomial::one(form.rank());
        for &g in gens {
            let mut e = vec![0; form.rank()];
            e[g] = 1;
            m.mul_assign(&Monomial { omega: 0, exps: e }, form);
        }
        Self::from_monomial(form, &m)
    }

    /// The Weyl-ordered product `[Z_(g_1) ... Z_(g_r)]`.
    pub fn weyl_bracket(form: &Arc<CommutationForm>, gens: &[usize]) -> Self {
        let mut s = 0;
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                s -= form.eps(gens[i], gens[j]);
            }
        }
        Self::word(form, gens).scale_omega(s)
    }

    /// The Weyl-ordered monomial `[Z^a]`.
    pub fn weyl_monomial(form: &Arc<CommutationForm>, exps: Vec<i32>) -> Self {
        let omega = form.weyl_phase(&exps);
        Self::from_monomial(form, &Monomial { omega, exps })
    }

    pub fn form(&self) -> &Arc<CommutationForm> {
        &self.form
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &OmegaLaurent)> + '_ {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[i32]) -> OmegaLaurent {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Adds `c * w^shift * Z^exps`.
    pub fn add_term(&mut self, exps: Vec<i32>, c: &OmegaLaurent, shift: i32) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c.shift(shift));
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_shifted(c, shift);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c * m`.
    pub fn add_monomial(&mut self, m: &Monomial, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m.exps.clone()) {
            Entry::Vacant(v) => {
                v.insert(OmegaLaurent::monomial(c.clone(), m.omega));
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_term(m.omega, c.clone());
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &QtElement) -> Result<(), QtError> {
        if Arc::ptr_eq(&self.form, &other.form) || self.form == other.form {
            Ok(())
        } else {
            Err(QtError::MismatchedForms)
        }
    }

    pub fn add(&self, other: &QtElement) -> Result<QtElement, QtError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &QtElement) -> Result<(), QtError> {
        self.check(other)?;
        self.add_assign_unchecked(other);
        Ok(())
    }

    fn add_assign_unchecked(&mut self, other: &QtElement) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c, 0);
        }
    }

    pub fn neg(&self) -> QtElement {
        QtElement {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &QtElement) -> Result<QtElement, QtError> {
        self.add(&other.neg())
    }

    pub fn scale_omega(&self, k: i32) -> QtElement {
        QtElement {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.shift(k))).collect(),
        }
    }

    pub fn scale(&self, c: &OmegaLaurent) -> QtElement {
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            let y = x.mul(c);
            if !y.is_zero() {
                terms.insert(e.clone(), y);
            }
        }
        QtElement { form: self.form.clone(), terms }
    }

    pub fn mul(&self, other: &QtElement) -> Result<QtElement, QtError> {
        self.check(other)?;
        let mut out = QtElement::zero(&self.form);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let phase = self.form.product_phase(a, b);
                let exps: Vec<i32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                let c = x.mul_shifted(y, phase);
                out.add_term(exps, &c, 0);
            }
        }
        Ok(out)
    }

    /// Right multiplication by a unit-coefficient monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> QtElement {
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            let phase = self.form.product_phase(a, &m.exps) + m.omega;
            let exps: Vec<i32> = a.iter().zip(&m.exps).map(|(p, q)| p + q).collect();
            terms.insert(exps, x.shift(phase));
        }
        QtElement { form: self.form.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> QtElement {
        let mut out = QtElement::one(&self.form);
        for _ in 0..n {
            out = out.mul(self).expect("same form");
        }
        out
    }

    /// The inverse of `+-w^k Z^a`; any other element is rejected.
    pub fn inverse(&self) -> Result<QtElement, QtError> {
        if self.terms.len() != 1 {
            return Err(QtError::NotInvertible);
        }
        let (exps, c) = self.terms.iter().next().expect("one term");
        let (k, coef) = c.as_single().ok_or(QtError::NotInvertible)?;
        if coef.abs() != BigInt::one() {
            return Err(QtError::NotInvertible);
        }
        let inv = Monomial { omega: k, exps: exps.clone() }.inverse(&self.form);
        let mut out = QtElement::zero(&self.form);
        out.add_monomial(&inv, coef);
        Ok(out)
    }

    /// Integer power, negative exponents through [`QtElement::inverse`].
    pub fn powi(&self, k: i64) -> Result<QtElement, QtError> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.inverse()?.pow((-k) as u32))
        }
    }

    /// Every coefficient lies in `Z_{>=0}[w, w^-1]`.
    pub fn is_positive(&self) -> bool {
        self.terms.values().all(OmegaLaurent::is_nonnegative)
    }

    /// Substitutes `w = 1`.
    pub fn specialize_commutative(&self) -> CommutativePoly {
        let mut out = CommutativePoly::default();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.at_one());
        }
        out
    }

    /// Rewrites in `X_i = Z_i^2` and `q = w^4` when all exponents are even
    /// and all `w`-powers are multiples of four.
    pub fn x_subalgebra_form(&self) -> Option<XForm> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.iter().any(|a| a % 2 != 0) {
                return None;
            }
            let half: Vec<i32> = e.iter().map(|a| a / 2).collect();
            // X^b in normal order is Z_0^(2 b_0) Z_1^(2 b_1) ..., i.e. Z^(2b) itself
            let mut q = BTreeMap::new();
            for (k, v) in c.terms() {
                if k % 4 != 0 {
                    return None;
                }
                q.insert(k / 4, v.clone());
            }
            terms.insert(half, q);
        }
        Some(XForm { terms })
    }

    /// Text rendering, sorted by exponent vector then `w`-power.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            for (k, v) in c.terms() {
                let mut s = format!("{v}*w^{k}");
                for (i, a) in e.iter().enumerate() {
                    if *a != 0 {
                        s.push_str(&format!(" * {}^{a}", self.form.generator_name(i)));
                    }
                }
                parts.push(s);
            }
        }
        parts.join(" + ")
    }

    /// Re-expresses the element over another form with generators renamed by
    /// `perm` (old index `i` becomes `perm[i]`).
    pub fn rename(&self, target: &Arc<CommutationForm>, perm: &[usize]) -> QtElement {
        let mut out = QtElement::zero(target);
        let n = target.rank();
        for (e, c) in &self.terms {
            let mut m = Monomial::one(n);
            for (i, &a) in e.iter().enumerate() {
                let mut g = vec![0; n];
                g[perm[i]] = a;
                m.mul_assign(&Monomial { omega: 0, exps: g }, target);
            }
            out.add_term(m.exps, c, m.omega);
        }
        out
    }
}

impl fmt::Display for QtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A commutative Laurent polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommutativePoly {
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl CommutativePoly {
    pub fn add_term(&mut self, exps: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// An element written in `X` variables with coefficients in `Z[q, q^-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XForm {
    /// `X`-exponent vector to `q`-power to coefficient.
    pub terms: BTreeMap<Vec<i32>, BTreeMap<i32, BigInt>>,
}

impl XForm {
    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| c.values().all(|v| !v.is_negative()))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            for (k, v) in c {
                let mut s = format!("{v}*q^{k}");
                for (i, a) in e.iter().enumerate() {
                    if *a != 0 {
                        s.push_str(&format!(" * X[{i}]^{a}"));
                    }
                }
                parts.push(s);
            }
        }
        parts.join(" + ")
    }
}

/// Coefficients of `F_k` with `F_0 = 2`, `F_1 = x`, `F_(k+1) = x F_k - F_(k-1)`,
/// lowest degree first.
pub fn chebyshev_f(k: u32) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![BigInt::from(2)];
    if k == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..k {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `F_k(x)` evaluated by Horner's rule in the quantum torus.
pub fn chebyshev_apply(k: u32, x: &QtElement) -> QtElement {
    let coeffs = chebyshev_f(k);
    let form = x.form().clone();
    let mut acc = QtElement::zero(&form);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).expect("same form");
        if !c.is_zero() {
            acc.add_assign(&QtElement::scalar(&form, OmegaLaurent::monomial(c.clone(), 0)))
                .expect("same form");
        }
    }
    acc
}

/// Images of the arc generators in the triangle algebra.
pub fn embed_arc_generators(t: &Triangulation, tri: &Arc<CommutationForm>) -> Vec<QtElement> {
    (0..t.arc_count())
        .map(|e| {
            let slots = &t.arcs()[e].slots;
            let m = arc_image(slots, t.arcs()[e].is_self_folded(), tri);
            QtElement::from_monomial(tri, &m)
        })
        .collect()
}

fn slot_index(s: SlotRef) -> usize {
    3 * s.triangle + s.slot as usize
}

fn arc_image(slots: &[SlotRef], self_folded: bool, tri: &CommutationForm) -> Monomial {
    let mut exps = vec![0; tri.rank()];
    for &s in slots {
        exps[slot_index(s)] += 1;
    }
    if self_folded {
        // w^-1 Z_a Z_(a+1) with a the slot followed clockwise by the other
        let (x, y) = (slots[0].slot, slots[1].slot);
        let a = if (x + 1) % 3 == y { x } else { y };
        let ia = 3 * slots[0].triangle + a as usize;
        let ib = 3 * slots[0].triangle + ((a + 1) % 3) as usize;
        let mut left = vec![0; tri.rank()];
        left[ia] = 1;
        let mut right = vec![0; tri.rank()];
        right[ib] = 1;
        let p = Monomial { omega: 0, exps: left }.mul(&Monomial { omega: 0, exps: right }, tri);
        Monomial { omega: p.omega - 1, exps: p.exps }
    } else {
        // factors from distinct triangles (or a boundary slot) commute
        Monomial { omega: 0, exps }
    }
}

/// Translates triangle-algebra monomials `Z^A` lying in the image of the arc
/// algebra back to arc generators.
#[derive(Clone, Debug)]
pub struct ArcEmbedding {
    pub tri: Arc<CommutationForm>,
    pub arcs: Arc<CommutationForm>,
    images: Vec<Monomial>,
    slot_arc: Vec<usize>,
}

impl ArcEmbedding {
    pub fn new(t: &Triangulation) -> Self {
        let tri = Arc::new(CommutationForm::triangle_algebra(t.triangle_count()));
        let arcs = Arc::new(CommutationForm::arc_algebra(t));
        let images = (0..t.arc_count())
            .map(|e| arc_image(&t.arcs()[e].slots, t.arcs()[e].is_self_folded(), &tri))
            .collect();
        let mut slot_arc = vec![0; 3 * t.triangle_count()];
        for (e, a) in t.arcs().iter().enumerate() {
            for &s in &a.slots {
                slot_arc[slot_index(s)] = e;
            }
        }
        ArcEmbedding { tri, arcs, images, slot_arc }
    }

    /// Image of the normal-ordered arc monomial `Z^b` (with coefficient 1).
    pub fn image_of(&self, b: &[i32]) -> Monomial {
        let mut m = Monomial::one(self.tri.rank());
        for (e, &k) in b.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let g = if k > 0 { self.images[e].clone() } else { self.images[e].inverse(&self.tri) };
            for _ in 0..k.unsigned_abs() {
                m.mul_assign(&g, &self.tri);
            }
        }
        m
    }

    /// Arc exponents `b` with `image_of(b)` proportional to `Z^a`, if any.
    pub fn preimage_exponents(&self, a: &[i32]) -> Option<Vec<i32>> {
        let mut b: Vec<Option<i32>> = vec![None; self.arcs.rank()];
        for (i, &x) in a.iter().enumerate() {
            let e = self.slot_arc[i];
            match b[e] {
                None => b[e] = Some(x),
                Some(y) if y == x => {}
                Some(_) => return None,
            }
        }
        Some(b.into_iter().map(|x| x.unwrap_or(0)).collect())
    }

    /// Rewrites a triangle-algebra element over arc generators; `None` if it
    /// does not lie in the arc subalgebra.
    pub fn to_arc_element(&self, x: &QtElement) -> Option<QtElement> {
        let mut out = QtElement::zero(&self.arcs);
        for (a, c) in x.terms() {
            let b = self.preimage_exponents(a)?;
            let img = self.image_of(&b);
            out.add_term(b, c, -img.omega);
        }
        Some(out)
    }

    pub fn to_triangle_element(&self, x: &QtElement) -> QtElement {
        let mut out = QtElement::zero(&self.tri);
        for (b, c) in x.terms() {
            let img = self.image_of(b);
            out.add_term(img.exps, c, img.omega);
        }
        out
    }
}
