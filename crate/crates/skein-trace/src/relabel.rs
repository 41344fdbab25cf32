//! Renumbering triangles and rotating their slots, for comparing results
//! across arbitrary bookkeeping choices.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skein_core::lamination::{ComponentInput, Step};
use skein_core::qtorus::{CommutationForm, QtElement};
use skein_core::surface::{Corner, SlotRef, Triangulation, TriangulationData};

/// Old triangle `t` becomes `perm[t]`, its slot `i` becomes slot
/// `(i + rotation[t]) % 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    pub perm: Vec<usize>,
    pub rotation: Vec<u8>,
}

impl Relabeling {
    pub fn identity(n: usize) -> Self {
        Relabeling { perm: (0..n).collect(), rotation: vec![0; n] }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let rotation = (0..n).map(|_| rng.random_range(0..3u8)).collect();
        Relabeling { perm, rotation }
    }

    pub fn slot(&self, s: SlotRef) -> SlotRef {
        SlotRef::new(self.perm[s.triangle], (s.slot + self.rotation[s.triangle]) % 3)
    }

    pub fn corner(&self, c: Corner) -> Corner {
        Corner::new(self.perm[c.triangle], (c.index + self.rotation[c.triangle]) % 3)
    }

    pub fn data(&self, d: &TriangulationData) -> TriangulationData {
        let gluing = d.gluing.iter().map(|&(a, b)| (self.slot(a), self.slot(b))).collect();
        let slot_labels = d.slot_labels.as_ref().map(|rows| {
            let mut out = vec![[0i64; 3]; rows.len()];
            for (t, row) in rows.iter().enumerate() {
                for i in 0..3u8 {
                    let s = self.slot(SlotRef::new(t, i));
                    out[s.triangle][s.slot as usize] = row[i as usize];
                }
            }
            out
        });
        TriangulationData { surface: d.surface, triangle_count: d.triangle_count, gluing, slot_labels }
    }

    pub fn counts(&self, c: &[[u32; 3]]) -> Vec<[u32; 3]> {
        let mut out = vec![[0u32; 3]; c.len()];
        for (t, row) in c.iter().enumerate() {
            for k in 0..3u8 {
                let nc = self.corner(Corner::new(t, k));
                out[nc.triangle][nc.index as usize] = row[k as usize];
            }
        }
        out
    }

    pub fn step(&self, s: &Step) -> Step {
        let r = self.rotation[s.corner.triangle];
        Step { corner: self.corner(s.corner), entry: (s.entry + r) % 3, exit: (s.exit + r) % 3 }
    }

    /// For every old arc id, its id in the relabeled triangulation.
    pub fn arc_map(&self, old: &Triangulation, new: &Triangulation) -> Vec<usize> {
        old.arcs().iter().map(|a| new.arc_at(self.slot(a.slots[0]))).collect()
    }
}

/// Moves a lamination input across a relabeling, rotating each given
/// traversal to start `shift` steps later.
pub fn relabel_components(r: &Relabeling, input: &[ComponentInput], shift: usize) -> Vec<ComponentInput> {
    input
        .iter()
        .map(|c| {
            let mut c2 = c.clone();
            c2.curve.counts = r.counts(&c.curve.counts);
            c2.curve.traversal = c.curve.traversal.as_ref().map(|steps| {
                let mut v: Vec<Step> = steps.iter().map(|s| r.step(s)).collect();
                if !v.is_empty() {
                    let k = shift % v.len();
                    v.rotate_left(k);
                }
                v
            });
            c2
        })
        .collect()
}

/// Re-expresses an element computed on the relabeled triangulation over the
/// original arc ids.
pub fn rename_back(x: &QtElement, old: &Triangulation, arc_map: &[usize]) -> QtElement {
    let mut back = vec![0usize; arc_map.len()];
    for (e, &n) in arc_map.iter().enumerate() {
        back[n] = e;
    }
    let form = Arc::new(CommutationForm::arc_algebra(old));
    x.rename(&form, &back)
}

#[cfg(test)]
mod tests {
    use super::*;
    use skein_core::surface::standard;

    #[test]
    fn epsilon_is_preserved() {
        let d = standard::stellar_subdivide(&standard::once_punctured_torus(), 1);
        let old = Triangulation::build(d.clone()).unwrap();
        for seed in 0..8 {
            let r = Relabeling::random(d.triangle_count, seed);
            let new = Triangulation::build(r.data(&d)).unwrap();
            let m = r.arc_map(&old, &new);
            for e in 0..old.arc_count() {
                for f in 0..old.arc_count() {
                    assert_eq!(old.epsilon(e, f).unwrap(), new.epsilon(m[e], m[f]).unwrap());
                }
            }
        }
    }
}
