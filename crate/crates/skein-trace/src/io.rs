//! JSON formats for triangulations, laminations and corpus instances.
//!
//! Slots and corners are numbered 0, 1, 2 clockwise; corner `k` faces
//! slot `k`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use skein_core::lamination::{ComponentInput, CurveError, CurveInput, IntegralLamination, Step};
use skein_core::surface::{Corner, DecoratedSurface, SlotRef, SurfaceError, Triangulation, TriangulationData};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("triangulation has {rows} slot rows but {count} triangles")]
    TriangleRows { rows: usize, count: usize },
    #[error("slot index {0} out of range")]
    SlotIndex(u8),
    #[error("{0}")]
    Surface(#[from] SurfaceError),
    #[error("lamination component {index}: {source}")]
    Curve { index: usize, source: CurveError },
    #[error("traversal step {step} of component {index} is out of range")]
    Step { index: usize, step: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub genus: u32,
    pub punctures: u32,
    pub boundary_arcs: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleJson {
    /// Side labels; glued sides share a label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slots: Option<[i64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub surface: SurfaceJson,
    pub triangles: Vec<TriangleJson>,
    /// Pairs `[[t, i], [t', i']]`; unpaired slots are boundary arcs.
    pub gluing: Vec<[[usize; 2]; 2]>,
}

/// A traversal step `[triangle, corner, entry slot, exit slot]`.
pub type StepJson = [usize; 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub weight: i64,
    /// One row `[c0, c1, c2]` per triangle.
    pub corner_counts: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traversal: Option<Vec<StepJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peripheral: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaminationJson {
    pub components: Vec<ComponentJson>,
}

/// Expected facts recorded with a corpus instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_junctures: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_component: Option<bool>,
}

/// A prescribed arc ordering sent straight to the checker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingFixture {
    pub component: usize,
    pub juncture_rank: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub name: String,
    #[serde(default)]
    pub family: String,
    pub triangulation: TriangulationJson,
    pub lamination: LaminationJson,
    #[serde(default)]
    pub expect: Expectation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering_fixture: Option<OrderingFixture>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// File contents with their digest.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, String), InputError> {
    let bytes = fs::read(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    let value = serde_json::from_slice(&bytes).map_err(|source| InputError::Json { path: path.display().to_string(), source })?;
    Ok((value, sha256_hex(&bytes)))
}

/// Digest of the canonical serialization.
pub fn canonical_digest<T: Serialize>(value: &T) -> String {
    sha256_hex(&serde_json::to_vec(value).expect("serializable"))
}

fn slot(s: [usize; 2]) -> Result<SlotRef, InputError> {
    let i = u8::try_from(s[1]).map_err(|_| InputError::SlotIndex(u8::MAX))?;
    if i > 2 {
        return Err(InputError::SlotIndex(i));
    }
    Ok(SlotRef::new(s[0], i))
}

impl TriangulationJson {
    pub fn to_data(&self) -> Result<TriangulationData, InputError> {
        let gluing = self.gluing.iter().map(|[a, b]| Ok((slot(*a)?, slot(*b)?))).collect::<Result<Vec<_>, InputError>>()?;
        let labelled = self.triangles.iter().filter(|t| t.slots.is_some()).count();
        let slot_labels = if labelled == 0 {
            None
        } else if labelled == self.triangles.len() {
            Some(self.triangles.iter().map(|t| t.slots.expect("all labelled")).collect())
        } else {
            return Err(InputError::TriangleRows { rows: labelled, count: self.triangles.len() });
        };
        Ok(TriangulationData {
            surface: DecoratedSurface {
                genus: self.surface.genus,
                punctures: self.surface.punctures,
                boundary_arcs: self.surface.boundary_arcs,
            },
            triangle_count: self.triangles.len(),
            gluing,
            slot_labels,
        })
    }

    pub fn build(&self) -> Result<Triangulation, InputError> {
        Ok(Triangulation::build(self.to_data()?)?)
    }

    pub fn from_data(d: &TriangulationData) -> Self {
        let s = d.surface;
        TriangulationJson {
            surface: SurfaceJson { genus: s.genus, punctures: s.punctures, boundary_arcs: s.boundary_arcs },
            triangles: (0..d.triangle_count)
                .map(|t| TriangleJson { slots: d.slot_labels.as_ref().map(|l| l[t]) })
                .collect(),
            gluing: d
                .gluing
                .iter()
                .map(|(a, b)| [[a.triangle, a.slot as usize], [b.triangle, b.slot as usize]])
                .collect(),
        }
    }
}

fn step(index: usize, i: usize, s: &StepJson) -> Result<Step, InputError> {
    if s[1] > 2 || s[2] > 2 || s[3] > 2 {
        return Err(InputError::Step { index, step: i });
    }
    Ok(Step { corner: Corner::new(s[0], s[1] as u8), entry: s[2] as u8, exit: s[3] as u8 })
}

pub fn step_json(s: &Step) -> StepJson {
    [s.corner.triangle, s.corner.index as usize, s.entry as usize, s.exit as usize]
}

impl LaminationJson {
    pub fn to_input(&self) -> Result<Vec<ComponentInput>, InputError> {
        self.components
            .iter()
            .enumerate()
            .map(|(index, c)| {
                let traversal = match &c.traversal {
                    Some(steps) => Some(steps.iter().enumerate().map(|(i, s)| step(index, i, s)).collect::<Result<Vec<_>, _>>()?),
                    None => None,
                };
                Ok(ComponentInput {
                    curve: CurveInput { counts: c.corner_counts.clone(), traversal, peripheral: c.peripheral },
                    weight: c.weight,
                })
            })
            .collect()
    }

    pub fn build(&self, t: &Triangulation) -> Result<IntegralLamination, InputError> {
        IntegralLamination::new(t, &self.to_input()?).map_err(|(index, source)| InputError::Curve { index, source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use skein_core::surface::standard;

    #[test]
    fn triangulation_round_trip() {
        let d = standard::genus_two_once_punctured();
        let j = TriangulationJson::from_data(&d);
        let text = serde_json::to_string(&j).unwrap();
        let back: TriangulationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_data().unwrap(), d);
        assert_eq!(back.build().unwrap().arc_count(), 9);
    }

    #[test]
    fn lamination_schema() {
        let t = Triangulation::build(standard::once_punctured_torus()).unwrap();
        let text = r#"{"components":[{"weight":1,"corner_counts":[[0,0,1],[0,0,1]],"traversal":[[0,2,0,1],[1,2,1,0]]}]}"#;
        let l: LaminationJson = serde_json::from_str(text).unwrap();
        let lam = l.build(&t).unwrap();
        assert_eq!(lam.components().len(), 1);
        let bad = r#"{"components":[{"weight":1,"corner_counts":[[0,0,1],[0,0,1]],"traversal":[[0,2,0,1],[1,2,2,2]]}]}"#;
        let l: LaminationJson = serde_json::from_str(bad).unwrap();
        assert!(matches!(l.build(&t), Err(InputError::Curve { index: 0, source: CurveError::TraversalMismatch })));
    }

    #[test]
    fn malformed_gluing_is_rejected() {
        let text = r#"{"surface":{"genus":1,"punctures":1,"boundary_arcs":0},"triangles":[{},{}],"gluing":[[[0,0],[1,0]],[[0,1],[1,1]],[[0,2],[0,2]]]}"#;
        let j: TriangulationJson = serde_json::from_str(text).unwrap();
        assert!(matches!(j.build(), Err(InputError::Surface(_))));
        let text = r#"{"surface":{"genus":1,"punctures":1,"boundary_arcs":0},"triangles":[{},{}],"gluing":[[[0,0],[1,7]]]}"#;
        let j: TriangulationJson = serde_json::from_str(text).unwrap();
        assert!(matches!(j.build(), Err(InputError::SlotIndex(7))));
    }
}
