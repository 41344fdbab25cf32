use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skein_core::lamination::{counts_from_crossings, ComponentInput, CurveInput, IntegralLamination};
use skein_core::surface::{standard, Triangulation};
use skein_core::trace::Engine;
use skein_trace::corpus::sample_curves;
use skein_trace::io::{LaminationJson, TriangulationJson};
use skein_trace::relabel::{relabel_components, rename_back, Relabeling};
use skein_trace::run::element_of;

fn pools() -> &'static Vec<Vec<Vec<[u32; 3]>>> {
    static POOLS: OnceLock<Vec<Vec<Vec<[u32; 3]>>>> = OnceLock::new();
    POOLS.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        surfaces()
            .into_iter()
            .map(|d| {
                let t = Triangulation::build(d).unwrap();
                sample_curves(&t, &mut rng, 4, 12, 40).iter().map(|c| c.counts().to_vec()).collect()
            })
            .collect()
    })
}

fn surfaces() -> Vec<skein_core::surface::TriangulationData> {
    vec![
        standard::stellar_subdivide(&standard::once_punctured_torus(), 0),
        standard::stellar_subdivide(&standard::three_punctured_sphere(), 0),
        standard::torus_with_boundary_monogon(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_does_not_change_the_element(
        which in 0usize..3,
        pick in any::<prop::sample::Index>(),
        weight in 1i64..3,
        seed in any::<u64>(),
        shift in 0usize..8,
    ) {
        let data = surfaces()[which].clone();
        let t = Triangulation::build(data.clone()).unwrap();
        let pool = &pools()[which];
        let counts = pool[pick.index(pool.len())].clone();
        let input = vec![ComponentInput { curve: CurveInput { counts, traversal: None, peripheral: None }, weight }];
        let lam = IntegralLamination::new(&t, &input).unwrap();
        let base = element_of(&t, &lam, Engine::Transfer, None).unwrap();

        let r = Relabeling::random(data.triangle_count, seed);
        let t2 = Triangulation::build(r.data(&data)).unwrap();
        let with_traversal: Vec<ComponentInput> = lam
            .components()
            .iter()
            .map(|(c, w)| ComponentInput {
                curve: CurveInput { counts: c.counts().to_vec(), traversal: Some(c.traversal().to_vec()), peripheral: None },
                weight: *w,
            })
            .collect();
        let lam2 = IntegralLamination::new(&t2, &relabel_components(&r, &with_traversal, shift)).unwrap();
        let y = element_of(&t2, &lam2, Engine::StateSum, Some(seed)).unwrap();
        prop_assert_eq!(rename_back(&y, &t, &r.arc_map(&t, &t2)), base);
    }

    #[test]
    fn formats_round_trip(which in 0usize..3, x in proptest::collection::vec(0u32..5, 9)) {
        let data = surfaces()[which].clone();
        let tj = TriangulationJson::from_data(&data);
        let text = serde_json::to_string(&tj).unwrap();
        let back: TriangulationJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_data().unwrap(), data);
        let t = back.build().unwrap();
        let x: Vec<u32> = (0..t.arc_count()).map(|e| if t.arcs()[e].is_boundary() { 0 } else { x[e] }).collect();
        if let Some(counts) = counts_from_crossings(&t, &x) {
            let lj: LaminationJson = serde_json::from_str(&format!(
                r#"{{"components":[{{"weight":1,"corner_counts":{}}}]}}"#,
                serde_json::to_string(&counts).unwrap()
            )).unwrap();
            let input = lj.to_input().unwrap();
            prop_assert_eq!(&input[0].curve.counts, &counts);
        }
    }
}
