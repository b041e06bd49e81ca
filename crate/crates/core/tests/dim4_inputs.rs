use std::collections::BTreeMap;

use hadwiger_core::general::EpsilonSchedule;
use hadwiger_core::sampling::{boundary_grid, random_tangency_set};
use hadwiger_core::{
    a4_cover, assemble96, covers_target, skeleton_target, verify_class, A4Case, BoxClass, Cover,
    Target,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn boundary_grid_hits_every_case() {
    let mut hits: BTreeMap<&str, usize> = BTreeMap::new();
    for t in boundary_grid() {
        let res = a4_cover(&t).unwrap();
        *hits.entry(res.case_tag.as_str()).or_default() += 1;
        assert_eq!(res.boxes.len(), 8);
        let c = Cover::new(4, res.boxes.clone(), BoxClass::Strict).unwrap();
        assert!(verify_class(&c));
        let target = Target::empty(4)
            .with_points(t.realized_points())
            .with_segments([res.segment.clone()]);
        assert!(covers_target(&c, &target).covered);
    }
    for case in A4Case::ALL {
        assert!(
            hits.get(case.as_str()).copied().unwrap_or(0) > 0,
            "case {case} missed"
        );
    }
}

#[test]
fn assemble_random_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let t = random_tangency_set(&mut rng, 4, 1 << 16);
        let a = assemble96(&t, &EpsilonSchedule::dim4_default()).unwrap();
        assert_eq!(a.cover.len(), 96);
        assert!(verify_class(&a.cover));
        let target = skeleton_target(4, 2).with_points(t.realized_points());
        assert!(covers_target(&a.cover, &target).covered);
    }
}
