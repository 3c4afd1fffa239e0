mod common;

use grassmann_lab::caps::Caps;
use grassmann_lab::embeddings::{
    build_apartment, build_dual, build_simplex_faces, build_sum, classify, classify_image, ClassificationKind,
};
use grassmann_lab::independence::{canonical_simplex, Ambient, PointSet};
use grassmann_lab::io;
use grassmann_lab::oracle::{cross_validate, enumerate_embeddings, SearchConfig};
use grassmann_lab::rigidity::{is_rigid, RigidityCase, SolverOptions};
use grassmann_lab::{Field, Subspace};

use common::construction_grid;

fn gf(p: u32) -> Field {
    Field::prime(p).unwrap()
}

fn frame(f: &Field, n: usize) -> Vec<Subspace> {
    (0..n).map(|i| Subspace::coordinate(f, n, &[i])).collect()
}

#[test]
fn constructions_survive_json_and_classify_identically() {
    let caps = Caps::default();
    let (cases, _) = construction_grid();
    for case in cases.iter().step_by(7) {
        let text = io::encode_embedding(&case.inst).to_string();
        let back = io::decode_embedding(&text, &caps).unwrap();
        assert_eq!(back, case.inst, "{}", case.label);
        let c = classify(&back).unwrap();
        let text = io::encode_classification(&c).to_string();
        assert_eq!(io::decode_classification(&text, &caps).unwrap(), c, "{}", case.label);
    }
}

#[test]
fn unlabeled_images_classify_like_labeled_ones() {
    let (cases, _) = construction_grid();
    for case in cases.iter().filter(|c| c.l > 4).step_by(5) {
        let labeled = classify(&case.inst).unwrap();
        let bare = classify_image(&case.inst.image()).unwrap();
        assert_eq!(bare.kind.tag(), labeled.kind.tag(), "{}", case.label);
        assert_eq!(bare.rebuild().unwrap().image(), case.inst.image(), "{}", case.label);
    }
}

#[test]
fn johnson_images_at_full_parameters() {
    // J(n,k)-images: n = 2k apartments, 2k < n star type over 0 or top type in a 2k-space
    let f = gf(2);
    let c = classify(&build_apartment(&frame(&f, 4), 2).unwrap()).unwrap();
    assert!(c.is_full_apartment);
    let mut cfg = SearchConfig::new(5, 2, 5, 2, f.clone());
    cfg.symmetry_reduction = true;
    let r = enumerate_embeddings(&cfg).unwrap();
    assert!(r.complete);
    for labeled in r.images.values() {
        let inst = grassmann_lab::embeddings::EmbeddingInstance::new(r.johnson.clone(), r.image_subspaces(labeled)).unwrap();
        match classify(&inst).unwrap().kind {
            ClassificationKind::StarType { base, .. } => assert!(base.is_zero()),
            ClassificationKind::TopType { roof, .. } => assert_eq!(roof.dim(), 4),
            other => panic!("unexpected {}", other.tag()),
        }
    }
}

#[test]
fn oracle_contains_every_construction() {
    let f = gf(2);
    let mut cfg = SearchConfig::new(5, 2, 5, 2, f.clone());
    cfg.symmetry_reduction = true;
    let r = enumerate_embeddings(&cfg).unwrap();
    let g = &r.grassmannian;
    let key = |img: Vec<Subspace>| {
        let mut ids: Vec<u32> = img.iter().map(|s| g.id_of(s).unwrap()).collect();
        ids.sort_unstable();
        ids
    };
    let primal = canonical_simplex(&Ambient::primal(&f, 5), 4).unwrap();
    let sums = build_sum(&PointSet::new(primal.ambient().clone(), primal.points()[..5].to_vec()).unwrap(), 2).unwrap();
    assert!(r.images.contains_key(&key(sums.image())));
    let under = Ambient::Under(Subspace::coordinate(&f, 5, &[0, 1, 2, 3]));
    let tops = build_dual(&canonical_simplex(&under, 4).unwrap(), 2).unwrap();
    assert!(r.images.contains_key(&key(tops.image())));
}

#[test]
fn oracle_cross_validation_over_gf3() {
    let mut cfg = SearchConfig::new(4, 2, 4, 2, gf(3));
    cfg.symmetry_reduction = true;
    let cv = cross_validate(&cfg).unwrap();
    assert!(cv.passed(), "{cv:?}");
    assert_eq!(cv.equals_apartments, Some(true));
    // |GL(4,3)| / (2^4 · 4!)
    assert_eq!(cv.images, 24261120 / 384);
}

#[test]
fn rigidity_case_table_on_grid() {
    let (cases, _) = construction_grid();
    for case in cases.iter().filter(|c| c.label.contains("q=2") || c.l == 5) {
        let r = is_rigid(&case.inst, &SolverOptions::default()).unwrap();
        assert!(r.complete, "{}", case.label);
        if r.rigidity_case != RigidityCase::Other {
            assert_eq!(r.is_rigid, r.predicted_rigid, "{} {:?}", case.label, r.rigidity_case);
        }
        if r.beyond_rigidity_bound {
            assert!(!r.is_rigid, "{}", case.label);
        }
    }
}

#[test]
fn rigidity_transport_through_annihilator() {
    let f = gf(3);
    let inst = build_simplex_faces(&f, 4, 2).unwrap();
    let a = is_rigid(&inst, &SolverOptions::default()).unwrap();
    let b = is_rigid(&inst.annihilator(), &SolverOptions::default()).unwrap();
    assert_eq!(a.is_rigid, b.is_rigid);
    assert_eq!(a.pgl_stabilizer_order, b.pgl_stabilizer_order);
}
