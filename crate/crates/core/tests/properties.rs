use grassmann_lab::caps::Caps;
use grassmann_lab::grassmannian::distance;
use grassmann_lab::io;
use grassmann_lab::{Field, FieldAutomorphism, Matrix, SemilinearMap, Subspace};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(2).unwrap()),
        Just(Field::prime(3).unwrap()),
        Just(Field::new(2, 2).unwrap()),
        Just(Field::prime(5).unwrap()),
        Just(Field::new(2, 3).unwrap()),
        Just(Field::new(3, 2).unwrap()),
    ]
}

fn vectors(q: usize, n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0..q as u8, n), 0..=max)
}

fn subspace_in(field: Field, n: usize) -> impl Strategy<Value = Subspace> {
    vectors(field.q(), n, n).prop_map(move |vs| Subspace::span(&field, n, &vs).unwrap())
}

fn two_subspaces() -> impl Strategy<Value = (Subspace, Subspace)> {
    (field_strategy(), 1usize..=5).prop_flat_map(|(f, n)| (subspace_in(f.clone(), n), subspace_in(f, n)))
}

fn invertible(field: Field, n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(0..field.q() as u8, n * n)
        .prop_map(move |d| Matrix::from_flat(&field, n, n, d).unwrap())
        .prop_filter("invertible", Matrix::is_invertible)
}

proptest! {
    #[test]
    fn field_axioms(f in field_strategy(), a in 0u8..=255, b in 0u8..=255, c in 0u8..=255) {
        let q = f.q() as u8;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        for t in 0..f.e() {
            let s = FieldAutomorphism::new(t);
            prop_assert_eq!(s.apply(&f, f.mul(a, b)), f.mul(s.apply(&f, a), s.apply(&f, b)));
        }
    }

    #[test]
    fn modular_law_and_annihilator((s, u) in two_subspaces()) {
        let sum = s.sum(&u).unwrap();
        let meet = s.intersect(&u).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), s.dim() + u.dim());
        prop_assert!(meet.is_subspace_of(&s) && s.is_subspace_of(&sum));
        prop_assert_eq!(s.annihilator().annihilator(), s.clone());
        prop_assert_eq!(s.annihilator().dim() + s.dim(), s.ambient_dim());
        prop_assert_eq!(sum.annihilator(), s.annihilator().intersect(&u.annihilator()).unwrap());
    }

    #[test]
    fn distance_is_a_metric_on_equal_dimensions(f in field_strategy(), n in 2usize..=5, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..n);
        let mut pick = || loop {
            let vs: Vec<Vec<u8>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..f.q()) as u8).collect()).collect();
            let s = Subspace::span(&f, n, &vs).unwrap();
            if s.dim() == k {
                return s;
            }
        };
        let (a, b, c) = (pick(), pick(), pick());
        let d = |x: &Subspace, y: &Subspace| distance(x, y).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b), k - a.intersection_dim(&b));
    }

    #[test]
    fn contragredient_law(
        (s, a, t) in (field_strategy(), 1usize..=4).prop_flat_map(|(f, n)| {
            let e = f.e();
            (subspace_in(f.clone(), n), invertible(f, n), 0..e)
        })
    ) {
        let u = SemilinearMap::new(a, FieldAutomorphism::new(t), false).unwrap();
        let cu = u.contragredient().unwrap();
        prop_assert_eq!(cu.apply(&s.annihilator()).unwrap(), u.apply(&s).unwrap().annihilator());
    }

    #[test]
    fn subspace_json_round_trip((s, _) in two_subspaces()) {
        let caps = Caps::default();
        let text = io::encode_subspace(&s).to_string();
        prop_assert_eq!(io::decode_subspace(&text, &caps).unwrap(), s);
    }

    #[test]
    fn decoders_never_panic(text in ".{0,200}") {
        let caps = Caps::default();
        let _ = io::decode_embedding(&text, &caps);
        let _ = io::decode_point_set(&text, &caps);
        let _ = io::decode_subspace(&text, &caps);
        let _ = io::decode_classification(&text, &caps);
        let _ = Caps::parse(&text);
    }
}

#[test]
fn fuzz_seeds_run_through_their_decoders() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let caps = Caps::default();
    let mut ok = 0;
    for target in ["decode_embedding", "decode_point_set", "decode_subspace", "decode_classification", "parse_caps"] {
        for entry in std::fs::read_dir(root.join(target)).unwrap() {
            let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
            let decoded = match target {
                "decode_embedding" => io::decode_embedding(&text, &caps).is_ok(),
                "decode_point_set" => io::decode_point_set(&text, &caps).is_ok(),
                "decode_subspace" => io::decode_subspace(&text, &caps).is_ok(),
                "decode_classification" => io::decode_classification(&text, &caps).is_ok(),
                _ => Caps::parse(&text).is_ok(),
            };
            ok += decoded as usize;
        }
    }
    // every seed except the truncated embedding and the malformed caps string
    assert_eq!(ok, 11);
}
