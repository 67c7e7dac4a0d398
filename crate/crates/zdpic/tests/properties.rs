use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zdpic::diagram::{random_box_word, DiagramSum};
use zdpic::document::DiagramDocument;
use zdpic::matrix::diagram_to_matrix;
use zdpic::scalar::{make_ring, ExactScalar};

fn random_sum(seed: u64, d: u32) -> DiagramSum {
    let ring = make_ring(d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = rng.random_range(0..3);
    let bottom = top + 2 * rng.random_range(0..2);
    let mut s = DiagramSum::zero(&ring, top, bottom);
    for _ in 0..rng.random_range(1..4) {
        let w = random_box_word(&mut rng, d, top, bottom, 10, 6);
        let c = ExactScalar::zeta_pow(&ring, rng.random_range(0..8)).try_add(&ExactScalar::integer(&ring, rng.random_range(-3..4))).unwrap();
        s = s.add(&DiagramSum::single(&ring, w).scaled(&c)).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn documents_round_trip(seed in any::<u64>(), d in 2u32..=7) {
        let s = random_sum(seed, d);
        let doc = DiagramDocument::from_sum(&s);
        let text = doc.to_json();
        let back = DiagramDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_json(), text);
        prop_assert!(back.to_sum().unwrap().equivalent(&s));
    }

    #[test]
    fn exact_products_match_complex(d in 2u32..=9, a in -20i64..20, b in -20i64..20, m in -4i64..5, n in -4i64..5) {
        let ring = make_ring(d).unwrap();
        let x = ExactScalar::zeta_pow(&ring, a).try_add(&ExactScalar::integer(&ring, m)).unwrap()
            .try_mul(&ExactScalar::delta_pow(&ring, 1)).unwrap();
        let y = ExactScalar::zeta_pow(&ring, b).try_sub(&ExactScalar::delta_pow(&ring, n)).unwrap();
        let exact = x.try_mul(&y).unwrap().to_complex();
        let float: Complex64 = x.to_complex() * y.to_complex();
        prop_assert!((exact - float).norm() < 1e-9 * (1.0 + float.norm()));
    }

    #[test]
    fn normalizing_keeps_the_matrix(seed in any::<u64>(), d in 2u32..=5) {
        let ring = make_ring(d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s: DiagramSum = DiagramSum::single(&ring, random_box_word(&mut rng, d, 2, 2, 12, 6));
        let a = diagram_to_matrix(&s).unwrap().m;
        let b = diagram_to_matrix(&s.normalize()).unwrap().m;
        prop_assert!((a - b).norm() < 1e-9);
    }
}
