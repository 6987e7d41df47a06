//! Property-based invariants: bimultiplicativity of the sign cocycle and
//! closure/idempotence of coset canonicalization.

use lattice_fusion::cocycle::build_cocycle;
use lattice_fusion::intmat::{Int, Rat};
use lattice_fusion::lattice::{validate_lattice_i64, DualVector, Lattice};
use proptest::prelude::*;

fn lattices() -> Vec<Lattice> {
    vec![
        validate_lattice_i64(&[vec![2]]).unwrap(),
        validate_lattice_i64(&[vec![2, -1], vec![-1, 2]]).unwrap(),
        validate_lattice_i64(&[vec![2, 0], vec![0, 4]]).unwrap(),
    ]
}

fn int_vec(d: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, d)
}

proptest! {
    #[test]
    fn epsilon_is_bimultiplicative(
        pick in 0usize..3,
        a in int_vec(2), b in int_vec(2), c in int_vec(2),
    ) {
        let lat = &lattices()[pick];
        let d = lat.rank();
        let to_int = |v: &[i64]| -> Vec<Int> { v[..d].iter().map(|&x| Int::from(x)).collect() };
        let (a, b, c) = (to_int(&a), to_int(&b), to_int(&c));
        let coc = build_cocycle(lat);
        let sum = |x: &[Int], y: &[Int]| -> Vec<Int> {
            x.iter().zip(y).map(|(p, q)| p + q).collect()
        };
        let e = |x: &[Int], y: &[Int]| coc.eval_epsilon(x, y).unwrap();
        prop_assert_eq!(e(&sum(&a, &b), &c), e(&a, &c) * e(&b, &c));
        prop_assert_eq!(e(&a, &sum(&b, &c)), e(&a, &b) * e(&a, &c));
    }

    #[test]
    fn canonicalize_is_closed_and_idempotent(
        pick in 0usize..3,
        num in prop::collection::vec(-12i64..=12, 2),
    ) {
        let lat = &lattices()[pick];
        let d = lat.rank();
        let disc = lat.discriminant_group();
        // A dual vector: integer combination of the dual basis columns.
        let gram_inv = lat.gram_inv();
        let coords: Vec<Rat> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| gram_inv[i][j].clone() * Rat::from(Int::from(num[j])))
                    .fold(Rat::from(Int::from(0)), |acc, x| acc + x)
            })
            .collect();
        let v = DualVector::new(coords);
        let canon = disc.canonicalize(lat, &v).unwrap();
        // Closure: the canonical representative is one of the stored reps.
        prop_assert!(disc.index_of(&canon).is_some());
        // Idempotence.
        let again = disc.canonicalize(lat, &canon).unwrap();
        prop_assert_eq!(&again, &canon);
        // The representative differs from the input by a lattice vector.
        let diff = v.add(&canon.neg());
        prop_assert!(diff.integer_coords().is_some() || diff.is_integral());
    }
}
