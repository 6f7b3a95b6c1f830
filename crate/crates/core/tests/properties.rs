use egue::moments::f_of_m;
use egue::young::{dim_sm, dim_u, removals, transpose, Channel, RowPattern};
use egue::{EnsembleSpec, Engine, Partition, Statistics};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

/// Partitions with at most three rows and up to about 20 boxes.
fn three_row() -> impl Strategy<Value = Partition> {
    (0u32..=7, 0u32..=7, 1u32..=8).prop_map(|(c, b, a)| Partition::new(vec![a + b + c, b + c, c]).unwrap())
}

proptest! {
    #[test]
    fn p_sum_is_complete(f in three_row()) {
        prop_assume!(f.boxes() >= 2);
        let e = Engine::new();
        let s = e.p_term(Channel::Sym, &f) + e.p_term(Channel::Antisym, &f);
        prop_assert_eq!(s, BigRational::from_integer(BigInt::from(f_of_m(f.boxes()))));
    }

    #[test]
    fn removals_rebuild_the_parent(f in three_row()) {
        prop_assume!(f.boxes() >= 2);
        let rem = removals(&f).unwrap();
        prop_assert!(!rem.is_empty());
        for r in &rem {
            let (a, b) = r.rows;
            prop_assert!(a <= b);
            let mut parts = r.child.padded(f.rows());
            parts[a - 1] += 1;
            parts[b - 1] += 1;
            prop_assert_eq!(Partition::new(parts).unwrap(), f.clone());
            prop_assert_eq!(r.pattern == RowPattern::AA, a == b);
            prop_assert!(r.channels.contains(Channel::Sym) || r.channels.contains(Channel::Antisym));
            if a == b {
                prop_assert!(!r.channels.contains(Channel::Antisym));
            }
        }
        let mut children: Vec<_> = rem.iter().map(|r| r.child.clone()).collect();
        children.sort_by(|x, y| x.parts().cmp(y.parts()));
        children.dedup();
        prop_assert_eq!(children.len(), rem.len());
    }

    #[test]
    fn dimensions_are_positive_and_consistent(f in three_row(), omega in 1usize..9) {
        let d = dim_u(&f, omega).unwrap();
        prop_assert_eq!(d.is_zero(), f.rows() > omega);
        prop_assert!(!dim_sm(&f).is_zero());
        prop_assert_eq!(dim_sm(&f), dim_sm(&transpose(&f)));
    }

    #[test]
    fn partition_text_round_trips(f in three_row()) {
        let s = f.to_string();
        prop_assert_eq!(s.parse::<Partition>().unwrap(), f.clone());
        prop_assert_eq!(format!("{{{s}}}").parse::<Partition>().unwrap(), f);
    }

    #[test]
    fn h2_is_linear_in_variances(f in three_row(), vs in 0.1f64..5.0, va in 0.1f64..5.0) {
        prop_assume!(f.boxes() >= 2);
        let omega = 7;
        let e = Engine::new();
        let spec = |a, b| EnsembleSpec::new(omega, 3, Statistics::Boson, a, b).unwrap();
        let st = spec(1.0, 1.0).state(f.clone()).unwrap();
        let (Ok(hs), Ok(ha), Ok(h)) = (
            e.h2_average(&spec(1.0, 0.0), &st),
            e.h2_average(&spec(0.0, 1.0), &st),
            e.h2_average(&spec(vs, va), &st),
        ) else {
            return Ok(());
        };
        prop_assert!(hs >= 0.0 && ha >= 0.0);
        prop_assert!((h - (vs * hs + va * ha)).abs() <= 1e-9 * h.abs().max(1.0));
    }
}
