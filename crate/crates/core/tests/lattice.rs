mod common;

use common::*;
use elliptica::lattice::{classify, equivalent, reduce};
use elliptica::{Complex64, Lattice, TorusShape};
use proptest::prelude::*;

#[test]
fn reduce_examples() {
    for (_, l) in test_tori() {
        assert_eq!(reduce(c(0.0, 0.0), &l).unwrap().z, c(0.0, 0.0));
        assert!(reduce(2.0 * l.w1 + 2.0 * l.w2, &l).unwrap().z.norm() < 1e-12);
        let r = reduce(3.0 * l.w1 + l.w2, &l).unwrap().z;
        assert!((r - (l.w1 + l.w2)).norm() < 1e-12, "{r}");
    }
}

#[test]
fn reduce_rejects_degenerate_lattice() {
    let l = Lattice { w1: c(1.0, 0.0), w2: c(2.0, 0.0) };
    assert!(reduce(c(0.3, 0.0), &l).is_err());
    assert!(classify(&l).is_err());
}

#[test]
fn equivalence_examples() {
    for (_, l) in test_tori() {
        let z = c(0.31, -0.77);
        assert!(equivalent(z, z, &l));
        assert!(equivalent(z, z + 2.0 * l.w1, &l));
        assert!(!equivalent(c(0.0, 0.0), l.w1, &l));
    }
}

#[test]
fn classify_examples() {
    assert_eq!(classify(&square()).unwrap().shape, TorusShape::Square);
    assert_eq!(classify(&rectangular()).unwrap().shape, TorusShape::Rectangular);
    assert_eq!(classify(&rhombic()).unwrap().shape, TorusShape::Rhombic);
    let generic = Lattice::new(c(1.0, 0.0), c(0.3, 1.7)).unwrap();
    assert_eq!(classify(&generic).unwrap().shape, TorusShape::Generic);
}

fn lattice_strategy() -> impl Strategy<Value = Lattice> {
    (0.5f64..2.0, -3.0f64..3.0, 0.2f64..2.5, 0.3f64..2.8).prop_map(|(r1, a1, r2, da)| {
        let w1 = Complex64::from_polar(r1, a1);
        Lattice::new(w1, w1 / r1 * Complex64::from_polar(r2, da)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_is_idempotent_and_equivalent(l in lattice_strategy(), x in -20.0f64..20.0, y in -20.0f64..20.0) {
        let z = c(x, y);
        let r = l.reduce(z);
        prop_assert!((l.reduce(r) - r).norm() <= 1e-9 * (1.0 + z.norm()));
        prop_assert!(l.equivalent(z, r));
        let (s, t) = l.coords(r);
        prop_assert!((-1e-9..1.0 + 1e-9).contains(&s) && (-1e-9..1.0 + 1e-9).contains(&t));
    }

    #[test]
    fn equivalence_is_symmetric_and_transitive(l in lattice_strategy(), x in -5.0f64..5.0, y in -5.0f64..5.0,
                                               m in -3i32..3, n in -3i32..3, p in -3i32..3, q in -3i32..3) {
        let z = c(x, y);
        let u = z + 2.0 * (m as f64 * l.w1 + n as f64 * l.w2);
        let v = u + 2.0 * (p as f64 * l.w1 + q as f64 * l.w2);
        prop_assert!(l.equivalent(z, u) && l.equivalent(u, z));
        prop_assert!(l.equivalent(z, v));
        prop_assert!(!l.equivalent(z, z + l.w1));
    }

    #[test]
    fn classification_is_similarity_invariant(k in 0u8..3, r in 0.3f64..3.0, a in -3.0f64..3.0) {
        let l = [square(), rectangular(), rhombic()][k as usize];
        let m = l.scaled(Complex64::from_polar(r, a));
        prop_assert_eq!(l.classify().shape, m.classify().shape);
    }
}
