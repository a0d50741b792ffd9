//! Property tests for geometric invariants of the deformations.

use prymform::deform::rel_move;
use prymform::prym::{build_prototype_surface, check_prym_structure, Kappa, Prototype, PrymSurface};
use prymform::surface::{mat2_det, mat2_from_ints, origami};
use prymform::{QuadNum, Vec2};
use proptest::prelude::*;

fn s111(kappa: Kappa) -> PrymSurface {
    build_prototype_surface(&Prototype::new(kappa, 1, 1, 1).unwrap(), None).unwrap()
}

fn small_vec() -> impl Strategy<Value = Vec2> {
    (-6i64..=6, -6i64..=6, 30i64..=60)
        .prop_filter("nonzero", |(a, b, _)| *a != 0 || *b != 0)
        .prop_map(|(a, b, d)| Vec2::new(QuadNum::frac(a, d), QuadNum::frac(b, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rel_keeps_absolute_periods_and_involution(v in small_vec(), which in 0usize..2) {
        let kappa = Kappa::ALL[which];
        let ps = s111(kappa);
        let moved = rel_move(&ps, &v).unwrap();
        prop_assert_eq!(moved.periods(), ps.periods());
        prop_assert_eq!(moved.surface.area(), ps.surface.area());
        prop_assert!(check_prym_structure(&moved, Some(kappa)).is_ok());
        let back = rel_move(&moved, &-&v).unwrap();
        prop_assert_eq!(back.surface.canonical_code(true), ps.surface.canonical_code(true));
    }

    #[test]
    fn gl2_scales_area_by_determinant(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3) {
        let m = mat2_from_ints([[a, b], [c, d]]);
        prop_assume!(mat2_det(&m).sign() > 0);
        let s = origami(&[1, 2, 0], &[0, 2, 1]).unwrap();
        let t = s.apply_gl2(&m).unwrap();
        prop_assert_eq!(t.area(), &s.area() * &mat2_det(&m));
        prop_assert_eq!(t.stratum_orders(), s.stratum_orders());
    }

    #[test]
    fn canonical_code_ignores_presentation(a in -2i64..=2) {
        // Shears by multiples of 3 lie in the Veech group of this origami:
        // the sheared surface is the same surface in another presentation.
        let s = origami(&[1, 2, 0], &[1, 2, 0]).unwrap();
        let t = s.apply_gl2(&mat2_from_ints([[1, 3 * a], [0, 1]])).unwrap();
        prop_assert!(s.is_isomorphic(&t, false).is_some());
        prop_assert_eq!(s.canonical_code(false), t.canonical_code(false));
    }
}
