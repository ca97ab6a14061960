use num_complex::Complex64;
use pdmosc::massmap::MassProfile;
use pdmosc::table::Table;
use pdmosc::xspace::{partner_shift, riccati_residual, PdmSystem, PotentialId};
use pdmosc::yspace::{apply_ladder, Basis, Direction, FockVector, SingularParams};
use proptest::prelude::*;

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(rows in proptest::collection::vec(proptest::collection::vec(any::<f64>(), 3), 0..20)) {
        let t = Table::new(vec!["a".into(), "b".into(), "c".into()], rows);
        let back = Table::read_from(t.to_csv_string().as_bytes()).unwrap();
        prop_assert_eq!(back.rows.len(), t.rows.len());
        for (r, s) in back.rows.iter().zip(&t.rows) {
            for (a, b) in r.iter().zip(s) {
                prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
            }
        }
    }

    #[test]
    fn bijection_round_trip(lambda in 0.2f64..3.0, x0 in 0.1f64..3.0, t in 0.01f64..0.99) {
        for pr in [MassProfile::mdnt0(x0, lambda), MassProfile::exponential(x0, lambda), MassProfile::regular(lambda)] {
            let lo = pr.natural_lower_edge().max(-5.0);
            let x = lo + t * 5.0 / lambda;
            let y = pr.bijection_s(x).unwrap();
            prop_assert!((pr.inverse_s(y).unwrap() - x).abs() <= 1e-9 * (1.0 + x.abs()));
            prop_assert!(pr.jacobian(x).unwrap() > 0.0);
        }
    }

    #[test]
    fn structural_identities_on_random_profiles(lambda in 0.3f64..2.5, x0 in 0.2f64..2.0, n in 1u32..6, t in 0.02f64..1.0) {
        for pr in [MassProfile::mdnt0(x0, lambda), MassProfile::mdnt_n(n, x0, lambda).unwrap(), MassProfile::exponential(x0, lambda), MassProfile::regular(lambda)] {
            let lo = pr.natural_lower_edge().max(-3.0);
            let x = lo + t * 3.0 / lambda;
            let scale = 1.0 + pr.bijection_s(x).unwrap().powi(2);
            prop_assert!(riccati_residual(&pr, x).unwrap().abs() <= 1e-9 * scale);
            prop_assert!((partner_shift(&pr, x).unwrap() - 2.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn ladder_composition_in_fock_space(g0 in -0.45f64..6.0, n in 0usize..30) {
        let p = SingularParams::new(g0).unwrap();
        let b = Basis::Singular(p);
        let v = apply_ladder(&apply_ladder(&FockVector::unit(b, n), Direction::Raise), Direction::Lower);
        let expect = FockVector::unit(b, n).scale(Complex64::new(p.gamma_plus(n) * p.gamma_minus(n + 1), 0.0));
        prop_assert!(v.sub(&expect).unwrap().norm() <= 1e-12 * expect.norm());
    }

    #[test]
    fn potential_is_bounded_by_the_barrier_minimum(g0 in 0.0f64..5.0, x in 0.05f64..3.0) {
        // V(x) = s² + g0/(2s²) ≥ √(2g0) with equality at s⁴ = g0/2
        for id in [PotentialId::V1, PotentialId::V3, PotentialId::V5, PotentialId::Sing] {
            let v = PdmSystem::with_defaults(id, g0).unwrap().potential(x).unwrap();
            prop_assert!(v >= (2.0 * g0).sqrt() * (1.0 - 1e-12));
        }
    }
}
