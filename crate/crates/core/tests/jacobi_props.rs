use genus_core::algebra::HalfInt;
use genus_core::jacobi::*;
use genus_core::theta::{relative_discrepancy, theta_numeric, ThetaKind};
use num_complex::Complex64;
use proptest::prelude::*;

fn word(group: Group, letters: &[(usize, bool)]) -> ModularMatrix {
    let gens = group.generators();
    letters.iter().fold(ModularMatrix::IDENTITY, |acc, &(i, inv)| {
        let g = gens[i % gens.len()];
        acc.mul(&if inv { g.inverse() } else { g })
    })
}

fn letters(max: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..2, any::<bool>()), 0..=max)
}

fn group() -> impl Strategy<Value = Group> {
    prop::sample::select(Group::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subgroups_are_closed(g in group(), a in letters(8), b in letters(8)) {
        let x = word(g, &a);
        let y = word(g, &b);
        prop_assert!(subgroup_member(&x, g));
        prop_assert!(subgroup_member(&x.mul(&y), g));
        prop_assert!(subgroup_member(&x.inverse(), g));
        prop_assert_eq!(x.mul(&x.inverse()), ModularMatrix::IDENTITY);
        prop_assert_eq!(x.a * x.d - x.b * x.c, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn slash_cocycle(
        a in letters(4),
        b in letters(4),
        tre in -0.5f64..0.5, tim in -0.1f64..0.1,
        ure in -0.5f64..0.5, uim in 0.8f64..1.5,
    ) {
        let f = |t: Complex64, tau: Complex64| -> genus_core::Result<Complex64> {
            Ok(theta_numeric(ThetaKind::Theta, t, tau, 1e-14)? * theta_numeric(ThetaKind::Theta1, t, tau, 1e-14)?)
        };
        let spec = JacobiFormSpec { index: HalfInt::from_int(1), weight: 3, lattice: Lattice::TwoZ, group: Group::SL2Z };
        let g1 = word(Group::SL2Z, &a);
        let g2 = word(Group::SL2Z, &b);
        let t = Complex64::new(tre, tim);
        let tau = Complex64::new(ure, uim);
        let once = slash_action(&f, g1, spec);
        let twice = slash_action(&once, g2, spec);
        let direct = slash_action(&f, g1.mul(&g2), spec);
        let d = relative_discrepancy(twice(t, tau).unwrap(), direct(t, tau).unwrap());
        prop_assert!(d < 1e-9, "{} {} {}", g1, g2, d);
    }
}

#[test]
fn theta_quotients_have_integer_zero_counts() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let kinds = [ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3];
    for _ in 0..10 {
        let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.5));
        let num: Vec<(ThetaKind, Complex64)> = (0..rng.gen_range(1..4))
            .map(|_| (kinds[rng.gen_range(0..4)], Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3))))
            .collect();
        let den: Vec<(ThetaKind, Complex64)> = (0..rng.gen_range(0..3))
            .map(|_| (kinds[rng.gen_range(0..4)], Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3))))
            .collect();
        let f = |t: Complex64| -> genus_core::Result<Complex64> {
            let mut v = Complex64::new(1.0, 0.0);
            for (k, c) in &num {
                v *= theta_numeric(*k, t + c, tau, 1e-14)?;
            }
            for (k, c) in &den {
                v /= theta_numeric(*k, t + c, tau, 1e-14)?;
            }
            Ok(v)
        };
        let n = count_zeros(&f, tau, Cell::two_z(tau), IDENTICALLY_ZERO_FLOOR).unwrap();
        // zeros minus poles: each theta has 4 zeros in the (2Z)^2 cell
        let expected = 4 * (num.len() as i64 - den.len() as i64);
        assert_eq!(n.rounded(), Some(expected), "{n:?} {num:?} / {den:?}");
    }
}
