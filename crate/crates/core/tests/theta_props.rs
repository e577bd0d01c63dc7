use genus_core::algebra::HalfInt;
use genus_core::theta::{theta_formal, theta_numeric, ThetaKind};
use num_complex::Complex64;
use proptest::prelude::*;

const KINDS: [ThetaKind; 4] = [ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3];

fn kind() -> impl Strategy<Value = ThetaKind> {
    prop::sample::select(KINDS.to_vec())
}

fn m() -> impl Strategy<Value = HalfInt> {
    (-2i64..=2).prop_map(HalfInt::from_int)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Formal series at `(w, q)` against the numeric product. At order
    /// 64/8 and `Im tau >= 1` the dropped tail is below `|q|^8 ~ 1e-21`.
    #[test]
    fn formal_matches_numeric(
        kind in kind(), m in m(), p in -12i64..=12, d in 1i64..=7, re in -0.5f64..0.5, im in 1.0f64..2.0,
    ) {
        let t = Complex64::new(p as f64 / d as f64, 0.0);
        let tau = Complex64::new(re, im);
        let formal = theta_formal(kind, m, 64).eval(t, tau);
        let numeric = theta_numeric(kind, t * m.to_f64(), tau, 1e-15).unwrap();
        prop_assert!((formal - numeric).norm() <= 1e-11 * numeric.norm().max(1.0), "{} vs {}", formal, numeric);
    }
}
