use num_traits::{One, Zero};

use super::RootBundle;
use crate::algebra::{factorial, int, GradedElement, Rat, Ring, WGraded, WLaurentRational};
use crate::error::Result;

/// Taylor coefficients of `(x/2) / sinh(x/2)` through `x^n`.
pub fn a_hat_coefficients(n: usize) -> Vec<Rat> {
    // s(x) = sinh(x/2) / (x/2) = sum_j x^{2j} / (4^j (2j+1)!)
    let s: Vec<Rat> = (0..=n)
        .map(|k| {
            if k % 2 == 1 {
                Rat::zero()
            } else {
                let j = k / 2;
                (factorial(2 * j as u32 + 1) * int(4).pow(j as i32)).recip()
            }
        })
        .collect();
    let mut inv = vec![Rat::zero(); n + 1];
    inv[0] = Rat::one();
    for k in 1..=n {
        let mut acc = Rat::zero();
        for j in 1..=k {
            acc += &s[j] * &inv[k - j];
        }
        inv[k] = -acc;
    }
    inv
}

/// `prod_j (y_j/2) / sinh(y_j/2)` over the tangent roots.
pub fn a_hat(tangent: &RootBundle, space: &std::sync::Arc<crate::algebra::GradedSpace>) -> GradedElement {
    let coeffs = a_hat_coefficients(space.cap() as usize / 2);
    tangent
        .roots
        .iter()
        .fold(GradedElement::one(space), |acc, y| acc.mul(&y.power_series(&coeffs)))
}

/// `w^{2m} e^{x_j}` for each root of the bundle.
pub fn line_characters(bundle: &RootBundle) -> Result<Vec<WGraded>> {
    let wm = WLaurentRational::w_pow(bundle.weight.twice());
    bundle
        .roots
        .iter()
        .map(|x| Ok(x.exp()?.lift::<WLaurentRational>().mul_coeff(&wm)))
        .collect()
}

/// Characters of the conjugate bundle: `w^{-2m} e^{-x_j}`.
pub fn conjugate_characters(bundle: &RootBundle) -> Result<Vec<WGraded>> {
    let wm = WLaurentRational::w_pow(-bundle.weight.twice());
    bundle
        .roots
        .iter()
        .map(|x| Ok(x.neg().exp()?.lift::<WLaurentRational>().mul_coeff(&wm)))
        .collect()
}

/// `ch_g(E) = sum_j w^{2m} e^{x_j}`.
pub fn chern_character(bundle: &RootBundle, space: &std::sync::Arc<crate::algebra::GradedSpace>) -> Result<WGraded> {
    Ok(line_characters(bundle)?
        .iter()
        .fold(WGraded::zero(space), |acc, l| acc.add(l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, GradedSpace, HalfInt, WLaurentPoly};

    #[test]
    fn a_hat_series() {
        let c = a_hat_coefficients(6);
        assert_eq!(c[2], rat(-1, 24));
        assert_eq!(c[4], rat(7, 5760));
        assert!(c[1].is_zero() && c[3].is_zero());
    }

    #[test]
    fn a_hat_single_root_cap_4() {
        let space = GradedSpace::new(vec![("y".into(), 2)], 4).unwrap();
        let y = GradedElement::generator(&space, 0);
        let a = a_hat(&RootBundle::new(HalfInt::ZERO, vec![y.clone()]), &space);
        assert_eq!(a, GradedElement::one(&space).sub(&y.mul(&y).scale(&rat(1, 24))));
        assert_eq!(a_hat(&RootBundle::new(HalfInt::ZERO, vec![]), &space), GradedElement::one(&space));
    }

    #[test]
    fn characters_of_weighted_lines() {
        let space = GradedSpace::point();
        let zero = GradedElement::zero(&space);
        let line = |m: i64| RootBundle::new(HalfInt::from_int(m), vec![zero.clone()]);
        let w = |e: i64| WGraded::constant(&space, WLaurentRational::w_pow(e));
        assert_eq!(chern_character(&line(0), &space).unwrap(), WGraded::one(&space));
        assert_eq!(chern_character(&line(1), &space).unwrap(), w(2));
        let pair = RootBundle::new(HalfInt::from_int(1), vec![zero.clone()]);
        let sum = chern_character(&pair, &space)
            .unwrap()
            .add(&conjugate_characters(&pair).unwrap()[0]);
        assert_eq!(
            sum,
            WGraded::constant(&space, WLaurentRational::from_poly(WLaurentPoly::from_ints(-2, &[1, 0, 0, 0, 1])))
        );
    }
}
