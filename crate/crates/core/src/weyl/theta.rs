use std::fmt;

use num_traits::Zero;

use super::UnivarOperator;
use crate::algebra::{stirling_first, stirling_second, RatFun};

/// `Σ a_i(x) θ^i` with `θ = x∂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaOperator {
    coeffs: Vec<RatFun>,
}

impl ThetaOperator {
    pub fn new(mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(RatFun::is_zero) {
            coeffs.pop();
        }
        ThetaOperator { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn render(&self, var: &str) -> String {
        let op = UnivarOperator::new(self.coeffs.clone());
        op.render(var).replace('d', "theta")
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// `P = Σ_k b_k x^(-k) (x^k ∂^k)` with `x^k ∂^k = Σ_i s(k,i) θ^i`, scaled by `x^shift`.
fn expand(p: &UnivarOperator, shift: i64) -> ThetaOperator {
    let Some(n) = p.order() else {
        return ThetaOperator::new(Vec::new());
    };
    let s = stirling_first(n);
    let mut out = vec![RatFun::zero(); n + 1];
    for (k, b) in p.coeffs().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let bk = b * &RatFun::x_pow(shift - k as i64);
        for (i, slot) in out.iter_mut().enumerate().take(k + 1) {
            if !s[k][i].is_zero() {
                *slot = &*slot + &bk.scale(&s[k][i]);
            }
        }
    }
    ThetaOperator::new(out)
}

/// The θ-form of `x^n P` where `n = ord P`.
pub fn to_theta_form(p: &UnivarOperator) -> ThetaOperator {
    expand(p, p.order().unwrap_or(0) as i64)
}

/// The θ-coefficients of `P` itself (rational coefficients allowed).
pub fn theta_expansion(p: &UnivarOperator) -> ThetaOperator {
    expand(p, 0)
}

/// Back to `Σ b_k ∂^k` via `θ^i = Σ_k S(i,k) x^k ∂^k`.
pub fn from_theta_form(t: &ThetaOperator) -> UnivarOperator {
    let Some(m) = t.order() else {
        return UnivarOperator::zero();
    };
    let s = stirling_second(m);
    let mut out = vec![RatFun::zero(); m + 1];
    for (i, a) in t.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, slot) in out.iter_mut().enumerate().take(i + 1) {
            if !s[i][k].is_zero() {
                *slot = &*slot + &(a * &RatFun::x_pow(k as i64)).scale(&s[i][k]);
            }
        }
    }
    UnivarOperator::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, UPoly};
    use proptest::prelude::*;

    fn c(v: i64) -> RatFun {
        RatFun::constant(int(v))
    }

    #[test]
    fn examples() {
        let d = UnivarOperator::d();
        assert_eq!(to_theta_form(&d).render("x"), "theta");
        let d2 = d.pow(2);
        assert_eq!(to_theta_form(&d2), ThetaOperator::new(vec![c(0), c(-1), c(1)]));
        assert_eq!(to_theta_form(&d2).render("x"), "theta^2 - theta");
        // Euler operator x∂ - 3
        let e = UnivarOperator::new(vec![c(-3), RatFun::x()]);
        assert_eq!(to_theta_form(&e).render("x"), "x*theta - 3*x");
        assert_eq!(theta_expansion(&e).render("x"), "theta - 3");
    }

    #[test]
    fn theta_powers_collapse() {
        // θ^m expanded via S(m,k) then collapsed via s(k,i) is θ^m again
        for m in 0..=8 {
            let mut coeffs = vec![RatFun::zero(); m + 1];
            coeffs[m] = RatFun::one();
            let t = ThetaOperator::new(coeffs);
            let p = from_theta_form(&t);
            let theta = UnivarOperator::monomial(RatFun::x(), 1);
            assert_eq!(p, theta.pow(m as u32));
            assert_eq!(theta_expansion(&p), t);
        }
    }

    fn arb_op() -> impl Strategy<Value = UnivarOperator> {
        prop::collection::vec(
            (prop::collection::vec(-3i64..=3, 1..3), prop::collection::vec(-2i64..=2, 0..2)),
            1..5,
        )
        .prop_map(|cs| {
            UnivarOperator::new(
                cs.into_iter()
                    .map(|(n, d)| {
                        let mut den = d;
                        den.push(1);
                        RatFun::new(UPoly::from_ints(&n), UPoly::from_ints(&den))
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip(p in arb_op()) {
            prop_assume!(!p.is_zero());
            let n = p.order().unwrap() as i64;
            let back = from_theta_form(&to_theta_form(&p));
            prop_assert_eq!(back, p.left_mul(&RatFun::x_pow(n)));
            prop_assert_eq!(from_theta_form(&theta_expansion(&p)), p);
        }
    }
}
