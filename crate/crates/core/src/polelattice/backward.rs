use serde::Serialize;

use crate::algebra::{Point, RatFun, Valuation};
use crate::dmod::{kashiwara_regular_at, CyclicFiltration};
use crate::regularity::{localize, Verdict};
use crate::weyl::UnivarOperator;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BackwardReport {
    /// Pole order at 0 of the `∂`-action matrix on the lattice.
    pub observed_s: i64,
    /// The value handed in, or the observed one.
    pub s: i64,
    /// `x^s ∂` maps the lattice into itself.
    pub power_stable: bool,
    /// `x ∂` maps the lattice into itself.
    pub theta_stable: bool,
    pub verdict: Verdict,
}

/// Curve case at `x = 0`: a lattice with `∂`-action matrix `A`. Stability of
/// the lattice under `x^s ∂` always holds for `s` at least the pole order of
/// `A`; the lattice is regular iff the radical step down to `x ∂` holds too.
pub fn theorem_backward_extraction(a: &[Vec<RatFun>], s: Option<i64>) -> BackwardReport {
    let zero = crate::algebra::int(0);
    let observed_s = a
        .iter()
        .flatten()
        .map(|e| match e.ord_at(&zero) {
            Valuation::Finite(k) => (-k).max(0),
            Valuation::Infinity => 0,
        })
        .max()
        .unwrap_or(0);
    let s = s.unwrap_or(observed_s);
    // x^s(v' + A v) is integral for integral v iff x^s A is
    let power_stable = s >= observed_s;
    let theta_stable = observed_s <= 1;
    BackwardReport {
        observed_s,
        s,
        power_stable,
        theta_stable,
        verdict: Verdict::from_bool(theta_stable),
    }
}

/// The lattice spanned by `u, θu, …` for `D/DP` localized at `point`.
pub fn theorem_backward_for_operator(p: &UnivarOperator, point: &Point, s: Option<i64>) -> Result<BackwardReport> {
    let local = localize(p, point);
    let f = CyclicFiltration::new(&local)?;
    let xinv = RatFun::x_pow(-1);
    let a: Vec<Vec<RatFun>> = f
        .theta_matrix()
        .iter()
        .map(|row| row.iter().map(|e| e * &xinv).collect())
        .collect();
    let report = theorem_backward_extraction(&a, s);
    let k = kashiwara_regular_at(p, point)?;
    if k.regular != report.verdict.is_regular() {
        return Err(crate::Error::Contradiction(format!(
            "backward extraction says {:?}, the Kashiwara test says regular = {}",
            report.verdict, k.regular
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, UPoly};

    fn op(coeffs: Vec<RatFun>) -> UnivarOperator {
        UnivarOperator::new(coeffs)
    }

    #[test]
    fn spec_lattices() {
        // Euler: ∂ acts by -λ/x
        let euler = vec![vec![&RatFun::constant(rat(-1, 2)) * &RatFun::x_pow(-1)]];
        let r = theorem_backward_extraction(&euler, None);
        assert_eq!((r.observed_s, r.verdict), (1, Verdict::Regular));
        // ∂ - x^-2: x^2 ∂ stabilizes, x ∂ does not
        let irr = vec![vec![RatFun::x_pow(-2)]];
        let r = theorem_backward_extraction(&irr, Some(2));
        assert!(r.power_stable && !r.theta_stable);
        assert_eq!(r.verdict, Verdict::Irregular);
        let r = theorem_backward_extraction(&irr, Some(1));
        assert!(!r.power_stable);
    }

    #[test]
    fn operators_agree_with_kashiwara() {
        // x(1-x)∂² + (1/2 - 2x)∂ - 1/4
        let x = UPoly::x();
        let c2 = RatFun::from_poly(&x - &(&x * &x));
        let c1 = RatFun::from_poly(UPoly::from_coeffs(vec![rat(1, 2), int(-2)]));
        let hyp = op(vec![RatFun::constant(rat(-1, 4)), c1, c2]);
        let r = theorem_backward_for_operator(&hyp, &Point::zero(), None).unwrap();
        assert_eq!(r.verdict, Verdict::Regular);
        // x^2 ∂ - 1
        let irr = op(vec![RatFun::constant(int(-1)), RatFun::x_pow(2)]);
        let r = theorem_backward_for_operator(&irr, &Point::zero(), None).unwrap();
        assert_eq!((r.observed_s, r.verdict), (2, Verdict::Irregular));
    }
}
