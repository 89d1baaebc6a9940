//! Connection-side regularity tests for operators in one variable: the
//! order inequality on monic coefficients, the θ-form test, Newton polygons
//! and the global report over the projective line.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{Point, Rat, Valuation};
use crate::weyl::{chart_infinity, chart_translate, to_theta_form, ThetaOperator};
use crate::{Error, Result};

pub use crate::weyl::UnivarOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Regular,
    Irregular,
}

impl Verdict {
    pub fn from_bool(regular: bool) -> Self {
        if regular {
            Verdict::Regular
        } else {
            Verdict::Irregular
        }
    }

    pub fn is_regular(self) -> bool {
        self == Verdict::Regular
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalVerdict {
    Regular,
    Irregular,
    /// No irregular point was found, but some singular points could not be
    /// tested over `Q`.
    RegularOverTestedPoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuchsRow {
    pub index: usize,
    /// `ord` of `b_i / b_n` at the point.
    pub ord: Valuation,
    pub bound: i64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuchsCertificate {
    pub point: Point,
    pub order: usize,
    pub rows: Vec<FuchsRow>,
    pub verdict: Verdict,
}

/// The operator in a local coordinate vanishing at `point`.
pub fn localize(p: &UnivarOperator, point: &Point) -> UnivarOperator {
    match point {
        Point::Finite(c) => chart_translate(p, c),
        Point::Infinity => chart_infinity(p),
    }
}

fn nonzero(p: &UnivarOperator) -> Result<usize> {
    p.order().ok_or(Error::ZeroElement("the zero operator has no regularity verdict"))
}

/// `ord_0(b_i / b_n) >= i - n` for all `i < n` in the local coordinate at `point`.
pub fn fuchs_regular_at(p: &UnivarOperator, point: &Point) -> Result<FuchsCertificate> {
    let n = nonzero(p)?;
    let local = localize(p, point).monic();
    let zero = Rat::zero();
    let rows: Vec<FuchsRow> = (0..n)
        .map(|i| {
            let ord = local.coeff(i).ord_at(&zero);
            let bound = i as i64 - n as i64;
            FuchsRow {
                index: i,
                ord,
                bound,
                satisfied: ord.at_least(bound),
            }
        })
        .collect();
    let verdict = Verdict::from_bool(rows.iter().all(|r| r.satisfied));
    Ok(FuchsCertificate {
        point: point.clone(),
        order: n,
        rows,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaWitness {
    pub point: Point,
    /// θ-form of `x^n P` for the monic `P`.
    #[serde(serialize_with = "ser_theta")]
    pub theta_form: ThetaOperator,
    pub coefficient_orders: Vec<Valuation>,
    pub regular: bool,
}

fn ser_theta<S: serde::Serializer>(t: &ThetaOperator, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

/// Regular at 0 iff the θ-form of `x^n P` (with `P` monic) has coefficients
/// without pole at 0 and a leading coefficient that is a unit there.
pub fn theta_regular_at_zero(p: &UnivarOperator) -> Result<ThetaWitness> {
    nonzero(p)?;
    let t = to_theta_form(&p.monic());
    let zero = Rat::zero();
    let orders: Vec<Valuation> = t.coeffs().iter().map(|a| a.ord_at(&zero)).collect();
    let lead_unit = orders.last() == Some(&Valuation::Finite(0));
    let regular = lead_unit && orders.iter().all(|o| o.at_least(0));
    Ok(ThetaWitness {
        point: Point::zero(),
        theta_form: t,
        coefficient_orders: orders,
        regular,
    })
}

pub fn theta_regular_at(p: &UnivarOperator, point: &Point) -> Result<ThetaWitness> {
    let mut w = theta_regular_at_zero(&localize(p, point))?;
    w.point = point.clone();
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub point: Point,
    /// `(i, i - ord b_i)` for the nonzero coefficients.
    pub points: Vec<(i64, i64)>,
    /// Slope magnitudes of the boundary, ascending, always starting with 0.
    #[serde(serialize_with = "ser_rats")]
    pub slopes: Vec<Rat>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&crate::algebra::fmt_rat(r))?;
    }
    seq.end()
}

impl NewtonPolygon {
    pub fn is_regular(&self) -> bool {
        self.slopes.iter().all(Zero::is_zero)
    }
}

/// Plots `(i, i - ord b_i)` in the local coordinate at `point`. The boundary
/// is horizontal up to the rightmost highest point and then follows the upper
/// hull down to the leading term; the slopes of that second part are the
/// irregular slopes.
pub fn newton_polygon(p: &UnivarOperator, point: &Point) -> Result<NewtonPolygon> {
    let n = nonzero(p)?;
    let local = localize(p, point);
    let zero = Rat::zero();
    let points: Vec<(i64, i64)> = local
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, b)| b.ord_at(&zero).finite().map(|o| (i as i64, i as i64 - o)))
        .collect();
    let hmax = points.iter().map(|p| p.1).max().unwrap();
    let start = points.iter().rev().find(|p| p.1 == hmax).copied().unwrap();
    let mut slopes = vec![Rat::zero()];
    // upper hull from `start` to (n, h_n), monotone chain
    let tail: Vec<(i64, i64)> = points.iter().copied().filter(|p| p.0 >= start.0).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for q in tail {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or below segment a-q
            let cross = (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    debug_assert_eq!(hull.last().unwrap().0, n as i64);
    for w in hull.windows(2) {
        let s = Rat::new((w[0].1 - w[1].1).into(), (w[1].0 - w[0].0).into());
        if s.is_positive() && !slopes.contains(&s) {
            slopes.push(s);
        }
    }
    slopes.sort();
    Ok(NewtonPolygon {
        point: point.clone(),
        points,
        slopes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UntestedFactor {
    /// Monic irreducible (or unsplit) factor of the leading coefficient.
    pub factor: String,
    pub reason: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveLineReport {
    /// Rational singular points followed by `inf`.
    pub singular_points: Vec<Point>,
    pub certificates: Vec<FuchsCertificate>,
    pub untested: Vec<UntestedFactor>,
    pub verdict: GlobalVerdict,
}

/// Fuchs test at every rational root of the cleared leading coefficient and at
/// infinity. Other factors are listed as untested.
pub fn regular_on_projective_line(p: &UnivarOperator) -> Result<ProjectiveLineReport> {
    nonzero(p)?;
    let (w, _) = p.to_weyl();
    let cleared = UnivarOperator::from_weyl(&w)?;
    let lead = cleared.leading().unwrap().num().clone();
    let mut singular_points = Vec::new();
    let mut untested = Vec::new();
    for f in lead.factor() {
        match f.root {
            Some(r) => singular_points.push(Point::Finite(r)),
            None => untested.push(UntestedFactor {
                factor: f.poly.to_string(),
                reason: "requires extension field",
            }),
        }
    }
    singular_points.sort_by(|a, b| match (a, b) {
        (Point::Finite(x), Point::Finite(y)) => x.cmp(y),
        _ => std::cmp::Ordering::Equal,
    });
    singular_points.push(Point::Infinity);
    let certificates: Vec<FuchsCertificate> = singular_points
        .iter()
        .map(|pt| fuchs_regular_at(p, pt))
        .collect::<Result<_>>()?;
    let verdict = if certificates.iter().any(|c| !c.verdict.is_regular()) {
        GlobalVerdict::Irregular
    } else if !untested.is_empty() {
        GlobalVerdict::RegularOverTestedPoints
    } else {
        GlobalVerdict::Regular
    };
    Ok(ProjectiveLineReport {
        singular_points,
        certificates,
        untested,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, RatFun, UPoly};
    use proptest::prelude::*;

    fn op(cs: Vec<RatFun>) -> UnivarOperator {
        UnivarOperator::new(cs)
    }

    fn c(v: Rat) -> RatFun {
        RatFun::constant(v)
    }

    fn euler(l: Rat) -> UnivarOperator {
        op(vec![c(-l), RatFun::x()])
    }

    fn hypergeometric(a: Rat, b: Rat, cc: Rat) -> UnivarOperator {
        let x = UPoly::x();
        let b2 = &x * &UPoly::from_ints(&[1, -1]);
        let b1 = UPoly::from_coeffs(vec![cc, -(&a + &b + int(1))]);
        op(vec![c(-(a * b)), b1.into(), b2.into()])
    }

    fn airy() -> UnivarOperator {
        op(vec![-&RatFun::x(), RatFun::zero(), RatFun::one()])
    }

    #[test]
    fn fuchs_examples() {
        let cert = fuchs_regular_at(&euler(rat(1, 2)), &Point::zero()).unwrap();
        assert_eq!(cert.verdict, Verdict::Regular);
        assert_eq!(cert.rows[0].ord, Valuation::Finite(-1));
        assert_eq!(cert.rows[0].bound, -1);
        let p = op(vec![-&RatFun::x_pow(-2), RatFun::one()]);
        let cert = fuchs_regular_at(&p, &Point::zero()).unwrap();
        assert_eq!(cert.verdict, Verdict::Irregular);
        assert_eq!(cert.rows[0].ord, Valuation::Finite(-2));
        let h = hypergeometric(rat(1, 3), rat(2, 5), rat(3, 7));
        for pt in [Point::zero(), Point::Finite(int(1)), Point::Infinity] {
            assert_eq!(fuchs_regular_at(&h, &pt).unwrap().verdict, Verdict::Regular, "{pt}");
        }
    }

    #[test]
    fn theta_examples() {
        let p = op(vec![RatFun::x_pow(-1).scale(&int(3)), RatFun::one()]);
        let w = theta_regular_at_zero(&p).unwrap();
        assert!(w.regular);
        assert_eq!(w.theta_form.to_string(), "theta + 3");
        let q = op(vec![RatFun::one(), RatFun::x_pow(2)]);
        let w = theta_regular_at_zero(&q).unwrap();
        assert!(!w.regular);
        assert_eq!(w.theta_form.to_string(), "theta + 1/x");
        let d2 = UnivarOperator::d().pow(2);
        let w = theta_regular_at_zero(&d2).unwrap();
        assert!(w.regular);
        assert_eq!(w.theta_form.to_string(), "theta^2 - theta");
    }

    #[test]
    fn newton_examples() {
        let np = newton_polygon(&euler(int(2)), &Point::zero()).unwrap();
        assert_eq!(np.slopes, vec![int(0)]);
        let p = op(vec![-&RatFun::x_pow(-2), RatFun::one()]);
        let np = newton_polygon(&p, &Point::zero()).unwrap();
        assert_eq!(np.points, vec![(0, 2), (1, 1)]);
        assert_eq!(np.slopes, vec![int(0), int(1)]);
        let np = newton_polygon(&airy(), &Point::Infinity).unwrap();
        assert_eq!(np.slopes, vec![int(0), rat(3, 2)]);
    }

    #[test]
    fn global_examples() {
        let r = regular_on_projective_line(&euler(int(5))).unwrap();
        assert_eq!(r.singular_points, vec![Point::zero(), Point::Infinity]);
        assert_eq!(r.verdict, GlobalVerdict::Regular);
        let r = regular_on_projective_line(&airy()).unwrap();
        assert_eq!(r.singular_points, vec![Point::Infinity]);
        assert_eq!(r.verdict, GlobalVerdict::Irregular);
        let h = hypergeometric(rat(1, 2), rat(1, 2), int(1));
        let r = regular_on_projective_line(&h).unwrap();
        assert_eq!(r.singular_points, vec![Point::zero(), Point::Finite(int(1)), Point::Infinity]);
        assert_eq!(r.verdict, GlobalVerdict::Regular);
        // (x^2 + 1) ∂ - 1: singular points over Q(i) cannot be tested
        let p = op(vec![c(int(-1)), UPoly::from_ints(&[1, 0, 1]).into()]);
        let r = regular_on_projective_line(&p).unwrap();
        assert_eq!(r.verdict, GlobalVerdict::RegularOverTestedPoints);
        assert_eq!(r.untested.len(), 1);
    }

    #[test]
    fn zero_operator_rejected() {
        assert!(fuchs_regular_at(&UnivarOperator::zero(), &Point::zero()).is_err());
    }

    fn arb_coeff() -> impl Strategy<Value = RatFun> {
        (prop::collection::vec(-3i64..=3, 1..5), 0u32..4, -2i64..=2).prop_map(|(num, k, shift)| {
            // numerator of degree <= 4 over x^k (x - shift)^(k/2)
            let den = &UPoly::monomial(int(1), k as usize) * &UPoly::linear_root(&int(shift)).pow(k / 2);
            RatFun::new(UPoly::from_ints(&num), den)
        })
    }

    fn arb_op() -> impl Strategy<Value = UnivarOperator> {
        prop::collection::vec(arb_coeff(), 2..5).prop_filter_map("nonzero", |cs| {
            let p = UnivarOperator::new(cs);
            p.order().filter(|&n| n > 0).map(|_| p)
        })
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        prop_oneof![(-2i64..=2).prop_map(|c| Point::Finite(int(c))), Just(Point::Infinity)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn fuchs_iff_theta(p in arb_op()) {
            let f = fuchs_regular_at(&p, &Point::zero()).unwrap().verdict.is_regular();
            let t = theta_regular_at_zero(&p).unwrap().regular;
            prop_assert_eq!(f, t);
        }

        #[test]
        fn fuchs_iff_newton(p in arb_op(), pt in arb_point()) {
            let f = fuchs_regular_at(&p, &pt).unwrap().verdict.is_regular();
            prop_assert_eq!(f, newton_polygon(&p, &pt).unwrap().is_regular());
        }

        #[test]
        fn unit_factor_invariance(p in arb_op(), a in 1i64..4, b in -3i64..=3) {
            // (a + b x) / (1 + x^2) is a unit at 0
            let u = RatFun::new(UPoly::from_ints(&[a, b]), UPoly::from_ints(&[1, 0, 1]));
            let q = p.left_mul(&u);
            prop_assert_eq!(
                fuchs_regular_at(&p, &Point::zero()).unwrap().verdict,
                fuchs_regular_at(&q, &Point::zero()).unwrap().verdict
            );
        }

        #[test]
        fn translate_then_test_at_zero(p in arb_op(), c in -2i64..=2) {
            let direct = fuchs_regular_at(&p, &Point::Finite(int(c))).unwrap();
            let moved = fuchs_regular_at(&chart_translate(&p, &int(c)), &Point::zero()).unwrap();
            prop_assert_eq!(direct.rows, moved.rows);
        }
    }
}
