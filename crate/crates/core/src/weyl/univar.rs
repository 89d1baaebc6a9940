use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::WeylElement;
use crate::algebra::{binomial, int, Rat, RatFun, UPoly};
use crate::{Error, Result};

/// `Σ b_i(x) ∂^i` with rational-function coefficients; no trailing zero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivarOperator {
    coeffs: Vec<RatFun>,
}

impl UnivarOperator {
    pub fn new(mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(RatFun::is_zero) {
            coeffs.pop();
        }
        UnivarOperator { coeffs }
    }

    pub fn zero() -> Self {
        UnivarOperator { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::multiplier(RatFun::one())
    }

    /// `∂`
    pub fn d() -> Self {
        Self::new(vec![RatFun::zero(), RatFun::one()])
    }

    /// Multiplication by `f`.
    pub fn multiplier(f: RatFun) -> Self {
        Self::new(vec![f])
    }

    /// `f ∂^k`
    pub fn monomial(f: RatFun, k: usize) -> Self {
        let mut c = vec![RatFun::zero(); k + 1];
        c[k] = f;
        Self::new(c)
    }

    pub fn from_weyl(w: &WeylElement) -> Result<Self> {
        if w.nvars() != 1 {
            return Err(Error::RingMismatch(format!(
                "expected an operator in one variable, got A_{}",
                w.nvars()
            )));
        }
        let mut coeffs: Vec<Vec<Rat>> = Vec::new();
        for (a, b, c) in w.terms() {
            let (a, b) = (a[0] as usize, b[0] as usize);
            if coeffs.len() <= b {
                coeffs.resize(b + 1, Vec::new());
            }
            if coeffs[b].len() <= a {
                coeffs[b].resize(a + 1, Rat::zero());
            }
            coeffs[b][a] += c;
        }
        Ok(Self::new(
            coeffs
                .into_iter()
                .map(|p| RatFun::from_poly(UPoly::from_coeffs(p)))
                .collect(),
        ))
    }

    /// `(L·P, L)` where `L` is the monic lcm of the coefficient denominators,
    /// so that `L·P` has polynomial coefficients.
    pub fn to_weyl(&self) -> (WeylElement, UPoly) {
        let mut l = UPoly::one();
        for c in &self.coeffs {
            let g = l.gcd(c.den());
            l = (&l * c.den()).exact_div(&g);
        }
        let lf = RatFun::from_poly(l.clone());
        let mut w = WeylElement::zero(1);
        for (i, c) in self.coeffs.iter().enumerate() {
            let p = &lf * c;
            for (a, v) in p.num().coeffs().iter().enumerate() {
                w = &w + &WeylElement::term(1, &[a as u32], &[i as u32], v.clone());
            }
        }
        (w, l)
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&RatFun> {
        self.coeffs.last()
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.left_mul(&l.inv()),
        }
    }

    /// `f·P`
    pub fn left_mul(&self, f: &RatFun) -> Self {
        Self::new(self.coeffs.iter().map(|c| f * c).collect())
    }

    /// Operator product `self ∘ other`, via `∂^i b = Σ_k C(i,k) b^(k) ∂^(i-k)`.
    pub fn compose(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![RatFun::zero(); n];
        // derivatives of other's coefficients, computed lazily up to self's order
        let mut ders: Vec<Vec<RatFun>> = vec![other.coeffs.clone()];
        for _ in 1..self.coeffs.len() {
            let next = ders.last().unwrap().iter().map(RatFun::derivative).collect();
            ders.push(next);
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in 0..=i {
                let w = RatFun::constant(binomial(i as u32, k as u32));
                let aw = a * &w;
                for (j, bk) in ders[k].iter().enumerate() {
                    if bk.is_zero() {
                        continue;
                    }
                    let t = &aw * bk;
                    out[i - k + j] = &out[i - k + j] + &t;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    /// Euclidean division on the right: `self = q ∘ p + r` with `ord r < ord p`.
    pub fn div_rem_right(&self, p: &Self) -> (Self, Self) {
        let n = p.order().expect("division by the zero operator");
        let lead_inv = p.leading().unwrap().inv();
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some(k) = r.order() {
            if k < n {
                break;
            }
            let c = &r.coeffs[k] * &lead_inv;
            let t = Self::monomial(c, k - n);
            r = &r - &t.compose(p);
            q = &q + &t;
        }
        (q, r)
    }

    pub fn apply(&self, f: &RatFun) -> RatFun {
        let mut acc = RatFun::zero();
        let mut der = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                der = der.derivative();
            }
            acc = &acc + &(c * &der);
        }
        acc
    }

    /// Coefficients `b(x) -> b(x + c)`: the operator in the local coordinate
    /// `x - c`.
    pub fn translate(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|b| b.translate(c)).collect())
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = render_coeff(c, var);
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let d = match i {
                0 => String::new(),
                1 => "d".into(),
                _ => format!("d^{i}"),
            };
            match (body.as_str(), d.is_empty()) {
                ("1", false) => s.push_str(&d),
                (_, true) => s.push_str(&body),
                _ => s.push_str(&format!("{body}*{d}")),
            }
        }
        s
    }
}

/// Sign and a parse-friendly body for a coefficient.
fn render_coeff(c: &RatFun, var: &str) -> (bool, String) {
    let neg = c.num().lc().is_negative();
    let abs = if neg { -c } else { c.clone() };
    let body = abs.render(var);
    let multi = abs.num().coeffs().iter().filter(|a| !a.is_zero()).count() > 1;
    if abs.den().is_one() && multi {
        return (neg, format!("({body})"));
    }
    (neg, body)
}

impl fmt::Display for UnivarOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &UnivarOperator {
    type Output = UnivarOperator;
    fn add(self, rhs: &UnivarOperator) -> UnivarOperator {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivarOperator::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &UnivarOperator {
    type Output = UnivarOperator;
    fn sub(self, rhs: &UnivarOperator) -> UnivarOperator {
        self + &(-rhs)
    }
}

impl Neg for &UnivarOperator {
    type Output = UnivarOperator;
    fn neg(self) -> UnivarOperator {
        UnivarOperator::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UnivarOperator {
    type Output = UnivarOperator;
    fn mul(self, rhs: &UnivarOperator) -> UnivarOperator {
        self.compose(rhs)
    }
}

/// The operator in the local coordinate `t = x - c`.
pub fn chart_translate(p: &UnivarOperator, c: &Rat) -> UnivarOperator {
    p.translate(c)
}

/// Substitutes `x = 1/t`, `∂_x = -t² ∂_t`. The result is written in the
/// variable `t` (rendered as `x`) and is not normalized, so applying the
/// chart twice gives back `p` exactly.
pub fn chart_infinity(p: &UnivarOperator) -> UnivarOperator {
    let dt = UnivarOperator::new(vec![RatFun::zero(), RatFun::from_poly(UPoly::monomial(int(-1), 2))]);
    let mut out = UnivarOperator::zero();
    let mut pow = UnivarOperator::one();
    for (i, b) in p.coeffs().iter().enumerate() {
        if i > 0 {
            pow = pow.compose(&dt);
        }
        if !b.is_zero() {
            out = &out + &pow.left_mul(&b.invert_variable());
        }
    }
    out
}

/// [`chart_infinity`] followed by left multiplication with `t^k`, `k >= 0`
/// minimal such that no coefficient has a pole at `t = 0`. Returns `(t^k P, k)`.
pub fn chart_infinity_cleared(p: &UnivarOperator) -> (UnivarOperator, u32) {
    let raw = chart_infinity(p);
    let zero = Rat::zero();
    let worst = raw
        .coeffs()
        .iter()
        .filter_map(|c| c.ord_at(&zero).finite())
        .min()
        .unwrap_or(0);
    let k = (-worst).max(0) as u32;
    (raw.left_mul(&RatFun::x_pow(k as i64)), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xp(k: i64) -> RatFun {
        RatFun::x_pow(k)
    }

    fn airy() -> UnivarOperator {
        UnivarOperator::new(vec![-&RatFun::x(), RatFun::zero(), RatFun::one()])
    }

    #[test]
    fn infinity_chart_examples() {
        assert_eq!(chart_infinity(&UnivarOperator::d()).render("t"), "-t^2*d");
        let theta = UnivarOperator::monomial(RatFun::x(), 1);
        assert_eq!(chart_infinity(&theta).render("t"), "-t*d");
        assert_eq!(chart_infinity(&airy()).render("t"), "t^4*d^2 + 2*t^3*d - 1/t");
        let (cleared, k) = chart_infinity_cleared(&airy());
        assert_eq!(k, 1);
        assert_eq!(cleared.render("t"), "t^5*d^2 + 2*t^4*d - 1");
    }

    #[test]
    fn infinity_chart_is_an_involution() {
        let p = UnivarOperator::new(vec![xp(-2), RatFun::x(), xp(3)]);
        assert_eq!(chart_infinity(&chart_infinity(&p)), p);
        assert_eq!(chart_infinity(&chart_infinity(&airy())), airy());
    }

    #[test]
    fn translated_operator_kills_translated_solution() {
        // (x - 1) ∂ - 2 kills (x - 1)^2
        let p = UnivarOperator::new(vec![RatFun::constant(int(-2)), RatFun::from_poly(UPoly::from_ints(&[-1, 1]))]);
        let f = RatFun::from_poly(UPoly::from_ints(&[1, -2, 1]));
        assert!(p.apply(&f).is_zero());
        let q = chart_translate(&p, &int(1));
        assert_eq!(q.render("x"), "x*d - 2");
        assert!(q.apply(&xp(2)).is_zero());
    }

    #[test]
    fn compose_matches_weyl() {
        let d = UnivarOperator::d();
        let x2 = UnivarOperator::multiplier(xp(2));
        let p = d.pow(2).compose(&x2);
        assert_eq!(p.render("x"), "x^2*d^2 + 4*x*d + 2");
        let (w, l) = p.to_weyl();
        assert!(l.is_one());
        assert_eq!(w.render(), "x^2*d^2 + 4*x*d + 2");
        assert_eq!(UnivarOperator::from_weyl(&w).unwrap(), p);
    }

    #[test]
    fn denominators_are_cleared_on_the_left() {
        let p = UnivarOperator::new(vec![xp(-2), RatFun::zero(), RatFun::one()]);
        let (w, l) = p.to_weyl();
        assert_eq!(l, UPoly::monomial(int(1), 2));
        assert_eq!(w.render(), "x^2*d^2 + 1");
        assert_eq!(p.render("x"), "d^2 + 1/x^2");
    }

    #[test]
    fn right_division() {
        let p = airy();
        let a = UnivarOperator::new(vec![RatFun::x(), xp(-1), RatFun::one(), RatFun::one()]);
        let (q, r) = a.div_rem_right(&p);
        assert!(r.order().unwrap_or(0) < 2);
        assert_eq!(&q.compose(&p) + &r, a);
    }

    fn arb_op() -> impl Strategy<Value = UnivarOperator> {
        prop::collection::vec((-3i64..=3, -2i64..=2), 0..4).prop_map(|cs| {
            UnivarOperator::new(cs.into_iter().map(|(c, e)| xp(e).scale(&int(c))).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn compose_associative(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn compose_acts(a in arb_op(), b in arb_op(), e in -3i64..=3) {
            let f = xp(e);
            prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
        }

        #[test]
        fn chart_twice_identity(a in arb_op()) {
            prop_assert_eq!(chart_infinity(&chart_infinity(&a)), a);
        }
    }
}
