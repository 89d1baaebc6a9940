use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{fmt_rat, int, Rat, UPoly};

/// Order of vanishing: an integer, or `+∞` for the zero function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// `self >= bound`, with `+∞` satisfying every bound.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinity => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        use Valuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("+inf"),
        }
    }
}

/// A closed point of the projective line with rational coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Rat),
    Infinity,
}

impl Point {
    pub fn zero() -> Self {
        Point::Finite(Rat::zero())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(c) => f.write_str(&fmt_rat(c)),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Univariate rational function `num/den` in lowest terms, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: UPoly,
    den: UPoly,
}

impl RatFun {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lc = den.lc();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFun { num, den }
    }

    pub fn zero() -> Self {
        RatFun {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn x() -> Self {
        Self::from_poly(UPoly::x())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFun {
            num: p,
            den: UPoly::one(),
        }
    }

    /// `x^k` for any integer `k`.
    pub fn x_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(UPoly::monomial(int(1), k as usize))
        } else {
            RatFun {
                num: UPoly::one(),
                den: UPoly::monomial(int(1), (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// Order of vanishing at `x = c`; negative for a pole, `+∞` for zero.
    pub fn ord_at(&self, c: &Rat) -> Valuation {
        match self.num.root_multiplicity(c) {
            None => Valuation::Infinity,
            Some(m) => {
                let p = self.den.root_multiplicity(c).unwrap_or(0);
                Valuation::Finite(m as i64 - p as i64)
            }
        }
    }

    /// The polar part `Σ_(k<0) c_k x^k` of the Laurent expansion at 0.
    pub fn principal_part(&self) -> Self {
        let k = self.den.low_degree().unwrap_or(0);
        if k == 0 || self.is_zero() {
            return Self::zero();
        }
        // den = x^k u with u(0) != 0; expand num/u to order x^(k-1)
        let u: Vec<Rat> = self.den.coeffs()[k..].to_vec();
        let inv0 = Rat::one() / &u[0];
        let mut series = Vec::with_capacity(k);
        for i in 0..k {
            let mut c = self.num.coeff(i);
            for (j, s) in series.iter().enumerate() {
                if let Some(uj) = u.get(i - j) {
                    c -= uj * s;
                }
            }
            series.push(c * &inv0);
        }
        RatFun::new(UPoly::from_coeffs(series), UPoly::monomial(int(1), k))
    }

    /// Order of vanishing at infinity: `deg den - deg num`.
    pub fn ord_at_infinity(&self) -> Valuation {
        match self.num.degree() {
            None => Valuation::Infinity,
            Some(dn) => Valuation::Finite(self.den.degree().unwrap() as i64 - dn as i64),
        }
    }

    pub fn ord_at_point(&self, p: &Point) -> Valuation {
        match p {
            Point::Finite(c) => self.ord_at(c),
            Point::Infinity => self.ord_at_infinity(),
        }
    }

    pub fn eval(&self, c: &Rat) -> Option<Rat> {
        let d = self.den.eval(c);
        (!d.is_zero()).then(|| self.num.eval(c) / d)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of the zero rational function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        RatFun::new(base.num.pow(e.unsigned_abs() as u32), base.den.pow(e.unsigned_abs() as u32))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `f(x + c)`
    pub fn translate(&self, c: &Rat) -> Self {
        RatFun::new(self.num.translate(c), self.den.translate(c))
    }

    /// `f(1/x)`
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let d = dn.max(dd);
        // f(1/x) = x^(d-dn) rev(num) / (x^(d-dd) rev(den))
        let num = self.num.reversed(dn).shift_up(d - dn);
        let den = self.den.reversed(dd).shift_up(d - dd);
        RatFun::new(num, den)
    }

    /// `f(c x)`
    pub fn scale_variable(&self, c: &Rat) -> Self {
        let sub = |p: &UPoly| {
            let mut pow = int(1);
            let mut out = Vec::with_capacity(p.coeffs().len());
            for a in p.coeffs() {
                out.push(a * &pow);
                pow *= c;
            }
            UPoly::from_coeffs(out)
        };
        RatFun::new(sub(&self.num), sub(&self.den))
    }

    /// `p`, `c/q`, `-(p)/q` style; a constant numerator `a/b` is written
    /// `a/(b*q)`. Parses back to the same function.
    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.render(var);
        }
        let neg = self.num.lc().is_negative();
        let num = if neg { -&self.num } else { self.num.clone() };
        let sign = if neg { "-" } else { "" };
        let single = |p: &UPoly| p.coeffs().iter().filter(|a| !a.is_zero()).count() == 1;
        let (top, den) = if num.is_constant() {
            let c = num.coeff(0);
            let q = Rat::from_integer(c.denom().clone());
            (c.numer().to_string(), self.den.scale(&q))
        } else if single(&num) {
            (num.render(var), self.den.clone())
        } else {
            (format!("({})", num.render(var)), self.den.clone())
        };
        let bottom = if single(&den) && den.lc().is_one() {
            den.render(var)
        } else {
            format!("({})", den.render(var))
        };
        format!("{sign}{top}/{bottom}")
    }
}

impl From<UPoly> for RatFun {
    fn from(p: UPoly) -> Self {
        RatFun::from_poly(p)
    }
}

impl From<Rat> for RatFun {
    fn from(c: Rat) -> Self {
        RatFun::constant(c)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFun::from_poly(&self.num * &rhs.num);
        }
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        self * &rhs.inv()
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ident, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(RatFun, Add, add);
forward_owned!(RatFun, Sub, sub);
forward_owned!(RatFun, Mul, mul);
forward_owned!(RatFun, Div, div);
forward_owned!(UPoly, Add, add);
forward_owned!(UPoly, Sub, sub);
forward_owned!(UPoly, Mul, mul);

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn principal_parts() {
        // 1/(x^2 (1 - x)) = x^-2 + x^-1 + 1 + ...
        let f = RatFun::new(UPoly::one(), UPoly::from_ints(&[0, 0, 1, -1]));
        assert_eq!(f.principal_part(), RatFun::new(UPoly::from_ints(&[1, 1]), UPoly::from_ints(&[0, 0, 1])));
        assert!(RatFun::x().principal_part().is_zero());
        let g = RatFun::new(UPoly::from_ints(&[3, 0, 5]), UPoly::from_ints(&[0, 2]));
        assert_eq!(g.principal_part().render("x"), "3/(2*x)");
    }

    fn f(num: &[i64], den: &[i64]) -> RatFun {
        RatFun::new(UPoly::from_ints(num), UPoly::from_ints(den))
    }

    #[test]
    fn ord_examples() {
        // 1/x^2 at 0
        assert_eq!(RatFun::x_pow(-2).ord_at(&int(0)), Valuation::Finite(-2));
        // zero function at 5
        assert_eq!(RatFun::zero().ord_at(&int(5)), Valuation::Infinity);
        // (x^2 - x)/(x + 1) at 0: f/x = (x - 1)/(x + 1) evaluates to -1 != 0
        let g = f(&[0, -1, 1], &[1, 1]);
        let quotient = &g / &RatFun::x();
        assert_eq!(quotient.eval(&int(0)), Some(int(-1)));
        assert_eq!(g.ord_at(&int(0)), Valuation::Finite(1));
    }

    #[test]
    fn lowest_terms_and_monic_denominator() {
        let g = f(&[-2, 0, 2], &[2, 2]); // (2x^2 - 2)/(2x + 2) = x - 1
        assert!(g.is_polynomial());
        assert_eq!(g.num(), &UPoly::from_ints(&[-1, 1]));
        let h = f(&[1], &[0, 3]);
        assert_eq!(h.den(), &UPoly::x());
        assert_eq!(h.num(), &UPoly::constant(rat(1, 3)));
    }

    #[test]
    fn invert_variable_is_involution() {
        let g = f(&[1, 0, 3, -1], &[0, 2, 1]);
        assert_eq!(g.invert_variable().invert_variable(), g);
        assert_eq!(g.ord_at_infinity(), g.invert_variable().ord_at(&int(0)));
    }

    #[test]
    fn derivative_quotient_rule() {
        let g = f(&[1], &[0, 1]); // 1/x
        assert_eq!(g.derivative(), -&RatFun::x_pow(-2));
    }
}
