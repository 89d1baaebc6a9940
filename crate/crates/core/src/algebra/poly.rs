use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{fmt_rat, int, Rat};

/// Dense univariate polynomial over `Q`, coefficients from low to high degree.
/// The coefficient vector never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

/// A factor of a polynomial over `Q` as far as this crate can split it:
/// rational linear factors are exact, the rest is one squarefree cofactor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    /// Monic factor.
    #[serde(serialize_with = "ser_upoly")]
    pub poly: UPoly,
    pub multiplicity: usize,
    /// `Some(root)` for linear factors.
    #[serde(serialize_with = "ser_opt_rat")]
    pub root: Option<Rat>,
    /// Whether the factor is known to be irreducible over `Q`.
    pub irreducible: bool,
}

fn ser_upoly<S: serde::Serializer>(p: &UPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rat(r)),
        None => s.serialize_none(),
    }
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn x() -> Self {
        Self::monomial(int(1), 1)
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![int(0); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// `x - c`
    pub fn linear_root(c: &Rat) -> Self {
        Self::from_coeffs(vec![-c.clone(), int(1)])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&(Rat::one() / self.lc()))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![int(0); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { coeffs }
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv = Rat::one() / d.lc();
        let mut quot = vec![int(0); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Exact division; panics in debug builds if the remainder is nonzero.
    pub fn exact_div(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        // split off powers of x first; Euclid against x^k blows up coefficients
        let (la, lb) = (self.low_degree().unwrap(), other.low_degree().unwrap());
        let shift = la.min(lb);
        let mut a = UPoly::from_coeffs(self.coeffs[la..].to_vec());
        let mut b = UPoly::from_coeffs(other.coeffs[lb..].to_vec());
        if a.is_constant() || b.is_constant() {
            return UPoly::monomial(int(1), shift);
        }
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic().shift_up(shift)
    }

    /// `p(x + c)` via repeated synthetic division (Taylor shift).
    pub fn translate(&self, c: &Rat) -> UPoly {
        let n = self.coeffs.len();
        let mut a = self.coeffs.clone();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Self::from_coeffs(a)
    }

    /// `x^deg * p(1/x)` for `deg >= degree(p)`.
    pub fn reversed(&self, deg: usize) -> UPoly {
        let mut coeffs = vec![int(0); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[deg - k] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// Multiplicity of `c` as a root; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, c: &Rat) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear_root(c);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return Some(m);
            }
            p = q;
            m += 1;
        }
    }

    /// Trailing-zero count, i.e. the order of vanishing at 0.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    /// Primitive integer coefficient vector with positive leading coefficient.
    fn integer_coeffs(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if !g.is_zero() {
            for c in ints.iter_mut() {
                *c = &*c / &g;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -&*c;
            }
        }
        ints
    }

    /// Distinct rational roots, ascending. `None` if a coefficient is too
    /// large to enumerate divisors.
    pub fn rational_roots(&self) -> Option<Vec<Rat>> {
        if self.is_constant() {
            return Some(Vec::new());
        }
        let mut p = self.squarefree_part();
        let mut roots = Vec::new();
        if p.coeff(0).is_zero() {
            roots.push(Rat::zero());
            p = p.exact_div(&Self::x());
        }
        if p.is_constant() {
            return Some(roots);
        }
        let ints = p.integer_coeffs();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let dp = divisors(&a0)?;
        let dq = divisors(&an)?;
        let mut cands: Vec<Rat> = Vec::new();
        for num in &dp {
            for den in &dq {
                let r = Rat::new(num.clone(), den.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            if p.eval(&r).is_zero() {
                roots.push(r);
            }
        }
        roots.sort();
        Some(roots)
    }

    /// Splits off rational linear factors; the remaining squarefree cofactors
    /// are reported grouped by multiplicity. Irreducibility is certified for
    /// linear factors and for root-free cofactors of degree 2 or 3.
    pub fn factor(&self) -> Vec<Factor> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        // squarefree decomposition (Yun)
        let f = self.monic();
        let a = f.gcd(&f.derivative());
        let mut b = f.exact_div(&a);
        let mut c = f.derivative().exact_div(&a);
        let mut d = &c - &b.derivative();
        let mut mult = 1;
        loop {
            let y = b.gcd(&d);
            if !y.is_constant() {
                push_squarefree_factors(&y, mult, &mut out);
            }
            b = b.exact_div(&y);
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&y);
            d = &c - &b.derivative();
            mult += 1;
        }
        out.sort_by(|x, y| {
            (x.root.is_none(), x.root.clone(), x.poly.degree(), x.poly.to_string()).cmp(&(
                y.root.is_none(),
                y.root.clone(),
                y.poly.degree(),
                y.poly.to_string(),
            ))
        });
        out
    }
}

fn push_squarefree_factors(y: &UPoly, mult: usize, out: &mut Vec<Factor>) {
    let mut rest = y.monic();
    if let Some(roots) = y.rational_roots() {
        for r in roots {
            let lin = UPoly::linear_root(&r);
            rest = rest.exact_div(&lin);
            out.push(Factor {
                poly: lin,
                multiplicity: mult,
                root: Some(r),
                irreducible: true,
            });
        }
        if !rest.is_constant() {
            let deg = rest.degree().unwrap();
            out.push(Factor {
                poly: rest.monic(),
                multiplicity: mult,
                root: None,
                irreducible: deg <= 3,
            });
        }
    } else {
        out.push(Factor {
            poly: rest,
            multiplicity: mult,
            root: None,
            irreducible: false,
        });
    }
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n: u64 = n.try_into().ok()?;
    if n > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![int(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl UPoly {
    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                s.push_str(&fmt_rat(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", fmt_rat(&a), mono));
            }
        }
        s
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}
