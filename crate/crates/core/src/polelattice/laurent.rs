use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{fmt_rat, int, MPoly, Rat};
use crate::weyl::variable_names;

/// A Laurent polynomial `Σ c x^α`, `α ∈ Z^n`. Sections of `O_X(*Z)` have
/// `α_j >= 0` for the coordinates not dividing `Z`; that is a property of
/// the caller's data, not of the type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoleModuleElement {
    n: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

/// `Σ_{i < r} max(0, -α_i)`: total pole order along the `r` dividing coordinates.
pub fn pole_order(alpha: &[i64], r: usize) -> i64 {
    alpha[..r].iter().map(|&a| (-a).max(0)).sum()
}

/// Pole order in excess of `d` on each dividing coordinate.
pub fn excess_order(alpha: &[i64], r: usize, d: i64) -> i64 {
    alpha[..r].iter().map(|&a| (-a - d).max(0)).sum()
}

impl PoleModuleElement {
    pub fn zero(n: usize) -> Self {
        PoleModuleElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(vec![0; n], int(1))
    }

    pub fn monomial(alpha: Vec<i64>, c: Rat) -> Self {
        let mut out = Self::zero(alpha.len());
        out.add_term(alpha, c);
        out
    }

    pub fn from_poly(p: &MPoly) -> Self {
        let mut out = Self::zero(p.nvars());
        for (m, c) in p.terms() {
            out.add_term(m.iter().map(|&e| e as i64).collect(), c.clone());
        }
        out
    }

    pub fn add_term(&mut self, alpha: Vec<i64>, c: Rat) {
        assert_eq!(alpha.len(), self.n, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &[i64]) -> Rat {
        self.terms.get(alpha).cloned().unwrap_or_else(Rat::zero)
    }

    /// No negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|a| a.iter().all(|&e| e >= 0))
    }

    pub fn to_poly(&self) -> Option<MPoly> {
        self.is_polynomial().then(|| {
            MPoly::from_terms(
                self.n,
                self.terms.iter().map(|(a, c)| (a.iter().map(|&e| e as u32).collect(), c.clone())),
            )
        })
    }

    /// Largest pole order of a term; `None` for zero.
    pub fn pole_order(&self, r: usize) -> Option<i64> {
        self.terms.keys().map(|a| pole_order(a, r)).max()
    }

    pub fn excess_order(&self, r: usize, d: i64) -> Option<i64> {
        self.terms.keys().map(|a| excess_order(a, r, d)).max()
    }

    /// The sum of the terms of the given pole order.
    pub fn part_of_order(&self, r: usize, k: i64) -> Self {
        PoleModuleElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| pole_order(a, r) == k)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        PoleModuleElement {
            n: self.n,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    pub fn shift(&self, by: &[i64]) -> Self {
        PoleModuleElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.iter().zip(by).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    /// `∂_i`
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in &self.terms {
            if a[i] != 0 {
                let mut b = a.clone();
                b[i] -= 1;
                out.add_term(b, c * int(a[i]));
            }
        }
        out
    }

    /// `x_i ∂_i`
    pub fn euler(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * int(a[i]));
        }
        out
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let names = variable_names(self.n);
        let mut s = String::new();
        for (a, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono: Vec<String> = a
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let mono = mono.join("*");
            if mono.is_empty() {
                s.push_str(&fmt_rat(&abs));
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", fmt_rat(&abs), mono));
            }
        }
        s
    }
}

impl fmt::Display for PoleModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for PoleModuleElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl Add for &PoleModuleElement {
    type Output = PoleModuleElement;
    fn add(self, rhs: &PoleModuleElement) -> PoleModuleElement {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PoleModuleElement {
    type Output = PoleModuleElement;
    fn sub(self, rhs: &PoleModuleElement) -> PoleModuleElement {
        self + &(-rhs)
    }
}

impl Neg for &PoleModuleElement {
    type Output = PoleModuleElement;
    fn neg(self) -> PoleModuleElement {
        self.scale(&-int(1))
    }
}

impl Mul for &PoleModuleElement {
    type Output = PoleModuleElement;
    fn mul(self, rhs: &PoleModuleElement) -> PoleModuleElement {
        let mut out = PoleModuleElement::zero(self.n);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), c * d);
            }
        }
        out
    }
}

/// A section `Σ_v f_v e_v` of `E(*Z)` in a frame of rank `m`.
pub type LaurentVec = Vec<PoleModuleElement>;

pub(crate) fn vec_add(a: &[PoleModuleElement], b: &[PoleModuleElement]) -> LaurentVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn vec_scale(a: &[PoleModuleElement], f: &PoleModuleElement) -> LaurentVec {
    a.iter().map(|x| f * x).collect()
}
