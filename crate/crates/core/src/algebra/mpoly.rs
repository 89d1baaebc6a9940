use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{fmt_rat, int, Rat, TermOrder};

pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial over `Q`. Zero coefficients are never
/// stored and every exponent vector has length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, int(1))
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::term(vec![0; nvars], c)
    }

    pub fn term(mono: Monomial, c: Rat) -> Self {
        let nvars = mono.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        MPoly { nvars, terms }
    }

    /// The `i`-th variable.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::term(m, int(1))
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.len(), nvars, "exponent vector length mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Terms in descending order under `order`.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(Monomial, Rat)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &[u32], c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.iter().zip(mono).map(|(x, y)| x + y).collect(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Embeds into a ring with `extra` further variables appended.
    pub fn extend_vars(&self, extra: usize) -> Self {
        MPoly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.extend(std::iter::repeat_n(0, extra));
                    (m, c.clone())
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Renders with the given variable names; terms in descending degrevlex
    /// order so the output is deterministic.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (m, c) in self.sorted_terms(&TermOrder::DegRevLex) {
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], e)
                    }
                })
                .collect();
            let mono = mono.join("*");
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

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-int(1))
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.iter().zip(m2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_render() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = &(&x * &y) - &MPoly::constant(2, int(3));
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.render(&names), "x*y - 3");
        let sq = &p * &p;
        assert_eq!(sq.render(&names), "x^2*y^2 - 6*x*y + 9");
        assert!((&sq - &sq).is_zero());
    }
}
