use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::algebra::{binomial, factorial, fmt_rat, int, MPoly, Rat};
use crate::{Error, Result};

/// Names of the coordinates `x_1..x_n`: `x, y, z` for `n <= 3`, else `x1, x2, ...`.
pub fn variable_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn derivation_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["d".into()]
    } else if n <= 3 {
        ["dx", "dy", "dz"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("d{i}")).collect()
    }
}

/// Names of the variables of `Q[x, ξ]`, coordinates first, then the symbols.
pub fn symbol_names(n: usize) -> Vec<String> {
    let mut v = variable_names(n);
    if n <= 3 {
        v.extend(["xi", "eta", "zeta"][..n].iter().map(|s| s.to_string()));
    } else {
        v.extend((1..=n).map(|i| format!("xi{i}")));
    }
    v
}

/// An element of `A_n`, stored as `Σ c x^α ∂^β` with key `α ++ β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, int(1))
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        Self::term(n, &vec![0; n], &vec![0; n], c)
    }

    pub fn term(n: usize, alpha: &[u32], beta: &[u32], c: Rat) -> Self {
        assert!(alpha.len() == n && beta.len() == n, "exponent length mismatch");
        let mut out = Self::zero(n);
        let mut k = alpha.to_vec();
        k.extend_from_slice(beta);
        out.add_term(k, c);
        out
    }

    pub fn x(n: usize, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        Self::term(n, &a, &vec![0; n], int(1))
    }

    pub fn d(n: usize, i: usize) -> Self {
        let mut b = vec![0; n];
        b[i] = 1;
        Self::term(n, &vec![0; n], &b, int(1))
    }

    /// Reads a polynomial in `2n` variables `(x, ξ)` as a normal-ordered operator.
    pub fn from_normal_ordered(p: &MPoly) -> Self {
        assert!(p.nvars() % 2 == 0);
        let mut out = Self::zero(p.nvars() / 2);
        for (m, c) in p.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The same terms viewed as a commutative polynomial in `(x, ξ)`.
    pub fn to_normal_ordered(&self) -> MPoly {
        MPoly::from_terms(2 * self.n, self.terms.iter().map(|(k, c)| (k.clone(), c.clone())))
    }

    pub(crate) fn add_term(&mut self, k: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
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

    /// Terms as `(α, β, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &Rat)> {
        self.terms.iter().map(move |(k, c)| (&k[..self.n], &k[self.n..], c))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal total `∂`-degree; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k[self.n..].iter().sum()).max()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        WeylElement {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn principal_symbol(&self) -> Result<MPoly> {
        let ord = self.order().ok_or(Error::ZeroElement("no symbol of zero"))?;
        let n = self.n;
        Ok(MPoly::from_terms(
            2 * n,
            self.terms
                .iter()
                .filter(|(k, _)| k[n..].iter().sum::<u32>() == ord)
                .map(|(k, c)| (k.clone(), c.clone())),
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Action on `Q[x_1..x_n]`.
    pub fn apply(&self, p: &MPoly) -> MPoly {
        assert_eq!(p.nvars(), self.n, "operator and polynomial rings differ");
        let n = self.n;
        let mut out = MPoly::zero(n);
        for (k, c) in &self.terms {
            let (alpha, beta) = k.split_at(n);
            for (m, a) in p.terms() {
                if m.iter().zip(beta).any(|(e, b)| e < b) {
                    continue;
                }
                let mut coef = c * a;
                let mut mono = Vec::with_capacity(n);
                for i in 0..n {
                    // ∂^b x^e = e!/(e-b)! x^(e-b)
                    for j in 0..beta[i] {
                        coef *= int((m[i] - j) as i64);
                    }
                    mono.push(m[i] - beta[i] + alpha[i]);
                }
                out = &out + &MPoly::term(mono, coef);
            }
        }
        out
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let n = self.n;
        let xs = variable_names(n);
        let ds = derivation_names(n);
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        // highest ∂-order first, then higher x-degree, then key order
        keys.sort_by(|a, b| {
            let oa: u32 = a[n..].iter().sum();
            let ob: u32 = b[n..].iter().sum();
            let da: u32 = a[..n].iter().sum();
            let db: u32 = b[..n].iter().sum();
            ob.cmp(&oa).then(db.cmp(&da)).then(b.cmp(a))
        });
        let mut s = String::new();
        for k in keys {
            let c = &self.terms[k];
            let neg = c.is_negative();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut factors = Vec::new();
            for (i, &e) in k.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if i < n { &xs[i] } else { &ds[i - n] };
                factors.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            }
            let mono = factors.join("*");
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

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `(x^α ∂^β)(x^γ ∂^δ)` using `∂^a x^b = Σ_k k! C(a,k) C(b,k) x^(b-k) ∂^(a-k)`
/// in each variable independently.
fn mul_terms(n: usize, k1: &[u32], c1: &Rat, k2: &[u32], c2: &Rat, out: &mut WeylElement) {
    let mut partial: Vec<(Vec<u32>, Rat)> = vec![(
        (0..2 * n).map(|i| k1[i] + k2[i]).collect(),
        c1 * c2,
    )];
    for i in 0..n {
        let (b, g) = (k1[n + i], k2[i]);
        let top = b.min(g);
        if top == 0 {
            continue;
        }
        let weights: Vec<Rat> = (0..=top)
            .map(|k| factorial(k) * binomial(b, k) * binomial(g, k))
            .collect();
        let mut next = Vec::with_capacity(partial.len() * (top as usize + 1));
        for (m, c) in &partial {
            for (k, w) in weights.iter().enumerate() {
                let mut m = m.clone();
                m[i] -= k as u32;
                m[n + i] -= k as u32;
                next.push((m, c * w));
            }
        }
        partial = next;
    }
    for (m, c) in partial {
        out.add_term(m, c);
    }
}

/// Normal-ordered product in `A_n`.
pub fn weyl_mul(a: &WeylElement, b: &WeylElement) -> WeylElement {
    assert_eq!(a.n, b.n, "Weyl algebras of different rank");
    let mut out = WeylElement::zero(a.n);
    for (k1, c1) in &a.terms {
        for (k2, c2) in &b.terms {
            mul_terms(a.n, k1, c1, k2, c2, &mut out);
        }
    }
    out
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        weyl_mul(self, rhs)
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self + &(-rhs)
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-int(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> WeylElement {
        WeylElement::x(1, 0)
    }
    fn d() -> WeylElement {
        WeylElement::d(1, 0)
    }

    #[test]
    fn defining_relation() {
        assert_eq!(&d() * &x(), &(&x() * &d()) + &WeylElement::one(1));
        assert_eq!((&d() * &x()).render(), "x*d + 1");
    }

    #[test]
    fn second_order_commutation() {
        let p = &d().pow(2) * &x().pow(2);
        assert_eq!(p.render(), "x^2*d^2 + 4*x*d + 2");
        let px = MPoly::var(1, 0);
        for k in 0..=4u32 {
            let m = px.pow(k);
            let direct = d().pow(2).apply(&x().pow(2).apply(&m));
            assert_eq!(p.apply(&m), direct);
        }
    }

    #[test]
    fn theta_squared() {
        let theta = &x() * &d();
        let t2 = &theta * &theta;
        assert_eq!(t2.render(), "x^2*d^2 + x*d");
        let px = MPoly::var(1, 0);
        for k in 0..6u32 {
            assert_eq!(t2.apply(&px.pow(k)), px.pow(k).scale(&int((k * k) as i64)));
        }
    }

    #[test]
    fn symbols() {
        let p = &(&x().pow(2) * &d()) - &WeylElement::one(1);
        assert_eq!(p.principal_symbol().unwrap().render(&symbol_names(1)), "x^2*xi");
        let q = &d().pow(2) - &x();
        assert_eq!(q.principal_symbol().unwrap().render(&symbol_names(1)), "xi^2");
        let y = WeylElement::x(2, 1);
        let dx = WeylElement::d(2, 0);
        let r = &(&y * &dx) - &WeylElement::one(2);
        assert_eq!(r.principal_symbol().unwrap().render(&symbol_names(2)), "y*xi");
        assert_eq!(
            WeylElement::zero(1).principal_symbol(),
            Err(Error::ZeroElement("no symbol of zero"))
        );
    }

    fn arb_elem(n: usize) -> impl Strategy<Value = WeylElement> {
        prop::collection::vec(
            (prop::collection::vec(0u32..3, 2 * n), -3i64..=3),
            0..4,
        )
        .prop_map(move |ts| {
            let mut e = WeylElement::zero(n);
            for (k, c) in ts {
                e.add_term(k, int(c));
            }
            e
        })
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = MPoly> {
        prop::collection::vec((prop::collection::vec(0u32..5, n), -4i64..=4), 0..4)
            .prop_map(move |ts| MPoly::from_terms(n, ts.into_iter().map(|(m, c)| (m, int(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associative_a2(a in arb_elem(2), b in arb_elem(2), c in arb_elem(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn action_is_a_module_structure(a in arb_elem(2), b in arb_elem(2), p in arb_poly(2)) {
            prop_assert_eq!((&a * &b).apply(&p), a.apply(&b.apply(&p)));
        }

        #[test]
        fn symbol_multiplicative(a in arb_elem(2), b in arb_elem(2)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ab = &a * &b;
            prop_assert_eq!(ab.order().unwrap(), a.order().unwrap() + b.order().unwrap());
            prop_assert_eq!(
                ab.principal_symbol().unwrap(),
                &a.principal_symbol().unwrap() * &b.principal_symbol().unwrap()
            );
        }

        #[test]
        fn pure_parts_commute(p in arb_poly(2), q in arb_poly(2)) {
            let xp = |p: &MPoly| WeylElement::from_normal_ordered(&p.extend_vars(2));
            prop_assert_eq!(&xp(&p) * &xp(&q), xp(&(&p * &q)));
        }
    }
}
