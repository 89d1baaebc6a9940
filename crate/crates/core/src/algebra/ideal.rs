use std::fmt;
use std::sync::OnceLock;

use super::{buchberger, normal_form, Budget, MPoly, TermOrder};
use crate::{Error, Result};

/// An ideal of `Q[vars]` given by generators. The reduced Gröbner basis for
/// `order` is computed at most once and cached.
#[derive(Debug)]
pub struct Ideal {
    vars: Vec<String>,
    gens: Vec<MPoly>,
    order: TermOrder,
    gb: OnceLock<Vec<MPoly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal {
            vars: self.vars.clone(),
            gens: self.gens.clone(),
            order: self.order.clone(),
            gb,
        }
    }
}

impl PartialEq for Ideal {
    /// Generator-list equality in the same ring; use [`Ideal::same_ideal`] for
    /// mathematical equality.
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.gens == other.gens
    }
}

impl Ideal {
    pub fn new(vars: Vec<String>, gens: Vec<MPoly>) -> Self {
        Self::with_order(vars, gens, TermOrder::DegRevLex)
    }

    pub fn with_order(vars: Vec<String>, gens: Vec<MPoly>, order: TermOrder) -> Self {
        let n = vars.len();
        for g in &gens {
            assert_eq!(g.nvars(), n, "generator ring does not match the variable list");
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            vars,
            gens,
            order,
            gb: OnceLock::new(),
        }
    }

    pub fn zero(vars: Vec<String>) -> Self {
        Self::new(vars, Vec::new())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn gens(&self) -> &[MPoly] {
        &self.gens
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn groebner_basis(&self, budget: &Budget) -> Result<&[MPoly]> {
        if let Some(b) = self.gb.get() {
            return Ok(b);
        }
        let b = buchberger(&self.gens, &self.order, budget)?;
        Ok(self.gb.get_or_init(|| b))
    }

    /// The ideal re-presented by its reduced Gröbner basis.
    pub fn to_groebner(&self, budget: &Budget) -> Result<Ideal> {
        let gb = self.groebner_basis(budget)?.to_vec();
        let out = Ideal::with_order(self.vars.clone(), gb.clone(), self.order.clone());
        let _ = out.gb.set(gb);
        Ok(out)
    }

    pub fn contains(&self, f: &MPoly, budget: &Budget) -> Result<bool> {
        let gb = self.groebner_basis(budget)?;
        Ok(normal_form(f, gb, &self.order).is_zero())
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        Ok(self.groebner_basis(budget)?.iter().any(|g| g.is_constant()))
    }

    pub fn same_ideal(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g, budget)? {
                return Ok(false);
            }
        }
        for g in self.gens() {
            if !other.contains(g, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Product ideal; its radical equals the radical of the intersection.
    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        Ideal::with_order(self.vars.clone(), gens, self.order.clone())
    }

    /// `V(self) ⊆ V(other)`, i.e. every generator of `other` lies in the radical of `self`.
    pub fn variety_within(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        for g in other.gens() {
            if !radical_membership(g, self, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn dimension(&self, budget: &Budget) -> Result<i64> {
        match krull_dimension(self, budget) {
            Ok(d) => Ok(d as i64),
            Err(Error::UnitIdeal) => Ok(-1),
            Err(e) => Err(e),
        }
    }

    pub fn render_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.render(&self.vars)).collect()
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render_gens().join(", "))
    }
}

/// Dimension of `V(I)`: the largest set of variables independent modulo the
/// initial ideal. The unit ideal is reported as [`Error::UnitIdeal`]
/// (its variety is empty, dimension `-1` by convention, see [`Ideal::dimension`]).
pub fn krull_dimension(ideal: &Ideal, budget: &Budget) -> Result<usize> {
    let n = ideal.nvars();
    let dr = ideal.to_groebner_in(TermOrder::DegRevLex, budget)?;
    if dr.iter().any(|g| g.is_constant()) {
        return Err(Error::UnitIdeal);
    }
    let order = TermOrder::DegRevLex;
    let leads: Vec<Vec<bool>> = dr
        .iter()
        .map(|g| g.leading_term(&order).unwrap().0.iter().map(|&e| e > 0).collect())
        .collect();
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        // independent: no leading monomial supported inside the set
        let independent = leads
            .iter()
            .all(|supp| supp.iter().enumerate().any(|(i, &s)| s && mask & (1 << i) == 0));
        if independent {
            best = size;
        }
    }
    Ok(best)
}

impl Ideal {
    fn to_groebner_in(&self, order: TermOrder, budget: &Budget) -> Result<Vec<MPoly>> {
        if order == self.order {
            return Ok(self.groebner_basis(budget)?.to_vec());
        }
        buchberger(&self.gens, &order, budget)
    }
}

/// `f ∈ √I`, decided by the Rabinowitsch trick: `1 ∈ I + (1 - t f)`.
pub fn radical_membership(f: &MPoly, ideal: &Ideal, budget: &Budget) -> Result<bool> {
    if f.nvars() != ideal.nvars() {
        return Err(Error::RingMismatch("polynomial and ideal rings differ".into()));
    }
    if f.is_zero() {
        return Ok(true);
    }
    let n = ideal.nvars();
    let mut gens: Vec<MPoly> = ideal.gens().iter().map(|g| g.extend_vars(1)).collect();
    let t = MPoly::var(n + 1, n);
    gens.push(&MPoly::one(n + 1) - &(&t * &f.extend_vars(1)));
    let gb = buchberger(&gens, &TermOrder::DegRevLex, budget)?;
    Ok(gb.iter().any(|g| g.is_constant() && !g.is_zero()))
}

/// True iff every generator is a squarefree monomial (such ideals are radical).
pub fn is_radical_squarefree_monomial(ideal: &Ideal) -> Result<bool> {
    let mut all = true;
    for (i, g) in ideal.gens().iter().enumerate() {
        if g.len() != 1 {
            return Err(Error::NotMonomial { index: i });
        }
        let (m, _) = g.terms().next().unwrap();
        if m.iter().any(|&e| e > 1) {
            all = false;
        }
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn mono(m: Vec<u32>) -> MPoly {
        MPoly::term(m, int(1))
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn ring2() -> (Vec<String>, MPoly, MPoly) {
        (names(&["x", "xi"]), MPoly::var(2, 0), MPoly::var(2, 1))
    }

    #[test]
    fn dimension_examples() {
        let b = Budget::default();
        let (v, x, xi) = ring2();
        assert_eq!(krull_dimension(&Ideal::new(v.clone(), vec![xi.clone()]), &b).unwrap(), 1);
        assert_eq!(krull_dimension(&Ideal::zero(v.clone()), &b).unwrap(), 2);
        // x ξ = 0: union of the lines x = 0 and ξ = 0
        let xxi = &x * &xi;
        assert_eq!(krull_dimension(&Ideal::new(v.clone(), vec![xxi.clone()]), &b).unwrap(), 1);
        assert_eq!(krull_dimension(&Ideal::new(v.clone(), vec![xxi, x.clone()]), &b).unwrap(), 1);
        let unit = Ideal::new(v.clone(), vec![MPoly::one(2)]);
        assert_eq!(krull_dimension(&unit, &b), Err(Error::UnitIdeal));
        assert_eq!(unit.dimension(&b).unwrap(), -1);
    }

    #[test]
    fn radical_membership_examples() {
        let b = Budget::default();
        let (v, x, xi) = ring2();
        assert!(radical_membership(&x, &Ideal::new(v.clone(), vec![&x * &x]), &b).unwrap());
        let f = &x * &xi;
        let i = Ideal::new(v.clone(), vec![f.pow(3), &xi * &f]);
        assert!(radical_membership(&f, &i, &b).unwrap());
        assert!(!radical_membership(&x, &Ideal::new(v.clone(), vec![xi.clone()]), &b).unwrap());
    }

    #[test]
    fn squarefree_monomial_test() {
        let n = names(&["x", "y", "xi", "eta"]);
        let g = |m: [u32; 4]| mono(m.to_vec());
        let i = Ideal::new(n.clone(), vec![g([1, 0, 1, 0]), g([0, 0, 0, 1])]);
        assert_eq!(is_radical_squarefree_monomial(&i), Ok(true));
        let j = Ideal::new(n.clone(), vec![g([2, 0, 1, 0])]);
        assert_eq!(is_radical_squarefree_monomial(&j), Ok(false));
        let k = Ideal::new(n, vec![&g([1, 0, 0, 0]) + &g([0, 1, 0, 0])]);
        assert_eq!(is_radical_squarefree_monomial(&k), Err(Error::NotMonomial { index: 0 }));
    }
}
