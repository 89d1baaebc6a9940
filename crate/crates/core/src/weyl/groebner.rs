use std::collections::BTreeSet;

use num_traits::One;

use super::{symbol_names, WeylElement};
use crate::algebra::{Budget, Ideal, MPoly, Rat, TermOrder};
use crate::{Error, Result};

type Sorted = Vec<(Vec<u32>, Rat)>;

fn sorted(w: &WeylElement, order: &TermOrder) -> Sorted {
    let mut v: Sorted = w.raw_terms().iter().map(|(k, c)| (k.clone(), c.clone())).collect();
    v.sort_by(|a, b| order.cmp(&b.0, &a.0));
    v
}

fn unsorted(n: usize, s: &Sorted) -> WeylElement {
    let mut w = WeylElement::zero(n);
    for (k, c) in s {
        w.add_term(k.clone(), c.clone());
    }
    w
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `c x^α ∂^β · g` where `shift = α ++ β`.
fn left_shift(n: usize, shift: &[u32], c: &Rat, g: &WeylElement) -> WeylElement {
    let m = WeylElement::term(n, &shift[..n], &shift[n..], c.clone());
    &m * g
}

/// Full left reduction; the leading term of `x^α ∂^β g` is the shifted
/// leading term of `g` because the order is compatible with the filtration.
fn reduce(n: usize, f: &WeylElement, basis: &[WeylElement], order: &TermOrder) -> WeylElement {
    let leads: Vec<(Vec<u32>, Rat)> = basis.iter().map(|g| sorted(g, order)[0].clone()).collect();
    let mut f = f.clone();
    let mut rem = WeylElement::zero(n);
    while !f.is_zero() {
        let (lm, lc) = sorted(&f, order)[0].clone();
        match leads.iter().position(|(gm, _)| divides(gm, &lm)) {
            Some(i) => {
                let shift: Vec<u32> = lm.iter().zip(&leads[i].0).map(|(a, b)| a - b).collect();
                let c = &lc / &leads[i].1;
                f = &f - &left_shift(n, &shift, &c, &basis[i]);
            }
            None => {
                let t = WeylElement::term(n, &lm[..n], &lm[n..], lc);
                f = &f - &t;
                rem = &rem + &t;
            }
        }
    }
    rem
}

fn monic(w: &WeylElement, order: &TermOrder) -> WeylElement {
    match sorted(w, order).first() {
        Some((_, lc)) => w.scale(&(Rat::one() / lc)),
        None => w.clone(),
    }
}

fn s_element(n: usize, f: &WeylElement, g: &WeylElement, order: &TermOrder) -> WeylElement {
    let (fm, fc) = sorted(f, order)[0].clone();
    let (gm, gc) = sorted(g, order)[0].clone();
    let l = lcm(&fm, &gm);
    let sf: Vec<u32> = l.iter().zip(&fm).map(|(a, b)| a - b).collect();
    let sg: Vec<u32> = l.iter().zip(&gm).map(|(a, b)| a - b).collect();
    &left_shift(n, &sf, &(Rat::one() / fc), f) - &left_shift(n, &sg, &(Rat::one() / gc), g)
}

/// Normal form of `f` modulo the left ideal with Gröbner basis `basis`.
pub fn weyl_normal_form(f: &WeylElement, basis: &[WeylElement], order: &TermOrder) -> WeylElement {
    reduce(f.nvars(), f, basis, order)
}

/// Reduced left Gröbner basis of `A_n · gens`. The order must rank total
/// `∂`-degree first (for example [`TermOrder::filtration`]).
pub fn weyl_groebner(gens: &[WeylElement], order: &TermOrder, budget: &Budget) -> Result<Vec<WeylElement>> {
    let Some(n) = gens.first().map(WeylElement::nvars) else {
        return Ok(Vec::new());
    };
    if gens.iter().any(|g| g.nvars() != n) {
        return Err(Error::RingMismatch("generators live in different Weyl algebras".into()));
    }
    let is_unit = |g: &WeylElement| g.raw_terms().len() == 1 && g.raw_terms().keys().all(|k| k.iter().all(|&e| e == 0));
    let lead = |g: &WeylElement| sorted(g, order)[0].0.clone();
    let mut basis: Vec<WeylElement> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for g in gens {
        let r = reduce(n, g, &basis, order);
        if !r.is_zero() {
            for i in 0..basis.len() {
                pending.insert((i, basis.len()));
            }
            basis.push(monic(&r, order));
        }
    }
    let mut processed = 0usize;
    while !basis.iter().any(is_unit) {
        let pick = pending
            .iter()
            .min_by(|&&(a, b), &&(c, d)| {
                order
                    .cmp(&lcm(&lead(&basis[a]), &lead(&basis[b])), &lcm(&lead(&basis[c]), &lead(&basis[d])))
                    .then((a, b).cmp(&(c, d)))
            })
            .copied();
        let Some((i, j)) = pick else { break };
        pending.remove(&(i, j));
        // chain criterion; the product criterion does not hold in A_n
        let l = lcm(&lead(&basis[i]), &lead(&basis[j]));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&lead(&basis[k]), &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::BudgetExceeded {
                what: "Weyl S-pairs",
                limit: budget.max_pairs,
            });
        }
        let s = s_element(n, &basis[i], &basis[j], order);
        let r = reduce(n, &s, &basis, order);
        if !r.is_zero() {
            for k in 0..basis.len() {
                pending.insert((k, basis.len()));
            }
            basis.push(monic(&r, order));
        }
    }
    if basis.iter().any(is_unit) {
        return Ok(vec![WeylElement::one(n)]);
    }
    // minimalize and interreduce
    let mut keep: Vec<WeylElement> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = lead(g);
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let lh = lead(h);
            j != i && divides(&lh, &lg) && (lh != lg || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<WeylElement> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let s = sorted(&keep[i], order);
        let head = unsorted(n, &s[..1].to_vec());
        let tail = unsorted(n, &s[1..].to_vec());
        out.push(monic(&(&head + &reduce(n, &tail, &others, order)), order));
    }
    out.sort_by(|a, b| order.cmp(&lead(b), &lead(a)));
    Ok(out)
}

/// The ideal of `Q[x, ξ]` generated by the principal symbols of a left
/// Gröbner basis of `A_n · gens` under the filtration order.
pub fn characteristic_ideal(gens: &[WeylElement], budget: &Budget) -> Result<Ideal> {
    let n = gens
        .first()
        .map(WeylElement::nvars)
        .ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    if gens.iter().all(WeylElement::is_zero) {
        return Err(Error::ZeroElement("all generators are zero"));
    }
    let gb = weyl_groebner(gens, &TermOrder::filtration(n), budget)?;
    let symbols: Vec<MPoly> = gb.iter().map(|g| g.principal_symbol()).collect::<Result<_>>()?;
    Ok(Ideal::new(symbol_names(n), symbols))
}

/// True iff every S-element of `basis` reduces to zero modulo `basis`.
pub fn verify_groebner(basis: &[WeylElement], order: &TermOrder) -> bool {
    let Some(n) = basis.first().map(WeylElement::nvars) else {
        return true;
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_element(n, &basis[i], &basis[j], order);
            if !reduce(n, &s, basis, order).is_zero() {
                return false;
            }
        }
    }
    true
}
