use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{MPoly, Monomial, Rat, TermOrder};
use crate::{Error, Result};

/// Work limits for completion procedures. Exceeding a limit is always an
/// error, never a silently truncated answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of S-pairs reduced by one Buchberger run.
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 100_000 }
    }
}

impl Budget {
    pub fn with_pairs(max_pairs: usize) -> Self {
        Budget { max_pairs }
    }
}

/// Terms in descending order.
pub(crate) type Sorted = Vec<(Monomial, Rat)>;

pub(crate) fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub(crate) fn diff(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `f - c * x^shift * g`, all lists descending.
fn sub_mul(f: &[(Monomial, Rat)], g: &[(Monomial, Rat)], shift: &[u32], c: &Rat, order: &TermOrder) -> Sorted {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |k: usize| -> Monomial { g[k].0.iter().zip(shift).map(|(a, b)| a + b).collect() };
    let mut gm = if g.is_empty() { None } else { Some(shifted(0)) };
    while i < f.len() || gm.is_some() {
        let ord = match (&gm, f.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(m), Some((fm, _))) => order.cmp(fm, m),
        };
        match ord {
            Ordering::Greater => {
                out.push(f[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gm.take().unwrap(), -(c * &g[j].1)));
                j += 1;
                gm = (j < g.len()).then(|| shifted(j));
            }
            Ordering::Equal => {
                let v = &f[i].1 - c * &g[j].1;
                if !v.is_zero() {
                    out.push((gm.take().unwrap(), v));
                }
                i += 1;
                j += 1;
                gm = (j < g.len()).then(|| shifted(j));
            }
        }
    }
    out
}

fn to_sorted(p: &MPoly, order: &TermOrder) -> Sorted {
    p.sorted_terms(order)
}

fn make_monic(p: &mut Sorted) {
    if let Some((_, lc)) = p.first() {
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            for (_, c) in p.iter_mut() {
                *c *= &inv;
            }
        }
    }
}

/// Full reduction of `f` modulo the (not necessarily Gröbner) list `basis`.
pub(crate) fn reduce_sorted(f: Sorted, basis: &[Sorted], order: &TermOrder) -> Sorted {
    let mut f = f;
    let mut rem: Sorted = Vec::new();
    while !f.is_empty() {
        let (lm, lc) = (f[0].0.clone(), f[0].1.clone());
        let hit = basis.iter().find(|g| !g.is_empty() && divides(&g[0].0, &lm));
        match hit {
            Some(g) => {
                let shift = diff(&lm, &g[0].0);
                let c = &lc / &g[0].1;
                f = sub_mul(&f, g, &shift, &c, order);
            }
            None => {
                rem.push(f.remove(0));
            }
        }
    }
    rem
}

/// Normal form of `f` with respect to `basis` under `order`.
pub fn normal_form(f: &MPoly, basis: &[MPoly], order: &TermOrder) -> MPoly {
    let b: Vec<Sorted> = basis.iter().map(|g| to_sorted(g, order)).collect();
    let r = reduce_sorted(to_sorted(f, order), &b, order);
    MPoly::from_terms(f.nvars(), r)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic, sorted by
/// descending leading monomial. The zero ideal yields an empty basis.
pub fn buchberger(gens: &[MPoly], order: &TermOrder, budget: &Budget) -> Result<Vec<MPoly>> {
    let nvars = match gens.first() {
        Some(g) => g.nvars(),
        None => return Ok(Vec::new()),
    };
    if gens.iter().any(|g| g.nvars() != nvars) {
        return Err(Error::RingMismatch("generators live in different rings".into()));
    }
    let mut basis: Vec<Sorted> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let add = |basis: &mut Vec<Sorted>, pending: &mut BTreeSet<(usize, usize)>, mut p: Sorted| {
        make_monic(&mut p);
        let k = basis.len();
        for i in 0..k {
            pending.insert((i, k));
        }
        basis.push(p);
    };
    for g in gens {
        if !g.is_zero() {
            let r = reduce_sorted(to_sorted(g, order), &basis, order);
            if !r.is_empty() {
                add(&mut basis, &mut pending, r);
            }
        }
    }
    let mut processed = 0usize;
    while !basis.iter().any(|b| b.len() == 1 && b[0].0.iter().all(|&e| e == 0)) {
        // normal selection strategy: smallest lcm first
        let pick = pending
            .iter()
            .min_by(|&&(a, b), &&(c, d)| {
                order
                    .cmp(&lcm(&basis[a][0].0, &basis[b][0].0), &lcm(&basis[c][0].0, &basis[d][0].0))
                    .then((a, b).cmp(&(c, d)))
            })
            .copied();
        let Some((i, j)) = pick else { break };
        pending.remove(&(i, j));
        let (mi, mj) = (&basis[i][0].0, &basis[j][0].0);
        let l = lcm(mi, mj);
        // product criterion
        if mi.iter().zip(mj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // chain criterion
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&basis[k][0].0, &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::BudgetExceeded {
                what: "S-pairs",
                limit: budget.max_pairs,
            });
        }
        let one = Rat::one();
        let s = sub_mul(
            &sub_mul(&[], &basis[i], &diff(&l, mi), &-one.clone(), order),
            &basis[j],
            &diff(&l, mj),
            &one,
            order,
        );
        let r = reduce_sorted(s, &basis, order);
        if !r.is_empty() {
            add(&mut basis, &mut pending, r);
        }
    }
    Ok(finalize(basis, order, nvars))
}

fn finalize(basis: Vec<Sorted>, order: &TermOrder, nvars: usize) -> Vec<MPoly> {
    if basis.iter().any(|b| b.len() == 1 && b[0].0.iter().all(|&e| e == 0)) {
        return vec![MPoly::one(nvars)];
    }
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Sorted> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && divides(&h[0].0, &g[0].0) && (h[0].0 != g[0].0 || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce tails
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Sorted> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let head = keep[i][0].clone();
        let tail = reduce_sorted(keep[i][1..].to_vec(), &others, order);
        let mut p = vec![head];
        p.extend(tail);
        make_monic(&mut p);
        reduced.push(p);
    }
    reduced.sort_by(|a, b| order.cmp(&b[0].0, &a[0].0));
    reduced
        .into_iter()
        .map(|p| MPoly::from_terms(nvars, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn vars(n: usize) -> Vec<MPoly> {
        (0..n).map(|i| MPoly::var(n, i)).collect()
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let v = vars(1);
        let gb = buchberger(&[v[0].scale(&int(3))], &TermOrder::DegRevLex, &Budget::default()).unwrap();
        assert_eq!(gb, vec![v[0].clone()]);
    }

    #[test]
    fn monomial_ideal() {
        let v = vars(2);
        let (x, y) = (&v[0], &v[1]);
        let gb = buchberger(&[x * x, x * y], &TermOrder::DegRevLex, &Budget::default()).unwrap();
        assert_eq!(gb, vec![x * x, x * y]);
    }

    #[test]
    fn hand_reduced_example() {
        // (x ξ, y ξ, x - y) in Q[x, y, ξ]
        let v = vars(3);
        let (x, y, xi) = (&v[0], &v[1], &v[2]);
        let gens = [x * xi, y * xi, x - y];
        let o = TermOrder::DegRevLex;
        let gb = buchberger(&gens, &o, &Budget::default()).unwrap();
        assert!(normal_form(&(x * xi), &gb, &o).is_zero());
        assert!(normal_form(&(y * xi), &gb, &o).is_zero());
        assert!(normal_form(&(x - y), &gb, &o).is_zero());
        // x - y and x ξ (or its reduced image y ξ) generate
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&(x - y)));
        assert!(normal_form(&xi, &gb, &o) == *xi);
    }

    #[test]
    fn budget_is_enforced() {
        let v = vars(3);
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let gens = [&(x * x) - &(y * z), &(y * y) - &(x * z), &(&(z * z) - &(x * y)) + x];
        let err = buchberger(&gens, &TermOrder::Lex, &Budget::with_pairs(1)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn unit_ideal_detected() {
        let v = vars(2);
        let (x, y) = (&v[0], &v[1]);
        let gens = [x.clone(), &(x * y) - &MPoly::one(2)];
        let gb = buchberger(&gens, &TermOrder::DegRevLex, &Budget::default()).unwrap();
        assert_eq!(gb, vec![MPoly::one(2)]);
        let _ = y;
    }
}
