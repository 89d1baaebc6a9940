//! Finitely generated submodules of `Q(x)^m` over the local ring `O_c` of
//! rational functions without pole at `x = c`.
//!
//! Membership is decided with valuations only: `O_c` is a discrete valuation
//! ring, so column echelon forms with pivots `(x - c)^k` exist and are cheap.

use super::{Rat, RatFun, UPoly, Valuation};

pub type Vector = Vec<RatFun>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLattice {
    point: Rat,
    dim: usize,
    /// `(pivot row, vector)`; the vector vanishes above its pivot row and the
    /// pivot entry is exactly `(x - c)^k`.
    basis: Vec<(usize, Vector)>,
}

fn local_power(c: &Rat, k: i64) -> RatFun {
    let lin = RatFun::from_poly(UPoly::linear_root(c));
    lin.pow(k)
}

impl LocalLattice {
    /// `O_c^dim` with the coordinate basis.
    pub fn standard(point: Rat, dim: usize) -> Self {
        let gens = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { RatFun::one() } else { RatFun::zero() }).collect())
            .collect();
        Self::from_generators(point, dim, gens)
    }

    pub fn from_generators(point: Rat, dim: usize, gens: Vec<Vector>) -> Self {
        let mut pool: Vec<Vector> = gens
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), dim, "vector length mismatch"))
            .filter(|g| g.iter().any(|e| !e.is_zero()))
            .collect();
        let mut basis = Vec::new();
        for row in 0..dim {
            let best = pool
                .iter()
                .enumerate()
                .filter_map(|(i, g)| g[row].ord_at(&point).finite().map(|v| (v, i)))
                .min();
            let Some((ord, idx)) = best else { continue };
            let pivot = pool.swap_remove(idx);
            // normalize the pivot entry to (x - c)^ord by a unit of O_c
            let unit = &pivot[row] / &local_power(&point, ord);
            let inv = unit.inv();
            let pivot: Vector = pivot.iter().map(|e| e * &inv).collect();
            for g in pool.iter_mut() {
                if g[row].is_zero() {
                    continue;
                }
                let coef = &g[row] / &pivot[row];
                for (k, e) in g.iter_mut().enumerate().skip(row) {
                    *e = &*e - &(&coef * &pivot[k]);
                }
            }
            pool.retain(|g| g.iter().any(|e| !e.is_zero()));
            basis.push((row, pivot));
        }
        LocalLattice { point, dim, basis }
    }

    pub fn point(&self) -> &Rat {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.basis.iter().map(|(_, v)| v.clone()).collect()
    }

    /// Valuations of the pivots; their sum is the index-like invariant
    /// `ord det` for a full-rank lattice.
    pub fn pivot_orders(&self) -> Vec<i64> {
        self.basis
            .iter()
            .map(|(r, v)| v[*r].ord_at(&self.point).finite().unwrap())
            .collect()
    }

    pub fn contains(&self, v: &[RatFun]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v: Vector = v.to_vec();
        let mut next = 0;
        for row in 0..self.dim {
            if next < self.basis.len() && self.basis[next].0 == row {
                let b = &self.basis[next].1;
                next += 1;
                if v[row].is_zero() {
                    continue;
                }
                let coef = &v[row] / &b[row];
                if !coef.ord_at(&self.point).at_least(0) {
                    return false;
                }
                for k in row..self.dim {
                    v[k] = &v[k] - &(&coef * &b[k]);
                }
            } else if !v[row].is_zero() {
                return false;
            }
        }
        v.iter().all(RatFun::is_zero)
    }

    pub fn contains_lattice(&self, other: &LocalLattice) -> bool {
        other.basis.iter().all(|(_, v)| self.contains(v))
    }

    pub fn same_as(&self, other: &LocalLattice) -> bool {
        self.contains_lattice(other) && other.contains_lattice(self)
    }

    pub fn sum(&self, extra: Vec<Vector>) -> LocalLattice {
        let mut gens = self.basis();
        gens.extend(extra);
        Self::from_generators(self.point.clone(), self.dim, gens)
    }

    /// Smallest valuation among all basis entries.
    pub fn min_entry_order(&self) -> Valuation {
        self.basis
            .iter()
            .flat_map(|(_, v)| v.iter().map(|e| e.ord_at(&self.point)))
            .min()
            .unwrap_or(Valuation::Infinity)
    }
}

/// Matrix-vector product for a square matrix given by rows.
pub fn mat_vec(m: &[Vec<RatFun>], v: &[RatFun]) -> Vector {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(RatFun::zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}
