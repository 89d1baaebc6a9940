//! Normal-crossing computations on `X = A^n` with `Z = {x_1 ⋯ x_r = 0}`:
//! the module `O_X(*Z)` and its pole-order filtration, the ideal
//! `Θ_{X,Z} Gr(D_X)`, logarithmic lattices and the two directions of the
//! regularity theorem as finite certificates.

mod annihilator;
mod backward;
mod laurent;
mod loglattice;

pub use annihilator::{pole_filtration_annihilator, pole_goodness, GoodnessLevel, PoleAnnihilator, Witness};
pub use backward::{theorem_backward_extraction, theorem_backward_for_operator, BackwardReport};
pub use laurent::{excess_order, pole_order, LaurentVec, PoleModuleElement};
pub use loglattice::{prop21_inclusion, theorem_forward_filtration, ForwardReport, LogLattice, Prop21Report};

use serde::Serialize;

use crate::algebra::{is_radical_squarefree_monomial, Ideal, MPoly};
use crate::weyl::symbol_names;
use crate::{Error, Result};

/// A chart `A^n` with boundary `x_1 ⋯ x_r = 0` and pole shift `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NCChart {
    pub n: usize,
    pub r: usize,
    pub d: usize,
}

impl NCChart {
    /// `d` defaults to `r`.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        Self::with_shift(n, r, r)
    }

    pub fn with_shift(n: usize, r: usize, d: usize) -> Result<Self> {
        if !(1 <= r && r <= n && n <= 3) {
            return Err(Error::InvalidInput(format!(
                "need 1 <= r <= n <= 3, got n = {n}, r = {r}"
            )));
        }
        Ok(NCChart { n, r, d })
    }

    /// `x_i ξ_i` for dividing coordinates, `ξ_j` otherwise, in `Q[x, ξ]`.
    pub fn theta_generators(&self) -> Vec<MPoly> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let xi = MPoly::var(2 * n, n + i);
                if i < self.r {
                    &MPoly::var(2 * n, i) * &xi
                } else {
                    xi
                }
            })
            .collect()
    }
}

/// `Θ_{X,Z} Gr(D_X) = (x_1ξ_1, …, x_rξ_r, ξ_(r+1), …, ξ_n)`.
pub fn theta_xz_ideal(chart: &NCChart) -> Ideal {
    Ideal::new(symbol_names(chart.n), chart.theta_generators())
}

/// The ideal is generated by squarefree monomials, hence radical.
pub fn theta_xz_is_radical(chart: &NCChart) -> Result<bool> {
    is_radical_squarefree_monomial(&theta_xz_ideal(chart))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_ideals() {
        let g = |n, r| theta_xz_ideal(&NCChart::new(n, r).unwrap()).render_gens();
        assert_eq!(g(1, 1), vec!["x*xi"]);
        assert_eq!(g(2, 1), vec!["x*xi", "eta"]);
        assert_eq!(g(3, 2), vec!["x*xi", "y*eta", "zeta"]);
        for n in 1..=3 {
            for r in 1..=n {
                assert!(theta_xz_is_radical(&NCChart::new(n, r).unwrap()).unwrap());
            }
        }
        assert!(NCChart::new(2, 3).is_err());
        assert!(NCChart::new(4, 1).is_err());
    }
}
