//! Exact arithmetic substrate: rationals, univariate and multivariate
//! polynomials, rational functions with valuations, commutative Gröbner
//! bases, and lattices over the local ring at a rational point.

mod groebner;
mod ideal;
pub mod lattice;
mod mpoly;
mod order;
mod poly;
mod ratfun;

pub use groebner::{buchberger, normal_form, Budget};
pub use ideal::{is_radical_squarefree_monomial, krull_dimension, radical_membership, Ideal};
pub use lattice::LocalLattice;
pub use mpoly::{Monomial, MPoly};
pub use order::TermOrder;
pub use poly::{Factor, UPoly};
pub use ratfun::{Point, RatFun, Valuation};

use num_bigint::BigInt;
use num_rational::BigRational;

/// The base field. Always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Signed Stirling numbers of the first kind `s(n, k)`, rows `0..=n`.
pub fn stirling_first(n: usize) -> Vec<Vec<Rat>> {
    let mut s = vec![vec![int(0); n + 1]; n + 1];
    s[0][0] = int(1);
    for i in 1..=n {
        for k in 1..=i {
            // s(i, k) = s(i-1, k-1) - (i-1) s(i-1, k)
            s[i][k] = &s[i - 1][k - 1] - int(i as i64 - 1) * &s[i - 1][k];
        }
    }
    s
}

/// Stirling numbers of the second kind `S(n, k)`.
pub fn stirling_second(n: usize) -> Vec<Vec<Rat>> {
    let mut s = vec![vec![int(0); n + 1]; n + 1];
    s[0][0] = int(1);
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = &s[i - 1][k - 1] + int(k as i64) * &s[i - 1][k];
        }
    }
    s
}

pub(crate) fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return int(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

pub(crate) fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::from(1);
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_inverse_pair() {
        // sum_j s(n, j) S(j, k) = delta_{n,k}
        let m = 8;
        let s1 = stirling_first(m);
        let s2 = stirling_second(m);
        for n in 0..=m {
            for k in 0..=m {
                let mut acc = int(0);
                for j in 0..=m {
                    acc += &s1[n][j] * &s2[j][k];
                }
                assert_eq!(acc, int((n == k) as i64));
            }
        }
    }

    #[test]
    fn small_stirling_values() {
        let s = stirling_first(4);
        // x(x-1)(x-2)(x-3) = x^4 - 6x^3 + 11x^2 - 6x
        assert_eq!(s[4][1..], [int(-6), int(11), int(-6), int(1)]);
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(factorial(5), int(120));
    }
}
