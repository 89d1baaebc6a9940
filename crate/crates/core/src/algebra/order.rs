use std::cmp::Ordering;

use serde::Serialize;

/// Monomial orders on exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TermOrder {
    Lex,
    DegRevLex,
    /// Compare the weighted degree first, then break ties by degrevlex.
    Weighted(Vec<u32>),
}

impl TermOrder {
    /// Weight 1 on the last `n` of `2n` variables (the symbols `ξ`), 0 on the
    /// first `n`: total `∂`-degree first, degrevlex on `(x, ξ)` jointly after.
    pub fn filtration(n: usize) -> Self {
        let mut w = vec![0; n];
        w.extend(std::iter::repeat_n(1, n));
        TermOrder::Weighted(w)
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::DegRevLex => degrevlex(a, b),
            TermOrder::Weighted(w) => {
                let wa: u64 = a.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum();
                let wb: u64 = b.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum();
                wa.cmp(&wb).then_with(|| degrevlex(a, b))
            }
        }
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_basics() {
        let o = TermOrder::DegRevLex;
        // x^2 > xy > y^2 > x > y > 1  (x first)
        let seq = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // x y^0 z^2 vs x^0 y^2 z: same degree, compare last variable
        assert_eq!(o.cmp(&[1, 0, 2], &[0, 2, 1]), Ordering::Less);
    }

    #[test]
    fn filtration_order_ranks_symbol_degree_first() {
        let o = TermOrder::filtration(1);
        // ξ beats x^5
        assert_eq!(o.cmp(&[0, 1], &[5, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 1], &[0, 1]), Ordering::Greater);
    }
}
