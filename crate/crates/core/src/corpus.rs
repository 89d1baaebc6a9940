//! Named test operators with their known local and global verdicts.

use serde::Serialize;

use crate::algebra::Point;
use crate::parse::{parse_point, parse_univar};
use crate::regularity::{GlobalVerdict, Verdict};
use crate::weyl::UnivarOperator;

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    /// Expected verdicts at selected points (`inf` for infinity).
    pub points: &'static [(&'static str, Verdict)],
    pub global: GlobalVerdict,
}

impl CorpusEntry {
    pub fn operator(&self) -> UnivarOperator {
        parse_univar(self.source).expect("corpus entries parse")
    }

    pub fn expected(&self) -> Vec<(Point, Verdict)> {
        self.points
            .iter()
            .map(|(p, v)| (parse_point(p).expect("corpus points parse"), *v))
            .collect()
    }
}

use GlobalVerdict as G;
use Verdict::{Irregular as I, Regular as R};

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "euler",
        source: "x*d - 5",
        points: &[("0", R), ("inf", R)],
        global: G::Regular,
    },
    CorpusEntry {
        name: "euler_half",
        source: "2*x*d - 1",
        points: &[("0", R), ("inf", R)],
        global: G::Regular,
    },
    CorpusEntry {
        name: "euler_second_order",
        source: "x^2*d^2 + x*d + 1",
        points: &[("0", R), ("inf", R)],
        global: G::Regular,
    },
    CorpusEntry {
        name: "airy",
        source: "d^2 - x",
        points: &[("0", R), ("inf", I)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "hypergeometric",
        source: "x*(1 - x)*d^2 + (1 - 2*x)*d - 1/4",
        points: &[("0", R), ("1", R), ("inf", R)],
        global: G::Regular,
    },
    CorpusEntry {
        name: "legendre",
        source: "(1 - x^2)*d^2 - 2*x*d + 6",
        points: &[("-1", R), ("1", R), ("inf", R)],
        global: G::Regular,
    },
    CorpusEntry {
        name: "bessel_half",
        source: "x^2*d^2 + x*d + x^2 - 1/4",
        points: &[("0", R), ("inf", I)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "kummer",
        source: "x*d^2 + (1 - x)*d - 1/2",
        points: &[("0", R), ("inf", I)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "exponential",
        source: "d - 1",
        points: &[("0", R), ("inf", I)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "exp_inverse_x",
        source: "x^2*d + 1",
        points: &[("0", I), ("inf", R)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "exp_inverse_x_squared",
        source: "x^3*d - 2",
        points: &[("0", I), ("inf", R)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "twisted_euler",
        source: "x^2*d + 1 - x/2",
        points: &[("0", I), ("inf", R)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "twisted_second_order",
        source: "x^3*d^2 + x*d - 1",
        points: &[("0", I)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "hermite",
        source: "d^2 - 2*x*d + 4",
        points: &[("0", R), ("inf", I)],
        global: G::Irregular,
    },
    CorpusEntry {
        name: "double_pole_regular",
        source: "x^2*(x - 1)^2*d^2 + x*(x - 1)*d + 2",
        points: &[("0", R), ("1", R), ("inf", R)],
        global: G::Regular,
    },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmod::{fuchs_kashiwara_equivalence, kashiwara_regular_at};
    use crate::regularity::{fuchs_regular_at, newton_polygon, regular_on_projective_line, theta_regular_at};

    #[test]
    fn corpus_verdicts() {
        assert!(CORPUS.len() >= 10);
        for e in CORPUS {
            let p = e.operator();
            for (pt, v) in e.expected() {
                let f = fuchs_regular_at(&p, &pt).unwrap();
                assert_eq!(f.verdict, v, "{} at {}", e.name, pt);
                assert_eq!(kashiwara_regular_at(&p, &pt).unwrap().regular, v.is_regular(), "{} at {}", e.name, pt);
                assert_eq!(theta_regular_at(&p, &pt).unwrap().regular, v.is_regular(), "{} at {}", e.name, pt);
                assert_eq!(newton_polygon(&p, &pt).unwrap().is_regular(), v.is_regular(), "{} at {}", e.name, pt);
                fuchs_kashiwara_equivalence(&p, &pt).unwrap();
            }
            assert_eq!(regular_on_projective_line(&p).unwrap().verdict, e.global, "{}", e.name);
        }
    }

    #[test]
    fn names_are_unique() {
        for (i, e) in CORPUS.iter().enumerate() {
            assert!(CORPUS[i + 1..].iter().all(|f| f.name != e.name));
        }
        assert_eq!(find("airy").unwrap().source, "d^2 - x");
    }
}
