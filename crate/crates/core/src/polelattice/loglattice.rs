use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::annihilator::{boxes, symbol_monomials};
use super::laurent::{vec_add, vec_scale};
use super::{theta_xz_ideal, theta_xz_is_radical, LaurentVec, NCChart, PoleModuleElement};
use crate::algebra::lattice::Vector;
use crate::algebra::{binomial, int, normal_form, Budget, MPoly, Rat, RatFun, UPoly};
use crate::dmod::{annihilator_thresholds, Levels};
use crate::weyl::symbol_names;
use crate::{Error, Result};

pub type LaurentMatrix = Vec<Vec<PoleModuleElement>>;

/// A frame `e_1..e_m` of an extension with `∇_i e_v = Σ_w Γ_i[w][v] e_w`,
/// where `∇_i` is `x_i∂_i` for the dividing coordinates and `∂_i` otherwise.
/// Logarithmic lattices have polynomial `Γ_i`; Laurent entries describe an
/// arbitrary pole extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogLattice {
    pub chart: NCChart,
    pub rank: usize,
    pub gammas: Vec<LaurentMatrix>,
}

fn mat_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> LaurentMatrix {
    let m = a.len();
    let n = a[0].first().map_or(0, |e| e.nvars());
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).fold(PoleModuleElement::zero(n), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

impl LogLattice {
    /// Validates shapes and integrability.
    pub fn new(chart: NCChart, gammas: Vec<LaurentMatrix>) -> Result<Self> {
        if gammas.len() != chart.n {
            return Err(Error::InvalidInput(format!(
                "need {} connection matrices, got {}",
                chart.n,
                gammas.len()
            )));
        }
        let rank = gammas[0].len();
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        for g in &gammas {
            if g.len() != rank || g.iter().any(|row| row.len() != rank) {
                return Err(Error::InvalidInput("connection matrices must be square of equal size".into()));
            }
            if g.iter().flatten().any(|e| e.nvars() != chart.n) {
                return Err(Error::InvalidInput("matrix entry in the wrong number of variables".into()));
            }
        }
        for g in &gammas[chart.r..] {
            // ∂_j for non-dividing coordinates must not create poles
            if g.iter().flatten().any(|e| !e.is_polynomial()) {
                return Err(Error::InvalidInput(
                    "non-dividing coordinates need polynomial connection matrices".into(),
                ));
            }
        }
        let out = LogLattice { chart, rank, gammas };
        out.check_integrability()?;
        Ok(out)
    }

    /// Constant matrices.
    pub fn constant(chart: NCChart, gammas: Vec<Vec<Vec<Rat>>>) -> Result<Self> {
        let n = chart.n;
        let lift = gammas
            .into_iter()
            .map(|g| {
                g.into_iter()
                    .map(|row| row.into_iter().map(|c| PoleModuleElement::monomial(vec![0; n], c)).collect())
                    .collect()
            })
            .collect();
        Self::new(chart, lift)
    }

    /// `Γ = 0`: the trivial lattice `O^m`.
    pub fn trivial(chart: NCChart, rank: usize) -> Self {
        let z = vec![vec![vec![int(0); rank]; rank]; chart.n];
        Self::constant(chart, z).expect("trivial lattice")
    }

    pub fn is_logarithmic(&self) -> bool {
        self.gammas.iter().flatten().flatten().all(|e| e.is_polynomial())
    }

    pub fn is_constant(&self) -> bool {
        self.gammas
            .iter()
            .flatten()
            .flatten()
            .all(|e| e.terms().all(|(a, _)| a.iter().all(|&x| x == 0)))
    }

    fn delta(&self, i: usize, f: &PoleModuleElement) -> PoleModuleElement {
        if i < self.chart.r {
            f.euler(i)
        } else {
            f.derivative(i)
        }
    }

    /// `δ_i Γ_j - δ_j Γ_i + [Γ_i, Γ_j] = 0` for all `i < j`.
    pub fn check_integrability(&self) -> Result<()> {
        let n = self.chart.n;
        for i in 0..n {
            for j in i + 1..n {
                let (gi, gj) = (&self.gammas[i], &self.gammas[j]);
                let ij = mat_mul(gi, gj);
                let ji = mat_mul(gj, gi);
                for v in 0..self.rank {
                    for w in 0..self.rank {
                        let e = &(&(&self.delta(i, &gj[v][w]) - &self.delta(j, &gi[v][w])) + &ij[v][w]) - &ji[v][w];
                        if !e.is_zero() {
                            return Err(Error::NonIntegrable(format!(
                                "[∇_{}, ∇_{}] has entry ({}, {}) = {}",
                                i + 1,
                                j + 1,
                                v + 1,
                                w + 1,
                                e
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `∇_i` on coefficient columns: `δ_i f + Γ_i f`.
    pub fn nabla(&self, i: usize, f: &[PoleModuleElement]) -> LaurentVec {
        (0..self.rank)
            .map(|v| {
                let mut acc = self.delta(i, &f[v]);
                for w in 0..self.rank {
                    acc = &acc + &(&self.gammas[i][v][w] * &f[w]);
                }
                acc
            })
            .collect()
    }

    /// The action of `∂_i`.
    pub fn d(&self, i: usize, f: &[PoleModuleElement]) -> LaurentVec {
        let out = self.nabla(i, f);
        if i < self.chart.r {
            let mut s = vec![0; self.chart.n];
            s[i] = -1;
            out.iter().map(|e| e.shift(&s)).collect()
        } else {
            out
        }
    }

    /// `x^(-d)` on each dividing coordinate, times `e_v`: generators of `F^0`.
    pub fn generator(&self, v: usize) -> LaurentVec {
        let c = &self.chart;
        let mut a = vec![0i64; c.n];
        for e in a.iter_mut().take(c.r) {
            *e = -(c.d as i64);
        }
        (0..self.rank)
            .map(|w| {
                if w == v {
                    PoleModuleElement::monomial(a.clone(), int(1))
                } else {
                    PoleModuleElement::zero(c.n)
                }
            })
            .collect()
    }

    /// Constant terms of `Γ_i`, i.e. the residue along `x_i = 0` at the origin.
    fn constant_part(&self, i: usize) -> Vec<Vec<Rat>> {
        let z = vec![0; self.chart.n];
        self.gammas[i].iter().map(|row| row.iter().map(|e| e.coeff(&z)).collect()).collect()
    }

    /// `F^0` generates `E(*Z)` under `D_X` only if no residue has an integer
    /// eigenvalue `>= d`: otherwise `∂_i` kills a pole instead of raising it.
    fn check_residues(&self) -> Result<()> {
        for i in 0..self.chart.r {
            let m = self.constant_part(i);
            if let Some(c) = integer_eigenvalue_at_least(&m, self.chart.d as i64) {
                return Err(Error::InvalidInput(format!(
                    "residue along x{} has integer eigenvalue {c} >= d = {}; F^0 does not generate the pole extension",
                    i + 1,
                    self.chart.d
                )));
            }
        }
        Ok(())
    }
}

fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut acc = int(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return int(0);
        };
        if p != col {
            m.swap(p, col);
            acc = -acc;
        }
        let piv = m[col][col].clone();
        acc *= &piv;
        for r in col + 1..n {
            let f = &m[r][col] / &piv;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = &f * &m[col][k];
                m[r][k] -= t;
            }
        }
    }
    acc
}

/// Smallest integer eigenvalue `c >= lo` of `m`, if any. Eigenvalues are
/// bounded by the largest absolute row sum.
pub(crate) fn integer_eigenvalue_at_least(m: &[Vec<Rat>], lo: i64) -> Option<i64> {
    let bound = m
        .iter()
        .map(|row| row.iter().fold(int(0), |a, e| a + e.abs()))
        .max()
        .unwrap_or_else(|| int(0))
        .ceil()
        .to_integer();
    let bound: i64 = bound.try_into().unwrap_or(i64::MAX);
    (lo..=bound).find(|&c| {
        let shifted: Vec<Vec<Rat>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| if i == j { e - int(c) } else { e.clone() })
                    .collect()
            })
            .collect();
        det(shifted).is_zero()
    })
}

fn laurent_to_ratfun(f: &PoleModuleElement) -> RatFun {
    let mut low = 0i64;
    for (a, _) in f.terms() {
        low = low.min(a[0]);
    }
    let mut coeffs = vec![int(0); 0];
    for (a, c) in f.terms() {
        let k = (a[0] - low) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, int(0));
        }
        coeffs[k] = c.clone();
    }
    &RatFun::from_poly(UPoly::from_coeffs(coeffs)) * &RatFun::x_pow(low)
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop21Report {
    pub chart: NCChart,
    pub bound: usize,
    /// "lattice" (curve case, exact lattices over the local ring at 0) or
    /// "monomial" (constant connection, torus-graded witnesses).
    pub method: &'static str,
    /// Curve case: `(b, a_b)` with `x^a ξ^b` annihilating iff `a >= a_b`.
    pub thresholds: Vec<(usize, u32)>,
    /// Generators of the computed annihilator up to the bound (curve case).
    pub annihilator: Vec<String>,
    /// Symbols outside `Θ` with an element they move (several variables).
    pub witnesses: Vec<(String, LaurentVec)>,
    /// Symbols found in the annihilator but outside `Θ_{X,Z} Gr(D_X)`.
    pub violations: Vec<String>,
    pub holds: bool,
}

/// `Ann Gr_F E(*Z) ⊆ Θ_{X,Z} Gr(D_X)` up to symbol degree `bound`, for the
/// filtration `F^k = D_{X,k} F^0`, `F^0 = Ẽ ⊗ O(dZ)`.
pub fn prop21_inclusion(lattice: &LogLattice, bound: usize) -> Result<Prop21Report> {
    let c = lattice.chart;
    let budget = Budget::default();
    let theta = theta_xz_ideal(&c);
    let gb = theta.groebner_basis(&budget)?.to_vec();
    let names = symbol_names(c.n);
    if lattice.is_logarithmic() {
        lattice.check_residues()?;
    }
    if c.n == 1 {
        // ∂ acts by x^-1 Γ on coefficient columns
        let m = lattice.rank;
        let conn: Vec<Vec<RatFun>> = (0..m)
            .map(|v| (0..m).map(|w| &laurent_to_ratfun(&lattice.gammas[0][v][w]) * &RatFun::x_pow(-1)).collect())
            .collect();
        let gens: Vec<Vector> = (0..m)
            .map(|v| lattice.generator(v).iter().map(laurent_to_ratfun).collect())
            .collect();
        let mut lv = Levels::from_connection(conn, gens);
        let thresholds = annihilator_thresholds(&mut lv, bound.max(1), bound)?;
        let mut violations = Vec::new();
        let mut annihilator = Vec::new();
        for &(b, a) in &thresholds {
            let mono = MPoly::term(vec![a, b as u32], int(1));
            annihilator.push(mono.render(&names));
            if !normal_form(&mono, &gb, theta.order()).is_zero() {
                violations.push(mono.render(&names));
            }
        }
        return Ok(Prop21Report {
            chart: c,
            bound,
            method: "lattice",
            thresholds,
            annihilator,
            witnesses: Vec::new(),
            holds: violations.is_empty(),
            violations,
        });
    }
    if !lattice.is_constant() {
        return Err(Error::InvalidInput(
            "in several variables the inclusion is checked for constant connection matrices only".into(),
        ));
    }
    // torus-graded: each multidegree carries one symbol monomial outside Θ,
    // so one witness per monomial rules out every combination
    let d = c.d as i64;
    let mut witnesses = Vec::new();
    let mut violations = Vec::new();
    for m in symbol_monomials(c.n, bound) {
        let mono = MPoly::term(m.clone(), int(1));
        if normal_form(&mono, &gb, theta.order()).is_zero() {
            continue;
        }
        let gamma: Vec<i64> = (0..c.n)
            .map(|i| if m[c.n + i] > 0 { -(d + 1) } else { 0 })
            .collect();
        let k = super::excess_order(&gamma, c.r, d);
        let deg: u32 = m[c.n..].iter().sum();
        let found = (0..lattice.rank).find_map(|v| {
            let g: LaurentVec = (0..lattice.rank)
                .map(|w| {
                    if w == v {
                        PoleModuleElement::monomial(gamma.clone(), int(1))
                    } else {
                        PoleModuleElement::zero(c.n)
                    }
                })
                .collect();
            let mut img = g.clone();
            for i in 0..c.n {
                for _ in 0..m[c.n + i] {
                    img = lattice.d(i, &img);
                }
            }
            let a: Vec<i64> = m[..c.n].iter().map(|&e| e as i64).collect();
            let img: LaurentVec = img.iter().map(|e| e.shift(&a)).collect();
            let top = img.iter().filter_map(|e| e.excess_order(c.r, d)).max();
            (top == Some(k + deg as i64)).then_some(g)
        });
        match found {
            Some(g) => witnesses.push((mono.render(&names), g)),
            None => violations.push(mono.render(&names)),
        }
    }
    Ok(Prop21Report {
        chart: c,
        bound,
        method: "monomial",
        thresholds: Vec::new(),
        annihilator: Vec::new(),
        witnesses,
        holds: violations.is_empty(),
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ForwardReport {
    pub chart: NCChart,
    pub rank: usize,
    pub bound: usize,
    pub generators: Vec<String>,
    /// Identities `t ∂^β g_v = Σ c ∂^γ g_w` checked, one per generator `t`
    /// of `Θ_{X,Z}`, multi-index `|β| <= bound` and frame vector.
    pub identities_checked: usize,
    pub failures: Vec<String>,
    /// Every generator maps `F^k` into `F^k` for `k <= bound`.
    pub stable: bool,
    pub prop21: Option<Prop21Report>,
    pub radical: bool,
    /// Stability plus the inclusion: the annihilator is `Θ_{X,Z} Gr(D_X)`.
    pub annihilator_is_theta: bool,
}

/// Builds `F^0 = Ẽ ⊗ O(dZ)`, `F^k = D_{X,k} F^0` and certifies that the
/// lifts `x_iθ`-type generators of `Θ_{X,Z}` preserve each `F^k`: for a
/// generator `g` of `F^0`, `θ_i ∂^β g = ∂^β(θ_i g) - β_i ∂^β g` and
/// `∂_j ∂^β g = ∂^β(∂_j g)`, expanded by Leibniz into `O`-combinations of
/// `∂^γ g_w`, `γ <= β`, and compared with the direct computation.
pub fn theorem_forward_filtration(lattice: &LogLattice, bound: usize) -> Result<ForwardReport> {
    if !lattice.is_logarithmic() {
        return Err(Error::InvalidInput("forward filtration needs a logarithmic lattice".into()));
    }
    lattice.check_integrability()?;
    lattice.check_residues()?;
    let c = lattice.chart;
    let (n, m) = (c.n, lattice.rank);
    let betas: Vec<Vec<i64>> = boxes(n, 0, bound as i64)
        .into_iter()
        .filter(|b| b.iter().sum::<i64>() <= bound as i64)
        .collect();
    // ∂^β g_w, built from smaller multi-indices
    let mut table: BTreeMap<(Vec<i64>, usize), LaurentVec> = BTreeMap::new();
    let mut sorted = betas.clone();
    sorted.sort_by_key(|b| b.iter().sum::<i64>());
    for b in &sorted {
        for w in 0..m {
            let v = match (0..n).find(|&i| b[i] > 0) {
                None => lattice.generator(w),
                Some(i) => {
                    let mut prev = b.clone();
                    prev[i] -= 1;
                    lattice.d(i, &table[&(prev, w)])
                }
            };
            table.insert((b.clone(), w), v);
        }
    }
    let mut identities_checked = 0;
    let mut failures = Vec::new();
    let zero_vec = vec![PoleModuleElement::zero(n); m];
    for t in 0..n {
        let d = if t < c.r { c.d as i64 } else { 0 };
        for v in 0..m {
            // t g_v = Σ_w coef[w] g_w
            let coef: Vec<PoleModuleElement> = (0..m)
                .map(|w| {
                    let e = &lattice.gammas[t][w][v];
                    if w == v && d != 0 {
                        e - &PoleModuleElement::monomial(vec![0; n], int(d))
                    } else {
                        e.clone()
                    }
                })
                .collect();
            for b in &betas {
                let lhs = if t < c.r {
                    lattice.nabla(t, &table[&(b.clone(), v)])
                } else {
                    lattice.d(t, &table[&(b.clone(), v)])
                };
                let mut rhs = zero_vec.clone();
                for g in &betas {
                    if !g.iter().zip(b).all(|(x, y)| x <= y) {
                        continue;
                    }
                    let mut weight = int(1);
                    for i in 0..n {
                        weight *= binomial(b[i] as u32, g[i] as u32);
                    }
                    for w in 0..m {
                        let mut cw = coef[w].clone();
                        for i in 0..n {
                            for _ in 0..(b[i] - g[i]) {
                                cw = cw.derivative(i);
                            }
                        }
                        if cw.is_zero() {
                            continue;
                        }
                        rhs = vec_add(&rhs, &vec_scale(&table[&(g.clone(), w)], &cw.scale(&weight)));
                    }
                }
                if t < c.r && b[t] != 0 {
                    let corr: LaurentVec = table[&(b.clone(), v)].iter().map(|e| e.scale(&int(-b[t]))).collect();
                    rhs = vec_add(&rhs, &corr);
                }
                identities_checked += 1;
                if lhs != rhs {
                    failures.push(format!("generator {} on ∂^{:?} g_{}", t + 1, b, v + 1));
                }
            }
        }
    }
    let stable = failures.is_empty();
    let prop21 = if n == 1 || lattice.is_constant() {
        Some(prop21_inclusion(lattice, bound)?)
    } else {
        None
    };
    let radical = theta_xz_is_radical(&c)?;
    let names = symbol_names(n);
    let annihilator_is_theta = stable && radical && prop21.as_ref().is_some_and(|p| p.holds);
    Ok(ForwardReport {
        chart: c,
        rank: m,
        bound,
        generators: c.theta_generators().iter().map(|g| g.render(&names)).collect(),
        identities_checked,
        failures,
        stable,
        prop21,
        radical,
        annihilator_is_theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    fn chart(n: usize, r: usize) -> NCChart {
        NCChart::new(n, r).unwrap()
    }

    #[test]
    fn trivial_and_euler_curves() {
        let t = LogLattice::trivial(chart(1, 1), 1);
        let f = theorem_forward_filtration(&t, 6).unwrap();
        assert!(f.stable && f.radical && f.annihilator_is_theta);
        let p = f.prop21.unwrap();
        assert_eq!(p.annihilator, vec!["x*xi", "x*xi^2", "x*xi^3", "x*xi^4", "x*xi^5", "x*xi^6"]);
        let e = LogLattice::constant(chart(1, 1), vec![vec![vec![rat(1, 3)]]]).unwrap();
        let f = theorem_forward_filtration(&e, 6).unwrap();
        assert!(f.annihilator_is_theta);
    }

    #[test]
    fn two_dividing_coordinates() {
        let l = LogLattice::constant(chart(2, 2), vec![vec![vec![rat(1, 2)]], vec![vec![rat(-2, 3)]]]).unwrap();
        let f = theorem_forward_filtration(&l, 4).unwrap();
        assert!(f.stable && f.annihilator_is_theta);
        assert_eq!(f.generators, vec!["x*xi", "y*eta"]);
        let p = f.prop21.unwrap();
        assert!(p.witnesses.iter().any(|(s, _)| s == "xi"));
    }

    #[test]
    fn irregular_twist_still_included() {
        // θ acts by x^-1
        let n = chart(1, 1);
        let g = vec![vec![vec![PoleModuleElement::monomial(vec![-1], int(1))]]];
        let l = LogLattice::new(n, g).unwrap();
        assert!(!l.is_logarithmic());
        let p = prop21_inclusion(&l, 4).unwrap();
        assert!(p.holds);
        // xξ no longer annihilates
        assert!(p.thresholds[0].1 > 1);
        assert!(theorem_forward_filtration(&l, 4).is_err());
    }

    #[test]
    fn resonant_residue_rejected() {
        let l = LogLattice::constant(chart(1, 1), vec![vec![vec![int(1)]]]).unwrap();
        assert!(matches!(prop21_inclusion(&l, 4), Err(Error::InvalidInput(_))));
        let l = LogLattice::constant(chart(1, 1), vec![vec![vec![int(0)]]]).unwrap();
        assert!(prop21_inclusion(&l, 4).unwrap().holds);
    }

    #[test]
    fn non_integrable_reports_commutator() {
        // Γ_1 = [[0,1],[0,0]], Γ_2 = [[1,0],[0,0]] do not commute
        let c = chart(2, 2);
        let a = vec![vec![int(0), int(1)], vec![int(0), int(0)]];
        let b = vec![vec![int(1), int(0)], vec![int(0), int(0)]];
        match LogLattice::constant(c, vec![a, b]) {
            Err(Error::NonIntegrable(msg)) => assert!(msg.contains("[∇_1, ∇_2]")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn polynomial_log_connection() {
        // rank 1 on (x, y), r = 1: Γ_x = xy, Γ_y = x, and x∂_x(x) = ∂_y(xy)
        let c = chart(2, 1);
        let xy = PoleModuleElement::monomial(vec![1, 1], int(1));
        let x = PoleModuleElement::monomial(vec![1, 0], int(1));
        let l = LogLattice::new(c, vec![vec![vec![xy]], vec![vec![x]]]).unwrap();
        let f = theorem_forward_filtration(&l, 4).unwrap();
        assert!(f.stable);
        // non-constant in two variables: the inclusion is not scanned
        assert!(f.prop21.is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn diagonal_lattices_certified(
            a in prop::collection::vec(-5i64..5, 4),
            den in 2i64..5,
            r in 1usize..=2,
        ) {
            let c = NCChart::new(2, r).unwrap();
            let d = |k: usize| rat(a[k], den);
            let g1 = vec![vec![d(0), int(0)], vec![int(0), d(1)]];
            let g2 = vec![vec![d(2), int(0)], vec![int(0), d(3)]];
            let l = LogLattice::constant(c, vec![g1, g2]).unwrap();
            match theorem_forward_filtration(&l, 3) {
                Ok(f) => {
                    prop_assert!(f.stable);
                    prop_assert!(f.prop21.unwrap().holds);
                }
                Err(Error::InvalidInput(_)) => {
                    // resonant residue: some eigenvalue is an integer >= d
                    let resonant = (0..r).any(|i| (0..2).any(|v| {
                        let e = rat(a[2 * i + v], den);
                        e.is_integer() && e >= int(r as i64)
                    }));
                    prop_assert!(resonant);
                }
                Err(e) => prop_assert!(false, "unexpected error {}", e),
            }
        }
    }
}
