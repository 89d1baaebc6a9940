use num_traits::Zero;
use serde::Serialize;

use crate::algebra::lattice::{mat_vec, Vector};
use crate::algebra::{
    is_radical_squarefree_monomial, radical_membership, Budget, Ideal, LocalLattice, MPoly, Point, Rat, RatFun,
    Valuation,
};
use crate::regularity::{fuchs_regular_at, localize, FuchsCertificate, Verdict};
use crate::weyl::UnivarOperator;
use crate::{Error, Result};

/// `∇v = v' + A v` on `Q(x)^n` for `D/DP` in the basis `u, ∂u, …, ∂^(n-1)u`
/// (`P` is normalized to be monic first).
pub fn companion_connection(p: &UnivarOperator) -> Result<Vec<Vec<RatFun>>> {
    let n = p.order().ok_or(Error::ZeroElement("zero operator"))?;
    let m = p.monic();
    let mut a = vec![vec![RatFun::zero(); n]; n];
    for k in 0..n {
        if k + 1 < n {
            a[k + 1][k] = RatFun::one();
        }
        a[k][n - 1] = -&m.coeff(k);
    }
    Ok(a)
}

fn connection_apply(a: &[Vec<RatFun>], v: &[RatFun]) -> Vector {
    let av = mat_vec(a, v);
    v.iter().zip(av).map(|(x, y)| &x.derivative() + &y).collect()
}

fn unit_vector(n: usize, i: usize) -> Vector {
    (0..n).map(|k| if k == i { RatFun::one() } else { RatFun::zero() }).collect()
}

/// Which lattice generates the filtration in degree 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialLattice {
    /// `u, θu, …, θ^(n-1)u`
    Theta,
    /// `u, ∂u, …, ∂^(n-1)u`
    Derivatives,
}

/// `M = D/DP` at `x = 0` with `F^0` spanned over `O_0` by `u, θu, …` and
/// `F^k = F_k(D) F^0`. The θ-matrix expresses `θ` in the basis `θ^j u`
/// modulo `Pu = 0`.
#[derive(Clone, Debug)]
pub struct CyclicFiltration {
    operator: UnivarOperator,
    theta_matrix: Vec<Vec<RatFun>>,
}

impl CyclicFiltration {
    pub fn new(p: &UnivarOperator) -> Result<Self> {
        let n = p.order().ok_or(Error::ZeroElement("zero operator"))?;
        let p = p.monic();
        // θ^j u as remainders of θ^j modulo P, in the ∂-basis
        let theta = UnivarOperator::monomial(RatFun::x(), 1);
        let mut pow = UnivarOperator::one();
        let mut cols = Vec::with_capacity(n + 1);
        for j in 0..=n {
            if j > 0 {
                pow = pow.compose(&theta);
            }
            let (_, r) = pow.div_rem_right(&p);
            cols.push((0..n).map(|k| r.coeff(k)).collect::<Vector>());
        }
        // cols[j] has entries up to index j with cols[j][j] = x^j for j < n:
        // back substitution expresses θ^n u in the θ-basis
        let mut rhs = cols[n].clone();
        let mut last = vec![RatFun::zero(); n];
        for j in (0..n).rev() {
            let c = &rhs[j] / &cols[j][j];
            for (k, r) in rhs.iter_mut().enumerate().take(j + 1) {
                *r = &*r - &(&c * &cols[j][k]);
            }
            last[j] = c;
        }
        let mut m = vec![vec![RatFun::zero(); n]; n];
        for j in 0..n {
            if j + 1 < n {
                m[j + 1][j] = RatFun::one();
            }
            m[j][n - 1] = last[j].clone();
        }
        Ok(CyclicFiltration {
            operator: p,
            theta_matrix: m,
        })
    }

    pub fn operator(&self) -> &UnivarOperator {
        &self.operator
    }

    pub fn rank(&self) -> usize {
        self.theta_matrix.len()
    }

    /// Column `j` is `θ e_j` in the basis `e_i = θ^i u`.
    pub fn theta_matrix(&self) -> &[Vec<RatFun>] {
        &self.theta_matrix
    }

    pub fn theta_orders(&self) -> Vec<Vec<Valuation>> {
        let zero = Rat::zero();
        self.theta_matrix
            .iter()
            .map(|row| row.iter().map(|e| e.ord_at(&zero)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KashiwaraCertificate {
    pub point: Point,
    pub theta_matrix: Vec<Vec<RatFun>>,
    pub orders: Vec<Vec<Valuation>>,
    /// `⊕ O e_j` is θ-stable, i.e. `xξ` annihilates the graded module locally.
    pub regular: bool,
}

pub fn kashiwara_regular_at_zero(p: &UnivarOperator) -> Result<KashiwaraCertificate> {
    let f = CyclicFiltration::new(p)?;
    let orders = f.theta_orders();
    let regular = orders.iter().flatten().all(|o| o.at_least(0));
    Ok(KashiwaraCertificate {
        point: Point::zero(),
        theta_matrix: f.theta_matrix,
        orders,
        regular,
    })
}

pub fn kashiwara_regular_at(p: &UnivarOperator, point: &Point) -> Result<KashiwaraCertificate> {
    let mut c = kashiwara_regular_at_zero(&localize(p, point))?;
    c.point = point.clone();
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub point: Point,
    pub fuchs: FuchsCertificate,
    pub kashiwara: KashiwaraCertificate,
    pub verdict: Verdict,
}

/// Runs both tests; a disagreement is reported as [`Error::Contradiction`]
/// carrying both certificates.
pub fn fuchs_kashiwara_equivalence(p: &UnivarOperator, point: &Point) -> Result<EquivalenceReport> {
    let fuchs = fuchs_regular_at(p, point)?;
    let kashiwara = kashiwara_regular_at(p, point)?;
    if fuchs.verdict.is_regular() != kashiwara.regular {
        return Err(Error::Contradiction(format!(
            "operator {} at {}: order test says {:?}, graded annihilator test says {}; \
             order rows {:?}; theta orders {:?}",
            p,
            point,
            fuchs.verdict,
            if kashiwara.regular { "regular" } else { "irregular" },
            fuchs.rows,
            kashiwara.orders
        )));
    }
    Ok(EquivalenceReport {
        point: point.clone(),
        verdict: fuchs.verdict,
        fuchs,
        kashiwara,
    })
}

/// The levels `F^0 ⊆ F^1 ⊆ …` of `F_k(D) F^0` as lattices at 0, together
/// with their explicit spanning sets `∂^b g` (`g` a generator of `F^0`).
pub(crate) struct Levels {
    conn: Vec<Vec<RatFun>>,
    dim: usize,
    frontier: Vec<Vector>,
    spans: Vec<Vec<Vector>>,
    lattices: Vec<LocalLattice>,
}

impl Levels {
    fn new(p: &UnivarOperator, initial: InitialLattice) -> Result<Self> {
        let conn = companion_connection(p)?;
        let n = conn.len();
        let gens: Vec<Vector> = match initial {
            InitialLattice::Derivatives => (0..n).map(|i| unit_vector(n, i)).collect(),
            InitialLattice::Theta => {
                let mut v = unit_vector(n, 0);
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    if i > 0 {
                        v = connection_apply(&conn, &v).iter().map(|e| e * &RatFun::x()).collect();
                    }
                    out.push(v.clone());
                }
                out
            }
        };
        Ok(Self::from_connection(conn, gens))
    }

    /// Levels of `F_k(D) F^0` where `F^0` is spanned by `gens` and
    /// `∂v = v' + conn·v`.
    pub(crate) fn from_connection(conn: Vec<Vec<RatFun>>, gens: Vec<Vector>) -> Self {
        let n = conn.len();
        let lat = LocalLattice::from_generators(Rat::zero(), n, gens.clone());
        Levels {
            conn,
            dim: n,
            frontier: gens.clone(),
            spans: vec![gens],
            lattices: vec![lat],
        }
    }

    pub(crate) fn level(&mut self, k: usize) -> &LocalLattice {
        while self.lattices.len() <= k {
            self.frontier = self.frontier.iter().map(|v| connection_apply(&self.conn, v)).collect();
            let mut span = self.spans.last().unwrap().clone();
            span.extend(self.frontier.iter().cloned());
            self.lattices
                .push(LocalLattice::from_generators(Rat::zero(), self.dim, span.clone()));
            self.spans.push(span);
        }
        &self.lattices[k]
    }

    pub(crate) fn d(&self, v: &[RatFun]) -> Vector {
        connection_apply(&self.conn, v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    /// `(j, F^j + ∂F^j = F^(j+1))` for each checked level.
    pub levels: Vec<(usize, bool)>,
    pub good: bool,
}

/// Checks `F_1(D) F^j = F^(j+1)` for `ord P <= j <= bound` at 0: the lattice
/// spanned by a basis of `F^j` and its derivatives must equal the lattice
/// spanned by the explicit generators `∂^b θ^i u`, `b <= j + 1`.
pub fn check_good_filtration(p: &UnivarOperator, bound: usize) -> Result<GoodnessReport> {
    let n = p.order().ok_or(Error::ZeroElement("zero operator"))?;
    let mut lv = Levels::new(p, InitialLattice::Theta)?;
    let mut levels = Vec::new();
    for j in n..=bound.max(n) {
        let fj = lv.level(j).clone();
        let next = lv.level(j + 1).clone();
        let derived: Vec<Vector> = fj.basis().iter().map(|g| lv.d(g)).collect();
        let applied = fj.sum(derived);
        levels.push((j, applied.same_as(&next)));
    }
    let good = levels.iter().all(|l| l.1);
    Ok(GoodnessReport { levels, good })
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedAnnihilator {
    pub initial: InitialLattice,
    /// `(b, a_b)`: `x^a ξ^b` annihilates `Gr_F M` near 0 iff `a >= a_b`.
    pub thresholds: Vec<(usize, u32)>,
    #[serde(serialize_with = "ser_ideal")]
    pub ideal: Ideal,
    pub radical: bool,
    /// `xξ` lies in the annihilator.
    pub contains_euler_symbol: bool,
}

fn ser_ideal<S: serde::Serializer>(i: &Ideal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(i.render_gens())
}

const MAX_SHIFT: u32 = 256;

/// Annihilator of `Gr_F M` in `O_0[ξ]` for the filtration generated by
/// `initial`, in degrees `1..=degree`, testing the levels `F^k`, `k <= bound`.
/// It is the monomial ideal generated by the `x^(a_b) ξ^b`.
pub fn graded_annihilator(
    p: &UnivarOperator,
    initial: InitialLattice,
    degree: usize,
    bound: usize,
) -> Result<GradedAnnihilator> {
    p.order().ok_or(Error::ZeroElement("zero operator"))?;
    let mut lv = Levels::new(p, initial)?;
    let thresholds = annihilator_thresholds(&mut lv, degree, bound)?;
    let gens: Vec<MPoly> = thresholds
        .iter()
        .map(|&(b, a)| MPoly::term(vec![a, b as u32], crate::algebra::int(1)))
        .collect();
    let ideal = Ideal::new(vec!["x".into(), "xi".into()], gens).to_groebner(&Budget::default())?;
    let radical = is_radical_squarefree_monomial(&ideal)?;
    let contains_euler_symbol = thresholds.first().is_some_and(|&(_, a)| a <= 1);
    Ok(GradedAnnihilator {
        initial,
        thresholds,
        ideal,
        radical,
        contains_euler_symbol,
    })
}

/// `(b, a_b)` for `1 <= b <= degree`: the least `a` with
/// `x^a ∂^b F^k ⊆ F^(k+b-1)` for all `k <= bound`.
pub(crate) fn annihilator_thresholds(lv: &mut Levels, degree: usize, bound: usize) -> Result<Vec<(usize, u32)>> {
    let x = RatFun::x();
    let mut thresholds = Vec::new();
    for b in 1..=degree {
        let mut worst = 0u32;
        for k in 0..=bound {
            let target = lv.level(k + b - 1).clone();
            for g in lv.level(k).basis() {
                let mut w = g;
                for _ in 0..b {
                    w = lv.d(&w);
                }
                let mut a = 0;
                while !target.contains(&w) {
                    a += 1;
                    if a > MAX_SHIFT {
                        return Err(Error::BudgetExceeded {
                            what: "annihilator threshold search",
                            limit: MAX_SHIFT as usize,
                        });
                    }
                    w = w.iter().map(|e| e * &x).collect();
                }
                worst = worst.max(a);
            }
        }
        thresholds.push((b, worst));
    }
    Ok(thresholds)
}

/// Compares the radicals of the graded annihilators of the two cyclic
/// filtrations (θ-powers and ∂-powers) by radical membership both ways.
pub fn radical_independence(p: &UnivarOperator, degree: usize, bound: usize) -> Result<bool> {
    let budget = Budget::default();
    let a = graded_annihilator(p, InitialLattice::Theta, degree, bound)?.ideal;
    let b = graded_annihilator(p, InitialLattice::Derivatives, degree, bound)?.ideal;
    for (from, to) in [(&a, &b), (&b, &a)] {
        for g in from.gens() {
            if !radical_membership(g, to, &budget)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, UPoly};
    use proptest::prelude::*;

    fn op(cs: Vec<RatFun>) -> UnivarOperator {
        UnivarOperator::new(cs)
    }

    fn euler(l: Rat) -> UnivarOperator {
        op(vec![RatFun::constant(-l), RatFun::x()])
    }

    #[test]
    fn kashiwara_examples() {
        let c = kashiwara_regular_at_zero(&euler(rat(2, 3))).unwrap();
        assert!(c.regular);
        assert_eq!(c.theta_matrix, vec![vec![RatFun::constant(rat(2, 3))]]);
        let p = op(vec![-&RatFun::one(), RatFun::x_pow(2)]);
        let c = kashiwara_regular_at_zero(&p).unwrap();
        assert!(!c.regular);
        assert_eq!(c.theta_matrix, vec![vec![RatFun::x_pow(-1)]]);
        let c = kashiwara_regular_at_zero(&UnivarOperator::d().pow(2)).unwrap();
        assert!(c.regular);
        assert_eq!(c.theta_matrix[0][1], RatFun::zero());
        assert_eq!(c.theta_matrix[1][1], RatFun::one());
    }

    #[test]
    fn equivalence_examples() {
        let r = fuchs_kashiwara_equivalence(&euler(int(1)), &Point::zero()).unwrap();
        assert_eq!(r.verdict, Verdict::Regular);
        let p = op(vec![-&RatFun::x_pow(-2), RatFun::one()]);
        let r = fuchs_kashiwara_equivalence(&p, &Point::zero()).unwrap();
        assert_eq!(r.verdict, Verdict::Irregular);
        let airy = op(vec![-&RatFun::x(), RatFun::zero(), RatFun::one()]);
        let r = fuchs_kashiwara_equivalence(&airy, &Point::Infinity).unwrap();
        assert_eq!(r.verdict, Verdict::Irregular);
    }

    #[test]
    fn goodness_examples() {
        assert!(check_good_filtration(&UnivarOperator::d().pow(2), 6).unwrap().good);
        assert!(check_good_filtration(&euler(rat(1, 2)), 6).unwrap().good);
    }

    #[test]
    fn annihilator_of_regular_and_irregular() {
        let a = graded_annihilator(&euler(rat(1, 2)), InitialLattice::Theta, 3, 5).unwrap();
        assert!(a.contains_euler_symbol);
        assert!(a.radical);
        assert_eq!(a.ideal.render_gens(), vec!["x*xi"]);
        // the trivial connection: ξ itself annihilates
        let a = graded_annihilator(&UnivarOperator::d(), InitialLattice::Theta, 2, 4).unwrap();
        assert_eq!(a.ideal.render_gens(), vec!["xi"]);
        // ∂ - x^-2: x^3 ∂ F^k ⊆ F^k only
        let p = op(vec![-&RatFun::x_pow(-2), RatFun::one()]);
        let a = graded_annihilator(&p, InitialLattice::Theta, 2, 5).unwrap();
        assert!(!a.contains_euler_symbol);
        assert!(!a.radical);
        assert!(radical_independence(&euler(rat(1, 3)), 3, 5).unwrap());
        // x∂ - 1: ∂(u/x) = 0, so F^k stops growing and ξ² kills Gr while ξ does not
        let a = graded_annihilator(&euler(int(1)), InitialLattice::Theta, 2, 4).unwrap();
        assert_eq!(a.thresholds, vec![(1, 1), (2, 0)]);
        assert!(a.contains_euler_symbol && !a.radical);
        assert!(radical_independence(&euler(int(1)), 3, 5).unwrap());
    }

    fn arb_coeff() -> impl Strategy<Value = RatFun> {
        (prop::collection::vec(-3i64..=3, 1..4), 0usize..=3, -1i64..=1).prop_map(|(num, k, s)| {
            let den = &UPoly::monomial(int(1), k) * &UPoly::from_ints(&[1, s]);
            RatFun::new(UPoly::from_ints(&num), den)
        })
    }

    fn arb_op() -> impl Strategy<Value = UnivarOperator> {
        (1usize..=3, prop::collection::vec(arb_coeff(), 3)).prop_map(|(n, cs)| {
            let mut cs: Vec<RatFun> = cs.into_iter().take(n).collect();
            cs.push(RatFun::from_poly(UPoly::from_ints(&[1, 1])));
            UnivarOperator::new(cs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn fuchs_and_kashiwara_agree(p in arb_op()) {
            prop_assert!(fuchs_kashiwara_equivalence(&p, &Point::zero()).is_ok());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn scaling_invariance(p in arb_op(), c in prop_oneof![Just(2i64), Just(-1), Just(3)]) {
            // x = c y, ∂_x = ∂_y / c
            let c = int(c);
            let scaled = UnivarOperator::new(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, b)| b.scale_variable(&c).scale(&num_traits::pow(c.clone(), i).recip()))
                    .collect(),
            );
            prop_assert_eq!(
                kashiwara_regular_at_zero(&p).unwrap().regular,
                kashiwara_regular_at_zero(&scaled).unwrap().regular
            );
        }

        #[test]
        fn euler_annihilator_contains_euler_symbol(l in -3i64..=3, d in 1i64..=3) {
            let lam = rat(l, d);
            let a = graded_annihilator(&euler(lam.clone()), InitialLattice::Theta, 4, 5).unwrap();
            prop_assert!(a.contains_euler_symbol);
            // radical unless D·u saturates, which happens for positive integer exponents
            let saturates = lam.is_integer() && lam > int(0);
            prop_assert_eq!(a.radical, !saturates);
        }
    }
}
