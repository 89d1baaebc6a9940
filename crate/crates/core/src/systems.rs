//! Connection systems `∂v = v' + A v` on opens of the line: reduction to a
//! scalar operator by a cyclic vector, saturation of the standard lattice
//! under `θ = (x - c)∂`, and per-point regularity reports.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::lattice::{mat_vec, Vector};
use crate::algebra::{int, LocalLattice, Point, Rat, RatFun, UPoly, Valuation};
use crate::dmod::companion_connection;
use crate::regularity::{fuchs_regular_at, regular_on_projective_line, GlobalVerdict, UntestedFactor, Verdict};
use crate::weyl::UnivarOperator;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSystem {
    a: Vec<Vec<RatFun>>,
}

impl ConnectionSystem {
    pub fn new(a: Vec<Vec<RatFun>>) -> Result<Self> {
        let m = a.len();
        if m == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        if a.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidInput("connection matrix must be square".into()));
        }
        Ok(ConnectionSystem { a })
    }

    /// The system of `D/DP` in the basis `u, ∂u, …`.
    pub fn companion(p: &UnivarOperator) -> Result<Self> {
        Self::new(companion_connection(p)?)
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<RatFun>] {
        &self.a
    }

    /// `∂v = v' + A v`.
    pub fn apply(&self, v: &[RatFun]) -> Vector {
        let av = mat_vec(&self.a, v);
        v.iter().zip(av).map(|(x, y)| &x.derivative() + &y).collect()
    }

    /// `A(x + c)`: moves `c` to the origin.
    pub fn translate(&self, c: &Rat) -> Self {
        ConnectionSystem {
            a: self.a.iter().map(|row| row.iter().map(|e| e.translate(c)).collect()).collect(),
        }
    }

    /// The chart `t = 1/x`: `A_t(t) = -t^-2 A(1/t)`.
    pub fn at_infinity(&self) -> Self {
        let f = -&RatFun::x_pow(-2);
        ConnectionSystem {
            a: self
                .a
                .iter()
                .map(|row| row.iter().map(|e| &f * &e.invert_variable()).collect())
                .collect(),
        }
    }

    /// The system at `point` moved to the origin.
    pub fn localize(&self, point: &Point) -> Self {
        match point {
            Point::Finite(c) => self.translate(c),
            Point::Infinity => self.at_infinity(),
        }
    }

    /// Gauge change by a constant invertible matrix `g`: `v = g w`.
    pub fn gauge_constant(&self, g: &[Vec<Rat>]) -> Result<Self> {
        let m = self.rank();
        let gm: Vec<Vec<RatFun>> = g
            .iter()
            .map(|row| row.iter().map(|c| RatFun::constant(c.clone())).collect())
            .collect();
        if gm.len() != m || gm.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("gauge matrix has the wrong size".into()));
        }
        let inv = invert(&gm).ok_or_else(|| Error::InvalidInput("gauge matrix is singular".into()))?;
        Self::new(mat_mul(&inv, &mat_mul(&self.a, &gm)))
    }

    /// Largest pole order at 0 among the entries.
    pub fn pole_order_at_zero(&self) -> i64 {
        let zero = Rat::zero();
        self.a
            .iter()
            .flatten()
            .filter_map(|e| e.ord_at(&zero).finite())
            .map(|k| (-k).max(0))
            .max()
            .unwrap_or(0)
    }

    /// Factors of the common denominator: rational poles and the rest.
    pub fn poles(&self) -> (Vec<Rat>, Vec<UPoly>) {
        let mut den = UPoly::one();
        for e in self.a.iter().flatten() {
            let g = den.gcd(e.den());
            den = (&den * e.den()).exact_div(&g);
        }
        let mut roots = Vec::new();
        let mut rest = Vec::new();
        for f in den.factor() {
            match f.root {
                Some(r) => roots.push(r),
                None => rest.push(f.poly),
            }
        }
        roots.sort();
        (roots, rest)
    }

    pub fn render(&self) -> Vec<Vec<String>> {
        self.a.iter().map(|row| row.iter().map(|e| e.render("x")).collect()).collect()
    }
}

impl Serialize for ConnectionSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.render().serialize(s)
    }
}

fn mat_mul(a: &[Vec<RatFun>], b: &[Vec<RatFun>]) -> Vec<Vec<RatFun>> {
    let m = a.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).fold(RatFun::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

/// Gauss-Jordan over `Q(x)` on `[m | rhs]`; `None` if `m` is singular.
fn gauss(m: &[Vec<RatFun>], rhs: &[Vec<RatFun>]) -> Option<Vec<Vec<RatFun>>> {
    let n = m.len();
    let k = rhs.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<RatFun>> = m
        .iter()
        .zip(rhs)
        .map(|(r, s)| r.iter().chain(s).cloned().collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(p, col);
        let inv = aug[col][col].inv();
        aug[col] = aug[col].iter().map(|e| e * &inv).collect();
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..n + k {
                    let t = &f * &aug[col][c];
                    aug[r][c] = &aug[r][c] - &t;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn invert(m: &[Vec<RatFun>]) -> Option<Vec<Vec<RatFun>>> {
    let n = m.len();
    let id: Vec<Vec<RatFun>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { RatFun::one() } else { RatFun::zero() }).collect())
        .collect();
    gauss(m, &id)
}

fn det(m: &[Vec<RatFun>]) -> RatFun {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = RatFun::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return RatFun::zero();
        };
        if p != col {
            a.swap(p, col);
            acc = -&acc;
        }
        acc = &acc * &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicVector {
    #[serde(serialize_with = "ser_op")]
    pub operator: UnivarOperator,
    /// The cyclic vector `v` in the frame of the system.
    #[serde(serialize_with = "ser_vec")]
    pub vector: Vector,
    /// Rows `v, ∂v, …, ∂^(m-1) v`.
    #[serde(serialize_with = "ser_mat")]
    pub basis: Vec<Vector>,
    #[serde(serialize_with = "ser_rf")]
    pub determinant: RatFun,
}

fn ser_op<S: serde::Serializer>(p: &UnivarOperator, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_rf<S: serde::Serializer>(f: &RatFun, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.render("x"))
}

fn ser_vec<S: serde::Serializer>(v: &Vector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.render("x")))
}

fn ser_mat<S: serde::Serializer>(m: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|r| r.iter().map(|e| e.render("x")).collect::<Vec<_>>()))
}

/// Exponents `0..=GRID` per coordinate in the candidate `Σ x^(k_i) e_i`.
const GRID: u32 = 4;

fn candidates(m: usize) -> impl Iterator<Item = Vector> {
    let unit = move |i: usize| -> Vector {
        (0..m).map(|k| if k == i { RatFun::one() } else { RatFun::zero() }).collect()
    };
    let basis = (0..m).map(unit);
    let total = (GRID as usize + 1).pow(m as u32);
    let grid = (0..total).map(move |mut code| {
        (0..m)
            .map(|_| {
                let k = (code % (GRID as usize + 1)) as i64;
                code /= GRID as usize + 1;
                RatFun::x_pow(k)
            })
            .collect()
    });
    basis.chain(grid)
}

/// Deterministic cyclic vector: the standard basis first, then
/// `Σ x^(k_i) e_i` over the grid in base-`GRID + 1` order. The operator is
/// `P = ∂^m - Σ q_k ∂^k` where `∂^m v = Σ q_k ∂^k v`.
pub fn cyclic_vector(sys: &ConnectionSystem) -> Result<CyclicVector> {
    let m = sys.rank();
    for v in candidates(m) {
        let mut rows = vec![v.clone()];
        for _ in 1..m {
            rows.push(sys.apply(rows.last().unwrap()));
        }
        let d = det(&rows);
        if d.is_zero() {
            continue;
        }
        let top = sys.apply(rows.last().unwrap());
        // solve Σ q_k rows[k] = top, i.e. rowsᵀ q = top
        let t: Vec<Vec<RatFun>> = (0..m).map(|i| (0..m).map(|k| rows[k][i].clone()).collect()).collect();
        let rhs: Vec<Vec<RatFun>> = top.iter().map(|e| vec![e.clone()]).collect();
        let q = gauss(&t, &rhs).expect("nonzero determinant");
        let mut coeffs: Vec<RatFun> = q.into_iter().map(|r| -&r[0]).collect();
        coeffs.push(RatFun::one());
        return Ok(CyclicVector {
            operator: UnivarOperator::new(coeffs),
            vector: v,
            basis: rows,
            determinant: d,
        });
    }
    Err(Error::CyclicVectorExhausted { rank: m })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Saturation {
    Stabilized {
        /// Least `k` with `L_(k+1) = L_k`.
        step: usize,
        /// Basis of the stable lattice in the local coordinate at the point.
        #[serde(serialize_with = "ser_mat")]
        basis: Vec<Vector>,
        /// `θ` applied to the basis stays inside.
        idempotent: bool,
    },
    ExceededBound {
        max_steps: usize,
    },
}

impl Saturation {
    pub fn is_stabilized(&self) -> bool {
        matches!(self, Saturation::Stabilized { .. })
    }
}

/// Default step bound: `m (s + 1) + 4`, `s` the pole order of `A` at the point.
pub fn default_max_steps(sys: &ConnectionSystem, point: &Point) -> usize {
    let s = sys.localize(point).pole_order_at_zero() as usize;
    sys.rank() * (s + 1) + 4
}

/// Coefficients of `x^-j`, `j >= 1`, keyed by `(component, j)`.
type Polar = BTreeMap<(usize, usize), Rat>;

fn polar_coeffs(v: &[RatFun]) -> Polar {
    let mut out = Polar::new();
    for (i, e) in v.iter().enumerate() {
        let p = e.principal_part();
        if p.is_zero() {
            continue;
        }
        let k = p.den().degree().unwrap();
        for (d, c) in p.num().coeffs().iter().enumerate() {
            if !c.is_zero() && d < k {
                out.insert((i, k - d), c.clone());
            }
        }
    }
    out
}

fn polar_vector(p: &Polar, m: usize) -> Vector {
    let mut v = vec![RatFun::zero(); m];
    for (&(i, j), c) in p {
        v[i] = &v[i] + &(&RatFun::constant(c.clone()) * &RatFun::x_pow(-(j as i64)));
    }
    v
}

/// A `Q`-subspace of polar parts in echelon form, pivot = largest key.
#[derive(Default)]
struct PolarSpace {
    rows: BTreeMap<(usize, usize), Polar>,
}

impl PolarSpace {
    fn reduce(&self, v: &Polar) -> Polar {
        let mut v = v.clone();
        // rows only touch keys at or below their pivot, so one descending pass suffices
        let mut cursor = v.keys().next_back().copied();
        while let Some(key) = cursor {
            if let (Some(row), Some(c)) = (self.rows.get(&key), v.get(&key).cloned()) {
                for (k, r) in row {
                    let e = v.entry(*k).or_insert_with(Rat::zero);
                    *e -= &c * r;
                    if e.is_zero() {
                        v.remove(k);
                    }
                }
            }
            cursor = v.range(..key).next_back().map(|(k, _)| *k);
        }
        v
    }

    fn contains(&self, v: &Polar) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns the reduced new row if the space grew.
    fn insert(&mut self, v: &Polar) -> Option<Polar> {
        let r = self.reduce(v);
        let (&key, lead) = r.iter().next_back()?;
        let inv = Rat::from_integer(1.into()) / lead;
        let r: Polar = r.iter().map(|(k, c)| (*k, c * &inv)).collect();
        self.rows.insert(key, r.clone());
        Some(r)
    }
}

fn times_x(p: &Polar) -> Polar {
    p.iter()
        .filter(|((_, j), _)| *j > 1)
        .map(|(&(i, j), c)| ((i, j - 1), c.clone()))
        .collect()
}

/// `L_0` standard, `L_(k+1) = L_k + θ L_k` with `θ = t∂_t` in the local
/// coordinate `t` at `point`. Every `L_k` contains `L_0 = O^m`, so `L_k` is
/// recorded by the `x`-stable space of principal parts `L_k / O^m`.
/// Running out of steps is not a verdict.
pub fn saturate_lattice(sys: &ConnectionSystem, point: &Point, max_steps: Option<usize>) -> Saturation {
    let max_steps = max_steps.unwrap_or_else(|| default_max_steps(sys, point));
    let local = sys.localize(point);
    let m = sys.rank();
    let x = RatFun::x();
    let theta = |v: &Vector| -> Polar { polar_coeffs(&local.apply(v).iter().map(|e| e * &x).collect::<Vec<_>>()) };
    let mut space = PolarSpace::default();
    let mut frontier: Vec<Vector> = LocalLattice::standard(int(0), m).basis();
    for step in 0..=max_steps {
        let mut added = Vec::new();
        for g in &frontier {
            let mut p = theta(g);
            while !p.is_empty() {
                if space.insert(&p).is_none() {
                    break;
                }
                added.push(polar_vector(&p, m));
                p = times_x(&p);
            }
        }
        if added.is_empty() {
            let mut basis = LocalLattice::standard(int(0), m).basis();
            basis.extend(space.rows.values().map(|r| polar_vector(r, m)));
            let idempotent = basis.iter().all(|b| space.contains(&theta(b)));
            return Saturation::Stabilized {
                step,
                basis,
                idempotent,
            };
        }
        frontier = added;
    }
    Saturation::ExceededBound { max_steps }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub point: Point,
    /// Fuchs verdict for the cyclic-vector operator.
    pub fuchs: Verdict,
    pub saturation: Saturation,
    /// A `θ`-stable coherent extension exists near the point; `None` means
    /// saturation gave no answer within the bound.
    pub coherent_extension: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub system: ConnectionSystem,
    pub cyclic_vector: CyclicVector,
    pub points: Vec<PointReport>,
    pub untested: Vec<UntestedFactor>,
    pub verdict: GlobalVerdict,
}

/// Fuchs test on the cyclic-vector operator and lattice saturation at every
/// rational pole of `A`, every rational singular point of the operator and
/// at infinity. A stabilized lattice at a Fuchs-irregular point is a
/// contradiction.
pub fn regular_system_report(sys: &ConnectionSystem) -> Result<SystemReport> {
    let cv = cyclic_vector(sys)?;
    let (roots, rest) = sys.poles();
    let op_report = regular_on_projective_line(&cv.operator)?;
    let mut points: Vec<Point> = roots.into_iter().map(Point::Finite).collect();
    for p in &op_report.singular_points {
        if !points.contains(p) {
            points.push(p.clone());
        }
    }
    points.sort_by(|a, b| match (a, b) {
        (Point::Finite(x), Point::Finite(y)) => x.cmp(y),
        (Point::Finite(_), Point::Infinity) => std::cmp::Ordering::Less,
        (Point::Infinity, Point::Finite(_)) => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    });
    let mut untested = op_report.untested.clone();
    for f in rest {
        let factor = f.to_string();
        if !untested.iter().any(|u| u.factor == factor) {
            untested.push(UntestedFactor {
                factor,
                reason: "requires extension field",
            });
        }
    }
    let mut reports = Vec::new();
    for pt in points {
        let fuchs = fuchs_regular_at(&cv.operator, &pt)?.verdict;
        let saturation = saturate_lattice(sys, &pt, None);
        if saturation.is_stabilized() && !fuchs.is_regular() {
            return Err(Error::Contradiction(format!(
                "lattice stabilized at {pt} but the operator {} is Fuchs-irregular there",
                cv.operator
            )));
        }
        let coherent_extension = saturation.is_stabilized().then_some(true);
        reports.push(PointReport {
            point: pt,
            fuchs,
            saturation,
            coherent_extension,
        });
    }
    let verdict = if reports.iter().any(|r| !r.fuchs.is_regular()) {
        GlobalVerdict::Irregular
    } else if !untested.is_empty() {
        GlobalVerdict::RegularOverTestedPoints
    } else {
        GlobalVerdict::Regular
    };
    Ok(SystemReport {
        system: sys.clone(),
        cyclic_vector: cv,
        points: reports,
        untested,
        verdict,
    })
}

/// Ord of an entry at 0, for callers rendering orders.
pub fn entry_order(e: &RatFun) -> Valuation {
    e.ord_at(&Rat::zero())
}
