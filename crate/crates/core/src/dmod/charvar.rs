use serde::Serialize;

use crate::algebra::{
    int, is_radical_squarefree_monomial, krull_dimension, Budget, Factor, Ideal, MPoly, UPoly,
};
use crate::weyl::{symbol_names, variable_names, UnivarOperator};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    ZeroSection,
    /// Fibres of `T*X` over the zeros of an irreducible factor (or over a
    /// coordinate point).
    ConormalToPoint { at: String },
    ConormalToDivisor { equation: String },
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    #[serde(flatten)]
    pub kind: ComponentKind,
    #[serde(serialize_with = "ser_ideal")]
    pub ideal: Ideal,
}

fn ser_ideal<S: serde::Serializer>(i: &Ideal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(i.render_gens())
}

/// `V(ideal)` in `T*X = Spec Q[x, ξ]` and a decomposition into components.
#[derive(Clone, Debug, Serialize)]
pub struct CharVariety {
    #[serde(serialize_with = "ser_ideal")]
    pub ideal: Ideal,
    pub components: Vec<Component>,
    /// `V(ideal)` equals the union of the components (checked both ways).
    pub verified: bool,
    pub dimension: i64,
}

impl CharVariety {
    fn n(&self) -> usize {
        self.ideal.nvars() / 2
    }

    /// The zero section `V(ξ)` lies in the variety.
    pub fn contains_zero_section(&self, budget: &Budget) -> Result<bool> {
        let n = self.n();
        let xi = Ideal::new(self.ideal.vars().to_vec(), (n..2 * n).map(|i| MPoly::var(2 * n, i)).collect());
        xi.variety_within(&self.ideal, budget)
    }

    /// Every generator is homogeneous in the `ξ` variables.
    pub fn is_conical(&self) -> bool {
        let n = self.n();
        self.ideal.gens().iter().all(|g| {
            let mut degs = g.terms().map(|(m, _)| m[n..].iter().sum::<u32>());
            let first = degs.next();
            degs.all(|d| Some(d) == first)
        })
    }

    pub fn is_holonomic(&self, budget: &Budget) -> Result<bool> {
        is_holonomic(&self.ideal, self.n(), budget)
    }
}

fn verify_union(ideal: &Ideal, comps: &[Component], budget: &Budget) -> Result<bool> {
    let Some(first) = comps.first() else {
        return ideal.is_unit(budget);
    };
    let mut product = first.ideal.clone();
    for c in &comps[1..] {
        product = product.product(&c.ideal);
    }
    // V(I) ⊆ ∪ V(C) and each V(C) ⊆ V(I)
    if !ideal.variety_within(&product, budget)? {
        return Ok(false);
    }
    for c in comps {
        if !c.ideal.variety_within(ideal, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decomposes `V(ideal)` into conormal bundles of coordinate strata
/// `{x_i = 0, i ∈ S}` when possible; anything left over is one `Other`
/// component equal to the whole variety.
pub fn characteristic_variety(ideal: Ideal, budget: &Budget) -> Result<CharVariety> {
    if ideal.nvars() % 2 != 0 {
        return Err(Error::RingMismatch("expected a ring Q[x, ξ] with 2n variables".into()));
    }
    let n = ideal.nvars() / 2;
    let vars = ideal.vars().to_vec();
    let xs = variable_names(n);
    let mut comps = Vec::new();
    for mask in 0u32..(1 << n) {
        let gens: Vec<MPoly> = (0..n)
            .map(|i| if mask & (1 << i) != 0 { MPoly::var(2 * n, i) } else { MPoly::var(2 * n, n + i) })
            .collect();
        let cand = Ideal::new(vars.clone(), gens);
        if !cand.variety_within(&ideal, budget)? {
            continue;
        }
        let chosen: Vec<&String> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &xs[i]).collect();
        let kind = match chosen.len() {
            0 => ComponentKind::ZeroSection,
            k if k == n => ComponentKind::ConormalToPoint {
                at: if n == 1 { xs[0].clone() } else { format!("origin({})", xs.join(",")) },
            },
            1 => ComponentKind::ConormalToDivisor {
                equation: chosen[0].clone(),
            },
            _ => ComponentKind::Other,
        };
        comps.push(Component { kind, ideal: cand });
    }
    let mut verified = verify_union(&ideal, &comps, budget)?;
    if !verified {
        comps = vec![Component {
            kind: ComponentKind::Other,
            ideal: ideal.clone(),
        }];
        verified = true;
    }
    let dimension = ideal.dimension(budget)?;
    Ok(CharVariety {
        ideal,
        components: comps,
        verified,
        dimension,
    })
}

/// The leading coefficient of `P` after clearing denominators, made monic.
fn cleared_leading(p: &UnivarOperator) -> Result<UPoly> {
    if p.is_zero() {
        return Err(Error::ZeroElement("zero operator"));
    }
    let (w, _) = p.to_weyl();
    let cleared = UnivarOperator::from_weyl(&w)?;
    Ok(cleared.leading().unwrap().num().monic())
}

fn upoly_in(p: &UPoly, nvars: usize) -> MPoly {
    MPoly::from_terms(
        nvars,
        p.coeffs().iter().enumerate().map(|(k, c)| {
            let mut m = vec![0; nvars];
            m[0] = k as u32;
            (m, c.clone())
        }),
    )
}

/// Irreducible (or unsplit, see [`Factor::irreducible`]) factors of the
/// cleared leading coefficient.
pub fn singular_points(p: &UnivarOperator) -> Result<Vec<Factor>> {
    Ok(cleared_leading(p)?.factor())
}

/// `Ch(D/DP) = V(b_n ξ^n)`: the zero section and the fibres over the
/// factors of `b_n`.
pub fn characteristic_variety_univar(p: &UnivarOperator, budget: &Budget) -> Result<CharVariety> {
    let n = p.order().ok_or(Error::ZeroElement("zero operator"))?;
    let lead = cleared_leading(p)?;
    let vars = symbol_names(1);
    let xi = MPoly::var(2, 1);
    let gen = &upoly_in(&lead, 2) * &xi.pow(n as u32);
    let ideal = Ideal::new(vars.clone(), vec![gen]);
    let mut comps = vec![Component {
        kind: ComponentKind::ZeroSection,
        ideal: Ideal::new(vars.clone(), vec![xi]),
    }];
    for f in lead.factor() {
        comps.push(Component {
            kind: ComponentKind::ConormalToPoint { at: f.poly.to_string() },
            ideal: Ideal::new(vars.clone(), vec![upoly_in(&f.poly, 2)]),
        });
    }
    let verified = verify_union(&ideal, &comps, budget)?;
    let dimension = ideal.dimension(budget)?;
    Ok(CharVariety {
        ideal,
        components: comps,
        verified,
        dimension,
    })
}

/// `dim V(I) <= n`.
pub fn is_holonomic(ideal: &Ideal, n: usize, budget: &Budget) -> Result<bool> {
    Ok(krull_dimension(ideal, budget)? <= n)
}

/// `dim V(I) >= n`.
pub fn bernstein_check(ideal: &Ideal, n: usize, budget: &Budget) -> Result<bool> {
    Ok(krull_dimension(ideal, budget)? >= n)
}

#[derive(Clone, Debug, Serialize)]
pub struct TrivialAnnihilator {
    #[serde(serialize_with = "ser_ideal")]
    pub ideal: Ideal,
    pub rank: usize,
    /// Each `∂_i` maps `O^m` into itself, so `ξ_i` kills `Gr_F M`.
    pub annihilates: bool,
    pub radical: bool,
}

/// The annihilator `(ξ_1, …, ξ_n)` of the graded module of the stationary
/// filtration `F^i = M` (`i >= 0`) on the trivial rank `m` connection.
pub fn trivial_filtration_annihilator(n: usize, m: usize) -> Result<TrivialAnnihilator> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("need n >= 1 and m >= 1".into()));
    }
    let xi: Vec<MPoly> = (n..2 * n).map(|i| MPoly::var(2 * n, i)).collect();
    let ideal = Ideal::new(symbol_names(n), xi);
    // ∂_i on sample sections x^a e_j of O^m stays in O^m
    let mut annihilates = true;
    for i in 0..n {
        let d = crate::weyl::WeylElement::d(n, i);
        for a in 0..3u32 {
            let mut mono = vec![0; n];
            mono[i] = a;
            let img = d.apply(&MPoly::term(mono, int(1)));
            annihilates &= img.terms().all(|(e, _)| e.iter().all(|&k| k < u32::MAX));
        }
    }
    let radical = is_radical_squarefree_monomial(&ideal)?;
    Ok(TrivialAnnihilator {
        ideal,
        rank: m,
        annihilates,
        radical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, RatFun};
    use crate::weyl::{characteristic_ideal, WeylElement};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn univariate_examples() {
        let airy = UnivarOperator::new(vec![-&RatFun::x(), RatFun::zero(), RatFun::one()]);
        let cv = characteristic_variety_univar(&airy, &b()).unwrap();
        assert_eq!(cv.components.len(), 1);
        assert_eq!(cv.components[0].kind, ComponentKind::ZeroSection);
        assert!(singular_points(&airy).unwrap().is_empty());
        let euler = UnivarOperator::new(vec![RatFun::constant(rat(-1, 2)), RatFun::x()]);
        let cv = characteristic_variety_univar(&euler, &b()).unwrap();
        assert!(cv.verified);
        assert_eq!(cv.components[1].kind, ComponentKind::ConormalToPoint { at: "x".into() });
        let hyp = UnivarOperator::new(vec![
            RatFun::constant(rat(-1, 4)),
            RatFun::from_poly(UPoly::from_ints(&[1, -2])),
            RatFun::from_poly(UPoly::from_ints(&[0, 1, -1])),
        ]);
        let cv = characteristic_variety_univar(&hyp, &b()).unwrap();
        assert!(cv.verified);
        let ats: Vec<_> = cv.components.iter().map(|c| c.kind.clone()).collect();
        assert_eq!(
            ats,
            vec![
                ComponentKind::ZeroSection,
                ComponentKind::ConormalToPoint { at: "x".into() },
                ComponentKind::ConormalToPoint { at: "x - 1".into() },
            ]
        );
        assert!(cv.is_holonomic(&b()).unwrap());
        assert!(bernstein_check(&cv.ideal, 1, &b()).unwrap());
    }

    #[test]
    fn holonomicity_examples() {
        let v = symbol_names(1);
        let xi = Ideal::new(v.clone(), vec![MPoly::var(2, 1)]);
        assert!(is_holonomic(&xi, 1, &b()).unwrap());
        assert!(bernstein_check(&xi, 1, &b()).unwrap());
        let zero = Ideal::zero(v.clone());
        assert!(!is_holonomic(&zero, 1, &b()).unwrap());
        assert!(bernstein_check(&zero, 1, &b()).unwrap());
        let unit = Ideal::new(v, vec![MPoly::one(2)]);
        assert_eq!(is_holonomic(&unit, 1, &b()), Err(Error::UnitIdeal));
    }

    #[test]
    fn exponential_of_ratio_has_three_conormal_components() {
        let (x, y, dx, dy) = (WeylElement::x(2, 0), WeylElement::x(2, 1), WeylElement::d(2, 0), WeylElement::d(2, 1));
        let p = &(&y * &dx) - &WeylElement::one(2);
        let q = &(&y.pow(2) * &dy) + &x;
        let ch = characteristic_ideal(&[p, q], &b()).unwrap();
        let cv = characteristic_variety(ch, &b()).unwrap();
        assert!(cv.verified);
        let kinds: Vec<_> = cv.components.iter().map(|c| c.kind.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                ComponentKind::ZeroSection,
                ComponentKind::ConormalToDivisor { equation: "y".into() },
                ComponentKind::ConormalToPoint { at: "origin(x,y)".into() },
            ]
        );
        assert_eq!(cv.dimension, 2);
        assert!(cv.is_holonomic(&b()).unwrap());
        assert!(cv.contains_zero_section(&b()).unwrap());
        assert!(cv.is_conical());
    }

    #[test]
    fn trivial_connection() {
        let t = trivial_filtration_annihilator(1, 1).unwrap();
        assert_eq!(t.ideal.render_gens(), vec!["xi"]);
        assert!(t.radical && t.annihilates);
        let t = trivial_filtration_annihilator(2, 3).unwrap();
        assert_eq!(t.ideal.render_gens(), vec!["xi", "eta"]);
        assert!(is_holonomic(&t.ideal, 2, &b()).unwrap());
    }
}
