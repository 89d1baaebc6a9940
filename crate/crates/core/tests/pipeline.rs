use dreg_core::algebra::Budget;
use dreg_core::corpus::CORPUS;
use dreg_core::dmod::{characteristic_variety, fuchs_kashiwara_equivalence};
use dreg_core::parse::{parse_chart, parse_point, parse_system, parse_univar, parse_weyl};
use dreg_core::polelattice::theorem_forward_filtration;
use dreg_core::regularity::{regular_on_projective_line, GlobalVerdict};
use dreg_core::systems::{regular_system_report, saturate_lattice, ConnectionSystem, Saturation};
use dreg_core::weyl::characteristic_ideal;

#[test]
fn operator_and_companion_agree_on_every_corpus_entry() {
    for e in CORPUS {
        let p = e.operator();
        let line = regular_on_projective_line(&p).unwrap();
        let sys = ConnectionSystem::companion(&p).unwrap();
        let report = regular_system_report(&sys).unwrap();
        assert_eq!(line.verdict, e.global, "{}", e.name);
        assert_eq!(report.verdict, e.global, "{}", e.name);
    }
}

#[test]
fn text_to_verdicts() {
    let hyp = parse_univar("x*(1 - x)*d^2 + (1 - 2*x)*d - 1/4").unwrap();
    for pt in ["0", "1", "inf"].map(|s| parse_point(s).unwrap()) {
        assert!(fuchs_kashiwara_equivalence(&hyp, &pt).unwrap().verdict.is_regular());
    }
    assert_eq!(regular_on_projective_line(&hyp).unwrap().verdict, GlobalVerdict::Regular);

    let airy = parse_system("rank 2\n0 ; 1\nx ; 0\n").unwrap();
    assert!(matches!(saturate_lattice(&airy, &parse_point("0").unwrap(), None), Saturation::Stabilized { .. }));
    assert!(!matches!(saturate_lattice(&airy, &parse_point("inf").unwrap(), Some(8)), Saturation::Stabilized { .. }));
}

#[test]
fn exponential_module_has_three_components() {
    let gens = parse_weyl("y*dx - 1 ; y^2*dy + x", 2).unwrap();
    let budget = Budget::default();
    let cv = characteristic_variety(characteristic_ideal(&gens, &budget).unwrap(), &budget).unwrap();
    assert_eq!(cv.components.len(), 3);
    assert_eq!(cv.dimension, 2);
}

#[test]
fn chart_file_gives_forward_certificate() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/data/log_surface.chart")).unwrap();
    let r = theorem_forward_filtration(&parse_chart(&text).unwrap(), 3).unwrap();
    assert!(r.stable && r.radical && r.annihilator_is_theta, "{:?}", r.failures);
}
