//! The module side: `D/DP` with its cyclic good filtration, the graded
//! annihilator test, goodness checks and characteristic varieties.

mod charvar;
mod cyclic;

pub use charvar::{
    bernstein_check, characteristic_variety, characteristic_variety_univar, is_holonomic, singular_points,
    trivial_filtration_annihilator, CharVariety, Component, ComponentKind, TrivialAnnihilator,
};
pub use cyclic::{
    check_good_filtration, companion_connection, fuchs_kashiwara_equivalence, graded_annihilator,
    kashiwara_regular_at, kashiwara_regular_at_zero, radical_independence, CyclicFiltration, EquivalenceReport,
    GoodnessReport, GradedAnnihilator, InitialLattice, KashiwaraCertificate,
};
pub(crate) use cyclic::{annihilator_thresholds, Levels};
