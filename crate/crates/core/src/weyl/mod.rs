//! The Weyl algebra `A_n` over `Q` in normal order (all `x` left of all `∂`),
//! its order filtration and principal symbols, univariate operators with
//! rational-function coefficients, Euler (`θ = x∂`) forms, chart changes on
//! the projective line, and a left Gröbner engine for characteristic ideals.

mod element;
mod groebner;
mod theta;
mod univar;

pub use element::{symbol_names, variable_names, weyl_mul, WeylElement};
pub use groebner::{characteristic_ideal, verify_groebner, weyl_groebner, weyl_normal_form};
pub use theta::{from_theta_form, theta_expansion, to_theta_form, ThetaOperator};
pub use univar::{chart_infinity, chart_infinity_cleared, chart_translate, UnivarOperator};
