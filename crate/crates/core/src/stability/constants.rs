use serde::{Deserialize, Serialize};

use crate::margin::Margin;
use crate::model::GameParameters;

/// Entries of the first-return matrices of the three-node cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub delta_t: f64,
    pub alpha_t: f64,
    pub beta_t: f64,
    pub gamma_t: f64,
    pub theta_t: f64,
    pub mu_t: f64,
    pub nu_t: f64,
}

/// The individual terms of each constant, so that sign decisions can be made
/// relative to their magnitude.
#[derive(Debug, Clone, Copy)]
pub struct ConstantTerms {
    pub delta_minus_one: [f64; 2],
    pub alpha_t: [f64; 3],
    pub beta_t: [f64; 3],
    pub gamma_t: [f64; 3],
    pub theta_t: [f64; 3],
    pub mu_t: [f64; 3],
    pub nu_t: [f64; 3],
}

pub fn constant_terms(p: &GameParameters) -> ConstantTerms {
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let ea2 = ea * ea;
    ConstantTerms {
        delta_minus_one: [ca * ca * cb / (ea2 * eb), -1.0],
        alpha_t: [cb * cb / ea2, -ca * cb / (eb * ea), -eb / ea],
        beta_t: [cb * cb * ca / (ea2 * eb), -eb * cb / ea2, ca / ea],
        gamma_t: [ca.powi(3) / (ea2 * eb), cb * ca / (eb * ea), -eb / ea],
        theta_t: [-ca * ca / ea2, cb / ea, -ca / eb],
        mu_t: [cb * cb * ca / (ea2 * eb), -ca / ea, -ea / eb],
        nu_t: [-cb * ca / ea2, ca * ca / (ea * eb), cb / eb],
    }
}

pub fn derived_constants(p: &GameParameters) -> DerivedConstants {
    let t = constant_terms(p);
    let s = |x: [f64; 3]| x.iter().sum::<f64>();
    DerivedConstants {
        delta_t: t.delta_minus_one[0],
        alpha_t: s(t.alpha_t),
        beta_t: s(t.beta_t),
        gamma_t: s(t.gamma_t),
        theta_t: s(t.theta_t),
        mu_t: s(t.mu_t),
        nu_t: s(t.nu_t),
    }
}

/// Sign margins of the constants (and of `delta_t - 1`).
#[derive(Debug, Clone, Copy)]
pub struct ConstantMargins {
    pub delta_minus_one: Margin,
    pub alpha_t: Margin,
    pub beta_t: Margin,
    pub gamma_t: Margin,
    pub theta_t: Margin,
    pub mu_t: Margin,
    pub nu_t: Margin,
}

pub fn constant_margins(p: &GameParameters) -> ConstantMargins {
    let t = constant_terms(p);
    ConstantMargins {
        delta_minus_one: Margin::sum(&t.delta_minus_one),
        alpha_t: Margin::sum(&t.alpha_t),
        beta_t: Margin::sum(&t.beta_t),
        gamma_t: Margin::sum(&t.gamma_t),
        theta_t: Margin::sum(&t.theta_t),
        mu_t: Margin::sum(&t.mu_t),
        nu_t: Margin::sum(&t.nu_t),
    }
}

/// The six linear relations tying the constants together, as
/// `(name, lhs, rhs)`.
pub fn constant_identities(p: &GameParameters) -> Vec<(&'static str, f64, f64)> {
    let k = derived_constants(p);
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let d1 = k.delta_t - 1.0;
    vec![
        ("nu-from-beta", cb / eb * d1 + k.nu_t, ca / eb * k.beta_t),
        ("alpha-from-theta", cb / ea * k.theta_t + eb / ea * d1, k.alpha_t),
        ("gamma-from-beta", ca / ea * d1 + k.beta_t, cb / ea * k.gamma_t),
        ("gamma-from-nu", ca / ea * k.nu_t + eb / ea * d1, k.gamma_t),
        ("mu-from-theta", cb / ea * d1 + k.theta_t, ca / ea * k.mu_t),
        ("mu-from-alpha", ca / eb * k.alpha_t + ea / eb * d1, k.mu_t),
    ]
}
