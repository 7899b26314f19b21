use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{
    constant_margins, named, stability_indices_closed_form_tol, stability_indices_generic_tol, Classification,
    StabilityReport,
};
use crate::error::{Error, Result};
use crate::margin::{Margin, Tri, DEFAULT_TOL};
use crate::model::{check_network_asymptotic_stability_tol, GameParameters, NamedMargin, NetworkStability};
use crate::network::{CycleKind, CycleSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeClassification {
    pub classes: BTreeMap<CycleKind, Classification>,
    pub fired_conditions: BTreeMap<CycleKind, Vec<NamedMargin>>,
}

impl RegimeClassification {
    pub fn get(&self, kind: CycleKind) -> Classification {
        self.classes[&kind]
    }
}

pub fn classify_in_as_regime(params: &GameParameters) -> Result<RegimeClassification> {
    classify_in_as_regime_tol(params, DEFAULT_TOL)
}

fn decide(unstable: Tri, stable: Tri, stable_class: Classification) -> Classification {
    if unstable.is_yes() {
        Classification::CompletelyUnstable
    } else if stable.is_yes() {
        stable_class
    } else {
        Classification::Marginal
    }
}

/// Classification of all four cycles by the inequalities that hold when the
/// network is known to be asymptotically stable.
pub fn classify_in_as_regime_tol(p: &GameParameters, tol: f64) -> Result<RegimeClassification> {
    if !p.as_regime_tri(tol).is_yes() {
        return Err(Error::Precondition(format!(
            "parameters {p:?} are outside 0 < e_B < e_A < min{{c_A,c_B}}, e_A <= 1"
        )));
    }
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let mut classes = BTreeMap::new();
    let mut fired = BTreeMap::new();

    let g = Margin::gt(ca * ea, cb * eb);
    let g2 = Margin::sum(&[ca * ea, -cb * eb, -ea * eb]);
    let rtop = match g.positive(tol) {
        Tri::No => Classification::CompletelyUnstable,
        Tri::Marginal => Classification::Marginal,
        Tri::Yes => match g2.positive(tol) {
            Tri::Yes => Classification::Eas,
            Tri::No => Classification::Fas,
            Tri::Marginal => Classification::Marginal,
        },
    };
    classes.insert(CycleKind::RockToPaper, rtop);
    fired.insert(
        CycleKind::RockToPaper,
        vec![
            named("c_A e_A > c_B e_B", g, g.positive(tol)),
            named("c_A e_A - c_B e_B > e_A e_B", g2, g2.positive(tol)),
        ],
    );

    let cube = Margin::gt(ca.powi(3) * eb, cb * ea.powi(3));
    let star = decide(
        g.positive(tol).or(cube.negative(tol)),
        g.negative(tol).and(cube.positive(tol)),
        Classification::Fas,
    );
    classes.insert(CycleKind::Star, star);
    fired.insert(
        CycleKind::Star,
        vec![
            named("c_B e_B > c_A e_A", g.neg(), g.negative(tol)),
            named("c_A^3 e_B > c_B e_A^3", cube, cube.positive(tol)),
        ],
    );

    let m = constant_margins(p);
    let rsp = decide(
        Tri::any([
            m.alpha_t.negative(tol),
            m.theta_t.negative(tol),
            m.mu_t.negative(tol),
            m.nu_t.negative(tol),
        ]),
        m.theta_t.positive(tol).and(m.nu_t.positive(tol)),
        Classification::Fas,
    );
    classes.insert(CycleKind::Rsp, rsp);
    fired.insert(
        CycleKind::Rsp,
        vec![
            named("alpha_T > 0", m.alpha_t, m.alpha_t.positive(tol)),
            named("theta_T > 0", m.theta_t, m.theta_t.positive(tol)),
            named("mu_T > 0", m.mu_t, m.mu_t.positive(tol)),
            named("nu_T > 0", m.nu_t, m.nu_t.positive(tol)),
        ],
    );

    let order = Margin::gt(ca, cb);
    let four_cu = order.positive(tol).or(cube.negative(tol));
    let four = if four_cu.is_yes() {
        Classification::CompletelyUnstable
    } else {
        let generic = stability_indices_generic_tol(&CycleSpec::canonical(CycleKind::FourNode), p, tol);
        if four_cu == Tri::Marginal && generic.classification != Classification::CompletelyUnstable {
            Classification::Marginal
        } else {
            generic.classification
        }
    };
    classes.insert(CycleKind::FourNode, four);
    fired.insert(
        CycleKind::FourNode,
        vec![
            named("c_A > c_B", order, order.positive(tol)),
            named("c_A^3 e_B < c_B e_A^3", cube.neg(), cube.negative(tol)),
        ],
    );

    Ok(RegimeClassification {
        classes,
        fired_conditions: fired,
    })
}

/// Everything known about one cycle at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleVerdict {
    pub generic: StabilityReport,
    pub closed_form: StabilityReport,
    /// The regime table's verdict, `Unsupported` outside the regime.
    pub regime: Classification,
    /// Generic and closed-form verdicts agree up to marginal or unsupported
    /// outcomes.
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub params: GameParameters,
    pub as_regime: Tri,
    pub network: NetworkStability,
    pub cycles: BTreeMap<CycleKind, CycleVerdict>,
}

impl PointReport {
    pub fn all_agree(&self) -> bool {
        self.cycles.values().all(|c| c.agree)
    }

    pub fn generic(&self, kind: CycleKind) -> Classification {
        self.cycles[&kind].generic.classification
    }
}

pub fn classify_point(params: &GameParameters) -> PointReport {
    classify_point_tol(params, DEFAULT_TOL)
}

pub fn classify_point_tol(p: &GameParameters, tol: f64) -> PointReport {
    let regime = classify_in_as_regime_tol(p, tol).ok();
    let cycles = CycleKind::ALL
        .iter()
        .map(|&kind| {
            let spec = CycleSpec::canonical(kind);
            let generic = stability_indices_generic_tol(&spec, p, tol);
            let closed_form = stability_indices_closed_form_tol(&spec, p, tol);
            let regime = regime
                .as_ref()
                .map(|r| r.get(kind))
                .unwrap_or(Classification::Unsupported);
            let agree = generic.classification.compatible(closed_form.classification)
                && generic.classification.compatible(regime);
            (
                kind,
                CycleVerdict {
                    generic,
                    closed_form,
                    regime,
                    agree,
                },
            )
        })
        .collect();
    PointReport {
        params: *p,
        as_regime: p.as_regime_tri(tol),
        network: check_network_asymptotic_stability_tol(p, tol),
        cycles,
    }
}
