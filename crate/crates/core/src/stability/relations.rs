use serde::{Deserialize, Serialize};

use super::{constant_margins, Classification};
use crate::margin::{Margin, Tri, DEFAULT_TOL};
use crate::model::GameParameters;
use crate::network::CycleKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationStatus {
    /// Premise false.
    Vacuous,
    /// Premise and conclusion both true.
    Holds,
    Violated,
    /// Some inequality fell inside the tolerance band.
    Marginal,
}

impl RelationStatus {
    fn of(premise: Tri, conclusion: Tri) -> Self {
        match (premise, conclusion) {
            (Tri::No, _) => RelationStatus::Vacuous,
            (Tri::Yes, Tri::Yes) => RelationStatus::Holds,
            (Tri::Yes, Tri::No) => RelationStatus::Violated,
            _ => RelationStatus::Marginal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub premise: Tri,
    pub conclusion: Tri,
    pub status: RelationStatus,
}

fn rel(name: &str, premise: Tri, conclusion: Tri) -> RelationCheck {
    RelationCheck {
        name: name.into(),
        premise,
        conclusion,
        status: RelationStatus::of(premise, conclusion),
    }
}

/// The implications between the sign of the derived constants and the
/// rate inequalities.
pub fn lemma_relations_check(p: &GameParameters) -> Vec<RelationCheck> {
    let tol = DEFAULT_TOL;
    let m = constant_margins(p);
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let pos = |x: Margin| x.positive(tol);
    let neg = |x: Margin| x.negative(tol);
    let d = pos(m.delta_minus_one);
    let g = Margin::gt(ca * ea, cb * eb);
    let cube = Margin::gt(ca.powi(3) * eb, cb * ea.powi(3));
    vec![
        rel(
            "theta_T>0, nu_T>0 => alpha_T, beta_T, gamma_T, mu_T > 0",
            Tri::all([d, pos(m.theta_t), pos(m.nu_t)]),
            Tri::all([pos(m.alpha_t), pos(m.beta_t), pos(m.gamma_t), pos(m.mu_t)]),
        ),
        rel(
            "gamma_T<0, mu_T<0 => alpha_T, beta_T, theta_T, nu_T < 0",
            Tri::all([d, neg(m.gamma_t), neg(m.mu_t)]),
            Tri::all([neg(m.alpha_t), neg(m.beta_t), neg(m.theta_t), neg(m.nu_t)]),
        ),
        rel(
            "regime => delta_T>1, beta_T>0, gamma_T>0",
            p.as_regime_tri(tol),
            Tri::all([d, pos(m.beta_t), pos(m.gamma_t)]),
        ),
        rel(
            "regime => c_A+c_B > e_A+e_B",
            p.as_regime_tri(tol),
            Margin::gt(ca + cb, ea + eb).positive(tol),
        ),
        rel(
            "regime => c_A c_B^3 > e_A e_B^3",
            p.as_regime_tri(tol),
            Margin::gt(ca * cb.powi(3), ea * eb.powi(3)).positive(tol),
        ),
        rel(
            "alpha_T>0 or theta_T>0 or beta_T<0 or nu_T<0 => c_A e_A < c_B e_B",
            Tri::any([pos(m.alpha_t), pos(m.theta_t), neg(m.beta_t), neg(m.nu_t)]),
            g.negative(tol),
        ),
        rel(
            "theta_T>0, nu_T>0 => c_A^3 e_B < c_B e_A^3",
            pos(m.theta_t).and(pos(m.nu_t)),
            cube.negative(tol),
        ),
        rel(
            "theta_T<0, nu_T<0 => c_A^3 e_B > c_B e_A^3",
            neg(m.theta_t).and(neg(m.nu_t)),
            cube.positive(tol),
        ),
    ]
}

/// One of the exclusivity statements between cycles, evaluated on a set of
/// classifications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    /// Whether the claim's hypotheses were met with definite verdicts.
    pub applicable: bool,
    pub holds: bool,
}

impl Claim {
    pub fn violated(&self) -> bool {
        self.applicable && !self.holds
    }
}

/// Checks the exclusivity statements on a map of per-cycle verdicts.
/// Marginal and unsupported verdicts never count as attracting.
pub fn mutual_exclusion_check(p: &GameParameters, class: impl Fn(CycleKind) -> Classification) -> Vec<Claim> {
    use CycleKind::*;
    let att = |k| class(k).is_attracting();
    let cu = |k| class(k) == Classification::CompletelyUnstable;
    let regime = p.as_regime();
    let mut out = vec![
        Claim {
            name: "at most one five-node cycle attracting".into(),
            applicable: true,
            holds: !(att(RockToPaper) && att(Star)),
        },
        Claim {
            name: "at most one of three-node and four-node attracting".into(),
            applicable: true,
            holds: !(att(Rsp) && att(FourNode)),
        },
        Claim {
            name: "rock-to-paper attracting => four-node c.u.".into(),
            applicable: att(RockToPaper) && class(FourNode).is_definite(),
            holds: cu(FourNode),
        },
    ];
    for k in [RockToPaper, Star, Rsp] {
        let others: Vec<_> = [RockToPaper, Star, Rsp].into_iter().filter(|o| *o != k).collect();
        out.push(Claim {
            name: format!("regime: {k} attracting => other odd cycles c.u."),
            applicable: regime && att(k) && others.iter().all(|o| class(*o).is_definite()),
            holds: others.iter().all(|o| cu(*o)),
        });
    }
    let m = constant_margins(p);
    let cube = Margin::gt(p.c_b * p.e_a.powi(3), p.c_a.powi(3) * p.e_b);
    let premise = regime && m.nu_t.negative(DEFAULT_TOL).is_yes() && cube.positive(DEFAULT_TOL).is_yes();
    out.push(Claim {
        name: "regime: nu_T<0 and c_A^3 e_B < c_B e_A^3 => all c.u.".into(),
        applicable: premise && CycleKind::ALL.iter().all(|k| class(*k).is_definite()),
        holds: CycleKind::ALL.iter().all(|k| cu(*k)),
    });
    out.push(Claim {
        name: "regime: four-node attracting => star attracting".into(),
        applicable: regime && att(FourNode) && class(Star).is_definite(),
        holds: att(Star),
    });
    out
}

/// Row sums `s1..s5` of the rows of the rock-to-paper powers that may carry a
/// negative entry inside the regime.
pub fn rtop_row_sums(p: &GameParameters) -> [f64; 5] {
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let ea2 = ea * ea;
    let ea3 = ea2 * ea;
    let ea4 = ea3 * ea;
    let ea5 = ea4 * ea;
    let q = -eb * cb / ea2 + ca / ea;
    let r3 = -cb * cb * eb / ea3 + (ca * cb + eb * eb) / ea2;
    let r4 = -cb.powi(3) * eb / ea4 + (cb * cb * ca + 2.0 * eb * eb * cb) / ea3 - 2.0 * ca * eb / ea2;
    let s1 = -eb / ea + 1.0;
    let s2 = q - eb / ea;
    let s3 = r3 - eb / ea + q;
    let s4 = r4 + q + r3;
    let r5 = -cb.powi(4) * eb / ea5 + (cb.powi(3) * ca + 3.0 * cb * cb * eb * eb) / ea4
        - (4.0 * ca * cb * eb + eb.powi(3)) / ea3
        + ca * ca / ea2;
    let s5 = r5 + r3 + r4;
    [s1, s2, s3, s4, s5]
}
