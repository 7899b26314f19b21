use serde::{Deserialize, Serialize};

use super::{
    constant_margins, f_index, named, stability_indices_generic_tol, vieta_conditions_tol, Classification, Method,
    StabilityIndex, StabilityReport,
};
use crate::linalg::Mat3;
use crate::margin::{Margin, Tri, DEFAULT_TOL};
use crate::model::{GameParameters, NamedMargin};
use crate::network::{ConnType, CycleKind, CycleSpec};
use crate::transition::closed_form_product;

pub fn stability_indices_closed_form(cycle: &CycleSpec, params: &GameParameters) -> StabilityReport {
    stability_indices_closed_form_tol(cycle, params, DEFAULT_TOL)
}

/// Evaluates the piecewise closed-form results for the cycle's family.
///
/// For the five-node cycles and the four-node cycle only an upper bound is
/// known in closed form; the reported values are then the exact generic ones
/// with the bound attached.
pub fn stability_indices_closed_form_tol(cycle: &CycleSpec, params: &GameParameters, tol: f64) -> StabilityReport {
    match cycle.name {
        CycleKind::RockToPaper | CycleKind::Star => five_node(cycle, params, tol),
        CycleKind::Rsp => three_node(cycle, params, tol),
        CycleKind::FourNode => four_node(cycle, params, tol),
    }
}

fn minus_infinity(cycle: &CycleSpec) -> Vec<StabilityIndex> {
    (0..cycle.len())
        .map(|j| StabilityIndex {
            value: f64::NEG_INFINITY,
            connection: cycle.incoming(j),
            positive: Tri::No,
            bound: None,
            trace: Vec::new(),
        })
        .collect()
}

/// Exact generic values with per-connection bounds attached.
fn bounded(cycle: &CycleSpec, params: &GameParameters, tol: f64, bounds: &[f64]) -> Vec<StabilityIndex> {
    stability_indices_generic_tol(cycle, params, tol)
        .per_connection
        .into_iter()
        .zip(bounds)
        .map(|(mut s, &b)| {
            s.bound = Some(b);
            s.trace.clear();
            s
        })
        .collect()
}

fn report(
    cycle: &CycleSpec,
    per_connection: Vec<StabilityIndex>,
    classification: Classification,
    fired: Vec<NamedMargin>,
    warnings: Vec<String>,
) -> StabilityReport {
    StabilityReport {
        cycle: cycle.clone(),
        method: Method::ClosedForm,
        per_connection,
        classification,
        fired_conditions: fired,
        warnings,
    }
}

fn five_node(cycle: &CycleSpec, p: &GameParameters, tol: f64) -> StabilityReport {
    let v = vieta_conditions_tol(cycle.name, p, tol).expect("five-node cycle");
    let names: [&str; 3] = match cycle.name {
        CycleKind::RockToPaper => ["c_A+c_B > e_A+e_B", "c_A e_A > c_B e_B", "c_A c_B^3 > e_A e_B^3"],
        _ => ["c_A+c_B > e_A+e_B", "c_B e_B > c_A e_A", "c_A^3 e_B > c_B e_A^3"],
    };
    let mut fired: Vec<NamedMargin> = names
        .iter()
        .zip(v.margins)
        .zip([v.c1, v.c2, v.c3])
        .map(|((n, m), t)| named(*n, m, t))
        .collect();
    let all = v.all();
    if all.is_no() {
        return report(
            cycle,
            minus_infinity(cycle),
            Classification::CompletelyUnstable,
            fired,
            vec![],
        );
    }
    let r = p.e_b / p.e_a;
    let (bound, bound_neg) = match cycle.name {
        // F(-e_B/e_A, 1, 0) is negative exactly when e_B > e_A.
        CycleKind::RockToPaper => (f_index([-r, 1.0, 0.0]), Margin::gt(p.e_b, p.e_a)),
        // F(1, -e_A/e_B, 0) is negative exactly when e_A > e_B.
        _ => (f_index([1.0, -1.0 / r, 0.0]), Margin::gt(p.e_a, p.e_b)),
    };
    let bound_neg_t = bound_neg.positive(tol);
    fired.push(named("index bound < 0", bound_neg, bound_neg_t));
    let per = bounded(cycle, p, tol, &vec![bound; cycle.len()]);
    if all == Tri::Marginal {
        return report(cycle, per, Classification::Marginal, fired, vec![]);
    }

    let regime = p.as_regime_tri(tol);
    let mut class = match bound_neg_t {
        Tri::Yes => Classification::Fas,
        Tri::No => Classification::Unsupported,
        Tri::Marginal => Classification::Marginal,
    };
    if cycle.name == CycleKind::RockToPaper && regime.is_yes() {
        // Inside the regime the sign of the smallest row sum decides.
        let g = Margin::sum(&[p.c_a * p.e_a, -p.c_b * p.e_b, -p.e_a * p.e_b]);
        let t = g.positive(tol);
        fired.push(named("c_A e_A - c_B e_B > e_A e_B", g, t));
        class = match t {
            Tri::Yes => Classification::Eas,
            Tri::No => Classification::Fas,
            Tri::Marginal => Classification::Marginal,
        };
    } else if regime == Tri::Marginal && class != Classification::Fas {
        class = Classification::Marginal;
    }
    report(cycle, per, class, fired, vec![])
}

/// One printed branch of a piecewise index: its conditions, the value and
/// the sign annotated next to it.
struct Branch {
    conds: Tri,
    value: f64,
    positive: bool,
}

fn pick(branches: &[Branch]) -> Option<&Branch> {
    branches.iter().find(|b| b.conds.is_yes())
}

fn three_node(cycle: &CycleSpec, p: &GameParameters, tol: f64) -> StabilityReport {
    let m = constant_margins(p);
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let mut fired = vec![
        named("delta_T > 1", m.delta_minus_one, m.delta_minus_one.positive(tol)),
        named("alpha_T > 0", m.alpha_t, m.alpha_t.positive(tol)),
        named("beta_T > 0", m.beta_t, m.beta_t.positive(tol)),
        named("gamma_T > 0", m.gamma_t, m.gamma_t.positive(tol)),
        named("theta_T > 0", m.theta_t, m.theta_t.positive(tol)),
        named("mu_T > 0", m.mu_t, m.mu_t.positive(tol)),
        named("nu_T > 0", m.nu_t, m.nu_t.positive(tol)),
    ];
    let unstable = Tri::any([
        m.delta_minus_one.negative(tol),
        m.alpha_t.negative(tol),
        m.beta_t.negative(tol),
        m.gamma_t.negative(tol),
        m.theta_t.negative(tol),
        m.mu_t.negative(tol),
        m.nu_t.negative(tol),
    ]);
    if unstable.is_yes() {
        return report(
            cycle,
            minus_infinity(cycle),
            Classification::CompletelyUnstable,
            fired,
            vec![],
        );
    }
    let stable = Tri::all([
        m.delta_minus_one.positive(tol),
        m.theta_t.positive(tol),
        m.nu_t.positive(tol),
    ]);
    if !stable.is_yes() {
        return report(cycle, minus_infinity(cycle), Classification::Marginal, fired, vec![]);
    }

    let mut warnings = Vec::new();
    let r = eb / ea;
    let q = -eb * cb / (ea * ea) + ca / ea;
    let r_above_one = Margin::gt(eb, ea);
    // r > (e_A + c_A)/c_B  <=>  e_B c_B > e_A (e_A + c_A)  <=>  q < -1
    let r_above_knee = Margin::gt(eb * cb, ea * (ea + ca));
    fired.push(named("e_B/e_A > 1", r_above_one, r_above_one.positive(tol)));
    fired.push(named(
        "e_B/e_A > (e_A+c_A)/c_B",
        r_above_knee,
        r_above_knee.positive(tol),
    ));

    let denom = eb * cb - ca * ea;
    if r_above_one.negative(tol).is_yes() && r_above_knee.negative(tol).is_yes() && denom <= 0.0 {
        warnings.push(format!(
            "sigma_31: e_B c_B - c_A e_A = {denom} is not positive in the branch using it"
        ));
    }
    let s31 = [
        Branch {
            conds: r_above_one.positive(tol).and(r_above_knee.positive(tol)),
            value: (1.0 - r).min(1.0 + q),
            positive: false,
        },
        Branch {
            conds: r_above_one.positive(tol).and(r_above_knee.negative(tol)),
            value: 1.0 - r,
            positive: false,
        },
        Branch {
            conds: r_above_knee.non_negative(tol).and(r_above_one.negative(tol)),
            value: 1.0 + q,
            positive: false,
        },
        Branch {
            conds: r_above_one
                .negative(tol)
                .and(r_above_knee.negative(tol))
                .and(Tri::from_bool(denom > 0.0)),
            value: (-1.0 + ea / eb).min(-1.0 + ea * ea / denom),
            positive: true,
        },
    ];

    // Compare r with K = c_B c_A/(e_B e_A) through e_B^2 vs c_A c_B.
    let r_vs_k = Margin::gt(eb * eb, ca * cb);
    let s12 = [
        Branch {
            conds: r_above_one.positive(tol),
            value: 1.0 - r,
            positive: false,
        },
        Branch {
            conds: r_above_one
                .negative(tol)
                .and(r_vs_k.negative(tol).or(r_vs_k.positive(tol))),
            value: -1.0 + ea / eb,
            positive: true,
        },
    ];
    fired.push(named("e_B/e_A > c_B c_A/(e_B e_A)", r_vs_k, r_vs_k.positive(tol)));

    // e_B/e_A < e_A/(e_A - c_A), read as e_B (e_A - c_A) < e_A^2 so that it
    // also covers c_A >= e_A.
    let knee23 = Margin::sum(&[ea * ea, -eb * ea, eb * ca]);
    fired.push(named("e_A^2 > e_B (e_A - c_A)", knee23, knee23.positive(tol)));
    let y = ca / ea + ea / eb;
    let s23 = [
        Branch {
            conds: r_above_one
                .negative(tol)
                .or(r_above_one.positive(tol).and(knee23.positive(tol))),
            value: 1.0 - y,
            positive: false,
        },
        Branch {
            conds: knee23.negative(tol),
            value: -1.0 + ea * eb / (ea * ea + ca * eb),
            positive: true,
        },
    ];
    if s23[1].conds.is_yes() {
        warnings.push(format!(
            "sigma_23: printed value 1 - e_A/e_B = {} replaced by {}",
            1.0 - ea / eb,
            s23[1].value
        ));
    }

    let mut per = Vec::with_capacity(3);
    let mut any_marginal = false;
    for (j, branches) in [&s31[..], &s12[..], &s23[..]].into_iter().enumerate() {
        let chosen = pick(branches);
        any_marginal |= chosen.is_none();
        let (value, positive) = match chosen {
            Some(b) => (b.value, Tri::from_bool(b.positive)),
            None => (f64::NAN, Tri::Marginal),
        };
        per.push(StabilityIndex {
            value,
            connection: cycle.incoming(j),
            positive,
            bound: None,
            trace: Vec::new(),
        });
    }
    let class = if any_marginal {
        Classification::Marginal
    } else if per.iter().all(|s| s.positive.is_yes()) {
        Classification::Eas
    } else {
        Classification::Fas
    };
    report(cycle, per, class, fired, warnings)
}

/// Eigen-data of the four-node first-return matrices from their closed
/// forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourNodeEigen {
    /// `α11 + α33` of the return matrix at `ξ1`.
    pub trace_sum: f64,
    /// Product of the two non-unit eigenvalues.
    pub det: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Eigenvectors for `lambda1` at `ξ1, ξ2, ξ5, ξ3`.
    pub w1: [f64; 3],
    pub w2: [f64; 3],
    pub w5: [f64; 3],
    pub w3: [f64; 3],
    /// The sign-deciding polynomial for the third component of `w2`.
    pub w2_third_poly: f64,
    pub growth: Margin,
    pub w2_second_of_w1: Margin,
    pub w3_of_w2: Margin,
    pub w3_of_w5: Margin,
    pub w1_of_w3: Margin,
}

pub fn four_node_eigen(p: &GameParameters) -> FourNodeEigen {
    let get = |l: &str| -> Mat3 { closed_form_product(l, p).expect("table label") };
    let a = get("M̂^(1)").0;
    let b = get("M̂^(2)").0;
    let g = get("M̂^(5)").0;
    let d = get("M̂^(3)").0;
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let trace_sum = a[0][0] + a[2][2];
    let det = cb.powi(3) * ca / (eb.powi(3) * ea);
    let disc = (a[0][0] - a[2][2]).powi(2) + 4.0 * a[0][2] * a[2][0];
    let root = disc.max(0.0).sqrt();
    let lambda1 = (trace_sum + root) / 2.0;
    let lambda2 = (trace_sum - root) / 2.0;
    let l = lambda1;

    let w1 = [
        a[0][2] * (l - 1.0),
        a[0][2] * a[1][0] + a[1][2] * (l - a[0][0]),
        (l - a[0][0]) * (l - 1.0),
    ];
    let w2 = [
        b[0][1] * (l - 1.0),
        (l - b[0][0]) * (l - 1.0),
        b[0][1] * b[2][0] + b[2][1] * (l - b[0][0]),
    ];
    let w5 = [
        g[0][1] * (l - 1.0),
        (l - g[0][0]) * (l - 1.0),
        g[0][1] * g[2][0] + g[2][1] * (l - g[0][0]),
    ];
    let w3 = [
        d[0][1] * d[1][2] + d[0][2] * (l - d[1][1]),
        d[1][2] * (l - 1.0),
        (l - d[1][1]) * (l - 1.0),
    ];
    let poly_terms = [
        ca.powi(3) * cb,
        2.0 * cb * cb * ca * ea,
        -cb.powi(3) * ea * eb,
        -ea.powi(4) * l,
        -3.0 * ea * ea * ca * eb * l,
        -ca * ca * eb * eb * l,
        2.0 * eb * eb * cb * ea * l,
    ];
    FourNodeEigen {
        trace_sum,
        det,
        lambda1,
        lambda2,
        w1,
        w2,
        w5,
        w3,
        w2_third_poly: poly_terms.iter().sum(),
        growth: Margin::gt(trace_sum, 2.0f64.min(1.0 + det)),
        w2_second_of_w1: Margin::sum(&[a[0][2] * a[1][0], a[1][2] * (l - a[0][0])]),
        w3_of_w2: Margin::sum(&[b[0][1] * b[2][0], b[2][1] * (l - b[0][0])]),
        w3_of_w5: Margin::sum(&[g[0][1] * g[2][0], g[2][1] * (l - g[0][0])]),
        w1_of_w3: Margin::sum(&[d[0][1] * d[1][2], d[0][2] * (l - d[1][1])]),
    }
}

fn four_node(cycle: &CycleSpec, p: &GameParameters, tol: f64) -> StabilityReport {
    let m = constant_margins(p);
    let e = four_node_eigen(p);
    let fired = vec![
        named(
            "alpha11+alpha33 > min{2, 1+c_B^3 c_A/(e_B^3 e_A)}",
            e.growth,
            e.growth.positive(tol),
        ),
        named("theta_T < 0", m.theta_t.neg(), m.theta_t.negative(tol)),
        named("nu_T < 0", m.nu_t.neg(), m.nu_t.negative(tol)),
        named("w2^(max,1) > 0", e.w2_second_of_w1, e.w2_second_of_w1.positive(tol)),
        named("w3^(max,2) > 0", e.w3_of_w2, e.w3_of_w2.positive(tol)),
        named("w3^(max,5) > 0", e.w3_of_w5, e.w3_of_w5.positive(tol)),
        named("w1^(max,3) > 0", e.w1_of_w3, e.w1_of_w3.positive(tol)),
    ];
    let unstable = Tri::any([
        e.growth.negative(tol),
        m.theta_t.positive(tol),
        m.nu_t.positive(tol),
        e.w2_second_of_w1.negative(tol),
        e.w3_of_w2.negative(tol),
        e.w3_of_w5.negative(tol),
        e.w1_of_w3.negative(tol),
    ]);
    if unstable.is_yes() {
        return report(
            cycle,
            minus_infinity(cycle),
            Classification::CompletelyUnstable,
            fired,
            vec![],
        );
    }
    let stable = Tri::all([
        e.growth.positive(tol),
        m.theta_t.negative(tol),
        m.nu_t.negative(tol),
        e.w3_of_w2.positive(tol),
    ]);
    let r = p.e_b / p.e_a;
    let first = f_index([-r, 1.0, 0.0]);
    let other = f_index([1.0, -1.0 / r, 0.0]);
    let mut bounds = vec![other; cycle.len()];
    // The index at the node that leaves along the only type-A connection.
    if let Some(pos) = (0..cycle.len()).find(|&j| cycle.outgoing(j).kind == ConnType::A) {
        bounds[pos] = first;
    }
    let per = bounded(cycle, p, tol, &bounds);
    let class = if stable.is_yes() {
        Classification::Fas
    } else {
        Classification::Marginal
    };
    report(cycle, per, class, fired, vec![])
}
