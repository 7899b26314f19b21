use super::{
    f_index, f_index_positive, named, spectral_check_tol, Classification, Method, StabilityIndex, StabilityReport,
    TraceEntry,
};
use crate::margin::{Margin, Tri, DEFAULT_TOL};
use crate::model::GameParameters;
use crate::network::CycleSpec;
use crate::transition::{index_rows, product_chain};

pub fn stability_indices_generic(cycle: &CycleSpec, params: &GameParameters) -> StabilityReport {
    stability_indices_generic_tol(cycle, params, DEFAULT_TOL)
}

/// Indices from the transition matrices alone: if any first-return matrix
/// fails the eigen-conditions every index is `-∞`; otherwise each index is
/// the minimum of the row candidates of the products starting at its node.
pub fn stability_indices_generic_tol(cycle: &CycleSpec, params: &GameParameters, tol: f64) -> StabilityReport {
    let m = cycle.len();
    let mut fired = Vec::new();
    let mut warnings = Vec::new();
    let mut conds = Tri::Yes;
    let mut u_infty = Tri::Yes;
    for j in 0..m {
        let chain = product_chain(cycle, j, params).expect("position in range");
        let ret = chain.last().expect("non-empty chain");
        let s = spectral_check_tol(&ret.entries, tol);
        let label = &ret.label;
        let gap = Margin::gt(s.lambda_max, 1.0);
        fired.push(named(
            format!("{label}: lambda_max real"),
            Margin::new(0.0, 1.0),
            s.cond_i,
        ));
        fired.push(named(format!("{label}: lambda_max > 1"), gap, s.cond_ii));
        let wmin = s.w_max.iter().copied().fold(f64::INFINITY, f64::min);
        fired.push(named(
            format!("{label}: eigenvector of one sign"),
            Margin::new(wmin, 1.0),
            s.cond_iii,
        ));
        conds = conds.and(s.conditions());
        if s.conditions().is_yes() {
            if !s.u_infty.is_yes() {
                warnings.push(format!(
                    "{label}: left eigenvector check inconclusive, v = {:?}",
                    s.v_max
                ));
            }
            u_infty = u_infty.and(s.u_infty.or(Tri::Marginal));
        }
    }

    let connections: Vec<_> = (0..m).map(|j| cycle.incoming(j)).collect();
    if conds.is_no() {
        return StabilityReport {
            cycle: cycle.clone(),
            method: Method::Generic,
            per_connection: connections
                .into_iter()
                .map(|c| StabilityIndex {
                    value: f64::NEG_INFINITY,
                    connection: c,
                    positive: Tri::No,
                    bound: None,
                    trace: Vec::new(),
                })
                .collect(),
            classification: Classification::CompletelyUnstable,
            fired_conditions: fired,
            warnings,
        };
    }

    let per_connection: Vec<StabilityIndex> = (0..m)
        .map(|j| {
            let rows = index_rows(cycle, j, params).expect("position in range");
            let mut value = f64::INFINITY;
            let mut positive = Tri::Yes;
            let trace: Vec<TraceEntry> = rows
                .into_iter()
                .map(|r| {
                    let v = f_index(r.alpha);
                    value = value.min(v);
                    positive = positive.and(f_index_positive(r.alpha, tol));
                    TraceEntry {
                        source: r.source,
                        row: r.row,
                        alpha: r.alpha,
                        value: v,
                    }
                })
                .collect();
            StabilityIndex {
                value,
                connection: connections[j],
                positive,
                bound: None,
                trace,
            }
        })
        .collect();

    let classification = if conds == Tri::Marginal || u_infty != Tri::Yes {
        Classification::Marginal
    } else if per_connection.iter().any(|s| s.value == f64::NEG_INFINITY) {
        Classification::CompletelyUnstable
    } else {
        match Tri::all(per_connection.iter().map(|s| s.positive)) {
            Tri::Yes => Classification::Eas,
            Tri::No => Classification::Fas,
            Tri::Marginal => Classification::Marginal,
        }
    };
    StabilityReport {
        cycle: cycle.clone(),
        method: Method::Generic,
        per_connection,
        classification,
        fired_conditions: fired,
        warnings,
    }
}
