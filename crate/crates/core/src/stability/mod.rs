//! Stability indices and classification of the elementary cycles.
//!
//! Two independent pipelines are provided: the generic algorithm, which
//! works from the transition matrices alone, and the closed-form piecewise
//! results for each cycle family. The regime table and the cross-cycle
//! relations build on both.

mod closed_form;
mod constants;
mod findex;
mod generic;
mod regime;
mod relations;
mod spectral;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::margin::{Margin, Tri};
use crate::model::NamedMargin;
use crate::network::{CycleSpec, Edge};

pub use closed_form::{
    four_node_eigen, stability_indices_closed_form, stability_indices_closed_form_tol, FourNodeEigen,
};
pub use constants::{
    constant_identities, constant_margins, constant_terms, derived_constants, ConstantMargins, ConstantTerms,
    DerivedConstants,
};
pub use findex::{f_index, f_index_positive};
pub use generic::{stability_indices_generic, stability_indices_generic_tol};
pub use regime::{
    classify_in_as_regime, classify_in_as_regime_tol, classify_point, classify_point_tol, CycleVerdict, PointReport,
    RegimeClassification,
};
pub use relations::{
    lemma_relations_check, mutual_exclusion_check, rtop_row_sums, Claim, RelationCheck, RelationStatus,
};
pub use spectral::{
    spectral_check, spectral_check_tol, vieta_conditions, vieta_conditions_tol, SpectralData, VietaConditions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    CompletelyUnstable,
    #[serde(rename = "fas")]
    Fas,
    #[serde(rename = "eas")]
    Eas,
    Marginal,
    Unsupported,
}

impl Classification {
    pub fn short(self) -> &'static str {
        match self {
            Classification::CompletelyUnstable => "CU",
            Classification::Fas => "FAS",
            Classification::Eas => "EAS",
            Classification::Marginal => "MARGINAL",
            Classification::Unsupported => "UNSUPPORTED",
        }
    }

    /// Definite, i.e. neither marginal nor outside the scope of the method.
    pub fn is_definite(self) -> bool {
        !matches!(self, Classification::Marginal | Classification::Unsupported)
    }

    /// Attracts a set of positive measure.
    pub fn is_attracting(self) -> bool {
        matches!(self, Classification::Fas | Classification::Eas)
    }

    /// Two verdicts are compatible unless both are definite and different.
    pub fn compatible(self, other: Classification) -> bool {
        !(self.is_definite() && other.is_definite() && self != other)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Generic,
    ClosedForm,
}

/// One row considered for an index and the candidate value it yields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub source: String,
    pub row: usize,
    pub alpha: [f64; 3],
    #[serde(with = "crate::ext")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityIndex {
    #[serde(with = "crate::ext")]
    pub value: f64,
    /// The connection ending at the node where the index is computed.
    pub connection: Edge,
    /// Sign of the index judged under the boundary tolerance.
    pub positive: Tri,
    /// Upper bound stated by a closed-form result, when only a bound is known.
    #[serde(with = "crate::ext::option", default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub cycle: CycleSpec,
    pub method: Method,
    pub per_connection: Vec<StabilityIndex>,
    pub classification: Classification,
    pub fired_conditions: Vec<NamedMargin>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl StabilityReport {
    pub fn values(&self) -> Vec<f64> {
        self.per_connection.iter().map(|s| s.value).collect()
    }
}

pub(crate) fn named(name: impl Into<String>, m: Margin, outcome: Tri) -> NamedMargin {
    NamedMargin {
        name: name.into(),
        value: m.value,
        outcome,
    }
}
