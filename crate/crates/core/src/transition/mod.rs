//! Basic transition matrices between incoming cross-sections of a cycle and
//! their accumulated products.

mod tables;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::model::GameParameters;
use crate::network::{ConnType, CycleKind, CycleSpec, NodeId};

pub use tables::{closed_form_product, printed_product, table_entries, ClosedFormTable, Erratum, TableEntry, ERRATA};

/// Incoming cross-section at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Section {
    pub node: NodeId,
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^in_{}", self.node.xi_index())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub entries: Mat3,
    pub from_section: Section,
    pub to_section: Section,
    pub label: String,
}

impl TransitionMatrix {
    /// `self ∘ right`: first `right`, then `self`.
    pub fn after(&self, right: &TransitionMatrix, label: String) -> Result<TransitionMatrix> {
        if right.to_section != self.from_section {
            return Err(Error::SectionMismatch {
                left: self.label.clone(),
                right: right.label.clone(),
                left_from: self.from_section.to_string(),
                right_to: right.to_section.to_string(),
            });
        }
        Ok(TransitionMatrix {
            entries: self.entries * right.entries,
            from_section: right.from_section,
            to_section: self.to_section,
            label,
        })
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.entries.0
    }
}

/// The four distinct basic matrices, named after the node at which they
/// act in the three-node cycle (and the star cycle for `M4`), plus the hatted
/// names used for the four-node cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasicKind {
    M1,
    M2,
    M3,
    M4,
    Mhat1,
    Mhat2,
    Mhat3,
    Mhat5,
}

impl BasicKind {
    pub fn label(self) -> &'static str {
        match self {
            BasicKind::M1 => "M_1",
            BasicKind::M2 => "M_2",
            BasicKind::M3 => "M_3",
            BasicKind::M4 => "M_4",
            BasicKind::Mhat1 => "M̂_1",
            BasicKind::Mhat2 => "M̂_2",
            BasicKind::Mhat3 => "M̂_3",
            BasicKind::Mhat5 => "M̂_5",
        }
    }

    /// `(node, next node)` as one-based `ξ` labels.
    fn sections(self) -> (u8, u8) {
        match self {
            BasicKind::M1 | BasicKind::Mhat1 => (1, 2),
            BasicKind::M2 => (2, 3),
            BasicKind::M3 | BasicKind::Mhat3 => (3, 1),
            BasicKind::M4 => (4, 2),
            BasicKind::Mhat2 => (2, 5),
            BasicKind::Mhat5 => (5, 3),
        }
    }

    /// The matrix shape is fixed by the types of the incoming and outgoing
    /// connections at the node.
    fn shape(self) -> (ConnType, ConnType) {
        use ConnType::*;
        match self {
            BasicKind::M1 | BasicKind::Mhat1 => (B, A),
            BasicKind::M2 => (A, A),
            BasicKind::M3 | BasicKind::Mhat2 => (A, B),
            BasicKind::M4 | BasicKind::Mhat3 | BasicKind::Mhat5 => (B, B),
        }
    }
}

/// Basic matrix for a node whose incoming and outgoing connections have the
/// given types.
pub fn basic_entries(incoming: ConnType, outgoing: ConnType, p: &GameParameters) -> Mat3 {
    use ConnType::*;
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    match (incoming, outgoing) {
        (A, A) => Mat3::new([[cb / ea, 0.0, 1.0], [ca / ea, 0.0, 0.0], [-eb / ea, 1.0, 0.0]]),
        (B, A) => Mat3::new([[cb / ea, 0.0, 0.0], [ca / ea, 0.0, 1.0], [-eb / ea, 1.0, 0.0]]),
        (A, B) => Mat3::new([[0.0, ca / eb, 0.0], [1.0, -ea / eb, 0.0], [0.0, cb / eb, 1.0]]),
        (B, B) => Mat3::new([[0.0, ca / eb, 1.0], [1.0, -ea / eb, 0.0], [0.0, cb / eb, 0.0]]),
    }
}

pub fn basic_matrix(kind: BasicKind, params: &GameParameters) -> TransitionMatrix {
    let (from, to) = kind.sections();
    let (i, o) = kind.shape();
    TransitionMatrix {
        entries: basic_entries(i, o, params),
        from_section: Section {
            node: NodeId::from_xi(from).expect("valid label"),
        },
        to_section: Section {
            node: NodeId::from_xi(to).expect("valid label"),
        },
        label: kind.label().to_string(),
    }
}

fn prefix(kind: CycleKind) -> &'static str {
    match kind {
        CycleKind::FourNode => "M̂",
        _ => "M",
    }
}

/// Basic matrix acting at `cycle.nodes[pos]`.
pub fn cycle_basic(cycle: &CycleSpec, pos: usize, params: &GameParameters) -> TransitionMatrix {
    let inc = cycle.incoming(pos);
    let out = cycle.outgoing(pos);
    TransitionMatrix {
        entries: basic_entries(inc.kind, out.kind, params),
        from_section: Section { node: out.from },
        to_section: Section { node: out.to },
        label: format!("{}_{}", prefix(cycle.name), out.from.xi_index()),
    }
}

/// The accumulated products `M_(j,j), M_(j+1,j), …, M^(j)` starting at
/// position `start` of the cycle.
pub fn product_chain(cycle: &CycleSpec, start: usize, params: &GameParameters) -> Result<Vec<TransitionMatrix>> {
    let m = cycle.len();
    if start >= m {
        return Err(Error::InvalidNode(start));
    }
    let pre = prefix(cycle.name);
    let j = cycle.nodes[start].xi_index();
    let mut acc = cycle_basic(cycle, start, params);
    let mut out = Vec::with_capacity(m);
    out.push(acc.clone());
    for step in 1..m {
        let pos = (start + step) % m;
        let next = cycle_basic(cycle, pos, params);
        let label = if step == m - 1 {
            format!("{pre}^({j})")
        } else {
            format!("{pre}_({},{j})", cycle.nodes[pos].xi_index())
        };
        acc = next.after(&acc, label)?;
        out.push(acc.clone());
    }
    Ok(out)
}

/// A row of an accumulated product, as fed to the index function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub source: String,
    pub row: usize,
    pub alpha: [f64; 3],
}

/// Every row of every accumulated product for the given start position.
pub fn index_rows(cycle: &CycleSpec, start: usize, params: &GameParameters) -> Result<Vec<IndexRow>> {
    Ok(product_chain(cycle, start, params)?
        .into_iter()
        .flat_map(|t| {
            let rows = t.rows();
            (0..3).map(move |r| IndexRow {
                source: t.label.clone(),
                row: r,
                alpha: rows[r],
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> GameParameters {
        GameParameters::new(2.0, 3.0, 1.0, 0.8).unwrap()
    }

    #[test]
    fn m2_entries() {
        let m = basic_matrix(BasicKind::M2, &p()).entries;
        assert_eq!(m.0, [[3.0, 0.0, 1.0], [2.0, 0.0, 0.0], [-0.8, 1.0, 0.0]]);
    }

    #[test]
    fn one_negative_entry() {
        for k in [
            BasicKind::M1,
            BasicKind::M2,
            BasicKind::M3,
            BasicKind::M4,
            BasicKind::Mhat1,
            BasicKind::Mhat2,
            BasicKind::Mhat3,
            BasicKind::Mhat5,
        ] {
            let m = basic_matrix(k, &p()).entries;
            assert_eq!(m.entries().iter().filter(|v| **v < 0.0).count(), 1, "{k:?}");
        }
    }

    #[test]
    fn section_mismatch_rejected() {
        let a = basic_matrix(BasicKind::M1, &p());
        let b = basic_matrix(BasicKind::M4, &p());
        // M_4 ends at ξ2, M_1 starts at ξ1.
        assert!(a.after(&b, "bad".into()).is_err());
        let c = basic_matrix(BasicKind::M2, &p());
        assert!(c.after(&a, "M_(2,1)".into()).is_ok());
    }

    #[test]
    fn chain_labels() {
        let rsp = CycleSpec::canonical(CycleKind::Rsp);
        let labels: Vec<String> = product_chain(&rsp, 0, &p())
            .unwrap()
            .into_iter()
            .map(|t| t.label)
            .collect();
        assert_eq!(labels, ["M_1", "M_(2,1)", "M^(1)"]);
        let four = CycleSpec::canonical(CycleKind::FourNode);
        let labels: Vec<String> = product_chain(&four, 1, &p())
            .unwrap()
            .into_iter()
            .map(|t| t.label)
            .collect();
        assert_eq!(labels, ["M̂_2", "M̂_(5,2)", "M̂_(3,2)", "M̂^(2)"]);
    }

    #[test]
    fn rsp_first_return_is_lower_triangular() {
        let rsp = CycleSpec::canonical(CycleKind::Rsp);
        let m = product_chain(&rsp, 0, &p()).unwrap().pop().unwrap().entries;
        assert_eq!(m.0[0][1], 0.0);
        assert_eq!(m.0[0][2], 0.0);
        assert_eq!(m.0[1][2], 0.0);
        assert!((m.0[0][0] - 15.0).abs() < 1e-12);
    }
}
