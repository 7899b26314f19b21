//! Topology of the five-node network: nodes, connections, Δ-cliques and the
//! four elementary cycle families.
//!
//! Nodes are stored in the rock-scissors-paper-lizard-spock order (`ξ`
//! labels). The alternative `O` labelling used for the intercept-ordering
//! conditions is a fixed permutation of it.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A node of the network, stored as a zero-based `ξ` index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "NodeLabels", try_from = "NodeLabels")]
pub struct NodeId(u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct NodeLabels {
    xi: u8,
    o: u8,
}

impl From<NodeId> for NodeLabels {
    fn from(n: NodeId) -> Self {
        NodeLabels {
            xi: n.xi_index(),
            o: n.o_index(),
        }
    }
}

impl TryFrom<NodeLabels> for NodeId {
    type Error = Error;

    fn try_from(l: NodeLabels) -> Result<Self> {
        let n = NodeId::from_xi(l.xi)?;
        if n.o_index() != l.o {
            return Err(Error::Parse(format!("inconsistent labels {l:?}")));
        }
        Ok(n)
    }
}

impl NodeId {
    /// Node from a one-based `ξ` label.
    pub fn from_xi(xi: u8) -> Result<Self> {
        if !(1..=5).contains(&xi) {
            return Err(Error::InvalidNode(xi as usize));
        }
        Ok(NodeId(xi - 1))
    }

    /// Node from a one-based `O` label.
    pub fn from_o(o: u8) -> Result<Self> {
        if !(1..=5).contains(&o) {
            return Err(Error::InvalidNode(o as usize));
        }
        // o − 1 = 2 (ξ − 1) mod 5, and 3 is the inverse of 2 mod 5.
        Ok(NodeId((3 * (o - 1)) % 5))
    }

    /// Node from a zero-based coordinate index.
    pub fn from_index(i: usize) -> Result<Self> {
        if i >= 5 {
            return Err(Error::InvalidNode(i));
        }
        Ok(NodeId(i as u8))
    }

    /// Zero-based coordinate index.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn xi_index(self) -> u8 {
        self.0 + 1
    }

    pub fn o_index(self) -> u8 {
        (2 * self.0) % 5 + 1
    }

    /// The node `k` steps further along the cyclic order.
    pub fn shift(self, k: usize) -> NodeId {
        NodeId(((self.0 as usize + k) % 5) as u8)
    }

    pub fn all() -> [NodeId; 5] {
        [NodeId(0), NodeId(1), NodeId(2), NodeId(3), NodeId(4)]
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ξ{}", self.xi_index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    Xi,
    O,
}

/// A node index expressed in a given labelling (one-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub scheme: Labeling,
    pub index: u8,
}

impl Label {
    pub fn xi(index: u8) -> Self {
        Label {
            scheme: Labeling::Xi,
            index,
        }
    }

    pub fn o(index: u8) -> Self {
        Label {
            scheme: Labeling::O,
            index,
        }
    }

    pub fn node(self) -> Result<NodeId> {
        match self.scheme {
            Labeling::Xi => NodeId::from_xi(self.index),
            Labeling::O => NodeId::from_o(self.index),
        }
    }
}

/// Expresses the same node in the `target` labelling.
pub fn relabel(label: Label, target: Labeling) -> Result<Label> {
    let node = label.node()?;
    Ok(match target {
        Labeling::Xi => Label::xi(node.xi_index()),
        Labeling::O => Label::o(node.o_index()),
    })
}

/// Connection type: `A` connections are two-dimensional (to `j+1`), `B`
/// connections one-dimensional (to `j+3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConnType {
    A,
    B,
}

impl ConnType {
    /// Forward step in the cyclic order.
    pub fn step(self) -> usize {
        match self {
            ConnType::A => 1,
            ConnType::B => 3,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            ConnType::A => 2,
            ConnType::B => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub kind: ConnType,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// All ten connections of the network.
pub fn edges() -> Vec<Edge> {
    NodeId::all()
        .iter()
        .flat_map(|&n| {
            [ConnType::A, ConnType::B].map(|kind| Edge {
                from: n,
                to: n.shift(kind.step()),
                kind,
            })
        })
        .collect()
}

/// The connection from `from` to `to`, if there is one.
pub fn edge_between(from: NodeId, to: NodeId) -> Option<Edge> {
    [ConnType::A, ConnType::B]
        .into_iter()
        .find(|k| from.shift(k.step()) == to)
        .map(|kind| Edge { from, to, kind })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CycleKind {
    RockToPaper,
    Star,
    #[serde(rename = "RSP")]
    Rsp,
    FourNode,
}

impl CycleKind {
    pub const ALL: [CycleKind; 4] = [
        CycleKind::RockToPaper,
        CycleKind::Star,
        CycleKind::Rsp,
        CycleKind::FourNode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CycleKind::RockToPaper => "rock-to-paper",
            CycleKind::Star => "star",
            CycleKind::Rsp => "rsp",
            CycleKind::FourNode => "four-node",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "rocktopaper" | "rtop" => Ok(CycleKind::RockToPaper),
            "star" => Ok(CycleKind::Star),
            "rsp" => Ok(CycleKind::Rsp),
            "fournode" | "4node" => Ok(CycleKind::FourNode),
            _ => Err(Error::Parse(format!("unknown cycle `{s}`"))),
        }
    }

    fn canonical_types(self) -> &'static [ConnType] {
        use ConnType::*;
        match self {
            CycleKind::RockToPaper => &[A, A, A, A, A],
            CycleKind::Star => &[B, B, B, B, B],
            CycleKind::Rsp => &[A, A, B],
            CycleKind::FourNode => &[A, B, B, B],
        }
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleSpec {
    pub name: CycleKind,
    pub nodes: Vec<NodeId>,
    /// `conn_types[i]` is the type of the connection `nodes[i] → nodes[i+1]`.
    pub conn_types: Vec<ConnType>,
    pub rotation: u8,
}

impl CycleSpec {
    /// The family representative starting at `ξ1`, shifted by `rotation`.
    pub fn new(kind: CycleKind, rotation: u8) -> Self {
        let types = kind.canonical_types().to_vec();
        let mut node = NodeId(0).shift(rotation as usize % 5);
        let mut nodes = Vec::with_capacity(types.len());
        for t in &types {
            nodes.push(node);
            node = node.shift(t.step());
        }
        CycleSpec {
            name: kind,
            nodes,
            conn_types: types,
            rotation: rotation % 5,
        }
    }

    pub fn canonical(kind: CycleKind) -> Self {
        Self::new(kind, 0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Connection into `nodes[pos]`.
    pub fn incoming(&self, pos: usize) -> Edge {
        let m = self.len();
        let prev = (pos + m - 1) % m;
        Edge {
            from: self.nodes[prev],
            to: self.nodes[pos],
            kind: self.conn_types[prev],
        }
    }

    /// Connection out of `nodes[pos]`.
    pub fn outgoing(&self, pos: usize) -> Edge {
        let m = self.len();
        Edge {
            from: self.nodes[pos],
            to: self.nodes[(pos + 1) % m],
            kind: self.conn_types[pos],
        }
    }

    pub fn connections(&self) -> Vec<Edge> {
        (0..self.len()).map(|p| self.outgoing(p)).collect()
    }

    /// Same node sequence up to a cyclic shift of the starting point.
    pub fn same_cycle(&self, other: &CycleSpec) -> bool {
        let m = self.len();
        m == other.len() && (0..m).any(|s| (0..m).all(|i| self.nodes[(i + s) % m] == other.nodes[i]))
    }

    /// Position of `node` in the cycle.
    pub fn position(&self, node: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&n| n == node)
    }

    /// Applies the cyclic relabelling `ξ_j → ξ_{j+k}`.
    pub fn rotated(&self, k: usize) -> CycleSpec {
        CycleSpec {
            name: self.name,
            nodes: self.nodes.iter().map(|n| n.shift(k)).collect(),
            conn_types: self.conn_types.clone(),
            rotation: ((self.rotation as usize + k) % 5) as u8,
        }
    }
}

impl fmt::Display for CycleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for n in &self.nodes {
            write!(f, "{n} -> ")?;
        }
        write!(f, "{}]", self.nodes[0])
    }
}

/// Rock-to-paper and star (each invariant under rotation) plus the five
/// rotations of the three-node and four-node families: twelve cycles.
pub fn elementary_cycles() -> Vec<CycleSpec> {
    let mut out = vec![
        CycleSpec::canonical(CycleKind::RockToPaper),
        CycleSpec::canonical(CycleKind::Star),
    ];
    for kind in [CycleKind::Rsp, CycleKind::FourNode] {
        out.extend((0..5).map(|r| CycleSpec::new(kind, r)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliqueRole {
    Short,
    FirstLong,
    SecondLong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaClique {
    pub source: NodeId,
    pub short_target: NodeId,
    pub long_mid: NodeId,
}

impl DeltaClique {
    pub fn triple(&self) -> [usize; 3] {
        [self.source.index(), self.short_target.index(), self.long_mid.index()]
    }

    pub fn roles(&self) -> [(CliqueRole, Edge); 3] {
        [
            (
                CliqueRole::Short,
                Edge {
                    from: self.source,
                    to: self.short_target,
                    kind: ConnType::A,
                },
            ),
            (
                CliqueRole::FirstLong,
                Edge {
                    from: self.source,
                    to: self.long_mid,
                    kind: ConnType::B,
                },
            ),
            (
                CliqueRole::SecondLong,
                Edge {
                    from: self.long_mid,
                    to: self.short_target,
                    kind: ConnType::B,
                },
            ),
        ]
    }
}

/// The five Δ-cliques `{ξ_j, ξ_{j+1}, ξ_{j+3}}`.
pub fn delta_cliques() -> Vec<DeltaClique> {
    NodeId::all()
        .iter()
        .map(|&j| DeltaClique {
            source: j,
            short_target: j.shift(1),
            long_mid: j.shift(3),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabel_table() {
        let pairs = [(1, 1), (2, 4), (3, 2), (4, 5), (5, 3)];
        for (o, xi) in pairs {
            assert_eq!(relabel(Label::o(o), Labeling::Xi).unwrap(), Label::xi(xi));
            assert_eq!(relabel(Label::xi(xi), Labeling::O).unwrap(), Label::o(o));
        }
        assert!(relabel(Label::xi(0), Labeling::O).is_err());
    }

    #[test]
    fn canonical_cycles() {
        let ids = |c: &CycleSpec| c.nodes.iter().map(|n| n.xi_index()).collect::<Vec<_>>();
        assert_eq!(ids(&CycleSpec::canonical(CycleKind::RockToPaper)), [1, 2, 3, 4, 5]);
        assert_eq!(ids(&CycleSpec::canonical(CycleKind::Star)), [1, 4, 2, 5, 3]);
        assert_eq!(ids(&CycleSpec::canonical(CycleKind::Rsp)), [1, 2, 3]);
        assert_eq!(ids(&CycleSpec::canonical(CycleKind::FourNode)), [1, 2, 5, 3]);
        assert_eq!(elementary_cycles().len(), 12);
    }

    #[test]
    fn cycles_use_network_edges() {
        let all = edges();
        for c in elementary_cycles() {
            for e in c.connections() {
                assert!(all.contains(&e), "{c}: {e}");
            }
        }
    }

    #[test]
    fn clique_at_first_node() {
        let c = delta_cliques()[0];
        assert_eq!(c.triple(), [0, 1, 3]);
    }

    #[test]
    fn cycle_kind_parse() {
        assert_eq!(CycleKind::parse("rock-to-paper").unwrap(), CycleKind::RockToPaper);
        assert_eq!(CycleKind::parse("Four_Node").unwrap(), CycleKind::FourNode);
        assert!(CycleKind::parse("hexagon").is_err());
    }
}
