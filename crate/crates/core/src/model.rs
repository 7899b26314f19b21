//! Lotka–Volterra systems, the five-species game specialisation, equilibria
//! and the sufficient conditions for existence and stability of the network.
//!
//! Node indices in this module are zero-based: node `k` is the equilibrium on
//! the `k`-th coordinate axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::margin::{Margin, Tri, DEFAULT_TOL};

/// Contracting and expanding rates of the five-species game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParameters {
    pub c_a: f64,
    pub c_b: f64,
    pub e_a: f64,
    pub e_b: f64,
}

impl GameParameters {
    pub fn new(c_a: f64, c_b: f64, e_a: f64, e_b: f64) -> Result<Self> {
        for (name, v) in [("c_A", c_a), ("c_B", c_b), ("e_A", e_a), ("e_B", e_b)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(Self { c_a, c_b, e_a, e_b })
    }

    /// `0 < e_B < e_A < min{c_A, c_B}` and `e_A <= 1`, with the strict
    /// inequalities evaluated under `tol`.
    pub fn as_regime_tri(&self, tol: f64) -> Tri {
        Tri::all([
            Margin::gt(self.e_a, self.e_b).positive(tol),
            Margin::gt(self.c_a.min(self.c_b), self.e_a).positive(tol),
            Margin::new(1.0 - self.e_a, 1.0 + self.e_a).non_negative(tol),
        ])
    }

    pub fn as_regime(&self) -> bool {
        self.as_regime_tri(DEFAULT_TOL).is_yes()
    }
}

/// `ẋ_i = x_i (τ_i − Σ_j ρ_ij x_j)` on `n` species.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LVSystem {
    n: usize,
    tau: Vec<f64>,
    /// Row-major `n × n`.
    rho: Vec<f64>,
}

impl LVSystem {
    pub fn new(tau: Vec<f64>, rho: Vec<Vec<f64>>) -> Result<Self> {
        let n = tau.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty system".into()));
        }
        if rho.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rho.len(),
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in rho.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if row[i] != 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "rho[{i}][{i}] must be 1, got {}",
                    row[i]
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("non-finite rho entry".into()));
            }
            flat.extend_from_slice(row);
        }
        if let Some(t) = tau.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "growth rates must be positive, got {t}"
            )));
        }
        Ok(Self { n, tau, rho: flat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn rho(&self, i: usize, j: usize) -> f64 {
        self.rho[i * self.n + j]
    }

    pub fn rho_matrix(&self) -> Vec<Vec<f64>> {
        self.rho.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `τ_i − Σ_j ρ_ij x_j`, the per-capita growth rate of species `i`.
    #[inline]
    pub fn growth(&self, i: usize, x: &[f64]) -> f64 {
        let row = &self.rho[i * self.n..(i + 1) * self.n];
        self.tau[i] - row.iter().zip(x).map(|(r, xj)| r * xj).sum::<f64>()
    }

    /// Unchecked field evaluation into a caller-provided buffer.
    #[inline]
    pub fn field_into(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            out[i] = x[i] * self.growth(i, x);
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }

    fn check_node(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::InvalidNode(k));
        }
        Ok(())
    }
}

/// The five-species game: `τ = 1`, `ρ_{j,j+1} = 1 + c_A`, `ρ_{j,j+2} = 1 − e_B`,
/// `ρ_{j,j+3} = 1 + c_B`, `ρ_{j,j+4} = 1 − e_A` (indices mod 5).
pub fn rspls_system(params: &GameParameters) -> LVSystem {
    let offsets = [
        1.0,
        1.0 + params.c_a,
        1.0 - params.e_b,
        1.0 + params.c_b,
        1.0 - params.e_a,
    ];
    let rho = (0..5)
        .map(|j| (0..5).map(|k| offsets[(k + 5 - j) % 5]).collect())
        .collect();
    LVSystem::new(vec![1.0; 5], rho).expect("game system is well formed")
}

pub fn vector_field(sys: &LVSystem, x: &[f64]) -> Result<Vec<f64>> {
    sys.check_dim(x.len())?;
    let mut out = vec![0.0; sys.n];
    sys.field_into(x, &mut out);
    Ok(out)
}

/// The field in square-root coordinates `x_i = X_i²`:
/// `Ẋ_i = (X_i / 2)(τ_i − Σ_j ρ_ij X_j²)`.
pub fn sqrt_coordinates_field(sys: &LVSystem, big_x: &[f64]) -> Result<Vec<f64>> {
    sys.check_dim(big_x.len())?;
    let sq: Vec<f64> = big_x.iter().map(|v| v * v).collect();
    Ok((0..sys.n).map(|i| 0.5 * big_x[i] * sys.growth(i, &sq)).collect())
}

/// Jacobian of [`vector_field`], row-major.
pub fn jacobian(sys: &LVSystem, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    sys.check_dim(x.len())?;
    let n = sys.n;
    Ok((0..n)
        .map(|i| {
            let g = sys.growth(i, x);
            (0..n)
                .map(|k| {
                    let diag = if i == k { g } else { 0.0 };
                    diag - x[i] * sys.rho(i, k)
                })
                .collect()
        })
        .collect())
}

/// Jacobian of [`sqrt_coordinates_field`], row-major.
pub fn sqrt_jacobian(sys: &LVSystem, big_x: &[f64]) -> Result<Vec<Vec<f64>>> {
    sys.check_dim(big_x.len())?;
    let n = sys.n;
    let sq: Vec<f64> = big_x.iter().map(|v| v * v).collect();
    Ok((0..n)
        .map(|i| {
            let g = sys.growth(i, &sq);
            (0..n)
                .map(|k| {
                    let diag = if i == k { 0.5 * g } else { 0.0 };
                    diag - big_x[i] * sys.rho(i, k) * big_x[k]
                })
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub node: usize,
    pub position: Vec<f64>,
    /// `(direction, eigenvalue)` pairs; direction `node` is the radial one.
    pub eigenvalues: Vec<(usize, f64)>,
}

pub fn equilibrium(sys: &LVSystem, k: usize) -> Result<Equilibrium> {
    let eigenvalues = equilibrium_eigenvalues(sys, k)?;
    let mut position = vec![0.0; sys.n];
    position[k] = sys.tau[k];
    Ok(Equilibrium {
        node: k,
        position,
        eigenvalues,
    })
}

/// Eigenvalues at the axis equilibrium `k`: `−τ_k` radially and
/// `τ_j − ρ_jk τ_k` in direction `j`.
pub fn equilibrium_eigenvalues(sys: &LVSystem, k: usize) -> Result<Vec<(usize, f64)>> {
    sys.check_node(k)?;
    let tk = sys.tau[k];
    Ok((0..sys.n)
        .map(|j| {
            if j == k {
                (j, -tk)
            } else {
                (j, sys.tau[j] - sys.rho(j, k) * tk)
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeExistence {
    pub node: usize,
    /// Smallest expansion rate towards the two successors `k+1`, `k+3`.
    pub expanding_margin: f64,
    /// Minus the largest transverse eigenvalue at `k` in the directions that
    /// must contract (`j ∉ {k, k+1, k+3}`).
    pub contracting_margin: f64,
    pub expanding_ok: Tri,
    pub contracting_ok: Tri,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub nodes: Vec<NodeExistence>,
    pub network_exists: Tri,
    pub min_expanding_margin: f64,
    pub min_contracting_margin: f64,
}

fn transverse(sys: &LVSystem, j: usize, k: usize) -> f64 {
    sys.tau[j] - sys.rho(j, k) * sys.tau[k]
}

/// Checks, for every node `k` of a five-species system, that the directions
/// towards `k+1` and `k+3` expand and all other transverse directions
/// contract.
pub fn check_existence(sys: &LVSystem) -> Result<ExistenceReport> {
    check_existence_tol(sys, DEFAULT_TOL)
}

pub fn check_existence_tol(sys: &LVSystem, tol: f64) -> Result<ExistenceReport> {
    if sys.n != 5 {
        return Err(Error::DimensionMismatch {
            expected: 5,
            got: sys.n,
        });
    }
    let mut nodes = Vec::with_capacity(5);
    for k in 0..5 {
        let scale = |j: usize| sys.tau[j].abs() + (sys.rho(j, k) * sys.tau[k]).abs();
        let (exp, exp_scale) = [1, 3]
            .iter()
            .map(|i| {
                let j = (k + i) % 5;
                (transverse(sys, j, k), scale(j))
            })
            .fold((f64::INFINITY, 0.0), |acc, v| if v.0 < acc.0 { v } else { acc });
        let (con, con_scale) = [2, 4]
            .iter()
            .map(|i| {
                let j = (k + i) % 5;
                (-transverse(sys, j, k), scale(j))
            })
            .fold((f64::INFINITY, 0.0), |acc, v| if v.0 < acc.0 { v } else { acc });
        nodes.push(NodeExistence {
            node: k,
            expanding_margin: exp,
            contracting_margin: con,
            expanding_ok: Margin::new(exp, exp_scale).positive(tol),
            contracting_ok: Margin::new(con, con_scale).positive(tol),
        });
    }
    let network_exists = Tri::all(nodes.iter().map(|n| n.expanding_ok.and(n.contracting_ok)));
    let min_expanding_margin = nodes.iter().map(|n| n.expanding_margin).fold(f64::INFINITY, f64::min);
    let min_contracting_margin = nodes.iter().map(|n| n.contracting_margin).fold(f64::INFINITY, f64::min);
    Ok(ExistenceReport {
        nodes,
        network_exists,
        min_expanding_margin,
        min_contracting_margin,
    })
}

/// Which sufficient argument establishes stability of the whole network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityRoute {
    /// `e_A < 1`: ordering of the axis intercepts of the successors together
    /// with `max{e_A, e_B} < min{c_A, c_B}`.
    InterceptOrdering,
    /// `e_A = 1`: plane dominance inside each Δ-clique.
    DeltaClique,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMargin {
    pub name: String,
    pub value: f64,
    pub outcome: Tri,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStability {
    /// `No` means "not proven by these sufficient conditions", not "unstable".
    pub stable_proven: Tri,
    pub via: StabilityRoute,
    pub margins: Vec<NamedMargin>,
}

fn named(name: &str, m: Margin, outcome: Tri) -> NamedMargin {
    NamedMargin {
        name: name.to_string(),
        value: m.value,
        outcome,
    }
}

/// Intercept-ordering condition at every node of a five-species system:
/// `τ_{k+3}/ρ_{k+3,k} <= τ_{k+1}/ρ_{k+1,k}`, only meaningful when both
/// coefficients are positive.
pub fn intercept_ordering(sys: &LVSystem, tol: f64) -> Tri {
    Tri::all((0..5).map(|k| {
        let (j1, j3) = ((k + 1) % 5, (k + 3) % 5);
        let (r1, r3) = (sys.rho(j1, k), sys.rho(j3, k));
        if r1 <= 0.0 || r3 <= 0.0 {
            return Tri::No;
        }
        let lhs = sys.tau[j3] / r3;
        let rhs = sys.tau[j1] / r1;
        Margin::new(rhs - lhs, rhs.abs() + lhs.abs()).non_negative(tol)
    }))
}

/// Largest expanding eigenvalue is smaller than the weakest contraction,
/// at every node.
pub fn expansion_below_contraction(sys: &LVSystem, tol: f64) -> Tri {
    Tri::all((0..5).map(|k| {
        let exp = [1, 3]
            .iter()
            .map(|i| transverse(sys, (k + i) % 5, k))
            .fold(f64::NEG_INFINITY, f64::max);
        let con = [2, 4]
            .iter()
            .map(|i| transverse(sys, (k + i) % 5, k).abs())
            .fold(f64::INFINITY, f64::min);
        Margin::gt(con, exp).positive(tol)
    }))
}

pub fn check_network_asymptotic_stability(params: &GameParameters) -> NetworkStability {
    check_network_asymptotic_stability_tol(params, DEFAULT_TOL)
}

pub fn check_network_asymptotic_stability_tol(params: &GameParameters, tol: f64) -> NetworkStability {
    let p = params;
    let order = Margin::gt(p.e_a, p.e_b);
    let below = Margin::gt(p.c_a.min(p.c_b), p.e_a);
    let cap = Margin::new(1.0 - p.e_a, 1.0 + p.e_a);
    let mut margins = vec![
        named("e_A > e_B", order, order.positive(tol)),
        named("min{c_A,c_B} > e_A", below, below.positive(tol)),
        named("e_A <= 1", cap, cap.non_negative(tol)),
    ];
    let hypothesis = Tri::all(margins.iter().map(|m| m.outcome));
    if hypothesis.is_no() {
        return NetworkStability {
            stable_proven: Tri::No,
            via: StabilityRoute::None,
            margins,
        };
    }

    let sys = rspls_system(p);
    let existence = check_existence_tol(&sys, tol)
        .expect("five-species system")
        .network_exists;
    let spread = expansion_below_contraction(&sys, tol);
    margins.push(NamedMargin {
        name: "existence".into(),
        value: existence_slack(&sys),
        outcome: existence,
    });
    margins.push(NamedMargin {
        name: "max{e_A,e_B} < min{c_A,c_B}".into(),
        value: p.c_a.min(p.c_b) - p.e_a.max(p.e_b),
        outcome: spread,
    });

    let (route, route_ok) =
        if p.e_a < 1.0 {
            let ok = intercept_ordering(&sys, tol);
            margins.push(NamedMargin {
                name: "intercept ordering".into(),
                value: 1.0 / (1.0 - p.e_a) - 1.0 / (1.0 - p.e_b),
                outcome: ok,
            });
            (StabilityRoute::InterceptOrdering, ok)
        } else if p.e_a == 1.0 {
            let ok = Tri::all(crate::network::delta_cliques().iter().map(|c| {
                match delta_clique_plane_check(p, c.triple()) {
                    Ok(chk) => Tri::from_bool(chk.dominates),
                    Err(_) => Tri::No,
                }
            }));
            margins.push(NamedMargin {
                name: "delta-clique plane dominance".into(),
                value: 1.0 / (1.0 - p.e_b) - 1.0,
                outcome: ok,
            });
            (StabilityRoute::DeltaClique, ok)
        } else {
            (StabilityRoute::None, Tri::Marginal)
        };

    NetworkStability {
        stable_proven: Tri::all([hypothesis, existence, spread, route_ok]),
        via: route,
        margins,
    }
}

fn existence_slack(sys: &LVSystem) -> f64 {
    check_existence(sys)
        .map(|r| r.min_expanding_margin.min(r.min_contracting_margin))
        .unwrap_or(f64::NAN)
}

/// Axis intercepts of the three nullcline planes inside a Δ-clique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneCheck {
    /// The clique nodes `[source, short target, long middle]`, zero-based.
    pub nodes: [usize; 3],
    /// `intercepts[p][a]` is where the nullcline plane of species
    /// `nodes[p]` meets the axis of species `nodes[a]`; `None` when the
    /// plane is parallel to that axis.
    pub intercepts: [[Option<f64>; 3]; 3],
    /// Index into `nodes` of the plane that must dominate (the short target).
    pub dominant: usize,
    pub dominates: bool,
}

/// Verifies that, with `e_A = 1`, the nullcline plane of the short target
/// lies strictly outside the other two on every axis of the clique's
/// invariant 3-space, so the clique contains no interior equilibrium.
///
/// `clique` is `[source, short target, long middle]`, zero-based.
pub fn delta_clique_plane_check(params: &GameParameters, clique: [usize; 3]) -> Result<PlaneCheck> {
    if params.e_a != 1.0 {
        return Err(Error::Precondition(format!(
            "plane dominance argument needs e_A = 1, got {}",
            params.e_a
        )));
    }
    let j = clique[0];
    if j >= 5 || clique[1] != (j + 1) % 5 || clique[2] != (j + 3) % 5 {
        return Err(Error::Precondition(format!(
            "{clique:?} is not a clique triple [j, j+1, j+3]"
        )));
    }
    let sys = rspls_system(params);
    let mut intercepts = [[None; 3]; 3];
    for (p, &plane) in clique.iter().enumerate() {
        for (a, &axis) in clique.iter().enumerate() {
            let coef = sys.rho(plane, axis);
            intercepts[p][a] = if coef == 0.0 { None } else { Some(sys.tau[plane] / coef) };
        }
    }
    let dominant = 1;
    let as_ext = |v: Option<f64>| v.unwrap_or(f64::INFINITY);
    let dominates = (0..3).all(|a| {
        let top = as_ext(intercepts[dominant][a]);
        (0..3).filter(|&p| p != dominant).all(|p| {
            let other = as_ext(intercepts[p][a]);
            other > 0.0 && top > other
        })
    });
    Ok(PlaneCheck {
        nodes: clique,
        intercepts,
        dominant,
        dominates,
    })
}
