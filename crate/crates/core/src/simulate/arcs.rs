use super::{integrate_observed, Control, IntegrateOptions, State, DIM};
use crate::error::{Error, Result};
use crate::model::LVSystem;
use crate::network::{edges, CycleSpec, Edge};

/// Points per connection polyline.
pub const ARC_POINTS: usize = 64;
/// Dense points per coarse segment, used to refine distance queries.
const REFINE: usize = 16;

fn axis(k: usize) -> State {
    let mut e = [0.0; DIM];
    e[k] = 1.0;
    e
}

fn dist(a: &State, b: &State) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// The connection `edge` as a polyline of [`ARC_POINTS`] points equally
/// spaced in arc length, from the source equilibrium to the target.
///
/// The orbit lies in the coordinate plane of its end points; it is traced by
/// integrating from a point just off the source along the unstable
/// eigenvector.
pub fn connection_arc(sys: &LVSystem, edge: Edge) -> Result<Vec<State>> {
    Ok(resample(&traced_orbit(sys, edge)?, ARC_POINTS))
}

fn traced_orbit(sys: &LVSystem, edge: Edge) -> Result<Vec<State>> {
    let (j, k) = (edge.from.index(), edge.to.index());
    let rate = sys.growth(k, &axis(j));
    if !(rate > 0.0) {
        return Err(Error::Precondition(format!(
            "{edge} is not a connection for this system: transverse rate {rate}"
        )));
    }
    let eps = 1e-9;
    let mut x0 = [0.0; DIM];
    x0[j] = 1.0 - eps * sys.rho(j, k) / (1.0 + rate);
    x0[k] = eps;
    let target = axis(k);
    let opts = IntegrateOptions {
        h_max: 2e-3,
        record: true,
        ..IntegrateOptions::default()
    };
    let traj = integrate_observed(sys, &x0, 1e3, &opts, |_, x, _| {
        if dist(x, &target) < 1e-8 {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    if dist(&traj.final_state, &target) > 1e-6 {
        return Err(Error::Precondition(format!("{edge}: orbit did not reach its target")));
    }
    let mut pts = vec![axis(j)];
    pts.extend(traj.states.iter().copied());
    pts.push(target);
    Ok(pts)
}

fn resample(pts: &[State], n: usize) -> Vec<State> {
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        cum.push(cum.last().unwrap() + dist(&w[0], &w[1]));
    }
    let total = *cum.last().unwrap();
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for i in 0..n {
        let s = total * i as f64 / (n - 1) as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let u = if len > 0.0 {
            ((s - cum[seg]) / len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let mut p = [0.0; DIM];
        for d in 0..DIM {
            p[d] = pts[seg][d] + u * (pts[seg + 1][d] - pts[seg][d]);
        }
        out.push(p);
    }
    out
}

fn segment_distance(x: &State, a: &State, b: &State) -> f64 {
    let mut ab2 = 0.0;
    let mut dotp = 0.0;
    for d in 0..DIM {
        let ab = b[d] - a[d];
        ab2 += ab * ab;
        dotp += (x[d] - a[d]) * ab;
    }
    let u = if ab2 > 0.0 { (dotp / ab2).clamp(0.0, 1.0) } else { 0.0 };
    let mut s = 0.0;
    for d in 0..DIM {
        let p = a[d] + u * (b[d] - a[d]);
        s += (x[d] - p).powi(2);
    }
    s.sqrt()
}

/// Polylines for every connection of the network.
#[derive(Debug, Clone)]
pub struct NetworkArcs {
    pub arcs: Vec<(Edge, Vec<State>)>,
    /// The same orbits with [`REFINE`] times as many segments.
    dense: Vec<Vec<State>>,
}

impl NetworkArcs {
    pub fn new(sys: &LVSystem) -> Result<Self> {
        let mut arcs = Vec::new();
        let mut dense = Vec::new();
        for e in edges() {
            let pts = traced_orbit(sys, e)?;
            arcs.push((e, resample(&pts, ARC_POINTS)));
            dense.push(resample(&pts, (ARC_POINTS - 1) * REFINE + 1));
        }
        Ok(Self { arcs, dense })
    }

    /// The connections of `cycle` only.
    pub fn restricted(&self, cycle: &CycleSpec) -> Self {
        let conns = cycle.connections();
        let keep: Vec<usize> = (0..self.arcs.len())
            .filter(|&i| {
                let e = self.arcs[i].0;
                conns.iter().any(|c| c.from == e.from && c.to == e.to)
            })
            .collect();
        Self {
            arcs: keep.iter().map(|&i| self.arcs[i].clone()).collect(),
            dense: keep.iter().map(|&i| self.dense[i].clone()).collect(),
        }
    }

    /// Euclidean distance from `x` to the union of the connections (which
    /// contain their end equilibria).
    ///
    /// The coarse polylines locate the nearest stretch of each orbit; the
    /// distance is then taken on the dense resampling around it.
    pub fn distance(&self, x: &State) -> f64 {
        let mut coarse = Vec::with_capacity(self.arcs.len());
        let mut best = f64::INFINITY;
        for (_, pts) in &self.arcs {
            let (d, seg) = pts
                .windows(2)
                .enumerate()
                .map(|(i, w)| (segment_distance(x, &w[0], &w[1]), i))
                .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
            best = best.min(d);
            coarse.push((d, seg));
        }
        // The coarse polyline is off the orbit by at most its chord error,
        // far below this margin.
        let margin = 1e-2;
        let mut refined = f64::INFINITY;
        for (a, &(d, seg)) in coarse.iter().enumerate() {
            if d > best + margin {
                continue;
            }
            let dense = &self.dense[a];
            let lo = seg.saturating_sub(1) * REFINE;
            let hi = ((seg + 2) * REFINE).min(dense.len() - 1);
            for w in dense[lo..=hi].windows(2) {
                refined = refined.min(segment_distance(x, &w[0], &w[1]));
            }
        }
        refined
    }

    pub fn length(arc: &[State]) -> f64 {
        arc.windows(2).map(|w| dist(&w[0], &w[1])).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rspls_system, GameParameters};

    #[test]
    fn arcs_stay_in_their_plane_and_on_the_simplex_scale() {
        let sys = rspls_system(&GameParameters::new(3.0, 2.0, 1.0, 0.8).unwrap());
        let net = NetworkArcs::new(&sys).unwrap();
        assert_eq!(net.arcs.len(), 10);
        for (e, pts) in &net.arcs {
            assert_eq!(pts.len(), ARC_POINTS);
            assert_eq!(pts[0], axis(e.from.index()));
            assert_eq!(pts[ARC_POINTS - 1], axis(e.to.index()));
            for p in pts {
                for (d, v) in p.iter().enumerate() {
                    if d != e.from.index() && d != e.to.index() {
                        assert_eq!(*v, 0.0);
                    }
                }
            }
            let len = NetworkArcs::length(pts);
            assert!(len > 2f64.sqrt() - 1e-9 && len < 3.0, "{e}: {len}");
        }
        assert_eq!(net.distance(&axis(2)), 0.0);
    }
}
