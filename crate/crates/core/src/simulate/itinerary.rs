use serde::{Deserialize, Serialize};

use super::{BallEvent, Crossing, Trajectory};
use crate::network::{edge_between, elementary_cycles, CycleSpec, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Visit {
    pub node: NodeId,
    pub entry: f64,
    pub dwell: f64,
    /// False when the run ended inside the ball, so `dwell` is a lower bound.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Itinerary {
    pub visits: Vec<Visit>,
    pub matched_cycle: Option<CycleSpec>,
    /// Full laps of the matched cycle in the trailing run of visits.
    pub laps: usize,
    /// Consecutive visits not joined by a connection of the network.
    pub non_network_transitions: usize,
}

impl Itinerary {
    pub fn non_network(&self) -> bool {
        self.non_network_transitions > 0
    }

    /// Ratios of successive complete dwell times at the same node within the
    /// matched run.
    pub fn dwell_ratios(&self) -> Vec<f64> {
        let Some(cycle) = &self.matched_cycle else {
            return Vec::new();
        };
        let m = cycle.len();
        let run = &self.visits[self.visits.len() - trailing_run(&self.visits, cycle)..];
        run.windows(m + 1)
            .filter(|w| w[0].complete && w[m].complete && w[0].dwell > 0.0)
            .map(|w| w[m].dwell / w[0].dwell)
            .collect()
    }
}

/// Length of the longest suffix of `visits` that follows the successor map of
/// `cycle`.
fn trailing_run(visits: &[Visit], cycle: &CycleSpec) -> usize {
    let m = cycle.len();
    let next = |n: NodeId| cycle.position(n).map(|p| cycle.nodes[(p + 1) % m]);
    let Some(last) = visits.last() else {
        return 0;
    };
    if cycle.position(last.node).is_none() {
        return 0;
    }
    let mut len = 1;
    for w in visits.windows(2).rev() {
        if next(w[0].node) == Some(w[1].node) {
            len += 1;
        } else {
            break;
        }
    }
    len
}

/// Reads the visit sequence off the ball events of `traj` (computed with
/// radius [`Trajectory::eta`]) and matches it against the elementary cycles.
pub fn extract_itinerary(traj: &Trajectory) -> Itinerary {
    itinerary_from_events(&traj.events, traj.t_end)
}

/// Itinerary of a run that ended at `t_end` with the given ball events.
pub fn itinerary_from_events(events: &[BallEvent], t_end: f64) -> Itinerary {
    let mut visits: Vec<Visit> = Vec::new();
    let mut open: Option<(NodeId, f64)> = None;
    for ev in events {
        match ev.kind {
            Crossing::Enter => open = Some((ev.node, ev.time)),
            Crossing::Exit => {
                if let Some((node, entry)) = open.take() {
                    push_visit(&mut visits, node, entry, ev.time, true);
                }
            }
        }
    }
    if let Some((node, entry)) = open {
        push_visit(&mut visits, node, entry, t_end, false);
    }

    let non_network_transitions = visits
        .windows(2)
        .filter(|w| edge_between(w[0].node, w[1].node).is_none())
        .count();

    let mut best: Option<(CycleSpec, usize)> = None;
    for cycle in elementary_cycles() {
        let run = trailing_run(&visits, &cycle);
        let laps = run / cycle.len();
        // Prefer more laps, then the longer cycle: a five-node run also
        // repeats shorter node patterns only by accident.
        let better = match &best {
            None => laps > 0,
            Some((c, l)) => laps > *l || (laps == *l && laps > 0 && cycle.len() > c.len()),
        };
        if better {
            best = Some((cycle, laps));
        }
    }
    let (matched_cycle, laps) = match best {
        Some((c, l)) if l >= 2 => (Some(c), l),
        Some((_, l)) => (None, l),
        None => (None, 0),
    };
    Itinerary {
        visits,
        matched_cycle,
        laps,
        non_network_transitions,
    }
}

/// Appends a visit, merging it with the previous one when the trajectory
/// left and re-entered the same ball.
fn push_visit(visits: &mut Vec<Visit>, node: NodeId, entry: f64, exit: f64, complete: bool) {
    if let Some(last) = visits.last_mut() {
        if last.node == node {
            last.dwell = exit - last.entry;
            last.complete = complete;
            return;
        }
    }
    visits.push(Visit {
        node,
        entry,
        dwell: exit - entry,
        complete,
    });
}
