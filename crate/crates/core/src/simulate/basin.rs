use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{
    distance_to_axis, extract_itinerary, integrate_observed, itinerary_from_events, Control, IntegrateOptions,
    NetworkArcs, State, Status, DIM,
};
use crate::error::{Error, Result};
use crate::model::{rspls_system, GameParameters, LVSystem};
use crate::network::{CycleKind, CycleSpec};

/// Sampling runs are integrated in logarithmic coordinates without an
/// absorption level: dwell times grow geometrically, so the observation
/// window is counted in visits rather than time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasinOptions {
    /// Tube radius around the connections: a sample must stay inside it.
    pub delta: f64,
    /// Radius of the tube the starts are drawn from; `None` means `delta`.
    pub sample_radius: Option<f64>,
    /// Stop a run as soon as it leaves the tube. Its matched cycle is then
    /// not observed.
    pub stop_on_exit: bool,
    pub eta: f64,
    /// Laps of the target cycle required to count a sample as attracted.
    pub laps: usize,
    /// A run stops once its trailing visits follow some cycle this many laps.
    pub stop_laps: usize,
    /// A run stops after this many visits.
    pub max_visits: usize,
    pub t_max: f64,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

impl Default for BasinOptions {
    fn default() -> Self {
        Self {
            delta: 0.05,
            sample_radius: None,
            stop_on_exit: false,
            eta: 0.05,
            laps: 2,
            stop_laps: 3,
            max_visits: 30,
            t_max: 1e9,
            jobs: None,
        }
    }
}

impl BasinOptions {
    /// Integrator settings used for every sampled run.
    pub fn integrator(&self) -> IntegrateOptions {
        IntegrateOptions {
            eta: self.eta,
            record: false,
            absorb_level: 0.0,
            h_max: f64::INFINITY,
            ..IntegrateOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: usize,
    pub x0: State,
    pub matched: Option<CycleKind>,
    pub laps: usize,
    /// Largest distance to the target cycle seen along the run.
    pub max_distance: f64,
    pub status: Status,
    /// The trailing visits follow the target cycle for the required laps.
    pub shadowed: bool,
    /// Shadowed and never farther than `delta` from the target cycle.
    pub attracted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinResult {
    pub cycle: CycleSpec,
    pub n: usize,
    pub attracted: usize,
    /// Fraction of samples attracted inside the tube.
    pub fraction: f64,
    /// Fraction of samples that shadow the target cycle, wherever they went
    /// first.
    pub shadow_fraction: f64,
    pub samples: Vec<SampleOutcome>,
}

impl BasinResult {
    /// Fraction of all samples whose itinerary matched a cycle of `kind`.
    pub fn matched_fraction(&self, kind: CycleKind) -> f64 {
        self.samples.iter().filter(|s| s.matched == Some(kind)).count() as f64 / self.n as f64
    }
}

/// Independent stream for sample `index`: parallel and serial runs draw the
/// same initial conditions.
fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// A point within `radius` of a uniformly chosen (by arc length) point of
/// the given polylines, offset in the disc normal to the local tangent and
/// reflected into the non-negative orthant.
fn tube_point(arcs: &NetworkArcs, radius: f64, rng: &mut ChaCha8Rng) -> State {
    let lengths: Vec<f64> = arcs.arcs.iter().map(|(_, a)| NetworkArcs::length(a)).collect();
    let total: f64 = lengths.iter().sum();
    let mut s = rng.gen::<f64>() * total;
    let mut which = lengths.len() - 1;
    for (i, l) in lengths.iter().enumerate() {
        if s < *l {
            which = i;
            break;
        }
        s -= l;
    }
    let pts = &arcs.arcs[which].1;
    let mut seg = pts.len() - 2;
    for i in 0..pts.len() - 1 {
        let l = pts[i]
            .iter()
            .zip(&pts[i + 1])
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        if s < l || i == pts.len() - 2 {
            seg = i;
            break;
        }
        s -= l;
    }
    let (a, b) = (pts[seg], pts[seg + 1]);
    let mut tangent = [0.0; DIM];
    for d in 0..DIM {
        tangent[d] = b[d] - a[d];
    }
    let tl = tangent.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u = if tl > 0.0 { (s / tl).clamp(0.0, 1.0) } else { 0.0 };
    tangent.iter_mut().for_each(|v| *v /= tl.max(f64::MIN_POSITIVE));

    let mut dir = [0.0; DIM];
    loop {
        for v in dir.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let along: f64 = dir.iter().zip(&tangent).map(|(x, t)| x * t).sum();
        for d in 0..DIM {
            dir[d] -= along * tangent[d];
        }
        let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-12 {
            dir.iter_mut().for_each(|v| *v /= n);
            break;
        }
    }
    // Uniform in a disc of dimension DIM − 1.
    let r = radius * rng.gen::<f64>().powf(1.0 / (DIM - 1) as f64);
    let mut x = [0.0; DIM];
    for d in 0..DIM {
        x[d] = (a[d] + u * (b[d] - a[d]) + r * dir[d]).abs();
    }
    x
}

fn run_parallel<T: Send>(jobs: Option<usize>, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    match jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
            Ok(pool.install(|| (0..n).into_par_iter().map(&f).collect()))
        }
        None => Ok((0..n).into_par_iter().map(&f).collect()),
    }
}

fn check_radii(opts: &BasinOptions) -> Result<()> {
    if !(opts.delta > 0.0 && opts.delta <= 0.2) {
        return Err(Error::Precondition(format!(
            "delta must lie in (0, 0.2], got {}",
            opts.delta
        )));
    }
    if let Some(r) = opts.sample_radius {
        if !(r > 0.0 && r <= opts.delta) {
            return Err(Error::Precondition(format!(
                "sample radius must lie in (0, delta], got {r}"
            )));
        }
    }
    Ok(())
}

/// Integrates `n` starts drawn from `tube`. Distances are measured to `tube`;
/// `target` decides which matches count as shadowing.
fn sample_tube(
    sys: &LVSystem,
    tube: &NetworkArcs,
    target: Option<&CycleSpec>,
    n: usize,
    seed: u64,
    opts: &BasinOptions,
) -> Result<Vec<SampleOutcome>> {
    let mut nodes: Vec<usize> = tube
        .arcs
        .iter()
        .flat_map(|(e, _)| [e.from.index(), e.to.index()])
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    let iopts = opts.integrator();
    run_parallel(opts.jobs, n, |index| -> Result<SampleOutcome> {
        let mut rng = sample_rng(seed, index);
        let x0 = tube_point(tube, opts.sample_radius.unwrap_or(opts.delta), &mut rng);
        let mut max_distance = tube.distance(&x0);
        let mut seen = 0;
        let traj = integrate_observed(sys, &x0, opts.t_max, &iopts, |t, x, events| {
            // Inside a δ-ball around a tube node the distance is below δ.
            if !nodes.iter().any(|&k| distance_to_axis(x, k) < opts.delta) {
                max_distance = max_distance.max(tube.distance(x));
                if opts.stop_on_exit && max_distance > opts.delta {
                    return Control::Stop;
                }
            }
            if events.len() != seen {
                seen = events.len();
                let it = itinerary_from_events(events, t);
                if it.laps >= opts.stop_laps || it.visits.len() >= opts.max_visits {
                    return Control::Stop;
                }
            }
            Control::Continue
        })?;
        let it = extract_itinerary(&traj);
        let matched = it.matched_cycle.as_ref().map(|c| c.name);
        let shadowed = target.is_some_and(|cycle| {
            it.matched_cycle.as_ref().is_some_and(|c| c.same_cycle(cycle)) && it.laps >= opts.laps
        });
        let attracted = shadowed && max_distance <= opts.delta;
        Ok(SampleOutcome {
            index,
            x0,
            matched,
            laps: it.laps,
            max_distance,
            status: traj.status,
            shadowed,
            attracted,
        })
    })?
    .into_iter()
    .collect()
}

/// Samples `n` starts in the `delta`-tube around the connections of `cycle`
/// and reports which of them follow the cycle for the required number of
/// laps without leaving the tube.
pub fn basin_sample(
    params: &GameParameters,
    cycle: &CycleSpec,
    n: usize,
    seed: u64,
    opts: &BasinOptions,
) -> Result<BasinResult> {
    if n == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    check_radii(opts)?;
    let sys = rspls_system(params);
    let tube = NetworkArcs::new(&sys)?.restricted(cycle);
    let samples = sample_tube(&sys, &tube, Some(cycle), n, seed, opts)?;
    let attracted = samples.iter().filter(|s| s.attracted).count();
    let shadowed = samples.iter().filter(|s| s.shadowed).count();
    Ok(BasinResult {
        cycle: cycle.clone(),
        n,
        attracted,
        fraction: attracted as f64 / n as f64,
        shadow_fraction: shadowed as f64 / n as f64,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub n: usize,
    /// Samples per matched cycle family; unmatched runs are not counted.
    pub matched: BTreeMap<CycleKind, usize>,
    pub samples: Vec<SampleOutcome>,
}

impl Census {
    /// The family matched by most samples, if any sample matched.
    pub fn majority(&self) -> Option<CycleKind> {
        self.matched.iter().max_by_key(|(_, c)| **c).map(|(k, _)| *k)
    }

    pub fn matched_total(&self) -> usize {
        self.matched.values().sum()
    }
}

/// Samples `n` starts in the `delta`-tube around the whole network and
/// records which cycle each run ends up shadowing.
pub fn network_census(params: &GameParameters, n: usize, seed: u64, opts: &BasinOptions) -> Result<Census> {
    if n == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    check_radii(opts)?;
    let sys = rspls_system(params);
    let tube = NetworkArcs::new(&sys)?;
    let samples = sample_tube(&sys, &tube, None, n, seed, opts)?;
    let mut matched = BTreeMap::new();
    for k in samples.iter().filter_map(|s| s.matched) {
        *matched.entry(k).or_insert(0) += 1;
    }
    Ok(Census { n, matched, samples })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSample {
    pub x0: State,
    pub initial_distance: f64,
    pub final_distance: f64,
    pub reached: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkAttraction {
    pub params: GameParameters,
    /// Only inside the proven regime does the fraction test a claim.
    pub as_regime: bool,
    pub fraction: f64,
    pub samples: Vec<NetworkSample>,
}

/// Distance below which a trajectory counts as having reached the network.
pub const NETWORK_REACHED: f64 = 0.01;
/// Starting points lie within this distance of the network.
pub const NETWORK_START_RADIUS: f64 = 0.3;

/// Starts `n` interior trajectories near the network and reports the
/// fraction that come within [`NETWORK_REACHED`] of it before `t_max`.
pub fn network_attraction_test(
    params: &GameParameters,
    n: usize,
    seed: u64,
    opts: &BasinOptions,
) -> Result<NetworkAttraction> {
    if n == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    let sys = rspls_system(params);
    let net = NetworkArcs::new(&sys)?;
    let samples = (0..n).map(|index| tube_point(&net, NETWORK_START_RADIUS, &mut sample_rng(seed, index)));
    let starts: Vec<State> = samples.collect();
    network_attraction_from(params, &net, &starts, opts)
}

/// [`network_attraction_test`] from explicit starting points.
pub fn network_attraction_from(
    params: &GameParameters,
    net: &NetworkArcs,
    starts: &[State],
    opts: &BasinOptions,
) -> Result<NetworkAttraction> {
    let sys = rspls_system(params);
    let iopts = opts.integrator();
    let samples = run_parallel(opts.jobs, starts.len(), |i| -> Result<NetworkSample> {
        let x0 = starts[i];
        let initial_distance = net.distance(&x0);
        let mut last = initial_distance;
        if initial_distance >= NETWORK_REACHED {
            integrate_observed(&sys, &x0, opts.t_max, &iopts, |_, x, _| {
                last = net.distance(x);
                if last < NETWORK_REACHED {
                    Control::Stop
                } else {
                    Control::Continue
                }
            })?;
        }
        Ok(NetworkSample {
            x0,
            initial_distance,
            final_distance: last,
            reached: last < NETWORK_REACHED,
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let reached = samples.iter().filter(|s| s.reached).count();
    Ok(NetworkAttraction {
        params: *params,
        as_regime: params.as_regime(),
        fraction: reached as f64 / samples.len().max(1) as f64,
        samples,
    })
}
