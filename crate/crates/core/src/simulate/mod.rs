//! Direct numerical integration of the Lotka–Volterra field, equilibrium
//! visit itineraries and basin sampling.
//!
//! The integrator works in logarithmic coordinates `y_i = ln x_i`, where the
//! field becomes `ẏ_i = τ_i − Σ_j ρ_ij x_j`. Coordinates that start at zero
//! are frozen at exactly zero, so every coordinate hyperplane stays invariant.

mod arcs;
mod basin;
mod itinerary;

pub use arcs::{connection_arc, NetworkArcs, ARC_POINTS};
pub use basin::{
    basin_sample, network_attraction_from, network_attraction_test, network_census, BasinOptions, BasinResult, Census,
    NetworkAttraction, NetworkSample, SampleOutcome, NETWORK_REACHED, NETWORK_START_RADIUS,
};
pub use itinerary::{extract_itinerary, itinerary_from_events, Itinerary, Visit};

use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::error::{Error, Result};
use crate::model::LVSystem;
use crate::network::NodeId;

pub const DIM: usize = 5;
pub type State = [f64; DIM];

/// Default level below which a coordinate ends the run.
pub const ABSORB_LEVEL: f64 = 1e-250;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    /// Radius of the balls around the axis equilibria used for visit events.
    pub eta: f64,
    /// Keep every accepted step in [`Trajectory::states`].
    pub record: bool,
    /// The run ends once some coordinate falls below this level.
    pub absorb_level: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h_init: 1e-3,
            h_max: 2.0,
            eta: 0.05,
            record: true,
            absorb_level: ABSORB_LEVEL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Completed,
    /// Some coordinate fell below [`IntegrateOptions::absorb_level`].
    Absorbed,
    /// The observer asked to stop.
    Stopped,
    StepUnderflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Crossing {
    Enter,
    Exit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallEvent {
    pub time: f64,
    pub node: NodeId,
    pub kind: Crossing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub events: Vec<BallEvent>,
    pub status: Status,
    pub t_end: f64,
    pub final_state: State,
    /// Ball radius used for the visit events.
    pub eta: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    /// Writes `t,x1,..,x5` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x1,x2,x3,x4,x5")?;
        for (t, x) in self.times.iter().zip(&self.states) {
            write!(w, "{t:e}")?;
            for v in x {
                write!(w, ",{v:e}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Euclidean distance from `x` to the equilibrium on axis `k`.
pub fn distance_to_axis(x: &State, k: usize) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| if i == k { (v - 1.0).powi(2) } else { v * v })
        .sum::<f64>()
        .sqrt()
}

fn ball_of(x: &State, eta: f64) -> Option<usize> {
    (0..DIM).find(|&k| distance_to_axis(x, k) < eta)
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct LogField<'a> {
    sys: &'a LVSystem,
    active: [bool; DIM],
}

impl LogField<'_> {
    fn to_x(&self, y: &State) -> State {
        let mut x = [0.0; DIM];
        for i in 0..DIM {
            if self.active[i] {
                x[i] = y[i].exp();
            }
        }
        x
    }

    fn eval(&self, y: &State) -> State {
        let x = self.to_x(y);
        let mut f = [0.0; DIM];
        for i in 0..DIM {
            if self.active[i] {
                f[i] = self.sys.growth(i, &x);
            }
        }
        f
    }
}

/// Cubic Hermite interpolation between two accepted points.
fn hermite(y0: &State, f0: &State, y1: &State, f1: &State, h: f64, s: f64) -> State {
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    }
    out
}

pub fn integrate(sys: &LVSystem, x0: &[f64], t_max: f64, opts: &IntegrateOptions) -> Result<Trajectory> {
    integrate_observed(sys, x0, t_max, opts, |_, _, _| Control::Continue)
}

/// Like [`integrate`], calling `observe` with the time, state and ball events
/// so far after every accepted step.
pub fn integrate_observed<F>(
    sys: &LVSystem,
    x0: &[f64],
    t_max: f64,
    opts: &IntegrateOptions,
    mut observe: F,
) -> Result<Trajectory>
where
    F: FnMut(f64, &State, &[BallEvent]) -> Control,
{
    if sys.n() != DIM || x0.len() != DIM {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            got: if sys.n() != DIM { sys.n() } else { x0.len() },
        });
    }
    if !(t_max > 0.0) {
        return Err(Error::Precondition(format!("t_max must be positive, got {t_max}")));
    }
    if !(opts.eta > 0.0 && opts.eta < 0.5) {
        return Err(Error::Precondition(format!(
            "eta must lie in (0, 0.5), got {}",
            opts.eta
        )));
    }
    if x0.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::Precondition(format!(
            "initial state must be finite and non-negative, got {x0:?}"
        )));
    }

    let mut active = [false; DIM];
    let mut y = [f64::NEG_INFINITY; DIM];
    for i in 0..DIM {
        if x0[i] > 0.0 {
            active[i] = true;
            y[i] = x0[i].ln();
        }
    }
    let field = LogField { sys, active };
    let log_floor = opts.absorb_level.ln();

    let mut x = field.to_x(&y);
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        events: Vec::new(),
        status: Status::Completed,
        t_end: 0.0,
        final_state: x,
        eta: opts.eta,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    if opts.record {
        traj.times.push(0.0);
        traj.states.push(x);
    }
    let mut inside = ball_of(&x, opts.eta);
    if let Some(k) = inside {
        traj.events.push(BallEvent {
            time: 0.0,
            node: NodeId::from_index(k)?,
            kind: Crossing::Enter,
        });
    }
    if active.iter().any(|&a| a) && y.iter().zip(&active).any(|(v, &a)| a && *v < log_floor) {
        traj.status = Status::Absorbed;
        return Ok(traj);
    }

    let mut t = 0.0;
    let mut h = opts.h_init.min(t_max);
    let mut k = [[0.0; DIM]; 7];
    k[0] = field.eval(&y);
    let mut stage = [0.0; DIM];

    while t < t_max {
        if t + h > t_max {
            h = t_max - t;
        }
        for s in 1..7 {
            for i in 0..DIM {
                let mut acc = y[i];
                if active[i] {
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += h * A[s][j] * kj[i];
                    }
                }
                stage[i] = acc;
            }
            k[s] = field.eval(&stage);
        }
        // The seventh stage point is the fifth-order solution.
        let y_new = stage;
        let mut err = 0.0;
        let mut count = 0usize;
        for i in 0..DIM {
            if !active[i] {
                continue;
            }
            let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h;
            // An absolute log error of rtol is a relative error of rtol in x.
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs()).max(1.0);
            err += (e / sc).powi(2);
            count += 1;
        }
        let err = if count == 0 { 0.0 } else { (err / count as f64).sqrt() };

        if !err.is_finite() || err > 1.0 {
            traj.rejected_steps += 1;
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).max(0.1)
            } else {
                0.1
            };
            h *= fac;
            if h < 1e-14 * t.abs().max(1.0) {
                traj.status = Status::StepUnderflow;
                break;
            }
            continue;
        }

        let t_new = t + h;
        let x_new = field.to_x(&y_new);
        detect_crossings(
            &field,
            &y,
            &k[0],
            &y_new,
            &k[6],
            t,
            h,
            opts.eta,
            &mut inside,
            &mut traj.events,
        )?;
        t = t_new;
        y = y_new;
        x = x_new;
        k[0] = k[6];
        traj.accepted_steps += 1;
        if opts.record {
            traj.times.push(t);
            traj.states.push(x);
        }

        let fac = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * fac).min(opts.h_max);

        if y.iter().zip(&active).any(|(v, &a)| a && *v < log_floor) {
            traj.status = Status::Absorbed;
            break;
        }
        if observe(t, &x, &traj.events) == Control::Stop {
            traj.status = Status::Stopped;
            break;
        }
    }
    traj.t_end = t;
    traj.final_state = x;
    Ok(traj)
}

/// Checks ball membership at the step ends and three interior points and
/// locates every change by bisection on the interpolant.
#[allow(clippy::too_many_arguments)]
fn detect_crossings(
    field: &LogField,
    y0: &State,
    f0: &State,
    y1: &State,
    f1: &State,
    t0: f64,
    h: f64,
    eta: f64,
    inside: &mut Option<usize>,
    events: &mut Vec<BallEvent>,
) -> Result<()> {
    let at = |s: f64| field.to_x(&hermite(y0, f0, y1, f1, h, s));
    let mut s_prev = 0.0;
    for &s in &[0.25, 0.5, 0.75, 1.0] {
        let x = if s == 1.0 { field.to_x(y1) } else { at(s) };
        let now = ball_of(&x, eta);
        if now != *inside {
            // Exit the old ball first, then enter the new one.
            if let Some(old) = *inside {
                let ts = bisect(s_prev, s, |u| distance_to_axis(&at(u), old) < eta);
                events.push(BallEvent {
                    time: t0 + ts * h,
                    node: NodeId::from_index(old)?,
                    kind: Crossing::Exit,
                });
            }
            if let Some(new) = now {
                let ts = bisect(s_prev, s, |u| distance_to_axis(&at(u), new) >= eta);
                events.push(BallEvent {
                    time: t0 + ts * h,
                    node: NodeId::from_index(new)?,
                    kind: Crossing::Enter,
                });
            }
            *inside = now;
        }
        s_prev = s;
    }
    Ok(())
}

/// Finds the switch point of `before` on `[lo, hi]`, where it holds at `lo`
/// and fails at `hi`.
fn bisect(mut lo: f64, mut hi: f64, before: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if before(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
