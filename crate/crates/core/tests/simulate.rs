use hetlab::model::{rspls_system, GameParameters};
use hetlab::network::{CycleKind, CycleSpec, NodeId};
use hetlab::simulate::{
    basin_sample, extract_itinerary, integrate, integrate_observed, network_attraction_from, network_attraction_test,
    BasinOptions, Control, IntegrateOptions, Itinerary, NetworkArcs, State, Status, NETWORK_REACHED,
};
use hetlab::stability::{classify_point, Classification};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gp(ca: f64, cb: f64) -> GameParameters {
    GameParameters::new(ca, cb, 1.0, 0.8).unwrap()
}

fn eas() -> GameParameters {
    gp(3.0, 2.0)
}

#[test]
fn axis_equilibrium_is_constant() {
    let sys = rspls_system(&eas());
    for k in 0..5 {
        let mut x0 = [0.0; 5];
        x0[k] = 1.0;
        let traj = integrate(&sys, &x0, 100.0, &IntegrateOptions::default()).unwrap();
        assert_eq!(traj.status, Status::Completed);
        assert!(traj.states.iter().all(|s| *s == x0));
        let it = extract_itinerary(&traj);
        assert_eq!(it.visits.len(), 1);
        assert_eq!(it.visits[0].node, NodeId::from_index(k).unwrap());
        assert!(it.matched_cycle.is_none());
    }
}

#[test]
fn zero_coordinates_stay_zero() {
    let sys = rspls_system(&gp(1.4, 2.0));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let mut x0 = [0.0; 5];
        for v in x0.iter_mut() {
            if rng.gen_bool(0.6) {
                *v = rng.gen_range(0.01..1.0);
            }
        }
        let traj = integrate(&sys, &x0, 200.0, &IntegrateOptions::default()).unwrap();
        for s in &traj.states {
            for i in 0..5 {
                if x0[i] == 0.0 {
                    assert_eq!(s[i], 0.0);
                } else {
                    assert!(s[i] >= 0.0);
                }
            }
        }
    }
}

#[test]
fn forward_orbits_are_bounded() {
    let sys = rspls_system(&eas());
    let bound = 2.0 * sys.tau().iter().cloned().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let x0: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..3.0)).collect();
        let traj = integrate(&sys, &x0, 200.0, &IntegrateOptions::default()).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            if *t > 20.0 {
                let m = s.iter().cloned().fold(0.0, f64::max);
                assert!(m <= bound, "{m} at t={t} from {x0:?}");
            }
        }
    }
}

fn near_rtop() -> State {
    // Just off the connection from ξ1 to ξ2, with the other species small.
    [0.6, 0.4, 1e-3, 2e-3, 1e-3]
}

/// Itinerary of a run that stops after `laps` laps of some cycle.
fn run_laps(p: &GameParameters, x0: &State, laps: usize) -> Itinerary {
    let sys = rspls_system(p);
    let opts = BasinOptions::default().integrator();
    let mut seen = 0;
    let traj = integrate_observed(&sys, x0, 1e9, &opts, |t, _, events| {
        if events.len() != seen {
            seen = events.len();
            if hetlab::simulate::itinerary_from_events(events, t).laps >= laps {
                return Control::Stop;
            }
        }
        Control::Continue
    })
    .unwrap();
    extract_itinerary(&traj)
}

#[test]
fn eas_cycle_is_shadowed() {
    let it = run_laps(&eas(), &near_rtop(), 3);
    let c = it.matched_cycle.clone().expect("a matched cycle");
    assert!(c.same_cycle(&CycleSpec::canonical(CycleKind::RockToPaper)), "{c:?}");
    assert!(it.laps >= 2);
    assert!(!it.non_network());
    let ratios = it.dwell_ratios();
    assert!(!ratios.is_empty());
    assert!(ratios.iter().all(|r| *r >= 1.0 - 1e-3), "{ratios:?}");
}

#[test]
fn distance_to_network_shrinks_lap_by_lap() {
    let p = eas();
    let sys = rspls_system(&p);
    let net = NetworkArcs::new(&sys).unwrap();
    let opts = BasinOptions::default().integrator();
    // Largest distance to the network between consecutive entries to ξ1.
    let mut per_lap: Vec<f64> = vec![0.0];
    let mut entries = 0;
    // Start inside the ball at ξ1, so the first entry is at t = 0.
    let x0 = [0.98, 0.01, 0.005, 0.005, 0.005];
    integrate_observed(&sys, &x0, 1e9, &opts, |_, x, events| {
        let n = events
            .iter()
            .filter(|e| e.node.index() == 0 && e.kind == hetlab::simulate::Crossing::Enter)
            .count();
        if n != entries {
            entries = n;
            per_lap.push(0.0);
        }
        let d = net.distance(x);
        let last = per_lap.last_mut().unwrap();
        *last = last.max(d);
        if entries >= 4 {
            Control::Stop
        } else {
            Control::Continue
        }
    })
    .unwrap();
    // Drop the lap that had just started.
    let laps = &per_lap[1..per_lap.len() - 1];
    assert_eq!(laps.len(), 3, "{per_lap:?}");
    // Below this the dense arcs no longer resolve the orbit.
    let resolution = 1e-6;
    assert!(laps[1] < laps[0], "{laps:?}");
    for w in laps.windows(2) {
        assert!(w[1] < w[0] || w[0] < resolution, "{laps:?}");
    }
}

#[test]
fn absorption_ends_long_runs() {
    let sys = rspls_system(&eas());
    let traj = integrate(
        &sys,
        &near_rtop(),
        1e7,
        &IntegrateOptions {
            record: false,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(traj.status, Status::Absorbed);
    assert!(traj.final_state.iter().any(|v| *v < 1e-240));
}

#[test]
fn three_node_cycle_attracts_part_of_its_tube() {
    let res = basin_sample(
        &gp(1.2, 4.0),
        &CycleSpec::canonical(CycleKind::Rsp),
        20,
        1,
        &BasinOptions::default(),
    )
    .unwrap();
    assert!(res.shadow_fraction > 0.0, "{}", res.shadow_fraction);
    assert!(res.matched_fraction(CycleKind::Rsp) > 0.5);
}

#[test]
fn sampling_preconditions() {
    let spec = CycleSpec::canonical(CycleKind::Star);
    let o = BasinOptions::default();
    assert!(basin_sample(&eas(), &spec, 0, 1, &o).is_err());
    assert!(basin_sample(&eas(), &spec, 1, 1, &BasinOptions { delta: 0.3, ..o }).is_err());
    assert!(basin_sample(
        &eas(),
        &spec,
        1,
        1,
        &BasinOptions {
            sample_radius: Some(0.1),
            ..o
        }
    )
    .is_err());
    assert!(network_attraction_test(&eas(), 0, 1, &o).is_err());
}

#[test]
fn unstable_cycle_attracts_almost_nothing() {
    let o = BasinOptions {
        stop_on_exit: true,
        ..Default::default()
    };
    let res = basin_sample(&eas(), &CycleSpec::canonical(CycleKind::Star), 200, 2, &o).unwrap();
    assert!(res.fraction <= 0.05, "{}", res.fraction);
}

#[test]
fn strict_fraction_grows_as_the_start_tube_narrows() {
    let spec = CycleSpec::canonical(CycleKind::RockToPaper);
    let frac = |r: f64| {
        let o = BasinOptions {
            stop_on_exit: true,
            sample_radius: Some(r),
            ..Default::default()
        };
        basin_sample(&eas(), &spec, 60, 3, &o).unwrap().fraction
    };
    let wide = frac(0.05);
    let narrow = frac(0.002);
    assert!(narrow > wide, "{wide} vs {narrow}");
    assert!(narrow >= 0.4, "{narrow}");
}

/// Points inside each kind of region, away from the boundaries, where the
/// dwell times stay short enough for three laps.
const REGION_POINTS: [(f64, f64); 20] = [
    (4.5, 2.0),
    (2.5, 1.2),
    (3.5, 1.0),
    (2.8, 1.5),
    (1.1, 1.2),
    (1.5, 1.5),
    (1.5, 2.5),
    (1.4, 2.0),
    (2.5, 4.8),
    (2.0, 3.5),
    (2.2, 4.0),
    (1.2, 4.0),
    (1.0, 4.5),
    (1.1, 3.0),
    (1.6, 4.6),
    (1.05, 3.6),
    (1.3, 3.0),
    (1.0, 2.0),
    (1.2, 1.6),
    (1.15, 2.2),
];

#[test]
fn simulation_agrees_with_classification() {
    let strict = BasinOptions {
        stop_on_exit: true,
        ..Default::default()
    };
    let mut seen = std::collections::HashSet::new();
    for (ca, cb) in REGION_POINTS {
        let p = gp(ca, cb);
        let report = classify_point(&p);
        let attracting: Vec<_> = CycleKind::ALL
            .into_iter()
            .filter(|k| report.generic(*k).is_attracting())
            .collect();
        assert!(attracting.len() <= 1, "({ca}, {cb})");
        seen.insert(attracting.first().map(|k| (*k, report.generic(*k))));
        for kind in CycleKind::ALL {
            let spec = CycleSpec::canonical(kind);
            match report.generic(kind) {
                Classification::Fas | Classification::Eas => {
                    let res = basin_sample(&p, &spec, 10, 3, &BasinOptions::default()).unwrap();
                    let own = res
                        .samples
                        .iter()
                        .filter(|s| s.matched == Some(kind) && s.laps >= 2)
                        .count();
                    let other = res
                        .samples
                        .iter()
                        .filter(|s| s.matched.is_some_and(|m| m != kind) && s.laps >= 2)
                        .count();
                    assert!(own > other, "{kind} at ({ca}, {cb}): {own} vs {other}");
                }
                Classification::CompletelyUnstable => {
                    let res = basin_sample(&p, &spec, 20, 3, &strict).unwrap();
                    assert!(res.fraction <= 0.05, "{kind} at ({ca}, {cb}): {}", res.fraction);
                }
                c => panic!("{kind} at ({ca}, {cb}) is {c}"),
            }
        }
    }
    // Every region kind is represented, including the all-unstable one.
    assert_eq!(seen.len(), 5, "{seen:?}");
}

#[test]
fn network_attracts_in_proven_regime() {
    let p = gp(1.4, 2.0);
    assert!(p.as_regime());
    let res = network_attraction_test(&p, 100, 11, &BasinOptions::default()).unwrap();
    assert_eq!(res.fraction, 1.0);
    assert!(res.samples.iter().all(|s| s.initial_distance < 0.3 + 1e-12));
    assert!(res.samples.iter().all(|s| s.x0.iter().all(|v| *v > 0.0)));

    let net = NetworkArcs::new(&rspls_system(&p)).unwrap();
    let axis = [[0.0, 0.0, 1.0, 0.0, 0.0]];
    let res = network_attraction_from(&p, &net, &axis, &BasinOptions::default()).unwrap();
    assert_eq!(res.samples[0].initial_distance, 0.0);
    assert!(res.samples[0].final_distance < NETWORK_REACHED);
    assert_eq!(res.fraction, 1.0);
}

#[test]
fn network_test_outside_regime_still_reports() {
    let p = gp(0.5, 0.4);
    let res = network_attraction_test(
        &p,
        3,
        1,
        &BasinOptions {
            t_max: 1e3,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(!res.as_regime);
    assert!((0.0..=1.0).contains(&res.fraction));
}

#[test]
fn worker_count_does_not_change_results() {
    let p = gp(1.2, 4.0);
    let spec = CycleSpec::canonical(CycleKind::Rsp);
    let run = |jobs| {
        basin_sample(
            &p,
            &spec,
            24,
            9,
            &BasinOptions {
                jobs: Some(jobs),
                ..Default::default()
            },
        )
        .unwrap()
    };
    assert_eq!(run(1), run(4));
    let net = |jobs| {
        network_attraction_test(
            &gp(1.4, 2.0),
            12,
            9,
            &BasinOptions {
                jobs: Some(jobs),
                ..Default::default()
            },
        )
        .unwrap()
    };
    assert_eq!(net(1), net(4));
}

#[test]
fn trajectory_and_itinerary_export() {
    let sys = rspls_system(&eas());
    let traj = integrate(&sys, &near_rtop(), 50.0, &IntegrateOptions::default()).unwrap();
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,x3,x4,x5"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), traj.states.len());
    for (row, (t, s)) in rows.iter().zip(traj.times.iter().zip(&traj.states)) {
        assert_eq!(row[0], *t);
        assert_eq!(&row[1..], s.as_slice());
    }
    let it = extract_itinerary(&traj);
    let json = serde_json::to_string(&it).unwrap();
    let back: Itinerary = serde_json::from_str(&json).unwrap();
    assert_eq!(back, it);
}
