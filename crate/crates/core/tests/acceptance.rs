//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use hetlab::model::GameParameters;
use hetlab::network::{CycleKind, CycleSpec, NodeId};
use hetlab::simulate::{basin_sample, network_attraction_test, BasinOptions};
use hetlab::stability::{
    classify_point, derived_constants, mutual_exclusion_check, stability_indices_closed_form,
    stability_indices_generic, Classification,
};
use hetlab::sweep::{run_sweep, AxisRange, RegionCode, SweepConfig, SweepResult};
use hetlab::transition::{product_chain, ClosedFormTable};
use hetlab::verify::{random_points, verify_points, PRODUCT_TOL};
use nalgebra::Matrix3;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn gp(ca: f64, cb: f64) -> GameParameters {
    GameParameters::new(ca, cb, 1.0, 0.8).unwrap()
}

fn closed_grid(n: usize, jobs: usize) -> SweepConfig {
    let axis = AxisRange {
        lo: 1.0,
        hi: 5.0,
        open_low: false,
    };
    SweepConfig {
        c_a: axis,
        c_b: axis,
        grid: n,
        jobs: Some(jobs),
        ..Default::default()
    }
}

fn table_fidelity() -> Outcome {
    let t = Instant::now();
    let pts = random_points(1000, 7);
    let report = verify_points(&pts, &ClosedFormTable::corrected(), PRODUCT_TOL).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let products: Vec<_> = report
        .items
        .iter()
        .filter(|i| i.name.starts_with("closed form"))
        .collect();
    let worst = products.iter().map(|i| i.max_error).fold(0.0, f64::max);
    let ok = !products.is_empty() && products.iter().all(|i| i.passed && i.checked == 1000) && secs < 5.0;
    outcome(
        ok,
        format!(
            "{} tables, worst relative error {worst:.2e}, {secs:.2} s",
            products.len()
        ),
    )
}

fn eigenstructure() -> Outcome {
    let pts = random_points(1000, 8);
    let report = verify_points(&pts, &ClosedFormTable::corrected(), PRODUCT_TOL).unwrap();
    let items: Vec<_> = report
        .items
        .iter()
        .filter(|i| i.name.starts_with("three-node"))
        .collect();
    let mut ok = items.len() == 2 && items.iter().all(|i| i.passed && i.tol <= 1e-9);
    // Leading eigenpair from a dense eigensolve.
    let rsp = CycleSpec::canonical(CycleKind::Rsp);
    let mut worst = 0.0f64;
    for p in &pts {
        let k = derived_constants(p);
        for start in 0..3 {
            let m = product_chain(&rsp, start, p).unwrap().pop().unwrap().entries;
            let m = Matrix3::from_fn(|i, j| m.0[i][j]);
            let lead = m
                .complex_eigenvalues()
                .iter()
                .map(|z| z.re)
                .fold(f64::NEG_INFINITY, f64::max);
            if k.delta_t > 1.0 {
                worst = worst.max((lead - k.delta_t).abs() / k.delta_t);
            }
        }
    }
    ok &= worst <= 1e-9;
    let detail = items
        .iter()
        .map(|i| format!("{} {:.2e}", i.name, i.max_error))
        .chain([format!("dense leading eigenvalue {worst:.2e}")])
        .collect::<Vec<_>>()
        .join(", ");
    outcome(ok, detail)
}

/// `grid_secs` is the time spent computing `grid`, which counts towards the budget.
fn closed_form_vs_generic(grid: &SweepResult, grid_secs: f64) -> Outcome {
    let t = Instant::now();
    let mut conflicts = 0;
    let mut definite = 0;
    let mut rsp_pairs = 0;
    let mut rsp_worst = 0.0f64;
    for px in grid.pixels() {
        let report = classify_point(&GameParameters::new(px.c_a, px.c_b, 1.0, 0.8).unwrap());
        for (kind, v) in &report.cycles {
            if v.generic.classification == Classification::Marginal {
                continue;
            }
            if v.regime.is_definite() && v.closed_form.classification.is_definite() {
                definite += 1;
            }
            if !v.agree {
                conflicts += 1;
            }
            if *kind == CycleKind::Rsp {
                for (g, c) in v.generic.per_connection.iter().zip(&v.closed_form.per_connection) {
                    if g.value.is_finite() && c.value.is_finite() {
                        rsp_pairs += 1;
                        rsp_worst = rsp_worst.max((g.value - c.value).abs() / c.value.abs().max(1.0));
                    }
                }
            }
        }
    }
    let secs = t.elapsed().as_secs_f64() + grid_secs;
    let ok = conflicts == 0 && definite > 0 && rsp_pairs > 0 && rsp_worst <= 1e-9 && secs < 30.0;
    outcome(
        ok,
        format!(
            "{conflicts} conflicts over {definite} definite verdicts, {rsp_pairs} three-node index pairs within {rsp_worst:.2e}, {secs:.1} s"
        ),
    )
}

fn pinned_indices() -> Outcome {
    let p = gp(1.2, 4.0);
    let rsp = CycleSpec::canonical(CycleKind::Rsp);
    let node = |i| NodeId::from_index(i).unwrap();
    let expected_12 = -1.0 + p.e_a / p.e_b;
    let expected_31 = 1.0 - 0.8 * p.c_b + p.c_a;
    let mut ok =
        (1.0 + p.c_a) / p.c_b <= 0.8 && (expected_12 - 0.25).abs() < 1e-15 && (expected_31 + 1.0).abs() < 1e-12;
    let mut detail = Vec::new();
    for report in [
        stability_indices_generic(&rsp, &p),
        stability_indices_closed_form(&rsp, &p),
    ] {
        let at = |from: usize, to: usize| {
            report
                .per_connection
                .iter()
                .find(|s| s.connection.from == node(from) && s.connection.to == node(to))
                .map_or(f64::NAN, |s| s.value)
        };
        let (s12, s31) = (at(0, 1), at(2, 0));
        ok &= (s12 - 0.25).abs() <= 1e-12 && (s31 + 1.0).abs() <= 1e-12;
        detail.push(format!("{:?}: sigma_12 = {s12}, sigma_31 = {s31}", report.method));
    }
    outcome(ok, detail.join("; "))
}

type Curve = (&'static str, fn(f64, f64) -> f64);

/// Analytic region edges in the (c_A, c_B) plane at e_A = 1, e_B = 0.8.
const CURVES: [Curve; 5] = [
    ("rock-to-paper onset", |ca, cb| cb - 1.25 * ca),
    ("e.a.s. onset", |ca, cb| cb - (1.25 * ca - 1.0)),
    ("star onset", |ca, cb| cb - 0.8 * ca.powi(3)),
    ("theta_T = 0", |ca, cb| derived_constants(&gp(ca, cb)).theta_t),
    ("nu_T = 0", |ca, cb| derived_constants(&gp(ca, cb)).nu_t),
];

/// Indices into [`CURVES`] expected to bound the verdicts of `kind`, in
/// order of preference.
fn own_curves(kind: CycleKind, a: Classification, b: Classification) -> &'static [usize] {
    let switch = a.is_attracting() != b.is_attracting();
    match kind {
        CycleKind::RockToPaper if switch => &[0],
        CycleKind::RockToPaper => &[1],
        CycleKind::Star => &[2],
        CycleKind::Rsp => &[3, 4],
        CycleKind::FourNode => &[],
    }
}

fn region_boundaries(grid: &SweepResult) -> Outcome {
    let n = grid.width();
    let h = grid.config.c_a.step(n);
    let mut transitions = 0;
    let mut unexplained = Vec::new();
    let mut found = [0usize; CURVES.len()];
    let mut crosses = [false; CURVES.len()];
    for r in 0..n {
        for c in 0..n {
            for (r2, c2) in [(r, c + 1), (r + 1, c)] {
                if r2 >= n || c2 >= n {
                    continue;
                }
                let (p, q) = (&grid.rows[r][c], &grid.rows[r2][c2]);
                for (i, (_, g)) in CURVES.iter().enumerate() {
                    crosses[i] |= g(p.c_a, p.c_b) * g(q.c_a, q.c_b) <= 0.0;
                }
                for kind in CycleKind::ALL {
                    let (a, b) = (p.classes[&kind], q.classes[&kind]);
                    if a == b || !a.is_definite() || !b.is_definite() {
                        continue;
                    }
                    transitions += 1;
                    // The pair extended by one cell on each side.
                    let (dx, dy) = (q.c_a - p.c_a, q.c_b - p.c_b);
                    let lo = (p.c_a - dx, p.c_b - dy);
                    let hi = (q.c_a + dx, q.c_b + dy);
                    let within = |i: &usize| CURVES[*i].1(lo.0, lo.1) * CURVES[*i].1(hi.0, hi.1) <= 0.0;
                    let own = own_curves(kind, a, b).iter().copied();
                    match own.chain(0..CURVES.len()).find(|i| within(i)) {
                        Some(i) => found[i] += 1,
                        None => unexplained.push(format!("{kind} {a}->{b} at ({:.2}, {:.2})", p.c_a, p.c_b)),
                    }
                }
            }
        }
    }
    let missing: Vec<_> = (0..CURVES.len())
        .filter(|i| crosses[*i] && found[*i] == 0)
        .map(|i| CURVES[i].0)
        .collect();
    let ok = unexplained.is_empty() && missing.is_empty() && transitions > 0;
    let per_curve: Vec<String> = CURVES
        .iter()
        .zip(found.iter().zip(crosses))
        .map(|((name, _), (f, x))| {
            if x {
                format!("{name} {f}")
            } else {
                format!("{name} outside the grid")
            }
        })
        .collect();
    let mut detail = format!("{transitions} transitions, {h:.2} cell; {}", per_curve.join(", "));
    if let Some(u) = unexplained.first() {
        detail += &format!("; {} unexplained, first {u}", unexplained.len());
    }
    if !missing.is_empty() {
        detail += &format!("; no transition near {}", missing.join(", "));
    }
    outcome(ok, detail)
}

fn mutual_exclusion(grids: &[&SweepResult]) -> Outcome {
    let mut violations = 0;
    let mut pixels = 0;
    let mut all_cu = 0;
    for g in grids {
        for px in g.pixels() {
            pixels += 1;
            let p = GameParameters::new(px.c_a, px.c_b, g.config.e_a, g.config.e_b).unwrap();
            violations += mutual_exclusion_check(&p, |k| px.classes[&k])
                .iter()
                .filter(|c| c.violated())
                .count();
            if px.code == RegionCode::AllUnstable {
                all_cu += 1;
            }
        }
    }
    outcome(
        violations == 0 && all_cu > 0,
        format!("{violations} violations over {pixels} pixels, {all_cu} all-c.u. pixels"),
    )
}

fn simulation() -> Outcome {
    let t = Instant::now();
    // Two laps are what shadowing asks for; the third costs ~50x more here.
    let two_laps = BasinOptions {
        stop_laps: 2,
        ..Default::default()
    };
    let rtop = basin_sample(
        &gp(3.0, 2.0),
        &CycleSpec::canonical(CycleKind::RockToPaper),
        200,
        1,
        &two_laps,
    )
    .unwrap();
    // A longer window, so that laps of cycles sharing connections with the
    // star are not mistaken for the final verdict.
    let star = basin_sample(
        &gp(1.5, 2.5),
        &CycleSpec::canonical(CycleKind::Star),
        100,
        2,
        &BasinOptions::default(),
    )
    .unwrap();
    let shadowing = |kind| {
        star.samples
            .iter()
            .filter(|s| s.matched == Some(kind) && s.laps >= 2)
            .count()
    };
    let attracted = star
        .samples
        .iter()
        .filter(|s| s.matched.is_some() && s.laps >= 2)
        .count();
    let (on_star, on_rtop) = (shadowing(CycleKind::Star), shadowing(CycleKind::RockToPaper));
    let net = network_attraction_test(&gp(1.4, 2.0), 100, 3, &BasinOptions::default()).unwrap();
    let reached = net.samples.iter().filter(|s| s.final_distance < 0.01).count();
    let secs = t.elapsed().as_secs_f64();
    let ok = rtop.shadow_fraction >= 0.9
        && attracted >= star.n / 2
        && 2 * on_star > attracted
        && on_rtop * 20 <= attracted
        && reached == 100
        && secs < 300.0;
    outcome(
        ok,
        format!(
            "rock-to-paper shadowed {:.3} of 200; star tube: {attracted} of 100 attracted, {on_star} to star, {on_rtop} to rock-to-paper; network reached {reached}/100; {secs:.1} s",
            rtop.shadow_fraction
        ),
    )
}

fn determinism() -> Outcome {
    let sweep = |jobs| run_sweep(&closed_grid(64, jobs)).unwrap().rows;
    let sweeps_equal = sweep(1) == sweep(8);
    let basin = |jobs| {
        basin_sample(
            &gp(1.2, 4.0),
            &CycleSpec::canonical(CycleKind::Rsp),
            24,
            9,
            &BasinOptions {
                jobs: Some(jobs),
                ..Default::default()
            },
        )
        .unwrap()
    };
    let basins_equal = basin(1) == basin(8);
    outcome(
        sweeps_equal && basins_equal,
        format!("sweep identical: {sweeps_equal}, basin identical: {basins_equal}"),
    )
}

fn main() -> ExitCode {
    let t = Instant::now();
    let grid = run_sweep(&closed_grid(101, 1)).unwrap();
    let grid_secs = t.elapsed().as_secs_f64();
    let wide = run_sweep(&SweepConfig {
        grid: 256,
        ..Default::default()
    })
    .unwrap();

    let checks: [(&str, Box<dyn Fn() -> Outcome>); 8] = [
        ("closed-form products on 1000 random draws", Box::new(table_fidelity)),
        ("three-node return eigenstructure", Box::new(eigenstructure)),
        (
            "closed form against generic on a 101x101 grid",
            Box::new(|| closed_form_vs_generic(&grid, grid_secs)),
        ),
        ("pinned three-node indices at (1.2, 4)", Box::new(pinned_indices)),
        (
            "region boundaries within one cell",
            Box::new(|| region_boundaries(&grid)),
        ),
        (
            "mutual exclusion and an all-c.u. region",
            Box::new(|| mutual_exclusion(&[&grid, &wide])),
        ),
        ("simulation corroboration", Box::new(simulation)),
        ("determinism across worker counts", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} {} {name}: {} [{:.1} s]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
