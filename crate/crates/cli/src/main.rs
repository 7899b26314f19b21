use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hetlab::margin::DEFAULT_TOL;
use hetlab::model::{rspls_system, GameParameters};
use hetlab::network::{CycleKind, CycleSpec};
use hetlab::simulate::{
    basin_sample, extract_itinerary, integrate, network_attraction_test, BasinOptions, IntegrateOptions,
};
use hetlab::stability::{classify_point_tol, stability_indices_closed_form_tol, stability_indices_generic_tol};
use hetlab::sweep::{run_sweep, write_outputs, SweepConfig};
use hetlab::transition::ClosedFormTable;
use hetlab::verify::{random_points, verify_points, PRODUCT_TOL};

#[derive(Parser)]
#[command(name = "hetlab", version, about = "Stability of the RSPLS heteroclinic network")]
struct Cli {
    /// Worker threads for sweeps and sampling.
    #[arg(long, global = true, env = "HETLAB_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Point {
    #[arg(long = "ca")]
    c_a: f64,
    #[arg(long = "cb")]
    c_b: f64,
    #[arg(long = "ea", default_value_t = 1.0)]
    e_a: f64,
    #[arg(long = "eb", default_value_t = 0.8)]
    e_b: f64,
}

impl Point {
    fn params(self) -> Result<GameParameters, String> {
        GameParameters::new(self.c_a, self.c_b, self.e_a, self.e_b).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify the four cycles at one parameter point (JSON report).
    Classify {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Stability indices with the rows that produced them (JSON).
    Indices {
        #[command(flatten)]
        point: Point,
        /// Restrict to one cycle (rock-to-paper, star, rsp, four-node).
        #[arg(long)]
        cycle: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Classify every point of a (c_A, c_B) grid and write CSV and PPM.
    Sweep(SweepArgs),
    /// Check the closed-form tables against direct computation.
    Verify(VerifyArgs),
    /// Integrate the system, sample a cycle's tube, or test network attraction.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// key = value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "ea")]
    e_a: Option<f64>,
    #[arg(long = "eb")]
    e_b: Option<f64>,
    #[arg(long)]
    ca_min: Option<f64>,
    #[arg(long)]
    ca_max: Option<f64>,
    #[arg(long)]
    cb_min: Option<f64>,
    #[arg(long)]
    cb_max: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    /// Output prefix for `.csv`, `.ppm` and `.cfg`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "ca", requires = "c_b")]
    c_a: Option<f64>,
    #[arg(long = "cb", requires = "c_a")]
    c_b: Option<f64>,
    #[arg(long = "ea", default_value_t = 1.0)]
    e_a: f64,
    #[arg(long = "eb", default_value_t = 0.8)]
    e_b: f64,
    /// Number of random parameter points.
    #[arg(long, conflicts_with = "c_a")]
    random: Option<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = PRODUCT_TOL)]
    tol: f64,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
    /// Perturb one closed-form table entry (negative control).
    #[arg(long, hide = true)]
    corrupt: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    point: Point,
    /// Initial state, five comma-separated values.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["tube", "network_test"])]
    x0: Option<Vec<f64>>,
    /// Sample the tube around this cycle.
    #[arg(long, conflicts_with = "network_test")]
    tube: Option<String>,
    /// Sample around the whole network and test approach to it.
    #[arg(long)]
    network_test: bool,
    #[arg(short = 'n', long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0.05)]
    eta: f64,
    /// Radius of the sampled tube, at most delta; defaults to delta.
    #[arg(long)]
    sample_radius: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Integration horizon for a single run.
    #[arg(long, default_value_t = 1e4)]
    t_max: f64,
    /// Output prefix: `.csv` trajectory and `.json` itinerary for a single
    /// run, `.json` samples for tube and network runs.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), String> {
    let s = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    let mut out = io::stdout().lock();
    writeln!(out, "{s}").map_err(|e| e.to_string())
}

fn with_ext(prefix: &std::path::Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if cli.jobs == Some(0) {
        return Err("--jobs must be positive".into());
    }
    match cli.command {
        Command::Classify { point, tol } => {
            let rep = classify_point_tol(&point.params()?, tol);
            print_json(&rep)?;
            let bad: Vec<_> = rep
                .cycles
                .iter()
                .filter(|(_, v)| !v.generic.classification.compatible(v.closed_form.classification))
                .map(|(k, _)| k.name())
                .collect();
            if bad.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("pipelines disagree for: {}", bad.join(", "));
                Ok(ExitCode::from(1))
            }
        }
        Command::Indices { point, cycle, tol } => {
            let p = point.params()?;
            let kinds = match cycle {
                Some(c) => vec![CycleKind::parse(&c).map_err(|e| e.to_string())?],
                None => CycleKind::ALL.to_vec(),
            };
            let out: Vec<_> = kinds
                .into_iter()
                .map(|k| {
                    let spec = CycleSpec::canonical(k);
                    json!({
                        "cycle": k,
                        "generic": stability_indices_generic_tol(&spec, &p, tol),
                        "closed_form": stability_indices_closed_form_tol(&spec, &p, tol),
                    })
                })
                .collect();
            print_json(&out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(a) => sweep(a, cli.jobs),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a, cli.jobs),
    }
}

fn sweep(a: SweepArgs, jobs: Option<usize>) -> Result<ExitCode, String> {
    let mut cfg = match &a.config {
        Some(path) => SweepConfig::from_file(path).map_err(|e| e.to_string())?,
        None => SweepConfig::default(),
    };
    let set = |cfg: &mut SweepConfig, key: &str, v: Option<String>| -> Result<(), String> {
        match v {
            Some(v) => cfg.set(key, &v).map_err(|e| e.to_string()),
            None => Ok(()),
        }
    };
    let s = |v: Option<f64>| v.map(|x| x.to_string());
    set(&mut cfg, "e_a", s(a.e_a))?;
    set(&mut cfg, "e_b", s(a.e_b))?;
    set(&mut cfg, "ca_min", s(a.ca_min))?;
    set(&mut cfg, "ca_max", s(a.ca_max))?;
    set(&mut cfg, "cb_min", s(a.cb_min))?;
    set(&mut cfg, "cb_max", s(a.cb_max))?;
    set(&mut cfg, "tol", s(a.tol))?;
    set(&mut cfg, "grid", a.grid.map(|g| g.to_string()))?;
    set(&mut cfg, "seed", a.seed.map(|g| g.to_string()))?;
    if let Some(o) = a.out {
        cfg.out = Some(o);
    }
    if jobs.is_some() {
        cfg.jobs = jobs;
    }
    let res = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let paths = match &cfg.out {
        Some(prefix) => write_outputs(&res, prefix).map_err(|e| e.to_string())?.to_vec(),
        None => vec![],
    };
    let hist: serde_json::Map<_, _> = res
        .histogram()
        .into_iter()
        .map(|(k, v)| ((k as u8).to_string(), json!(v)))
        .collect();
    print_json(&json!({
        "grid": cfg.grid,
        "histogram": hist,
        "disagreements": res.disagreements(),
        "outputs": paths,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode, String> {
    let points = match (a.c_a, a.c_b, a.random) {
        (Some(ca), Some(cb), _) => vec![GameParameters::new(ca, cb, a.e_a, a.e_b).map_err(|e| e.to_string())?],
        (_, _, Some(n)) if n > 0 => random_points(n, a.seed),
        _ => return Err("give either --ca/--cb or --random N (N > 0)".into()),
    };
    let table = match &a.corrupt {
        Some(label) => ClosedFormTable::corrupted(label).map_err(|e| e.to_string())?,
        None => ClosedFormTable::corrected(),
    };
    let rep = verify_points(&points, &table, a.tol).map_err(|e| e.to_string())?;
    if a.json {
        print_json(&rep)?;
    } else {
        println!("{} parameter point(s)", rep.points);
        for i in &rep.items {
            let verdict = if i.passed { "PASS" } else { "FAIL" };
            print!(
                "{verdict}  {:<42} max error {:.3e} (tol {:.0e}, {} checks)",
                i.name, i.max_error, i.tol, i.checked
            );
            if !i.detail.is_empty() {
                print!("  [{}]", i.detail);
            }
            println!();
        }
        for d in &rep.printed_discrepancies {
            let what = match (&d.printed, &d.corrected) {
                (Some(p), Some(c)) => format!("printed {p}, corrected {c}"),
                _ => "not a known misprint".into(),
            };
            println!(
                "NOTE  published {} entry ({},{}) differs from the product: {what}",
                d.label,
                d.row + 1,
                d.col + 1
            );
        }
        for w in &rep.warnings {
            println!("WARN  {w}");
        }
    }
    Ok(if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn simulate(a: SimulateArgs, jobs: Option<usize>) -> Result<ExitCode, String> {
    let p = a.point.params()?;
    let opts = BasinOptions {
        delta: a.delta,
        eta: a.eta,
        sample_radius: a.sample_radius,
        jobs,
        ..BasinOptions::default()
    };
    if let Some(x0) = a.x0 {
        let iopts = IntegrateOptions {
            eta: a.eta,
            ..IntegrateOptions::default()
        };
        let traj = integrate(&rspls_system(&p), &x0, a.t_max, &iopts).map_err(|e| e.to_string())?;
        let it = extract_itinerary(&traj);
        if let Some(prefix) = &a.out {
            let csv = with_ext(prefix, "csv");
            let f = fs::File::create(&csv).map_err(|e| format!("cannot write {}: {e}", csv.display()))?;
            traj.write_csv(io::BufWriter::new(f)).map_err(|e| e.to_string())?;
            let js = with_ext(prefix, "json");
            let text = serde_json::to_string_pretty(&it).map_err(|e| e.to_string())?;
            fs::write(&js, text).map_err(|e| format!("cannot write {}: {e}", js.display()))?;
        }
        print_json(&json!({
            "status": traj.status,
            "t_end": traj.t_end,
            "final_state": traj.final_state,
            "steps": traj.accepted_steps,
            "itinerary": it,
        }))?;
        return Ok(ExitCode::SUCCESS);
    }
    let out = if let Some(cycle) = a.tube {
        let kind = CycleKind::parse(&cycle).map_err(|e| e.to_string())?;
        let res = basin_sample(&p, &CycleSpec::canonical(kind), a.n, a.seed, &opts).map_err(|e| e.to_string())?;
        let matched: serde_json::Map<_, _> = CycleKind::ALL
            .iter()
            .map(|k| (k.name().to_string(), json!(res.matched_fraction(*k))))
            .collect();
        print_json(&json!({
            "cycle": kind,
            "n": res.n,
            "shadow_fraction": res.shadow_fraction,
            "attracted_fraction": res.fraction,
            "matched_fraction": matched,
        }))?;
        serde_json::to_string_pretty(&res)
    } else if a.network_test {
        let res = network_attraction_test(&p, a.n, a.seed, &opts).map_err(|e| e.to_string())?;
        print_json(&json!({
            "n": res.samples.len(),
            "as_regime": res.as_regime,
            "fraction": res.fraction,
        }))?;
        serde_json::to_string_pretty(&res)
    } else {
        return Err("give one of --x0, --tube or --network-test".into());
    }
    .map_err(|e| e.to_string())?;
    if let Some(prefix) = &a.out {
        let js = with_ext(prefix, "json");
        fs::write(&js, out).map_err(|e| format!("cannot write {}: {e}", js.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}
