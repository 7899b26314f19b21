//! Classification of every point of a `(c_A, c_B)` grid, with CSV and plain
//! PPM output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ext::fmt_ext;
use crate::margin::DEFAULT_TOL;
use crate::model::GameParameters;
use crate::network::{CycleKind, CycleSpec};
use crate::stability::{stability_indices_closed_form_tol, stability_indices_generic_tol, Classification};

/// Region code of a pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[repr(u8)]
pub enum RegionCode {
    AllUnstable = 0,
    RockToPaperFas = 1,
    RockToPaperEas = 2,
    StarFas = 3,
    RspFas = 4,
    FourNodeFas = 5,
    Marginal = 6,
    /// More than one cycle attracting.
    Several = 7,
}

impl RegionCode {
    pub const ALL: [RegionCode; 8] = [
        RegionCode::AllUnstable,
        RegionCode::RockToPaperFas,
        RegionCode::RockToPaperEas,
        RegionCode::StarFas,
        RegionCode::RspFas,
        RegionCode::FourNodeFas,
        RegionCode::Marginal,
        RegionCode::Several,
    ];

    pub fn from_u8(v: u8) -> Option<Self> {
        Self::ALL.get(v as usize).copied()
    }

    pub fn rgb(self) -> [u8; 3] {
        PALETTE[self as usize]
    }

    pub fn from_rgb(rgb: [u8; 3]) -> Option<Self> {
        PALETTE
            .iter()
            .position(|c| *c == rgb)
            .and_then(|i| Self::from_u8(i as u8))
    }

    /// Code of a point from the verdicts of the four cycles.
    pub fn from_classes(class: impl Fn(CycleKind) -> Classification) -> Self {
        let attracting: Vec<_> = CycleKind::ALL
            .into_iter()
            .filter(|k| class(*k).is_attracting())
            .collect();
        match attracting.as_slice() {
            [] if CycleKind::ALL
                .iter()
                .all(|k| class(*k) == Classification::CompletelyUnstable) =>
            {
                RegionCode::AllUnstable
            }
            [] => RegionCode::Marginal,
            [CycleKind::RockToPaper] if class(CycleKind::RockToPaper) == Classification::Eas => {
                RegionCode::RockToPaperEas
            }
            [CycleKind::RockToPaper] => RegionCode::RockToPaperFas,
            [CycleKind::Star] => RegionCode::StarFas,
            [CycleKind::Rsp] => RegionCode::RspFas,
            [CycleKind::FourNode] => RegionCode::FourNodeFas,
            _ => RegionCode::Several,
        }
    }
}

/// Image colours indexed by region code.
pub const PALETTE: [[u8; 3]; 8] = [
    [255, 255, 255],
    [255, 160, 160],
    [200, 0, 0],
    [40, 90, 210],
    [0, 150, 60],
    [240, 170, 0],
    [0, 0, 0],
    [150, 0, 150],
];

/// Sampling of one parameter axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    /// Exclude `lo`: the points are `lo + (hi-lo) k/n` for `k = 1..=n`.
    /// Otherwise both ends are sampled.
    pub open_low: bool,
}

impl AxisRange {
    pub fn value(&self, k: usize, n: usize) -> f64 {
        let span = self.hi - self.lo;
        if self.open_low {
            if k + 1 == n {
                self.hi
            } else {
                self.lo + span * (k + 1) as f64 / n as f64
            }
        } else if k + 1 == n {
            self.hi
        } else {
            self.lo + span * k as f64 / (n - 1) as f64
        }
    }

    pub fn step(&self, n: usize) -> f64 {
        let span = self.hi - self.lo;
        if self.open_low {
            span / n as f64
        } else {
            span / (n - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub e_a: f64,
    pub e_b: f64,
    pub c_a: AxisRange,
    pub c_b: AxisRange,
    /// Points per axis.
    pub grid: usize,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Recorded with the outputs; classification itself is deterministic.
    pub seed: u64,
    pub tol: f64,
    /// Output prefix: `<out>.csv`, `<out>.ppm` and `<out>.cfg` are written.
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let axis = AxisRange {
            lo: 0.9,
            hi: 5.0,
            open_low: true,
        };
        Self {
            e_a: 1.0,
            e_b: 0.8,
            c_a: axis,
            c_b: axis,
            grid: 512,
            jobs: None,
            seed: 0,
            tol: DEFAULT_TOL,
            out: None,
        }
    }
}

const KEYS: [&str; 14] = [
    "e_a",
    "e_b",
    "ca_min",
    "ca_max",
    "cb_min",
    "cb_max",
    "open_low",
    "grid",
    "jobs",
    "seed",
    "tol",
    "out",
    "ca_open_low",
    "cb_open_low",
];

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.e_a) || !ok(self.e_b) {
            return Err(Error::InvalidParameter(format!(
                "rates must be positive: e_a={}, e_b={}",
                self.e_a, self.e_b
            )));
        }
        for (name, r) in [("c_a", &self.c_a), ("c_b", &self.c_b)] {
            // An open lower end may sit at zero, since zero is not sampled.
            let lo_ok = if r.open_low { r.lo >= 0.0 } else { r.lo > 0.0 };
            if !(lo_ok && r.hi.is_finite() && r.hi > r.lo) {
                return Err(Error::InvalidParameter(format!(
                    "{name} range [{}, {}] is not positive and increasing",
                    r.lo, r.hi
                )));
            }
        }
        if self.grid < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid must be at least 2, got {}",
                self.grid
            )));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidParameter("jobs must be positive".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be non-negative, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut c = Self::default();
        c.apply_kv(&std::fs::read_to_string(path)?)?;
        Ok(c)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let f = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("{key}: not a number: {value}")))
        };
        let b = || {
            value
                .parse::<bool>()
                .map_err(|_| Error::Parse(format!("{key}: not a boolean: {value}")))
        };
        let u = || {
            value
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("{key}: not an integer: {value}")))
        };
        match key {
            "e_a" => self.e_a = f()?,
            "e_b" => self.e_b = f()?,
            "ca_min" => self.c_a.lo = f()?,
            "ca_max" => self.c_a.hi = f()?,
            "cb_min" => self.c_b.lo = f()?,
            "cb_max" => self.c_b.hi = f()?,
            "open_low" => {
                let v = b()?;
                self.c_a.open_low = v;
                self.c_b.open_low = v;
            }
            "ca_open_low" => self.c_a.open_low = b()?,
            "cb_open_low" => self.c_b.open_low = b()?,
            "grid" => self.grid = u()? as usize,
            "jobs" => self.jobs = Some(u()? as usize),
            "seed" => self.seed = u()?,
            "tol" => self.tol = f()?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => {
                return Err(Error::Parse(format!(
                    "unknown key `{key}`; expected one of {}",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// The configuration in the file format read by [`apply_kv`](Self::apply_kv).
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "e_a = {}", self.e_a);
        let _ = writeln!(s, "e_b = {}", self.e_b);
        let _ = writeln!(s, "ca_min = {}", self.c_a.lo);
        let _ = writeln!(s, "ca_max = {}", self.c_a.hi);
        let _ = writeln!(s, "ca_open_low = {}", self.c_a.open_low);
        let _ = writeln!(s, "cb_min = {}", self.c_b.lo);
        let _ = writeln!(s, "cb_max = {}", self.c_b.hi);
        let _ = writeln!(s, "cb_open_low = {}", self.c_b.open_low);
        let _ = writeln!(s, "grid = {}", self.grid);
        if let Some(j) = self.jobs {
            let _ = writeln!(s, "jobs = {j}");
        }
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "tol = {:e}", self.tol);
        if let Some(o) = &self.out {
            let _ = writeln!(s, "out = {}", o.display());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pixel {
    pub c_a: f64,
    pub c_b: f64,
    pub code: RegionCode,
    pub classes: BTreeMap<CycleKind, Classification>,
    /// Generic indices per cycle, ordered by incoming connection.
    pub indices: BTreeMap<CycleKind, Vec<f64>>,
    /// Generic and closed-form verdicts compatible for every cycle.
    pub agree: bool,
}

pub fn classify_pixel(p: &GameParameters, tol: f64) -> Pixel {
    let mut classes = BTreeMap::new();
    let mut indices = BTreeMap::new();
    let mut agree = true;
    for kind in CycleKind::ALL {
        let spec = CycleSpec::canonical(kind);
        let g = stability_indices_generic_tol(&spec, p, tol);
        let c = stability_indices_closed_form_tol(&spec, p, tol);
        agree &= g.classification.compatible(c.classification);
        classes.insert(kind, g.classification);
        indices.insert(kind, g.values());
    }
    Pixel {
        c_a: p.c_a,
        c_b: p.c_b,
        code: RegionCode::from_classes(|k| classes[&k]),
        classes,
        indices,
        agree,
    }
}

/// Pixels in image order: row 0 holds the largest `c_B`, column 0 the
/// smallest `c_A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub rows: Vec<Vec<Pixel>>,
}

impl SweepResult {
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn codes(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|p| p.code as u8).collect())
            .collect()
    }

    pub fn pixels(&self) -> impl Iterator<Item = &Pixel> {
        self.rows.iter().flatten()
    }

    /// Counts per region code.
    pub fn histogram(&self) -> BTreeMap<RegionCode, usize> {
        let mut h = BTreeMap::new();
        for p in self.pixels() {
            *h.entry(p.code).or_insert(0) += 1;
        }
        h
    }

    pub fn disagreements(&self) -> usize {
        self.pixels().filter(|p| !p.agree).count()
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    b.build().map_err(|e| Error::Precondition(format!("thread pool: {e}")))
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let n = config.grid;
    let rows = pool(config.jobs)?.install(|| {
        (0..n)
            .into_par_iter()
            .map(|r| {
                let cb = config.c_b.value(n - 1 - r, n);
                (0..n)
                    .map(|c| {
                        let ca = config.c_a.value(c, n);
                        let p = GameParameters::new(ca, cb, config.e_a, config.e_b)?;
                        Ok(classify_pixel(&p, config.tol))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepResult {
        config: config.clone(),
        rows,
    })
}

/// Column names of the CSV output.
pub fn csv_header() -> String {
    let mut cols = vec![
        "row".to_string(),
        "col".into(),
        "c_a".into(),
        "c_b".into(),
        "code".into(),
        "agree".into(),
    ];
    for kind in CycleKind::ALL {
        cols.push(kind.name().to_string());
    }
    for kind in CycleKind::ALL {
        for i in 1..=CycleSpec::canonical(kind).len() {
            cols.push(format!("{}_{i}", kind.name()));
        }
    }
    cols.join(",")
}

pub fn write_csv<W: Write>(res: &SweepResult, mut w: W) -> Result<()> {
    writeln!(w, "{}", csv_header())?;
    let mut line = String::new();
    for (r, row) in res.rows.iter().enumerate() {
        for (c, p) in row.iter().enumerate() {
            line.clear();
            let _ = write!(line, "{r},{c},{},{},{},{}", p.c_a, p.c_b, p.code as u8, p.agree as u8);
            for kind in CycleKind::ALL {
                let _ = write!(line, ",{}", p.classes[&kind].short());
            }
            for kind in CycleKind::ALL {
                for v in &p.indices[&kind] {
                    let _ = write!(line, ",{}", fmt_ext(*v));
                }
            }
            writeln!(w, "{line}")?;
        }
    }
    Ok(())
}

/// Plain (`P3`) pixmap, one pixel per grid point.
pub fn write_ppm<W: Write>(res: &SweepResult, mut w: W) -> Result<()> {
    writeln!(w, "P3")?;
    writeln!(w, "{} {}", res.width(), res.height())?;
    writeln!(w, "255")?;
    for row in &res.rows {
        let line: Vec<String> = row
            .iter()
            .map(|p| {
                let [r, g, b] = p.code.rgb();
                format!("{r} {g} {b}")
            })
            .collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Region codes read back from a plain pixmap written by [`write_ppm`].
pub fn read_ppm_codes(text: &str) -> Result<Vec<Vec<u8>>> {
    let mut tok = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let magic = tok.next().unwrap_or("");
    if magic != "P3" {
        return Err(Error::Parse(format!("expected a P3 pixmap, got `{magic}`")));
    }
    let mut next = |what: &str| -> Result<usize> {
        tok.next()
            .ok_or_else(|| Error::Parse(format!("pixmap ended before {what}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("pixmap: bad {what}")))
    };
    let (w, h, max) = (next("width")?, next("height")?, next("maxval")?);
    if max != 255 {
        return Err(Error::Parse(format!("unsupported maxval {max}")));
    }
    let mut rows = Vec::with_capacity(h);
    for _ in 0..h {
        let mut row = Vec::with_capacity(w);
        for _ in 0..w {
            let rgb = [next("red")? as u8, next("green")? as u8, next("blue")? as u8];
            let code =
                RegionCode::from_rgb(rgb).ok_or_else(|| Error::Parse(format!("colour {rgb:?} not in palette")))?;
            row.push(code as u8);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Region codes read back from a CSV written by [`write_csv`], arranged by
/// their `row` and `col` fields.
pub fn read_csv_codes(text: &str) -> Result<Vec<Vec<u8>>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty csv".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let at = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::Parse(format!("csv has no `{name}` column")))
    };
    let (ri, ci, ki) = (at("row")?, at("col")?, at("code")?);
    let mut cells = Vec::new();
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        let get = |i: usize| -> Result<usize> {
            f.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("csv line {}: bad field {i}", n + 2)))
        };
        cells.push((get(ri)?, get(ci)?, get(ki)? as u8));
    }
    let h = cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
    let w = cells.iter().map(|c| c.1 + 1).max().unwrap_or(0);
    let mut out = vec![vec![u8::MAX; w]; h];
    for (r, c, k) in cells {
        out[r][c] = k;
    }
    Ok(out)
}

/// Paths written by [`write_outputs`] for a prefix.
pub fn output_paths(prefix: &Path) -> [PathBuf; 3] {
    ["csv", "ppm", "cfg"].map(|ext| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(".");
        s.push(ext);
        PathBuf::from(s)
    })
}

/// Writes the CSV, the pixmap and the effective configuration.
pub fn write_outputs(res: &SweepResult, prefix: &Path) -> Result<[PathBuf; 3]> {
    let paths = output_paths(prefix);
    let open = |p: &Path| -> Result<std::io::BufWriter<std::fs::File>> {
        std::fs::File::create(p)
            .map(std::io::BufWriter::new)
            .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", p.display())))
    };
    let mut csv = open(&paths[0])?;
    write_csv(res, &mut csv)?;
    csv.flush()?;
    let mut ppm = open(&paths[1])?;
    write_ppm(res, &mut ppm)?;
    ppm.flush()?;
    std::fs::write(&paths[2], res.config.to_kv())?;
    Ok(paths)
}
