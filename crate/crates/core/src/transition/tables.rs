//! Closed-form products of basic transition matrices, transcribed entry by
//! entry from their published form. The multiplication oracle in the tests
//! (and in `verify`) checks every entry; misprints found that way are listed
//! in [`ERRATA`] and corrected by [`closed_form_product`].

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::model::GameParameters;
use crate::network::CycleKind;

type Formula = fn(&GameParameters) -> Mat3;

#[derive(Debug, Clone, Copy)]
pub struct TableEntry {
    pub label: &'static str,
    pub cycle: CycleKind,
    /// One-based `ξ` label of the node where the product starts.
    pub start: u8,
    /// Number of basic matrices in the product.
    pub len: usize,
    pub printed: Formula,
}

/// A single misprinted entry and its corrected value.
#[derive(Debug, Clone, Copy)]
pub struct Erratum {
    pub label: &'static str,
    pub row: usize,
    pub col: usize,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub value: fn(&GameParameters) -> f64,
}

macro_rules! vars {
    ($p:ident) => {
        ($p.c_a, $p.c_b, $p.e_a, $p.e_b)
    };
}

fn rtop_1(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([[cb / ea, 0.0, 1.0], [ca / ea, 0.0, 0.0], [-eb / ea, 1.0, 0.0]])
}

fn rtop_2(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([
        [cb * cb / (ea * ea) - eb / ea, 1.0, cb / ea],
        [ca * cb / (ea * ea), 0.0, ca / ea],
        [-eb * cb / (ea * ea) + ca / ea, 0.0, -eb / ea],
    ])
}

fn rtop_3(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let ea2 = ea * ea;
    let ea3 = ea2 * ea;
    Mat3::new([
        [
            cb.powi(3) / ea3 - 2.0 * eb * cb / ea2 + ca / ea,
            cb / ea,
            cb * cb / ea2 - eb / ea,
        ],
        [cb * cb * ca / ea3 - ca * eb / ea2, ca / ea, ca * cb / ea2],
        [
            -cb * cb * eb / ea3 + (ca * cb + eb * eb) / ea2,
            -eb / ea,
            -eb * cb / ea2 + ca / ea,
        ],
    ])
}

fn rtop_4(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let ea2 = ea * ea;
    let ea3 = ea2 * ea;
    let ea4 = ea3 * ea;
    Mat3::new([
        [
            cb.powi(4) / ea4 - 3.0 * cb * cb * eb / ea3 + (2.0 * ca * cb + eb * eb) / ea2,
            cb * cb / ea2 - eb / ea,
            cb.powi(3) / ea3 - 2.0 * eb * cb / ea2 + ca / ea,
        ],
        [
            cb.powi(3) * ca / ea4 - 2.0 * ca * cb * eb / ea3 + ca * ca / ea2,
            ca * cb / ea2,
            cb * cb * ca / ea3 - ca * eb / ea2,
        ],
        [
            -cb.powi(3) * eb / ea4 + (cb * cb * ca + 2.0 * eb * eb * cb) / ea3 - 2.0 * ca * eb / ea2,
            -eb * cb / ea2 + ca / ea,
            -cb * cb * eb / ea3 + (ca * cb + eb * eb) / ea2,
        ],
    ])
}

fn rtop_5(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let ea2 = ea * ea;
    let ea3 = ea2 * ea;
    let ea4 = ea3 * ea;
    let ea5 = ea4 * ea;
    Mat3::new([
        [
            cb.powi(5) / ea5 - 4.0 * cb.powi(3) * eb / ea4 + (3.0 * cb * cb * ca + 3.0 * eb * eb * cb) / ea3
                - 2.0 * ca * eb / ea2,
            cb.powi(3) / ea3 - 2.0 * eb * cb / ea2 + ca / ea,
            cb.powi(4) / ea4 - 3.0 * cb * cb * eb / ea3 + (2.0 * ca * cb + eb * eb) / ea2,
        ],
        [
            cb.powi(4) * ca / ea5 - 3.0 * cb * cb * ca * eb / ea4 + (2.0 * ca * ca * cb + eb * eb * ca) / ea3,
            cb * cb * ca / ea3 - ca * eb / ea2,
            cb.powi(3) * ca / ea4 - 2.0 * ca * cb * eb / ea3 + ca * ca / ea2,
        ],
        [
            -cb.powi(4) * eb / ea5 + (cb.powi(3) * ca + 3.0 * cb * cb * eb * eb) / ea4
                - (4.0 * ca * cb * eb + eb.powi(3)) / ea3
                + ca * ca / ea2,
            -cb * cb * ca / ea3 + (ca * cb + eb * eb) / ea2,
            -cb.powi(3) * eb / ea4 + (cb * cb * ca + 2.0 * eb * eb * cb) / ea3 - 2.0 * ca * eb / ea2,
        ],
    ])
}

fn star_1(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([[0.0, ca / eb, 1.0], [1.0, -ea / eb, 0.0], [0.0, cb / eb, 0.0]])
}

fn star_2(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    Mat3::new([
        [ca / eb, -ca * ea / eb2 + cb / eb, 0.0],
        [-ea / eb, ea * ea / eb2 + ca / eb, 1.0],
        [cb / eb, -cb * ea / eb2, 0.0],
    ])
}

fn star_3(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    Mat3::new([
        [
            -ca * ea / eb2 + cb / eb,
            ea * ea * ca / eb3 + ca * ca / eb2 - cb * ea / eb2,
            ca / eb,
        ],
        [
            ea * ea / eb2 + ca / eb,
            -ea.powi(3) / eb3 - 2.0 * ca * ea / eb2 + cb / eb,
            -ea / eb,
        ],
        [-cb * ea / eb2, ea * ea * cb / eb3 + cb * ca / eb2, cb / eb],
    ])
}

fn star_4(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    let eb4 = eb3 * eb;
    Mat3::new([
        [
            ea * ea * ca / eb3 + (ca * ca - cb * ea) / eb2,
            -ea.powi(3) * ca / eb4 + (ea * ea * cb - 2.0 * ca * ca * ea) / eb3 + 2.0 * cb * ca / eb2,
            -ca * ea / eb2 + cb / eb,
        ],
        [
            -ea.powi(3) / eb3 - 2.0 * ca * ea / eb2 + cb / eb,
            ea.powi(4) / eb4 + 3.0 * ea * ea * ca / eb3 + (ca * ca - 2.0 * cb * ea) / eb2,
            ea * ea / eb2 + ca / eb,
        ],
        [
            ea * ea * cb / eb3 + cb * ca / eb2,
            -ea.powi(3) * cb / eb4 - 2.0 * cb * ea * ca / eb3 + cb * cb / eb2,
            -cb * ea / eb2,
        ],
    ])
}

fn star_5(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    let eb4 = eb3 * eb;
    let eb5 = eb4 * eb;
    Mat3::new([
        [
            -ea.powi(3) * ca / eb4 + (ea * ea * cb - 2.0 * ca * ca * ea) / eb3 + 2.0 * cb * ca / eb2,
            ea.powi(4) * ca / eb5
                + (3.0 * ca * ca * ea * ea - ea.powi(3) * cb) / eb4
                + (ca.powi(3) - 4.0 * cb * ea * ca) / eb3
                + cb * cb / eb2,
            ea * ea * ca / eb3 + (ca * ca - cb * ea) / eb2,
        ],
        [
            ea.powi(4) / eb4 + 3.0 * ea * ea * ca / eb3 + (ca * ca - 2.0 * cb * ea) / eb2,
            -ea.powi(5) / eb5 - 4.0 * ea.powi(3) * ca / eb4
                + (3.0 * ea * ea * cb - 3.0 * ca * ca * ea) / eb3
                + 2.0 * cb * ca / eb2,
            -ea.powi(3) / eb3 - 2.0 * ca * ea / eb2 + cb / eb,
        ],
        [
            -ea.powi(3) * cb / eb4 - 2.0 * cb * ea * ca / eb3 + cb * cb / eb2,
            ea.powi(4) * cb / eb5 + 3.0 * ea * ea * ca * cb / eb4 + (ca * ca * cb - 2.0 * cb * cb * ea) / eb3,
            ea * ea * cb / eb3 + cb * ca / eb2,
        ],
    ])
}

fn rsp_m1(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([[cb / ea, 0.0, 0.0], [ca / ea, 0.0, 1.0], [-eb / ea, 1.0, 0.0]])
}

fn rsp_m3(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([[0.0, ca / eb, 0.0], [1.0, -ea / eb, 0.0], [0.0, cb / eb, 1.0]])
}

fn rsp_21(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let ea2 = ea * ea;
    Mat3::new([
        [cb * cb / ea2 - eb / ea, 1.0, 0.0],
        [ca * cb / ea2, 0.0, 0.0],
        [-eb * cb / ea2 + ca / ea, 0.0, 1.0],
    ])
}

fn rsp_1(p: &GameParameters) -> Mat3 {
    let k = crate::stability::derived_constants(p);
    Mat3::new([[k.delta_t, 0.0, 0.0], [k.alpha_t, 1.0, 0.0], [k.beta_t, 0.0, 1.0]])
}

fn rsp_32(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([
        [ca * ca / (eb * ea), 0.0, 0.0],
        [cb / ea - ca / eb, 0.0, 1.0],
        [cb * ca / (eb * ea) - eb / ea, 1.0, 0.0],
    ])
}

fn rsp_2(p: &GameParameters) -> Mat3 {
    let k = crate::stability::derived_constants(p);
    Mat3::new([[k.delta_t, 0.0, 0.0], [k.gamma_t, 1.0, 0.0], [k.theta_t, 0.0, 1.0]])
}

fn rsp_13(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([
        [0.0, cb * ca / (eb * ea), 0.0],
        [0.0, ca * ca / (eb * ea) + cb / eb, 1.0],
        [1.0, -ca / ea - ea / eb, 0.0],
    ])
}

fn rsp_3(p: &GameParameters) -> Mat3 {
    let k = crate::stability::derived_constants(p);
    Mat3::new([[1.0, k.mu_t, 0.0], [0.0, k.delta_t, 0.0], [0.0, k.nu_t, 1.0]])
}

fn four_21(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([
        [ca * ca / (eb * ea), 0.0, ca / eb],
        [cb / ea - ca / eb, 0.0, -ea / eb],
        [cb * ca / (eb * ea) - eb / ea, 1.0, cb / eb],
    ])
}

fn four_51(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    Mat3::new([
        [
            -ca * ca / eb2 + 2.0 * cb * ca / (eb * ea) - eb / ea,
            1.0,
            -ca * ea / eb2 + cb / eb,
        ],
        [
            ca * ea / eb2 + ca * ca / (eb * ea) - cb / eb,
            0.0,
            ea * ea / eb2 + ca / eb,
        ],
        [cb * cb / (eb * ea) - cb * ca / eb2, 0.0, -cb * ea / eb2],
    ])
}

fn four_1(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    Mat3::new([
        [
            ca * ca * ea / eb3 + ca.powi(3) / (eb2 * ea) - 2.0 * cb * ca / eb2 + cb * cb / (eb * ea),
            0.0,
            ea * ea * ca / eb3 + (ca * ca - cb * ea) / eb2,
        ],
        [
            -ea * ea * ca / eb3 - (2.0 * ca * ca - cb * ea) / eb2 + 2.0 * cb * ca / (eb * ea) - eb / ea,
            1.0,
            -ea.powi(3) / eb3 - 2.0 * ca * ea / eb2 + cb / eb,
        ],
        [
            ca * ea * cb / eb3 + ca * ca * cb / (eb2 * ea) - cb * cb / eb2,
            0.0,
            ea * ea * cb / eb3 + cb * ca / eb2,
        ],
    ])
}

fn four_52(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    Mat3::new([
        [ca / eb, -ca * ea / eb2 + cb / eb, 1.0],
        [-ea / eb, ea * ea / eb2 + ca / eb, 0.0],
        [cb / eb, cb * ea / eb2, 0.0],
    ])
}

fn four_32(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    Mat3::new([
        [
            -ca * ea / eb2 + ca / eb,
            ea * ea * ca / eb3 + (ca * ca - cb * ea) / eb2,
            0.0,
        ],
        [
            ea * ea / eb2 + ca / eb,
            -ea.powi(3) / eb3 - 2.0 * ca * ea / eb2 + cb / eb,
            1.0,
        ],
        [-cb * ea / eb2, cb * ea * ea / eb3 + cb * ca / eb2, 0.0],
    ])
}

fn four_2(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    Mat3::new([
        [
            -cb * ca / eb2 + cb * cb / (eb * ea),
            ea * cb * ca / eb3 + ca * ca * cb / (eb2 * ea) - cb * cb / eb2,
            0.0,
        ],
        [
            -(ca * ca + cb * ea) / eb2 + cb * ca / (eb * ea),
            (ca * ca * ea + ea * ea * cb) / eb3 + ca.powi(3) / (eb2 * ea),
            0.0,
        ],
        [
            ea * ea / eb2 + 2.0 * ca / eb - cb / ea,
            -ea.powi(3) / eb3 - 3.0 * ca * ea / eb2 - ca * ca / (eb * ea) + 2.0 * cb / eb,
            1.0,
        ],
    ])
}

fn four_35(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    Mat3::new([
        [ca / eb, -ca * ea / eb2 + cb / eb, 0.0],
        [-ea / eb, ea * ea / eb2 + ca / eb, 1.0],
        [cb / eb, -cb * ea / eb2, 0.0],
    ])
}

fn four_15(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    Mat3::new([
        [cb * ca / (eb * ea), -cb * ca / eb2 + cb * cb / (eb * ea), 0.0],
        [
            ca * ca / (eb * ea) + cb / eb,
            -(ca * ca + cb * ea) / eb2 + cb * ca / (eb * ea),
            0.0,
        ],
        [-ca / ea - ea / eb, ea * ea / eb2 + 2.0 * ca / eb - cb / ea, 1.0],
    ])
}

fn four_5(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    Mat3::new([
        [
            ca.powi(3) / (eb2 * ea) + cb * ca / eb2,
            -(ca.powi(3) + ea * cb * ca) / eb3 + ca * ca * cb / (eb2 * ea),
            0.0,
        ],
        [
            -(ca * ca + cb * ea) / eb2 + cb * ca / (eb * ea),
            (ca * ca * ea + ea * ea * cb) / eb3 - 2.0 * cb * ca / eb2 + cb * cb / (eb * ea),
            0.0,
        ],
        [
            ca * ca * cb / (eb2 * ea) + cb * cb / eb2 - ca / ea - ea / eb,
            -(ca * ca * cb + cb * cb * ea) / eb3 + cb * cb * ca / (eb2 * ea) + ea * ea / eb2 + 2.0 * ca / eb - cb / ea,
            1.0,
        ],
    ])
}

fn four_13(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    Mat3::new([
        [0.0, cb * ca / (eb * ea), cb / ea],
        [0.0, ca * ca / (eb * ea) + cb / eb, ca / ea],
        [1.0, -ca / ea - ea / eb, -eb / ea],
    ])
}

fn four_23(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    Mat3::new([
        [0.0, ca.powi(3) / (eb2 * ea) + cb * ca / eb2, ca * ca / (eb * ea)],
        [0.0, -(ca * ca + cb * ea) / eb2 + cb * ca / (eb * ea), cb / ea - ca / eb],
        [
            1.0,
            ca * ca * cb / (eb2 * ea) + cb * cb / eb2 - ca / ea - ea / eb,
            cb * ca / (eb * ea) - eb / ea,
        ],
    ])
}

fn four_3(p: &GameParameters) -> Mat3 {
    let (ca, cb, ea, eb) = vars!(p);
    let eb2 = eb * eb;
    let eb3 = eb2 * eb;
    Mat3::new([
        [
            1.0,
            -(ca.powi(3) + ea * cb * ca) / eb3 + 2.0 * ca * ca * cb / (eb2 * ea) + cb * cb / eb2 - ca / ea - ea / eb,
            -ca * ca / eb2 + 2.0 * cb * ca / (eb * ea) - eb / ea,
        ],
        [
            0.0,
            (ca * ca * ea + ea * ea * cb) / eb3 + ca.powi(3) / (eb2 * ea),
            ca * ea / eb2 + ca * ca / (eb * ea) - cb / eb,
        ],
        [
            0.0,
            -(ca * ca * cb + cb * cb * ea) / eb3 + cb * cb * ca / (eb2 * ea),
            -cb * ca / eb2 + cb * cb / (eb * ea),
        ],
    ])
}

const fn entry(label: &'static str, cycle: CycleKind, start: u8, len: usize, printed: Formula) -> TableEntry {
    TableEntry {
        label,
        cycle,
        start,
        len,
        printed,
    }
}

use CycleKind::{FourNode, RockToPaper, Rsp, Star};

static ENTRIES: [TableEntry; 34] = [
    entry("M_2", RockToPaper, 2, 1, rtop_1),
    entry("(M_2)^2", RockToPaper, 2, 2, rtop_2),
    entry("(M_2)^3", RockToPaper, 2, 3, rtop_3),
    entry("(M_2)^4", RockToPaper, 2, 4, rtop_4),
    entry("(M_2)^5", RockToPaper, 2, 5, rtop_5),
    entry("M_4", Star, 4, 1, star_1),
    entry("(M_4)^2", Star, 4, 2, star_2),
    entry("(M_4)^3", Star, 4, 3, star_3),
    entry("(M_4)^4", Star, 4, 4, star_4),
    entry("(M_4)^5", Star, 4, 5, star_5),
    entry("M_1", Rsp, 1, 1, rsp_m1),
    entry("M_(2,1)", Rsp, 1, 2, rsp_21),
    entry("M^(1)", Rsp, 1, 3, rsp_1),
    entry("M_(3,2)", Rsp, 2, 2, rsp_32),
    entry("M^(2)", Rsp, 2, 3, rsp_2),
    entry("M_3", Rsp, 3, 1, rsp_m3),
    entry("M_(1,3)", Rsp, 3, 2, rsp_13),
    entry("M^(3)", Rsp, 3, 3, rsp_3),
    entry("M̂_1", FourNode, 1, 1, rsp_m1),
    entry("M̂_(2,1)", FourNode, 1, 2, four_21),
    entry("M̂_(5,1)", FourNode, 1, 3, four_51),
    entry("M̂^(1)", FourNode, 1, 4, four_1),
    entry("M̂_2", FourNode, 2, 1, rsp_m3),
    entry("M̂_(5,2)", FourNode, 2, 2, four_52),
    entry("M̂_(3,2)", FourNode, 2, 3, four_32),
    entry("M̂^(2)", FourNode, 2, 4, four_2),
    entry("M̂_5", FourNode, 5, 1, star_1),
    entry("M̂_(3,5)", FourNode, 5, 2, four_35),
    entry("M̂_(1,5)", FourNode, 5, 3, four_15),
    entry("M̂^(5)", FourNode, 5, 4, four_5),
    entry("M̂_3", FourNode, 3, 1, star_1),
    entry("M̂_(1,3)", FourNode, 3, 2, four_13),
    entry("M̂_(2,3)", FourNode, 3, 3, four_23),
    entry("M̂^(3)", FourNode, 3, 4, four_3),
];

/// Misprints detected by the multiplication oracle. Rows and columns are
/// zero-based.
pub static ERRATA: [Erratum; 3] = [
    Erratum {
        label: "(M_2)^5",
        row: 2,
        col: 1,
        printed: "-c_B^2 c_A/e_A^3 + (c_A c_B + e_B^2)/e_A^2",
        corrected: "-c_B^2 e_B/e_A^3 + (c_A c_B + e_B^2)/e_A^2",
        value: |p| {
            let (ca, cb, ea, eb) = vars!(p);
            -cb * cb * eb / ea.powi(3) + (ca * cb + eb * eb) / (ea * ea)
        },
    },
    Erratum {
        label: "M̂_(5,2)",
        row: 2,
        col: 1,
        printed: "+c_B e_A/e_B^2",
        corrected: "-c_B e_A/e_B^2",
        value: |p| -p.c_b * p.e_a / (p.e_b * p.e_b),
    },
    Erratum {
        label: "M̂_(3,2)",
        row: 0,
        col: 0,
        printed: "-c_A e_A/e_B^2 + c_A/e_B",
        corrected: "-c_A e_A/e_B^2 + c_B/e_B",
        value: |p| -p.c_a * p.e_a / (p.e_b * p.e_b) + p.c_b / p.e_b,
    },
];

pub fn table_entries() -> &'static [TableEntry] {
    &ENTRIES
}

/// Accepts `Mhat` as an ASCII spelling of `M̂`.
fn normalize_label(label: &str) -> String {
    label.trim().replace("Mhat", "M̂")
}

/// A closed-form table with optional deliberate corruption, so that the
/// verification pipeline can be exercised against a known-bad table.
#[derive(Debug, Clone, Default)]
pub struct ClosedFormTable {
    corrupt: Option<String>,
    apply_errata: bool,
}

impl ClosedFormTable {
    pub fn corrected() -> Self {
        Self {
            corrupt: None,
            apply_errata: true,
        }
    }

    pub fn printed() -> Self {
        Self {
            corrupt: None,
            apply_errata: false,
        }
    }

    /// Same as [`corrected`](Self::corrected) but with entry (1,1) of `label`
    /// perturbed by one part in a million.
    pub fn corrupted(label: &str) -> Result<Self> {
        let label = normalize_label(label);
        lookup(&label)?;
        Ok(Self {
            corrupt: Some(label),
            apply_errata: true,
        })
    }

    pub fn evaluate(&self, label: &str, params: &GameParameters) -> Result<Mat3> {
        let label = normalize_label(label);
        let e = lookup(&label)?;
        let mut m = (e.printed)(params);
        if self.apply_errata {
            for fix in ERRATA.iter().filter(|f| f.label == label) {
                m.0[fix.row][fix.col] = (fix.value)(params);
            }
        }
        if self.corrupt.as_deref() == Some(label.as_str()) {
            m.0[0][0] = m.0[0][0] * (1.0 + 1e-6) + 1e-6;
        }
        Ok(m)
    }
}

fn lookup(label: &str) -> Result<&'static TableEntry> {
    ENTRIES
        .iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Closed-form product with known misprints corrected.
pub fn closed_form_product(label: &str, params: &GameParameters) -> Result<Mat3> {
    ClosedFormTable::corrected().evaluate(label, params)
}

/// Closed-form product exactly as published.
pub fn printed_product(label: &str, params: &GameParameters) -> Result<Mat3> {
    ClosedFormTable::printed().evaluate(label, params)
}
