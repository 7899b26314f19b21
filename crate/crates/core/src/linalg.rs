//! Small dense 3x3 linear algebra used by the transition-matrix machinery.

use serde::{Deserialize, Serialize};
use std::ops::Mul;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn new(rows: [[f64; 3]; 3]) -> Self {
        Mat3(rows)
    }

    pub fn row(&self, i: usize) -> [f64; 3] {
        self.0[i]
    }

    pub fn col(&self, j: usize) -> [f64; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3([self.col(0), self.col(1), self.col(2)])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Sum of the principal 2x2 minors.
    pub fn minor_sum(&self) -> f64 {
        let m = &self.0;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    }

    /// Coefficients `(t, s, d)` of the characteristic polynomial
    /// `λ³ − tλ² + sλ − d`.
    pub fn charpoly(&self) -> (f64, f64, f64) {
        (self.trace(), self.minor_sum(), self.det())
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn shifted(&self, lambda: f64) -> Mat3 {
        let mut m = *self;
        for i in 0..3 {
            m.0[i][i] -= lambda;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, b| a.max(b.abs()))
    }

    pub fn entries(&self) -> [f64; 9] {
        let m = &self.0;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    /// Entrywise relative difference, measured against the larger of the two
    /// entries (with a floor of 1 so that exact zeros compare absolutely).
    pub fn max_rel_diff(&self, other: &Mat3) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let a = self.0[i][j];
                let b = other.0[i][j];
                let scale = a.abs().max(b.abs()).max(1.0);
                worst = worst.max((a - b).abs() / scale);
            }
        }
        worst
    }
}

impl Mul for Mat3 {
    type Output = Mat3;

    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Mat3(out)
    }
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Roots of the monic cubic `λ³ − tλ² + sλ − d`.
///
/// Uses the trigonometric form when all roots are real and Cardano's formula
/// otherwise; real roots get three Newton polishing steps.
pub fn cubic_roots(t: f64, s: f64, d: f64) -> [C64; 3] {
    // Substitute λ = y + t/3 to get y³ + p y + q = 0.
    let shift = t / 3.0;
    let p = s - t * t / 3.0;
    let q = -2.0 * t * t * t / 27.0 + t * s / 3.0 - d;
    let poly = |x: f64| ((x - t) * x + s) * x - d;
    let dpoly = |x: f64| (3.0 * x - 2.0 * t) * x + s;
    let polish = |mut x: f64| {
        for _ in 0..3 {
            let dp = dpoly(x);
            if dp == 0.0 {
                break;
            }
            let step = poly(x) / dp;
            if !step.is_finite() {
                break;
            }
            x -= step;
        }
        x
    };

    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if p == 0.0 && q == 0.0 {
        let r = polish(shift);
        return [C64::real(r), C64::real(r), C64::real(r)];
    }
    if disc <= 0.0 {
        // Three real roots.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut r = [0.0; 3];
        for (k, slot) in r.iter_mut().enumerate() {
            let y = m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *slot = polish(y + shift);
        }
        r.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        [C64::real(r[0]), C64::real(r[1]), C64::real(r[2])]
    } else {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        let real = polish(u + v + shift);
        // Deflate: λ² + bλ + c with b = r − t, c = s + r(r − t).
        let b = real - t;
        let c = s + real * b;
        let re = -b / 2.0;
        let im2 = c - b * b / 4.0;
        if im2 > 0.0 {
            let im = im2.sqrt();
            [C64::real(real), C64 { re, im }, C64 { re, im: -im }]
        } else {
            let h = (-im2).sqrt();
            [C64::real(real), C64::real(re + h), C64::real(re - h)]
        }
    }
}

/// Eigenvalues of a 2x2 matrix `[[a, b], [c, d]]`.
pub fn eig2(a: f64, b: f64, c: f64, d: f64) -> [C64; 2] {
    let mean = (a + d) / 2.0;
    let disc = ((a - d) / 2.0).powi(2) + b * c;
    if disc >= 0.0 {
        let h = disc.sqrt();
        [C64::real(mean + h), C64::real(mean - h)]
    } else {
        let h = (-disc).sqrt();
        [C64 { re: mean, im: h }, C64 { re: mean, im: -h }]
    }
}

/// A null vector of a (nearly) singular matrix: the largest cross product of
/// two of its rows. Returns `None` when the matrix has rank below 2, i.e. the
/// null space is not one-dimensional.
pub fn null_vector(m: &Mat3) -> Option<[f64; 3]> {
    let r = [m.row(0), m.row(1), m.row(2)];
    let cands = [cross(r[0], r[1]), cross(r[0], r[2]), cross(r[1], r[2])];
    let best = cands
        .iter()
        .copied()
        .max_by(|a, b| norm(*a).partial_cmp(&norm(*b)).unwrap_or(std::cmp::Ordering::Equal))?;
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    if norm(best) <= 1e-13 * scale * scale {
        return None;
    }
    Some(best)
}

/// Scales `v` so that its largest-magnitude component equals +1.
pub fn normalize_max(v: [f64; 3]) -> [f64; 3] {
    let mut k = 0;
    for i in 1..3 {
        if v[i].abs() > v[k].abs() {
            k = i;
        }
    }
    let s = v[k];
    if s == 0.0 {
        return v;
    }
    [v[0] / s, v[1] / s, v[2] / s]
}

/// Householder deflation: given a unit-free eigenvector `w` of `m`, returns the
/// trailing 2x2 block of `H m H` where `H` maps `w` onto the first axis. Its
/// eigenvalues are the remaining eigenvalues of `m`.
pub fn deflate(m: &Mat3, w: [f64; 3]) -> [[f64; 2]; 2] {
    let nw = norm(w);
    let alpha = if w[0] >= 0.0 { -nw } else { nw };
    let mut u = [w[0] - alpha, w[1], w[2]];
    let nu = norm(u);
    if nu == 0.0 {
        return [[m.0[1][1], m.0[1][2]], [m.0[2][1], m.0[2][2]]];
    }
    for x in u.iter_mut() {
        *x /= nu;
    }
    let mut h = Mat3::IDENTITY;
    for i in 0..3 {
        for j in 0..3 {
            h.0[i][j] -= 2.0 * u[i] * u[j];
        }
    }
    let b = h * *m * h;
    [[b.0[1][1], b.0[1][2]], [b.0[2][1], b.0[2][2]]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_roots(roots: [f64; 3]) {
        let t = roots.iter().sum();
        let s = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        let d = roots.iter().product();
        let mut got: Vec<f64> = cubic_roots(t, s, d).iter().map(|c| c.re).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = roots.to_vec();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9 * (1.0 + w.abs()), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn cubic_real_roots() {
        check_roots([1.0, 2.0, 3.0]);
        check_roots([-4.0, 0.5, 10.0]);
        check_roots([2.0, 2.0, 2.0]);
        check_roots([0.0, 1.0, -1.0]);
    }

    #[test]
    fn cubic_complex_pair() {
        // (λ − 2)(λ² + 1)
        let r = cubic_roots(2.0, 1.0, 2.0);
        assert!((r[0].re - 2.0).abs() < 1e-12);
        assert!((r[1].re).abs() < 1e-12 && (r[1].im.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_vector_of_rank_two() {
        let m = Mat3::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);
        let v = null_vector(&m).unwrap();
        assert_eq!(normalize_max(v), [0.0, 0.0, 1.0]);
        assert!(null_vector(&Mat3::new([[0.0; 3]; 3])).is_none());
    }

    #[test]
    fn deflation_keeps_spectrum() {
        let m = Mat3::new([[4.0, 0.0, 0.0], [1.0, 1.0, 0.0], [2.0, 0.0, 1.0]]);
        let w = [3.0, 1.0, 2.0];
        assert_eq!(normalize_max(m.apply(w)), normalize_max(w));
        let b = deflate(&m, w);
        let e = eig2(b[0][0], b[0][1], b[1][0], b[1][1]);
        for ev in e {
            assert!((ev.re - 1.0).abs() < 1e-14 && ev.im.abs() < 1e-7);
        }
    }
}
