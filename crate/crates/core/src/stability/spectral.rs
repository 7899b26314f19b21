use serde::{Deserialize, Serialize};

use crate::linalg::{cubic_roots, deflate, dot, eig2, normalize_max, null_vector, Mat3, C64};
use crate::margin::{Margin, Tri, DEFAULT_TOL};
use crate::model::GameParameters;
use crate::network::CycleKind;

/// Relative gap below which two eigenvalue moduli count as tied. A double
/// root of the characteristic polynomial splits by about the square root of
/// the rounding error, so the gap must be well above that.
const TIE_TOL: f64 = 1e-6;
/// Lower bound on the components of a normalized left eigenvector.
const LEFT_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub lambda_max: f64,
    pub lambdas: [C64; 3],
    /// Right eigenvector for `lambda_max`, largest component `+1`.
    pub w_max: [f64; 3],
    /// Left eigenvector for `lambda_max`, scaled so that `v·w > 0` and its
    /// largest magnitude is 1.
    pub v_max: [f64; 3],
    pub cond_i: Tri,
    pub cond_ii: Tri,
    pub cond_iii: Tri,
    pub u_infty: Tri,
}

impl SpectralData {
    /// Conditions (i)-(iii) together.
    pub fn conditions(&self) -> Tri {
        self.cond_i.and(self.cond_ii).and(self.cond_iii)
    }
}

pub fn spectral_check(m: &Mat3) -> SpectralData {
    spectral_check_tol(m, DEFAULT_TOL)
}

pub fn spectral_check_tol(m: &Mat3, tol: f64) -> SpectralData {
    let (t, s, d) = m.charpoly();
    let roots = cubic_roots(t, s, d);
    let lead = roots
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .expect("three roots");

    let failed = |lambdas: [C64; 3], lambda_max: f64, cond_i: Tri| SpectralData {
        lambda_max,
        lambdas,
        w_max: [0.0; 3],
        v_max: [0.0; 3],
        cond_i,
        cond_ii: Tri::No,
        cond_iii: Tri::No,
        u_infty: Tri::No,
    };

    if lead.im != 0.0 {
        if lead.im.abs() > TIE_TOL * lead.abs() {
            return failed(roots, lead.re, Tri::No);
        }
        // A split double root: the leading eigenvalue is not resolved.
        let mut out = failed(roots, lead.re, Tri::Marginal);
        out.cond_ii = Margin::gt(lead.re, 1.0).positive(tol);
        out.cond_iii = Tri::Marginal;
        out.u_infty = Tri::Marginal;
        return out;
    }
    let lambda = lead.re;
    let shifted = m.shifted(lambda);
    let Some(w) = null_vector(&shifted) else {
        // Geometric multiplicity above one: the eigenvector is not unique.
        let mut out = failed(roots, lambda, Tri::Yes);
        out.cond_ii = Margin::gt(lambda, 1.0).positive(tol);
        out.cond_iii = Tri::Marginal;
        out.u_infty = Tri::Marginal;
        return out;
    };
    let w = normalize_max(w);

    // Remaining eigenvalues from the deflated block keep full accuracy even
    // when they are repeated.
    let b = deflate(m, w);
    let rest = eig2(b[0][0], b[0][1], b[1][0], b[1][1]);
    let mut lambdas = [C64::real(lambda), rest[0], rest[1]];
    if lambdas[2].abs() > lambdas[1].abs() {
        lambdas.swap(1, 2);
    }
    let second = lambdas[1].abs();

    let cond_i = if second >= lambda.abs() * (1.0 - TIE_TOL) {
        Tri::Marginal
    } else {
        Tri::Yes
    };
    let cond_ii = Margin::gt(lambda, 1.0).positive(tol);
    let cond_iii = Tri::all(w.iter().map(|&x| Margin::new(x, 1.0).positive(tol)));

    let (v_max, u_infty) = match null_vector(&shifted.transpose()) {
        Some(v) => {
            let sign = if dot(v, w) < 0.0 { -1.0 } else { 1.0 };
            let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let v = v.map(|x| sign * x / scale);
            let ok = v.iter().all(|&x| x >= LEFT_FLOOR);
            (v, Tri::from_bool(ok))
        }
        None => ([0.0; 3], Tri::Marginal),
    };
    SpectralData {
        lambda_max: lambda,
        lambdas,
        w_max: w,
        v_max,
        cond_i,
        cond_ii,
        cond_iii,
        u_infty,
    }
}

/// Closed-form inequalities equivalent to conditions (i)-(iii) for the
/// single basic matrix of a five-node cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VietaConditions {
    pub c1: Tri,
    pub c2: Tri,
    pub c3: Tri,
    pub margins: [Margin; 3],
}

impl VietaConditions {
    pub fn all(&self) -> Tri {
        self.c1.and(self.c2).and(self.c3)
    }
}

pub fn vieta_conditions(kind: CycleKind, p: &GameParameters) -> Option<VietaConditions> {
    vieta_conditions_tol(kind, p, DEFAULT_TOL)
}

pub fn vieta_conditions_tol(kind: CycleKind, p: &GameParameters, tol: f64) -> Option<VietaConditions> {
    let (ca, cb, ea, eb) = (p.c_a, p.c_b, p.e_a, p.e_b);
    let first = Margin::gt(ca + cb, ea + eb);
    let margins = match kind {
        CycleKind::RockToPaper => [
            first,
            Margin::gt(ca * ea, cb * eb),
            Margin::gt(ca * cb.powi(3), ea * eb.powi(3)),
        ],
        CycleKind::Star => [
            first,
            Margin::gt(cb * eb, ca * ea),
            Margin::gt(ca.powi(3) * eb, cb * ea.powi(3)),
        ],
        _ => return None,
    };
    Some(VietaConditions {
        c1: margins[0].positive(tol),
        c2: margins[1].positive(tol),
        c3: margins[2].positive(tol),
        margins,
    })
}
