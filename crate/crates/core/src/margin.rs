//! Tri-state outcomes for inequalities evaluated in floating point.
//!
//! Every strict inequality the classifiers rely on is evaluated as a signed
//! margin together with a magnitude scale. Margins within `tol * scale` of
//! zero are reported as [`Tri::Marginal`] instead of being forced to a side.

use serde::{Deserialize, Serialize};

/// Default relative tolerance for boundary decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Marginal,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn is_no(self) -> bool {
        self == Tri::No
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Marginal, _) | (_, Tri::Marginal) => Tri::Marginal,
            _ => Tri::Yes,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::Marginal, _) | (_, Tri::Marginal) => Tri::Marginal,
            _ => Tri::No,
        }
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            Tri::Marginal => Tri::Marginal,
        }
    }

    pub fn all<I: IntoIterator<Item = Tri>>(it: I) -> Tri {
        it.into_iter().fold(Tri::Yes, Tri::and)
    }

    pub fn any<I: IntoIterator<Item = Tri>>(it: I) -> Tri {
        it.into_iter().fold(Tri::No, Tri::or)
    }
}

/// A signed quantity whose sign decides an inequality, plus the magnitude of
/// the terms it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub value: f64,
    pub scale: f64,
}

impl Margin {
    pub fn new(value: f64, scale: f64) -> Self {
        Self {
            value,
            scale: scale.abs().max(f64::MIN_POSITIVE),
        }
    }

    /// Margin of `lhs > rhs`.
    pub fn gt(lhs: f64, rhs: f64) -> Self {
        Self::new(lhs - rhs, lhs.abs() + rhs.abs())
    }

    /// Margin of a sum of terms being positive.
    pub fn sum(terms: &[f64]) -> Self {
        let value = terms.iter().sum();
        let scale = terms.iter().map(|t| t.abs()).sum();
        Self::new(value, scale)
    }

    pub fn neg(self) -> Self {
        Self::new(-self.value, self.scale)
    }

    /// Strict `value > 0`.
    pub fn positive(self, tol: f64) -> Tri {
        let band = tol * self.scale;
        if self.value > band {
            Tri::Yes
        } else if self.value < -band {
            Tri::No
        } else {
            Tri::Marginal
        }
    }

    /// Strict `value < 0`.
    pub fn negative(self, tol: f64) -> Tri {
        self.neg().positive(tol)
    }

    /// Non-strict `value >= 0`: exact equality is accepted, values just below
    /// zero are marginal.
    pub fn non_negative(self, tol: f64) -> Tri {
        if self.value >= 0.0 {
            Tri::Yes
        } else if self.value >= -tol * self.scale {
            Tri::Marginal
        } else {
            Tri::No
        }
    }

    /// Relative size of the margin, useful for reports.
    pub fn relative(self) -> f64 {
        self.value / self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_logic() {
        use Tri::*;
        assert_eq!(Yes.and(Marginal), Marginal);
        assert_eq!(No.and(Marginal), No);
        assert_eq!(No.or(Marginal), Marginal);
        assert_eq!(Yes.or(Marginal), Yes);
        assert_eq!(Tri::all([Yes, Yes, Yes]), Yes);
        assert_eq!(Tri::any([No, No]), No);
        assert_eq!(Marginal.not(), Marginal);
    }

    #[test]
    fn margins_band() {
        assert_eq!(Margin::gt(1.0, 1.0).positive(1e-9), Tri::Marginal);
        assert_eq!(Margin::gt(1.0 + 1e-12, 1.0).positive(1e-9), Tri::Marginal);
        assert_eq!(Margin::gt(1.1, 1.0).positive(1e-9), Tri::Yes);
        assert_eq!(Margin::gt(0.9, 1.0).positive(1e-9), Tri::No);
        assert_eq!(Margin::new(0.0, 1.0).non_negative(1e-9), Tri::Yes);
        assert_eq!(Margin::new(-1e-12, 1.0).non_negative(1e-9), Tri::Marginal);
        assert_eq!(Margin::new(-1.0, 1.0).non_negative(1e-9), Tri::No);
    }
}
