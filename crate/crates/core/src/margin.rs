use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Outcome of checking `lhs <= rhs` with ball arithmetic. The check holds
/// unless `rhs - lhs` is certainly negative.
#[derive(Clone, Debug)]
pub struct Margin {
    pub lhs: Real,
    pub rhs: Real,
    pub margin: Real,
    pub holds: bool,
}

impl Margin {
    pub fn le(lhs: Real, rhs: Real) -> Margin {
        let margin = rhs.sub(&lhs);
        let holds = !margin.is_negative();
        Margin { lhs, rhs, margin, holds }
    }

    /// Certified strict inequality `lhs < rhs`.
    pub fn lt(lhs: Real, rhs: Real) -> Margin {
        let margin = rhs.sub(&lhs);
        let holds = margin.is_positive();
        Margin { lhs, rhs, margin, holds }
    }

    /// Checks `|lhs - rhs| <= tol`.
    pub fn close(lhs: Real, rhs: Real, tol: f64) -> Margin {
        let diff = lhs.sub(&rhs).abs();
        let margin = Real::from_f64(tol, diff.precision()).sub(&diff);
        let holds = !margin.is_negative();
        Margin { lhs, rhs, margin, holds }
    }

    pub fn error(&self) -> f64 {
        self.margin.rad_f64()
    }

    pub fn summary(&self) -> MarginSummary {
        MarginSummary {
            lhs: self.lhs.to_decimal(25),
            rhs: self.rhs.to_decimal(25),
            margin: self.margin.to_decimal(25),
            error: self.margin.radius_decimal(),
            holds: self.holds,
        }
    }
}

/// Decimal rendering of a [`Margin`] for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginSummary {
    pub lhs: String,
    pub rhs: String,
    pub margin: String,
    pub error: String,
    pub holds: bool,
}
