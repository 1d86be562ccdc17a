//! The record every experiment emits: an exact left-hand side, the bound it
//! is compared against, and the ratio between them.

use serde::Serialize;

/// Slack added to floating-point right-hand sides that carry a square root,
/// so rounding can never turn a true inequality into a failure.
pub const SQRT_GUARD: f64 = 1.0 / (1u64 << 20) as f64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub p: u64,
    pub quantity: String,
    /// Exact left-hand side.
    pub value: i128,
    pub rhs: f64,
    /// value / rhs; 0 when both vanish.
    pub ratio: f64,
    /// Present only for inequalities that hold with constant 1. Absent for
    /// asymptotic bounds whose implied constant is unknown.
    pub pass: Option<bool>,
    pub tag: String,
    /// `key=value` pairs joined by `;`.
    pub params: String,
}

impl BoundCheck {
    /// A report-only row.
    pub fn report(p: u64, quantity: &str, value: i128, rhs: f64, tag: &str) -> Self {
        let ratio = if rhs == 0.0 && value == 0 {
            0.0
        } else {
            value as f64 / rhs
        };
        Self {
            p,
            quantity: quantity.to_string(),
            value,
            rhs,
            ratio,
            pass: None,
            tag: tag.to_string(),
            params: String::new(),
        }
    }

    /// A theorem-backed row asserting `value <= rhs`.
    pub fn upper(p: u64, quantity: &str, value: i128, rhs: f64, tag: &str) -> Self {
        let mut check = Self::report(p, quantity, value, rhs, tag);
        check.pass = Some(value as f64 <= rhs);
        check
    }

    /// Overrides the pass flag with an exactly computed verdict.
    pub fn with_exact_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn with_params(mut self, params: impl Into<String>) -> Self {
        self.params = params.into();
        self
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

/// Shortest round-trip decimal form, used everywhere a float is written out.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_reproduces_value() {
        for (v, r) in [(1i128, 4.4), (123456789, 0.3), (7, 7.0), (0, 2.5)] {
            let c = BoundCheck::report(7, "q", v, r, "t");
            let back = c.ratio * c.rhs;
            assert!((back - v as f64).abs() <= 1e-12 * (v as f64).abs().max(1.0));
        }
        assert_eq!(BoundCheck::report(7, "q", 0, 0.0, "t").ratio, 0.0);
    }

    #[test]
    fn pass_flags() {
        assert_eq!(BoundCheck::upper(7, "q", 3, 3.0, "t").pass, Some(true));
        assert!(BoundCheck::upper(7, "q", 4, 3.5, "t").failed());
        assert_eq!(BoundCheck::report(7, "q", 4, 3.5, "t").pass, None);
    }
}
