//! Bound-check results shared by the verification routines.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Slack allowed on the log scale when comparing a measured quantity to a bound.
pub const LOG_TOLERANCE: f64 = 1e-6;

/// Which inequality a [`BoundReport`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundId {
    /// Power-pair sum against `d(q) q^(1/2) gcd(a,b,q)^(1/2)`.
    Lemma21,
    /// Geometric digit sum against `k exp(-4 gcd(h,q)^2 / q^2)`.
    Lemma22,
    /// `|S_L(c)|` against the `Theta_c` contraction bound.
    Lemma31,
    /// `|S_L(c)|` against `exp(-(L-5) gcd(c,q)^2 / q^2)` decay.
    Lemma32,
    Prop41,
    Prop42,
    Cor45,
    Cor46,
}

impl BoundId {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Lemma21 => "lemma21",
            BoundId::Lemma22 => "lemma22",
            BoundId::Lemma31 => "lemma31",
            BoundId::Lemma32 => "lemma32",
            BoundId::Prop41 => "prop41",
            BoundId::Prop42 => "prop42",
            BoundId::Cor45 => "cor45",
            BoundId::Cor46 => "cor46",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named parameter attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Real(f64),
    /// Big integers travel as decimal strings.
    Big(String),
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Int(v)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        i64::try_from(v).map_or_else(|_| Param::Big(v.to_string()), Param::Int)
    }
}

impl From<u32> for Param {
    fn from(v: u32) -> Self {
        Param::Int(v as i64)
    }
}

impl From<usize> for Param {
    fn from(v: usize) -> Self {
        Param::from(v as u64)
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Real(v)
    }
}

impl From<&num_bigint::BigUint> for Param {
    fn from(v: &num_bigint::BigUint) -> Self {
        Param::Big(v.to_string())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Real(v) => write!(f, "{v}"),
            Param::Big(v) => f.write_str(v),
        }
    }
}

/// One bound check with both sides on the natural-log scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub params: BTreeMap<String, Param>,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub satisfied: bool,
    pub slack_log: f64,
}

impl BoundReport {
    pub fn new(bound_id: BoundId, lhs_log: f64, rhs_log: f64) -> Self {
        BoundReport {
            bound_id,
            params: BTreeMap::new(),
            lhs_log,
            rhs_log,
            satisfied: lhs_log <= rhs_log + LOG_TOLERANCE,
            slack_log: rhs_log - lhs_log,
        }
    }

    /// Builds a report from linear-scale values. A zero left side is always satisfied.
    pub fn from_linear(bound_id: BoundId, lhs: f64, rhs: f64) -> Self {
        Self::new(bound_id, lhs.ln(), rhs.ln())
    }

    pub fn with(mut self, name: &str, value: impl Into<Param>) -> Self {
        self.params.insert(name.to_string(), value.into());
        self
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.get(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn satisfied_uses_log_tolerance() {
        assert!(BoundReport::new(BoundId::Lemma21, 1.0, 1.0).satisfied);
        assert!(BoundReport::new(BoundId::Lemma21, 1.0 + 5e-7, 1.0).satisfied);
        assert!(!BoundReport::new(BoundId::Lemma21, 1.0 + 2e-6, 1.0).satisfied);
        let zero = BoundReport::from_linear(BoundId::Lemma22, 0.0, 0.5);
        assert!(zero.satisfied);
        assert_eq!(zero.lhs_log, f64::NEG_INFINITY);
        assert_eq!(zero.slack_log, f64::INFINITY);
    }

    #[test]
    fn params_render_big_values_as_strings() {
        let r = BoundReport::new(BoundId::Prop41, 0.0, 1.0)
            .with("p", 11u64)
            .with("huge", u64::MAX)
            .with("xi", 0.99);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["params"]["p"], 11);
        assert_eq!(json["params"]["huge"], u64::MAX.to_string());
        assert_eq!(json["bound_id"], "prop41");
    }
}
